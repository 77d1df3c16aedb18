//! Small fixed-size complex matrices for one and two qubits.

use nalgebra::{Complex, Matrix2, Matrix4};

pub type C64 = Complex<f64>;
pub type Mat2 = Matrix2<C64>;
pub type Mat4 = Matrix4<C64>;

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrix `σ_j` for `j = 1, 2, 3` (X, Y, Z); `j = 0` is the identity.
pub fn pauli(j: usize) -> Mat2 {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match j {
        0 => Mat2::new(o, z, z, o),
        1 => Mat2::new(z, o, o, z),
        2 => Mat2::new(z, -i, i, z),
        3 => Mat2::new(o, z, z, -o),
        _ => panic!("no Pauli matrix with index {j}"),
    }
}

/// `a ⊗ b` with `a` acting on the most significant qubit.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    Mat4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// `σ_j ⊗ σ_j`.
pub fn pauli_pair(j: usize) -> Mat4 {
    let p = pauli(j);
    kron(&p, &p)
}

/// `op ⊗ 1`.
pub fn on_a(op: &Mat2) -> Mat4 {
    kron(op, &pauli(0))
}

/// `1 ⊗ op`.
pub fn on_b(op: &Mat2) -> Mat4 {
    kron(&pauli(0), op)
}

/// Trace over qubit B of a two-qubit operator.
pub fn partial_trace_b(m: &Mat4) -> Mat2 {
    Mat2::from_fn(|a, a2| m[(2 * a, 2 * a2)] + m[(2 * a + 1, 2 * a2 + 1)])
}

/// Trace over qubit A of a two-qubit operator.
pub fn partial_trace_a(m: &Mat4) -> Mat2 {
    Mat2::from_fn(|b, b2| m[(b, b2)] + m[(2 + b, 2 + b2)])
}

/// Eigenvalues of a 2×2 Hermitian matrix, ascending.
pub fn hermitian_eigenvalues_2(m: &Mat2) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - r, mean + r]
}
