//! Closed-form correlation measures for Bell-diagonal states.
//!
//! All entropies are in bits with `0 log 0 = 0`.

use crate::channels::{class_params, evolve, ChannelKind, ChannelSpec};
use crate::error::{Error, Result};
use crate::state::{BellLabel, BellSpectrum, CorrelationVector};

/// Discord values in `(-DISCORD_CLAMP, 0)` are rounded up to zero.
pub const DISCORD_CLAMP: f64 = 1e-12;

/// Horizon of the numerical sudden-death search, in units of `1/γ`.
pub const SUDDEN_DEATH_HORIZON: f64 = 50.0;

/// `x log2 x` with the continuous extension at zero.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Shannon entropy of a probability vector in bits.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter().map(|x| xlog2x(*x)).sum::<f64>()
}

/// Von Neumann entropy of a Bell-diagonal state.
pub fn entropy(spec: &BellSpectrum) -> f64 {
    shannon_entropy(&spec.values())
}

/// `f(χ) = [(1-χ) log2(1-χ) + (1+χ) log2(1+χ)] / 2`, the classical
/// correlations carried by a correlation of magnitude `χ`.
pub fn chi_information(chi: f64) -> f64 {
    let chi = chi.abs();
    0.5 * (xlog2x(1.0 - chi) + xlog2x(1.0 + chi))
}

pub fn mutual_information(state: &CorrelationVector) -> f64 {
    2.0 - entropy(&state.bell_spectrum())
}

pub fn classical_correlations(state: &CorrelationVector) -> f64 {
    chi_information(state.chi())
}

pub fn discord(state: &CorrelationVector) -> f64 {
    let d = mutual_information(state) - classical_correlations(state);
    if d < 0.0 && d > -DISCORD_CLAMP {
        0.0
    } else {
        d
    }
}

/// Mutual information of an evolved transition-class state split into its
/// two terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInfoSplit {
    /// `f(|c(t)|)` of the decaying unit coefficient.
    pub classical_part: f64,
    /// `f(|κ|)`, constant in time.
    pub quantum_part: f64,
    /// Set once `t` exceeds the transition time; from then on the two parts
    /// no longer coincide with classical correlations and discord.
    pub past_transition: bool,
}

/// Splits `I[rho(t)]` for a transition-class initial state.
pub fn mutual_information_split(
    initial: &CorrelationVector,
    ch: &ChannelSpec,
    t: f64,
) -> Result<MutualInfoSplit> {
    let p = class_params(initial, ch.kind()).ok_or(Error::NotInClass(ch.kind().name()))?;
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let t_bar = -p.kappa().abs().ln() / (2.0 * ch.gamma());
    Ok(MutualInfoSplit {
        classical_part: chi_information(ch.decay_factor(t)),
        quantum_part: chi_information(p.kappa()),
        past_transition: t > t_bar,
    })
}

/// Closest classical state: Bell-diagonal with pairwise equal populations,
/// `q/2` on the two most populated Bell states and `(1-q)/2` on the others.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalStateDescriptor {
    pub q: f64,
    pub pair_high: [BellLabel; 2],
    pub pair_low: [BellLabel; 2],
    low_weight: f64,
}

impl ClassicalStateDescriptor {
    pub fn of_spectrum(spec: &BellSpectrum) -> Self {
        let s = spec.sorted();
        Self {
            q: s[0].0 + s[1].0,
            pair_high: [s[0].1, s[1].1],
            pair_low: [s[2].1, s[3].1],
            // Summed directly so that zero populations give exactly zero
            // weight instead of a rounding residue of `1 - q`.
            low_weight: s[2].0 + s[3].0,
        }
    }

    /// Populations of the classical state, in storage order.
    pub fn spectrum(&self) -> BellSpectrum {
        let mut lam = [0.0; 4];
        for l in self.pair_high {
            lam[l.index()] = self.q / 2.0;
        }
        for l in self.pair_low {
            lam[l.index()] = self.low_weight / 2.0;
        }
        BellSpectrum::new(lam).expect("closest classical state is normalised")
    }
}

pub fn closest_classical(state: &CorrelationVector) -> ClassicalStateDescriptor {
    ClassicalStateDescriptor::of_spectrum(&state.bell_spectrum())
}

/// `D(rho || sigma)` for two states diagonal in the Bell basis.
///
/// Returns `f64::INFINITY` when `rho` has weight where `sigma` has none.
pub fn relative_entropy(rho: &BellSpectrum, sigma: &BellSpectrum) -> f64 {
    let mut d = 0.0;
    for (r, s) in rho.values().into_iter().zip(sigma.values()) {
        if r <= 0.0 {
            continue;
        }
        if s <= 0.0 {
            return f64::INFINITY;
        }
        d += r * (r.log2() - s.log2());
    }
    d.max(0.0)
}

/// Relative entropy of entanglement, `1 - h(λ1)` above the separability
/// threshold `λ1 = 1/2` and zero below it.
pub fn entanglement_re(state: &CorrelationVector) -> f64 {
    let l1 = state.bell_spectrum().max();
    if l1 <= 0.5 {
        0.0
    } else {
        1.0 + xlog2x(l1) + xlog2x(1.0 - l1)
    }
}

/// `λ1(t) - 1/2` for the evolved state, written so that no cancellation
/// against the constant `1/2` occurs.
fn entanglement_excess(state: &CorrelationVector, ch: &ChannelSpec, t: f64) -> f64 {
    let c = state.components();
    let p = ch.kind().preserved_axis();
    let e = ch.decay_factor(t);
    BellLabel::ALL
        .iter()
        .map(|label| {
            let s = label.signs();
            let decaying: f64 = ch.kind().decaying_axes().iter().map(|&i| s[i] * c[i]).sum();
            (s[p] * c[p] - 1.0 + e * decaying) / 4.0
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Time after which entanglement is identically zero.
///
/// Transition-class states use the closed form; other states are bisected
/// on `[0, 50/γ]`. `Some(0.0)` for states that start separable, `None` for
/// states entangled over the whole horizon.
pub fn sudden_death_time(state: &CorrelationVector, ch: &ChannelSpec) -> Option<f64> {
    if let Some(p) = class_params(state, ch.kind()) {
        let k = p.kappa().abs();
        return Some(-((1.0 - k) / (1.0 + k)).ln() / (2.0 * ch.gamma()));
    }
    if entanglement_excess(state, ch, 0.0) <= 0.0 {
        return Some(0.0);
    }
    let mut hi = SUDDEN_DEATH_HORIZON / ch.gamma();
    if entanglement_excess(state, ch, hi) > 0.0 {
        return None;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if entanglement_excess(state, ch, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

/// Time at which the largest decaying coefficient drops to the magnitude of
/// the preserved one, `ln(χ_d / χ_p) / (2γ)`.
///
/// For transition-class states this is the sudden transition between
/// classical and quantum decoherence, `-ln|κ| / (2γ)`.
pub fn transition_time(state: &CorrelationVector, ch: &ChannelSpec) -> Option<f64> {
    if let Some(p) = class_params(state, ch.kind()) {
        return Some(-p.kappa().abs().ln() / (2.0 * ch.gamma()));
    }
    let c = state.components();
    let chi_p = c[ch.kind().preserved_axis()].abs();
    let chi_d = ch
        .kind()
        .decaying_axes()
        .iter()
        .map(|&i| c[i].abs())
        .fold(0.0, f64::max);
    (chi_d > chi_p && chi_p > 0.0).then(|| (chi_d / chi_p).ln() / (2.0 * ch.gamma()))
}

/// Populations of the closest separable state, in sorted order:
/// `p1 = 1/2`, `pi = λi / (2 (1 - λ1))`.
fn closest_separable_sorted(spec: &BellSpectrum) -> Result<[(f64, BellLabel); 4]> {
    let s = spec.sorted();
    let rest = s[1].0 + s[2].0 + s[3].0;
    if rest <= f64::EPSILON {
        return Err(Error::PureEntangled);
    }
    let scale = 0.5 / rest;
    Ok([
        (0.5, s[0].1),
        (s[1].0 * scale, s[1].1),
        (s[2].0 * scale, s[2].1),
        (s[3].0 * scale, s[3].1),
    ])
}

/// Dissonance: distance from the closest separable state to its own closest
/// classical state.
///
/// Separable states are their own closest separable state, so the value
/// equals the discord there.
pub fn dissonance(state: &CorrelationVector) -> Result<f64> {
    let spec = state.bell_spectrum();
    if spec.max() <= 0.5 {
        return Ok(discord(state));
    }
    let p = closest_separable_sorted(&spec)?.map(|x| x.0);
    let q = p[0] + p[1];
    let q_low = p[2] + p[3];
    let value = 1.0 + p.iter().map(|x| xlog2x(*x)).sum::<f64>() - xlog2x(q) - xlog2x(q_low);
    Ok(value.max(0.0))
}

/// Dissonance evaluated as an explicit relative entropy between the closest
/// separable state and its closest classical state.
pub fn dissonance_via_relative_entropy(state: &CorrelationVector) -> Result<f64> {
    let spec = state.bell_spectrum();
    let separable = if spec.max() <= 0.5 {
        spec
    } else {
        let mut lam = [0.0; 4];
        for (p, label) in closest_separable_sorted(&spec)? {
            lam[label.index()] = p;
        }
        BellSpectrum::new(lam)?
    };
    let classical = ClassicalStateDescriptor::of_spectrum(&separable).spectrum();
    Ok(relative_entropy(&separable, &classical))
}

/// All correlation measures of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub mutual_info: f64,
    pub classical: f64,
    pub discord: f64,
    pub entanglement: f64,
    /// `None` for pure entangled states.
    pub dissonance: Option<f64>,
}

pub fn full_report(state: &CorrelationVector) -> CorrelationReport {
    let classical = classical_correlations(state);
    let discord = discord(state);
    CorrelationReport {
        mutual_info: classical + discord,
        classical,
        discord,
        entanglement: entanglement_re(state),
        dissonance: dissonance(state).ok(),
    }
}

/// Convenience: correlations of `state` evolved for time `t`.
pub fn report_at(state: &CorrelationVector, ch: &ChannelSpec, t: f64) -> Result<CorrelationReport> {
    Ok(full_report(&evolve(state, ch, t)?))
}

/// Whether the transition-class closed forms apply to `state` under `kind`.
pub fn is_transition_class(state: &CorrelationVector, kind: ChannelKind) -> bool {
    class_params(state, kind).is_some()
}
