//! Electrical circuit models of the two-winding transformer and their
//! frequency-domain behavior.
//!
//! Three equivalent descriptions are supported:
//!
//! - coupled inductors (self and mutual inductances),
//! - split leakage: per-side leakage terms plus a primary-side
//!   magnetizing branch behind a turns-based ideal transformer,
//! - integrated leakage: a single stator-side leakage term, a magnetizing
//!   branch, and the exact transformer ratio.
//!
//! All three produce identical rotor-to-stator voltage transfer for any
//! load; the conversions here are exact, so the Bode curves coincide to
//! rounding error. The integrated model's ratio `n` differs from the
//! turn-number ratio whenever leakage is not negligible against
//! magnetization, which is what the adjusted-ratio computation corrects.

use crate::geometry::WindingSpec;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("transfer function is 0/0 at DC when the stator resistance is zero")]
    SingularAtDC,
    #[error("computed magnetizing inductance {l_m} exceeds self-inductance {l_ss}; coupling data corrupt")]
    NegativeLeakage { l_ss: f64, l_m: f64 },
    #[error("invalid circuit parameters: {0}")]
    InvalidParams(String),
}

/// Coupled-inductor description: self inductances, symmetric mutual, and
/// winding resistances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    /// Stator self-inductance (H).
    pub l_ss: f64,
    /// Rotor self-inductance (H).
    pub l_rr: f64,
    /// Mutual inductance (H).
    pub m: f64,
    /// Stator winding resistance (Ω).
    pub r_s: f64,
    /// Rotor winding resistance (Ω).
    pub r_r: f64,
}

impl CouplingParams {
    pub fn new(l_ss: f64, l_rr: f64, m: f64, r_s: f64, r_r: f64) -> Result<Self, CircuitError> {
        if !(l_ss > 0.0) || !(l_rr > 0.0) {
            return Err(CircuitError::InvalidParams(format!(
                "self-inductances must be positive (l_ss = {l_ss}, l_rr = {l_rr})"
            )));
        }
        if !(0.0..=(l_ss * l_rr).sqrt() * (1.0 + 1e-12)).contains(&m) {
            return Err(CircuitError::InvalidParams(format!(
                "mutual inductance {m} outside [0, sqrt(l_ss*l_rr)]"
            )));
        }
        if r_s < 0.0 || r_r < 0.0 {
            return Err(CircuitError::InvalidParams(format!(
                "winding resistances must be nonnegative (r_s = {r_s}, r_r = {r_r})"
            )));
        }
        Ok(Self { l_ss, l_rr, m, r_s, r_r })
    }

    /// Stator-side series inductance l_s = l_ss − m of the T-equivalent.
    pub fn l_s(&self) -> f64 {
        self.l_ss - self.m
    }

    /// Rotor-side series inductance l_r = l_rr − m of the T-equivalent.
    pub fn l_r(&self) -> f64 {
        self.l_rr - self.m
    }
}

/// Split-leakage description: leakage per side, primary-referred
/// magnetizing branch, turns-based ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitLeakageParams {
    /// Stator leakage inductance (H).
    pub l_ls1: f64,
    /// Rotor leakage inductance, rotor side (H).
    pub l_lr1: f64,
    /// Magnetizing inductance on the primary side (H).
    pub l_m1: f64,
    /// Transformer ratio √(l_ss/l_rr).
    pub n1: f64,
    pub r_s: f64,
    pub r_r: f64,
}

/// Integrated-leakage description: all leakage lumped on the stator side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratedLeakageParams {
    /// Integrated stator-side leakage inductance (H).
    pub l_l: f64,
    /// Magnetizing inductance (H).
    pub l_m: f64,
    /// Exact transformer ratio.
    pub n: f64,
    pub r_s: f64,
    pub r_r: f64,
}

impl IntegratedLeakageParams {
    /// Rebuilds the coupled-inductor matrix (l_ss, m, l_rr) implied by this
    /// model.
    pub fn inductance_matrix(&self) -> (f64, f64, f64) {
        let l_ss = self.l_l + self.l_m;
        let m = self.l_m / self.n;
        let l_rr = self.l_m / (self.n * self.n);
        (l_ss, m, l_rr)
    }

    /// Equivalent coupled-inductor parameters.
    pub fn to_coupling(&self) -> Result<CouplingParams, CircuitError> {
        let (l_ss, m, l_rr) = self.inductance_matrix();
        CouplingParams::new(l_ss, l_rr, m, self.r_s, self.r_r)
    }
}

/// Load seen from the rotor terminals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoadImpedance {
    /// No load: the z_l → ∞ limit, taken algebraically.
    OpenCircuit,
    /// Pure resistance (Ω).
    Resistive { r: f64 },
    /// Resistance in series with an inductance.
    SeriesRl { r: f64, l: f64 },
    /// Resistance in parallel with an inductance (the usual equivalent
    /// for a resolver excitation winding).
    ParallelRl { r: f64, l: f64 },
}

impl LoadImpedance {
    /// Complex impedance at angular frequency ω, or `None` for no-load.
    pub fn impedance(&self, omega: f64) -> Option<Complex64> {
        match *self {
            LoadImpedance::OpenCircuit => None,
            LoadImpedance::Resistive { r } => Some(Complex64::new(r, 0.0)),
            LoadImpedance::SeriesRl { r, l } => Some(Complex64::new(r, omega * l)),
            LoadImpedance::ParallelRl { r, l } => {
                let zl = Complex64::new(0.0, omega * l);
                let zr = Complex64::new(r, 0.0);
                let denom = zl + zr;
                if denom.norm() == 0.0 {
                    Some(Complex64::new(0.0, 0.0))
                } else {
                    Some(zl * zr / denom)
                }
            }
        }
    }
}

/// Sampled complex voltage gain H(jω) over a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    /// Sample frequencies (Hz), strictly increasing and positive.
    pub freqs: Vec<f64>,
    /// Complex gains, one per frequency.
    pub gains: Vec<Complex64>,
    /// Indices where evaluation was singular; the stored gain there is
    /// zero and must not be interpreted.
    pub flagged: Vec<usize>,
}

impl FrequencyResponse {
    /// Gain magnitudes, 20·log10|H| (dB).
    pub fn magnitude_db(&self) -> Vec<f64> {
        self.gains.iter().map(|h| 20.0 * h.norm().log10()).collect()
    }

    /// Phase in degrees, unwrapped by nearest-branch continuation along
    /// the grid.
    pub fn phase_deg(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.gains.len());
        let mut prev = 0.0_f64;
        for (i, h) in self.gains.iter().enumerate() {
            let mut phi = h.arg();
            if i > 0 {
                while phi - prev > std::f64::consts::PI {
                    phi -= 2.0 * std::f64::consts::PI;
                }
                while prev - phi > std::f64::consts::PI {
                    phi += 2.0 * std::f64::consts::PI;
                }
            }
            prev = phi;
            out.push(phi.to_degrees());
        }
        out
    }
}

/// Coupling coefficient k = m/√(l_ss·l_rr).
pub fn coupling_coefficient(p: &CouplingParams) -> f64 {
    p.m / (p.l_ss * p.l_rr).sqrt()
}

/// Split-leakage parameters equivalent to the given coupled-inductor set.
pub fn to_model_ii(p: &CouplingParams) -> SplitLeakageParams {
    let k = coupling_coefficient(p);
    SplitLeakageParams {
        l_ls1: (1.0 - k) * p.l_ss,
        l_lr1: (1.0 - k) * p.l_rr,
        l_m1: k * p.l_ss,
        n1: (p.l_ss / p.l_rr).sqrt(),
        r_s: p.r_s,
        r_r: p.r_r,
    }
}

/// Integrated-leakage parameters equivalent to the given coupled-inductor
/// set: n = m/l_rr, l_m = n·m, l_l = l_ss − l_m.
pub fn to_model_iii(p: &CouplingParams) -> Result<IntegratedLeakageParams, CircuitError> {
    let n = p.m / p.l_rr;
    let l_m = n * p.m;
    let l_l = p.l_ss - l_m;
    if l_l < -1e-12 * p.l_ss {
        return Err(CircuitError::NegativeLeakage { l_ss: p.l_ss, l_m });
    }
    Ok(IntegratedLeakageParams { l_l: l_l.max(0.0), l_m, n, r_s: p.r_s, r_r: p.r_r })
}

/// Exact transformer ratio of the integrated-leakage model,
/// n = k·√(l_ss/l_rr) = m/l_rr.
pub fn exact_ratio(p: &CouplingParams) -> f64 {
    coupling_coefficient(p) * (p.l_ss / p.l_rr).sqrt()
}

/// Adjusted transformer ratio √(l_m/(l_m + l_l))·(N_s/N_r): corrects the
/// turn-number ratio for non-negligible leakage.
pub fn adjusted_ratio(l_m: f64, l_l: f64, turn_ratio: f64) -> f64 {
    (l_m / (l_m + l_l)).sqrt() * turn_ratio
}

/// Builds the integrated-leakage model from reluctance-network inductances,
/// using the adjusted ratio. Winding resistances are carried over.
pub fn from_mec(
    l_m: f64,
    l_l: f64,
    winding: &WindingSpec,
    turn_ratio: f64,
) -> Result<IntegratedLeakageParams, CircuitError> {
    if !(l_m > 0.0) {
        return Err(CircuitError::InvalidParams(format!(
            "magnetizing inductance must be positive (got {l_m})"
        )));
    }
    if l_l < 0.0 {
        return Err(CircuitError::InvalidParams(format!(
            "leakage inductance must be nonnegative (got {l_l})"
        )));
    }
    Ok(IntegratedLeakageParams {
        l_l,
        l_m,
        n: adjusted_ratio(l_m, l_l, turn_ratio),
        r_s: winding.r_s,
        r_r: winding.r_r,
    })
}

fn jomega(f: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * std::f64::consts::PI * f)
}

fn dc_result(r_s: f64) -> Result<Complex64, CircuitError> {
    if r_s > 0.0 {
        Ok(Complex64::new(0.0, 0.0))
    } else {
        Err(CircuitError::SingularAtDC)
    }
}

/// Rotor-to-stator voltage gain of the coupled-inductor model at
/// frequency `f` (Hz).
pub fn transfer_model_i(
    p: &CouplingParams,
    load: &LoadImpedance,
    f: f64,
) -> Result<Complex64, CircuitError> {
    if f == 0.0 {
        return dc_result(p.r_s);
    }
    let s = jomega(f);
    let (l_s, l_r, m) = (p.l_s(), p.l_r(), p.m);
    match load.impedance(s.im) {
        None => {
            // z_l → ∞: divide through by z_l.
            Ok(m * s / (p.l_ss * s + p.r_s))
        }
        Some(z_l) => {
            let num = m * z_l * s;
            let den = (l_s * (m + l_r) + m * l_r) * s * s
                + (p.r_s * (m + l_r) + (m + l_s) * (z_l + p.r_r)) * s
                + p.r_s * (z_l + p.r_r);
            if den.norm() == 0.0 {
                return Err(CircuitError::SingularAtDC);
            }
            Ok(num / den)
        }
    }
}

/// Rotor-to-stator voltage gain of the split-leakage model.
pub fn transfer_model_ii(
    p: &SplitLeakageParams,
    load: &LoadImpedance,
    f: f64,
) -> Result<Complex64, CircuitError> {
    if f == 0.0 {
        return dc_result(p.r_s);
    }
    let s = jomega(f);
    let n1_sq = p.n1 * p.n1;
    let l_lr_ref = n1_sq * p.l_lr1;
    let r_r_ref = n1_sq * p.r_r;
    match load.impedance(s.im) {
        None => Ok((p.l_m1 * s / p.n1) / ((p.l_m1 + p.l_ls1) * s + p.r_s)),
        Some(z_l) => {
            let z_l_ref = n1_sq * z_l;
            let num = p.l_m1 * z_l_ref * s / p.n1;
            let den = (p.l_ls1 * (p.l_m1 + l_lr_ref) + p.l_m1 * l_lr_ref) * s * s
                + (p.r_s * (p.l_m1 + l_lr_ref) + (p.l_m1 + p.l_ls1) * (z_l_ref + r_r_ref)) * s
                + p.r_s * (z_l_ref + r_r_ref);
            if den.norm() == 0.0 {
                return Err(CircuitError::SingularAtDC);
            }
            Ok(num / den)
        }
    }
}

/// Rotor-to-stator voltage gain of the integrated-leakage model.
pub fn transfer_model_iii(
    p: &IntegratedLeakageParams,
    load: &LoadImpedance,
    f: f64,
) -> Result<Complex64, CircuitError> {
    if f == 0.0 {
        return dc_result(p.r_s);
    }
    let s = jomega(f);
    let n_sq = p.n * p.n;
    let r_r_ref = n_sq * p.r_r;
    match load.impedance(s.im) {
        None => Ok((p.l_m * s / p.n) / ((p.l_m + p.l_l) * s + p.r_s)),
        Some(z_l) => {
            let z_l_ref = n_sq * z_l;
            let num = p.l_m * z_l_ref * s / p.n;
            let den = p.l_l * p.l_m * s * s
                + (p.r_s * p.l_m + (p.l_m + p.l_l) * (z_l_ref + r_r_ref)) * s
                + p.r_s * (z_l_ref + r_r_ref);
            if den.norm() == 0.0 {
                return Err(CircuitError::SingularAtDC);
            }
            Ok(num / den)
        }
    }
}

/// A circuit model paired with its parameters, for grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircuitModel {
    Coupling(CouplingParams),
    SplitLeakage(SplitLeakageParams),
    IntegratedLeakage(IntegratedLeakageParams),
}

impl CircuitModel {
    pub fn transfer(&self, load: &LoadImpedance, f: f64) -> Result<Complex64, CircuitError> {
        match self {
            CircuitModel::Coupling(p) => transfer_model_i(p, load, f),
            CircuitModel::SplitLeakage(p) => transfer_model_ii(p, load, f),
            CircuitModel::IntegratedLeakage(p) => transfer_model_iii(p, load, f),
        }
    }
}

/// Logarithmically spaced frequency grid over [f_min, f_max].
pub fn log_grid(f_min: f64, f_max: f64, n_points: usize) -> Vec<f64> {
    if n_points <= 1 {
        return vec![f_min];
    }
    let ratio = f_max / f_min;
    (0..n_points)
        .map(|j| f_min * ratio.powf(j as f64 / (n_points - 1) as f64))
        .collect()
}

/// Samples a transfer function over a frequency grid.
///
/// The grid must be strictly increasing and positive. A singular sample is
/// recorded in `flagged` (its gain slot holds zero) instead of producing a
/// NaN.
pub fn bode_sample(
    model: &CircuitModel,
    load: &LoadImpedance,
    f_grid: &[f64],
) -> Result<FrequencyResponse, CircuitError> {
    if f_grid.is_empty() {
        return Err(CircuitError::InvalidParams("empty frequency grid".into()));
    }
    for w in f_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(CircuitError::InvalidParams(
                "frequency grid must be strictly increasing".into(),
            ));
        }
    }
    if f_grid[0] <= 0.0 {
        return Err(CircuitError::InvalidParams("frequencies must be positive".into()));
    }

    let mut gains = Vec::with_capacity(f_grid.len());
    let mut flagged = Vec::new();
    for (i, &f) in f_grid.iter().enumerate() {
        match model.transfer(load, f) {
            Ok(h) => gains.push(h),
            Err(_) => {
                flagged.push(i);
                gains.push(Complex64::new(0.0, 0.0));
            }
        }
    }
    Ok(FrequencyResponse { freqs: f_grid.to_vec(), gains, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn table_small(r_s: f64, r_r: f64) -> CouplingParams {
        CouplingParams::new(3.322e-3, 3.348e-3, 2.968e-3, r_s, r_r).unwrap()
    }

    pub(crate) fn table_large() -> CouplingParams {
        CouplingParams::new(4.693, 4.695, 4.625, 0.0, 0.0).unwrap()
    }

    fn rel_dev(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn coupling_coefficient_reference_and_limits() {
        let p = table_small(0.0, 0.0);
        assert_relative_eq!(coupling_coefficient(&p), 0.8899617839, max_relative = 1e-9);

        let perfect = CouplingParams::new(2e-3, 8e-3, 4e-3, 0.0, 0.0).unwrap();
        assert_relative_eq!(coupling_coefficient(&perfect), 1.0, max_relative = 1e-12);

        let uncoupled = CouplingParams::new(2e-3, 8e-3, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(coupling_coefficient(&uncoupled), 0.0);
    }

    #[test]
    fn split_leakage_conversion_reference_values() {
        let m2 = to_model_ii(&table_small(0.0, 0.0));
        assert_relative_eq!(m2.n1, 0.9961096, max_relative = 1e-6);
        assert_relative_eq!(m2.l_m1, 2.9565e-3, max_relative = 1e-4);

        let k1 = CouplingParams::new(2e-3, 8e-3, 4e-3, 0.0, 0.0).unwrap();
        let m2 = to_model_ii(&k1);
        assert_relative_eq!(m2.l_ls1, 0.0, epsilon = 1e-18);
        assert_relative_eq!(m2.l_lr1, 0.0, epsilon = 1e-18);
        assert_relative_eq!(m2.l_m1, k1.l_ss, max_relative = 1e-12);

        let sym = CouplingParams::new(3e-3, 3e-3, 2e-3, 0.0, 0.0).unwrap();
        assert_eq!(to_model_ii(&sym).n1, 1.0);
    }

    #[test]
    fn integrated_leakage_conversion_reference_values() {
        let m3 = to_model_iii(&table_small(0.0, 0.0)).unwrap();
        assert_relative_eq!(m3.n, 0.8864994026, max_relative = 1e-9);
        assert_relative_eq!(m3.l_m, 2.6311302270e-3, max_relative = 1e-9);
        assert_relative_eq!(m3.l_l, 6.9086977300e-4, max_relative = 1e-8);

        let m3 = to_model_iii(&table_large()).unwrap();
        assert_relative_eq!(m3.n, 0.9850905218, max_relative = 1e-9);
        assert_relative_eq!(m3.l_m, 4.5560436635, max_relative = 1e-9);
        assert_relative_eq!(m3.l_l, 0.1369563365, max_relative = 1e-8);
    }

    #[test]
    fn integrated_leakage_perfect_coupling_limit() {
        let p = CouplingParams::new(2e-3, 8e-3, 4e-3, 0.0, 0.0).unwrap();
        let m3 = to_model_iii(&p).unwrap();
        assert!(m3.l_l.abs() < 1e-18);
        assert_relative_eq!(m3.n, (p.l_ss / p.l_rr).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn integrated_leakage_rejects_overcoupled_input() {
        // Bypass the constructor to emulate corrupted data with k > 1.
        let p = CouplingParams { l_ss: 1e-3, l_rr: 1e-3, m: 1.2e-3, r_s: 0.0, r_r: 0.0 };
        assert!(matches!(to_model_iii(&p), Err(CircuitError::NegativeLeakage { .. })));
    }

    #[test]
    fn exact_ratio_table_columns() {
        let c05 = CouplingParams::new(830.567e-6, 3.348e-3, 1.484e-3, 0.0, 0.0).unwrap();
        let c10 = table_small(0.0, 0.0);
        let c20 = CouplingParams::new(3.322e-3, 836.943e-6, 1.484e-3, 0.0, 0.0).unwrap();
        assert_relative_eq!(exact_ratio(&c05), 0.443, max_relative = 1e-3);
        assert_relative_eq!(exact_ratio(&c10), 0.887, max_relative = 1e-3);
        assert_relative_eq!(exact_ratio(&c20), 1.773, max_relative = 1e-3);

        let ident = CouplingParams::new(1e-3, 1e-3, 1e-3, 0.0, 0.0).unwrap();
        assert_relative_eq!(exact_ratio(&ident), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn exact_ratio_equals_k_times_turns_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let l_ss = rng.gen_range(1e-4..1.0);
            let l_rr = rng.gen_range(1e-4..1.0);
            let k = rng.gen_range(0.01..0.999);
            let m = k * (l_ss * l_rr).sqrt();
            let p = CouplingParams::new(l_ss, l_rr, m, 0.0, 0.0).unwrap();
            assert_relative_eq!(
                exact_ratio(&p),
                coupling_coefficient(&p) * (l_ss / l_rr).sqrt(),
                max_relative = 1e-12
            );
            assert_relative_eq!(exact_ratio(&p), to_model_iii(&p).unwrap().n, max_relative = 1e-12);
        }
    }

    #[test]
    fn adjusted_ratio_reference_values() {
        let (l_m, l_l) = (2.631e-3, 0.6915e-3);
        assert_relative_eq!(adjusted_ratio(l_m, l_l, 1.0), 0.8898727938, max_relative = 1e-9);
        assert_relative_eq!(adjusted_ratio(l_m, l_l, 0.5), 0.445, max_relative = 2e-4);
        assert_relative_eq!(adjusted_ratio(l_m, l_l, 2.0), 1.780, max_relative = 2e-4);
        assert_eq!(adjusted_ratio(l_m, 0.0, 0.75), 0.75);
    }

    #[test]
    fn adjusted_ratio_equals_exact_ratio_for_consistent_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let l_ss = rng.gen_range(1e-4..1.0);
            let l_rr = rng.gen_range(1e-4..1.0);
            let k = rng.gen_range(0.05..0.999);
            let m = k * (l_ss * l_rr).sqrt();
            let p = CouplingParams::new(l_ss, l_rr, m, 0.0, 0.0).unwrap();
            let m3 = to_model_iii(&p).unwrap();
            let adjusted = adjusted_ratio(m3.l_m, m3.l_l, (l_ss / l_rr).sqrt());
            assert_relative_eq!(adjusted, exact_ratio(&p), max_relative = 1e-12);
        }
    }

    #[test]
    fn model_iii_roundtrips_through_inductance_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let l_ss = rng.gen_range(1e-4..1.0);
            let l_rr = rng.gen_range(1e-4..1.0);
            let k = rng.gen_range(0.05..0.999);
            let m = k * (l_ss * l_rr).sqrt();
            let p = CouplingParams::new(l_ss, l_rr, m, 0.1, 0.2).unwrap();
            let (l_ss2, m2, l_rr2) = to_model_iii(&p).unwrap().inductance_matrix();
            assert_relative_eq!(l_ss2, l_ss, max_relative = 1e-12);
            assert_relative_eq!(m2, m, max_relative = 1e-12);
            assert_relative_eq!(l_rr2, l_rr, max_relative = 1e-12);
        }
    }

    #[test]
    fn transfer_model_i_agrees_with_mesh_solve() {
        // Oracle: solve the phasor mesh equations
        //   v_s = (r_s + s l_ss) i_s + s m i_r
        //   0   = s m i_s + (r_r + s l_rr + z_l) i_r,   v_r = -z_l i_r
        // directly by Cramer's rule.
        let p = table_small(1.0, 1.0);
        let load = LoadImpedance::Resistive { r: 10.0 };
        for f in [4.0e3, 50.0, 1.0e6] {
            let s = Complex64::new(0.0, 2.0 * std::f64::consts::PI * f);
            let z_l = load.impedance(s.im).unwrap();
            let a11 = p.r_s + s * p.l_ss;
            let a12 = s * p.m;
            let a21 = s * p.m;
            let a22 = p.r_r + s * p.l_rr + z_l;
            let det = a11 * a22 - a12 * a21;
            let i_r = -a21 / det; // v_s = 1
            let oracle = -z_l * i_r;

            let h = transfer_model_i(&p, &load, f).unwrap();
            assert!(rel_dev(h, oracle) < 1e-12, "deviation {}", rel_dev(h, oracle));
        }
    }

    #[test]
    fn transfer_model_i_denominator_factorization_identity() {
        let p = table_small(1.3, 0.7);
        let load = LoadImpedance::Resistive { r: 10.0 };
        for f in log_grid(10.0, 1e6, 50) {
            let s = Complex64::new(0.0, 2.0 * std::f64::consts::PI * f);
            let z_l = load.impedance(s.im).unwrap();
            let factored = (p.l_s() * (p.m + p.l_r()) + p.m * p.l_r()) * s * s
                + (p.r_s * (p.m + p.l_r()) + (p.m + p.l_s()) * (z_l + p.r_r)) * s
                + p.r_s * (z_l + p.r_r);
            let expanded = (p.l_ss * p.l_rr - p.m * p.m) * s * s
                + (p.r_s * p.l_rr + p.l_ss * (z_l + p.r_r)) * s
                + p.r_s * (z_l + p.r_r);
            assert!(rel_dev(factored, expanded) < 1e-12);
        }
    }

    #[test]
    fn transfer_model_i_low_frequency_rolloff_and_no_coupling() {
        let p = table_small(1.0, 0.0);
        let load = LoadImpedance::Resistive { r: 10.0 };
        let lo = transfer_model_i(&p, &load, 1e-3).unwrap().norm();
        let mid = transfer_model_i(&p, &load, 100.0).unwrap().norm();
        assert!(lo < 1e-3 * mid);

        let uncoupled = CouplingParams::new(3.322e-3, 3.348e-3, 0.0, 1.0, 1.0).unwrap();
        for f in [10.0, 1e3, 1e6] {
            assert_eq!(transfer_model_i(&uncoupled, &load, f).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn dc_evaluation_contract() {
        let load = LoadImpedance::Resistive { r: 10.0 };
        let lossless = table_small(0.0, 0.0);
        assert!(matches!(
            transfer_model_i(&lossless, &load, 0.0),
            Err(CircuitError::SingularAtDC)
        ));
        let lossy = table_small(1.0, 0.0);
        assert_eq!(transfer_model_i(&lossy, &load, 0.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn three_models_agree_pointwise() {
        let p = table_small(0.0, 0.0);
        let m2 = to_model_ii(&p);
        let m3 = to_model_iii(&p).unwrap();
        let load = LoadImpedance::Resistive { r: 10.0 };
        for f in log_grid(10.0, 1.0e6, 200) {
            let h1 = transfer_model_i(&p, &load, f).unwrap();
            let h2 = transfer_model_ii(&m2, &load, f).unwrap();
            let h3 = transfer_model_iii(&m3, &load, f).unwrap();
            assert!(rel_dev(h2, h1) < 1e-9, "model ii deviates at {f} Hz");
            assert!(rel_dev(h3, h1) < 1e-9, "model iii deviates at {f} Hz");
        }
    }

    #[test]
    fn three_models_agree_for_random_params_and_loads() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let grid = log_grid(10.0, 1.0e6, 60);
        for _ in 0..50 {
            let l_ss = rng.gen_range(1e-4..1.0);
            let l_rr = rng.gen_range(1e-4..1.0);
            let k = rng.gen_range(0.05..0.999);
            let m = k * (l_ss * l_rr).sqrt();
            let r_s = rng.gen_range(0.0..5.0);
            let r_r = rng.gen_range(0.0..5.0);
            let p = CouplingParams::new(l_ss, l_rr, m, r_s, r_r).unwrap();
            let m2 = to_model_ii(&p);
            let m3 = to_model_iii(&p).unwrap();
            let load = match rng.gen_range(0..4) {
                0 => LoadImpedance::OpenCircuit,
                1 => LoadImpedance::Resistive { r: rng.gen_range(0.1..100.0) },
                2 => LoadImpedance::SeriesRl { r: rng.gen_range(0.1..100.0), l: rng.gen_range(1e-5..1e-2) },
                _ => LoadImpedance::ParallelRl { r: rng.gen_range(0.1..100.0), l: rng.gen_range(1e-5..1e-2) },
            };
            for &f in &grid {
                let h1 = transfer_model_i(&p, &load, f).unwrap();
                let h2 = transfer_model_ii(&m2, &load, f).unwrap();
                let h3 = transfer_model_iii(&m3, &load, f).unwrap();
                assert!(rel_dev(h2, h1) < 1e-9);
                assert!(rel_dev(h3, h1) < 1e-9);
            }
        }
    }

    #[test]
    fn model_ii_unity_ratio_matches_unreferred_evaluation() {
        // With n1 = 1 the referral is a no-op: evaluate the same T-network
        // as a coupled-inductor model.
        let p = CouplingParams::new(3.3e-3, 3.3e-3, 2.9e-3, 0.5, 0.5).unwrap();
        let m2 = to_model_ii(&p);
        assert_eq!(m2.n1, 1.0);
        let load = LoadImpedance::Resistive { r: 10.0 };
        for f in [100.0, 4e3, 1e5] {
            let h1 = transfer_model_i(&p, &load, f).unwrap();
            let h2 = transfer_model_ii(&m2, &load, f).unwrap();
            assert!(rel_dev(h2, h1) < 1e-12);
        }
    }

    #[test]
    fn open_circuit_asymptotes() {
        let p = table_small(0.0, 0.0);
        let m2 = to_model_ii(&p);
        let m3 = to_model_iii(&p).unwrap();
        let expected_ii = (m2.l_m1 / (m2.l_ls1 + m2.l_m1)) / m2.n1;
        let expected_iii = (m3.l_m / (m3.l_m + m3.l_l)) / m3.n;
        for f in [10.0, 1e3, 1e6] {
            let h2 = transfer_model_ii(&m2, &LoadImpedance::OpenCircuit, f).unwrap();
            let h3 = transfer_model_iii(&m3, &LoadImpedance::OpenCircuit, f).unwrap();
            assert_relative_eq!(h2.norm(), expected_ii, max_relative = 1e-12);
            assert_relative_eq!(h3.norm(), expected_iii, max_relative = 1e-12);
        }
    }

    #[test]
    fn model_iii_ideal_transformer_reduction() {
        let p = IntegratedLeakageParams { l_l: 0.0, l_m: 2.6e-3, n: 0.8, r_s: 0.0, r_r: 0.0 };
        for load in [
            LoadImpedance::Resistive { r: 10.0 },
            LoadImpedance::SeriesRl { r: 19.0, l: 2.289e-3 },
        ] {
            for f in [10.0, 4e3, 1e6] {
                let h = transfer_model_iii(&p, &load, f).unwrap();
                assert!(rel_dev(h, Complex64::new(1.0 / p.n, 0.0)) < 1e-12);
            }
        }
    }

    #[test]
    fn gain_invariant_under_common_impedance_scaling() {
        let p = table_small(0.8, 0.4);
        let alpha = 37.5;
        let scaled = CouplingParams::new(
            alpha * p.l_ss,
            alpha * p.l_rr,
            alpha * p.m,
            alpha * p.r_s,
            alpha * p.r_r,
        )
        .unwrap();
        for f in log_grid(10.0, 1e6, 30) {
            let h = transfer_model_i(&p, &LoadImpedance::SeriesRl { r: 10.0, l: 1e-3 }, f).unwrap();
            let h_scaled = transfer_model_i(
                &scaled,
                &LoadImpedance::SeriesRl { r: alpha * 10.0, l: alpha * 1e-3 },
                f,
            )
            .unwrap();
            assert!(rel_dev(h_scaled, h) < 1e-12);
        }
    }

    #[test]
    fn from_mec_composition() {
        let w = WindingSpec::new(99, 99, 0.25, 0.5).unwrap();
        let p = from_mec(2.7799100484e-3, 6.9064372036e-4, &w, 1.0).unwrap();
        assert_relative_eq!(p.n, 0.895, max_relative = 1e-3);
        assert_eq!(p.r_s, 0.25);
        assert_eq!(p.r_r, 0.5);

        let p = from_mec(2.631e-3, 0.0, &w, 0.7).unwrap();
        assert_eq!(p.n, 0.7);

        let p = from_mec(2.631e-3, 0.6915e-3, &w, 2.0).unwrap();
        assert_relative_eq!(p.n, 1.780, max_relative = 2e-4);
    }

    #[test]
    fn default_log_grid_shape() {
        let grid = log_grid(10.0, 1.0e6, 200);
        assert_eq!(grid.len(), 200);
        assert_eq!(grid[0], 10.0);
        assert_relative_eq!(grid[199], 1.0e6, max_relative = 1e-12);
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(log_grid(10.0, 1e6, 1), vec![10.0]);
    }

    #[test]
    fn bode_sample_grid_validation_and_views() {
        let p = CircuitModel::Coupling(table_small(0.0, 0.0));
        let load = LoadImpedance::Resistive { r: 10.0 };
        assert!(bode_sample(&p, &load, &[]).is_err());
        assert!(bode_sample(&p, &load, &[10.0, 10.0]).is_err());
        assert!(bode_sample(&p, &load, &[0.0, 10.0]).is_err());

        let grid = log_grid(10.0, 1e6, 200);
        let resp = bode_sample(&p, &load, &grid).unwrap();
        assert_eq!(resp.freqs.len(), 200);
        assert!(resp.flagged.is_empty());
        let mags = resp.magnitude_db();
        let phases = resp.phase_deg();
        assert_eq!(mags.len(), 200);
        // Unwrapped phase never jumps by more than 180 degrees between
        // adjacent log-spaced samples of these smooth curves.
        for w in phases.windows(2) {
            assert!((w[1] - w[0]).abs() < 180.0);
        }
    }

    #[test]
    fn flat_band_gap_between_exact_and_turn_ratio_curves() {
        // Same leakage/magnetizing split, ratio swapped for the turn-number
        // ratio: the low-frequency plateaus separate by 20·log10(1/n).
        for (params, n_printed, gap_printed) in
            [(table_small(0.0, 0.0), 0.887, 1.04), (table_large(), 0.985, 0.13)]
        {
            let exact = to_model_iii(&params).unwrap();
            let turns = IntegratedLeakageParams { n: 1.0, ..exact };
            let load = LoadImpedance::Resistive { r: 10.0 };
            let f = 10.0;
            let h_exact = transfer_model_iii(&exact, &load, f).unwrap().norm();
            let h_turns = transfer_model_iii(&turns, &load, f).unwrap().norm();
            let gap_db = 20.0 * (h_exact / h_turns).log10();
            let target = 20.0 * (1.0 / n_printed as f64).log10();
            assert!((gap_db - target).abs() < 0.05, "gap {gap_db} vs {target}");
            assert!((gap_db - gap_printed).abs() < 0.05);
        }
    }
}
