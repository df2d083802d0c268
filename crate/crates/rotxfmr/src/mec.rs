//! Magnetic equivalent circuit of the axial rotary transformer.
//!
//! The main flux path runs: stator yoke → outer stator tooth → airgap →
//! outer rotor tooth → rotor yoke → inner rotor tooth → airgap → inner
//! stator tooth → back to the yoke. Each segment contributes a series
//! reluctance; each airgap crossing is the parallel combination of the
//! straight gap tube and two fringing paths (open-air side and
//! window side). Magnetizing inductance follows from the total series
//! reluctance, leakage inductance from a 1-D magnetic-energy integral over
//! the winding windows and the gap.

use crate::geometry::{DerivedDimensions, MaterialSpec, TransformerGeometry, WindingSpec, MU_0};
use thiserror::Error;

/// Fringing-path surface coefficient used in the combined gap-edge
/// reluctance.
pub const FRINGE_COEFF: f64 = 0.26;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MecError {
    #[error("logarithm argument out of domain in {what}")]
    LogDomain { what: String },
    #[error("total reluctance must be positive to define an inductance")]
    ZeroReluctance,
    #[error("axial position z = {z} outside the window span [{lo}, {hi}]")]
    OutOfRange { z: f64, lo: f64, hi: f64 },
}

/// Reluctances of the iron segments (1/H). Index 1 is the inner-radius
/// leg, index 2 the outer-radius leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreReluctances {
    pub r_ys: f64,
    pub r_yr: f64,
    pub r_ts1: f64,
    pub r_ts2: f64,
    pub r_tr1: f64,
    pub r_tr2: f64,
    pub r_cs1: f64,
    pub r_cs2: f64,
    pub r_cr1: f64,
    pub r_cr2: f64,
}

impl CoreReluctances {
    /// Ideal-core limit: every iron segment perfectly permeable.
    pub fn zero() -> Self {
        Self {
            r_ys: 0.0,
            r_yr: 0.0,
            r_ts1: 0.0,
            r_ts2: 0.0,
            r_tr1: 0.0,
            r_tr2: 0.0,
            r_cs1: 0.0,
            r_cs2: 0.0,
            r_cr1: 0.0,
            r_cr2: 0.0,
        }
    }

    pub fn sum(&self) -> f64 {
        self.r_ys
            + self.r_yr
            + self.r_ts1
            + self.r_ts2
            + self.r_tr1
            + self.r_tr2
            + self.r_cs1
            + self.r_cs2
            + self.r_cr1
            + self.r_cr2
    }
}

/// Airgap reluctances per leg (1/H): straight tube `r_gk`, open-air fringe
/// `r_gok`, window-side fringe `r_gik`, and their three-way parallel
/// equivalent `r_geqk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReluctances {
    pub r_g1: f64,
    pub r_g2: f64,
    pub r_go1: f64,
    pub r_gi1: f64,
    pub r_go2: f64,
    pub r_gi2: f64,
    pub r_geq1: f64,
    pub r_geq2: f64,
}

/// Complete series decomposition of the main-path reluctance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReluctanceBreakdown {
    pub core: CoreReluctances,
    pub gap: GapReluctances,
    /// Total series reluctance of the main flux path (1/H).
    pub r_m: f64,
}

impl ReluctanceBreakdown {
    /// Fraction of the main-path reluctance contributed by the airgap
    /// equivalents.
    pub fn gap_share(&self) -> f64 {
        (self.gap.r_geq1 + self.gap.r_geq2) / self.r_m
    }
}

/// Leakage MMF sample at one axial position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageField {
    /// MMF Ψ(z) (A·turns).
    pub psi: f64,
    /// Leakage flux-line length l(z) at this height (m).
    pub path_len: f64,
    pub region: LeakageRegion,
}

/// Axial regions of the leakage-field model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeakageRegion {
    /// Rotor winding window: MMF ramps from zero to full.
    RotorWindow,
    /// Airgap: full MMF, lengthened flux lines.
    Gap,
    /// Stator winding window: MMF ramps back to zero.
    StatorWindow,
}

impl std::fmt::Display for LeakageRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LeakageRegion::RotorWindow => write!(f, "I"),
            LeakageRegion::Gap => write!(f, "II"),
            LeakageRegion::StatorWindow => write!(f, "III"),
        }
    }
}

/// Reluctances of yokes, teeth, and tooth-yoke corners.
///
/// Yokes carry radial flux through cylindrical shells, teeth carry axial
/// flux through annuli, and each tooth-yoke junction contributes one
/// quarter-bend corner term evaluated at the tooth's radius.
pub fn core_reluctances(
    geom: &TransformerGeometry,
    material: &MaterialSpec,
) -> Result<CoreReluctances, MecError> {
    let mu = material.mu();

    let yoke = |r_out: f64, r_in: f64, h_y: f64, what: &str| -> Result<f64, MecError> {
        if r_out <= r_in {
            return Err(MecError::LogDomain { what: what.to_string() });
        }
        Ok((r_out / r_in).ln() / (mu * 2.0 * std::f64::consts::PI * h_y))
    };
    let r_ys = yoke(geom.r_so - geom.w_ts, geom.r_si + geom.w_ts, geom.h_ys, "stator yoke")?;
    let r_yr = yoke(geom.r_ro - geom.w_tr, geom.r_ri + geom.w_tr, geom.h_yr, "rotor yoke")?;

    let annulus = |r_out: f64, r_in: f64| std::f64::consts::PI * (r_out * r_out - r_in * r_in);
    let r_ts1 = geom.h_ws / (mu * annulus(geom.r_si + geom.w_ts, geom.r_si));
    let r_ts2 = geom.h_ws / (mu * annulus(geom.r_so, geom.r_so - geom.w_ts));
    let r_tr1 = geom.h_wr / (mu * annulus(geom.r_ri + geom.w_tr, geom.r_ri));
    let r_tr2 = geom.h_wr / (mu * annulus(geom.r_ro, geom.r_ro - geom.w_tr));

    // Quarter-bend corner at the outer tooth, radial extent [r_o - w_t, r_o].
    let corner_outer = |r_o: f64, w_t: f64| {
        1.0 / (4.0 * mu * ((r_o - w_t) * (r_o / (r_o - w_t)).ln() + w_t))
    };
    // Mirrored quarter-bend at the inner tooth, radial extent [r_i, r_i + w_t].
    let corner_inner = |r_i: f64, w_t: f64| {
        1.0 / (4.0 * mu * ((r_i + w_t) * ((r_i + w_t) / r_i).ln() + w_t))
    };
    let r_cs1 = corner_inner(geom.r_si, geom.w_ts);
    let r_cs2 = corner_outer(geom.r_so, geom.w_ts);
    let r_cr1 = corner_inner(geom.r_ri, geom.w_tr);
    let r_cr2 = corner_outer(geom.r_ro, geom.w_tr);

    Ok(CoreReluctances { r_ys, r_yr, r_ts1, r_ts2, r_tr1, r_tr2, r_cs1, r_cs2, r_cr1, r_cr2 })
}

/// Combined fringe reluctance at one gap edge: the surface path and the
/// half-shell path in parallel, collapsed to a single closed form.
///
/// Returns infinity when the bracket is non-positive (fringe radius inside
/// the lengthened-line region): the path carries no flux rather than a
/// negative reluctance.
fn fringe_reluctance(edge_radius: f64, r_f: f64, g: f64) -> Result<f64, MecError> {
    let half_gap = g / 2.0;
    if r_f <= half_gap || half_gap <= 0.0 {
        return Err(MecError::LogDomain {
            what: format!("fringe reluctance at edge radius {edge_radius}"),
        });
    }
    let bracket = FRINGE_COEFF * std::f64::consts::PI + ((r_f - half_gap) / half_gap).ln();
    if bracket <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (2.0 * MU_0 * edge_radius * bracket))
}

fn parallel3(a: f64, b: f64, c: f64) -> f64 {
    1.0 / (1.0 / a + 1.0 / b + 1.0 / c)
}

/// Airgap reluctances: straight tube plus the two fringing paths per leg.
///
/// The inner leg (index 1) fringes into open air at the inner bore
/// (edge radius `r_si`) and into the winding window at `r_si + w_ts`;
/// the outer leg (index 2) fringes into open air at `r_so` and into the
/// window at `r_so − w_ts`. Open-air paths use the outer fringe radius,
/// window paths the inner one.
pub fn gap_reluctances(
    geom: &TransformerGeometry,
    derived: &DerivedDimensions,
) -> Result<GapReluctances, MecError> {
    let annulus = |r_out: f64, r_in: f64| std::f64::consts::PI * (r_out * r_out - r_in * r_in);
    let r_g1 = geom.g / (MU_0 * annulus(geom.r_ri + geom.w_tr, geom.r_ri));
    let r_g2 = geom.g / (MU_0 * annulus(geom.r_ro, geom.r_ro - geom.w_tr));

    let r_go1 = fringe_reluctance(geom.r_si, derived.r_f_o, geom.g)?;
    let r_gi1 = fringe_reluctance(geom.r_si + geom.w_ts, derived.r_f_i, geom.g)?;
    let r_go2 = fringe_reluctance(geom.r_so, derived.r_f_o, geom.g)?;
    let r_gi2 = fringe_reluctance(geom.r_so - geom.w_ts, derived.r_f_i, geom.g)?;

    let r_geq1 = parallel3(r_gi1, r_g1, r_go1);
    let r_geq2 = parallel3(r_gi2, r_g2, r_go2);

    Ok(GapReluctances { r_g1, r_g2, r_go1, r_gi1, r_go2, r_gi2, r_geq1, r_geq2 })
}

/// Total series reluctance of the main flux path.
pub fn total_reluctance(core: &CoreReluctances, gap: &GapReluctances) -> ReluctanceBreakdown {
    let r_m = core.r_ys
        + core.r_yr
        + core.r_ts1
        + core.r_tr1
        + core.r_cs1
        + core.r_cr1
        + gap.r_geq1
        + core.r_ts2
        + core.r_tr2
        + gap.r_geq2
        + core.r_cs2
        + core.r_cr2;
    ReluctanceBreakdown { core: *core, gap: *gap, r_m }
}

/// Magnetizing inductance l_m = N_s²/R_m (H).
pub fn magnetizing_inductance(
    breakdown: &ReluctanceBreakdown,
    winding: &WindingSpec,
) -> Result<f64, MecError> {
    if !(breakdown.r_m > 0.0) {
        return Err(MecError::ZeroReluctance);
    }
    let n_s = f64::from(winding.n_s);
    Ok(n_s * n_s / breakdown.r_m)
}

/// Leakage MMF Ψ(z) and flux-line length l(z) at axial position z.
///
/// z is absolute (measured from the bottom of the rotor yoke). The MMF
/// rises linearly through the rotor window, holds at N_s·I_s across the
/// gap, and falls linearly back to zero through the stator window.
pub fn leakage_field(
    geom: &TransformerGeometry,
    winding: &WindingSpec,
    i_s: f64,
    z: f64,
) -> Result<LeakageField, MecError> {
    let z0 = geom.h_yr;
    let z1 = z0 + geom.h_wr;
    let z2 = z1 + geom.g;
    let z3 = z2 + geom.h_ws;
    if z < z0 || z > z3 {
        return Err(MecError::OutOfRange { z, lo: z0, hi: z3 });
    }
    let mmf_full = f64::from(winding.n_s) * i_s;
    let (psi, path_len, region) = if z <= z1 {
        (mmf_full * (z - z0) / geom.h_wr, geom.w_ws, LeakageRegion::RotorWindow)
    } else if z <= z2 {
        (
            mmf_full,
            geom.w_ws + std::f64::consts::PI * geom.g / 2.0,
            LeakageRegion::Gap,
        )
    } else {
        (mmf_full * (z3 - z) / geom.h_ws, geom.w_ws, LeakageRegion::StatorWindow)
    };
    Ok(LeakageField { psi, path_len, region })
}

/// Leakage inductance per squared stator turn (H): the closed-form energy
/// integral with N_s = 1.
pub fn leakage_coefficient(geom: &TransformerGeometry) -> f64 {
    MU_0 * std::f64::consts::PI
        * (geom.r_si + geom.r_so)
        * (geom.h_wr / (3.0 * geom.w_ws)
            + geom.h_ws / (3.0 * geom.w_ws)
            + geom.g / (geom.w_ws + std::f64::consts::PI * geom.g / 2.0))
}

/// Leakage inductance referred entirely to the stator side (H), closed
/// form of the magnetic-energy integral over both windows and the gap.
pub fn leakage_inductance(geom: &TransformerGeometry, winding: &WindingSpec) -> f64 {
    let n_s = f64::from(winding.n_s);
    n_s * n_s * leakage_coefficient(geom)
}

/// Leakage inductance by composite-midpoint quadrature of the energy
/// integral, reduced to one dimension over the axial coordinate on the
/// mean-circumference annulus. Serves as the independent check on
/// [`leakage_inductance`].
///
/// `n_quadrature` total sample points are split across the three regions
/// in proportion to their lengths so the piecewise integrand stays smooth
/// within each panel. Requires `n_quadrature >= 100`.
pub fn leakage_inductance_numeric(
    geom: &TransformerGeometry,
    winding: &WindingSpec,
    n_quadrature: usize,
) -> f64 {
    leakage_inductance_numeric_with_current(geom, winding, n_quadrature, 1.0)
}

pub(crate) fn leakage_inductance_numeric_with_current(
    geom: &TransformerGeometry,
    winding: &WindingSpec,
    n_quadrature: usize,
    i_s: f64,
) -> f64 {
    assert!(n_quadrature >= 100, "need at least 100 quadrature points");
    let z0 = geom.h_yr;
    let z1 = z0 + geom.h_wr;
    let z2 = z1 + geom.g;
    let z3 = z2 + geom.h_ws;
    let span = z3 - z0;

    let n_total = n_quadrature as f64;
    let n1 = ((n_total * geom.h_wr / span).round() as usize).max(1);
    let n2 = ((n_total * geom.g / span).round() as usize).max(1);
    let n3 = n_quadrature.saturating_sub(n1 + n2).max(1);

    let mut integral = 0.0;
    for (lo, hi, n) in [(z0, z1, n1), (z1, z2, n2), (z2, z3, n3)] {
        let h = (hi - lo) / n as f64;
        for j in 0..n {
            let z = lo + (j as f64 + 0.5) * h;
            let field = leakage_field(geom, winding, i_s, z)
                .expect("midpoint samples lie inside the window span");
            integral += field.psi * field.psi / field.path_len * h;
        }
    }

    MU_0 * std::f64::consts::PI * (geom.r_si + geom.r_so) * integral / (i_s * i_s)
}
