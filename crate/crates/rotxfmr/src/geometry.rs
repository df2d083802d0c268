//! Axial rotary-transformer geometry: dimension set, validation, and the
//! derived quantities (stack height, fringe radii) the reluctance network
//! needs.
//!
//! The stator and rotor are back-to-back annular C-cores. Each side has a
//! yoke, an inner and an outer tooth leg, and a winding window between the
//! legs; the airgap `g` separates the two sides axially. All dimensions are
//! stored in SI meters.

use thiserror::Error;

/// Vacuum permeability, 4π×10⁻⁷ H/m.
pub const MU_0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Relative tolerance for the radial tiling check (teeth + window vs. radial
/// span).
const TILING_REL_TOL: f64 = 1e-9;

/// Geometry invariant violations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension {name} must be strictly positive (got {value})")]
    NonPositiveDimension { name: &'static str, value: f64 },
    #[error("{side} radial span {span} does not match tooth+window+tooth tiling {tiled}")]
    RadialTilingMismatch { side: &'static str, span: f64, tiled: f64 },
    #[error("fringe radius {name} = {value} must exceed g/2 = {limit}")]
    FringeRadiusDegenerate { name: &'static str, value: f64, limit: f64 },
}

/// Full validation outcome: every violated invariant, plus non-fatal
/// warnings (e.g. an airgap comparable to the window heights).
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<GeometryError>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.violations {
            writeln!(f, "error: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// Dimension set of an axial-flux rotary transformer.
///
/// Suffix `s` is the stator side, `r` the rotor side. Units are meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformerGeometry {
    /// Winding-window height, stator (m).
    pub h_ws: f64,
    /// Winding-window height, rotor (m).
    pub h_wr: f64,
    /// Winding-window width, stator (m).
    pub w_ws: f64,
    /// Winding-window width, rotor (m).
    pub w_wr: f64,
    /// Inner core radius, stator (m).
    pub r_si: f64,
    /// Inner core radius, rotor (m).
    pub r_ri: f64,
    /// Outer core radius, stator (m).
    pub r_so: f64,
    /// Outer core radius, rotor (m).
    pub r_ro: f64,
    /// Axial airgap length (m).
    pub g: f64,
    /// Tooth width, stator (m).
    pub w_ts: f64,
    /// Tooth width, rotor (m).
    pub w_tr: f64,
    /// Yoke height, stator (m).
    pub h_ys: f64,
    /// Yoke height, rotor (m).
    pub h_yr: f64,
}

/// Quantities derived from the raw dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedDimensions {
    /// Total axial stack height: h_yr + h_wr + g + h_ws + h_ys (m).
    pub h: f64,
    /// Fringe-flux radius on the open-air side of the gap (m).
    pub r_f_o: f64,
    /// Fringe-flux radius on the winding-window side of the gap (m).
    pub r_f_i: f64,
}

/// Core material: linear, isotropic, described by a relative permeability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialSpec {
    /// Relative permeability of the core.
    pub mu_r: f64,
    /// Vacuum permeability (H/m); kept as a field so tests can probe
    /// scaling, normally [`MU_0`].
    pub mu_0: f64,
}

impl MaterialSpec {
    /// A core with the given relative permeability.
    pub fn new(mu_r: f64) -> Result<Self, GeometryError> {
        if !(mu_r >= 1.0) {
            return Err(GeometryError::NonPositiveDimension { name: "mu_r", value: mu_r });
        }
        Ok(Self { mu_r, mu_0: MU_0 })
    }

    /// Absolute core permeability μ = μ_r μ_0 (H/m).
    pub fn mu(&self) -> f64 {
        self.mu_r * self.mu_0
    }
}

impl Default for MaterialSpec {
    /// MnZn-ferrite-like default, μ_r = 2000.
    fn default() -> Self {
        Self { mu_r: 2000.0, mu_0: MU_0 }
    }
}

/// Winding definition: turn counts and series resistances per side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingSpec {
    /// Stator turns.
    pub n_s: u32,
    /// Rotor turns.
    pub n_r: u32,
    /// Stator winding resistance (Ω).
    pub r_s: f64,
    /// Rotor winding resistance (Ω).
    pub r_r: f64,
}

impl WindingSpec {
    pub fn new(n_s: u32, n_r: u32, r_s: f64, r_r: f64) -> Result<Self, GeometryError> {
        if n_s == 0 {
            return Err(GeometryError::NonPositiveDimension { name: "N_s", value: 0.0 });
        }
        if n_r == 0 {
            return Err(GeometryError::NonPositiveDimension { name: "N_r", value: 0.0 });
        }
        if r_s < 0.0 || !r_s.is_finite() {
            return Err(GeometryError::NonPositiveDimension { name: "r_s", value: r_s });
        }
        if r_r < 0.0 || !r_r.is_finite() {
            return Err(GeometryError::NonPositiveDimension { name: "r_r", value: r_r });
        }
        Ok(Self { n_s, n_r, r_s, r_r })
    }

    /// Turn-number ratio N_s/N_r.
    pub fn turn_ratio(&self) -> f64 {
        f64::from(self.n_s) / f64::from(self.n_r)
    }
}

impl TransformerGeometry {
    /// Checks every invariant and returns the full list of violations, or
    /// `Ok(())` when the geometry is usable. Airgap-vs-window-height
    /// violations are reported as warnings only.
    pub fn validate(&self) -> Result<(), ValidationReport> {
        let mut report = ValidationReport::default();

        let fields: [(&'static str, f64); 13] = [
            ("h_ws", self.h_ws),
            ("h_wr", self.h_wr),
            ("w_ws", self.w_ws),
            ("w_wr", self.w_wr),
            ("r_si", self.r_si),
            ("r_ri", self.r_ri),
            ("r_so", self.r_so),
            ("r_ro", self.r_ro),
            ("g", self.g),
            ("w_ts", self.w_ts),
            ("w_tr", self.w_tr),
            ("h_ys", self.h_ys),
            ("h_yr", self.h_yr),
        ];
        for (name, value) in fields {
            if !(value > 0.0) || !value.is_finite() {
                report
                    .violations
                    .push(GeometryError::NonPositiveDimension { name, value });
            }
        }

        // A winding window must exist radially on each side.
        if self.r_so <= self.r_si + 2.0 * self.w_ts {
            report.violations.push(GeometryError::RadialTilingMismatch {
                side: "stator window",
                span: self.r_so - self.r_si,
                tiled: 2.0 * self.w_ts,
            });
        }
        if self.r_ro <= self.r_ri + 2.0 * self.w_tr {
            report.violations.push(GeometryError::RadialTilingMismatch {
                side: "rotor window",
                span: self.r_ro - self.r_ri,
                tiled: 2.0 * self.w_tr,
            });
        }

        // Teeth and window must tile the radial span on each side.
        let stator_tiled = self.w_ts + self.w_ws + self.w_ts;
        let stator_span = self.r_so - self.r_si;
        if (stator_span - stator_tiled).abs() > TILING_REL_TOL * stator_span.abs().max(1e-30) {
            report.violations.push(GeometryError::RadialTilingMismatch {
                side: "stator",
                span: stator_span,
                tiled: stator_tiled,
            });
        }
        let rotor_tiled = self.w_tr + self.w_wr + self.w_tr;
        let rotor_span = self.r_ro - self.r_ri;
        if (rotor_span - rotor_tiled).abs() > TILING_REL_TOL * rotor_span.abs().max(1e-30) {
            report.violations.push(GeometryError::RadialTilingMismatch {
                side: "rotor",
                span: rotor_span,
                tiled: rotor_tiled,
            });
        }

        // Fringe-radius degeneracy: the gap fringing logarithms need
        // g > 0 and both fringe radii above g/2.
        if !(self.g > 0.0) {
            report.violations.push(GeometryError::FringeRadiusDegenerate {
                name: "g/2",
                value: self.g / 2.0,
                limit: 0.0,
            });
        } else {
            let d = self.derived_unchecked();
            for (name, value) in [("r_f_o", d.r_f_o), ("r_f_i", d.r_f_i)] {
                if value <= self.g / 2.0 {
                    report.violations.push(GeometryError::FringeRadiusDegenerate {
                        name,
                        value,
                        limit: self.g / 2.0,
                    });
                }
            }
        }

        if self.g >= self.h_ws {
            report
                .warnings
                .push(format!("airgap g = {} not small vs stator window height {}", self.g, self.h_ws));
        }
        if self.g >= self.h_wr {
            report
                .warnings
                .push(format!("airgap g = {} not small vs rotor window height {}", self.g, self.h_wr));
        }

        if report.is_valid() {
            Ok(())
        } else {
            Err(report)
        }
    }

    /// Derived dimensions without any validity checks.
    fn derived_unchecked(&self) -> DerivedDimensions {
        let h = self.h_yr + self.h_wr + self.g + self.h_ws + self.h_ys;
        let r_f_o = h - (self.h_wr + self.h_yr);
        let r_f_i = (h - (self.h_wr + self.h_yr) - self.h_ys).min(self.w_ws / 2.0);
        DerivedDimensions { h, r_f_o, r_f_i }
    }

    /// Total stack height and the two fringe radii.
    ///
    /// Errors with [`GeometryError::FringeRadiusDegenerate`] when either
    /// fringe radius does not exceed g/2 (the fringing logarithms would
    /// leave their domain).
    pub fn derived(&self) -> Result<DerivedDimensions, GeometryError> {
        let d = self.derived_unchecked();
        let limit = self.g / 2.0;
        if !(self.g > 0.0) {
            return Err(GeometryError::FringeRadiusDegenerate { name: "g/2", value: limit, limit: 0.0 });
        }
        if d.r_f_o <= limit {
            return Err(GeometryError::FringeRadiusDegenerate { name: "r_f_o", value: d.r_f_o, limit });
        }
        if d.r_f_i <= limit {
            return Err(GeometryError::FringeRadiusDegenerate { name: "r_f_i", value: d.r_f_i, limit });
        }
        Ok(d)
    }

    /// Copy with a different airgap; everything else unchanged.
    pub fn with_airgap(&self, g: f64) -> Self {
        Self { g, ..*self }
    }
}
