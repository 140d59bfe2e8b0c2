//! Classification summary for one member of the structure family.
//!
//! [`TorsionReport`] bundles everything the command-line tool prints for a
//! single parameter value: torsion-form norms, per-member torsion classes,
//! obstruction-tensor norms, the Einstein deviation, and the derived
//! yes/no flags. Serialization order is fixed so JSON output is stable.

use serde::Serialize;

use crate::error::Result;
use crate::pairing::norm_f64;
use crate::scalar::Scalar;
use crate::torsion::{Acs, AqhStructure};

/// A parameter rendered either exactly (as a fraction string) or as a float,
/// depending on the scalar domain the structure was built over.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    /// Exact value, e.g. `"5/7"` or `"2"`.
    Exact(String),
    /// Floating-point value.
    Float(f64),
}

impl ScalarRepr {
    fn of<S: Scalar>(v: &S) -> Self {
        if S::EXACT {
            ScalarRepr::Exact(v.to_string())
        } else {
            ScalarRepr::Float(v.to_f64())
        }
    }

    /// Numeric view, lossy for exact values.
    pub fn as_f64(&self) -> f64 {
        match self {
            ScalarRepr::Exact(s) => crate::scalar::parse_scalar::<f64>(s).unwrap_or(f64::NAN),
            ScalarRepr::Float(v) => *v,
        }
    }
}

impl std::fmt::Display for ScalarRepr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarRepr::Exact(s) => write!(f, "{s}"),
            ScalarRepr::Float(v) => write!(f, "{v:.10}"),
        }
    }
}

/// Norms of the three lowered obstruction (integrability) tensors.
#[derive(Debug, Clone, Serialize)]
pub struct NijenhuisNorms {
    #[serde(rename = "NI_norm")]
    pub ni_norm: f64,
    #[serde(rename = "NJ_norm")]
    pub nj_norm: f64,
    #[serde(rename = "NK_norm")]
    pub nk_norm: f64,
}

/// Yes/no classification flags derived from the norms at a tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct StructureFlags {
    /// The first member's two-form is closed.
    pub kahler: bool,
    /// The aligned component of the torsion three-form vanishes.
    pub eh_zero: bool,
    /// The whole torsion three-form vanishes.
    pub quaternionic: bool,
    /// The metric's Ricci tensor is proportional to the metric.
    pub einstein: bool,
}

/// Full classification of one member of the parameter family.
#[derive(Debug, Clone, Serialize)]
pub struct TorsionReport {
    pub lambda: ScalarRepr,
    pub mu: ScalarRepr,
    /// Norm of the torsion three-form of the triple.
    pub psi3_norm: f64,
    /// Norm of its component aligned with the first member.
    #[serde(rename = "psi3_I_norm")]
    pub psi3_i_norm: f64,
    /// Largest contraction of any member's two-form with any torsion
    /// combination; identically zero for this family, reported as a check.
    pub contractions_max: f64,
    /// Torsion class labels per member, e.g. `["W1", "W3"]`; empty when
    /// the member is Kähler.
    #[serde(rename = "gh_I")]
    pub gh_i: Vec<String>,
    #[serde(rename = "gh_J")]
    pub gh_j: Vec<String>,
    #[serde(rename = "gh_K")]
    pub gh_k: Vec<String>,
    pub nijenhuis: NijenhuisNorms,
    /// Relative deviation of the Ricci tensor from a multiple of the metric.
    pub einstein_deviation: f64,
    pub flags: StructureFlags,
}

impl TorsionReport {
    /// Compute every reported quantity for `s`, using `tol` to turn norms
    /// into flags.
    pub fn classify<S: Scalar>(s: &AqhStructure<S>, tol: f64) -> Result<Self> {
        let g = s.metric();
        let psi3 = s.psi3();
        let psi3_i = s.psi3_component(Acs::I)?;
        let psi3_norm = norm_f64(&psi3, g)?;
        let psi3_i_norm = norm_f64(&psi3_i, g)?;
        let contractions_max = s.contractions_max()?;
        let d_omega_i_norm = norm_f64(s.d_omega(Acs::I), g)?;
        let einstein_deviation = s.geometry().einstein_deviation();

        let norms = NijenhuisNorms {
            ni_norm: s.trilinear_norm(&s.obstruction(Acs::I)),
            nj_norm: s.trilinear_norm(&s.obstruction(Acs::J)),
            nk_norm: s.trilinear_norm(&s.obstruction(Acs::K)),
        };

        let flags = StructureFlags {
            kahler: d_omega_i_norm <= tol,
            eh_zero: psi3_i_norm <= tol,
            quaternionic: psi3_norm <= tol,
            einstein: einstein_deviation <= tol,
        };

        let gh = |a: Acs| -> Result<Vec<String>> {
            Ok(s.gray_hervella(a, tol)?
                .labels()
                .into_iter()
                .map(str::to_string)
                .collect())
        };

        Ok(TorsionReport {
            lambda: ScalarRepr::of(s.lambda()),
            mu: ScalarRepr::of(s.mu()),
            psi3_norm,
            psi3_i_norm,
            contractions_max,
            gh_i: gh(Acs::I)?,
            gh_j: gh(Acs::J)?,
            gh_k: gh(Acs::K)?,
            nijenhuis: norms,
            einstein_deviation,
            flags,
        })
    }

    /// Human-readable rendering of one member's class labels.
    pub fn gh_text(labels: &[String]) -> String {
        if labels.is_empty() {
            "none".to_string()
        } else {
            labels.join("+")
        }
    }

    /// Column names for CSV output, in the same order as `csv_row`.
    pub fn csv_header() -> &'static str {
        "lambda,mu,psi3_norm,psi3_I_norm,contractions_max,gh_I,gh_J,gh_K,\
         NI_norm,NJ_norm,NK_norm,einstein_deviation,\
         kahler,eh_zero,quaternionic,einstein"
    }

    /// One CSV record (no trailing newline).
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.12e},{:.12e},{:.12e},{},{},{},{:.12e},{:.12e},{:.12e},{:.12e},{},{},{},{}",
            self.lambda,
            self.mu,
            self.psi3_norm,
            self.psi3_i_norm,
            self.contractions_max,
            Self::gh_text(&self.gh_i),
            Self::gh_text(&self.gh_j),
            Self::gh_text(&self.gh_k),
            self.nijenhuis.ni_norm,
            self.nijenhuis.nj_norm,
            self.nijenhuis.nk_norm,
            self.einstein_deviation,
            self.flags.kahler,
            self.flags.eh_zero,
            self.flags.quaternionic,
            self.flags.einstein
        )
    }

    /// Comma-separated list of the flags that are set, or `"-"`.
    pub fn flag_summary(&self) -> String {
        let mut parts = Vec::new();
        if self.flags.kahler {
            parts.push("kahler");
        }
        if self.flags.eh_zero {
            parts.push("eh_zero");
        }
        if self.flags.quaternionic {
            parts.push("quaternionic");
        }
        if self.flags.einstein {
            parts.push("einstein");
        }
        if parts.is_empty() {
            "-".to_string()
        } else {
            parts.join(",")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::So7;
    use crate::scalar::{Rational, Scalar, DEFAULT_TOL};

    fn report(num: i64, den: i64) -> TorsionReport {
        let g = So7::new();
        let s: AqhStructure<Rational> =
            AqhStructure::new(&g, Rational::from_ratio(num, den)).unwrap();
        TorsionReport::classify(&s, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn generic_member_has_no_flags_set() {
        let r = report(1, 1);
        assert!(!r.flags.kahler);
        assert!(!r.flags.eh_zero);
        assert!(!r.flags.quaternionic);
        assert!(!r.flags.einstein);
        assert_eq!(r.flag_summary(), "-");
        assert_eq!(r.lambda, ScalarRepr::Exact("1".into()));
        assert!(r.psi3_norm > 0.0);
        assert!(r.contractions_max <= DEFAULT_TOL);
        assert_eq!(r.gh_i, vec!["W3"]);
        assert_eq!(r.gh_j, vec!["W1", "W3"]);
        assert_eq!(TorsionReport::gh_text(&r.gh_j), "W1+W3");
    }

    #[test]
    fn half_parameter_is_kahler_and_einstein() {
        let r = report(1, 2);
        assert!(r.flags.kahler);
        assert!(r.flags.einstein);
        assert!(!r.flags.eh_zero);
        assert!(!r.flags.quaternionic);
        assert!(r.gh_i.is_empty());
        assert_eq!(TorsionReport::gh_text(&r.gh_i), "none");
        assert_eq!(r.flag_summary(), "kahler,einstein");
        // the first member's obstruction vanishes identically
        assert_eq!(r.nijenhuis.ni_norm, 0.0);
        assert!(r.nijenhuis.nj_norm > 0.0);
    }

    #[test]
    fn json_field_order_is_stable() {
        let r = report(2, 3);
        let text = serde_json::to_string(&r).unwrap();
        let order = [
            "\"lambda\"",
            "\"mu\"",
            "\"psi3_norm\"",
            "\"psi3_I_norm\"",
            "\"contractions_max\"",
            "\"gh_I\"",
            "\"gh_J\"",
            "\"gh_K\"",
            "\"nijenhuis\"",
            "\"NI_norm\"",
            "\"NJ_norm\"",
            "\"NK_norm\"",
            "\"einstein_deviation\"",
            "\"flags\"",
            "\"kahler\"",
            "\"eh_zero\"",
            "\"quaternionic\"",
            "\"einstein\"",
        ];
        let mut pos = 0;
        for key in order {
            let at = text[pos..]
                .find(key)
                .unwrap_or_else(|| panic!("missing or misplaced key {key}"));
            pos += at + key.len();
        }
        assert!(text.contains("\"lambda\":\"2/3\""));
        assert!(text.contains("\"mu\":\"3/2\""));
        assert!(text.contains("\"gh_I\":[\"W3\"]"));
        assert!(text.contains("\"gh_J\":[\"W1\",\"W3\"]"));
    }

    #[test]
    fn exact_and_float_reports_agree_numerically() {
        let g = So7::new();
        let exact: AqhStructure<Rational> =
            AqhStructure::new(&g, Rational::from_ratio(3, 4)).unwrap();
        let float: AqhStructure<f64> = AqhStructure::new(&g, 0.75).unwrap();
        let re = TorsionReport::classify(&exact, DEFAULT_TOL).unwrap();
        let rf = TorsionReport::classify(&float, DEFAULT_TOL).unwrap();
        assert!((re.psi3_norm - rf.psi3_norm).abs() < 1e-9);
        assert!((re.einstein_deviation - rf.einstein_deviation).abs() < 1e-9);
        assert!((re.nijenhuis.nj_norm - rf.nijenhuis.nj_norm).abs() < 1e-9);
        assert_eq!(re.gh_j, rf.gh_j);
        match (&re.lambda, &rf.lambda) {
            (ScalarRepr::Exact(s), ScalarRepr::Float(v)) => {
                assert_eq!(s, "3/4");
                assert!((v - 0.75).abs() < 1e-15);
            }
            other => panic!("unexpected representations: {other:?}"),
        }
    }
}
