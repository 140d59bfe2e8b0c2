//! Parameter sweeps and root-finding for the distinguished members of the
//! structure family.
//!
//! A sweep evaluates the full classification on a grid of parameter values.
//! Root-finding locates the special parameters where one of the
//! classification norms vanishes. Because norms are nonnegative, bisection
//! runs on *signed surrogates* — single coefficient functions or eigenvalue
//! gaps that cross zero transversally exactly where the norm vanishes.

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::lie::So7;
use crate::pairing::{norm_f64, split_3form};
use crate::report::TorsionReport;
use crate::torsion::{Acs, AqhStructure};

/// Grid description for a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    /// Geometric instead of arithmetic spacing.
    pub log: bool,
}

impl SweepSpec {
    /// Parse `"start:stop:count"`, e.g. `"0.1:2.0:40"`.
    pub fn parse(text: &str, log: bool) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(GeomError::Domain(format!(
                "sweep range must be start:stop:count, got `{text}`"
            )));
        }
        let start: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| GeomError::Domain(format!("bad sweep start `{}`", parts[0])))?;
        let stop: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| GeomError::Domain(format!("bad sweep stop `{}`", parts[1])))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| GeomError::Domain(format!("bad sweep count `{}`", parts[2])))?;
        let spec = SweepSpec {
            start,
            stop,
            count,
            log,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start <= 0.0 {
            return Err(GeomError::Domain(
                "sweep endpoints must be finite and positive".into(),
            ));
        }
        if self.count == 0 {
            return Err(GeomError::Domain("sweep count must be at least 1".into()));
        }
        if self.count > 1 && self.stop <= self.start {
            return Err(GeomError::Domain(
                "sweep stop must exceed start when count > 1".into(),
            ));
        }
        Ok(())
    }

    /// The grid points, in increasing order.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let n = self.count;
        let mut out = Vec::with_capacity(n);
        if self.log {
            let ratio = (self.stop / self.start).ln();
            for i in 0..n {
                let t = i as f64 / (n - 1) as f64;
                out.push(self.start * (ratio * t).exp());
            }
        } else {
            let step = (self.stop - self.start) / (n - 1) as f64;
            for i in 0..n {
                out.push(self.start + step * i as f64);
            }
        }
        // pin the endpoints exactly
        out[0] = self.start;
        out[n - 1] = self.stop;
        out
    }
}

/// Classify every grid point of `spec`.
pub fn sweep_reports(algebra: &So7, spec: &SweepSpec, tol: f64) -> Result<Vec<TorsionReport>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.count);
    for lam in spec.values() {
        let s: AqhStructure<f64> = AqhStructure::new(algebra, lam)?;
        out.push(TorsionReport::classify(&s, tol)?);
    }
    Ok(out)
}

/// The kinds of special parameter values the root-finder looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialKind {
    /// The first member's two-form closes.
    Kahler,
    /// The aligned component of the torsion three-form vanishes.
    AlignedTorsionZero,
    /// The metric is Einstein.
    Einstein,
    /// The second and third members lose their mixed torsion class and
    /// keep only the totally-skew one.
    PureW1,
}

impl SpecialKind {
    pub const ALL: [SpecialKind; 4] = [
        SpecialKind::Kahler,
        SpecialKind::AlignedTorsionZero,
        SpecialKind::Einstein,
        SpecialKind::PureW1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpecialKind::Kahler => "kahler",
            SpecialKind::AlignedTorsionZero => "eh_zero",
            SpecialKind::Einstein => "einstein",
            SpecialKind::PureW1 => "pure_w1_jk",
        }
    }
}

/// A located special parameter, with the norm that certifies it.
#[derive(Debug, Clone, Serialize)]
pub struct SpecialPoint {
    pub kind: String,
    pub lambda: f64,
    /// Value of the certifying norm at the located parameter (should be at
    /// rounding level when the search succeeded).
    pub residual: f64,
}

/// Coefficient probe: the monomial of `reference` with the largest
/// magnitude. Ties resolve to the smallest index set, so the probe is
/// deterministic.
fn dominant_mask<S: crate::scalar::Scalar>(reference: &crate::exterior::AltForm<S>) -> u32 {
    let mut best = (0u32, -1.0f64);
    for (mask, c) in reference.terms() {
        let a = c.to_f64().abs();
        if a > best.1 {
            best = (mask, a);
        }
    }
    best.0
}

/// Signed function of the parameter whose zero marks the special value.
fn surrogate(algebra: &So7, kind: SpecialKind, lam: f64) -> Result<f64> {
    let s: AqhStructure<f64> = AqhStructure::new(algebra, lam)?;
    match kind {
        SpecialKind::Kahler => {
            // dω_I is a fixed three-form times a linear function of the
            // parameters, so one coefficient carries the sign.
            let reference: AqhStructure<f64> = AqhStructure::new(algebra, 1.0)?;
            let mask = dominant_mask(reference.d_omega(Acs::I));
            Ok(s.d_omega(Acs::I).coeff(mask))
        }
        SpecialKind::AlignedTorsionZero => {
            let mask = dominant_mask(s.phi());
            Ok(s.psi3_component(Acs::I)?.coeff(mask))
        }
        SpecialKind::Einstein => Ok(s.geometry().ricci_eigenvalue_gap()),
        SpecialKind::PureW1 => {
            let reference: AqhStructure<f64> = AqhStructure::new(algebra, 1.0)?;
            let (_, ref_p21) = split_3form(reference.d_omega(Acs::J), reference.acs(Acs::J))?;
            let mask = dominant_mask(&ref_p21);
            let (_, p21) = split_3form(s.d_omega(Acs::J), s.acs(Acs::J))?;
            Ok(p21.coeff(mask))
        }
    }
}

/// Norm that certifies a special point of the given kind.
fn residual(algebra: &So7, kind: SpecialKind, lam: f64) -> Result<f64> {
    let s: AqhStructure<f64> = AqhStructure::new(algebra, lam)?;
    match kind {
        SpecialKind::Kahler => norm_f64(s.d_omega(Acs::I), s.metric()),
        SpecialKind::AlignedTorsionZero => norm_f64(&s.psi3_component(Acs::I)?, s.metric()),
        SpecialKind::Einstein => Ok(s.geometry().einstein_deviation()),
        SpecialKind::PureW1 => {
            let (_, p21) = split_3form(s.d_omega(Acs::J), s.acs(Acs::J))?;
            norm_f64(&p21, s.metric())
        }
    }
}

const BISECT_ITERS: usize = 60;

/// Bisection on a signed surrogate; `lo` and `hi` must bracket a sign
/// change. Returns the midpoint after [`BISECT_ITERS`] halvings.
pub fn bisect(algebra: &So7, kind: SpecialKind, lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = surrogate(algebra, kind, lo)?;
    let f_hi = surrogate(algebra, kind, hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(GeomError::Domain(format!(
            "no sign change for {} on [{lo}, {hi}]",
            kind.name()
        )));
    }
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        let f_mid = surrogate(algebra, kind, mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scan `[lo, hi]` on a geometric grid and bisect every sign-change
/// interval of every surrogate. Returns the located points sorted by
/// parameter value.
pub fn find_special_points(algebra: &So7, lo: f64, hi: f64) -> Result<Vec<SpecialPoint>> {
    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
        return Err(GeomError::Domain(
            "search interval must satisfy 0 < lo < hi".into(),
        ));
    }
    const GRID: usize = 96;
    let spec = SweepSpec {
        start: lo,
        stop: hi,
        count: GRID,
        log: true,
    };
    let grid = spec.values();
    let mut found = Vec::new();
    for kind in SpecialKind::ALL {
        let samples: Vec<f64> = grid
            .iter()
            .map(|&x| surrogate(algebra, kind, x))
            .collect::<Result<_>>()?;
        for w in 0..GRID - 1 {
            let (a, b) = (samples[w], samples[w + 1]);
            let crossing = a == 0.0 || (a.signum() != b.signum() && b != 0.0);
            // a grid point that is exactly zero is caught as the left end
            if !crossing {
                continue;
            }
            let root = if a == 0.0 {
                grid[w]
            } else {
                bisect(algebra, kind, grid[w], grid[w + 1])?
            };
            // skip duplicates from adjacent intervals
            if found
                .iter()
                .any(|p: &SpecialPoint| p.kind == kind.name() && (p.lambda - root).abs() < 1e-9)
            {
                continue;
            }
            found.push(SpecialPoint {
                kind: kind.name().to_string(),
                lambda: root,
                residual: residual(algebra, kind, root)?,
            });
        }
    }
    found.sort_by(|p, q| {
        p.lambda
            .partial_cmp(&q.lambda)
            .unwrap()
            .then_with(|| p.kind.cmp(&q.kind))
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_spec_parsing_and_grids() {
        let s = SweepSpec::parse("0.5:2:4", false).unwrap();
        assert_eq!(s.values(), vec![0.5, 1.0, 1.5, 2.0]);
        let s = SweepSpec::parse("1:8:4", true).unwrap();
        let v = s.values();
        assert!((v[1] - 2.0).abs() < 1e-12);
        assert!((v[2] - 4.0).abs() < 1e-12);
        assert_eq!((v[0], v[3]), (1.0, 8.0));
        assert!(SweepSpec::parse("0:1:3", false).is_err());
        assert!(SweepSpec::parse("2:1:3", false).is_err());
        assert!(SweepSpec::parse("1:2:0", false).is_err());
        assert!(SweepSpec::parse("1:2", false).is_err());
        assert!(SweepSpec::parse("a:2:3", false).is_err());
        // a single-point sweep needs no ordering between the endpoints
        assert_eq!(SweepSpec::parse("3:1:1", false).unwrap().values(), vec![3.0]);
    }

    #[test]
    fn locates_all_special_parameters() {
        let g = So7::new();
        let pts = find_special_points(&g, 0.1, 2.0).unwrap();
        let take = |kind: &str| -> Vec<f64> {
            pts.iter()
                .filter(|p| p.kind == kind)
                .map(|p| p.lambda)
                .collect()
        };
        let kahler = take("kahler");
        assert_eq!(kahler.len(), 1);
        assert!((kahler[0] - 0.5).abs() < 1e-12);

        let eh = take("eh_zero");
        assert_eq!(eh.len(), 1);
        assert!((eh[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

        let mut einstein = take("einstein");
        einstein.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(einstein.len(), 2);
        assert!((einstein[0] - 0.5).abs() < 1e-12);
        assert!((einstein[1] - (3.0f64 / 8.0).sqrt()).abs() < 1e-12);

        let w1 = take("pure_w1_jk");
        assert_eq!(w1.len(), 1);
        assert!((w1[0] - 0.75f64.sqrt()).abs() < 1e-12);

        for p in &pts {
            assert!(
                p.residual < 1e-10,
                "{} at {} has residual {}",
                p.kind,
                p.lambda,
                p.residual
            );
        }
    }

    #[test]
    fn sweep_reports_cover_grid_in_order() {
        let g = So7::new();
        let spec = SweepSpec::parse("0.4:1.2:5", false).unwrap();
        let reports = sweep_reports(&g, &spec, 1e-10).unwrap();
        assert_eq!(reports.len(), 5);
        let lams: Vec<f64> = reports.iter().map(|r| r.lambda.as_f64()).collect();
        for (got, want) in lams.iter().zip([0.4, 0.6, 0.8, 1.0, 1.2]) {
            assert!((got - want).abs() < 1e-12, "grid point {got} vs {want}");
        }
        // middle of the family: no flags anywhere except none at these grid points
        assert!(reports.iter().all(|r| !r.flags.quaternionic));
    }

    #[test]
    fn bisect_rejects_brackets_without_sign_change() {
        let g = So7::new();
        let err = bisect(&g, SpecialKind::Kahler, 0.8, 1.2);
        assert!(err.is_err());
    }
}
