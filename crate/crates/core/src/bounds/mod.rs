//! Closed-form and numerically optimized evaluation of the rate and
//! distortion bounds, plus the exact threshold-decoder error formula.

mod distortion;
mod noisy;
mod rates;

pub use distortion::{
    and_distortion_formula, distortion_lower_thm3, distortion_rate_unconstrained, massey_bound,
    ClampedDistortion,
};
pub use noisy::{
    alg1_exact_error, alg1_exact_error_with_thresholds, queries_for_target_delta, DegreeForTarget,
    ExactError,
};
pub use rates::{
    counting_lower_rate, gallager_lower_rate, miller_rate, same_cluster_necessary,
    same_cluster_sufficient, xor_achievable_rate, SameClusterSufficiency, XorRate,
};

use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Outcome of a feasibility search: some parameter settings admit no
/// feasible point, which is a result rather than an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Feasibility<T> {
    Feasible(T),
    Infeasible,
}

impl<T> Feasibility<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn feasible(&self) -> Option<&T> {
        match self {
            Feasibility::Feasible(v) => Some(v),
            Feasibility::Infeasible => None,
        }
    }

    pub fn into_option(self) -> Option<T> {
        match self {
            Feasibility::Feasible(v) => Some(v),
            Feasibility::Infeasible => None,
        }
    }
}

/// One tabulated point; `value = None` marks an infeasible abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub value: Option<f64>,
}

/// A tabulated bound: named rows of (abscissa, value) with fixed parameters
/// recorded for the CSV header.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub name: String,
    pub abscissa_unit: String,
    pub value_unit: String,
    pub params: Vec<(String, f64)>,
    pub points: Vec<CurvePoint>,
}

impl BoundCurve {
    /// Builds a curve, sorting rows by abscissa. Finite abscissas only;
    /// values must be finite where present.
    pub fn new(
        name: impl Into<String>,
        abscissa_unit: impl Into<String>,
        value_unit: impl Into<String>,
        params: Vec<(String, f64)>,
        mut points: Vec<CurvePoint>,
    ) -> Result<Self> {
        for p in &points {
            if !p.x.is_finite() {
                return Err(Error::Domain {
                    name: "abscissa",
                    value: p.x,
                    constraint: "finite",
                });
            }
            if let Some(v) = p.value {
                if !v.is_finite() {
                    return Err(Error::Domain {
                        name: "value",
                        value: v,
                        constraint: "finite or marked infeasible",
                    });
                }
            }
        }
        points.sort_by(|a, b| a.x.partial_cmp(&b.x).expect("finite abscissas"));
        Ok(BoundCurve {
            name: name.into(),
            abscissa_unit: abscissa_unit.into(),
            value_unit: value_unit.into(),
            params,
            points,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn curve_sorts_and_validates() {
        let c = BoundCurve::new(
            "demo",
            "p",
            "bits-per-element",
            vec![("delta".into(), 10.0)],
            vec![
                CurvePoint {
                    x: 0.3,
                    value: Some(1.0),
                },
                CurvePoint { x: 0.1, value: None },
            ],
        )
        .unwrap();
        assert_eq!(c.points[0].x, 0.1);
        assert!(BoundCurve::new(
            "bad",
            "p",
            "v",
            vec![],
            vec![CurvePoint {
                x: f64::NAN,
                value: None
            }]
        )
        .is_err());
    }
}
