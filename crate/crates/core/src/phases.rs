//! Phase boundaries from probability sweeps.
//!
//! A boundary sits where two probability curves cross. Crossings are located
//! by linear interpolation between adjacent sweep samples; when noise makes a
//! pair of curves cross several times, the lowest-ancilla crossing is kept
//! and the multiplicity is reported alongside it.

use crate::error::{Error, Result};
use crate::real::Real;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// One sweep sample: `(ancilla, P_NPT, P_PPTBE, P_SEP)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint<T> {
    pub ancilla: T,
    pub p_npt: T,
    pub p_be: T,
    pub p_sep: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoundaryKind {
    #[serde(rename = "NPT_to_BE")]
    NptToBe,
    #[serde(rename = "BE_to_SEP")]
    BeToSep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing<T> {
    pub ancilla: T,
    /// Number of sign changes seen for this pair of curves.
    pub multiplicity: usize,
}

impl<T> Crossing<T> {
    pub fn is_ambiguous(&self) -> bool {
        self.multiplicity > 1
    }
}

/// Both boundaries of one sweep; `None` means absent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossings<T> {
    pub npt_to_be: Option<Crossing<T>>,
    pub be_to_sep: Option<Crossing<T>>,
}

/// First sign change of the piecewise-linear interpolant of `d(x)`.
/// Samples where `d` is exactly zero only count when the sign differs on
/// either side of them; curves that merely touch do not cross.
fn first_zero<T: Real>(xs: &[T], ds: &[T]) -> Option<Crossing<T>> {
    let mut found: Option<T> = None;
    let mut count = 0usize;
    let mut last: Option<usize> = None;
    for j in 0..xs.len() {
        if ds[j] == T::zero() {
            continue;
        }
        if let Some(i) = last {
            if (ds[i] > T::zero()) != (ds[j] > T::zero()) {
                count += 1;
                let x = if j == i + 1 {
                    xs[i] + (xs[j] - xs[i]) * ds[i] / (ds[i] - ds[j])
                } else {
                    xs[i + 1]
                };
                found.get_or_insert(x);
            }
        }
        last = Some(j);
    }
    found.map(|ancilla| Crossing {
        ancilla,
        multiplicity: count,
    })
}

pub fn curve_intersections<T: Real>(sweep: &[SweepPoint<T>]) -> Result<Crossings<T>> {
    if sweep.len() < 2 {
        return Err(Error::InvalidParams(format!(
            "need at least 2 sweep points, got {}",
            sweep.len()
        )));
    }
    if sweep.windows(2).any(|w| w[1].ancilla <= w[0].ancilla) {
        return Err(Error::InvalidParams(
            "sweep must be sorted by ancilla".into(),
        ));
    }
    let xs: Vec<T> = sweep.iter().map(|p| p.ancilla).collect();
    let d1: Vec<T> = sweep.iter().map(|p| p.p_npt - p.p_be).collect();
    let d2: Vec<T> = sweep.iter().map(|p| p.p_be - p.p_sep).collect();
    Ok(Crossings {
        npt_to_be: first_zero(&xs, &d1),
        be_to_sep: first_zero(&xs, &d2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryModel {
    /// `a·N + b`
    Linear,
    /// `a·N² + b·N + c`
    Quadratic,
}

impl BoundaryModel {
    pub fn n_params(&self) -> usize {
        match self {
            BoundaryModel::Linear => 2,
            BoundaryModel::Quadratic => 3,
        }
    }

    fn row<T: Real>(&self, x: T) -> Vec<T> {
        match self {
            BoundaryModel::Linear => vec![x, T::one()],
            BoundaryModel::Quadratic => vec![x * x, x, T::one()],
        }
    }

    /// Evaluates the model with coefficients ordered by descending degree.
    pub fn eval<T: Real>(&self, coeffs: &[T], x: T) -> T {
        self.row(x)
            .into_iter()
            .zip(coeffs)
            .fold(T::zero(), |acc, (r, c)| acc + r * *c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseBoundary<T> {
    pub kind: BoundaryKind,
    /// `(N, ancilla*)` crossing coordinates.
    pub points: Vec<(T, T)>,
    pub model: BoundaryModel,
    /// Descending degree.
    pub coefficients: Vec<T>,
    /// Residual sum of squares.
    pub rss: T,
}

/// Least-squares fit of the crossing points.
pub fn fit_boundary<T: Real>(
    kind: BoundaryKind,
    points: &[(T, T)],
    model: BoundaryModel,
) -> Result<PhaseBoundary<T>> {
    let p = model.n_params();
    let distinct = {
        let mut xs: Vec<f64> = points.iter().map(|(x, _)| Real::to_f64(*x)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        xs.len()
    };
    if points.len() < p || distinct < p {
        return Err(Error::Underdetermined {
            points: distinct.min(points.len()),
            params: p,
        });
    }
    let a = DMatrix::<T>::from_fn(points.len(), p, |i, j| model.row(points[i].0)[j]);
    let y = DVector::<T>::from_iterator(points.len(), points.iter().map(|(_, v)| *v));
    let svd = a.clone().svd(true, true);
    let coef = svd
        .solve(&y, T::lit(1e-12))
        .map_err(|e| Error::Other(format!("least squares failed: {e}")))?;
    let resid = &y - &a * &coef;
    let rss = resid.dot(&resid);
    Ok(PhaseBoundary {
        kind,
        points: points.to_vec(),
        model,
        coefficients: coef.iter().copied().collect(),
        rss,
    })
}
