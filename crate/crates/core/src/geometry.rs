//! Hilbert–Schmidt geometry of symmetric states.
//!
//! Distances are taken between `(N+1)×(N+1)` Dicke-basis matrices; embedding
//! into the full `2^N` space only pads with zeros and leaves them unchanged.
//!
//! Note on the purity relation: with `D_HS` defined as a Frobenius norm, the
//! identity that holds is `D_HS(ρ, ρ₀)² = Tr ρ² - 1/(N+1)` (squared on the
//! left), and that is the form used and tested here.

use crate::error::{Error, Result};
use crate::real::{CMatrix, Real};
use crate::symspace::{DickeIndex, SymState};
use nalgebra::ComplexField;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// `sqrt(Tr[(A-B)†(A-B)])`.
pub fn hs_distance<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<T> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension {
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    Ok(a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (x, y)| acc + (*x - *y).modulus_squared())
        .sqrt())
}

/// Distance to the maximally mixed state of the symmetric subspace.
pub fn distance_to_mms<T: Real>(rho: &SymState<T>) -> T {
    let mms = SymState::<T>::maximally_mixed(rho.n_qubits());
    hs_distance(rho.matrix(), mms.matrix()).expect("same dimension")
}

/// Histogram normalized as a probability density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramPdf {
    pub bin_edges: Vec<f64>,
    pub density: Vec<f64>,
    pub n_samples: u64,
}

/// Binning policy: `bins` uniform bins over `[0, upper]`, with `upper`
/// defaulting to `1.05 ×` the largest observed value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Binning {
    pub bins: usize,
    pub upper: Option<f64>,
}

impl Default for Binning {
    fn default() -> Self {
        Self {
            bins: 200,
            upper: None,
        }
    }
}

impl HistogramPdf {
    fn from_counts(upper: f64, counts: Vec<u64>) -> Self {
        let bins = counts.len();
        let total: u64 = counts.iter().sum();
        let width = upper / bins as f64;
        let bin_edges = (0..=bins).map(|i| upper * i as f64 / bins as f64).collect();
        let density = counts
            .iter()
            .map(|&c| {
                if total == 0 {
                    0.0
                } else {
                    c as f64 / (total as f64 * width)
                }
            })
            .collect();
        Self {
            bin_edges,
            density,
            n_samples: total,
        }
    }

    /// Histogram of arbitrary samples.
    pub fn from_samples(samples: &[f64], binning: Binning) -> Self {
        let upper = resolve_upper(samples.iter().copied().fold(0.0, f64::max), binning);
        let mut counts = vec![0u64; binning.bins.max(1)];
        for &x in samples {
            let len = counts.len();
            counts[bin_of(x, upper, len)] += 1;
        }
        Self::from_counts(upper, counts)
    }

    /// `Σ density_i · width_i` (1 for a non-empty histogram).
    pub fn total_mass(&self) -> f64 {
        self.density
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]))
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.density
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]) * 0.5 * (w[0] + w[1]))
            .sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin_left,bin_right,density\n");
        for (d, w) in self.density.iter().zip(self.bin_edges.windows(2)) {
            let _ = writeln!(s, "{},{},{}", w[0], w[1], d);
        }
        s
    }
}

fn resolve_upper(observed_max: f64, binning: Binning) -> f64 {
    match binning.upper {
        Some(u) if u > 0.0 => u,
        _ if observed_max > 0.0 => observed_max * 1.05,
        _ => 1.0,
    }
}

fn bin_of(x: f64, upper: f64, bins: usize) -> usize {
    let i = (x / upper * bins as f64).floor();
    if i < 0.0 {
        0
    } else {
        (i as usize).min(bins - 1)
    }
}

/// Sample mean and sample standard deviation (`n - 1` denominator).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

pub fn mean_std(xs: &[f64]) -> MeanStd {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n.max(1) as f64;
    let var = if n > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    MeanStd {
        mean,
        std: var.sqrt(),
        n,
    }
}

/// Per-point mean and standard deviation of `D_HS(ρ, ρ₀)`.
pub fn mmd_sweep<T: Real>(points: &[(usize, Vec<SymState<T>>)]) -> Result<Vec<(usize, MeanStd)>> {
    points
        .iter()
        .map(|(a, states)| {
            if states.len() < 2 {
                return Err(Error::InvalidParams(format!(
                    "ancilla {a}: need at least 2 states, got {}",
                    states.len()
                )));
            }
            let d: Vec<f64> = states.iter().map(|s| distance_to_mms(s).to_f64()).collect();
            Ok((*a, mean_std(&d)))
        })
        .collect()
}

fn check_pairs<T: Real>(states: &[SymState<T>]) -> Result<()> {
    if states.len() < 2 {
        return Err(Error::InvalidParams(format!(
            "pairwise distances need at least 2 states, got {}",
            states.len()
        )));
    }
    let n = states[0].n_qubits();
    if states.iter().any(|s| s.n_qubits() != n) {
        return Err(Error::InvalidParams("states differ in N".into()));
    }
    Ok(())
}

fn pair_distance<T: Real>(states: &[SymState<T>], i: usize, j: usize) -> f64 {
    hs_distance(states[i].matrix(), states[j].matrix())
        .expect("checked")
        .to_f64()
}

/// Streaming moments of all `m(m-1)/2` pairwise distances: `(count, mean,
/// unbiased variance, max)`.
pub fn pairwise_moments<T: Real>(states: &[SymState<T>]) -> Result<(u64, f64, f64, f64)> {
    check_pairs(states)?;
    let m = states.len();
    let (count, sum, sumsq, max) = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut acc = (0u64, 0.0f64, 0.0f64, 0.0f64);
            for j in (i + 1)..m {
                let d = pair_distance(states, i, j);
                acc.0 += 1;
                acc.1 += d;
                acc.2 += d * d;
                acc.3 = acc.3.max(d);
            }
            acc
        })
        .collect::<Vec<_>>()
        // row order, so the float sums do not depend on the thread count
        .into_iter()
        .fold((0u64, 0.0f64, 0.0f64, 0.0f64), |a, b| {
            (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3.max(b.3))
        });
    let mean = sum / count as f64;
    let var = if count > 1 {
        (sumsq - count as f64 * mean * mean) / (count - 1) as f64
    } else {
        0.0
    };
    Ok((count, mean, var.max(0.0), max))
}

/// PDF of all pairwise distances, accumulated row block by row block without
/// storing the distances.
pub fn pairwise_pdf<T: Real>(states: &[SymState<T>], binning: Binning) -> Result<HistogramPdf> {
    check_pairs(states)?;
    let m = states.len();
    let upper = match binning.upper {
        Some(u) if u > 0.0 => u,
        _ => resolve_upper(pairwise_moments(states)?.3, binning),
    };
    let bins = binning.bins.max(1);
    let counts = (0..m)
        .into_par_iter()
        .fold(
            || vec![0u64; bins],
            |mut h, i| {
                for j in (i + 1)..m {
                    h[bin_of(pair_distance(states, i, j), upper, bins)] += 1;
                }
                h
            },
        )
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(HistogramPdf::from_counts(upper, counts))
}

/// PDF of `D_HS(ρ, |D^α⟩⟨D^β|)` over the sample plus the reference distance
/// from `ρ₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DickePanel {
    pub alpha: usize,
    pub beta: usize,
    pub pdf: HistogramPdf,
    pub reference: f64,
    pub mean: f64,
}

fn dicke_operator<T: Real>(n: usize, alpha: usize, beta: usize) -> CMatrix<T> {
    let mut m = CMatrix::<T>::zeros(n + 1, n + 1);
    m[(alpha, beta)] = nalgebra::Complex::new(T::one(), T::zero());
    m
}

/// Exact `D_HS(ρ₀, |D^α⟩⟨D^β|)`.
pub fn dicke_reference(n_qubits: usize, alpha: usize, beta: usize) -> f64 {
    let d = (n_qubits + 1) as f64;
    if alpha == beta {
        ((1.0 - 1.0 / d).powi(2) + n_qubits as f64 / (d * d)).sqrt()
    } else {
        (1.0 + 1.0 / d).sqrt()
    }
}

/// `(N+1)²` panels, row-major in `(α, β)`.
pub fn dicke_projector_pdfs<T: Real>(
    states: &[SymState<T>],
    binning: Binning,
) -> Result<Vec<DickePanel>> {
    let n = states
        .first()
        .map(|s| s.n_qubits())
        .ok_or_else(|| Error::InvalidParams("no states".into()))?;
    if states.iter().any(|s| s.n_qubits() != n) {
        return Err(Error::InvalidParams("states differ in N".into()));
    }
    // validate the dimension once
    DickeIndex::new(n, n)?;
    let mut panels = Vec::with_capacity((n + 1) * (n + 1));
    for alpha in 0..=n {
        for beta in 0..=n {
            let p = dicke_operator::<T>(n, alpha, beta);
            let d: Vec<f64> = states
                .iter()
                .map(|s| hs_distance(s.matrix(), &p).expect("same N").to_f64())
                .collect();
            panels.push(DickePanel {
                alpha,
                beta,
                pdf: HistogramPdf::from_samples(&d, binning),
                reference: dicke_reference(n, alpha, beta),
                mean: mean_std(&d).mean,
            });
        }
    }
    Ok(panels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{MethodParams, RisGenerator, RngStream};

    #[test]
    fn distance_basics() {
        let a = SymState::<f64>::maximally_mixed(3);
        assert_eq!(hs_distance(a.matrix(), a.matrix()).unwrap(), 0.0);
        let g = SymState::<f64>::dicke_projector(DickeIndex::new(0, 2).unwrap());
        let d = distance_to_mms(&g);
        assert!((d - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        let b = SymState::<f64>::maximally_mixed(4);
        assert!(hs_distance(a.matrix(), b.matrix()).is_err());
    }

    #[test]
    fn purity_identity() {
        let g = RisGenerator::<f64>::new(MethodParams::mi(5, 7).unwrap()).unwrap();
        for t in 0..100 {
            let rho = g.draw(RngStream::new(4, t)).unwrap();
            let d = distance_to_mms(&rho);
            assert!((d * d - (rho.purity() - 1.0 / 6.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_stats() {
        let pure = RisGenerator::<f64>::new(MethodParams::mii(4, 1).unwrap()).unwrap();
        let states: Vec<_> = (0..5)
            .map(|t| pure.draw(RngStream::new(1, t)).unwrap())
            .collect();
        let s = mmd_sweep(&[(1, states)]).unwrap();
        assert!((s[0].1.mean.powi(2) - 0.8).abs() < 1e-12);
        assert!(s[0].1.std < 1e-12);

        let one = pure.draw(RngStream::new(1, 0)).unwrap();
        let rep = mmd_sweep(&[(1, vec![one.clone(), one.clone(), one])]).unwrap();
        assert!(rep[0].1.std < 1e-12);
        assert!(mmd_sweep::<f64>(&[(1, vec![])]).is_err());
    }

    #[test]
    fn pairwise_identical_states() {
        let s = SymState::<f64>::maximally_mixed(4);
        let pdf = pairwise_pdf(&[s.clone(), s], Binning::default()).unwrap();
        assert_eq!(pdf.n_samples, 1);
        assert!(pdf.density[0] > 0.0);
        assert!(pdf.density[1..].iter().all(|&d| d == 0.0));
        assert!((pdf.total_mass() - 1.0).abs() < 1e-9);
        assert!(pairwise_pdf(&[SymState::<f64>::maximally_mixed(4)], Binning::default()).is_err());
    }

    #[test]
    fn pairwise_normalization_and_count() {
        let g = RisGenerator::<f64>::new(MethodParams::mii(4, 20).unwrap()).unwrap();
        let st: Vec<_> = (0..40)
            .map(|t| g.draw(RngStream::new(2, t)).unwrap())
            .collect();
        let pdf = pairwise_pdf(
            &st,
            Binning {
                bins: 50,
                upper: None,
            },
        )
        .unwrap();
        assert_eq!(pdf.n_samples, 40 * 39 / 2);
        assert!((pdf.total_mass() - 1.0).abs() < 1e-9);
        let (c, mean, _, _) = pairwise_moments(&st).unwrap();
        assert_eq!(c, 780);
        assert!((pdf.mean() - mean).abs() < pdf.bin_edges[1]);
    }

    #[test]
    fn dicke_references() {
        let rho0 = SymState::<f64>::maximally_mixed(4);
        for (a, b) in [(0, 0), (2, 2), (1, 3), (4, 0)] {
            let p = dicke_operator::<f64>(4, a, b);
            let d = hs_distance(rho0.matrix(), &p).unwrap();
            assert!((d - dicke_reference(4, a, b)).abs() < 1e-15);
        }
        let panels = dicke_projector_pdfs(&[rho0.clone(), rho0], Binning::default()).unwrap();
        assert_eq!(panels.len(), 25);
    }
}
