//! Partial transposition across every `k | N-k` cut of a symmetric state.

use crate::error::{Error, Result};
use crate::real::{hermitian_eigenvalues, hermiticity_residual, CMatrix, Real};
use crate::symspace::{
    make_embedding, max_cut, scaled_tol, BipartiteEmbedding, SymState, HERMITIAN_TOL,
};
use serde::{Deserialize, Serialize};

/// Default threshold on the smallest partial-transpose eigenvalue.
pub const TAU_PPT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PptFlag {
    #[serde(rename = "NPT")]
    Npt,
    #[serde(rename = "PPT")]
    Ppt,
}

/// PPT data for cuts `k = 1..=⌊N/2⌋`; vectors are indexed by `k - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionFlags<T: Real> {
    pub n_qubits: usize,
    pub flags: Vec<PptFlag>,
    pub min_eig: Vec<T>,
    pub spectra: Vec<Vec<T>>,
    pub tau_ppt: T,
}

impl<T: Real> PartitionFlags<T> {
    pub fn flag(&self, k: usize) -> PptFlag {
        self.flags[k - 1]
    }

    /// Cut sizes that are PPT, ascending.
    pub fn ppt_cuts(&self) -> Vec<usize> {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, f)| **f == PptFlag::Ppt)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn all_ppt(&self) -> bool {
        self.flags.iter().all(|f| *f == PptFlag::Ppt)
    }

    pub fn all_npt(&self) -> bool {
        self.flags.iter().all(|f| *f == PptFlag::Npt)
    }
}

/// `M^{T_A}` with the transpose taken on the `k`-qubit block:
/// `M^{T_A}[(a,b),(c,d)] = M[(c,b),(a,d)]`.
pub fn partial_transpose_embedded<T: Real>(
    m: &CMatrix<T>,
    emb: &BipartiteEmbedding<T>,
) -> CMatrix<T> {
    let right = emb.n_qubits() - emb.k();
    let dim = emb.dim();
    let mut out = CMatrix::<T>::zeros(dim, dim);
    for a in 0..=emb.k() {
        for b in 0..=right {
            for c in 0..=emb.k() {
                for d in 0..=right {
                    out[(emb.index(a, b), emb.index(c, d))] = m[(emb.index(c, b), emb.index(a, d))];
                }
            }
        }
    }
    out
}

fn pt_from_embedding<T: Real>(rho: &SymState<T>, emb: &BipartiteEmbedding<T>) -> CMatrix<T> {
    let right = emb.n_qubits() - emb.k();
    let dim = emb.dim();
    let r = rho.matrix();
    let mut out = CMatrix::<T>::zeros(dim, dim);
    for a in 0..=emb.k() {
        for b in 0..=right {
            let row = emb.index(a, b);
            for c in 0..=emb.k() {
                let ccb = emb.coeff(c, b);
                for d in 0..=right {
                    out[(row, emb.index(c, d))] = r[(c + b, a + d)].scale(ccb * emb.coeff(a, d));
                }
            }
        }
    }
    out
}

pub fn partial_transpose<T: Real>(rho: &SymState<T>, k: usize) -> Result<CMatrix<T>> {
    let emb = make_embedding::<T>(rho.n_qubits(), k)?;
    Ok(pt_from_embedding(rho, &emb))
}

/// Reusable PPT checker for a fixed number of qubits.
#[derive(Debug, Clone)]
pub struct PptAnalyzer<T: Real> {
    n_qubits: usize,
    embeddings: Vec<BipartiteEmbedding<T>>,
    tau_ppt: T,
}

impl<T: Real> PptAnalyzer<T> {
    pub fn new(n_qubits: usize, tau_ppt: f64) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::InvalidParams(format!(
                "PPT analysis needs N >= 2, got {n_qubits}"
            )));
        }
        let embeddings = (1..=max_cut(n_qubits))
            .map(|k| make_embedding(n_qubits, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n_qubits,
            embeddings,
            tau_ppt: T::lit(tau_ppt),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn partial_transpose(&self, rho: &SymState<T>, k: usize) -> Result<CMatrix<T>> {
        let emb = self
            .embeddings
            .get(k.wrapping_sub(1))
            .ok_or(Error::Bipartition {
                k,
                n_qubits: self.n_qubits,
                max: max_cut(self.n_qubits),
            })?;
        Ok(pt_from_embedding(rho, emb))
    }

    pub fn flags(&self, rho: &SymState<T>) -> Result<PartitionFlags<T>> {
        if rho.n_qubits() != self.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits + 1,
                got: rho.dim(),
            });
        }
        let herm = hermiticity_residual(rho.matrix());
        if herm > scaled_tol::<T>(HERMITIAN_TOL) {
            return Err(Error::InvalidState(format!(
                "not Hermitian (residual {herm:e})"
            )));
        }
        let cuts = self.embeddings.len();
        let mut flags = Vec::with_capacity(cuts);
        let mut min_eig = Vec::with_capacity(cuts);
        let mut spectra = Vec::with_capacity(cuts);
        for (i, emb) in self.embeddings.iter().enumerate() {
            let pt = pt_from_embedding(rho, emb);
            let ev = hermitian_eigenvalues(&pt).ok_or(Error::Eigensolver { k: i + 1 })?;
            let lo = ev[0];
            flags.push(if lo < -self.tau_ppt {
                PptFlag::Npt
            } else {
                PptFlag::Ppt
            });
            min_eig.push(lo);
            spectra.push(ev);
        }
        Ok(PartitionFlags {
            n_qubits: self.n_qubits,
            flags,
            min_eig,
            spectra,
            tau_ppt: self.tau_ppt,
        })
    }
}

/// PPT flags with the default threshold.
pub fn ppt_flags<T: Real>(rho: &SymState<T>) -> Result<PartitionFlags<T>> {
    PptAnalyzer::new(rho.n_qubits(), TAU_PPT)?.flags(rho)
}
