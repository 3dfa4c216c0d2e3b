//! Dicke-basis machinery for the symmetric subspace of `N` qubits.
//!
//! A symmetric state is stored as an `(N+1)×(N+1)` matrix in the Dicke basis
//! `|D^α_N⟩`, α = number of excitations. Cutting the register into `k | N-k`
//! qubits maps each Dicke state isometrically into the product of the Dicke
//! bases of the two blocks:
//!
//! ```text
//! |D^α_N⟩ = Σ_{a+b=α} c(a,b) |D^a_k⟩ ⊗ |D^b_{N-k}⟩,   c(a,b)² = C(k,a) C(N-k,b) / C(N,α)
//! ```
//!
//! Composite bipartite indices are always ordered as `(a,b) ↦ a·(N-k+1) + b`.

use crate::error::{Error, Result};
use crate::real::{cplx, hermitian_eigenvalues, hermiticity_residual, trace_re, CMatrix, Real};
use nalgebra::{Complex, ComplexField, DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Largest register for which [`dicke_vector_full`] builds a `2^N` vector.
pub const FULL_SPACE_LIMIT: usize = 14;

/// Largest `n` for which binomials fit exactly in `u128` (C(128,64) < 2^128).
const EXACT_BINOMIAL_MAX: usize = 128;

/// Pascal triangle of exact binomial coefficients.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<u128>>,
}

impl BinomialTable {
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n, m)`, zero when `m > n`.
    pub fn get(&self, n: usize, m: usize) -> u128 {
        if m > n {
            0
        } else {
            self.rows[n][m]
        }
    }
}

/// Builds `C(n,m)` for all `0 ≤ m ≤ n ≤ n_max` with checked integer arithmetic.
pub fn binomial_table(n_max: usize) -> Result<BinomialTable> {
    let mut rows: Vec<Vec<u128>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![1]);
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let mut row = Vec::with_capacity(n + 1);
        row.push(1u128);
        for m in 1..n {
            let v = prev[m - 1]
                .checked_add(prev[m])
                .ok_or(Error::BinomialOverflow { n, m })?;
            row.push(v);
        }
        row.push(1);
        rows.push(row);
    }
    Ok(BinomialTable { rows })
}

/// `ln C(n, m)` from a cumulative log-factorial sum.
fn ln_binomial(ln_fact: &[f64], n: usize, m: usize) -> f64 {
    ln_fact[n] - ln_fact[m] - ln_fact[n - m]
}

fn ln_factorials(n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = 0.0f64;
    out.push(0.0);
    for k in 1..=n_max {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Squared split coefficients `c(a,b)² = C(l,a) C(r,b) / C(l+r,a+b)` as an
/// `(l+1)×(r+1)` table in `f64`.
///
/// Exact integer binomials are used while `l + r ≤ 128`; beyond that the
/// ratio is evaluated in log space.
pub(crate) fn split_coefficients_sq(left: usize, right: usize) -> DMatrix<f64> {
    let n = left + right;
    let mut out = DMatrix::<f64>::zeros(left + 1, right + 1);
    if n <= EXACT_BINOMIAL_MAX {
        let table = binomial_table(n).expect("exact binomials fit up to n = 128");
        for a in 0..=left {
            for b in 0..=right {
                let num = table.get(left, a) as f64 * table.get(right, b) as f64;
                out[(a, b)] = num / table.get(n, a + b) as f64;
            }
        }
    } else {
        let lf = ln_factorials(n);
        for a in 0..=left {
            for b in 0..=right {
                let ln = ln_binomial(&lf, left, a) + ln_binomial(&lf, right, b)
                    - ln_binomial(&lf, n, a + b);
                out[(a, b)] = ln.exp();
            }
        }
    }
    out
}

/// Dicke state label `|D^α_N⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DickeIndex {
    alpha: usize,
    n_qubits: usize,
}

impl DickeIndex {
    pub fn new(alpha: usize, n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || alpha > n_qubits {
            return Err(Error::DickeIndex { alpha, n_qubits });
        }
        Ok(Self { alpha, n_qubits })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
}

/// `|D^α_N⟩` expanded on the `2^N` computational basis (qubit 1 is the most
/// significant bit). Oracle-scale only.
pub fn dicke_vector_full<T: Real>(index: DickeIndex) -> Result<DVector<Complex<T>>> {
    let n = index.n_qubits;
    if n > FULL_SPACE_LIMIT {
        return Err(Error::OracleTooLarge {
            n_qubits: n,
            limit: FULL_SPACE_LIMIT,
        });
    }
    let table = binomial_table(n)?;
    let amp = T::lit(1.0 / (table.get(n, index.alpha) as f64).sqrt());
    Ok(DVector::from_fn(1 << n, |s, _| {
        if (s as u64).count_ones() as usize == index.alpha {
            cplx(amp, T::zero())
        } else {
            cplx(T::zero(), T::zero())
        }
    }))
}

/// Tolerance scaled from its `f64` value to the precision of `T`.
pub(crate) fn scaled_tol<T: Real>(tol_f64: f64) -> T {
    T::lit(tol_f64 * (T::EPS / f64::EPSILON).max(1.0))
}

/// Symmetric `N`-qubit density matrix in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymState<T: Real> {
    n_qubits: usize,
    matrix: CMatrix<T>,
}

/// Tolerances used by [`SymState::validate`] (values for `f64`).
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

impl<T: Real> SymState<T> {
    /// Wraps a matrix after checking Hermiticity, unit trace and positivity.
    pub fn new(n_qubits: usize, matrix: CMatrix<T>) -> Result<Self> {
        let s = Self::from_matrix_unchecked(n_qubits, matrix)?;
        s.validate()?;
        Ok(s)
    }

    /// Wraps a matrix checking only its shape.
    pub fn from_matrix_unchecked(n_qubits: usize, matrix: CMatrix<T>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidState("n_qubits must be >= 1".into()));
        }
        if matrix.nrows() != n_qubits + 1 || matrix.ncols() != n_qubits + 1 {
            return Err(Error::Dimension {
                expected: n_qubits + 1,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { n_qubits, matrix })
    }

    /// `|ψ⟩⟨ψ|` for a vector given in the Dicke basis (normalized here).
    pub fn pure(n_qubits: usize, psi: &DVector<Complex<T>>) -> Result<Self> {
        if psi.len() != n_qubits + 1 {
            return Err(Error::Dimension {
                expected: n_qubits + 1,
                got: psi.len(),
            });
        }
        let norm = psi.norm();
        if norm <= T::zero() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = psi.unscale(norm);
        Self::from_matrix_unchecked(n_qubits, &v * v.adjoint())
    }

    pub fn dicke_projector(index: DickeIndex) -> Self {
        let d = index.n_qubits + 1;
        let mut m = CMatrix::<T>::zeros(d, d);
        m[(index.alpha, index.alpha)] = cplx(T::one(), T::zero());
        Self {
            n_qubits: index.n_qubits,
            matrix: m,
        }
    }

    /// Maximally mixed state `ρ₀ = 1/(N+1)` of the symmetric subspace.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = n_qubits + 1;
        let w = T::one() / T::lit(d as f64);
        let m = CMatrix::<T>::from_diagonal_element(d, d, cplx(w, T::zero()));
        Self {
            n_qubits,
            matrix: m,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.n_qubits + 1
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        self.matrix
            .iter()
            .fold(T::zero(), |acc, z| acc + z.modulus_squared())
    }

    pub fn validate(&self) -> Result<()> {
        let herm = hermiticity_residual(&self.matrix);
        if herm > scaled_tol::<T>(HERMITIAN_TOL) {
            return Err(Error::InvalidState(format!(
                "not Hermitian (residual {herm:e})"
            )));
        }
        let tr = trace_re(&self.matrix);
        if (tr - T::one()).abs() > scaled_tol::<T>(TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let ev = hermitian_eigenvalues(&self.matrix)
            .ok_or_else(|| Error::InvalidState("eigensolver failed".into()))?;
        if ev[0] < -scaled_tol::<T>(PSD_TOL) {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {:e})",
                ev[0]
            )));
        }
        Ok(())
    }
}

/// Decomposition coefficients of `N` symmetric qubits into a `k | N-k` cut.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteEmbedding<T: Real> {
    n_qubits: usize,
    k: usize,
    coeff: DMatrix<T>,
}

impl<T: Real> BipartiteEmbedding<T> {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `c(a,b)`, `a ∈ [0,k]`, `b ∈ [0,N-k]`.
    pub fn coeff(&self, a: usize, b: usize) -> T {
        self.coeff[(a, b)]
    }

    pub fn coefficients(&self) -> &DMatrix<T> {
        &self.coeff
    }

    /// Dimension `(k+1)(N-k+1)` of the bipartite Dicke⊗Dicke space.
    pub fn dim(&self) -> usize {
        (self.k + 1) * (self.n_qubits - self.k + 1)
    }

    /// Composite index of `(a,b)`.
    #[inline]
    pub fn index(&self, a: usize, b: usize) -> usize {
        a * (self.n_qubits - self.k + 1) + b
    }
}

/// Largest cut size worth examining for `N` symmetric qubits.
pub fn max_cut(n_qubits: usize) -> usize {
    n_qubits / 2
}

pub fn make_embedding<T: Real>(n_qubits: usize, k: usize) -> Result<BipartiteEmbedding<T>> {
    let max = max_cut(n_qubits);
    if k == 0 || k > max {
        return Err(Error::Bipartition { k, n_qubits, max });
    }
    let sq = split_coefficients_sq(k, n_qubits - k);
    Ok(BipartiteEmbedding {
        n_qubits,
        k,
        coeff: sq.map(|x| T::lit(x.sqrt())),
    })
}

/// `M[(a,b),(c,d)] = c(a,b) c(c,d) ρ[a+b, c+d]`.
pub fn embed_bipartite<T: Real>(
    rho: &SymState<T>,
    emb: &BipartiteEmbedding<T>,
) -> Result<CMatrix<T>> {
    if emb.n_qubits != rho.n_qubits {
        return Err(Error::Dimension {
            expected: emb.n_qubits + 1,
            got: rho.dim(),
        });
    }
    let right = emb.n_qubits - emb.k;
    let dim = emb.dim();
    let mut m = CMatrix::<T>::zeros(dim, dim);
    let rm = rho.matrix();
    for a in 0..=emb.k {
        for b in 0..=right {
            let cab = emb.coeff[(a, b)];
            let row = emb.index(a, b);
            for c in 0..=emb.k {
                for d in 0..=right {
                    m[(row, emb.index(c, d))] = rm[(a + b, c + d)].scale(cab * emb.coeff[(c, d)]);
                }
            }
        }
    }
    Ok(m)
}
