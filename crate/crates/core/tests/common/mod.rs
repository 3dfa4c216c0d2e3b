//! Brute-force references in the full `2^N` qubit space.
#![allow(dead_code)]

use nalgebra::Complex;
use nalgebra::{DMatrix, DVector};
use symris::symspace::dicke_vector_full;
use symris::{CMatrix, DickeIndex, SymState};

pub type C64 = Complex<f64>;

/// Columns are `|D^α_N⟩`, α = 0..=N.
pub fn dicke_isometry(n: usize) -> CMatrix<f64> {
    let mut v = CMatrix::<f64>::zeros(1 << n, n + 1);
    for a in 0..=n {
        let d = dicke_vector_full::<f64>(DickeIndex::new(a, n).unwrap()).unwrap();
        v.set_column(a, &d);
    }
    v
}

pub fn to_full(rho: &SymState<f64>) -> CMatrix<f64> {
    let v = dicke_isometry(rho.n_qubits());
    &v * rho.matrix() * v.adjoint()
}

/// Transposes the first `k` qubits (most significant bits).
pub fn full_partial_transpose(m: &CMatrix<f64>, n: usize, k: usize) -> CMatrix<f64> {
    let rest = n - k;
    let mask = (1usize << rest) - 1;
    CMatrix::<f64>::from_fn(1 << n, 1 << n, |i, j| {
        let (x, y) = (i >> rest, i & mask);
        let (xp, yp) = (j >> rest, j & mask);
        m[((xp << rest) | y, (x << rest) | yp)]
    })
}

/// `⟨D^k_a ⊗ D^{N-k}_b| M |D^k_c ⊗ D^{N-k}_d⟩` in the `(a,b) ↦ a(N-k+1)+b` order.
pub fn full_to_bipartite_symmetric(m: &CMatrix<f64>, n: usize, k: usize) -> CMatrix<f64> {
    let left = dicke_isometry(k);
    let right = dicke_isometry(n - k);
    let p = left.kronecker(&right);
    p.adjoint() * m * p
}

/// Traces out the last `n_traced` qubits of a pure state.
pub fn trace_last_qubits(psi: &DVector<C64>, n_total: usize, n_traced: usize) -> CMatrix<f64> {
    let keep = 1usize << (n_total - n_traced);
    let env = 1usize << n_traced;
    let a = DMatrix::<C64>::from_fn(keep, env, |i, j| psi[i * env + j]);
    &a * a.adjoint()
}

pub fn sorted_eigenvalues(m: &CMatrix<f64>) -> Vec<f64> {
    symris::real::hermitian_eigenvalues(m).expect("eigensolver")
}

/// Pads with zeros up to `len` and sorts.
pub fn padded(mut ev: Vec<f64>, len: usize) -> Vec<f64> {
    ev.resize(len, 0.0);
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_entry_diff(a: &CMatrix<f64>, b: &CMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Full rank random symmetric state: the MI reduction with plenty of ancilla.
pub fn random_state(n: usize, seed: u64, trial: u64) -> SymState<f64> {
    use symris::{MethodParams, RisGenerator, RngStream};
    let g = RisGenerator::<f64>::new(MethodParams::mii(n, n + 3).unwrap()).unwrap();
    g.draw(RngStream::new(seed, trial)).unwrap()
}

/// Haar unitary from the QR decomposition of a Ginibre matrix.
pub fn haar_unitary(dim: usize, seed: u64) -> CMatrix<f64> {
    use symris::sampling::random_pure;
    use symris::RngStream;
    let cols: Vec<DVector<C64>> = (0..dim)
        .map(|j| random_pure::<f64>(dim, RngStream::new(seed, j as u64)).unwrap())
        .collect();
    let g = CMatrix::<f64>::from_columns(&cols);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q.clone();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    u
}
