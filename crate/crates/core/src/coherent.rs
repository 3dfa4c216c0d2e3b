//! Spin-coherent (symmetric product) states and fast evaluation of
//! `f(θ,φ) = ⟨z|^{⊗N} R |z⟩^{⊗N}` over `(θ,φ)` grids.
//!
//! In the Dicke basis `v_α = a_α(θ) e^{iαφ}` with
//! `a_α = sqrt(C(N,α)) cos(θ/2)^{N-α} sin(θ/2)^α`, so for Hermitian `R`
//!
//! ```text
//! f(θ,φ) = g_0(θ) + 2 Re Σ_{d≥1} g_d(θ) e^{idφ},   g_d = Σ_α a_α a_{α+d} R[α,α+d]
//! ```
//!
//! which costs `O(N²)` per grid row and `O(N)` per grid point.

use crate::real::{cplx, CMatrix, Real};
use nalgebra::{Complex, DVector};
use std::f64::consts::PI;

/// Real amplitudes `a_α(θ)`.
pub fn amplitudes<T: Real>(sqrt_binom: &[T], theta: T) -> Vec<T> {
    let n = sqrt_binom.len() - 1;
    let half = theta * T::lit(0.5);
    let (s, c) = (half.sin(), half.cos());
    // c^{N-α} s^α built by running products to avoid powi on tiny bases
    let mut cpow = vec![T::one(); n + 1];
    let mut spow = vec![T::one(); n + 1];
    for i in 1..=n {
        cpow[i] = cpow[i - 1] * c;
        spow[i] = spow[i - 1] * s;
    }
    (0..=n)
        .map(|al| sqrt_binom[al] * cpow[n - al] * spow[al])
        .collect()
}

pub fn sqrt_binomials<T: Real>(n_qubits: usize) -> Vec<T> {
    let mut row = vec![1.0f64; n_qubits + 1];
    // multiplicative recurrence is exact enough for the N used here
    for m in 1..=n_qubits {
        row[m] = row[m - 1] * (n_qubits + 1 - m) as f64 / m as f64;
    }
    row.into_iter().map(|x| T::lit(x.sqrt())).collect()
}

/// Dicke-basis vector of the coherent state at `(θ,φ)`.
pub fn coherent_vector<T: Real>(n_qubits: usize, theta: T, phi: T) -> DVector<Complex<T>> {
    let sb = sqrt_binomials::<T>(n_qubits);
    coherent_vector_with(&sb, theta, phi)
}

pub(crate) fn coherent_vector_with<T: Real>(sb: &[T], theta: T, phi: T) -> DVector<Complex<T>> {
    let a = amplitudes(sb, theta);
    DVector::from_fn(a.len(), |al, _| {
        let ang = phi * T::lit(al as f64);
        cplx(a[al] * ang.cos(), a[al] * ang.sin())
    })
}

/// Diagonal sums `g_d = Σ_α a_α a_{α+d} R[α,α+d]` for `d = 0..=N`.
fn diagonal_sums<T: Real>(r: &CMatrix<T>, a: &[T]) -> Vec<Complex<T>> {
    let n = a.len() - 1;
    (0..=n)
        .map(|d| {
            let mut acc = cplx(T::zero(), T::zero());
            for al in 0..=(n - d) {
                acc += r[(al, al + d)].scale(a[al] * a[al + d]);
            }
            acc
        })
        .collect()
}

#[inline]
fn combine<T: Real>(g: &[Complex<T>], phases: &[Complex<T>]) -> T {
    let mut acc = T::zero();
    for d in 1..g.len() {
        let z = g[d] * phases[d];
        acc += z.re;
    }
    g[0].re + acc * T::lit(2.0)
}

/// Normalizes `(θ,φ)` to `θ ∈ [0,π]`, `φ ∈ [0,2π)`.
pub fn wrap_angles<T: Real>(theta: T, phi: T) -> (T, T) {
    let two_pi = T::lit(2.0 * PI);
    let pi = T::lit(PI);
    let mut th = theta % two_pi;
    let mut ph = phi;
    if th < T::zero() {
        th += two_pi;
    }
    if th > pi {
        th = two_pi - th;
        ph += pi;
    }
    ph %= two_pi;
    if ph < T::zero() {
        ph += two_pi;
    }
    (th, ph)
}

/// Evaluator of `⟨z|R|z⟩` for a fixed number of qubits.
#[derive(Debug, Clone)]
pub struct CoherentEval<T: Real> {
    n_qubits: usize,
    sqrt_binom: Vec<T>,
}

impl<T: Real> CoherentEval<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            sqrt_binom: sqrt_binomials(n_qubits),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn vector(&self, theta: T, phi: T) -> DVector<Complex<T>> {
        coherent_vector_with(&self.sqrt_binom, theta, phi)
    }

    pub fn value(&self, r: &CMatrix<T>, theta: T, phi: T) -> T {
        let a = amplitudes(&self.sqrt_binom, theta);
        let g = diagonal_sums(r, &a);
        let phases: Vec<Complex<T>> = (0..=self.n_qubits)
            .map(|d| {
                let ang = phi * T::lit(d as f64);
                cplx(ang.cos(), ang.sin())
            })
            .collect();
        combine(&g, &phases)
    }

    /// Local maximization of `⟨z|R|z⟩` from `(θ,φ)` by damped Newton steps on
    /// central-difference derivatives, falling back to gradient steps where
    /// the Hessian is not negative definite. Never decreases the value.
    pub fn ascend(&self, r: &CMatrix<T>, theta: T, phi: T, steps: usize) -> (T, T, T) {
        let h = T::lit(1e-4f64.max(T::EPS.cbrt() * 10.0));
        let two = T::lit(2.0);
        let (mut th, mut ph) = (theta, phi);
        let mut f0 = self.value(r, th, ph);
        for _ in 0..steps {
            let fpp = self.value(r, th + h, ph + h);
            let fpm = self.value(r, th + h, ph - h);
            let fmp = self.value(r, th - h, ph + h);
            let fmm = self.value(r, th - h, ph - h);
            let ftp = self.value(r, th + h, ph);
            let ftm = self.value(r, th - h, ph);
            let fpp2 = self.value(r, th, ph + h);
            let fpm2 = self.value(r, th, ph - h);
            let gt = (ftp - ftm) / (two * h);
            let gp = (fpp2 - fpm2) / (two * h);
            let htt = (ftp - two * f0 + ftm) / (h * h);
            let hpp = (fpp2 - two * f0 + fpm2) / (h * h);
            let htp = (fpp - fpm - fmp + fmm) / (T::lit(4.0) * h * h);
            let det = htt * hpp - htp * htp;
            let (mut dt, mut dp) = if htt < T::zero() && det > T::zero() {
                // Newton: -H^{-1} g
                ((-(hpp * gt) + htp * gp) / det, (htp * gt - htt * gp) / det)
            } else {
                let scale = T::lit(0.1) / (gt.abs() + gp.abs() + T::lit(1e-30));
                (gt * scale.min(T::one()), gp * scale.min(T::one()))
            };
            let cap = T::lit(0.25);
            let len = (dt * dt + dp * dp).sqrt();
            if len > cap {
                dt *= cap / len;
                dp *= cap / len;
            }
            let mut improved = false;
            for _ in 0..20 {
                let (nt, np) = wrap_angles(th + dt, ph + dp);
                let f1 = self.value(r, nt, np);
                if f1 > f0 {
                    th = nt;
                    ph = np;
                    f0 = f1;
                    improved = true;
                    break;
                }
                dt *= T::lit(0.5);
                dp *= T::lit(0.5);
            }
            if !improved || (dt * dt + dp * dp).sqrt() < T::lit(1e-13) {
                break;
            }
        }
        (th, ph, f0)
    }
}

/// A precomputed `(θ,φ)` grid. Rows span `θ ∈ [0,π]` including the poles,
/// columns span `φ ∈ [0,2π)`.
#[derive(Debug, Clone)]
pub struct CoherentGrid<T: Real> {
    eval: CoherentEval<T>,
    thetas: Vec<T>,
    phis: Vec<T>,
    amps: Vec<Vec<T>>,
    phases: Vec<Vec<Complex<T>>>,
}

/// One grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint<T> {
    pub theta: T,
    pub phi: T,
    pub value: T,
}

impl<T: Real> CoherentGrid<T> {
    pub fn new(n_qubits: usize, n_theta: usize, n_phi: usize) -> Self {
        let n_theta = n_theta.max(2);
        let n_phi = n_phi.max(1);
        let eval = CoherentEval::new(n_qubits);
        let thetas: Vec<T> = (0..n_theta)
            .map(|i| T::lit(PI * i as f64 / (n_theta - 1) as f64))
            .collect();
        let phis: Vec<T> = (0..n_phi)
            .map(|j| T::lit(2.0 * PI * j as f64 / n_phi as f64))
            .collect();
        let amps = thetas
            .iter()
            .map(|&t| amplitudes(&eval.sqrt_binom, t))
            .collect();
        let phases = phis
            .iter()
            .map(|&p| {
                (0..=n_qubits)
                    .map(|d| {
                        let ang = p * T::lit(d as f64);
                        cplx(ang.cos(), ang.sin())
                    })
                    .collect()
            })
            .collect();
        Self {
            eval,
            thetas,
            phis,
            amps,
            phases,
        }
    }

    pub fn eval(&self) -> &CoherentEval<T> {
        &self.eval
    }

    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phis.len()
    }

    /// Half-spacings `(δθ, δφ)`: every point of the sphere is within these
    /// coordinate offsets of some grid node.
    pub fn half_spacing(&self) -> (f64, f64) {
        (
            PI / (self.thetas.len() - 1) as f64 / 2.0,
            PI / self.phis.len() as f64,
        )
    }

    /// The `top` largest grid values (descending), pole rows collapsed to a
    /// single node each.
    pub fn top(&self, r: &CMatrix<T>, top: usize) -> Vec<GridPoint<T>> {
        let top = top.max(1);
        let mut best: Vec<GridPoint<T>> = Vec::with_capacity(top + 1);
        let last = self.thetas.len() - 1;
        for (i, a) in self.amps.iter().enumerate() {
            let g = diagonal_sums(r, a);
            let cols = if i == 0 || i == last {
                1
            } else {
                self.phis.len()
            };
            for j in 0..cols {
                let v = combine(&g, &self.phases[j]);
                if best.len() < top || v > best[best.len() - 1].value {
                    let p = GridPoint {
                        theta: self.thetas[i],
                        phi: self.phis[j],
                        value: v,
                    };
                    let pos = best.partition_point(|b| b.value >= v);
                    best.insert(pos, p);
                    if best.len() > top {
                        best.pop();
                    }
                }
            }
        }
        best
    }

    /// Maximum grid value.
    pub fn max(&self, r: &CMatrix<T>) -> GridPoint<T> {
        self.top(r, 1)[0]
    }

    /// Minimum grid value.
    pub fn min(&self, r: &CMatrix<T>) -> GridPoint<T> {
        let neg = r.map(|z| -z);
        let p = self.max(&neg);
        GridPoint {
            value: -p.value,
            ..p
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand_herm(n: usize, seed: u64) -> CMatrix<f64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = CMatrix::<f64>::from_fn(n, n, |_, _| {
            cplx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        (&m + m.adjoint()).scale(0.5)
    }

    #[test]
    fn vectors_are_normalized_and_poles_are_dicke_states() {
        for n in 1..10 {
            let e = CoherentEval::<f64>::new(n);
            for (t, p) in [(0.3, 1.2), (2.0, 5.0), (1.0, 0.0)] {
                assert!((e.vector(t, p).norm() - 1.0).abs() < 1e-12);
            }
            let north = e.vector(0.0, 0.7);
            assert!((north[0].re - 1.0).abs() < 1e-15);
            let south = e.vector(PI, 0.0);
            assert!((south[n].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fast_value_matches_quadratic_form() {
        for n in [1usize, 3, 6] {
            let e = CoherentEval::<f64>::new(n);
            let r = rand_herm(n + 1, n as u64);
            for (t, p) in [(0.3, 1.2), (2.0, 5.0), (1.7, 3.1)] {
                let v = e.vector(t, p);
                let direct = (v.adjoint() * &r * &v)[(0, 0)].re;
                assert!((direct - e.value(&r, t, p)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn grid_and_ascent_find_maximum() {
        let n = 4;
        let r = rand_herm(n + 1, 42);
        let grid = CoherentGrid::<f64>::new(n, 64, 128);
        let best = grid.max(&r);
        let (t, p, v) = grid.eval().ascend(&r, best.theta, best.phi, 50);
        assert!(v >= best.value);
        // brute force on a much finer grid
        let fine = CoherentGrid::<f64>::new(n, 721, 1440);
        let fb = fine.max(&r);
        assert!(v >= fb.value - 1e-10, "{v} vs {}", fb.value);
        assert!((grid.eval().value(&r, t, p) - v).abs() < 1e-15);
    }

    #[test]
    fn wrap_angles_reflects() {
        let (t, p) = wrap_angles(-0.5f64, 0.1);
        assert!((t - 0.5).abs() < 1e-15 && (p - (0.1 + PI)).abs() < 1e-15);
        let (t, p) = wrap_angles(0.5f64, -0.1);
        assert!((t - 0.5).abs() < 1e-15 && (p - (2.0 * PI - 0.1)).abs() < 1e-15);
    }
}
