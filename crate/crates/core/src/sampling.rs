//! Random induced symmetric states.
//!
//! Method I draws a random pure state of `N + N_a` symmetric qubits and traces
//! out `N_a` of them; Method II draws a random pure state of the symmetric
//! space of `N` qubits tensored with a `d_a`-level ancilla and traces the
//! ancilla. Both reductions are computed without leaving the Dicke basis.
//!
//! Random pure states are normalized vectors of i.i.d. complex normals, each
//! component built from two independent real normals of variance 1/2 drawn in
//! (re, im) order from a ChaCha20 stream. The stream is selected by
//! `(seed, stream_index)` so trial `i` of a batch is reproducible on its own.

use crate::error::{Error, Result};
use crate::real::{cplx, CMatrix, Real};
use crate::symspace::{split_coefficients_sq, SymState};
use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::fmt;

/// One reproducible random substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Trace `N_a` qubits from a symmetric `(N + N_a)`-qubit pure state.
    #[serde(rename = "MI")]
    Qubits,
    /// Trace a `d_a`-level qudit from a pure state on `H_S ⊗ C^{d_a}`.
    #[serde(rename = "MII")]
    Qudit,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Qubits => "MI",
            Method::Qudit => "MII",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "MI" | "I" | "1" => Ok(Method::Qubits),
            "MII" | "II" | "2" => Ok(Method::Qudit),
            _ => Err(Error::InvalidParams(format!("unknown method '{s}'"))),
        }
    }
}

/// Generation parameters: `ancilla` is `N_a` for Method I, `d_a` for Method II.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MethodParams {
    pub method: Method,
    pub n_qubits: usize,
    pub ancilla: usize,
}

pub const MAX_MI_QUBITS: usize = 4096;
pub const MAX_MII_DIM: usize = 1 << 20;

impl MethodParams {
    pub fn new(method: Method, n_qubits: usize, ancilla: usize) -> Result<Self> {
        let p = Self {
            method,
            n_qubits,
            ancilla,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn mi(n_qubits: usize, n_ancilla: usize) -> Result<Self> {
        Self::new(Method::Qubits, n_qubits, n_ancilla)
    }

    pub fn mii(n_qubits: usize, d_ancilla: usize) -> Result<Self> {
        Self::new(Method::Qudit, n_qubits, d_ancilla)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 2 {
            return Err(Error::InvalidParams(format!(
                "need at least 2 qubits, got {}",
                self.n_qubits
            )));
        }
        if self.ancilla < 1 {
            return Err(Error::InvalidParams("ancilla must be >= 1".into()));
        }
        match self.method {
            Method::Qubits if self.n_qubits + self.ancilla > MAX_MI_QUBITS => {
                Err(Error::InvalidParams(format!(
                    "N + N_a = {} exceeds {MAX_MI_QUBITS}",
                    self.n_qubits + self.ancilla
                )))
            }
            Method::Qudit if (self.n_qubits + 1).saturating_mul(self.ancilla) > MAX_MII_DIM => {
                Err(Error::InvalidParams(format!(
                    "(N+1)·d_a = {} exceeds {MAX_MII_DIM}",
                    (self.n_qubits + 1) * self.ancilla
                )))
            }
            _ => Ok(()),
        }
    }

    /// Dimension of the global pure state.
    pub fn global_dim(&self) -> usize {
        match self.method {
            Method::Qubits => self.n_qubits + self.ancilla + 1,
            Method::Qudit => (self.n_qubits + 1) * self.ancilla,
        }
    }
}

/// Draws a unit vector from the unitarily invariant measure on `C^dim`.
pub fn random_pure<T: Real>(dim: usize, stream: RngStream) -> Result<DVector<Complex<T>>> {
    if dim == 0 {
        return Err(Error::InvalidParams("dimension must be >= 1".into()));
    }
    let mut rng = stream.rng();
    Ok(gaussian_unit_vector(dim, &mut rng))
}

pub(crate) fn gaussian_unit_vector<T: Real, R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> DVector<Complex<T>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    loop {
        let v: DVector<Complex<T>> = DVector::from_fn(dim, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            cplx(T::lit(re * s), T::lit(im * s))
        });
        let norm = v.norm();
        if norm > T::zero() {
            return v.unscale(norm);
        }
    }
}

/// Prepared sampler for one parameter point; the reduction coefficients are
/// computed once and reused for every draw.
#[derive(Debug, Clone)]
pub struct RisGenerator<T: Real> {
    params: MethodParams,
    // Method I only: c(α,j) for α ∈ [0,N], j ∈ [0,N_a].
    coeff: Option<DMatrix<T>>,
}

impl<T: Real> RisGenerator<T> {
    pub fn new(params: MethodParams) -> Result<Self> {
        params.validate()?;
        let coeff = match params.method {
            Method::Qubits => Some(
                split_coefficients_sq(params.n_qubits, params.ancilla).map(|x| T::lit(x.sqrt())),
            ),
            Method::Qudit => None,
        };
        Ok(Self { params, coeff })
    }

    pub fn params(&self) -> &MethodParams {
        &self.params
    }

    pub fn draw(&self, stream: RngStream) -> Result<SymState<T>> {
        let psi = random_pure(self.params.global_dim(), stream)?;
        self.reduce(&psi)
    }

    /// Reduced state of a given global pure state (Dicke basis of `N + N_a`
    /// qubits for Method I, row-major `(α, j)` for Method II).
    pub fn reduce(&self, psi: &DVector<Complex<T>>) -> Result<SymState<T>> {
        let n = self.params.n_qubits;
        let a = self.params.ancilla;
        if psi.len() != self.params.global_dim() {
            return Err(Error::Dimension {
                expected: self.params.global_dim(),
                got: psi.len(),
            });
        }
        let block = match &self.coeff {
            // B[α,j] = c(α,j) ψ[α+j], ρ₁ = B B†
            Some(c) => CMatrix::<T>::from_fn(n + 1, a + 1, |al, j| psi[al + j].scale(c[(al, j)])),
            // A[α,j] = ψ[α·d_a + j], ρ₂ = A A†
            None => CMatrix::<T>::from_fn(n + 1, a, |al, j| psi[al * a + j]),
        };
        let rho = &block * block.adjoint();
        SymState::from_matrix_unchecked(n, rho)
    }
}

/// Method I state for one substream.
pub fn ris_method1<T: Real>(params: MethodParams, stream: RngStream) -> Result<SymState<T>> {
    if params.method != Method::Qubits {
        return Err(Error::InvalidParams(
            "ris_method1 needs Method I params".into(),
        ));
    }
    RisGenerator::new(params)?.draw(stream)
}

/// Method II state for one substream.
pub fn ris_method2<T: Real>(params: MethodParams, stream: RngStream) -> Result<SymState<T>> {
    if params.method != Method::Qudit {
        return Err(Error::InvalidParams(
            "ris_method2 needs Method II params".into(),
        ));
    }
    RisGenerator::new(params)?.draw(stream)
}

/// JSON state document: `{"n_qubits": N, "matrix": [[[re, im], ...], ...]}`,
/// row-major in the Dicke basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n_qubits: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_state<T: Real>(state: &SymState<T>) -> Self {
        let m = state.matrix();
        Self {
            n_qubits: state.n_qubits(),
            matrix: (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re.to_f64(), m[(i, j)].im.to_f64()])
                        .collect()
                })
                .collect(),
        }
    }

    /// Converts to a validated state; shape errors and invariant violations
    /// are reported by name.
    pub fn to_state<T: Real>(&self) -> Result<SymState<T>> {
        let d = self.n_qubits + 1;
        if self.matrix.len() != d || self.matrix.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension {
                expected: d,
                got: self.matrix.len(),
            });
        }
        let m = CMatrix::<T>::from_fn(d, d, |i, j| {
            let [re, im] = self.matrix[i][j];
            cplx(T::lit(re), T::lit(im))
        });
        SymState::new(self.n_qubits, m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s)
            .map_err(|e| Error::InvalidState(format!("malformed state JSON: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::hermitian_eigenvalues;
    use crate::symspace::DickeIndex;

    fn basis(dim: usize, i: usize) -> DVector<Complex<f64>> {
        let mut v = DVector::zeros(dim);
        v[i] = cplx(1.0, 0.0);
        v
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = random_pure::<f64>(6, RngStream::new(7, 3)).unwrap();
        let b = random_pure::<f64>(6, RngStream::new(7, 3)).unwrap();
        let c = random_pure::<f64>(6, RngStream::new(7, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((a.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dim_one_has_unit_modulus() {
        let v = random_pure::<f64>(1, RngStream::new(1, 0)).unwrap();
        assert!((v[0].norm() - 1.0).abs() < 1e-15);
        assert!(random_pure::<f64>(0, RngStream::new(1, 0)).is_err());
    }

    #[test]
    fn method1_ground_state_maps_to_ground_state() {
        let g = RisGenerator::<f64>::new(MethodParams::mi(2, 1).unwrap()).unwrap();
        let rho = g.reduce(&basis(4, 0)).unwrap();
        let want = SymState::<f64>::dicke_projector(DickeIndex::new(0, 2).unwrap());
        assert!((rho.matrix() - want.matrix()).norm() < 1e-15);
    }

    #[test]
    fn method1_single_excitation() {
        // Tr_1 |D^1_3⟩⟨D^1_3| = 1/3 |D^0_2⟩⟨D^0_2| + 2/3 |D^1_2⟩⟨D^1_2|
        let g = RisGenerator::<f64>::new(MethodParams::mi(2, 1).unwrap()).unwrap();
        let rho = g.reduce(&basis(4, 1)).unwrap();
        let m = rho.matrix();
        assert!((m[(0, 0)].re - 1.0 / 3.0).abs() < 1e-15);
        assert!((m[(1, 1)].re - 2.0 / 3.0).abs() < 1e-15);
        let off: f64 = m.iter().map(|z| z.norm()).sum::<f64>() - 1.0;
        assert!(off.abs() < 1e-14);
    }

    #[test]
    fn method2_without_ancilla_is_pure() {
        let p = MethodParams::mii(4, 1).unwrap();
        let rho = ris_method2::<f64>(p, RngStream::new(3, 0)).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-13);
        let ev = hermitian_eigenvalues(rho.matrix()).unwrap();
        assert_eq!(ev.iter().filter(|x| x.abs() > 1e-10).count(), 1);
    }

    #[test]
    fn generated_states_are_valid_with_rank_bounds() {
        for (p, rank) in [
            (MethodParams::mi(4, 2).unwrap(), 3),
            (MethodParams::mi(3, 9).unwrap(), 4),
            (MethodParams::mii(5, 3).unwrap(), 3),
            (MethodParams::mii(3, 40).unwrap(), 4),
        ] {
            for t in 0..20 {
                let g = RisGenerator::<f64>::new(p).unwrap();
                let rho = g.draw(RngStream::new(11, t)).unwrap();
                rho.validate().unwrap();
                let ev = hermitian_eigenvalues(rho.matrix()).unwrap();
                assert!(ev.iter().filter(|x| x.abs() > 1e-10).count() <= rank);
            }
        }
    }

    #[test]
    fn method_mismatch_rejected() {
        let p = MethodParams::mii(4, 3).unwrap();
        assert!(ris_method1::<f64>(p, RngStream::new(0, 0)).is_err());
        let p = MethodParams::mi(4, 3).unwrap();
        assert!(ris_method2::<f64>(p, RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(MethodParams::mi(1, 3).is_err());
        assert!(MethodParams::mi(4, 0).is_err());
        assert!(MethodParams::mi(4, 4092).is_ok());
        assert!(MethodParams::mi(4, 4093).is_err());
        assert!(MethodParams::mii(3, 1 << 18).is_ok());
        assert!(MethodParams::mii(4, 1 << 18).is_err());
        assert_eq!("mii".parse::<Method>().unwrap(), Method::Qudit);
    }

    #[test]
    fn large_ancilla_uses_log_space_coefficients() {
        let p = MethodParams::mi(4, 300).unwrap();
        let rho = ris_method1::<f64>(p, RngStream::new(5, 1)).unwrap();
        rho.validate().unwrap();
    }

    #[test]
    fn state_file_round_trip_and_errors() {
        let rho =
            ris_method1::<f64>(MethodParams::mi(3, 2).unwrap(), RngStream::new(2, 2)).unwrap();
        let json = StateFile::from_state(&rho).to_json();
        let back: SymState<f64> = StateFile::from_json(&json).unwrap().to_state().unwrap();
        assert!((back.matrix() - rho.matrix()).norm() < 1e-15);
        assert!(StateFile::from_json("{not json").is_err());
        let bad = StateFile {
            n_qubits: 1,
            matrix: vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [1.0, 0.0]]],
        };
        let err = bad.to_state::<f64>().unwrap_err().to_string();
        assert!(err.contains("trace"), "{err}");
    }

    #[test]
    fn f32_generation() {
        let p = MethodParams::mii(4, 6).unwrap();
        let rho = ris_method2::<f32>(p, RngStream::new(9, 9)).unwrap();
        rho.validate().unwrap();
    }
}
