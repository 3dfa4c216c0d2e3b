mod common;

use common::*;
use symris::spectra::partial_transpose;
use symris::symspace::{embed_bipartite, make_embedding, max_cut};
use symris::{MethodParams, RisGenerator, RngStream, SymState};

#[test]
fn embedding_matches_full_space_regrouping() {
    for n in 2..=7 {
        for k in 1..=max_cut(n) {
            let emb = make_embedding::<f64>(n, k).unwrap();
            for t in 0..5 {
                let rho = random_state(n, 11, t);
                let full = to_full(&rho);
                let want = full_to_bipartite_symmetric(&full, n, k);
                let got = embed_bipartite(&rho, &emb).unwrap();
                let d = max_entry_diff(&got, &want);
                assert!(d < 1e-12, "N={n} k={k}: {d:e}");
            }
        }
    }
}

#[test]
fn partial_transpose_spectra_match_full_space() {
    for n in 2..=6 {
        for k in 1..=max_cut(n) {
            for t in 0..5 {
                let rho = random_state(n, 12, t);
                let full = full_partial_transpose(&to_full(&rho), n, k);
                let want = sorted_eigenvalues(&full);
                let got = padded(
                    sorted_eigenvalues(&partial_transpose(&rho, k).unwrap()),
                    1 << n,
                );
                let d = max_abs_diff(&got, &want);
                assert!(d < 1e-9, "N={n} k={k}: {d:e}");
            }
        }
    }
}

#[test]
fn dicke_half_filled_is_npt_in_full_space() {
    let rho = SymState::<f64>::dicke_projector(symris::DickeIndex::new(2, 4).unwrap());
    for k in 1..=2 {
        let ev = sorted_eigenvalues(&full_partial_transpose(&to_full(&rho), 4, k));
        assert!(ev[0] < -0.1);
        let ours = sorted_eigenvalues(&partial_transpose(&rho, k).unwrap());
        assert!((ours[0] - ev[0]).abs() < 1e-12);
    }
}

#[test]
fn method1_matches_trace_then_project() {
    for (n, na) in [(2, 1), (2, 5), (3, 3), (4, 2), (4, 6), (5, 5)] {
        let params = MethodParams::mi(n, na).unwrap();
        let g = RisGenerator::<f64>::new(params).unwrap();
        let iso = dicke_isometry(n + na);
        let sys = dicke_isometry(n);
        for t in 0..5 {
            let psi =
                symris::sampling::random_pure::<f64>(n + na + 1, RngStream::new(3, t)).unwrap();
            let full_psi = &iso * &psi;
            let reduced = trace_last_qubits(&full_psi, n + na, na);
            let want = sys.adjoint() * reduced * &sys;
            let got = g.reduce(&psi).unwrap();
            let d = max_entry_diff(got.matrix(), &want);
            assert!(d < 1e-10, "N={n} N_a={na}: {d:e}");
        }
    }
}

#[test]
fn method2_is_reshape_and_gram() {
    let params = MethodParams::mii(3, 4).unwrap();
    let g = RisGenerator::<f64>::new(params).unwrap();
    let psi = symris::sampling::random_pure::<f64>(16, RngStream::new(5, 0)).unwrap();
    let rho = g.reduce(&psi).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            let want: C64 = (0..4).map(|j| psi[a * 4 + j] * psi[b * 4 + j].conj()).sum();
            assert!((rho.matrix()[(a, b)] - want).norm() < 1e-14);
        }
    }
}
