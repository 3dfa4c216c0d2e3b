mod common;

use common::*;
use proptest::prelude::*;
use symris::geometry::{distance_to_mms, hs_distance};
use symris::real::{hermiticity_residual, trace_re};
use symris::spectra::{partial_transpose, partial_transpose_embedded};
use symris::symspace::{embed_bipartite, make_embedding, max_cut};
use symris::{Method, MethodParams, RisGenerator, RngStream};

fn params() -> impl Strategy<Value = MethodParams> {
    (
        prop_oneof![Just(Method::Qubits), Just(Method::Qudit)],
        2usize..=8,
        1usize..=20,
    )
        .prop_map(|(m, n, a)| MethodParams::new(m, n, a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_states_are_valid(p in params(), seed in any::<u64>(), t in 0u64..1000) {
        let rho = RisGenerator::<f64>::new(p).unwrap().draw(RngStream::new(seed, t)).unwrap();
        prop_assert!(rho.validate().is_ok());
        let ev = sorted_eigenvalues(rho.matrix());
        let bound = match p.method {
            Method::Qubits => (p.n_qubits + 1).min(p.ancilla + 1),
            Method::Qudit => (p.n_qubits + 1).min(p.ancilla),
        };
        prop_assert!(ev.iter().filter(|&&x| x > 1e-10).count() <= bound);
    }

    #[test]
    fn embedding_is_isometric(p in params(), seed in any::<u64>()) {
        let rho = RisGenerator::<f64>::new(p).unwrap().draw(RngStream::new(seed, 0)).unwrap();
        let n = p.n_qubits;
        let want = sorted_eigenvalues(rho.matrix());
        for k in 1..=max_cut(n) {
            let m = embed_bipartite(&rho, &make_embedding(n, k).unwrap()).unwrap();
            let got = sorted_eigenvalues(&m);
            let dim = got.len();
            prop_assert!(max_abs_diff(&got, &padded(want.clone(), dim)) < 1e-10);
        }
    }

    #[test]
    fn coefficient_rows_are_unitary(n in 2usize..=64, kf in 0.0f64..1.0) {
        let k = 1 + ((max_cut(n) - 1) as f64 * kf) as usize;
        let emb = make_embedding::<f64>(n, k).unwrap();
        for alpha in 0..=n {
            let s: f64 = (0..=k)
                .filter(|&a| alpha >= a && alpha - a <= n - k)
                .map(|a| emb.coeff(a, alpha - a).powi(2))
                .sum();
            prop_assert!((s - 1.0).abs() < 1e-14, "N={} k={} α={}: {}", n, k, alpha, s);
        }
    }

    #[test]
    fn partial_transpose_identities(p in params(), seed in any::<u64>()) {
        let rho = RisGenerator::<f64>::new(p).unwrap().draw(RngStream::new(seed, 1)).unwrap();
        for k in 1..=max_cut(p.n_qubits) {
            let emb = make_embedding(p.n_qubits, k).unwrap();
            let pt = partial_transpose(&rho, k).unwrap();
            prop_assert!((trace_re(&pt) - 1.0).abs() < 1e-12);
            prop_assert!(hermiticity_residual(&pt) < 1e-12);
            let back = partial_transpose_embedded(&pt, &emb);
            prop_assert!(max_entry_diff(&back, &embed_bipartite(&rho, &emb).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn purity_identity(p in params(), seed in any::<u64>()) {
        let rho = RisGenerator::<f64>::new(p).unwrap().draw(RngStream::new(seed, 2)).unwrap();
        let d = distance_to_mms(&rho);
        prop_assert!((d * d - (rho.purity() - 1.0 / rho.dim() as f64)).abs() < 1e-12);
    }

    #[test]
    fn metric_axioms(p in params(), seed in any::<u64>()) {
        let g = RisGenerator::<f64>::new(p).unwrap();
        let s: Vec<_> = (0..3).map(|t| g.draw(RngStream::new(seed, t)).unwrap()).collect();
        let d = |i: usize, j: usize| hs_distance(s[i].matrix(), s[j].matrix()).unwrap();
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert_eq!(d(2, 2), 0.0);
        prop_assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12);
    }
}

#[test]
fn triangle_inequality_on_many_triples() {
    let g = RisGenerator::<f64>::new(MethodParams::mi(4, 12).unwrap()).unwrap();
    let s: Vec<_> = (0..60)
        .map(|t| g.draw(RngStream::new(9, t)).unwrap())
        .collect();
    let mut checked = 0;
    for i in 0..s.len() {
        for j in 0..s.len() {
            let k = (i * 7 + j * 13) % s.len();
            let dij = hs_distance(s[i].matrix(), s[j].matrix()).unwrap();
            let djk = hs_distance(s[j].matrix(), s[k].matrix()).unwrap();
            let dik = hs_distance(s[i].matrix(), s[k].matrix()).unwrap();
            assert!(dik <= dij + djk + 1e-12);
            checked += 1;
        }
    }
    assert!(checked >= 1000);
}
