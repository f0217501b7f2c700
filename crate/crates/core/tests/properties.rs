mod common;

use common::{random_graph, random_seeds};
use nodeclass::engine::run_rounds;
use nodeclass::eval::generate_planted;
use nodeclass::graph::{
    laplacian, reorder_labeled_first, symmetric_normalize, transition_matrix, DanglingPolicy,
};
use nodeclass::ica::{ica_run, LocalClassifierSpec};
use nodeclass::io::{format_graph, format_result, parse_graph, parse_labels, LabelVocab};
use nodeclass::solve::{
    fixed_point, leading_eigenvectors, linear_solve, second_order, StoppingWalk,
};
use nodeclass::walk::{lp_closed_form, tstep_walk};
use nodeclass::Matrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph_params() -> impl Strategy<Value = (usize, usize, bool, u64)> {
    (2usize..40, 0usize..60, any::<bool>(), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laplacians_are_positive_semidefinite((n, extra, _, seed) in graph_params(), xs in prop::collection::vec(-5.0f64..5.0, 40)) {
        let g = random_graph(n, extra, false, seed);
        let x = &xs[..n];
        for normalized in [false, true] {
            let l = laplacian(&g, normalized).unwrap();
            let lx = l.mul_vec(x);
            let q: f64 = x.iter().zip(&lx).map(|(a, b)| a * b).sum();
            prop_assert!(q >= -1e-9, "xᵀLx = {q}");
        }
    }

    #[test]
    fn normalized_walk_plus_laplacian_is_identity((n, extra, _, seed) in graph_params()) {
        let g = random_graph(n, extra, false, seed);
        let p = symmetric_normalize(&g).unwrap().to_dense();
        let l = laplacian(&g, true).unwrap().to_dense();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((p[(i, j)] + l[(i, j)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reorder_round_trips((n, extra, directed, seed) in graph_params()) {
        let g = random_graph(n, extra, directed, seed);
        let y = random_seeds(n, 3, 0.3, seed);
        let (pg, py, ord) = reorder_labeled_first(&g, &y);
        prop_assert!((0..ord.labeled_count()).all(|i| py.is_seed(i)));
        prop_assert_eq!(ord.restore_graph(&pg), g);
        prop_assert_eq!(ord.restore_labels(&py), y);
    }

    #[test]
    fn lp_is_permutation_equivariant((n, extra, directed, seed) in graph_params()) {
        let g = random_graph(n, extra, directed, seed);
        let y = random_seeds(n, 2, 0.3, seed);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let base = lp_closed_form(&g, &y).unwrap().labels;
        let moved = lp_closed_form(&g.permute(&perm), &y.permute(&perm)).unwrap().labels;
        for (i, &pi) in perm.iter().enumerate() {
            for (a, b) in base.row(i).iter().zip(moved.row(pi)) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn top_k_at_label_count_changes_nothing((n, extra, directed, seed) in graph_params()) {
        let g = random_graph(n, extra, directed, seed);
        let y = random_seeds(n, 3, 0.3, seed);
        let plain = ica_run(&g, &y, &LocalClassifierSpec::vote(), 10).unwrap();
        let spec = LocalClassifierSpec { top_k: Some(3), ..LocalClassifierSpec::vote() };
        let pruned = ica_run(&g, &y, &spec, 10).unwrap();
        prop_assert_eq!(plain.labels, pruned.labels);
    }

    #[test]
    fn unit_beta_is_first_order((n, extra, directed, seed) in graph_params()) {
        let g = random_graph(n, extra, directed, seed);
        let t = transition_matrix(&g, DanglingPolicy::SelfLoop).unwrap();
        let y0 = random_seeds(n, 2, 0.5, seed).into_scores();
        let a = fixed_point(|y, out| t.apply_into(y, out), y0.clone(), 1e-9, 200).unwrap();
        let b = second_order(&t, y0, 1.0, 1e-9, 200).unwrap();
        prop_assert_eq!(a.trace.residuals, b.trace.residuals);
        prop_assert_eq!(a.value, b.value);
    }

    #[test]
    fn linear_solve_residual_is_small(n in 1usize..25, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = rng.random_range(-1.0..1.0);
            }
            a[(i, i)] += n as f64;
        }
        let b = Matrix::from_vec(n, 2, (0..2 * n).map(|_| rng.random_range(-1.0..1.0)).collect());
        let x = linear_solve(&a, &b).unwrap();
        prop_assert!(a.matmul(&x).max_abs_diff(&b) < 1e-10);
    }

    #[test]
    fn stochastic_spectrum_is_bounded((n, extra, _, seed) in graph_params()) {
        let g = random_graph(n.max(3), extra, false, seed);
        let t = transition_matrix(&g, DanglingPolicy::Reject).unwrap().to_dense();
        if let Ok(e) = leading_eigenvectors(&t, 1) {
            prop_assert!((e.values[0].abs() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn walk_end_distribution_has_unit_mass((n, extra, directed, seed) in graph_params(), stop in 0.05f64..1.0) {
        let g = random_graph(n, extra, directed, seed);
        let walk = StoppingWalk::new(&g, vec![stop; n]);
        let d = walk.end_distribution(seed as usize % n, 300, seed).unwrap();
        prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(d.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn graph_text_round_trips((n, extra, directed, seed) in graph_params()) {
        let g = random_graph(n, extra, directed, seed);
        prop_assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
    }

    #[test]
    fn tstep_rows_are_distributions((n, extra, directed, seed) in graph_params(), t in 1usize..6) {
        let g = random_graph(n, extra, directed, seed);
        let y = random_seeds(n, 3, 0.2, seed);
        let r = tstep_walk(&g, &y, t).unwrap();
        for i in 0..n {
            let s = r.labels.scores().row_sum(i);
            prop_assert!(s == 0.0 || (s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn engine_ignores_worker_count((n, extra, directed, seed) in graph_params(), workers in 2usize..6) {
        let g = random_graph(n, extra, directed, seed);
        let y = random_seeds(n, 3, 0.2, seed);
        prop_assert_eq!(run_rounds(&g, &y, 1, 4, true).unwrap(), run_rounds(&g, &y, workers, 4, true).unwrap());
    }
}

#[test]
fn result_text_parses_back_as_labels() {
    let g = random_graph(30, 40, false, 3);
    let y = random_seeds(30, 3, 0.2, 3);
    let vocab = LabelVocab::from_names(&["a", "b", "c"]);
    let r = lp_closed_form(&g, &y).unwrap().labels;
    let text = format_result(&r, &vocab);
    let (back, _) = parse_labels(&text, 30, Some(&vocab)).unwrap();
    // six printed decimals
    assert!(back.scores().max_abs_diff(r.scores()) < 1e-5);
}

#[test]
fn planted_intra_degree_matches_expectation() {
    let (n, blocks, p_in) = (200, 2, 0.3);
    let mut total = 0.0;
    for seed in 0..20 {
        let p = generate_planted(n, blocks, p_in, 0.02, 0.1, seed).unwrap();
        let intra = p
            .graph
            .edges()
            .iter()
            .filter(|e| p.truth[e.src] == p.truth[e.dst])
            .count();
        total += 2.0 * intra as f64 / n as f64;
    }
    let mean = total / 20.0;
    let expected = p_in * (n / blocks - 1) as f64;
    assert!(
        (mean - expected).abs() <= 0.1 * expected,
        "{mean} vs {expected}"
    );
}

#[test]
fn walk_methods_solve_planted_blocks_without_cross_edges() {
    use nodeclass::eval::holdout_evaluate;
    use nodeclass::{Method, MethodConfig};
    let p = generate_planted(60, 3, 0.4, 0.0, 0.2, 5).unwrap();
    for m in Method::ALL.into_iter().filter(|m| !m.is_ica()) {
        let r = holdout_evaluate(&p.graph, &p.labels, &MethodConfig::new(m), 0.3, 1).unwrap();
        assert_eq!(r.accuracy, 1.0, "{m}");
    }
}
