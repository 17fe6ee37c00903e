use fracmat::{
    assemble, gl_coeffs, kron, riesz_centered_coeffs, shift_ne, shift_sw, solve, solve_problem,
    CoeffVector, DelayTerm, Eliminator, Grid, Orientation, ProblemSpec, RieszVariant, SolverPath,
    Source, SparseOperator, StackedField, StripMatrix, TripletBuilder,
};
use proptest::prelude::*;
use statrs::function::gamma::{gamma, ln_gamma};

fn dense_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let inner = b.len();
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).map(|k| row[k] * b[k][c]).sum())
                .collect()
        })
        .collect()
}

fn max_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

/// `1 / Γ(z)` for any real `z`, zero at the poles.
fn rgamma(z: f64) -> f64 {
    if z > 0.0 {
        return (-ln_gamma(z)).exp();
    }
    if z == z.floor() {
        return 0.0;
    }
    // 1/Γ(z) = sin(πz) Γ(1-z) / π
    (std::f64::consts::PI * z).sin() * gamma(1.0 - z) / std::f64::consts::PI
}

fn orientation() -> impl Strategy<Value = Orientation> {
    prop_oneof![Just(Orientation::Lower), Just(Orientation::Upper)]
}

fn strip_pair() -> impl Strategy<Value = (StripMatrix, StripMatrix)> {
    (1usize..=32, orientation()).prop_flat_map(|(n, o)| {
        (
            prop::collection::vec(-1.0f64..1.0, n),
            prop::collection::vec(-1.0f64..1.0, n),
            0.25f64..4.0,
            0.25f64..4.0,
        )
            .prop_map(move |(a, b, sa, sb)| {
                (
                    StripMatrix::new(o, CoeffVector::from_values(a), sa),
                    StripMatrix::new(o, CoeffVector::from_values(b), sb),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn strip_products_commute((a, b) in strip_pair()) {
        let ab = a.mul(&b).unwrap().to_dense();
        let ba = b.mul(&a).unwrap().to_dense();
        prop_assert!(max_diff(&ab, &ba) <= 1e-12);
    }

    #[test]
    fn strip_product_matches_dense((a, b) in strip_pair()) {
        let fast = a.mul(&b).unwrap().to_dense();
        let slow = dense_mul(&a.to_dense(), &b.to_dense());
        prop_assert!(max_diff(&fast, &slow) <= 1e-12);
    }
}

proptest! {
    #[test]
    fn strip_sum_and_apply_match_dense((a, b) in strip_pair(), v in prop::collection::vec(-1.0f64..1.0, 32)) {
        let n = a.size();
        let sum = a.add(&b).unwrap().to_dense();
        let (da, db) = (a.to_dense(), b.to_dense());
        for r in 0..n {
            for c in 0..n {
                prop_assert!((sum[r][c] - da[r][c] - db[r][c]).abs() <= 1e-12);
            }
        }
        let x = &v[..n];
        let y = a.apply(x).unwrap();
        for r in 0..n {
            let expect: f64 = (0..n).map(|c| da[r][c] * x[c]).sum();
            prop_assert!((y[r] - expect).abs() <= 1e-12);
        }
        let t = a.transpose().to_dense();
        for r in 0..n {
            for c in 0..n {
                prop_assert_eq!(t[r][c], da[c][r]);
            }
        }
    }

    #[test]
    fn gl_coeffs_match_gamma_binomials(alpha in 0.01f64..2.0, n in 0usize..=100) {
        let w = gl_coeffs(alpha, n);
        prop_assert_eq!(w.len(), n + 1);
        for j in 0..=n {
            let jf = j as f64;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let direct = sign * gamma(alpha + 1.0) * rgamma(jf + 1.0) * rgamma(alpha - jf + 1.0);
            prop_assert!((w[j] - direct).abs() <= 1e-12, "j={} {} vs {}", j, w[j], direct);
        }
    }

    #[test]
    fn gl_partial_sums_are_lower_order_coeffs(alpha in 0.01f64..2.0, n in 0usize..=80) {
        // Σ_{j<=k} ω_j^(α) = ω_k^(α-1)
        let w = gl_coeffs(alpha, n);
        let lower = gl_coeffs(alpha - 1.0, n);
        let mut acc = 0.0;
        for k in 0..=n {
            acc += w[k];
            prop_assert!((acc - lower[k]).abs() <= 1e-12);
        }
    }

    #[test]
    fn centred_coeffs_match_direct_formula(beta in 1.001f64..2.0, n in 0usize..=150) {
        let w = riesz_centered_coeffs(beta, n).unwrap();
        let half = beta / 2.0;
        let lead = gamma(beta + 1.0) * (beta * std::f64::consts::PI / 2.0).cos();
        for k in 0..=n {
            let kf = k as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let direct = sign * lead * rgamma(half - kf + 1.0) * rgamma(half + kf + 1.0);
            prop_assert!((w[k] - direct).abs() <= 1e-12 * direct.abs().max(1.0));
        }
        // sign pattern: negative centre, nonnegative tail
        prop_assert!(w[0] < 0.0);
        prop_assert!(w.values()[1..].iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn kron_of_triangular_is_triangular(
        a in prop::collection::vec(-2.0f64..2.0, 1..6),
        b in prop::collection::vec(-2.0f64..2.0, 1..6),
    ) {
        let ta = StripMatrix::new(Orientation::Upper, CoeffVector::from_values(a), 1.0).to_sparse();
        let tb = StripMatrix::new(Orientation::Upper, CoeffVector::from_values(b.clone()), 1.0).to_sparse();
        let k = kron(&ta, &tb);
        prop_assert_eq!(k.shape(), (ta.rows() * tb.rows(), ta.cols() * tb.cols()));
        prop_assert!(k.triplets().all(|(r, c, _)| c >= r));
        // identity on the left gives a block diagonal with tb's bandwidth
        let d = kron(&SparseOperator::identity(3), &tb);
        let (lo, hi) = d.bandwidth();
        prop_assert_eq!(lo, 0);
        prop_assert!(hi < b.len());
        prop_assert!(d.triplets().all(|(r, c, _)| r / b.len() == c / b.len()));
    }

    #[test]
    fn shifted_half_sum_is_symmetric(alpha in 1.01f64..2.0, n in 1usize..40) {
        let w = gl_coeffs(alpha, n + 1);
        let sw = shift_sw(&w, n, 1.0).unwrap();
        let ne = shift_ne(&w, n, 1.0, Orientation::Lower).unwrap();
        prop_assert!(sw.add(&ne).unwrap().is_symmetric(0.0));
        prop_assert_eq!(sw.transpose().max_abs_diff(&ne).unwrap(), 0.0);
    }

    #[test]
    fn eliminator_restrict_extend_round_trip(
        size in 1usize..40,
        mask in prop::collection::vec(any::<bool>(), 40),
        values in prop::collection::vec(-5.0f64..5.0, 40),
    ) {
        let omitted: Vec<usize> = (1..=size).filter(|&i| mask[i - 1]).collect();
        let e = Eliminator::new(size, omitted.clone()).unwrap();
        prop_assert_eq!(e.kept_len(), size - omitted.len());
        let x = &values[..size];
        let r = e.restrict(x).unwrap();
        let back = e.extend(&r).unwrap();
        for i in 0..size {
            let expect = if omitted.contains(&(i + 1)) { 0.0 } else { x[i] };
            prop_assert_eq!(back[i], expect);
        }
        prop_assert_eq!(e.restrict(&back).unwrap(), r.clone());
        let op = e.to_operator();
        prop_assert_eq!(op.mul_vec(x).unwrap(), r);
    }

    #[test]
    fn stacking_round_trip(m in 2usize..12, n in 1usize..12, seed in any::<u64>()) {
        let g = Grid::new(0.0, 1.0, 1.0, m, n).unwrap();
        let f = |x: f64, t: f64| (seed % 97) as f64 + 3.0 * x - 7.0 * t * x;
        let s = StackedField::sample(&g, f);
        let table = s.unstack();
        let mut seen = vec![false; g.len()];
        for (j, layer) in table.iter().enumerate() {
            for (i, &v) in layer.iter().enumerate() {
                prop_assert_eq!(v, f(g.x(i), g.t(j)));
                let p = g.stack_index(i, j);
                prop_assert!(!seen[p]);
                seen[p] = true;
                prop_assert_eq!(g.node(p), (i, j));
            }
        }
        prop_assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn single_unknown_closed_form(h in 0.01f64..2.0, tau in 1e-4f64..1.0) {
        let g = Grid::new(0.0, 2.0 * h, tau, 2, 1).unwrap();
        let p = ProblemSpec::new(1.0, 2.0).with_source(Source::Constant(8.0));
        let sol = solve_problem(&p, &g, SolverPath::Global).unwrap();
        let expect = 8.0 / (1.0 / tau + 2.0 / (h * h));
        prop_assert!((sol.y.value(1, 1) - expect).abs() <= 1e-12 * expect.max(1.0));
    }

    #[test]
    fn sparse_lu_solves_random_systems(n in 1usize..40, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut t = TripletBuilder::new(n, n);
        for r in 0..n {
            for c in 0..n {
                if r == c || rng.gen_bool(0.2) {
                    t.push(r, c, rng.gen_range(-1.0..1.0));
                }
            }
            t.push(r, r, if rng.gen_bool(0.5) { 3.0 } else { -3.0 });
        }
        let a = t.finish();
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let rep = solve(&a, &b).unwrap();
        prop_assert!(rep.residual_inf_norm <= 1e-10);
    }
}

fn layer_of(system: &fracmat::AssembledSystem, idx: usize) -> usize {
    system.kept_nodes[idx].1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_system_never_couples_to_later_layers(
        alpha in prop_oneof![Just(0.5), Just(1.0)],
        beta in 1.1f64..=2.0,
        m in 2usize..10,
        n in 2usize..12,
        delay in prop::option::of((0.1f64..=1.0, 0usize..6)),
        variant in prop_oneof![Just(RieszVariant::Centered), Just(RieszVariant::HalfSum)],
    ) {
        let g = Grid::new(0.0, 1.0, 0.5, m, n).unwrap();
        let mut p = ProblemSpec::new(alpha, beta).with_riesz(variant).with_source(Source::Constant(8.0));
        if let Some((gamma, k)) = delay {
            p = p.with_delay(DelayTerm::new(gamma, k.min(n - 1)));
        }
        let sys = assemble(&p, &g).unwrap();
        prop_assert_eq!(sys.unknowns(), (m - 1) * n);
        for (r, c, _) in sys.reduced_matrix.triplets() {
            prop_assert!(layer_of(&sys, c) <= layer_of(&sys, r));
        }
        let g_sol = solve_problem(&p, &g, SolverPath::Global).unwrap();
        let t_sol = solve_problem(&p, &g, SolverPath::Marching).unwrap();
        let scale = g_sol.y.max_abs().max(1e-300);
        let diff = g_sol.y.values().iter().zip(t_sol.y.values()).fold(0.0f64, |d, (a, b)| d.max((a - b).abs()));
        prop_assert!(diff / scale <= 1e-10);
    }

    #[test]
    fn specialization_chain(m in 2usize..12, n in 1usize..10, alpha in 0.1f64..1.0, beta in 1.1f64..2.0) {
        let g = Grid::new(0.0, 1.0, 0.1, m, n).unwrap();
        let f = Source::Constant(8.0);
        let ex1 = assemble(&ProblemSpec::new(1.0, 2.0).with_source(f.clone()), &g).unwrap();
        // both Riesz variants reduce to the same classical system at (1, 2)
        for variant in [RieszVariant::Centered, RieszVariant::HalfSum] {
            let p = ProblemSpec::new(1.0, 2.0).with_riesz(variant).with_source(f.clone());
            let sys = assemble(&p, &g).unwrap();
            prop_assert_eq!(sys.reduced_matrix.max_abs_diff(&ex1.reduced_matrix).unwrap(), 0.0);
        }
        // delay with k = 0 and gamma = alpha
        let plain = ProblemSpec::new(alpha, beta).with_source(f.clone());
        let delayed = plain.clone().with_delay(DelayTerm::new(alpha, 0));
        let a = assemble(&plain, &g).unwrap();
        let b = assemble(&delayed, &g).unwrap();
        prop_assert_eq!(a.reduced_matrix.max_abs_diff(&b.reduced_matrix).unwrap(), 0.0);
    }
}
