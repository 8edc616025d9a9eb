//! Property tests for the spec'd invariants that are not already part of
//! the acceptance suite.

use proptest::prelude::*;

use qshuffle::algebra::{
    antipode, deconcat, hoffman_exp, hoffman_log, quasi_shuffle, shuffle, BracketTable, LetterId,
    Poly, Word,
};
use qshuffle::alphabet::build_alphabet;
use qshuffle::levy::{
    bracket_vectors, power_bracket_vector, reduce_against, LevySpec, ProcessVector, Reduction,
};
use qshuffle::rational::{rat, ratio, Rational};
use qshuffle::teugels::gram_data;

/// The ±1 compound-Poisson bracket table: letters x1, t, x1^2 with
/// [x1,x1] = x1^2, [x1,x1^2] = x1, [x1^2,x1^2] = x1^2.
fn pm_one_table() -> BracketTable {
    let spec = LevySpec::with_atoms(
        "x1",
        rat(0),
        rat(0),
        rat(2),
        vec![(rat(1), ratio(1, 2)), (rat(-1), ratio(1, 2))],
    );
    build_alphabet(&[spec], 6).unwrap().table().clone()
}

fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u32..3, 0..=max_len)
        .prop_map(|ids| Word::from_letters(ids.into_iter().map(LetterId)))
}

fn arb_coeff() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn arb_poly(max_len: usize, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((arb_word(max_len), arb_coeff()), 1..=max_terms)
        .prop_map(Poly::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quasi_shuffle_distributes_over_addition(
        p in arb_poly(3, 2),
        q in arb_poly(3, 2),
        r in arb_poly(3, 2),
        c in arb_coeff(),
    ) {
        let t = pm_one_table();
        let lhs = quasi_shuffle(&p.add(&q.scaled(&c)), &r, &t).unwrap();
        let rhs = quasi_shuffle(&p, &r, &t)
            .unwrap()
            .add(&quasi_shuffle(&q, &r, &t).unwrap().scaled(&c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn filtered_degree_bound_holds(v in arb_word(4), w in arb_word(4)) {
        let t = pm_one_table();
        let bound = t.word_grade(&v).unwrap() + t.word_grade(&w).unwrap();
        let p = quasi_shuffle(&Poly::from_word(v), &Poly::from_word(w), &t).unwrap();
        for (u, _) in p.terms() {
            prop_assert!(t.word_grade(u).unwrap() <= bound);
        }
    }

    #[test]
    fn word_grade_is_additive_under_concat(v in arb_word(4), w in arb_word(4)) {
        let t = pm_one_table();
        prop_assert_eq!(
            t.word_grade(&v.concat(&w)).unwrap(),
            t.word_grade(&v).unwrap() + t.word_grade(&w).unwrap()
        );
        prop_assert_eq!(deconcat(&v.concat(&w)).len(), v.len() + w.len() + 1);
    }

    #[test]
    fn exp_log_round_trip(p in arb_poly(4, 3)) {
        let t = pm_one_table();
        let e = hoffman_exp(&p, &t).unwrap();
        prop_assert_eq!(hoffman_log(&e, &t).unwrap(), p.clone());
        let l = hoffman_log(&p, &t).unwrap();
        prop_assert_eq!(hoffman_exp(&l, &t).unwrap(), p);
    }

    #[test]
    fn antipode_satisfies_the_convolution_identity(w in arb_word(4)) {
        prop_assume!(!w.is_empty());
        let t = pm_one_table();
        let mut conv = Poly::zero();
        for (u, v) in deconcat(&w) {
            let su = antipode(&u, &t).unwrap();
            conv.add_assign(&quasi_shuffle(&su, &Poly::from_word(v), &t).unwrap());
        }
        prop_assert!(conv.is_zero());
    }

    #[test]
    fn poly_json_round_trip(p in arb_poly(4, 4)) {
        let t = pm_one_table();
        let dto = t.poly_to_dto(&p);
        let js = serde_json::to_string(&dto).unwrap();
        let back: qshuffle::algebra::PolyDto = serde_json::from_str(&js).unwrap();
        prop_assert_eq!(t.poly_from_dto(&back).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shuffle_term_count_is_binomial_for_distinct_letters(a in 0usize..=3, b in 0usize..=3) {
        let v = Word::from_letters((0..a as u32).map(LetterId));
        let w = Word::from_letters((a as u32..(a + b) as u32).map(LetterId));
        let p = shuffle(&Poly::from_word(v), &Poly::from_word(w));
        let binom = {
            let mut acc = 1usize;
            for i in 0..b {
                acc = acc * (a + b - i) / (i + 1);
            }
            acc
        };
        prop_assert_eq!(p.num_terms(), binom);
        for (_, c) in p.terms() {
            prop_assert_eq!(c.clone(), rat(1));
        }
    }

    #[test]
    fn gaussian_elimination_reconstructs_spanned_targets(
        coords in prop::collection::vec((0usize..5, -4i64..=4), 1..8),
        mix in prop::collection::vec(-3i64..=3, 3),
    ) {
        use qshuffle::levy::Basis;
        let symbols = [
            Basis::Time,
            Basis::Brownian(1),
            Basis::Counter(1, 1),
            Basis::Counter(1, 2),
            Basis::Counter(2, 1),
        ];
        // three basis vectors assembled from the coordinate pool
        let mut basis = vec![ProcessVector::zero(); 3];
        for (k, (sym, val)) in coords.iter().enumerate() {
            basis[k % 3].add_coord(symbols[*sym], &rat(*val));
        }
        let mut target = ProcessVector::zero();
        for (v, c) in basis.iter().zip(&mix) {
            target.add_scaled_assign(v, &rat(*c));
        }
        match reduce_against(&target, &basis) {
            Reduction::Independent => prop_assert!(false, "spanned target reported independent"),
            Reduction::Coefficients(cs) => {
                let mut rebuilt = ProcessVector::zero();
                for (v, c) in basis.iter().zip(&cs) {
                    rebuilt.add_scaled_assign(v, c);
                }
                prop_assert_eq!(rebuilt, target);
            }
        }
    }
}

fn arb_spec() -> impl Strategy<Value = LevySpec> {
    let atom = (prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), 1i64..=2)
        .prop_map(|(n, d)| ratio(n, d));
    (
        prop::collection::btree_set(atom, 1..=3),
        prop::collection::vec(1i64..=4, 3),
        1i64..=3,
        prop::bool::ANY,
        -2i64..=2,
    )
        .prop_map(|(sizes, weights, rate, diffusive, drift)| {
            let k = sizes.len();
            let total: i64 = weights[..k].iter().sum();
            let atoms: Vec<(Rational, Rational)> = sizes
                .into_iter()
                .zip(&weights[..k])
                .map(|(s, &w)| (s, ratio(w, total)))
                .collect();
            let sigma = if diffusive { rat(1) } else { rat(0) };
            LevySpec::with_atoms("x1", rat(drift), sigma, rat(rate), atoms)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gram_factorization_is_exact(spec in arb_spec()) {
        let gd = gram_data(&spec, 6).unwrap();
        for (i, row) in gd.gram().iter().enumerate() {
            for (j, cell) in row.iter().enumerate() {
                let mut acc = rat(0);
                for k in 0..6 {
                    acc += &gd.c_matrix()[i][k] * &gd.c_matrix()[j][k] * &gd.norms()[k];
                }
                prop_assert_eq!(&acc, cell);
            }
        }
    }

    #[test]
    fn degeneracy_is_monotone(spec in arb_spec()) {
        let gd = gram_data(&spec, 8).unwrap();
        if let Some(k0) = gd.first_zero_index() {
            for n in k0..=8 {
                prop_assert!(num_traits::Zero::is_zero(gd.norm(n)));
            }
        }
    }

    #[test]
    fn power_brackets_chain_through_the_coordinate_bracket(
        spec in arb_spec(),
        n in 1usize..=4,
        m in 1usize..=4,
    ) {
        let lhs = power_bracket_vector(&spec, 1, n + m).unwrap();
        let rhs = bracket_vectors(
            &power_bracket_vector(&spec, 1, n).unwrap(),
            &power_bracket_vector(&spec, 1, m).unwrap(),
        );
        prop_assert_eq!(lhs, rhs);
    }
}
