use proptest::prelude::*;
use trigonal_core::assembler::{build_maroni_table, cancel_and_extract, stable_cohomology};
use trigonal_core::evalmap::{evaluation_matrix, exact_rank, sample_configuration, SamplingOptions};
use trigonal_core::quotient::{gysin_total, h_gl2, solve_circle_gysin, stratum_cohomology, x_mod_gl2_window};
use trigonal_core::chow::euler_ranks;
use trigonal_core::vassiliev::{e1_page, stable_cohomology_sections};
use trigonal_core::{Field, GradedTate, StratumInfo, SurfaceSpec};

fn graded() -> impl Strategy<Value = GradedTate> {
    prop::collection::vec((0i64..12, -8i64..1, 1u64..3), 0..6).prop_map(GradedTate::from_entries)
}

/// A space that starts with `Q` in degree 0.
fn fiber() -> impl Strategy<Value = GradedTate> {
    prop::collection::vec((1i64..6, -4i64..1, 1u64..3), 0..3).prop_map(|rest| {
        let mut f = GradedTate::unit();
        for (d, w, m) in rest {
            f.add(d, w, m);
        }
        f
    })
}

proptest! {
    #[test]
    fn divide_inverts_tensor(a in graded(), f in fiber()) {
        let product = a.tensor(&f);
        prop_assert_eq!(product.total_dim(), a.total_dim() * f.total_dim());
        prop_assert_eq!(product.divide(&f).unwrap(), a);
    }

    #[test]
    fn euler_characteristic_is_multiplicative(a in graded(), b in graded()) {
        prop_assert_eq!(a.tensor(&b).euler_characteristic(), a.euler_characteristic() * b.euler_characteristic());
    }

    #[test]
    fn page_shifts_with_parameter_count(n in 1u32..4, d in 20i64..40, step in 1i64..4) {
        let a = e1_page(&SurfaceSpec::trigonal(n, d).unwrap()).unwrap();
        let b = e1_page(&SurfaceSpec::trigonal(n, d + step).unwrap()).unwrap();
        let dv = b.v - a.v;
        for p in 1..=4 {
            prop_assert_eq!(a.column(p).twist_shift(2 * dv, dv), b.column(p));
        }
    }

    #[test]
    fn stable_profile_is_gl2_divisible(n in 1u32..4, d in 20i64..40) {
        let (h, top) = stable_cohomology_sections(&SurfaceSpec::trigonal(n, d).unwrap()).unwrap();
        prop_assert!(h.divide_within(&h_gl2(), top).is_ok());
        prop_assert_eq!(h.in_degree(0).collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn prime_rank_never_exceeds_rational(n in 0u32..3, points in 1usize..4, seed in any::<u64>()) {
        let spec = SurfaceSpec::trigonal(n, 2 * points as i64 + 3 * n as i64 - 1).unwrap();
        let p = 101;
        let config = sample_configuration(&spec, points, p, seed, SamplingOptions::default()).unwrap();
        let m = evaluation_matrix(&config, &spec, Field::Rationals).unwrap();
        let over_q = exact_rank(&m, Field::Rationals);
        prop_assert!(exact_rank(&m, Field::Prime(p)) <= over_q);
        prop_assert!(over_q <= 3 * points);
    }
}

#[test]
fn stratum_profile_is_independent_of_stratum() {
    let reference = stratum_cohomology(1, 41).unwrap().0;
    for g in 20..=44 {
        for n in 1..=4 {
            if (g - n) % 2 != 0 {
                continue;
            }
            let Ok((h, top)) = stratum_cohomology(n, g) else { continue };
            assert_eq!(h, reference.truncate(top), "(n, g) = ({n}, {g})");
        }
    }
}

#[test]
fn gysin_solution_reproduces_total() {
    for (n, g) in [(1, 41), (2, 42), (3, 41), (4, 42)] {
        let info = StratumInfo::new(g, n).unwrap();
        let (quotient, _) = x_mod_gl2_window(&info.surface()).unwrap();
        let (base, top) = stratum_cohomology(n, g).unwrap();
        let s = solve_circle_gysin(&quotient.truncate(top), &euler_ranks(g, n).unwrap(), top).unwrap();
        assert_eq!(s.base, base);
        assert_eq!(gysin_total(&s.base, &s.xi_ranks, top).unwrap(), quotient.truncate(top));
    }
}

#[test]
fn placement_follows_codimension_and_column() {
    for g in [20, 21, 44, 45] {
        for framed in [false, true] {
            let table = build_maroni_table(g, framed).unwrap();
            for (k, col) in table.columns.iter().enumerate() {
                assert_eq!(col.p, -(k as i64));
                let c = col.stratum.codim;
                let shifted: GradedTate = GradedTate::from_entries(
                    col.cohomology.iter().map(|t| (-(t.degree + 2 * c) + k as i64, t.weight - c, t.mult)),
                );
                assert_eq!(shifted, col.entries);
            }
        }
    }
}

#[test]
fn survivors_agree_across_genera() {
    for framed in [false, true] {
        for parity in [0, 1] {
            let reports: Vec<_> = (8..=40)
                .filter(|g| g % 2 == parity)
                .map(|g| cancel_and_extract(&build_maroni_table(g, framed).unwrap()).unwrap())
                .collect();
            let widest = reports.iter().max_by_key(|r| r.stable_window).unwrap();
            for r in &reports {
                assert_eq!(r.survivors, widest.survivors.truncate_below(-r.stable_window + 1));
            }
        }
    }
}

#[test]
fn pairs_join_adjacent_totals() {
    for g in 8..=40 {
        for framed in [false, true] {
            let s = stable_cohomology(g, framed).unwrap();
            for (a, b) in &s.cancellation.pairs {
                assert_eq!(a.weight, b.weight);
                assert_eq!(a.total(), b.total() + 1);
                assert!(b.p < a.p);
            }
        }
    }
}
