use cxtv_core::cohomology::{chern_ring, rectangle_partitions, splitting_pullback, SchurClass, SchurRing};
use cxtv_core::complex::{c, GrassmannChart};
use cxtv_core::depth::{brute_force_depth_2d, centerpoint_region, tukey_depth};
use cxtv_core::generate::{generate_measures, Genericity};
use cxtv_core::geometry::{is_j_invariant, j_map, make_complex_flat, orthogonal_project, MassCloud};
use cxtv_core::lp::{lp_feasible, lp_solve, ExactLP, Feasibility, LpSolution, Relation};
use cxtv_core::poly::{Poly, Ring};
use cxtv_core::scalar::q;
use cxtv_core::transversal::{search_transversal, verify_transversal, SearchConfig};
use cxtv_core::Q;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn int_vec(n: usize, r: i64) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(-r..=r, n).prop_map(|v| v.into_iter().map(|x| q(x, 1)).collect())
}

fn nonzero_vec(n: usize, r: i64) -> impl Strategy<Value = Vec<Q>> {
    int_vec(n, r).prop_filter("nonzero", |v| v.iter().any(|x| !x.is_zero()))
}

fn cloud(dim: usize, max_points: usize) -> impl Strategy<Value = MassCloud> {
    prop::collection::vec((int_vec(dim, 3), 1i64..=4), 1..=max_points).prop_map(|pw| {
        let total: i64 = pw.iter().map(|(_, w)| w).sum();
        let (pts, ws): (Vec<_>, Vec<_>) = pw.into_iter().map(|(p, w)| (p, q(w, total))).unzip();
        MassCloud::new(pts, ws).unwrap()
    })
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn same_span(a: &[Vec<Q>], b: &[Vec<Q>]) -> bool {
    a.iter().all(|v| orthogonal_project(b, v).iter().all(Zero::is_zero))
        && b.iter().all(|v| orthogonal_project(a, v).iter().all(Zero::is_zero))
}

fn schur_element(ring: SchurRing, picks: &[(usize, i64)]) -> SchurClass {
    let basis = rectangle_partitions(ring.k, ring.d - ring.k);
    let mut x = SchurClass::zero(ring);
    for &(i, a) in picks {
        let term = SchurClass::basis(ring, basis[i % basis.len()].clone()).scale(&BigInt::from(a));
        x = x.add(&term).unwrap();
    }
    x
}

fn chern_poly(terms: &[(Vec<u32>, i64)]) -> Poly {
    let ring = chern_ring(2);
    terms.iter().fold(Poly::zero(&ring), |acc, (m, a)| acc.add(&Poly::monomial(&ring, m.clone(), *a)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_is_idempotent_and_orthogonal(v in nonzero_vec(4, 3), x in int_vec(4, 5)) {
        let dir = vec![v.clone(), j_map(&v)];
        let p = orthogonal_project(&dir, &x);
        prop_assert_eq!(orthogonal_project(&dir, &p), p.clone());
        for d in &dir {
            prop_assert!(dot(d, &p).is_zero());
        }
    }

    #[test]
    fn complex_structure_round_trip(x in int_vec(6, 5), base in int_vec(4, 3), v in nonzero_vec(4, 3)) {
        let back = j_map(&j_map(&x));
        prop_assert_eq!(back, x.iter().map(|a| -a).collect::<Vec<_>>());
        let flat = make_complex_flat(base.clone(), std::slice::from_ref(&v)).unwrap();
        prop_assert!(is_j_invariant(&flat.direction_basis));
        let moved: Vec<Q> = base.iter().zip(j_map(&v)).map(|(b, w)| b + w).collect();
        prop_assert!(flat.contains_point(&moved));
    }

    #[test]
    fn depth_witness_is_sound(m in cloud(2, 7), p in int_vec(2, 3)) {
        let dv = tukey_depth(&m, &p).unwrap();
        prop_assert!(dv.witness().contains(&p));
        prop_assert_eq!(m.halfspace_weight(&dv.witness_normal, &dv.witness_offset), dv.value.clone());
        prop_assert_eq!(dv.value, brute_force_depth_2d(&m, &p));
    }

    #[test]
    fn regions_shrink_as_the_threshold_grows(m in cloud(2, 6), a in 1i64..=6, b in 1i64..=6) {
        let (lo, hi) = (q(a.min(b), 12), q(a.max(b), 12));
        let small = centerpoint_region(&m, &hi).unwrap();
        let large = centerpoint_region(&m, &lo).unwrap();
        for v in &small.vertices {
            prop_assert!(large.contains(v));
            prop_assert!(tukey_depth(&m, v).unwrap().value >= hi);
        }
    }

    #[test]
    fn schur_product_is_associative(
        a in prop::collection::vec((0usize..20, -2i64..=2), 1..3),
        b in prop::collection::vec((0usize..20, -2i64..=2), 1..3),
        e in prop::collection::vec((0usize..20, -2i64..=2), 1..3),
    ) {
        let ring = SchurRing::new(2, 5, Ring::Integers).unwrap();
        let (x, y, z) = (schur_element(ring, &a), schur_element(ring, &b), schur_element(ring, &e));
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
    }

    #[test]
    fn splitting_pullback_is_a_ring_map(
        a in prop::collection::vec((prop::collection::vec(0u32..3, 2), -3i64..=3), 1..4),
        b in prop::collection::vec((prop::collection::vec(0u32..3, 2), -3i64..=3), 1..4),
    ) {
        let (p, r) = (chern_poly(&a), chern_poly(&b));
        let lhs = splitting_pullback(&p.mul(&r).unwrap()).unwrap();
        let rhs = splitting_pullback(&p).unwrap().mul(&splitting_pullback(&r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = splitting_pullback(&p.add(&r).unwrap()).unwrap();
        prop_assert_eq!(sum, splitting_pullback(&p).unwrap().add(&splitting_pullback(&r).unwrap()).unwrap());
    }

    #[test]
    fn chart_change_keeps_the_subspace(params in prop::collection::vec(-3i64..=3, 2)) {
        let chart = GrassmannChart::with_params(2, vec![0], &params.iter().map(|&x| q(x, 1)).collect::<Vec<_>>());
        let basis = chart.complex_basis();
        if let Some(other) = GrassmannChart::from_subspace_in(&basis, &[1]) {
            prop_assert!(same_span(&chart.real_basis(), &other.real_basis()));
        } else {
            prop_assert_eq!(chart.z[0][0].clone(), c(q(0, 1), q(0, 1)));
        }
    }

    #[test]
    fn lp_optimum_is_feasible_and_not_beaten(
        rows in prop::collection::vec(int_vec(3, 4), 1..8),
        objective in int_vec(3, 3),
        probes in prop::collection::vec(int_vec(3, 4), 8),
    ) {
        let mut lp = ExactLP::new(3);
        for r in &rows {
            lp.add(r.clone(), Relation::Le, q(5, 1));
        }
        for i in 0..3 {
            let mut e = vec![q(0, 1); 3];
            e[i] = q(1, 1);
            lp.add(e.clone(), Relation::Ge, q(-4, 1));
            lp.add(e, Relation::Le, q(4, 1));
        }
        lp.objective = Some(objective.clone());
        let LpSolution::Optimal { x, value } = lp_solve(&lp).unwrap() else {
            return Err(TestCaseError::fail("origin is feasible and the box is bounded"));
        };
        prop_assert!(lp.satisfied_by(&x));
        prop_assert_eq!(dot(&objective, &x), value.clone());
        for p in probes.iter().filter(|p| lp.satisfied_by(p)) {
            prop_assert!(dot(&objective, p) >= value);
        }
    }

    #[test]
    fn infeasible_systems_come_with_a_farkas_certificate(a in nonzero_vec(3, 4), gap in 1i64..5) {
        let mut lp = ExactLP::new(3);
        lp.add(a.clone(), Relation::Ge, q(gap, 1));
        lp.add(a, Relation::Le, q(0, 1));
        match lp_feasible(&lp).unwrap() {
            Feasibility::Infeasible(cert) => prop_assert!(cert.replay(&lp)),
            Feasibility::Feasible(_) => prop_assert!(false, "contradictory rows reported feasible"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn verification_accepts_found_flats_and_rejects_raised_bounds(seed in 0u64..1000) {
        let ms = generate_measures(2, &[6, 7], seed, Genericity::Generic).unwrap();
        let cert = search_transversal(&ms, 1, &SearchConfig::default()).unwrap().certified();
        let Some(mut cert) = cert else {
            return Err(TestCaseError::fail("planar transversal search exhausted"));
        };
        prop_assert!(verify_transversal(&cert, &ms).is_ok());
        let weakest = cert.depths.iter().map(|d| d.value.clone()).min().unwrap();
        cert.bound = weakest + q(1, 1000);
        prop_assert!(verify_transversal(&cert, &ms).is_err());
    }
}
