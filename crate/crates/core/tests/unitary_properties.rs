use unitrace_core::group::{cyclic, dicyclic12, dihedral, quaternion8, symmetric3};
use unitrace_core::unitary::{ComponentEstimate, DEFAULT_NODE_BUDGET};
use unitrace_core::{FieldElement, FiniteGroup, Gf2nField, GroupAlgebra, UnitaryEnumerator};

fn enumerator(g: FiniteGroup, n: u32) -> UnitaryEnumerator {
    UnitaryEnumerator::new(GroupAlgebra::new(g, Gf2nField::with_degree(n).unwrap()), DEFAULT_NODE_BUDGET).unwrap()
}

fn points(e: &UnitaryEnumerator) -> Vec<Vec<FieldElement>> {
    let mut v = Vec::new();
    e.for_each(|x| v.push(x.to_vec()));
    v
}

/// Counts `x x* = 1` by multiplying out every candidate.
fn naive_count(alg: &GroupAlgebra) -> u128 {
    let n = alg.dim();
    let q = alg.field().order() as u128;
    let one = alg.one();
    (0..q.pow(n as u32))
        .filter(|&i| {
            let x = alg
                .element((0..n).map(|j| FieldElement::from_bits((i / q.pow(j as u32) % q) as u32)).collect())
                .unwrap();
            alg.mul(&x, &alg.star(&x)).unwrap() == one
        })
        .count() as u128
}

#[test]
fn counts_match_naive_products() {
    let cases: Vec<(FiniteGroup, u32)> = vec![
        (cyclic(1), 1),
        (cyclic(2), 2),
        (cyclic(3), 2),
        (cyclic(4), 1),
        (cyclic(4), 2),
        (cyclic(6), 1),
        (cyclic(8), 1),
        (quaternion8(), 1),
        (dihedral(4), 1),
        (symmetric3(), 1),
        (symmetric3(), 2),
        (dicyclic12(), 1),
    ];
    for (g, n) in cases {
        let e = enumerator(g.clone(), n);
        let naive = naive_count(e.algebra());
        assert_eq!(e.count(), naive, "{} over GF(2^{n})", g.name());
        assert_eq!(points(&e).len() as u128, naive);
    }
}

#[test]
fn two_group_counts() {
    for (g, n, expected, c) in [
        (cyclic(2), 1, 2, 0),
        (cyclic(2), 2, 4, 0),
        (cyclic(2), 3, 8, 0),
        (cyclic(4), 1, 8, 1),
        (cyclic(4), 2, 32, 1),
        (cyclic(8), 1, 32, 1),
        (quaternion8(), 1, 64, 2),
        (quaternion8(), 2, 1024, 2),
        (dihedral(4), 1, 64, 0),
    ] {
        let r = enumerator(g, n).report().unwrap();
        assert_eq!((r.n, r.c), (expected, Some(c)));
    }
}

#[test]
fn non_two_groups_have_odd_torus_factors() {
    let r = enumerator(dicyclic12(), 1).report().unwrap();
    assert_eq!((r.n, r.c, r.two_adic()), (384, None, (7, 3)));
    assert!(!r.two_group);
}

#[test]
fn point_sets_are_groups() {
    for (g, n) in [(cyclic(4), 1), (cyclic(4), 2), (cyclic(8), 1), (quaternion8(), 1), (dihedral(4), 1), (quaternion8(), 2)] {
        let e = enumerator(g.clone(), n);
        let alg = e.algebra().clone();
        let pts = points(&e);
        let set: std::collections::BTreeSet<_> = pts.iter().cloned().collect();
        assert_eq!(set.len(), pts.len(), "duplicates");
        for x in 0..g.order() {
            assert!(set.contains(alg.basis(x).coeffs()));
        }
        for x in &pts {
            let xe = alg.element(x.clone()).unwrap();
            assert_eq!(alg.augmentation(&xe), FieldElement::ONE);
            let xs = alg.star(&xe);
            assert_eq!(alg.mul(&xs, &xe).unwrap(), alg.one());
            assert!(set.contains(xs.coeffs()));
            assert_eq!(UnitaryEnumerator::jacobian_rank(&alg, x), 1 + g.sigma_partition().len());
        }
        // closure under products, sampled by stride for the larger sets
        let stride = (pts.len() / 64).max(1);
        for x in pts.iter().step_by(stride) {
            for y in &pts {
                let p = alg.mul(&alg.element(x.clone()).unwrap(), &alg.element(y.clone()).unwrap()).unwrap();
                assert!(set.contains(p.coeffs()));
            }
        }
    }
}

#[test]
fn prefix_split_is_deterministic() {
    let e = enumerator(quaternion8(), 2);
    let all = points(&e);
    for depth in [0, 1, 2, 3] {
        let mut merged = Vec::new();
        let mut total = 0;
        for p in 0..e.prefix_count(depth) {
            e.for_each_in_prefix(depth, p, &mut |x| merged.push(x.to_vec()));
            total += e.count_in_prefix(depth, p);
        }
        assert_eq!(merged, all);
        assert_eq!(total, all.len() as u128);
    }
}

#[test]
fn component_estimates() {
    let d4 = dihedral(4);
    let reps: Vec<_> = [1, 2].iter().map(|&n| enumerator(d4.clone(), n).report().unwrap()).collect();
    let est = ComponentEstimate::from_reports(&d4, &reps).unwrap();
    assert!(est.consistent_with_connected());
    let c8 = cyclic(8);
    let est = ComponentEstimate::from_reports(&c8, &[enumerator(c8.clone(), 1).report().unwrap()]).unwrap();
    assert_eq!(est.component_order_bound, 2);
}
