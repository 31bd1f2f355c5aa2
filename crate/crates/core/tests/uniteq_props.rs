use num_bigint::BigUint;
use proptest::prelude::*;

use normrec::numberfield::{Element, FieldRef, NumberField};
use normrec::uniteq::{cascade_homogeneous, count_within_ess_bound, ess_bound, solve_unit_equation, GroupSpec};

fn field() -> FieldRef {
    NumberField::new(&[-2, 0, 1]).unwrap()
}

/// Units and small rationals, all nonzero.
const POOL: &[(i64, i64, i64)] = &[(1, 0, 1), (-1, 0, 1), (2, 0, 1), (1, 0, 2), (-2, 0, 1), (3, 0, 1), (1, 1, 1), (1, -1, 1)];

fn pooled(k: &FieldRef, i: usize) -> Element {
    let (a, b, d) = POOL[i];
    k.from_ints(&[a, b]).scale(&num_rational::BigRational::new(1.into(), d.into()))
}

fn sum(terms: impl Iterator<Item = Element>, k: &FieldRef) -> Element {
    terms.fold(k.zero(), |acc, t| &acc + &t)
}

/// Independent recomputation: some proper nonempty subsum of `a_i y_i` vanishes.
fn has_vanishing_subsum(a: &[Element], y: &[Element], k: &FieldRef) -> bool {
    let n = a.len();
    (1u32..(1 << n) - 1).any(|mask| sum((0..n).filter(|i| mask >> i & 1 == 1).map(|i| &a[i] * &y[i]), k).is_zero())
}

fn instance() -> impl Strategy<Value = (Vec<i64>, Vec<Vec<usize>>)> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(n, g)| {
        (
            prop::collection::vec(prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), n),
            prop::collection::vec(prop::collection::vec(0..POOL.len(), n), g),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn solutions_reverify((a, gens) in instance()) {
        let k = field();
        let n = a.len();
        let a: Vec<Element> = a.iter().map(|&c| k.from_int(c)).collect();
        let gens: Vec<Vec<Element>> = gens.iter().map(|g| g.iter().map(|&i| pooled(&k, i)).collect()).collect();
        let grp = GroupSpec::new(n, gens, None).unwrap();
        let sols = solve_unit_equation(&a, &grp, 4).unwrap();
        prop_assert_eq!(&sols, &solve_unit_equation(&a, &grp, 4).unwrap());
        for s in &sols {
            prop_assert!(sum(a.iter().zip(&s.y).map(|(x, y)| x * y), &k).is_one());
            prop_assert_eq!(&grp.element(&s.exponents, &k.one()), &s.y);
            prop_assert!(s.exponents.iter().all(|e| e.abs() <= 4));
            prop_assert_eq!(s.degenerate, has_vanishing_subsum(&a, &s.y, &k));
            for v in &s.vanishing_subsets {
                prop_assert!(!v.is_empty() && v.len() < n);
                prop_assert!(sum(v.iter().map(|&i| &a[i] * &s.y[i]), &k).is_zero());
            }
        }
        let nondeg = sols.iter().filter(|s| !s.degenerate).count() as u64;
        let e = ess_bound(n as u32, grp.rank() as u32);
        prop_assert!(count_within_ess_bound(nondeg, &e));
        // bit length of the count is far below the exponent
        prop_assert!(BigUint::from(64u32 - nondeg.leading_zeros()) < e);
    }

    #[test]
    fn cascade_splits_into_minimal_blocks(
        c in prop::collection::vec(prop::sample::select(vec![-2i64, -1, 1, 2]), 1..=4),
        z in prop::collection::vec(0..POOL.len(), 5),
        group in prop::collection::vec(0usize..=1, 5),
    ) {
        let k = field();
        // two independent vanishing sums, interleaved by `group`
        let mut cs = Vec::new();
        let mut zs = Vec::new();
        for part in 0..=1 {
            let idx: Vec<usize> = (0..c.len()).filter(|&i| group[i] == part).collect();
            if idx.is_empty() {
                continue;
            }
            let partial = sum(idx.iter().map(|&i| &k.from_int(c[i]) * &pooled(&k, z[i])), &k);
            for &i in &idx {
                cs.push(k.from_int(c[i]));
                zs.push(pooled(&k, z[i]));
            }
            // closing term −partial with unknown 1 keeps the part vanishing
            prop_assume!(!partial.is_zero());
            cs.push(-&partial);
            zs.push(k.one());
        }
        let n = cs.len();
        let out = cascade_homogeneous(&cs, &zs).unwrap();
        prop_assert!(out.depth < n);
        let mut seen: Vec<usize> = out.blocks.iter().flat_map(|b| b.indices.clone()).collect();
        seen.sort();
        prop_assert_eq!(seen, (0..n).collect::<Vec<_>>());
        for b in &out.blocks {
            prop_assert!(b.indices.len() >= 2);
            prop_assert!(sum(b.indices.iter().map(|&i| &cs[i] * &zs[i]), &k).is_zero());
            prop_assert!(!has_vanishing_subsum(&b.indices.iter().map(|&i| cs[i].clone()).collect::<Vec<_>>(), &b.indices.iter().map(|&i| zs[i].clone()).collect::<Vec<_>>(), &k));
            for r in &b.relations {
                prop_assert_eq!(&zs[r.i], &(&r.ratio * &zs[r.j]));
            }
        }
    }
}

#[test]
fn bound_matches_direct_evaluation() {
    for n in 1u32..=4 {
        for r in 0u32..=3 {
            let direct = BigUint::from(6 * n).pow(3 * n) * BigUint::from(r + 1);
            assert_eq!(ess_bound(n, r), direct);
        }
    }
}
