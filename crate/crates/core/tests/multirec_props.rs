use proptest::prelude::*;

use normrec::multirec::{MPoly, MultiProgression, MultiRecurrence, ShiftedSublattice, Term};
use normrec::numberfield::{Element, FieldRef, NumberField};

fn field() -> FieldRef {
    NumberField::new(&[-2, 0, 1]).unwrap()
}

/// Nonzero bases `a + b√2`, with repeats of ±1 and ±2 so merges and cancellations occur.
const BASES: &[(i64, i64)] = &[(1, 0), (-1, 0), (2, 0), (-2, 0), (1, 1), (1, -1), (3, 2), (-1, -1), (3, 0)];

fn base(k: &FieldRef, i: usize) -> Element {
    let (a, b) = BASES[i];
    k.from_ints(&[a, b])
}

type TermSeed = (i64, i64, Vec<usize>, Option<(Vec<u32>, i64)>);

fn term_seeds(vars: usize, poly: bool) -> impl Strategy<Value = Vec<TermSeed>> {
    let mono = prop::option::of((prop::collection::vec(0u32..=2, vars), -3i64..=3));
    prop::collection::vec((-4i64..=4, -2i64..=2, prop::collection::vec(0..BASES.len(), vars), mono), 1..=4)
        .prop_map(move |v| v.into_iter().map(|(c0, c1, bs, m)| (c0, c1, bs, m.filter(|_| poly))).collect())
}

fn build(k: &FieldRef, vars: usize, seeds: &[TermSeed]) -> MultiRecurrence {
    let terms = seeds
        .iter()
        .map(|(c0, c1, bs, mono)| {
            let c = k.from_ints(&[*c0, *c1]);
            let mut coeff = MPoly::constant(c, vars);
            if let Some((e, m)) = mono {
                coeff = coeff.add(&MPoly::from_monomials(k, vars, vec![(e.clone(), k.from_int(*m))]));
            }
            Term { coeff, base: bs.iter().map(|&i| base(k, i)).collect() }
        })
        .collect();
    MultiRecurrence::new(k, vars, terms).unwrap()
}

/// Direct evaluation from the seeds, independent of merging.
fn eval_seeds(k: &FieldRef, seeds: &[TermSeed], h: &[i64]) -> Element {
    let mut total = k.zero();
    for (c0, c1, bs, mono) in seeds {
        let mut c = k.from_ints(&[*c0, *c1]);
        if let Some((e, m)) = mono {
            let mut v = k.from_int(*m);
            for (hi, &ei) in h.iter().zip(e) {
                v = &v * &k.from_int(hi.pow(ei));
            }
            c = &c + &v;
        }
        for (&i, &hi) in bs.iter().zip(h) {
            c = &c * &base(k, i).pow(hi);
        }
        total = &total + &c;
    }
    total
}

fn distinct_bases(g: &MultiRecurrence) -> bool {
    let t = g.terms();
    (0..t.len()).all(|i| (i + 1..t.len()).all(|j| t[i].base != t[j].base))
}

fn lattice_strategy() -> impl Strategy<Value = (usize, usize, Vec<Vec<i64>>, Vec<i64>)> {
    (1usize..=2, 1usize..=2).prop_flat_map(|(r, l)| {
        (
            Just(r),
            Just(l),
            prop::collection::vec(prop::collection::vec(-2i64..=2, r), l),
            prop::collection::vec(-2i64..=2, r),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn construction_evaluates_like_the_sum((r, _l, _a, _b) in lattice_strategy(), seeds in term_seeds(2, true), k in prop::collection::vec(-3i64..=3, 2)) {
        let kf = field();
        let seeds: Vec<TermSeed> = seeds.into_iter().map(|(c0, c1, mut bs, mono)| {
            bs.truncate(r);
            (c0, c1, bs, mono.map(|(mut e, m)| { e.truncate(r); (e, m) }))
        }).collect();
        let g = build(&kf, r, &seeds);
        prop_assert!(distinct_bases(&g));
        prop_assert_eq!(g.eval(&k[..r]), eval_seeds(&kf, &seeds, &k[..r]));
    }

    #[test]
    fn substitution_is_correct(
        (r, l, a, b) in lattice_strategy(),
        seeds in term_seeds(2, true),
        pts in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 5),
    ) {
        let kf = field();
        let seeds: Vec<TermSeed> = seeds.into_iter().map(|(c0, c1, mut bs, mono)| {
            bs.truncate(r);
            (c0, c1, bs, mono.map(|(mut e, m)| { e.truncate(r); (e, m) }))
        }).collect();
        let h = build(&kf, r, &seeds);
        let lat = ShiftedSublattice::new(a, b).unwrap();
        let restricted = h.restrict_sublattice(&lat).unwrap();
        prop_assert!(distinct_bases(&restricted));
        prop_assert_eq!(restricted.vars(), l);
        if h.is_simple() {
            prop_assert!(restricted.is_simple());
        }
        for p in &pts {
            let k = &p[..l];
            let hk: Vec<i64> = (0..r).map(|j| lat.b[j] + (0..l).map(|i| k[i] * lat.a[i][j]).sum::<i64>()).collect();
            prop_assert_eq!(restricted.eval(k), h.eval(&hk));
        }
    }

    #[test]
    fn reduction_identity(
        vars in 1usize..=2,
        seeds in term_seeds(2, false),
        offsets in prop::collection::vec(0i64..=3, 2),
        steps in prop::collection::vec(1i64..=3, 2),
        pts in prop::collection::vec(prop::collection::vec(-4i64..=4, 2), 8),
    ) {
        let kf = field();
        let seeds: Vec<TermSeed> = seeds.into_iter().map(|(c0, c1, mut bs, _)| { bs.truncate(vars); (c0, c1, bs, None) }).collect();
        let g = build(&kf, vars, &seeds);
        let prog = MultiProgression::new(offsets[..vars].to_vec(), steps[..vars].to_vec()).unwrap();
        let (red, zero) = g.reduce(&prog).unwrap();
        prop_assert!(red.is_simple() && zero.is_simple());
        prop_assert!(distinct_bases(&red));
        for p in &pts {
            let k = &p[..vars];
            prop_assert_eq!(g.eval(k), &red.eval(k) + &zero.eval(k));
            let on = prog.point(&k.iter().map(|x| x.abs()).collect::<Vec<_>>());
            prop_assert!(zero.eval(&on).is_zero());
        }
        prop_assert!(zero.is_zero_on_progression(&prog).unwrap().vanishes);
    }

    #[test]
    fn certified_zeros_vanish(seeds in term_seeds(1, false)) {
        let kf = field();
        let g = build(&kf, 1, &seeds);
        let z = g.sml_zero_structure(40).unwrap();
        for &(c, d) in &z.progressions {
            for n in 0..50 {
                prop_assert!(g.eval(&[c + d * n]).is_zero(), "G({}) ≠ 0", c + d * n);
            }
        }
        for &t in &z.sporadic {
            prop_assert!(g.eval(&[t]).is_zero());
        }
        // every zero in the window is accounted for
        for t in 0..=40 {
            if g.eval(&[t]).is_zero() {
                let covered = z.progressions.iter().any(|&(c, d)| t >= c && (t - c) % d == 0);
                prop_assert!(covered || z.sporadic.contains(&t));
            }
        }
    }

    #[test]
    fn vanishing_progressions_vanish(seeds in term_seeds(1, false), c in 0i64..=3, d in 1i64..=4) {
        let kf = field();
        let g = build(&kf, 1, &seeds);
        let prog = MultiProgression::new(vec![c], vec![d]).unwrap();
        let cert = g.is_zero_on_progression(&prog).unwrap();
        if cert.vanishes {
            for n in 0..50 {
                prop_assert!(g.eval(&[c + d * n]).is_zero());
            }
        } else {
            prop_assert!(!cert.merged.is_empty());
        }
    }
}

#[test]
fn alternating_progression() {
    let k = field();
    let g = MultiRecurrence::simple(&k, 1, vec![(k.one(), vec![k.from_int(-1)]), (k.one(), vec![k.one()])]).unwrap();
    let z = g.sml_zero_structure(1000).unwrap();
    assert_eq!(z.progressions, vec![(1, 2)]);
    assert!(z.sporadic.is_empty());
}
