use super::*;
use crate::numberfield::NumberField;
use crate::poly::rat;

fn qq() -> FieldRef {
    NumberField::new(&[0, 1]).unwrap()
}

fn simple1(k: &FieldRef, terms: &[(i64, i64)]) -> MultiRecurrence {
    MultiRecurrence::simple(k, 1, terms.iter().map(|&(c, a)| (k.from_int(c), vec![k.from_int(a)])).collect()).unwrap()
}

#[test]
fn evaluation() {
    let k = qq();
    let g = MultiRecurrence::simple(&k, 2, vec![(k.one(), vec![k.from_int(2), k.from_int(3)])]).unwrap();
    assert_eq!(g.eval(&[2, 1]), k.from_int(12));
    let poly = Term { coeff: MPoly::var(&k, 1, 0), base: vec![k.from_int(2)] };
    let g = MultiRecurrence::new(&k, 1, vec![poly]).unwrap();
    assert!(!g.is_simple());
    assert_eq!(g.eval(&[3]), k.from_int(24));
    assert_eq!(simple1(&k, &[(1, 2)]).eval(&[-2]), k.from_rational(num_rational::BigRational::new(1.into(), 4.into())));
}

#[test]
fn merging() {
    let k = qq();
    let g = simple1(&k, &[(2, 3), (5, 3), (1, -3)]);
    assert_eq!(g.len(), 2);
    assert_eq!(g.terms()[0].base[0], k.from_int(3));
    assert!(simple1(&k, &[(1, 3), (-1, 3)]).is_empty());
}

#[test]
fn sublattice_restriction() {
    let k = qq();
    let h = simple1(&k, &[(1, 5)]);
    let g = h.restrict_sublattice(&ShiftedSublattice::new(vec![vec![2]], vec![1]).unwrap()).unwrap();
    assert_eq!(g, simple1(&k, &[(5, 25)]));
    let c = h.restrict_sublattice(&ShiftedSublattice::new(vec![vec![0]], vec![3]).unwrap()).unwrap();
    assert_eq!(c, simple1(&k, &[(125, 1)]));
    assert!(matches!(
        h.restrict_sublattice(&ShiftedSublattice::new(vec![vec![1, 1]], vec![0, 0]).unwrap()),
        Err(Error::ShapeMismatch(_))
    ));
}

#[test]
fn pell_restriction() {
    let k = NumberField::new(&[-2, 0, 1]).unwrap();
    let half = rat(1) / rat(2);
    let h = MultiRecurrence::simple(
        &k,
        1,
        vec![
            (k.from_rational(half.clone()), vec![k.from_ints(&[3, 2])]),
            (k.from_rational(half), vec![k.from_ints(&[3, -2])]),
        ],
    )
    .unwrap();
    assert_eq!(h.eval(&[2]), k.from_int(17));
    let g = h.restrict_sublattice(&ShiftedSublattice::new(vec![vec![2]], vec![1]).unwrap()).unwrap();
    let vals: Vec<Element> = (0..3).map(|n| g.eval(&[n])).collect();
    assert_eq!(vals, vec![k.from_int(3), k.from_int(99), k.from_int(3363)]);
    assert_eq!(g.terms()[0].base[0], k.from_ints(&[17, 12]));
}

#[test]
fn polynomial_coefficients_compose() {
    let k = qq();
    // k1 * 2^k1 restricted to k1 = 3N + 1
    let g = MultiRecurrence::new(&k, 1, vec![Term { coeff: MPoly::var(&k, 1, 0), base: vec![k.from_int(2)] }]).unwrap();
    let r = g.restrict_progression(&MultiProgression::new(vec![1], vec![3]).unwrap()).unwrap();
    for n in -2..5 {
        assert_eq!(r.eval(&[n]), g.eval(&[1 + 3 * n]));
    }
    assert!(matches!(g.is_zero_on_progression(&MultiProgression::all(1)), Err(Error::NonSimpleUnsupported)));
}

#[test]
fn progressions() {
    let k = qq();
    let g = simple1(&k, &[(1, -1), (1, 1)]);
    assert!(g.is_zero_on_progression(&MultiProgression::new(vec![1], vec![2]).unwrap()).unwrap().vanishes);
    let cert = g.is_zero_on_progression(&MultiProgression::new(vec![0], vec![2]).unwrap()).unwrap();
    assert!(!cert.vanishes);
    assert_eq!(cert.merged.constant_coeffs(), vec![k.from_int(2)]);
    let g = simple1(&k, &[(2, 3), (5, -3)]);
    assert_eq!(g.restrict_progression(&MultiProgression::new(vec![0], vec![2]).unwrap()).unwrap(), simple1(&k, &[(7, 9)]));
    let g = simple1(&k, &[(1, 2)]);
    assert_eq!(g.restrict_progression(&MultiProgression::new(vec![1], vec![3]).unwrap()).unwrap(), simple1(&k, &[(2, 8)]));
}

#[test]
fn reduction() {
    let k = qq();
    let g = simple1(&k, &[(2, 3), (5, -3)]);
    let prog = MultiProgression::new(vec![0], vec![2]).unwrap();
    let (red, z) = g.reduce(&prog).unwrap();
    assert_eq!(red, simple1(&k, &[(7, 3)]));
    assert_eq!(z, simple1(&k, &[(5, -3), (-5, 3)]));
    for n in 0..5 {
        assert!(z.eval(&[2 * n]).is_zero());
        assert_eq!(g.eval(&[n]), &red.eval(&[n]) + &z.eval(&[n]));
    }
    let g = simple1(&k, &[(1, 2), (1, 3)]);
    let (red, z) = g.reduce(&MultiProgression::all(1)).unwrap();
    assert_eq!(red, g);
    assert!(z.is_empty());
}

#[test]
fn reduction_with_cube_roots_of_unity() {
    let k = NumberField::new(&[1, 1, 1]).unwrap();
    let zeta = k.generator();
    let six = k.from_int(6);
    let g = MultiRecurrence::simple(&k, 1, vec![(k.one(), vec![six.clone()]), (k.one(), vec![&six * &zeta])]).unwrap();
    let (red, z) = g.reduce(&MultiProgression::new(vec![0], vec![3]).unwrap()).unwrap();
    assert_eq!(red, MultiRecurrence::simple(&k, 1, vec![(k.from_int(2), vec![six.clone()])]).unwrap());
    for n in 0..4 {
        assert!(z.eval(&[3 * n]).is_zero());
    }
    assert!(!z.eval(&[1]).is_zero());
}

#[test]
fn zero_structures() {
    let k = qq();
    let zs = simple1(&k, &[(1, -1), (1, 1)]).sml_zero_structure(50).unwrap();
    assert_eq!(zs.progressions, vec![(1, 2)]);
    assert!(zs.sporadic.is_empty());
    let zs = simple1(&k, &[(1, 2), (-8, 1)]).sml_zero_structure(50).unwrap();
    assert!(zs.progressions.is_empty());
    assert_eq!(zs.sporadic, vec![3]);
    // 2^k − 1 + (−2)^k − (−1)^k vanishes on odd k and at k = 0
    let zs = simple1(&k, &[(1, 2), (-1, 1), (1, -2), (-1, -1)]).sml_zero_structure(60).unwrap();
    assert_eq!(zs.progressions, vec![(1, 2)]);
    assert_eq!(zs.sporadic, vec![0]);
}
