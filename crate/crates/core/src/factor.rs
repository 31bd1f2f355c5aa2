//! Factorization of rational polynomials.
//!
//! Zassenhaus' method: factor modulo a small prime with distinct-degree and
//! Cantor–Zassenhaus splitting, Hensel-lift the modular factorization past a
//! coefficient bound, then recombine lifted factors by exact trial division
//! over the integers. The random choices inside equal-degree splitting come
//! from a fixed-seed generator, so the output is deterministic.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::QPoly;

// ---------------------------------------------------------------------------
// arithmetic in F_p[x]

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn fp_inv(a: u64, p: u64) -> u64 {
    fp_pow_scalar(a, p - 2, p)
}

fn fp_pow_scalar(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    let inv = fp_inv(*b.last().unwrap(), p);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] * inv % p;
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for (j, &bc) in b.iter().enumerate() {
            r[i - db + j] = (r[i - db + j] + p - c * bc % p) % p;
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// Returns `(g, s, t)` with `s·a + t·b = g` monic.
fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        r0 = r1;
        r1 = r;
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        s0 = s1;
        s1 = s2;
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        t0 = t1;
        t1 = t2;
    }
    let inv = fp_inv(*r0.last().unwrap(), p);
    let sc = |v: &Fp| trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let mut b = fp_divrem(base, m, p).1;
    for i in 0..e.bits() {
        if e.bit(i) {
            result = fp_divrem(&fp_mul(&result, &b, p), m, p).1;
        }
        b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
    }
    result
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| c * (i as u64 % p) % p).collect())
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn fp_ddf(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut i = 0;
    while rest.len() > 1 {
        i += 1;
        if 2 * i > rest.len() - 1 {
            let d = rest.len() - 1;
            out.push((rest.clone(), d));
            break;
        }
        h = fp_powmod(&h, &pe, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            out.push((g.clone(), i));
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
        }
    }
    out
}

/// Cantor–Zassenhaus equal-degree splitting (odd p).
fn fp_edf(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &e, f, p), &vec![1], p);
        let g = fp_gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = fp_divrem(f, &g, p).0;
            let mut out = fp_edf(&g, d, p, rng);
            out.extend(fp_edf(&fp_monic(&h, p), d, p, rng));
            return out;
        }
    }
}

fn fp_factor(f: &Fp, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let mut out = Vec::new();
    for (g, d) in fp_ddf(f, p) {
        out.extend(fp_edf(&g, d, p, rng));
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// arithmetic in (Z / m)[x] with BigInt coefficients

type Zp = Vec<BigInt>;

fn ztrim(mut a: Zp) -> Zp {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zmod(a: &Zp, m: &BigInt) -> Zp {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zadd(a: &Zp, b: &Zp) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

fn zsub(a: &Zp, b: &Zp) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn zmul(a: &Zp, b: &Zp) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

/// Division by a monic polynomial modulo m.
fn zdivrem_monic(a: &Zp, b: &Zp, m: &BigInt) -> (Zp, Zp) {
    let db = b.len() - 1;
    let mut r = zmod(a, m);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i - db + j] = (&r[i - db + j] - &c * bc).mod_floor(m);
        }
        q[i - db] = c;
    }
    r.truncate(db);
    (ztrim(q), zmod(&r, m))
}

fn to_zp(a: &Fp) -> Zp {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn to_fp(a: &Zp, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

/// One quadratic Hensel step: from `f ≡ g·h (mod m)` with Bezout
/// coefficients `s·g + t·h ≡ 1 (mod m)` and `h` monic, produce the same data
/// modulo `m2` (a divisor of `m²`).
fn hensel_step(f: &Zp, g: &Zp, h: &Zp, s: &Zp, t: &Zp, m2: &BigInt) -> (Zp, Zp, Zp, Zp) {
    let e = zmod(&zsub(f, &zmul(g, h)), m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, m2);
    let g1 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), m2);
    let h1 = zmod(&zadd(h, &r), m2);
    let b = zmod(&zsub(&zadd(&zmul(s, &g1), &zmul(t, &h1)), &vec![BigInt::one()]), m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h1, m2);
    let s1 = zmod(&zsub(s, &d), m2);
    let t1 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g1)), m2);
    (g1, h1, s1, t1)
}

/// Lifts `f ≡ lc · Π factors (mod p)` to a factorization modulo `modulus`
/// (a power of p), returning monic lifted factors.
fn multifactor_lift(f: &Zp, factors: &[Fp], p: u64, modulus: &BigInt) -> Vec<Zp> {
    if factors.len() == 1 {
        let lc = f.last().unwrap().clone();
        let inv = lc.modinv(modulus).expect("leading coefficient invertible");
        let monic: Zp = f.iter().map(|c| (c * &inv).mod_floor(modulus)).collect();
        return vec![ztrim(monic)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let lc = f.last().unwrap().mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let g0 = left.iter().fold(vec![lc], |acc, u| fp_mul(&acc, u, p));
    let h0 = right.iter().fold(vec![1u64], |acc, u| fp_mul(&acc, u, p));
    let (_, s0, t0) = fp_xgcd(&g0, &h0, p);
    let (mut g, mut h, mut s, mut t) = (to_zp(&g0), to_zp(&h0), to_zp(&s0), to_zp(&t0));
    let mut m = BigInt::from(p);
    while &m < modulus {
        let m2 = (&m * &m).min(modulus.clone());
        let fm = zmod(f, &m2);
        (g, h, s, t) = hensel_step(&fm, &g, &h, &s, &t, &m2);
        m = m2;
    }
    let mut out = multifactor_lift(&g, left, p, modulus);
    out.extend(multifactor_lift(&h, right, p, modulus));
    out
}

fn symmetric(a: &Zp, m: &BigInt) -> Zp {
    let half = m / 2;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn content(a: &Zp) -> BigInt {
    a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn primitive(a: &Zp) -> Zp {
    let c = content(a);
    let sign = if a.last().is_some_and(|x| x.is_negative()) { -BigInt::one() } else { BigInt::one() };
    a.iter().map(|x| x / &c * &sign).collect()
}

/// Exact division over Z; `None` if `b` does not divide `a`.
fn zdiv_exact(a: &Zp, b: &Zp) -> Option<Zp> {
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r = a.clone();
    if r.len() <= db {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        if r[i].is_zero() {
            continue;
        }
        let (c, rem) = r[i].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i - db + j] -= &c * bc;
        }
        q[i - db] = c;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(ztrim(q))
}

const SMALL_PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

/// Advances `idx` to the next increasing index tuple below `n`.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Irreducible factors of a squarefree primitive integer polynomial with
/// positive leading coefficient.
fn zassenhaus(f: &Zp) -> Vec<Zp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let lc = f.last().unwrap().clone();
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for &p in SMALL_PRIMES.iter() {
        let pb = BigInt::from(p);
        if (&lc % &pb).is_zero() {
            continue;
        }
        let fp = to_fp(f, p);
        let g = fp_gcd(&fp, &fp_derivative(&fp, p), p);
        if g.len() != 1 {
            continue;
        }
        let facs = fp_factor(&fp_monic(&fp, p), p, &mut rng);
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, facs) = best.expect("a good prime exists among the small primes");
    // Coefficient bound of any factor: 2^n · ‖f‖₁, times the leading coefficient.
    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = BigInt::from(2) * &lc.abs() * (BigInt::one() << n) * norm1 + 1;
    let mut modulus = BigInt::from(p);
    while modulus <= bound {
        modulus *= p;
    }
    let lifted = multifactor_lift(f, &facs, p, &modulus);

    let mut remaining: Vec<Zp> = lifted;
    let mut rest = f.clone();
    let mut result = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        let k = remaining.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lcr = rest.last().unwrap().clone();
            let prod = idx.iter().fold(vec![lcr], |acc, &i| zmod(&zmul(&acc, &remaining[i]), &modulus));
            let cand = primitive(&symmetric(&prod, &modulus));
            if let Some(q) = zdiv_exact(&rest, &cand) {
                result.push(cand);
                rest = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !idx.contains(i))
                    .map(|(_, u)| u)
                    .collect();
                found = true;
                break;
            }
            if !next_combination(&mut idx, k) {
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.len() > 1 {
        result.push(primitive(&rest));
    }
    result
}

/// Factor a nonzero rational polynomial into monic irreducible factors with
/// multiplicities. Factors are sorted by degree, then coefficients.
pub fn factor_rational(f: &QPoly) -> Vec<(QPoly, usize)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut out = Vec::new();
    // Yun's squarefree decomposition over Q.
    let mut multiplicity = 1;
    let fp = f.derivative();
    let a = f.gcd(&fp);
    let mut b = f.div_rem(&a).0;
    let mut c = fp.div_rem(&a).0;
    let mut d = &c - &b.derivative();
    while b.degree().unwrap_or(0) > 0 {
        let g = b.gcd(&d);
        if g.degree().unwrap_or(0) > 0 {
            for z in zassenhaus(&QPoly::new(g.coeffs().to_vec()).primitive_part()) {
                out.push((QPoly::from_bigints(&z).monic(), multiplicity));
            }
        }
        b = b.div_rem(&g).0;
        c = d.div_rem(&g).0;
        d = &c - &b.derivative();
        multiplicity += 1;
    }
    out.sort_by(|(x, _), (y, _)| x.degree().cmp(&y.degree()).then_with(|| cmp_coeffs(x, y)));
    out
}

fn cmp_coeffs(a: &QPoly, b: &QPoly) -> std::cmp::Ordering {
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// True iff `f` (of positive degree) is irreducible over Q.
pub fn is_irreducible(f: &QPoly) -> bool {
    let facs = factor_rational(f);
    facs.len() == 1 && facs[0].1 == 1
}

/// Rational roots of `f`, sorted ascending.
pub fn rational_roots(f: &QPoly) -> Vec<BigRational> {
    let mut roots: Vec<BigRational> = factor_rational(f)
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| -g.coeff(0))
        .collect();
    roots.sort();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(facs: &[(QPoly, usize)]) -> QPoly {
        facs.iter().fold(QPoly::one(), |acc, (g, m)| &acc * &g.pow(*m as u32))
    }

    #[test]
    fn factors_difference_of_squares() {
        let f = QPoly::from_ints(&[-1, 0, 1]);
        let facs = factor_rational(&f);
        assert_eq!(facs, vec![(QPoly::from_ints(&[-1, 1]), 1), (QPoly::from_ints(&[1, 1]), 1)]);
    }

    #[test]
    fn irreducible_quartic_splitting_mod_every_prime() {
        // x^4 + 1 is irreducible over Q but reducible modulo every prime.
        assert!(is_irreducible(&QPoly::from_ints(&[1, 0, 0, 0, 1])));
        assert!(is_irreducible(&QPoly::from_ints(&[-1, -1, 0, 1])));
        assert!(is_irreducible(&QPoly::from_ints(&[-2, 0, 0, 0, 1])));
    }

    #[test]
    fn factors_with_multiplicity_and_leading_coefficient() {
        // (2x - 1)^2 (x^2 + x + 1) (x^3 - 2)
        let a = QPoly::from_ints(&[-1, 2]);
        let b = QPoly::from_ints(&[1, 1, 1]);
        let c = QPoly::from_ints(&[-2, 0, 0, 1]);
        let f = &(&(&a * &a) * &b) * &c;
        let facs = factor_rational(&f);
        assert_eq!(facs.len(), 3);
        assert_eq!(product(&facs).monic(), f.monic());
        assert!(facs.iter().any(|(g, m)| *m == 2 && g == &a.monic()));
    }

    #[test]
    fn swinnerton_dyer_like_norm() {
        // x^4 - 10x^2 + 1, minimal polynomial of √2 + √3
        assert!(is_irreducible(&QPoly::from_ints(&[1, 0, -10, 0, 1])));
        // (x^4 - 10 x^2 + 1)(x^2 - 5)
        let f = &QPoly::from_ints(&[1, 0, -10, 0, 1]) * &QPoly::from_ints(&[-5, 0, 1]);
        assert_eq!(factor_rational(&f).len(), 2);
    }

    #[test]
    fn rational_roots_found() {
        let f = &(&QPoly::from_ints(&[-3, 2]) * &QPoly::from_ints(&[5, 1])) * &QPoly::from_ints(&[1, 0, 1]);
        let expected = vec![BigRational::new((-5).into(), 1.into()), BigRational::new(3.into(), 2.into())];
        assert_eq!(rational_roots(&f), expected);
    }
}
