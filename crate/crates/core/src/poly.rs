//! Dense univariate polynomials over a [`Ring`], stored low-degree first.
//!
//! The zero polynomial is the empty vector; every function returns trimmed
//! vectors. Division and gcd need the ring to be a field.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

pub type Poly = Vec<Elem>;

pub fn trim(r: &Ring, p: &mut Poly) {
    while p.last().is_some_and(|c| r.is_zero(c)) {
        p.pop();
    }
}

pub fn trimmed(r: &Ring, mut p: Poly) -> Poly {
    trim(r, &mut p);
    p
}

pub fn degree(p: &[Elem]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn add(r: &Ring, a: &[Elem], b: &[Elem]) -> Poly {
    let n = a.len().max(b.len());
    let z = r.zero();
    let out = (0..n)
        .map(|i| r.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trimmed(r, out)
}

pub fn neg(r: &Ring, a: &[Elem]) -> Poly {
    a.iter().map(|c| r.neg(c)).collect()
}

pub fn sub(r: &Ring, a: &[Elem], b: &[Elem]) -> Poly {
    add(r, a, &neg(r, b))
}

pub fn scale(r: &Ring, a: &[Elem], s: &Elem) -> Poly {
    trimmed(r, a.iter().map(|c| r.mul(c, s)).collect())
}

/// Schoolbook product; the result is not trimmed when a factor has a zero
/// leading entry, so callers working with coordinate vectors may pass
/// untrimmed input.
pub fn mul(r: &Ring, a: &[Elem], b: &[Elem]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    out
}

pub fn monomial(r: &Ring, c: Elem, k: usize) -> Poly {
    let mut p = vec![r.zero(); k];
    p.push(c);
    trimmed(r, p)
}

pub fn x(r: &Ring) -> Poly {
    vec![r.zero(), r.one()]
}

pub fn divrem(r: &Ring, a: &[Elem], b: &[Elem]) -> Result<(Poly, Poly)> {
    let b = trimmed(r, b.to_vec());
    let db = degree(&b).ok_or_else(|| Error::NotInvertible("division by the zero polynomial".into()))?;
    let lc_inv = r.inv(&b[db])?;
    let mut rem = trimmed(r, a.to_vec());
    if rem.len() < b.len() {
        return Ok((Vec::new(), rem));
    }
    let mut q = vec![r.zero(); rem.len() - db];
    while rem.len() > db && !rem.is_empty() {
        let k = rem.len() - 1 - db;
        let c = r.mul(&rem[rem.len() - 1], &lc_inv);
        for (i, bi) in b.iter().enumerate() {
            let t = r.mul(&c, bi);
            rem[k + i] = r.sub(&rem[k + i], &t);
        }
        q[k] = c;
        rem.pop();
        trim(r, &mut rem);
    }
    Ok((trimmed(r, q), rem))
}

pub fn rem(r: &Ring, a: &[Elem], b: &[Elem]) -> Result<Poly> {
    Ok(divrem(r, a, b)?.1)
}

pub fn make_monic(r: &Ring, a: &[Elem]) -> Result<Poly> {
    match a.last() {
        None => Ok(Vec::new()),
        Some(lc) => {
            let inv = r.inv(lc)?;
            Ok(scale(r, a, &inv))
        }
    }
}

/// Monic gcd.
pub fn gcd(r: &Ring, a: &[Elem], b: &[Elem]) -> Result<Poly> {
    let mut u = trimmed(r, a.to_vec());
    let mut v = trimmed(r, b.to_vec());
    while !v.is_empty() {
        let t = rem(r, &u, &v)?;
        u = v;
        v = t;
    }
    make_monic(r, &u)
}

/// `(g, s, t)` with `s a + t b = g` and `g` the monic gcd.
pub fn xgcd(r: &Ring, a: &[Elem], b: &[Elem]) -> Result<(Poly, Poly, Poly)> {
    let (mut r0, mut r1) = (trimmed(r, a.to_vec()), trimmed(r, b.to_vec()));
    let (mut s0, mut s1) = (vec![r.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![r.one()]);
    while !r1.is_empty() {
        let (q, rr) = divrem(r, &r0, &r1)?;
        let s2 = sub(r, &s0, &mul(r, &q, &s1));
        let t2 = sub(r, &t0, &mul(r, &q, &t1));
        r0 = std::mem::replace(&mut r1, rr);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => Ok((r0, s0, t0)),
        Some(lc) => {
            let inv = r.inv(lc)?;
            Ok((scale(r, &r0, &inv), scale(r, &s0, &inv), scale(r, &t0, &inv)))
        }
    }
}

pub fn eval(r: &Ring, p: &[Elem], x: &Elem) -> Elem {
    let mut acc = r.zero();
    for c in p.iter().rev() {
        acc = r.add(&r.mul(&acc, x), c);
    }
    acc
}

pub fn derivative(r: &Ring, p: &[Elem]) -> Poly {
    let out = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| r.mul(c, &r.from_i64(i as i64)))
        .collect();
    trimmed(r, out)
}

pub fn mulmod(r: &Ring, a: &[Elem], b: &[Elem], m: &[Elem]) -> Result<Poly> {
    rem(r, &mul(r, a, b), m)
}

pub fn powmod(r: &Ring, base: &[Elem], e: &BigUint, m: &[Elem]) -> Result<Poly> {
    let base = rem(r, base, m)?;
    let mut acc = rem(r, &[r.one()], m)?;
    for i in (0..e.bits()).rev() {
        acc = mulmod(r, &acc, &acc, m)?;
        if e.bit(i) {
            acc = mulmod(r, &acc, &base, m)?;
        }
    }
    Ok(acc)
}

/// `prod (x - r_i)`.
pub fn from_roots(r: &Ring, roots: &[Elem]) -> Poly {
    let mut p = vec![r.one()];
    for a in roots {
        p = mul(r, &p, &[r.neg(a), r.one()]);
    }
    p
}

/// Polynomial whose coefficients are mapped through `f`.
pub fn map(r_to: &Ring, p: &[Elem], f: impl Fn(&Elem) -> Result<Elem>) -> Result<Poly> {
    let out = p.iter().map(f).collect::<Result<Vec<_>>>()?;
    Ok(trimmed(r_to, out))
}

/// `x^(q^i) mod h` for `i = 1..=k`, where `q = |base|`.
fn frobenius_powers(base: &Ring, h: &[Elem], k: usize) -> Result<Vec<Poly>> {
    let q = base.cardinality().expect("finite base").clone();
    let mut out = Vec::with_capacity(k);
    let mut cur = rem(base, &x(base), h)?;
    for _ in 0..k {
        cur = powmod(base, &cur, &q, h)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Irreducibility over a finite field (`h` given with its leading coefficient).
pub fn is_irreducible_finite(base: &Ring, h: &[Elem]) -> Result<bool> {
    let h = make_monic(base, &trimmed(base, h.to_vec()))?;
    let d = match degree(&h) {
        None | Some(0) => return Ok(false),
        Some(d) => d,
    };
    let pw = frobenius_powers(base, &h, d)?;
    let xx = x(base);
    for (i, xi) in pw.iter().enumerate() {
        let g = gcd(base, &sub(base, xi, &xx), &h)?;
        if i + 1 < d {
            if g.len() != 1 {
                return Ok(false);
            }
        } else {
            return Ok(g == h);
        }
    }
    Ok(false)
}

/// Non-leading coefficients of the first monic irreducible polynomial of
/// degree `m` over `base`, comparing coefficients from `t^(m-1)` down to `t^0`.
pub fn smallest_irreducible(base: &Ring, m: usize) -> Result<Vec<Elem>> {
    let q = base
        .size_u64()
        .ok_or_else(|| Error::UnsupportedRing(format!("{base} is not a small finite field")))?;
    let total = q.checked_pow(m as u32).ok_or_else(|| Error::DimensionCapExceeded("search space".into()))?;
    let ext = Ring::extension_unchecked(base, vec![base.zero(); m]);
    for idx in 0..total {
        let mut coeffs = match ext.element_at(idx) {
            Elem::Ext(c) => c,
            _ => unreachable!(),
        };
        coeffs.reverse();
        if m > 1 && base.is_zero(&coeffs[0]) {
            continue;
        }
        let mut h = coeffs.clone();
        h.push(base.one());
        if is_irreducible_finite(base, &h)? {
            return Ok(coeffs);
        }
    }
    Err(Error::ReducibleModulus)
}

/// `f / gcd(f, f')`, made monic; in positive characteristic a zero derivative
/// leaves `f` unchanged.
pub fn squarefree_part(r: &Ring, f: &[Elem]) -> Result<Poly> {
    let f = make_monic(r, &trimmed(r, f.to_vec()))?;
    let df = derivative(r, &f);
    if df.is_empty() {
        return Ok(f);
    }
    let g = gcd(r, &f, &df)?;
    Ok(divrem(r, &f, &g)?.0)
}

/// Degrees of the irreducible factors of the squarefree part of `f` over a
/// finite field, by distinct-degree factorization (with multiplicity).
pub fn factor_degrees(base: &Ring, f: &[Elem]) -> Result<Vec<usize>> {
    let mut f = squarefree_part(base, f)?;
    let q = base.cardinality().expect("finite base").clone();
    let xx = x(base);
    let mut out = Vec::new();
    let mut i = 0;
    let mut h = xx.clone();
    while degree(&f).unwrap_or(0) > 0 {
        i += 1;
        if 2 * i > degree(&f).unwrap() {
            out.push(degree(&f).unwrap());
            break;
        }
        h = powmod(base, &h, &q, &f)?;
        let g = gcd(base, &sub(base, &h, &xx), &f)?;
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 {
            out.extend(std::iter::repeat(i).take(dg / i));
            f = divrem(base, &f, &g)?.0;
            h = rem(base, &h, &f)?;
        }
    }
    Ok(out)
}

/// A monic polynomial `x^n + c_{n-1} x^{n-1} + .. + c_0` over a base ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicPoly {
    pub base: Ring,
    /// `c_0 .. c_{n-1}`
    pub coeffs: Vec<Elem>,
}

impl MonicPoly {
    pub fn new(base: &Ring, coeffs: Vec<Elem>) -> Self {
        MonicPoly { base: base.clone(), coeffs }
    }

    /// From a full coefficient list, which must end in 1.
    pub fn from_full(base: &Ring, full: &[Elem]) -> Result<Self> {
        let full = trimmed(base, full.to_vec());
        match full.split_last() {
            Some((lc, rest)) if base.is_one(lc) => Ok(MonicPoly::new(base, rest.to_vec())),
            _ => Err(Error::Parse("polynomial is not monic".into())),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn full(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.push(self.base.one());
        v
    }

    pub fn eval(&self, s: &Ring, x: &Elem) -> Result<Elem> {
        let coeffs = self.full().iter().map(|c| s.embed(c, &self.base)).collect::<Result<Vec<_>>>()?;
        Ok(eval(s, &coeffs, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    fn v(xs: &[u64]) -> Poly {
        xs.iter().map(|&x| Elem::Mod(x)).collect()
    }

    #[test]
    fn division_identity() {
        let r = fp(7);
        let a = v(&[1, 2, 3, 4, 5]);
        let b = v(&[3, 0, 1]);
        let (q, rr) = divrem(&r, &a, &b).unwrap();
        assert_eq!(add(&r, &mul(&r, &q, &b), &rr), a);
        assert!(rr.len() < b.len());
    }

    #[test]
    fn xgcd_bezout() {
        let r = fp(11);
        let a = from_roots(&r, &[Elem::Mod(1), Elem::Mod(2), Elem::Mod(3)]);
        let b = from_roots(&r, &[Elem::Mod(2), Elem::Mod(5)]);
        let (g, s, t) = xgcd(&r, &a, &b).unwrap();
        assert_eq!(g, v(&[9, 1]));
        assert_eq!(add(&r, &mul(&r, &s, &a), &mul(&r, &t, &b)), g);
    }

    #[test]
    fn irreducibility_matches_root_search_for_quadratics() {
        for p in [2u64, 3, 5, 7, 11] {
            let r = fp(p);
            for c0 in 0..p {
                for c1 in 0..p {
                    let h = v(&[c0, c1, 1]);
                    let has_root = (0..p).any(|x| r.is_zero(&eval(&r, &h, &Elem::Mod(x))));
                    assert_eq!(is_irreducible_finite(&r, &h).unwrap(), !has_root, "p={p} {c0} {c1}");
                }
            }
        }
        // x^4 + x + 1 is irreducible over F_2, x^4 + x^2 + 1 = (x^2 + x + 1)^2 is not
        assert!(is_irreducible_finite(&fp(2), &v(&[1, 1, 0, 0, 1])).unwrap());
        assert!(!is_irreducible_finite(&fp(2), &v(&[1, 0, 1, 0, 1])).unwrap());
    }

    #[test]
    fn distinct_degree_factorization() {
        let r = fp(5);
        // (x - 1)(x^2 + 2)(x^2 + 3): 2 and 3 are non-squares mod 5
        let f = mul(&r, &mul(&r, &v(&[4, 1]), &v(&[2, 0, 1])), &v(&[3, 0, 1]));
        let mut d = factor_degrees(&r, &f).unwrap();
        d.sort();
        assert_eq!(d, vec![1, 2, 2]);
        // x^5 - 1 over F_7: (x - 1) times an irreducible quartic, ord_5(7) = 4
        let mut d = factor_degrees(&fp(7), &v(&[6, 0, 0, 0, 0, 1])).unwrap();
        d.sort();
        assert_eq!(d, vec![1, 4]);
    }

    #[test]
    fn squarefree_over_q() {
        let q = Ring::rationals();
        let one = q.one();
        let m1 = q.neg(&one);
        // (x - 1)^2 (x + 1)
        let f = mul(&q, &mul(&q, &[m1.clone(), one.clone()], &[m1.clone(), one.clone()]), &[one.clone(), one.clone()]);
        let s = squarefree_part(&q, &f).unwrap();
        assert_eq!(s, vec![m1, q.zero(), one]);
    }
}
