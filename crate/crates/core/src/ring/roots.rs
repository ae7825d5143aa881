//! Roots of polynomials in supported fields, roots of unity, discrete logs.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::numeric::{self, BigComplex};
use super::prime;
use super::{Elem, FracCyclic, Ring, RingKind};
use crate::error::{Error, Result};
use crate::poly::{self, Poly};

/// Finite fields up to this size are searched exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;

/// Cap on the number of embedding assignments tried over extensions of Q.
const ASSIGNMENT_CAP: usize = 200_000;

/// All roots in `s` of the polynomial `f` with coefficients in `k`, sorted in
/// canonical element order. `f` is a full coefficient list (leading term last).
pub fn roots_in_ring(f: &[Elem], k: &Ring, s: &Ring) -> Result<Vec<Elem>> {
    let g = poly::map(s, f, |c| s.embed(c, k))?;
    if g.is_empty() {
        return Err(Error::Shape("the zero polynomial has every element as a root".into()));
    }
    if g.len() == 1 {
        return Ok(Vec::new());
    }
    let mut out = match s.kind() {
        _ if s.is_finite() => roots_finite(&g, s)?,
        RingKind::Rationals => roots_rational(&g)?,
        RingKind::Extension { base, .. } if base.is_rationals() => roots_number_field(&g, s)?,
        _ => return Err(Error::UnsupportedRing(format!("root finding in {s}"))),
    };
    out.sort();
    out.dedup();
    Ok(out)
}

fn roots_finite(g: &Poly, s: &Ring) -> Result<Vec<Elem>> {
    let size = s.size_u64();
    if let Some(q) = size.filter(|&q| q <= EXHAUSTIVE_LIMIT) {
        return Ok((0..q)
            .map(|i| s.element_at(i))
            .filter(|x| s.is_zero(&poly::eval(s, g, x)))
            .collect());
    }
    roots_by_splitting(g, s)
}

/// Roots in a finite field via `gcd(g, x^q - x)` and seeded equal-degree splitting.
pub(crate) fn roots_by_splitting(g: &Poly, s: &Ring) -> Result<Vec<Elem>> {
    let q = s.cardinality().expect("finite").clone();
    let g = poly::make_monic(s, g)?;
    // product of the distinct linear factors
    let xq = poly::powmod(s, &poly::x(s), &q, &g)?;
    let lin = poly::gcd(s, &poly::sub(s, &xq, &poly::x(s)), &g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut out = Vec::new();
    split_linear(s, &lin, &q, &mut rng, &mut out)?;
    out.sort();
    Ok(out)
}

/// Equal-degree splitting of a product of distinct linear factors.
fn split_linear(s: &Ring, f: &Poly, q: &BigUint, rng: &mut ChaCha8Rng, out: &mut Vec<Elem>) -> Result<()> {
    match poly::degree(f) {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(s.neg(&f[0]));
            return Ok(());
        }
        _ => {}
    }
    let char2 = s.characteristic() == 2;
    loop {
        let deg = poly::degree(f).unwrap();
        let a: Poly = poly::trimmed(s, (0..deg).map(|_| s.random_element(rng)).collect());
        if a.len() < 2 {
            continue;
        }
        let h = if char2 {
            // trace map a + a^2 + a^4 + .. over F_{2^k}
            let k = q.bits() - 1;
            let mut acc = poly::rem(s, &a, f)?;
            let mut cur = acc.clone();
            for _ in 1..k {
                cur = poly::mulmod(s, &cur, &cur, f)?;
                acc = poly::add(s, &acc, &cur);
            }
            acc
        } else {
            let e = (q - 1u32) / 2u32;
            let t = poly::powmod(s, &a, &e, f)?;
            poly::sub(s, &t, &[s.one()])
        };
        let d = poly::gcd(s, &h, f)?;
        let dd = poly::degree(&d).unwrap_or(0);
        if dd > 0 && dd < poly::degree(f).unwrap() {
            let e = poly::divrem(s, f, &d)?.0;
            split_linear(s, &d, q, rng, out)?;
            split_linear(s, &e, q, rng, out)?;
            return Ok(());
        }
    }
}

fn rat(e: &Elem) -> &BigRational {
    e.as_rat().expect("rational coefficient")
}

/// Complex roots of a squarefree rational polynomial, doubling the precision
/// until the simultaneous iteration settles.
pub fn complex_roots_rational(f: &[BigRational], start_prec: usize) -> Result<(Vec<BigComplex>, usize)> {
    let mut prec = start_prec;
    for _ in 0..6 {
        let c: Vec<BigComplex> = f.iter().map(|x| BigComplex::from_rational(x, prec)).collect();
        if let Some(z) = numeric::poly_roots(&c, prec) {
            return Ok((z, prec));
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted(prec))
}

/// Largest bit length among numerators and denominators.
pub fn max_bits<'a>(xs: impl IntoIterator<Item = &'a BigRational>) -> usize {
    xs.into_iter()
        .map(|r| r.numer().bits().max(r.denom().bits()) as usize)
        .max()
        .unwrap_or(0)
}

fn roots_rational(g: &Poly) -> Result<Vec<Elem>> {
    let q = Ring::rationals();
    let sf = poly::squarefree_part(&q, g)?;
    if sf.len() == 2 {
        return Ok(vec![q.neg(&sf[0])]);
    }
    // integral primitive multiple to bound denominators of rational roots
    let lcm_den = sf.iter().fold(BigInt::one(), |acc, c| acc.lcm(rat(c).denom()));
    let ints: Vec<BigInt> = sf.iter().map(|c| (rat(c) * &lcm_den).to_integer()).collect();
    let lc = ints.last().expect("nonzero").abs();
    let coeffs: Vec<BigRational> = sf.iter().map(|c| rat(c).clone()).collect();
    let prec = 128.max(4 * max_bits(&coeffs));
    let (z, _) = complex_roots_rational(&coeffs, prec)?;
    let lcr = BigRational::from_integer(lc.clone());
    let mut out = Vec::new();
    for root in z {
        let Some(re) = numeric::float_to_rational(&root.re) else { continue };
        let cand = BigRational::new((&re * &lcr).round().to_integer(), lc.clone());
        let e = Elem::Rat(cand);
        if q.is_zero(&poly::eval(&q, &sf, &e)) {
            out.push(e);
        }
    }
    Ok(out)
}

/// Complex images of the generator of `Q[t]/(h)`.
pub fn embeddings(s: &Ring, prec: usize) -> Result<(Vec<BigComplex>, usize)> {
    let RingKind::Extension { modulus, .. } = s.kind() else {
        return Err(Error::UnsupportedRing(format!("{s} is not an extension")));
    };
    let mut h: Vec<BigRational> = modulus.iter().map(|c| rat(c).clone()).collect();
    h.push(BigRational::one());
    complex_roots_rational(&h, prec)
}

/// Value of an element of `Q[t]/(h)` at a complex image of `t`.
pub fn embed_value(x: &Elem, tau: &BigComplex) -> BigComplex {
    let coords = x.coords().expect("extension element");
    let c: Vec<BigComplex> = coords.iter().map(|v| BigComplex::from_rational(rat(v), tau.prec)).collect();
    numeric::eval(&c, tau)
}

fn roots_number_field(g: &Poly, s: &Ring) -> Result<Vec<Elem>> {
    let sf = poly::squarefree_part(s, g)?;
    if sf.len() == 2 {
        return Ok(vec![s.neg(&sf[0])]);
    }
    let bits = sf
        .iter()
        .flat_map(|c| c.coords().unwrap().iter().map(|v| rat(v).numer().bits().max(rat(v).denom().bits())))
        .max()
        .unwrap_or(0) as usize;
    let mut prec = 192.max(8 * bits);
    let d = s.degree();
    for _ in 0..4 {
        let (tau, p) = embeddings(s, prec)?;
        let mut per_embedding = Vec::with_capacity(d);
        for t in &tau {
            let c: Vec<BigComplex> = sf.iter().map(|x| embed_value(x, t)).collect();
            match numeric::poly_roots(&c, p) {
                Some(z) => per_embedding.push(z),
                None => break,
            }
        }
        if per_embedding.len() < d {
            prec *= 2;
            continue;
        }
        let vinv = complex_inverse(&vandermonde(&tau))?;
        let deg = sf.len() - 1;
        let total = deg.checked_pow(d as u32).unwrap_or(usize::MAX);
        if total > ASSIGNMENT_CAP {
            return Err(Error::DimensionCapExceeded(format!("{total} embedding assignments")));
        }
        let mut out = Vec::new();
        for idx in 0..total {
            let mut k = idx;
            let z: Vec<&BigComplex> = (0..d)
                .map(|j| {
                    let r = &per_embedding[j][k % deg];
                    k /= deg;
                    r
                })
                .collect();
            let mut coords = Vec::with_capacity(d);
            let mut ok = true;
            for row in &vinv {
                let mut acc = BigComplex::zero(p);
                for (a, zj) in row.iter().zip(&z) {
                    acc = acc.add(&a.mul(zj));
                }
                match numeric::rationalize_real(&acc) {
                    Some(r) => coords.push(Elem::Rat(r)),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let e = Elem::Ext(coords);
            if s.is_zero(&poly::eval(s, &sf, &e)) {
                out.push(e);
            }
        }
        return Ok(out);
    }
    Err(Error::PrecisionExhausted(prec))
}

fn vandermonde(tau: &[BigComplex]) -> Vec<Vec<BigComplex>> {
    tau.iter()
        .map(|t| {
            let mut row = Vec::with_capacity(tau.len());
            let mut acc = BigComplex::one(t.prec);
            for _ in 0..tau.len() {
                row.push(acc.clone());
                acc = acc.mul(t);
            }
            row
        })
        .collect()
}

/// Gauss-Jordan inverse of a complex matrix with partial pivoting.
pub fn complex_inverse(m: &[Vec<BigComplex>]) -> Result<Vec<Vec<BigComplex>>> {
    let n = m.len();
    let prec = m.first().and_then(|r| r.first()).map(|x| x.prec).unwrap_or(64);
    let mut a: Vec<Vec<BigComplex>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigComplex::one(prec) } else { BigComplex::zero(prec) }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs_f64().partial_cmp(&a[y][col].abs_f64()).unwrap())
            .expect("nonempty");
        if a[piv][col].abs_f64() == 0.0 {
            return Err(Error::SingularVandermonde);
        }
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = x.div(&p);
        }
        for r in 0..n {
            if r != col {
                let factor = a[r][col].clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..2 * n {
                    let t = factor.mul(&a[col][c]);
                    a[r][c] = a[r][c].sub(&t);
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn exact_order_is(s: &Ring, h: &Elem, n: u64) -> bool {
    if !s.is_one(&s.pow_u64(h, n)) {
        return false;
    }
    prime::prime_divisors(n)
        .into_iter()
        .all(|l| !s.is_one(&s.pow_u64(h, n / l)))
}

/// Deterministic element of exact multiplicative order `n` in a finite field:
/// `g^((|S| - 1) / n)` for the first `g` in canonical order that works.
pub fn root_of_unity(s: &Ring, n: u64) -> Result<Elem> {
    let q = s
        .cardinality()
        .ok_or_else(|| Error::UnsupportedRing(format!("{s} is not finite")))?;
    let q1 = q - 1u32;
    if n == 0 || (&q1 % n) != BigUint::zero() {
        return Err(Error::NoSuchRoot { n, size: q.to_string() });
    }
    let e = &q1 / n;
    let bound = s.size_u64().unwrap_or(u64::MAX);
    for i in 1..bound {
        let g = s.element_at(i);
        let h = s.pow(&g, &e);
        if exact_order_is(s, &h, n) {
            return Ok(h);
        }
    }
    Err(Error::NoSuchRoot { n, size: q.to_string() })
}

/// `k / n` where `beta = zeta^k`.
pub fn dlog_mu(s: &Ring, zeta: &Elem, beta: &Elem, n: u64) -> Result<FracCyclic> {
    let mut acc = s.one();
    for k in 0..n {
        if &acc == beta {
            return Ok(FracCyclic::new(k as i64, n));
        }
        acc = s.mul(&acc, zeta);
    }
    Err(Error::NotInSubgroup)
}

/// Multiplicative order of a root of unity, or `None` if it exceeds `bound`.
pub fn order_of_root(s: &Ring, x: &Elem, bound: u64) -> Option<u64> {
    s.multiplicative_order(x, bound)
}

/// An element of order `lcm(orders)` in the group generated by `values`,
/// assembled from prime-power parts; `None` if some value has order beyond
/// `bound`.
pub fn generator_of_values(s: &Ring, values: &[Elem], bound: u64) -> Option<(Elem, u64)> {
    let mut with_orders = Vec::new();
    for v in values {
        let o = s.multiplicative_order(v, bound)?;
        with_orders.push((v, o));
    }
    let e = with_orders.iter().fold(1u64, |acc, (_, o)| acc.lcm(o));
    let mut zeta = s.one();
    for l in prime::prime_divisors(e) {
        let mut lk = 1;
        while e % (lk * l) == 0 {
            lk *= l;
        }
        let (v, o) = with_orders.iter().find(|(_, o)| o % lk == 0).expect("prime power occurs");
        zeta = s.mul(&zeta, &s.pow_u64(v, o / lk));
    }
    Some((zeta, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    fn q(n: i64) -> Elem {
        Elem::Rat(BigRational::from_integer(n.into()))
    }

    #[test]
    fn roots_examples() {
        let f7 = fp(7);
        let f = vec![Elem::Mod(5), Elem::Mod(0), Elem::Mod(1)];
        assert_eq!(roots_in_ring(&f, &f7, &f7).unwrap(), vec![Elem::Mod(3), Elem::Mod(4)]);
        let qq = Ring::rationals();
        assert!(roots_in_ring(&[q(1), q(0), q(1)], &qq, &qq).unwrap().is_empty());
        assert_eq!(roots_in_ring(&[q(0), q(-1), q(0), q(1)], &qq, &qq).unwrap(), vec![q(-1), q(0), q(1)]);
        // 6x^2 - 5x + 1 = (2x - 1)(3x - 1), with a double factor
        let f = poly::mul(&qq, &[q(1), q(-5), q(6)], &[q(-1), q(3)]);
        let r = roots_in_ring(&f, &qq, &qq).unwrap();
        let third = Elem::Rat(BigRational::new(1.into(), 3.into()));
        let half = Elem::Rat(BigRational::new(1.into(), 2.into()));
        assert_eq!(r, vec![third, half]);
    }

    #[test]
    fn roots_in_quadratic_field() {
        let two = BigRational::from_integer(2.into());
        let k = Ring::quadratic(&two);
        let qq = Ring::rationals();
        // x^4 - 4 = (x^2 - 2)(x^2 + 2)
        let f = vec![q(-4), q(0), q(0), q(0), q(1)];
        let r = roots_in_ring(&f, &qq, &k).unwrap();
        let t = k.generator().unwrap();
        assert_eq!(r, vec![k.neg(&t), t]);
        // x^3 - x over Q(sqrt 2) still has its three rational roots
        let r = roots_in_ring(&[q(0), q(-1), q(0), q(1)], &qq, &k).unwrap();
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn cantor_zassenhaus_on_a_large_field() {
        let f = Ring::galois_field(97, 3).unwrap();
        assert!(f.size_u64().unwrap() > EXHAUSTIVE_LIMIT);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let want: Vec<Elem> = (0..4).map(|_| f.random_element(&mut rng)).collect();
        let g = poly::from_roots(&f, &want);
        let mut want = want;
        want.sort();
        want.dedup();
        assert_eq!(roots_in_ring(&g, &f, &f).unwrap(), want);
        let f2 = Ring::galois_field(2, 17).unwrap();
        let want: Vec<Elem> = (0..3).map(|_| f2.random_element(&mut rng)).collect();
        let g = poly::from_roots(&f2, &want);
        let mut want = want;
        want.sort();
        want.dedup();
        assert_eq!(roots_in_ring(&g, &f2, &f2).unwrap(), want);
    }

    #[test]
    fn roots_of_unity_examples() {
        assert_eq!(root_of_unity(&fp(7), 6).unwrap(), Elem::Mod(3));
        assert_eq!(root_of_unity(&fp(11), 5).unwrap(), Elem::Mod(4));
        assert!(matches!(root_of_unity(&fp(7), 4), Err(Error::NoSuchRoot { .. })));
        let f7 = fp(7);
        assert_eq!(dlog_mu(&f7, &Elem::Mod(3), &Elem::Mod(2), 6).unwrap(), FracCyclic::new(1, 3));
        assert_eq!(dlog_mu(&f7, &Elem::Mod(3), &Elem::Mod(1), 6).unwrap(), FracCyclic::zero());
        assert_eq!(dlog_mu(&f7, &Elem::Mod(3), &Elem::Mod(0), 6), Err(Error::NotInSubgroup));
    }

    #[test]
    fn generator_from_values() {
        let f = fp(31);
        // 2 has order 5 and 30 = -1 has order 2
        let (z, e) = generator_of_values(&f, &[Elem::Mod(2), Elem::Mod(30), Elem::Mod(1)], 30).unwrap();
        assert_eq!(e, 10);
        assert_eq!(f.multiplicative_order(&z, 30), Some(10));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn finite_roots_match_exhaustive_search(
            p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]),
            m in 1usize..3,
            coeffs in prop::collection::vec(0u64..1000, 1..8),
        ) {
            let s = Ring::galois_field(p, m).unwrap();
            let mut f: Poly = coeffs.iter().map(|&c| s.element_at(c % s.size_u64().unwrap())).collect();
            f.push(s.one());
            let got = roots_by_splitting(&f, &s).unwrap();
            let want: Vec<Elem> = s.elements(1 << 16).unwrap().into_iter()
                .filter(|x| s.is_zero(&poly::eval(&s, &f, x))).collect();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn dlog_is_additive(a in 0u64..6, b in 0u64..6) {
            let f = fp(7);
            let z = Elem::Mod(3);
            let x = f.pow_u64(&z, a);
            let y = f.pow_u64(&z, b);
            let lhs = dlog_mu(&f, &z, &f.mul(&x, &y), 6).unwrap();
            let rhs = dlog_mu(&f, &z, &x, 6).unwrap() + dlog_mu(&f, &z, &y, 6).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
