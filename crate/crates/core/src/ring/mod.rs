//! Exact base rings: the rationals, prime fields and simple extensions
//! `K[t]/(h)` of either.
//!
//! A [`Ring`] is a cheap-to-clone descriptor; elements are plain [`Elem`]
//! values that carry no ring pointer, so every operation goes through the
//! descriptor (`ring.mul(&a, &b)`).

pub mod frac;
pub mod numeric;
pub mod prime;
pub mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly;

pub use frac::FracCyclic;

/// An element of some [`Ring`].
///
/// Extension elements are coordinate vectors over the base in the power basis
/// `1, t, .., t^(d-1)`. The derived order is the canonical element order:
/// numeric on prime-field representatives and rationals, lexicographic on
/// extension coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Rat(BigRational),
    Mod(u64),
    Ext(Vec<Elem>),
}

impl Elem {
    pub fn as_rat(&self) -> Option<&BigRational> {
        match self {
            Elem::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn coords(&self) -> Option<&[Elem]> {
        match self {
            Elem::Ext(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Rationals,
    PrimeField(u64),
    /// `base[t]/(t^d + c_{d-1} t^{d-1} + .. + c_0)`, stored as `c_0..c_{d-1}`.
    Extension { base: Ring, modulus: Vec<Elem> },
}

#[derive(Debug)]
struct RingInner {
    kind: RingKind,
    characteristic: u64,
    cardinality: Option<BigUint>,
}

/// Descriptor of a base ring or splitting field.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            RingKind::Rationals => write!(f, "Q"),
            RingKind::PrimeField(p) => write!(f, "F{p}"),
            RingKind::Extension { base, modulus } => {
                let mut c = modulus.clone();
                c.push(base.one());
                write!(f, "{base}[t]/({})", poly_string(base, &c))
            }
        }
    }
}

impl Ring {
    pub fn rationals() -> Ring {
        Ring(Arc::new(RingInner {
            kind: RingKind::Rationals,
            characteristic: 0,
            cardinality: None,
        }))
    }

    pub fn prime_field(p: u64) -> Result<Ring> {
        if !prime::is_prime(p) {
            return Err(Error::CompositeModulus(p.to_string()));
        }
        Ok(Ring(Arc::new(RingInner {
            kind: RingKind::PrimeField(p),
            characteristic: p,
            cardinality: Some(BigUint::from(p)),
        })))
    }

    /// `base[t]/(h)` with `h` monic, given by its non-leading coefficients.
    ///
    /// Over a finite base the modulus must be irreducible; over the rationals
    /// it is taken as supplied.
    pub fn extension(base: &Ring, modulus: Vec<Elem>) -> Result<Ring> {
        if modulus.is_empty() {
            return Err(Error::ZeroDegreeModulus);
        }
        if base.is_finite() {
            let mut h = modulus.clone();
            h.push(base.one());
            if !poly::is_irreducible_finite(base, &h)? {
                return Err(Error::ReducibleModulus);
            }
        }
        Ok(Self::extension_unchecked(base, modulus))
    }

    pub(crate) fn extension_unchecked(base: &Ring, modulus: Vec<Elem>) -> Ring {
        let d = modulus.len() as u32;
        let cardinality = base.cardinality().map(|q| q.pow(d));
        Ring(Arc::new(RingInner {
            characteristic: base.characteristic(),
            cardinality,
            kind: RingKind::Extension {
                base: base.clone(),
                modulus,
            },
        }))
    }

    /// The field with `p^m` elements, presented over `F_p` by the
    /// lexicographically smallest monic irreducible polynomial of degree `m`.
    pub fn galois_field(p: u64, m: usize) -> Result<Ring> {
        let fp = Ring::prime_field(p)?;
        if m <= 1 {
            return Ok(fp);
        }
        let modulus = poly::smallest_irreducible(&fp, m)?;
        Ok(Self::extension_unchecked(&fp, modulus))
    }

    /// Shorthand for `Q[t]/(t^2 - a)`.
    pub fn quadratic(a: &BigRational) -> Ring {
        let q = Ring::rationals();
        Self::extension_unchecked(&q, vec![Elem::Rat(-a.clone()), Elem::Rat(BigRational::zero())])
    }

    pub fn kind(&self) -> &RingKind {
        &self.0.kind
    }

    pub fn characteristic(&self) -> u64 {
        self.0.characteristic
    }

    pub fn cardinality(&self) -> Option<&BigUint> {
        self.0.cardinality.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.0.cardinality.is_some()
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self.kind(), RingKind::Rationals)
    }

    /// Degree over the immediate base (1 for prime fields and the rationals).
    pub fn degree(&self) -> usize {
        match self.kind() {
            RingKind::Extension { modulus, .. } => modulus.len(),
            _ => 1,
        }
    }

    /// Degree over the prime field (or over the rationals).
    pub fn absolute_degree(&self) -> usize {
        match self.kind() {
            RingKind::Extension { base, modulus } => base.absolute_degree() * modulus.len(),
            _ => 1,
        }
    }

    pub fn base(&self) -> Option<&Ring> {
        match self.kind() {
            RingKind::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    /// The bottom of the tower: `Q` or `F_p`.
    pub fn prime_subfield(&self) -> Ring {
        match self.kind() {
            RingKind::Extension { base, .. } => base.prime_subfield(),
            _ => self.clone(),
        }
    }

    /// True when `self` is reachable from `other` by coefficient embedding.
    pub fn contains(&self, other: &Ring) -> bool {
        if self == other {
            return true;
        }
        match self.kind() {
            RingKind::Extension { base, .. } => base.contains(other),
            _ => false,
        }
    }

    pub fn zero(&self) -> Elem {
        match self.kind() {
            RingKind::Rationals => Elem::Rat(BigRational::zero()),
            RingKind::PrimeField(_) => Elem::Mod(0),
            RingKind::Extension { base, modulus } => Elem::Ext(vec![base.zero(); modulus.len()]),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Elem {
        match self.kind() {
            RingKind::Rationals => Elem::Rat(BigRational::from_integer(v.clone())),
            RingKind::PrimeField(p) => {
                let r = v.mod_floor_u64(*p);
                Elem::Mod(r)
            }
            RingKind::Extension { base, modulus } => {
                let mut c = vec![base.zero(); modulus.len()];
                c[0] = base.from_bigint(v);
                Elem::Ext(c)
            }
        }
    }

    /// Image of a rational number; fails when a denominator is not invertible.
    pub fn from_rational(&self, v: &BigRational) -> Result<Elem> {
        match self.kind() {
            RingKind::Rationals => Ok(Elem::Rat(v.clone())),
            RingKind::PrimeField(p) => {
                let den = v.denom().mod_floor_u64(*p);
                if den == 0 {
                    return Err(Error::CoefficientNotMapped(format!(
                        "denominator of {v} vanishes mod {p}"
                    )));
                }
                let num = v.numer().mod_floor_u64(*p);
                Ok(Elem::Mod(prime::mul_mod(num, prime::pow_mod(den, p - 2, *p), *p)))
            }
            RingKind::Extension { base, modulus } => {
                let mut c = vec![base.zero(); modulus.len()];
                c[0] = base.from_rational(v)?;
                Ok(Elem::Ext(c))
            }
        }
    }

    /// Maps `x` from `from` into `self` along the canonical coefficient map
    /// (identity, inclusion into an extension, or reduction `Q -> F_p`).
    pub fn embed(&self, x: &Elem, from: &Ring) -> Result<Elem> {
        if self == from {
            return Ok(x.clone());
        }
        if let (RingKind::Rationals, Elem::Rat(r)) = (from.kind(), x) {
            return self.from_rational(r);
        }
        match self.kind() {
            RingKind::Extension { base, modulus } => {
                let inner = base.embed(x, from)?;
                let mut c = vec![base.zero(); modulus.len()];
                c[0] = inner;
                Ok(Elem::Ext(c))
            }
            _ => Err(Error::CoefficientNotMapped(format!("no map from {from} to {self}"))),
        }
    }

    /// Inverse of [`Ring::embed`]: recovers an element of the subring `sub`
    /// when `x` lies in it.
    pub fn descend(&self, x: &Elem, sub: &Ring) -> Option<Elem> {
        if self == sub {
            return Some(x.clone());
        }
        match (self.kind(), x) {
            (RingKind::Extension { base, .. }, Elem::Ext(c)) => {
                if c[1..].iter().all(|v| base.is_zero(v)) {
                    base.descend(&c[0], sub)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        match x {
            Elem::Rat(r) => r.is_zero(),
            Elem::Mod(v) => *v == 0,
            Elem::Ext(c) => {
                let base = self.base().expect("extension element in a non-extension ring");
                c.iter().all(|v| base.is_zero(v))
            }
        }
    }

    pub fn is_one(&self, x: &Elem) -> bool {
        *x == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.kind(), a, b) {
            (RingKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (RingKind::PrimeField(p), Elem::Mod(x), Elem::Mod(y)) => Elem::Mod((x + y) % p),
            (RingKind::Extension { base, .. }, Elem::Ext(x), Elem::Ext(y)) => {
                Elem::Ext(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect())
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self.kind(), a) {
            (RingKind::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (RingKind::PrimeField(p), Elem::Mod(x)) => Elem::Mod((p - x) % p),
            (RingKind::Extension { base, .. }, Elem::Ext(x)) => {
                Elem::Ext(x.iter().map(|u| base.neg(u)).collect())
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self.kind(), a, b) {
            (RingKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (RingKind::PrimeField(p), Elem::Mod(x), Elem::Mod(y)) => {
                Elem::Mod(prime::mul_mod(*x, *y, *p))
            }
            (RingKind::Extension { base, modulus }, Elem::Ext(x), Elem::Ext(y)) => {
                let prod = poly::mul(base, x, y);
                Elem::Ext(reduce_by_monic(base, prod, modulus))
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn square(&self, a: &Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::NotInvertible("zero".into()));
        }
        match (self.kind(), a) {
            (RingKind::Rationals, Elem::Rat(x)) => Ok(Elem::Rat(x.recip())),
            (RingKind::PrimeField(p), Elem::Mod(x)) => Ok(Elem::Mod(prime::pow_mod(*x, p - 2, *p))),
            (RingKind::Extension { base, modulus }, Elem::Ext(x)) => {
                let mut h = modulus.clone();
                h.push(base.one());
                let mut xa = x.clone();
                poly::trim(base, &mut xa);
                let (g, s, _) = poly::xgcd(base, &xa, &h)?;
                if g.len() != 1 {
                    return Err(Error::NotInvertible(format!(
                        "{} is a zero divisor in {self}",
                        self.format(a)
                    )));
                }
                let mut s = s;
                s.resize(modulus.len(), base.zero());
                Ok(Elem::Ext(reduce_by_monic(base, s, modulus)))
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: &BigUint) -> Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn pow_u64(&self, a: &Elem, e: u64) -> Elem {
        self.pow(a, &BigUint::from(e))
    }

    /// The generator `t` of an extension.
    pub fn generator(&self) -> Option<Elem> {
        match self.kind() {
            RingKind::Extension { base, modulus } => {
                let mut c = vec![base.zero(); modulus.len()];
                if modulus.len() == 1 {
                    c[0] = base.neg(&modulus[0]);
                } else {
                    c[1] = base.one();
                }
                Some(Elem::Ext(c))
            }
            _ => None,
        }
    }

    /// Number of elements as a `u64`, if finite and small enough.
    pub fn size_u64(&self) -> Option<u64> {
        self.cardinality().and_then(|c| c.to_u64())
    }

    /// The `idx`-th element in canonical order (finite rings only).
    pub fn element_at(&self, idx: u64) -> Elem {
        match self.kind() {
            RingKind::PrimeField(_) => Elem::Mod(idx),
            RingKind::Extension { base, modulus } => {
                let q = base.size_u64().expect("finite base");
                let d = modulus.len();
                let mut digits = vec![0u64; d];
                let mut k = idx;
                for slot in digits.iter_mut().rev() {
                    *slot = k % q;
                    k /= q;
                }
                Elem::Ext(digits.into_iter().map(|v| base.element_at(v)).collect())
            }
            RingKind::Rationals => panic!("the rationals cannot be enumerated"),
        }
    }

    /// All elements in canonical order; refuses rings with more than `cap` elements.
    pub fn elements(&self, cap: u64) -> Result<Vec<Elem>> {
        let size = self
            .size_u64()
            .ok_or_else(|| Error::UnsupportedRing(format!("{self} is not a small finite field")))?;
        if size > cap {
            return Err(Error::DimensionCapExceeded(format!(
                "{self} has {size} elements (cap {cap})"
            )));
        }
        Ok((0..size).map(|i| self.element_at(i)).collect())
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Elem {
        match self.kind() {
            RingKind::PrimeField(p) => Elem::Mod(rng.gen_range(0..*p)),
            RingKind::Extension { base, modulus } => {
                Elem::Ext((0..modulus.len()).map(|_| base.random_element(rng)).collect())
            }
            RingKind::Rationals => Elem::Rat(BigRational::from_integer(rng.gen_range(-5i64..=5).into())),
        }
    }

    /// Multiplicative order of a unit, searching up to `bound`.
    pub fn multiplicative_order(&self, x: &Elem, bound: u64) -> Option<u64> {
        if self.is_zero(x) {
            return None;
        }
        let one = self.one();
        let mut acc = x.clone();
        for k in 1..=bound {
            if acc == one {
                return Some(k);
            }
            acc = self.mul(&acc, x);
        }
        None
    }

    /// Human-readable element, also used by the serializer for scalars.
    pub fn format(&self, x: &Elem) -> String {
        match x {
            Elem::Rat(r) => format_rational(r),
            Elem::Mod(v) => v.to_string(),
            Elem::Ext(c) => {
                let base = self.base().expect("extension element");
                let parts: Vec<String> = c.iter().map(|v| base.format(v)).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }

    /// Compact display used by the CLI: `a + b*t` style for extensions.
    pub fn display(&self, x: &Elem) -> String {
        match x {
            Elem::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    r.to_string()
                }
            }
            Elem::Mod(v) => v.to_string(),
            Elem::Ext(c) => poly_string(self.base().expect("extension element"), c),
        }
    }
}

/// `c_0 + c_1 t + ..` written highest degree first, e.g. `t^2 - 2`.
fn poly_string(base: &Ring, c: &[Elem]) -> String {
    let mut out = String::new();
    for (i, v) in c.iter().enumerate().rev() {
        if base.is_zero(v) {
            continue;
        }
        let mut s = base.display(v);
        let neg = s.starts_with('-') && !s[1..].contains([' ', '+', '-']);
        if neg {
            s.remove(0);
        }
        if s.contains([' ', '+', '-']) {
            s = format!("({s})");
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        let term = match (s.as_str(), i) {
            (_, 0) => s.clone(),
            ("1", _) => mono,
            _ => format!("{s}*{mono}"),
        };
        if out.is_empty() {
            out = if neg { format!("-{term}") } else { term };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Exact string form of a rational: always `a/b` with `gcd(a, b) = 1`, `b > 0`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Reduces a coefficient vector modulo the monic polynomial with the given
/// non-leading coefficients; the result has exactly `modulus.len()` entries.
pub(crate) fn reduce_by_monic(base: &Ring, mut v: Vec<Elem>, modulus: &[Elem]) -> Vec<Elem> {
    let d = modulus.len();
    while v.len() > d {
        let c = v.pop().expect("nonempty");
        if base.is_zero(&c) {
            continue;
        }
        let top = v.len() - d;
        for (k, m) in modulus.iter().enumerate() {
            let t = base.mul(&c, m);
            v[top + k] = base.sub(&v[top + k], &t);
        }
    }
    v.resize(d, base.zero());
    v
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let mut r = self % &m;
        if r.is_negative() {
            r += &m;
        }
        r.to_u64().expect("residue fits")
    }
}

/// Total order on rationals used when sorting by magnitude.
pub fn cmp_abs(a: &BigRational, b: &BigRational) -> Ordering {
    a.abs().cmp(&b.abs())
}

/// Logarithmic height `log max(|num|, |den|)` of a rational, in nats.
pub fn rational_height(r: &BigRational) -> f64 {
    let n = r.numer().abs();
    let d = r.denom().abs();
    let m = if n > d { n } else { d };
    if m.is_one() || m.is_zero() {
        0.0
    } else {
        let bits = m.bits() as f64;
        // log of a large integer through its leading 53 bits
        let shift = (m.bits() as i64 - 53).max(0) as usize;
        let lead = (&m >> shift).to_f64().unwrap_or(f64::MAX);
        lead.ln() + shift as f64 * std::f64::consts::LN_2 + 0.0 * bits
    }
}
