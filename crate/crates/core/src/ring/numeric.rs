//! Arbitrary-precision complex numbers and simultaneous root iteration.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

/// Complex number with a recorded working precision in bits.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: usize,
}

pub fn consts() -> Consts {
    Consts::new().expect("constants cache")
}

pub fn float_from_int(v: &BigInt, prec: usize) -> BigFloat {
    let (sign, digits) = v.to_u64_digits();
    if digits.is_empty() {
        return BigFloat::new(prec);
    }
    // mantissa words are little-endian with the value normalized into [1/2, 1)
    let bits = v.bits() as usize;
    let words = digits.len();
    let shift = words * 64 - bits;
    let big: BigUint = v.magnitude() << shift;
    let m: Vec<Word> = big.to_u64_digits().into_iter().map(|w| w as Word).collect();
    let s = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
    let mut f = BigFloat::from_words(&m, s, bits as i32);
    f.set_precision(prec.max(64), RM).expect("precision");
    f
}

pub fn float_from_rational(r: &BigRational, prec: usize) -> BigFloat {
    let n = float_from_int(r.numer(), prec + 64);
    let d = float_from_int(r.denom(), prec + 64);
    n.div(&d, prec, RM)
}

/// Exact value of a finite float.
pub fn float_to_rational(x: &BigFloat) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let (m, _, s, e, _) = x.as_raw_parts()?;
    let digits: Vec<u64> = m.iter().map(|&w| w as u64).collect();
    let mant = BigInt::from(BigUint::from_slice(
        &digits.iter().flat_map(|d| [*d as u32, (*d >> 32) as u32]).collect::<Vec<u32>>(),
    ));
    let total = (m.len() * Word::BITS as usize) as i64;
    let exp = e as i64 - total;
    let mut r = if exp >= 0 {
        BigRational::from_integer(mant << exp as usize)
    } else {
        BigRational::new(mant, BigInt::one() << (-exp) as usize)
    };
    if s == Sign::Neg {
        r = -r;
    }
    Some(r)
}

/// `log2 |x|`, `-inf` at zero; accurate to about 53 bits whatever the exponent.
pub fn log2_abs(x: &BigFloat) -> f64 {
    let Some(r) = float_to_rational(x) else {
        return f64::NAN;
    };
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    log2_int(r.numer()) - log2_int(r.denom())
}

fn log2_int(v: &BigInt) -> f64 {
    let v = v.abs();
    let shift = v.bits().saturating_sub(60);
    (&v >> shift).to_f64().expect("fits").log2() + shift as f64
}

pub fn float_to_f64(x: &BigFloat) -> f64 {
    float_to_rational(x).and_then(|r| r.to_f64()).unwrap_or(f64::NAN)
}

impl BigComplex {
    pub fn zero(prec: usize) -> Self {
        BigComplex { re: BigFloat::new(prec), im: BigFloat::new(prec), prec }
    }

    pub fn from_rational(r: &BigRational, prec: usize) -> Self {
        BigComplex { re: float_from_rational(r, prec), im: BigFloat::new(prec), prec }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        BigComplex { re: BigFloat::from_f64(re, prec), im: BigFloat::from_f64(im, prec), prec }
    }

    pub fn one(prec: usize) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    fn p(&self, other: &Self) -> usize {
        self.prec.min(other.prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.p(o);
        BigComplex { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM), prec: p }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.p(o);
        BigComplex { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM), prec: p }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p(o);
        let q = p + 32;
        let re = self.re.mul(&o.re, q, RM).sub(&self.im.mul(&o.im, q, RM), p, RM);
        let im = self.re.mul(&o.im, q, RM).add(&self.im.mul(&o.re, q, RM), p, RM);
        BigComplex { re, im, prec: p }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let q = self.prec + 32;
        self.re.mul(&self.re, q, RM).add(&self.im.mul(&self.im, q, RM), self.prec, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec, RM)
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.p(o);
        let q = p + 32;
        let den = o.norm_sqr();
        let re = self.re.mul(&o.re, q, RM).add(&self.im.mul(&o.im, q, RM), q, RM);
        let im = self.im.mul(&o.re, q, RM).sub(&self.re.mul(&o.im, q, RM), q, RM);
        BigComplex { re: re.div(&den, p, RM), im: im.div(&den, p, RM), prec: p }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn abs_f64(&self) -> f64 {
        float_to_f64(&self.abs())
    }

    /// `exp(2 pi i k / n)`.
    pub fn unit_root(k: i64, n: u64, prec: usize, cc: &mut Consts) -> Self {
        let q = prec + 64;
        let pi = cc.pi(q, RM);
        let two_pi = pi.mul(&BigFloat::from_i64(2, q), q, RM);
        let ang = two_pi
            .mul(&BigFloat::from_i64(k, q), q, RM)
            .div(&BigFloat::from_u64(n, q), q, RM);
        let mut re = ang.cos(q, RM, cc);
        let mut im = ang.sin(q, RM, cc);
        re.set_precision(prec, RM).expect("precision");
        im.set_precision(prec, RM).expect("precision");
        BigComplex { re, im, prec }
    }

    /// Argument in `(-pi, pi]` as a float.
    pub fn arg(&self, cc: &mut Consts) -> BigFloat {
        let q = self.prec + 32;
        let pi = cc.pi(q, RM);
        if self.re.is_zero() {
            let half = pi.div(&BigFloat::from_i64(2, q), q, RM);
            return if self.im.is_negative() { half.neg() } else { half };
        }
        let t = self.im.div(&self.re, q, RM).atan(q, RM, cc);
        if !self.re.is_negative() {
            t
        } else if self.im.is_negative() {
            t.sub(&pi, q, RM)
        } else {
            t.add(&pi, q, RM)
        }
    }

    /// The same number rounded or padded to `prec` bits.
    pub fn with_prec(&self, prec: usize) -> Self {
        let (mut re, mut im) = (self.re.clone(), self.im.clone());
        re.set_precision(prec, RM).expect("precision");
        im.set_precision(prec, RM).expect("precision");
        BigComplex { re, im, prec }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (float_to_f64(&self.re), float_to_f64(&self.im))
    }
}

/// Horner evaluation of a low-first coefficient list.
pub fn eval(coeffs: &[BigComplex], z: &BigComplex) -> BigComplex {
    let mut acc = BigComplex::zero(z.prec);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

fn eval_with_derivative(coeffs: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex) {
    let mut p = BigComplex::zero(z.prec);
    let mut dp = BigComplex::zero(z.prec);
    for c in coeffs.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

/// Least precision at which the Aberth iteration runs before Newton takes over.
const ABERTH_PREC: usize = 256;

/// All roots of a polynomial with distinct roots: Aberth iteration at a
/// quarter of `prec` (at least [`ABERTH_PREC`] bits), then Newton polishing
/// at `prec`. Returns
/// `None` when the iteration fails to settle or the residuals are not small.
pub fn poly_roots(coeffs: &[BigComplex], prec: usize) -> Option<Vec<BigComplex>> {
    let mut c: Vec<BigComplex> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let n = c.len().checked_sub(1)?;
    if n == 0 {
        return Some(Vec::new());
    }
    // normalize to monic
    let lc = c[n].clone();
    let c: Vec<BigComplex> = c.iter().map(|x| x.div(&lc).with_prec(prec)).collect();
    if n == 1 {
        return Some(vec![c[0].neg()]);
    }
    let low = prec.min(ABERTH_PREC.max(prec / 4));
    let c_low: Vec<BigComplex> = c.iter().map(|x| x.with_prec(low)).collect();
    let mut z: Vec<BigComplex> = aberth(&c_low, low)?.iter().map(|x| x.with_prec(prec)).collect();
    // quadratic convergence from about 20 correct bits
    let rounds = 8 + (usize::BITS - (prec / 20).leading_zeros()) as usize;
    for zk in z.iter_mut() {
        for _ in 0..rounds {
            let (p, dp) = eval_with_derivative(&c, zk);
            if dp.is_zero() || p.is_zero() {
                break;
            }
            let w = p.div(&dp);
            *zk = zk.sub(&w);
            if log2_abs(&w.abs()) - log2_abs(&zk.abs()).max(0.0) < -(prec as f64 - 8.0) {
                break;
            }
        }
    }
    // a-posteriori residual check, relative to the size of the terms
    let tol = -((prec / 2) as f64);
    for zk in &z {
        let r = zk.abs_f64();
        let scale: f64 = c.iter().enumerate().map(|(i, ci)| ci.abs_f64() * r.powi(i as i32)).sum();
        if log2_abs(&eval(&c, zk).abs()) > tol + scale.max(1.0).log2() {
            return None;
        }
    }
    Some(z)
}

/// Simultaneous Aberth iteration on a monic polynomial.
fn aberth(c: &[BigComplex], prec: usize) -> Option<Vec<BigComplex>> {
    let n = c.len() - 1;
    // Fujiwara: every root has modulus at most 2 max |c_(n-k)|^(1/k)
    let bound = (1..=n)
        .map(|k| {
            let a = c[n - k].abs_f64();
            if k == n {
                (a / 2.0).powf(1.0 / k as f64)
            } else {
                a.powf(1.0 / k as f64)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let mut z: Vec<BigComplex> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            let r = bound.clamp(1e-3, 1e12) * 0.9;
            BigComplex::from_f64(r * ang.cos(), r * ang.sin(), prec)
        })
        .collect();
    // only needs to land in Newton's basin
    let eps = -((prec / 4) as f64).clamp(20.0, 64.0);
    let one = BigComplex::one(prec);
    for _ in 0..(400 + 8 * n) {
        let mut max_step = f64::NEG_INFINITY;
        for k in 0..n {
            let (p, dp) = eval_with_derivative(c, &z[k]);
            if p.is_zero() {
                continue;
            }
            let ratio = p.div(&dp);
            let mut s = BigComplex::zero(prec);
            for j in 0..n {
                if j != k {
                    s = s.add(&one.div(&z[k].sub(&z[j])));
                }
            }
            let w = ratio.div(&one.sub(&ratio.mul(&s)));
            let step = log2_abs(&w.abs()) - log2_abs(&z[k].abs()).max(0.0);
            max_step = max_step.max(step);
            z[k] = z[k].sub(&w);
        }
        if max_step < eps {
            return Some(z);
        }
    }
    None
}

/// Best rational approximation of `x` within `2^-bits`, by continued fractions.
pub fn rationalize(x: &BigRational, bits: usize) -> BigRational {
    let eps = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut y = x.clone();
    loop {
        let a = y.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        let approx = BigRational::new(h2.clone(), k2.clone());
        if (&approx - x).abs() <= eps {
            return approx;
        }
        let frac = &y - BigRational::from_integer(a);
        if frac.is_zero() {
            return approx;
        }
        y = frac.recip();
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
}

/// Rationalizes the real part of `z`, provided the imaginary part is tiny.
pub fn rationalize_real(z: &BigComplex) -> Option<BigRational> {
    let tol = 2f64.powi(-((z.prec / 2) as i32).min(1000));
    if float_to_f64(&z.im).abs() > tol {
        return None;
    }
    let re = float_to_rational(&z.re)?;
    Some(rationalize(&re, z.prec / 2))
}
