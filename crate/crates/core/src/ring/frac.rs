//! Elements of (1/n)Z/Z, kept in lowest terms.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FracCyclic {
    num: u64,
    den: u64,
}

impl FracCyclic {
    /// `num / den` reduced into `[0, 1)` and to lowest terms.
    pub fn new(num: i64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let r = num.rem_euclid(den as i64) as u64;
        let g = r.gcd(&den);
        FracCyclic { num: r / g, den: den / g }
    }

    pub fn zero() -> Self {
        FracCyclic { num: 0, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Numerator over the denominator `n`; `None` if `den` does not divide `n`.
    pub fn scaled_to(&self, n: u64) -> Option<u64> {
        (n % self.den == 0).then(|| self.num * (n / self.den))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let m = (k.rem_euclid(self.den as i64) as u128 * self.num as u128) % self.den as u128;
        FracCyclic::new(m as i64, self.den)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not an element of Q/Z: {s:?}"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<u64>().map_err(|_| bad())?),
            None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
        };
        if d == 0 {
            return Err(bad());
        }
        Ok(FracCyclic::new(n, d))
    }
}

impl Add for FracCyclic {
    type Output = FracCyclic;
    fn add(self, o: FracCyclic) -> FracCyclic {
        let l = self.den.lcm(&o.den);
        let a = self.num * (l / self.den) + o.num * (l / o.den);
        FracCyclic::new((a % l) as i64, l)
    }
}

impl Neg for FracCyclic {
    type Output = FracCyclic;
    fn neg(self) -> FracCyclic {
        FracCyclic::new(-(self.num as i64), self.den)
    }
}

impl Sub for FracCyclic {
    type Output = FracCyclic;
    fn sub(self, o: FracCyclic) -> FracCyclic {
        self + (-o)
    }
}

impl fmt::Display for FracCyclic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normal_form() {
        assert_eq!(FracCyclic::new(2, 6), FracCyclic::new(1, 3));
        assert_eq!(FracCyclic::new(-1, 4), FracCyclic::new(3, 4));
        assert_eq!(FracCyclic::new(4, 4), FracCyclic::zero());
        assert_eq!(FracCyclic::new(1, 2) + FracCyclic::new(1, 2), FracCyclic::zero());
        assert_eq!(FracCyclic::new(1, 4) + FracCyclic::new(1, 6), FracCyclic::new(5, 12));
        assert_eq!(FracCyclic::parse("3/6").unwrap().to_string(), "1/2");
    }

    proptest! {
        #[test]
        fn group_laws(a in -50i64..50, b in -50i64..50, c in -50i64..50, n in 1u64..30, m in 1u64..30) {
            let x = FracCyclic::new(a, n);
            let y = FracCyclic::new(b, m);
            let z = FracCyclic::new(c, n * m);
            prop_assert_eq!(x + y, y + x);
            prop_assert_eq!((x + y) + z, x + (y + z));
            prop_assert_eq!(x - x, FracCyclic::zero());
            prop_assert!(x.num() < x.den());
        }
    }
}
