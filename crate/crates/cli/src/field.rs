//! FIELDSPEC: `base`, `split`, `P`, `P^M` or `sqrt(A)`.

use dualpair::pair::DualPair;
use dualpair::ring::{parse_rational, Ring};
use dualpair::validate::splitting_field_finite;
use dualpair::{Error, Result};

pub fn parse_field(spec: &str, p: &DualPair) -> Result<Ring> {
    let base = p.base();
    let spec = spec.trim();
    let s = match spec {
        "base" => return Ok(base.clone()),
        "split" if base.is_finite() => splitting_field_finite(p)?.0,
        "split" => return Err(Error::Parse("no splitting-field construction over Q; use sqrt(A)".into())),
        "Q" => Ring::rationals(),
        _ => {
            if let Some(a) = spec.strip_prefix("sqrt(").and_then(|x| x.strip_suffix(')')) {
                Ring::quadratic(&parse_rational(a)?)
            } else {
                let (q, m) = spec.split_once('^').unwrap_or((spec, "1"));
                let bad = || Error::Parse(format!("bad field {spec:?}"));
                let q: u64 = q.trim().parse().map_err(|_| bad())?;
                let m: usize = m.trim().parse().map_err(|_| bad())?;
                Ring::galois_field(q, m)?
            }
        }
    };
    if !s.contains(base) {
        return Err(Error::Parse(format!("{s} does not contain the base ring {base}")));
    }
    Ok(s)
}

/// `Q` or a prime.
pub fn parse_base(spec: &str) -> Result<Ring> {
    match spec.trim() {
        "Q" | "q" => Ok(Ring::rationals()),
        p => Ring::prime_field(p.parse().map_err(|_| Error::Parse(format!("bad base {p:?}")))?),
    }
}
