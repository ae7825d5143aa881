//! Validation of pairs and computation of group structures, exactly over a
//! splitting field or numerically over `Q`.

use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::identify::{identify_group, ElemDivSeq, GroupId, HdElement, PairingTable};
use crate::linalg::{complex_characters, split_degree, Matrix};
use crate::pair::{sub_pair, DualPair, Side, Validation};
use crate::points::{pairing_table, points, PointMap};
use crate::ring::numeric::{self, BigComplex};
use crate::ring::roots::{dlog_mu, generator_of_values, max_bits, root_of_unity};
use crate::ring::{prime, Elem, FracCyclic, Ring, RingKind};

/// Outcome of a validation run.
#[derive(Clone, Debug)]
pub enum Verdict<T> {
    Valid(T),
    Invalid(String),
}

impl<T> Verdict<T> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }

    pub fn valid(self) -> Option<T> {
        match self {
            Verdict::Valid(t) => Some(t),
            Verdict::Invalid(_) => None,
        }
    }
}

/// Group structure of the points over a field, with both enumerations.
#[derive(Clone, Debug)]
pub struct StructureResult {
    pub d: ElemDivSeq,
    pub ring: Ring,
    pub zeta: Elem,
    pub zeta_order: u64,
    pub points: Vec<PointMap>,
    pub dual_points: Vec<PointMap>,
    pub point_bijection: Vec<HdElement>,
    pub dual_bijection: Vec<HdElement>,
    pub table: PairingTable,
    /// `U[i][j] = lambda(<P_i, Q_j>)` for the generators `P_i`, `Q_j`.
    pub u: Vec<Vec<FracCyclic>>,
}

impl StructureResult {
    /// Index of the point with coordinates `x` in `H_d`.
    pub fn point_index(&self, x: &HdElement) -> Option<usize> {
        self.point_bijection.iter().position(|y| y == x)
    }

    pub fn dual_index(&self, x: &HdElement) -> Option<usize> {
        self.dual_bijection.iter().position(|y| y == x)
    }

    /// The unit vector `e_i` of `H_d`.
    pub fn generator(&self, i: usize) -> HdElement {
        let mut c = vec![0; self.d.len()];
        c[i] = 1;
        HdElement(c)
    }
}

fn unit_vector(r: usize, i: usize) -> HdElement {
    let mut c = vec![0; r];
    c[i] = 1;
    HdElement(c)
}

fn generator_matrix(id: &GroupId, t: &PairingTable) -> Vec<Vec<FracCyclic>> {
    let r = id.d.len();
    let pi: Vec<usize> = (0..r).map(|i| id.p.iter().position(|x| *x == unit_vector(r, i)).expect("bijection")).collect();
    let qj: Vec<usize> = (0..r).map(|j| id.q.iter().position(|x| *x == unit_vector(r, j)).expect("bijection")).collect();
    pi.iter().map(|&i| qj.iter().map(|&j| t.get(i, j)).collect()).collect()
}

/// `lambda` applied to a table of roots of unity; `None` if some value lies
/// outside `<zeta>`.
fn log_table(s: &Ring, values: &[Vec<Elem>], zeta: &Elem, order: u64) -> Option<Vec<Vec<FracCyclic>>> {
    values
        .iter()
        .map(|row| row.iter().map(|v| dlog_mu(s, zeta, v, order).ok()).collect())
        .collect()
}

/// Tries to read `t` as the table of a group; `Err(reason)` otherwise.
fn identify(t: Vec<Vec<FracCyclic>>) -> std::result::Result<(GroupId, PairingTable), String> {
    let table = PairingTable::new(t).map_err(|e| e.to_string())?;
    let id = identify_group(&table).ok_or("pairing table does not describe an abelian group")?;
    Ok((id, table))
}

/// `L = F_{p^m}` splitting both algebras and containing `mu_n`, with a
/// primitive `n`-th root of unity.
pub fn splitting_field_finite(p: &DualPair) -> Result<(Ring, Elem)> {
    let RingKind::PrimeField(q) = p.base().kind() else {
        return Err(Error::UnsupportedBase(format!("splitting fields over {}", p.base())));
    };
    let n = p.rank() as u64;
    if n % q == 0 {
        return Err(Error::CharDividesOrder { p: *q, n: p.rank() });
    }
    let ord = prime::multiplicative_order(*q, n).expect("coprime");
    let m = split_degree(&p.a().sc)?.lcm(&split_degree(&p.b().sc)?).lcm(&(ord as usize));
    let l = Ring::galois_field(*q, m)?;
    let zeta = root_of_unity(&l, n)?;
    Ok((l, zeta))
}

/// Validation over a field `l` splitting both algebras, with `zeta` of order `n`.
pub fn validate_via_splitting(p: &DualPair, l: &Ring, zeta: &Elem) -> Result<Verdict<StructureResult>> {
    validate_via_splitting_with(p, l, zeta, Exec::default())
}

pub fn validate_via_splitting_with(p: &DualPair, l: &Ring, zeta: &Elem, exec: Exec) -> Result<Verdict<StructureResult>> {
    let n = p.rank();
    let order = l.multiplicative_order(zeta, n as u64).unwrap_or(0);
    if order != n as u64 {
        return Err(Error::NoSuchRoot { n: n as u64, size: l.to_string() });
    }
    let alpha = points(p, l, Side::A)?;
    let beta = points(p, l, Side::B)?;
    for found in [alpha.len(), beta.len()] {
        if found != n {
            return Err(Error::SplitCountMismatch { expected: n, found });
        }
    }
    let values = pairing_table(&alpha, &beta, exec)?;
    let Some(t) = log_table(l, &values, zeta, order) else {
        return Ok(Verdict::Invalid("a pairing value is not an n-th root of unity".into()));
    };
    let (id, table) = match identify(t) {
        Ok(x) => x,
        Err(reason) => return Ok(Verdict::Invalid(reason)),
    };
    let report = p.verify_axioms();
    if !report.passed() {
        return Ok(Verdict::Invalid(format!("axioms fail: {}", report.failures.join("; "))));
    }
    let u = generator_matrix(&id, &table);
    Ok(Verdict::Valid(StructureResult {
        d: id.d,
        ring: l.clone(),
        zeta: zeta.clone(),
        zeta_order: order,
        points: alpha,
        dual_points: beta,
        point_bijection: id.p,
        dual_bijection: id.q,
        table,
        u,
    }))
}

/// Structure of `G(K)` for the base field `K`. Without `zeta`, a root of
/// unity of order the exponent is read off from the pairing values.
pub fn group_structure(p: &DualPair, zeta: Option<&Elem>) -> Result<StructureResult> {
    group_structure_with(p, zeta, Exec::default())
}

pub fn group_structure_with(p: &DualPair, zeta: Option<&Elem>, exec: Exec) -> Result<StructureResult> {
    let k = p.base();
    let n = p.rank();
    let alpha = points(p, k, Side::A)?;
    let m = alpha.len();
    // A' is A modulo the common kernel of the K-points
    let x = Matrix::from_rows_with_cols(k, alpha.iter().map(|a| a.coords.clone()).collect(), n)?;
    let ideal = x.nullspace()?;
    let sub = sub_pair(p, &ideal.to_rows())?;
    let a2 = points(&sub.pair, k, Side::A)?;
    let beta = points(&sub.pair, k, Side::B)?;
    if a2.len() != m {
        return Err(Error::SplitCountMismatch { expected: m, found: a2.len() });
    }
    if beta.len() != m {
        // the dual side only splits once K has roots of unity of order the exponent
        return Err(Error::ZetaOrderTooSmall);
    }
    let values = pairing_table(&a2, &beta, exec)?;
    let (zeta, order) = match zeta {
        Some(z) => (z.clone(), k.multiplicative_order(z, n as u64).ok_or(Error::ZetaOrderTooSmall)?),
        None => {
            let flat: Vec<Elem> = values.iter().flatten().cloned().collect();
            generator_of_values(k, &flat, m.max(1) as u64).ok_or(Error::ZetaOrderTooSmall)?
        }
    };
    let t = log_table(k, &values, &zeta, order).ok_or(Error::ZetaOrderTooSmall)?;
    let (id, table) = identify(t).map_err(Error::AxiomsFailed)?;
    // alpha o p^-1: the points of A' pulled back to A
    let proj = &sub.projection;
    let pulled: Vec<PointMap> = a2
        .iter()
        .map(|pt| PointMap { pair: p.clone(), side: Side::A, target: k.clone(), coords: proj.vec_mul(&pt.coords) })
        .collect();
    let u = generator_matrix(&id, &table);
    Ok(StructureResult {
        d: id.d,
        ring: k.clone(),
        zeta,
        zeta_order: order,
        points: pulled,
        dual_points: beta,
        point_bijection: id.p,
        dual_bijection: id.q,
        table,
        u,
    })
}

/// Result of the numeric validator: `exp(2 pi i T[i][j]) = <P_i, Q_j>` for
/// the complex points `P_i`, `Q_j`.
#[derive(Clone, Debug)]
pub struct NumericStructure {
    pub d: ElemDivSeq,
    pub point_bijection: Vec<HdElement>,
    pub dual_bijection: Vec<HdElement>,
    pub table: PairingTable,
    /// Double-precision images of the basis under each complex point.
    pub points: Vec<Vec<(f64, f64)>>,
    pub dual_points: Vec<Vec<(f64, f64)>>,
    pub precision: usize,
    /// Largest distance of a pairing value from its rounded root of unity.
    pub max_error: f64,
}

/// Rounding tolerance for `n`-th roots of unity. Underflows to 0 once
/// `phi(n)^2 > 1074`; the validator itself compares [`root_tolerance_log2`].
pub fn root_tolerance(n: u64) -> f64 {
    root_tolerance_log2(n).exp2()
}

/// `log2 min(2^-phi(n)^2, sin(pi / n))`, and `-1` for `n = 1`.
pub fn root_tolerance_log2(n: u64) -> f64 {
    if n == 1 {
        return -1.0;
    }
    let phi = prime::euler_phi(n) as f64;
    (-(phi * phi)).min((std::f64::consts::PI / n as f64).sin().log2())
}

pub const MAX_DOUBLINGS: usize = 8;

/// Validation over `Q` through complex approximations of the points.
pub fn validate_numeric_q(p: &DualPair, start_prec: Option<usize>) -> Result<Verdict<NumericStructure>> {
    validate_numeric_q_with(p, start_prec, Exec::default())
}

pub fn validate_numeric_q_with(p: &DualPair, start_prec: Option<usize>, exec: Exec) -> Result<Verdict<NumericStructure>> {
    if !p.base().is_rationals() {
        return Err(Error::UnsupportedBase("numeric validation needs base Q".into()));
    }
    if !p.a().sc.is_etale()? || !p.b().sc.is_etale()? {
        return Err(Error::NotEtale);
    }
    if !p.theta_is_root_of_unity() {
        return Ok(Verdict::Invalid("theta is not an n-th root of unity in A (x) B".into()));
    }
    let n = p.rank() as u64;
    let bits = max_bits(p.phi().to_rows().iter().flatten().filter_map(|x| x.as_rat()));
    let tol = root_tolerance_log2(n);
    // below -tol bits every rounding is inconclusive
    let needed = (-tol).ceil() as usize + 32;
    let mut prec = start_prec.unwrap_or_else(|| 128.max(4 * bits).max(needed));
    for _ in 0..=MAX_DOUBLINGS {
        match numeric_attempt(p, prec, tol, exec)? {
            Some(v) => {
                if v.is_valid() {
                    p.mark(Validation::NumericallyVerified);
                }
                return Ok(v);
            }
            None => prec *= 2,
        }
    }
    Err(Error::PrecisionExhausted(prec / 2))
}

/// `None` when some pairing value cannot be rounded with confidence.
fn numeric_attempt(p: &DualPair, prec: usize, tol_log2: f64, exec: Exec) -> Result<Option<Verdict<NumericStructure>>> {
    let n = p.rank();
    let (pa, prec_a) = complex_characters(p.a(), prec)?;
    let (pb, prec_b) = complex_characters(p.b(), prec_a)?;
    if pa.len() != n || pb.len() != n {
        return Ok(None);
    }
    let work = prec_a.min(prec_b);
    let theta: Vec<Vec<BigComplex>> = p
        .theta()
        .to_rows()
        .iter()
        .map(|row| row.iter().map(|x| BigComplex::from_rational(x.as_rat().expect("rational"), work)).collect())
        .collect();
    // rows of P Theta, then Z = (P Theta) Q^t
    let left: Vec<Vec<BigComplex>> = exec::map_range(exec, n, |i| {
        (0..n)
            .map(|j| (0..n).fold(BigComplex::zero(work), |acc, k| acc.add(&pa[i][k].mul(&theta[k][j]))))
            .collect()
    });
    let rounded: Vec<Vec<Option<(FracCyclic, f64)>>> = exec::map_range(exec, n, |i| {
        let mut cc = numeric::consts();
        (0..n)
            .map(|j| {
                let z = (0..n).fold(BigComplex::zero(work), |acc, k| acc.add(&left[i][k].mul(&pb[j][k])));
                round_to_root(&z, n as u64, tol_log2, &mut cc)
            })
            .collect()
    });
    let mut max_error = 0f64;
    let mut t = Vec::with_capacity(n);
    for row in rounded {
        let mut out = Vec::with_capacity(n);
        for cell in row {
            let Some((k, err)) = cell else {
                return Ok(None);
            };
            max_error = max_error.max(err);
            out.push(k);
        }
        t.push(out);
    }
    let (id, table) = match identify(t) {
        Ok(x) => x,
        Err(reason) => return Ok(Some(Verdict::Invalid(reason))),
    };
    let approx = |rows: &[Vec<BigComplex>]| -> Vec<Vec<(f64, f64)>> {
        rows.iter().map(|r| r.iter().map(|z| z.to_f64_pair()).collect()).collect()
    };
    Ok(Some(Verdict::Valid(NumericStructure {
        d: id.d,
        point_bijection: id.p,
        dual_bijection: id.q,
        table,
        points: approx(&pa),
        dual_points: approx(&pb),
        precision: work,
        max_error,
    })))
}

/// Nearest `exp(2 pi i k / n)` to `z`, with the distance, if
/// `log2 |z - root| < tol_log2`.
fn round_to_root(z: &BigComplex, n: u64, tol_log2: f64, cc: &mut astro_float::Consts) -> Option<(FracCyclic, f64)> {
    let ang = numeric::float_to_f64(&z.arg(cc));
    let k = (ang * n as f64 / std::f64::consts::TAU).round() as i64;
    let k = k.rem_euclid(n as i64);
    let root = BigComplex::unit_root(k, n, z.prec, cc);
    let err = z.sub(&root).abs();
    (numeric::log2_abs(&err) < tol_log2).then(|| (FracCyclic::new(k, n), numeric::float_to_f64(&err)))
}

/// A rational perturbation `phi[i][j] + delta`.
pub fn perturb(p: &DualPair, i: usize, j: usize, delta: &BigRational) -> Result<DualPair> {
    let r = p.base();
    let mut phi = p.phi().clone();
    let v = r.add(phi.get(i, j), &r.from_rational(delta)?);
    phi.set(i, j, v);
    DualPair::new(p.a().clone(), p.b().clone(), phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn reduce(p: &DualPair, q: u64) -> DualPair {
        let f = Ring::prime_field(q).unwrap();
        p.map_coefficients(&f, |x| f.from_rational(x.as_rat().unwrap())).unwrap()
    }

    #[test]
    fn splitting_fields() {
        let f5 = Ring::prime_field(5).unwrap();
        let (l, _) = splitting_field_finite(&gallery::mu_constant_pair(3, &f5).unwrap()).unwrap();
        assert_eq!(l.size_u64(), Some(25));
        let e2 = reduce(&gallery::e2_pair(&rat(1)).unwrap(), 7);
        let (l, z) = splitting_field_finite(&e2).unwrap();
        assert_eq!(l.size_u64(), Some(49));
        assert_eq!(l.multiplicative_order(&z, 4), Some(4));
        assert_eq!(
            splitting_field_finite(&gallery::supersingular()).unwrap_err(),
            Error::CharDividesOrder { p: 2, n: 4 }
        );
    }

    #[test]
    fn validation_over_finite_fields() {
        let e2 = reduce(&gallery::e2_pair(&rat(1)).unwrap(), 7);
        let (l, z) = splitting_field_finite(&e2).unwrap();
        let v = validate_via_splitting(&e2, &l, &z).unwrap().valid().unwrap();
        assert_eq!(v.d.as_slice(), &[2, 2]);
        assert_eq!(e2.validation(), Validation::AxiomsVerified);
        let f11 = Ring::prime_field(11).unwrap();
        let mu5 = gallery::mu_constant_pair(5, &f11).unwrap();
        let (l, z) = splitting_field_finite(&mu5).unwrap();
        assert_eq!(validate_via_splitting(&mu5, &l, &z).unwrap().valid().unwrap().d.as_slice(), &[5]);
        let bad = perturb(&e2, 0, 0, &rat(1)).unwrap();
        assert!(!validate_via_splitting(&bad, &l_of(&bad), &z_of(&bad)).unwrap().is_valid());
    }

    fn l_of(p: &DualPair) -> Ring {
        splitting_field_finite(p).unwrap().0
    }

    fn z_of(p: &DualPair) -> Elem {
        splitting_field_finite(p).unwrap().1
    }

    #[test]
    fn structure_over_q() {
        let s = group_structure(&gallery::e2_pair(&rat(1)).unwrap(), None).unwrap();
        assert_eq!(s.d.as_slice(), &[2, 2]);
        assert_eq!(s.u, vec![vec![FracCyclic::new(1, 2), FracCyclic::zero()], vec![FracCyclic::zero(), FracCyclic::new(1, 2)]]);
        let s = group_structure(&gallery::e2_pair(&rat(2)).unwrap(), None).unwrap();
        assert_eq!(s.d.as_slice(), &[2]);
        assert_eq!(s.points.len(), 2);
        let q = Ring::rationals();
        assert!(group_structure(&gallery::trivial(&q), None).unwrap().d.is_empty());
        let mu3 = gallery::mu_constant_pair(3, &q).unwrap();
        assert!(group_structure(&mu3, None).unwrap().d.is_empty());
        assert_eq!(group_structure(&mu3.dual(), None).unwrap_err(), Error::ZetaOrderTooSmall);
        let f7 = Ring::prime_field(7).unwrap();
        let mu3 = gallery::mu_constant_pair(3, &f7).unwrap();
        assert_eq!(group_structure(&mu3, None).unwrap().d.as_slice(), &[3]);
        assert_eq!(group_structure(&mu3.dual(), None).unwrap().d.as_slice(), &[3]);
    }

    #[test]
    fn numeric_validation() {
        let v = validate_numeric_q(&gallery::e2_pair(&rat(2)).unwrap(), None).unwrap().valid().unwrap();
        assert_eq!(v.d.as_slice(), &[2, 2]);
        assert!(v.max_error < root_tolerance(4));
        let bad = perturb(&gallery::e2_pair(&rat(1)).unwrap(), 2, 2, &rat(1)).unwrap();
        assert!(!validate_numeric_q(&bad, None).unwrap().is_valid());
        let mu5 = gallery::mu_pair_idempotent(5, &Ring::rationals()).unwrap();
        assert_eq!(validate_numeric_q(&mu5, None).unwrap().valid().unwrap().d.as_slice(), &[5]);
        assert!(matches!(validate_numeric_q(&gallery::supersingular(), None), Err(Error::UnsupportedBase(_))));
    }

    #[test]
    fn tolerance_formula() {
        assert_eq!(root_tolerance(2), 0.5);
        assert_eq!(root_tolerance(4), 1.0 / 16.0);
        assert_eq!(root_tolerance(5), 2f64.powi(-16));
    }
}
