//! Standard pairs used as fixtures.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Algebra, Matrix, ScAlgebra};
use crate::pair::DualPair;
use crate::poly::{self, MonicPoly};
use crate::ring::{Elem, Ring, RingKind};

/// Rank 1: `A = B = R`, `phi = [1]`.
pub fn trivial(r: &Ring) -> DualPair {
    let x = MonicPoly::new(r, vec![r.zero()]);
    DualPair::monogenic(x.clone(), x, Matrix::identity(r, 1)).expect("rank one")
}

/// `Q x Q x Q[t]/(t^2 - a)` on the basis `(1,0,0), (0,1,0), (0,0,1), (0,0,t)`.
fn e2_algebra(a: &BigRational) -> ScAlgebra {
    let r = Ring::rationals();
    let q = |v: &BigRational| Elem::Rat(v.clone());
    let one = BigRational::one();
    let mut t = vec![vec![vec![r.zero(); 4]; 4]; 4];
    t[0][0][0] = q(&one);
    t[1][1][1] = q(&one);
    t[2][2][2] = q(&one);
    t[2][3][3] = q(&one);
    t[3][2][3] = q(&one);
    t[3][3][2] = q(a);
    let unit = vec![q(&one), q(&one), q(&one), r.zero()];
    ScAlgebra::from_tensor(&r, t, unit).expect("e2 algebra")
}

/// The 2-torsion of `y^2 = x^3 - a x` over `Q`.
pub fn e2_pair(a: &BigRational) -> Result<DualPair> {
    if a.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let r = Ring::rationals();
    let q = |n: i64, d: i64| Elem::Rat(BigRational::new(n.into(), d.into()));
    let phi = Matrix::from_rows(
        &r,
        vec![
            vec![q(1, 4), q(1, 4), q(1, 2), q(0, 1)],
            vec![q(1, 4), q(1, 4), q(-1, 2), q(0, 1)],
            vec![q(1, 2), q(-1, 2), q(0, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(0, 1), Elem::Rat(a.clone())],
        ],
    )?;
    let alg = Algebra::from_sc(e2_algebra(a));
    DualPair::new(alg.clone(), alg, phi)
}

/// 2-torsion of the supersingular curve over `F_2`: `A = B = F_2[t]/(t^4)`.
pub fn supersingular() -> DualPair {
    let f2 = Ring::prime_field(2).expect("prime");
    let t4 = MonicPoly::new(&f2, vec![f2.zero(); 4]);
    let (o, z) = (f2.one(), f2.zero());
    let phi = Matrix::from_rows(
        &f2,
        vec![
            vec![o.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), o.clone(), z.clone()],
            vec![z.clone(), o.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z, o],
        ],
    )
    .expect("square");
    DualPair::monogenic(t4.clone(), t4, phi).expect("perfect")
}

fn check_small_base(n: usize, r: &Ring) -> Result<()> {
    if n == 0 {
        return Err(Error::UnsupportedBase("n must be positive".into()));
    }
    match r.kind() {
        RingKind::Rationals => Ok(()),
        RingKind::PrimeField(p) if n as u64 <= *p && n as u64 % p != 0 => Ok(()),
        RingKind::PrimeField(p) => Err(Error::UnsupportedBase(format!("mu_{n} needs n <= p and p not dividing n, p = {p}"))),
        _ => Err(Error::UnsupportedBase(format!("mu pairs over {r}"))),
    }
}

/// `A = R[x]/(x^n - 1)` (so `mu_n`), `B = R[y]/(prod (y - i))` (so `Z/n`),
/// with `theta = sum x^i (x) e_i` for the Lagrange idempotents `e_i`.
pub fn mu_constant_pair(n: usize, r: &Ring) -> Result<DualPair> {
    check_small_base(n, r)?;
    let mut xn = vec![r.zero(); n];
    xn[0] = r.neg(&r.one());
    let f = MonicPoly::new(r, xn);
    let nodes: Vec<Elem> = (0..n as i64).map(|i| r.from_i64(i)).collect();
    let g = MonicPoly::from_full(r, &poly::from_roots(r, &nodes))?;
    let mut rows = Vec::with_capacity(n);
    for (i, xi) in nodes.iter().enumerate() {
        let others: Vec<Elem> = nodes.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
        let num = poly::from_roots(r, &others);
        let den = others.iter().fold(r.one(), |acc, v| r.mul(&acc, &r.sub(xi, v)));
        let mut li = poly::scale(r, &num, &r.inv(&den)?);
        li.resize(n, r.zero());
        rows.push(li);
    }
    let theta = Matrix::from_rows(r, rows)?;
    DualPair::from_theta(Algebra::monogenic(f), Algebra::monogenic(g), theta)
}

/// Constant `Z/n`, the Cartier dual of [`mu_constant_pair`].
pub fn constant_pair(n: usize, r: &Ring) -> Result<DualPair> {
    Ok(mu_constant_pair(n, r)?.dual())
}

/// `mu_n` with `B = R^n` on its idempotent basis and `phi = 1`; the data are
/// integral with unit determinant, so it reduces well at every prime.
pub fn mu_pair_idempotent(n: usize, r: &Ring) -> Result<DualPair> {
    if n == 0 {
        return Err(Error::UnsupportedBase("n must be positive".into()));
    }
    let mut xn = vec![r.zero(); n];
    xn[0] = r.neg(&r.one());
    let a = Algebra::monogenic(MonicPoly::new(r, xn));
    DualPair::new(a, Algebra::from_sc(ScAlgebra::split(r, n)), Matrix::identity(r, n))
}
