//! `S`-valued points of a dual pair, the group law, and the Cartier pairing.

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::linalg::{characters, is_character, Matrix};
use crate::pair::{DualPair, Side};
use crate::ring::{Elem, Ring};

/// An algebra map `A -> S` (side `A`) or `B -> S` (side `B`), stored as the
/// images of the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    pub pair: DualPair,
    pub side: Side,
    pub target: Ring,
    pub coords: Vec<Elem>,
}

impl PointMap {
    /// Checks the algebra-map invariant.
    pub fn new(pair: &DualPair, side: Side, target: &Ring, coords: Vec<Elem>) -> Result<Self> {
        if !is_character(&pair.side(side).sc, target, &coords)? {
            return Err(Error::NotAlgebraMap("coordinates do not define an algebra map".into()));
        }
        Ok(PointMap { pair: pair.clone(), side, target: target.clone(), coords })
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|x| self.target.display(x)).collect();
        format!("({})", parts.join(", "))
    }
}

/// The pair whose `A` side is `side` of `p`.
fn oriented(p: &DualPair, side: Side) -> DualPair {
    match side {
        Side::A => p.clone(),
        Side::B => p.dual(),
    }
}

/// All points on the given side over the field `s`, in canonical order.
pub fn points(p: &DualPair, s: &Ring, side: Side) -> Result<Vec<PointMap>> {
    let rows = characters(p.side(side), s)?;
    Ok(rows
        .into_iter()
        .map(|coords| PointMap { pair: p.clone(), side, target: s.clone(), coords })
        .collect())
}

/// The neutral element: the counit.
pub fn identity_point(p: &DualPair, s: &Ring, side: Side) -> Result<PointMap> {
    let coords = p
        .counit(side)
        .iter()
        .map(|x| s.embed(x, p.base()))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointMap { pair: p.clone(), side, target: s.clone(), coords })
}

fn same_group(x: &PointMap, y: &PointMap) -> Result<()> {
    if x.target != y.target {
        return Err(Error::MixedTarget);
    }
    if x.pair != y.pair || x.side != y.side {
        return Err(Error::Shape("points of different groups".into()));
    }
    Ok(())
}

/// Group law: move both points to the other algebra through the pairing,
/// multiply there, and move back.
pub fn add_points(x: &PointMap, y: &PointMap) -> Result<PointMap> {
    same_group(x, y)?;
    let s = &x.target;
    let q = oriented(&x.pair, x.side);
    for v in [x, y] {
        if !is_character(&q.a().sc, s, &v.coords)? {
            return Err(Error::NotAlgebraMap(v.display()));
        }
    }
    let phi = q.phi().map_into(s)?;
    let inv = phi.inverse()?;
    let b = q.b().sc.map_into(s)?;
    let r = b.mul(&inv.mul_vec(&x.coords), &inv.mul_vec(&y.coords));
    let coords = phi.mul_vec(&r);
    Ok(PointMap { coords, ..x.clone() })
}

/// Additive order of a point, at most `bound`.
pub fn point_order(x: &PointMap, bound: usize) -> Result<usize> {
    let e = identity_point(&x.pair, &x.target, x.side)?;
    let mut acc = x.clone();
    for k in 1..=bound {
        if acc.coords == e.coords {
            return Ok(k);
        }
        acc = add_points(&acc, x)?;
    }
    Err(Error::OrderSearchExceeded(bound))
}

/// `-x`, as `(m - 1) x` for the order `m` of `x`.
pub fn negate_point(x: &PointMap) -> Result<PointMap> {
    let m = point_order(x, x.pair.rank())?;
    let mut acc = identity_point(&x.pair, &x.target, x.side)?;
    for _ in 1..m {
        acc = add_points(&acc, x)?;
    }
    Ok(acc)
}

/// `<x, y> = x Theta y^t` for an `A`-point `x` and a `B`-point `y`.
pub fn duality_pairing(x: &PointMap, y: &PointMap) -> Result<Elem> {
    if x.target != y.target {
        return Err(Error::MixedTarget);
    }
    if x.side != Side::A || y.side != Side::B || x.pair != y.pair {
        return Err(Error::Shape("pairing needs an A-point and a B-point of the same pair".into()));
    }
    let s = &x.target;
    let theta = x.pair.theta().map_into(s)?;
    let v = theta.mul_vec(&y.coords);
    Ok(x.coords.iter().zip(&v).fold(s.zero(), |acc, (a, b)| s.add(&acc, &s.mul(a, b))))
}

/// `(id (x) y)(theta) = Theta y^t`, an invertible element of `A (x) S`.
pub fn character_of(y: &PointMap) -> Result<Vec<Elem>> {
    if y.side != Side::B {
        return Err(Error::Shape("characters come from B-points".into()));
    }
    Ok(y.pair.theta().map_into(&y.target)?.mul_vec(&y.coords))
}

/// All values `<xs[i], ys[j]>`.
pub fn pairing_table(xs: &[PointMap], ys: &[PointMap], exec: Exec) -> Result<Vec<Vec<Elem>>> {
    let Some(first) = xs.first().or(ys.first()) else {
        return Ok(Vec::new());
    };
    let s = &first.target;
    let theta = first.pair.theta().map_into(s)?;
    let rows = Matrix::from_rows_with_cols(s, xs.iter().map(|x| x.coords.clone()).collect(), first.pair.rank())?;
    let left = rows.mul(&theta)?;
    exec::try_map_range(exec, xs.len(), |i| {
        let li = left.row_slice(i);
        ys.iter()
            .map(|y| {
                if y.target != *s {
                    return Err(Error::MixedTarget);
                }
                Ok(li.iter().zip(&y.coords).fold(s.zero(), |acc, (a, b)| s.add(&acc, &s.mul(a, b))))
            })
            .collect()
    })
}
