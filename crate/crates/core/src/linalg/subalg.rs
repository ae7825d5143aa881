//! Quotients, subalgebras, orthogonal complements and primitive elements.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, ScAlgebra};
use crate::poly::MonicPoly;
use crate::ring::Elem;

/// Cap on the number of candidates tried by [`primitive_element`].
pub const PRIMITIVE_SEARCH_CAP: usize = 20_000;

/// Result of [`ideal_quotient`].
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: ScAlgebra,
    /// `m x n`: coordinates in the quotient of each basis vector of `A`.
    pub projection: Matrix,
    /// Row basis of the ideal, in reduced echelon form.
    pub ideal: Matrix,
    /// Indices of the standard basis vectors of `A` lifting the quotient basis.
    pub reps: Vec<usize>,
}

/// Smallest ideal containing `gens` and the quotient by it. The quotient basis
/// is the image of the standard vectors at the non-pivot columns of the
/// ideal's echelon form.
pub fn ideal_quotient(a: &ScAlgebra, gens: &[Vec<Elem>]) -> Result<Quotient> {
    let r = a.ring();
    let n = a.dim();
    let mut ideal = Matrix::from_rows_with_cols(r, gens.to_vec(), n)?.row_basis()?;
    loop {
        let mut rows = ideal.to_rows();
        for v in ideal.to_rows() {
            for k in 0..n {
                rows.push(a.mul(&v, &a.basis_vector(k)));
            }
        }
        let next = Matrix::from_rows_with_cols(r, rows, n)?.row_basis()?;
        if next.rows() == ideal.rows() {
            break;
        }
        ideal = next;
    }
    let (_, pivots) = ideal.rref()?;
    let reps: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let m = reps.len();
    // reduce e_j modulo the ideal: pivot columns are eliminated by their rows
    let projection = Matrix::from_fn(r, m, n, |s, j| {
        if let Some(i) = pivots.iter().position(|&p| p == j) {
            r.neg(ideal.get(i, reps[s]))
        } else if reps[s] == j {
            r.one()
        } else {
            r.zero()
        }
    });
    let mut c = Vec::with_capacity(m * m * m);
    for s in 0..m {
        for t in 0..m {
            c.extend(projection.mul_vec(a.basis_product(reps[s], reps[t])));
        }
    }
    let unit = projection.mul_vec(a.unit());
    let algebra = ScAlgebra::new(r, m, c, unit)?;
    Ok(Quotient { algebra, projection, ideal, reps })
}

/// The unital subalgebra spanned by the rows of `w` (assumed independent),
/// with its inclusion matrix (`n x k`, columns = the rows of `w`).
pub fn subalgebra(a: &ScAlgebra, w: &Matrix) -> Result<(ScAlgebra, Matrix)> {
    let r = a.ring();
    let k = w.rows();
    let incl = w.transpose();
    let mut c = Vec::with_capacity(k * k * k);
    for s in 0..k {
        for t in 0..k {
            let prod = a.mul(w.row_slice(s), w.row_slice(t));
            let x = incl.solve_vec(&prod)?.ok_or_else(|| {
                Error::NotSubalgebra(format!("product of basis vectors {} and {} leaves the subspace", s + 1, t + 1))
            })?;
            c.extend(x);
        }
    }
    let unit = incl
        .solve_vec(a.unit())?
        .filter(|_| k > 0 || a.dim() == 0)
        .ok_or_else(|| Error::NotSubalgebra("subspace does not contain the unit".into()))?;
    Ok((ScAlgebra::new(r, k, c, unit)?, incl))
}

/// `ker(g - g0)` as a subalgebra of the source of `g`.
pub fn equalizer_subalgebra(b: &ScAlgebra, g: &Matrix, g0: &Matrix) -> Result<(ScAlgebra, Matrix)> {
    let diff = g.sub(g0)?;
    let ker = diff.nullspace()?.row_basis()?;
    subalgebra(b, &ker)
}

/// Row basis of `{b : phi(w, b) = 0 for all rows w of W}`.
pub fn orthogonal_complement(phi: &Matrix, w: &Matrix) -> Result<Matrix> {
    if phi.ring().is_zero(&phi.det()?) {
        return Err(Error::NotInvertible("pairing matrix is singular".into()));
    }
    w.mul(phi)?.nullspace()
}

/// A generator `g` of `A` as an algebra, its minimal polynomial, and the
/// matrix whose columns are `1, g, .., g^(n-1)`.
#[derive(Clone, Debug)]
pub struct PrimitiveElement {
    pub generator: Vec<Elem>,
    pub minpoly: MonicPoly,
    pub powers: Matrix,
}

pub fn primitive_element(a: &ScAlgebra) -> Result<PrimitiveElement> {
    let r = a.ring();
    let n = a.dim();
    if n == 0 {
        return Err(Error::NoPrimitiveElement);
    }
    let try_candidate = |g: &[Elem]| -> Result<Option<PrimitiveElement>> {
        let f = a.minpoly(g)?;
        if f.len() != n + 1 {
            return Ok(None);
        }
        let mut powers = vec![a.unit().to_vec()];
        for _ in 1..n {
            powers.push(a.mul(powers.last().unwrap(), g));
        }
        let minpoly = MonicPoly::from_full(r, &f)?;
        Ok(Some(PrimitiveElement { generator: g.to_vec(), minpoly, powers: Matrix::from_cols(r, powers)? }))
    };
    let mut seen = HashSet::new();
    for i in 0..n {
        let g = a.basis_vector(i);
        seen.insert(g.clone());
        if let Some(p) = try_candidate(&g)? {
            return Ok(p);
        }
    }
    // (0, 1, .., n-1) and (1, c, c^2, ..): distinct coordinates, which is
    // what split algebras need
    let ramps = std::iter::once((0..n as i64).collect::<Vec<_>>())
        .chain((2..=n as i64 + 1).map(|c| (0..n as u32).map(|i| c.saturating_pow(i)).collect()));
    for coeffs in ramps {
        let g: Vec<Elem> = coeffs.iter().map(|&c| r.from_i64(c)).collect();
        if seen.insert(g.clone()) {
            if let Some(p) = try_candidate(&g)? {
                return Ok(p);
            }
        }
    }
    // small integer combinations, coefficient vectors in {0..n}^n in order
    let base = n as u64 + 1;
    let total = base.saturating_pow(n as u32);
    let mut tried = 0usize;
    for idx in 1..total {
        let mut k = idx;
        let g: Vec<Elem> = (0..n)
            .map(|_| {
                let d = k % base;
                k /= base;
                r.from_i64(d as i64)
            })
            .collect();
        if !seen.insert(g.clone()) {
            continue;
        }
        tried += 1;
        if tried > PRIMITIVE_SEARCH_CAP {
            break;
        }
        if let Some(p) = try_candidate(&g)? {
            return Ok(p);
        }
    }
    Err(Error::NoPrimitiveElement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly;
    use crate::ring::Ring;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(n: i64) -> Elem {
        Elem::Rat(BigRational::from_integer(n.into()))
    }

    fn qq() -> Ring {
        Ring::rationals()
    }

    #[test]
    fn quotient_examples() {
        let a = ScAlgebra::from_monic(&MonicPoly::new(&qq(), vec![q(-1), q(0)]));
        let z = ideal_quotient(&a, &[vec![q(0), q(0)]]).unwrap();
        assert_eq!(z.algebra, a);
        assert!(z.projection.is_identity());
        let ev = ideal_quotient(&a, &[vec![q(-1), q(1)]]).unwrap();
        assert_eq!(ev.algebra.dim(), 1);
        // x maps to 1
        assert_eq!(ev.projection.mul_vec(&[q(0), q(1)]), vec![q(1)]);
        let unit = ideal_quotient(&a, &[vec![q(1), q(0)]]).unwrap();
        assert_eq!(unit.algebra.dim(), 0);
    }

    #[test]
    fn equalizer_examples() {
        let r = qq();
        let b = ScAlgebra::split(&r, 2);
        let id = Matrix::identity(&r, 2);
        let (all, _) = equalizer_subalgebra(&b, &id, &id).unwrap();
        assert_eq!(all.dim(), 2);
        let swap = Matrix::from_rows(&r, vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        let (diag, incl) = equalizer_subalgebra(&b, &swap, &id).unwrap();
        assert_eq!(diag.dim(), 1);
        assert_eq!(incl.col(0), vec![q(1), q(1)]);
        let minus = id.scale(&q(-1));
        assert!(matches!(equalizer_subalgebra(&b, &id, &minus), Err(Error::NotSubalgebra(_))));
    }

    #[test]
    fn complement_examples() {
        let r = qq();
        let phi = Matrix::from_rows(&r, vec![vec![q(1), q(0)], vec![q(1), q(1)]]).unwrap();
        let w = Matrix::from_rows(&r, vec![vec![q(0), q(1)]]).unwrap();
        let c = orthogonal_complement(&phi, &w).unwrap();
        assert_eq!(c.rows(), 1);
        assert_eq!(c.row(0), vec![q(-1), q(1)]);
        assert_eq!(orthogonal_complement(&phi, &Matrix::zeros(&r, 0, 2)).unwrap().rows(), 2);
        assert_eq!(orthogonal_complement(&phi, &Matrix::identity(&r, 2)).unwrap().rows(), 0);
        // applying twice recovers the subspace
        let back = orthogonal_complement(&phi.transpose(), &c).unwrap();
        assert_eq!(back.row_basis().unwrap(), w.row_basis().unwrap());
    }

    #[test]
    fn primitive_element_examples() {
        let r = qq();
        let a = ScAlgebra::from_monic(&MonicPoly::new(&r, vec![q(0), q(-1)]));
        let p = primitive_element(&a).unwrap();
        assert_eq!(p.generator, vec![q(0), q(1)]);
        assert_eq!(p.minpoly.full(), vec![q(0), q(-1), q(1)]);
        let f2 = Ring::prime_field(2).unwrap();
        assert_eq!(primitive_element(&ScAlgebra::split(&f2, 3)).unwrap_err(), Error::NoPrimitiveElement);
        let one = primitive_element(&ScAlgebra::split(&r, 1)).unwrap();
        assert_eq!(one.minpoly.full(), vec![q(-1), q(1)]);
        // Q^3 on idempotents needs a combination
        let p = primitive_element(&ScAlgebra::split(&r, 3)).unwrap();
        assert!(r.is_zero(&poly::eval(&r, &p.minpoly.full(), &q(0))) || p.minpoly.degree() == 3);
        assert!(!r.is_zero(&p.powers.det().unwrap()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn projection_is_multiplicative(coeffs in prop::collection::vec(-3i64..4, 4), g in prop::collection::vec(-2i64..3, 4)) {
            let r = qq();
            let f = MonicPoly::new(&r, coeffs.iter().map(|&c| q(c)).collect());
            let a = ScAlgebra::from_monic(&f);
            let quo = ideal_quotient(&a, &[g.iter().map(|&c| q(c)).collect()]).unwrap();
            prop_assert!(quo.algebra.axiom_violations().is_empty());
            for i in 0..4 {
                for j in 0..4 {
                    let lhs = quo.projection.mul_vec(a.basis_product(i, j));
                    let rhs = quo.algebra.mul(&quo.projection.col(i), &quo.projection.col(j));
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }

        #[test]
        fn primitive_element_satisfies_its_minpoly(coeffs in prop::collection::vec(-3i64..4, 3)) {
            let r = qq();
            let a = ScAlgebra::from_monic(&MonicPoly::new(&r, coeffs.iter().map(|&c| q(c)).collect()));
            let p = primitive_element(&a).unwrap();
            let f = p.minpoly.full();
            let mut acc = a.zero_vec();
            for c in f.iter().rev() {
                acc = a.add(&a.mul(&acc, &p.generator), &a.scale(a.unit(), c));
            }
            prop_assert!(acc.iter().all(|x| r.is_zero(x)));
            prop_assert!(!r.is_zero(&p.powers.det().unwrap()));
        }
    }
}
