//! Algebra homomorphisms `A -> S` into a field, exact and complex.

use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::{primitive_element, Algebra, Matrix, ScAlgebra};
use crate::poly::factor_degrees;
use crate::ring::numeric::BigComplex;
use crate::ring::roots::{complex_roots_rational, roots_in_ring};
use crate::ring::{Elem, Ring};

/// All algebra maps `A -> S` as coordinate rows (images of the basis of `A`),
/// sorted lexicographically.
pub fn characters(a: &Algebra, s: &Ring) -> Result<Vec<Vec<Elem>>> {
    let k = a.sc.ring();
    if let Some(f) = &a.monic {
        let n = f.degree();
        let roots = roots_in_ring(&f.full(), &f.base, s)?;
        let mut out: Vec<Vec<Elem>> = roots
            .iter()
            .map(|z| {
                let mut row = Vec::with_capacity(n);
                let mut acc = s.one();
                for _ in 0..n {
                    row.push(acc.clone());
                    acc = s.mul(&acc, z);
                }
                row
            })
            .collect();
        out.sort();
        return Ok(out);
    }
    let sc = &a.sc;
    let n = sc.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let over_s = sc.map_into(s)?;
    // N_i[j][k] = c_ijk, so that N_i phi^t = phi_i phi^t for a character phi
    let nmat: Vec<Matrix> = (0..n)
        .map(|i| Matrix::from_fn(s, n, n, |j, k| over_s.coeff(i, j, k).clone()))
        .collect();
    let mut spaces = vec![Matrix::identity(s, n)];
    for (i, ni) in nmat.iter().enumerate() {
        let f = sc.minpoly(&sc.basis_vector(i))?;
        let eig = roots_in_ring(&f, k, s)?;
        let mut next = Vec::new();
        for v in &spaces {
            for lam in &eig {
                let shifted = ni.sub(&Matrix::identity(s, n).scale(lam))?;
                let x = shifted.mul(&v.transpose())?.nullspace()?;
                if x.rows() > 0 {
                    next.push(x.mul(v)?);
                }
            }
        }
        spaces = next;
        if spaces.is_empty() {
            return Ok(Vec::new());
        }
    }
    let unit = over_s.unit();
    let mut out = Vec::with_capacity(spaces.len());
    for v in spaces {
        if v.rows() != 1 {
            return Err(Error::Shape("joint eigenspace of dimension > 1".into()));
        }
        let row = v.row(0);
        let at_unit = row.iter().zip(unit).fold(s.zero(), |acc, (x, u)| s.add(&acc, &s.mul(x, u)));
        let inv = s.inv(&at_unit)?;
        out.push(row.iter().map(|x| s.mul(x, &inv)).collect());
    }
    out.sort();
    Ok(out)
}

/// Complex characters of an algebra over `Q`: one row per root of the
/// minimal polynomial of a primitive element, plus the precision reached.
pub fn complex_characters(a: &Algebra, prec: usize) -> Result<(Vec<Vec<BigComplex>>, usize)> {
    let sc = &a.sc;
    if !sc.ring().is_rationals() {
        return Err(Error::UnsupportedBase("complex characters need base Q".into()));
    }
    let n = sc.dim();
    if n == 0 {
        return Ok((Vec::new(), prec));
    }
    let (f, cinv) = match &a.monic {
        Some(f) => (f.full(), None),
        None => {
            let p = primitive_element(sc)?;
            (p.minpoly.full(), Some(p.powers.inverse()?))
        }
    };
    let coeffs: Vec<BigRational> = f.iter().map(|c| c.as_rat().expect("rational").clone()).collect();
    let (roots, used) = complex_roots_rational(&coeffs, prec)?;
    let rows = roots
        .iter()
        .map(|z| {
            let mut pw = Vec::with_capacity(n);
            let mut acc = BigComplex::one(used);
            for _ in 0..n {
                pw.push(acc.clone());
                acc = acc.mul(z);
            }
            match &cinv {
                None => pw,
                Some(ci) => (0..n)
                    .map(|j| {
                        (0..n).fold(BigComplex::zero(used), |acc, k| {
                            let c = BigComplex::from_rational(ci.get(k, j).as_rat().expect("rational"), used);
                            acc.add(&pw[k].mul(&c))
                        })
                    })
                    .collect(),
            }
        })
        .collect();
    Ok((rows, used))
}

/// Degree over the prime field `K` of a field containing every character
/// value of `A`: lcm of the irreducible-factor degrees of the minimal
/// polynomials of the basis vectors.
pub fn split_degree(a: &ScAlgebra) -> Result<usize> {
    let k = a.ring();
    if !k.is_finite() || k.degree() != 1 {
        return Err(Error::UnsupportedBase(format!("splitting degrees over {k}")));
    }
    let mut m = 1usize;
    for i in 0..a.dim() {
        let f = a.minpoly(&a.basis_vector(i))?;
        for d in factor_degrees(k, &f)? {
            m = m.lcm(&d);
        }
    }
    Ok(m)
}

/// Does `row` define a unital algebra map `A -> S`?
pub fn is_character(a: &ScAlgebra, s: &Ring, row: &[Elem]) -> Result<bool> {
    let n = a.dim();
    if row.len() != n {
        return Ok(false);
    }
    let over = a.map_into(s)?;
    let eval = |v: &[Elem]| v.iter().zip(row).fold(s.zero(), |acc, (x, y)| s.add(&acc, &s.mul(x, y)));
    if !s.is_one(&eval(over.unit())) {
        return Ok(false);
    }
    for i in 0..n {
        for j in i..n {
            if eval(over.basis_product(i, j)) != s.mul(&row[i], &row[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonicPoly;

    fn q(n: i64) -> Elem {
        Elem::Rat(BigRational::from_integer(n.into()))
    }

    #[test]
    fn split_algebra_has_coordinate_characters() {
        let r = Ring::rationals();
        let a = Algebra::from_sc(ScAlgebra::split(&r, 3));
        let ch = characters(&a, &r).unwrap();
        assert_eq!(ch.len(), 3);
        for row in &ch {
            assert!(is_character(&a.sc, &r, row).unwrap());
            assert_eq!(row.iter().filter(|x| r.is_one(x)).count(), 1);
        }
    }

    #[test]
    fn sc_agrees_with_monogenic() {
        let f7 = Ring::prime_field(7).unwrap();
        let f = MonicPoly::new(&f7, vec![f7.from_i64(-2), f7.zero()]);
        let mono = Algebra::monogenic(f.clone());
        let sc = Algebra::from_sc(ScAlgebra::from_monic(&f));
        assert_eq!(characters(&mono, &f7).unwrap(), characters(&sc, &f7).unwrap());
        assert_eq!(characters(&mono, &f7).unwrap().len(), 2);
    }

    #[test]
    fn nilpotent_has_one_character() {
        let f2 = Ring::prime_field(2).unwrap();
        let t4 = MonicPoly::new(&f2, vec![f2.zero(); 4]);
        let sc = Algebra::from_sc(ScAlgebra::from_monic(&t4));
        let ch = characters(&sc, &f2).unwrap();
        assert_eq!(ch, vec![vec![f2.one(), f2.zero(), f2.zero(), f2.zero()]]);
    }

    #[test]
    fn characters_in_extension() {
        let r = Ring::rationals();
        let a = Algebra::from_sc(ScAlgebra::from_monic(&MonicPoly::new(&r, vec![q(-2), q(0)])));
        assert!(characters(&a, &r).unwrap().is_empty());
        let l = Ring::quadratic(&BigRational::from_integer(2.into()));
        let ch = characters(&a, &l).unwrap();
        assert_eq!(ch.len(), 2);
        for row in &ch {
            assert!(is_character(&a.sc, &l, row).unwrap());
        }
    }

    #[test]
    fn complex_characters_of_split_algebra() {
        let r = Ring::rationals();
        let a = Algebra::from_sc(ScAlgebra::split(&r, 2));
        let (rows, _) = complex_characters(&a, 128).unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            let v: Vec<(f64, f64)> = row.iter().map(|z| z.to_f64_pair()).collect();
            let ones = v.iter().filter(|(x, y)| (x - 1.0).abs() < 1e-30 && y.abs() < 1e-30).count();
            let zeros = v.iter().filter(|(x, y)| x.abs() < 1e-30 && y.abs() < 1e-30).count();
            assert_eq!((ones, zeros), (1, 1));
        }
    }
}
