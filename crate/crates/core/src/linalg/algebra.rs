//! Finite free commutative algebras given by structure constants.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{self, MonicPoly, Poly};
use crate::ring::{Elem, Ring};

/// Default cap on algebra dimensions (structure checks cost `O(n^4)`).
pub const DIM_CAP: usize = 64;

/// `e_i e_j = sum_k c[i][j][k] e_k` on a fixed basis, with the unit given in
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScAlgebra {
    ring: Ring,
    n: usize,
    c: Vec<Elem>,
    unit: Vec<Elem>,
}

impl ScAlgebra {
    pub fn new(ring: &Ring, n: usize, c: Vec<Elem>, unit: Vec<Elem>) -> Result<Self> {
        if n > DIM_CAP {
            return Err(Error::DimensionCapExceeded(format!("dimension {n} > {DIM_CAP}")));
        }
        if c.len() != n * n * n || unit.len() != n {
            return Err(Error::Shape(format!("structure constants for dimension {n}")));
        }
        Ok(ScAlgebra { ring: ring.clone(), n, c, unit })
    }

    /// From a nested `c[i][j][k]` tensor.
    pub fn from_tensor(ring: &Ring, t: Vec<Vec<Vec<Elem>>>, unit: Vec<Elem>) -> Result<Self> {
        let n = t.len();
        if t.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::Shape("structure tensor is not n x n x n".into()));
        }
        Self::new(ring, n, t.into_iter().flatten().flatten().collect(), unit)
    }

    /// Power basis of `R[x]/(f)`.
    pub fn from_monic(f: &MonicPoly) -> Self {
        let r = &f.base;
        let n = f.degree();
        let full = f.full();
        let mut c = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let prod = poly::monomial(r, r.one(), i + j);
                let red = poly::rem(r, &prod, &full).expect("monic divisor");
                for k in 0..n {
                    c.push(red.get(k).cloned().unwrap_or_else(|| r.zero()));
                }
            }
        }
        let mut unit = vec![r.zero(); n];
        if n > 0 {
            unit[0] = r.one();
        }
        ScAlgebra { ring: r.clone(), n, c, unit }
    }

    /// `R^n` on its basis of orthogonal idempotents.
    pub fn split(ring: &Ring, n: usize) -> Self {
        let mut c = vec![ring.zero(); n * n * n];
        for i in 0..n {
            c[(i * n + i) * n + i] = ring.one();
        }
        ScAlgebra { ring: ring.clone(), n, c, unit: vec![ring.one(); n] }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn unit(&self) -> &[Elem] {
        &self.unit
    }

    pub fn constants(&self) -> &[Elem] {
        &self.c
    }

    pub fn tensor_nested(&self) -> Vec<Vec<Vec<Elem>>> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| self.basis_product(i, j).to_vec()).collect())
            .collect()
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &Elem {
        &self.c[(i * self.n + j) * self.n + k]
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[Elem] {
        let s = (i * self.n + j) * self.n;
        &self.c[s..s + self.n]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Elem> {
        let mut v = vec![self.ring.zero(); self.n];
        v[i] = self.ring.one();
        v
    }

    pub fn zero_vec(&self) -> Vec<Elem> {
        vec![self.ring.zero(); self.n]
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let r = &self.ring;
        let mut out = self.zero_vec();
        for (i, x) in a.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if r.is_zero(y) {
                    continue;
                }
                let xy = r.mul(x, y);
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.coeff(i, j, k);
                    if !r.is_zero(c) {
                        *o = r.add(o, &r.mul(&xy, c));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(x, y)| self.ring.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        a.iter().zip(b).map(|(x, y)| self.ring.sub(x, y)).collect()
    }

    pub fn scale(&self, a: &[Elem], s: &Elem) -> Vec<Elem> {
        a.iter().map(|x| self.ring.mul(x, s)).collect()
    }

    pub fn pow(&self, a: &[Elem], e: u64) -> Vec<Elem> {
        let mut acc = self.unit.clone();
        for i in (0..64 - e.leading_zeros()).rev() {
            acc = self.mul(&acc, &acc);
            if (e >> i) & 1 == 1 {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Matrix of `b -> a b` acting on coordinate columns.
    pub fn mult_matrix(&self, a: &[Elem]) -> Matrix {
        let cols: Vec<Vec<Elem>> = (0..self.n).map(|j| self.mul(a, &self.basis_vector(j))).collect();
        Matrix::from_rows_with_cols(&self.ring, cols, self.n)
            .expect("square")
            .transpose()
    }

    /// Minimal polynomial of `a` (monic, full coefficient list) by Krylov
    /// iteration with incremental elimination.
    pub fn minpoly(&self, a: &[Elem]) -> Result<Poly> {
        let r = &self.ring;
        // (pivot, reduced vector with 1 at the pivot, its expression in powers of a)
        let mut rows: Vec<(usize, Vec<Elem>, Vec<Elem>)> = Vec::new();
        let mut cur = self.unit.clone();
        for k in 0..=self.n {
            let mut v = cur.clone();
            let mut comb = vec![r.zero(); k + 1];
            comb[k] = r.one();
            for (piv, rv, rc) in &rows {
                let f = v[*piv].clone();
                if r.is_zero(&f) {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(rv) {
                    *x = r.sub(x, &r.mul(&f, y));
                }
                for (x, y) in comb.iter_mut().zip(rc) {
                    *x = r.sub(x, &r.mul(&f, y));
                }
            }
            match v.iter().position(|x| !r.is_zero(x)) {
                None => return Ok(comb),
                Some(p) => {
                    let inv = r.inv(&v[p])?;
                    let v = v.iter().map(|x| r.mul(x, &inv)).collect();
                    let comb = comb.iter().map(|x| r.mul(x, &inv)).collect();
                    rows.push((p, v, comb));
                }
            }
            cur = self.mul(&cur, a);
        }
        Err(Error::Shape("Krylov sequence did not close".into()))
    }

    /// Problems with the algebra axioms, as human-readable strings.
    pub fn axiom_violations(&self) -> Vec<String> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.basis_product(i, j) != self.basis_product(j, i) {
                    out.push(format!("commutativity fails at e{} e{}", i + 1, j + 1));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j).to_vec();
                for k in 0..n {
                    let left = self.mul(&ij, &self.basis_vector(k));
                    let jk = self.basis_product(j, k).to_vec();
                    let right = self.mul(&self.basis_vector(i), &jk);
                    if left != right {
                        out.push(format!("associativity fails at (e{} e{}) e{}", i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        if !self.mult_matrix(&self.unit).is_identity() {
            out.push("unit vector does not act as the identity".into());
        }
        out
    }

    /// Basis `e_i (x) f_j` at index `i * m + j`.
    pub fn tensor(&self, o: &ScAlgebra) -> Result<ScAlgebra> {
        if self.ring != o.ring {
            return Err(Error::MixedBase);
        }
        let r = &self.ring;
        let (n, m) = (self.n, o.n);
        let d = n * m;
        if d > DIM_CAP {
            return Err(Error::DimensionCapExceeded(format!("tensor dimension {d} > {DIM_CAP}")));
        }
        let mut c = vec![r.zero(); d * d * d];
        for i1 in 0..n {
            for j1 in 0..m {
                for i2 in 0..n {
                    for j2 in 0..m {
                        let a = (i1 * m + j1) * d + (i2 * m + j2);
                        for k1 in 0..n {
                            let x = self.coeff(i1, i2, k1);
                            if r.is_zero(x) {
                                continue;
                            }
                            for k2 in 0..m {
                                let y = o.coeff(j1, j2, k2);
                                if !r.is_zero(y) {
                                    c[a * d + k1 * m + k2] = r.mul(x, y);
                                }
                            }
                        }
                    }
                }
            }
        }
        let unit = (0..d).map(|idx| r.mul(&self.unit[idx / m], &o.unit[idx % m])).collect();
        Ok(ScAlgebra { ring: r.clone(), n: d, c, unit })
    }

    pub fn map_into(&self, s: &Ring) -> Result<ScAlgebra> {
        let c = self.c.iter().map(|x| s.embed(x, &self.ring)).collect::<Result<Vec<_>>>()?;
        let unit = self.unit.iter().map(|x| s.embed(x, &self.ring)).collect::<Result<Vec<_>>>()?;
        Ok(ScAlgebra { ring: s.clone(), n: self.n, c, unit })
    }

    pub fn map_elems(&self, s: &Ring, f: impl Fn(&Elem) -> Result<Elem>) -> Result<ScAlgebra> {
        let c = self.c.iter().map(&f).collect::<Result<Vec<_>>>()?;
        let unit = self.unit.iter().map(&f).collect::<Result<Vec<_>>>()?;
        Ok(ScAlgebra { ring: s.clone(), n: self.n, c, unit })
    }

    pub fn trace(&self, a: &[Elem]) -> Elem {
        let m = self.mult_matrix(a);
        (0..self.n).fold(self.ring.zero(), |acc, i| self.ring.add(&acc, m.get(i, i)))
    }

    /// Over a field: etale iff the trace form is nondegenerate.
    pub fn is_etale(&self) -> Result<bool> {
        let r = &self.ring;
        let m = Matrix::from_fn(r, self.n, self.n, |i, j| self.trace(self.basis_product(i, j)));
        Ok(!r.is_zero(&m.det()?))
    }

    /// Checks that `f` (columns = images of basis vectors of `src`) is a
    /// unital algebra map `src -> self`; returns a witness on failure.
    pub fn check_algebra_map(&self, src: &ScAlgebra, f: &Matrix) -> std::result::Result<(), String> {
        if f.mul_vec(src.unit()) != self.unit {
            return Err("unit is not preserved".into());
        }
        let cols: Vec<Vec<Elem>> = (0..src.dim()).map(|j| f.col(j)).collect();
        for i in 0..src.dim() {
            for j in i..src.dim() {
                let lhs = f.mul_vec(src.basis_product(i, j));
                let rhs = self.mul(&cols[i], &cols[j]);
                if lhs != rhs {
                    return Err(format!("not multiplicative on (e{}, e{})", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }
}

/// An algebra together with its monogenic presentation when one is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub sc: ScAlgebra,
    pub monic: Option<MonicPoly>,
}

impl Algebra {
    pub fn monogenic(f: MonicPoly) -> Self {
        Algebra { sc: ScAlgebra::from_monic(&f), monic: Some(f) }
    }

    pub fn from_sc(sc: ScAlgebra) -> Self {
        Algebra { sc, monic: None }
    }

    pub fn dim(&self) -> usize {
        self.sc.dim()
    }

    pub fn map_into(&self, s: &Ring) -> Result<Algebra> {
        let monic = match &self.monic {
            None => None,
            Some(f) => Some(MonicPoly::new(
                s,
                f.coeffs.iter().map(|c| s.embed(c, &f.base)).collect::<Result<Vec<_>>>()?,
            )),
        };
        Ok(Algebra { sc: self.sc.map_into(s)?, monic })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> Elem {
        Elem::Rat(BigRational::from_integer(n.into()))
    }

    #[test]
    fn power_basis_examples() {
        let qq = Ring::rationals();
        let a = ScAlgebra::from_monic(&MonicPoly::new(&qq, vec![q(-1), q(0)]));
        assert_eq!(a.basis_product(1, 1), &[q(1), q(0)]);
        assert!(a.axiom_violations().is_empty());
        let f2 = Ring::prime_field(2).unwrap();
        let z = Elem::Mod(0);
        let t4 = ScAlgebra::from_monic(&MonicPoly::new(&f2, vec![z.clone(); 4]));
        assert_eq!(t4.basis_product(1, 1), &[Elem::Mod(0), Elem::Mod(0), Elem::Mod(1), Elem::Mod(0)]);
        assert_eq!(t4.basis_product(1, 2), &[Elem::Mod(0), Elem::Mod(0), Elem::Mod(0), Elem::Mod(1)]);
        assert_eq!(t4.basis_product(2, 2), vec![Elem::Mod(0); 4].as_slice());
        assert!(!t4.is_etale().unwrap());
        let one = ScAlgebra::from_monic(&MonicPoly::new(&qq, vec![q(0)]));
        assert_eq!(one.basis_product(0, 0), &[q(1)]);
    }

    #[test]
    fn tensor_examples() {
        let qq = Ring::rationals();
        let a = ScAlgebra::from_monic(&MonicPoly::new(&qq, vec![q(-1), q(0)]));
        let b = ScAlgebra::from_monic(&MonicPoly::new(&qq, vec![q(0), q(-1)]));
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.dim(), 4);
        assert!(t.axiom_violations().is_empty());
        // (x (x) 1)^2 = 1 and (1 (x) y)^2 = 1 (x) y
        let x1 = t.basis_vector(2);
        let y1 = t.basis_vector(1);
        assert_eq!(t.mul(&x1, &x1), t.unit().to_vec());
        assert_eq!(t.mul(&y1, &y1), y1);
        let triv = ScAlgebra::split(&qq, 1);
        assert_eq!(triv.tensor(&b).unwrap(), b);
    }

    #[test]
    fn minimal_polynomials() {
        let qq = Ring::rationals();
        let a = ScAlgebra::from_monic(&MonicPoly::new(&qq, vec![q(0), q(-1), q(0)]));
        let x = a.basis_vector(1);
        assert_eq!(a.minpoly(&x).unwrap(), vec![q(0), q(-1), q(0), q(1)]);
        let x2 = a.basis_vector(2);
        assert_eq!(a.minpoly(&x2).unwrap(), vec![q(0), q(-1), q(1)]);
        assert_eq!(a.minpoly(a.unit()).unwrap(), vec![q(-1), q(1)]);
    }
}
