//! Round trips between dual pairs and commutative, cocommutative Hopf data.

use super::{outer, tensor_mul, DualPair, Side};
use crate::error::{Error, Result};
use crate::linalg::{Algebra, Matrix, ScAlgebra};
use crate::ring::Elem;

/// An algebra with comultiplication (`n^2 x n`, row `k * n + l`) and counit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfData {
    pub algebra: ScAlgebra,
    pub comult: Matrix,
    pub counit: Vec<Elem>,
}

impl HopfData {
    fn image(&self, i: usize) -> Matrix {
        let n = self.algebra.dim();
        Matrix::from_fn(self.algebra.ring(), n, n, |k, l| self.comult.get(k * n + l, i).clone())
    }

    fn apply(&self, v: &[Elem]) -> Matrix {
        let a = &self.algebra;
        let r = a.ring();
        let n = a.dim();
        let mut acc = Matrix::zeros(r, n, n);
        for (i, x) in v.iter().enumerate() {
            if !r.is_zero(x) {
                acc = acc.add(&self.image(i).scale(x)).expect("shape");
            }
        }
        acc
    }

    /// Failed Hopf axioms (algebra maps, coassociativity, counit laws).
    pub fn violations(&self) -> Vec<String> {
        let a = &self.algebra;
        let r = a.ring();
        let n = a.dim();
        let mut out: Vec<String> = a.axiom_violations();
        if self.comult.rows() != n * n || self.comult.cols() != n || self.counit.len() != n {
            out.push("shapes do not match the algebra".into());
            return out;
        }
        let eps = |v: &[Elem]| v.iter().zip(&self.counit).fold(r.zero(), |acc, (x, y)| r.add(&acc, &r.mul(x, y)));
        if !r.is_one(&eps(a.unit())) {
            out.push("counit does not preserve the unit".into());
        }
        if self.apply(a.unit()) != outer(r, a.unit(), a.unit()) {
            out.push("comultiplication does not preserve the unit".into());
        }
        for i in 0..n {
            for j in i..n {
                let p = a.basis_product(i, j);
                if eps(p) != r.mul(&self.counit[i], &self.counit[j]) {
                    out.push(format!("counit not multiplicative on (e{}, e{})", i + 1, j + 1));
                }
                if self.apply(p) != tensor_mul(a, a, &self.image(i), &self.image(j)) {
                    out.push(format!("comultiplication not multiplicative on (e{}, e{})", i + 1, j + 1));
                }
            }
        }
        for i in 0..n {
            let m = self.image(i);
            // (eps (x) id) and (id (x) eps) both give back e_i
            let left: Vec<Elem> = (0..n)
                .map(|l| (0..n).fold(r.zero(), |acc, k| r.add(&acc, &r.mul(&self.counit[k], m.get(k, l)))))
                .collect();
            let right: Vec<Elem> = (0..n)
                .map(|k| (0..n).fold(r.zero(), |acc, l| r.add(&acc, &r.mul(m.get(k, l), &self.counit[l]))))
                .collect();
            if left != a.basis_vector(i) || right != a.basis_vector(i) {
                out.push(format!("counit law fails on e{}", i + 1));
            }
            // coassociativity on coordinates (k, l, s)
            let mut lhs = vec![r.zero(); n * n * n];
            let mut rhs = vec![r.zero(); n * n * n];
            for k in 0..n {
                for l in 0..n {
                    let c = m.get(k, l);
                    if r.is_zero(c) {
                        continue;
                    }
                    let mk = self.image(k);
                    let ml = self.image(l);
                    for u in 0..n {
                        for v in 0..n {
                            let x = r.mul(c, mk.get(u, v));
                            let idx = (u * n + v) * n + l;
                            lhs[idx] = r.add(&lhs[idx], &x);
                            let y = r.mul(c, ml.get(u, v));
                            let idy = (k * n + u) * n + v;
                            rhs[idy] = r.add(&rhs[idy], &y);
                        }
                    }
                }
            }
            if lhs != rhs {
                out.push(format!("coassociativity fails on e{}", i + 1));
            }
        }
        out
    }
}

impl DualPair {
    /// `(A, m_A, e_A, mu_1, eps_1)`; requires the pair axioms.
    pub fn hopf_export(&self) -> Result<HopfData> {
        let report = self.verify_axioms();
        if !report.passed() {
            return Err(Error::AxiomsFailed(report.failures.join("; ")));
        }
        Ok(HopfData {
            algebra: self.a().sc.clone(),
            comult: self.comultiplication(Side::A).clone(),
            counit: self.counit(Side::A),
        })
    }
}

/// `(A, A^dual, canonical pairing)`: the dual module gets the dual basis,
/// multiplication transposed from the comultiplication and the counit as unit.
pub fn pair_from_hopf(h: &HopfData) -> Result<DualPair> {
    let v = h.violations();
    if !v.is_empty() {
        return Err(Error::InvalidHopf(v.join("; ")));
    }
    let a = &h.algebra;
    let r = a.ring();
    let n = a.dim();
    let mut c = Vec::with_capacity(n * n * n);
    for p in 0..n {
        for q in 0..n {
            for s in 0..n {
                c.push(h.comult.get(p * n + q, s).clone());
            }
        }
    }
    let b = ScAlgebra::new(r, n, c, h.counit.clone())?;
    DualPair::new(Algebra::from_sc(a.clone()), Algebra::from_sc(b), Matrix::identity(r, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonicPoly;
    use crate::ring::Ring;
    use num_rational::BigRational;

    fn q(n: i64) -> Elem {
        Elem::Rat(BigRational::from_integer(n.into()))
    }

    #[test]
    fn mu2_round_trip() {
        let r = Ring::rationals();
        let f = MonicPoly::new(&r, vec![q(-1), q(0)]);
        let g = MonicPoly::new(&r, vec![q(0), q(-1)]);
        let phi = Matrix::from_rows(&r, vec![vec![q(1), q(0)], vec![q(1), q(1)]]).unwrap();
        let p = DualPair::monogenic(f, g, phi).unwrap();
        let h = p.hopf_export().unwrap();
        assert!(h.violations().is_empty());
        let back = pair_from_hopf(&h).unwrap();
        assert!(back.phi().is_identity());
        assert!(back.verify_axioms().passed());
        assert!(back.b().sc.is_etale().unwrap());
        // exporting again gives the same Hopf data
        assert_eq!(back.hopf_export().unwrap(), h);
    }

    #[test]
    fn invalid_hopf_is_rejected() {
        let r = Ring::rationals();
        let a = ScAlgebra::split(&r, 1);
        let h = HopfData { algebra: a, comult: Matrix::identity(&r, 1).scale(&q(2)), counit: vec![q(1)] };
        assert!(matches!(pair_from_hopf(&h), Err(Error::InvalidHopf(_))));
    }
}
