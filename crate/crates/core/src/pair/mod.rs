//! Dual pairs `(A, B, Phi)`: two finite free algebras of rank `n` and a
//! perfect pairing between them.
//!
//! Matrix conventions: `phi[i][j] = Phi(a_i, b_j)`, and `theta` is the inverse
//! transpose of `phi`, so that `theta_Phi = sum theta[i][j] a_i (x) b_j`.
//! Elements of `A (x) C` are `dim A x dim C` matrices.

mod constructions;
mod hopf;
mod morphism;

use std::fmt;
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{primitive_element, Algebra, Matrix, ScAlgebra};
use crate::poly::MonicPoly;
use crate::ring::{Elem, Ring};

pub use constructions::{cokernel, direct_sum, kernel, sub_pair, DirectSum, SubPair};
pub use hopf::{pair_from_hopf, HopfData};
pub use morphism::{add_morphisms, hom_set, hom_set_with, Morphism, HOM_SEARCH_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    Unchecked,
    AxiomsVerified,
    NumericallyVerified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

struct Inner {
    a: Algebra,
    b: Algebra,
    phi: Matrix,
    theta: OnceLock<Matrix>,
    comult: [OnceLock<Matrix>; 2],
    validated: AtomicU8,
}

/// A dual pair. Cloning is cheap; cached matrices are shared.
#[derive(Clone)]
pub struct DualPair(Arc<Inner>);

/// Outcome of [`DualPair::verify_axioms`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Debug for DualPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DualPair")
            .field("base", self.base())
            .field("n", &self.rank())
            .field("phi", &self.0.phi)
            .finish()
    }
}

impl PartialEq for DualPair {
    fn eq(&self, o: &Self) -> bool {
        self.0.a == o.0.a && self.0.b == o.0.b && self.0.phi == o.0.phi
    }
}

impl Eq for DualPair {}

impl DualPair {
    pub fn new(a: Algebra, b: Algebra, phi: Matrix) -> Result<Self> {
        let r = a.sc.ring().clone();
        if b.sc.ring() != &r || phi.ring() != &r {
            return Err(Error::MixedBase);
        }
        let n = a.dim();
        if b.dim() != n || phi.rows() != n || phi.cols() != n {
            return Err(Error::Shape(format!(
                "ranks {} and {} with a {}x{} pairing matrix",
                n,
                b.dim(),
                phi.rows(),
                phi.cols()
            )));
        }
        if r.is_zero(&phi.det()?) {
            return Err(Error::NotInvertible("pairing matrix is singular".into()));
        }
        Ok(DualPair(Arc::new(Inner {
            a,
            b,
            phi,
            theta: OnceLock::new(),
            comult: [OnceLock::new(), OnceLock::new()],
            validated: AtomicU8::new(0),
        })))
    }

    /// Monogenic pair `R[x]/(f)`, `R[y]/(g)`.
    pub fn monogenic(f: MonicPoly, g: MonicPoly, phi: Matrix) -> Result<Self> {
        Self::new(Algebra::monogenic(f), Algebra::monogenic(g), phi)
    }

    /// Pair given by its `theta` matrix instead of `phi`.
    pub fn from_theta(a: Algebra, b: Algebra, theta: Matrix) -> Result<Self> {
        let phi = theta.inverse_transpose()?;
        Self::new(a, b, phi)
    }

    pub fn base(&self) -> &Ring {
        self.0.a.sc.ring()
    }

    pub fn rank(&self) -> usize {
        self.0.a.dim()
    }

    pub fn a(&self) -> &Algebra {
        &self.0.a
    }

    pub fn b(&self) -> &Algebra {
        &self.0.b
    }

    pub fn side(&self, side: Side) -> &Algebra {
        match side {
            Side::A => &self.0.a,
            Side::B => &self.0.b,
        }
    }

    pub fn phi(&self) -> &Matrix {
        &self.0.phi
    }

    pub fn theta(&self) -> &Matrix {
        self.0
            .theta
            .get_or_init(|| self.0.phi.inverse_transpose().expect("phi is invertible"))
    }

    pub fn validation(&self) -> Validation {
        match self.0.validated.load(Ordering::Acquire) {
            0 => Validation::Unchecked,
            1 => Validation::AxiomsVerified,
            _ => Validation::NumericallyVerified,
        }
    }

    pub(crate) fn mark(&self, v: Validation) {
        let code = match v {
            Validation::Unchecked => 0,
            Validation::AxiomsVerified => 1,
            Validation::NumericallyVerified => 2,
        };
        self.0.validated.fetch_max(code, Ordering::AcqRel);
    }

    /// `(B, A, phi^t)`.
    pub fn dual(&self) -> DualPair {
        let d = DualPair::new(self.0.b.clone(), self.0.a.clone(), self.0.phi.transpose()).expect("transpose is perfect");
        d.mark(self.validation());
        d
    }

    /// Counit of one side: `eps_1(a_i) = Phi(a_i, 1_B)` or `eps_2(b_j) = Phi(1_A, b_j)`.
    pub fn counit(&self, side: Side) -> Vec<Elem> {
        match side {
            Side::A => self.0.phi.mul_vec(self.0.b.sc.unit()),
            Side::B => self.0.phi.vec_mul(self.0.a.sc.unit()),
        }
    }

    /// Comultiplication of one side as an `n^2 x n` matrix; column `i` holds
    /// the image of the `i`-th basis vector, row `k * n + l` the coefficient
    /// of `e_k (x) e_l`.
    pub fn comultiplication(&self, side: Side) -> &Matrix {
        let idx = match side {
            Side::A => 0,
            Side::B => 1,
        };
        self.0.comult[idx].get_or_init(|| {
            let (phi, other) = match side {
                Side::A => (self.0.phi.clone(), &self.0.b.sc),
                Side::B => (self.0.phi.transpose(), &self.0.a.sc),
            };
            comult_closed_form(&phi, other)
        })
    }

    /// Image of one basis vector under the comultiplication, as an `n x n`
    /// element of `X (x) X`.
    pub fn comult_of(&self, side: Side, i: usize) -> Matrix {
        let n = self.rank();
        let c = self.comultiplication(side);
        Matrix::from_fn(self.base(), n, n, |k, l| c.get(k * n + l, i).clone())
    }

    /// Checks that the counits and comultiplications are unital algebra maps
    /// on basis pairs, and that `theta^n = 1` in `A (x) B`. Marks the pair on
    /// success.
    pub fn verify_axioms(&self) -> AxiomReport {
        let mut failures = Vec::new();
        for (name, alg) in [("A", &self.0.a.sc), ("B", &self.0.b.sc)] {
            for v in alg.axiom_violations() {
                failures.push(format!("algebra {name}: {v}"));
            }
        }
        if !failures.is_empty() {
            return AxiomReport { failures };
        }
        let r = self.base();
        for (side, name) in [(Side::A, 1), (Side::B, 2)] {
            let alg = &self.side(side).sc;
            let eps = self.counit(side);
            let ev = |v: &[Elem]| v.iter().zip(&eps).fold(r.zero(), |acc, (x, y)| r.add(&acc, &r.mul(x, y)));
            if !r.is_one(&ev(alg.unit())) {
                failures.push(format!("eps_{name} does not preserve the unit"));
            }
            let n = alg.dim();
            'eps: for i in 0..n {
                for j in i..n {
                    if ev(alg.basis_product(i, j)) != r.mul(&eps[i], &eps[j]) {
                        failures.push(format!("eps_{name} not multiplicative on (e{}, e{})", i + 1, j + 1));
                        break 'eps;
                    }
                }
            }
            let images: Vec<Matrix> = (0..n).map(|i| self.comult_of(side, i)).collect();
            let apply = |v: &[Elem]| {
                let mut acc = Matrix::zeros(r, n, n);
                for (x, img) in v.iter().zip(&images) {
                    if !r.is_zero(x) {
                        acc = acc.add(&img.scale(x)).expect("same shape");
                    }
                }
                acc
            };
            if apply(alg.unit()) != outer(r, alg.unit(), alg.unit()) {
                failures.push(format!("mu_{name} does not preserve the unit"));
            }
            'mu: for i in 0..n {
                for j in i..n {
                    let lhs = apply(alg.basis_product(i, j));
                    let rhs = tensor_mul(alg, alg, &images[i], &images[j]);
                    if lhs != rhs {
                        failures.push(format!("mu_{name} not multiplicative on (e{}, e{})", i + 1, j + 1));
                        break 'mu;
                    }
                }
            }
        }
        if failures.is_empty() && !self.theta_is_root_of_unity() {
            failures.push(format!("theta^{} != 1 in A (x) B", self.rank()));
        }
        if failures.is_empty() {
            self.mark(Validation::AxiomsVerified);
        }
        AxiomReport { failures }
    }

    /// Exact check `theta^n = 1` in `A (x) B`.
    pub fn theta_is_root_of_unity(&self) -> bool {
        let (a, b) = (&self.0.a.sc, &self.0.b.sc);
        let one = outer(self.base(), a.unit(), b.unit());
        tensor_pow(a, b, self.theta(), self.rank() as u64) == one
    }

    /// Same data with coefficients pushed through the canonical map into `s`.
    pub fn base_change(&self, s: &Ring) -> Result<DualPair> {
        let map = |x: &Elem| s.embed(x, self.base()).map_err(|_| Error::CoefficientNotMapped(self.base().format(x)));
        self.map_coefficients(s, map)
    }

    /// Same data with every coefficient sent through `f` into `s`.
    pub fn map_coefficients(&self, s: &Ring, f: impl Fn(&Elem) -> Result<Elem>) -> Result<DualPair> {
        let map_alg = |x: &Algebra| -> Result<Algebra> {
            let sc = x.sc.map_elems(s, &f)?;
            let monic = match &x.monic {
                None => None,
                Some(m) => Some(MonicPoly::new(s, m.coeffs.iter().map(&f).collect::<Result<Vec<_>>>()?)),
            };
            Ok(Algebra { sc, monic })
        };
        let phi = self.0.phi.map_elems(s, &f)?;
        DualPair::new(map_alg(&self.0.a)?, map_alg(&self.0.b)?, phi)
    }

    /// Re-presents both sides on power bases of primitive elements, when
    /// they exist.
    pub fn to_monogenic(&self) -> Result<DualPair> {
        let rebase = |x: &Algebra| -> Result<(Algebra, Matrix)> {
            if x.monic.is_some() {
                return Ok((x.clone(), Matrix::identity(x.sc.ring(), x.dim())));
            }
            let p = primitive_element(&x.sc)?;
            Ok((Algebra::monogenic(p.minpoly), p.powers))
        };
        let (a, ca) = rebase(&self.0.a)?;
        let (b, cb) = rebase(&self.0.b)?;
        let phi = ca.transpose().mul(&self.0.phi)?.mul(&cb)?;
        let out = DualPair::new(a, b, phi)?;
        out.mark(self.validation());
        Ok(out)
    }

    pub fn is_monogenic(&self) -> bool {
        self.0.a.monic.is_some() && self.0.b.monic.is_some()
    }
}

/// `mu(a_i) = theta N_i theta^t` with `N_i[p][q] = Phi(a_i, b_p b_q)`.
fn comult_closed_form(phi: &Matrix, other: &ScAlgebra) -> Matrix {
    let r = phi.ring();
    let n = phi.rows();
    let theta = phi.inverse_transpose().expect("phi is invertible");
    let mut out = Matrix::zeros(r, n * n, n);
    for i in 0..n {
        let ni = Matrix::from_fn(r, n, n, |p, q| {
            other
                .basis_product(p, q)
                .iter()
                .enumerate()
                .fold(r.zero(), |acc, (s, c)| r.add(&acc, &r.mul(c, phi.get(i, s))))
        });
        let m = theta.mul(&ni).and_then(|x| x.mul(&theta.transpose())).expect("square");
        for k in 0..n {
            for l in 0..n {
                out.set(k * n + l, i, m.get(k, l).clone());
            }
        }
    }
    out
}

/// `u (x) v` as a matrix.
pub fn outer(r: &Ring, u: &[Elem], v: &[Elem]) -> Matrix {
    Matrix::from_fn(r, u.len(), v.len(), |i, j| r.mul(&u[i], &v[j]))
}

/// Product in `B (x) C` of two `dim B x dim C` matrices.
pub fn tensor_mul(b: &ScAlgebra, c: &ScAlgebra, x: &Matrix, y: &Matrix) -> Matrix {
    let r = b.ring();
    let (n, m) = (b.dim(), c.dim());
    let mut out = vec![r.zero(); n * m];
    for i in 0..n {
        let xi = x.row_slice(i);
        if xi.iter().all(|v| r.is_zero(v)) {
            continue;
        }
        for i2 in 0..n {
            let yi = y.row_slice(i2);
            let bp = b.basis_product(i, i2);
            if bp.iter().all(|v| r.is_zero(v)) || yi.iter().all(|v| r.is_zero(v)) {
                continue;
            }
            let cp = c.mul(xi, yi);
            for (k, bk) in bp.iter().enumerate() {
                if r.is_zero(bk) {
                    continue;
                }
                for (l, v) in cp.iter().enumerate() {
                    if !r.is_zero(v) {
                        let o = &mut out[k * m + l];
                        *o = r.add(o, &r.mul(bk, v));
                    }
                }
            }
        }
    }
    Matrix::new(r, n, m, out).expect("shape")
}

pub fn tensor_pow(b: &ScAlgebra, c: &ScAlgebra, x: &Matrix, e: u64) -> Matrix {
    let mut acc = outer(b.ring(), b.unit(), c.unit());
    for i in (0..64 - e.leading_zeros()).rev() {
        acc = tensor_mul(b, c, &acc, &acc);
        if (e >> i) & 1 == 1 {
            acc = tensor_mul(b, c, &acc, x);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> Elem {
        Elem::Rat(BigRational::from_integer(n.into()))
    }

    fn mu2() -> DualPair {
        let r = Ring::rationals();
        let f = MonicPoly::new(&r, vec![q(-1), q(0)]);
        let g = MonicPoly::new(&r, vec![q(0), q(-1)]);
        let phi = Matrix::from_rows(&r, vec![vec![q(1), q(0)], vec![q(1), q(1)]]).unwrap();
        DualPair::monogenic(f, g, phi).unwrap()
    }

    #[test]
    fn mu2_is_valid_and_x_is_grouplike() {
        let p = mu2();
        assert!(p.verify_axioms().passed());
        assert_eq!(p.validation(), Validation::AxiomsVerified);
        let r = p.base();
        let img = p.comult_of(Side::A, 1);
        assert_eq!(img, outer(r, &[q(0), q(1)], &[q(0), q(1)]));
        assert_eq!(p.counit(Side::A), vec![q(1), q(1)]);
        assert!(p.dual().verify_axioms().passed());
        assert_eq!(p.dual().dual(), p);
    }

    #[test]
    fn broken_pairing_fails() {
        let p = mu2();
        let r = p.base().clone();
        let phi = Matrix::from_rows(&r, vec![vec![q(1), q(0)], vec![q(2), q(1)]]).unwrap();
        let bad = DualPair::new(p.a().clone(), p.b().clone(), phi).unwrap();
        assert!(!bad.verify_axioms().passed());
        assert_eq!(bad.validation(), Validation::Unchecked);
    }

    #[test]
    fn singular_phi_rejected() {
        let p = mu2();
        let r = p.base().clone();
        let phi = Matrix::from_rows(&r, vec![vec![q(1), q(1)], vec![q(1), q(1)]]).unwrap();
        assert!(matches!(DualPair::new(p.a().clone(), p.b().clone(), phi), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn tensor_mul_matches_tensor_algebra() {
        let r = Ring::rationals();
        let a = ScAlgebra::from_monic(&MonicPoly::new(&r, vec![q(-1), q(0)]));
        let b = ScAlgebra::from_monic(&MonicPoly::new(&r, vec![q(0), q(-1)]));
        let ab = a.tensor(&b).unwrap();
        let x = Matrix::from_rows(&r, vec![vec![q(1), q(2)], vec![q(3), q(-1)]]).unwrap();
        let y = Matrix::from_rows(&r, vec![vec![q(0), q(5)], vec![q(-2), q(1)]]).unwrap();
        let flat = |m: &Matrix| (0..2).flat_map(|i| m.row(i)).collect::<Vec<_>>();
        let prod = tensor_mul(&a, &b, &x, &y);
        assert_eq!(flat(&prod), ab.mul(&flat(&x), &flat(&y)));
    }
}
