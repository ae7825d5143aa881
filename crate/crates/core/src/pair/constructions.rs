//! Direct sums, kernels and cokernels.

use super::{DualPair, Morphism, Side};
use crate::error::Result;
use crate::linalg::{ideal_quotient, orthogonal_complement, subalgebra, Algebra, Matrix};
use crate::ring::Elem;

/// `P (+) P'` with its injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub pair: DualPair,
    /// `P -> P (+) P'` and `P' -> P (+) P'`.
    pub injections: [Morphism; 2],
    /// `P (+) P' -> P` and `P (+) P' -> P'`.
    pub projections: [Morphism; 2],
}

pub fn direct_sum(p: &DualPair, p2: &DualPair) -> Result<DirectSum> {
    let a = p.a().sc.tensor(&p2.a().sc)?;
    let b = p.b().sc.tensor(&p2.b().sc)?;
    let phi = p.phi().kron(p2.phi());
    let sum = DualPair::new(Algebra::from_sc(a), Algebra::from_sc(b), phi)?;
    let r = p.base();
    let (n, m) = (p.rank(), p2.rank());
    let (eps, eps2) = (p.counit(Side::A), p2.counit(Side::A));
    let (u, u2) = (p.a().sc.unit(), p2.a().sc.unit());
    let kd = |a: usize, b: usize| if a == b { r.one() } else { r.zero() };
    let inj1 = Matrix::from_fn(r, n, n * m, |k, c| r.mul(&kd(k, c / m), &eps2[c % m]));
    let inj2 = Matrix::from_fn(r, m, n * m, |k, c| r.mul(&eps[c / m], &kd(k, c % m)));
    let proj1 = Matrix::from_fn(r, n * m, n, |c, k| r.mul(&kd(c / m, k), &u2[c % m]));
    let proj2 = Matrix::from_fn(r, n * m, m, |c, k| r.mul(&u[c / m], &kd(c % m, k)));
    Ok(DirectSum {
        injections: [Morphism::from_f(p, &sum, inj1)?, Morphism::from_f(p2, &sum, inj2)?],
        projections: [Morphism::from_f(&sum, p, proj1)?, Morphism::from_f(&sum, p2, proj2)?],
        pair: sum,
    })
}

/// The closed subgroup cut out by an ideal of `A`.
#[derive(Clone, Debug)]
pub struct SubPair {
    pub pair: DualPair,
    /// `A -> A''` (`n'' x n`).
    pub projection: Matrix,
    /// `B'' -> B` (`n x n''`).
    pub inclusion: Matrix,
    /// The canonical morphism `sub -> P`.
    pub morphism: Morphism,
}

/// `A'' = A / I` with `I` the ideal generated by `gens`, `B'' = I^perp`, and
/// the induced pairing.
pub fn sub_pair(p: &DualPair, gens: &[Vec<Elem>]) -> Result<SubPair> {
    let quo = ideal_quotient(&p.a().sc, gens)?;
    let w = orthogonal_complement(p.phi(), &quo.ideal)?;
    let (b2, incl) = subalgebra(&p.b().sc, &w)?;
    let phi_incl = p.phi().mul(&incl)?;
    let phi2 = phi_incl.select_rows(&quo.reps);
    let pair = DualPair::new(Algebra::from_sc(quo.algebra), Algebra::from_sc(b2), phi2)?;
    let morphism = Morphism::new(&pair, p, quo.projection.clone(), incl.clone())?;
    Ok(SubPair { pair, projection: quo.projection, inclusion: incl, morphism })
}

/// Kernel of `(f, g): P -> P'`, as the coequaliser of `f` and `f_0`.
pub fn kernel(m: &Morphism) -> Result<(DualPair, Morphism)> {
    let z = Morphism::zero(m.source(), m.target())?;
    let diff = m.f().sub(z.f())?;
    let gens: Vec<Vec<Elem>> = (0..diff.cols()).map(|j| diff.col(j)).collect();
    let s = sub_pair(m.source(), &gens)?;
    Ok((s.pair, s.morphism))
}

/// Cokernel of `(f, g)`: the dual of the kernel of the dual morphism.
pub fn cokernel(m: &Morphism) -> Result<(DualPair, Morphism)> {
    let (k, incl) = kernel(&m.dual())?;
    Ok((k.dual(), incl.dual()))
}
