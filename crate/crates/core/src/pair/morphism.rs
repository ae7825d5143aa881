//! Morphisms of dual pairs, Hom sets and their group law.

use num_integer::Integer;

use super::{outer, tensor_mul, DualPair, Side};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::linalg::{characters, complex_characters, primitive_element, split_degree, Algebra, Matrix, ScAlgebra};
use crate::ring::numeric::{self, BigComplex};
use crate::ring::roots::{complex_inverse, max_bits};
use crate::ring::{Elem, Ring};

/// Cap on the number of candidate algebra maps examined by [`hom_set`].
pub const HOM_SEARCH_CAP: u64 = 1 << 16;

/// `(f, g): (A, B, Phi) -> (A', B', Phi')` with `f: A' -> A` (an `n x n'`
/// matrix, columns are images) and `g: B -> B'` (`n' x n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: DualPair,
    target: DualPair,
    f: Matrix,
    g: Matrix,
}

impl Morphism {
    /// Checks that `f`, `g` are algebra maps and `f^t phi = phi' g`.
    pub fn new(source: &DualPair, target: &DualPair, f: Matrix, g: Matrix) -> Result<Self> {
        let (n, m) = (source.rank(), target.rank());
        if (f.rows(), f.cols(), g.rows(), g.cols()) != (n, m, m, n) {
            return Err(Error::Shape("morphism matrices do not match the ranks".into()));
        }
        source.a().sc.check_algebra_map(&target.a().sc, &f).map_err(Error::NotAlgebraMap)?;
        target.b().sc.check_algebra_map(&source.b().sc, &g).map_err(Error::NotAlgebraMap)?;
        if f.transpose().mul(source.phi())? != target.phi().mul(&g)? {
            return Err(Error::NotAlgebraMap("f and g are not adjoint".into()));
        }
        Ok(Morphism { source: source.clone(), target: target.clone(), f, g })
    }

    /// The morphism with the given `f`; `g` is solved from adjointness.
    pub fn from_f(source: &DualPair, target: &DualPair, f: Matrix) -> Result<Self> {
        source.a().sc.check_algebra_map(&target.a().sc, &f).map_err(Error::NotAlgebraMap)?;
        let g = adjoint_of(source, target, &f)?;
        target
            .b()
            .sc
            .check_algebra_map(&source.b().sc, &g)
            .map_err(|_| Error::AdjointNotAlgebraMap)?;
        Ok(Morphism { source: source.clone(), target: target.clone(), f, g })
    }

    pub fn identity(p: &DualPair) -> Morphism {
        let i = Matrix::identity(p.base(), p.rank());
        Morphism { source: p.clone(), target: p.clone(), f: i.clone(), g: i }
    }

    /// `f_0 = unit_A . eps'`, with its adjoint.
    pub fn zero(source: &DualPair, target: &DualPair) -> Result<Morphism> {
        let f0 = outer(source.base(), source.a().sc.unit(), &target.counit(Side::A));
        let g0 = adjoint_of(source, target, &f0)?;
        Ok(Morphism { source: source.clone(), target: target.clone(), f: f0, g: g0 })
    }

    pub fn source(&self) -> &DualPair {
        &self.source
    }

    pub fn target(&self) -> &DualPair {
        &self.target
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    /// `(g, f): dual(target) -> dual(source)`.
    pub fn dual(&self) -> Morphism {
        Morphism { source: self.target.dual(), target: self.source.dual(), f: self.g.clone(), g: self.f.clone() }
    }

    /// `next . self`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        if self.target != next.source {
            return Err(Error::Shape("morphisms are not composable".into()));
        }
        Ok(Morphism {
            source: self.source.clone(),
            target: next.target.clone(),
            f: self.f.mul(&next.f)?,
            g: next.g.mul(&self.g)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        Morphism::zero(&self.source, &self.target).map(|z| z.f == self.f).unwrap_or(false)
    }

    pub fn is_isomorphism(&self) -> bool {
        self.f.is_square() && !self.f.ring().is_zero(&self.f.det().unwrap_or_else(|_| self.f.ring().zero()))
    }
}

/// `g = phi'^-1 f^t phi`.
fn adjoint_of(source: &DualPair, target: &DualPair, f: &Matrix) -> Result<Matrix> {
    target.phi().inverse()?.mul(&f.transpose())?.mul(source.phi())
}

/// Sum in `Hom(P, P')`: `f` and `f'` are `A`-valued points of `P'`, added
/// through `B' (x) A`.
pub fn add_morphisms(m1: &Morphism, m2: &Morphism) -> Result<Morphism> {
    if m1.source != m2.source || m1.target != m2.target {
        return Err(Error::Shape("morphisms have different source or target".into()));
    }
    let a = &m1.source.a().sc;
    let b2 = &m1.target.b().sc;
    let phi2 = m1.target.phi();
    let inv = phi2.inverse()?;
    let x = inv.mul(&m1.f.transpose())?;
    let y = inv.mul(&m2.f.transpose())?;
    let prod = tensor_mul(b2, a, &x, &y);
    let f = phi2.mul(&prod)?.transpose();
    Morphism::from_f(&m1.source, &m1.target, f)
}

/// All morphisms `P -> P'`, sorted by their `f` matrices.
pub fn hom_set(p: &DualPair, p2: &DualPair) -> Result<Vec<Morphism>> {
    hom_set_with(p, p2, Exec::default())
}

pub fn hom_set_with(p: &DualPair, p2: &DualPair, exec: Exec) -> Result<Vec<Morphism>> {
    if p.base() != p2.base() {
        return Err(Error::MixedBase);
    }
    let cands = algebra_map_candidates(&p2.a().sc, &p.a().sc, exec)?;
    let found = exec::map_range(exec, cands.len(), |i| Morphism::from_f(p, p2, cands[i].clone()).ok());
    let mut out: Vec<Morphism> = found.into_iter().flatten().collect();
    out.sort_by(|x, y| x.f.to_rows().cmp(&y.f.to_rows()));
    out.dedup_by(|x, y| x.f == y.f);
    Ok(out)
}

/// Candidate matrices for algebra maps `src -> dst`; every genuine algebra
/// map is among them.
fn algebra_map_candidates(src: &ScAlgebra, dst: &ScAlgebra, exec: Exec) -> Result<Vec<Matrix>> {
    let k = dst.ring();
    let (n, n2) = (dst.dim(), src.dim());
    if let Some(q) = k.size_u64() {
        let total = q.checked_pow(n as u32).filter(|&t| t <= HOM_SEARCH_CAP);
        if let (Some(total), Ok(prim)) = (total, primitive_element(src)) {
            // f is fixed by the image y of a generator, a root of its minpoly
            let f = prim.minpoly.full();
            let cinv = prim.powers.inverse()?;
            let ys = exec::map_range(exec, total as usize, |idx| {
                let mut t = idx as u64;
                let y: Vec<Elem> = (0..n)
                    .map(|_| {
                        let d = t % q;
                        t /= q;
                        k.element_at(d)
                    })
                    .collect();
                let mut acc = dst.zero_vec();
                for c in f.iter().rev() {
                    acc = dst.add(&dst.mul(&acc, &y), &dst.scale(dst.unit(), c));
                }
                acc.iter().all(|x| k.is_zero(x)).then_some(y)
            });
            let mut out = Vec::new();
            for y in ys.into_iter().flatten() {
                let mut cols = vec![dst.unit().to_vec()];
                for _ in 1..n2 {
                    cols.push(dst.mul(cols.last().expect("nonempty"), &y));
                }
                out.push(Matrix::from_cols(k, cols)?.mul(&cinv)?);
            }
            return Ok(out);
        }
    }
    character_candidates(src, dst, exec)
}

/// Over an etale target: `F = P_A^-1 P_A'[s, :]` for every map `s` from the
/// characters of `A` to those of `A'`, over a field splitting both.
fn character_candidates(src: &ScAlgebra, dst: &ScAlgebra, exec: Exec) -> Result<Vec<Matrix>> {
    let k = dst.ring();
    let (n, n2) = (dst.dim(), src.dim());
    if !dst.is_etale()? {
        return Err(Error::DimensionCapExceeded(
            "brute-force search too large and the source algebra is not etale".into(),
        ));
    }
    let maps = (n2 as u64).checked_pow(n as u32).filter(|&t| t <= HOM_SEARCH_CAP).ok_or_else(|| {
        Error::DimensionCapExceeded(format!("{n2}^{n} character assignments"))
    })?;
    if k.is_rationals() {
        return complex_candidates(src, dst, maps as usize, exec);
    }
    if let crate::ring::RingKind::PrimeField(p) = k.kind() {
        let m = split_degree(dst)?.lcm(&split_degree(src)?);
        let l = Ring::galois_field(*p, m)?;
        let pa = Matrix::from_rows_with_cols(&l, characters(&Algebra::from_sc(dst.clone()), &l)?, n)?;
        let pb = Matrix::from_rows_with_cols(&l, characters(&Algebra::from_sc(src.clone()), &l)?, n2)?;
        if pa.rows() != n {
            return Err(Error::Shape("etale algebra did not split".into()));
        }
        let inv = pa.inverse()?;
        let found = exec::map_range(exec, maps as usize, |idx| -> Option<Matrix> {
            let sel = assignment(idx, n, n2);
            if sel.iter().any(|&s| s >= pb.rows()) {
                return None;
            }
            let f = inv.mul(&pb.select_rows(&sel)).ok()?;
            f.map_elems(k, |x| l.descend(x, k).ok_or(Error::NotDescended)).ok()
        });
        return Ok(found.into_iter().flatten().collect());
    }
    Err(Error::UnsupportedBase(format!("Hom sets over {k}")))
}

fn assignment(mut idx: usize, n: usize, base: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = idx % base;
            idx /= base;
            d
        })
        .collect()
}

/// Over `Q`: `F = P_A^-1 P_A'[s, :]` in complex arithmetic, rationalized.
fn complex_candidates(src: &ScAlgebra, dst: &ScAlgebra, maps: usize, exec: Exec) -> Result<Vec<Matrix>> {
    let q = dst.ring();
    let (n, n2) = (dst.dim(), src.dim());
    let bits = max_bits(src.constants().iter().chain(dst.constants()).filter_map(|x| x.as_rat()));
    let prec = 256.max(8 * bits);
    let (pa, pa_prec) = complex_characters(&Algebra::from_sc(dst.clone()), prec)?;
    let (pb, _) = complex_characters(&Algebra::from_sc(src.clone()), pa_prec)?;
    let inv = complex_inverse(&pa)?;
    let found = exec::map_range(exec, maps, |idx| -> Option<Matrix> {
        let sel = assignment(idx, n, n2);
        let mut data = Vec::with_capacity(n * n2);
        for row in &inv {
            for j in 0..n2 {
                let z = row
                    .iter()
                    .zip(&sel)
                    .fold(BigComplex::zero(pa_prec), |acc, (x, &s)| acc.add(&x.mul(&pb[s][j])));
                data.push(Elem::Rat(numeric::rationalize_real(&z)?));
            }
        }
        Matrix::new(q, n, n2, data).ok()
    });
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonicPoly;
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
    fn identity_and_zero() {
        let p = mu2();
        let homs = hom_set(&p, &p).unwrap();
        let id = Morphism::identity(&p);
        let z = Morphism::zero(&p, &p).unwrap();
        assert!(homs.contains(&id));
        assert!(homs.contains(&z));
        assert_ne!(id, z);
        assert_eq!(add_morphisms(&id, &z).unwrap(), id);
        assert_eq!(add_morphisms(&id, &id).unwrap(), z);
    }

    #[test]
    fn hom_from_constant_to_mu2() {
        let m = mu2();
        let c = m.dual();
        let homs = hom_set(&c, &m).unwrap();
        assert_eq!(homs.len(), 2);
        let z = Morphism::zero(&c, &m).unwrap();
        let g = homs.iter().find(|h| !h.is_zero()).unwrap();
        assert!(homs.contains(&z));
        assert_eq!(add_morphisms(g, g).unwrap(), z);
        assert_eq!(add_morphisms(g, &z).unwrap(), *g);
    }

    #[test]
    fn finite_field_paths_agree() {
        let f3 = Ring::prime_field(3).unwrap();
        let p = mu2().map_coefficients(&f3, |x| f3.from_rational(x.as_rat().unwrap())).unwrap();
        let brute = hom_set_with(&p, &p, Exec::Sequential).unwrap();
        assert_eq!(brute.len(), 2);
        let sc = &p.a().sc;
        let mut via_chars: Vec<Matrix> = character_candidates(sc, sc, Exec::Sequential)
            .unwrap()
            .into_iter()
            .filter(|f| Morphism::from_f(&p, &p, f.clone()).is_ok())
            .collect();
        via_chars.sort_by_key(|f| f.to_rows());
        let mut from_brute: Vec<Matrix> = brute.iter().map(|m| m.f().clone()).collect();
        from_brute.sort_by_key(|f| f.to_rows());
        assert_eq!(via_chars, from_brute);
    }
}
