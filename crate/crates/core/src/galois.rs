//! Galois action on points: automorphism and Frobenius matrices, reduction
//! modulo primes, and pairs rebuilt from explicit Galois data.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::identify::{ElemDivSeq, HdElement};
use crate::linalg::{is_character, Matrix};
use crate::pair::DualPair;
use crate::points::{duality_pairing, PointMap};
use crate::poly::{self, MonicPoly};
use crate::ring::{Elem, FracCyclic, Ring, RingKind};
use crate::validate::{splitting_field_finite, validate_via_splitting, StructureResult, Verdict};

/// An endomorphism of `H_d`; column `i` holds the image of `e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EndHdMatrix {
    pub seq: ElemDivSeq,
    pub entries: Vec<Vec<u64>>,
}

impl EndHdMatrix {
    pub fn new(seq: ElemDivSeq, entries: Vec<Vec<u64>>) -> Result<Self> {
        let d = seq.as_slice();
        let r = d.len();
        if entries.len() != r || entries.iter().any(|row| row.len() != r) {
            return Err(Error::Shape(format!("expected a {r}x{r} matrix")));
        }
        for i in 0..r {
            for j in 0..r {
                if entries[i][j] >= d[i] || (d[j] as u128 * entries[i][j] as u128) % d[i] as u128 != 0 {
                    return Err(Error::Shape(format!("entry ({}, {}) is not a homomorphism value", i + 1, j + 1)));
                }
            }
        }
        Ok(EndHdMatrix { seq, entries })
    }

    pub fn identity(seq: &ElemDivSeq) -> Self {
        let r = seq.len();
        let entries = (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect();
        EndHdMatrix { seq: seq.clone(), entries }
    }

    pub fn apply(&self, x: &HdElement) -> HdElement {
        let d = self.seq.as_slice();
        HdElement(
            (0..d.len())
                .map(|k| {
                    let s: u128 = (0..d.len()).map(|i| self.entries[k][i] as u128 * x.0[i] as u128).sum();
                    (s % d[k] as u128) as u64
                })
                .collect(),
        )
    }

    /// `self o other`.
    pub fn compose(&self, other: &EndHdMatrix) -> Result<EndHdMatrix> {
        if self.seq != other.seq {
            return Err(Error::SeqMismatch);
        }
        let cols: Vec<HdElement> = (0..self.seq.len()).map(|i| self.apply(&other.apply(&unit(&self.seq, i)))).collect();
        Ok(from_columns(&self.seq, &cols))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.seq)
    }

    /// Bijective on `H_d`.
    pub fn is_invertible(&self) -> bool {
        let mut seen: Vec<HdElement> = self.seq.elements().iter().map(|x| self.apply(x)).collect();
        seen.sort();
        seen.dedup();
        seen.len() as u64 == self.seq.order()
    }

    /// Smallest `k >= 1` with `self^k = 1`.
    pub fn order(&self) -> Option<u64> {
        let id = Self::identity(&self.seq);
        let mut acc = self.clone();
        for k in 1..=self.seq.order().max(1) * 64 {
            if acc == id {
                return Some(k);
            }
            acc = acc.compose(self).ok()?;
        }
        None
    }
}

impl fmt::Display for EndHdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}] over d = {}", rows.join(", "), self.seq)
    }
}

fn unit(seq: &ElemDivSeq, i: usize) -> HdElement {
    let mut c = vec![0; seq.len()];
    c[i] = 1;
    HdElement(c)
}

fn from_columns(seq: &ElemDivSeq, cols: &[HdElement]) -> EndHdMatrix {
    let r = seq.len();
    EndHdMatrix { seq: seq.clone(), entries: (0..r).map(|k| (0..r).map(|i| cols[i].0[k]).collect()).collect() }
}

/// Entry-wise reduction of a pair over `Q` with `p`-integral data.
pub fn reduce_mod_p(p: &DualPair, q: u64) -> Result<DualPair> {
    if !p.base().is_rationals() {
        return Err(Error::UnsupportedBase(format!("reduction from {}", p.base())));
    }
    let f = Ring::prime_field(q)?;
    let map = |x: &Elem| {
        f.from_rational(x.as_rat().expect("rational"))
            .map_err(|_| Error::BadReduction(format!("{} is not {q}-integral", p.base().format(x))))
    };
    let red = p.map_coefficients(&f, map).map_err(|e| match e {
        Error::NotInvertible(_) => Error::BadReduction(format!("pairing matrix is singular mod {q}")),
        other => other,
    })?;
    let report = red.verify_axioms();
    if !report.passed() {
        return Err(Error::BadReduction(format!("axioms fail mod {q}: {}", report.failures.join("; "))));
    }
    Ok(red)
}

/// Matrix of `sigma` on `G(L) = H_d`, found by locating `sigma P_i` among the
/// enumerated points and checked against `V(sigma) = M^t U`.
pub fn automorphism_matrix(s: &StructureResult, sigma: &dyn Fn(&Elem) -> Elem) -> Result<EndHdMatrix> {
    let d = &s.d;
    let r = d.len();
    let l = &s.ring;
    let mut cols = Vec::with_capacity(r);
    let mut images = Vec::with_capacity(r);
    for i in 0..r {
        let pi = &s.points[s.point_index(&s.generator(i)).ok_or(Error::SolveFailed("missing generator".into()))?];
        let coords: Vec<Elem> = pi.coords.iter().map(sigma).collect();
        if !is_character(&pi.pair.a().sc, l, &coords)? {
            return Err(Error::NotAPoint);
        }
        let j = s.points.iter().position(|x| x.coords == coords).ok_or(Error::NotAPoint)?;
        cols.push(s.point_bijection[j].clone());
        images.push(PointMap { coords, ..pi.clone() });
    }
    let m = from_columns(d, &cols);
    // V(sigma)[i][j] = lambda <sigma P_i, Q_j> = sum_k M[k][i] U[k][j]
    for (i, img) in images.iter().enumerate() {
        for j in 0..r {
            let qj = &s.dual_points[s.dual_index(&s.generator(j)).ok_or(Error::SolveFailed("missing generator".into()))?];
            let v = crate::ring::roots::dlog_mu(l, &s.zeta, &duality_pairing(img, qj)?, s.zeta_order)?;
            let rhs = (0..r).fold(FracCyclic::zero(), |acc, k| acc + s.u[k][j].mul_int(m.entries[k][i] as i64));
            if v != rhs {
                return Err(Error::SolveFailed(format!("V({}, {}) = {v}, M^t U gives {rhs}", i + 1, j + 1)));
            }
        }
    }
    if !m.is_invertible() {
        return Err(Error::SolveFailed("matrix is not invertible on H_d".into()));
    }
    Ok(m)
}

/// Frobenius at a good prime `q`.
#[derive(Clone, Debug)]
pub struct FrobeniusReport {
    pub prime: u64,
    pub d: ElemDivSeq,
    pub matrix: EndHdMatrix,
    /// Degree of the splitting field over `F_q`.
    pub field_degree: usize,
}

/// Only the conjugacy class in `Aut(H_d)` is intrinsic; the representative
/// depends on the canonical point enumeration.
pub const CONJUGACY_NOTE: &str = "matrix depends on the point enumeration; only its conjugacy class is intrinsic";

pub fn frobenius_matrix(p: &DualPair, q: u64) -> Result<FrobeniusReport> {
    let red = reduce_mod_p(p, q)?;
    let (l, zeta) = splitting_field_finite(&red)?;
    let s = match validate_via_splitting(&red, &l, &zeta)? {
        Verdict::Valid(s) => s,
        Verdict::Invalid(why) => return Err(Error::BadReduction(why)),
    };
    let frob = |x: &Elem| l.pow_u64(x, q);
    let matrix = automorphism_matrix(&s, &frob)?;
    Ok(FrobeniusReport { prime: q, d: s.d.clone(), matrix, field_degree: l.degree() })
}

/// Frobenius matrices for every prime in `primes`, in order; primes of bad
/// reduction come back as errors.
pub fn frobenius_range(p: &DualPair, primes: &[u64], exec: Exec) -> Vec<Result<FrobeniusReport>> {
    exec::map_range(exec, primes.len(), |i| frobenius_matrix(p, primes[i]))
}

/// Explicit data of a finite group scheme over `K` split by `L`.
#[derive(Clone, Debug)]
pub struct GaloisData {
    pub k: Ring,
    pub l: Ring,
    /// Matrix over `K` of a generator of `Gal(L/K)` acting on coordinate
    /// columns of `L`; ignored when `L = K`.
    pub sigma: Matrix,
    /// `psi(v)` and `psi'(v')`, injective.
    pub psi: Vec<Elem>,
    pub psi_dual: Vec<Elem>,
    /// `<v, v'>` in `L`.
    pub pairing: Vec<Vec<Elem>>,
    /// Addition tables, `law[i][j]` the index of `v_i + v_j`.
    pub law: Option<Vec<Vec<usize>>>,
    pub law_dual: Option<Vec<Vec<usize>>>,
}

impl GaloisData {
    pub fn conjugate(&self, x: &Elem) -> Elem {
        match (self.l.kind(), x) {
            (RingKind::Extension { .. }, Elem::Ext(c)) if self.l != self.k => Elem::Ext(self.sigma.mul_vec(c)),
            _ => x.clone(),
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.psi.len();
        if self.psi_dual.len() != n || self.pairing.len() != n || self.pairing.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("labels and pairing table disagree in size".into()));
        }
        for labels in [&self.psi, &self.psi_dual] {
            vandermonde(&self.l, labels)?;
        }
        let l = &self.l;
        for row in &self.pairing {
            for v in row {
                if !l.is_one(&l.pow_u64(v, n as u64)) {
                    return Err(Error::AxiomsFailed(format!("pairing value {} is not an n-th root of unity", l.display(v))));
                }
            }
        }
        // equivariance: sigma permutes labels and <sigma v, sigma v'> = sigma <v, v'>
        let perm = |vals: &[Elem]| -> Result<Vec<usize>> {
            vals.iter()
                .map(|v| {
                    let s = self.conjugate(v);
                    vals.iter().position(|w| *w == s).ok_or(Error::NotDescended)
                })
                .collect()
        };
        let (pv, pw) = (perm(&self.psi)?, perm(&self.psi_dual)?);
        for i in 0..n {
            for j in 0..n {
                if self.pairing[pv[i]][pw[j]] != self.conjugate(&self.pairing[i][j]) {
                    return Err(Error::NotDescended);
                }
            }
        }
        // bimultiplicativity along the given group laws
        if let Some(law) = &self.law {
            for a in 0..n {
                for b in 0..n {
                    for j in 0..n {
                        if self.pairing[law[a][b]][j] != l.mul(&self.pairing[a][j], &self.pairing[b][j]) {
                            return Err(Error::AxiomsFailed("pairing is not additive in the first argument".into()));
                        }
                    }
                }
            }
        }
        if let Some(law) = &self.law_dual {
            for a in 0..n {
                for b in 0..n {
                    for i in 0..n {
                        if self.pairing[i][law[a][b]] != l.mul(&self.pairing[i][a], &self.pairing[i][b]) {
                            return Err(Error::AxiomsFailed("pairing is not additive in the second argument".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn descend_all(l: &Ring, k: &Ring, xs: &[Elem]) -> Result<Vec<Elem>> {
    xs.iter().map(|x| l.descend(x, k).ok_or(Error::NotDescended)).collect()
}

fn vandermonde(l: &Ring, xs: &[Elem]) -> Result<Matrix> {
    let n = xs.len();
    let mut sorted = xs.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != n {
        return Err(Error::SingularVandermonde);
    }
    Ok(Matrix::from_fn(l, n, n, |i, j| l.pow_u64(&xs[i], j as u64)))
}

/// `A = K[x]/(prod (x - psi(v)))`, `B = K[y]/(prod (y - psi'(v')))`, and
/// `theta` interpolating the pairing: `theta(psi(v), psi'(v')) = <v, v'>`.
pub fn pair_from_galois_data(data: &GaloisData) -> Result<DualPair> {
    data.check()?;
    let (k, l) = (&data.k, &data.l);
    let f = MonicPoly::from_full(k, &descend_all(l, k, &poly::from_roots(l, &data.psi))?)?;
    let g = MonicPoly::from_full(k, &descend_all(l, k, &poly::from_roots(l, &data.psi_dual))?)?;
    let va = vandermonde(l, &data.psi)?;
    let vb = vandermonde(l, &data.psi_dual)?;
    let w = Matrix::from_rows(l, data.pairing.clone())?;
    let theta_l = va.inverse()?.mul(&w)?.mul(&vb.inverse_transpose()?)?;
    let theta = theta_l.map_elems(k, |x| l.descend(x, k).ok_or(Error::NotDescended))?;
    let pair = DualPair::from_theta(crate::linalg::Algebra::monogenic(f), crate::linalg::Algebra::monogenic(g), theta)?;
    let report = pair.verify_axioms();
    if !report.passed() {
        return Err(Error::AxiomsFailed(report.failures.join("; ")));
    }
    Ok(pair)
}
