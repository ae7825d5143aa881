//! Recognising a finite abelian group `H` from the table of values
//! `q(j)(p(i))` of its duality pairing with `H^* = Hom(H, Q/Z)`.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ring::FracCyclic;

/// Elementary divisors `d_1, .., d_r` with `d_r | .. | d_1`, all `> 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ElemDivSeq(Vec<u64>);

impl ElemDivSeq {
    pub fn new(d: Vec<u64>) -> Result<Self> {
        if d.iter().any(|&x| x < 2) || d.windows(2).any(|w| w[0] % w[1] != 0) {
            return Err(Error::Parse(format!("{d:?} is not a sequence of elementary divisors")));
        }
        Ok(ElemDivSeq(d))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|H_d|`.
    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.0.first().copied().unwrap_or(1)
    }

    /// All elements of `H_d`, first coordinate varying slowest.
    pub fn elements(&self) -> Vec<HdElement> {
        let mut out = vec![HdElement(Vec::new())];
        for &d in &self.0 {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..d).map(move |x| {
                        let mut c = e.0.clone();
                        c.push(x);
                        HdElement(c)
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for ElemDivSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Coordinates `(x_1, .., x_r)` with `0 <= x_i < d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HdElement(pub Vec<u64>);

impl HdElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for HdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `sum x_i xi_i / d_i` in `Q/Z`.
pub fn hd_pairing(d: &ElemDivSeq, x: &HdElement, xi: &HdElement) -> Result<FracCyclic> {
    if x.0.len() != d.len() || xi.0.len() != d.len() {
        return Err(Error::SeqMismatch);
    }
    let n = d.order();
    let mut k: u128 = 0;
    for ((a, b), di) in x.0.iter().zip(&xi.0).zip(&d.0) {
        k += (*a as u128) * (*b as u128) * (n / di) as u128;
    }
    Ok(FracCyclic::new((k % n as u128) as i64, n))
}

/// An `n x n` table with entries in `(1/n)Z/Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingTable {
    n: usize,
    t: Vec<Vec<FracCyclic>>,
}

impl PairingTable {
    pub fn new(t: Vec<Vec<FracCyclic>>) -> Result<Self> {
        let n = t.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        for (i, row) in t.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!("row {} has length {}", i + 1, row.len())));
            }
            if let Some(x) = row.iter().find(|x| n as u64 % x.den() != 0) {
                return Err(Error::MalformedTable(format!("entry {x} is not in (1/{n})Z/Z")));
            }
        }
        Ok(PairingTable { n, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> FracCyclic {
        self.t[i][j]
    }

    pub fn rows(&self) -> &[Vec<FracCyclic>] {
        &self.t
    }

    /// Copy with one entry replaced; the new entry must still lie in `(1/n)Z/Z`.
    pub fn with_entry(&self, i: usize, j: usize, v: FracCyclic) -> Result<PairingTable> {
        let mut t = self.t.clone();
        t[i][j] = v;
        PairingTable::new(t)
    }
}

/// Successful identification: `T[i][j] = hd_pairing(p[i], q[j])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupId {
    pub d: ElemDivSeq,
    pub p: Vec<HdElement>,
    pub q: Vec<HdElement>,
}

impl GroupId {
    /// Does this identification reproduce `t` entry for entry?
    pub fn reconstructs(&self, t: &PairingTable) -> bool {
        (0..t.n()).all(|i| (0..t.n()).all(|j| hd_pairing(&self.d, &self.p[i], &self.q[j]).ok() == Some(t.get(i, j))))
    }
}

/// Decides whether `t` describes an abelian group; `None` means "False".
pub fn identify_group(t: &PairingTable) -> Option<GroupId> {
    let n = t.n() as u64;
    let k: Vec<Vec<u64>> = t
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| x.scaled_to(n).expect("checked on construction")).collect())
        .collect();
    let rows: Vec<usize> = (0..t.n()).collect();
    let (d, p, q) = recurse(&k, n, &rows, &rows)?;
    let id = GroupId { d: ElemDivSeq(d), p, q };
    // soundness: never report a group the table does not describe
    id.reconstructs(t).then_some(id)
}

/// `k` holds numerators over the global modulus `big`; `rows`, `cols` select
/// the current submatrix. Returns `d` and coordinates indexed like `rows`, `cols`.
fn recurse(k: &[Vec<u64>], big: u64, rows: &[usize], cols: &[usize]) -> Option<(Vec<u64>, Vec<HdElement>, Vec<HdElement>)> {
    let n = rows.len();
    if n != cols.len() {
        return None;
    }
    if n == 1 {
        return Some((Vec::new(), vec![HdElement(Vec::new())], vec![HdElement(Vec::new())]));
    }
    let entry = |i: usize, j: usize| k[rows[i]][cols[j]];
    let den = |v: u64| big / v.gcd(&big);
    let d1 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| den(entry(i, j))).max()?;
    if d1 == 1 || n as u64 % d1 != 0 {
        return None;
    }
    let target = big / d1;
    let (i1, j1) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| entry(i, j) == target)?;

    let row_vec = |i: usize| -> Vec<u64> { (0..n).map(|j| entry(i, j)).collect() };
    let col_vec = |j: usize| -> Vec<u64> { (0..n).map(|i| entry(i, j)).collect() };
    let row_index = index_of(&(0..n).map(row_vec).collect::<Vec<_>>());
    let col_index = index_of(&(0..n).map(col_vec).collect::<Vec<_>>());
    let scale = |v: &[u64], x: u64| -> Vec<u64> { v.iter().map(|a| ((*a as u128 * x as u128) % big as u128) as u64).collect() };
    let plus = |a: &[u64], b: &[u64]| -> Vec<u64> { a.iter().zip(b).map(|(x, y)| (x + y) % big).collect() };

    let (r1, c1) = (row_vec(i1), col_vec(j1));
    let f1: Vec<usize> = (0..d1).map(|x| row_index.get(&scale(&r1, x)).copied()).collect::<Option<_>>()?;
    let g1: Vec<usize> = (0..d1).map(|x| col_index.get(&scale(&c1, x)).copied()).collect::<Option<_>>()?;

    let n2 = n / d1 as usize;
    let sub_rows: Vec<usize> = (0..n).filter(|&i| entry(i, j1) == 0).collect();
    let sub_cols: Vec<usize> = (0..n).filter(|&j| entry(i1, j) == 0).collect();
    if sub_rows.len() != n2 || sub_cols.len() != n2 {
        return None;
    }
    let modulus = big / n2 as u64;
    if sub_rows.iter().any(|&i| sub_cols.iter().any(|&j| entry(i, j) % modulus != 0)) {
        return None;
    }
    let global_rows: Vec<usize> = sub_rows.iter().map(|&i| rows[i]).collect();
    let global_cols: Vec<usize> = sub_cols.iter().map(|&j| cols[j]).collect();
    let (d_rest, p_rest, q_rest) = recurse(k, big, &global_rows, &global_cols)?;
    if let Some(&d2) = d_rest.first() {
        if d1 % d2 != 0 {
            return None;
        }
    }

    let assemble = |first: &[usize], rest_idx: &[usize], rest: &[HdElement], vecs: &dyn Fn(usize) -> Vec<u64>, index: &HashMap<Vec<u64>, usize>| -> Option<Vec<HdElement>> {
        let mut out: Vec<Option<HdElement>> = vec![None; n];
        for (x1, &a) in first.iter().enumerate() {
            for (&b, xr) in rest_idx.iter().zip(rest) {
                let v = plus(&vecs(a), &vecs(b));
                let &idx = index.get(&v)?;
                if out[idx].is_some() {
                    return None;
                }
                let mut c = vec![x1 as u64];
                c.extend(&xr.0);
                out[idx] = Some(HdElement(c));
            }
        }
        out.into_iter().collect()
    };
    let p = assemble(&f1, &sub_rows, &p_rest, &row_vec, &row_index)?;
    let q = assemble(&g1, &sub_cols, &q_rest, &col_vec, &col_index)?;
    let mut d = vec![d1];
    d.extend(d_rest);
    Some((d, p, q))
}

/// First index of each distinct vector.
fn index_of(vs: &[Vec<u64>]) -> HashMap<Vec<u64>, usize> {
    let mut m = HashMap::with_capacity(vs.len());
    for (i, v) in vs.iter().enumerate() {
        m.entry(v.clone()).or_insert(i);
    }
    m
}

/// Pairing table of `H_d` under independently shuffled enumerations.
pub fn random_group_table(d: &ElemDivSeq, seed: u64) -> PairingTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = d.elements();
    let mut q = d.elements();
    p.shuffle(&mut rng);
    q.shuffle(&mut rng);
    let t = p
        .iter()
        .map(|x| q.iter().map(|xi| hd_pairing(d, x, xi).expect("same sequence")).collect())
        .collect();
    PairingTable::new(t).expect("well formed")
}

/// Every elementary-divisor sequence with `|H_d| <= bound`.
pub fn sequences_up_to(bound: u64) -> Vec<ElemDivSeq> {
    fn extend(prefix: &mut Vec<u64>, order: u64, bound: u64, out: &mut Vec<ElemDivSeq>) {
        out.push(ElemDivSeq(prefix.clone()));
        let max = prefix.last().copied().unwrap_or(bound);
        for next in 2..=max {
            if order * next > bound {
                break;
            }
            if prefix.last().is_none_or(|&l| l % next == 0) {
                prefix.push(next);
                extend(prefix, order * next, bound, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, bound, &mut out);
    out
}
