use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use dualpair::exec::Exec;
use dualpair::galois::{frobenius_matrix, frobenius_range, reduce_mod_p, FrobeniusReport, CONJUGACY_NOTE};
use dualpair::gallery;
use dualpair::identify::{identify_group, random_group_table, ElemDivSeq, HdElement, PairingTable};
use dualpair::io;
use dualpair::pair::{add_morphisms, cokernel, direct_sum, hom_set, kernel, DualPair, Morphism, Side};
use dualpair::points::{add_points, duality_pairing, negate_point, points, PointMap};
use dualpair::ring::prime::is_prime;
use dualpair::ring::{parse_rational, Elem, Ring};
use dualpair::validate::{group_structure, splitting_field_finite, validate_numeric_q, validate_via_splitting, Verdict};
use dualpair::{Error, Result};

use crate::field::{parse_base, parse_field};
use crate::{Cli, Command, Format, GalleryCmd, SideArg};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Invalid = 1,
}

pub struct Output {
    pub status: Status,
    pub json: Value,
    pub plain: String,
}

impl Output {
    fn ok(json: Value, plain: String) -> Self {
        Output { status: Status::Ok, json, plain }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => io::to_canonical_string(&self.json),
            Format::Plain => {
                let mut s = self.plain.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
    };
    io::parse(&text)
}

fn load(path: &Path) -> Result<DualPair> {
    io::pair_from_json(&read_json(path)?)
}

/// Writes the pair to `out`, or returns it as the report when `out` is absent.
fn emit_pair(p: &DualPair, out: Option<&PathBuf>) -> Result<Output> {
    let text = io::to_canonical_string(&io::pair_to_json(p));
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let msg = format!("wrote rank {} pair over {} to {}", p.rank(), p.base(), path.display());
            Ok(Output::ok(json!({"written": path.display().to_string(), "rank": p.rank()}), msg))
        }
        None => Ok(Output::ok(io::pair_to_json(p), text)),
    }
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::A => Side::A,
        SideArg::B => Side::B,
    }
}

fn pick(pts: &[PointMap], idx: usize) -> Result<&PointMap> {
    if idx == 0 || idx > pts.len() {
        return Err(Error::Parse(format!("point index {idx} out of range 1..={}", pts.len())));
    }
    Ok(&pts[idx - 1])
}

fn point_json(x: &PointMap, idx: usize) -> Value {
    json!({"index": idx, "coords": io::vec_to_json(&x.target, &x.coords)})
}

fn hd_json(xs: &[HdElement]) -> Value {
    Value::Array(xs.iter().map(|x| json!(x.coords())).collect())
}

fn elem(r: &Ring, x: &Elem) -> String {
    r.display(x)
}

fn reduced(p: DualPair, modulus: Option<u64>) -> Result<DualPair> {
    match modulus {
        Some(q) => reduce_mod_p(&p, q),
        None => Ok(p),
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Validate { file, numeric, prec, modulus } => validate(&reduced(load(file)?, *modulus)?, *numeric, *prec),
        Command::Structure { file, modulus } => structure(&reduced(load(file)?, *modulus)?),
        Command::Points { file, over, side: s } => {
            let p = load(file)?;
            let f = parse_field(over, &p)?;
            let pts = points(&p, &f, side(*s))?;
            let lines: Vec<String> = pts.iter().enumerate().map(|(i, x)| format!("{}: {}", i + 1, x.display())).collect();
            let js: Vec<Value> = pts.iter().enumerate().map(|(i, x)| point_json(x, i + 1)).collect();
            Ok(Output::ok(json!({"field": f.to_string(), "count": pts.len(), "points": js}), lines.join("\n")))
        }
        Command::Add { file, points: which, over, side: s } => {
            let p = load(file)?;
            let f = parse_field(over, &p)?;
            let (i, j) = which
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("--points expects I,J, got {which:?}")))?;
            let pts = points(&p, &f, side(*s))?;
            let sum = add_points(pick(&pts, i)?, pick(&pts, j)?)?;
            let k = pts.iter().position(|x| x.coords == sum.coords).map(|k| k + 1).unwrap_or(0);
            Ok(Output::ok(point_json(&sum, k), format!("{i} + {j} = {k}: {}", sum.display())))
        }
        Command::Pairing { file, i, j, over } => {
            let p = load(file)?;
            let f = parse_field(over, &p)?;
            let xs = points(&p, &f, Side::A)?;
            let ys = points(&p, &f, Side::B)?;
            let v = duality_pairing(pick(&xs, *i)?, pick(&ys, *j)?)?;
            Ok(Output::ok(json!({"i": i, "j": j, "value": io::elem_to_json(&f, &v)}), elem(&f, &v)))
        }
        Command::Negate { file, i, over, side: s } => {
            let p = load(file)?;
            let f = parse_field(over, &p)?;
            let pts = points(&p, &f, side(*s))?;
            let neg = negate_point(pick(&pts, *i)?)?;
            let k = pts.iter().position(|x| x.coords == neg.coords).map(|k| k + 1).unwrap_or(0);
            Ok(Output::ok(point_json(&neg, k), format!("-{i} = {k}: {}", neg.display())))
        }
        Command::Hom { source, target } => {
            let (p, p2) = (load(source)?, load(target)?);
            let homs = hom_set(&p, &p2)?;
            let mut lines = vec![format!("{} morphisms", homs.len())];
            let mut js = Vec::new();
            for (k, m) in homs.iter().enumerate() {
                lines.push(format!("{}: f = {}", k + 1, matrix_plain(m.f().ring(), &m.f().to_rows())));
                js.push(json!({"f": io::matrix_to_json(m.f()), "g": io::matrix_to_json(m.g())}));
            }
            Ok(Output::ok(json!({"count": homs.len(), "morphisms": js}), lines.join("\n")))
        }
        Command::Sum { first, second, output } => emit_pair(&direct_sum(&load(first)?, &load(second)?)?.pair, output.as_ref()),
        Command::Kernel { file, mult, output } => emit_pair(&kernel(&multiplication(&load(file)?, *mult)?)?.0, output.as_ref()),
        Command::Cokernel { file, mult, output } => emit_pair(&cokernel(&multiplication(&load(file)?, *mult)?)?.0, output.as_ref()),
        Command::Dual { file, output } => emit_pair(&load(file)?.dual(), output.as_ref()),
        Command::Reduce { file, p, output } => emit_pair(&reduce_mod_p(&load(file)?, *p)?, output.as_ref()),
        Command::Frobenius { file, p, range } => frobenius(&load(file)?, *p, range.as_deref()),
        Command::Gallery { which, base, output } => {
            let r = parse_base(base)?;
            let p = match which {
                GalleryCmd::Trivial => gallery::trivial(&r),
                GalleryCmd::E2 { a } => {
                    if !r.is_rationals() {
                        return Err(Error::UnsupportedBase("e2 is defined over Q".into()));
                    }
                    gallery::e2_pair(&parse_rational(a)?)?
                }
                GalleryCmd::Ss2 => gallery::supersingular(),
                GalleryCmd::Mu { n } => gallery::mu_constant_pair(*n, &r)?,
                GalleryCmd::Constant { n } => gallery::constant_pair(*n, &r)?,
            };
            emit_pair(&p, output.as_ref())
        }
        Command::IdentifyTable { file, random } => {
            let t = match (file, random) {
                (Some(path), _) => io::table_from_json(&read_json(path)?)?,
                (None, Some(d)) => random_table(d, cli.seed)?,
                (None, None) => return Err(Error::Parse("need a table file or --random".into())),
            };
            identify(&t)
        }
    }
}

/// Multiplication by `k` on a pair, as a morphism.
fn multiplication(p: &DualPair, k: u64) -> Result<Morphism> {
    let id = Morphism::identity(p);
    let mut acc = Morphism::zero(p, p)?;
    for _ in 0..k {
        acc = add_morphisms(&acc, &id)?;
    }
    Ok(acc)
}

fn matrix_plain(r: &Ring, rows: &[Vec<Elem>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|row| format!("[{}]", row.iter().map(|x| elem(r, x)).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn invalid(method: &str, why: String) -> Output {
    Output {
        status: Status::Invalid,
        json: json!({"valid": false, "method": method, "reason": why}),
        plain: format!("invalid ({method}): {why}"),
    }
}

fn validate(p: &DualPair, numeric: bool, prec: Option<usize>) -> Result<Output> {
    if numeric || p.base().is_rationals() {
        if !p.base().is_rationals() {
            return Err(Error::UnsupportedBase(format!("numeric validation needs a pair over Q, not {}", p.base())));
        }
        return match validate_numeric_q(p, prec) {
            Ok(Verdict::Valid(s)) => Ok(Output::ok(
                json!({
                    "valid": true,
                    "method": "numeric",
                    "d": s.d.as_slice(),
                    "point_bijection": hd_json(&s.point_bijection),
                    "dual_bijection": hd_json(&s.dual_bijection),
                    "T": io::table_to_json(&s.table)["T"],
                    "precision": s.precision,
                    "max_error": s.max_error,
                }),
                format!("valid (numeric, {} bits): d = {}", s.precision, s.d),
            )),
            Ok(Verdict::Invalid(why)) => Ok(invalid("numeric", why)),
            Err(Error::NotEtale) => Ok(invalid("numeric", "A or B is not etale".into())),
            Err(e) => Err(e),
        };
    }
    let etale = p.a().sc.is_etale()? && p.b().sc.is_etale()?;
    if !etale {
        let rep = p.verify_axioms();
        if !rep.passed() {
            return Ok(invalid("axioms", rep.failures.join("; ")));
        }
        return Ok(Output::ok(json!({"valid": true, "method": "axioms"}), "valid (axioms; not etale, no point structure)".into()));
    }
    let (l, z) = splitting_field_finite(p)?;
    match validate_via_splitting(p, &l, &z) {
        Ok(Verdict::Valid(s)) => Ok(Output::ok(
            json!({
                "valid": true,
                "method": "splitting",
                "field": l.to_string(),
                "d": s.d.as_slice(),
                "point_bijection": hd_json(&s.point_bijection),
                "dual_bijection": hd_json(&s.dual_bijection),
                "T": io::table_to_json(&s.table)["T"],
            }),
            format!("valid (split over {l}): d = {}", s.d),
        )),
        Ok(Verdict::Invalid(why)) => Ok(invalid("splitting", why)),
        Err(Error::SplitCountMismatch { .. }) => Ok(invalid("splitting", "wrong number of points over the splitting field".into())),
        Err(e) => Err(e),
    }
}

fn structure(p: &DualPair) -> Result<Output> {
    let s = group_structure(p, None)?;
    let r = &s.ring;
    let mut lines = vec![format!("d = {} over {}", s.d, r)];
    let mut pts = Vec::new();
    for (k, (x, h)) in s.points.iter().zip(&s.point_bijection).enumerate() {
        lines.push(format!("{}: {} -> {}", k + 1, x.display(), h));
        pts.push(json!({"index": k + 1, "coords": io::vec_to_json(r, &x.coords), "element": h.coords()}));
    }
    Ok(Output::ok(
        json!({
            "d": s.d.as_slice(),
            "field": r.to_string(),
            "zeta": io::elem_to_json(r, &s.zeta),
            "zeta_order": s.zeta_order,
            "points": pts,
            "point_bijection": hd_json(&s.point_bijection),
            "dual_bijection": hd_json(&s.dual_bijection),
            "T": io::table_to_json(&s.table)["T"],
        }),
        lines.join("\n"),
    ))
}

fn frob_json(rep: &FrobeniusReport) -> Value {
    json!({
        "prime": rep.prime,
        "d": rep.d.as_slice(),
        "matrix": rep.matrix.entries,
        "moduli": rep.matrix.seq.as_slice(),
        "field_degree": rep.field_degree,
        "identity": rep.matrix.is_identity(),
    })
}

fn frob_plain(rep: &FrobeniusReport) -> String {
    format!("p = {}: d = {}, M = {}", rep.prime, rep.d, rep.matrix)
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::Parse(format!("--range expects P1..P2, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn frobenius(p: &DualPair, single: Option<u64>, range: Option<&str>) -> Result<Output> {
    if let Some(q) = single {
        let rep = frobenius_matrix(p, q)?;
        return Ok(Output::ok(
            json!({"reports": [frob_json(&rep)], "note": CONJUGACY_NOTE}),
            format!("{}\nnote: {CONJUGACY_NOTE}", frob_plain(&rep)),
        ));
    }
    let (lo, hi) = parse_range(range.expect("clap requires -p or --range"))?;
    let primes: Vec<u64> = (lo..=hi).filter(|&q| is_prime(q)).collect();
    let mut js = Vec::new();
    let mut lines = Vec::new();
    for (q, res) in primes.iter().zip(frobenius_range(p, &primes, Exec::Parallel)) {
        match res {
            Ok(rep) => {
                js.push(frob_json(&rep));
                lines.push(frob_plain(&rep));
            }
            Err(e) => {
                js.push(json!({"prime": q, "skipped": e.to_string()}));
                lines.push(format!("p = {q}: skipped ({e})"));
            }
        }
    }
    lines.push(format!("note: {CONJUGACY_NOTE}"));
    Ok(Output::ok(json!({"reports": js, "note": CONJUGACY_NOTE}), lines.join("\n")))
}

fn random_table(spec: &str, seed: u64) -> Result<PairingTable> {
    let d = spec
        .split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad sequence {spec:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(random_group_table(&ElemDivSeq::new(d)?, seed))
}

fn identify(t: &PairingTable) -> Result<Output> {
    match identify_group(t) {
        Some(id) => Ok(Output::ok(
            json!({
                "group": true,
                "d": id.d.as_slice(),
                "p": hd_json(&id.p),
                "q": hd_json(&id.q),
                "table": io::table_to_json(t),
            }),
            format!("d = {}", id.d),
        )),
        None => Ok(Output {
            status: Status::Invalid,
            json: json!({"group": false}),
            plain: "not the pairing table of a finite abelian group".into(),
        }),
    }
}
