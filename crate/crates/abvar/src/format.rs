//! JSON file formats.
//!
//! Lattice: `{"g": 4, "basis": [[1, "1/2", ...], ...], "form": [[0, 1, ...], ...]}`.
//! Rationals are JSON integers or `"p/q"` strings. Output is canonical:
//! keys sorted, fractions reduced, integers as numbers when they fit in `i64`.

use abvar_core::lattice::{validate, PolType, PolarizedLattice};
use abvar_core::matrix::{IntMatrix, Matrix, RatMatrix};
use abvar_core::monodromy::{BranchPoint, BranchedCover, Perm, TowerOf2Covers, DEFAULT_BLOCKS};
use abvar_core::torsion::{FiniteSubgroup, PairingContext, TorsionPoint};
use abvar_core::isogeny::Isogeny;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Value};

use crate::error::CliError;

fn at(loc: &str, msg: impl Into<String>) -> CliError {
    CliError::input("Parse", msg, loc)
}

pub fn parse_integer(v: &Value, loc: &str) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => Ok(BigInt::from(i)),
            (_, Some(u)) => Ok(BigInt::from(u)),
            _ => Err(at(loc, format!("expected an integer, got {n}"))),
        },
        Value::String(s) => s.parse::<BigInt>().map_err(|_| at(loc, format!("expected an integer, got {s:?}"))),
        other => Err(at(loc, format!("expected an integer, got {other}"))),
    }
}

pub fn parse_rational(v: &Value, loc: &str) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => {
            let (n, d) = match s.split_once('/') {
                Some((n, d)) => (n, d),
                None => (s.as_str(), "1"),
            };
            let n: BigInt = n.parse().map_err(|_| at(loc, format!("bad rational {s:?}")))?;
            let d: BigInt = d.parse().map_err(|_| at(loc, format!("bad rational {s:?}")))?;
            if d == BigInt::from(0) {
                return Err(at(loc, format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        _ => parse_integer(v, loc).map(BigRational::from_integer),
    }
}

fn parse_rows<T>(v: &Value, loc: &str, f: impl Fn(&Value, &str) -> Result<T, CliError>) -> Result<Vec<Vec<T>>, CliError> {
    let rows = v.as_array().ok_or_else(|| at(loc, "expected an array of rows"))?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let r = r.as_array().ok_or_else(|| at(&format!("{loc}/{i}"), "expected an array"))?;
            r.iter().enumerate().map(|(j, x)| f(x, &format!("{loc}/{i}/{j}"))).collect()
        })
        .collect()
}

fn square<T>(rows: Vec<Vec<T>>, n: usize, loc: &str) -> Result<Matrix<T>, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::input("DimensionMismatch", format!("expected a {n}x{n} matrix"), loc));
    }
    Ok(Matrix::from_rows(rows).expect("checked shape"))
}

pub fn integer_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(i) => json!(i),
        None => json!(x.to_string()),
    }
}

pub fn rational_value(x: &BigRational) -> Value {
    if x.denom().is_one() {
        integer_value(x.numer())
    } else {
        json!(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn fraction_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn int_matrix_value(m: &IntMatrix) -> Value {
    Value::Array(m.iter_rows().map(|r| Value::Array(r.iter().map(integer_value).collect())).collect())
}

pub fn rat_matrix_value(m: &RatMatrix) -> Value {
    Value::Array(m.iter_rows().map(|r| Value::Array(r.iter().map(rational_value).collect())).collect())
}

pub fn type_value(t: &PolType) -> Value {
    Value::Array(t.divisors().iter().map(integer_value).collect())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, loc: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| at(loc, format!("missing field {key:?}")))
}

pub fn parse_lattice(v: &Value, loc: &str) -> Result<PolarizedLattice, CliError> {
    let obj = v.as_object().ok_or_else(|| at(loc, "expected a lattice object"))?;
    let g = parse_integer(field(obj, "g", loc)?, &format!("{loc}/g"))?;
    let g = g.to_usize().filter(|&g| (1..=64).contains(&g)).ok_or_else(|| {
        CliError::input("InvalidGenus", format!("genus must be between 1 and 64, got {g}"), &format!("{loc}/g"))
    })?;
    let form_rows = parse_rows(field(obj, "form", loc)?, &format!("{loc}/form"), parse_integer)?;
    let n = form_rows.len();
    if n % 2 == 1 {
        return Err(CliError::input("OddDimension", format!("alternating form has odd size {n}"), &format!("{loc}/form")));
    }
    if n != 2 * g {
        return Err(CliError::input("DimensionMismatch", format!("form has size {n}, expected {}", 2 * g), &format!("{loc}/form")));
    }
    let form = square(form_rows, n, &format!("{loc}/form"))?;
    let basis = match obj.get("basis") {
        Some(b) => square(parse_rows(b, &format!("{loc}/basis"), parse_rational)?, n, &format!("{loc}/basis"))?,
        None => RatMatrix::identity(n),
    };
    let violations = validate(g, &basis, &form);
    if !violations.is_empty() {
        let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::input("InvalidLattice", msg.join("; "), loc));
    }
    PolarizedLattice::new(basis, form).map_err(|e| CliError::from_core(e, loc))
}

pub fn lattice_value(p: &PolarizedLattice) -> Value {
    json!({ "g": p.genus(), "basis": rat_matrix_value(p.basis()), "form": int_matrix_value(p.form()) })
}

pub fn parse_point(p: &PolarizedLattice, v: &Value, loc: &str) -> Result<TorsionPoint, CliError> {
    let arr = v.as_array().ok_or_else(|| at(loc, "expected an array of coordinates"))?;
    if arr.len() != p.dim() {
        return Err(CliError::input("DimensionMismatch", format!("point has {} coordinates, expected {}", arr.len(), p.dim()), loc));
    }
    let coords = arr.iter().enumerate().map(|(i, x)| parse_rational(x, &format!("{loc}/{i}"))).collect::<Result<Vec<_>, _>>()?;
    TorsionPoint::new(p, coords).map_err(|e| CliError::from_core(e, loc))
}

pub fn point_value(x: &TorsionPoint) -> Value {
    Value::Array(x.coords().iter().map(rational_value).collect())
}

/// A subgroup is a list of generator points, or `{"generators": [...]}`.
pub fn parse_subgroup(p: &PolarizedLattice, v: &Value, loc: &str) -> Result<FiniteSubgroup, CliError> {
    let (list, loc) = match v {
        Value::Object(o) => (field(o, "generators", loc)?, format!("{loc}/generators")),
        _ => (v, loc.to_string()),
    };
    let arr = list.as_array().ok_or_else(|| at(&loc, "expected a list of generators"))?;
    let gens = arr.iter().enumerate().map(|(i, x)| parse_point(p, x, &format!("{loc}/{i}"))).collect::<Result<Vec<_>, _>>()?;
    FiniteSubgroup::generated(p, gens).map_err(|e| CliError::from_core(e, &loc))
}

pub fn subgroup_value(s: &FiniteSubgroup) -> Value {
    json!({
        "order": integer_value(s.order()),
        "invariant_factors": Value::Array(s.invariant_factors().iter().map(integer_value).collect()),
        "generators": Value::Array(s.canonical_generators().iter().map(point_value).collect()),
    })
}

/// `"kernel"`, `{"torsion": m}` or `"torsion:m"`.
pub fn parse_context(v: Option<&Value>, loc: &str) -> Result<PairingContext, CliError> {
    let bad = || at(loc, "context must be \"kernel\", {\"torsion\": m} or \"torsion:m\"");
    match v {
        None => Ok(PairingContext::Kernel),
        Some(Value::String(s)) if s == "kernel" => Ok(PairingContext::Kernel),
        Some(Value::String(s)) => {
            let m = s.strip_prefix("torsion:").ok_or_else(bad)?;
            let m: u64 = m.parse().map_err(|_| bad())?;
            torsion_ctx(m, loc)
        }
        Some(Value::Object(o)) => {
            let m = parse_integer(o.get("torsion").ok_or_else(bad)?, &format!("{loc}/torsion"))?;
            torsion_ctx(m.to_u64().ok_or_else(bad)?, loc)
        }
        _ => Err(bad()),
    }
}

fn torsion_ctx(m: u64, loc: &str) -> Result<PairingContext, CliError> {
    if m == 0 {
        return Err(CliError::input("NotTorsion", "torsion order must be positive", loc));
    }
    Ok(PairingContext::Torsion(m))
}

pub fn context_value(ctx: PairingContext) -> Value {
    match ctx {
        PairingContext::Kernel => json!("kernel"),
        PairingContext::Torsion(m) => json!({ "torsion": m }),
    }
}

pub fn isogeny_value(f: &Isogeny) -> Value {
    json!({
        "matrix": rat_matrix_value(f.matrix()),
        "source": lattice_value(f.source()),
        "target": lattice_value(f.target()),
        "degree": integer_value(f.degree()),
    })
}

pub fn parse_isogeny(v: &Value, loc: &str) -> Result<Isogeny, CliError> {
    let obj = v.as_object().ok_or_else(|| at(loc, "expected an isogeny object"))?;
    let source = parse_lattice(field(obj, "source", loc)?, &format!("{loc}/source"))?;
    let target = parse_lattice(field(obj, "target", loc)?, &format!("{loc}/target"))?;
    let n = source.dim();
    let m = square(parse_rows(field(obj, "matrix", loc)?, &format!("{loc}/matrix"), parse_rational)?, n, &format!("{loc}/matrix"))?;
    Isogeny::new(&source, &target, m).map_err(|e| CliError::from_core(e, loc))
}

fn parse_branch(v: &Value, degree: usize, loc: &str) -> Result<Vec<BranchPoint>, CliError> {
    let arr = v.as_array().ok_or_else(|| at(loc, "expected a list of branch points"))?;
    arr.iter()
        .enumerate()
        .map(|(i, b)| {
            let l = format!("{loc}/{i}");
            let o = b.as_object().ok_or_else(|| at(&l, "expected {\"label\", \"perm\"}"))?;
            let label = field(o, "label", &l)?.as_str().ok_or_else(|| at(&format!("{l}/label"), "label must be a string"))?;
            let perm = field(o, "perm", &l)?.as_str().ok_or_else(|| at(&format!("{l}/perm"), "perm must be a string"))?;
            let perm = Perm::parse(perm, degree).map_err(|e| CliError::from_core(e, &format!("{l}/perm")))?;
            Ok(BranchPoint::new(label, perm))
        })
        .collect()
}

fn cover_degree(obj: &Map<String, Value>, loc: &str, default: usize) -> Result<usize, CliError> {
    match obj.get("degree") {
        None => Ok(default),
        Some(d) => parse_integer(d, &format!("{loc}/degree"))?
            .to_usize()
            .filter(|&d| (1..=64).contains(&d))
            .ok_or_else(|| CliError::input("InvalidMonodromy", "degree must be between 1 and 64", &format!("{loc}/degree"))),
    }
}

/// `{"degree": d, "branch": [{"label": .., "perm": ..}, ..]}`.
pub fn parse_cover(v: &Value, loc: &str) -> Result<BranchedCover, CliError> {
    let obj = v.as_object().ok_or_else(|| at(loc, "expected a cover object"))?;
    let degree = cover_degree(obj, loc, 4)?;
    let branch = parse_branch(field(obj, "branch", loc)?, degree, &format!("{loc}/branch"))?;
    BranchedCover::new(degree, branch).map_err(|e| CliError::from_core(e, loc))
}

/// Tower files: a degree-4 cover with optional `"blocks": [[1,2],[3,4]]`.
pub fn parse_tower(v: &Value, loc: &str) -> Result<TowerOf2Covers, CliError> {
    let obj = v.as_object().ok_or_else(|| at(loc, "expected a tower object"))?;
    if cover_degree(obj, loc, 4)? != 4 {
        return Err(CliError::input("InvalidMonodromy", "a tower of double covers has degree 4", &format!("{loc}/degree")));
    }
    let branch = parse_branch(field(obj, "branch", loc)?, 4, &format!("{loc}/branch"))?;
    let blocks = match obj.get("blocks") {
        None => DEFAULT_BLOCKS,
        Some(b) => {
            let rows = parse_rows(b, &format!("{loc}/blocks"), parse_integer)?;
            let ok = rows.len() == 2 && rows.iter().all(|r| r.len() == 2);
            let pts: Option<Vec<usize>> = rows.iter().flatten().map(|x| x.to_usize().filter(|&x| (1..=4).contains(&x))).collect();
            match (ok, pts) {
                (true, Some(p)) => [[p[0] - 1, p[1] - 1], [p[2] - 1, p[3] - 1]],
                _ => return Err(CliError::input("InvalidMonodromy", "blocks must be two pairs from 1..4", &format!("{loc}/blocks"))),
            }
        }
    };
    TowerOf2Covers::new(branch, blocks).map_err(|e| CliError::from_core(e, loc))
}

pub fn tower_value(t: &TowerOf2Covers) -> Value {
    let branch: Vec<Value> = t.branch().iter().map(|b| json!({ "label": b.label, "perm": b.perm.to_string() })).collect();
    let blocks: Vec<Value> = t.blocks().iter().map(|b| json!([b[0] + 1, b[1] + 1])).collect();
    json!({ "degree": 4, "branch": branch, "blocks": blocks })
}
