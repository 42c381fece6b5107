//! Subcommand implementations. Each returns an [`Outcome`]; printing and
//! exit codes are handled by the binary.

use abvar_core::isogeny;
use abvar_core::lattice::PolarizedLattice;
use abvar_core::lemmas::{self, QuotientSetup};
use abvar_core::monodromy::{self, find_conjugator, reference_tower, random_generic_tower, tower_genera, validate_tower, TowerOf2Covers};
use abvar_core::rng::case_seed;
use abvar_core::symplectic_f2::SymplecticSpaceF2;
use abvar_core::torsion::{self, FiniteSubgroup};
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_FAIL, EXIT_PASS};
use crate::format::{self, integer_value, type_value};
use crate::par;
use crate::report::{self, claim, Case};
use crate::scenario::{self, Scenario};

#[derive(Clone, Debug)]
pub struct Outcome {
    pub value: Value,
    /// Human-readable form; commands without one always print JSON.
    pub text: Option<String>,
    pub exit: i32,
}

impl Outcome {
    fn json(value: Value) -> Self {
        Outcome { value, text: None, exit: EXIT_PASS }
    }

    fn checked(value: Value, text: String, pass: bool) -> Self {
        Outcome { value, text: Some(text), exit: if pass { EXIT_PASS } else { EXIT_FAIL } }
    }
}

pub fn cmd_type(path: &str) -> Result<Outcome, CliError> {
    let s = scenario::load(path)?;
    Ok(Outcome::json(json!({ "type": type_value(s.lattice()?.pol_type()) })))
}

pub fn cmd_dual(path: &str) -> Result<Outcome, CliError> {
    let s = scenario::load(path)?;
    let d = isogeny::dual_polarized(s.lattice()?)?.canonicalized();
    Ok(Outcome::json(json!({ "type": type_value(d.pol_type()), "lattice": format::lattice_value(&d) })))
}

pub fn cmd_kernel(path: &str) -> Result<Outcome, CliError> {
    let s = scenario::load(path)?;
    let p = s.lattice()?;
    let k = torsion::kernel_k(p);
    let lam = isogeny::lambda_isogeny(p)?;
    Ok(Outcome::json(json!({ "kernel": format::subgroup_value(&k), "lambda_degree": integer_value(lam.degree()) })))
}

pub fn cmd_quotient(path: &str) -> Result<Outcome, CliError> {
    let s = scenario::load(path)?;
    let (a, f) = isogeny::quotient_by_subgroup(s.lattice()?, s.subgroup()?, s.context)?;
    Ok(Outcome::json(json!({
        "type": type_value(a.pol_type()),
        "degree": integer_value(f.degree()),
        "context": format::context_value(s.context),
        "lattice": format::lattice_value(&a),
        "matrix": format::rat_matrix_value(f.matrix()),
    })))
}

pub fn cmd_pairing(path: &str) -> Result<Outcome, CliError> {
    let s = scenario::load(path)?;
    let p = s.lattice()?;
    let [x, y] = s.points.as_slice() else {
        return Err(CliError::input("Parse", format!("pairing needs exactly two points, got {}", s.points.len()), "/points"));
    };
    let e = torsion::pairing(p, s.context, x, y).map_err(|e| CliError::from_core(e, "/points"))?;
    Ok(Outcome::json(json!({
        "context": format::context_value(s.context),
        "exponent": format::fraction_string(e.exponent()),
        "trivial": e.is_trivial(),
    })))
}

pub fn cmd_orth(path: &str) -> Result<Outcome, CliError> {
    let s = scenario::load(path)?;
    let (p, h) = (s.lattice()?, s.subgroup()?);
    let perp = torsion::orthogonal_complement(p, h, s.context).map_err(|e| CliError::from_core(e, "/subgroup"))?;
    let iso = torsion::is_totally_isotropic(p, h, s.context)?;
    Ok(Outcome::json(json!({
        "context": format::context_value(s.context),
        "complement": format::subgroup_value(&perp),
        "isotropic": iso,
    })))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    LemmaKer,
    DualQuotient,
    PullbackLemmas,
    DegreeLedger,
    PrymDuality,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::LemmaKer, Check::DualQuotient, Check::PullbackLemmas, Check::DegreeLedger, Check::PrymDuality];

    pub fn name(self) -> &'static str {
        match self {
            Check::LemmaKer => "lemma-ker",
            Check::DualQuotient => "dual-quotient",
            Check::PullbackLemmas => "pullback-lemmas",
            Check::DegreeLedger => "degree-ledger",
            Check::PrymDuality => "prym-duality",
        }
    }

    pub fn parse(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOpts {
    pub scenario: Option<String>,
    pub seed: Option<u64>,
    pub count: usize,
    pub genus: Option<usize>,
    pub rank: Option<usize>,
    pub branch_points: usize,
    pub jobs: usize,
}

impl Default for VerifyOpts {
    fn default() -> Self {
        VerifyOpts { scenario: None, seed: None, count: 10, genus: None, rank: None, branch_points: 6, jobs: 1 }
    }
}

pub const DEFAULT_SEED: u64 = 1;

fn lemma_report(check: Check, x: &PolarizedLattice, h: &FiniteSubgroup) -> Result<lemmas::Report, CliError> {
    Ok(match check {
        Check::LemmaKer => lemmas::verify_lemma_ker(x, h)?,
        Check::DualQuotient => lemmas::verify_dual_quotient_identity(x, h)?,
        _ => lemmas::verify_pullback_lemmas(x, h)?,
    })
}

fn default_rank(g: usize) -> usize {
    if g >= 2 {
        (g - 1).min(2)
    } else {
        1
    }
}

fn check_genus(g: usize, max: usize) -> Result<usize, CliError> {
    if g == 0 || g > max {
        return Err(CliError::input("InvalidGenus", format!("genus must be between 1 and {max}, got {g}"), "--genus"));
    }
    Ok(g)
}

fn ledger_case(l: &lemmas::DegreeLedger, label: String) -> Case {
    Case { label, seed: None, claims: l.claims() }
}

fn tower_case(t: &TowerOf2Covers, label: String, seed: Option<u64>) -> Result<Case, CliError> {
    let rep = validate_tower(t);
    if !rep.valid() {
        let issue = rep.issues.first().cloned().unwrap_or_default();
        let code = issue.split(':').next().unwrap_or("InvalidMonodromy").to_string();
        return Err(CliError::input(&code, rep.issues.join("; "), &label));
    }
    let d = monodromy::prym_duality_check(t)?;
    let g = tower_genera(t)?;
    let b = monodromy::bigonal(t)?;
    let gb = tower_genera(&b)?;
    let back = monodromy::bigonal(&b)?;
    Ok(Case {
        label,
        seed,
        claims: vec![
            claim("Prym dimensions agree", d.dimensions_agree, &[
                ("dim P(D,C)", d.original.dimension.to_string()),
                ("dim P(Gamma,Gamma0)", d.bigonal.dimension.to_string()),
            ]),
            claim("bigonal Prym type is the dual type", d.types_dual, &[
                ("type", d.original.pol_type.to_string()),
                ("dual type", d.dual_of_original.to_string()),
                ("bigonal type", d.bigonal.pol_type.to_string()),
            ]),
            claim("genera of D and Gamma agree", g.top == gb.top, &[
                ("g(D)", g.top.to_string()),
                ("g(C)", g.base.to_string()),
                ("g(Gamma)", gb.top.to_string()),
                ("g(Gamma0)", gb.base.to_string()),
            ]),
            claim("bigonal is an involution up to relabelling", find_conjugator(&back, t).is_some(), &[]),
        ],
    })
}

pub fn cmd_verify(check: Check, opts: &VerifyOpts) -> Result<Outcome, CliError> {
    let sc = match &opts.scenario {
        Some(p) => scenario::load(p)?,
        None => Scenario::empty(),
    };
    let seed = opts.seed.or(sc.seed).unwrap_or(DEFAULT_SEED);
    let cases: Vec<Case> = match check {
        Check::LemmaKer | Check::DualQuotient | Check::PullbackLemmas => {
            if let (Some(x), Some(h)) = (&sc.lattice, &sc.subgroup) {
                vec![Case { label: "scenario".into(), seed: None, claims: lemma_report(check, x, h)?.claims }]
            } else {
                let g = check_genus(opts.genus.unwrap_or(4), 8)?;
                let k = opts.rank.unwrap_or_else(|| default_rank(g));
                if k == 0 || k > g {
                    return Err(CliError::input("NoneExist", format!("no isotropic subgroup of order 2^{k} in genus {g}"), "--rank"));
                }
                let results = par::map_indexed(opts.count, opts.jobs, |i| -> Result<Case, CliError> {
                    let s = case_seed(seed, i as u64);
                    let (x, h) = lemmas::random_instance(g, k, s)?;
                    Ok(Case { label: format!("case {i} (g={g}, |H|=2^{k})"), seed: Some(s), claims: lemma_report(check, &x, &h)?.claims })
                });
                results.into_iter().collect::<Result<_, _>>()?
            }
        }
        Check::DegreeLedger => {
            if let (Some(x), Some(h)) = (&sc.lattice, &sc.subgroup) {
                let setup = QuotientSetup::new(x, h)?;
                let (y, h_d) = lemmas::shared_d_side(&setup.a)?;
                vec![ledger_case(&lemmas::degree_ledger(x, h, &y, &h_d)?, "scenario".into())]
            } else {
                let g = check_genus(opts.genus.unwrap_or(4), 8)?;
                let k = opts.rank.unwrap_or_else(|| default_rank(g));
                if k > g {
                    return Err(CliError::input("NoneExist", format!("no isotropic subgroup of order 2^{k} in genus {g}"), "--rank"));
                }
                vec![ledger_case(&lemmas::standard_ledger(g, k)?, format!("standard (g={g}, |H|=2^{k})"))]
            }
        }
        Check::PrymDuality => {
            if let Some(t) = &sc.tower {
                vec![tower_case(t, "scenario".into(), None)?]
            } else {
                let g = opts.genus.unwrap_or(2);
                if g > 16 {
                    return Err(CliError::input("InvalidGenus", "base genus must be at most 16", "--genus"));
                }
                let r = opts.branch_points;
                if r == 0 || r % 2 == 1 || r > 32 {
                    return Err(CliError::input("OddBranchCount", format!("branch point count must be even, between 2 and 32, got {r}"), "--branch-points"));
                }
                let mut cases = Vec::new();
                if g == 2 && r == 6 {
                    cases.push(tower_case(&reference_tower(), "reference tower".into(), None)?);
                }
                let rest = par::map_indexed(opts.count, opts.jobs, |i| -> Result<Case, CliError> {
                    let s = case_seed(seed, i as u64);
                    tower_case(&random_generic_tower(g, r, s)?, format!("tower {i} (g_C={g}, r={r})"), Some(s))
                });
                cases.extend(rest.into_iter().collect::<Result<Vec<_>, _>>()?);
                cases
            }
        }
    };
    let pass = cases.iter().all(Case::pass);
    let mut value = report::cases_value(check.name(), &cases);
    value["seed"] = json!(seed);
    Ok(Outcome::checked(value, report::render_cases(check.name(), &cases), pass))
}

/// Ordered pairs `(v, w)` spanning an isotropic plane, divided by the six
/// ordered bases of each plane.
pub fn pair_count_oracle(space: &SymplecticSpaceF2) -> u64 {
    space.count_planes_by_pairs()
}

pub fn cmd_enumerate_isotropic(dim: usize, oracle: bool, jobs: usize) -> Result<Outcome, CliError> {
    if dim % 2 == 1 || !(2..=12).contains(&dim) {
        return Err(CliError::input("InvalidDimension", format!("dimension must be even and between 2 and 12, got {dim}"), "--dim"));
    }
    let space = SymplecticSpaceF2::standard(dim)?;
    let parts = jobs.max(1);
    let mut planes: Vec<_> = par::map_indexed(parts, parts, |i| space.enumerate_part(i, parts)).into_iter().flatten().collect();
    planes.sort();
    let count = planes.len() as u64;
    let mut text = String::with_capacity(planes.len() * (2 * dim + 2) + 32);
    let mut list = Vec::with_capacity(planes.len());
    for p in &planes {
        let (a, b) = p.render(dim);
        text.push_str(&a);
        text.push(' ');
        text.push_str(&b);
        text.push('\n');
        list.push(json!([a, b]));
    }
    text.push_str(&format!("count {count}\n"));
    let mut value = json!({ "dim": dim, "count": count, "planes": list });
    let mut pass = true;
    if oracle {
        let o = pair_count_oracle(&space);
        pass = o == count;
        text.push_str(&format!("oracle {o}\nmatch {pass}\n"));
        value["oracle"] = json!(o);
        value["match"] = json!(pass);
    }
    Ok(Outcome::checked(value, text, pass))
}

pub fn cmd_genus(path: &str) -> Result<Outcome, CliError> {
    let v = scenario::read_json(path)?;
    let (v, loc) = match v.get("tower") {
        Some(t) => (t.clone(), "/tower"),
        None => (v, ""),
    };
    let cover = format::parse_cover(&v, loc)?;
    let genus = cover.genus()?;
    let mut value = json!({ "degree": cover.degree(), "ramification": cover.ramification_degree(), "genus": genus });
    if cover.degree() == 4 {
        let t = format::parse_tower(&v, loc)?;
        let rep = validate_tower(&t);
        let mut tv = json!({ "valid": rep.valid(), "generic": rep.generic, "issues": rep.issues });
        if rep.valid() {
            let g = tower_genera(&t)?;
            tv["top"] = json!(g.top);
            tv["base"] = json!(g.base);
            tv["ramification"] = json!(g.ramification);
            tv["relative_ramification"] = json!(g.relative_ramification);
            tv["phi_points"] = json!(rep.phi_points);
            tv["pi_points"] = json!(rep.pi_points);
        }
        value["tower"] = tv;
    }
    Ok(Outcome::json(value))
}

fn genera_value(t: &TowerOf2Covers) -> Result<Value, CliError> {
    let g = tower_genera(t)?;
    Ok(json!({ "top": g.top, "base": g.base, "ramification": g.ramification, "relative_ramification": g.relative_ramification }))
}

pub fn cmd_bigonal(path: &str) -> Result<Outcome, CliError> {
    let s = scenario::load(path)?;
    let t = s.tower()?;
    let rep = validate_tower(t);
    if !rep.valid() {
        let code = rep.issues.first().and_then(|i| i.split(':').next()).unwrap_or("InvalidMonodromy").to_string();
        return Err(CliError::input(&code, rep.issues.join("; "), "/branch"));
    }
    let b = monodromy::bigonal(t)?;
    let back = monodromy::bigonal(&b)?;
    let c = find_conjugator(&back, t);
    Ok(Outcome::json(json!({
        "bigonal": format::tower_value(&b),
        "genera": { "original": genera_value(t)?, "bigonal": genera_value(&b)? },
        "involution": c.map(|c| c.to_string()),
    })))
}
