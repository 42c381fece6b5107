//! `demo-paper`: every checkable computation in one deterministic run.

use abvar_core::isogeny::{self, dual_polarized};
use abvar_core::lattice::{frobenius_normal_form, PolType, PolarizedLattice};
use abvar_core::lemmas::{self, QuotientSetup};
use abvar_core::matrix::IntMatrix;
use abvar_core::monodromy::{self, find_conjugator, reference_tower, random_generic_tower, tower_genera};
use abvar_core::rng::{case_seed, seeded};
use abvar_core::symplectic_f2::SymplecticSpaceF2;
use abvar_core::torsion::{self, FiniteSubgroup, PairingContext};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::commands::Outcome;
use crate::error::{CliError, EXIT_FAIL, EXIT_PASS};
use crate::par;
use crate::report::verdict;

#[derive(Clone, Debug)]
pub struct DemoOpts {
    pub seed: u64,
    pub count: usize,
    pub jobs: usize,
}

impl Default for DemoOpts {
    fn default() -> Self {
        DemoOpts { seed: crate::commands::DEFAULT_SEED, count: 100, jobs: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct Step {
    pub name: &'static str,
    pub pass: bool,
    pub summary: String,
    pub detail: Value,
}

fn step(name: &'static str, pass: bool, summary: String, detail: Value) -> Step {
    Step { name, pass, summary, detail }
}

fn ty(d: &[u64]) -> PolType {
    PolType::from_u64(d).expect("valid chain")
}

fn count_ok<T>(rs: &[Result<bool, T>]) -> usize {
    rs.iter().filter(|r| matches!(r, Ok(true))).count()
}

pub fn quotient_type(o: &DemoOpts) -> Step {
    let want = ty(&[1, 1, 2, 2]);
    let rs = par::map_indexed(o.count, o.jobs, |i| -> abvar_core::Result<bool> {
        let (x, h) = lemmas::random_instance(4, 2, case_seed(o.seed, i as u64))?;
        let (a, f) = isogeny::quotient_by_subgroup(&x, &h, PairingContext::Torsion(2))?;
        Ok(a.pol_type() == &want && f.degree() == &BigInt::from(4))
    });
    let ok = count_ok(&rs);
    step("quotient-type", ok == o.count, format!("{ok}/{} quotients X/H of type {want} and degree 4", o.count), json!({ "passed": ok, "total": o.count }))
}

pub fn kernel_sizes(o: &DemoOpts) -> Step {
    let run = || -> abvar_core::Result<(BigInt, BigInt, BigInt, Vec<BigInt>)> {
        let (x, h) = lemmas::random_instance(4, 2, o.seed)?;
        let s = QuotientSetup::new(&x, &h)?;
        let k = torsion::kernel_k(&s.a);
        let lam = isogeny::lambda_isogeny(&s.a)?;
        Ok((FiniteSubgroup::torsion(&x, 2).order().clone(), k.order().clone(), lam.degree().clone(), k.invariant_factors().to_vec()))
    };
    match run() {
        Ok((x2, k, deg, inv)) => {
            let pass = x2 == BigInt::from(256) && k == BigInt::from(16) && deg == k && inv == vec![BigInt::from(2); 4];
            let inv_s: Vec<String> = inv.iter().map(|d| d.to_string()).collect();
            step(
                "kernel-sizes",
                pass,
                format!("|X_2| = {x2}, |ker lambda_A| = {k}, invariant factors [{}]", inv_s.join(",")),
                json!({ "x2": x2.to_string(), "ker_lambda": k.to_string(), "invariant_factors": inv_s }),
            )
        }
        Err(e) => step("kernel-sizes", false, e.to_string(), Value::Null),
    }
}

fn lemma_step(name: &'static str, o: &DemoOpts, f: fn(&PolarizedLattice, &FiniteSubgroup) -> abvar_core::Result<lemmas::Report>) -> Step {
    let rs = par::map_indexed(o.count, o.jobs, |i| -> abvar_core::Result<bool> {
        let (x, h) = lemmas::random_instance(4, 2, case_seed(o.seed, i as u64))?;
        Ok(f(&x, &h)?.pass())
    });
    let ok = count_ok(&rs);
    step(name, ok == o.count, format!("{ok}/{} cases (g=4, |H|=4)", o.count), json!({ "passed": ok, "total": o.count }))
}

pub fn degree_ledger() -> Step {
    match lemmas::standard_ledger(4, 2) {
        Ok(l) => {
            let pass = l.claims().iter().all(|c| c.pass)
                && l.deg_f_d == BigInt::from(64)
                && l.deg_lambda == BigInt::from(16)
                && l.deg_f_c_dual == BigInt::from(4)
                && l.composite == BigInt::from(4096);
            let root = l.multiplication_root.as_ref().map_or("none".to_string(), |m| m.to_string());
            step(
                "degree-ledger",
                pass,
                format!("{} * {} * {} = {}, m with m^8 = {}: {root}", l.deg_f_d, l.deg_lambda, l.deg_f_c_dual, l.composite, l.composite),
                json!({
                    "deg_f_d": l.deg_f_d.to_string(),
                    "deg_lambda": l.deg_lambda.to_string(),
                    "deg_f_c_dual": l.deg_f_c_dual.to_string(),
                    "composite": l.composite.to_string(),
                    "composite_direct": l.composite_direct.as_ref().map(|d| d.to_string()),
                    "multiplication_root": root,
                }),
            )
        }
        Err(e) => step("degree-ledger", false, e.to_string(), Value::Null),
    }
}

/// Divisor chains `d_1 | … | d_g` with `d_g ≤ max`.
pub fn divisor_chains(g: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = (1..=max).map(|d| vec![d]).collect();
    for _ in 1..g {
        out = out
            .into_iter()
            .flat_map(|c| {
                let last = *c.last().unwrap();
                (1..=max / last).map(move |k| {
                    let mut c = c.clone();
                    c.push(last * k);
                    c
                })
            })
            .collect();
    }
    out
}

pub fn dual_types(o: &DemoOpts) -> Step {
    let a = ty(&[1, 2, 2, 2]).dual().map(|t| t == ty(&[1, 1, 1, 2])).unwrap_or(false);
    let b = ty(&[1, 1, 2, 2]).dual().map(|t| t == ty(&[1, 1, 2, 2])).unwrap_or(false);
    let types: Vec<PolType> = (1..=6).flat_map(|g| divisor_chains(g, 8)).map(|c| ty(&c)).filter(PolType::is_dualizable).collect();
    let rs = par::map_indexed(types.len(), o.jobs, |i| -> abvar_core::Result<bool> {
        let p = PolarizedLattice::standard(&types[i])?;
        let w = isogeny::double_dual_identification(&p)?;
        let d = dual_polarized(&p)?;
        Ok(w.is_polarized_isomorphism() && d.pol_type() == &types[i].dual()?)
    });
    let ok = count_ok(&rs);
    let pass = a && b && ok == types.len();
    step(
        "dual-types",
        pass,
        format!("(1,2,2,2) -> (1,1,1,2): {a}, (1,1,2,2) self-dual: {b}, double dual witnesses {ok}/{}", types.len()),
        json!({ "dual_1222": a, "self_dual_1122": b, "passed": ok, "total": types.len() }),
    )
}

pub fn bigonal_genera(o: &DemoOpts) -> Step {
    let check = |t: &monodromy::TowerOf2Covers| -> abvar_core::Result<bool> {
        let g = tower_genera(t)?;
        let b = monodromy::bigonal(t)?;
        let gb = tower_genera(&b)?;
        let back = monodromy::bigonal(&b)?;
        Ok((g.top, g.base, g.ramification) == (6, 2, 18)
            && (gb.top, gb.base, gb.ramification, gb.relative_ramification) == (6, 2, 18, 6)
            && find_conjugator(&back, t).is_some())
    };
    let reference = check(&reference_tower()).unwrap_or(false);
    let rs = par::map_indexed(o.count, o.jobs, |i| random_generic_tower(2, 6, case_seed(o.seed, i as u64)).and_then(|t| check(&t)));
    let ok = count_ok(&rs);
    step(
        "bigonal-genera",
        reference && ok == o.count,
        format!("reference tower: {reference}, random towers g(D)=g(Gamma)=6, g(Gamma0)=2, deg R=18, deg R'=6: {ok}/{}", o.count),
        json!({ "reference": reference, "passed": ok, "total": o.count }),
    )
}

pub fn prym_numerics() -> Step {
    let run = || -> abvar_core::Result<(usize, PolType, bool, bool, bool)> {
        let p = monodromy::prym_numerics(2, 6)?;
        let self_dual = p.pol_type.dual()? == p.pol_type;
        let tower = monodromy::prym_duality_check(&reference_tower())?.pass();
        let m = monodromy::moduli_dimensions(2, 6)?;
        Ok((p.dimension, p.pol_type, self_dual, tower, m.prym_locus_is_divisor))
    };
    match run() {
        Ok((dim, t, sd, tower, divisor)) => step(
            "prym-numerics",
            dim == 4 && t == ty(&[1, 1, 2, 2]) && sd && tower && divisor,
            format!("(g,r)=(2,6): dim {dim}, type {t}, self-dual {sd}, bigonal type dual {tower}, Prym locus a divisor {divisor}"),
            json!({ "dimension": dim, "type": t.to_string(), "self_dual": sd, "tower_dual": tower, "prym_locus_is_divisor": divisor }),
        ),
        Err(e) => step("prym-numerics", false, e.to_string(), Value::Null),
    }
}

pub fn isotropic_census(o: &DemoOpts) -> Step {
    let run = || -> abvar_core::Result<Step> {
        let x = PolarizedLattice::standard_principal(4)?;
        let space = SymplecticSpaceF2::from_torsion(&x)?;
        let planes = space.enumerate_isotropic_planes();
        let oracle = space.count_planes_by_pairs();
        let want = ty(&[1, 1, 2, 2]);
        let rs = par::map_indexed(planes.len(), o.jobs, |i| -> abvar_core::Result<bool> {
            let h = planes[i].to_subgroup(&x)?;
            let (a, _) = isogeny::quotient_by_subgroup(&x, &h, PairingContext::Torsion(2))?;
            Ok(a.pol_type() == &want)
        });
        let ok = count_ok(&rs);
        let n = planes.len();
        Ok(step(
            "isotropic-census",
            n as u64 == oracle && ok == n,
            format!("dim 8: {n} planes, pair-count oracle {oracle}, quotients of type {want}: {ok}/{n}"),
            json!({ "count": n, "oracle": oracle, "passed": ok }),
        ))
    };
    run().unwrap_or_else(|e| step("isotropic-census", false, e.to_string(), Value::Null))
}

pub fn random_alternating<R: Rng>(rng: &mut R) -> IntMatrix {
    let n = 2 * rng.gen_range(1..=6);
    loop {
        let mut e = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = BigInt::from(rng.gen_range(-6i64..=6));
                e[(j, i)] = -&v;
                e[(i, j)] = v;
            }
        }
        if !e.det().is_zero() {
            return e;
        }
    }
}

pub fn normal_form_check(e: &IntMatrix) -> bool {
    let Ok((t, u)) = frobenius_normal_form(e) else { return false };
    let m = u.matrix();
    let d = t.divisors();
    m.is_unimodular()
        && &(&m.transpose() * e) * m == t.standard_form()
        && d.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
        && e.det() == t.product() * t.product()
}

pub fn normal_forms(o: &DemoOpts) -> Step {
    let n = 500;
    let rs = par::map_indexed(n, o.jobs, |i| {
        let mut r = seeded(case_seed(o.seed ^ 0xf0f0, i as u64));
        normal_form_check(&random_alternating(&mut r))
    });
    let ok = rs.iter().filter(|&&b| b).count();
    step("normal-forms", ok == n, format!("{ok}/{n} random alternating matrices"), json!({ "passed": ok, "total": n }))
}

pub fn run_steps(o: &DemoOpts) -> Vec<Step> {
    vec![
        quotient_type(o),
        kernel_sizes(o),
        lemma_step("lemma-ker", o, lemmas::verify_lemma_ker),
        lemma_step("dual-quotient", o, lemmas::verify_dual_quotient_identity),
        lemma_step("pullback-lemmas", o, lemmas::verify_pullback_lemmas),
        degree_ledger(),
        dual_types(o),
        bigonal_genera(o),
        prym_numerics(),
        isotropic_census(o),
        normal_forms(o),
    ]
}

pub fn cmd_demo_paper(o: &DemoOpts) -> Result<Outcome, CliError> {
    if o.count == 0 {
        return Err(CliError::input("InvalidCount", "count must be positive", "--count"));
    }
    let steps = run_steps(o);
    let pass = steps.iter().all(|s| s.pass);
    let mut text = format!("demo-paper (seed {}, {} cases per sweep)\n", o.seed, o.count);
    for s in &steps {
        text.push_str(&format!("{} {}: {}\n", verdict(s.pass), s.name, s.summary));
    }
    text.push_str(&format!("result: {}\n", verdict(pass)));
    let value = json!({
        "seed": o.seed,
        "count": o.count,
        "pass": pass,
        "steps": steps.iter().map(|s| json!({ "name": s.name, "pass": s.pass, "summary": s.summary, "detail": s.detail })).collect::<Vec<_>>(),
    });
    Ok(Outcome { value, text: Some(text), exit: if pass { EXIT_PASS } else { EXIT_FAIL } })
}
