//! Scenario files: a lattice with optional subgroup, points, pairing
//! context, tower and seed. A bare lattice or bare tower file is accepted
//! wherever a scenario is.

use std::io::Read;

use abvar_core::lattice::PolarizedLattice;
use abvar_core::monodromy::TowerOf2Covers;
use abvar_core::torsion::{FiniteSubgroup, PairingContext, TorsionPoint};
use num_traits::ToPrimitive;
use serde_json::Value;

use crate::error::CliError;
use crate::format;

const KEYS: [&str; 7] = ["lattice", "subgroup", "points", "context", "tower", "seed", "checks"];

#[derive(Clone, Debug)]
pub struct Scenario {
    pub lattice: Option<PolarizedLattice>,
    pub subgroup: Option<FiniteSubgroup>,
    pub points: Vec<TorsionPoint>,
    pub context: PairingContext,
    pub tower: Option<TowerOf2Covers>,
    pub seed: Option<u64>,
    pub checks: Vec<String>,
}

impl Scenario {
    pub fn empty() -> Self {
        Scenario {
            lattice: None,
            subgroup: None,
            points: Vec::new(),
            context: PairingContext::Kernel,
            tower: None,
            seed: None,
            checks: Vec::new(),
        }
    }

    pub fn from_value(v: &Value) -> Result<Self, CliError> {
        let obj = v.as_object().ok_or_else(|| CliError::input("Parse", "expected a JSON object", ""))?;
        let mut s = Scenario::empty();
        if obj.contains_key("form") {
            s.lattice = Some(format::parse_lattice(v, "")?);
            return Ok(s);
        }
        if obj.contains_key("branch") {
            s.tower = Some(format::parse_tower(v, "")?);
            return Ok(s);
        }
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::input("Parse", format!("unknown field {k:?}"), &format!("/{k}")));
        }
        if let Some(l) = obj.get("lattice") {
            s.lattice = Some(format::parse_lattice(l, "/lattice")?);
        }
        s.context = format::parse_context(obj.get("context"), "/context")?;
        let need = |key: &str| -> Result<&PolarizedLattice, CliError> {
            s.lattice.as_ref().ok_or_else(|| CliError::input("MissingField", format!("{key} requires a lattice"), &format!("/{key}")))
        };
        if let Some(g) = obj.get("subgroup") {
            let sub = format::parse_subgroup(need("subgroup")?, g, "/subgroup")?;
            s.subgroup = Some(sub);
        }
        if let Some(p) = obj.get("points") {
            let lat = need("points")?.clone();
            let arr = p.as_array().ok_or_else(|| CliError::input("Parse", "expected a list of points", "/points"))?;
            s.points = arr.iter().enumerate().map(|(i, x)| format::parse_point(&lat, x, &format!("/points/{i}"))).collect::<Result<_, _>>()?;
        }
        if let Some(t) = obj.get("tower") {
            s.tower = Some(format::parse_tower(t, "/tower")?);
        }
        if let Some(seed) = obj.get("seed") {
            let n = format::parse_integer(seed, "/seed")?;
            s.seed = Some(n.to_u64().ok_or_else(|| CliError::input("Parse", "seed must fit in u64", "/seed"))?);
        }
        if let Some(c) = obj.get("checks") {
            let arr = c.as_array().ok_or_else(|| CliError::input("Parse", "expected a list of check names", "/checks"))?;
            s.checks = arr
                .iter()
                .enumerate()
                .map(|(i, x)| x.as_str().map(String::from).ok_or_else(|| CliError::input("Parse", "check names are strings", &format!("/checks/{i}"))))
                .collect::<Result<_, _>>()?;
        }
        Ok(s)
    }

    pub fn lattice(&self) -> Result<&PolarizedLattice, CliError> {
        self.lattice.as_ref().ok_or_else(|| CliError::input("MissingField", "input has no lattice", "/lattice"))
    }

    pub fn subgroup(&self) -> Result<&FiniteSubgroup, CliError> {
        self.subgroup.as_ref().ok_or_else(|| CliError::input("MissingField", "input has no subgroup", "/subgroup"))
    }

    pub fn tower(&self) -> Result<&TowerOf2Covers, CliError> {
        self.tower.as_ref().ok_or_else(|| CliError::input("MissingField", "input has no tower", "/tower"))
    }
}

/// Reads a JSON file, or standard input for `-`.
pub fn read_json(path: &str) -> Result<Value, CliError> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::input("Io", e.to_string(), "-"))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::input("Io", format!("{path}: {e}"), ""))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::input("Parse", format!("invalid JSON: {e}"), &format!("line {} column {}", e.line(), e.column())))
}

pub fn load(path: &str) -> Result<Scenario, CliError> {
    Scenario::from_value(&read_json(path)?)
}
