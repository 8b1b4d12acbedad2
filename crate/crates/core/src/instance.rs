//! Instance files: a chart, a potential, the expected verdict and spot checks.

use serde::{Deserialize, Serialize};

use crate::charts::{Chart, ChartSpec};
use crate::courant::{self, Potential, Verdict};
use crate::error::{Error, Result};
use crate::poisson::bracket_unchecked;
use crate::superpoly::{format_poly, parse_expr, SuperPoly};

pub const INSTANCE_SCHEMA: &str = "precourant-instance/1";

/// Lagrangian graph data as written in instance files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphSpec {
    Bivector { expr: String },
    Twoform { expr: String },
    Coords { vanish: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftSpec {
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpotOp {
    /// `⟦a, b⟧`
    PreBracket,
    /// `{a, b}`
    Poisson,
    /// `⟨a, b⟩`
    Pairing,
    /// `ρ(a) f`
    Anchor,
    /// `J(a, b, c)`
    Jacobiator,
    /// `{Θ, Θ}`
    Master,
    /// `{Θ, f}`
    Differential,
    /// `{Θ, {Θ, f}}`
    DifferentialSquared,
}

impl SpotOp {
    pub fn arity(self) -> usize {
        match self {
            SpotOp::Master => 0,
            SpotOp::Differential | SpotOp::DifferentialSquared => 1,
            SpotOp::Jacobiator => 3,
            _ => 2,
        }
    }
}

/// One expected value. `expect` is either `"nonzero"` or an expression
/// the result must equal exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub label: String,
    pub op: SpotOp,
    #[serde(default)]
    pub args: Vec<String>,
    pub expect: String,
}

impl SpotCheck {
    pub fn new(label: &str, op: SpotOp, args: &[&str], expect: &str) -> Self {
        SpotCheck {
            label: label.into(),
            op,
            args: args.iter().map(|s| s.to_string()).collect(),
            expect: expect.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpotOutcome {
    pub label: String,
    pub passed: bool,
    pub value: String,
    pub expect: String,
}

/// Evaluate a spot check's operation.
pub fn evaluate(theta: &Potential, op: SpotOp, args: &[SuperPoly]) -> Result<SuperPoly> {
    if args.len() != op.arity() {
        return Err(Error::InvalidArgument(format!(
            "{op:?} takes {} arguments, got {}",
            op.arity(),
            args.len()
        )));
    }
    let chart = theta.chart();
    match op {
        SpotOp::PreBracket => courant::pre_bracket(theta, &args[0], &args[1]),
        SpotOp::Poisson => crate::poisson::bracket(&args[0], &args[1], chart),
        SpotOp::Pairing => courant::pairing(theta, &args[0], &args[1]),
        SpotOp::Anchor => courant::anchor_apply(theta, &args[0], &args[1]),
        SpotOp::Jacobiator => courant::jacobiator(theta, &args[0], &args[1], &args[2]),
        SpotOp::Master => Ok(theta.master()),
        SpotOp::Differential => Ok(bracket_unchecked(theta.theta(), &args[0], chart)),
        SpotOp::DifferentialSquared => {
            let d = bracket_unchecked(theta.theta(), &args[0], chart);
            Ok(bracket_unchecked(theta.theta(), &d, chart))
        }
    }
}

pub fn run_spot_check(theta: &Potential, check: &SpotCheck) -> Result<SpotOutcome> {
    let chart = theta.chart();
    let args = check
        .args
        .iter()
        .map(|a| parse_expr(a, chart))
        .collect::<Result<Vec<_>>>()?;
    let value = evaluate(theta, check.op, &args)?;
    let passed = if check.expect.trim() == "nonzero" {
        !value.is_zero()
    } else {
        value == parse_expr(&check.expect, chart)?
    };
    Ok(SpotOutcome {
        label: check.label.clone(),
        passed,
        value: format_poly(&value, chart),
        expect: check.expect.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub chart: ChartSpec,
    pub potential: String,
    pub expected: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<SpotCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dirac: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftSpec>,
}

/// A parsed instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub description: String,
    pub potential: Potential,
    pub expected: Verdict,
    pub checks: Vec<SpotCheck>,
    pub dirac: Option<GraphSpec>,
    pub lift: Option<usize>,
}

impl Instance {
    pub fn chart(&self) -> &Chart {
        self.potential.chart()
    }

    pub fn from_file(file: &InstanceFile) -> Result<Instance> {
        if file.schema != INSTANCE_SCHEMA {
            return Err(Error::InstanceFile(format!(
                "unsupported schema `{}`, expected `{INSTANCE_SCHEMA}`",
                file.schema
            )));
        }
        let chart = Chart::from_spec(&file.chart)?;
        let potential = Potential::parse(&chart, &file.potential)?;
        Ok(Instance {
            name: file.name.clone(),
            description: file.description.clone(),
            potential,
            expected: file.expected.parse()?,
            checks: file.checks.clone(),
            dirac: file.dirac.clone(),
            lift: file.lift.as_ref().map(|l| l.k),
        })
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            schema: INSTANCE_SCHEMA.into(),
            name: self.name.clone(),
            description: self.description.clone(),
            chart: self.chart().to_spec(),
            potential: format_poly(self.potential.theta(), self.chart()),
            expected: self.expected.to_string(),
            checks: self.checks.clone(),
            dirac: self.dirac.clone(),
            lift: self.lift.map(|k| LiftSpec { k }),
        }
    }

    pub fn parse_json(text: &str) -> Result<Instance> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| Error::InstanceFile(e.to_string()))?;
        Instance::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance files serialize")
    }
}
