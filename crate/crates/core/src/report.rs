//! The full battery of checks run on one instance, as a serializable report.

use serde::Serialize;

use crate::charts::{validate_chart, Chart};
use crate::complexes;
use crate::courant::{self, classify, Potential, Verdict};
use crate::dirac::{self, LagrangianGraph};
use crate::error::{Error, Result};
use crate::instance::{run_spot_check, Instance};
use crate::lifts::{self, TangentLift};
use crate::poisson::{bracket_unchecked, check_poisson_axioms};
use crate::sampling::{self, SampleConfig, SampleRng};
use crate::superpoly::{format_poly, SuperPoly};

pub const REPORT_SCHEMA: &str = "precourant-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A computed property with no expected value.
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub identity: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub instance: String,
    pub seed: u64,
    pub samples: usize,
    pub expected: Verdict,
    pub verdict: Verdict,
    pub master: String,
    pub records: Vec<Record>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub seed: u64,
    pub samples: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { seed: 0, samples: 25 }
    }
}

struct Recorder<'a> {
    theta: &'a Potential,
    records: Vec<Record>,
}

impl Recorder<'_> {
    fn show(&self, p: &SuperPoly) -> String {
        format_poly(p, self.theta.chart())
    }

    fn push(&mut self, identity: &str, status: Status, value: Option<String>, witness: Option<String>) {
        self.records.push(Record {
            identity: identity.into(),
            status,
            value,
            witness,
        });
    }

    fn pass(&mut self, identity: &str) {
        self.push(identity, Status::Pass, None, None);
    }

    fn fail(&mut self, identity: &str, witness: String) {
        self.push(identity, Status::Fail, None, Some(witness));
    }

    fn info(&mut self, identity: &str, value: String) {
        self.push(identity, Status::Info, Some(value), None);
    }

    /// Pass when `check` returns no witness; errors count as failures.
    fn check(&mut self, identity: &str, check: impl FnOnce(&Self) -> Result<Option<String>>) {
        match check(self) {
            Ok(None) => self.pass(identity),
            Ok(Some(w)) => self.fail(identity, w),
            Err(e) => self.fail(identity, e.to_string()),
        }
    }

    /// Run `residual` on `samples` random draws and fail on the first
    /// nonzero value, which lives on `target`.
    fn sampled(
        &mut self,
        identity: &str,
        rng: &mut SampleRng,
        samples: usize,
        target: &Chart,
        mut residual: impl FnMut(&mut SampleRng) -> Result<(Vec<SuperPoly>, SuperPoly)>,
    ) {
        self.check(identity, |me| {
            for _ in 0..samples {
                let (inputs, r) = residual(rng)?;
                if !r.is_zero() {
                    let shown: Vec<String> = inputs.iter().map(|p| me.show(p)).collect();
                    let r = format_poly(&r, target);
                    return Ok(Some(format!("inputs [{}], residual {r}", shown.join("; "))));
                }
            }
            Ok(None)
        });
    }
}

/// Run every check that applies to the instance. Only malformed spot-check
/// expressions are errors; everything else becomes a record.
pub fn check_instance(inst: &Instance, opts: &CheckOptions) -> Result<Report> {
    let theta = &inst.potential;
    let chart = theta.chart();
    let mut rec = Recorder {
        theta,
        records: Vec::new(),
    };

    let violations = validate_chart(chart);
    match violations.first() {
        None => rec.pass("chart invariants"),
        Some(v) => rec.fail("chart invariants", v.to_string()),
    }
    let axioms = check_poisson_axioms(chart, opts.samples, opts.seed);
    match &axioms.failure {
        None => rec.pass("Poisson bracket axioms"),
        Some(f) => rec.fail(
            "Poisson bracket axioms",
            format!("{} fails on [{}], residual {}", f.axiom, f.inputs.join("; "), f.residual),
        ),
    }

    let class = classify(theta);
    let weighted = chart.lift_axis().is_some();
    let label = if weighted { "weighted classification" } else { "classification" };
    if class.verdict == inst.expected {
        rec.push(label, Status::Pass, Some(class.verdict.to_string()), None);
    } else {
        let mut w = format!("expected {}, got {}", inst.expected, class.verdict);
        if let Some((b, v)) = &class.witness {
            w += &format!("; {{{{Θ,Θ}}, {}}} = {}", chart.generator(*b).name, rec.show(v));
        }
        rec.push(label, Status::Fail, Some(class.verdict.to_string()), Some(w));
    }
    rec.check("formal base function cross-check", |me| {
        let v = courant::master_on_formal_function(theta, "f");
        Ok(((class.verdict == Verdict::Nearly) == v.is_zero())
            .then(|| format!("{{{{Θ,Θ}}, f}} = {} disagrees with {}", me.show(&v), class.verdict)))
    });
    if chart.darboux().is_some() {
        rec.check("structure equations", |me| {
            let (first, second) = courant::structure_equations_residual(theta)?;
            let vanish = first.is_zero() && second.is_zero();
            Ok((vanish != (class.verdict != Verdict::Nearly)).then(|| {
                format!("residuals ({}, {}) disagree with {}", me.show(&first), me.show(&second), class.verdict)
            }))
        });
    }

    for check in &inst.checks {
        let outcome = match run_spot_check(theta, check) {
            Err(e @ (Error::Parse { .. } | Error::UnknownIdentifier(_) | Error::OddPower { .. } | Error::OddSquare { .. })) => {
                return Err(e)
            }
            other => other,
        };
        let identity = format!("spot value {}", check.label);
        match outcome {
            Ok(o) if o.passed => rec.push(&identity, Status::Pass, Some(o.value), None),
            Ok(o) => rec.push(
                &identity,
                Status::Fail,
                Some(o.value.clone()),
                Some(format!("expected {}, got {}", o.expect, o.value)),
            ),
            Err(e) => rec.fail(&identity, e.to_string()),
        }
    }

    derived_identities(&mut rec, opts);
    if !weighted {
        complex_checks(&mut rec, class.verdict, opts);
    }
    if let Some(spec) = &inst.dirac {
        match LagrangianGraph::from_spec(spec, chart) {
            Ok(graph) => dirac_checks(&mut rec, &graph),
            Err(e) => rec.fail("Dirac graph", e.to_string()),
        }
    }
    if weighted {
        weighted_checks(&mut rec, theta);
    }
    if let Some(k) = inst.lift {
        lift_checks(&mut rec, class.verdict, k, opts);
    }

    Ok(Report {
        schema: REPORT_SCHEMA,
        instance: inst.name.clone(),
        seed: opts.seed,
        samples: opts.samples,
        expected: inst.expected,
        verdict: class.verdict,
        master: rec.show(&class.master),
        records: rec.records,
    })
}

fn derived_identities(rec: &mut Recorder, opts: &CheckOptions) {
    let theta = rec.theta;
    let chart = theta.chart();
    let cfg = SampleConfig::default();
    let mut rng = sampling::rng(opts.seed);
    let n = opts.samples;
    let section = |rng: &mut SampleRng| sampling::random_section(rng, chart, &cfg);
    let function = |rng: &mut SampleRng| sampling::random_base_function(rng, chart, &cfg);
    rec.sampled("pre-bracket symmetry defect", &mut rng, n, chart, |r| {
        let (s, p) = (section(r), section(r));
        let v = courant::symmetry_defect(theta, &s, &p)?;
        Ok((vec![s, p], v))
    });
    rec.sampled("anchor defect", &mut rng, n, chart, |r| {
        let (s, p, f) = (section(r), section(r), function(r));
        let v = courant::anchor_defect(theta, &s, &p, &f)?;
        Ok((vec![s, p, f], v))
    });
    rec.sampled("Jacobiator from the master bracket", &mut rng, n, chart, |r| {
        let (s, p, l) = (section(r), section(r), section(r));
        let v = &courant::jacobiator(theta, &s, &p, &l)? - &courant::jacobiator_via_master(theta, &s, &p, &l)?;
        Ok((vec![s, p, l], v))
    });
    rec.sampled("pre-bracket Leibniz rule", &mut rng, n, chart, |r| {
        let (s, f, p) = (section(r), function(r), section(r));
        let v = courant::leibniz_residual(theta, &s, &f, &p)?;
        Ok((vec![s, f, p], v))
    });
    rec.sampled("pairing invariance", &mut rng, n, chart, |r| {
        let (s, p, l) = (section(r), section(r), section(r));
        let v = courant::invariance_residual(theta, &s, &p, &l)?;
        Ok((vec![s, p, l], v))
    });
}

fn complex_checks(rec: &mut Recorder, verdict: Verdict, opts: &CheckOptions) {
    let theta = rec.theta;
    let chart = theta.chart();
    let cfg = SampleConfig::default();
    let mut rng = sampling::rng(opts.seed ^ 0x5eed);
    rec.sampled("contraction commutator", &mut rng, opts.samples, chart, |r| {
        let f = sampling::random_base_function(r, chart, &cfg);
        let a = sampling::random_homogeneous(r, chart, 3, &cfg);
        let v = complexes::naive_commutator_defect(theta, &f, &a)?;
        Ok((vec![f, a], v))
    });
    if verdict == Verdict::Nearly {
        return;
    }
    rec.check("differential squares to zero on base coordinates", |me| {
        let t = theta.theta();
        Ok(chart.base_sector().into_iter().find_map(|b| {
            let x = SuperPoly::generator(chart, b);
            let qq = bracket_unchecked(t, &bracket_unchecked(t, &x, chart), chart);
            (!qq.is_zero()).then(|| format!("Q^2 {} = {}", chart.generator(b).name, me.show(&qq)))
        }))
    });
    rec.check("naive complex closed under Q", |me| {
        let t = theta.theta();
        for a in complexes::naive_elements(theta, 2) {
            let qa = bracket_unchecked(t, &a, chart);
            if !complexes::naive_membership(theta, &qa) {
                return Ok(Some(format!("Q({}) = {} leaves the complex", me.show(&a), me.show(&qa))));
            }
        }
        Ok(None)
    });
    match complexes::naive_square_witness(theta, 2) {
        None => rec.info("differential squares to zero on naive forms", "yes".into()),
        Some(a) => rec.info("differential squares to zero on naive forms", format!("no, on {}", rec.show(&a))),
    }
    rec.check("classical differential matches Q", |me| {
        let basis = complexes::section_basis(chart);
        let frame = complexes::SectionFrame::new(theta, &basis)?;
        for a in complexes::naive_elements(theta, 2) {
            let classical = frame.classical_differential(&a)?;
            let q = complexes::q_theta(theta, &a)?;
            if classical != q {
                return Ok(Some(format!(
                    "on {}: classical {}, super {}",
                    me.show(&a),
                    me.show(&classical),
                    me.show(&q)
                )));
            }
        }
        Ok(None)
    });
    match complexes::naive_cohomology_witness(theta) {
        Ok(None) => rec.info("naive cohomology condition", "holds".into()),
        Ok(Some(w)) => rec.info(
            "naive cohomology condition",
            format!(
                "fails: J({}, {}, {}) = {}",
                rec.show(&w.kappa),
                rec.show(&w.left),
                rec.show(&w.right),
                rec.show(&w.value)
            ),
        ),
        Err(e) => rec.fail("naive cohomology condition", e.to_string()),
    }
    if let Ok((h0, h1)) = complexes::cohomology_point(theta) {
        rec.info("point cohomology (H0, H1)", format!("({h0}, {h1})"));
    }
}

fn dirac_checks(rec: &mut Recorder, graph: &LagrangianGraph) {
    let theta = rec.theta;
    let chart = theta.chart();
    let residual = match dirac::tangency_residual(theta, graph) {
        Ok(r) => r,
        Err(e) => return rec.fail("Dirac tangency", e.to_string()),
    };
    let closed = match graph {
        LagrangianGraph::Bivector(l) => Some(dirac::bivector_closed_formula(theta, l)),
        LagrangianGraph::TwoForm(a) => Some(dirac::two_form_closed_formula(theta, a)),
        _ => None,
    };
    if let Some(expected) = closed {
        rec.check("Dirac closed formula", |me| {
            let expected = dirac::pullback(chart, graph, &expected?)?;
            Ok((expected != residual)
                .then(|| format!("residual {}, formula {}", me.show(&residual), me.show(&expected))))
        });
    }
    if !residual.is_zero() {
        rec.info("Dirac tangency", format!("not tangent, residual {}", rec.show(&residual)));
        return;
    }
    rec.info("Dirac tangency", "tangent".into());
    let induced = match dirac::induced_almost_lie(theta, graph) {
        Ok(a) => a,
        Err(e) => return rec.fail("induced almost Lie algebroid", e.to_string()),
    };
    let first_nonzero = |me: &Recorder, rs: Vec<SuperPoly>| rs.iter().find(|r| !r.is_zero()).map(|r| me.show(r));
    rec.check("induced bracket closes", |me| Ok(first_nonzero(me, induced.closure_residuals(theta)?)));
    rec.check("induced bracket antisymmetry", |me| Ok(first_nonzero(me, induced.symmetry_residuals(theta)?)));
    rec.check("induced anchor is a morphism", |me| Ok(first_nonzero(me, induced.anchor_morphism_residuals(chart))));
    rec.check("induced quasi-derivation rule", |me| {
        Ok(first_nonzero(me, induced.quasi_derivation_residuals(theta)?))
    });
}

fn weighted_checks(rec: &mut Recorder, theta: &Potential) {
    match lifts::weight_table_check(theta) {
        Ok(scan) if scan.passed() => rec.push("weight table", Status::Pass, Some(format!("{} checked", scan.checked)), None),
        Ok(scan) => rec.fail("weight table", scan.violations[0].clone()),
        Err(e) => rec.fail("weight table", e.to_string()),
    }
}

fn lift_checks(rec: &mut Recorder, verdict: Verdict, k: usize, opts: &CheckOptions) {
    let theta = rec.theta;
    let chart = theta.chart();
    let label = format!("order {k} tangent lift");
    let lift = match TangentLift::new(chart, k) {
        Ok(l) => l,
        Err(e) => return rec.fail(&label, e.to_string()),
    };
    let lifted = match lift.lift_potential(theta) {
        Ok(t) => t,
        Err(e) => return rec.fail(&label, e.to_string()),
    };
    rec.check(&format!("{label} keeps the verdict"), |_| {
        let v = lifts::weighted_classify(&lifted)?.verdict;
        Ok((v != verdict).then(|| format!("lifted verdict {v}, original {verdict}")))
    });
    let cfg = SampleConfig::default();
    let mut rng = sampling::rng(opts.seed ^ 0x11f7);
    rec.sampled(&format!("{label} commutes with the bracket"), &mut rng, opts.samples, lift.chart(), |r| {
        let p = sampling::random_homogeneous(r, chart, 3, &cfg);
        let q = sampling::random_homogeneous(r, chart, 3, &cfg);
        let v = lift.identity_residual(&p, &q)?;
        Ok((vec![p, q], v))
    });
    match lifts::weight_table_check(&lifted) {
        Ok(scan) if scan.passed() => rec.push(
            &format!("{label} weight table"),
            Status::Pass,
            Some(format!("{} checked", scan.checked)),
            None,
        ),
        Ok(scan) => rec.fail(&format!("{label} weight table"), scan.violations[0].clone()),
        Err(e) => rec.fail(&format!("{label} weight table"), e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn every_gallery_instance_passes() {
        for inst in gallery::build_all() {
            let report = check_instance(&inst, &CheckOptions::default()).unwrap();
            let failures: Vec<_> = report.failures().collect();
            assert!(failures.is_empty(), "{}: {:#?}", inst.name, failures);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let inst = gallery::build("vb_twisted").unwrap();
        let opts = CheckOptions { seed: 7, samples: 5 };
        let a = check_instance(&inst, &opts).unwrap().to_json();
        assert_eq!(a, check_instance(&inst, &opts).unwrap().to_json());
    }

    #[test]
    fn lifted_instances_round_trip_and_pass() {
        for name in ["cross3", "cross7", "vb_exact_twist"] {
            let inst = gallery::build(name).unwrap();
            let lifted = crate::lifts::lift_instance(&inst, 2).unwrap();
            let back = Instance::parse_json(&lifted.to_json()).unwrap();
            assert_eq!(back.potential.theta().len(), lifted.potential.theta().len());
            let report = check_instance(&back, &CheckOptions { seed: 1, samples: 5 }).unwrap();
            let failures: Vec<_> = report.failures().collect();
            assert!(failures.is_empty(), "{name}: {failures:#?}");
        }
    }
}
