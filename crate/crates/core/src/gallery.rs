//! Named example instances with their expected verdicts and spot values.

use serde::Serialize;

use crate::charts::{make_cotangent_antivb_chart, make_darboux_chart, Chart, ChartSpec, Metric};
use crate::courant::{classify, Potential, Verdict};
use crate::error::{Error, Result};
use crate::instance::{run_spot_check, GraphSpec, Instance, SpotCheck, SpotOp, SpotOutcome};
use crate::poisson::bracket_unchecked;
use crate::superpoly::{format_poly, int, parse_expr, ratio, Parity, SuperPoly};

/// The seven dimensional cross product as a list of positive triples.
pub const CROSS7_TRIPLES: [[usize; 3]; 6] = [[1, 2, 3], [1, 4, 5], [1, 7, 6], [2, 4, 6], [2, 5, 7], [3, 6, 5]];

/// The triple missing from [`CROSS7_TRIPLES`] in the usual octonionic table.
pub const CROSS7_EXTRA: [usize; 3] = [3, 4, 7];

pub const NAMES: &[&str] = &[
    "cross7",
    "cross7_full",
    "cross3",
    "so3_point",
    "cross7_point",
    "twisted_pencil_l0",
    "twisted_pencil_l1",
    "twisted_pencil_lm2",
    "twisted_closed",
    "bialgebroid",
    "skew_action",
    "almost_cotangent",
    "contravariant",
    "rflux",
    "quasi_poisson",
    "vb_untwisted",
    "vb_twisted",
    "vb_exact_twist",
];

/// Structure constants `[e_i, e_j] = c e_k` of a skew algebra, `i < j`,
/// 1-based.
pub type StructureConstants = Vec<(usize, usize, usize, i64)>;

/// Expand positive triples `(a, b, c)` into `[a,b] = c`, `[b,c] = a`,
/// `[c,a] = b`.
pub fn constants_from_triples(triples: &[[usize; 3]]) -> StructureConstants {
    let mut out = Vec::new();
    for &[a, b, c] in triples {
        for (i, j, k) in [(a, b, c), (b, c, a), (c, a, b)] {
            if i < j {
                out.push((i, j, k, 1));
            } else {
                out.push((j, i, k, -1));
            }
        }
    }
    out
}

/// `Σ c ξ^i ξ^j π_k` over the structure constants, so that the derived
/// bracket of `π_i, π_j` is `c π_k`.
pub fn skew_algebra_term(constants: &StructureConstants) -> String {
    let mut out = String::new();
    for (n, (i, j, k, c)) in constants.iter().enumerate() {
        let op = match (n, *c < 0) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        out += &format!("{op}{}*xi{i}*xi{j}*pi{k}", c.abs());
    }
    out
}

/// Cross product instance on the cotangent bundle of `ΠR^n` for any
/// table of triples.
pub fn cross_product(name: &str, n: usize, triples: &[[usize; 3]], expected: Verdict) -> Result<Instance> {
    let chart = make_cotangent_antivb_chart(0, n);
    let potential = Potential::parse(&chart, &skew_algebra_term(&constants_from_triples(triples)))?;
    let mut checks = vec![SpotCheck::new("pi1 x pi2", SpotOp::PreBracket, &["pi1", "pi2"], "pi3")];
    if n == 7 {
        checks.push(SpotCheck::new("pi3 x pi6", SpotOp::PreBracket, &["pi3", "pi6"], "pi5"));
        checks.push(SpotCheck::new("jacobiator", SpotOp::Jacobiator, &["pi1", "pi2", "pi4"], "nonzero"));
        checks.push(SpotCheck::new("master", SpotOp::Master, &[], "nonzero"));
    }
    let vanish = (1..=n).map(|i| format!("pi{i}")).collect();
    Ok(Instance {
        name: name.into(),
        description: format!("{n}-dimensional cross product as a skew algebra over a point"),
        potential,
        expected,
        checks,
        dirac: Some(GraphSpec::Coords { vanish }),
        lift: Some(2),
    })
}

/// The same triples as a cubic `Σ ξ^a ξ^b ξ^c` on a rank `n` Darboux chart
/// over a point with the identity metric, i.e. `R^n` with its cross
/// product and dot product.
pub fn quadratic_point(name: &str, n: usize, triples: &[[usize; 3]], expected: Verdict) -> Result<Instance> {
    let chart = make_darboux_chart(0, n, &Metric::identity(n))?;
    let theta = triples
        .iter()
        .map(|[a, b, c]| format!("xi{a}*xi{b}*xi{c}"))
        .collect::<Vec<_>>()
        .join(" + ");
    let mut checks = vec![SpotCheck::new("xi1 x xi2", SpotOp::PreBracket, &["xi1", "xi2"], "xi3")];
    if n == 7 {
        checks.push(SpotCheck::new("master", SpotOp::Master, &[], "nonzero"));
    }
    Ok(Instance {
        name: name.into(),
        description: format!("{n}-dimensional cross product with the dot product over a point"),
        potential: Potential::parse(&chart, &theta)?,
        expected,
        checks,
        dirac: None,
        lift: None,
    })
}

/// Join expressions with `+`, keeping a leading sign inside parentheses.
fn sum_of(parts: &[&str]) -> String {
    parts.iter().map(|p| format!("({p})")).collect::<Vec<_>>().join(" + ")
}

fn instance(name: &str, description: &str, chart: &Chart, theta: &str, expected: Verdict) -> Result<Instance> {
    Ok(Instance {
        name: name.into(),
        description: description.into(),
        potential: Potential::parse(chart, theta)?,
        expected,
        checks: Vec::new(),
        dirac: None,
        lift: None,
    })
}

/// `xi1 Q p1 + xi1 xi2 pi2`: a Lie algebroid on a rank 4 bundle over a line.
const PENCIL_THETA: &str = "xi1*p1 + xi1*xi2*pi2";
const PENCIL_TWIST: &str = "x1*xi2*xi3*xi4";

fn twisted_pencil(name: &str, lambda: i64) -> Result<Instance> {
    let chart = make_cotangent_antivb_chart(1, 4);
    let theta = &parse_expr(PENCIL_THETA, &chart)? + &parse_expr(PENCIL_TWIST, &chart)?.scale(&int(lambda));
    let expected = if lambda == 0 { Verdict::Courant } else { Verdict::PreCourant };
    let mut inst = instance(name, "Lie algebroid twisted by a non-closed 3-form", &chart, "0", expected)?;
    inst.potential = Potential::new(&chart, theta)?;
    inst.checks.push(SpotCheck::new("d^2 x1", SpotOp::DifferentialSquared, &["x1"], "0"));
    if lambda != 0 {
        inst.checks.push(SpotCheck::new("master", SpotOp::Master, &[], "nonzero"));
    }
    Ok(inst)
}

/// Dual skew algebra term `Σ c π_i π_j ξ^k`.
fn skew_coalgebra_term(constants: &StructureConstants) -> String {
    skew_algebra_term(constants).replace("xi", "XI").replace("pi", "xi").replace("XI", "pi")
}

/// Rank 4 over a line: `E` carries the Lie algebroid `ρ(e4) = d/dx` with
/// zero bracket and `E*` a skew algebra on the first three directions with
/// zero anchor.
const BIALGEBROID_THETA: &str = "xi4*p1";

fn bialgebroid() -> Result<Instance> {
    let chart = make_cotangent_antivb_chart(1, 4);
    let nu = skew_coalgebra_term(&skew_constants());
    Ok(Instance {
        name: "bialgebroid".into(),
        description: "almost Lie bialgebroid: an anchored bundle paired with a skew algebra on the dual".into(),
        potential: Potential::parse(&chart, &sum_of(&[BIALGEBROID_THETA, &nu]))?,
        expected: Verdict::PreCourant,
        checks: vec![
            SpotCheck::new("master", SpotOp::Master, &[], "nonzero"),
            SpotCheck::new("d^2 x1", SpotOp::DifferentialSquared, &["x1"], "0"),
        ],
        dirac: None,
        lift: None,
    })
}

/// `{θ, ν}` for the two halves of the bialgebroid instance.
pub fn bialgebroid_compatibility() -> Result<SuperPoly> {
    let chart = make_cotangent_antivb_chart(1, 4);
    let theta = parse_expr(BIALGEBROID_THETA, &chart)?;
    let nu = parse_expr(&skew_coalgebra_term(&skew_constants()), &chart)?;
    Ok(bracket_unchecked(&theta, &nu, &chart))
}

/// `[e1,e2] = e3`, `[e2,e3] = e2`: fails Jacobi.
fn skew_constants() -> StructureConstants {
    vec![(1, 2, 3, 1), (2, 3, 2, 1)]
}

fn skew_action() -> Result<Instance> {
    let chart = make_cotangent_antivb_chart(1, 3);
    let theta = format!("-x1*xi1*p1 + {}", skew_algebra_term(&skew_constants()));
    let mut inst = instance(
        "skew_action",
        "action of a skew algebra on a line by x d/dx",
        &chart,
        &theta,
        Verdict::PreCourant,
    )?;
    inst.checks = vec![
        SpotCheck::new("action", SpotOp::Anchor, &["pi1", "x1"], "x1"),
        SpotCheck::new("bracket", SpotOp::PreBracket, &["pi1", "pi2"], "pi3"),
        SpotCheck::new("d^2 x1", SpotOp::DifferentialSquared, &["x1"], "0"),
    ];
    Ok(inst)
}

fn almost_cotangent() -> Result<Instance> {
    let chart = make_cotangent_antivb_chart(1, 3);
    let theta = format!("xi1*p1 + {}", skew_algebra_term(&skew_constants()));
    let mut inst = instance(
        "almost_cotangent",
        "cotangent bundle of an almost Lie algebroid",
        &chart,
        &theta,
        Verdict::PreCourant,
    )?;
    inst.checks = vec![SpotCheck::new("d^2 x1", SpotOp::DifferentialSquared, &["x1"], "0")];
    inst.dirac = Some(GraphSpec::Coords {
        vanish: ["p1", "pi1", "pi2", "pi3"].map(String::from).to_vec(),
    });
    inst.lift = Some(2);
    Ok(inst)
}

/// Contravariant potential `Λ^ab x*_b p_a - 1/2 π^c ∂_c Λ^ab x*_b x*_a` for
/// an antisymmetric matrix of base functions, upper triangle given.
pub fn contravariant_theta(chart: &Chart, n: usize, upper: &dyn Fn(usize, usize) -> SuperPoly) -> Result<SuperPoly> {
    let lambda = |a: usize, b: usize| -> SuperPoly {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Less => upper(a, b),
            Greater => -&upper(b, a),
            Equal => SuperPoly::zero(chart),
        }
    };
    let var = |s: String| SuperPoly::var(chart, &s);
    let mut theta = SuperPoly::zero(chart);
    for a in 1..=n {
        for b in 1..=n {
            let l = lambda(a, b);
            if l.is_zero() {
                continue;
            }
            theta = &theta + &(&(&l * &var(format!("xi{b}"))?) * &var(format!("p{a}"))?);
            for c in 1..=n {
                let dl = l.partial_by_name(chart, &format!("x{c}"))?;
                let term = &(&(&var(format!("pi{c}"))? * &dl) * &var(format!("xi{b}"))?) * &var(format!("xi{a}"))?;
                theta = &theta - &term.scale(&ratio(1, 2));
            }
        }
    }
    Ok(theta)
}

fn contravariant(name: &str, with_flux: bool) -> Result<Instance> {
    let chart = make_cotangent_antivb_chart(4, 4);
    let x3 = SuperPoly::var(&chart, "x3")?;
    let theta = contravariant_theta(&chart, 4, &|a, b| {
        if (a, b) == (1, 2) {
            x3.clone()
        } else {
            SuperPoly::zero(&chart)
        }
    })?;
    let (theta, expected, description) = if with_flux {
        let flux = parse_expr("x2*xi4*xi3*xi2", &chart)?;
        (&theta + &flux, Verdict::PreCourant, "Poisson structure x3 d1^d2 with an incompatible 3-vector flux")
    } else {
        (theta, Verdict::Courant, "contravariant Courant algebroid of the Poisson structure x3 d1^d2")
    };
    let mut inst = Instance {
        name: name.into(),
        description: description.into(),
        potential: Potential::new(&chart, theta)?,
        expected,
        checks: vec![SpotCheck::new("d^2 f", SpotOp::DifferentialSquared, &["f()"], "0")],
        dirac: None,
        lift: None,
    };
    if with_flux {
        inst.checks.push(SpotCheck::new("master", SpotOp::Master, &[], "nonzero"));
    }
    Ok(inst)
}

fn formal_bivector(chart: &Chart, a: usize, b: usize) -> SuperPoly {
    SuperPoly::function(chart, &format!("L{a}{b}"))
}

/// The obstruction `1/2 (Λ^bc ∂_c Λ^ad - Λ^dc ∂_c Λ^ab - Λ^ac ∂_c Λ^bd)
/// x*_d x*_b ∂_a f` assembled term by term for a formal antisymmetric `Λ`.
pub fn quasi_poisson_obstruction(chart: &Chart, n: usize, f: &SuperPoly) -> Result<SuperPoly> {
    let lambda = |a: usize, b: usize| -> SuperPoly {
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Less => formal_bivector(chart, a, b),
            Greater => -&formal_bivector(chart, b, a),
            Equal => SuperPoly::zero(chart),
        }
    };
    let x = |c: usize| format!("x{c}");
    let d = |p: &SuperPoly, c: usize| p.partial_by_name(chart, &x(c));
    let mut out = SuperPoly::zero(chart);
    for a in 1..=n {
        for b in 1..=n {
            for dd in 1..=n {
                let mut coeff = SuperPoly::zero(chart);
                for c in 1..=n {
                    coeff = &coeff + &(&lambda(b, c) * &d(&lambda(a, dd), c)?);
                    coeff = &coeff - &(&lambda(dd, c) * &d(&lambda(a, b), c)?);
                    coeff = &coeff - &(&lambda(a, c) * &d(&lambda(b, dd), c)?);
                }
                let odd = &SuperPoly::var(chart, &format!("xi{dd}"))? * &SuperPoly::var(chart, &format!("xi{b}"))?;
                out = &out + &(&(&coeff * &odd) * &d(f, a)?);
            }
        }
    }
    Ok(out.scale(&ratio(1, 2)))
}

fn quasi_poisson() -> Result<Instance> {
    let chart = make_cotangent_antivb_chart(3, 3);
    let theta = contravariant_theta(&chart, 3, &|a, b| formal_bivector(&chart, a, b))?;
    let f = parse_expr("f()", &chart)?;
    let obstruction = quasi_poisson_obstruction(&chart, 3, &f)?;
    Ok(Instance {
        name: "quasi_poisson".into(),
        description: "contravariant potential of a formal bivector: not pre-Courant".into(),
        potential: Potential::new(&chart, theta)?,
        expected: Verdict::Nearly,
        checks: vec![SpotCheck::new(
            "obstruction",
            SpotOp::DifferentialSquared,
            &["f()"],
            &format_poly(&obstruction, &chart),
        )],
        dirac: None,
        lift: None,
    })
}

/// Bi-graded chart on `T*ΠTE*` for a rank one bundle over a 3-dimensional
/// base: `x (0,0)`, `q (1,0)`, `dx (0,1)`, `dq (1,1)` and their momenta
/// `p (1,2)`, `y (0,2)`, `pi (1,1)`, `chi (0,1)`. The first axis is the
/// vector bundle weight.
pub fn vb_chart() -> Chart {
    vb_double_chart(3)
}

/// The same double for a line bundle over a point.
pub fn vb_point_chart() -> Chart {
    vb_double_chart(0)
}

/// `T*ΠTE*` for a line bundle `E` over a `base`-dimensional space.
pub fn vb_double_chart(base: usize) -> Chart {
    let mut spec = ChartSpec::new(2).symplectic_axes(vec![1]).n_manifold(true);
    for a in 1..=base {
        spec = spec.generator(&format!("x{a}"), Parity::Even, &[0, 0]);
    }
    spec = spec.generator("q1", Parity::Even, &[1, 0]);
    for a in 1..=base {
        spec = spec.generator(&format!("dx{a}"), Parity::Odd, &[0, 1]);
    }
    spec = spec.generator("dq1", Parity::Odd, &[1, 1]);
    for a in 1..=base {
        spec = spec.generator(&format!("p{a}"), Parity::Even, &[1, 2]);
    }
    spec = spec.generator("y1", Parity::Even, &[0, 2]);
    for a in 1..=base {
        spec = spec.generator(&format!("pi{a}"), Parity::Odd, &[1, 1]);
    }
    spec = spec.generator("chi1", Parity::Odd, &[0, 1]);
    for a in 1..=base {
        spec = spec
            .pair(&format!("p{a}"), &format!("x{a}"), "1")
            .cotangent(&format!("x{a}"), &format!("p{a}"));
    }
    spec = spec.pair("y1", "q1", "1").cotangent("q1", "y1");
    for a in 1..=base {
        spec = spec
            .pair(&format!("pi{a}"), &format!("dx{a}"), "1")
            .cotangent(&format!("dx{a}"), &format!("pi{a}"));
    }
    spec = spec.pair("chi1", "dq1", "1").cotangent("dq1", "chi1");
    Chart::from_spec(&spec).expect("vector bundle chart data is well formed")
}

/// De Rham potential `dx^a p_a + dq y`.
pub const VB_THETA: &str = "dx1*p1 + dx2*p2 + dx3*p3 + dq1*y1";
/// Linear 3-form `x1 dx2 dx3 dq`, not closed.
pub const VB_TWIST: &str = "x1*dx2*dx3*dq1";
/// Linear 2-form `x1 dx2 dq` and minus its differential.
pub const VB_TWO_FORM: &str = "x1*dx2*dq1";
pub const VB_EXACT_TWIST: &str = "-dx1*dx2*dq1";

fn vb(name: &str) -> Result<Instance> {
    let chart = vb_chart();
    let (theta, expected, description, dirac) = match name {
        "vb_untwisted" => (
            VB_THETA.to_string(),
            Verdict::Courant,
            "de Rham potential on the double of a vector bundle",
            GraphSpec::Coords {
                vanish: ["p1", "p2", "p3", "y1", "pi1", "pi2", "pi3", "chi1"].map(String::from).to_vec(),
            },
        ),
        "vb_twisted" => (
            sum_of(&[VB_THETA, VB_TWIST]),
            Verdict::PreCourant,
            "de Rham potential twisted by a non-closed linear 3-form",
            GraphSpec::Twoform { expr: VB_TWO_FORM.into() },
        ),
        _ => (
            sum_of(&[VB_THETA, VB_EXACT_TWIST]),
            Verdict::Courant,
            "de Rham potential twisted by an exact linear 3-form",
            GraphSpec::Twoform { expr: VB_TWO_FORM.into() },
        ),
    };
    let mut inst = instance(name, description, &chart, &theta, expected)?;
    inst.dirac = Some(dirac);
    inst.checks.push(SpotCheck::new("d^2 x1", SpotOp::DifferentialSquared, &["x1"], "0"));
    if name == "vb_twisted" {
        let twist = format!("2*({})", VB_TWIST);
        let d_twist = bracket_unchecked(
            &parse_expr(VB_THETA, &chart)?,
            &parse_expr(&twist, &chart)?,
            &chart,
        );
        inst.checks.push(SpotCheck::new("master", SpotOp::Master, &[], &format_poly(&d_twist, &chart)));
    }
    Ok(inst)
}

/// Build a named instance.
pub fn build(name: &str) -> Result<Instance> {
    match name {
        "cross7" => cross_product(name, 7, &CROSS7_TRIPLES, Verdict::PreCourant),
        "cross7_full" => {
            let mut triples = CROSS7_TRIPLES.to_vec();
            triples.push(CROSS7_EXTRA);
            cross_product(name, 7, &triples, Verdict::PreCourant)
        }
        "cross3" => cross_product(name, 3, &[[1, 2, 3]], Verdict::Courant),
        "so3_point" => quadratic_point(name, 3, &[[1, 2, 3]], Verdict::Courant),
        "cross7_point" => quadratic_point(name, 7, &CROSS7_TRIPLES, Verdict::PreCourant),
        "twisted_pencil_l0" => twisted_pencil(name, 0),
        "twisted_pencil_l1" => twisted_pencil(name, 1),
        "twisted_pencil_lm2" => twisted_pencil(name, -2),
        "twisted_closed" => {
            let chart = make_cotangent_antivb_chart(1, 4);
            let theta = format!("{PENCIL_THETA} + xi1*xi3*xi4");
            instance(name, "Lie algebroid twisted by a closed 3-form", &chart, &theta, Verdict::Courant)
        }
        "bialgebroid" => bialgebroid(),
        "skew_action" => skew_action(),
        "almost_cotangent" => almost_cotangent(),
        "contravariant" => contravariant(name, false),
        "rflux" => contravariant(name, true),
        "quasi_poisson" => quasi_poisson(),
        "vb_untwisted" | "vb_twisted" | "vb_exact_twist" => vb(name),
        other => Err(Error::UnknownInstance(other.into())),
    }
}

pub fn build_all() -> Vec<Instance> {
    NAMES.iter().map(|n| build(n).expect("gallery instances build")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceOutcome {
    pub name: String,
    pub expected: Verdict,
    pub verdict: Verdict,
    pub checks: Vec<SpotOutcome>,
}

impl InstanceOutcome {
    pub fn passed(&self) -> bool {
        self.expected == self.verdict && self.checks.iter().all(|c| c.passed)
    }
}

/// Classify and evaluate the spot checks of one instance.
pub fn run_instance(inst: &Instance) -> Result<InstanceOutcome> {
    let verdict = classify(&inst.potential).verdict;
    let checks = inst
        .checks
        .iter()
        .map(|c| run_spot_check(&inst.potential, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(InstanceOutcome {
        name: inst.name.clone(),
        expected: inst.expected,
        verdict,
        checks,
    })
}

pub fn run_all() -> Result<Vec<InstanceOutcome>> {
    build_all().iter().map(run_instance).collect()
}

/// `{Θ, Θ}` of a Lie algebroid-type potential is zero: used to confirm
/// the untwisted part of the pencils.
pub fn untwisted_master(chart: &Chart, theta: &str) -> Result<SuperPoly> {
    let t = parse_expr(theta, chart)?;
    Ok(bracket_unchecked(&t, &t, chart))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::validate_chart;
    use crate::courant::jacobiator;

    /// Plain integer cross product from a triple table.
    fn cross(triples: &[[usize; 3]], a: usize, b: usize) -> [i64; 8] {
        let mut out = [0i64; 8];
        for &[i, j, k] in triples {
            for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                if (x, y) == (a, b) {
                    out[z] += 1;
                }
                if (y, x) == (a, b) {
                    out[z] -= 1;
                }
            }
        }
        out
    }

    fn cross_vec(triples: &[[usize; 3]], u: &[i64; 8], v: &[i64; 8]) -> [i64; 8] {
        let mut out = [0i64; 8];
        for a in 1..8 {
            for b in 1..8 {
                let c = u[a] * v[b];
                if c != 0 {
                    let e = cross(triples, a, b);
                    for k in 1..8 {
                        out[k] += c * e[k];
                    }
                }
            }
        }
        out
    }

    fn unit(i: usize) -> [i64; 8] {
        let mut e = [0i64; 8];
        e[i] = 1;
        e
    }

    fn as_poly(chart: &Chart, v: &[i64; 8]) -> SuperPoly {
        let mut p = SuperPoly::zero(chart);
        for (k, &c) in v.iter().enumerate().skip(1) {
            if c != 0 {
                p = &p + &SuperPoly::var(chart, &format!("pi{k}")).unwrap().scale(&int(c));
            }
        }
        p
    }

    #[test]
    fn every_instance_builds_validates_and_passes() {
        for inst in build_all() {
            assert!(validate_chart(inst.chart()).is_empty(), "{}", inst.name);
            let out = run_instance(&inst).unwrap();
            assert!(out.passed(), "{out:?}");
        }
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(build("octonions").is_err());
    }

    #[test]
    fn jacobiator_matches_vector_cross_product() {
        let mut full = CROSS7_TRIPLES.to_vec();
        full.push(CROSS7_EXTRA);
        for (name, table) in [("cross7", CROSS7_TRIPLES.to_vec()), ("cross7_full", full)] {
            let inst = build(name).unwrap();
            let c = inst.chart();
            let pi = |i: usize| SuperPoly::var(c, &format!("pi{i}")).unwrap();
            for a in 1..8 {
                for b in 1..8 {
                    for d in 1..8 {
                        let (u, v, w) = (unit(a), unit(b), unit(d));
                        let t1 = cross_vec(&table, &u, &cross_vec(&table, &v, &w));
                        let t2 = cross_vec(&table, &cross_vec(&table, &u, &v), &w);
                        let t3 = cross_vec(&table, &v, &cross_vec(&table, &u, &w));
                        let mut expect = [0i64; 8];
                        for k in 1..8 {
                            expect[k] = t1[k] - t2[k] - t3[k];
                        }
                        let got = jacobiator(&inst.potential, &pi(a), &pi(b), &pi(d)).unwrap();
                        assert_eq!(got, as_poly(c, &expect), "{name} J(pi{a},pi{b},pi{d})");
                    }
                }
            }
        }
    }

    #[test]
    fn printed_and_completed_tables_differ_at_one_two_four() {
        let j = |name: &str| {
            let inst = build(name).unwrap();
            let c = inst.chart().clone();
            let p = |s: &str| parse_expr(s, &c).unwrap();
            format_poly(&jacobiator(&inst.potential, &p("pi1"), &p("pi2"), &p("pi4")).unwrap(), &c)
        };
        assert_eq!(j("cross7"), "-2*pi7");
        assert_eq!(j("cross7_full"), "-3*pi7");
    }

    #[test]
    fn dropping_a_triple_breaks_the_spot_values() {
        let table: Vec<[usize; 3]> = CROSS7_TRIPLES.iter().copied().filter(|t| *t != [3, 6, 5]).collect();
        let inst = cross_product("cross7_corrupt", 7, &table, Verdict::PreCourant).unwrap();
        let out = run_instance(&inst).unwrap();
        assert!(!out.passed());
        let failed: Vec<_> = out.checks.iter().filter(|c| !c.passed).map(|c| c.label.as_str()).collect();
        assert_eq!(failed, ["pi3 x pi6"]);
    }

    #[test]
    fn pencil_master_is_twice_lambda_d_alpha() {
        let chart = make_cotangent_antivb_chart(1, 4);
        assert!(untwisted_master(&chart, PENCIL_THETA).unwrap().is_zero());
        let theta = parse_expr(PENCIL_THETA, &chart).unwrap();
        let alpha = parse_expr(PENCIL_TWIST, &chart).unwrap();
        let d_alpha = bracket_unchecked(&theta, &alpha, &chart);
        assert!(!d_alpha.is_zero());
        for (name, lambda) in [("twisted_pencil_l0", 0), ("twisted_pencil_l1", 1), ("twisted_pencil_lm2", -2)] {
            let inst = build(name).unwrap();
            assert_eq!(inst.potential.master(), d_alpha.scale(&int(2 * lambda)), "{name}");
        }
    }

    #[test]
    fn bialgebroid_halves_commute() {
        assert!(bialgebroid_compatibility().unwrap().is_zero());
    }

    #[test]
    fn rflux_twist_is_not_closed() {
        let inst = build("rflux").unwrap();
        let base = build("contravariant").unwrap();
        let c = inst.chart();
        let flux = inst.potential.theta() - base.potential.theta();
        assert!(!bracket_unchecked(base.potential.theta(), &flux, c).is_zero());
    }

    #[test]
    fn instances_round_trip_through_json() {
        for inst in build_all() {
            let text = inst.to_json();
            let back = crate::instance::Instance::parse_json(&text).unwrap();
            assert_eq!(back.potential.theta(), inst.potential.theta(), "{}", inst.name);
            assert_eq!(back.to_json(), text);
        }
    }
}
