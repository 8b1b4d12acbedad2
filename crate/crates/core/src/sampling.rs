//! Seeded random homogeneous polynomials for property checks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::charts::Chart;
use crate::superpoly::{ratio, Monomial, Parity, Rational, ScalarSymbol, SuperPoly, WeightVec};

pub use rand::SeedableRng;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub max_terms: usize,
    /// Cap on the total exponent of weight-zero generators in one term.
    pub base_degree: u32,
    /// Names of formal base functions that may appear.
    pub symbols: Vec<String>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            max_terms: 4,
            base_degree: 2,
            symbols: vec!["f".into()],
        }
    }
}

impl SampleConfig {
    pub fn polynomial() -> Self {
        SampleConfig {
            symbols: Vec::new(),
            ..SampleConfig::default()
        }
    }
}

fn coefficient(rng: &mut SampleRng) -> Rational {
    let n = loop {
        let n: i64 = rng.gen_range(-3..=3);
        if n != 0 {
            break n;
        }
    };
    if rng.gen_bool(0.15) {
        ratio(n, 2)
    } else {
        ratio(n, 1)
    }
}

/// All symbol-free monomials of the given weight with at most `base_degree`
/// weight-zero factors.
pub fn monomials_of_weight(chart: &Chart, weight: &WeightVec, base_degree: u32) -> Vec<Monomial> {
    fn go(chart: &Chart, g: usize, remaining: &[i64], base_left: u32, current: &Monomial, out: &mut Vec<Monomial>) {
        if g == chart.len() {
            if remaining.iter().all(|&r| r == 0) {
                out.push(current.clone());
            }
            return;
        }
        let gen = chart.generator(g);
        let w = &gen.weight.0;
        let zero = gen.weight.is_zero();
        let fit = w
            .iter()
            .zip(remaining)
            .filter(|(wi, _)| **wi > 0)
            .map(|(wi, r)| if *r < 0 { 0 } else { (r / wi) as u32 })
            .min()
            .unwrap_or(base_left);
        let max = match (gen.parity.is_odd(), zero) {
            (true, _) => fit.min(1),
            (false, true) => base_left,
            (false, false) => fit,
        };
        for e in 0..=max {
            let mut m = current.clone();
            if e > 0 {
                if gen.parity.is_odd() {
                    m.odd.push(g);
                } else {
                    m.even.push((g, e));
                }
            }
            let rest: Vec<i64> = remaining.iter().zip(w).map(|(r, wi)| r - wi * e as i64).collect();
            let left = if zero { base_left - e } else { base_left };
            go(chart, g + 1, &rest, left, &m, out);
        }
    }
    let mut out = Vec::new();
    go(chart, 0, &weight.0, base_degree, &Monomial::one(), &mut out);
    out
}

/// A random polynomial of exactly the given parity and weight. May be zero
/// when no monomial fits.
pub fn random_of(
    rng: &mut SampleRng,
    chart: &Chart,
    parity: Parity,
    weight: &WeightVec,
    cfg: &SampleConfig,
) -> SuperPoly {
    let pool: Vec<Monomial> = monomials_of_weight(chart, weight, cfg.base_degree)
        .into_iter()
        .filter(|m| m.parity() == parity)
        .collect();
    if pool.is_empty() {
        return SuperPoly::zero(chart);
    }
    let args = chart.function_args();
    let terms = rng.gen_range(1..=cfg.max_terms);
    let mut out = SuperPoly::zero(chart);
    for _ in 0..terms {
        let mut m = pool.choose(rng).unwrap().clone();
        if !cfg.symbols.is_empty() && !args.is_empty() && rng.gen_bool(0.3) {
            let name = cfg.symbols.choose(rng).unwrap();
            let mut s = ScalarSymbol::new(name.clone(), args.clone());
            if rng.gen_bool(0.3) {
                s = s.differentiated(*args.choose(rng).unwrap());
            }
            m.scalars.push(s);
        }
        out = &out + &SuperPoly::from_terms(chart, [(m, coefficient(rng))]);
    }
    out
}

/// A random homogeneous polynomial whose parity and weight are drawn from a
/// random monomial with symplectic weight at most `max_weight`.
pub fn random_homogeneous(
    rng: &mut SampleRng,
    chart: &Chart,
    max_weight: i64,
    cfg: &SampleConfig,
) -> SuperPoly {
    let lift_cap = chart.lift_order().map_or(0, |k| k as i64 - 1);
    for _ in 0..32 {
        let mut w = WeightVec::zeros(chart.axes());
        let mut parity = Parity::Even;
        let target: i64 = rng.gen_range(0..=max_weight);
        let factors = rng.gen_range(0..=3usize);
        for _ in 0..factors {
            let g = rng.gen_range(0..chart.len().max(1));
            if chart.is_empty() {
                break;
            }
            let next = &w + &chart.generator(g).weight;
            let over_lift = chart.lift_axis().is_some_and(|a| next.0[a] > lift_cap);
            if chart.symplectic_weight(&next) > target || over_lift {
                continue;
            }
            if chart.generator(g).parity.is_odd() {
                parity = parity + Parity::Odd;
            }
            w = next;
        }
        let p = random_of(rng, chart, parity, &w, cfg);
        if !p.is_zero() {
            return p;
        }
    }
    SuperPoly::one(chart)
}

/// Random section: symplectic weight 1, odd on N-manifold charts.
pub fn random_section(rng: &mut SampleRng, chart: &Chart, cfg: &SampleConfig) -> SuperPoly {
    let mut weights: Vec<WeightVec> = chart
        .generators()
        .iter()
        .filter(|g| chart.symplectic_weight(&g.weight) == 1)
        .map(|g| g.weight.clone())
        .collect();
    weights.sort();
    weights.dedup();
    let Some(w) = weights.choose(rng).cloned() else {
        return SuperPoly::zero(chart);
    };
    let parity = if chart.is_n_manifold() { Parity::Odd } else { *[Parity::Even, Parity::Odd].choose(rng).unwrap() };
    random_of(rng, chart, parity, &w, cfg)
}

/// Random function of symplectic weight zero.
pub fn random_base_function(rng: &mut SampleRng, chart: &Chart, cfg: &SampleConfig) -> SuperPoly {
    let w = WeightVec::zeros(chart.axes());
    let p = random_of(rng, chart, Parity::Even, &w, cfg);
    if p.is_zero() {
        SuperPoly::one(chart)
    } else {
        p
    }
}

/// Odd polynomial of symplectic weight 3 on a single-axis chart.
pub fn random_potential_poly(rng: &mut SampleRng, chart: &Chart, cfg: &SampleConfig) -> SuperPoly {
    random_of(rng, chart, Parity::Odd, &WeightVec(vec![3]), cfg)
}

/// Rank 5 Darboux chart whose metric pairs `xi1` with `xi2` and is the
/// identity on `xi3..xi5`.
pub fn precourant_family_chart(base_dim: usize) -> Chart {
    let mut g = crate::linalg::zeros(5, 5);
    g[0][1] = ratio(1, 1);
    g[1][0] = ratio(1, 1);
    for i in 2..5 {
        g[i][i] = ratio(1, 1);
    }
    let metric = crate::charts::Metric::new(g).expect("hyperbolic metric is invertible");
    crate::charts::make_darboux_chart(base_dim, 5, &metric).expect("family chart builds")
}

/// `Σ_a ξ1 Q^a p_a + Σ c(x) ξ^i ξ^j ξ^k` over `i < j < k` in `{1, 3, 4, 5}`
/// on [`precourant_family_chart`]. The anchor only sees `ξ2` and `ξ1` is
/// null, so `{Θ, Θ}` has no momentum and the potential is always
/// pre-Courant; it is Courant only when the cubic part is compatible.
pub fn random_precourant(rng: &mut SampleRng, chart: &Chart, cfg: &SampleConfig) -> SuperPoly {
    let layout = chart.darboux().expect("family chart is Darboux");
    let zero = WeightVec::zeros(1);
    let coefficient = |rng: &mut SampleRng| {
        if rng.gen_bool(0.3) {
            SuperPoly::zero(chart)
        } else {
            random_of(rng, chart, Parity::Even, &zero, cfg)
        }
    };
    let xi = |i: usize| SuperPoly::generator(chart, layout.fibre[i]);
    let mut out = SuperPoly::zero(chart);
    for &p in &layout.momenta {
        out = &out + &(&(&xi(0) * &coefficient(rng)) * &SuperPoly::generator(chart, p));
    }
    for (i, j, k) in [(0, 2, 3), (0, 2, 4), (0, 3, 4), (2, 3, 4)] {
        out = &out + &(&(&(&xi(i) * &xi(j)) * &xi(k)) * &coefficient(rng));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{make_darboux_chart, Metric};

    #[test]
    fn enumerated_monomials_have_the_target_weight() {
        let c = make_darboux_chart(2, 3, &Metric::identity(3)).unwrap();
        for w in 0..=4 {
            let target = WeightVec(vec![w]);
            let ms = monomials_of_weight(&c, &target, 2);
            assert!(!ms.is_empty());
            for m in ms {
                assert_eq!(m.weight(&c), target);
            }
        }
        // weight 1: xi1..xi3 times 1, x1, x2, x1^2, x1 x2, x2^2
        assert_eq!(monomials_of_weight(&c, &WeightVec(vec![1]), 2).len(), 18);
    }

    #[test]
    fn samples_are_homogeneous_and_reproducible() {
        let c = make_darboux_chart(2, 2, &Metric::identity(2)).unwrap();
        let cfg = SampleConfig::default();
        let mut a = rng(7);
        let mut b = rng(7);
        for _ in 0..50 {
            let p = random_homogeneous(&mut a, &c, 4, &cfg);
            assert!(p.homogeneity(&c).is_homogeneous());
            assert_eq!(p, random_homogeneous(&mut b, &c, 4, &cfg));
        }
    }
}
