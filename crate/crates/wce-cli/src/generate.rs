//! Seeded random instance generation.
//!
//! The draw procedure is fixed so that a seed identifies an instance across
//! implementations (see `rng` for the stream definition):
//!
//! 1. `n = 1 + below(max_points)`
//! 2. `n` masses, each `range(0.1, 10.0)`
//! 3. partition: Fisher-Yates shuffle of `0..n` (swap i with
//!    `i + below(n - i)`), block count `k = 1 + below(n)`, then `k - 1`
//!    distinct cut positions drawn by a partial shuffle of `1..n`; blocks are
//!    the runs of the shuffled sequence between sorted cuts
//! 4. weights: all of u then all of w; each entry is exact zero with
//!    probability `sparsity` (flag drawn first), otherwise modulus
//!    `2·sqrt(unit())` and argument `2π·unit()`
//! 5. regime adjustment, rescaling w (see below), then a post-generation
//!    check of the regime's invariant
//!
//! Regimes:
//! - `free`: no adjustment
//! - `nilpotent`: one block is forced to E(uw) = 0 exactly - its masses are
//!   equalized and its (u, w) entries paired as (z, c) / (z, -c), the odd
//!   atom getting w = 0, so the defining sum cancels term-by-term in floating
//!   point
//! - `contractive`: if ‖E(uw)‖_∞ > 0.9, w is scaled by 0.9/‖E(uw)‖_∞
//! - `unimodular`: w is scaled so ‖E(uw)‖_∞ = 1 (weights are redrawn while
//!   E(uw) ≡ 0)
//! - `expanding`: w is scaled so ‖E(uw)‖_∞ = 1.2 + 0.8·unit() (redrawing
//!   while E(uw) ≡ 0)

use crate::rng::{instance_seed, Xorshift64Star};
use crate::scenario::{PValue, Scenario};
use serde::{Deserialize, Serialize};
use wce_core::Operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Free,
    Nilpotent,
    Contractive,
    Unimodular,
    Expanding,
}

impl std::str::FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "free" => Ok(Regime::Free),
            "nilpotent" => Ok(Regime::Nilpotent),
            "contractive" => Ok(Regime::Contractive),
            "unimodular" => Ok(Regime::Unimodular),
            "expanding" => Ok(Regime::Expanding),
            other => Err(format!(
                "unknown regime '{other}' (free|nilpotent|contractive|unimodular|expanding)"
            )),
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Free => "free",
            Regime::Nilpotent => "nilpotent",
            Regime::Contractive => "contractive",
            Regime::Unimodular => "unimodular",
            Regime::Expanding => "expanding",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_points: usize,
    pub regime: Regime,
    /// Probability of an exact-zero weight entry.
    pub sparsity: f64,
    pub p: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_points: 12,
            regime: Regime::Free,
            sparsity: 0.2,
            p: 2.0,
        }
    }
}

fn draw_weights(rng: &mut Xorshift64Star, n: usize, sparsity: f64) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| {
            if rng.unit() < sparsity {
                [0.0, 0.0]
            } else {
                let r = 2.0 * rng.unit().sqrt();
                let theta = 2.0 * std::f64::consts::PI * rng.unit();
                [r * theta.cos(), r * theta.sin()]
            }
        })
        .collect()
}

fn max_euw(scenario: &Scenario) -> f64 {
    scenario
        .to_operator()
        .expect("generated scenarios are valid")
        .euw()
        .max_abs()
}

fn scale_w(scenario: &mut Scenario, factor: f64) {
    for z in scenario.w.iter_mut() {
        z[0] *= factor;
        z[1] *= factor;
    }
}

/// Generates the scenario for a configuration. Deterministic per seed.
pub fn generate(config: &GeneratorConfig) -> Scenario {
    let mut rng = Xorshift64Star::new(config.seed);
    let n = 1 + rng.below(config.max_points);
    let masses: Vec<f64> = (0..n).map(|_| rng.range(0.1, 10.0)).collect();

    // shuffled cut points
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..n.saturating_sub(1) {
        let j = i + rng.below(n - i);
        order.swap(i, j);
    }
    let block_count = 1 + rng.below(n);
    let mut gaps: Vec<usize> = (1..n).collect();
    for i in 0..block_count.saturating_sub(1) {
        let j = i + rng.below(gaps.len() - i);
        gaps.swap(i, j);
    }
    let mut cuts: Vec<usize> = gaps[..block_count - 1].to_vec();
    cuts.sort_unstable();
    cuts.push(n);
    let mut partition: Vec<Vec<usize>> = Vec::with_capacity(block_count);
    let mut start = 0;
    for &cut in &cuts {
        partition.push(order[start..cut].to_vec());
        start = cut;
    }

    let mut scenario = Scenario {
        name: None,
        masses,
        partition,
        u: draw_weights(&mut rng, n, config.sparsity),
        w: draw_weights(&mut rng, n, config.sparsity),
        p: PValue::Finite(config.p),
    };

    match config.regime {
        Regime::Free => {}
        Regime::Nilpotent => {
            let b = rng.below(scenario.partition.len());
            let block = scenario.partition[b].clone();
            let mass = scenario.masses[block[0]];
            for &i in &block {
                scenario.masses[i] = mass;
            }
            let mut atoms = block.iter();
            while let Some(&first) = atoms.next() {
                match atoms.next() {
                    Some(&second) => {
                        scenario.u[second] = scenario.u[first];
                        scenario.w[second] = [-scenario.w[first][0], -scenario.w[first][1]];
                    }
                    None => {
                        scenario.w[first] = [0.0, 0.0];
                    }
                }
            }
            let op = scenario.to_operator().expect("generated scenario is valid");
            assert_eq!(
                op.euw().value(block[0]),
                wce_core::Complex64::new(0.0, 0.0),
                "nilpotent regime must cancel exactly"
            );
        }
        Regime::Contractive => {
            let r = max_euw(&scenario);
            if r > 0.9 {
                scale_w(&mut scenario, 0.9 / r);
            }
            debug_assert!(max_euw(&scenario) <= 0.9 + 1e-12);
        }
        Regime::Unimodular | Regime::Expanding => {
            let target = if config.regime == Regime::Unimodular {
                1.0
            } else {
                1.2 + 0.8 * rng.unit()
            };
            let mut r = max_euw(&scenario);
            while r == 0.0 {
                scenario.u = draw_weights(&mut rng, n, config.sparsity);
                scenario.w = draw_weights(&mut rng, n, config.sparsity);
                r = max_euw(&scenario);
            }
            scale_w(&mut scenario, target / r);
            let achieved = max_euw(&scenario);
            debug_assert!((achieved - target).abs() <= 1e-9 * target);
        }
    }

    scenario
}

/// Instance `index` of a verification run rooted at `seed`.
pub fn generate_instance(config: &GeneratorConfig, index: u64) -> Scenario {
    let mut sc = generate(&GeneratorConfig {
        seed: instance_seed(config.seed, index),
        ..*config
    });
    sc.name = Some(format!(
        "seed-{}-index-{}-{}",
        config.seed, index, config.regime
    ));
    sc
}

/// Convenience: the operator for instance `index`.
pub fn generate_operator(config: &GeneratorConfig, index: u64) -> Operator {
    generate_instance(config, index)
        .to_operator()
        .expect("generated scenarios are valid")
}
