//! Named theorem suites for `verify`: each suite checks one identity or
//! theorem on a generated instance and reports pass / fail / inapplicable.
//! Failures carry a reproduction command (root seed + instance index).

use crate::generate::{generate_operator, GeneratorConfig};
use crate::rng::{instance_seed, Xorshift64Star};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wce_core::analysis::{
    adjoint_chain_matches, cesaro_bounded_analysis, chain_report, gelfand_ratio_estimate,
    i_minus_t_analysis, lemma_norm_check, null_t2_support_characterization,
    power_bounded_analysis, quasi_complement_check, verify_ascent_theorem,
    verify_corollary_sums, verify_descent_theorem, AnalysisConfig, Verdict,
};
use wce_core::measure::{lp_norm, Exponent};
use wce_core::oracle::{invert, polar_aluthge, realize, two_norm, DenseMatrix};
use wce_core::{Complex64, Fun, Operator};

#[derive(Debug, Clone)]
pub enum Outcome {
    Pass,
    Fail(String),
    Inapplicable,
}

impl Outcome {
    fn from_bool(ok: bool, detail: &str) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(detail.to_string())
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FailureRecord {
    pub index: u64,
    pub instance_seed: u64,
    pub suite: String,
    pub detail: String,
    pub repro: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SuiteCounts {
    pub name: String,
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerifySummary {
    pub seed: u64,
    pub instances: u64,
    pub regime: String,
    pub p: f64,
    pub max_points: usize,
    pub sparsity: f64,
    pub horizon: usize,
    pub rank_tol: f64,
    pub k_max: usize,
    pub suites: Vec<SuiteCounts>,
    pub failures: Vec<FailureRecord>,
    pub discrepancy_count: usize,
    pub all_pass: bool,
}

const SUITE_NAMES: &[&str] = &[
    "power_closed_form_oracle",
    "hoelder_norm_bound",
    "cesaro_power_sum_oracle",
    "ascent_theorem",
    "descent_theorem",
    "corollary_sums",
    "quasi_complement",
    "decomposition_theorem",
    "power_bounded",
    "cesaro_bounded",
    "spectral_radius_gelfand",
    "i_minus_t_analysis",
    "neumann_inverse",
    "adjoint_identity",
    "aluthge_oracle",
    "lemma_norm",
    "positive_cesaro_norm_identity",
];

fn probe_functions(seed: u64, n: usize, count: usize) -> Vec<Fun> {
    let mut rng = Xorshift64Star::new(seed ^ 0x50B0_F00D);
    (0..count)
        .map(|_| {
            Fun::new(
                (0..n)
                    .map(|_| Complex64::new(rng.range(-2.0, 2.0), rng.range(-2.0, 2.0)))
                    .collect(),
            )
        })
        .collect()
}

fn matrices_close(a: &DenseMatrix<f64>, b: &DenseMatrix<f64>, tol: f64) -> bool {
    a.max_abs_diff(b) <= tol * a.max_abs().max(b.max_abs()).max(1.0)
}

/// Runs every suite on one instance; returns per-suite outcomes (indexed as
/// SUITE_NAMES) plus the number of discrepancy records seen.
fn run_instance(op: &Operator, seed: u64, cfg: &AnalysisConfig<f64>) -> (Vec<Outcome>, usize) {
    let mut outcomes = Vec::with_capacity(SUITE_NAMES.len());
    let mut discrepancies = 0usize;
    let n = op.dim();
    let m = realize(op);
    let probes = probe_functions(seed, n, 3);
    let p_is_two = op.exponent() == 2.0;

    // power_closed_form_oracle
    let mut ok = true;
    for k in 1..=8usize {
        if !matrices_close(&realize(&op.power_closed_form(k)), &m.pow(k), 1e-10) {
            ok = false;
        }
    }
    outcomes.push(Outcome::from_bool(ok, "closed-form power differs from matrix power"));

    // hoelder_norm_bound
    let exp = Exponent::Finite(op.exponent());
    let bound = op.bound_constant();
    let mut ok = true;
    for f in &probes {
        let lhs = lp_norm(&op.apply(f).unwrap(), op.space(), exp).unwrap();
        let rhs = bound * lp_norm(f, op.space(), exp).unwrap();
        if lhs > rhs * (1.0 + 1e-10) + 1e-12 {
            ok = false;
        }
    }
    outcomes.push(Outcome::from_bool(ok, "||Tf||_p exceeded K ||f||_p"));

    // cesaro_power_sum_oracle
    let mut ok = true;
    for f in &probes {
        for k in [1usize, 2, 5, 8] {
            let got = op.cesaro_mean_apply(k, f).unwrap();
            let mut sum = Fun::zeros(n);
            for i in 0..k {
                sum = sum.add(&m.pow(i).apply(f));
            }
            let want = sum.scale(Complex64::new(1.0 / k as f64, 0.0));
            if got.sub(&want).max_abs() > 1e-10 * want.max_abs().max(1.0) {
                ok = false;
            }
        }
        for k in [2usize, 3, 6] {
            let got = op.b_n_apply(k, f).unwrap();
            let mut sum = Fun::zeros(n);
            for i in 0..=(k - 2) {
                sum = sum.add(&m.pow(i).apply(f).scale(Complex64::new((k - 1 - i) as f64, 0.0)));
            }
            let want = sum.scale(Complex64::new(1.0 / k as f64, 0.0));
            if got.sub(&want).max_abs() > 1e-10 * want.max_abs().max(1.0) {
                ok = false;
            }
        }
    }
    outcomes.push(Outcome::from_bool(ok, "Cesaro closed form differs from power sum"));

    // ascent_theorem (includes the support characterization and chains)
    let chain = chain_report(op, cfg);
    let ok = verify_ascent_theorem(op, cfg)
        && chain.ascent == chain.descent
        && null_t2_support_characterization(op, cfg)
        && adjoint_chain_matches(op, cfg);
    outcomes.push(Outcome::from_bool(ok, "ascent theorem violated"));

    // descent_theorem
    outcomes.push(match verify_descent_theorem(op, 0.1, cfg) {
        Verdict::Pass => Outcome::Pass,
        Verdict::Fail => Outcome::Fail("range chain did not freeze at index 2".into()),
        Verdict::Inapplicable => Outcome::Inapplicable,
    });

    // corollary_sums
    let (intersection, sum_full) = verify_corollary_sums(op, cfg);
    outcomes.push(if !intersection {
        Outcome::Fail("R(T^2) intersected N(T^{n+2})".into())
    } else {
        match sum_full {
            Verdict::Fail => Outcome::Fail("R(T^{n+2}) + N(T^2) fell short of the space".into()),
            _ => Outcome::Pass,
        }
    });

    // quasi_complement
    outcomes.push(Outcome::from_bool(
        quasi_complement_check(op, cfg),
        "R(T^2) and N(T^2) are not quasi-complements",
    ));

    // decomposition_theorem
    outcomes.push(Outcome::from_bool(
        wce_core::analysis::decomposition_theorem_check(op, cfg),
        "R(M_{E(uw)}T) + N(M_{E(uw)}T) decomposition failed",
    ));

    // power_bounded: one proved direction, discrepancies recorded not failed
    let power = power_bounded_analysis(op, cfg);
    if power.discrepancy.is_some() {
        discrepancies += 1;
    }
    outcomes.push(Outcome::from_bool(
        !(power.power_bounded_paper && !power.power_bounded_empirical),
        "strict criterion held but norms grew",
    ));

    // cesaro_bounded: classification consistency, discrepancies recorded
    let cesaro = cesaro_bounded_analysis(op, cfg);
    if cesaro.discrepancy.is_some() {
        discrepancies += 1;
    }
    outcomes.push(Outcome::from_bool(
        cesaro.condition_aluthge == cesaro.condition_t,
        "T and its Aluthge transform disagreed on Cesaro boundedness",
    ));

    // spectral_radius_gelfand: successive-quotient Gelfand estimate at
    // n = 64, within 5e-2 (absolute, or relative above one)
    let formula = op.spectral_radius_formula();
    let estimate = gelfand_ratio_estimate(op, 64);
    outcomes.push(Outcome::from_bool(
        (formula - estimate).abs() <= 5e-2 * formula.max(1.0),
        "Gelfand estimate drifted from ||E(uw)||_inf",
    ));

    // i_minus_t_analysis
    let im_report = i_minus_t_analysis(op, cfg);
    let mut ok = im_report.decomposition_ok;
    if im_report.hypothesis_holds && im_report.ascent_i_minus_t > 1 {
        ok = false;
    }
    if im_report.neumann_ok == Some(false)
        || im_report.bn_converges == Some(false)
        || im_report.bn_norms_bounded == Some(false)
    {
        ok = false;
    }
    outcomes.push(Outcome::from_bool(ok, "I-T analysis failed"));

    // neumann_inverse
    outcomes.push(if op.spectral_radius_formula() < 1.0 {
        let identity = DenseMatrix::identity(n);
        let im = identity.sub(&m);
        let mut ok = true;
        for f in &probes {
            let inv_f = op.neumann_inverse_apply(f).unwrap();
            let back = im.apply(&inv_f);
            if back.sub(f).max_abs() > 1e-9 * f.max_abs().max(1.0) {
                ok = false;
            }
        }
        // closed form as a matrix against Gaussian elimination
        let mut closed = DenseMatrix::identity(n);
        for i in 0..n {
            let g = Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - op.euw().value(i));
            for j in 0..n {
                let mut entry = closed.get(i, j);
                entry += g * m.get(i, j);
                closed.set(i, j, entry);
            }
        }
        match invert(&im) {
            Ok(inv) => {
                if !matrices_close(&closed, &inv, 1e-8) {
                    ok = false;
                }
            }
            Err(_) => ok = false,
        }
        Outcome::from_bool(ok, "Neumann closed form failed to invert I-T")
    } else {
        Outcome::Inapplicable
    });

    // adjoint_identity
    outcomes.push(if p_is_two {
        let adj = op.adjoint().unwrap();
        let mut ok = matrices_close(&realize(&adj), &m.mu_adjoint(op.space()), 1e-10);
        for f in &probes {
            for g in &probes {
                let lhs = op.space().inner(&op.apply(f).unwrap(), g);
                let rhs = op.space().inner(f, &adj.apply(g).unwrap());
                if (lhs - rhs).norm() > 1e-10 * lhs.norm().max(1.0) {
                    ok = false;
                }
            }
        }
        Outcome::from_bool(ok, "adjoint failed the inner-product identity")
    } else {
        Outcome::Inapplicable
    });

    // aluthge_oracle
    outcomes.push(if p_is_two {
        let hat = op.aluthge().unwrap();
        let hat_m = realize(&hat);
        let mut ok = matrices_close(&hat_m, &polar_aluthge(&m, op.space()), 1e-8);
        // E(uv) = E(uw) blockwise
        for i in 0..n {
            if (hat.euw().value(i) - op.euw().value(i)).norm()
                > 1e-12 * op.euw().value(i).norm().max(1.0)
            {
                ok = false;
            }
        }
        let radius = op.spectral_radius_formula();
        if (two_norm(&hat_m, op.space()) - radius).abs() > 1e-8 * radius.max(1.0) {
            ok = false;
        }
        for k in 1..=6usize {
            if !matrices_close(&realize(&hat.power_closed_form(k)), &hat_m.pow(k), 1e-10) {
                ok = false;
            }
        }
        Outcome::from_bool(ok, "Aluthge identities failed")
    } else {
        Outcome::Inapplicable
    });

    // lemma_norm
    outcomes.push(if p_is_two {
        let ok = [0.0, 0.5, 2.5, 10.0]
            .into_iter()
            .all(|l| lemma_norm_check(op, l).unwrap());
        Outcome::from_bool(ok, "||lambda I + T*T|| differed from lambda + ||T||^2")
    } else {
        Outcome::Inapplicable
    });

    // positive_cesaro_norm_identity on the derived positive instance u = conj(w)
    outcomes.push(if p_is_two {
        let positive = Operator::new(
            op.space().clone(),
            op.subalgebra().clone(),
            op.outer().conj(),
            op.outer().clone(),
            Exponent::Finite(2.0),
        )
        .unwrap();
        let pm = realize(&positive);
        let ew2 = wce_core::expectation::cond_exp(
            &positive.outer().abs_pow(2.0),
            positive.subalgebra(),
            positive.space(),
        );
        let mut ok = true;
        for k in [2usize, 5, 9] {
            let weights = positive.cesaro_weights(k);
            let mut a_n = DenseMatrix::zeros(n);
            for i in 0..n {
                let v = weights.v_n.value(i);
                for j in 0..n {
                    let mut entry = v * pm.get(i, j);
                    if i == j {
                        entry += Complex64::new(1.0, 0.0);
                    }
                    a_n.set(i, j, entry * Complex64::new(1.0 / k as f64, 0.0));
                }
            }
            let lhs = two_norm(&a_n, positive.space());
            let rhs = (1.0 + weights.v_n.mul(&ew2).max_abs()) / k as f64;
            if (lhs - rhs).abs() > 1e-8 * rhs.max(1.0) {
                ok = false;
            }
        }
        Outcome::from_bool(ok, "positive-case Cesaro norm identity failed")
    } else {
        Outcome::Inapplicable
    });

    (outcomes, discrepancies)
}

/// Full verification run: generates `instances` operators from `seed` and
/// aggregates suite counts, failures (with reproduction commands), and
/// discrepancy totals. Instances are evaluated in parallel; output order is
/// by instance index.
pub fn run_verify(gen: &GeneratorConfig, instances: u64, cfg: &AnalysisConfig<f64>) -> VerifySummary {
    let regime = gen.regime.to_string();
    let per_instance: Vec<(Vec<Outcome>, usize)> = (0..instances)
        .into_par_iter()
        .map(|index| {
            let op = generate_operator(gen, index);
            run_instance(&op, instance_seed(gen.seed, index), cfg)
        })
        .collect();

    let mut suites: Vec<SuiteCounts> = SUITE_NAMES
        .iter()
        .map(|name| SuiteCounts {
            name: name.to_string(),
            pass: 0,
            fail: 0,
            inapplicable: 0,
        })
        .collect();
    let mut failures = Vec::new();
    let mut discrepancy_count = 0usize;

    for (index, (outcomes, discrepancies)) in per_instance.iter().enumerate() {
        discrepancy_count += discrepancies;
        for (s, outcome) in outcomes.iter().enumerate() {
            match outcome {
                Outcome::Pass => suites[s].pass += 1,
                Outcome::Inapplicable => suites[s].inapplicable += 1,
                Outcome::Fail(detail) => {
                    suites[s].fail += 1;
                    failures.push(FailureRecord {
                        index: index as u64,
                        instance_seed: instance_seed(gen.seed, index as u64),
                        suite: SUITE_NAMES[s].to_string(),
                        detail: detail.clone(),
                        repro: format!(
                            "wce generate --seed {} --index {} --regime {} --p {} --max-points {} --sparsity {} --out failing.json && wce analyze failing.json",
                            gen.seed, index, regime, gen.p, gen.max_points, gen.sparsity
                        ),
                    });
                }
            }
        }
    }

    let all_pass = suites.iter().all(|s| s.fail == 0);
    VerifySummary {
        seed: gen.seed,
        instances,
        regime,
        p: gen.p,
        max_points: gen.max_points,
        sparsity: gen.sparsity,
        horizon: cfg.horizon,
        rank_tol: cfg.rank_tol,
        k_max: cfg.k_max,
        suites,
        failures,
        discrepancy_count,
        all_pass,
    }
}

impl VerifySummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out += &format!(
            "verify: seed {} instances {} regime {} p {}\n",
            self.seed, self.instances, self.regime, self.p
        );
        for s in &self.suites {
            out += &format!(
                "  {:32} pass {:5}  fail {:5}  inapplicable {:5}\n",
                s.name, s.pass, s.fail, s.inapplicable
            );
        }
        out += &format!("discrepancy records: {}\n", self.discrepancy_count);
        if !self.failures.is_empty() {
            out += "failures:\n";
            for f in &self.failures {
                out += &format!(
                    "  - instance {} (seed {:#018x}) {}: {}\n    repro: {}\n",
                    f.index, f.instance_seed, f.suite, f.detail, f.repro
                );
            }
        }
        out += if self.all_pass { "ALL PASS\n" } else { "FAILURES PRESENT\n" };
        out
    }
}
