//! Analysis reports: one fixed key per operation, serializable to JSON and
//! renderable as text. No timestamps or environment data - reports for the
//! same scenario and flags are byte-identical.

use serde::{Deserialize, Serialize};
use wce_core::analysis::{
    cesaro_bounded_analysis, chain_report, decomposition_theorem_check, gelfand_estimate,
    gelfand_ratio_estimate, i_minus_t_analysis, lemma_norm_check, power_bounded_analysis, quasi_complement_check,
    verify_ascent_theorem, verify_corollary_sums, verify_descent_theorem, AnalysisConfig, Verdict,
};
use wce_core::oracle::{polar_aluthge, realize, two_norm};
use wce_core::Operator;

pub const DEFAULT_DESCENT_BOUND: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Tolerances {
    pub rank_tol: f64,
    pub support_tol: f64,
    pub k_max: usize,
    pub horizon: usize,
    pub descent_bound: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum VerdictRepr {
    Pass,
    Fail,
    Inapplicable,
}

impl From<Verdict> for VerdictRepr {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => VerdictRepr::Pass,
            Verdict::Fail => VerdictRepr::Fail,
            Verdict::Inapplicable => VerdictRepr::Inapplicable,
        }
    }
}

impl VerdictRepr {
    pub fn failed(&self) -> bool {
        matches!(self, VerdictRepr::Fail)
    }
    fn from_bool(ok: bool) -> Self {
        if ok {
            VerdictRepr::Pass
        } else {
            VerdictRepr::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChainSummary {
    pub null_dims: Vec<usize>,
    pub range_dims: Vec<usize>,
    pub ascent: usize,
    pub descent: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PowerBoundedSummary {
    pub power_bounded_paper: bool,
    pub power_bounded_empirical: bool,
    pub scalar_powers_bounded: bool,
    pub sup_norm_estimate: f64,
    pub horizon: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CesaroSummary {
    pub cesaro_bounded: bool,
    pub cesaro_sup: f64,
    pub condition_t: bool,
    pub condition_aluthge: bool,
    pub condition_vn: bool,
    pub condition_weighted: bool,
    pub condition_weighted_mixed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct IMinusTSummary {
    pub hypothesis_holds: bool,
    pub ascent_i_minus_t: usize,
    pub ascent_i_minus_t_star: usize,
    pub decomposition_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neumann_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bn_rel_errors: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bn_converges: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bn_norms_bounded: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CorollarySummary {
    pub intersection_trivial: bool,
    pub sum_full: VerdictRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AluthgeSummary {
    pub norm: f64,
    pub norm_matches_spectral_radius: bool,
    pub matches_polar_oracle: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DiscrepancyRecord {
    pub check: String,
    pub detail: String,
}

/// Full analysis of one scenario. Keys are the operation names.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AnalyzeReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub atoms: usize,
    pub blocks: usize,
    pub p: f64,
    pub tolerances: Tolerances,
    pub bound_functional_sup: f64,
    pub spectral_radius_formula: f64,
    /// `||T^64||^(1/64)` via matrix powers.
    pub gelfand_estimate: f64,
    /// `||T^65|| / ||T^64||` via matrix powers.
    pub gelfand_ratio_estimate: f64,
    pub chain_report: ChainSummary,
    pub verify_ascent_theorem: VerdictRepr,
    pub verify_descent_theorem: VerdictRepr,
    pub verify_corollary_sums: CorollarySummary,
    pub quasi_complement_check: VerdictRepr,
    pub decomposition_theorem_check: VerdictRepr,
    pub power_bounded_analysis: PowerBoundedSummary,
    pub cesaro_bounded_analysis: CesaroSummary,
    pub i_minus_t_analysis: IMinusTSummary,
    /// Pass iff the norm identity holds for λ ∈ {0, 0.5, 2.5, 10}; p = 2 only.
    pub lemma_norm_check: VerdictRepr,
    /// Closed-form transform against the polar oracle; null unless p = 2.
    pub aluthge: Option<AluthgeSummary>,
    pub neumann_inverse: VerdictRepr,
    pub discrepancies: Vec<DiscrepancyRecord>,
}

pub fn analyze(op: &Operator, name: Option<String>, cfg: &AnalysisConfig<f64>) -> AnalyzeReport {
    let mut discrepancies: Vec<DiscrepancyRecord> = Vec::new();

    let chain = chain_report(op, cfg);
    let ascent_ok = verify_ascent_theorem(op, cfg);
    let descent = verify_descent_theorem(op, DEFAULT_DESCENT_BOUND, cfg);
    let (intersection_trivial, sum_full) = verify_corollary_sums(op, cfg);
    let quasi = quasi_complement_check(op, cfg);
    let decomposition = decomposition_theorem_check(op, cfg);
    let power = power_bounded_analysis(op, cfg);
    let cesaro = cesaro_bounded_analysis(op, cfg);
    let im = i_minus_t_analysis(op, cfg);

    for d in power.discrepancy.iter().chain(cesaro.discrepancy.iter()) {
        discrepancies.push(DiscrepancyRecord {
            check: d.check.clone(),
            detail: d.detail.clone(),
        });
    }

    let p_is_two = op.exponent() == 2.0;
    let lemma = if p_is_two {
        let ok = [0.0, 0.5, 2.5, 10.0]
            .into_iter()
            .all(|l| lemma_norm_check(op, l).expect("p = 2 checked"));
        VerdictRepr::from_bool(ok)
    } else {
        VerdictRepr::Inapplicable
    };

    let aluthge = if p_is_two {
        let hat = op.aluthge().expect("p = 2 checked");
        let hat_m = realize(&hat);
        let norm = two_norm(&hat_m, op.space());
        let radius = op.spectral_radius_formula();
        let oracle = polar_aluthge(&realize(op), op.space());
        let scale = oracle.max_abs().max(1.0);
        Some(AluthgeSummary {
            norm,
            norm_matches_spectral_radius: (norm - radius).abs() <= 1e-8 * radius.max(1.0),
            matches_polar_oracle: hat_m.max_abs_diff(&oracle) <= 1e-8 * scale,
        })
    } else {
        None
    };

    let neumann = match im.neumann_ok {
        None => VerdictRepr::Inapplicable,
        Some(ok) => VerdictRepr::from_bool(ok),
    };

    let report = AnalyzeReport {
        name,
        atoms: op.dim(),
        blocks: op.subalgebra().blocks().len(),
        p: op.exponent(),
        tolerances: Tolerances {
            rank_tol: cfg.rank_tol,
            support_tol: cfg.support_tol,
            k_max: cfg.k_max,
            horizon: cfg.horizon,
            descent_bound: DEFAULT_DESCENT_BOUND,
        },
        bound_functional_sup: op.bound_constant(),
        spectral_radius_formula: op.spectral_radius_formula(),
        gelfand_estimate: gelfand_estimate(op, 64),
        gelfand_ratio_estimate: gelfand_ratio_estimate(op, 64),
        chain_report: ChainSummary {
            null_dims: chain.null_dims,
            range_dims: chain.range_dims,
            ascent: chain.ascent,
            descent: chain.descent,
        },
        verify_ascent_theorem: VerdictRepr::from_bool(ascent_ok),
        verify_descent_theorem: descent.into(),
        verify_corollary_sums: CorollarySummary {
            intersection_trivial,
            sum_full: sum_full.into(),
        },
        quasi_complement_check: VerdictRepr::from_bool(quasi),
        decomposition_theorem_check: VerdictRepr::from_bool(decomposition),
        power_bounded_analysis: PowerBoundedSummary {
            power_bounded_paper: power.power_bounded_paper,
            power_bounded_empirical: power.power_bounded_empirical,
            scalar_powers_bounded: power.scalar_powers_bounded,
            sup_norm_estimate: power.sup_norm_estimate,
            horizon: power.horizon,
        },
        cesaro_bounded_analysis: CesaroSummary {
            cesaro_bounded: cesaro.cesaro_bounded,
            cesaro_sup: cesaro.cesaro_sup,
            condition_t: cesaro.condition_t,
            condition_aluthge: cesaro.condition_aluthge,
            condition_vn: cesaro.condition_vn,
            condition_weighted: cesaro.condition_weighted,
            condition_weighted_mixed: cesaro.condition_weighted_mixed,
        },
        i_minus_t_analysis: IMinusTSummary {
            hypothesis_holds: im.hypothesis_holds,
            ascent_i_minus_t: im.ascent_i_minus_t,
            ascent_i_minus_t_star: im.ascent_i_minus_t_star,
            decomposition_ok: im.decomposition_ok,
            neumann_ok: im.neumann_ok,
            bn_rel_errors: im.bn_rel_errors,
            bn_converges: im.bn_converges,
            bn_norms_bounded: im.bn_norms_bounded,
        },
        lemma_norm_check: lemma,
        aluthge,
        neumann_inverse: neumann,
        discrepancies,
    };
    finalize(report)
}

/// Any failed theorem verdict is also recorded as a discrepancy, so the exit
/// code surfaces it.
fn finalize(mut report: AnalyzeReport) -> AnalyzeReport {
    let mut push = |check: &str, detail: String| {
        report.discrepancies.push(DiscrepancyRecord {
            check: check.into(),
            detail,
        })
    };
    // borrow juggling: collect first
    let mut extra: Vec<(String, String)> = Vec::new();
    let failures = [
        ("verify_ascent_theorem", report.verify_ascent_theorem.failed()),
        ("verify_descent_theorem", report.verify_descent_theorem.failed()),
        (
            "verify_corollary_sums",
            !report.verify_corollary_sums.intersection_trivial
                || report.verify_corollary_sums.sum_full.failed(),
        ),
        ("quasi_complement_check", report.quasi_complement_check.failed()),
        (
            "decomposition_theorem_check",
            report.decomposition_theorem_check.failed(),
        ),
        ("lemma_norm_check", report.lemma_norm_check.failed()),
        ("neumann_inverse", report.neumann_inverse.failed()),
        (
            "i_minus_t_analysis",
            !report.i_minus_t_analysis.decomposition_ok
                || (report.i_minus_t_analysis.hypothesis_holds
                    && report.i_minus_t_analysis.ascent_i_minus_t > 1),
        ),
        (
            "aluthge",
            report
                .aluthge
                .as_ref()
                .map(|a| !a.matches_polar_oracle || !a.norm_matches_spectral_radius)
                .unwrap_or(false),
        ),
    ];
    for (check, failed) in failures {
        if failed {
            extra.push((check.to_string(), "theorem check failed".to_string()));
        }
    }
    for (check, detail) in extra {
        push(&check, detail);
    }
    report
}

impl AnalyzeReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn has_failures_or_discrepancies(&self) -> bool {
        !self.discrepancies.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let v = |x: VerdictRepr| match x {
            VerdictRepr::Pass => "pass",
            VerdictRepr::Fail => "FAIL",
            VerdictRepr::Inapplicable => "inapplicable",
        };
        if let Some(name) = &self.name {
            out += &format!("scenario: {name}\n");
        }
        out += &format!(
            "space: {} atoms, {} blocks, p = {}\n",
            self.atoms, self.blocks, self.p
        );
        out += &format!(
            "bound functional sup (K)        {:.6e}\n",
            self.bound_functional_sup
        );
        out += &format!(
            "spectral radius ||E(uw)||_inf   {:.6e}  (Gelfand n=64: {:.6e})\n",
            self.spectral_radius_formula, self.gelfand_estimate
        );
        out += &format!(
            "chain: null dims {:?}, range dims {:?}, ascent {}, descent {}\n",
            self.chain_report.null_dims,
            self.chain_report.range_dims,
            self.chain_report.ascent,
            self.chain_report.descent
        );
        out += &format!(
            "ascent theorem                  {}\n",
            v(self.verify_ascent_theorem)
        );
        out += &format!(
            "descent theorem                 {}{}\n",
            v(self.verify_descent_theorem),
            if self.verify_descent_theorem == VerdictRepr::Inapplicable {
                "  (some |E(uw)| below the bound; bounded-away-from-zero is read on moduli)"
            } else {
                ""
            }
        );
        out += &format!(
            "corollary sums                  intersection {}, sum {}\n",
            if self.verify_corollary_sums.intersection_trivial {
                "pass"
            } else {
                "FAIL"
            },
            v(self.verify_corollary_sums.sum_full)
        );
        out += &format!(
            "quasi-complements               {}\n",
            v(self.quasi_complement_check)
        );
        out += &format!(
            "decomposition theorem           {}\n",
            v(self.decomposition_theorem_check)
        );
        let pb = &self.power_bounded_analysis;
        out += &format!(
            "power bounded                   strict {}, empirical {} (sup ||T^n|| = {:.6e}, horizon {})\n",
            pb.power_bounded_paper, pb.power_bounded_empirical, pb.sup_norm_estimate, pb.horizon
        );
        let cz = &self.cesaro_bounded_analysis;
        out += &format!(
            "Cesaro bounded                  {} (sup ||A_n|| = {:.6e}; conditions a={} b={} c={} d={})\n",
            cz.cesaro_bounded, cz.cesaro_sup, cz.condition_t, cz.condition_aluthge, cz.condition_vn,
            cz.condition_weighted
        );
        let im = &self.i_minus_t_analysis;
        out += &format!(
            "I-T analysis                    ascent {} (adjoint {}), decomposition {}\n",
            im.ascent_i_minus_t,
            im.ascent_i_minus_t_star,
            if im.decomposition_ok { "pass" } else { "FAIL" }
        );
        if let Some(errs) = im.bn_rel_errors {
            out += &format!(
                "B_n -> (I-T)^{{-1}}               rel errors {:.3e} / {:.3e} / {:.3e} at n = 1e2/1e3/1e4\n",
                errs[0], errs[1], errs[2]
            );
        }
        out += &format!(
            "norm lemma                      {}\n",
            v(self.lemma_norm_check)
        );
        if let Some(al) = &self.aluthge {
            out += &format!(
                "Aluthge transform               norm {:.6e}, matches radius {}, matches polar oracle {}\n",
                al.norm, al.norm_matches_spectral_radius, al.matches_polar_oracle
            );
        }
        out += &format!(
            "Neumann inverse                 {}\n",
            v(self.neumann_inverse)
        );
        if self.discrepancies.is_empty() {
            out += "discrepancies: none\n";
        } else {
            out += "discrepancies:\n";
            for d in &self.discrepancies {
                out += &format!("  - [{}] {}\n", d.check, d.detail);
            }
        }
        out
    }
}
