//! Named verification suites. Each suite returns a list of verdicts; an
//! `Err` means an internal invariant broke, not that a claim failed.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{graded_dim, Form};
use crate::cohomology::{
    convergence_verdict, harmonic_verdict, random_form, stabilization_verdicts, symmetry_check,
    ColumnSequence, DeRham,
};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::ops::OperatorSet;
use crate::report::Verdict;
use crate::spectral::SpectralSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Eq1,
    HodgeLepage,
    Props,
    Thm1,
    Stab,
    Harmonic,
    Symmetry,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Eq1,
        Suite::HodgeLepage,
        Suite::Props,
        Suite::Thm1,
        Suite::Stab,
        Suite::Harmonic,
        Suite::Symmetry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Eq1 => "eq1",
            Suite::HodgeLepage => "hodge-lepage",
            Suite::Props => "props",
            Suite::Thm1 => "thm1",
            Suite::Stab => "stab",
            Suite::Harmonic => "harmonic",
            Suite::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite '{s}' (available: {})", names.join(", "))
            })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random forms per model in the Hodge–Lepage suite.
    pub hodge_samples: usize,
    /// Random perturbations per map in the exact sequence suite.
    pub perturbations: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0x5eed,
            hodge_samples: 1000,
            perturbations: 100,
        }
    }
}

/// A model with its operators and cohomology.
pub struct Analysis {
    pub model: Model,
    pub ops: OperatorSet,
    pub de_rham: DeRham,
}

impl Analysis {
    pub fn new(model: Model) -> Result<Self> {
        let ops = OperatorSet::new(&model)?;
        let de_rham = DeRham::new(&model)?;
        Ok(Analysis {
            model,
            ops,
            de_rham,
        })
    }

    pub fn spectral(&self, max_page: usize) -> Result<SpectralSequence<'_>> {
        SpectralSequence::with_pages(&self.ops, max_page)
    }

    pub fn run(&self, suites: &[Suite], options: &SuiteOptions) -> Result<Vec<Verdict>> {
        let ss = self.spectral(0)?;
        let mut out = Vec::new();
        for suite in suites {
            out.extend(match suite {
                Suite::Eq1 => self.eq1(),
                Suite::HodgeLepage => self.hodge_lepage(options)?,
                Suite::Props => self.props(&ss)?,
                Suite::Thm1 => self.thm1(&ss, options)?,
                Suite::Stab => self.stab(&ss),
                Suite::Harmonic => self.harmonic(&ss)?,
                Suite::Symmetry => self.symmetry(&ss)?,
            });
        }
        Ok(out)
    }

    fn eq1(&self) -> Vec<Verdict> {
        let mut out: Vec<Verdict> = self
            .ops
            .operator_identities()
            .into_iter()
            .map(|check| {
                Verdict::new(
                    format!("operator identity: {}", check.name),
                    check.failing_degree.map(|k| format!("fails in degree {k}")),
                )
            })
            .collect();
        let routes = match self.ops.check_delta_routes() {
            Ok(()) => None,
            Err(Error::Invariant(witness)) => Some(witness),
            Err(other) => Some(other.to_string()),
        };
        out.push(Verdict::new("δ: [⊥,d] = (-1)^{k+1}∗d∗ for k ≤ n", routes));
        out.push(Verdict::new(
            "star: ∗∘∗ = id on every degree",
            self.ops
                .star_involution_failure()
                .map(|k| format!("fails in degree {k}")),
        ));
        out
    }

    fn hodge_lepage(&self, options: &SuiteOptions) -> Result<Vec<Verdict>> {
        let m = self.model.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let mut failure = None;
        for i in 0..options.hodge_samples {
            let omega = random_form(&mut rng, m, i % (m + 1));
            if let Some(problem) = self.hodge_lepage_problem(&omega)? {
                failure = Some(problem);
                break;
            }
        }
        let mut out = vec![Verdict::new(
            format!(
                "Hodge–Lepage: effective components re-sum exactly ({} random forms)",
                options.hodge_samples
            ),
            failure,
        )];
        let bad: Vec<String> = (0..=m)
            .filter_map(|k| {
                let effective = self.ops.effective_basis(k).dim();
                let lifted = if k >= 2 {
                    self.ops.top_map().block_ref(k - 2).rank()
                } else {
                    0
                };
                let total = graded_dim(m, k as isize);
                (effective + lifted != total)
                    .then(|| format!("k={k}: {effective} + {lifted} ≠ {total}"))
            })
            .collect();
        out.push(Verdict::new(
            "Hodge–Lepage: dim Λ^k = dim Λ_ε^k + dim ⊤Λ^{k-2}",
            (!bad.is_empty()).then(|| bad.join("; ")),
        ));
        Ok(out)
    }

    fn hodge_lepage_problem(&self, omega: &Form) -> Result<Option<String>> {
        let hl = self.ops.hodge_lepage(omega)?;
        let mut sum = Form::zero(self.model.dim(), omega.degree());
        for (i, component) in hl.components.iter().enumerate() {
            if !self.ops.bot(component).is_zero() {
                return Ok(Some(format!("component {i} of {omega} is not effective")));
            }
            sum = &sum + &self.ops.top_power(i).apply(component);
        }
        Ok((&sum != omega).then(|| format!("components of {omega} re-sum to {sum}")))
    }

    fn props(&self, ss: &SpectralSequence<'_>) -> Result<Vec<Verdict>> {
        let m = self.model.dim();
        let n = self.model.half_dim();
        let mut out = Vec::new();

        let mut higher = None;
        let mut escaped = None;
        for k in 0..=m {
            for omega in self.ops.effective_basis(k).basis_forms(m) {
                let hl = self.ops.hodge_lepage(&self.model.differential(&omega))?;
                if higher.is_none() {
                    if let Some(i) = hl.components.iter().skip(2).position(|c| !c.is_zero()) {
                        higher = Some(format!("d({omega}) has component {}", i + 2));
                    }
                }
                if escaped.is_none() && k > 0 {
                    let delta = self.ops.delta(&omega);
                    if !self.ops.effective_basis(k - 1).contains_form(&delta) {
                        escaped = Some(format!("δ({omega}) = {delta} is not effective"));
                    }
                }
            }
        }
        out.push(Verdict::new("effective ω: dω = (dω)_0 + ⊤(dω)_1", higher));
        out.push(Verdict::new("δ(Λ_ε^k) ⊆ Λ_ε^{k-1}", escaped));

        let support = ss.triangle_violations(0);
        out.push(Verdict::new(
            "E_0 supported on 0 ≤ p ≤ q ≤ n",
            (!support.is_empty()).then(|| format!("nonzero at {support:?}")),
        ));
        let e0 = ss.page(0).expect("page 0");
        let bad: Vec<String> = (0..=n)
            .filter(|&q| e0.dim(0, q as isize) != self.ops.effective_basis(q).dim())
            .map(|q| format!("q={q}"))
            .collect();
        out.push(Verdict::new(
            "dim E_0^{0,q} = dim Λ_ε^q",
            (!bad.is_empty()).then(|| bad.join(", ")),
        ));
        for (r, q_max, name) in [
            (
                0,
                n as isize,
                "τ_0^p: E_0^{0,q-p} → E_0^{p,q} isomorphic for p ≤ q ≤ n",
            ),
            (
                1,
                n as isize - 1,
                "τ_1^p: E_1^{0,q-p} → E_1^{p,q} isomorphic for p ≤ q < n",
            ),
        ] {
            let bad: Vec<String> = ss
                .tau_from_column_zero(r, q_max)?
                .into_iter()
                .filter(|c| !c.isomorphism)
                .map(|c| format!("p={}, q={}", c.k, c.q + c.k as isize))
                .collect();
            out.push(Verdict::new(
                name,
                (!bad.is_empty()).then(|| bad.join("; ")),
            ));
        }
        let window = ss.tau_window_report()?;
        let bad: Vec<String> = window
            .failures()
            .map(|c| format!("r={}, k={}, (p,q)=({},{})", c.r, c.k, c.p, c.q))
            .collect();
        let name = "τ_r^k isomorphic inside the stated window";
        out.push(if bad.is_empty() {
            Verdict::note(
                name,
                format!(
                    "{} maps checked inside; {} nonzero isomorphisms outside",
                    window.inside.len(),
                    window.isomorphisms_outside
                ),
            )
        } else {
            Verdict::fail(name, bad.join("; "))
        });
        Ok(out)
    }

    fn thm1(&self, ss: &SpectralSequence<'_>, options: &SuiteOptions) -> Result<Vec<Verdict>> {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let mut out = Vec::new();
        let mut perturbation = Vec::new();
        for p in 0..=self.model.half_dim() {
            let column = ColumnSequence::new(&self.ops, &self.de_rham, ss, p)?;
            let report = column.report()?;
            out.push(Verdict::new(
                format!("Theorem 1: column p={p} exact"),
                report.first_inexact().map(|node| {
                    format!(
                        "at {}: dim {}, rank in {}, rank out {}",
                        node.label, node.dim, node.rank_in, node.rank_out
                    )
                }),
            ));
            perturbation.extend(column.perturbation_failures(&mut rng, options.perturbations)?);
        }
        out.push(Verdict::new(
            format!(
                "Theorem 1: maps independent of representatives ({} perturbations per map)",
                options.perturbations
            ),
            perturbation.first().cloned(),
        ));
        Ok(out)
    }

    fn stab(&self, ss: &SpectralSequence<'_>) -> Vec<Verdict> {
        let mut out = stabilization_verdicts(ss, &self.de_rham, &self.model.closedness_profile());
        out.push(convergence_verdict(ss, &self.de_rham));
        out
    }

    fn closed_type_gate(&self, what: &str) -> Option<Verdict> {
        let profile = self.model.closedness_profile();
        profile.t_min.map(|t| {
            Verdict::fail(
                format!("{what}: closed-type hypothesis"),
                format!("[Ω^{t}] = 0, so the model is not closed-type"),
            )
        })
    }

    fn harmonic(&self, ss: &SpectralSequence<'_>) -> Result<Vec<Verdict>> {
        if let Some(gate) = self.closed_type_gate("Theorem 5") {
            return Ok(vec![gate]);
        }
        let v = harmonic_verdict(&self.ops, &self.de_rham, ss)?;
        let lines: Vec<String> = v
            .oracles()
            .iter()
            .map(|o| format!("{} = {}", o.name, o.harmonic))
            .collect();
        let name = "Theorem 5: harmonicity oracles agree";
        let agreement = if v.agree() {
            Verdict::note(name, lines.join("; "))
        } else if v.agreement_required() {
            Verdict::fail(name, lines.join("; "))
        } else {
            Verdict::note(
                name,
                format!("not nilpotent, disagreement recorded: {}", lines.join("; ")),
            )
        };
        let outcome = match v.is_harmonic() {
            Some(true) => Verdict::note("harmonic", "every class has a δ-closed representative"),
            Some(false) => Verdict::note(
                "harmonic",
                format!(
                    "not harmonic; {}",
                    v.page_two
                        .witness
                        .clone()
                        .or_else(|| v.direct.witness.clone())
                        .unwrap_or_default()
                ),
            ),
            None => Verdict::note("harmonic", "undecided: oracles disagree"),
        };
        Ok(vec![agreement, outcome])
    }

    fn symmetry(&self, ss: &SpectralSequence<'_>) -> Result<Vec<Verdict>> {
        if let Some(gate) = self.closed_type_gate("E_2 symmetry") {
            return Ok(vec![gate]);
        }
        let harmonic = harmonic_verdict(&self.ops, &self.de_rham, ss)?;
        let report = symmetry_check(ss)?;
        let asymmetry: Vec<String> = report
            .asymmetries
            .iter()
            .map(|(a, b)| format!("{a:?} vs {b:?}"))
            .collect();
        if harmonic.is_harmonic() != Some(true) {
            let detail = if asymmetry.is_empty() {
                "skipped (not harmonic); table happens to be symmetric".to_string()
            } else {
                format!(
                    "skipped (not harmonic); asymmetric at {}",
                    asymmetry.join(", ")
                )
            };
            return Ok(vec![Verdict::note("E_2 symmetry about p + q = n", detail)]);
        }
        let failing: Vec<String> = report
            .maps
            .iter()
            .filter(|(_, iso)| !iso)
            .map(|((p, q), _)| format!("({p},{q})"))
            .collect();
        Ok(vec![
            Verdict::new(
                "E_2 symmetry: τ_2^{n-p-q}: E_2^{p,q} → E_2^{n-q,n-p} isomorphic",
                (!failing.is_empty()).then(|| failing.join(", ")),
            ),
            Verdict::new(
                "E_2 symmetry about p + q = n",
                (!asymmetry.is_empty()).then(|| asymmetry.join(", ")),
            ),
        ])
    }
}
