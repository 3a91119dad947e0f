// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact α (Condorcet share), β (Pareto-dominated share) and γ (random
//! dictatorship share) of a rule over an exhaustive scope, plus the bounds
//! relating them for strategyproof rules.
//!
//! All folds run over the representatives of an [`Analysis`]. The three
//! quantities are invariant under permuting voters inside a verified block,
//! so representatives suffice.

use std::fmt;

use crate::analysis::{Analysis, AnalysisMode};
use crate::axioms::{strategyproofness, Scope};
use crate::enumerate::{profile_count, Budget, Code, EnumerationMode};
use crate::error::{Error, Result};
use crate::kernel::condorcet_winner_codes;
use crate::model::{AlternativeId, Profile};
use crate::rational::Rational;
use crate::rules::{decode_full_index, SdsSpec, TabulatedRule};

/// Minimum probability of a Condorcet winner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaMeasure {
    pub value: Rational,
    pub profile: Profile,
    pub winner: AlternativeId,
}

/// Maximum probability of a Pareto-dominated alternative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaMeasure {
    pub value: Rational,
    /// `(profile, dominated, dominator)`; `None` when nothing is ever dominated.
    pub witness: Option<(Profile, AlternativeId, AlternativeId)>,
    /// True when no profile in scope has a Pareto-dominated alternative.
    pub vacuous: bool,
}

/// A profile where `voter` ranks `top` first and `second` second, and swapping
/// them raises `second` by exactly that voter's γ_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaWitness {
    pub profile: Profile,
    pub voter: usize,
    pub top: AlternativeId,
    pub second: AlternativeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaMeasure {
    pub value: Rational,
    pub per_voter: Vec<Rational>,
    pub witnesses: Vec<GammaWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    Alpha,
    Beta,
    Gamma,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Alpha => "alpha",
            Metric::Beta => "beta",
            Metric::Gamma => "gamma",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "alpha" => Ok(Metric::Alpha),
            "beta" => Ok(Metric::Beta),
            "gamma" => Ok(Metric::Gamma),
            other => Err(Error::Precondition(format!("unknown metric {other:?}; expected alpha, beta or gamma"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MetricsReport {
    pub rule: String,
    pub scope: Scope,
    /// Result of the exhaustive strategyproofness audit, when it was run.
    pub strategyproof: Option<bool>,
    pub alpha: Option<AlphaMeasure>,
    pub beta: Option<BetaMeasure>,
    pub gamma: Option<GammaMeasure>,
}

fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

/// α over the analysis scope.
pub fn alpha_of(analysis: &Analysis) -> Result<AlphaMeasure> {
    let perms = analysis.perms();
    let mut best: Option<(i64, Vec<Code>, usize)> = None;
    for (codes, _) in analysis.space().iter_codes() {
        let Some(w) = condorcet_winner_codes(perms, &codes) else { continue };
        let value = analysis.row(&codes)[w];
        if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
            best = Some((value, codes.to_vec(), w));
        }
    }
    let (value, codes, w) = best.ok_or_else(|| {
        Error::Precondition(format!(
            "no profile with m = {}, n = {} has a Condorcet winner",
            analysis.m(),
            analysis.n()
        ))
    })?;
    Ok(AlphaMeasure { value: ratio(value, analysis.denom()), profile: perms.profile(&codes), winner: AlternativeId(w) })
}

/// β over the analysis scope; 0 with `vacuous` set if nothing is dominated.
pub fn beta_of(analysis: &Analysis) -> BetaMeasure {
    let perms = analysis.perms();
    let m = analysis.m();
    let mut best: Option<(i64, Vec<Code>, usize, usize)> = None;
    for (codes, _) in analysis.space().iter_codes() {
        let row = analysis.row(&codes);
        for (x, &value) in row.iter().enumerate() {
            if best.as_ref().is_some_and(|(v, ..)| value <= *v) {
                continue;
            }
            let dominator =
                (0..m).find(|&y| y != x && codes.iter().all(|&c| perms.position(c, y) < perms.position(c, x)));
            if let Some(y) = dominator {
                best = Some((value, codes.to_vec(), x, y));
            }
        }
    }
    match best {
        Some((value, codes, x, y)) => BetaMeasure {
            value: ratio(value, analysis.denom()),
            witness: Some((perms.profile(&codes), AlternativeId(x), AlternativeId(y))),
            vacuous: false,
        },
        None => BetaMeasure { value: Rational::zero(), witness: None, vacuous: true },
    }
}

/// Per-voter γ_i as numerators over the analysis denominator, with minimizers.
/// The rule must be strategyproof.
fn gamma_numerators(analysis: &Analysis) -> (Vec<i64>, Vec<GammaWitness>) {
    let perms = analysis.perms();
    let space = analysis.space();
    let n = analysis.n();
    let mut per_block: Vec<Option<(i64, Vec<Code>, usize)>> = vec![None; space.block_count()];
    let mut swapped: Vec<Code> = vec![0; n];
    for (codes, _) in space.iter_codes() {
        let before = analysis.row(&codes);
        for (b, best) in per_block.iter_mut().enumerate() {
            let range = space.block(b);
            for j in range.clone() {
                if j > range.start && codes[j] == codes[j - 1] {
                    continue;
                }
                let second = perms.at(codes[j], 1);
                swapped.copy_from_slice(&codes);
                swapped[j] = perms.swapped(codes[j], 0);
                let gain = analysis.lookup(&mut swapped)[second] - before[second];
                if best.as_ref().is_none_or(|(v, ..)| gain < *v) {
                    *best = Some((gain, codes.to_vec(), j));
                }
            }
        }
    }
    let mut numers = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for voter in 0..n {
        let (gain, codes, j) = per_block[space.block_of(voter)].clone().expect("every block has a representative");
        // Move the minimizing preference to this voter; the block is symmetric.
        let mut codes = codes;
        codes.swap(j, voter);
        numers.push(gain);
        witnesses.push(GammaWitness {
            profile: perms.profile(&codes),
            voter,
            top: AlternativeId(perms.at(codes[voter], 0)),
            second: AlternativeId(perms.at(codes[voter], 1)),
        });
    }
    (numers, witnesses)
}

fn require_strategyproof(analysis: &Analysis) -> Result<()> {
    if let Some(w) = strategyproofness(analysis).witness {
        return Err(Error::Precondition(format!(
            "gamma is defined for strategyproof rules only; {} is manipulable at {}",
            analysis.spec().name(),
            w.profile.to_compact_string()
        )));
    }
    Ok(())
}

/// γ and the γ_i over the analysis scope. Errors unless the rule is strategyproof.
pub fn gamma_of(analysis: &Analysis) -> Result<GammaMeasure> {
    require_strategyproof(analysis)?;
    Ok(gamma_unchecked(analysis))
}

fn gamma_unchecked(analysis: &Analysis) -> GammaMeasure {
    if analysis.m() < 2 {
        let n = analysis.n();
        return GammaMeasure { value: Rational::zero(), per_voter: vec![Rational::zero(); n], witnesses: Vec::new() };
    }
    let (numers, witnesses) = gamma_numerators(analysis);
    let denom = analysis.denom();
    GammaMeasure {
        value: ratio(numers.iter().sum(), denom),
        per_voter: numers.iter().map(|&g| ratio(g, denom)).collect(),
        witnesses,
    }
}

/// The rule `g` with `f = Σ γ_i d_i + (1 - γ) g`, tabulated on all profiles;
/// `None` when γ = 1 and `f` is the random dictatorship itself.
pub fn gamma_residual(analysis: &Analysis, gamma: &GammaMeasure, budget: Budget) -> Result<Option<TabulatedRule>> {
    let m = analysis.m();
    let n = analysis.n();
    let denom = analysis.denom();
    let mut weights = Vec::with_capacity(n);
    for g in &gamma.per_voter {
        weights.push(
            g.scaled_i64(denom).ok_or_else(|| Error::Internal("gamma_i is not over the rule denominator".into()))?,
        );
    }
    let rest = denom - weights.iter().sum::<i64>();
    if rest == 0 {
        return Ok(None);
    }
    let full = profile_count(m, n, EnumerationMode::Full);
    budget.check(full)?;
    let perms = analysis.perms();
    let mut numers = Vec::with_capacity(full as usize * m);
    let mut codes = vec![0; n];
    let mut canon = vec![0; n];
    for index in 0..full as u64 {
        decode_full_index(perms, index, &mut codes);
        canon.copy_from_slice(&codes);
        let start = numers.len();
        numers.extend_from_slice(analysis.lookup(&mut canon));
        for (i, &w) in weights.iter().enumerate() {
            numers[start + perms.top(codes[i])] -= w;
        }
        if numers[start..].iter().any(|&v| v < 0) {
            return Err(Error::Internal(format!(
                "residual is negative at {}",
                perms.profile(&codes).to_compact_string()
            )));
        }
    }
    TabulatedRule::new(perms.clone(), n, rest, numers).map(Some)
}

/// The requested metrics on one shared analysis. γ is only measured for
/// strategyproof rules; for others it is left out and `strategyproof` is false.
pub fn measure(analysis: &Analysis, metrics: &[Metric]) -> Result<MetricsReport> {
    let mut report = MetricsReport {
        rule: analysis.spec().name(),
        scope: Scope::of(analysis),
        strategyproof: None,
        alpha: None,
        beta: None,
        gamma: None,
    };
    if metrics.contains(&Metric::Alpha) {
        report.alpha = Some(alpha_of(analysis)?);
    }
    if metrics.contains(&Metric::Beta) {
        report.beta = Some(beta_of(analysis));
    }
    if metrics.contains(&Metric::Gamma) {
        let sp = strategyproofness(analysis).holds();
        report.strategyproof = Some(sp);
        if sp {
            report.gamma = Some(gamma_unchecked(analysis));
        }
    }
    Ok(report)
}

pub fn measure_alpha(spec: &SdsSpec, m: usize, n: usize, mode: AnalysisMode, budget: Budget) -> Result<AlphaMeasure> {
    alpha_of(&Analysis::new(spec, m, n, mode, budget)?)
}

pub fn measure_beta(spec: &SdsSpec, m: usize, n: usize, mode: AnalysisMode, budget: Budget) -> Result<BetaMeasure> {
    Ok(beta_of(&Analysis::new(spec, m, n, mode, budget)?))
}

/// γ with its residual rule.
pub fn measure_gamma(
    spec: &SdsSpec,
    m: usize,
    n: usize,
    mode: AnalysisMode,
    budget: Budget,
) -> Result<(GammaMeasure, Option<TabulatedRule>)> {
    let analysis = Analysis::new(spec, m, n, mode, budget)?;
    let gamma = gamma_of(&analysis)?;
    let residual = gamma_residual(&analysis, &gamma, budget)?;
    Ok((gamma, residual))
}

/// Outcome of checking one inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundOutcome {
    Holds { tight: bool },
    Violated,
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub inequality: &'static str,
    /// Measured left side and computed right side, when both were available.
    pub lhs: Option<Rational>,
    pub rhs: Option<Rational>,
    pub outcome: BoundOutcome,
}

impl BoundCheck {
    pub fn violated(&self) -> bool {
        self.outcome == BoundOutcome::Violated
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremBoundsReport {
    pub rule: String,
    pub m: usize,
    pub n: usize,
    /// α ≤ 2/m.
    pub condorcet: BoundCheck,
    /// γ ≥ 1 - m·β.
    pub dictatorship: BoundCheck,
    /// β ≥ (m-2)/(m-1)·α.
    pub efficiency: BoundCheck,
}

impl TheoremBoundsReport {
    pub fn checks(&self) -> [&BoundCheck; 3] {
        [&self.condorcet, &self.dictatorship, &self.efficiency]
    }

    pub fn any_violated(&self) -> bool {
        self.checks().iter().any(|c| c.violated())
    }
}

fn check(
    name: &'static str,
    inequality: &'static str,
    skip: Option<String>,
    sides: Option<(Rational, Rational)>,
    holds: impl Fn(&Rational, &Rational) -> bool,
) -> BoundCheck {
    let (lhs, rhs, outcome) = match (skip, sides) {
        (Some(reason), sides) => {
            let (l, r) = sides.unzip();
            (l, r, BoundOutcome::Skipped(reason))
        }
        (None, None) => (None, None, BoundOutcome::Skipped("required metric not measured".into())),
        (None, Some((l, r))) => {
            let outcome = if holds(&l, &r) { BoundOutcome::Holds { tight: l == r } } else { BoundOutcome::Violated };
            (Some(l), Some(r), outcome)
        }
    };
    BoundCheck { name, inequality, lhs, rhs, outcome }
}

/// Checks the three bounds that hold for every strategyproof rule, using only
/// the exact values in `report`.
pub fn verify_theorem_bounds(
    report: &MetricsReport,
    strategyproof: bool,
    m: usize,
    n: usize,
) -> Result<TheoremBoundsReport> {
    if report.scope.m != m || report.scope.n != n {
        return Err(Error::Dimension(format!(
            "metrics were measured at m = {}, n = {}, not m = {m}, n = {n}",
            report.scope.m, report.scope.n
        )));
    }
    let not_sp = (!strategyproof).then(|| "rule is not strategyproof".to_string());
    let mr = Rational::from_integer(m as i64);
    let alpha = report.alpha.as_ref().map(|a| a.value.clone());
    let beta = report.beta.as_ref().map(|b| b.value.clone());
    let gamma = report.gamma.as_ref().map(|g| g.value.clone());

    let condorcet = check(
        "condorcet",
        "alpha <= 2/m",
        not_sp.clone().or_else(|| (n < 3).then(|| "needs n >= 3".into())),
        alpha.clone().map(|a| (a, Rational::new(2, m as i64))),
        |l, r| l <= r,
    );
    let dictatorship = check(
        "dictatorship",
        "gamma >= 1 - m*beta",
        not_sp.clone().or_else(|| (m < 3).then(|| "needs m >= 3".into())),
        gamma.zip(beta.clone()).map(|(g, b)| (g, Rational::one() - &mr * &b)),
        |l, r| l >= r,
    );
    let efficiency = check(
        "efficiency",
        "beta >= (m-2)/(m-1)*alpha",
        not_sp.or_else(|| (m < 4 || !(n >= 5 || n == 3)).then(|| "needs m >= 4 and n = 3 or n >= 5".into())),
        beta.zip(alpha).map(|(b, a)| (b, Rational::new(m as i64 - 2, m as i64 - 1) * &a)),
        |l, r| l >= r,
    );
    Ok(TheoremBoundsReport { rule: report.rule.clone(), m, n, condorcet, dictatorship, efficiency })
}

/// Rules with closed-form α, β, γ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReferenceRule {
    RandomDictatorship,
    UniformLottery,
    Borda,
    Copeland,
}

impl ReferenceRule {
    pub const ALL: [ReferenceRule; 4] = [
        ReferenceRule::RandomDictatorship,
        ReferenceRule::UniformLottery,
        ReferenceRule::Borda,
        ReferenceRule::Copeland,
    ];

    pub fn spec(self) -> SdsSpec {
        match self {
            ReferenceRule::RandomDictatorship => SdsSpec::uniform_random_dictatorship(),
            ReferenceRule::UniformLottery => SdsSpec::UniformLottery,
            ReferenceRule::Borda => SdsSpec::RandomizedBorda,
            ReferenceRule::Copeland => SdsSpec::RandomizedCopeland,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            ReferenceRule::RandomDictatorship => "RD",
            ReferenceRule::UniformLottery => "U",
            ReferenceRule::Borda => "B",
            ReferenceRule::Copeland => "C",
        }
    }
}

/// Closed-form values; `None` where the formula does not apply at (m, n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceValues {
    pub alpha: Option<Rational>,
    pub beta: Option<Rational>,
    pub gamma: Option<Rational>,
}

/// Whether some profile has a Condorcet winner that no voter ranks first:
/// every voter needs one alternative above it, and each of the `m - 1` others
/// may be above it for fewer than half of the voters.
pub fn uncrowned_condorcet_winner_possible(m: usize, n: usize) -> bool {
    (m - 1) * (n.div_ceil(2) - 1) >= n
}

pub fn reference_values(rule: ReferenceRule, m: usize, n: usize) -> Result<ReferenceValues> {
    if m < 2 || n < 1 {
        return Err(Error::Precondition("closed forms need m >= 2 and n >= 1".into()));
    }
    let (mi, ni) = (m as i64, n as i64);
    let pair = mi * (mi - 1);
    let values = match rule {
        ReferenceRule::RandomDictatorship => ReferenceValues {
            alpha: uncrowned_condorcet_winner_possible(m, n).then(Rational::zero),
            beta: Some(Rational::zero()),
            gamma: Some(Rational::one()),
        },
        ReferenceRule::UniformLottery => ReferenceValues {
            alpha: Some(Rational::new(1, mi)),
            beta: Some(Rational::new(1, mi)),
            gamma: Some(Rational::zero()),
        },
        ReferenceRule::Borda => ReferenceValues {
            alpha: Some(Rational::new(1, mi) + Rational::new(2 - ni % 2, mi * ni)),
            beta: Some(Rational::new(2 * (mi - 2), pair)),
            gamma: Some(Rational::new(2, pair)),
        },
        // With fewer than three voters every top swap moves a majority.
        ReferenceRule::Copeland => ReferenceValues {
            alpha: Some(Rational::new(2, mi)),
            beta: Some(Rational::new(2 * (mi - 2), pair)),
            gamma: (n >= 3).then(Rational::zero),
        },
    };
    Ok(values)
}
