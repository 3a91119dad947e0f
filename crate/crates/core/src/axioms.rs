// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Decision procedures for the axioms, each certified by a [`Witness`] on failure.
//!
//! Exhaustive audits run on an [`Analysis`]. For a rule verified to be
//! symmetric within voter blocks it suffices to let one voter per distinct
//! preference in each block deviate at each representative; every other
//! (profile, voter) pair is a within-block permutation of one of these.

use std::fmt;

use petgraph::algo::ford_fulkerson;
use petgraph::graph::Graph;

use crate::analysis::{Analysis, AnalysisMode, AnonymityEvidence};
use crate::enumerate::{Budget, Code, PermTable};
use crate::error::{Error, Result};
use crate::lottery::Lottery;
use crate::model::{majority_tally, AlternativeId, Preference, Profile};
use crate::rational::Rational;
use crate::rules::{evaluate, SdsSpec};

/// Whether `pref` weakly prefers `p` to `q` by stochastic dominance.
pub fn sd_prefers(pref: &Preference, p: &Lottery, q: &Lottery) -> Result<bool> {
    Ok(sd_cutoff(pref, p, q)?.is_none())
}

/// First alternative whose upper contour set gets less probability under `p`
/// than under `q`, or `None` if `p` stochastically dominates `q` for `pref`.
pub fn sd_cutoff(pref: &Preference, p: &Lottery, q: &Lottery) -> Result<Option<AlternativeId>> {
    let m = pref.m();
    if p.m() != m || q.m() != m {
        return Err(Error::Dimension(format!(
            "lotteries over {} and {} alternatives compared under a preference over {m}",
            p.m(),
            q.m()
        )));
    }
    let (mut sp, mut sq) = (Rational::zero(), Rational::zero());
    for &x in pref.ranking() {
        sp += p.prob(x);
        sq += q.prob(x);
        if sp < sq {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Integer analogue of [`sd_cutoff`] over numerators sharing a denominator;
/// returns the cutoff position.
#[inline]
fn sd_cutoff_position(perms: &PermTable, code: Code, p: &[i64], q: &[i64]) -> Option<usize> {
    let (mut sp, mut sq) = (0i64, 0i64);
    for k in 0..perms.m() - 1 {
        let x = perms.at(code, k);
        sp += p[x];
        sq += q[x];
        if sp < sq {
            return Some(k);
        }
    }
    None
}

/// The alternative that beats every other in a strict pairwise majority.
pub fn condorcet_winner(profile: &Profile) -> Option<AlternativeId> {
    let tally = majority_tally(profile);
    profile.alternatives().find(|&x| profile.alternatives().all(|y| y == x || tally.beats(x, y)))
}

/// The alternative that loses every strict pairwise majority comparison.
pub fn condorcet_loser(profile: &Profile) -> Option<AlternativeId> {
    let tally = majority_tally(profile);
    profile.alternatives().find(|&x| profile.alternatives().all(|y| y == x || tally.beats(y, x)))
}

/// All `(dominated, dominator)` pairs where every voter prefers the dominator.
pub fn pareto_dominations(profile: &Profile) -> Vec<(AlternativeId, AlternativeId)> {
    let tally = majority_tally(profile);
    let mut out = Vec::new();
    for y in profile.alternatives() {
        for x in profile.alternatives().filter(|&x| x != y) {
            if tally.support(x, y) == profile.n() {
                out.push((y, x));
            }
        }
    }
    out
}

/// Whether `x` becomes the Condorcet winner of some profile that keeps every
/// voter's rank of `x` and only reorders the other alternatives.
///
/// Voter `i` must put `rank_i(x) - 1` alternatives above `x`, and each `y`
/// may be above `x` for at most `ceil(n/2) - 1` voters. The assignment exists
/// iff the max flow of the bipartite network saturates the voter side.
pub fn is_cw_candidate(profile: &Profile, x: AlternativeId) -> bool {
    let m = profile.m();
    let n = profile.n();
    let cap = (n.div_ceil(2) - 1) as u32;
    let mut graph: Graph<(), u32> = Graph::new();
    let source = graph.add_node(());
    let sink = graph.add_node(());
    let voters: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    let others: Vec<_> = (0..m).map(|_| graph.add_node(())).collect();
    let mut demand = 0u32;
    for (i, pref) in profile.voters().iter().enumerate() {
        let above = (pref.rank(x) - 1) as u32;
        demand += above;
        graph.add_edge(source, voters[i], above);
        for y in (0..m).filter(|&y| y != x.0) {
            graph.add_edge(voters[i], others[y], 1);
        }
    }
    for y in (0..m).filter(|&y| y != x.0) {
        graph.add_edge(others[y], sink, cap);
    }
    let (flow, _) = ford_fulkerson(&graph, source, sink);
    flow == demand
}

/// The axioms audited exhaustively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Strategyproofness,
    NonPerversity,
    Localizedness,
    Anonymity,
    Neutrality,
}

impl Axiom {
    pub fn as_str(self) -> &'static str {
        match self {
            Axiom::Strategyproofness => "strategyproofness",
            Axiom::NonPerversity => "non-perversity",
            Axiom::Localizedness => "localizedness",
            Axiom::Anonymity => "anonymity",
            Axiom::Neutrality => "neutrality",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a witness certifies. Voter indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Reporting `deviation` instead of the truth is not stochastically
    /// dominated; the upper contour set of `cutoff` gains probability.
    Manipulation { voter: usize, deviation: Preference, cutoff: AlternativeId },
    /// Moving `raised` directly above `lowered` lowers the probability of `raised`.
    Perversity { voter: usize, raised: AlternativeId, lowered: AlternativeId },
    /// Swapping `raised` above `lowered` changes the probability of `affected`.
    NonLocalized { voter: usize, raised: AlternativeId, lowered: AlternativeId, affected: AlternativeId },
    /// Exchanging the two voters' preferences changes the lottery.
    Anonymity { voters: (usize, usize) },
    /// Renaming the two alternatives in the profile does not rename the lottery.
    Neutrality { alternatives: (AlternativeId, AlternativeId) },
}

impl Violation {
    pub fn axiom(&self) -> Axiom {
        match self {
            Violation::Manipulation { .. } => Axiom::Strategyproofness,
            Violation::Perversity { .. } => Axiom::NonPerversity,
            Violation::NonLocalized { .. } => Axiom::Localizedness,
            Violation::Anonymity { .. } => Axiom::Anonymity,
            Violation::Neutrality { .. } => Axiom::Neutrality,
        }
    }
}

/// A concrete counterexample: `before` is the lottery at `profile`, `after`
/// the lottery at the modified profile described by `violation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub profile: Profile,
    pub violation: Violation,
    pub before: Lottery,
    pub after: Lottery,
}

impl Witness {
    /// The profile the violation compares against.
    pub fn modified_profile(&self) -> Result<Profile> {
        let p = &self.profile;
        match &self.violation {
            Violation::Manipulation { voter, deviation, .. } => Ok(p.with_voter(*voter, deviation.clone())),
            Violation::Perversity { voter, raised, lowered }
            | Violation::NonLocalized { voter, raised, lowered, .. } => {
                crate::model::adjacent_swap(p, *voter, *lowered, *raised)
            }
            Violation::Anonymity { voters: (i, j) } => {
                let mut voters = p.voters().to_vec();
                voters.swap(*i, *j);
                Profile::new(voters)
            }
            Violation::Neutrality { alternatives: (x, y) } => {
                let mut map: Vec<AlternativeId> = (0..p.m()).map(AlternativeId).collect();
                map.swap(x.0, y.0);
                Profile::new(p.voters().iter().map(|v| v.relabeled(&map)).collect())
            }
        }
    }

    /// Re-evaluates the rule on both profiles and confirms the stored
    /// lotteries and the violation.
    pub fn replay(&self, spec: &SdsSpec) -> Result<bool> {
        let before = evaluate(spec, &self.profile)?;
        let after = evaluate(spec, &self.modified_profile()?)?;
        if before != self.before || after != self.after {
            return Ok(false);
        }
        Ok(match &self.violation {
            Violation::Manipulation { voter, cutoff, .. } => {
                sd_cutoff(self.profile.voter(*voter), &before, &after)? == Some(*cutoff)
            }
            Violation::Perversity { raised, .. } => after.prob(*raised) < before.prob(*raised),
            Violation::NonLocalized { affected, raised, lowered, .. } => {
                affected != raised && affected != lowered && after.prob(*affected) != before.prob(*affected)
            }
            Violation::Anonymity { .. } => before != after,
            Violation::Neutrality { alternatives: (x, y) } => {
                let mut map: Vec<AlternativeId> = (0..before.m()).map(AlternativeId).collect();
                map.swap(x.0, y.0);
                (0..before.m()).any(|z| before.probs()[z] != after.probs()[map[z].0])
            }
        })
    }
}

/// The verdict for one axiom over an exhaustive scope.
#[derive(Clone, Debug)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    /// First violation in enumeration order, or `None` if the axiom holds.
    pub witness: Option<Witness>,
    /// For manipulations: the witness relabeled so the misreport is `a>b>c...`
    /// and the deviator is voter 1, kept only if a direct replay confirms it.
    pub canonical: Option<Witness>,
}

impl AxiomVerdict {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }

    fn from(axiom: Axiom, witness: Option<Witness>) -> AxiomVerdict {
        AxiomVerdict { axiom, witness, canonical: None }
    }
}

/// Enumeration scope of an audit or measurement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scope {
    pub m: usize,
    pub n: usize,
    pub mode: AnalysisMode,
    /// Sizes of the verified voter blocks (one block of `n` means anonymous).
    pub blocks: Vec<usize>,
    pub evaluations: u128,
}

impl Scope {
    pub fn of(analysis: &Analysis) -> Scope {
        Scope {
            m: analysis.m(),
            n: analysis.n(),
            mode: analysis.mode(),
            blocks: analysis.space().block_sizes(),
            evaluations: analysis.evaluations(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub rule: String,
    pub scope: Scope,
    pub verdicts: Vec<AxiomVerdict>,
}

impl AxiomReport {
    pub fn verdict(&self, axiom: Axiom) -> Option<&AxiomVerdict> {
        self.verdicts.iter().find(|v| v.axiom == axiom)
    }

    pub fn holds(&self, axiom: Axiom) -> Option<bool> {
        self.verdict(axiom).map(AxiomVerdict::holds)
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(AxiomVerdict::holds)
    }
}

fn report(analysis: &Analysis, verdicts: Vec<AxiomVerdict>) -> AxiomReport {
    AxiomReport { rule: analysis.spec().name(), scope: Scope::of(analysis), verdicts }
}

/// Visits `(representative, block voter, preference code)` for the first
/// voter holding each distinct preference within each block.
fn for_each_deviator(analysis: &Analysis, mut visit: impl FnMut(&[Code], usize) -> bool) {
    let space = analysis.space();
    for (codes, _) in space.iter_codes() {
        for b in 0..space.block_count() {
            let range = space.block(b);
            for j in range.clone() {
                if j > range.start && codes[j] == codes[j - 1] {
                    continue;
                }
                if !visit(&codes, j) {
                    return;
                }
            }
        }
    }
}

/// Exhaustive strategyproofness check: every voter, every misreport.
pub fn strategyproofness(analysis: &Analysis) -> AxiomVerdict {
    let perms = analysis.perms().clone();
    let mut found: Option<Witness> = None;
    let mut deviated: Vec<Code> = vec![0; analysis.n()];
    for_each_deviator(analysis, |codes, j| {
        let truth = analysis.row(codes);
        for lie in 0..perms.len() as Code {
            if lie == codes[j] {
                continue;
            }
            deviated.copy_from_slice(codes);
            deviated[j] = lie;
            let after = analysis.lookup(&mut deviated);
            if let Some(k) = sd_cutoff_position(&perms, codes[j], truth, after) {
                found = Some(Witness {
                    profile: perms.profile(codes),
                    violation: Violation::Manipulation {
                        voter: j,
                        deviation: perms.pref(lie).clone(),
                        cutoff: AlternativeId(perms.at(codes[j], k)),
                    },
                    before: analysis.lottery(truth),
                    after: analysis.lottery(after),
                });
                return false;
            }
        }
        true
    });
    let canonical = found.as_ref().and_then(|w| canonical_manipulation(analysis.spec(), w));
    AxiomVerdict { axiom: Axiom::Strategyproofness, witness: found, canonical }
}

/// Relabels a manipulation so that the misreport reads `a>b>c...`, moves the
/// deviator to voter 0 and sorts the remaining voters; returns it only if the
/// relabeled profile is itself a confirmed manipulation.
pub fn canonical_manipulation(spec: &SdsSpec, witness: &Witness) -> Option<Witness> {
    let Violation::Manipulation { voter, deviation, .. } = &witness.violation else { return None };
    let m = witness.profile.m();
    let mut map = vec![AlternativeId(0); m];
    for (k, x) in deviation.ranking().iter().enumerate() {
        map[x.0] = AlternativeId(k);
    }
    let relabel = |p: &Preference| p.relabeled(&map);
    let mut others: Vec<Preference> =
        witness.profile.voters().iter().enumerate().filter(|&(i, _)| i != *voter).map(|(_, p)| relabel(p)).collect();
    others.sort();
    let mut voters = vec![relabel(witness.profile.voter(*voter))];
    voters.extend(others);
    let profile = Profile::new(voters).ok()?;
    let lie = Preference::identity(m);
    let before = evaluate(spec, &profile).ok()?;
    let after = evaluate(spec, &profile.with_voter(0, lie.clone())).ok()?;
    let cutoff = sd_cutoff(profile.voter(0), &before, &after).ok()??;
    Some(Witness { profile, violation: Violation::Manipulation { voter: 0, deviation: lie, cutoff }, before, after })
}

/// Non-perversity and localizedness over every adjacent swap.
pub fn gibbard_conditions(analysis: &Analysis) -> (AxiomVerdict, AxiomVerdict) {
    let perms = analysis.perms().clone();
    let m = analysis.m();
    let mut perverse: Option<Witness> = None;
    let mut nonlocal: Option<Witness> = None;
    let mut swapped: Vec<Code> = vec![0; analysis.n()];
    for_each_deviator(analysis, |codes, j| {
        let before = analysis.row(codes);
        for k in 0..m - 1 {
            let lowered = perms.at(codes[j], k);
            let raised = perms.at(codes[j], k + 1);
            swapped.copy_from_slice(codes);
            swapped[j] = perms.swapped(codes[j], k);
            let after = analysis.lookup(&mut swapped);
            let make = |violation| Witness {
                profile: perms.profile(codes),
                violation,
                before: analysis.lottery(before),
                after: analysis.lottery(after),
            };
            if perverse.is_none() && after[raised] < before[raised] {
                perverse = Some(make(Violation::Perversity {
                    voter: j,
                    raised: AlternativeId(raised),
                    lowered: AlternativeId(lowered),
                }));
            }
            if nonlocal.is_none() {
                if let Some(z) = (0..m).find(|&z| z != raised && z != lowered && after[z] != before[z]) {
                    nonlocal = Some(make(Violation::NonLocalized {
                        voter: j,
                        raised: AlternativeId(raised),
                        lowered: AlternativeId(lowered),
                        affected: AlternativeId(z),
                    }));
                }
            }
        }
        perverse.is_none() || nonlocal.is_none()
    });
    (AxiomVerdict::from(Axiom::NonPerversity, perverse), AxiomVerdict::from(Axiom::Localizedness, nonlocal))
}

/// Anonymity via adjacent voter transpositions.
pub fn anonymity(analysis: &Analysis) -> AxiomVerdict {
    let witness = match analysis.anonymity() {
        AnonymityEvidence::Verified => None,
        AnonymityEvidence::Violated(w) => Some((**w).clone()),
        AnonymityEvidence::Unchecked => {
            let perms = analysis.perms().clone();
            let mut found = None;
            let mut swapped: Vec<Code> = vec![0; analysis.n()];
            'outer: for (codes, _) in analysis.space().iter_codes() {
                let before = analysis.row(&codes);
                for k in 0..analysis.n() - 1 {
                    if codes[k] == codes[k + 1] {
                        continue;
                    }
                    swapped.copy_from_slice(&codes);
                    swapped.swap(k, k + 1);
                    let after = analysis.lookup(&mut swapped);
                    if after != before {
                        found = Some(Witness {
                            profile: perms.profile(&codes),
                            violation: Violation::Anonymity { voters: (k, k + 1) },
                            before: analysis.lottery(before),
                            after: analysis.lottery(after),
                        });
                        break 'outer;
                    }
                }
            }
            found
        }
    };
    AxiomVerdict::from(Axiom::Anonymity, witness)
}

/// Neutrality via adjacent alternative transpositions `(x_t x_{t+1})`.
pub fn neutrality(analysis: &Analysis) -> AxiomVerdict {
    let perms = analysis.perms().clone();
    let m = analysis.m();
    let relabel: Vec<Vec<Code>> = (0..m.saturating_sub(1))
        .map(|t| {
            let mut map: Vec<AlternativeId> = (0..m).map(AlternativeId).collect();
            map.swap(t, t + 1);
            (0..perms.len() as Code).map(|c| perms.relabeled(c, &map)).collect()
        })
        .collect();
    let mut image: Vec<Code> = vec![0; analysis.n()];
    for (codes, _) in analysis.space().iter_codes() {
        let before = analysis.row(&codes);
        for (t, table) in relabel.iter().enumerate() {
            for (dst, &c) in image.iter_mut().zip(codes.iter()) {
                *dst = table[c as usize];
            }
            let after = analysis.lookup(&mut image);
            let renamed = |z: usize| {
                if z == t {
                    t + 1
                } else if z == t + 1 {
                    t
                } else {
                    z
                }
            };
            if (0..m).any(|z| before[z] != after[renamed(z)]) {
                let witness = Witness {
                    profile: perms.profile(&codes),
                    violation: Violation::Neutrality { alternatives: (AlternativeId(t), AlternativeId(t + 1)) },
                    before: analysis.lottery(before),
                    after: analysis.lottery(after),
                };
                return AxiomVerdict::from(Axiom::Neutrality, Some(witness));
            }
        }
    }
    AxiomVerdict::from(Axiom::Neutrality, None)
}

pub fn audit_strategyproof(
    spec: &SdsSpec,
    m: usize,
    n: usize,
    mode: AnalysisMode,
    budget: Budget,
) -> Result<AxiomReport> {
    let analysis = Analysis::new(spec, m, n, mode, budget)?;
    Ok(report(&analysis, vec![strategyproofness(&analysis)]))
}

pub fn audit_gibbard(spec: &SdsSpec, m: usize, n: usize, mode: AnalysisMode, budget: Budget) -> Result<AxiomReport> {
    let analysis = Analysis::new(spec, m, n, mode, budget)?;
    let (np, loc) = gibbard_conditions(&analysis);
    Ok(report(&analysis, vec![np, loc]))
}

pub fn audit_symmetries(spec: &SdsSpec, m: usize, n: usize, mode: AnalysisMode, budget: Budget) -> Result<AxiomReport> {
    let analysis = Analysis::new(spec, m, n, mode, budget)?;
    Ok(report(&analysis, vec![anonymity(&analysis), neutrality(&analysis)]))
}

/// All five axioms on one shared analysis.
pub fn audit_all(analysis: &Analysis) -> AxiomReport {
    let (np, loc) = gibbard_conditions(analysis);
    report(analysis, vec![strategyproofness(analysis), np, loc, anonymity(analysis), neutrality(analysis)])
}
