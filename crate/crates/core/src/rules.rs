// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Rule families and their exact reference evaluator.
//!
//! [`evaluate`] computes lotteries directly from the definitions with
//! arbitrary-precision rationals. Exhaustive analyses use the integer kernel
//! in [`crate::kernel`] instead, which is checked against this evaluator.

use std::fmt;
use std::sync::Arc;

use crate::axioms::sd_prefers;
use crate::enumerate::{Code, PermTable};
use crate::error::{Error, Result};
use crate::lottery::Lottery;
use crate::model::{majority_tally, AlternativeId, Preference, Profile};
use crate::rational::Rational;

/// Point scores `a_1 >= ... >= a_m >= 0` summing to `1/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointScoringVector {
    a: Vec<Rational>,
    n: usize,
}

impl PointScoringVector {
    /// Score for rank `k` (1-based).
    pub fn score(&self, k: usize) -> &Rational {
        &self.a[k - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.a
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Supporting-size scores `b_n >= ... >= b_0 >= 0` with `b_i + b_{n-i} = 2/(m(m-1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportingScoringVector {
    /// Stored as given: `b_n` first.
    b: Vec<Rational>,
    m: usize,
}

impl SupportingScoringVector {
    /// `b_j`: the score for winning against an opponent with `j` supporters.
    pub fn score(&self, j: usize) -> &Rational {
        &self.b[self.n() - j]
    }

    /// Scores in descending index order `b_n, ..., b_0`.
    pub fn values(&self) -> &[Rational] {
        &self.b
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.b.len() - 1
    }
}

/// Duple between `x` and `y`: `x` gets `g[n_xy]`, `y` the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Duple {
    pub x: AlternativeId,
    pub y: AlternativeId,
    pub g: Vec<Rational>,
}

/// A rule that only looks at one voter, given as a table over preference codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unilateral {
    voter: usize,
    table: Vec<Lottery>,
}

impl Unilateral {
    pub fn voter(&self) -> usize {
        self.voter
    }

    pub fn m(&self) -> usize {
        self.table[0].m()
    }

    /// Lottery for the preference with lexicographic code `code`.
    pub fn lottery(&self, code: Code) -> &Lottery {
        &self.table[code as usize]
    }

    pub fn table(&self) -> &[Lottery] {
        &self.table
    }
}

/// Rules used to show that no axiom of the characterizations is redundant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZooRule {
    /// Condorcet winner gets `2/m`, the others share the rest; uniform without a winner.
    Cond2m,
    /// Each consecutive pair of `order` (cyclically) hands `1/m` to its majority winner.
    CyclicPairwise { order: Vec<AlternativeId> },
    /// Randomized Copeland computed without voter `voter` (0-based).
    DropVoterCopeland { voter: usize },
}

/// A rule tabulated on all `(m!)^n` profiles as integer numerators over a
/// shared denominator, in lexicographic profile order.
#[derive(Clone)]
pub struct TabulatedRule {
    perms: Arc<PermTable>,
    n: usize,
    denom: i64,
    numers: Vec<i64>,
}

impl TabulatedRule {
    /// Builds a table from numerators over `denom`, reducing to lowest terms.
    pub fn new(perms: Arc<PermTable>, n: usize, denom: i64, mut numers: Vec<i64>) -> Result<TabulatedRule> {
        let m = perms.m();
        let count = (perms.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if numers.len() as u128 != count * m as u128 {
            return Err(Error::Dimension(format!(
                "tabulation holds {} values, expected {} profiles x {m} alternatives",
                numers.len(),
                count
            )));
        }
        if denom <= 0 {
            return Err(Error::InvalidRule("tabulation denominator must be positive".into()));
        }
        for row in numers.chunks(m) {
            if row.iter().any(|&v| v < 0) || row.iter().sum::<i64>() != denom {
                return Err(Error::InvalidLottery("tabulated row is not a lottery".into()));
            }
        }
        let g = numers.iter().fold(denom, |g, &v| gcd(g, v));
        let denom = denom / g;
        numers.iter_mut().for_each(|v| *v /= g);
        Ok(TabulatedRule { perms, n, denom, numers })
    }

    /// Builds a table from explicit entries; every profile must be present exactly once.
    pub fn from_entries(m: usize, n: usize, entries: Vec<(Profile, Lottery)>) -> Result<TabulatedRule> {
        let perms = Arc::new(PermTable::new(m)?);
        let count = (perms.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if count > (1 << 28) {
            return Err(Error::BudgetExceeded { required: count, budget: 1 << 28 });
        }
        let mut denom = 1i64;
        for (_, lottery) in &entries {
            for p in lottery.probs() {
                denom = checked_lcm(denom, p.denom_i64().ok_or(Error::DenominatorOverflow)?)?;
            }
        }
        let mut numers = vec![-1i64; count as usize * m];
        for (profile, lottery) in entries {
            if profile.m() != m || profile.n() != n || lottery.m() != m {
                return Err(Error::Dimension(format!(
                    "entry {} does not match m = {m}, n = {n}",
                    profile.to_compact_string()
                )));
            }
            let index = full_index(&perms, &perms.codes_of(&profile)) as usize;
            let row = &mut numers[index * m..(index + 1) * m];
            if row[0] >= 0 {
                return Err(Error::InvalidRule(format!("duplicate entry for profile {}", profile.to_compact_string())));
            }
            for (slot, p) in row.iter_mut().zip(lottery.probs()) {
                *slot = p.scaled_i64(denom).ok_or(Error::DenominatorOverflow)?;
            }
        }
        if let Some(missing) = numers.chunks(m).position(|row| row[0] < 0) {
            let mut codes = vec![0; n];
            decode_full_index(&perms, missing as u64, &mut codes);
            return Err(Error::MissingProfile(perms.profile(&codes).to_compact_string()));
        }
        TabulatedRule::new(perms, n, denom, numers)
    }

    pub fn m(&self) -> usize {
        self.perms.m()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perms(&self) -> &Arc<PermTable> {
        &self.perms
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn numers(&self) -> &[i64] {
        &self.numers
    }

    pub fn len(&self) -> usize {
        self.numers.len() / self.m()
    }

    pub fn is_empty(&self) -> bool {
        self.numers.is_empty()
    }

    /// Numerator row for a profile given by its codes.
    pub fn row(&self, codes: &[Code]) -> &[i64] {
        let m = self.m();
        let index = full_index(&self.perms, codes) as usize;
        &self.numers[index * m..(index + 1) * m]
    }

    pub fn lottery_at(&self, index: usize) -> Lottery {
        let m = self.m();
        row_lottery(&self.numers[index * m..(index + 1) * m], self.denom)
    }

    pub fn lottery(&self, profile: &Profile) -> Result<Lottery> {
        if profile.m() != self.m() || profile.n() != self.n {
            return Err(Error::Dimension(format!(
                "tabulated rule is for m = {}, n = {}; profile has m = {}, n = {}",
                self.m(),
                self.n,
                profile.m(),
                profile.n()
            )));
        }
        Ok(row_lottery(self.row(&self.perms.codes_of(profile)), self.denom))
    }

    /// All `(profile, lottery)` pairs in lexicographic profile order.
    pub fn entries(&self) -> impl Iterator<Item = (Profile, Lottery)> + '_ {
        (0..self.len()).map(move |index| {
            let mut codes = vec![0; self.n];
            decode_full_index(&self.perms, index as u64, &mut codes);
            (self.perms.profile(&codes), self.lottery_at(index))
        })
    }
}

impl PartialEq for TabulatedRule {
    fn eq(&self, other: &Self) -> bool {
        self.m() == other.m() && self.n == other.n && self.denom == other.denom && self.numers == other.numers
    }
}

impl Eq for TabulatedRule {}

impl fmt::Debug for TabulatedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TabulatedRule {{ m: {}, n: {}, profiles: {} }}", self.m(), self.n, self.len())
    }
}

pub(crate) fn row_lottery(row: &[i64], denom: i64) -> Lottery {
    Lottery::new_unchecked(row.iter().map(|&v| Rational::new(v, denom)).collect())
}

/// Index of a profile in lexicographic order over all `(m!)^n` profiles.
pub(crate) fn full_index(perms: &PermTable, codes: &[Code]) -> u64 {
    let base = perms.len() as u64;
    codes.iter().fold(0, |acc, &c| acc * base + u64::from(c))
}

pub(crate) fn decode_full_index(perms: &PermTable, mut index: u64, out: &mut [Code]) {
    let base = perms.len() as u64;
    for slot in out.iter_mut().rev() {
        *slot = (index % base) as Code;
        index /= base;
    }
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn checked_lcm(a: i64, b: i64) -> Result<i64> {
    if a == 0 || b == 0 {
        return Ok(a.max(b));
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::DenominatorOverflow)
}

/// Declarative description of a social decision scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SdsSpec {
    PointVoting(PointScoringVector),
    SupportingSize(SupportingScoringVector),
    /// Voter `i` is dictator with probability `weights[i]`; `None` means uniform weights.
    RandomDictatorship(Option<Vec<Rational>>),
    UniformLottery,
    RandomizedBorda,
    RandomizedCopeland,
    Duple(Duple),
    Unilateral(Unilateral),
    Mixture(Vec<(Rational, SdsSpec)>),
    Zoo(ZooRule),
    Tabulated(Arc<TabulatedRule>),
}

impl SdsSpec {
    pub fn uniform_random_dictatorship() -> SdsSpec {
        SdsSpec::RandomDictatorship(None)
    }

    pub fn tabulated(rule: TabulatedRule) -> SdsSpec {
        SdsSpec::Tabulated(Arc::new(rule))
    }

    /// Short human-readable name.
    pub fn name(&self) -> String {
        match self {
            SdsSpec::PointVoting(_) => "point-voting".into(),
            SdsSpec::SupportingSize(_) => "supporting-size".into(),
            SdsSpec::RandomDictatorship(None) => "rd-uniform".into(),
            SdsSpec::RandomDictatorship(Some(_)) => "random-dictatorship".into(),
            SdsSpec::UniformLottery => "uniform".into(),
            SdsSpec::RandomizedBorda => "borda".into(),
            SdsSpec::RandomizedCopeland => "copeland".into(),
            SdsSpec::Duple(d) => format!("duple({},{})", d.x, d.y),
            SdsSpec::Unilateral(u) => format!("unilateral(voter {})", u.voter + 1),
            SdsSpec::Mixture(parts) => {
                let names: Vec<String> = parts.iter().map(|(w, s)| format!("{w}*{}", s.name())).collect();
                format!("mix[{}]", names.join(" + "))
            }
            SdsSpec::Zoo(ZooRule::Cond2m) => "cond2m".into(),
            SdsSpec::Zoo(ZooRule::CyclicPairwise { .. }) => "cyclic".into(),
            SdsSpec::Zoo(ZooRule::DropVoterCopeland { voter }) => format!("drop-voter:{}", voter + 1),
            SdsSpec::Tabulated(_) => "tabulated".into(),
        }
    }

    /// Checks that the rule's parameters fit profiles with `m` alternatives and `n` voters.
    pub fn check_dimensions(&self, m: usize, n: usize) -> Result<()> {
        let mismatch = |what: String| Err(Error::Dimension(what));
        match self {
            SdsSpec::PointVoting(a) if a.m() != m || a.n() != n => mismatch(format!(
                "point scoring vector is for m = {}, n = {}; profile has m = {m}, n = {n}",
                a.m(),
                a.n()
            )),
            SdsSpec::SupportingSize(b) if b.m() != m || b.n() != n => mismatch(format!(
                "supporting scoring vector is for m = {}, n = {}; profile has m = {m}, n = {n}",
                b.m(),
                b.n()
            )),
            SdsSpec::RandomDictatorship(Some(w)) if w.len() != n => {
                mismatch(format!("{} dictatorship weights for {n} voters", w.len()))
            }
            SdsSpec::Duple(d) if d.x.0 >= m || d.y.0 >= m || d.g.len() != n + 1 => {
                mismatch(format!("duple parameters do not fit m = {m}, n = {n}"))
            }
            SdsSpec::Unilateral(u) if u.m() != m || u.voter >= n => {
                mismatch(format!("unilateral for voter {} over {} alternatives", u.voter + 1, u.m()))
            }
            SdsSpec::Mixture(parts) => parts.iter().try_for_each(|(_, s)| s.check_dimensions(m, n)),
            SdsSpec::Zoo(rule) => {
                if m < 3 {
                    return Err(Error::Precondition(format!("zoo rules need m >= 3, got m = {m}")));
                }
                match rule {
                    ZooRule::CyclicPairwise { order } if order.len() != m => {
                        mismatch(format!("cyclic order lists {} alternatives, profile has {m}", order.len()))
                    }
                    ZooRule::DropVoterCopeland { voter } if *voter >= n || n < 2 => {
                        mismatch(format!("cannot drop voter {} from {n} voters", voter + 1))
                    }
                    _ => Ok(()),
                }
            }
            SdsSpec::Tabulated(t) if t.m() != m || t.n() != n => {
                mismatch(format!("tabulated rule is for m = {}, n = {}; profile has m = {m}, n = {n}", t.m(), t.n()))
            }
            _ => Ok(()),
        }
    }
}

/// Validates a point scoring vector; `n` is inferred from `Σ a = 1/n`.
pub fn make_point_voting(a: Vec<Rational>) -> Result<SdsSpec> {
    if a.is_empty() {
        return Err(Error::InvalidRule("empty point scoring vector".into()));
    }
    if let Some(v) = a.iter().find(|v| v.is_negative()) {
        return Err(Error::InvalidRule(format!("negative point score {v}")));
    }
    if a.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidRule("point scores must be nonincreasing".into()));
    }
    let total: Rational = a.iter().sum();
    let n = match (!total.is_zero()).then(|| total.recip()) {
        Some(inv) if inv.denom() == &1.into() && inv.numer() > &0.into() => {
            inv.scaled_i64(1).and_then(|v| usize::try_from(v).ok())
        }
        _ => None,
    };
    let n = n.ok_or_else(|| Error::InvalidRule(format!("point scores sum to {total}, not 1/n for an integer n")))?;
    Ok(SdsSpec::PointVoting(PointScoringVector { a, n }))
}

/// Validates a supporting scoring vector given as `(b_n, ..., b_0)`; `n` is the
/// length minus one and `m` is inferred from `b_0 + b_n = 2/(m(m-1))`.
pub fn make_supporting_size(b: Vec<Rational>) -> Result<SdsSpec> {
    if b.len() < 2 {
        return Err(Error::InvalidRule("supporting scoring vector needs at least two entries".into()));
    }
    if let Some(v) = b.iter().find(|v| v.is_negative()) {
        return Err(Error::InvalidRule(format!("negative supporting score {v}")));
    }
    if b.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidRule("supporting scores must satisfy b_n >= ... >= b_0".into()));
    }
    let n = b.len() - 1;
    let pair = &b[0] + &b[n];
    let m = infer_m_from_pair_sum(&pair)
        .ok_or_else(|| Error::InvalidRule(format!("b_0 + b_n = {pair} is not 2/(m(m-1)) for any m >= 2")))?;
    for i in 0..=n {
        if &b[i] + &b[n - i] != pair {
            return Err(Error::InvalidRule(format!(
                "b_{} + b_{} = {} but must equal {pair}",
                n - i,
                i,
                &b[i] + &b[n - i]
            )));
        }
    }
    Ok(SdsSpec::SupportingSize(SupportingScoringVector { b, m }))
}

fn infer_m_from_pair_sum(pair: &Rational) -> Option<usize> {
    if pair.is_zero() || pair.is_negative() {
        return None;
    }
    let target = (Rational::from_integer(2) / pair).scaled_i64(1)?;
    (2..)
        .map(|m: i64| (m, m * (m - 1)))
        .take_while(|&(_, p)| p <= target)
        .find(|&(_, p)| p == target)
        .map(|(m, _)| m as usize)
}

/// Point scoring vector of randomized Borda for `(m, n)`: `a_k = 2(m-k)/(n m (m-1))`.
pub fn borda_point_vector(m: usize, n: usize) -> Vec<Rational> {
    if m == 1 {
        return vec![Rational::new(1, n as i64)];
    }
    let den = (n * m * (m - 1)) as i64;
    (1..=m).map(|k| Rational::new(2 * (m - k) as i64, den)).collect()
}

/// Supporting vector `(b_n, ..., b_0)` of randomized Borda: `b_j = 2j/(n m (m-1))`.
pub fn borda_supporting_vector(m: usize, n: usize) -> Vec<Rational> {
    let den = (n * m * (m - 1)) as i64;
    (0..=n).rev().map(|j| Rational::new(2 * j as i64, den)).collect()
}

/// Supporting vector `(b_n, ..., b_0)` of randomized Copeland.
pub fn copeland_supporting_vector(m: usize, n: usize) -> Vec<Rational> {
    let mm = (m * (m - 1)) as i64;
    (0..=n)
        .rev()
        .map(|j| match (2 * j).cmp(&n) {
            std::cmp::Ordering::Greater => Rational::new(2, mm),
            std::cmp::Ordering::Equal => Rational::new(1, mm),
            std::cmp::Ordering::Less => Rational::zero(),
        })
        .collect()
}

/// Validates a duple: distinct alternatives and `g` nondecreasing in `[0, 1]`.
pub fn make_duple(x: AlternativeId, y: AlternativeId, g: Vec<Rational>) -> Result<SdsSpec> {
    if x == y {
        return Err(Error::InvalidRule("duple alternatives must differ".into()));
    }
    if g.is_empty() {
        return Err(Error::InvalidRule("duple needs g(0..=n)".into()));
    }
    if g.iter().any(|v| v.is_negative() || v > &Rational::one()) {
        return Err(Error::InvalidRule("duple probabilities must lie in [0, 1]".into()));
    }
    if g.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidRule("duple g must be nondecreasing in the support of x".into()));
    }
    Ok(SdsSpec::Duple(Duple { x, y, g }))
}

/// Builds a unilateral for `voter` from a table covering every preference.
/// The table must make truthful reporting stochastically dominant.
pub fn make_unilateral(voter: usize, entries: Vec<(Preference, Lottery)>) -> Result<SdsSpec> {
    let m = entries.first().map(|(p, _)| p.m()).ok_or_else(|| Error::InvalidRule("empty unilateral table".into()))?;
    let perms = PermTable::new(m)?;
    let mut table: Vec<Option<Lottery>> = vec![None; perms.len()];
    for (pref, lottery) in entries {
        if pref.m() != m || lottery.m() != m {
            return Err(Error::Dimension("unilateral entries disagree on m".into()));
        }
        let slot = &mut table[perms.code_of(&pref) as usize];
        if slot.is_some() {
            return Err(Error::InvalidRule(format!("duplicate unilateral entry for {pref}")));
        }
        *slot = Some(lottery);
    }
    let table: Vec<Lottery> = table
        .into_iter()
        .enumerate()
        .map(|(code, l)| {
            l.ok_or_else(|| Error::InvalidRule(format!("unilateral table lacks {}", perms.pref(code as Code))))
        })
        .collect::<Result<_>>()?;
    for truth in 0..perms.len() {
        for lie in 0..perms.len() {
            if !sd_prefers(perms.pref(truth as Code), &table[truth], &table[lie])? {
                return Err(Error::InvalidRule(format!(
                    "unilateral is manipulable: {} gains by reporting {}",
                    perms.pref(truth as Code),
                    perms.pref(lie as Code)
                )));
            }
        }
    }
    Ok(SdsSpec::Unilateral(Unilateral { voter, table }))
}

/// Validates a zoo rule.
pub fn make_zoo(rule: ZooRule) -> Result<SdsSpec> {
    if let ZooRule::CyclicPairwise { order } = &rule {
        let m = order.len();
        if m < 3 {
            return Err(Error::Precondition(format!("zoo rules need m >= 3, got m = {m}")));
        }
        let mut seen = vec![false; m];
        for x in order {
            if x.0 >= m || std::mem::replace(&mut seen[x.0], true) {
                return Err(Error::InvalidRule("cyclic order is not a permutation of the alternatives".into()));
            }
        }
    }
    Ok(SdsSpec::Zoo(rule))
}

/// Cyclic pairwise rule over `a, b, c, ...` in index order.
pub fn cyclic_in_index_order(m: usize) -> Result<SdsSpec> {
    make_zoo(ZooRule::CyclicPairwise { order: (0..m).map(AlternativeId).collect() })
}

/// Names accepted by [`named_rule`].
pub const REGISTRY: [&str; 7] = ["rd-uniform", "uniform", "borda", "copeland", "cond2m", "cyclic", "drop-voter"];

/// Resolves a registry name for `m` alternatives. `drop-voter` drops voter 1
/// unless written `drop-voter:J` (1-based).
pub fn named_rule(name: &str, m: usize) -> Result<SdsSpec> {
    Ok(match name {
        "rd-uniform" => SdsSpec::uniform_random_dictatorship(),
        "uniform" => SdsSpec::UniformLottery,
        "borda" => SdsSpec::RandomizedBorda,
        "copeland" => SdsSpec::RandomizedCopeland,
        "cond2m" => make_zoo(ZooRule::Cond2m)?,
        "cyclic" => cyclic_in_index_order(m)?,
        "drop-voter" => make_zoo(ZooRule::DropVoterCopeland { voter: 0 })?,
        other => {
            let voter = other
                .strip_prefix("drop-voter:")
                .and_then(|j| j.parse::<usize>().ok())
                .and_then(|j| j.checked_sub(1))
                .ok_or_else(|| {
                    Error::InvalidRule(format!("unknown rule {other:?}; known rules: {}", REGISTRY.join(", ")))
                })?;
            make_zoo(ZooRule::DropVoterCopeland { voter })?
        }
    })
}

/// Validates mixture weights: non-negative and summing to exactly one.
pub fn make_mixture(components: Vec<(Rational, SdsSpec)>) -> Result<SdsSpec> {
    if components.is_empty() {
        return Err(Error::InvalidRule("empty mixture".into()));
    }
    if let Some((w, _)) = components.iter().find(|(w, _)| w.is_negative()) {
        return Err(Error::InvalidRule(format!("negative mixture weight {w}")));
    }
    let total: Rational = components.iter().map(|(w, _)| w).sum();
    if total != Rational::one() {
        return Err(Error::InvalidRule(format!("mixture weights sum to {total}")));
    }
    Ok(SdsSpec::Mixture(components))
}

/// Copeland score of `x`: wins plus half the ties against every other alternative.
pub fn copeland_score(profile: &Profile, x: AlternativeId) -> Rational {
    let tally = majority_tally(profile);
    let mut twice = 0i64;
    for y in profile.alternatives().filter(|&y| y != x) {
        twice += match tally.support(x, y).cmp(&tally.support(y, x)) {
            std::cmp::Ordering::Greater => 2,
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Less => 0,
        };
    }
    Rational::new(twice, 2)
}

/// Exact lottery selected by `spec` at `profile`.
pub fn evaluate(spec: &SdsSpec, profile: &Profile) -> Result<Lottery> {
    let m = profile.m();
    let n = profile.n();
    spec.check_dimensions(m, n)?;
    if m == 1 {
        return Ok(Lottery::degenerate(1, AlternativeId(0)));
    }
    let probs = evaluate_probs(spec, profile)?;
    Lottery::new(probs).map_err(|e| Error::Internal(format!("{} produced an invalid lottery: {e}", spec.name())))
}

fn evaluate_probs(spec: &SdsSpec, profile: &Profile) -> Result<Vec<Rational>> {
    let m = profile.m();
    let n = profile.n();
    let mut probs = vec![Rational::zero(); m];
    match spec {
        SdsSpec::PointVoting(a) => point_scores(profile, a.values(), &mut probs),
        SdsSpec::SupportingSize(b) => supporting_scores(profile, |j| b.score(j).clone(), &mut probs),
        SdsSpec::RandomDictatorship(weights) => {
            for (i, pref) in profile.voters().iter().enumerate() {
                let w = match weights {
                    Some(w) => w[i].clone(),
                    None => Rational::new(1, n as i64),
                };
                probs[pref.top().0] += w;
            }
        }
        SdsSpec::UniformLottery => probs = Lottery::uniform(m).probs().to_vec(),
        SdsSpec::RandomizedBorda => point_scores(profile, &borda_point_vector(m, n), &mut probs),
        SdsSpec::RandomizedCopeland => {
            let b = copeland_supporting_vector(m, n);
            supporting_scores(profile, |j| b[n - j].clone(), &mut probs);
        }
        SdsSpec::Duple(d) => {
            let p = d.g[majority_tally(profile).support(d.x, d.y)].clone();
            probs[d.y.0] = Rational::one() - &p;
            probs[d.x.0] = p;
        }
        SdsSpec::Unilateral(u) => {
            let perms = PermTable::new(m)?;
            probs = u.lottery(perms.code_of(profile.voter(u.voter))).probs().to_vec();
        }
        SdsSpec::Mixture(parts) => {
            for (w, part) in parts {
                for (acc, p) in probs.iter_mut().zip(evaluate_probs(part, profile)?) {
                    *acc += w * p;
                }
            }
        }
        SdsSpec::Zoo(ZooRule::Cond2m) => match crate::axioms::condorcet_winner(profile) {
            Some(w) => {
                for (x, p) in probs.iter_mut().enumerate() {
                    *p = if x == w.0 {
                        Rational::new(2, m as i64)
                    } else {
                        Rational::new(m as i64 - 2, (m * (m - 1)) as i64)
                    };
                }
            }
            None => probs = Lottery::uniform(m).probs().to_vec(),
        },
        SdsSpec::Zoo(ZooRule::CyclicPairwise { order }) => {
            let tally = majority_tally(profile);
            let share = Rational::new(1, m as i64);
            for k in 0..m {
                let (x, y) = (order[k], order[(k + 1) % m]);
                match tally.support(x, y).cmp(&tally.support(y, x)) {
                    std::cmp::Ordering::Greater => probs[x.0] += &share,
                    std::cmp::Ordering::Less => probs[y.0] += &share,
                    std::cmp::Ordering::Equal => {
                        let half = Rational::new(1, 2 * m as i64);
                        probs[x.0] += &half;
                        probs[y.0] += half;
                    }
                }
            }
        }
        SdsSpec::Zoo(ZooRule::DropVoterCopeland { voter }) => {
            let reduced = profile.without_voter(*voter)?;
            probs = evaluate_probs(&SdsSpec::RandomizedCopeland, &reduced)?;
        }
        SdsSpec::Tabulated(t) => probs = t.lottery(profile)?.probs().to_vec(),
    }
    Ok(probs)
}

fn point_scores(profile: &Profile, a: &[Rational], probs: &mut [Rational]) {
    for pref in profile.voters() {
        for (k, x) in pref.ranking().iter().enumerate() {
            probs[x.0] += &a[k];
        }
    }
}

fn supporting_scores(profile: &Profile, b: impl Fn(usize) -> Rational, probs: &mut [Rational]) {
    let tally = majority_tally(profile);
    for x in profile.alternatives() {
        for y in profile.alternatives().filter(|&y| y != x) {
            probs[x.0] += b(tally.support(x, y));
        }
    }
}

/// Exact tabulation of `spec` on all `(m!)^n` profiles.
pub fn tabulate(spec: &SdsSpec, m: usize, n: usize, budget: crate::enumerate::Budget) -> Result<TabulatedRule> {
    let full = crate::enumerate::profile_count(m, n, crate::enumerate::EnumerationMode::Full);
    budget.check(full)?;
    spec.check_dimensions(m, n)?;
    let kernel = crate::kernel::Kernel::compile(spec, m, n)?;
    let mut numers = Vec::with_capacity(full as usize * m);
    let mut codes = vec![0; n];
    let mut row = vec![0i64; m];
    for index in 0..full as u64 {
        decode_full_index(kernel.perms(), index, &mut codes);
        kernel.eval(&codes, &mut row);
        numers.extend_from_slice(&row);
    }
    TabulatedRule::new(kernel.perms().clone(), n, kernel.denom(), numers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::Budget;
    use crate::model::{alt, parse_profile};
    use crate::rational::q;

    fn fig1_r() -> Profile {
        parse_profile("a>c>b / b>c>a / c>a>b").unwrap()
    }

    fn fig1_r_prime() -> Profile {
        parse_profile("a>b>c / b>c>a / c>a>b").unwrap()
    }

    fn eval(spec: &SdsSpec, p: &Profile) -> Vec<Rational> {
        evaluate(spec, p).unwrap().probs().to_vec()
    }

    #[test]
    fn figure_one_lotteries() {
        let r = fig1_r();
        assert_eq!(eval(&SdsSpec::RandomizedCopeland, &r), [q(1, 3), q(0, 1), q(2, 3)]);
        assert_eq!(eval(&SdsSpec::uniform_random_dictatorship(), &r), vec![q(1, 3); 3]);
        assert_eq!(eval(&SdsSpec::RandomizedBorda, &r), [q(1, 3), q(2, 9), q(4, 9)]);
        assert_eq!(eval(&SdsSpec::RandomizedCopeland, &fig1_r_prime()), vec![q(1, 3); 3]);
        assert_eq!(eval(&SdsSpec::Zoo(ZooRule::Cond2m), &r), [q(1, 6), q(1, 6), q(2, 3)]);
        assert_eq!(eval(&cyclic_in_index_order(3).unwrap(), &fig1_r_prime()), vec![q(1, 3); 3]);
        let mix = make_mixture(vec![
            (q(1, 2), SdsSpec::uniform_random_dictatorship()),
            (q(1, 2), SdsSpec::RandomizedCopeland),
        ])
        .unwrap();
        assert_eq!(eval(&mix, &r), [q(1, 3), q(1, 6), q(1, 2)]);
    }

    #[test]
    fn copeland_scores() {
        assert_eq!(copeland_score(&fig1_r(), alt(2)), q(2, 1));
        assert_eq!(copeland_score(&fig1_r_prime(), alt(0)), q(1, 1));
        let unanimous = parse_profile("3: b>a>c>d").unwrap();
        assert_eq!(copeland_score(&unanimous, alt(1)), q(3, 1));
        let tied = parse_profile("a>b / b>a").unwrap();
        assert_eq!(copeland_score(&tied, alt(0)), q(1, 2));
    }

    #[test]
    fn point_voting_constructor() {
        let rd = make_point_voting(vec![q(1, 3), q(0, 1), q(0, 1)]).unwrap();
        assert_eq!(eval(&rd, &fig1_r()), eval(&SdsSpec::uniform_random_dictatorship(), &fig1_r()));
        let flat = make_point_voting(vec![q(1, 9); 3]).unwrap();
        assert_eq!(eval(&flat, &fig1_r()), vec![q(1, 3); 3]);
        assert!(make_point_voting(vec![q(0, 1), q(1, 6), q(1, 6)]).is_err());
        assert!(make_point_voting(vec![q(1, 5), q(1, 7)]).is_err());
        assert!(make_point_voting(vec![q(1, 3), q(-1, 3), q(1, 3)]).is_err());
    }

    #[test]
    fn supporting_size_constructor() {
        let copeland = make_supporting_size(vec![q(1, 3), q(1, 3), q(0, 1), q(0, 1)]).unwrap();
        let SdsSpec::SupportingSize(v) = &copeland else { panic!() };
        assert_eq!((v.m(), v.n()), (3, 3));
        assert_eq!(eval(&copeland, &fig1_r()), eval(&SdsSpec::RandomizedCopeland, &fig1_r()));
        let flat = make_supporting_size(vec![q(1, 6); 4]).unwrap();
        assert_eq!(eval(&flat, &fig1_r()), vec![q(1, 3); 3]);
        assert!(make_supporting_size(vec![q(2, 9), q(1, 9), q(1, 9), q(0, 1)]).is_err());
        assert!(make_supporting_size(vec![q(1, 3), q(1, 6), q(1, 6), q(1, 6)]).is_err());
        assert!(make_supporting_size(vec![q(0, 1), q(1, 3)]).is_err());
    }

    #[test]
    fn mixture_weights_validated() {
        assert!(make_mixture(vec![(q(3, 5), SdsSpec::UniformLottery), (q(3, 5), SdsSpec::RandomizedBorda)]).is_err());
        assert!(make_mixture(vec![(q(-1, 2), SdsSpec::UniformLottery), (q(3, 2), SdsSpec::RandomizedBorda)]).is_err());
        let single = make_mixture(vec![(q(1, 1), SdsSpec::RandomizedBorda)]).unwrap();
        assert_eq!(eval(&single, &fig1_r()), eval(&SdsSpec::RandomizedBorda, &fig1_r()));
    }

    #[test]
    fn zoo_parameters() {
        assert!(make_zoo(ZooRule::CyclicPairwise { order: vec![alt(0), alt(0), alt(1)] }).is_err());
        assert!(make_zoo(ZooRule::CyclicPairwise { order: vec![alt(0), alt(1)] }).is_err());
        let drop = SdsSpec::Zoo(ZooRule::DropVoterCopeland { voter: 2 });
        let unanimous = parse_profile("3: c>a>b").unwrap();
        assert_eq!(eval(&drop, &unanimous), eval(&SdsSpec::RandomizedCopeland, &unanimous));
        assert!(evaluate(&SdsSpec::Zoo(ZooRule::DropVoterCopeland { voter: 5 }), &unanimous).is_err());
        assert!(evaluate(&SdsSpec::Zoo(ZooRule::Cond2m), &parse_profile("a>b").unwrap()).is_err());
    }

    #[test]
    fn duples_and_unilaterals() {
        let duple = make_duple(alt(0), alt(2), vec![q(0, 1), q(1, 4), q(3, 4), q(1, 1)]).unwrap();
        assert_eq!(eval(&duple, &fig1_r()), [q(1, 4), q(0, 1), q(3, 4)]);
        assert!(make_duple(alt(0), alt(1), vec![q(1, 2), q(1, 4)]).is_err());

        let perms = PermTable::new(3).unwrap();
        let top = |code| (perms.pref(code).clone(), Lottery::degenerate(3, perms.pref(code).top()));
        let dictator = make_unilateral(1, (0..6).map(top).collect()).unwrap();
        assert_eq!(eval(&dictator, &fig1_r()), [q(0, 1), q(1, 1), q(0, 1)]);
        let bottom = |code: Code| {
            let p = perms.pref(code).clone();
            let worst = p.at(2);
            (p, Lottery::degenerate(3, worst))
        };
        assert!(make_unilateral(0, (0..6).map(bottom).collect()).is_err());
        assert!(make_unilateral(0, (0..5).map(top).collect()).is_err());
    }

    #[test]
    fn dimension_errors() {
        let copeland = make_supporting_size(vec![q(1, 3), q(1, 3), q(0, 1), q(0, 1)]).unwrap();
        let four_voters = parse_profile("4: a>b>c").unwrap();
        assert!(matches!(evaluate(&copeland, &four_voters), Err(Error::Dimension(_))));
        let weights = SdsSpec::RandomDictatorship(Some(vec![q(1, 2), q(1, 2)]));
        assert!(evaluate(&weights, &fig1_r()).is_err());
    }

    #[test]
    fn borda_vectors_agree() {
        for (m, n) in [(3, 3), (3, 4), (4, 3)] {
            let point =
                tabulate(&make_point_voting(borda_point_vector(m, n)).unwrap(), m, n, Budget::default()).unwrap();
            let support =
                tabulate(&make_supporting_size(borda_supporting_vector(m, n)).unwrap(), m, n, Budget::default())
                    .unwrap();
            assert_eq!(point, support);
            assert_eq!(point, tabulate(&SdsSpec::RandomizedBorda, m, n, Budget::default()).unwrap());
        }
        assert_eq!(tabulate(&SdsSpec::RandomizedBorda, 3, 3, Budget::default()).unwrap().len(), 216);
    }

    #[test]
    fn tabulation_round_trips_through_entries() {
        let tab = tabulate(&SdsSpec::RandomizedCopeland, 3, 2, Budget::default()).unwrap();
        let rebuilt = TabulatedRule::from_entries(3, 2, tab.entries().collect()).unwrap();
        assert_eq!(tab, rebuilt);
        let mut partial: Vec<_> = tab.entries().collect();
        partial.pop();
        assert!(matches!(TabulatedRule::from_entries(3, 2, partial), Err(Error::MissingProfile(_))));
        let spec = SdsSpec::tabulated(tab);
        assert_eq!(eval(&spec, &parse_profile("a>b>c / c>b>a").unwrap()), vec![q(1, 3); 3]);
    }

    #[test]
    fn registry_names_resolve() {
        for m in [3, 4] {
            for name in REGISTRY {
                named_rule(name, m).unwrap();
            }
        }
        assert_eq!(named_rule("drop-voter:2", 3).unwrap(), SdsSpec::Zoo(ZooRule::DropVoterCopeland { voter: 1 }));
        assert!(named_rule("drop-voter:0", 3).is_err());
        assert!(named_rule("plurality", 3).is_err());
        assert!(named_rule("cyclic", 2).is_err());
    }
}
