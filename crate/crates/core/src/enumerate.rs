// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Exhaustive profile enumeration.
//!
//! A preference is encoded by its *code*, the lexicographic rank of its
//! ranking among all `m!` permutations. A profile is then a sequence of `n`
//! codes. A [`ProfileSpace`] partitions the voters into contiguous blocks and
//! keeps one representative per orbit of the within-block permutations: the
//! codes inside every block are sorted ascending. One block of all voters is
//! the anonymous space; `n` singleton blocks is the full space. The index of a
//! representative is its lexicographic rank, so `index -> profile` is a pure
//! bijection usable for range partitioning.

use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::model::{AlternativeId, Preference, Profile};

/// Largest `m` the enumeration engine accepts (`8! = 40320` preferences).
pub const MAX_ENGINE_ALTERNATIVES: usize = 8;

/// Default cap on rule evaluations for one exhaustive operation.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Upper bound on the number of rule evaluations an operation may perform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_evaluations: u128,
}

impl Budget {
    pub fn new(max_evaluations: u128) -> Budget {
        Budget { max_evaluations }
    }

    pub fn unlimited() -> Budget {
        Budget { max_evaluations: u128::MAX }
    }

    /// Reads `SDSLAB_BUDGET`, falling back to [`DEFAULT_BUDGET`].
    pub fn from_env() -> Budget {
        std::env::var("SDSLAB_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&v: &u128| v > 0)
            .map(Budget::new)
            .unwrap_or_default()
    }

    pub fn check(&self, required: u128) -> Result<()> {
        if required > self.max_evaluations {
            Err(Error::BudgetExceeded { required, budget: self.max_evaluations })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

pub type Code = u32;

/// All `m!` preferences in lexicographic order, with lookup tables.
#[derive(Debug)]
pub struct PermTable {
    m: usize,
    prefs: Vec<Preference>,
    positions: Vec<u8>,
    swaps: Vec<Code>,
}

impl PermTable {
    pub fn new(m: usize) -> Result<PermTable> {
        if m == 0 || m > MAX_ENGINE_ALTERNATIVES {
            return Err(Error::Precondition(format!(
                "exhaustive enumeration supports 1 <= m <= {MAX_ENGINE_ALTERNATIVES}, got m = {m}"
            )));
        }
        let mut prefs = Vec::new();
        let mut current: Vec<usize> = (0..m).collect();
        loop {
            prefs.push(Preference::from_indices(&current));
            if !next_permutation(&mut current) {
                break;
            }
        }
        let count = prefs.len();
        let mut positions = vec![0u8; count * m];
        for (code, p) in prefs.iter().enumerate() {
            for (k, x) in p.ranking().iter().enumerate() {
                positions[code * m + x.0] = k as u8;
            }
        }
        let mut table = PermTable { m, prefs, positions, swaps: Vec::new() };
        let mut swaps = vec![0; count * (m.saturating_sub(1))];
        for code in 0..count {
            for k in 0..m.saturating_sub(1) {
                let swapped = table.prefs[code].swapped_at(k);
                swaps[code * (m - 1) + k] = table.code_of(&swapped);
            }
        }
        table.swaps = swaps;
        Ok(table)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.prefs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefs.is_empty()
    }

    pub fn pref(&self, code: Code) -> &Preference {
        &self.prefs[code as usize]
    }

    /// Zero-based position of `x` in the preference with this code.
    #[inline]
    pub fn position(&self, code: Code, x: usize) -> usize {
        self.positions[code as usize * self.m + x] as usize
    }

    #[inline]
    pub fn at(&self, code: Code, position: usize) -> usize {
        self.prefs[code as usize].ranking()[position].0
    }

    #[inline]
    pub fn top(&self, code: Code) -> usize {
        self.at(code, 0)
    }

    /// Code after exchanging the alternatives at `position` and `position + 1`.
    #[inline]
    pub fn swapped(&self, code: Code, position: usize) -> Code {
        self.swaps[code as usize * (self.m - 1) + position]
    }

    /// Lexicographic rank (Lehmer code) of a preference.
    pub fn code_of(&self, pref: &Preference) -> Code {
        let ranking = pref.ranking();
        let m = ranking.len();
        let mut used = 0u32;
        let mut code = 0usize;
        for (k, x) in ranking.iter().enumerate() {
            let smaller_unused = (0..x.0).filter(|&y| used & (1 << y) == 0).count();
            code += smaller_unused * factorial(m - 1 - k) as usize;
            used |= 1 << x.0;
        }
        code as Code
    }

    pub fn codes_of(&self, profile: &Profile) -> Vec<Code> {
        profile.voters().iter().map(|p| self.code_of(p)).collect()
    }

    pub fn profile(&self, codes: &[Code]) -> Profile {
        Profile::new(codes.iter().map(|&c| self.pref(c).clone()).collect()).expect("valid codes")
    }

    /// Code of the preference obtained by renaming every alternative `x` to `map[x]`.
    pub fn relabeled(&self, code: Code, map: &[AlternativeId]) -> Code {
        self.code_of(&self.pref(code).relabeled(map))
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Whether the enumeration keeps every profile or one per multiset of preferences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    Full,
    Anonymous,
}

/// Profiles over `m` alternatives and `n` voters, one per orbit of the
/// within-block voter permutations.
#[derive(Clone, Debug)]
pub struct ProfileSpace {
    perms: Arc<PermTable>,
    n: usize,
    /// Start offset of each block; block `b` spans `starts[b]..starts[b + 1]`.
    starts: Vec<usize>,
    block_counts: Vec<u64>,
    strides: Vec<u64>,
    len: u64,
    /// `hockey[l][v]` = number of nondecreasing sequences of length `l` over `v..N`.
    hockey: Vec<Vec<u64>>,
}

impl ProfileSpace {
    pub fn new(perms: Arc<PermTable>, block_sizes: &[usize]) -> Result<ProfileSpace> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::Precondition("voter blocks must be non-empty".into()));
        }
        let n: usize = block_sizes.iter().sum();
        let types = perms.len() as u128;
        let mut starts = vec![0];
        for size in block_sizes {
            starts.push(starts.last().unwrap() + size);
        }
        let mut block_counts = Vec::with_capacity(block_sizes.len());
        for &size in block_sizes {
            let count = binomial(types + size as u128 - 1, size as u128);
            block_counts.push(u64::try_from(count).map_err(|_| too_large())?);
        }
        let mut strides = vec![1u64; block_sizes.len()];
        for b in (0..block_sizes.len() - 1).rev() {
            strides[b] = strides[b + 1].checked_mul(block_counts[b + 1]).ok_or_else(too_large)?;
        }
        let len = strides[0].checked_mul(block_counts[0]).ok_or_else(too_large)?;
        let max_len = block_sizes.iter().copied().max().unwrap();
        let hockey =
            (0..=max_len).map(|l| (0..=types).map(|v| nondecreasing_count(types, l as u128, v)).collect()).collect();
        Ok(ProfileSpace { perms, n, starts, block_counts, strides, len, hockey })
    }

    pub fn full(perms: Arc<PermTable>, n: usize) -> Result<ProfileSpace> {
        ProfileSpace::new(perms, &vec![1; n])
    }

    pub fn anonymous(perms: Arc<PermTable>, n: usize) -> Result<ProfileSpace> {
        ProfileSpace::new(perms, &[n])
    }

    pub fn perms(&self) -> &Arc<PermTable> {
        &self.perms
    }

    pub fn m(&self) -> usize {
        self.perms.m()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of representatives.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn block_count(&self) -> usize {
        self.block_counts.len()
    }

    pub fn block(&self, b: usize) -> std::ops::Range<usize> {
        self.starts[b]..self.starts[b + 1]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        (0..self.block_count()).map(|b| self.block(b).len()).collect()
    }

    pub fn is_full(&self) -> bool {
        self.block_count() == self.n
    }

    /// Block containing voter `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.starts.partition_point(|&s| s <= i) - 1
    }

    /// Sorts codes within every block, yielding the orbit representative.
    pub fn canonicalize(&self, codes: &mut [Code]) {
        for b in 0..self.block_count() {
            codes[self.block(b)].sort_unstable();
        }
    }

    /// Index of a representative. `codes` must already be canonical.
    pub fn index_of(&self, codes: &[Code]) -> u64 {
        debug_assert_eq!(codes.len(), self.n);
        let mut index = 0;
        for b in 0..self.block_count() {
            index += self.block_rank(&codes[self.block(b)]) * self.strides[b];
        }
        index
    }

    fn block_rank(&self, seq: &[Code]) -> u64 {
        let k = seq.len();
        if k == 1 {
            return u64::from(seq[0]);
        }
        let mut rank = 0;
        let mut prev = 0usize;
        for (j, &c) in seq.iter().enumerate() {
            let rest = k - 1 - j;
            let c = c as usize;
            // Sequences whose j-th entry is in prev..c, counted by the hockey-stick identity.
            rank += self.sequences_from(rest + 1, prev) - self.sequences_from(rest + 1, c);
            prev = c;
        }
        rank
    }

    /// Nondecreasing sequences of length `len` with values in `from..N`.
    #[inline]
    fn sequences_from(&self, len: usize, from: usize) -> u64 {
        self.hockey[len][from]
    }

    /// The representative with the given index.
    pub fn codes_at(&self, mut index: u64, out: &mut [Code]) {
        assert!(index < self.len, "profile index out of range");
        for b in 0..self.block_count() {
            let rank = index / self.strides[b];
            index %= self.strides[b];
            let range = self.block(b);
            self.unrank_block(rank, &mut out[range]);
        }
    }

    fn unrank_block(&self, mut rank: u64, out: &mut [Code]) {
        let k = out.len();
        if k == 1 {
            out[0] = rank as Code;
            return;
        }
        let mut v = 0usize;
        for (j, slot) in out.iter_mut().enumerate() {
            let rest = k - 1 - j;
            loop {
                let with_v = self.sequences_from(rest, v);
                if rank < with_v {
                    break;
                }
                rank -= with_v;
                v += 1;
            }
            *slot = v as Code;
        }
    }

    pub fn profile_at(&self, index: u64) -> Profile {
        let mut codes = vec![0; self.n];
        self.codes_at(index, &mut codes);
        self.perms.profile(&codes)
    }

    /// Number of full-space profiles in the orbit of a representative.
    pub fn multiplicity(&self, codes: &[Code]) -> u128 {
        let mut total = 1u128;
        for b in 0..self.block_count() {
            let seq = &codes[self.block(b)];
            let mut mult = factorial(seq.len());
            let mut k = 0;
            while k < seq.len() {
                let mut run = 1;
                while k + run < seq.len() && seq[k + run] == seq[k] {
                    run += 1;
                }
                mult /= factorial(run);
                k += run;
            }
            total *= mult;
        }
        total
    }

    /// Advances `codes` to the next representative; false after the last one.
    pub fn advance(&self, codes: &mut [Code]) -> bool {
        let last = self.perms.len() as Code - 1;
        for b in (0..self.block_count()).rev() {
            let block = &mut codes[self.block(b)];
            if let Some(j) = block.iter().rposition(|&c| c < last) {
                let v = block[j] + 1;
                for c in &mut block[j..] {
                    *c = v;
                }
                return true;
            }
            block.iter_mut().for_each(|c| *c = 0);
        }
        false
    }

    /// Iterates over `(representative codes, multiplicity)` in index order.
    pub fn iter_codes(&self) -> CodeIter<'_> {
        CodeIter { space: self, codes: SmallVec::from_elem(0, self.n), started: false, done: self.len == 0 }
    }

    /// Iterates over representatives as [`Profile`] values with their multiplicities.
    pub fn iter(&self) -> impl Iterator<Item = (Profile, u128)> + '_ {
        self.iter_codes().map(|(codes, mult)| (self.perms.profile(&codes), mult))
    }
}

/// Nondecreasing sequences of length `len` with values in `from..types`.
fn nondecreasing_count(types: u128, len: u128, from: u128) -> u64 {
    if len == 0 {
        1
    } else if from >= types {
        0
    } else {
        binomial(types - from + len - 1, len).min(u64::MAX as u128) as u64
    }
}

fn too_large() -> Error {
    Error::BudgetExceeded { required: u128::MAX, budget: u64::MAX as u128 }
}

pub struct CodeIter<'a> {
    space: &'a ProfileSpace,
    codes: SmallVec<[Code; 8]>,
    started: bool,
    done: bool,
}

impl Iterator for CodeIter<'_> {
    type Item = (SmallVec<[Code; 8]>, u128);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.space.advance(&mut self.codes) {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        Some((self.codes.clone(), self.space.multiplicity(&self.codes)))
    }
}

/// Number of profiles an enumeration would visit.
pub fn profile_count(m: usize, n: usize, mode: EnumerationMode) -> u128 {
    let types = factorial(m);
    match mode {
        EnumerationMode::Full => types.checked_pow(n as u32).unwrap_or(u128::MAX),
        EnumerationMode::Anonymous => binomial(types + n as u128 - 1, n as u128),
    }
}

/// Exhaustive profile space for `(m, n)`; full mode visits all `(m!)^n`
/// profiles, anonymous mode one sorted representative per multiset.
pub fn enumerate_profiles(m: usize, n: usize, mode: EnumerationMode, budget: Budget) -> Result<ProfileSpace> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("enumeration needs m >= 1 and n >= 1".into()));
    }
    budget.check(profile_count(m, n, mode))?;
    let perms = Arc::new(PermTable::new(m)?);
    match mode {
        EnumerationMode::Full => ProfileSpace::full(perms, n),
        EnumerationMode::Anonymous => ProfileSpace::anonymous(perms, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(m: usize) -> Arc<PermTable> {
        Arc::new(PermTable::new(m).unwrap())
    }

    #[test]
    fn permutation_codes_are_lexicographic() {
        let t = table(3);
        let labels: Vec<String> = (0..6).map(|c| t.pref(c).to_string()).collect();
        assert_eq!(labels, ["a>b>c", "a>c>b", "b>a>c", "b>c>a", "c>a>b", "c>b>a"]);
        for c in 0..6 {
            assert_eq!(t.code_of(t.pref(c)), c);
        }
        assert_eq!(t.swapped(1, 1), 0);
        assert_eq!(t.position(4, 0), 1);
    }

    #[test]
    fn counts() {
        let full = enumerate_profiles(3, 3, EnumerationMode::Full, Budget::default()).unwrap();
        assert_eq!(full.len(), 216);
        assert_eq!(full.iter().count(), 216);
        let anon = enumerate_profiles(4, 5, EnumerationMode::Anonymous, Budget::default()).unwrap();
        assert_eq!(anon.len(), 98280);
        assert_eq!(enumerate_profiles(2, 1, EnumerationMode::Full, Budget::default()).unwrap().len(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let err = enumerate_profiles(4, 5, EnumerationMode::Full, Budget::new(1000)).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { required: 7_962_624, budget: 1000 });
    }

    #[test]
    fn anonymous_multiplicities_sum_to_full_count() {
        for (m, n) in [(3, 3), (3, 4), (2, 5), (4, 3)] {
            let space = ProfileSpace::anonymous(table(m), n).unwrap();
            let total: u128 = space.iter_codes().map(|(_, mult)| mult).sum();
            assert_eq!(total, profile_count(m, n, EnumerationMode::Full));
        }
    }

    #[test]
    fn index_and_unrank_agree_with_iteration_order() {
        for sizes in [vec![3], vec![1, 1, 1], vec![2, 1], vec![1, 3], vec![2, 2]] {
            let space = ProfileSpace::new(table(3), &sizes).unwrap();
            let mut buf = vec![0; space.n()];
            let mut seen = 0;
            for (k, (codes, _)) in space.iter_codes().enumerate() {
                assert_eq!(space.index_of(&codes), k as u64, "blocks {sizes:?}");
                space.codes_at(k as u64, &mut buf);
                assert_eq!(&buf[..], &codes[..]);
                seen += 1;
            }
            assert_eq!(seen, space.len());
        }
    }

    #[test]
    fn block_multiplicities() {
        let space = ProfileSpace::new(table(3), &[2, 1]).unwrap();
        let total: u128 = space.iter_codes().map(|(_, mult)| mult).sum();
        assert_eq!(total, 216);
        assert_eq!(space.block_of(0), 0);
        assert_eq!(space.block_of(2), 1);
    }
}
