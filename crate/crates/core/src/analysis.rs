// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Exhaustive tabulation of a rule over a block-symmetric profile space.
//!
//! Audits and metrics read lotteries from a table indexed by orbit
//! representatives (see [`ProfileSpace`]). A representative table is only
//! sound if the rule really is invariant under permuting voters within each
//! block, so every block structure other than all-singletons is verified
//! against all `(m!)^n` profiles before use.
//!
//! In [`AnalysisMode::Auto`] the blocks are discovered: start from one block
//! of all voters, stream every profile, and on the first profile whose
//! lottery differs from its representative's, bubble-sort that profile
//! towards the representative until an adjacent voter transposition changes
//! the lottery. The block is split at that transposition and verification
//! restarts. The failing transposition is an anonymity witness.

use std::fmt;
use std::sync::Arc;

use crate::axioms::{Violation, Witness};
use crate::enumerate::{profile_count, Budget, Code, EnumerationMode, PermTable, ProfileSpace};
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::lottery::Lottery;
use crate::rules::{decode_full_index, row_lottery, SdsSpec};

/// How the profile space of an analysis is reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AnalysisMode {
    /// Every profile is its own representative.
    Full,
    /// One representative per multiset of preferences; the rule must be anonymous.
    Anonymous,
    /// Largest verified block structure, discovered automatically.
    #[default]
    Auto,
}

impl AnalysisMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AnalysisMode::Full => "full",
            AnalysisMode::Anonymous => "anonymous",
            AnalysisMode::Auto => "auto",
        }
    }
}

impl fmt::Display for AnalysisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AnalysisMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(AnalysisMode::Full),
            "anonymous" => Ok(AnalysisMode::Anonymous),
            "auto" => Ok(AnalysisMode::Auto),
            other => Err(Error::Precondition(format!("unknown mode {other:?}; expected full, anonymous or auto"))),
        }
    }
}

impl From<EnumerationMode> for AnalysisMode {
    fn from(mode: EnumerationMode) -> Self {
        match mode {
            EnumerationMode::Full => AnalysisMode::Full,
            EnumerationMode::Anonymous => AnalysisMode::Anonymous,
        }
    }
}

/// What the analysis established about anonymity.
#[derive(Clone, Debug)]
pub enum AnonymityEvidence {
    /// Invariance under all voter permutations was verified exhaustively.
    Verified,
    /// An adjacent voter transposition changes the lottery.
    Violated(Box<Witness>),
    /// Not examined (full mode).
    Unchecked,
}

/// A rule tabulated on the representatives of a verified block-symmetric space.
pub struct Analysis {
    spec: SdsSpec,
    kernel: Kernel,
    space: ProfileSpace,
    values: Vec<i64>,
    mode: AnalysisMode,
    anonymity: AnonymityEvidence,
    evaluations: u128,
}

impl Analysis {
    pub fn new(spec: &SdsSpec, m: usize, n: usize, mode: AnalysisMode, budget: Budget) -> Result<Analysis> {
        if m == 0 || n == 0 {
            return Err(Error::Precondition("analysis needs m >= 1 and n >= 1".into()));
        }
        let perms = Arc::new(PermTable::new(m)?);
        let mut kernel = Kernel::compile_with(spec, perms.clone(), n)?;
        let full_count = profile_count(m, n, EnumerationMode::Full);
        let mut evaluations = 0u128;
        let initial = match mode {
            AnalysisMode::Full => vec![1; n],
            AnalysisMode::Anonymous | AnalysisMode::Auto => vec![n],
        };
        let mut sizes = initial;
        let mut first_violation: Option<Witness> = None;
        loop {
            let space = ProfileSpace::new(perms.clone(), &sizes)?;
            let verify = !space.is_full();
            let required = evaluations + u128::from(space.len()) + if verify { full_count } else { 0 };
            budget.check(required)?;
            let values = tabulate_space(&kernel, &space);
            evaluations += u128::from(space.len());
            let mut analysis = Analysis {
                spec: spec.clone(),
                kernel,
                space,
                values,
                mode,
                anonymity: AnonymityEvidence::Unchecked,
                evaluations,
            };
            if !verify {
                if analysis.space.block_count() == 1 {
                    analysis.anonymity = AnonymityEvidence::Verified;
                } else if let Some(w) = first_violation {
                    analysis.anonymity = AnonymityEvidence::Violated(Box::new(w));
                }
                return Ok(analysis);
            }
            match analysis.find_block_violation() {
                None => {
                    analysis.anonymity = match first_violation {
                        None => AnonymityEvidence::Verified,
                        Some(w) => AnonymityEvidence::Violated(Box::new(w)),
                    };
                    analysis.evaluations += full_count;
                    return Ok(analysis);
                }
                Some((witness, split_at, spent)) => {
                    if mode == AnalysisMode::Anonymous {
                        return Err(Error::Precondition(format!(
                            "anonymous mode requires an anonymous rule, but {} changes when voters {} and {} swap at {}",
                            spec.name(),
                            split_at + 1,
                            split_at + 2,
                            witness.profile.to_compact_string()
                        )));
                    }
                    evaluations = analysis.evaluations + spent;
                    first_violation.get_or_insert(witness);
                    sizes = split_sizes(&sizes, split_at);
                    kernel = analysis.kernel;
                }
            }
        }
    }

    /// Streams all profiles and returns the first whose lottery differs from
    /// its representative's, as an adjacent-transposition witness, the voter
    /// position after which to split, and the evaluations spent.
    fn find_block_violation(&self) -> Option<(Witness, usize, u128)> {
        let m = self.m();
        let n = self.n();
        let full = ProfileSpace::full(self.kernel.perms().clone(), n).expect("full space");
        let mut row = vec![0i64; m];
        let mut canon = vec![0 as Code; n];
        let mut spent = 0u128;
        for (codes, _) in full.iter_codes() {
            canon.copy_from_slice(&codes);
            self.space.canonicalize(&mut canon);
            if canon[..] == codes[..] {
                spent += 1;
                continue;
            }
            self.kernel.eval(&codes, &mut row);
            spent += 1;
            if row[..] == *self.row(&canon) {
                continue;
            }
            // Walk from the profile to its representative by adjacent swaps.
            let mut current: Vec<Code> = codes.to_vec();
            let mut before = row.clone();
            let mut after = vec![0i64; m];
            for b in 0..self.space.block_count() {
                let range = self.space.block(b);
                while let Some(k) = range.clone().take(range.len() - 1).find(|&k| current[k] > current[k + 1]) {
                    let mut next = current.clone();
                    next.swap(k, k + 1);
                    self.kernel.eval(&next, &mut after);
                    spent += 1;
                    if after != before {
                        let perms = self.kernel.perms();
                        let witness = Witness {
                            profile: perms.profile(&current),
                            violation: Violation::Anonymity { voters: (k, k + 1) },
                            before: row_lottery(&before, self.denom()),
                            after: row_lottery(&after, self.denom()),
                        };
                        return Some((witness, k, spent));
                    }
                    current = next;
                    before.copy_from_slice(&after);
                }
            }
            unreachable!("lottery changed along a path of unchanged lotteries");
        }
        None
    }

    pub fn spec(&self) -> &SdsSpec {
        &self.spec
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn perms(&self) -> &Arc<PermTable> {
        self.kernel.perms()
    }

    pub fn space(&self) -> &ProfileSpace {
        &self.space
    }

    pub fn m(&self) -> usize {
        self.kernel.m()
    }

    pub fn n(&self) -> usize {
        self.kernel.n()
    }

    pub fn denom(&self) -> i64 {
        self.kernel.denom()
    }

    pub fn mode(&self) -> AnalysisMode {
        self.mode
    }

    pub fn anonymity(&self) -> &AnonymityEvidence {
        &self.anonymity
    }

    /// Rule evaluations spent building and verifying the table.
    pub fn evaluations(&self) -> u128 {
        self.evaluations
    }

    /// Numerators at a canonical representative.
    #[inline]
    pub fn row(&self, canonical: &[Code]) -> &[i64] {
        let m = self.m();
        let index = self.space.index_of(canonical) as usize;
        &self.values[index * m..(index + 1) * m]
    }

    /// Numerators at any profile; `codes` is canonicalized in place.
    #[inline]
    pub fn lookup(&self, codes: &mut [Code]) -> &[i64] {
        self.space.canonicalize(codes);
        self.row(codes)
    }

    #[inline]
    pub fn row_at(&self, index: u64) -> &[i64] {
        let m = self.m();
        &self.values[index as usize * m..(index as usize + 1) * m]
    }

    pub fn lottery(&self, row: &[i64]) -> Lottery {
        row_lottery(row, self.denom())
    }

    /// Numerators for every profile in lexicographic order of the full space.
    pub fn full_values(&self) -> Vec<i64> {
        let m = self.m();
        let n = self.n();
        let count = profile_count(m, n, EnumerationMode::Full) as u64;
        let mut out = Vec::with_capacity(count as usize * m);
        let mut codes = vec![0; n];
        for index in 0..count {
            decode_full_index(self.perms(), index, &mut codes);
            out.extend_from_slice(self.lookup(&mut codes));
        }
        out
    }
}

fn tabulate_space(kernel: &Kernel, space: &ProfileSpace) -> Vec<i64> {
    let m = kernel.m();
    let mut values = Vec::with_capacity(space.len() as usize * m);
    let mut row = vec![0i64; m];
    for (codes, _) in space.iter_codes() {
        kernel.eval(&codes, &mut row);
        values.extend_from_slice(&row);
    }
    values
}

/// Splits the block containing voters `k` and `k + 1` between them.
fn split_sizes(sizes: &[usize], k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut start = 0;
    for &size in sizes {
        if start <= k && k + 1 < start + size {
            out.push(k + 1 - start);
            out.push(start + size - k - 1);
        } else {
            out.push(size);
        }
        start += size;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::ZooRule;

    #[test]
    fn splitting_blocks() {
        assert_eq!(split_sizes(&[5], 0), vec![1, 4]);
        assert_eq!(split_sizes(&[1, 4], 2), vec![1, 2, 2]);
    }

    #[test]
    fn anonymous_rules_keep_one_block() {
        let a = Analysis::new(&SdsSpec::RandomizedCopeland, 3, 4, AnalysisMode::Auto, Budget::default()).unwrap();
        assert_eq!(a.space().block_sizes(), vec![4]);
        assert!(matches!(a.anonymity(), AnonymityEvidence::Verified));
        assert_eq!(a.evaluations(), 1296 + 126);
    }

    #[test]
    fn dropped_voter_is_split_off() {
        let spec = SdsSpec::Zoo(ZooRule::DropVoterCopeland { voter: 0 });
        let a = Analysis::new(&spec, 3, 4, AnalysisMode::Auto, Budget::default()).unwrap();
        assert_eq!(a.space().block_sizes(), vec![1, 3]);
        let AnonymityEvidence::Violated(w) = a.anonymity() else { panic!("expected a violation") };
        assert!(w.replay(&spec).unwrap());
        assert!(Analysis::new(&spec, 3, 4, AnalysisMode::Anonymous, Budget::default()).is_err());
    }

    #[test]
    fn representative_lookups_match_direct_evaluation() {
        let spec = SdsSpec::Zoo(ZooRule::DropVoterCopeland { voter: 2 });
        let a = Analysis::new(&spec, 3, 3, AnalysisMode::Auto, Budget::default()).unwrap();
        let full = ProfileSpace::full(a.perms().clone(), 3).unwrap();
        let mut row = vec![0; 3];
        for (codes, _) in full.iter_codes() {
            a.kernel().eval(&codes, &mut row);
            let mut c = codes.to_vec();
            assert_eq!(a.lookup(&mut c), &row[..]);
        }
    }

    #[test]
    fn budget_counts_verification() {
        let err =
            Analysis::new(&SdsSpec::RandomizedCopeland, 3, 4, AnalysisMode::Auto, Budget::new(1000)).err().unwrap();
        assert_eq!(err, Error::BudgetExceeded { required: 1296 + 126, budget: 1000 });
    }
}
