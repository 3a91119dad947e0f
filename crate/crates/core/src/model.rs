// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Alternatives, strict preferences, profiles and the pairwise majority tally.
//!
//! Alternatives are dense indices `0..m`. In text they are written as the
//! letters `a..z`, which caps the text format at 26 alternatives; the
//! programmatic API has no such cap.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AlternativeId(pub usize);

impl AlternativeId {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn label(self) -> String {
        if self.0 < 26 {
            char::from(b'a' + self.0 as u8).to_string()
        } else {
            format!("x{}", self.0)
        }
    }

    pub fn from_label(label: &str) -> Option<AlternativeId> {
        let mut chars = label.chars();
        match (chars.next(), chars.next()) {
            (Some(c @ 'a'..='z'), None) => Some(AlternativeId(c as usize - 'a' as usize)),
            _ => None,
        }
    }
}

impl fmt::Display for AlternativeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Shorthand for `AlternativeId(i)`.
pub const fn alt(i: usize) -> AlternativeId {
    AlternativeId(i)
}

/// A strict linear order over all `m` alternatives, best first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Preference {
    ranking: SmallVec<[AlternativeId; 8]>,
}

impl Preference {
    pub fn new(ranking: Vec<AlternativeId>) -> Result<Preference> {
        let m = ranking.len();
        if m == 0 {
            return Err(Error::InvalidPreference("empty ranking".into()));
        }
        let mut seen = vec![false; m];
        for &x in &ranking {
            if x.0 >= m {
                return Err(Error::InvalidPreference(format!("alternative {x} out of range for m = {m}")));
            }
            if std::mem::replace(&mut seen[x.0], true) {
                return Err(Error::InvalidPreference(format!("duplicate alternative {x}")));
            }
        }
        Ok(Preference { ranking: ranking.into() })
    }

    /// Builds a preference from raw indices; panics on an invalid permutation.
    pub fn from_indices(indices: &[usize]) -> Preference {
        Preference::new(indices.iter().map(|&i| AlternativeId(i)).collect()).expect("indices must form a permutation")
    }

    pub fn identity(m: usize) -> Preference {
        Preference { ranking: (0..m).map(AlternativeId).collect() }
    }

    pub fn m(&self) -> usize {
        self.ranking.len()
    }

    pub fn ranking(&self) -> &[AlternativeId] {
        &self.ranking
    }

    pub fn top(&self) -> AlternativeId {
        self.ranking[0]
    }

    pub fn at(&self, position: usize) -> AlternativeId {
        self.ranking[position]
    }

    /// Zero-based position of `x` (0 for the top alternative).
    pub fn position(&self, x: AlternativeId) -> usize {
        self.ranking.iter().position(|&y| y == x).expect("alternative belongs to the preference")
    }

    /// Number of alternatives weakly preferred to `x`, i.e. 1 for the top.
    pub fn rank(&self, x: AlternativeId) -> usize {
        self.position(x) + 1
    }

    pub fn prefers(&self, x: AlternativeId, y: AlternativeId) -> bool {
        self.position(x) < self.position(y)
    }

    pub fn reversed(&self) -> Preference {
        let mut ranking = self.ranking.clone();
        ranking.reverse();
        Preference { ranking }
    }

    /// Swaps the alternatives at `position` and `position + 1`.
    pub fn swapped_at(&self, position: usize) -> Preference {
        let mut ranking = self.ranking.clone();
        ranking.swap(position, position + 1);
        Preference { ranking }
    }

    /// Relabels every alternative through `map` (indexed by old alternative).
    pub fn relabeled(&self, map: &[AlternativeId]) -> Preference {
        Preference { ranking: self.ranking.iter().map(|x| map[x.0]).collect() }
    }

    /// Parses `a>c>b`; the number of alternatives is the ranking length.
    pub fn parse(text: &str) -> Result<Preference> {
        let labels: Vec<&str> = text.split('>').map(str::trim).collect();
        let m = labels.len();
        let mut ranking = Vec::with_capacity(m);
        for label in labels {
            let x = AlternativeId::from_label(label)
                .filter(|x| x.0 < m)
                .ok_or_else(|| Error::InvalidPreference(format!("unknown alternative {label:?}")))?;
            ranking.push(x);
        }
        Preference::new(ranking)
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, x) in self.ranking.iter().enumerate() {
            if k > 0 {
                f.write_str(">")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ordered list of `n >= 1` preferences over the same `m` alternatives.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile {
    m: usize,
    voters: Vec<Preference>,
}

impl Profile {
    pub fn new(voters: Vec<Preference>) -> Result<Profile> {
        let first = voters.first().ok_or_else(|| Error::InvalidProfile("profile has zero voters".into()))?;
        let m = first.m();
        if let Some(bad) = voters.iter().find(|p| p.m() != m) {
            return Err(Error::InvalidProfile(format!("ranking {bad} is not over the same {m} alternatives")));
        }
        Ok(Profile { m, voters })
    }

    /// Builds a profile from raw index rankings; panics when invalid.
    pub fn from_indices(rankings: &[&[usize]]) -> Profile {
        Profile::new(rankings.iter().map(|r| Preference::from_indices(r)).collect()).expect("valid profile")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.voters.len()
    }

    pub fn voters(&self) -> &[Preference] {
        &self.voters
    }

    pub fn voter(&self, i: usize) -> &Preference {
        &self.voters[i]
    }

    pub fn alternatives(&self) -> impl Iterator<Item = AlternativeId> {
        (0..self.m).map(AlternativeId)
    }

    pub fn with_voter(&self, i: usize, pref: Preference) -> Profile {
        let mut voters = self.voters.clone();
        voters[i] = pref;
        Profile { m: self.m, voters }
    }

    /// Appends voters; they must range over the same alternatives.
    pub fn extended(&self, extra: impl IntoIterator<Item = Preference>) -> Result<Profile> {
        let mut voters = self.voters.clone();
        voters.extend(extra);
        Profile::new(voters)
    }

    pub fn without_voter(&self, i: usize) -> Result<Profile> {
        let mut voters = self.voters.clone();
        voters.remove(i);
        Profile::new(voters)
    }

    /// Single-line form, one ranking per voter: `a>c>b / b>c>a / c>a>b`.
    pub fn to_compact_string(&self) -> String {
        self.voters.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" / ")
    }

    /// Profile file text; consecutive identical voters share a count prefix.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut k = 0;
        while k < self.voters.len() {
            let mut run = 1;
            while k + run < self.voters.len() && self.voters[k + run] == self.voters[k] {
                run += 1;
            }
            out.push_str(&format!("{run}: {}\n", self.voters[k]));
            k += run;
        }
        out
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact_string())
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile[{}]", self.to_compact_string())
    }
}

/// Parses the profile text format.
///
/// Lines are `COUNT: x>y>z` (count optional, default 1); `#` starts a comment
/// line and an optional `alternatives: a b c` header fixes the alternative set.
/// A line may also hold several rankings separated by ` / `.
pub fn parse_profile(text: &str) -> Result<Profile> {
    let mut declared_m: Option<usize> = None;
    let mut voters = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("alternatives:") {
            let labels: Vec<&str> = rest.split_whitespace().collect();
            for (k, label) in labels.iter().enumerate() {
                if AlternativeId::from_label(label) != Some(AlternativeId(k)) {
                    return Err(err(format!(
                        "alternatives must be listed as consecutive letters from a, found {label:?}"
                    )));
                }
            }
            if labels.is_empty() {
                return Err(err("empty alternatives header".into()));
            }
            declared_m = Some(labels.len());
            continue;
        }
        for chunk in line.split('/') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let (count, ranking) = match chunk.split_once(':') {
                Some((c, r)) => {
                    let count: usize =
                        c.trim().parse().map_err(|_| err(format!("invalid voter count {:?}", c.trim())))?;
                    (count, r.trim())
                }
                None => (1, chunk),
            };
            let pref = parse_ranking(ranking, declared_m.or(voters.first().map(Preference::m)))
                .map_err(|e| err(e.to_string()))?;
            if declared_m.is_none() && voters.is_empty() {
                declared_m = Some(pref.m());
            }
            voters.extend(std::iter::repeat_n(pref, count));
        }
    }
    if voters.is_empty() {
        return Err(Error::InvalidProfile("profile has zero voters".into()));
    }
    Profile::new(voters)
}

fn parse_ranking(text: &str, m: Option<usize>) -> Result<Preference> {
    let labels: Vec<&str> = text.split('>').map(str::trim).collect();
    let m = m.unwrap_or(labels.len());
    let mut seen = vec![false; m];
    let mut ranking = Vec::with_capacity(m);
    for label in &labels {
        let x = AlternativeId::from_label(label)
            .filter(|x| x.0 < m)
            .ok_or_else(|| Error::InvalidPreference(format!("unknown alternative {label:?}")))?;
        if std::mem::replace(&mut seen[x.0], true) {
            return Err(Error::InvalidPreference(format!("duplicate alternative {x} in {text:?}")));
        }
        ranking.push(x);
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidPreference(format!("ranking {text:?} omits alternative {}", AlternativeId(missing))));
    }
    Preference::new(ranking)
}

/// Rank of `x` in `pref`: the number of alternatives weakly preferred to it.
pub fn rank(pref: &Preference, x: AlternativeId) -> usize {
    pref.rank(x)
}

/// Pairwise supporting sizes and per-alternative sorted rank vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajorityTally {
    m: usize,
    n: usize,
    support: Vec<usize>,
    rank_vectors: Vec<Vec<usize>>,
}

impl MajorityTally {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n_xy`: the number of voters strictly preferring `x` to `y` (0 when `x == y`).
    pub fn support(&self, x: AlternativeId, y: AlternativeId) -> usize {
        self.support[x.0 * self.m + y.0]
    }

    /// Sorted (ascending) ranks of `x` across voters.
    pub fn rank_vector(&self, x: AlternativeId) -> &[usize] {
        &self.rank_vectors[x.0]
    }

    pub fn beats(&self, x: AlternativeId, y: AlternativeId) -> bool {
        self.support(x, y) > self.support(y, x)
    }
}

pub fn majority_tally(profile: &Profile) -> MajorityTally {
    let m = profile.m();
    let n = profile.n();
    let mut support = vec![0; m * m];
    let mut rank_vectors = vec![Vec::with_capacity(n); m];
    for pref in profile.voters() {
        let ranking = pref.ranking();
        for (i, &x) in ranking.iter().enumerate() {
            rank_vectors[x.0].push(i + 1);
            for &y in &ranking[i + 1..] {
                support[x.0 * m + y.0] += 1;
            }
        }
    }
    for v in &mut rank_vectors {
        v.sort_unstable();
    }
    MajorityTally { m, n, support, rank_vectors }
}

/// `R^{i:yx}`: voter `i` moves `y` directly above `x`. Requires `x`
/// immediately above `y` in voter `i`'s ranking.
pub fn adjacent_swap(profile: &Profile, i: usize, x: AlternativeId, y: AlternativeId) -> Result<Profile> {
    if i >= profile.n() {
        return Err(Error::Precondition(format!("voter index {i} out of range")));
    }
    if x.0 >= profile.m() || y.0 >= profile.m() {
        return Err(Error::Precondition("alternative out of range".into()));
    }
    let pref = profile.voter(i);
    let px = pref.position(x);
    if pref.position(y) != px + 1 {
        return Err(Error::Precondition(format!(
            "{x} is not immediately above {y} in voter {}'s ranking {pref}",
            i + 1
        )));
    }
    Ok(profile.with_voter(i, pref.swapped_at(px)))
}

/// A voter permutation `π` paired with an alternative permutation `τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryMap {
    pub voter_perm: Vec<usize>,
    pub alt_perm: Vec<AlternativeId>,
}

impl SymmetryMap {
    pub fn new(voter_perm: Vec<usize>, alt_perm: Vec<AlternativeId>) -> Result<SymmetryMap> {
        if !is_permutation(voter_perm.iter().copied()) {
            return Err(Error::Precondition("voter map is not a permutation".into()));
        }
        if !is_permutation(alt_perm.iter().map(|x| x.0)) {
            return Err(Error::Precondition("alternative map is not a permutation".into()));
        }
        Ok(SymmetryMap { voter_perm, alt_perm })
    }

    pub fn identity(m: usize, n: usize) -> SymmetryMap {
        SymmetryMap { voter_perm: (0..n).collect(), alt_perm: (0..m).map(AlternativeId).collect() }
    }

    /// The map applying `self` first and then `other`.
    pub fn then(&self, other: &SymmetryMap) -> SymmetryMap {
        SymmetryMap {
            voter_perm: self.voter_perm.iter().map(|&i| other.voter_perm[i]).collect(),
            alt_perm: self.alt_perm.iter().map(|x| other.alt_perm[x.0]).collect(),
        }
    }
}

fn is_permutation(values: impl ExactSizeIterator<Item = usize>) -> bool {
    let len = values.len();
    let mut seen = vec![false; len];
    for v in values {
        if v >= len || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    true
}

/// Voter `π(i)` of the result holds voter `i`'s ranking relabeled through `τ`.
pub fn apply_symmetry(profile: &Profile, map: &SymmetryMap) -> Result<Profile> {
    if map.voter_perm.len() != profile.n() || map.alt_perm.len() != profile.m() {
        return Err(Error::Dimension(format!(
            "symmetry over {} voters and {} alternatives applied to a profile with n = {}, m = {}",
            map.voter_perm.len(),
            map.alt_perm.len(),
            profile.n(),
            profile.m()
        )));
    }
    let mut voters = profile.voters().to_vec();
    for (i, pref) in profile.voters().iter().enumerate() {
        voters[map.voter_perm[i]] = pref.relabeled(&map.alt_perm);
    }
    Profile::new(voters)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1_r() -> Profile {
        parse_profile("1: a>c>b\n1: b>c>a\n1: c>a>b").unwrap()
    }

    fn fig1_r_prime() -> Profile {
        parse_profile("a>b>c / b>c>a / c>a>b").unwrap()
    }

    #[test]
    fn parse_figure_profile_in_both_forms() {
        let r = fig1_r();
        assert_eq!((r.n(), r.m()), (3, 3));
        assert_eq!(r.voter(0).to_string(), "a>c>b");
        assert_eq!(parse_profile("1: a>c>b / 1: b>c>a / 1: c>a>b").unwrap(), r);
    }

    #[test]
    fn parse_counts_comments_and_header() {
        let p = parse_profile("# two clones\nalternatives: a b\n2: a>b\n").unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.voter(0), p.voter(1));
        assert_eq!(parse_profile("b>a").unwrap().voter(0).top(), alt(1));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_profile("1: a>a>b"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_profile("a>b>c\na>c"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_profile("a>b>q"), Err(Error::Parse { .. })));
        assert!(matches!(parse_profile("0: a>b"), Err(Error::InvalidProfile(_))));
        assert!(matches!(parse_profile("# nothing\n"), Err(Error::InvalidProfile(_))));
        assert!(matches!(parse_profile("alternatives: a c\na>c"), Err(Error::Parse { .. })));
    }

    #[test]
    fn ranks() {
        let p = Preference::parse("a>c>b").unwrap();
        assert_eq!(rank(&p, alt(0)), 1);
        assert_eq!(rank(&p, alt(1)), 3);
        assert_eq!(rank(&p, alt(2)), 2);
    }

    #[test]
    fn tally_of_figure_profile() {
        let t = majority_tally(&fig1_r());
        let (a, b, c) = (alt(0), alt(1), alt(2));
        assert_eq!(t.support(c, a), 2);
        assert_eq!(t.support(a, c), 1);
        assert_eq!(t.rank_vector(c), &[1, 2, 2]);
        for x in 0..3 {
            for y in 0..3 {
                if x != y {
                    assert_eq!(t.support(alt(x), alt(y)) + t.support(alt(y), alt(x)), 3);
                }
            }
        }
        let _ = b;
    }

    #[test]
    fn unanimous_tally() {
        let p = parse_profile("4: b>a>c").unwrap();
        let t = majority_tally(&p);
        assert_eq!(t.support(alt(1), alt(0)), 4);
        assert_eq!(t.support(alt(1), alt(2)), 4);
    }

    #[test]
    fn adjacent_swap_reproduces_figure() {
        let r = fig1_r();
        let swapped = adjacent_swap(&r, 0, alt(2), alt(1)).unwrap();
        assert_eq!(swapped, fig1_r_prime());
        assert_eq!(adjacent_swap(&swapped, 0, alt(1), alt(2)).unwrap(), r);
        let p = parse_profile("a>b>c").unwrap();
        assert!(adjacent_swap(&p, 0, alt(0), alt(2)).is_err());
        assert!(adjacent_swap(&p, 0, alt(1), alt(0)).is_err());
    }

    #[test]
    fn symmetry_identity_and_cycle() {
        let r = fig1_r_prime();
        assert_eq!(apply_symmetry(&r, &SymmetryMap::identity(3, 3)).unwrap(), r);
        let cycle = SymmetryMap::new(vec![0, 1, 2], vec![alt(1), alt(2), alt(0)]).unwrap();
        let image = apply_symmetry(&r, &cycle).unwrap();
        assert_eq!(image.to_compact_string(), "b>c>a / c>a>b / a>b>c");
        let mut original: Vec<_> = r.voters().to_vec();
        let mut rolled: Vec<_> = image.voters().to_vec();
        original.sort();
        rolled.sort();
        assert_eq!(original, rolled);
    }

    #[test]
    fn symmetry_rejects_bad_maps() {
        assert!(SymmetryMap::new(vec![0, 0], vec![alt(0), alt(1)]).is_err());
        let r = fig1_r();
        let wrong = SymmetryMap::identity(3, 2);
        assert!(matches!(apply_symmetry(&r, &wrong), Err(Error::Dimension(_))));
    }

    #[test]
    fn text_round_trip_groups_runs() {
        let p = parse_profile("2: a>b>c>d\n1: d>b>c>a").unwrap();
        assert_eq!(p.to_text(), "2: a>b>c>d\n1: d>b>c>a\n");
        assert_eq!(parse_profile(&p.to_text()).unwrap(), p);
    }
}
