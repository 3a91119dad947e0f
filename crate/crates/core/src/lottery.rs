// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::AlternativeId;
use crate::rational::Rational;

/// An exact probability distribution over the alternatives `0..m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lottery {
    probs: Vec<Rational>,
}

impl Lottery {
    /// Validates non-negativity and that the probabilities sum to exactly one.
    pub fn new(probs: Vec<Rational>) -> Result<Lottery> {
        if probs.is_empty() {
            return Err(Error::InvalidLottery("no alternatives".into()));
        }
        if let Some((x, p)) = probs.iter().enumerate().find(|(_, p)| p.is_negative()) {
            return Err(Error::InvalidLottery(format!("negative probability {p} for {}", AlternativeId(x))));
        }
        let total: Rational = probs.iter().sum();
        if total != Rational::one() {
            return Err(Error::InvalidLottery(format!("probabilities sum to {total}")));
        }
        Ok(Lottery { probs })
    }

    pub(crate) fn new_unchecked(probs: Vec<Rational>) -> Lottery {
        debug_assert!(Lottery::new(probs.clone()).is_ok());
        Lottery { probs }
    }

    pub fn degenerate(m: usize, x: AlternativeId) -> Lottery {
        let mut probs = vec![Rational::zero(); m];
        probs[x.0] = Rational::one();
        Lottery { probs }
    }

    pub fn uniform(m: usize) -> Lottery {
        Lottery { probs: vec![Rational::new(1, m as i64); m] }
    }

    pub fn m(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, x: AlternativeId) -> &Rational {
        &self.probs[x.0]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Largest probability together with the first alternative attaining it.
    pub fn max(&self) -> (AlternativeId, &Rational) {
        let mut best = 0;
        for (x, p) in self.probs.iter().enumerate() {
            if p > &self.probs[best] {
                best = x;
            }
        }
        (AlternativeId(best), &self.probs[best])
    }

    /// JSON object mapping labels to exact fraction strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("lottery serializes")
    }
}

impl Serialize for Lottery {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.probs.len()))?;
        for (x, p) in self.probs.iter().enumerate() {
            map.serialize_entry(&AlternativeId(x).label(), p)?;
        }
        map.end()
    }
}

impl fmt::Display for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

impl fmt::Debug for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Normalizes non-negative scores into probabilities proportional to them.
pub fn lottery_from_scores(scores: &[Rational]) -> Result<Lottery> {
    if let Some((x, s)) = scores.iter().enumerate().find(|(_, s)| s.is_negative()) {
        return Err(Error::InvalidLottery(format!("negative score {s} for {}", AlternativeId(x))));
    }
    let total: Rational = scores.iter().sum();
    if total.is_zero() {
        return Err(Error::InvalidLottery("all scores are zero".into()));
    }
    Lottery::new(scores.iter().map(|s| s / &total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn proportional_scores() {
        let l = lottery_from_scores(&[q(2, 1), q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(l.probs(), &[q(2, 3), q(0, 1), q(1, 3)]);
        assert_eq!(l.to_json(), r#"{"a":"2/3","b":"0","c":"1/3"}"#);
        let borda = lottery_from_scores(&[q(3, 1), q(2, 1), q(4, 1)]).unwrap();
        assert_eq!(borda.probs(), &[q(1, 3), q(2, 9), q(4, 9)]);
        assert_eq!(lottery_from_scores(&vec![q(5, 2); 4]).unwrap(), Lottery::uniform(4));
    }

    #[test]
    fn score_errors() {
        assert!(lottery_from_scores(&[q(0, 1), q(0, 1)]).is_err());
        assert!(lottery_from_scores(&[q(-1, 1), q(2, 1)]).is_err());
    }

    #[test]
    fn lottery_invariants() {
        assert!(Lottery::new(vec![q(1, 2), q(1, 3)]).is_err());
        assert!(Lottery::new(vec![q(3, 2), q(-1, 2)]).is_err());
        assert!(Lottery::new(vec![q(1, 2), q(1, 2)]).is_ok());
        assert_eq!(Lottery::degenerate(3, AlternativeId(1)).max().0, AlternativeId(1));
    }
}
