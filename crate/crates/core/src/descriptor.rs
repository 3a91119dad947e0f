// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON rule descriptors and the JSON-lines tabulation format.
//!
//! A descriptor is an object tagged by `family`, for example
//! `{"family":"supporting_size","b":["1/3","1/3","0","0"]}`. Voter indices in
//! descriptors are 1-based. A tabulation file holds one
//! `{"profile":"a>b>c / ...","lottery":{"a":"1/3",...}}` object per line.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::lottery::Lottery;
use crate::model::{parse_profile, AlternativeId, Preference};
use crate::rational::Rational;
use crate::rules::{
    make_duple, make_mixture, make_point_voting, make_supporting_size, make_unilateral, make_zoo, SdsSpec,
    TabulatedRule, ZooRule,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleDescriptor {
    PointVoting {
        a: Vec<Rational>,
    },
    SupportingSize {
        /// `b_n` first.
        b: Vec<Rational>,
    },
    RandomDictatorship {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<Rational>>,
    },
    Uniform {},
    Borda {},
    Copeland {},
    Duple {
        x: String,
        y: String,
        /// Probability of `x` indexed by the number of voters preferring `x` to `y`.
        g: Vec<Rational>,
    },
    Unilateral {
        voter: usize,
        table: Vec<UnilateralEntry>,
    },
    Mixture {
        components: Vec<MixtureComponent>,
    },
    Cond2m {},
    Cyclic {
        order: Vec<String>,
    },
    DropVoter {
        voter: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnilateralEntry {
    pub preference: String,
    pub lottery: Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: Rational,
    pub rule: RuleDescriptor,
}

fn label(text: &str) -> Result<AlternativeId> {
    AlternativeId::from_label(text).ok_or_else(|| Error::InvalidRule(format!("unknown alternative label {text:?}")))
}

fn voter_index(voter: usize) -> Result<usize> {
    voter.checked_sub(1).ok_or_else(|| Error::InvalidRule("voters are numbered from 1".into()))
}

/// Reads a lottery object such as `{"a":"1/2","b":"1/2"}`; labels must be `a, b, ...`.
pub fn lottery_from_json(object: &Map<String, Value>) -> Result<Lottery> {
    let m = object.len();
    let mut probs = vec![None; m];
    for (key, value) in object {
        let x = AlternativeId::from_label(key).filter(|x| x.0 < m).ok_or_else(|| {
            Error::InvalidLottery(format!("unexpected label {key:?} in a lottery over {m} alternatives"))
        })?;
        let p: Rational = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidLottery(format!("value for {key:?}: {e}")))?;
        probs[x.0] = Some(p);
    }
    Lottery::new(probs.into_iter().map(|p| p.expect("every label present")).collect())
}

fn lottery_to_json(lottery: &Lottery) -> Map<String, Value> {
    match serde_json::to_value(lottery).expect("lottery serializes") {
        Value::Object(map) => map,
        _ => unreachable!("lotteries serialize as objects"),
    }
}

impl RuleDescriptor {
    pub fn to_spec(&self) -> Result<SdsSpec> {
        Ok(match self {
            RuleDescriptor::PointVoting { a } => make_point_voting(a.clone())?,
            RuleDescriptor::SupportingSize { b } => make_supporting_size(b.clone())?,
            RuleDescriptor::RandomDictatorship { weights: None } => SdsSpec::uniform_random_dictatorship(),
            RuleDescriptor::RandomDictatorship { weights: Some(w) } => {
                if w.iter().any(Rational::is_negative) || w.iter().sum::<Rational>() != Rational::one() {
                    return Err(Error::InvalidRule("dictatorship weights must be non-negative and sum to 1".into()));
                }
                SdsSpec::RandomDictatorship(Some(w.clone()))
            }
            RuleDescriptor::Uniform {} => SdsSpec::UniformLottery,
            RuleDescriptor::Borda {} => SdsSpec::RandomizedBorda,
            RuleDescriptor::Copeland {} => SdsSpec::RandomizedCopeland,
            RuleDescriptor::Duple { x, y, g } => make_duple(label(x)?, label(y)?, g.clone())?,
            RuleDescriptor::Unilateral { voter, table } => {
                let entries = table
                    .iter()
                    .map(|e| Ok((Preference::parse(&e.preference)?, lottery_from_json(&e.lottery)?)))
                    .collect::<Result<Vec<_>>>()?;
                make_unilateral(voter_index(*voter)?, entries)?
            }
            RuleDescriptor::Mixture { components } => make_mixture(
                components.iter().map(|c| Ok((c.weight.clone(), c.rule.to_spec()?))).collect::<Result<Vec<_>>>()?,
            )?,
            RuleDescriptor::Cond2m {} => make_zoo(ZooRule::Cond2m)?,
            RuleDescriptor::Cyclic { order } => {
                make_zoo(ZooRule::CyclicPairwise { order: order.iter().map(|l| label(l)).collect::<Result<_>>()? })?
            }
            RuleDescriptor::DropVoter { voter } => {
                make_zoo(ZooRule::DropVoterCopeland { voter: voter_index(*voter)? })?
            }
        })
    }

    /// Descriptor for a spec; tabulated rules have none.
    pub fn from_spec(spec: &SdsSpec) -> Result<RuleDescriptor> {
        Ok(match spec {
            SdsSpec::PointVoting(a) => RuleDescriptor::PointVoting { a: a.values().to_vec() },
            SdsSpec::SupportingSize(b) => RuleDescriptor::SupportingSize { b: b.values().to_vec() },
            SdsSpec::RandomDictatorship(w) => RuleDescriptor::RandomDictatorship { weights: w.clone() },
            SdsSpec::UniformLottery => RuleDescriptor::Uniform {},
            SdsSpec::RandomizedBorda => RuleDescriptor::Borda {},
            SdsSpec::RandomizedCopeland => RuleDescriptor::Copeland {},
            SdsSpec::Duple(d) => RuleDescriptor::Duple { x: d.x.label(), y: d.y.label(), g: d.g.clone() },
            SdsSpec::Unilateral(u) => {
                let perms = crate::enumerate::PermTable::new(u.m())?;
                let table = u
                    .table()
                    .iter()
                    .enumerate()
                    .map(|(code, l)| UnilateralEntry {
                        preference: perms.pref(code as crate::enumerate::Code).to_string(),
                        lottery: lottery_to_json(l),
                    })
                    .collect();
                RuleDescriptor::Unilateral { voter: u.voter() + 1, table }
            }
            SdsSpec::Mixture(parts) => RuleDescriptor::Mixture {
                components: parts
                    .iter()
                    .map(|(w, s)| Ok(MixtureComponent { weight: w.clone(), rule: RuleDescriptor::from_spec(s)? }))
                    .collect::<Result<_>>()?,
            },
            SdsSpec::Zoo(ZooRule::Cond2m) => RuleDescriptor::Cond2m {},
            SdsSpec::Zoo(ZooRule::CyclicPairwise { order }) => {
                RuleDescriptor::Cyclic { order: order.iter().map(|x| x.label()).collect() }
            }
            SdsSpec::Zoo(ZooRule::DropVoterCopeland { voter }) => RuleDescriptor::DropVoter { voter: voter + 1 },
            SdsSpec::Tabulated(_) => {
                return Err(Error::InvalidRule("tabulated rules are stored as JSON lines, not descriptors".into()))
            }
        })
    }
}

pub fn parse_rule_json(text: &str) -> Result<SdsSpec> {
    let descriptor: RuleDescriptor =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    descriptor.to_spec()
}

pub fn rule_to_json(spec: &SdsSpec) -> Result<String> {
    Ok(serde_json::to_string(&RuleDescriptor::from_spec(spec)?).expect("descriptor serializes"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TabulationLine {
    profile: String,
    lottery: Map<String, Value>,
}

#[derive(Serialize)]
struct TabulationLineOut<'a> {
    profile: String,
    lottery: &'a Lottery,
}

/// Parses a JSON-lines tabulation; every profile must appear exactly once.
pub fn read_tabulation(text: &str) -> Result<TabulatedRule> {
    let mut entries = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: k + 1, message };
        let parsed: TabulationLine = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let profile = parse_profile(&parsed.profile).map_err(|e| err(e.to_string()))?;
        let lottery = lottery_from_json(&parsed.lottery).map_err(|e| err(e.to_string()))?;
        entries.push((profile, lottery));
    }
    let (m, n) = match entries.first() {
        Some((p, _)) => (p.m(), p.n()),
        None => return Err(Error::InvalidRule("empty tabulation".into())),
    };
    TabulatedRule::from_entries(m, n, entries)
}

/// One JSON object per profile, in lexicographic profile order.
pub fn write_tabulation(tab: &TabulatedRule) -> String {
    let mut out = String::new();
    for (profile, lottery) in tab.entries() {
        let line = TabulationLineOut { profile: profile.to_compact_string(), lottery: &lottery };
        out.push_str(&serde_json::to_string(&line).expect("tabulation line serializes"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::Budget;
    use crate::rational::q;
    use crate::rules::{copeland_supporting_vector, tabulate};

    #[test]
    fn descriptors_round_trip() {
        let texts = [
            r#"{"family":"supporting_size","b":["1/3","1/3","0","0"]}"#,
            r#"{"family":"point_voting","a":["1/3","0","0"]}"#,
            r#"{"family":"random_dictatorship"}"#,
            r#"{"family":"random_dictatorship","weights":["1/2","1/2","0"]}"#,
            r#"{"family":"uniform"}"#,
            r#"{"family":"borda"}"#,
            r#"{"family":"copeland"}"#,
            r#"{"family":"duple","x":"a","y":"c","g":["0","1/4","1/2","1"]}"#,
            r#"{"family":"mixture","components":[{"weight":"1/2","rule":{"family":"random_dictatorship"}},{"weight":"1/2","rule":{"family":"copeland"}}]}"#,
            r#"{"family":"cond2m"}"#,
            r#"{"family":"cyclic","order":["a","c","b","d"]}"#,
            r#"{"family":"drop_voter","voter":2}"#,
        ];
        for text in texts {
            let spec = parse_rule_json(text).unwrap();
            let back = rule_to_json(&spec).unwrap();
            assert_eq!(parse_rule_json(&back).unwrap(), spec, "{text}");
        }
        assert_eq!(parse_rule_json(texts[0]).unwrap(), make_supporting_size(copeland_supporting_vector(3, 3)).unwrap());
    }

    #[test]
    fn unilateral_descriptor() {
        let dictator = |pref: &str| {
            let p = Preference::parse(pref).unwrap();
            format!(r#"{{"preference":"{pref}","lottery":{}}}"#, Lottery::degenerate(3, p.top()).to_json())
        };
        let prefs = ["a>b>c", "a>c>b", "b>a>c", "b>c>a", "c>a>b", "c>b>a"];
        let table: Vec<String> = prefs.iter().map(|p| dictator(p)).collect();
        let text = format!(r#"{{"family":"unilateral","voter":1,"table":[{}]}}"#, table.join(","));
        let spec = parse_rule_json(&text).unwrap();
        assert_eq!(parse_rule_json(&rule_to_json(&spec).unwrap()).unwrap(), spec);
        let zero = text.replace(r#""voter":1"#, r#""voter":0"#);
        assert!(parse_rule_json(&zero).is_err());
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(parse_rule_json(r#"{"family":"kemeny"}"#).is_err());
        assert!(parse_rule_json(r#"{"family":"borda","extra":1}"#).is_err());
        assert!(parse_rule_json(r#"{"family":"point_voting","a":["1/2","1/3"]}"#).is_err());
        assert!(parse_rule_json(r#"{"family":"random_dictatorship","weights":["1/2","1/3"]}"#).is_err());
    }

    #[test]
    fn tabulation_round_trip() {
        let tab = tabulate(&SdsSpec::RandomizedBorda, 3, 2, Budget::default()).unwrap();
        let text = write_tabulation(&tab);
        assert_eq!(text.lines().count(), 36);
        assert!(text.starts_with(r#"{"profile":"a>b>c / a>b>c","lottery":{"a":"2/3","b":"1/3","c":"0"}}"#));
        assert_eq!(read_tabulation(&text).unwrap(), tab);
        let missing: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert!(matches!(read_tabulation(&missing), Err(Error::MissingProfile(_))));
        assert!(matches!(read_tabulation("{not json"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn lottery_objects() {
        let mut map = Map::new();
        map.insert("b".into(), Value::String("1/4".into()));
        map.insert("a".into(), Value::String("3/4".into()));
        assert_eq!(lottery_from_json(&map).unwrap(), Lottery::new(vec![q(3, 4), q(1, 4)]).unwrap());
        map.insert("d".into(), Value::String("0".into()));
        assert!(lottery_from_json(&map).is_err());
    }
}
