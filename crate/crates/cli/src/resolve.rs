// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Turning `--rule` arguments into rule specs.
//!
//! Accepted forms: a registry name (`copeland`, `drop-voter:2`, ...),
//! `point:FILE` and `support:FILE` holding a list of fractions,
//! `mix:FILE` holding `WEIGHT RULE` lines, `tab:FILE` holding a JSON-lines
//! tabulation, a path to a JSON descriptor, or an inline JSON descriptor.

use std::fs;

use sdslab::descriptor::{parse_rule_json, read_tabulation};
use sdslab::rational::ParseRationalError;
use sdslab::rules::{make_mixture, make_point_voting, make_supporting_size, named_rule};
use sdslab::{Error, Rational, Result, SdsSpec};

pub fn read_input(path: &str) -> Result<String> {
    let read = if path == "-" { std::io::read_to_string(std::io::stdin()) } else { fs::read_to_string(path) };
    read.map_err(|e| Error::Precondition(format!("cannot read {path}: {e}")))
}

/// Parses fractions separated by commas or whitespace; brackets and quotes
/// are ignored, so a JSON array of strings also works.
pub fn parse_vector(text: &str) -> Result<Vec<Rational>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .map(|t| t.trim_matches(|c| matches!(c, '[' | ']' | '"')))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Rational>().map_err(|e| Error::InvalidRule(e.to_string())))
        .collect()
}

fn parse_mixture(text: &str, m: usize) -> Result<SdsSpec> {
    let mut components = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: k + 1, message };
        let (weight, rule) = line.split_once(char::is_whitespace).ok_or_else(|| err("expected WEIGHT RULE".into()))?;
        let weight: Rational = weight.parse().map_err(|e: ParseRationalError| err(e.to_string()))?;
        components.push((weight, resolve_rule(rule.trim(), m).map_err(|e| err(e.to_string()))?));
    }
    make_mixture(components)
}

/// Resolves `arg` for `m` alternatives (needed by rules such as `cyclic`).
pub fn resolve_rule(arg: &str, m: usize) -> Result<SdsSpec> {
    if let Some(path) = arg.strip_prefix("point:") {
        return make_point_voting(parse_vector(&read_input(path)?)?);
    }
    if let Some(path) = arg.strip_prefix("support:") {
        return make_supporting_size(parse_vector(&read_input(path)?)?);
    }
    if let Some(path) = arg.strip_prefix("mix:") {
        return parse_mixture(&read_input(path)?, m);
    }
    if let Some(path) = arg.strip_prefix("tab:") {
        return Ok(SdsSpec::tabulated(read_tabulation(&read_input(path)?)?));
    }
    if arg.trim_start().starts_with('{') {
        return parse_rule_json(arg);
    }
    if arg.ends_with(".json") {
        return parse_rule_json(&read_input(arg)?);
    }
    named_rule(arg, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sdslab::rational::q;

    #[test]
    fn vectors_accept_plain_and_json_lists() {
        assert_eq!(parse_vector("1/3, 0 0").unwrap(), vec![q(1, 3), q(0, 1), q(0, 1)]);
        assert_eq!(parse_vector("[\"1/2\", \"1/6\"]\n").unwrap(), vec![q(1, 2), q(1, 6)]);
        assert!(parse_vector("1/x").is_err());
    }

    #[test]
    fn inline_descriptor_and_registry_names() {
        assert_eq!(resolve_rule("{\"family\":\"copeland\"}", 3).unwrap(), SdsSpec::RandomizedCopeland);
        assert_eq!(resolve_rule("borda", 3).unwrap(), SdsSpec::RandomizedBorda);
        assert!(resolve_rule("plurality", 3).is_err());
    }

    #[test]
    fn mixture_lines_resolve_recursively() {
        let spec = parse_mixture("# half and half\n1/2 rd-uniform\n1/2 copeland\n", 3).unwrap();
        let SdsSpec::Mixture(parts) = spec else { panic!("not a mixture") };
        assert_eq!(parts.len(), 2);
        assert!(parse_mixture("1/2 copeland\n", 3).is_err());
    }
}
