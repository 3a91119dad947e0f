// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdslab::model::{AlternativeId, Profile};
use sdslab::rules::{make_duple, make_mixture, make_point_voting, make_supporting_size, named_rule, REGISTRY};
use sdslab::{Rational, SdsSpec};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Registry rules that are defined for (m, n).
pub fn registry(m: usize, n: usize) -> Vec<(String, SdsSpec)> {
    REGISTRY
        .iter()
        .filter_map(|&name| {
            let spec = named_rule(name, m).ok()?;
            spec.check_dimensions(m, n).ok()?;
            Some((name.to_string(), spec))
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sorted_desc(rng: &mut ChaCha8Rng, len: usize, max: i64) -> Vec<i64> {
    let mut v: Vec<i64> = (0..len).map(|_| rng.gen_range(0..=max)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Nonincreasing point scores summing to 1/n.
pub fn random_point_vector(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<Rational> {
    let mut w = sorted_desc(rng, m, 6);
    if w[0] == 0 {
        w[0] = 1;
    }
    let total: i64 = w.iter().sum();
    w.iter().map(|&x| q(x, total * n as i64)).collect()
}

/// Supporting scores `b_n..b_0`, nonincreasing, with `b_j + b_{n-j} = 2/(m(m-1))`.
pub fn random_supporting_vector(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Vec<Rational> {
    let pair = (m * (m - 1)) as i64;
    let upper = n - n / 2;
    // Steps above one half for j = n, n-1, ..., n - upper + 1.
    let steps = sorted_desc(rng, upper, 4);
    let mut b = vec![Rational::zero(); n + 1];
    for (k, s) in steps.iter().enumerate() {
        let j = n - k;
        let v = q(4 + s, 4 * pair);
        b[n - j] = v.clone();
        b[j] = q(2, pair) - v;
    }
    if n.is_multiple_of(2) {
        b[n / 2] = q(1, pair);
    }
    b
}

pub fn random_duple(rng: &mut ChaCha8Rng, m: usize, n: usize) -> SdsSpec {
    let mut alts: Vec<usize> = (0..m).collect();
    alts.shuffle(rng);
    let mut g = sorted_desc(rng, n + 1, 4);
    g.reverse();
    make_duple(AlternativeId(alts[0]), AlternativeId(alts[1]), g.iter().map(|&v| q(v, 4)).collect()).unwrap()
}

pub fn random_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
    let total: i64 = w.iter().sum();
    w.iter().map(|&x| q(x, total)).collect()
}

pub fn random_duple_mixture(rng: &mut ChaCha8Rng, m: usize, n: usize) -> SdsSpec {
    let k = rng.gen_range(2..=3);
    let weights = random_weights(rng, k);
    make_mixture(weights.into_iter().map(|w| (w, random_duple(rng, m, n))).collect()).unwrap()
}

/// Twenty seeded rules: seven point-voting, seven supporting-size, six duple mixtures.
pub fn random_rules(seed: u64, m: usize, n: usize) -> Vec<(String, SdsSpec)> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(20);
    for k in 0..7 {
        out.push((format!("random-point-{k}"), make_point_voting(random_point_vector(&mut rng, m, n)).unwrap()));
    }
    for k in 0..7 {
        out.push((
            format!("random-support-{k}"),
            make_supporting_size(random_supporting_vector(&mut rng, m, n)).unwrap(),
        ));
    }
    for k in 0..6 {
        out.push((format!("random-duples-{k}"), random_duple_mixture(&mut rng, m, n)));
    }
    out
}

/// All `(m!)^n` profiles in lexicographic order, built without the library's enumerator.
pub fn all_profiles(m: usize, n: usize) -> Vec<Profile> {
    let prefs = all_rankings(m);
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let rankings: Vec<&[usize]> = idx.iter().map(|&i| prefs[i].as_slice()).collect();
        out.push(Profile::from_indices(&rankings));
        let Some(pos) = (0..n).rev().find(|&k| idx[k] + 1 < prefs.len()) else { return out };
        idx[pos] += 1;
        idx[pos + 1..].iter_mut().for_each(|v| *v = 0);
    }
}

/// All rankings of `0..m` in lexicographic order.
pub fn all_rankings(m: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for x in 0..m {
            if !prefix.contains(&x) {
                prefix.push(x);
                extend(prefix, m, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), m, &mut out);
    out
}
