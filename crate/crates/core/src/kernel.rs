// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Integer evaluation of rules for exhaustive enumeration.
//!
//! A rule compiled for fixed `(m, n)` yields every lottery as integer
//! numerators over one common denominator `D`, so comparisons during audits
//! are exact machine-integer operations.

use std::sync::Arc;

use crate::enumerate::{Code, PermTable};
use crate::error::{Error, Result};
use crate::lottery::Lottery;
use crate::rational::Rational;
use crate::rules::{checked_lcm, full_index, row_lottery, SdsSpec, TabulatedRule, ZooRule};

#[derive(Debug)]
enum Node {
    /// Numerators `a_k * D` by zero-based rank.
    Point(Vec<i64>),
    /// Numerators `b_j * D` indexed by supporting size `j`.
    Supporting(Vec<i64>),
    Dictatorship(Vec<i64>),
    Uniform(i64),
    Duple {
        x: usize,
        y: usize,
        g: Vec<i64>,
        denom: i64,
    },
    Unilateral {
        voter: usize,
        table: Vec<i64>,
    },
    /// Children with integer factors `w_i * D / D_i`.
    Mixture(Vec<(i64, Node)>),
    Cond2m {
        winner: i64,
        other: i64,
        uniform: i64,
    },
    Cyclic {
        order: Vec<usize>,
        win: i64,
        half: i64,
    },
    DropVoter {
        voter: usize,
        win: i64,
        tie: i64,
    },
    Table(Arc<TabulatedRule>, i64),
}

/// A rule compiled for fixed `(m, n)`.
#[derive(Debug)]
pub struct Kernel {
    perms: Arc<PermTable>,
    n: usize,
    denom: i64,
    root: Node,
}

impl Kernel {
    pub fn compile(spec: &SdsSpec, m: usize, n: usize) -> Result<Kernel> {
        Kernel::compile_with(spec, Arc::new(PermTable::new(m)?), n)
    }

    pub fn compile_with(spec: &SdsSpec, perms: Arc<PermTable>, n: usize) -> Result<Kernel> {
        let m = perms.m();
        spec.check_dimensions(m, n)?;
        let (root, denom) = if m == 1 { (Node::Uniform(1), 1) } else { compile_node(spec, m, n)? };
        Ok(Kernel { perms, n, denom, root })
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

    pub fn denom(&self) -> i64 {
        self.denom
    }

    /// Writes the numerators of the lottery at the profile `codes` into `out`.
    pub fn eval(&self, codes: &[Code], out: &mut [i64]) {
        debug_assert_eq!(codes.len(), self.n);
        out.iter_mut().for_each(|v| *v = 0);
        self.accumulate(&self.root, codes, 1, out);
        debug_assert_eq!(out.iter().sum::<i64>(), self.denom);
    }

    pub fn lottery(&self, codes: &[Code]) -> Lottery {
        let mut out = vec![0; self.m()];
        self.eval(codes, &mut out);
        row_lottery(&out, self.denom)
    }

    fn accumulate(&self, node: &Node, codes: &[Code], factor: i64, out: &mut [i64]) {
        let perms = &*self.perms;
        let m = perms.m();
        match node {
            Node::Point(a) => {
                for &c in codes {
                    for (k, score) in a.iter().enumerate() {
                        out[perms.at(c, k)] += factor * score;
                    }
                }
            }
            Node::Supporting(b) => {
                for x in 0..m {
                    for y in x + 1..m {
                        let nxy = support(perms, codes, x, y, usize::MAX);
                        out[x] += factor * b[nxy];
                        out[y] += factor * b[codes.len() - nxy];
                    }
                }
            }
            Node::Dictatorship(w) => {
                for (i, &c) in codes.iter().enumerate() {
                    out[perms.top(c)] += factor * w[i];
                }
            }
            Node::Uniform(each) => out.iter_mut().for_each(|v| *v += factor * each),
            Node::Duple { x, y, g, denom } => {
                let nxy = support(perms, codes, *x, *y, usize::MAX);
                out[*x] += factor * g[nxy];
                out[*y] += factor * (denom - g[nxy]);
            }
            Node::Unilateral { voter, table } => {
                let row = &table[codes[*voter] as usize * m..][..m];
                for (o, v) in out.iter_mut().zip(row) {
                    *o += factor * v;
                }
            }
            Node::Mixture(children) => {
                for (f, child) in children {
                    self.accumulate(child, codes, factor * f, out);
                }
            }
            Node::Cond2m { winner, other, uniform } => match condorcet_winner_codes(perms, codes) {
                Some(w) => {
                    for (x, o) in out.iter_mut().enumerate() {
                        *o += factor * if x == w { *winner } else { *other };
                    }
                }
                None => out.iter_mut().for_each(|o| *o += factor * uniform),
            },
            Node::Cyclic { order, win, half } => {
                let n = codes.len();
                for k in 0..m {
                    let (x, y) = (order[k], order[(k + 1) % m]);
                    let nxy = support(perms, codes, x, y, usize::MAX);
                    match (2 * nxy).cmp(&n) {
                        std::cmp::Ordering::Greater => out[x] += factor * win,
                        std::cmp::Ordering::Less => out[y] += factor * win,
                        std::cmp::Ordering::Equal => {
                            out[x] += factor * half;
                            out[y] += factor * half;
                        }
                    }
                }
            }
            Node::DropVoter { voter, win, tie } => {
                let n = codes.len() - 1;
                for x in 0..m {
                    for y in x + 1..m {
                        let nxy = support(perms, codes, x, y, *voter);
                        match (2 * nxy).cmp(&n) {
                            std::cmp::Ordering::Greater => out[x] += factor * win,
                            std::cmp::Ordering::Less => out[y] += factor * win,
                            std::cmp::Ordering::Equal => {
                                out[x] += factor * tie;
                                out[y] += factor * tie;
                            }
                        }
                    }
                }
            }
            Node::Table(table, scale) => {
                let row = &table.numers()[full_index(perms, codes) as usize * m..][..m];
                for (o, v) in out.iter_mut().zip(row) {
                    *o += factor * scale * v;
                }
            }
        }
    }
}

/// Number of voters (other than `skip`) ranking `x` above `y`.
#[inline]
fn support(perms: &PermTable, codes: &[Code], x: usize, y: usize, skip: usize) -> usize {
    codes.iter().enumerate().filter(|&(i, &c)| i != skip && perms.position(c, x) < perms.position(c, y)).count()
}

pub(crate) fn condorcet_winner_codes(perms: &PermTable, codes: &[Code]) -> Option<usize> {
    let m = perms.m();
    let n = codes.len();
    (0..m).find(|&x| (0..m).all(|y| y == x || 2 * support(perms, codes, x, y, usize::MAX) > n))
}

fn scaled(values: &[Rational], denom: i64) -> Result<Vec<i64>> {
    values.iter().map(|v| v.scaled_i64(denom).ok_or(Error::DenominatorOverflow)).collect()
}

fn lcm_of_denoms<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Result<i64> {
    values.into_iter().try_fold(1i64, |acc, v| checked_lcm(acc, v.denom_i64().ok_or(Error::DenominatorOverflow)?))
}

fn compile_node(spec: &SdsSpec, m: usize, n: usize) -> Result<(Node, i64)> {
    let mm = (m * (m - 1)) as i64;
    Ok(match spec {
        SdsSpec::PointVoting(a) => {
            let d = lcm_of_denoms(a.values())?;
            (Node::Point(scaled(a.values(), d)?), d)
        }
        SdsSpec::SupportingSize(b) => {
            let d = lcm_of_denoms(b.values())?;
            let mut by_support = scaled(b.values(), d)?;
            by_support.reverse();
            (Node::Supporting(by_support), d)
        }
        SdsSpec::RandomDictatorship(Some(w)) => {
            let d = lcm_of_denoms(w)?;
            (Node::Dictatorship(scaled(w, d)?), d)
        }
        SdsSpec::RandomDictatorship(None) => (Node::Dictatorship(vec![1; n]), n as i64),
        SdsSpec::UniformLottery => (Node::Uniform(1), m as i64),
        SdsSpec::RandomizedBorda => {
            let d = n as i64 * mm / 2;
            (Node::Point((0..m).map(|k| (m - 1 - k) as i64).collect()), d)
        }
        SdsSpec::RandomizedCopeland => {
            let b = (0..=n)
                .map(|j| match (2 * j).cmp(&n) {
                    std::cmp::Ordering::Greater => 2,
                    std::cmp::Ordering::Equal => 1,
                    std::cmp::Ordering::Less => 0,
                })
                .collect();
            (Node::Supporting(b), mm)
        }
        SdsSpec::Duple(duple) => {
            let d = lcm_of_denoms(&duple.g)?;
            (Node::Duple { x: duple.x.0, y: duple.y.0, g: scaled(&duple.g, d)?, denom: d }, d)
        }
        SdsSpec::Unilateral(u) => {
            let d = lcm_of_denoms(u.table().iter().flat_map(|l| l.probs()))?;
            let table = scaled(&u.table().iter().flat_map(|l| l.probs().iter().cloned()).collect::<Vec<_>>(), d)?;
            (Node::Unilateral { voter: u.voter(), table }, d)
        }
        SdsSpec::Mixture(parts) => {
            let mut children = Vec::with_capacity(parts.len());
            let mut d = 1i64;
            for (w, part) in parts {
                let (node, di) = compile_node(part, m, n)?;
                let wd = w.denom_i64().ok_or(Error::DenominatorOverflow)?;
                d = checked_lcm(d, wd.checked_mul(di).ok_or(Error::DenominatorOverflow)?)?;
                children.push((w.clone(), node, di));
            }
            let children = children
                .into_iter()
                .map(|(w, node, di)| {
                    let f = (w * Rational::new(d, di)).scaled_i64(1).ok_or(Error::DenominatorOverflow)?;
                    Ok((f, node))
                })
                .collect::<Result<_>>()?;
            (Node::Mixture(children), d)
        }
        SdsSpec::Zoo(ZooRule::Cond2m) => {
            (Node::Cond2m { winner: 2 * (m as i64 - 1), other: m as i64 - 2, uniform: m as i64 - 1 }, mm)
        }
        SdsSpec::Zoo(ZooRule::CyclicPairwise { order }) => {
            (Node::Cyclic { order: order.iter().map(|x| x.0).collect(), win: 2, half: 1 }, 2 * m as i64)
        }
        SdsSpec::Zoo(ZooRule::DropVoterCopeland { voter }) => (Node::DropVoter { voter: *voter, win: 2, tie: 1 }, mm),
        SdsSpec::Tabulated(t) => (Node::Table(t.clone(), 1), t.denom()),
    })
}
