// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Constructions on rules and profiles: symmetrization by averaging over voter
//! and alternative permutations, exact decomposition of an anonymous, neutral,
//! strategyproof rule into a point-voting and a supporting-size part, and the
//! fixture profiles used by the Condorcet and efficiency bounds.

use std::collections::HashSet;

use crate::enumerate::{factorial, profile_count, Budget, Code, EnumerationMode, PermTable};
use crate::error::{Error, Result};
use crate::model::{AlternativeId, Preference, Profile};
use crate::rational::Rational;
use crate::rules::{
    decode_full_index, full_index, make_mixture, make_point_voting, make_supporting_size, tabulate, SdsSpec,
    TabulatedRule,
};

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let table = PermTable::new(k).expect("small permutation table");
    (0..table.len() as Code).map(|c| table.pref(c).ranking().iter().map(|a| a.0).collect()).collect()
}

/// Average of `spec` over all voter permutations and all renamings of the
/// alternatives: `f*(R, x) = Σ_π Σ_τ f(τπR, τx) / (n! m!)`.
pub fn symmetrize(spec: &SdsSpec, m: usize, n: usize, budget: Budget) -> Result<TabulatedRule> {
    let full = profile_count(m, n, EnumerationMode::Full);
    budget.check(full.saturating_mul(factorial(n)).saturating_mul(factorial(m)))?;
    let tab = tabulate(spec, m, n, Budget::unlimited())?;
    let perms = tab.perms().clone();
    let count = full as usize;

    // Voter average, over denominator denom * n!.
    let voter_perms = permutations(n);
    let mut anonymous = vec![0i64; count * m];
    let mut codes = vec![0; n];
    let mut image = vec![0; n];
    for index in 0..count {
        decode_full_index(&perms, index as u64, &mut codes);
        let out = &mut anonymous[index * m..(index + 1) * m];
        for pi in &voter_perms {
            for (dst, &src) in image.iter_mut().zip(pi) {
                *dst = codes[src];
            }
            for (o, v) in out.iter_mut().zip(tab.row(&image)) {
                *o += v;
            }
        }
    }

    // Alternative average, over denominator denom * n! * m!.
    let renamings: Vec<(Vec<usize>, Vec<Code>)> = permutations(m)
        .into_iter()
        .map(|tau| {
            let map: Vec<AlternativeId> = tau.iter().map(|&t| AlternativeId(t)).collect();
            let codes = (0..perms.len() as Code).map(|c| perms.relabeled(c, &map)).collect();
            (tau, codes)
        })
        .collect();
    let mut numers = vec![0i64; count * m];
    for index in 0..count {
        decode_full_index(&perms, index as u64, &mut codes);
        for (tau, relabel) in &renamings {
            for (dst, &src) in image.iter_mut().zip(&codes) {
                *dst = relabel[src as usize];
            }
            let at = full_index(&perms, &image) as usize * m;
            for x in 0..m {
                numers[index * m + x] += anonymous[at + tau[x]];
            }
        }
    }
    let scale = i64::try_from(factorial(n) * factorial(m)).map_err(|_| Error::DenominatorOverflow)?;
    let denom = tab.denom().checked_mul(scale).ok_or(Error::DenominatorOverflow)?;
    TabulatedRule::new(perms, n, denom, numers)
}

/// A representation `λ·point + (1-λ)·supporting` of a tabulated rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarberaDecomposition {
    pub lambda: Rational,
    /// Point scores `a_1..a_m` of the λ part, summing to `1/n`; `None` when λ = 0.
    pub point: Option<Vec<Rational>>,
    /// Supporting scores `b_n..b_0` of the `1-λ` part; `None` when λ = 1.
    pub supporting: Option<Vec<Rational>>,
    /// True when λ is the only feasible weight.
    pub unique: bool,
    /// Smallest and largest feasible λ.
    pub lambda_range: (Rational, Rational),
    /// Dimension of the affine solution space before the sign constraints.
    pub kernel_dimension: usize,
}

impl BarberaDecomposition {
    /// The represented rule as a mixture spec.
    pub fn spec(&self) -> Result<SdsSpec> {
        let mut parts = Vec::new();
        if let Some(a) = &self.point {
            parts.push((self.lambda.clone(), make_point_voting(a.clone())?));
        }
        if let Some(b) = &self.supporting {
            parts.push((Rational::one() - &self.lambda, make_supporting_size(b.clone())?));
        }
        match parts.len() {
            1 => Ok(parts.pop().expect("one part").1),
            _ => make_mixture(parts),
        }
    }
}

/// Why no decomposition exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfeasibilityCertificate {
    /// The equation for this profile and alternative contradicts the earlier ones.
    Equation { profile: Profile, alternative: AlternativeId },
    /// The equations are consistent but no solution meets the sign and order
    /// constraints; `violated` lists those failing at the particular solution.
    Inequalities { violated: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Decomposition {
    Feasible(BarberaDecomposition),
    Infeasible(InfeasibilityCertificate),
}

/// Row-reduced equations `coefs · u = rhs`, one pivot per row.
struct Echelon {
    rows: Vec<(usize, Vec<Rational>, Rational)>,
}

impl Echelon {
    /// Adds an equation; returns false if it contradicts the system.
    fn insert(&mut self, mut coefs: Vec<Rational>, mut rhs: Rational) -> bool {
        for (pivot, row, r) in &self.rows {
            if coefs[*pivot].is_zero() {
                continue;
            }
            let factor = coefs[*pivot].clone();
            for (c, v) in coefs.iter_mut().zip(row) {
                *c -= &factor * v;
            }
            rhs -= &factor * r;
        }
        let Some(pivot) = coefs.iter().position(|c| !c.is_zero()) else {
            return rhs.is_zero();
        };
        let inv = coefs[pivot].recip();
        coefs.iter_mut().for_each(|c| *c *= &inv);
        rhs *= &inv;
        for (_, row, r) in &mut self.rows {
            if row[pivot].is_zero() {
                continue;
            }
            let factor = row[pivot].clone();
            for (c, v) in row.iter_mut().zip(&coefs) {
                *c -= &factor * v;
            }
            *r -= &factor * &rhs;
        }
        self.rows.push((pivot, coefs, rhs));
        true
    }

    /// A particular solution and a basis of the null space.
    fn solution_space(&self, unknowns: usize) -> (Vec<Rational>, Vec<Vec<Rational>>) {
        let mut particular = vec![Rational::zero(); unknowns];
        let pivots: Vec<usize> = self.rows.iter().map(|(p, _, _)| *p).collect();
        for (p, _, r) in &self.rows {
            particular[*p] = r.clone();
        }
        let basis = (0..unknowns)
            .filter(|f| !pivots.contains(f))
            .map(|f| {
                let mut v = vec![Rational::zero(); unknowns];
                v[f] = Rational::one();
                for (p, row, _) in &self.rows {
                    v[*p] = -row[f].clone();
                }
                v
            })
            .collect();
        (particular, basis)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves a square system exactly; `None` if singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = b.len();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        a[col].iter_mut().for_each(|v| *v *= &inv);
        b[col] *= &inv;
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, p) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
                let bc = b[col].clone();
                b[r] -= &factor * &bc;
            }
        }
    }
    Some(b)
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Writes a tabulated rule as `λ·point + (1-λ)·supporting`, choosing the
/// largest feasible λ, or certifies that no such representation exists.
///
/// Unknowns are the scaled scores `c_k = λ a_k` and `d_j = (1-λ) b_j`. Each
/// profile and alternative gives `f(R,x) = Σ_i c_{rank_i(x)} + Σ_{y≠x} d_{n_xy}`,
/// and the supporting pairing gives `d_j + d_{n-j} = (1 - nΣc)·2/(m(m-1))`.
/// After exact elimination the remaining freedom is searched over the
/// vertices cut out by `c_1 ≥ … ≥ c_m ≥ 0` and `d_n ≥ … ≥ d_0 ≥ 0`.
pub fn barbera_decompose(tab: &TabulatedRule) -> Result<Decomposition> {
    let m = tab.m();
    let n = tab.n();
    if m < 2 {
        return Err(Error::Precondition("decomposition needs m >= 2".into()));
    }
    let perms = tab.perms().clone();
    let unknowns = m + n + 1;
    let c = |k: usize| k - 1;
    let d = |j: usize| m + j;
    let mut system = Echelon { rows: Vec::new() };

    let pair = Rational::new(2, (m * (m - 1)) as i64);
    for j in 0..=n / 2 {
        let mut coefs = vec![Rational::zero(); unknowns];
        for k in 1..=m {
            coefs[c(k)] = &pair * &Rational::from_integer(n as i64);
        }
        coefs[d(j)] += &Rational::one();
        coefs[d(n - j)] += &Rational::one();
        if !system.insert(coefs, pair.clone()) {
            return Err(Error::Internal("pairing equations are inconsistent".into()));
        }
    }

    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut codes = vec![0; n];
    for index in 0..tab.len() {
        decode_full_index(&perms, index as u64, &mut codes);
        let row = tab.row(&codes);
        for x in 0..m {
            let mut key = vec![0i64; unknowns + 1];
            for &code in &codes {
                key[c(perms.position(code, x) + 1)] += 1;
            }
            for y in (0..m).filter(|&y| y != x) {
                let support = codes.iter().filter(|&&code| perms.position(code, x) < perms.position(code, y)).count();
                key[d(support)] += 1;
            }
            key[unknowns] = row[x];
            if !seen.insert(key.clone()) {
                continue;
            }
            let coefs = key[..unknowns].iter().map(|&v| Rational::from_integer(v)).collect();
            if !system.insert(coefs, Rational::new(row[x], tab.denom())) {
                return Ok(Decomposition::Infeasible(InfeasibilityCertificate::Equation {
                    profile: perms.profile(&codes),
                    alternative: AlternativeId(x),
                }));
            }
        }
    }

    let (particular, basis) = system.solution_space(unknowns);
    let kernel_dimension = basis.len();

    // Constraints `g · u >= 0`.
    let mut constraints: Vec<(String, Vec<Rational>)> = Vec::new();
    let unit = |i: usize, sign: i64| {
        let mut v = vec![Rational::zero(); unknowns];
        v[i] = Rational::from_integer(sign);
        v
    };
    for k in 1..m {
        let mut g = unit(c(k), 1);
        g[c(k + 1)] = Rational::from_integer(-1);
        constraints.push((format!("a_{k} >= a_{}", k + 1), g));
    }
    constraints.push((format!("a_{m} >= 0"), unit(c(m), 1)));
    for j in 0..n {
        let mut g = unit(d(j + 1), 1);
        g[d(j)] = Rational::from_integer(-1);
        constraints.push((format!("b_{} >= b_{j}", j + 1), g));
    }
    constraints.push(("b_0 >= 0".into(), unit(d(0), 1)));

    let lambda_of = |u: &[Rational]| -> Rational {
        Rational::from_integer(n as i64) * (1..=m).map(|k| u[c(k)].clone()).sum::<Rational>()
    };
    let point_at = |t: &[Rational]| -> Vec<Rational> {
        let mut u = particular.clone();
        for (coef, dir) in t.iter().zip(&basis) {
            for (ui, di) in u.iter_mut().zip(dir) {
                *ui += &(coef * di);
            }
        }
        u
    };
    let feasible = |u: &[Rational]| constraints.iter().all(|(_, g)| !dot(g, u).is_negative());

    // Each constraint in kernel coordinates: slope · t >= -offset.
    let projected: Vec<(Vec<Rational>, Rational)> =
        constraints.iter().map(|(_, g)| (basis.iter().map(|dir| dot(g, dir)).collect(), dot(g, &particular))).collect();

    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let mut lowest: Option<Rational> = None;
    let mut consider = |u: Vec<Rational>| {
        if !feasible(&u) {
            return;
        }
        let lambda = lambda_of(&u);
        if lowest.as_ref().is_none_or(|l| lambda < *l) {
            lowest = Some(lambda.clone());
        }
        if best.as_ref().is_none_or(|(l, _)| lambda > *l) {
            best = Some((lambda, u));
        }
    };
    if kernel_dimension == 0 {
        consider(particular.clone());
    } else {
        combinations(projected.len(), kernel_dimension, |chosen| {
            let a = chosen.iter().map(|&i| projected[i].0.clone()).collect();
            let b = chosen.iter().map(|&i| -projected[i].1.clone()).collect();
            if let Some(t) = solve_square(a, b) {
                consider(point_at(&t));
            }
        });
    }

    let Some((lambda, u)) = best else {
        let violated =
            constraints.iter().filter(|(_, g)| dot(g, &particular).is_negative()).map(|(l, _)| l.clone()).collect();
        return Ok(Decomposition::Infeasible(InfeasibilityCertificate::Inequalities { violated }));
    };
    let lowest = lowest.expect("set together with best");
    let one_minus = Rational::one() - &lambda;
    let point = (!lambda.is_zero()).then(|| (1..=m).map(|k| &u[c(k)] / &lambda).collect());
    let supporting = (!one_minus.is_zero()).then(|| (0..=n).rev().map(|j| &u[d(j)] / &one_minus).collect());
    let result = BarberaDecomposition {
        unique: lowest == lambda,
        lambda_range: (lowest, lambda.clone()),
        lambda,
        point,
        supporting,
        kernel_dimension,
    };
    let rebuilt = tabulate(&result.spec()?, m, n, Budget::unlimited())?;
    if rebuilt != *tab {
        return Err(Error::Internal("decomposition does not reproduce the tabulated rule".into()));
    }
    Ok(Decomposition::Feasible(result))
}

/// A profile with `ceil(m/2)` Condorcet winner candidates `x_1, …` (the
/// first alternatives), returned with that list.
///
/// For three voters and odd m, voters 1 and 2 rank `x_1 > … > x_m` and voter 3
/// puts `x_i` at position `m + 2 - 2i` for `i <= (m+1)/2`. For four voters
/// and odd m, voters 3 and 4 put `x_i` at position `(m+1)/2 + 1 - i`. Even m
/// adds `z = x_m` last for all voters but the final one, who ranks it first.
/// Larger electorates append pairs of voter 1's ranking and its reverse.
/// Unconstrained positions are filled in ascending order.
pub fn build_cwc_profile(m: usize, n: usize) -> Result<(Profile, Vec<AlternativeId>)> {
    if m < 3 || n < 3 {
        return Err(Error::Precondition(format!("candidate fixture needs m >= 3 and n >= 3, got m = {m}, n = {n}")));
    }
    let odd = if m % 2 == 1 { m } else { m - 1 };
    let k = odd.div_ceil(2);
    let base_n = if n % 2 == 1 { 3 } else { 4 };
    let ascending: Vec<usize> = (0..odd).collect();
    let placed = |position_of: &dyn Fn(usize) -> usize| -> Vec<usize> {
        let mut slots: Vec<Option<usize>> = vec![None; odd];
        for i in 1..=k {
            slots[position_of(i) - 1] = Some(i - 1);
        }
        let mut rest = (k..odd).peekable();
        slots.into_iter().map(|s| s.unwrap_or_else(|| rest.next().expect("enough alternatives"))).collect()
    };
    let mut voters: Vec<Vec<usize>> = if base_n == 3 {
        vec![ascending.clone(), ascending.clone(), placed(&|i| odd + 2 - 2 * i)]
    } else {
        let moved = placed(&|i| k + 1 - i);
        vec![ascending.clone(), ascending.clone(), moved.clone(), moved]
    };
    if odd < m {
        let z = m - 1;
        let last = voters.len() - 1;
        for (i, v) in voters.iter_mut().enumerate() {
            if i == last {
                v.insert(0, z);
            } else {
                v.push(z);
            }
        }
    }
    let first = voters[0].clone();
    let reversed: Vec<usize> = first.iter().rev().copied().collect();
    while voters.len() < n {
        voters.push(first.clone());
        voters.push(reversed.clone());
    }
    let profile = Profile::new(voters.iter().map(|v| Preference::from_indices(v)).collect())?;
    Ok((profile, (0..k).map(AlternativeId).collect()))
}

/// A profile where `x` is never ranked first yet beats every other
/// alternative with exactly `ceil((n+1)/2)` supporters.
///
/// Naming the others `x_1, …, x_{m-1}` in index order, voter `i` of three
/// ranks `{x_k : k mod 3 = i - 1}` above `x`. Even n doubles the three voters;
/// the rest are pairs of voter 1's ranking and its reverse.
pub fn build_minimal_margin_profile(m: usize, n: usize, x: AlternativeId) -> Result<Profile> {
    if m < 4 || n < 3 || n == 4 || x.0 >= m {
        return Err(Error::Precondition(format!(
            "minimal-margin fixture needs m >= 4, n = 3 or n >= 5 and x among the alternatives, got m = {m}, n = {n}, x = {x}"
        )));
    }
    let others: Vec<usize> = (0..m).filter(|&y| y != x.0).collect();
    let voter = |class: usize| -> Vec<usize> {
        let in_class = |i: usize| (i + 1) % 3 == class;
        let mut ranking: Vec<usize> =
            others.iter().enumerate().filter(|&(i, _)| in_class(i)).map(|(_, &y)| y).collect();
        ranking.push(x.0);
        ranking.extend(others.iter().enumerate().filter(|&(i, _)| !in_class(i)).map(|(_, &y)| y));
        ranking
    };
    let base: Vec<Vec<usize>> = (0..3).map(voter).collect();
    let mut voters = base.clone();
    if n.is_multiple_of(2) {
        voters.extend(base);
    }
    let first = voters[0].clone();
    let reversed: Vec<usize> = first.iter().rev().copied().collect();
    while voters.len() < n {
        voters.push(first.clone());
        voters.push(reversed.clone());
    }
    Profile::new(voters.iter().map(|v| Preference::from_indices(v)).collect())
}

/// Every voter ranks `x` first, `y` second and the rest in index order.
pub fn build_unanimous_profile(m: usize, n: usize, x: AlternativeId, y: AlternativeId) -> Result<Profile> {
    if x == y || x.0 >= m || y.0 >= m || n == 0 {
        return Err(Error::Precondition(format!(
            "unanimous fixture needs distinct alternatives below m = {m} and n >= 1"
        )));
    }
    let mut ranking = vec![x.0, y.0];
    ranking.extend((0..m).filter(|&z| z != x.0 && z != y.0));
    Profile::new(vec![Preference::from_indices(&ranking); n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{condorcet_winner, is_cw_candidate, pareto_dominations};
    use crate::model::{alt, majority_tally, parse_profile};
    use crate::rational::q;
    use crate::rules::{borda_point_vector, copeland_supporting_vector, evaluate, ZooRule};

    fn table(spec: &SdsSpec, m: usize, n: usize) -> TabulatedRule {
        tabulate(spec, m, n, Budget::default()).unwrap()
    }

    fn feasible(d: Decomposition) -> BarberaDecomposition {
        match d {
            Decomposition::Feasible(b) => b,
            Decomposition::Infeasible(c) => panic!("expected a decomposition, got {c:?}"),
        }
    }

    #[test]
    fn symmetrize_fixed_points() {
        let copeland = table(&SdsSpec::RandomizedCopeland, 3, 3);
        assert_eq!(symmetrize(&SdsSpec::RandomizedCopeland, 3, 3, Budget::default()).unwrap(), copeland);
        assert_eq!(
            symmetrize(
                &SdsSpec::Zoo(ZooRule::CyclicPairwise { order: vec![alt(0), alt(1), alt(2)] }),
                3,
                3,
                Budget::default()
            )
            .unwrap(),
            copeland
        );
        let uniform = table(&SdsSpec::UniformLottery, 3, 3);
        assert_eq!(symmetrize(&SdsSpec::UniformLottery, 3, 3, Budget::default()).unwrap(), uniform);
    }

    #[test]
    fn symmetrize_dictator_gives_uniform_dictatorship() {
        let dictator = SdsSpec::RandomDictatorship(Some(vec![q(1, 1), q(0, 1), q(0, 1)]));
        let out = symmetrize(&dictator, 3, 3, Budget::default()).unwrap();
        assert_eq!(out, table(&SdsSpec::uniform_random_dictatorship(), 3, 3));
        assert!(symmetrize(&dictator, 4, 4, Budget::default()).is_err());
    }

    #[test]
    fn decompose_copeland() {
        let b = feasible(barbera_decompose(&table(&SdsSpec::RandomizedCopeland, 3, 3)).unwrap());
        assert_eq!(b.lambda, q(0, 1));
        assert!(b.unique);
        assert_eq!(b.point, None);
        assert_eq!(b.supporting, Some(vec![q(1, 3), q(1, 3), q(0, 1), q(0, 1)]));
    }

    #[test]
    fn decompose_half_and_half() {
        let mix = make_mixture(vec![
            (q(1, 2), SdsSpec::uniform_random_dictatorship()),
            (q(1, 2), SdsSpec::RandomizedCopeland),
        ])
        .unwrap();
        let b = feasible(barbera_decompose(&table(&mix, 3, 3)).unwrap());
        assert_eq!(b.lambda, q(1, 2));
        assert!(b.unique);
        assert_eq!(b.point, Some(vec![q(1, 3), q(0, 1), q(0, 1)]));
        assert_eq!(b.supporting, Some(copeland_supporting_vector(3, 3)));
    }

    #[test]
    fn decompose_borda_is_ambiguous() {
        let b = feasible(barbera_decompose(&table(&SdsSpec::RandomizedBorda, 3, 3)).unwrap());
        assert_eq!(b.lambda, q(1, 1));
        assert!(!b.unique);
        assert_eq!(b.lambda_range, (q(0, 1), q(1, 1)));
        assert_eq!(b.point, Some(borda_point_vector(3, 3)));
        assert_eq!(b.supporting, None);
        let u = feasible(barbera_decompose(&table(&SdsSpec::UniformLottery, 3, 4)).unwrap());
        assert_eq!(u.lambda_range, (q(0, 1), q(1, 1)));
    }

    #[test]
    fn decompose_rejects_manipulable_and_non_neutral_rules() {
        let cond = barbera_decompose(&table(&SdsSpec::Zoo(ZooRule::Cond2m), 3, 3)).unwrap();
        assert!(matches!(cond, Decomposition::Infeasible(InfeasibilityCertificate::Equation { .. })));
        let dictator = SdsSpec::RandomDictatorship(Some(vec![q(1, 1), q(0, 1), q(0, 1)]));
        let d = barbera_decompose(&table(&dictator, 3, 3)).unwrap();
        assert!(matches!(d, Decomposition::Infeasible(_)));
    }

    #[test]
    fn cwc_base_profiles() {
        let (r1, c1) = build_cwc_profile(3, 3).unwrap();
        assert_eq!(r1, parse_profile("a>b>c / a>b>c / b>c>a").unwrap());
        assert_eq!(c1, vec![alt(0), alt(1)]);
        let (r2, _) = build_cwc_profile(4, 3).unwrap();
        assert_eq!(r2, parse_profile("a>b>c>d / a>b>c>d / d>b>c>a").unwrap());
        let (r3, _) = build_cwc_profile(3, 4).unwrap();
        assert_eq!(r3, parse_profile("a>b>c / a>b>c / b>a>c / b>a>c").unwrap());
        let (r4, _) = build_cwc_profile(4, 4).unwrap();
        assert_eq!(r4, parse_profile("a>b>c>d / a>b>c>d / b>a>c>d / d>b>a>c").unwrap());
        let (r5, c5) = build_cwc_profile(3, 5).unwrap();
        assert_eq!(r5, parse_profile("a>b>c / a>b>c / b>c>a / a>b>c / c>b>a").unwrap());
        assert_eq!(c5, c1);
        assert!(build_cwc_profile(2, 3).is_err());
    }

    #[test]
    fn cwc_candidates_are_certified() {
        for m in 3..=6 {
            for n in 3..=6 {
                let (profile, candidates) = build_cwc_profile(m, n).unwrap();
                assert_eq!(candidates.len(), m.div_ceil(2));
                assert!(candidates.iter().all(|&x| is_cw_candidate(&profile, x)), "m = {m}, n = {n}");
            }
        }
    }

    #[test]
    fn minimal_margin_profiles() {
        let p = build_minimal_margin_profile(4, 3, alt(0)).unwrap();
        assert_eq!(p, parse_profile("d>a>b>c / b>a>c>d / c>a>b>d").unwrap());
        for (m, n) in [(4, 3), (4, 5), (5, 6), (6, 7), (4, 8)] {
            for x in 0..m {
                let p = build_minimal_margin_profile(m, n, alt(x)).unwrap();
                assert_eq!(condorcet_winner(&p), Some(alt(x)));
                assert!(p.voters().iter().all(|v| v.top() != alt(x)));
                let tally = majority_tally(&p);
                assert!((0..m).filter(|&y| y != x).all(|y| tally.support(alt(x), alt(y)) == (n + 2) / 2));
            }
        }
        assert!(build_minimal_margin_profile(3, 3, alt(0)).is_err());
        assert!(build_minimal_margin_profile(5, 4, alt(0)).is_err());
    }

    #[test]
    fn unanimous_profile() {
        let p = build_unanimous_profile(3, 3, alt(0), alt(1)).unwrap();
        assert_eq!(pareto_dominations(&p), vec![(alt(1), alt(0)), (alt(2), alt(0)), (alt(2), alt(1))]);
        assert_eq!(condorcet_winner(&p), Some(alt(0)));
        assert_eq!(evaluate(&SdsSpec::RandomizedCopeland, &p).unwrap().prob(alt(1)), &q(1, 3));
        assert!(build_unanimous_profile(3, 3, alt(1), alt(1)).is_err());
    }
}
