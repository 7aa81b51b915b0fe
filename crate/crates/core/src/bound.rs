//! Outer-bound polytope generated from per-user CSIT marginals.
//!
//! Two families of constraints, for every ordered list π of j users:
//!
//! - weighted: `Σ_i d_{π(i)} / i ≤ 1 + Σ_{i=2}^{j} (Σ_{r<i} λ_P^{π(r)}) / (i(i−1))`
//! - sum: `Σ_i d_{π(i)} ≤ 1 + Σ_{i=1}^{j−1} (λ_P + λ_D)^{ψ(i)}`, where ψ sorts
//!   the users ascending by λ_P + λ_D, so the best-informed user is dropped.
//!
//! The sum bound only depends on the user set, so it is emitted once per
//! subset; single users get the box bound `d_i ≤ 1` once.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::csit::MarginalProfile;
use crate::error::{Error, Result};
use crate::rational::{harmonic, int, is_probability, rat, Rational};
use crate::region::{ConstraintTag, LinearInequality, Region};

/// An ordered list of distinct users (0-based), `1 ≤ len ≤ K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationSpec(Vec<usize>);

impl PermutationSpec {
    pub fn new(order: Vec<usize>, users: usize) -> Result<Self> {
        check_user_set(&order, users)?;
        Ok(Self(order))
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_user_set(users: &[usize], k: usize) -> Result<()> {
    if users.is_empty() {
        return Err(Error::InvalidUserSet("empty user set".into()));
    }
    if users.len() > k {
        return Err(Error::InvalidUserSet(alloc::format!(
            "{} users out of {k}",
            users.len()
        )));
    }
    for (i, &u) in users.iter().enumerate() {
        if u >= k {
            return Err(Error::InvalidUserSet(alloc::format!(
                "user {} out of range 1..={k}",
                u + 1
            )));
        }
        if users[..i].contains(&u) {
            return Err(Error::InvalidUserSet(alloc::format!("user {} repeated", u + 1)));
        }
    }
    Ok(())
}

/// Number of inequalities [`build_region`] emits: `2^K − 1 + Σ_{j≥2} j!·C(K, j)`.
pub fn inequality_count(users: usize) -> u128 {
    let mut total = (1u128 << users) - 1;
    // j!·C(K, j) = K!/(K−j)!
    let mut falling = users as u128;
    for j in 2..=users {
        falling *= (users - j + 1) as u128;
        total += falling;
    }
    total
}

/// The region is only claimed for at least as many antennas as users.
pub fn check_antennas(users: usize, antennas: usize) -> Result<()> {
    if antennas < users {
        return Err(Error::TooFewAntennas { users, antennas });
    }
    Ok(())
}

pub fn weighted_inequality(marginals: &MarginalProfile, perm: &PermutationSpec) -> Result<LinearInequality> {
    let k = marginals.users();
    check_user_set(perm.order(), k)?;
    let mut coeffs = alloc::vec![Rational::zero(); k];
    let mut rhs = Rational::one();
    let mut prefix = Rational::zero();
    for (pos, &user) in perm.order().iter().enumerate() {
        let i = pos as i64 + 1;
        coeffs[user] = rat(1, i);
        if i >= 2 {
            rhs += &prefix / int(i * (i - 1));
        }
        prefix += &marginals.user(user).perfect;
    }
    let tag = if perm.len() == 1 {
        ConstraintTag::Box(perm.order()[0])
    } else {
        ConstraintTag::Weighted(perm.order().to_vec())
    };
    LinearInequality::new(coeffs, rhs, tag)
}

/// Subset sorted ascending by λ_P + λ_D, ties by user index.
pub fn psi_order(marginals: &MarginalProfile, subset: &[usize]) -> Result<PermutationSpec> {
    check_user_set(subset, marginals.users())?;
    let mut order = subset.to_vec();
    order.sort_by(|&a, &b| {
        marginals
            .user(a)
            .eventually_known()
            .cmp(&marginals.user(b).eventually_known())
            .then(a.cmp(&b))
    });
    Ok(PermutationSpec(order))
}

pub fn sum_inequality(marginals: &MarginalProfile, subset: &[usize]) -> Result<LinearInequality> {
    let order = psi_order(marginals, subset)?;
    let k = marginals.users();
    let mut coeffs = alloc::vec![Rational::zero(); k];
    for &u in order.order() {
        coeffs[u] = Rational::one();
    }
    let rhs = order.order()[..order.len() - 1]
        .iter()
        .fold(Rational::one(), |acc, &u| acc + marginals.user(u).eventually_known());
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let tag = if sorted.len() == 1 {
        ConstraintTag::Box(sorted[0])
    } else {
        ConstraintTag::Sum(sorted)
    };
    LinearInequality::new(coeffs, rhs, tag)
}

/// The full outer bound, ordered by subset size, then subset (lexicographic),
/// with the sum bound of a subset before its weighted bounds in
/// lexicographic permutation order.
pub fn build_region(marginals: &MarginalProfile) -> Region {
    let k = marginals.users();
    generate(k, |subset, perms| {
        let mut out = Vec::with_capacity(perms.len() + 1);
        if subset.len() == 1 {
            out.push(weighted_inequality(marginals, &PermutationSpec(subset.to_vec())));
        } else {
            out.push(sum_inequality(marginals, subset));
            for p in perms {
                out.push(weighted_inequality(marginals, &PermutationSpec(p.clone())));
            }
        }
        out.into_iter()
            .map(|r| r.expect("generated user sets are valid"))
            .collect()
    })
}

/// Closed form for identical marginals: weighted bounds become
/// `1 + λ_P Σ_{i=2}^j 1/i` and sum bounds `1 + (j−1)(λ_P + λ_D)`.
pub fn build_symmetric_region(perfect: Rational, delayed: Rational, users: usize) -> Result<Region> {
    if users == 0 {
        return Err(Error::InvalidUserSet("profile needs at least one user".into()));
    }
    let n = Rational::one() - &perfect - &delayed;
    if !is_probability(&perfect) || !is_probability(&delayed) || !is_probability(&n) {
        return Err(Error::InvalidProbability(alloc::format!(
            "lambda_P = {perfect}, lambda_D = {delayed} is not a distribution"
        )));
    }
    let known = &perfect + &delayed;
    Ok(generate(users, |subset, perms| {
        let j = subset.len();
        let mut out = Vec::with_capacity(perms.len() + 1);
        let indicator = |weights: &dyn Fn(usize) -> Option<Rational>| {
            (0..users)
                .map(|u| weights(u).unwrap_or_else(Rational::zero))
                .collect::<Vec<_>>()
        };
        if j == 1 {
            let c = indicator(&|u| (u == subset[0]).then(Rational::one));
            out.push(LinearInequality::new(c, Rational::one(), ConstraintTag::Box(subset[0])));
            return out.into_iter().map(Result::unwrap).collect();
        }
        let c = indicator(&|u| subset.contains(&u).then(Rational::one));
        let rhs = Rational::one() + int(j as i64 - 1) * &known;
        out.push(LinearInequality::new(c, rhs, ConstraintTag::Sum(subset.to_vec())));
        let weighted_rhs = Rational::one() + &perfect * harmonic(2, j);
        for p in perms {
            let c = indicator(&|u| p.iter().position(|&x| x == u).map(|i| rat(1, i as i64 + 1)));
            out.push(LinearInequality::new(
                c,
                weighted_rhs.clone(),
                ConstraintTag::Weighted(p.clone()),
            ));
        }
        out.into_iter().map(Result::unwrap).collect()
    }))
}

fn generate(k: usize, mut emit: impl FnMut(&[usize], &[Vec<usize>]) -> Vec<LinearInequality>) -> Region {
    let mut inequalities = Vec::new();
    for j in 1..=k {
        for subset in combinations(k, j) {
            let perms = if j == 1 { Vec::new() } else { permutations(&subset) };
            inequalities.extend(emit(&subset, &perms));
        }
    }
    Region::from_inequalities(k, inequalities).expect("dimensions agree")
}

/// All `j`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if j > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..j).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..j).rev().find(|&i| idx[i] != i + n - j) else {
            return out;
        };
        idx[i] += 1;
        for t in i + 1..j {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// All orderings of `items` (assumed ascending) in lexicographic order.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = items.to_vec();
    cur.sort_unstable();
    let mut out = alloc::vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}
