//! Exact geometry over [`Region`]s: linear programming, membership,
//! redundancy and extreme points. Everything is rational; there is no
//! tolerance anywhere in this module.

mod dd;
mod lp;

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::region::{DofPoint, Region};

/// Vertex enumeration is only offered up to this many users.
pub const MAX_VERTEX_USERS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Rational, optimizer: DofPoint },
    Unbounded,
    Infeasible,
}

impl LpResult {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn optimizer(&self) -> Option<&DofPoint> {
        match self {
            LpResult::Optimal { optimizer, .. } => Some(optimizer),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            LpResult::Optimal { .. } => "optimal",
            LpResult::Unbounded => "unbounded",
            LpResult::Infeasible => "infeasible",
        }
    }
}

fn system(region: &Region, skip: Option<usize>) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    region
        .inequalities()
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != skip)
        .map(|(_, ineq)| (ineq.coeffs().to_vec(), ineq.rhs().clone()))
        .unzip()
}

fn check_dim(region: &Region, found: usize) -> Result<()> {
    if region.dim() != found {
        return Err(Error::DimensionMismatch {
            expected: region.dim(),
            found,
        });
    }
    Ok(())
}

/// Maximises `objective · d` over `{d ≥ 0} ∩ region`. Bland's rule makes the
/// optimizer reproducible.
pub fn lp_max(region: &Region, objective: &[Rational]) -> Result<LpResult> {
    check_dim(region, objective.len())?;
    let (a, b) = system(region, None);
    Ok(from_outcome(lp::maximise(&a, &b, objective)))
}

fn from_outcome(outcome: lp::Outcome) -> LpResult {
    match outcome {
        lp::Outcome::Optimal { value, x } => LpResult::Optimal {
            value,
            optimizer: DofPoint::new(x).expect("simplex keeps x >= 0"),
        },
        lp::Outcome::Unbounded => LpResult::Unbounded,
        lp::Outcome::Infeasible => LpResult::Infeasible,
    }
}

/// Indices of the inequalities a point violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub violated: Vec<usize>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.violated.is_empty()
    }
}

pub fn contains(region: &Region, point: &DofPoint) -> Result<Membership> {
    check_dim(region, point.dim())?;
    let violated = region
        .inequalities()
        .iter()
        .enumerate()
        .filter(|(_, ineq)| !ineq.is_satisfied(point.coords()))
        .map(|(i, _)| i)
        .collect();
    Ok(Membership { violated })
}

/// True when dropping inequality `index` leaves the set unchanged: its left
/// side cannot exceed its bound under the remaining constraints.
pub fn is_redundant(region: &Region, index: usize) -> Result<bool> {
    let ineq = region.get(index).ok_or(Error::DimensionMismatch {
        expected: region.len(),
        found: index,
    })?;
    let (a, b) = system(region, Some(index));
    Ok(match lp::maximise(&a, &b, ineq.coeffs()) {
        lp::Outcome::Optimal { value, .. } => value <= *ineq.rhs(),
        lp::Outcome::Unbounded => false,
        lp::Outcome::Infeasible => true,
    })
}

/// Drops redundant inequalities one at a time in index order, each tested
/// against the constraints still kept. The result defines the same set and
/// no remaining inequality is redundant.
pub fn remove_redundant(region: &Region) -> Region {
    let mut keep = alloc::vec![true; region.len()];
    for i in 0..region.len() {
        keep[i] = false;
        let (a, b): (Vec<_>, Vec<_>) = region
            .inequalities()
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(ineq, _)| (ineq.coeffs().to_vec(), ineq.rhs().clone()))
            .unzip();
        let ineq = &region.inequalities()[i];
        let redundant = match lp::maximise(&a, &b, ineq.coeffs()) {
            lp::Outcome::Optimal { value, .. } => value <= *ineq.rhs(),
            lp::Outcome::Unbounded => false,
            lp::Outcome::Infeasible => true,
        };
        keep[i] = !redundant;
    }
    region.retain_indices(&keep)
}

fn guard(region: &Region) -> Result<()> {
    if region.dim() > MAX_VERTEX_USERS {
        return Err(Error::DimensionTooLarge {
            users: region.dim(),
            limit: MAX_VERTEX_USERS,
        });
    }
    Ok(())
}

/// A vertex together with the inequality indices tight at it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub point: DofPoint,
    pub tight: Vec<usize>,
}

/// All extreme points, each once, sorted lexicographically descending so
/// that points with a large first coordinate come first.
pub fn vertices(region: &Region) -> Result<Vec<DofPoint>> {
    Ok(vertices_with_tight(region)?.into_iter().map(|v| v.point).collect())
}

pub fn vertices_with_tight(region: &Region) -> Result<Vec<Vertex>> {
    guard(region)?;
    let (a, b) = system(region, None);
    let a = if a.is_empty() { Vec::new() } else { a };
    let mut out: Vec<Vertex> = generators(region, &a, &b)
        .points
        .into_iter()
        .map(|(x, tight)| Vertex {
            point: DofPoint::new(x).expect("cone generators are nonnegative"),
            tight,
        })
        .collect();
    out.sort_by(|x, y| y.point.cmp(&x.point));
    out.dedup_by(|x, y| x.point == y.point);
    Ok(out)
}

fn generators(region: &Region, a: &[Vec<Rational>], b: &[Rational]) -> dd::Generators {
    if a.is_empty() {
        // no rows: the orthant, apex at the origin and unit rays
        let k = region.dim();
        let unit = |i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        Rational::from_integer(1.into())
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        };
        return dd::Generators {
            points: alloc::vec![(alloc::vec![Rational::zero(); k], Vec::new())],
            rays: (0..k).map(unit).collect(),
        };
    }
    dd::enumerate(a, b)
}

/// Extreme directions of the region's recession cone (empty when bounded).
pub fn recession_rays(region: &Region) -> Result<Vec<Vec<Rational>>> {
    guard(region)?;
    let (a, b) = system(region, None);
    Ok(generators(region, &a, &b).rays)
}

/// True when no other point of the region dominates `point` componentwise
/// with strict improvement somewhere.
pub fn is_pareto_maximal(region: &Region, point: &DofPoint) -> Result<bool> {
    check_dim(region, point.dim())?;
    // d = point + y, y ≥ 0: maximise Σ y
    let (a, b): (Vec<_>, Vec<_>) = region
        .inequalities()
        .iter()
        .map(|ineq| (ineq.coeffs().to_vec(), ineq.rhs() - ineq.lhs(point.coords())))
        .unzip();
    if b.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    let ones = alloc::vec![Rational::from_integer(1.into()); region.dim()];
    Ok(match lp::maximise(&a, &b, &ones) {
        lp::Outcome::Optimal { value, .. } => value.is_zero(),
        _ => false,
    })
}

/// The vertices no region point dominates.
pub fn pareto_vertices(region: &Region) -> Result<Vec<DofPoint>> {
    let mut out = Vec::new();
    for v in vertices(region)? {
        if is_pareto_maximal(region, &v)? {
            out.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{build_region, build_symmetric_region};
    use crate::csit::MarginalProfile;
    use crate::rational::{int, rat};
    use crate::region::{ConstraintTag, LinearInequality};
    use alloc::vec;

    fn point(v: &[Rational]) -> DofPoint {
        DofPoint::new(v.to_vec()).unwrap()
    }

    fn ones(k: usize) -> Vec<Rational> {
        vec![int(1); k]
    }

    /// Brute force: every K-subset of rows (nonnegativity included) solved
    /// exactly by Gaussian elimination, kept when feasible.
    fn brute_force_vertices(region: &Region) -> Vec<DofPoint> {
        let k = region.dim();
        let mut rows: Vec<(Vec<Rational>, Rational)> = region
            .inequalities()
            .iter()
            .map(|i| (i.coeffs().to_vec(), i.rhs().clone()))
            .collect();
        for i in 0..k {
            let mut c = vec![int(0); k];
            c[i] = int(-1);
            rows.push((c, int(0)));
        }
        let mut out: Vec<DofPoint> = Vec::new();
        for subset in crate::bound::combinations(rows.len(), k) {
            let mut m: Vec<Vec<Rational>> = subset
                .iter()
                .map(|&r| {
                    let mut row = rows[r].0.clone();
                    row.push(rows[r].1.clone());
                    row
                })
                .collect();
            let mut singular = false;
            for col in 0..k {
                let Some(p) = (col..k).find(|&r| !m[r][col].is_zero()) else {
                    singular = true;
                    break;
                };
                m.swap(col, p);
                let inv = m[col][col].recip();
                for x in m[col].iter_mut() {
                    *x *= &inv;
                }
                for r in 0..k {
                    if r != col && !m[r][col].is_zero() {
                        let f = m[r][col].clone();
                        let pivot = m[col].clone();
                        for (x, y) in m[r].iter_mut().zip(pivot) {
                            *x -= &f * y;
                        }
                    }
                }
            }
            if singular {
                continue;
            }
            let x: Vec<Rational> = m.iter().map(|row| row[k].clone()).collect();
            if x.iter().any(|c| c.is_negative()) {
                continue;
            }
            let p = point(&x);
            if contains(region, &p).unwrap().is_member() && !out.contains(&p) {
                out.push(p);
            }
        }
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    #[test]
    fn sum_bound_values() {
        let m = MarginalProfile::symmetric(3, rat(2, 3), rat(1, 6)).unwrap();
        let r = build_region(&m);
        assert_eq!(lp_max(&r, &ones(3)).unwrap().value(), Some(&rat(28, 11)));
        for i in 0..3 {
            let mut e = vec![int(0); 3];
            e[i] = int(1);
            assert_eq!(lp_max(&r, &e).unwrap().value(), Some(&int(1)));
        }
        let a = MarginalProfile::from_pairs(&[(rat(1, 4), int(0)), (rat(1, 2), int(0)), (int(1), int(0))]).unwrap();
        let res = lp_max(&build_region(&a), &ones(3)).unwrap();
        assert_eq!(res.value(), Some(&rat(7, 4)));
        let opt = res.optimizer().unwrap();
        assert!(contains(&build_region(&a), opt).unwrap().is_member());
        assert_eq!(opt.sum(), rat(7, 4));
    }

    #[test]
    fn lp_statuses() {
        let mut r = Region::new(2);
        r.push(LinearInequality::new(vec![int(1), int(-1)], int(1), ConstraintTag::Custom).unwrap())
            .unwrap();
        assert_eq!(lp_max(&r, &[int(0), int(1)]).unwrap(), LpResult::Unbounded);
        r.push(LinearInequality::new(vec![int(-1), int(0)], int(-2), ConstraintTag::Custom).unwrap())
            .unwrap();
        r.push(LinearInequality::new(vec![int(1), int(0)], int(1), ConstraintTag::Custom).unwrap())
            .unwrap();
        assert_eq!(lp_max(&r, &[int(1), int(0)]).unwrap(), LpResult::Infeasible);
        assert!(lp_max(&r, &[int(1)]).is_err());
    }

    #[test]
    fn membership() {
        let case_a = build_symmetric_region(rat(1, 3), int(0), 3).unwrap();
        assert!(contains(&case_a, &point(&[int(1), rat(1, 3), rat(1, 3)]))
            .unwrap()
            .is_member());
        assert!(contains(&case_a, &DofPoint::origin(3)).unwrap().is_member());
        let outside = contains(&case_a, &point(&[int(1), rat(1, 2), int(0)])).unwrap();
        assert!(!outside.is_member());
        assert!(outside
            .violated
            .iter()
            .all(|&i| case_a.inequalities()[i].tag().family() != "box"));
        assert!(contains(&case_a, &DofPoint::origin(2)).is_err());
    }

    #[test]
    fn case_a_redundancy() {
        let r = build_symmetric_region(rat(1, 3), int(0), 3).unwrap();
        let irr = remove_redundant(&r);
        assert_eq!(irr.len(), 7);
        assert!(irr.inequalities().iter().all(|i| i.tag().family() != "weighted"));
        for (i, ineq) in r.inequalities().iter().enumerate() {
            let expected = ineq.tag().family() == "weighted";
            assert_eq!(is_redundant(&r, i).unwrap(), expected, "{ineq}");
        }
    }

    #[test]
    fn one_user_region() {
        let r = build_region(&MarginalProfile::symmetric(1, rat(2, 7), int(0)).unwrap());
        assert!(!is_redundant(&r, 0).unwrap());
        assert_eq!(remove_redundant(&r), r);
        assert_eq!(vertices(&r).unwrap(), vec![point(&[int(1)]), point(&[int(0)])]);
    }

    #[test]
    fn case_a_vertices_match_brute_force() {
        let r = build_symmetric_region(rat(1, 3), int(0), 3).unwrap();
        let v = vertices(&r).unwrap();
        assert_eq!(v, brute_force_vertices(&r));
        for c in [
            [int(1), rat(1, 3), rat(1, 3)],
            [rat(1, 3), int(1), rat(1, 3)],
            [rat(1, 3), rat(1, 3), int(1)],
        ] {
            assert!(v.contains(&point(&c)));
        }
        assert!(v.contains(&point(&[int(1), rat(1, 3), int(0)])));
        let pareto = pareto_vertices(&r).unwrap();
        assert_eq!(pareto.len(), 3);
    }

    #[test]
    fn case_b_vertices() {
        let lp = rat(1, 3);
        let r = build_symmetric_region(lp.clone(), rat(1, 3), 3).unwrap();
        let v = vertices(&r).unwrap();
        assert_eq!(v, brute_force_vertices(&r));
        let pair = (int(2) + &lp) / int(3);
        assert_eq!(pair, rat(7, 9));
        assert!(v.contains(&point(&[pair.clone(), pair.clone(), lp.clone()])));
        assert!(v.contains(&point(&[lp.clone(), pair.clone(), pair.clone()])));
        let all = (int(6) + int(5) * &lp) / int(11);
        assert_eq!(all, rat(23, 33));
        assert!(v.contains(&point(&[all.clone(), all.clone(), all])));
    }

    #[test]
    fn vertices_match_brute_force_on_asymmetric_profiles() {
        for pairs in [
            vec![(rat(1, 4), int(0)), (rat(1, 2), int(0)), (int(1), int(0))],
            vec![(rat(2, 3), rat(1, 6)), (rat(1, 5), rat(3, 5)), (int(0), rat(1, 2))],
            vec![(rat(1, 2), rat(1, 4)), (rat(1, 3), int(0))],
        ] {
            let r = build_region(&MarginalProfile::from_pairs(&pairs).unwrap());
            let v = vertices(&r).unwrap();
            assert_eq!(v, brute_force_vertices(&r));
            let best = v.iter().map(DofPoint::sum).max().unwrap();
            assert_eq!(lp_max(&r, &ones(r.dim())).unwrap().value(), Some(&best));
        }
    }

    #[test]
    fn guards_and_unbounded_regions() {
        let r5 = build_symmetric_region(int(0), int(0), 5).unwrap();
        assert_eq!(
            vertices(&r5).unwrap_err(),
            Error::DimensionTooLarge { users: 5, limit: 4 }
        );
        let mut r = Region::new(2);
        r.push(LinearInequality::new(vec![int(1), int(0)], int(1), ConstraintTag::Custom).unwrap())
            .unwrap();
        assert_eq!(
            vertices(&r).unwrap(),
            vec![point(&[int(1), int(0)]), point(&[int(0), int(0)])]
        );
        assert_eq!(recession_rays(&r).unwrap(), vec![vec![int(0), int(1)]]);
    }
}
