//! Joint-probability inequalities for three users and exact comparison of
//! regions. Two patterns with identical marginals can have different
//! tightened regions; [`compare_regions`] exhibits the witness point.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::bound::build_region;
use crate::csit::{CsitPattern, StateSet};
use crate::error::{Error, Result};
use crate::polytope::{contains, recession_rays, vertices};
use crate::rational::Rational;
use crate::region::{ConstraintTag, DofPoint, LinearInequality, Region};

/// Weight 2 on the users `heavy`, weight 1 on the remaining user.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternInequalitySpec {
    heavy: (usize, usize),
}

impl PatternInequalitySpec {
    /// Users are 0-based and must be distinct members of `0..3`.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b || a >= 3 || b >= 3 {
            return Err(Error::InvalidUserSet(alloc::format!(
                "heavy pair ({a}, {b}) must be two distinct users of 0..3"
            )));
        }
        Ok(Self {
            heavy: (a.min(b), a.max(b)),
        })
    }

    pub fn heavy(&self) -> (usize, usize) {
        self.heavy
    }

    pub fn light(&self) -> usize {
        3 - self.heavy.0 - self.heavy.1
    }

    pub fn all() -> [PatternInequalitySpec; 3] {
        [(0, 1), (0, 2), (1, 2)].map(|(a, b)| PatternInequalitySpec { heavy: (a, b) })
    }
}

fn require_three(pattern: &CsitPattern) -> Result<()> {
    if pattern.users() != 3 {
        return Err(Error::UnsupportedUsers {
            expected: 3,
            found: pattern.users(),
        });
    }
    Ok(())
}

/// `2 d_a + 2 d_b + d_c ≤ 2 + (λ_P+λ_D)_a + (λ_P+λ_D)_b + Pr[a, b both in {P, D}]`.
pub fn pattern_weighted_inequality(pattern: &CsitPattern, spec: PatternInequalitySpec) -> Result<LinearInequality> {
    require_three(pattern)?;
    let (a, b) = spec.heavy;
    let marg = pattern.marginals();
    let mut joint = [StateSet::ANY; 3];
    joint[a] = StateSet::PD;
    joint[b] = StateSet::PD;
    let rhs = Rational::from_integer(2.into())
        + marg.user(a).eventually_known()
        + marg.user(b).eventually_known()
        + pattern.joint_mass(&joint)?;
    let mut coeffs = alloc::vec![Rational::from_integer(1.into()); 3];
    coeffs[a] = Rational::from_integer(2.into());
    coeffs[b] = Rational::from_integer(2.into());
    LinearInequality::new(coeffs, rhs, ConstraintTag::Pattern { heavy: (a, b) })
}

/// The marginal outer bound intersected with all three pattern inequalities.
pub fn tightened_region(pattern: &CsitPattern) -> Result<Region> {
    require_three(pattern)?;
    let mut region = build_region(&pattern.marginals());
    for spec in PatternInequalitySpec::all() {
        region.push(pattern_weighted_inequality(pattern, spec)?)?;
    }
    Ok(region)
}

/// A point of one region outside the other, with the inequality it breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub point: DofPoint,
    pub violated: LinearInequality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionRelation {
    Equal,
    /// The first region is strictly inside the second; the separator lies
    /// in the second only.
    FirstInsideSecond(Separator),
    /// The second region is strictly inside the first; the separator lies
    /// in the first only.
    SecondInsideFirst(Separator),
    Incomparable {
        first_only: Separator,
        second_only: Separator,
    },
}

/// A point of `inner` violating `outer`, or `None` if `inner ⊆ outer`.
/// Vertices are tried in descending order before recession directions.
fn escape(inner: &Region, outer: &Region) -> Result<Option<Separator>> {
    let points = vertices(inner)?;
    for v in &points {
        if let Some(&i) = contains(outer, v)?.violated.first() {
            return Ok(Some(Separator {
                point: v.clone(),
                violated: outer.inequalities()[i].clone(),
            }));
        }
    }
    let Some(base) = points.first() else {
        return Ok(None);
    };
    for ray in recession_rays(inner)? {
        for ineq in outer.inequalities() {
            let slope = ineq.lhs(&ray);
            if !slope.is_positive() {
                continue;
            }
            let gap = ineq.rhs() - ineq.lhs(base.coords());
            let mut t = gap / &slope + Rational::from_integer(1.into());
            if t < Rational::zero() {
                t = Rational::from_integer(1.into());
            }
            let coords: Vec<Rational> = base.coords().iter().zip(&ray).map(|(b, r)| b + &t * r).collect();
            return Ok(Some(Separator {
                point: DofPoint::new(coords)?,
                violated: ineq.clone(),
            }));
        }
    }
    Ok(None)
}

/// Decides inclusion exactly through mutual vertex and ray membership.
pub fn compare_regions(first: &Region, second: &Region) -> Result<RegionRelation> {
    if first.dim() != second.dim() {
        return Err(Error::DimensionMismatch {
            expected: first.dim(),
            found: second.dim(),
        });
    }
    let first_only = escape(first, second)?;
    let second_only = escape(second, first)?;
    Ok(match (first_only, second_only) {
        (None, None) => RegionRelation::Equal,
        (None, Some(s)) => RegionRelation::FirstInsideSecond(s),
        (Some(s), None) => RegionRelation::SecondInsideFirst(s),
        (Some(first_only), Some(second_only)) => RegionRelation::Incomparable {
            first_only,
            second_only,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::polytope::{is_redundant, lp_max};
    use crate::rational::{int, rat};
    use alloc::vec;
    use proptest::prelude::*;

    fn point(v: &[Rational]) -> DofPoint {
        DofPoint::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pattern_bounds() {
        let spec = PatternInequalitySpec::new(0, 1).unwrap();
        let b = pattern_weighted_inequality(&catalog::diagonal_perfect(), spec).unwrap();
        assert_eq!(b.coeffs(), &[int(2), int(2), int(1)]);
        assert_eq!(b.rhs(), &rat(8, 3));
        let a = pattern_weighted_inequality(&catalog::shared_perfect(), spec).unwrap();
        assert_eq!(a.rhs(), &int(3));
        let none = CsitPattern::parse("NN\nNN\nNN").unwrap();
        for spec in PatternInequalitySpec::all() {
            assert_eq!(pattern_weighted_inequality(&none, spec).unwrap().rhs(), &int(2));
        }
    }

    #[test]
    fn rejects_other_sizes() {
        let p = CsitPattern::parse("PN\nNP").unwrap();
        assert!(matches!(tightened_region(&p), Err(Error::UnsupportedUsers { .. })));
        assert!(PatternInequalitySpec::new(1, 1).is_err());
        assert!(PatternInequalitySpec::new(0, 3).is_err());
    }

    #[test]
    fn diagonal_pattern_excludes_corner() {
        let t = tightened_region(&catalog::diagonal_perfect()).unwrap();
        let m = contains(&t, &point(&[int(1), rat(1, 3), rat(1, 3)])).unwrap();
        assert!(!m.is_member());
        let broken = &t.inequalities()[m.violated[0]];
        assert_eq!(broken.tag(), &ConstraintTag::Pattern { heavy: (0, 1) });
        assert_eq!(lp_max(&t, &[int(2), int(2), int(1)]).unwrap().value(), Some(&rat(8, 3)));
    }

    #[test]
    fn shared_column_pattern_adds_nothing() {
        let p = catalog::shared_perfect();
        let t = tightened_region(&p).unwrap();
        for i in t.len() - 3..t.len() {
            assert!(is_redundant(&t, i).unwrap());
        }
        assert_eq!(
            compare_regions(&t, &build_region(&p.marginals())).unwrap(),
            RegionRelation::Equal
        );
        let all_p = CsitPattern::parse("P\nP\nP").unwrap();
        assert!(
            contains(&tightened_region(&all_p).unwrap(), &point(&[int(1), int(1), int(1)]))
                .unwrap()
                .is_member()
        );
    }

    #[test]
    fn same_marginals_different_regions() {
        let a = catalog::shared_perfect();
        let b = catalog::diagonal_perfect();
        assert_eq!(a.marginals(), b.marginals());
        let rel = compare_regions(&tightened_region(&b).unwrap(), &tightened_region(&a).unwrap()).unwrap();
        match rel {
            RegionRelation::FirstInsideSecond(s) => {
                assert_eq!(s.point, point(&[int(1), rat(1, 3), rat(1, 3)]));
                assert_eq!(s.violated.rhs(), &rat(8, 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unrelated_profiles_are_incomparable() {
        let r1 = build_region(&catalog::ascending_perfect_profile());
        let r2 = build_region(&catalog::ascending_perfect_profile().permuted(&[2, 1, 0]).unwrap());
        assert_eq!(compare_regions(&r1, &r1).unwrap(), RegionRelation::Equal);
        // the mixed profile is looser everywhere, not incomparable
        let mixed = build_region(&catalog::mixed_profile());
        assert!(matches!(
            compare_regions(&mixed, &r1).unwrap(),
            RegionRelation::SecondInsideFirst(_)
        ));
        match compare_regions(&r1, &r2).unwrap() {
            RegionRelation::Incomparable {
                first_only,
                second_only,
            } => {
                assert!(contains(&r1, &first_only.point).unwrap().is_member());
                assert!(!contains(&r2, &first_only.point).unwrap().is_member());
                assert!(contains(&r2, &second_only.point).unwrap().is_member());
                assert!(!contains(&r1, &second_only.point).unwrap().is_member());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_regions_compare_through_rays() {
        let mut narrow = Region::new(2);
        narrow
            .push(LinearInequality::new(vec![int(1), int(0)], int(1), ConstraintTag::Custom).unwrap())
            .unwrap();
        let mut boxed = narrow.clone();
        boxed
            .push(LinearInequality::new(vec![int(0), int(1)], int(5), ConstraintTag::Custom).unwrap())
            .unwrap();
        match compare_regions(&boxed, &narrow).unwrap() {
            RegionRelation::FirstInsideSecond(s) => {
                assert!(contains(&narrow, &s.point).unwrap().is_member());
                assert!(!contains(&boxed, &s.point).unwrap().is_member());
            }
            other => panic!("{other:?}"),
        }
        assert!(compare_regions(&boxed, &Region::new(3)).is_err());
    }

    fn arb_pattern() -> impl Strategy<Value = CsitPattern> {
        (1usize..7).prop_flat_map(|t| {
            proptest::collection::vec(0u8..3, 3 * t).prop_map(move |cells| {
                let grid = cells.iter().map(|&c| crate::csit::CsitState::ALL[c as usize]).collect();
                CsitPattern::new(3, t, grid).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn tightened_is_inside_marginal_bound(p in arb_pattern()) {
            let t = tightened_region(&p).unwrap();
            let base = build_region(&p.marginals());
            let rel = compare_regions(&t, &base).unwrap();
            prop_assert!(matches!(rel, RegionRelation::Equal | RegionRelation::FirstInsideSecond(_)));
        }

        #[test]
        fn slot_order_is_immaterial(p in arb_pattern(), seed in any::<u64>()) {
            let t = p.slots();
            let mut perm: Vec<usize> = (0..t).collect();
            let mut s = seed;
            for i in (1..t).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let q = p.permute_slots(&perm).unwrap();
            prop_assert_eq!(tightened_region(&p).unwrap(), tightened_region(&q).unwrap());
        }

        #[test]
        fn joint_term_obeys_frechet_bounds(p in arb_pattern()) {
            let m = p.marginals();
            for spec in PatternInequalitySpec::all() {
                let (a, b) = spec.heavy();
                let ineq = pattern_weighted_inequality(&p, spec).unwrap();
                let ka = m.user(a).eventually_known();
                let kb = m.user(b).eventually_known();
                let joint = ineq.rhs() - int(2) - &ka - &kb;
                prop_assert!(joint <= ka.clone().min(kb.clone()));
                prop_assert!(joint >= (&ka + &kb - int(1)).max(int(0)));
            }
        }
    }
}
