//! Linear inequality systems over DoF space.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A DoF tuple; every coordinate is nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DofPoint(Vec<Rational>);

impl DofPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if let Some(i) = coords.iter().position(Signed::is_negative) {
            return Err(Error::NegativeCoordinate(i));
        }
        Ok(Self(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Self(alloc::vec![Rational::zero(); dim])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }
}

impl fmt::Display for DofPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Which family an inequality was generated by. User indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstraintTag {
    /// Single-user bound d_i ≤ 1.
    Box(usize),
    /// Harmonic-weighted bound over an ordered user list.
    Weighted(Vec<usize>),
    /// Equal-weight bound over a user subset (ascending).
    Sum(Vec<usize>),
    /// Joint-probability bound with weight 2 on a pair of users.
    Pattern {
        heavy: (usize, usize),
    },
    Custom,
}

impl ConstraintTag {
    pub fn family(&self) -> &'static str {
        match self {
            ConstraintTag::Box(_) => "box",
            ConstraintTag::Weighted(_) => "weighted",
            ConstraintTag::Sum(_) => "sum",
            ConstraintTag::Pattern { .. } => "pattern",
            ConstraintTag::Custom => "custom",
        }
    }
}

/// `Σ coeffs_i · d_i ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearInequality {
    coeffs: Vec<Rational>,
    rhs: Rational,
    tag: ConstraintTag,
}

impl LinearInequality {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational, tag: ConstraintTag) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::ZeroInequality);
        }
        Ok(Self { coeffs, rhs, tag })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn rhs(&self) -> &Rational {
        &self.rhs
    }

    pub fn tag(&self) -> &ConstraintTag {
        &self.tag
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn lhs(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(point)
            .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
    }

    pub fn is_satisfied(&self, point: &[Rational]) -> bool {
        self.lhs(point) <= self.rhs
    }

    pub fn is_tight(&self, point: &[Rational]) -> bool {
        self.lhs(point) == self.rhs
    }

    /// Same half-space, ignoring the tag.
    pub fn same_constraint(&self, other: &LinearInequality) -> bool {
        self.coeffs == other.coeffs && self.rhs == other.rhs
    }

    /// Coordinates relabelled so that user `i` of the result is user `perm[i]`
    /// of `self`: new coefficient `i` is old coefficient `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut inverse = alloc::vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let relabel = |users: &[usize]| users.iter().map(|&u| inverse[u]).collect::<Vec<_>>();
        let tag = match &self.tag {
            ConstraintTag::Box(u) => ConstraintTag::Box(inverse[*u]),
            ConstraintTag::Weighted(order) => ConstraintTag::Weighted(relabel(order)),
            ConstraintTag::Sum(set) => {
                let mut s = relabel(set);
                s.sort_unstable();
                ConstraintTag::Sum(s)
            }
            ConstraintTag::Pattern { heavy } => ConstraintTag::Pattern {
                heavy: (inverse[heavy.0], inverse[heavy.1]),
            },
            ConstraintTag::Custom => ConstraintTag::Custom,
        };
        Self {
            coeffs: perm.iter().map(|&p| self.coeffs[p].clone()).collect(),
            rhs: self.rhs.clone(),
            tag,
        }
    }
}

impl fmt::Display for LinearInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sep = match (first, c.is_negative()) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            first = false;
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sep}d{}", i + 1)?;
            } else {
                write!(f, "{sep}{mag} d{}", i + 1)?;
            }
        }
        write!(f, " <= {}", self.rhs)
    }
}

/// `{d ≥ 0 : every inequality holds}`; nonnegativity is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    dim: usize,
    inequalities: Vec<LinearInequality>,
}

impl Region {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            inequalities: Vec::new(),
        }
    }

    pub fn from_inequalities(dim: usize, inequalities: Vec<LinearInequality>) -> Result<Self> {
        let mut region = Self::new(dim);
        for ineq in inequalities {
            region.push(ineq)?;
        }
        Ok(region)
    }

    pub fn push(&mut self, ineq: LinearInequality) -> Result<()> {
        if ineq.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: ineq.dim(),
            });
        }
        self.inequalities.push(ineq);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    pub fn inequalities(&self) -> &[LinearInequality] {
        &self.inequalities
    }

    pub fn get(&self, index: usize) -> Option<&LinearInequality> {
        self.inequalities.get(index)
    }

    /// Drops inequalities whose half-space already appeared; the first tag wins.
    pub fn dedup(&self) -> Self {
        let mut kept: Vec<LinearInequality> = Vec::new();
        for ineq in &self.inequalities {
            if !kept.iter().any(|k| k.same_constraint(ineq)) {
                kept.push(ineq.clone());
            }
        }
        Self {
            dim: self.dim,
            inequalities: kept,
        }
    }

    /// Both systems together, i.e. the intersection of the two sets.
    pub fn intersect(&self, other: &Region) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut inequalities = self.inequalities.clone();
        inequalities.extend(other.inequalities.iter().cloned());
        Ok(Self {
            dim: self.dim,
            inequalities,
        })
    }

    /// Same inequality set, compared as half-spaces with multiplicity ignored.
    pub fn same_constraints(&self, other: &Region) -> bool {
        self.dim == other.dim
            && self
                .inequalities
                .iter()
                .all(|a| other.inequalities.iter().any(|b| a.same_constraint(b)))
            && other
                .inequalities
                .iter()
                .all(|a| self.inequalities.iter().any(|b| a.same_constraint(b)))
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            dim: self.dim,
            inequalities: self.inequalities.iter().map(|i| i.permuted(perm)).collect(),
        }
    }

    pub(crate) fn retain_indices(&self, keep: &[bool]) -> Self {
        Self {
            dim: self.dim,
            inequalities: self
                .inequalities
                .iter()
                .zip(keep)
                .filter(|(_, &k)| k)
                .map(|(i, _)| i.clone())
                .collect(),
        }
    }
}
