//! CSIT states, space-time patterns and their statistics.
//!
//! A pattern is a users × slots grid, read periodically: the long-run
//! probability of any joint state is its column frequency within the grid.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{is_probability, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CsitState {
    /// Current channel known at the transmitter.
    Perfect,
    /// Channel fed back after it has changed.
    Delayed,
    /// Channel never known.
    NotKnown,
}

impl CsitState {
    pub const ALL: [CsitState; 3] = [CsitState::Perfect, CsitState::Delayed, CsitState::NotKnown];

    pub fn symbol(self) -> char {
        match self {
            CsitState::Perfect => 'P',
            CsitState::Delayed => 'D',
            CsitState::NotKnown => 'N',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'P' => Some(CsitState::Perfect),
            'D' => Some(CsitState::Delayed),
            'N' => Some(CsitState::NotKnown),
            _ => None,
        }
    }

    /// P or D: the channel is eventually known at the transmitter.
    pub fn is_known_eventually(self) -> bool {
        !matches!(self, CsitState::NotKnown)
    }
}

/// A set of admissible states for one user in a joint-probability query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateSet(u8);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);
    pub const P: StateSet = StateSet(1);
    pub const D: StateSet = StateSet(2);
    pub const N: StateSet = StateSet(4);
    pub const PD: StateSet = StateSet(3);
    /// Wildcard: the user's state does not matter.
    pub const ANY: StateSet = StateSet(7);

    pub fn of(state: CsitState) -> Self {
        match state {
            CsitState::Perfect => Self::P,
            CsitState::Delayed => Self::D,
            CsitState::NotKnown => Self::N,
        }
    }

    pub fn contains(self, state: CsitState) -> bool {
        self.0 & Self::of(state).0 != 0
    }

    pub fn union(self, other: StateSet) -> StateSet {
        StateSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CsitPattern {
    users: usize,
    slots: usize,
    // row-major: grid[user * slots + slot]
    grid: Vec<CsitState>,
}

impl CsitPattern {
    pub fn new(users: usize, slots: usize, grid: Vec<CsitState>) -> Result<Self> {
        if users == 0 || slots == 0 {
            return Err(Error::EmptyPattern);
        }
        if grid.len() != users * slots {
            return Err(Error::DimensionMismatch {
                expected: users * slots,
                found: grid.len(),
            });
        }
        Ok(Self { users, slots, grid })
    }

    pub fn filled(users: usize, slots: usize, state: CsitState) -> Result<Self> {
        Self::new(users, slots, alloc::vec![state; users * slots])
    }

    pub fn from_rows(rows: &[Vec<CsitState>]) -> Result<Self> {
        let slots = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != slots {
                return Err(Error::RaggedPattern {
                    row: i + 1,
                    expected: slots,
                    found: row.len(),
                });
            }
        }
        Self::new(rows.len(), slots, rows.concat())
    }

    /// Parses one line per user over the alphabet `{P, D, N}`; column `t` is
    /// slot `t`. Blank lines and trailing whitespace are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<CsitState>> = Vec::new();
        let mut width = None;
        for line in text.lines().map(str::trim_end).filter(|l| !l.is_empty()) {
            let row_no = rows.len() + 1;
            let row = line
                .chars()
                .enumerate()
                .map(|(col, c)| {
                    CsitState::from_symbol(c).ok_or(Error::IllegalSymbol {
                        row: row_no,
                        col: col + 1,
                        symbol: c,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let expected = *width.get_or_insert(row.len());
            if row.len() != expected {
                return Err(Error::RaggedPattern {
                    row: row_no,
                    expected,
                    found: row.len(),
                });
            }
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn get(&self, user: usize, slot: usize) -> CsitState {
        self.grid[user * self.slots + slot]
    }

    pub fn set(&mut self, user: usize, slot: usize, state: CsitState) {
        self.grid[user * self.slots + slot] = state;
    }

    pub fn row(&self, user: usize) -> &[CsitState] {
        &self.grid[user * self.slots..(user + 1) * self.slots]
    }

    pub fn column(&self, slot: usize) -> Vec<CsitState> {
        (0..self.users).map(|u| self.get(u, slot)).collect()
    }

    /// Column frequencies per user.
    pub fn marginals(&self) -> MarginalProfile {
        let t = self.slots as i64;
        let users = (0..self.users)
            .map(|u| {
                let count = |s| self.row(u).iter().filter(|&&x| x == s).count() as i64;
                UserMarginal {
                    perfect: rat(count(CsitState::Perfect), t),
                    delayed: rat(count(CsitState::Delayed), t),
                    not_known: rat(count(CsitState::NotKnown), t),
                }
            })
            .collect();
        MarginalProfile { users }
    }

    /// Fraction of slots whose column matches `spec` for every user.
    pub fn joint_mass(&self, spec: &[StateSet]) -> Result<Rational> {
        if spec.len() != self.users {
            return Err(Error::DimensionMismatch {
                expected: self.users,
                found: spec.len(),
            });
        }
        let hits = (0..self.slots)
            .filter(|&t| (0..self.users).all(|u| spec[u].contains(self.get(u, t))))
            .count();
        Ok(rat(hits as i64, self.slots as i64))
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_users(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.users)?;
        let rows: Vec<Vec<CsitState>> = perm.iter().map(|&u| self.row(u).to_vec()).collect();
        Self::from_rows(&rows)
    }

    /// Column `t` of the result is column `perm[t]` of `self`.
    pub fn permute_slots(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.slots)?;
        let rows: Vec<Vec<CsitState>> = (0..self.users)
            .map(|u| perm.iter().map(|&t| self.get(u, t)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Slots of `self` followed by slots of `other`.
    pub fn concat(&self, other: &CsitPattern) -> Result<Self> {
        if other.users != self.users {
            return Err(Error::DimensionMismatch {
                expected: self.users,
                found: other.users,
            });
        }
        let rows: Vec<Vec<CsitState>> = (0..self.users).map(|u| [self.row(u), other.row(u)].concat()).collect();
        Self::from_rows(&rows)
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = alloc::vec![false; n];
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: perm.len(),
        });
    }
    for &p in perm {
        if p >= n || core::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidUserSet(alloc::format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// Text form accepted by [`CsitPattern::parse`], one line per user.
impl fmt::Display for CsitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for u in 0..self.users {
            let line: String = self.row(u).iter().map(|s| s.symbol()).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UserMarginal {
    pub perfect: Rational,
    pub delayed: Rational,
    pub not_known: Rational,
}

impl UserMarginal {
    /// Builds the triple from λ_P and λ_D; λ_N is the remainder.
    pub fn new(perfect: Rational, delayed: Rational) -> Result<Self> {
        let not_known = Rational::one() - &perfect - &delayed;
        let m = Self {
            perfect,
            delayed,
            not_known,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("perfect", &self.perfect),
            ("delayed", &self.delayed),
            ("not known", &self.not_known),
        ] {
            if !is_probability(v) {
                return Err(Error::InvalidProbability(alloc::format!(
                    "{name} probability {v} outside [0, 1]"
                )));
            }
        }
        if &self.perfect + &self.delayed + &self.not_known != Rational::one() {
            return Err(Error::InvalidProbability("probabilities do not sum to 1".into()));
        }
        Ok(())
    }

    /// λ_P + λ_D, the quantity the sum bounds sort users by.
    pub fn eventually_known(&self) -> Rational {
        &self.perfect + &self.delayed
    }
}

/// Per-user (λ_P, λ_D, λ_N), each summing exactly to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarginalProfile {
    users: Vec<UserMarginal>,
}

impl MarginalProfile {
    pub fn new(users: Vec<UserMarginal>) -> Result<Self> {
        if users.is_empty() {
            return Err(Error::InvalidUserSet("profile needs at least one user".into()));
        }
        for u in &users {
            u.validate()?;
        }
        Ok(Self { users })
    }

    pub fn symmetric(users: usize, perfect: Rational, delayed: Rational) -> Result<Self> {
        let m = UserMarginal::new(perfect, delayed)?;
        Self::new(alloc::vec![m; users])
    }

    /// One `(λ_P, λ_D)` pair per user.
    pub fn from_pairs(pairs: &[(Rational, Rational)]) -> Result<Self> {
        let users = pairs
            .iter()
            .map(|(p, d)| UserMarginal::new(p.clone(), d.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(users)
    }

    pub fn users(&self) -> usize {
        self.users.len()
    }

    pub fn user(&self, i: usize) -> &UserMarginal {
        &self.users[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &UserMarginal> {
        self.users.iter()
    }

    /// `Some((λ_P, λ_D))` when every user has the same marginals.
    pub fn as_symmetric(&self) -> Option<(Rational, Rational)> {
        let first = &self.users[0];
        self.users
            .iter()
            .all(|u| u == first)
            .then(|| (first.perfect.clone(), first.delayed.clone()))
    }

    /// User `i` of the result is user `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.users())?;
        Ok(Self {
            users: perm.iter().map(|&u| self.users[u].clone()).collect(),
        })
    }

    /// Average of the per-user marginals.
    pub fn average(&self) -> UserMarginal {
        let k = Rational::from_integer(self.users().into());
        let sum =
            |f: fn(&UserMarginal) -> &Rational| self.users.iter().map(f).fold(Rational::zero(), |a, b| a + b) / &k;
        UserMarginal {
            perfect: sum(|u| &u.perfect),
            delayed: sum(|u| &u.delayed),
            not_known: sum(|u| &u.not_known),
        }
    }
}
