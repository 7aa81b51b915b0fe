//! Transmission schedules: what is sent in every slot, which symbols exist,
//! and the CSIT each slot needs.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use num_traits::Zero;

use crate::csit::{CsitPattern, CsitState};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::region::DofPoint;

/// An information symbol. One owner makes it private; several make it a
/// common symbol every owner must decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    owners: Vec<usize>,
}

impl Symbol {
    pub fn owners(&self) -> &[usize] {
        &self.owners
    }

    pub fn order(&self) -> usize {
        self.owners.len()
    }

    pub fn is_private(&self) -> bool {
        self.owners.len() == 1
    }

    pub fn is_for(&self, user: usize) -> bool {
        self.owners.contains(&user)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    One,
    /// Drawn at random (known to everybody), fresh for each occurrence.
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Symbol(usize),
    /// What `user` received in an earlier `slot` from the listed streams of
    /// that slot, noise-free. Rebuilding it needs that user's channel.
    Overheard {
        user: usize,
        slot: usize,
        streams: Vec<usize>,
    },
}

/// A scalar linear combination meant for `intended`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub intended: Vec<usize>,
    pub terms: Vec<(Coefficient, Term)>,
}

impl Message {
    pub fn symbol(id: usize, intended: Vec<usize>) -> Self {
        Self {
            intended,
            terms: alloc::vec![(Coefficient::One, Term::Symbol(id))],
        }
    }

    pub fn order(&self) -> usize {
        self.intended.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Beam {
    /// A random direction; needs no CSIT.
    Generic,
    /// The `index`-th vector of an orthonormal basis of the space orthogonal
    /// to the current channels of `nulled`. Needs their perfect CSIT.
    ZeroForce { nulled: Vec<usize>, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    pub message: Message,
    pub beam: Beam,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    ZeroForce,
    SingleUser,
    MatPhase { order: usize },
    Retransmit,
}

impl ActionKind {
    pub fn label(&self) -> &'static str {
        match self {
            ActionKind::ZeroForce => "zero-force",
            ActionKind::SingleUser => "single-user",
            ActionKind::MatPhase { .. } => "mat-phase",
            ActionKind::Retransmit => "retransmit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotAction {
    pub kind: ActionKind,
    pub targets: Vec<usize>,
    pub streams: Vec<Stream>,
}

/// A contiguous block of slots built by one step of a construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phase {
    pub label: String,
    pub order: Option<usize>,
    pub repetitions: u64,
    pub slots: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseCensus {
    pub label: String,
    pub order: Option<usize>,
    pub repetitions: u64,
    pub slots: usize,
    /// (user, slot) pairs fed back with delay inside the phase.
    pub feedbacks: usize,
}

/// Exact accounting of a schedule, assuming it decodes as designed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeResult {
    /// Private symbols per user.
    pub decoded: Vec<u64>,
    /// Common symbols each user also has to decode.
    pub common: Vec<u64>,
    pub slots: u64,
    /// `decoded[i] / slots`.
    pub dof: DofPoint,
    /// The least CSIT the schedule needs.
    pub realized: CsitPattern,
}

impl SchemeResult {
    pub fn sum_dof(&self) -> Rational {
        self.dof.sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    users: usize,
    symbols: Vec<Symbol>,
    slots: Vec<SlotAction>,
    phases: Vec<Phase>,
    declared: Option<CsitPattern>,
}

impl Schedule {
    pub fn users(&self) -> usize {
        self.users
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn actions(&self) -> &[SlotAction] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    /// The pattern the schedule claims to run on, if any.
    pub fn declared(&self) -> Option<&CsitPattern> {
        self.declared.as_ref()
    }

    /// Attaches a pattern; it must cover every demand of [`Self::realized_pattern`].
    pub fn with_declared(mut self, pattern: CsitPattern) -> Result<Self> {
        self.declared = Some(pattern);
        self.check_declared()?;
        Ok(self)
    }

    /// Antennas needed by the zero-forcing beams.
    pub fn required_antennas(&self) -> usize {
        self.slots
            .iter()
            .flat_map(|a| &a.streams)
            .map(|s| match &s.beam {
                Beam::Generic => 1,
                Beam::ZeroForce { nulled, index } => nulled.len() + index + 1,
            })
            .max()
            .unwrap_or(1)
    }

    /// Checks every reference and the antenna budget, then the declared pattern.
    pub fn validate(&self, antennas: usize) -> Result<()> {
        let ledger = |msg: String| Err(Error::Ledger(msg));
        for (t, action) in self.slots.iter().enumerate() {
            if action.targets.iter().any(|&u| u >= self.users) {
                return ledger(alloc::format!("slot {t} targets a user outside 0..{}", self.users));
            }
            for stream in &action.streams {
                if let Beam::ZeroForce { nulled, .. } = &stream.beam {
                    if nulled.iter().any(|&u| u >= self.users) {
                        return ledger(alloc::format!("slot {t} nulls an unknown user"));
                    }
                }
                for (_, term) in &stream.message.terms {
                    match term {
                        Term::Symbol(id) if *id >= self.symbols.len() => {
                            return ledger(alloc::format!("slot {t} sends unknown symbol {id}"));
                        }
                        Term::Overheard { user, slot, streams } => {
                            if *slot >= t {
                                return ledger(alloc::format!(
                                    "slot {t} reuses slot {slot}, which is not strictly earlier"
                                ));
                            }
                            if *user >= self.users {
                                return ledger(alloc::format!("slot {t} reuses an unknown user {user}"));
                            }
                            if streams.iter().any(|&s| s >= self.slots[*slot].streams.len()) {
                                return ledger(alloc::format!("slot {t} reuses a missing stream of slot {slot}"));
                            }
                        }
                        Term::Symbol(_) => {}
                    }
                }
            }
        }
        let need = self.required_antennas();
        if need > antennas {
            return Err(Error::TooFewAntennas { users: need, antennas });
        }
        self.check_declared()
    }

    fn check_declared(&self) -> Result<()> {
        let Some(declared) = &self.declared else {
            return Ok(());
        };
        if declared.users() != self.users || declared.slots() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.users * self.len(),
                found: declared.users() * declared.slots(),
            });
        }
        let demand = self.realized_pattern();
        for slot in 0..self.len() {
            for user in 0..self.users {
                let required = demand.get(user, slot);
                let have = declared.get(user, slot);
                let ok = match required {
                    CsitState::Perfect => have == CsitState::Perfect,
                    CsitState::Delayed => have != CsitState::NotKnown,
                    CsitState::NotKnown => true,
                };
                if !ok {
                    return Err(Error::CsitViolation {
                        user,
                        slot,
                        required,
                        declared: have,
                    });
                }
            }
        }
        Ok(())
    }

    /// Per user and slot: P where a beam nulls the user, D where the user's
    /// channel is reused later, N otherwise.
    pub fn realized_pattern(&self) -> CsitPattern {
        let mut grid = alloc::vec![CsitState::NotKnown; self.users * self.len().max(1)];
        let width = self.len().max(1);
        for action in &self.slots {
            for stream in &action.streams {
                for (_, term) in &stream.message.terms {
                    if let Term::Overheard { user, slot, .. } = term {
                        grid[user * width + slot] = CsitState::Delayed;
                    }
                }
            }
        }
        for (t, action) in self.slots.iter().enumerate() {
            for stream in &action.streams {
                if let Beam::ZeroForce { nulled, .. } = &stream.beam {
                    for &u in nulled {
                        grid[u * width + t] = CsitState::Perfect;
                    }
                }
            }
        }
        CsitPattern::new(self.users, width, grid).expect("grid sized to the schedule")
    }

    /// (user, slot) pairs whose channel is fed back with delay.
    pub fn feedback_ledger(&self) -> Vec<(usize, usize)> {
        let p = self.realized_pattern();
        let mut out = Vec::new();
        for slot in 0..self.len() {
            for user in 0..self.users {
                if p.get(user, slot) == CsitState::Delayed {
                    out.push((user, slot));
                }
            }
        }
        out
    }

    /// Fraction of (user, slot) pairs that need delayed feedback.
    pub fn feedback_census(&self) -> Rational {
        if self.is_empty() {
            return Rational::zero();
        }
        Rational::new(
            (self.feedback_ledger().len() as u64).into(),
            ((self.len() * self.users) as u64).into(),
        )
    }

    pub fn phase_census(&self) -> Vec<PhaseCensus> {
        let ledger = self.feedback_ledger();
        self.phases
            .iter()
            .map(|ph| PhaseCensus {
                label: ph.label.clone(),
                order: ph.order,
                repetitions: ph.repetitions,
                slots: ph.slots.len(),
                feedbacks: ledger.iter().filter(|(_, s)| ph.slots.contains(s)).count(),
            })
            .collect()
    }

    pub fn result(&self) -> SchemeResult {
        let mut decoded = alloc::vec![0u64; self.users];
        let mut common = alloc::vec![0u64; self.users];
        for s in &self.symbols {
            for &u in &s.owners {
                if s.is_private() {
                    decoded[u] += 1;
                } else {
                    common[u] += 1;
                }
            }
        }
        let slots = self.len() as u64;
        let dof = decoded
            .iter()
            .map(|&c| {
                if slots == 0 {
                    Rational::zero()
                } else {
                    Rational::new(c.into(), slots.into())
                }
            })
            .collect();
        SchemeResult {
            decoded,
            common,
            slots,
            dof: DofPoint::new(dof).expect("counts are nonnegative"),
            realized: self.realized_pattern(),
        }
    }

    /// The schedule with one slot deleted. Later slot references shift down;
    /// deleting a slot that is reused later is a ledger error.
    pub fn without_slot(&self, slot: usize) -> Result<Schedule> {
        if slot >= self.len() || self.len() == 1 {
            return Err(Error::Ledger(alloc::format!(
                "cannot delete slot {slot} of {}",
                self.len()
            )));
        }
        let mut slots = self.slots.clone();
        slots.remove(slot);
        for action in slots.iter_mut() {
            for stream in action.streams.iter_mut() {
                for (_, term) in stream.message.terms.iter_mut() {
                    if let Term::Overheard { slot: s, .. } = term {
                        if *s == slot {
                            return Err(Error::Ledger(alloc::format!("slot {slot} is reused later")));
                        }
                        if *s > slot {
                            *s -= 1;
                        }
                    }
                }
            }
        }
        let shift = |i: usize| if slot < i { i - 1 } else { i };
        let phases = self
            .phases
            .iter()
            .filter_map(|ph| {
                let r = shift(ph.slots.start)..shift(ph.slots.end);
                (!r.is_empty()).then(|| Phase { slots: r, ..ph.clone() })
            })
            .collect();
        let declared = match &self.declared {
            Some(p) => {
                let keep: Vec<usize> = (0..p.slots()).filter(|&t| t != slot).collect();
                let mut grid = Vec::new();
                for u in 0..p.users() {
                    grid.extend(keep.iter().map(|&t| p.get(u, t)));
                }
                Some(CsitPattern::new(p.users(), keep.len(), grid)?)
            }
            None => None,
        };
        Ok(Schedule {
            users: self.users,
            symbols: self.symbols.clone(),
            slots,
            phases,
            declared,
        })
    }
}

/// Incremental schedule construction.
#[derive(Debug)]
pub(crate) struct Builder {
    users: usize,
    symbols: Vec<Symbol>,
    slots: Vec<SlotAction>,
    phases: Vec<Phase>,
}

impl Builder {
    pub fn new(users: usize) -> Self {
        Self {
            users,
            symbols: Vec::new(),
            slots: Vec::new(),
            phases: Vec::new(),
        }
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn symbol(&mut self, owners: Vec<usize>) -> usize {
        self.symbols.push(Symbol { owners });
        self.symbols.len() - 1
    }

    /// A fresh symbol for `owners`, wrapped as a message.
    pub fn fresh(&mut self, owners: &[usize]) -> Message {
        let id = self.symbol(owners.to_vec());
        Message::symbol(id, owners.to_vec())
    }

    pub fn push(&mut self, action: SlotAction) -> usize {
        self.slots.push(action);
        self.slots.len() - 1
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn phase(&mut self, label: impl Into<String>, order: Option<usize>, repetitions: u64, start: usize) {
        let end = self.slots.len();
        if end > start {
            self.phases.push(Phase {
                label: label.into(),
                order,
                repetitions,
                slots: start..end,
            });
        }
    }

    pub fn finish(self) -> Schedule {
        Schedule {
            users: self.users,
            symbols: self.symbols,
            slots: self.slots,
            phases: self.phases,
            declared: None,
        }
    }
}
