//! Multi-phase retransmission with delayed CSIT (MAT).
//!
//! Phase `p` serves every `p`-subset `S` of the group with one slot carrying
//! `n − p + 1` order-`p` messages on random beams. Every group member `k`
//! outside `S` overhears one equation and feeds its channel back. For each
//! `(p+1)`-set `T`, the `p + 1` equations overheard inside `T` in one
//! repetition become `p` random combinations: the order-`(p+1)` messages of
//! the next phase.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use num_integer::Integer;

use crate::bound::combinations;
use crate::error::{Error, Result};
use crate::rational::{harmonic, Rational};
use crate::schemes::schedule::{ActionKind, Beam, Builder, Coefficient, Message, Schedule, SlotAction, Stream, Term};

/// Largest group served by [`mat_schedule`]; the standard repetition counts
/// grow factorially.
pub const MAX_MAT_USERS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repetitions {
    /// Phase `p` runs `(p−1)! (n−p)! n` times.
    Standard,
    /// The standard counts divided by their common factor.
    Minimal,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Repetition counts for phases `start..=users`.
pub fn mat_repetitions(users: usize, start: usize, mode: Repetitions) -> Result<Vec<u64>> {
    check(users, start)?;
    let counts: Vec<u64> = (start..=users)
        .map(|p| factorial(p - 1) * factorial(users - p) * users as u64)
        .collect();
    Ok(match mode {
        Repetitions::Standard => counts,
        Repetitions::Minimal => {
            let g = counts.iter().fold(0u64, |g, &c| g.gcd(&c));
            counts.into_iter().map(|c| c / g).collect()
        }
    })
}

fn check(users: usize, start: usize) -> Result<()> {
    if users == 0 {
        return Err(Error::InvalidUserSet("MAT needs at least one user".into()));
    }
    if users > MAX_MAT_USERS {
        return Err(Error::DimensionTooLarge {
            users,
            limit: MAX_MAT_USERS,
        });
    }
    if start == 0 || start > users {
        return Err(Error::InvalidConfig(alloc::format!(
            "start order {start} outside 1..={users}"
        )));
    }
    Ok(())
}

/// Queues of pending messages keyed by their (sorted) intended set.
pub(crate) type Inputs = BTreeMap<Vec<usize>, VecDeque<Message>>;

/// Appends the phases `start..=n` for `group` (global user ids, ascending).
/// `inputs` must hold exactly the order-`start` messages the phase consumes.
pub(crate) fn append_mat(
    b: &mut Builder,
    group: &[usize],
    start: usize,
    reps: &[u64],
    mut inputs: Inputs,
) -> Result<()> {
    let n = group.len();
    for (idx, p) in (start..=n).enumerate() {
        let subsets: Vec<Vec<usize>> = combinations(n, p)
            .into_iter()
            .map(|s| s.into_iter().map(|i| group[i]).collect())
            .collect();
        let first = b.len();
        let mut produced = Inputs::new();
        for _ in 0..reps[idx] {
            let mut overheard: BTreeMap<Vec<usize>, Vec<Term>> = BTreeMap::new();
            for set in &subsets {
                let queue = inputs.entry(set.clone()).or_default();
                if queue.len() < n - p + 1 {
                    return Err(Error::Ledger(alloc::format!(
                        "phase {p} is short of order-{p} messages for {set:?}"
                    )));
                }
                let streams: Vec<Stream> = queue
                    .drain(..n - p + 1)
                    .map(|message| Stream {
                        message,
                        beam: Beam::Generic,
                    })
                    .collect();
                let all: Vec<usize> = (0..streams.len()).collect();
                let slot = b.push(SlotAction {
                    kind: ActionKind::MatPhase { order: p },
                    targets: set.clone(),
                    streams,
                });
                for &k in group.iter().filter(|k| !set.contains(k)) {
                    let mut t = set.clone();
                    t.push(k);
                    t.sort_unstable();
                    overheard.entry(t).or_default().push(Term::Overheard {
                        user: k,
                        slot,
                        streams: all.clone(),
                    });
                }
            }
            for (t, terms) in overheard {
                let queue = produced.entry(t.clone()).or_default();
                for _ in 0..p {
                    queue.push_back(Message {
                        intended: t.clone(),
                        terms: terms.iter().map(|term| (Coefficient::Generic, term.clone())).collect(),
                    });
                }
            }
        }
        if let Some((set, q)) = inputs.iter().find(|(_, q)| !q.is_empty()) {
            return Err(Error::Ledger(alloc::format!(
                "phase {p} left {} order-{p} messages for {set:?} unsent",
                q.len()
            )));
        }
        b.phase(alloc::format!("phase {p}"), Some(p), reps[idx], first);
        inputs = produced;
    }
    Ok(())
}

/// Fresh order-`start` symbols for every `start`-subset of `group`, enough
/// for `repetitions` runs of the first phase.
pub(crate) fn fresh_inputs(b: &mut Builder, group: &[usize], start: usize, repetitions: u64) -> Inputs {
    let n = group.len();
    let mut inputs = Inputs::new();
    for s in combinations(n, start) {
        let owners: Vec<usize> = s.into_iter().map(|i| group[i]).collect();
        let count = repetitions as usize * (n - start + 1);
        let queue = (0..count).map(|_| b.fresh(&owners)).collect();
        inputs.insert(owners, queue);
    }
    inputs
}

/// MAT over all `users`, starting from fresh order-`start` symbols, with
/// the standard repetition counts.
pub fn mat_schedule(users: usize, start: usize) -> Result<Schedule> {
    mat_schedule_with(users, start, Repetitions::Standard)
}

pub fn mat_schedule_with(users: usize, start: usize, mode: Repetitions) -> Result<Schedule> {
    let reps = mat_repetitions(users, start, mode)?;
    let group: Vec<usize> = (0..users).collect();
    let mut b = Builder::new(users);
    let inputs = fresh_inputs(&mut b, &group, start, reps[0]);
    append_mat(&mut b, &group, start, &reps, inputs)?;
    Ok(b.finish())
}

/// Least fraction of delayed CSIT MAT needs from order `start` on:
/// `1 − (K − j + 1) / (K · Σ_{i=j}^{K} 1/i)`.
pub fn mat_min_delay(users: usize, start: usize) -> Result<Rational> {
    check(users, start)?;
    let k = Rational::from_integer((users as u64).into());
    let served = Rational::from_integer(((users - start + 1) as u64).into());
    Ok(Rational::from_integer(1.into()) - served / (k * harmonic(start, users)))
}
