//! Concrete achievability schedules.

use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::catalog;
use crate::csit::{CsitPattern, UserMarginal};
use crate::error::{Error, Result};
use crate::rational::{harmonic, Rational};
use crate::schemes::mat::{append_mat, fresh_inputs, mat_repetitions, Inputs, Repetitions};
use crate::schemes::schedule::{
    ActionKind, Beam, Builder, Coefficient, Message, Schedule, SchemeResult, SlotAction, Stream, Term,
};

/// Longest schedule the constructions will build.
pub const MAX_SLOTS: u64 = 1_000_000;

fn fraction(value: &Rational) -> Result<(u64, u64)> {
    let a = value.numer().to_u64();
    let b = value.denom().to_u64();
    match (a, b) {
        (Some(a), Some(b)) if a <= b => Ok((a, b)),
        _ => Err(Error::InvalidProbability(alloc::format!(
            "{value} is not a probability"
        ))),
    }
}

fn budget(slots: u64) -> Result<()> {
    if slots > MAX_SLOTS {
        return Err(Error::InvalidConfig(alloc::format!(
            "schedule would need {slots} slots, more than {MAX_SLOTS}"
        )));
    }
    Ok(())
}

/// One symbol per user, each beamed orthogonally to every other user.
fn zero_force_slot(b: &mut Builder) {
    let users = b.users();
    let streams = (0..users)
        .map(|u| Stream {
            message: b.fresh(&[u]),
            beam: Beam::ZeroForce {
                nulled: (0..users).filter(|&v| v != u).collect(),
                index: 0,
            },
        })
        .collect();
    b.push(SlotAction {
        kind: ActionKind::ZeroForce,
        targets: (0..users).collect(),
        streams,
    });
}

fn single_user_slot(b: &mut Builder, user: usize) {
    let message = b.fresh(&[user]);
    b.push(SlotAction {
        kind: ActionKind::SingleUser,
        targets: alloc::vec![user],
        streams: alloc::vec![Stream {
            message,
            beam: Beam::Generic,
        }],
    });
}

fn package(schedule: Schedule) -> (Schedule, SchemeResult) {
    let result = schedule.result();
    (schedule, result)
}

/// Without delayed CSIT: zero-force all users for a `λ_P` share of the
/// slots and serve `favored` alone in the rest. Reaches `d_favored = 1` and
/// `λ_P` for everyone else.
pub fn corner_scheme_case_a(users: usize, perfect: &Rational, favored: usize) -> Result<(Schedule, SchemeResult)> {
    if users == 0 || favored >= users {
        return Err(Error::InvalidUserSet(alloc::format!(
            "favored user {favored} outside 0..{users}"
        )));
    }
    let (a, b) = fraction(perfect)?;
    budget(b)?;
    let mut builder = Builder::new(users);
    for _ in 0..a {
        zero_force_slot(&mut builder);
    }
    builder.phase("zero forcing", None, a, 0);
    let start = builder.len();
    for _ in a..b {
        single_user_slot(&mut builder, favored);
    }
    builder.phase("single user", None, b - a, start);
    Ok(package(builder.finish()))
}

/// `Σ_{i=2}^{n} 1/i` for a MAT group of size `n`.
fn delay_weight(n: usize) -> Rational {
    harmonic(2, n)
}

/// Zero forcing to all users in a `λ_P` share of the time and `|S|`-user
/// MAT in the rest. Users in `S` get `λ_P + (1 − λ_P) / Σ_{i=1}^{|S|} 1/i`,
/// the others `λ_P`. Needs `λ_N · Σ_{i=2}^{|S|} 1/i ≤ λ_D`.
pub fn hybrid_corner_scheme(
    perfect: &Rational,
    delayed: &Rational,
    users: usize,
    subset: &[usize],
) -> Result<(Schedule, SchemeResult)> {
    let marginal = UserMarginal::new(perfect.clone(), delayed.clone())?;
    let mut group = subset.to_vec();
    group.sort_unstable();
    group.dedup();
    if group.is_empty() || group.len() != subset.len() || group.iter().any(|&u| u >= users) {
        return Err(Error::InvalidUserSet(alloc::format!(
            "{subset:?} is not a nonempty set of distinct users in 0..{users}"
        )));
    }
    let n = group.len();
    let needed = &marginal.not_known * delay_weight(n);
    if needed > marginal.delayed {
        return Err(Error::InfeasibleScheme(alloc::format!(
            "lambda_N * sum_{{i=2}}^{n} 1/i = {} * {} = {} exceeds lambda_D = {}",
            marginal.not_known,
            delay_weight(n),
            needed,
            marginal.delayed
        )));
    }

    let (a, b) = fraction(perfect)?;
    let reps = mat_repetitions(n, 1, Repetitions::Minimal)?;
    let frame: u64 = reps
        .iter()
        .enumerate()
        .map(|(i, r)| r * crate::bound::combinations(n, i + 1).len() as u64)
        .sum();
    budget(b * frame)?;

    let mut builder = Builder::new(users);
    for _ in 0..a * frame {
        zero_force_slot(&mut builder);
    }
    builder.phase("zero forcing", None, a * frame, 0);
    for _ in a..b {
        let inputs = fresh_inputs(&mut builder, &group, 1, reps[0]);
        append_mat(&mut builder, &group, 1, &reps, inputs)?;
    }
    let schedule = builder.finish();

    // the realized demand has to fit the requested marginals
    let realized = schedule.realized_pattern().marginals();
    for (u, m) in realized.iter().enumerate() {
        if m.perfect > marginal.perfect || m.eventually_known() > marginal.eventually_known() {
            return Err(Error::InfeasibleScheme(alloc::format!(
                "user {u} would need lambda_P = {}, lambda_D = {}",
                m.perfect,
                m.delayed
            )));
        }
    }
    Ok(package(schedule))
}

/// Three users, three antennas, three slots. Slot 0 sends two symbols each
/// to users 0 and 1, each pair nulled at the other user, and one symbol to
/// user 2 nulled at both. Slots 1 and 2 resend what user 2 overheard from
/// users 0 and 1. DoF (2/3, 2/3, 1/3).
pub fn retransmission_scheme() -> (Schedule, SchemeResult) {
    let mut b = Builder::new(3);
    let mut streams = Vec::new();
    for (user, other) in [(0usize, 1usize), (1, 0)] {
        for index in 0..2 {
            streams.push(Stream {
                message: b.fresh(&[user]),
                beam: Beam::ZeroForce {
                    nulled: alloc::vec![other],
                    index,
                },
            });
        }
    }
    streams.push(Stream {
        message: b.fresh(&[2]),
        beam: Beam::ZeroForce {
            nulled: alloc::vec![0, 1],
            index: 0,
        },
    });
    b.push(SlotAction {
        kind: ActionKind::ZeroForce,
        targets: alloc::vec![0, 1, 2],
        streams,
    });
    b.phase("zero forcing", None, 1, 0);
    for (user, streams) in [(0usize, alloc::vec![0, 1]), (1, alloc::vec![2, 3])] {
        let message = Message {
            intended: alloc::vec![user, 2],
            terms: alloc::vec![(
                Coefficient::One,
                Term::Overheard {
                    user: 2,
                    slot: 0,
                    streams
                }
            )],
        };
        b.push(SlotAction {
            kind: ActionKind::Retransmit,
            targets: alloc::vec![user, 2],
            streams: alloc::vec![Stream {
                message,
                beam: Beam::Generic,
            }],
        });
    }
    b.phase("retransmission", None, 1, 1);
    let schedule = b
        .finish()
        .with_declared(catalog::retransmission_pattern())
        .expect("demands match the catalog pattern");
    package(schedule)
}

/// Delayed CSIT rotating over three users. Two six-slot rounds send two
/// 2-symbol vectors to each user; what the delayed user overhears pairs up
/// into order-2 messages, which a 5-slot MAT frame from order 2 delivers.
/// 24 symbols in 17 slots.
pub fn alternating_order2_scheme() -> (Schedule, SchemeResult) {
    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    let mut b = Builder::new(3);
    let mut inputs = Inputs::new();
    for round in 0..2 {
        let first = b.len();
        // (receiver, listener that feeds back): the listener cycles A, B, C
        let plan = [(B, A), (A, B), (A, C), (C, A), (C, B), (B, C)];
        let mut heard = Vec::new();
        for (owner, listener) in plan {
            let streams: Vec<Stream> = (0..2)
                .map(|_| Stream {
                    message: b.fresh(&[owner]),
                    beam: Beam::Generic,
                })
                .collect();
            let slot = b.push(SlotAction {
                kind: ActionKind::SingleUser,
                targets: alloc::vec![owner],
                streams,
            });
            heard.push(Term::Overheard {
                user: listener,
                slot,
                streams: alloc::vec![0, 1],
            });
        }
        // pairs: A hears u_B and u_C, B hears u_A and v_C, C hears v_A and v_B
        for (pair, x, y) in [([A, B], 0, 1), ([A, C], 3, 2), ([B, C], 4, 5)] {
            inputs.entry(pair.to_vec()).or_default().push_back(Message {
                intended: pair.to_vec(),
                terms: alloc::vec![
                    (Coefficient::One, heard[x].clone()),
                    (Coefficient::One, heard[y].clone())
                ],
            });
        }
        b.phase(alloc::format!("round {}", round + 1), Some(1), 1, first);
    }
    let reps = mat_repetitions(3, 2, Repetitions::Minimal).expect("3 users from order 2");
    append_mat(&mut b, &[A, B, C], 2, &reps, inputs).expect("six order-2 messages fill the frame");
    let schedule = b.finish();
    let declared = schedule.realized_pattern();
    package(schedule.with_declared(declared).expect("self-consistent"))
}

/// The fixed counterpart of the rotating pattern: user 0 always delayed,
/// the others never known. Serving user 0 alone reaches sum DoF 1.
pub fn fixed_delayed_scheme() -> (Schedule, SchemeResult) {
    let pattern: CsitPattern = catalog::fixed_delayed();
    let mut b = Builder::new(3);
    for _ in 0..pattern.slots() {
        single_user_slot(&mut b, 0);
    }
    b.phase("single user", None, pattern.slots() as u64, 0);
    package(b.finish().with_declared(pattern).expect("no demands"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{build_region, sum_inequality};
    use crate::csit::CsitState;
    use crate::polytope::contains;
    use crate::rational::{int, rat};
    use alloc::vec;

    fn dof(r: &SchemeResult) -> Vec<Rational> {
        r.dof.coords().to_vec()
    }

    #[test]
    fn case_a_corners() {
        let (s, r) = corner_scheme_case_a(3, &rat(1, 3), 0).unwrap();
        assert_eq!(dof(&r), vec![int(1), rat(1, 3), rat(1, 3)]);
        assert_eq!(s.len(), 3);
        s.validate(3).unwrap();
        let (_, r) = corner_scheme_case_a(3, &int(1), 2).unwrap();
        assert_eq!(dof(&r), vec![int(1); 3]);
        let (_, r) = corner_scheme_case_a(2, &rat(1, 2), 1).unwrap();
        assert_eq!(dof(&r), vec![rat(1, 2), int(1)]);
        assert!(corner_scheme_case_a(3, &rat(1, 3), 3).is_err());
        assert!(corner_scheme_case_a(3, &rat(4, 3), 0).is_err());
        let m = r.realized.marginals();
        assert_eq!(m.user(0).perfect, rat(1, 2));
        assert_eq!(m.user(0).delayed, int(0));
    }

    #[test]
    fn hybrid_corners() {
        let (s, r) = hybrid_corner_scheme(&rat(1, 3), &rat(1, 3), 3, &[0, 1]).unwrap();
        assert_eq!(dof(&r), vec![rat(7, 9), rat(7, 9), rat(1, 3)]);
        s.validate(3).unwrap();
        let (_, r) = hybrid_corner_scheme(&int(0), &int(1), 3, &[0, 1, 2]).unwrap();
        assert_eq!(dof(&r), vec![rat(6, 11); 3]);
        let (_, r) = hybrid_corner_scheme(&rat(1, 3), &rat(1, 3), 3, &[0, 1, 2]).unwrap();
        assert_eq!(dof(&r), vec![rat(23, 33); 3]);
        let err = hybrid_corner_scheme(&rat(1, 2), &int(0), 3, &[0, 2]).unwrap_err();
        assert!(matches!(err, Error::InfeasibleScheme(_)));
        assert!(hybrid_corner_scheme(&rat(1, 2), &int(0), 3, &[0, 0]).is_err());
        // a single-user group needs no delayed CSIT at all
        let (_, r) = hybrid_corner_scheme(&rat(1, 3), &int(0), 3, &[1]).unwrap();
        assert_eq!(dof(&r), vec![rat(1, 3), int(1), rat(1, 3)]);
    }

    #[test]
    fn hybrid_realized_marginals() {
        let (_, r) = hybrid_corner_scheme(&rat(1, 3), &rat(1, 3), 3, &[0, 1, 2]).unwrap();
        let m = r.realized.marginals();
        for u in 0..3 {
            assert_eq!(m.user(u).perfect, rat(1, 3));
            assert_eq!(m.user(u).delayed, rat(2, 3) * rat(5, 11));
        }
        assert!(contains(&build_region(&m), &r.dof).unwrap().is_member());
    }

    #[test]
    fn retransmission_example() {
        let (s, r) = retransmission_scheme();
        assert_eq!(dof(&r), vec![rat(2, 3), rat(2, 3), rat(1, 3)]);
        assert_eq!(r.sum_dof(), rat(5, 3));
        assert_eq!(&r.realized, s.declared().unwrap());
        let avg = r.realized.marginals().average();
        assert_eq!((avg.perfect, avg.delayed), (rat(2, 9), rat(1, 9)));
        let bound = sum_inequality(&r.realized.marginals(), &[0, 1, 2]).unwrap();
        assert!(bound.is_tight(r.dof.coords()));
        assert_eq!(s.required_antennas(), 3);
        assert!(s.validate(2).is_err());
        s.validate(3).unwrap();
        assert_eq!(s.feedback_ledger(), vec![(2, 0)]);
    }

    #[test]
    fn alternating_example() {
        let (s, r) = alternating_order2_scheme();
        assert_eq!(s.len(), 17);
        assert_eq!(r.decoded, vec![8, 8, 8]);
        assert_eq!(r.sum_dof(), rat(24, 17));
        s.validate(3).unwrap();
        for t in 0..6 {
            let col = r.realized.column(t);
            assert_eq!(col.iter().filter(|&&c| c == CsitState::Delayed).count(), 1);
            assert_eq!(col[t % 3], CsitState::Delayed);
        }
        assert!(contains(&build_region(&r.realized.marginals()), &r.dof)
            .unwrap()
            .is_member());
    }

    #[test]
    fn fixed_counterpart() {
        let (s, r) = fixed_delayed_scheme();
        assert_eq!(r.sum_dof(), int(1));
        let m = s.declared().unwrap().marginals();
        let bound = sum_inequality(&m, &[0, 1, 2]).unwrap();
        assert_eq!(bound.rhs(), &int(1));
    }

    #[test]
    fn declared_pattern_is_enforced() {
        let (s, _) = retransmission_scheme();
        let weaker = CsitPattern::parse("PNN\nNNN\nDNN").unwrap();
        let err = s.clone().with_declared(weaker).unwrap_err();
        assert_eq!(
            err,
            Error::CsitViolation {
                user: 1,
                slot: 0,
                required: CsitState::Perfect,
                declared: CsitState::NotKnown
            }
        );
        let no_feedback = CsitPattern::parse("PNN\nPNN\nNNN").unwrap();
        assert!(matches!(
            s.with_declared(no_feedback),
            Err(Error::CsitViolation { user: 2, .. })
        ));
    }

    #[test]
    fn deleting_slots() {
        let (s, _) = retransmission_scheme();
        let cut = s.without_slot(2).unwrap();
        assert_eq!(cut.len(), 2);
        assert_eq!(cut.result().decoded, vec![2, 2, 1]);
        assert!(s.without_slot(0).is_err());
        assert!(s.without_slot(3).is_err());
    }
}
