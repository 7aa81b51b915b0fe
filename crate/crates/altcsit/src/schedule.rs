//! Schedules as JSON: slots with their streams, the feedback ledger and
//! the CSIT the schedule realizes.

use altcsit_core::schemes::{Beam, Coefficient, Message, Schedule, Term};
use serde_json::{json, Value};

use crate::output::pattern_rows;

fn one_based(users: &[usize]) -> Vec<usize> {
    users.iter().map(|u| u + 1).collect()
}

fn message(m: &Message) -> Value {
    let terms: Vec<Value> = m
        .terms
        .iter()
        .map(|(c, t)| {
            let coefficient = match c {
                Coefficient::One => "1",
                Coefficient::Generic => "generic",
            };
            match t {
                Term::Symbol(id) => json!({ "coefficient": coefficient, "symbol": id }),
                Term::Overheard { user, slot, streams } => json!({
                    "coefficient": coefficient,
                    "overheard": { "user": user + 1, "slot": slot + 1, "streams": streams },
                }),
            }
        })
        .collect();
    json!({ "intended": one_based(&m.intended), "terms": terms })
}

fn beam(b: &Beam) -> Value {
    match b {
        Beam::Generic => json!("generic"),
        Beam::ZeroForce { nulled, index } => json!({ "zero_force": { "nulled": one_based(nulled), "index": index } }),
    }
}

pub fn schedule(s: &Schedule) -> Value {
    let symbols: Vec<Value> = s
        .symbols()
        .iter()
        .enumerate()
        .map(|(id, sym)| json!({ "id": id, "owners": one_based(sym.owners()) }))
        .collect();
    let slots: Vec<Value> = s
        .actions()
        .iter()
        .enumerate()
        .map(|(t, a)| {
            let streams: Vec<Value> = a
                .streams
                .iter()
                .map(|st| json!({ "beam": beam(&st.beam), "message": message(&st.message) }))
                .collect();
            json!({ "slot": t + 1, "kind": a.kind.label(), "targets": one_based(&a.targets), "streams": streams })
        })
        .collect();
    let feedback: Vec<Value> = s
        .feedback_ledger()
        .into_iter()
        .map(|(user, slot)| json!({ "user": user + 1, "slot": slot + 1 }))
        .collect();
    let phases: Vec<Value> = s
        .phases()
        .iter()
        .map(|p| {
            json!({
                "label": p.label,
                "order": p.order,
                "repetitions": p.repetitions,
                "first_slot": p.slots.start + 1,
                "last_slot": p.slots.end,
            })
        })
        .collect();
    json!({
        "users": s.users(),
        "symbols": symbols,
        "slots": slots,
        "phases": phases,
        "feedback": feedback,
        "realized_pattern": pattern_rows(&s.realized_pattern()),
        "declared_pattern": s.declared().map(pattern_rows),
    })
}
