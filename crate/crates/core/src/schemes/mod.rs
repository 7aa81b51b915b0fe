//! Achievability schedules with exact DoF accounting, plus Monte Carlo
//! rank tests and finite-SNR rate slopes to confirm they decode.

mod construct;
mod mat;
mod schedule;
mod simulate;

pub use construct::{
    alternating_order2_scheme, corner_scheme_case_a, fixed_delayed_scheme, hybrid_corner_scheme, retransmission_scheme,
    MAX_SLOTS,
};
pub use mat::{mat_min_delay, mat_repetitions, mat_schedule, mat_schedule_with, Repetitions, MAX_MAT_USERS};
pub use schedule::{
    ActionKind, Beam, Coefficient, Message, Phase, PhaseCensus, Schedule, SchemeResult, SlotAction, Stream, Symbol,
    Term,
};
pub use simulate::{
    rate_curve, rate_slope, simulate_decode, DecodingVerdict, SchemeConfig, TrialDiagnostic, UserVerdict,
    MAX_SIMULATED_SYMBOLS, RANK_TOLERANCE,
};
