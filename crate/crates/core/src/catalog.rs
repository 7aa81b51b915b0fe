//! Named CSIT patterns and marginal profiles used throughout the examples,
//! the test suite and the CLI.

use crate::csit::{CsitPattern, MarginalProfile};
use crate::rational::{int, rat};

fn parse(text: &str) -> CsitPattern {
    CsitPattern::parse(text).expect("catalog patterns are well formed")
}

/// Three users, each perfectly known in its own slot and unknown otherwise.
pub fn diagonal_perfect() -> CsitPattern {
    parse("PNN\nNPN\nNNP")
}

/// Three users, all perfectly known in the first slot and unknown in the
/// other two. Same marginals as [`diagonal_perfect`].
pub fn shared_perfect() -> CsitPattern {
    parse("PNN\nPNN\nPNN")
}

/// Three slots where users 1 and 2 are perfectly known and user 3 is
/// delayed in the first slot, nothing known afterwards.
pub fn retransmission_pattern() -> CsitPattern {
    parse("PNN\nPNN\nDNN")
}

/// User 1 always delayed, users 2 and 3 never known.
pub fn fixed_delayed() -> CsitPattern {
    parse("DDD\nNNN\nNNN")
}

/// Delayed CSIT rotating over the three users, one slot each.
pub fn rotating_delayed() -> CsitPattern {
    parse("DNN\nNDN\nNND")
}

/// Six slots: four all-perfect columns, one all-delayed, one all-unknown.
pub fn aligned_mixed() -> CsitPattern {
    parse("PPPPDN\nPPPPDN\nPPPPDN")
}

/// Six slots with the same marginals as [`aligned_mixed`] but the unknown
/// user rotating, each followed by its delayed report.
pub fn staggered_mixed() -> CsitPattern {
    parse("NDPPPP\nPPNDPP\nPPPPND")
}

/// λ_P = 2/3, λ_D = 1/6 for three users.
pub fn mixed_profile() -> MarginalProfile {
    MarginalProfile::symmetric(3, rat(2, 3), rat(1, 6)).expect("valid")
}

/// No delayed CSIT, perfect CSIT with probabilities 1/4, 1/2 and 1.
pub fn ascending_perfect_profile() -> MarginalProfile {
    MarginalProfile::from_pairs(&[(rat(1, 4), int(0)), (rat(1, 2), int(0)), (int(1), int(0))]).expect("valid")
}

/// No delayed CSIT, perfect CSIT with probabilities 1/4, 1/2 and 1/2.
pub fn capped_perfect_profile() -> MarginalProfile {
    MarginalProfile::from_pairs(&[(rat(1, 4), int(0)), (rat(1, 2), int(0)), (rat(1, 2), int(0))]).expect("valid")
}

/// Looks a pattern up by its catalog name.
pub fn pattern_by_name(name: &str) -> Option<CsitPattern> {
    Some(match name {
        "diagonal-perfect" => diagonal_perfect(),
        "shared-perfect" => shared_perfect(),
        "retransmission" => retransmission_pattern(),
        "fixed-delayed" => fixed_delayed(),
        "rotating-delayed" => rotating_delayed(),
        "aligned-mixed" => aligned_mixed(),
        "staggered-mixed" => staggered_mixed(),
        _ => return None,
    })
}

pub const PATTERN_NAMES: [&str; 7] = [
    "diagonal-perfect",
    "shared-perfect",
    "retransmission",
    "fixed-delayed",
    "rotating-delayed",
    "aligned-mixed",
    "staggered-mixed",
];
