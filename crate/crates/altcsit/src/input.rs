//! Turning flags and pattern files into library values.

use std::fs;
use std::path::Path;

use altcsit_core::catalog::{pattern_by_name, PATTERN_NAMES};
use altcsit_core::rational::parse_rational;
use altcsit_core::{
    build_region, build_symmetric_region, tightened_region, CsitPattern, Error, MarginalProfile, Rational, Region,
    UserMarginal,
};
use clap::Args;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::{marginals, pattern_rows};

/// Regions are built from every permutation of every subset, so their size
/// grows like K!. Past this many users they stop fitting in memory.
pub const MAX_BOUND_USERS: usize = 7;

/// A pattern file path, or `catalog:NAME` for a built-in pattern.
pub fn load_pattern(source: &str) -> CliResult<(String, CsitPattern)> {
    if let Some(name) = source.strip_prefix("catalog:") {
        let pattern = pattern_by_name(name).ok_or_else(|| {
            CliError::input(format!(
                "unknown catalog pattern {name:?} (known: {})",
                PATTERN_NAMES.join(", ")
            ))
        })?;
        return Ok((name.to_string(), pattern));
    }
    let text = fs::read_to_string(source).map_err(|e| CliError::Io {
        path: source.to_string(),
        source: e,
    })?;
    let pattern = CsitPattern::parse(&text).map_err(|e| CliError::Pattern {
        path: source.to_string(),
        source: e,
    })?;
    let label = Path::new(source)
        .file_stem()
        .map_or_else(|| source.to_string(), |s| s.to_string_lossy().into_owned());
    Ok((label, pattern))
}

pub fn rational(text: &str) -> CliResult<Rational> {
    Ok(parse_rational(text)?)
}

pub fn rationals(text: &str) -> CliResult<Vec<Rational>> {
    text.split(',').map(rational).collect()
}

/// 1-based user numbers to 0-based indices below `users`.
pub fn user_list(text: &str, users: usize) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|t| {
            let n: usize = t
                .trim()
                .parse()
                .map_err(|_| CliError::input(format!("bad user number {t:?}")))?;
            if n == 0 || n > users {
                return Err(CliError::input(format!("user {n} outside 1..={users}")));
            }
            Ok(n - 1)
        })
        .collect()
}

pub fn guard_users(users: usize, limit: usize) -> CliResult<()> {
    if users > limit {
        return Err(Error::DimensionTooLarge { users, limit }.into());
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    /// Number of users sharing the marginals given by --lp and --ld
    #[arg(long)]
    pub k: Option<usize>,
    /// Probability of perfect CSIT, as a fraction such as 2/3
    #[arg(long)]
    pub lp: Option<String>,
    /// Probability of delayed CSIT (default 0)
    #[arg(long)]
    pub ld: Option<String>,
    /// Marginals of one user as LP,LD or LP,LD,LN; repeat once per user
    #[arg(long = "user", value_name = "LP,LD[,LN]")]
    pub users: Vec<String>,
    /// CSIT pattern file, or catalog:NAME. Overrides the marginal flags
    #[arg(long)]
    pub pattern: Option<String>,
    /// Use the closed form for identical users
    #[arg(long)]
    pub symmetric: bool,
    /// Add the joint-probability inequalities of the pattern (three users)
    #[arg(long)]
    pub tightened: bool,
}

/// Where a region's marginals came from.
pub struct Source {
    pub profile: MarginalProfile,
    pub pattern: Option<(String, CsitPattern)>,
}

impl Source {
    pub fn users(&self) -> usize {
        self.profile.users()
    }

    pub fn describe(&self) -> Value {
        json!({
            "users": self.users(),
            "pattern": self.pattern.as_ref().map(|(label, p)| json!({ "label": label, "rows": pattern_rows(p) })),
            "marginals": marginals(&self.profile),
        })
    }
}

impl RegionArgs {
    pub fn source(&self, warnings: &mut Vec<String>) -> CliResult<Source> {
        let direct = self.k.is_some() || self.lp.is_some() || self.ld.is_some() || !self.users.is_empty();
        if let Some(src) = &self.pattern {
            if direct {
                warnings.push("both a pattern and marginals were given; using the pattern".into());
            }
            let (label, pattern) = load_pattern(src)?;
            return Ok(Source {
                profile: pattern.marginals(),
                pattern: Some((label, pattern)),
            });
        }
        let profile = if !self.users.is_empty() {
            if self.k.is_some() || self.lp.is_some() || self.ld.is_some() {
                return Err(CliError::input("--user cannot be combined with --k, --lp or --ld"));
            }
            let users = self
                .users
                .iter()
                .map(|u| user_marginal(u))
                .collect::<CliResult<Vec<_>>>()?;
            MarginalProfile::new(users)?
        } else {
            let (Some(k), Some(lp)) = (self.k, &self.lp) else {
                return Err(CliError::input("give --pattern, --user, or --k together with --lp"));
            };
            let ld = self
                .ld
                .as_deref()
                .map_or(Ok(Rational::from_integer(0.into())), rational)?;
            MarginalProfile::symmetric(k, rational(lp)?, ld)?
        };
        Ok(Source { profile, pattern: None })
    }

    pub fn region(&self, source: &Source, warnings: &mut Vec<String>) -> CliResult<Region> {
        guard_users(source.users(), MAX_BOUND_USERS)?;
        if self.tightened {
            let Some((_, pattern)) = &source.pattern else {
                return Err(CliError::input("--tightened needs --pattern"));
            };
            if self.symmetric {
                warnings.push("--symmetric has no effect with --tightened".into());
            }
            return Ok(tightened_region(pattern)?);
        }
        if self.symmetric {
            let (lp, ld) = source
                .profile
                .as_symmetric()
                .ok_or_else(|| CliError::input("--symmetric needs identical marginals for every user"))?;
            return Ok(build_symmetric_region(lp, ld, source.users())?);
        }
        Ok(build_region(&source.profile))
    }
}

fn user_marginal(text: &str) -> CliResult<UserMarginal> {
    let parts = rationals(text)?;
    match parts.as_slice() {
        [lp, ld] => Ok(UserMarginal::new(lp.clone(), ld.clone())?),
        [lp, ld, ln] => {
            let m = UserMarginal::new(lp.clone(), ld.clone())?;
            if &m.not_known != ln {
                return Err(Error::InvalidProbability(format!("{text} does not sum to 1")).into());
            }
            Ok(m)
        }
        _ => Err(CliError::input(format!(
            "--user expects LP,LD or LP,LD,LN, got {text:?}"
        ))),
    }
}
