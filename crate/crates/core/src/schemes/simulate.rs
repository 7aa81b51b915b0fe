//! Monte Carlo checks of a schedule over i.i.d. CN(0, I) channels.
//!
//! Every transmitted stream is tracked as a linear form over the symbol
//! vector. User `k` stacks its received forms into `A`; with `J` the columns
//! of symbols it does not need, its own symbols are decodable iff
//! `rank(A) − rank(A_J)` equals their count.

use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::schemes::schedule::{Beam, Coefficient, Schedule, Term};

type C64 = Complex<f64>;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOLERANCE: f64 = 1e-6;

/// Largest symbol count the simulator accepts.
pub const MAX_SIMULATED_SYMBOLS: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub users: usize,
    pub antennas: usize,
    /// Transmit powers (linear, dimensionless), strictly increasing.
    pub snr: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

impl SchemeConfig {
    /// `antennas = users`, 100 trials, seed 0, powers 20 dB to 60 dB in 5 dB steps.
    pub fn new(users: usize) -> Self {
        Self {
            users,
            antennas: users,
            snr: (0..9).map(|i| libm::pow(10.0, 2.0 + 0.5 * i as f64)).collect(),
            trials: 100,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        crate::bound::check_antennas(self.users, self.antennas)?;
        if self.trials == 0 {
            return Err(Error::InvalidConfig("need at least one trial".into()));
        }
        if self.snr.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(Error::InvalidConfig("powers must be positive and finite".into()));
        }
        if self.snr.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("power grid must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// Rank figures for one user in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDiagnostic {
    pub trial: usize,
    pub user: usize,
    pub rank: usize,
    pub interference_rank: usize,
    pub desired: usize,
    /// Smallest kept singular value of `A` over the largest.
    pub conditioning: f64,
}

impl TrialDiagnostic {
    pub fn decodable(&self) -> bool {
        self.rank - self.interference_rank == self.desired
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserVerdict {
    pub decodable: bool,
    pub desired: usize,
    pub deficient_trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodingVerdict {
    pub users: Vec<UserVerdict>,
    pub trials: usize,
    pub seed: u64,
    pub diagnostics: Vec<TrialDiagnostic>,
}

impl DecodingVerdict {
    pub fn all_decodable(&self) -> bool {
        self.users.iter().all(|u| u.decodable)
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<C64> {
    DVector::from_fn(n, |_, _| gaussian(rng))
}

/// `h^H b`.
fn inner(h: &DVector<C64>, b: &DVector<C64>) -> C64 {
    h.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Orthonormal basis of the complement of `span(spanning)`, found by
/// Gram–Schmidt over the spanning vectors followed by random candidates.
fn complement(spanning: &[&DVector<C64>], candidates: &[DVector<C64>]) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = Vec::new();
    let mut out = Vec::new();
    for (i, v) in spanning.iter().copied().chain(candidates).enumerate() {
        let mut w = v.clone();
        for q in &basis {
            let c = inner(q, &w);
            w -= q * c;
        }
        let norm = w.norm();
        if norm > 1e-9 {
            w /= C64::new(norm, 0.0);
            basis.push(w.clone());
            if i >= spanning.len() {
                out.push(w);
            }
        }
    }
    out
}

/// Received forms of every user in one trial: `rows[user]` is `slots × symbols`.
fn received(schedule: &Schedule, antennas: usize, rng: &mut ChaCha8Rng) -> Vec<DMatrix<C64>> {
    let k = schedule.users();
    let n = schedule.symbols().len();
    let t_len = schedule.len();
    let channels: Vec<Vec<DVector<C64>>> = (0..t_len)
        .map(|_| (0..k).map(|_| random_vector(rng, antennas)).collect())
        .collect();
    let mut beams: Vec<Vec<DVector<C64>>> = Vec::with_capacity(t_len);
    let mut forms: Vec<Vec<DVector<C64>>> = Vec::with_capacity(t_len);
    let mut rows: Vec<DMatrix<C64>> = (0..k).map(|_| DMatrix::zeros(t_len, n)).collect();

    for (t, action) in schedule.actions().iter().enumerate() {
        let mut cache: Vec<(Vec<usize>, Vec<DVector<C64>>)> = Vec::new();
        let mut slot_beams = Vec::with_capacity(action.streams.len());
        let mut slot_forms = Vec::with_capacity(action.streams.len());
        for stream in &action.streams {
            let beam = match &stream.beam {
                Beam::Generic => random_vector(rng, antennas),
                Beam::ZeroForce { nulled, index } => {
                    if !cache.iter().any(|(set, _)| set == nulled) {
                        let span: Vec<&DVector<C64>> = nulled.iter().map(|&u| &channels[t][u]).collect();
                        let candidates: Vec<DVector<C64>> =
                            (0..antennas).map(|_| random_vector(rng, antennas)).collect();
                        cache.push((nulled.clone(), complement(&span, &candidates)));
                    }
                    let basis = &cache.iter().find(|(set, _)| set == nulled).expect("cached").1;
                    basis[*index].clone()
                }
            };
            let mut form = DVector::<C64>::zeros(n);
            for (coeff, term) in &stream.message.terms {
                let c = match coeff {
                    Coefficient::One => C64::new(1.0, 0.0),
                    Coefficient::Generic => gaussian(rng),
                };
                match term {
                    Term::Symbol(id) => form[*id] += c,
                    Term::Overheard { user, slot, streams } => {
                        for &s in streams {
                            let gain = inner(&channels[*slot][*user], &beams[*slot][s]);
                            form.axpy(c * gain, &forms[*slot][s], C64::new(1.0, 0.0));
                        }
                    }
                }
            }
            slot_beams.push(beam);
            slot_forms.push(form);
        }
        for (u, m) in rows.iter_mut().enumerate() {
            let mut row = DVector::<C64>::zeros(n);
            for (b, f) in slot_beams.iter().zip(&slot_forms) {
                row.axpy(inner(&channels[t][u], b), f, C64::new(1.0, 0.0));
            }
            m.set_row(t, &row.transpose());
        }
        beams.push(slot_beams);
        forms.push(slot_forms);
    }
    rows
}

fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().singular_values().iter().copied().collect()
}

fn largest(sv: &[f64]) -> f64 {
    sv.iter().copied().fold(0.0, f64::max)
}

/// Rank relative to `scale` (the largest singular value of the full `A`, so
/// that zero-forcing leakage in `A_J` does not count) and the conditioning of
/// what is kept.
fn rank(sv: &[f64], scale: f64) -> (usize, f64) {
    let max = largest(sv);
    if scale == 0.0 || max == 0.0 {
        return (0, 1.0);
    }
    let kept: Vec<f64> = sv.iter().copied().filter(|&s| s > RANK_TOLERANCE * scale).collect();
    let min = kept.iter().copied().fold(f64::INFINITY, f64::min);
    (kept.len(), min / max)
}

fn interference_columns(m: &DMatrix<C64>, keep: &[usize]) -> DMatrix<C64> {
    DMatrix::from_fn(m.nrows(), keep.len(), |r, c| m[(r, keep[c])])
}

fn prepare(schedule: &Schedule, config: &SchemeConfig) -> Result<()> {
    config.validate()?;
    if schedule.users() != config.users {
        return Err(Error::DimensionMismatch {
            expected: config.users,
            found: schedule.users(),
        });
    }
    if schedule.symbols().len() > MAX_SIMULATED_SYMBOLS {
        return Err(Error::InvalidConfig(alloc::format!(
            "{} symbols exceed the simulation limit of {MAX_SIMULATED_SYMBOLS}",
            schedule.symbols().len()
        )));
    }
    schedule.validate(config.antennas)
}

/// Per trial and user: singular values of `A` and of `A_J`.
fn spectra(schedule: &Schedule, config: &SchemeConfig, trial: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial as u64);
    let rows = received(schedule, config.antennas, &mut rng);
    rows.iter()
        .enumerate()
        .map(|(u, a)| {
            let others: Vec<usize> = (0..schedule.symbols().len())
                .filter(|&i| !schedule.symbols()[i].is_for(u))
                .collect();
            (singular_values(a), singular_values(&interference_columns(a, &others)))
        })
        .collect()
}

/// Noise-free rank test over `config.trials` independent channel draws.
/// Trial `i` uses stream `i` of a ChaCha8 generator seeded with `config.seed`.
pub fn simulate_decode(schedule: &Schedule, config: &SchemeConfig) -> Result<DecodingVerdict> {
    prepare(schedule, config)?;
    let desired: Vec<usize> = (0..schedule.users())
        .map(|u| schedule.symbols().iter().filter(|s| s.is_for(u)).count())
        .collect();
    let mut diagnostics = Vec::with_capacity(config.trials * schedule.users());
    for trial in 0..config.trials {
        for (user, (a, j)) in spectra(schedule, config, trial).into_iter().enumerate() {
            let scale = largest(&a);
            let (rank_a, conditioning) = rank(&a, scale);
            let (rank_j, _) = rank(&j, scale);
            diagnostics.push(TrialDiagnostic {
                trial,
                user,
                rank: rank_a,
                interference_rank: rank_j,
                desired: desired[user],
                conditioning,
            });
        }
    }
    let users = (0..schedule.users())
        .map(|u| {
            let deficient = diagnostics.iter().filter(|d| d.user == u && !d.decodable()).count();
            UserVerdict {
                decodable: deficient == 0,
                desired: desired[u],
                deficient_trials: deficient,
            }
        })
        .collect();
    Ok(DecodingVerdict {
        users,
        trials: config.trials,
        seed: config.seed,
        diagnostics,
    })
}

/// Mean rate per slot of every user at every grid power, in bits:
/// `[log₂det(I + P A Aᴴ) − log₂det(I + P A_J A_Jᴴ)] / T` with unit noise.
pub fn rate_curve(schedule: &Schedule, config: &SchemeConfig) -> Result<Vec<(f64, Vec<f64>)>> {
    prepare(schedule, config)?;
    let slots = schedule.len().max(1) as f64;
    let mut totals = alloc::vec![alloc::vec![0.0; schedule.users()]; config.snr.len()];
    let log_det = |sv: &[f64], p: f64| sv.iter().map(|s| libm::log2(1.0 + p * s * s)).sum::<f64>();
    for trial in 0..config.trials {
        for (u, (a, j)) in spectra(schedule, config, trial).into_iter().enumerate() {
            for (i, &p) in config.snr.iter().enumerate() {
                totals[i][u] += (log_det(&a, p) - log_det(&j, p)) / slots;
            }
        }
    }
    let n = config.trials as f64;
    Ok(config
        .snr
        .iter()
        .zip(totals)
        .map(|(&p, rates)| (p, rates.into_iter().map(|r| r / n).collect()))
        .collect())
}

/// Least-squares slope of each user's mean rate against `log₂ P`. The grid
/// needs at least two points spanning three decades.
pub fn rate_slope(schedule: &Schedule, config: &SchemeConfig) -> Result<Vec<f64>> {
    if config.snr.len() < 2 || config.snr[config.snr.len() - 1] < 1e3 * config.snr[0] {
        return Err(Error::InvalidConfig(
            "power grid must span at least three decades".into(),
        ));
    }
    let curve = rate_curve(schedule, config)?;
    let xs: Vec<f64> = curve.iter().map(|(p, _)| libm::log2(*p)).collect();
    let mean_x = xs.iter().sum::<f64>() / xs.len() as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    Ok((0..schedule.users())
        .map(|u| {
            let ys: Vec<f64> = curve.iter().map(|(_, r)| r[u]).collect();
            let mean_y = ys.iter().sum::<f64>() / ys.len() as f64;
            xs.iter()
                .zip(&ys)
                .map(|(x, y)| (x - mean_x) * (y - mean_y))
                .sum::<f64>()
                / sxx
        })
        .collect())
}
