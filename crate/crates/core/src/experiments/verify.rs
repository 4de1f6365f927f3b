//! Randomized verification suites.
//!
//! Each trial draws from its own generator (`random::trial_rng(seed, trial)`),
//! so reports do not depend on scheduling. Failures are reported, never
//! raised.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::battery::{capacity_with_energies, majorizes, ZERO_CAPACITY};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, DensityMatrix, Spectrum};
use crate::measure::{select_optimal, OutcomeEnsemble, Scheme};
use crate::model::{dephase, white_noise, x_state};
use crate::random::{self, trial_rng};
use crate::xstate::{bloch_coeffs, bloch_expansion, scheme1_closed, scheme2_closed, x_eigenvalues};

/// Absolute slack on capacity inequalities and identities.
pub const CAPACITY_TOL: f64 = 1e-9;
/// Agreement required between closed forms and the generic numeric path.
pub const CLOSED_FORM_TOL: f64 = 1e-10;
/// Eigenvalues above this count towards the rank.
pub const RANK_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub trial: usize,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(trial: usize, name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            trial,
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    fn skip(trial: usize, name: impl Into<String>, detail: String) -> Self {
        Self {
            trial,
            name: name.into(),
            status: Status::Skip,
            detail,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} trial={} check={} detail={}",
            self.status, self.trial, self.name, self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn passed(&self) -> usize {
        self.count(Status::Pass)
    }

    pub fn failed(&self) -> usize {
        self.count(Status::Fail)
    }

    pub fn skipped(&self) -> usize {
        self.count(Status::Skip)
    }

    pub fn is_success(&self) -> bool {
        self.failed() == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn summary(&self) -> String {
        format!(
            "suite={} checks={} passed={} failed={} skipped={}",
            self.suite,
            self.checks.len(),
            self.passed(),
            self.failed(),
            self.skipped()
        )
    }

    /// One line per check, then a `#`-prefixed summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out.push_str("# ");
        out.push_str(&self.summary());
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    WhiteNoise,
    Robustness,
    MixtureOrder,
    ClosedForms,
    RankBounds,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::WhiteNoise,
        Suite::Robustness,
        Suite::MixtureOrder,
        Suite::ClosedForms,
        Suite::RankBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::WhiteNoise => "thm3",
            Suite::Robustness => "thm4",
            Suite::MixtureOrder => "lemma1",
            Suite::ClosedForms => "closed",
            Suite::RankBounds => "rank",
        }
    }

    pub fn run(self, trials: usize, seed: u64) -> Report {
        let trial_fn: fn(usize, u64) -> Result<Vec<Check>> = match self {
            Suite::WhiteNoise => white_noise_trial,
            Suite::Robustness => robustness_trial,
            Suite::MixtureOrder => mixture_trial,
            Suite::ClosedForms => closed_form_trial,
            Suite::RankBounds => rank_trial,
        };
        let checks = (0..trials)
            .into_par_iter()
            .map(|t| {
                trial_fn(t, seed).unwrap_or_else(|e| {
                    vec![Check::new(
                        t,
                        "evaluate",
                        false,
                        e.to_string().replace(' ', "_"),
                    )]
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect();
        Report {
            suite: self,
            checks,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Config(format!(
                    "unknown suite '{s}'; expected one of {}",
                    names.join("|")
                ))
            })
    }
}

pub fn verify_white_noise_scaling(trials: usize, seed: u64) -> Report {
    Suite::WhiteNoise.run(trials, seed)
}

pub fn verify_measurement_robustness(trials: usize, seed: u64) -> Report {
    Suite::Robustness.run(trials, seed)
}

pub fn verify_mixture_order(trials: usize, seed: u64) -> Report {
    Suite::MixtureOrder.run(trials, seed)
}

pub fn verify_closed_forms(trials: usize, seed: u64) -> Report {
    Suite::ClosedForms.run(trials, seed)
}

pub fn verify_rank_bounds(trials: usize, seed: u64) -> Report {
    Suite::RankBounds.run(trials, seed)
}

/// Noise strengths `0, 0.1, …, 1`.
pub fn strength_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

fn white_noise_trial(t: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = trial_rng(seed, t as u64);
    let dims = match rng.random_range(0..3) {
        0 => vec![2],
        1 => vec![2, 2],
        _ => vec![2, 2, 2],
    };
    let rho = random::density(&dims, &mut rng);
    let energy = random::hamiltonian(&dims, &mut rng).spectrum()?;
    let grid = strength_grid();
    let caps = grid
        .iter()
        .map(|&f| capacity_with_energies(&white_noise(&rho, f)?, &energy))
        .collect::<Result<Vec<_>>>()?;
    let rated = caps[0];
    let dim = format!("dim={}", rho.dim());

    let rise = caps
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let scaling = grid
        .iter()
        .zip(&caps)
        .map(|(f, c)| (c - (1.0 - f) * rated).abs())
        .fold(0.0, f64::max);
    let endpoint = *caps.last().unwrap();
    let mut checks = vec![
        Check::new(
            t,
            "monotone",
            rise <= CAPACITY_TOL,
            format!("{dim},max_rise={}", sci(rise)),
        ),
        Check::new(
            t,
            "scaling",
            scaling <= CAPACITY_TOL,
            format!("{dim},max_dev={}", sci(scaling)),
        ),
    ];
    if rated.abs() > ZERO_CAPACITY {
        let loss = grid
            .iter()
            .zip(&caps)
            .map(|(f, c)| ((rated - c) / rated - f).abs())
            .fold(0.0, f64::max);
        checks.push(Check::new(
            t,
            "loss_rate",
            loss <= CAPACITY_TOL,
            format!("{dim},max_dev={}", sci(loss)),
        ));
    } else {
        checks.push(Check::skip(
            t,
            "loss_rate",
            format!("{dim},rated_capacity=0"),
        ));
    }
    checks.push(Check::new(
        t,
        "mixed_endpoint",
        endpoint == 0.0,
        format!("{dim},capacity={endpoint:e}"),
    ));
    Ok(checks)
}

fn sub_dims(keep: &[usize]) -> Vec<usize> {
    vec![2; keep.len()]
}

fn robustness_trial(t: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = trial_rng(seed, t as u64);
    let rho = x_state(&random::x_state_params(&mut rng, false))?;
    let energy_total = random::hamiltonian(&[2, 2, 2], &mut rng).spectrum()?;
    let grid = strength_grid();
    let mut checks = Vec::new();
    for (tag, scheme) in [("s1", Scheme::One), ("s2", Scheme::Two)] {
        let keep = scheme.keep();
        let h_sub = random::hamiltonian(&sub_dims(keep), &mut rng);
        let energy_sub = h_sub.spectrum()?;
        let ens = scheme.run(&rho)?;
        let sel = select_optimal(&ens, keep, &h_sub)?;
        if !sel.certified {
            checks.push(Check::skip(
                t,
                format!("{tag}_certified"),
                "no_dominant_outcome".into(),
            ));
            continue;
        }
        let post = &ens.outcome(sel.label)?.state;
        let margins = |a: &DensityMatrix, b: &DensityMatrix| -> Result<(f64, f64)> {
            Ok((
                capacity_with_energies(a, &energy_total)?
                    - capacity_with_energies(b, &energy_total)?,
                capacity_with_energies(&partial_trace(a, keep)?, &energy_sub)?
                    - capacity_with_energies(&partial_trace(b, keep)?, &energy_sub)?,
            ))
        };

        let (mut white_total, mut white_sub) = (f64::INFINITY, f64::INFINITY);
        let (mut deph_total, mut deph_sub) = (f64::INFINITY, f64::INFINITY);
        let mut fixed = true;
        for &s in &grid {
            let (m_total, m_sub) = margins(&white_noise(post, s)?, &white_noise(&rho, s)?)?;
            white_total = white_total.min(m_total);
            white_sub = white_sub.min(m_sub);
            let post_dephased = dephase(post, s)?;
            fixed &= post_dephased.matrix() == post.matrix();
            let (m_total, m_sub) = margins(&post_dephased, &dephase(&rho, s)?)?;
            deph_total = deph_total.min(m_total);
            deph_sub = deph_sub.min(m_sub);
        }
        let label = format!("label={}", sel.label);
        let ge = |m: f64| m >= -CAPACITY_TOL;
        checks.extend([
            Check::new(
                t,
                format!("{tag}_white_total"),
                ge(white_total),
                format!("{label},min_margin={}", sci(white_total)),
            ),
            Check::new(
                t,
                format!("{tag}_white_reduced"),
                ge(white_sub),
                format!("{label},min_margin={}", sci(white_sub)),
            ),
            Check::new(
                t,
                format!("{tag}_dephase_fixed"),
                fixed,
                format!("{label},bit_identical={fixed}"),
            ),
            Check::new(
                t,
                format!("{tag}_dephase_total"),
                ge(deph_total),
                format!("{label},min_margin={}", sci(deph_total)),
            ),
            Check::new(
                t,
                format!("{tag}_dephase_reduced"),
                ge(deph_sub),
                format!("{label},min_margin={}", sci(deph_sub)),
            ),
        ]);
    }
    Ok(checks)
}

fn mixture_trial(t: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = trial_rng(seed, t as u64);
    let n = rng.random_range(2..=8);
    let mut top = random::simplex(n, &mut rng);
    top.sort_by(|a, b| b.total_cmp(a));
    let toward_uniform: f64 = rng.random();
    let lower: Vec<f64> = top
        .iter()
        .map(|x| (1.0 - toward_uniform) * x + toward_uniform / n as f64)
        .collect();
    let p: f64 = rng.random();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);

    let ordered: Vec<f64> = (0..n).map(|i| p * top[i] + (1.0 - p) * lower[i]).collect();
    let disordered: Vec<f64> = (0..n)
        .map(|i| p * top[i] + (1.0 - p) * lower[perm[i]])
        .collect();
    let [top, lower, ordered, disordered] =
        [top, lower, ordered, disordered].map(Spectrum::from_unsorted);
    let detail = format!("n={n},p={p:.6}");
    Ok(vec![
        Check::new(
            t,
            "top_over_lower",
            majorizes(&top, &lower)?,
            detail.clone(),
        ),
        Check::new(
            t,
            "top_over_ordered",
            majorizes(&top, &ordered)?,
            detail.clone(),
        ),
        Check::new(
            t,
            "ordered_over_disordered",
            majorizes(&ordered, &disordered)?,
            detail,
        ),
    ])
}

fn spectrum_gap(a: &Spectrum, b: &Spectrum) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest deviation between two ensembles, or `None` if their retained
/// labels differ.
fn ensemble_gap(a: &OutcomeEnsemble, b: &OutcomeEnsemble) -> Option<(f64, f64)> {
    let labels = |e: &OutcomeEnsemble| e.entries.iter().map(|o| o.label).collect::<Vec<_>>();
    if labels(a) != labels(b) {
        return None;
    }
    let prob = a
        .probabilities()
        .iter()
        .zip(b.probabilities())
        .map(|((_, x), (_, y))| (x - y).abs())
        .fold(0.0, f64::max);
    let state = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x.state.matrix().max_abs_diff(y.state.matrix()))
        .fold(0.0, f64::max);
    Some((prob, state))
}

fn closed_form_trial(t: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = trial_rng(seed, t as u64);
    let complex = random::x_state_params(&mut rng, false);
    let real = random::x_state_params(&mut rng, true);
    let ok = |gap: f64| gap <= CLOSED_FORM_TOL;

    let eig_complex = spectrum_gap(&x_eigenvalues(&complex), &x_state(&complex)?.spectrum()?);
    let rho = x_state(&real)?;
    let eig_real = spectrum_gap(&x_eigenvalues(&real), &rho.spectrum()?);
    let bloch = bloch_expansion(&bloch_coeffs(&real)?).max_abs_diff(rho.matrix());
    let mut checks = vec![
        Check::new(
            t,
            "eigenvalues_complex",
            ok(eig_complex),
            format!("max_dev={}", sci(eig_complex)),
        ),
        Check::new(
            t,
            "eigenvalues_real",
            ok(eig_real),
            format!("max_dev={}", sci(eig_real)),
        ),
        Check::new(t, "bloch", ok(bloch), format!("max_dev={}", sci(bloch))),
    ];
    for (tag, closed, numeric) in [
        ("s1", scheme1_closed(&real)?, Scheme::One.run(&rho)?),
        ("s2", scheme2_closed(&real)?, Scheme::Two.run(&rho)?),
    ] {
        checks.push(match ensemble_gap(&closed, &numeric) {
            Some((prob, state)) => Check::new(
                t,
                format!("{tag}_ensemble"),
                ok(prob) && ok(state),
                format!("prob_dev={},state_dev={}", sci(prob), sci(state)),
            ),
            None => Check::new(
                t,
                format!("{tag}_ensemble"),
                false,
                "retained_labels_differ".into(),
            ),
        });
    }
    Ok(checks)
}

fn rank_trial(t: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = trial_rng(seed, t as u64);
    let rho = random::density(&[2, 2, 2], &mut rng);
    let mut checks = Vec::new();
    for (tag, scheme, bound) in [("s1", Scheme::One, 4), ("s2", Scheme::Two, 2)] {
        let ens = scheme.run(&rho)?;
        let mut worst = 0;
        for o in &ens.entries {
            worst = worst.max(o.state.spectrum()?.count_above(RANK_CUTOFF));
        }
        checks.push(Check::new(
            t,
            format!("{tag}_rank"),
            worst <= bound,
            format!(
                "max_rank={worst},bound={bound},outcomes={}",
                ens.entries.len()
            ),
        ));
    }
    Ok(checks)
}
