use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::battery::{capacity_with_energies, ZERO_CAPACITY};
use crate::error::{Error, Result};
use crate::experiments::format::format_sig;
use crate::linalg::{partial_trace, DensityMatrix, HermitianOperator};
use crate::measure::{select_optimal, whole_capacity_after, Scheme};
use crate::model::{self, white_noise, Couplings, Energies};

/// Coupling values varied one at a time on the default grids.
pub const DEFAULT_COUPLING_VALUES: [f64; 4] = [0.0, 0.25, 0.5, 0.75];
/// Value of every coupling that is not being varied.
pub const PINNED_COUPLING: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Example {
    /// Noisy W state under pairwise `XX` couplings.
    One,
    /// Noisy GHZ state under a three-body `XXX` coupling.
    Two,
}

impl Example {
    pub fn from_number(n: u32) -> Result<Self> {
        match n {
            1 => Ok(Example::One),
            2 => Ok(Example::Two),
            _ => Err(Error::Config(format!(
                "unknown example {n}; expected 1 or 2"
            ))),
        }
    }

    pub fn initial_state(self) -> DensityMatrix {
        match self {
            Example::One => model::w_state(),
            Example::Two => model::ghz_state(),
        }
    }

    pub fn csv_header(self) -> &'static str {
        match self {
            Example::One => {
                "a,J_AB,J_AC,J_BC,cap_total,cap_total_s1,cap_total_s2,cap_AB,cap_AB_s1,cap_A,cap_A_s2,r1,r2"
            }
            Example::Two => "b,J_ABC,cap_total,cap_AB,cap_AB_s1,cap_A,cap_A_s2,r_l,r1_plus,r2_plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CouplingPoint {
    Pairwise(Couplings),
    Triple(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub example: Example,
    pub noise: Vec<f64>,
    pub couplings: Vec<CouplingPoint>,
    pub energies: Energies,
}

pub fn default_noise_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// The pinned point first, then each pairwise coupling varied in turn.
pub fn default_pairwise_grid() -> Vec<CouplingPoint> {
    let pinned = Couplings::uniform(PINNED_COUPLING);
    let mut grid = vec![CouplingPoint::Pairwise(pinned)];
    for v in DEFAULT_COUPLING_VALUES {
        grid.push(CouplingPoint::Pairwise(Couplings { ab: v, ..pinned }));
    }
    for v in DEFAULT_COUPLING_VALUES {
        grid.push(CouplingPoint::Pairwise(Couplings { ac: v, ..pinned }));
    }
    for v in DEFAULT_COUPLING_VALUES {
        grid.push(CouplingPoint::Pairwise(Couplings { bc: v, ..pinned }));
    }
    grid
}

pub fn default_triple_grid() -> Vec<CouplingPoint> {
    DEFAULT_COUPLING_VALUES
        .iter()
        .map(|&v| CouplingPoint::Triple(v))
        .collect()
}

impl SweepConfig {
    pub fn default_for(example: Example) -> Self {
        let couplings = match example {
            Example::One => default_pairwise_grid(),
            Example::Two => default_triple_grid(),
        };
        Self {
            example,
            noise: default_noise_grid(),
            couplings,
            energies: Energies::DEFAULT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let e = self.energies;
        if !(e.a.is_finite() && e.a >= e.b && e.b >= e.c && e.c > 0.0) {
            return Err(Error::Config(format!(
                "energies must satisfy eA >= eB >= eC > 0, got {}, {}, {}",
                e.a, e.b, e.c
            )));
        }
        for &x in &self.noise {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::OutOfRange {
                    name: "noise strength",
                    value: x,
                });
            }
        }
        for point in &self.couplings {
            let finite = match (self.example, point) {
                (Example::One, CouplingPoint::Pairwise(j)) => {
                    [j.ab, j.ac, j.bc].iter().all(|v| v.is_finite())
                }
                (Example::Two, CouplingPoint::Triple(j)) => j.is_finite(),
                _ => {
                    return Err(Error::Config(format!(
                        "coupling point {point:?} does not belong to example {:?}",
                        self.example
                    )))
                }
            };
            if !finite {
                return Err(Error::Config(format!("non-finite coupling in {point:?}")));
            }
        }
        Ok(())
    }
}

/// One grid point. Capacities of the state before measurement and of the
/// selected optimal outcome of each scheme, on the whole system and on the
/// kept subsystem (`AB` for scheme 1, `A` for scheme 2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub noise: f64,
    pub couplings: CouplingPoint,
    pub cap_total_before: f64,
    pub cap_total_after_s1: f64,
    pub cap_total_after_s2: f64,
    pub cap_ab_before: f64,
    pub cap_ab_after_s1: f64,
    pub cap_a_before: f64,
    pub cap_a_after_s2: f64,
    /// Whole-system capacity after scheme 1 over the capacity before.
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    /// Fraction of the noiseless capacity lost to noise.
    pub r_l: Option<f64>,
    /// Capacity regained by scheme 1, relative to the noiseless capacity.
    pub r1_plus: Option<f64>,
    pub r2_plus: Option<f64>,
    pub label_s1: usize,
    pub label_s2: usize,
    pub certified_s1: bool,
    pub certified_s2: bool,
}

impl SweepRecord {
    /// Reduced capacity on `A` after scheme 2 over the capacity before.
    pub fn sub_ratio_s2(&self) -> Option<f64> {
        ratio(self.cap_a_after_s2, self.cap_a_before)
    }

    pub fn sub_ratio_s1(&self) -> Option<f64> {
        ratio(self.cap_ab_after_s1, self.cap_ab_before)
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den.abs() > ZERO_CAPACITY).then(|| num / den)
}

struct PointSetup {
    h_total: HermitianOperator,
    h_ab: HermitianOperator,
    h_a: HermitianOperator,
    rated: f64,
}

fn setup(example: Example, e: Energies, point: CouplingPoint) -> Result<PointSetup> {
    let (h_total, h_ab) = match (example, point) {
        (Example::One, CouplingPoint::Pairwise(j)) => (
            model::example1_hamiltonian(e, j),
            model::example1_pair_hamiltonian(e, j.ab),
        ),
        (Example::Two, CouplingPoint::Triple(j)) => (
            model::example2_hamiltonian(e, j),
            model::example2_pair_hamiltonian(e),
        ),
        _ => {
            return Err(Error::Config(format!(
                "{point:?} does not match {example:?}"
            )))
        }
    };
    let rated = capacity_with_energies(&example.initial_state(), &h_total.spectrum()?)?;
    Ok(PointSetup {
        h_total,
        h_ab,
        h_a: model::local_hamiltonian(e.a),
        rated,
    })
}

fn evaluate(
    example: Example,
    s: &PointSetup,
    point: CouplingPoint,
    noise: f64,
) -> Result<SweepRecord> {
    let rho = white_noise(&example.initial_state(), noise)?;
    let energy = s.h_total.spectrum()?;
    let cap_total_before = capacity_with_energies(&rho, &energy)?;
    let cap_ab_before = capacity_with_energies(
        &partial_trace(&rho, Scheme::One.keep())?,
        &s.h_ab.spectrum()?,
    )?;
    let cap_a_before = capacity_with_energies(
        &partial_trace(&rho, Scheme::Two.keep())?,
        &s.h_a.spectrum()?,
    )?;

    let ens1 = Scheme::One.run(&rho)?;
    let sel1 = select_optimal(&ens1, Scheme::One.keep(), &s.h_ab)?;
    let ens2 = Scheme::Two.run(&rho)?;
    let sel2 = select_optimal(&ens2, Scheme::Two.keep(), &s.h_a)?;
    let reduced = |caps: &[(usize, f64)], label: usize| {
        caps.iter()
            .find(|(l, _)| *l == label)
            .map(|c| c.1)
            .expect("selected label is retained")
    };

    let cap_total_after_s1 = whole_capacity_after(&ens1, sel1.label, &s.h_total)?;
    let cap_total_after_s2 = whole_capacity_after(&ens2, sel2.label, &s.h_total)?;
    Ok(SweepRecord {
        noise,
        couplings: point,
        cap_total_before,
        cap_total_after_s1,
        cap_total_after_s2,
        cap_ab_before,
        cap_ab_after_s1: reduced(&sel1.reduced_capacities, sel1.label),
        cap_a_before,
        cap_a_after_s2: reduced(&sel2.reduced_capacities, sel2.label),
        r1: ratio(cap_total_after_s1, cap_total_before),
        r2: ratio(cap_total_after_s2, cap_total_before),
        r_l: ratio(s.rated - cap_total_before, s.rated),
        r1_plus: ratio(cap_total_after_s1 - cap_total_before, s.rated),
        r2_plus: ratio(cap_total_after_s2 - cap_total_before, s.rated),
        label_s1: sel1.label,
        label_s2: sel2.label,
        certified_s1: sel1.certified,
        certified_s2: sel2.certified,
    })
}

/// Evaluates every (coupling, noise) pair. Records are ordered by coupling
/// index, then noise index.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let setups = cfg
        .couplings
        .iter()
        .map(|&p| setup(cfg.example, cfg.energies, p))
        .collect::<Result<Vec<_>>>()?;
    let n_noise = cfg.noise.len();
    (0..setups.len() * n_noise)
        .into_par_iter()
        .map(|idx| {
            let (ci, ni) = (idx / n_noise, idx % n_noise);
            evaluate(cfg.example, &setups[ci], cfg.couplings[ci], cfg.noise[ni])
        })
        .collect()
}

pub fn run_example1(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    if cfg.example != Example::One {
        return Err(Error::Config(
            "run_example1 needs an example-1 config".into(),
        ));
    }
    run_sweep(cfg)
}

pub fn run_example2(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    if cfg.example != Example::Two {
        return Err(Error::Config(
            "run_example2 needs an example-2 config".into(),
        ));
    }
    run_sweep(cfg)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), format_sig)
}

fn csv_row(example: Example, r: &SweepRecord) -> Result<String> {
    let f = format_sig;
    let row = match (example, r.couplings) {
        (Example::One, CouplingPoint::Pairwise(j)) => [
            f(r.noise),
            f(j.ab),
            f(j.ac),
            f(j.bc),
            f(r.cap_total_before),
            f(r.cap_total_after_s1),
            f(r.cap_total_after_s2),
            f(r.cap_ab_before),
            f(r.cap_ab_after_s1),
            f(r.cap_a_before),
            f(r.cap_a_after_s2),
            opt(r.r1),
            opt(r.r2),
        ]
        .join(","),
        (Example::Two, CouplingPoint::Triple(j)) => [
            f(r.noise),
            f(j),
            f(r.cap_total_before),
            f(r.cap_ab_before),
            f(r.cap_ab_after_s1),
            f(r.cap_a_before),
            f(r.cap_a_after_s2),
            opt(r.r_l),
            opt(r.r1_plus),
            opt(r.r2_plus),
        ]
        .join(","),
        (_, point) => {
            return Err(Error::Config(format!(
                "{point:?} does not match {example:?}"
            )))
        }
    };
    Ok(row)
}

/// Header line plus one line per record, `\n`-terminated.
pub fn write_csv<W: Write>(example: Example, records: &[SweepRecord], mut out: W) -> Result<()> {
    let io_err = |e: io::Error| Error::Config(format!("write failed: {e}"));
    writeln!(out, "{}", example.csv_header()).map_err(io_err)?;
    for r in records {
        writeln!(out, "{}", csv_row(example, r)?).map_err(io_err)?;
    }
    Ok(())
}

pub fn csv_string(example: Example, records: &[SweepRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(example, records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(example: Example, noise: &[f64], point: CouplingPoint) -> Vec<SweepRecord> {
        let cfg = SweepConfig {
            example,
            noise: noise.to_vec(),
            couplings: vec![point],
            energies: Energies::DEFAULT,
        };
        run_sweep(&cfg).unwrap()
    }

    #[test]
    fn default_grids_have_figure_layout() {
        let one = SweepConfig::default_for(Example::One);
        assert_eq!(one.noise.len(), 101);
        assert_eq!(one.noise[25], 0.25);
        assert_eq!(one.couplings.len(), 13);
        assert_eq!(SweepConfig::default_for(Example::Two).couplings.len(), 4);
    }

    #[test]
    fn validation() {
        let mut cfg = SweepConfig::default_for(Example::One);
        cfg.energies = Energies {
            a: 0.1,
            b: 0.3,
            c: 0.5,
        };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = SweepConfig::default_for(Example::One);
        cfg.noise.push(1.5);
        assert!(matches!(cfg.validate(), Err(Error::OutOfRange { .. })));
        let mut cfg = SweepConfig::default_for(Example::Two);
        cfg.couplings
            .push(CouplingPoint::Pairwise(Couplings::uniform(0.1)));
        assert!(cfg.validate().is_err());
        assert!(run_example1(&SweepConfig::default_for(Example::Two)).is_err());
    }

    #[test]
    fn example1_endpoints() {
        let recs = single(
            Example::One,
            &[0.0, 1.0],
            CouplingPoint::Pairwise(Couplings::uniform(0.1)),
        );
        let clean = &recs[0];
        assert!((clean.cap_a_before - 1.0 / 3.0).abs() < 1e-12);
        assert!((clean.cap_a_after_s2 - 1.0).abs() < 1e-12);
        assert!((clean.sub_ratio_s2().unwrap() - 3.0).abs() < 1e-12);
        assert!((clean.cap_ab_before - 1.2240388982731258).abs() < 1e-12);
        let (r1, r2) = (clean.r1.unwrap(), clean.r2.unwrap());
        assert!(
            (r1 - 1.0).abs() < 1e-9 && (r2 - 1.0).abs() < 1e-9,
            "{r1} {r2}"
        );
        let mixed = &recs[1];
        assert_eq!(mixed.cap_total_before, 0.0);
        assert_eq!(mixed.cap_ab_before, 0.0);
        assert_eq!(mixed.cap_a_before, 0.0);
        assert_eq!((mixed.r1, mixed.r2), (None, None));
        assert_eq!(mixed.r_l, Some(1.0));
    }

    #[test]
    fn example1_frozen_values() {
        let rec = &single(
            Example::One,
            &[0.25],
            CouplingPoint::Pairwise(Couplings::uniform(0.1)),
        )[0];
        assert_eq!((rec.label_s1, rec.certified_s1), (0, true));
        assert_eq!((rec.label_s2, rec.certified_s2), (0, true));
        assert!((rec.cap_total_before - 1.3907094862794245).abs() < 1e-12);
        assert!((rec.cap_total_after_s1 - 1.693176647877448).abs() < 1e-12);
        assert!((rec.r_l.unwrap() - (1.0 - 1.3907094862794245 / 1.8542793150392325)).abs() < 1e-12);
    }

    #[test]
    fn example2_endpoints() {
        let recs = single(Example::Two, &[0.0, 0.5, 1.0], CouplingPoint::Triple(0.1));
        let e = Energies::DEFAULT;
        for r in &recs {
            let b = r.noise;
            assert!((r.cap_ab_before - 2.0 * (1.0 - b) * e.a).abs() < 1e-12);
            assert!((r.cap_ab_after_s1 - 2.0 * (1.0 - b) * (e.a + e.b)).abs() < 1e-12);
            assert!((r.cap_a_after_s2 - (4.0 - 4.0 * b) / (2.0 - b) * e.a).abs() < 1e-12);
        }
        assert_eq!(recs[0].r_l, Some(0.0));
        assert_eq!(recs[2].r_l, Some(1.0));
    }

    #[test]
    fn csv_layout() {
        let recs = single(
            Example::One,
            &[0.0, 1.0],
            CouplingPoint::Pairwise(Couplings::uniform(0.1)),
        );
        let text = csv_string(Example::One, &recs).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], Example::One.csv_header());
        assert!(lines[1].starts_with("0,0.1,0.1,0.1,"));
        assert!(lines[2].ends_with(",nan,nan"));
        assert!(lines.iter().all(|l| l.split(',').count() == 13));
        assert!(csv_string(Example::Two, &recs).is_err());
        assert_eq!(
            csv_string(Example::Two, &[]).unwrap(),
            format!("{}\n", Example::Two.csv_header())
        );
    }
}
