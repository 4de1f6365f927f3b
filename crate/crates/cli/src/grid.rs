//! `--grid key=v1,v2,...` and `--grid key=start:stop:step` parsing.

use anyhow::{anyhow, bail, Context, Result};

use qbcap::experiments::sweep::{
    default_noise_grid, default_pairwise_grid, default_triple_grid, CouplingPoint, Example,
    SweepConfig,
};
use qbcap::model::{Couplings, Energies};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKey {
    Noise,
    Jab,
    Jac,
    Jbc,
    Jabc,
}

impl GridKey {
    fn parse(key: &str, example: Example) -> Result<Self> {
        let k = match (key, example) {
            ("a", Example::One) | ("b", Example::Two) | ("noise", _) => GridKey::Noise,
            ("J_AB", Example::One) => GridKey::Jab,
            ("J_AC", Example::One) => GridKey::Jac,
            ("J_BC", Example::One) => GridKey::Jbc,
            ("J_ABC", Example::Two) => GridKey::Jabc,
            _ => bail!(
                "grid key '{key}' is not valid for example {}; use {}",
                example_number(example),
                match example {
                    Example::One => "a, J_AB, J_AC, J_BC",
                    Example::Two => "b, J_ABC",
                }
            ),
        };
        Ok(k)
    }
}

fn example_number(e: Example) -> u32 {
    match e {
        Example::One => 1,
        Example::Two => 2,
    }
}

/// `start:stop:step` expands to `start + (stop − start)·i/n` for
/// `i = 0..=n`, so endpoints are exact.
pub fn parse_values(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .with_context(|| format!("'{s}' is not a number"))
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts[..] else {
            bail!("range '{spec}' must be start:stop:step");
        };
        let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
        if step <= 0.0 || stop < start {
            bail!("range '{spec}' needs step > 0 and stop >= start");
        }
        let steps = (stop - start) / step;
        let n = steps.round();
        if (steps - n).abs() > 1e-9 {
            bail!("range '{spec}': step does not divide the interval");
        }
        let n = n as usize;
        Ok((0..=n)
            .map(|i| start + (stop - start) * i as f64 / n.max(1) as f64)
            .collect())
    } else {
        spec.split(',').map(num).collect()
    }
}

pub fn parse_entry(entry: &str, example: Example) -> Result<(GridKey, Vec<f64>)> {
    let (key, values) = entry
        .split_once('=')
        .ok_or_else(|| anyhow!("grid entry '{entry}' must look like key=values"))?;
    Ok((GridKey::parse(key.trim(), example)?, parse_values(values)?))
}

/// Builds a sweep configuration. Without coupling keys the figure-style
/// default grid is used; otherwise the Cartesian product of the given lists,
/// with unlisted couplings pinned at `pinned`.
pub fn build_config(
    example: Example,
    entries: &[String],
    energies: Energies,
    pinned: Couplings,
) -> Result<SweepConfig> {
    let mut noise = None;
    let mut lists: [Option<Vec<f64>>; 4] = Default::default();
    for entry in entries {
        let (key, values) = parse_entry(entry, example)?;
        let slot = match key {
            GridKey::Noise => &mut noise,
            GridKey::Jab => &mut lists[0],
            GridKey::Jac => &mut lists[1],
            GridKey::Jbc => &mut lists[2],
            GridKey::Jabc => &mut lists[3],
        };
        if slot.replace(values).is_some() {
            bail!("grid key in '{entry}' given twice");
        }
    }
    let couplings = match example {
        Example::One if lists[..3].iter().all(Option::is_none) => default_pairwise_grid(),
        Example::One => {
            let pick = |i: usize, v: f64| lists[i].clone().unwrap_or_else(|| vec![v]);
            let (abs, acs, bcs) = (pick(0, pinned.ab), pick(1, pinned.ac), pick(2, pinned.bc));
            let mut grid = Vec::new();
            for &ab in &abs {
                for &ac in &acs {
                    for &bc in &bcs {
                        grid.push(CouplingPoint::Pairwise(Couplings { ab, ac, bc }));
                    }
                }
            }
            grid
        }
        Example::Two => match &lists[3] {
            Some(values) => values.iter().map(|&j| CouplingPoint::Triple(j)).collect(),
            None => default_triple_grid(),
        },
    };
    let cfg = SweepConfig {
        example,
        noise: noise.unwrap_or_else(default_noise_grid),
        couplings,
        energies,
    };
    cfg.validate()?;
    Ok(cfg)
}
