//! Local projective measurements in the computational basis and selection
//! of the optimal outcome by majorization.
//!
//! Scheme 1 measures subsystem `C` and looks at `AB`; scheme 2 measures the
//! pair `BC` and looks at `A`. An outcome is *certified* optimal when the
//! spectrum of its reduced state majorizes every other retained outcome's
//! reduced spectrum, which by Schur-convexity makes it the best choice for
//! every Hamiltonian on the kept subsystems at once.

use crate::battery::{capacity_from_spectra, capacity_with_energies, majorizes};
use crate::error::{Error, Result};
use crate::linalg::{
    digits, kron_all, partial_trace, ComplexMatrix, DensityMatrix, HermitianOperator, Spectrum, C64,
};

/// Outcomes with probability below this are skipped; their post state is 0/0.
pub const SKIP_THRESHOLD: f64 = 1e-12;

/// Rank-1 computational-basis projectors on a set of target subsystems.
/// Label `k` is the mixed-radix index of the target digits, first target
/// most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorSet {
    dims: Vec<usize>,
    target: Vec<usize>,
}

impl ProjectorSet {
    pub fn new(dims: Vec<usize>, target: Vec<usize>) -> Result<Self> {
        if target.is_empty() {
            return Err(Error::InvalidSubsystems("no measured subsystem".into()));
        }
        if target.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubsystems(
                "measured subsystems must be strictly increasing".into(),
            ));
        }
        if target.iter().any(|&t| t >= dims.len()) {
            return Err(Error::InvalidSubsystems(format!(
                "measured subsystem out of range for dims {dims:?}"
            )));
        }
        Ok(Self { dims, target })
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn target_dims(&self) -> Vec<usize> {
        self.target.iter().map(|&t| self.dims[t]).collect()
    }

    pub fn len(&self) -> usize {
        self.target_dims().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The full-space operator `I ⊗ … ⊗ |k⟩⟨k| ⊗ …` for label `k`.
    pub fn projector(&self, label: usize) -> ComplexMatrix {
        let local = digits(label, &self.target_dims());
        let factors: Vec<ComplexMatrix> = self
            .dims
            .iter()
            .enumerate()
            .map(
                |(site, &d)| match self.target.iter().position(|&t| t == site) {
                    Some(pos) => {
                        let mut m = ComplexMatrix::zeros(d);
                        m[(local[pos], local[pos])] = C64::new(1.0, 0.0);
                        m
                    }
                    None => ComplexMatrix::identity(d),
                },
            )
            .collect();
        kron_all(&factors)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub label: usize,
    pub probability: f64,
    pub state: DensityMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkippedOutcome {
    pub label: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeEnsemble {
    pub entries: Vec<Outcome>,
    pub skipped: Vec<SkippedOutcome>,
}

impl OutcomeEnsemble {
    pub fn outcome(&self, label: usize) -> Result<&Outcome> {
        if let Some(o) = self.entries.iter().find(|o| o.label == label) {
            return Ok(o);
        }
        if self.skipped.iter().any(|s| s.label == label) {
            return Err(Error::OutcomeSkipped { label });
        }
        Err(Error::UnknownOutcome { label })
    }

    pub fn total_probability(&self) -> f64 {
        self.entries.iter().map(|o| o.probability).sum::<f64>()
            + self.skipped.iter().map(|s| s.probability).sum::<f64>()
    }

    /// Probability of every label in order, skipped ones included.
    pub fn probabilities(&self) -> Vec<(usize, f64)> {
        let mut all: Vec<(usize, f64)> = self
            .entries
            .iter()
            .map(|o| (o.label, o.probability))
            .chain(self.skipped.iter().map(|s| (s.label, s.probability)))
            .collect();
        all.sort_by_key(|&(l, _)| l);
        all
    }
}

/// `P_k = Tr[M_k ρ M_k†]`, `ρ_k = M_k ρ M_k† / P_k` for every projector.
pub fn measure(rho: &DensityMatrix, projectors: &ProjectorSet) -> Result<OutcomeEnsemble> {
    if projectors.dims != rho.dims() {
        return Err(Error::InvalidSubsystems(format!(
            "projectors built for {:?}, state has {:?}",
            projectors.dims,
            rho.dims()
        )));
    }
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for label in 0..projectors.len() {
        let unnormalized = projectors.projector(label).sandwich(rho.matrix());
        let probability = unnormalized.trace().re;
        if probability < SKIP_THRESHOLD {
            skipped.push(SkippedOutcome { label, probability });
            continue;
        }
        let state = DensityMatrix::new(unnormalized.scale(1.0 / probability), rho.dims().to_vec())?;
        entries.push(Outcome {
            label,
            probability,
            state,
        });
    }
    Ok(OutcomeEnsemble { entries, skipped })
}

fn require_tripartite(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().len() != 3 {
        return Err(Error::InvalidSubsystems(format!(
            "measurement schemes need three subsystems, state has dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Measure `C`; outcomes labelled `k = 0..d_C`.
pub fn scheme1(rho: &DensityMatrix) -> Result<OutcomeEnsemble> {
    require_tripartite(rho)?;
    measure(rho, &ProjectorSet::new(rho.dims().to_vec(), vec![2])?)
}

/// Measure `BC`; outcome `j·d_C + k` for `B = j`, `C = k`.
pub fn scheme2(rho: &DensityMatrix) -> Result<OutcomeEnsemble> {
    require_tripartite(rho)?;
    measure(rho, &ProjectorSet::new(rho.dims().to_vec(), vec![1, 2])?)
}

/// Subsystems left unmeasured by each scheme.
pub const SCHEME1_KEEP: [usize; 2] = [0, 1];
pub const SCHEME2_KEEP: [usize; 1] = [0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Measure `C`, keep `AB`.
    One,
    /// Measure `BC`, keep `A`.
    Two,
}

impl Scheme {
    pub fn keep(self) -> &'static [usize] {
        match self {
            Scheme::One => &SCHEME1_KEEP,
            Scheme::Two => &SCHEME2_KEEP,
        }
    }

    pub fn run(self, rho: &DensityMatrix) -> Result<OutcomeEnsemble> {
        match self {
            Scheme::One => scheme1(rho),
            Scheme::Two => scheme2(rho),
        }
    }
}

fn reduced_spectra(ens: &OutcomeEnsemble, keep: &[usize]) -> Result<Vec<(usize, Spectrum)>> {
    ens.entries
        .iter()
        .map(|o| Ok((o.label, partial_trace(&o.state, keep)?.spectrum()?)))
        .collect()
}

/// Capacity of each retained outcome's reduced state on `keep`.
pub fn outcome_capacities(
    ens: &OutcomeEnsemble,
    keep: &[usize],
    h_sub: &HermitianOperator,
) -> Result<Vec<(usize, f64)>> {
    let energy = h_sub.spectrum()?;
    reduced_spectra(ens, keep)?
        .into_iter()
        .map(|(label, s)| Ok((label, capacity_from_spectra(&s, &energy)?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSelection {
    pub label: usize,
    /// The selected reduced spectrum majorizes every other retained one.
    pub certified: bool,
    pub reduced_capacities: Vec<(usize, f64)>,
}

/// Picks the lowest-labelled outcome whose reduced spectrum majorizes all
/// others. If none exists, falls back to the highest reduced capacity
/// (lowest label on ties) with `certified = false`.
pub fn select_optimal(
    ens: &OutcomeEnsemble,
    keep: &[usize],
    h_sub: &HermitianOperator,
) -> Result<OptimalSelection> {
    if ens.entries.is_empty() {
        return Err(Error::NoRetainedOutcome);
    }
    let spectra = reduced_spectra(ens, keep)?;
    let sub_dim = spectra[0].1.len();
    if sub_dim != h_sub.dim() {
        return Err(Error::DimensionMismatch {
            expected: sub_dim,
            found: h_sub.dim(),
        });
    }
    let energy = h_sub.spectrum()?;
    let reduced_capacities = spectra
        .iter()
        .map(|(l, s)| Ok((*l, capacity_from_spectra(s, &energy)?)))
        .collect::<Result<Vec<_>>>()?;

    for (label, candidate) in &spectra {
        let mut dominant = true;
        for (other, s) in &spectra {
            if other != label && !majorizes(candidate, s)? {
                dominant = false;
                break;
            }
        }
        if dominant {
            return Ok(OptimalSelection {
                label: *label,
                certified: true,
                reduced_capacities,
            });
        }
    }

    let mut best = reduced_capacities[0];
    for &(l, c) in &reduced_capacities[1..] {
        if c > best.1 {
            best = (l, c);
        }
    }
    Ok(OptimalSelection {
        label: best.0,
        certified: false,
        reduced_capacities,
    })
}

/// Capacity of the full post-measurement state for `label`.
pub fn whole_capacity_after(
    ens: &OutcomeEnsemble,
    label: usize,
    h_total: &HermitianOperator,
) -> Result<f64> {
    let outcome = ens.outcome(label)?;
    if outcome.state.dim() != h_total.dim() {
        return Err(Error::DimensionMismatch {
            expected: h_total.dim(),
            found: outcome.state.dim(),
        });
    }
    capacity_with_energies(&outcome.state, &h_total.spectrum()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::battery::capacity;
    use crate::linalg::{kron, partial_trace};
    use crate::model::{self, white_noise, Couplings, Energies};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    fn basis_projector(n: usize, k: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n);
        m[(k, k)] = C64::new(1.0, 0.0);
        m
    }

    #[test]
    fn scheme1_on_w_state() {
        let ens = scheme1(&model::w_state()).unwrap();
        assert_eq!(ens.entries.len(), 2);
        assert!(close(ens.entries[0].probability, 2.0 / 3.0));
        assert!(close(ens.entries[1].probability, 1.0 / 3.0));

        let ab0 = partial_trace(&ens.entries[0].state, &SCHEME1_KEEP).unwrap();
        // (|01⟩ + |10⟩)/√2
        let mut bell = ComplexMatrix::zeros(4);
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            bell[(i, j)] = C64::new(0.5, 0.0);
        }
        assert!(ab0.matrix().max_abs_diff(&bell) < 1e-12);

        let ab1 = partial_trace(&ens.entries[1].state, &SCHEME1_KEEP).unwrap();
        assert!(ab1.matrix().max_abs_diff(&basis_projector(4, 0)) < 1e-12);
    }

    #[test]
    fn scheme1_on_ghz_state() {
        let ens = scheme1(&model::ghz_state()).unwrap();
        assert!(close(ens.entries[0].probability, 0.5));
        assert!(close(ens.entries[1].probability, 0.5));
        let ab0 = partial_trace(&ens.entries[0].state, &SCHEME1_KEEP).unwrap();
        assert!(ab0.matrix().max_abs_diff(&basis_projector(4, 0)) < 1e-12);
    }

    #[test]
    fn scheme1_on_maximally_mixed() {
        let ens = scheme1(&model::maximally_mixed3()).unwrap();
        for o in &ens.entries {
            assert!(close(o.probability, 0.5));
            let expected = kron(
                &ComplexMatrix::identity(4).scale(0.25),
                &basis_projector(2, o.label),
            );
            assert!(o.state.matrix().max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn scheme2_on_presets() {
        let ens = scheme2(&model::w_state()).unwrap();
        let first = ens.outcome(0).unwrap();
        assert!(close(first.probability, 1.0 / 3.0));
        let a = partial_trace(&first.state, &SCHEME2_KEEP).unwrap();
        assert!(a.matrix().max_abs_diff(&basis_projector(2, 1)) < 1e-12);

        let ens = scheme2(&model::ghz_state()).unwrap();
        assert_eq!(
            ens.entries.iter().map(|o| o.label).collect::<Vec<_>>(),
            vec![0, 3]
        );
        assert_eq!(
            ens.skipped.iter().map(|s| s.label).collect::<Vec<_>>(),
            vec![1, 2]
        );
        assert!(close(ens.outcome(0).unwrap().probability, 0.5));
        assert!(matches!(
            ens.outcome(1),
            Err(Error::OutcomeSkipped { label: 1 })
        ));
        assert!(matches!(
            ens.outcome(9),
            Err(Error::UnknownOutcome { label: 9 })
        ));
        let a = partial_trace(&ens.outcome(0).unwrap().state, &SCHEME2_KEEP).unwrap();
        assert!(a.matrix().max_abs_diff(&basis_projector(2, 0)) < 1e-12);

        let ens = scheme2(&model::maximally_mixed3()).unwrap();
        assert_eq!(ens.entries.len(), 4);
        assert!(ens.entries.iter().all(|o| close(o.probability, 0.25)));
    }

    #[test]
    fn schemes_reject_non_tripartite_states() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert!(matches!(scheme1(&rho), Err(Error::InvalidSubsystems(_))));
    }

    #[test]
    fn reduced_capacities_of_known_outcomes() {
        let e = Energies::DEFAULT;
        let ens = scheme1(&model::ghz_state()).unwrap();
        let caps =
            outcome_capacities(&ens, &SCHEME1_KEEP, &model::example2_pair_hamiltonian(e)).unwrap();
        assert!(close(caps[0].1, 1.6));

        let ens = scheme2(&model::w_state()).unwrap();
        let caps = outcome_capacities(&ens, &SCHEME2_KEEP, &model::local_hamiltonian(e.a)).unwrap();
        assert!(close(caps[0].1, 1.0));
        // BC = 11 never occurs for |W⟩
        assert_eq!(ens.skipped.len(), 1);

        let ens = scheme1(&model::maximally_mixed3()).unwrap();
        let caps =
            outcome_capacities(&ens, &SCHEME1_KEEP, &model::example2_pair_hamiltonian(e)).unwrap();
        assert!(caps.iter().all(|&(_, c)| c.abs() < 1e-15));
    }

    #[test]
    fn outcome_capacities_reject_mismatched_hamiltonian() {
        let ens = scheme1(&model::ghz_state()).unwrap();
        let r = outcome_capacities(&ens, &SCHEME1_KEEP, &model::local_hamiltonian(0.5));
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn selection_on_noisy_w_state() {
        let rho = white_noise(&model::w_state(), 0.5).unwrap();
        let ens = scheme1(&rho).unwrap();
        let h_ab = model::example1_pair_hamiltonian(Energies::DEFAULT, 0.1);
        let sel = select_optimal(&ens, &SCHEME1_KEEP, &h_ab).unwrap();
        assert_eq!(sel.label, 0);
        assert!(sel.certified);

        // outcomes 0..2 share the same reduced spectrum, outcome 3 is flatter
        let ens = scheme2(&rho).unwrap();
        let sel = select_optimal(&ens, &SCHEME2_KEEP, &model::local_hamiltonian(0.5)).unwrap();
        assert_eq!(sel.label, 0);
        assert!(sel.certified);
        let c = &sel.reduced_capacities;
        assert!(close(c[0].1, c[1].1) && close(c[1].1, c[2].1) && c[3].1 < c[0].1);
    }

    #[test]
    fn selection_on_ghz_ties_to_lowest_label() {
        let ens = scheme2(&model::ghz_state()).unwrap();
        let sel = select_optimal(&ens, &SCHEME2_KEEP, &model::local_hamiltonian(0.5)).unwrap();
        assert_eq!((sel.label, sel.certified), (0, true));
    }

    #[test]
    fn selection_on_pure_product_state() {
        // |0⟩|+⟩|+⟩: every outcome leaves A pure
        let plus = [C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        for b in 0..2 {
            for c in 0..2 {
                amps[b * 2 + c] = plus[b] * plus[c];
            }
        }
        let rho = DensityMatrix::pure(&amps, vec![2, 2, 2]).unwrap();
        let ens = scheme2(&rho).unwrap();
        let sel = select_optimal(&ens, &SCHEME2_KEEP, &model::local_hamiltonian(0.5)).unwrap();
        assert_eq!((sel.label, sel.certified), (0, true));
    }

    #[test]
    fn selection_falls_back_when_incomparable() {
        // two outcomes on C with AB spectra {0.6,0.2,0.2,0} and {0.5,0.45,0.05,0}
        let p0 = [0.6, 0.2, 0.2, 0.0];
        let p1 = [0.5, 0.45, 0.05, 0.0];
        let mut diag = [0.0; 8];
        for ab in 0..4 {
            diag[2 * ab] = 0.5 * p0[ab];
            diag[2 * ab + 1] = 0.5 * p1[ab];
        }
        let rho =
            DensityMatrix::new(ComplexMatrix::from_real_diagonal(&diag), vec![2, 2, 2]).unwrap();
        let ens = scheme1(&rho).unwrap();
        let h = model::example2_pair_hamiltonian(Energies::DEFAULT);
        let sel = select_optimal(&ens, &SCHEME1_KEEP, &h).unwrap();
        assert!(!sel.certified);
        let best = sel
            .reduced_capacities
            .iter()
            .cloned()
            .fold((0, f64::MIN), |b, x| if x.1 > b.1 { x } else { b });
        assert_eq!(sel.label, best.0);
    }

    #[test]
    fn whole_capacity_of_pure_ghz_outcome() {
        let ens = scheme1(&model::ghz_state()).unwrap();
        let h = model::example2_hamiltonian(Energies::DEFAULT, 0.0);
        assert!(close(whole_capacity_after(&ens, 0, &h).unwrap(), 1.8));

        let ens = scheme2(&model::ghz_state()).unwrap();
        assert!(matches!(
            whole_capacity_after(&ens, 1, &h),
            Err(Error::OutcomeSkipped { label: 1 })
        ));
    }

    #[test]
    fn measurement_lifts_maximally_mixed_capacity() {
        let rho = model::maximally_mixed3();
        let h = model::example2_hamiltonian(Energies::DEFAULT, 0.25);
        let before = capacity(&rho, &h).unwrap().capacity;
        let ens = scheme1(&rho).unwrap();
        for o in &ens.entries {
            let s = o.state.spectrum().unwrap();
            assert_eq!(s.count_above(1e-10), 4);
            assert!(whole_capacity_after(&ens, o.label, &h).unwrap() > before + 0.1);
        }
    }

    #[test]
    fn noisy_w_whole_capacity_rises() {
        // independent numpy evaluation: 1.693176647877448 vs 1.3907094862794245
        let rho = white_noise(&model::w_state(), 0.25).unwrap();
        let h = model::example1_hamiltonian(Energies::DEFAULT, Couplings::uniform(0.1));
        let ens = scheme1(&rho).unwrap();
        let after = whole_capacity_after(&ens, 0, &h).unwrap();
        let before = capacity(&rho, &h).unwrap().capacity;
        assert!((after - 1.693176647877448).abs() < 1e-10);
        assert!((before - 1.3907094862794245).abs() < 1e-10);
        assert!(after > before);
    }

    #[test]
    fn projector_set_validation() {
        assert!(ProjectorSet::new(vec![2, 2, 2], vec![]).is_err());
        assert!(ProjectorSet::new(vec![2, 2, 2], vec![2, 1]).is_err());
        assert!(ProjectorSet::new(vec![2, 2, 2], vec![3]).is_err());
        let set = ProjectorSet::new(vec![2, 3, 2], vec![1, 2]).unwrap();
        assert_eq!(set.len(), 6);
        let sum = (0..6).fold(ComplexMatrix::zeros(12), |acc, k| &acc + &set.projector(k));
        assert_eq!(sum, ComplexMatrix::identity(12));
    }
}
