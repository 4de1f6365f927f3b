//! Closed forms for three-qubit X-states.
//!
//! An X-state is supported on the diagonal and the anti-diagonal of the
//! computational basis. Its spectrum comes from four independent 2×2 blocks
//! `{|i⟩, |7−i⟩}`, and computational-basis measurements on `C` or `BC` wipe
//! out the anti-diagonal entirely, so every post-measurement state is
//! diagonal. The ensembles here are written directly from the Bloch
//! coefficients and serve as an independent check on [`crate::measure`].
//!
//! Indices in names such as `rho_18` are 1-based, matching `|000⟩ ↔ 1`.

use crate::error::{Error, Result};
use crate::linalg::{
    kron_all, pauli, ComplexMatrix, DensityMatrix, HermitianOperator, Spectrum, C64,
};
use crate::measure::{
    select_optimal, OptimalSelection, Outcome, OutcomeEnsemble, Scheme, SkippedOutcome,
    SKIP_THRESHOLD,
};

const PAIR_NAMES: [&str; 4] = ["rho_18", "rho_27", "rho_36", "rho_45"];

/// Diagonal `ρ₁₁..ρ₈₈` and upper anti-diagonal `ρ₁₈, ρ₂₇, ρ₃₆, ρ₄₅`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateParams {
    diag: [f64; 8],
    anti: [C64; 4],
}

impl XStateParams {
    pub fn new(diag: [f64; 8], anti: [C64; 4]) -> Result<Self> {
        if let Some(i) = diag.iter().position(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::XStateDiagonal(format!(
                "rho_{0}{0} = {1} must be finite and non-negative",
                i + 1,
                diag[i]
            )));
        }
        let total: f64 = diag.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::XStateDiagonal(format!("diagonal sums to {total}")));
        }
        for (i, z) in anti.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::XStateDiagonal(format!(
                    "{} is not finite",
                    PAIR_NAMES[i]
                )));
            }
            let bound = diag[i] * diag[7 - i];
            if z.norm_sqr() > bound + 1e-12 {
                return Err(Error::XStateNotPositive {
                    pair: PAIR_NAMES[i],
                    modulus_sq: z.norm_sqr(),
                    bound,
                });
            }
        }
        Ok(Self { diag, anti })
    }

    /// Real anti-diagonal entries.
    pub fn real(diag: [f64; 8], anti: [f64; 4]) -> Result<Self> {
        Self::new(diag, anti.map(|x| C64::new(x, 0.0)))
    }

    pub fn diag(&self) -> &[f64; 8] {
        &self.diag
    }

    pub fn anti(&self) -> &[C64; 4] {
        &self.anti
    }

    pub fn is_real(&self) -> bool {
        self.anti.iter().all(|z| z.im == 0.0)
    }

    /// Reads the X-pattern out of a dense 8×8 matrix, ignoring other entries.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.dim() != 8 {
            return Err(Error::DimensionMismatch {
                expected: 8,
                found: m.dim(),
            });
        }
        let mut diag = [0.0; 8];
        for (i, d) in diag.iter_mut().enumerate() {
            *d = m[(i, i)].re;
        }
        let mut anti = [C64::new(0.0, 0.0); 4];
        for (i, z) in anti.iter_mut().enumerate() {
            *z = m[(i, 7 - i)];
        }
        Self::new(diag, anti)
    }

    /// Maximally mixed state plus `(1 − f)` of this state.
    pub fn with_white_noise(&self, f: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::OutOfRange {
                name: "white-noise strength",
                value: f,
            });
        }
        Self::new(
            self.diag.map(|d| (1.0 - f) * d + f / 8.0),
            self.anti.map(|z| z * (1.0 - f)),
        )
    }

    /// GHZ state as an X-state.
    pub fn ghz() -> Self {
        let mut diag = [0.0; 8];
        diag[0] = 0.5;
        diag[7] = 0.5;
        Self::real(diag, [0.5, 0.0, 0.0, 0.0]).unwrap()
    }

    pub fn maximally_mixed() -> Self {
        Self::real([0.125; 8], [0.0; 4]).unwrap()
    }

    fn rho(&self, i: usize) -> f64 {
        self.diag[i - 1]
    }
}

/// Bloch coefficients of a real X-state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateBloch {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    pub a3: f64,
    pub b3: f64,
    pub c3: f64,
    pub e1: f64,
    pub e3: f64,
}

/// The eight eigenvalues `(ρ_ii + ρ_jj)/2 ± √((ρ_ii − ρ_jj)² + 4|ρ_ij|²)/2`.
pub fn x_eigenvalues(p: &XStateParams) -> Spectrum {
    let mut values = Vec::with_capacity(8);
    for (i, z) in p.anti.iter().enumerate() {
        let (a, b) = (p.diag[i], p.diag[7 - i]);
        let root = ((a - b).powi(2) + 4.0 * z.norm_sqr()).sqrt();
        values.push(0.5 * (a + b - root));
        values.push(0.5 * (a + b + root));
    }
    Spectrum::from_unsorted(values)
}

pub fn bloch_coeffs(p: &XStateParams) -> Result<XStateBloch> {
    for (i, z) in p.anti.iter().enumerate() {
        if z.im != 0.0 {
            return Err(Error::ComplexCoherence {
                pair: PAIR_NAMES[i],
            });
        }
    }
    let r = |i| p.rho(i);
    let (r18, r27, r36, r45) = (p.anti[0].re, p.anti[1].re, p.anti[2].re, p.anti[3].re);
    Ok(XStateBloch {
        a1: r(1) + r(2) + r(3) + r(4) - r(5) - r(6) - r(7) - r(8),
        b1: r(1) + r(2) + r(5) + r(6) - r(3) - r(4) - r(7) - r(8),
        c1: r(1) + r(3) + r(5) + r(7) - r(2) - r(4) - r(6) - r(8),
        a2: r(1) + r(4) + r(5) + r(8) - r(2) - r(3) - r(6) - r(7),
        b2: r(1) + r(3) + r(6) + r(8) - r(2) - r(4) - r(5) - r(7),
        c2: r(1) + r(2) + r(7) + r(8) - r(3) - r(4) - r(5) - r(6),
        a3: 2.0 * (r27 + r36 - r18 - r45),
        b3: 2.0 * (r27 + r45 - r18 - r36),
        c3: 2.0 * (r36 + r45 - r18 - r27),
        e1: 2.0 * (r27 + r36 + r18 + r45),
        e3: r(1) + r(4) + r(6) + r(7) - r(2) - r(3) - r(5) - r(8),
    })
}

/// `(1/8)(I⊗I⊗I + a₁ σ₃⊗I⊗I + … + e₃ σ₃⊗σ₃⊗σ₃)`.
pub fn bloch_expansion(b: &XStateBloch) -> ComplexMatrix {
    let terms: [(f64, [usize; 3]); 12] = [
        (1.0, [0, 0, 0]),
        (b.a1, [3, 0, 0]),
        (b.b1, [0, 3, 0]),
        (b.c1, [0, 0, 3]),
        (b.a2, [0, 3, 3]),
        (b.b2, [3, 0, 3]),
        (b.c2, [3, 3, 0]),
        (b.a3, [1, 2, 2]),
        (b.b3, [2, 1, 2]),
        (b.c3, [2, 2, 1]),
        (b.e1, [1, 1, 1]),
        (b.e3, [3, 3, 3]),
    ];
    terms
        .iter()
        .fold(ComplexMatrix::zeros(8), |acc, (coef, idx)| {
            let factors = idx.map(pauli);
            &acc + &kron_all(&factors).scale(coef / 8.0)
        })
}

fn sz(bit: usize) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

fn diagonal_state(diag: [f64; 8]) -> Result<DensityMatrix> {
    DensityMatrix::new(ComplexMatrix::from_real_diagonal(&diag), vec![2, 2, 2])
}

fn ensemble(outcomes: Vec<(usize, f64, [f64; 8])>) -> Result<OutcomeEnsemble> {
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for (label, probability, unnormalized) in outcomes {
        if probability < SKIP_THRESHOLD {
            skipped.push(SkippedOutcome { label, probability });
        } else {
            entries.push(Outcome {
                label,
                probability,
                state: diagonal_state(unnormalized.map(|x| x / probability))?,
            });
        }
    }
    Ok(OutcomeEnsemble { entries, skipped })
}

/// Measuring `C` with `W_k = |k⟩⟨k|`. The coefficients of `c₁, a₂, b₂, e₃`
/// pick up `(−1)^k`; the rest are unchanged.
pub fn scheme1_closed(p: &XStateParams) -> Result<OutcomeEnsemble> {
    let b = bloch_coeffs(p)?;
    let outcomes = (0..2)
        .map(|k| {
            let s = sz(k);
            let mut diag = [0.0; 8];
            for a in 0..2 {
                for bb in 0..2 {
                    let (sa, sb) = (sz(a), sz(bb));
                    diag[4 * a + 2 * bb + k] = (1.0
                        + b.a1 * sa
                        + b.b1 * sb
                        + s * b.c1
                        + s * b.a2 * sb
                        + s * b.b2 * sa
                        + b.c2 * sa * sb
                        + s * b.e3 * sa * sb)
                        / 8.0;
                }
            }
            (k, (1.0 + s * b.c1) / 2.0, diag)
        })
        .collect();
    ensemble(outcomes)
}

/// Signs of `b₁, c₁, a₂, b₂, c₂, e₃` for `V_0 … V_3` on `BC`.
const SCHEME2_SIGNS: [[f64; 6]; 4] = [
    [1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0, -1.0, 1.0, -1.0],
    [-1.0, 1.0, -1.0, 1.0, -1.0, -1.0],
    [-1.0, -1.0, 1.0, -1.0, -1.0, 1.0],
];

/// Measuring `BC` with `V_k`, `k = 2j + l` for `B = j`, `C = l`.
pub fn scheme2_closed(p: &XStateParams) -> Result<OutcomeEnsemble> {
    let b = bloch_coeffs(p)?;
    let outcomes = SCHEME2_SIGNS
        .iter()
        .enumerate()
        .map(|(k, sg)| {
            let (sb1, sc1, sa2, sb2, sc2, se3) = (sg[0], sg[1], sg[2], sg[3], sg[4], sg[5]);
            let mut diag = [0.0; 8];
            for a in 0..2 {
                let sa = sz(a);
                diag[4 * a + k] = (1.0
                    + b.a1 * sa
                    + sb1 * b.b1
                    + sc1 * b.c1
                    + sa2 * b.a2
                    + sb2 * b.b2 * sa
                    + sc2 * b.c2 * sa
                    + se3 * b.e3 * sa)
                    / 8.0;
            }
            let probability = (1.0 + sb1 * b.b1 + sc1 * b.c1 + sa2 * b.a2) / 4.0;
            (k, probability, diag)
        })
        .collect();
    ensemble(outcomes)
}

/// Optimal outcome for an X-state from the closed-form ensemble. The
/// `certified` flag is the majorization condition; `h_sub` only matters for
/// the uncertified fallback.
pub fn corollary_select(
    p: &XStateParams,
    scheme: Scheme,
    h_sub: &HermitianOperator,
) -> Result<OptimalSelection> {
    let ens = match scheme {
        Scheme::One => scheme1_closed(p)?,
        Scheme::Two => scheme2_closed(p)?,
    };
    select_optimal(&ens, scheme.keep(), h_sub)
}
