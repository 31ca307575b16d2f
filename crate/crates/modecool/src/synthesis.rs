//! Multi-tone modulation synthesis: from a target Gaussian map and hardware
//! couplings to per-qubit tone frequencies, amplitudes, phases and effective
//! couplings.
//!
//! Tone m = l (1-based l ≤ N) is the red sideband of mode l at
//! Ω_jl = ε_j - ω_l; tone m = N + l is the blue sideband at ε_j + ω_l.
//! All frequencies are in units of 2π×MHz.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::gaussian::GaussianMap;
use crate::linalg::{CMat, RMat, RVec};
use crate::scalar::{cabs, carg, polar, real, to_f64, Scalar};

/// Amplitude above which the Bessel linearization J₁(2η) ≈ η degrades past
/// one percent; plans report tones above this as saturation warnings.
pub const ETA_WARN: f64 = 0.3;

/// Circuit parameters: mode frequencies ω_j, qubit frequencies ε_j, coupling
/// matrix g_jl, qubit decay rates γ_j and mode decay κ (all 2π×MHz).
#[derive(Debug, Clone, PartialEq)]
pub struct HardwareSpec<T: Scalar> {
    pub omega: RVec<T>,
    pub epsilon: RVec<T>,
    pub g: RMat<T>,
    pub gamma: RVec<T>,
    pub kappa: T,
}

/// Outcome of [`HardwareSpec::validate`].
#[derive(Debug, Clone)]
pub struct HardwareReport<T: Scalar> {
    /// Pairs of coinciding frequencies, as ("omega[0]", "epsilon[2]") labels.
    pub degenerate_pairs: Vec<(String, String)>,
    /// Smallest |ε_j ± ω_l| / |g_jl| over couplings with g_jl ≠ 0.
    pub min_dispersive_ratio: T,
    /// Entries (j, l) whose dispersive ratio is below the threshold.
    pub dispersive_violations: Vec<(usize, usize)>,
    pub pass: bool,
}

impl<T: Scalar> HardwareSpec<T> {
    /// Basic shape and sign checks; frequency layout is checked separately by
    /// [`Self::validate`] so that deliberately degenerate layouts can still be
    /// probed by the resonance census.
    pub fn new(omega: RVec<T>, epsilon: RVec<T>, g: RMat<T>, gamma: RVec<T>, kappa: T) -> Result<Self> {
        let n = omega.len();
        if n == 0 {
            return Err(Error::invalid("hardware.omega: at least one mode required"));
        }
        if epsilon.len() != n {
            return Err(Error::invalid(format!(
                "hardware.epsilon: expected {n} entries, got {}",
                epsilon.len()
            )));
        }
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::invalid(format!(
                "hardware.g: expected {n}x{n} matrix, got {}x{}",
                g.nrows(),
                g.ncols()
            )));
        }
        if gamma.len() != n {
            return Err(Error::invalid(format!(
                "hardware.gamma: expected {n} entries, got {}",
                gamma.len()
            )));
        }
        if gamma.iter().any(|&x| x < T::zero()) {
            return Err(Error::invalid("hardware.gamma: decay rates must be nonnegative"));
        }
        if kappa < T::zero() {
            return Err(Error::invalid("hardware.kappa: decay rate must be nonnegative"));
        }
        if omega.iter().any(|&x| x <= T::zero()) || epsilon.iter().any(|&x| x <= T::zero()) {
            return Err(Error::invalid(
                "hardware.omega/epsilon: frequencies must be positive",
            ));
        }
        Ok(HardwareSpec {
            omega,
            epsilon,
            g,
            gamma,
            kappa,
        })
    }

    /// Homogeneous couplings g_jl = g.
    pub fn homogeneous(omega: RVec<T>, epsilon: RVec<T>, g: T, gamma: RVec<T>, kappa: T) -> Result<Self> {
        let n = omega.len();
        Self::new(omega, epsilon, RMat::from_element(n, n, g), gamma, kappa)
    }

    pub fn n_modes(&self) -> usize {
        self.omega.len()
    }

    /// Is the coupling matrix a single constant?
    pub fn homogeneous_coupling(&self) -> Option<T> {
        let g0 = self.g[(0, 0)];
        if self.g.iter().all(|&x| x == g0) {
            Some(g0)
        } else {
            None
        }
    }

    /// Frequency-layout checks: pairwise distinctness of all ω's and ε's, and
    /// the dispersive condition |ε_j ± ω_l| ≥ threshold·|g_jl|.
    pub fn validate(&self, dispersive_threshold: T) -> HardwareReport<T> {
        let n = self.n_modes();
        let mut labeled: Vec<(String, T)> = Vec::with_capacity(2 * n);
        for j in 0..n {
            labeled.push((format!("omega[{j}]"), self.omega[j]));
        }
        for j in 0..n {
            labeled.push((format!("epsilon[{j}]"), self.epsilon[j]));
        }
        let scale = labeled
            .iter()
            .fold(T::zero(), |acc, (_, x)| acc.max(x.abs()));
        let tol = real::<T>(1e-12) * scale;
        let mut degenerate_pairs = Vec::new();
        for i in 0..labeled.len() {
            for k in i + 1..labeled.len() {
                if (labeled[i].1 - labeled[k].1).abs() <= tol {
                    degenerate_pairs.push((labeled[i].0.clone(), labeled[k].0.clone()));
                }
            }
        }
        let mut min_ratio = T::from_f64(f64::INFINITY).unwrap();
        let mut dispersive_violations = Vec::new();
        for j in 0..n {
            for l in 0..n {
                let g = self.g[(j, l)].abs();
                if g == T::zero() {
                    continue;
                }
                let detuning = (self.epsilon[j] - self.omega[l])
                    .abs()
                    .min((self.epsilon[j] + self.omega[l]).abs());
                let ratio = detuning / g;
                if ratio < min_ratio {
                    min_ratio = ratio;
                }
                if ratio < dispersive_threshold {
                    dispersive_violations.push((j, l));
                }
            }
        }
        HardwareReport {
            pass: degenerate_pairs.is_empty() && dispersive_violations.is_empty(),
            degenerate_pairs,
            min_dispersive_ratio: min_ratio,
            dispersive_violations,
        }
    }
}

/// Default dispersive-ratio threshold.
pub fn default_dispersive_threshold<T: Scalar>() -> T {
    real::<T>(10.0)
}

/// Which effective interaction the tones realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveMode {
    /// Jaynes-Cummings ḡ_j Â_j σ_j† + h.c.: red tones carry A, blue tones B.
    Cooling,
    /// Anti-Jaynes-Cummings ḡ_j Â_j† σ_j† + h.c.: red tones carry B*, blue A*.
    Lasing,
}

/// Per-qubit multi-tone drive: frequencies Ω_jm, amplitudes η_jm ≥ 0, phases
/// φ_jm ∈ [0, 2π), and the effective couplings ḡ_j they produce.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationPlan<T: Scalar> {
    pub n_modes: usize,
    /// N×2N tone frequencies; column l is ε_j - ω_l, column N+l is ε_j + ω_l.
    pub omega: RMat<T>,
    /// N×2N normalized amplitudes.
    pub eta: RMat<T>,
    /// N×2N phases in [0, 2π); zero-amplitude tones carry phase 0.
    pub phi: RMat<T>,
    /// Effective couplings ḡ_j (real nonnegative by convention).
    pub gbar: RVec<T>,
    pub mode: DriveMode,
    /// Tones with η above [`ETA_WARN`] (Bessel linearization degraded).
    pub saturation_warnings: Vec<(usize, usize)>,
}

impl<T: Scalar> ModulationPlan<T> {
    pub fn eta_max(&self) -> T {
        self.eta.iter().fold(T::zero(), |acc, &x| acc.max(x))
    }

    /// Complex tone coefficient η_jm e^{-iφ_jm}.
    pub fn coefficient(&self, j: usize, m: usize) -> Complex<T> {
        polar(self.eta[(j, m)], -self.phi[(j, m)])
    }

    /// Reconstruct the matrix pair the plan encodes, by inverting the tone
    /// correspondence: row j of (A, B) is (g_jl η_jl e^{-iφ_jl} / ḡ_j, ...).
    ///
    /// In cooling mode this reproduces the synthesis target; in lasing mode it
    /// reproduces (B*, A*).
    pub fn reconstruct_target(&self, hw: &HardwareSpec<T>) -> Result<(CMat<T>, CMat<T>)> {
        let n = self.n_modes;
        let mut red = CMat::zeros(n, n);
        let mut blue = CMat::zeros(n, n);
        for j in 0..n {
            if self.gbar[j] == T::zero() {
                return Err(Error::invalid(format!(
                    "cannot reconstruct target: gbar[{j}] = 0"
                )));
            }
            let inv = Complex::new(T::one() / self.gbar[j], T::zero());
            for l in 0..n {
                let g = Complex::new(hw.g[(j, l)], T::zero());
                red[(j, l)] = self.coefficient(j, l) * g * inv;
                blue[(j, l)] = self.coefficient(j, n + l) * g * inv;
            }
        }
        Ok((red, blue))
    }
}

/// Tone frequency matrix of the hardware: Ω_jl = ε_j - ω_l, Ω_{j,N+l} = ε_j + ω_l.
pub fn modulation_frequencies<T: Scalar>(hw: &HardwareSpec<T>) -> RMat<T> {
    let n = hw.n_modes();
    let mut om = RMat::zeros(n, 2 * n);
    for j in 0..n {
        for l in 0..n {
            om[(j, l)] = hw.epsilon[j] - hw.omega[l];
            om[(j, n + l)] = hw.epsilon[j] + hw.omega[l];
        }
    }
    om
}

/// Pivot column per qubit: argmax_l |A_jl| (first maximum on ties).
pub fn pivot_columns<T: Scalar>(target: &GaussianMap<T>) -> Vec<usize> {
    let n = target.n_modes();
    (0..n)
        .map(|j| {
            let mut best = 0usize;
            let mut best_val = T::zero();
            for l in 0..n {
                let v = cabs(target.a()[(j, l)]);
                if v > best_val {
                    best_val = v;
                    best = l;
                }
            }
            best
        })
        .collect()
}

/// Shared synthesis core: match the rows of (`red_target`, `blue_target`)
/// through per-entry couplings, attaching the reference amplitude
/// `eta_pivot[j]` to the pivot column of `red_target`.
///
/// The correspondence solved, with ḡ_j real positive, is
/// ḡ_j red_jl = red_coupling_jl η_jl e^{-iφ_jl} and
/// ḡ_j blue_jl = blue_coupling_jl η_{j,N+l} e^{-iφ_{j,N+l}}.
pub(crate) fn synthesize_with_couplings<T: Scalar>(
    red_target: &CMat<T>,
    blue_target: &CMat<T>,
    red_coupling: &CMat<T>,
    blue_coupling: &CMat<T>,
    eta_pivot: &RVec<T>,
    tone_frequencies: RMat<T>,
    mode: DriveMode,
) -> Result<ModulationPlan<T>> {
    let n = red_target.nrows();
    if eta_pivot.len() != n {
        return Err(Error::invalid(format!(
            "eta_pivot: expected {n} entries, got {}",
            eta_pivot.len()
        )));
    }
    if eta_pivot
        .iter()
        .any(|&x| x <= T::zero() || x > real::<T>(0.3))
    {
        return Err(Error::invalid(
            "eta_pivot entries must lie in (0, 0.3]".to_string(),
        ));
    }
    let mut eta = RMat::zeros(n, 2 * n);
    let mut phi = RMat::zeros(n, 2 * n);
    let mut gbar = RVec::zeros(n);
    let mut warnings = Vec::new();
    let two_pi = T::two_pi();

    for j in 0..n {
        // pivot on the red-target row; rows that vanish there (lasing onto a
        // passive target) fall back to the blue side
        let mut pivot = 0usize;
        let mut pivot_mag = T::zero();
        let mut pivot_coupling = T::zero();
        for l in 0..n {
            let v = cabs(red_target[(j, l)]);
            if v > pivot_mag {
                pivot_mag = v;
                pivot = l;
                pivot_coupling = cabs(red_coupling[(j, l)]);
            }
        }
        if pivot_mag == T::zero() {
            for l in 0..n {
                let v = cabs(blue_target[(j, l)]);
                if v > pivot_mag {
                    pivot_mag = v;
                    pivot = l;
                    pivot_coupling = cabs(blue_coupling[(j, l)]);
                }
            }
        }
        if pivot_mag == T::zero() {
            return Err(Error::SynthesisInfeasible {
                qubit: j,
                mode: 0,
                why: "target row has no nonzero entry to pivot on".to_string(),
            });
        }
        if pivot_coupling == T::zero() {
            return Err(Error::SynthesisInfeasible {
                qubit: j,
                mode: pivot,
                why: "pivot column has zero coupling".to_string(),
            });
        }
        gbar[j] = eta_pivot[j] * pivot_coupling / pivot_mag;

        for l in 0..n {
            for (tone, target, coupling) in [
                (l, red_target[(j, l)], red_coupling[(j, l)]),
                (n + l, blue_target[(j, l)], blue_coupling[(j, l)]),
            ] {
                let t_mag = cabs(target);
                if t_mag == T::zero() {
                    continue; // eta and phi stay 0
                }
                let g_mag = cabs(coupling);
                if g_mag == T::zero() {
                    return Err(Error::SynthesisInfeasible {
                        qubit: j,
                        mode: l,
                        why: format!(
                            "target entry requires tone {tone} but the coupling vanishes"
                        ),
                    });
                }
                let amp = gbar[j] * t_mag / g_mag;
                if amp >= T::one() {
                    return Err(Error::AmplitudeOverflow {
                        qubit: j,
                        tone,
                        eta: to_f64(amp),
                    });
                }
                if amp > real::<T>(ETA_WARN) {
                    warnings.push((j, tone));
                }
                eta[(j, tone)] = amp;
                // e^{-iφ} = target / (|target| e^{i arg coupling}) with real ḡ > 0
                let mut phase = -carg(target / coupling);
                if phase < T::zero() {
                    phase += two_pi;
                }
                if phase >= two_pi {
                    phase -= two_pi;
                }
                phi[(j, tone)] = phase;
            }
        }
    }

    Ok(ModulationPlan {
        n_modes: n,
        omega: tone_frequencies,
        eta,
        phi,
        gbar,
        mode,
        saturation_warnings: warnings,
    })
}

/// Synthesize a modulation plan for `target` on all-to-all hardware.
///
/// In cooling mode the plan satisfies ḡ_j A_jl = g_jl η_jl e^{-iφ_jl} and
/// ḡ_j B_jl = g_jl η_{j,N+l} e^{-iφ_{j,N+l}}; in lasing mode the roles of the
/// two blocks are swapped and conjugated: red tones carry B*, blue tones A*.
pub fn synthesize_plan<T: Scalar>(
    target: &GaussianMap<T>,
    hw: &HardwareSpec<T>,
    eta_pivot: &RVec<T>,
    mode: DriveMode,
) -> Result<ModulationPlan<T>> {
    let n = target.n_modes();
    if hw.n_modes() != n {
        return Err(Error::invalid(format!(
            "hardware has {} modes but target has {n}",
            hw.n_modes()
        )));
    }
    let g_c = hw.g.map(|x| Complex::new(x, T::zero()));
    let freqs = modulation_frequencies(hw);
    match mode {
        DriveMode::Cooling => synthesize_with_couplings(
            target.a(),
            target.b(),
            &g_c,
            &g_c,
            eta_pivot,
            freqs,
            mode,
        ),
        DriveMode::Lasing => {
            let b_conj = target.b().map(|z| z.conj());
            let a_conj = target.a().map(|z| z.conj());
            synthesize_with_couplings(&b_conj, &a_conj, &g_c, &g_c, eta_pivot, freqs, mode)
        }
    }
}

/// Closed-form GHZ modulation plan for homogeneous couplings.
///
/// Amplitude table (relative to η_j1 = `eta1`):
///   η_jl / η_j1 = 1 (l=1), 0 (l>j+1),
///                 √(N(N-l+1)/(N-l+2))·cosh r₂/cosh r₁ (l=j+1),
///                 √(N/((N-l+2)(N-l+1)))·cosh r₂/cosh r₁ (1<l<j+1);
///   η_{j,N+l} = η_jl · tanh r₁ (l=1) or tanh r₂ (l>1).
/// Effective couplings ḡ_j = √N η_j1 g / cosh r₁, independent of r₂.
///
/// Phases follow the tone correspondence against the GHZ map of
/// [`crate::builders::ghz_map`] with ḡ_j real positive (red-sideband table
/// complementary to blue): φ_jl = 0 for l = 1 or l > j and π otherwise;
/// φ_{j,N+l} = π exactly at l = j+1.
pub fn ghz_plan_closed_form<T: Scalar>(
    spec: &crate::builders::GhzSpec<T>,
    hw: &HardwareSpec<T>,
    eta1: T,
) -> Result<ModulationPlan<T>> {
    let n = spec.n_modes;
    if hw.n_modes() != n {
        return Err(Error::invalid(format!(
            "hardware has {} modes but GHZ target has {n}",
            hw.n_modes()
        )));
    }
    let g = hw.homogeneous_coupling().ok_or_else(|| {
        Error::invalid("closed-form GHZ plan requires homogeneous couplings")
    })?;
    if g <= T::zero() {
        return Err(Error::invalid("closed-form GHZ plan requires positive coupling"));
    }
    if eta1 <= T::zero() || eta1 > real::<T>(0.3) {
        return Err(Error::invalid("eta1 must lie in (0, 0.3]"));
    }
    let (cosh1, cosh2) = (spec.r1.cosh(), spec.r2.cosh());
    let (tanh1, tanh2) = (spec.r1.tanh(), spec.r2.tanh());
    let pi = T::pi();
    let nf = real::<T>(n as f64);

    let mut eta = RMat::zeros(n, 2 * n);
    let mut phi = RMat::zeros(n, 2 * n);
    let mut warnings = Vec::new();
    for j in 1..=n {
        for l in 1..=n {
            let ratio = if l == 1 {
                T::one()
            } else if l > j + 1 {
                T::zero()
            } else {
                let rem = real::<T>((n - l + 1) as f64);
                let rem2 = real::<T>((n - l + 2) as f64);
                let root = if l == j + 1 {
                    (nf * rem / rem2).sqrt()
                } else {
                    (nf / (rem2 * rem)).sqrt()
                };
                root * cosh2 / cosh1
            };
            let red = eta1 * ratio;
            let blue = red * if l == 1 { tanh1 } else { tanh2 };
            eta[(j - 1, l - 1)] = red;
            eta[(j - 1, n + l - 1)] = blue;
            if red > T::zero() {
                phi[(j - 1, l - 1)] = if l == 1 || l > j { T::zero() } else { pi };
            }
            if blue > T::zero() {
                phi[(j - 1, n + l - 1)] = if l == j + 1 { pi } else { T::zero() };
            }
            for (tone, amp) in [(l - 1, red), (n + l - 1, blue)] {
                if amp >= T::one() {
                    return Err(Error::AmplitudeOverflow {
                        qubit: j - 1,
                        tone,
                        eta: to_f64(amp),
                    });
                }
                if amp > real::<T>(ETA_WARN) {
                    warnings.push((j - 1, tone));
                }
            }
        }
    }
    let gbar = RVec::from_element(n, nf.sqrt() * eta1 * g / cosh1);
    Ok(ModulationPlan {
        n_modes: n,
        omega: modulation_frequencies(hw),
        eta,
        phi,
        gbar,
        mode: DriveMode::Cooling,
        saturation_warnings: warnings,
    })
}

/// Cooling rates |ḡ_j|²/γ_j and cooperativities |ḡ_j|²/(γ_j κ) of a plan.
#[derive(Debug, Clone)]
pub struct CoolingReport<T: Scalar> {
    /// Per-mode cooling rates, 2π×MHz.
    pub rates: RVec<T>,
    /// Per-mode cooperativities (infinite when κ = 0).
    pub cooperativities: RVec<T>,
    /// Qubits whose cooperativity is below the threshold.
    pub flagged: Vec<usize>,
}

/// Evaluate cooling rates and cooperativities; flags entries with
/// cooperativity below `threshold` (κ = 0 counts as infinite, never flagged).
pub fn cooling_rates<T: Scalar>(
    plan: &ModulationPlan<T>,
    hw: &HardwareSpec<T>,
    threshold: T,
) -> Result<CoolingReport<T>> {
    let n = plan.n_modes;
    if hw.n_modes() != n {
        return Err(Error::invalid("plan and hardware dimensions differ"));
    }
    if hw.gamma.iter().any(|&x| x <= T::zero()) {
        return Err(Error::invalid(
            "hardware.gamma: cooling rates need strictly positive qubit decay",
        ));
    }
    let mut rates = RVec::zeros(n);
    let mut coop = RVec::zeros(n);
    let mut flagged = Vec::new();
    for j in 0..n {
        rates[j] = plan.gbar[j] * plan.gbar[j] / hw.gamma[j];
        if hw.kappa == T::zero() {
            coop[j] = T::from_f64(f64::INFINITY).unwrap();
        } else {
            coop[j] = rates[j] / hw.kappa;
            if coop[j] < threshold {
                flagged.push(j);
            }
        }
    }
    Ok(CoolingReport {
        rates,
        cooperativities: coop,
        flagged,
    })
}
