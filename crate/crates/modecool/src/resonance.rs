//! Multi-tone resonance census and |n|=3 coupling corrections.
//!
//! Each interaction-picture coupling α_jl(t), β_jl(t) is a sum over Bessel
//! index vectors n of terms oscillating at ν_{jl;n}^(χ) and weighted by
//! Π_m J_{n_m}(2η_jm). The census enumerates every exactly-resonant and
//! near-resonant index vector up to a given η-order |n| = Σ|n_m|; the
//! correction routines evaluate the unavoidable |n|=3 resonances and the
//! Gaussian target they deform the protocol into.

use nalgebra::Complex;

use crate::bessel::bessel_j;
use crate::builders::{ghz_covariance, GhzSpec};
use crate::error::{Error, Result};
use crate::gaussian::{
    covariance_with_residual, fidelity_pure_with_tol, GaussianMap, ThermalSpec, ValidationReport,
};
use crate::linalg::{CMat, RMat, RVec};
use crate::scalar::{cabs, polar, real, to_f64, Scalar};
use crate::synthesis::{modulation_frequencies, HardwareSpec, ModulationPlan};

/// Coupling channel of a term: α multiplies a_l, β multiplies a_l†.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Channel {
    Alpha,
    Beta,
}

impl Channel {
    pub fn label(self) -> &'static str {
        match self {
            Channel::Alpha => "alpha",
            Channel::Beta => "beta",
        }
    }
}

/// Bessel index vector of a term in the multi-tone expansion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BesselIndexVector {
    pub n: Vec<i32>,
}

impl BesselIndexVector {
    pub fn new(n: Vec<i32>) -> Self {
        BesselIndexVector { n }
    }

    /// η-order |n| = Σ_m |n_m|.
    pub fn order(&self) -> usize {
        self.n.iter().map(|&x| x.unsigned_abs() as usize).sum()
    }

    /// Designed resonances carry a single -1 entry.
    pub fn is_designed(&self) -> bool {
        self.order() == 1 && self.n.iter().any(|&x| x == -1)
    }
}

/// One (near-)resonant term of the census.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceEntry<T: Scalar> {
    pub qubit: usize,
    pub mode: usize,
    pub channel: Channel,
    pub indices: BesselIndexVector,
    /// Oscillation frequency ν of the term (2π×MHz).
    pub nu: T,
    /// |Π_m J_{n_m}(2η_jm)| at the supplied amplitudes.
    pub weight: T,
    /// |ν| within the structural-zero tolerance.
    pub exact: bool,
    /// |ν| < margin × weight × max|g|: the rotating-wave approximation is at risk.
    pub dangerous: bool,
}

/// Census of (near-)resonances, canonically ordered by
/// (qubit, mode, channel, lexicographic indices).
#[derive(Debug, Clone)]
pub struct ResonanceReport<T: Scalar> {
    pub entries: Vec<ResonanceEntry<T>>,
    pub max_order: usize,
    /// Absolute tolerance below which |ν| counts as an exact resonance.
    pub exact_tolerance: T,
}

impl<T: Scalar> ResonanceReport<T> {
    pub fn count_exact_at_order(&self, order: usize) -> usize {
        self.entries
            .iter()
            .filter(|e| e.exact && e.indices.order() == order)
            .count()
    }

    pub fn entries_for(
        &self,
        qubit: usize,
        mode: usize,
        channel: Channel,
    ) -> impl Iterator<Item = &ResonanceEntry<T>> {
        self.entries
            .iter()
            .filter(move |e| e.qubit == qubit && e.mode == mode && e.channel == channel)
    }
}

/// Search controls for [`enumerate_resonances`].
#[derive(Debug, Clone, Copy)]
pub struct ResonanceSearch<T: Scalar> {
    /// Enumerate all n with |n| ≤ max_order (practical ceiling 5).
    pub max_order: usize,
    /// Absolute |ν| below which a term is included as a near-resonance.
    pub near_threshold: T,
    /// Rotating-wave margin for the dangerous flag.
    pub dispersive_margin: T,
    /// Override the complexity refusal for large searches.
    pub force: bool,
}

impl<T: Scalar> ResonanceSearch<T> {
    pub fn new(max_order: usize, near_threshold: T) -> Self {
        ResonanceSearch {
            max_order,
            near_threshold,
            dispersive_margin: real::<T>(10.0),
            force: false,
        }
    }

    pub fn with_force(mut self, force: bool) -> Self {
        self.force = force;
        self
    }
}

/// Oscillation frequency of the term (j, l, χ, n):
/// ν^α = ω_l - ε_j - Σ_m n_m Ω_jm, ν^β = ω_l + ε_j + Σ_m n_m Ω_jm.
pub fn term_frequency<T: Scalar>(
    qubit: usize,
    mode: usize,
    channel: Channel,
    indices: &BesselIndexVector,
    hw: &HardwareSpec<T>,
) -> Result<T> {
    let n = hw.n_modes();
    if qubit >= n || mode >= n {
        return Err(Error::invalid("term_frequency: index out of range"));
    }
    if indices.n.len() != 2 * n {
        return Err(Error::invalid(format!(
            "term_frequency: index vector must have {} entries",
            2 * n
        )));
    }
    let freqs = modulation_frequencies(hw);
    let mut tone_sum = T::zero();
    for m in 0..2 * n {
        tone_sum += real::<T>(f64::from(indices.n[m])) * freqs[(qubit, m)];
    }
    Ok(match channel {
        Channel::Alpha => hw.omega[mode] - hw.epsilon[qubit] - tone_sum,
        Channel::Beta => hw.omega[mode] + hw.epsilon[qubit] + tone_sum,
    })
}

/// Uniform N×2N amplitude matrix, for censuses taken before a plan exists.
pub fn uniform_amplitudes<T: Scalar>(n_modes: usize, eta: T) -> RMat<T> {
    RMat::from_element(n_modes, 2 * n_modes, eta)
}

/// Enumerate every index vector with |n| ≤ `search.max_order` whose term is
/// exactly resonant (|ν| ≤ 1e-9 × max frequency) or near-resonant
/// (|ν| ≤ `search.near_threshold`), for every (qubit, mode, channel).
///
/// `eta` supplies the amplitudes entering the Bessel weights (take
/// [`uniform_amplitudes`] when no plan is available). Output ordering is
/// canonical and independent of evaluation order.
pub fn enumerate_resonances<T: Scalar>(
    hw: &HardwareSpec<T>,
    eta: &RMat<T>,
    search: &ResonanceSearch<T>,
) -> Result<ResonanceReport<T>> {
    let n = hw.n_modes();
    if search.max_order < 1 {
        return Err(Error::invalid("max_order must be at least 1"));
    }
    if search.max_order > 5 && n > 10 && !search.force {
        return Err(Error::ComplexityRefusal {
            max_order: search.max_order,
            n_modes: n,
        });
    }
    if eta.nrows() != n || eta.ncols() != 2 * n {
        return Err(Error::invalid(format!(
            "amplitude matrix must be {}x{}",
            n,
            2 * n
        )));
    }
    let freqs = modulation_frequencies(hw);
    let f_max = hw
        .epsilon
        .iter()
        .chain(hw.omega.iter())
        .fold(T::zero(), |acc, &x| acc.max(x.abs()));
    let exact_tol = real::<T>(1e-9) * f_max;
    let g_max = hw.g.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()));

    // Π_m J₀(2η_jm) per qubit; weights divide one J₀ back out per excited tone.
    let two = real::<T>(2.0);
    let j0: Vec<Vec<T>> = (0..n)
        .map(|j| (0..2 * n).map(|m| bessel_j(0, two * eta[(j, m)])).collect())
        .collect();
    let j0_prod: Vec<T> = j0
        .iter()
        .map(|row| row.iter().fold(T::one(), |acc, &x| acc * x))
        .collect();

    let mut entries = Vec::new();
    let mut current = vec![0i32; 2 * n];
    let mut stack_visit = |entries: &mut Vec<ResonanceEntry<T>>, current: &[i32]| {
        for j in 0..n {
            let mut tone_sum = T::zero();
            for (m, &nm) in current.iter().enumerate() {
                if nm != 0 {
                    tone_sum += real::<T>(f64::from(nm)) * freqs[(j, m)];
                }
            }
            for l in 0..n {
                for channel in [Channel::Alpha, Channel::Beta] {
                    let nu = match channel {
                        Channel::Alpha => hw.omega[l] - hw.epsilon[j] - tone_sum,
                        Channel::Beta => hw.omega[l] + hw.epsilon[j] + tone_sum,
                    };
                    let exact = nu.abs() <= exact_tol;
                    if !exact && nu.abs() > search.near_threshold {
                        continue;
                    }
                    let mut weight = j0_prod[j];
                    for (m, &nm) in current.iter().enumerate() {
                        if nm != 0 {
                            weight = weight / j0[j][m] * bessel_j(nm, two * eta[(j, m)]);
                        }
                    }
                    let weight = weight.abs();
                    entries.push(ResonanceEntry {
                        qubit: j,
                        mode: l,
                        channel,
                        indices: BesselIndexVector::new(current.to_vec()),
                        nu,
                        weight,
                        exact,
                        dangerous: nu.abs() < search.dispersive_margin * weight * g_max,
                    });
                }
            }
        }
    };

    // depth-first over signed index vectors with |n| bounded
    fn recurse<T: Scalar, F: FnMut(&mut Vec<ResonanceEntry<T>>, &[i32])>(
        coord: usize,
        budget: usize,
        current: &mut Vec<i32>,
        entries: &mut Vec<ResonanceEntry<T>>,
        visit: &mut F,
    ) {
        if coord == current.len() {
            visit(entries, current);
            return;
        }
        let b = budget as i32;
        for v in -b..=b {
            current[coord] = v;
            recurse(
                coord + 1,
                budget - v.unsigned_abs() as usize,
                current,
                entries,
                visit,
            );
        }
        current[coord] = 0;
    }
    recurse(
        0,
        search.max_order,
        &mut current,
        &mut entries,
        &mut stack_visit,
    );

    entries.sort_by(|a, b| {
        (a.qubit, a.mode, a.channel, &a.indices.n).cmp(&(b.qubit, b.mode, b.channel, &b.indices.n))
    });
    Ok(ResonanceReport {
        entries,
        max_order: search.max_order,
        exact_tolerance: exact_tol,
    })
}

/// |n|=3-corrected couplings (α_jl, β_jl):
/// α_jl = -η_jl e^{-iφ_jl}
///        + Σ_{k≠l} η_{j,N+l} η_jk η_{j,N+k} e^{i(φ_{j,N+l} - φ_jk - φ_{j,N+k})},
/// β_jl = -η_{j,N+l} e^{-iφ_{j,N+l}}
///        + Σ_{k≠l} η_jl η_jk η_{j,N+k} e^{i(φ_jl - φ_jk - φ_{j,N+k})}.
pub fn corrected_couplings<T: Scalar>(plan: &ModulationPlan<T>) -> (CMat<T>, CMat<T>) {
    let n = plan.n_modes;
    let mut alpha = CMat::zeros(n, n);
    let mut beta = CMat::zeros(n, n);
    for j in 0..n {
        for l in 0..n {
            let mut a = -polar(plan.eta[(j, l)], -plan.phi[(j, l)]);
            let mut b = -polar(plan.eta[(j, n + l)], -plan.phi[(j, n + l)]);
            for k in 0..n {
                if k == l {
                    continue;
                }
                let pair = plan.eta[(j, k)] * plan.eta[(j, n + k)];
                let pair_phase = -plan.phi[(j, k)] - plan.phi[(j, n + k)];
                a += polar(
                    plan.eta[(j, n + l)] * pair,
                    plan.phi[(j, n + l)] + pair_phase,
                );
                b += polar(plan.eta[(j, l)] * pair, plan.phi[(j, l)] + pair_phase);
            }
            alpha[(j, l)] = a;
            beta[(j, l)] = b;
        }
    }
    (alpha, beta)
}

/// Largest relative deviation of the corrected α from its first-order value,
/// max over entries with η_jl ≠ 0 of |α_jl + η_jl e^{-iφ_jl}| / η_jl.
pub fn relative_coupling_error<T: Scalar>(plan: &ModulationPlan<T>) -> T {
    let (alpha, _) = corrected_couplings(plan);
    let n = plan.n_modes;
    let mut worst = T::zero();
    for j in 0..n {
        for l in 0..n {
            let eta = plan.eta[(j, l)];
            if eta == T::zero() {
                continue;
            }
            let first_order = polar(eta, -plan.phi[(j, l)]);
            let dev = cabs(alpha[(j, l)] + first_order) / eta;
            worst = worst.max(dev);
        }
    }
    worst
}

/// The Gaussian target actually engineered once the |n|=3 terms are kept.
#[derive(Debug, Clone)]
pub struct CorrectedMap<T: Scalar> {
    /// Effective couplings g̃_j (2π×MHz).
    pub gtilde: RVec<T>,
    /// Corrected matrix pair; a Bogoliubov transformation only up to the
    /// correction residual reported in `validation`.
    pub map: GaussianMap<T>,
    /// Constraint residuals of the corrected pair at the map's default
    /// tolerance. The residual is not repaired; it grows as O(η²) with the
    /// modulation depth.
    pub validation: ValidationReport<T>,
}

/// Build the corrected Gaussian target from a plan:
/// g̃_j = √(Σ_k g_jk² (|α_jk|² - |β_jk|²)), Ã_jl = -g_jl α_jl / g̃_j,
/// B̃_jl = -g_jl β_jl / g̃_j (per-entry couplings generalize the printed
/// homogeneous form and reduce to it when g_jl = g).
pub fn corrected_map<T: Scalar>(
    plan: &ModulationPlan<T>,
    hw: &HardwareSpec<T>,
) -> Result<CorrectedMap<T>> {
    let n = plan.n_modes;
    if hw.n_modes() != n {
        return Err(Error::invalid("plan and hardware dimensions differ"));
    }
    let (alpha, beta) = corrected_couplings(plan);
    let mut gtilde = RVec::zeros(n);
    let mut a = CMat::zeros(n, n);
    let mut b = CMat::zeros(n, n);
    for j in 0..n {
        let mut norm2 = T::zero();
        for k in 0..n {
            let g2 = hw.g[(j, k)] * hw.g[(j, k)];
            norm2 += g2 * (alpha[(j, k)].norm_sqr() - beta[(j, k)].norm_sqr());
        }
        if norm2 <= T::zero() {
            return Err(Error::CorrectionBreakdown {
                qubit: j,
                normalizer: to_f64(norm2),
            });
        }
        gtilde[j] = norm2.sqrt();
        let inv = Complex::new(T::one() / gtilde[j], T::zero());
        for l in 0..n {
            let g = Complex::new(hw.g[(j, l)], T::zero());
            a[(j, l)] = -(g * alpha[(j, l)]) * inv;
            b[(j, l)] = -(g * beta[(j, l)]) * inv;
        }
    }
    let map = GaussianMap::from_blocks(a, b)?;
    let validation = map.validate(map.default_tolerance());
    Ok(CorrectedMap {
        gtilde,
        map,
        validation,
    })
}

/// Everything the GHZ |n|=3 audit produces for one operating point.
#[derive(Debug, Clone)]
pub struct AuditPoint<T: Scalar> {
    /// Overlap between the ideal GHZ state and the corrected one.
    pub fidelity: T,
    /// Largest tone amplitude of the plan.
    pub eta_max: T,
    /// First-order effective coupling (uniform over qubits for GHZ).
    pub gbar: T,
    /// max_j |g̃_j/ḡ_j - 1|.
    pub gtilde_deviation: T,
    /// Imaginary residue discarded when projecting the corrected covariance.
    pub covariance_residual: T,
    /// Constraint residuals of the corrected map.
    pub map_validation: Option<ValidationReport<T>>,
}

/// Purity slack allowed for corrected covariances inside the audit, per
/// matrix dimension (the correction residual makes |ln det Ṽ| ~ O(η²)).
fn audit_purity_tolerance<T: Scalar>() -> T {
    real::<T>(1e-3)
}

/// Fidelity penalty of neglecting nothing: the full audit pipeline
/// closed-form plan → |n|=3-corrected map → covariance → overlap with the
/// ideal GHZ covariance.
///
/// `eta1` = 0 produces no correction at all and returns fidelity exactly 1.
pub fn audit_point<T: Scalar>(
    spec: &GhzSpec<T>,
    hw: &HardwareSpec<T>,
    eta1: T,
) -> Result<AuditPoint<T>> {
    if eta1 == T::zero() {
        return Ok(AuditPoint {
            fidelity: T::one(),
            eta_max: T::zero(),
            gbar: T::zero(),
            gtilde_deviation: T::zero(),
            covariance_residual: T::zero(),
            map_validation: None,
        });
    }
    let plan = crate::synthesis::ghz_plan_closed_form(spec, hw, eta1)?;
    let corrected = corrected_map(&plan, hw)?;
    let (v_corrected, covariance_residual) =
        covariance_with_residual(&corrected.map, &ThermalSpec::vacuum(spec.n_modes))?;
    let v_ideal = ghz_covariance(spec)?;
    let fidelity =
        fidelity_pure_with_tol(&v_ideal, &v_corrected, audit_purity_tolerance::<T>())?;
    let gbar = plan.gbar[0];
    let mut gtilde_deviation = T::zero();
    for j in 0..spec.n_modes {
        gtilde_deviation = gtilde_deviation.max((corrected.gtilde[j] / plan.gbar[j] - T::one()).abs());
    }
    Ok(AuditPoint {
        fidelity,
        eta_max: plan.eta_max(),
        gbar,
        gtilde_deviation,
        covariance_residual,
        map_validation: Some(corrected.validation),
    })
}

/// Fidelity of [`audit_point`] alone.
pub fn audit_fidelity<T: Scalar>(spec: &GhzSpec<T>, hw: &HardwareSpec<T>, eta1: T) -> Result<T> {
    Ok(audit_point(spec, hw, eta1)?.fidelity)
}
