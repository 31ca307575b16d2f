//! Local-coupling chains mapped to the all-to-all normal-mode picture:
//! open (sine transform) and closed (Fourier) homogeneous chains, target
//! transformation into the normal-mode basis, chain modulation synthesis,
//! and frequency-layout feasibility planning.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::gaussian::GaussianMap;
use crate::linalg::{CMat, RMat, RVec};
use crate::scalar::{polar, real, Scalar};
use crate::synthesis::{synthesize_with_couplings, DriveMode, ModulationPlan};

/// Chain boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Open,
    Closed,
}

/// Homogeneous nearest-neighbor chain of N modes, each coupled to its own qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpec<T: Scalar> {
    pub topology: Topology,
    pub n_modes: usize,
    /// Uniform on-site frequency ω (2π×MHz).
    pub omega: T,
    /// Hopping J (2π×MHz).
    pub hopping: T,
    /// Gauge phase φ of the complex hopping (closed chains only; ignored open).
    pub phase: T,
    /// Local qubit-mode couplings g_j (2π×MHz).
    pub g_local: RVec<T>,
}

impl<T: Scalar> ChainSpec<T> {
    pub fn new(
        topology: Topology,
        n_modes: usize,
        omega: T,
        hopping: T,
        phase: T,
        g_local: RVec<T>,
    ) -> Result<Self> {
        if n_modes < 2 {
            return Err(Error::invalid("chain needs at least two modes"));
        }
        if g_local.len() != n_modes {
            return Err(Error::invalid(format!(
                "chain.g_local: expected {n_modes} entries, got {}",
                g_local.len()
            )));
        }
        Ok(ChainSpec {
            topology,
            n_modes,
            omega,
            hopping,
            phase,
            g_local,
        })
    }
}

/// Normal-mode data of a chain: frequencies Δ_k, the diagonalizing basis
/// (real symmetric orthogonal S for open chains, unitary Fourier F for
/// closed ones) and the qubit-to-normal-mode couplings g_jk.
#[derive(Debug, Clone)]
pub struct NormalModeBasis<T: Scalar> {
    pub topology: Topology,
    /// Normal-mode frequencies Δ_k (2π×MHz), in basis-column order.
    pub frequencies: RVec<T>,
    /// Momentum labels of the columns: 1..N (open), k_min..k_min+N-1 (closed).
    pub labels: Vec<i64>,
    /// Basis matrix: a_j = Σ_k basis_jk c_k.
    pub basis: CMat<T>,
    /// Complex couplings g_jk of qubit j to normal mode k.
    pub couplings: CMat<T>,
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2usize;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_nondegenerate<T: Scalar>(frequencies: &RVec<T>, labels: &[i64], hopping: T) -> Result<()> {
    let tol = real::<T>(1e-9) * hopping.abs();
    for a in 0..frequencies.len() {
        for b in a + 1..frequencies.len() {
            if (frequencies[a] - frequencies[b]).abs() <= tol {
                return Err(Error::DegenerateDispersion {
                    k1: labels[a],
                    k2: labels[b],
                });
            }
        }
    }
    Ok(())
}

/// Normal modes of the open chain: Δ_k = ω - 2J cos(kπ/(N+1)) and
/// S_jk = √(2/(N+1)) sin(jkπ/(N+1)), k = 1..N.
///
/// Requires N+1 prime so that no sin(jkπ/(N+1)) vanishes and every qubit
/// couples to every normal mode.
pub fn open_chain_modes<T: Scalar>(chain: &ChainSpec<T>) -> Result<NormalModeBasis<T>> {
    if chain.topology != Topology::Open {
        return Err(Error::invalid("open_chain_modes requires open topology"));
    }
    let n = chain.n_modes;
    if !is_prime(n + 1) {
        return Err(Error::invalid(format!(
            "open chain requires N+1 prime (sin(jkπ/(N+1)) must never vanish); N = {n} gives N+1 = {}",
            n + 1
        )));
    }
    let pi = T::pi();
    let denom = real::<T>((n + 1) as f64);
    let norm = (real::<T>(2.0) / denom).sqrt();
    let two = real::<T>(2.0);

    let labels: Vec<i64> = (1..=n as i64).collect();
    let frequencies = RVec::from_iterator(
        n,
        labels
            .iter()
            .map(|&k| chain.omega - two * chain.hopping * (real::<T>(k as f64) * pi / denom).cos()),
    );
    check_nondegenerate(&frequencies, &labels, chain.hopping)?;

    let mut basis = CMat::zeros(n, n);
    let mut couplings = CMat::zeros(n, n);
    for j in 1..=n {
        for (col, &k) in labels.iter().enumerate() {
            let s = norm * (real::<T>((j as i64 * k) as f64) * pi / denom).sin();
            basis[(j - 1, col)] = Complex::new(s, T::zero());
            couplings[(j - 1, col)] = Complex::new(chain.g_local[j - 1] * s, T::zero());
        }
    }
    Ok(NormalModeBasis {
        topology: Topology::Open,
        frequencies,
        labels,
        basis,
        couplings,
    })
}

/// Normal modes of the closed chain: Δ_k = ω - 2J cos(2πk/N - φ) and
/// F_jk = e^{2πi jk/N}/√N over the first Brillouin zone,
/// k = -N/2 .. (even N) or -(N-1)/2 .. (odd N).
///
/// The gauge phase must keep the dispersion nondegenerate (φ ∈ {0, π} pairs
/// up ±k and is rejected).
pub fn closed_chain_modes<T: Scalar>(chain: &ChainSpec<T>) -> Result<NormalModeBasis<T>> {
    if chain.topology != Topology::Closed {
        return Err(Error::invalid("closed_chain_modes requires closed topology"));
    }
    let n = chain.n_modes;
    let k_min: i64 = if n % 2 == 0 {
        -(n as i64) / 2
    } else {
        -((n as i64 - 1) / 2)
    };
    let labels: Vec<i64> = (k_min..k_min + n as i64).collect();
    let two_pi = T::two_pi();
    let nf = real::<T>(n as f64);
    let two = real::<T>(2.0);

    let frequencies = RVec::from_iterator(
        n,
        labels.iter().map(|&k| {
            chain.omega
                - two * chain.hopping * (two_pi * real::<T>(k as f64) / nf - chain.phase).cos()
        }),
    );
    check_nondegenerate(&frequencies, &labels, chain.hopping)?;

    let inv_sqrt_n = T::one() / nf.sqrt();
    let mut basis = CMat::zeros(n, n);
    let mut couplings = CMat::zeros(n, n);
    for j in 1..=n {
        for (col, &k) in labels.iter().enumerate() {
            let angle = two_pi * real::<T>((j as i64 * k) as f64) / nf;
            let f = polar(inv_sqrt_n, angle);
            basis[(j - 1, col)] = f;
            couplings[(j - 1, col)] = f * Complex::new(chain.g_local[j - 1], T::zero());
        }
    }
    Ok(NormalModeBasis {
        topology: Topology::Closed,
        frequencies,
        labels,
        basis,
        couplings,
    })
}

/// Dispatch on topology.
pub fn chain_modes<T: Scalar>(chain: &ChainSpec<T>) -> Result<NormalModeBasis<T>> {
    match chain.topology {
        Topology::Open => open_chain_modes(chain),
        Topology::Closed => closed_chain_modes(chain),
    }
}

/// Express a lab-frame target in the chain's normal-mode basis:
/// A → SAS, B → SBS (open) or A → F†AF, B → F†BF* (closed).
pub fn transform_target<T: Scalar>(
    target: &GaussianMap<T>,
    basis: &NormalModeBasis<T>,
) -> Result<GaussianMap<T>> {
    let n = target.n_modes();
    if basis.basis.nrows() != n {
        return Err(Error::invalid(format!(
            "basis is on {} modes but target has {n}",
            basis.basis.nrows()
        )));
    }
    let f = &basis.basis;
    let (a, b) = match basis.topology {
        Topology::Open => (f * target.a() * f, f * target.b() * f),
        Topology::Closed => (
            f.adjoint() * target.a() * f,
            f.adjoint() * target.b() * f.map(|z| z.conj()),
        ),
    };
    GaussianMap::from_blocks(a, b)
}

/// Real symplectic quadrature representation of the passive basis change
/// a = F c: P = [[Re F, -Im F], [Im F, Re F]]. Lab and chain covariances are
/// related by V_lab = P V_chain Pᵀ.
pub fn quadrature_basis_change<T: Scalar>(basis: &NormalModeBasis<T>) -> RMat<T> {
    let n = basis.basis.nrows();
    let mut p = RMat::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let f = basis.basis[(j, k)];
            p[(j, k)] = f.re;
            p[(j, n + k)] = -f.im;
            p[(n + j, k)] = f.im;
            p[(n + j, n + k)] = f.re;
        }
    }
    p
}

/// Synthesize the chain modulation plan: transform the target into the
/// normal-mode basis and match tones through the chain couplings g_jk
/// (blue-sideband tones divide by g_jk* on closed chains).
///
/// Tone frequencies are Ω_jk = ε_j - Δ_k and ε_j + Δ_k in basis-column order;
/// `epsilon` supplies the qubit frequencies.
pub fn chain_synthesize_plan<T: Scalar>(
    chain: &ChainSpec<T>,
    target: &GaussianMap<T>,
    epsilon: &RVec<T>,
    eta_pivot: &RVec<T>,
) -> Result<ModulationPlan<T>> {
    let n = chain.n_modes;
    if target.n_modes() != n {
        return Err(Error::invalid(format!(
            "target has {} modes but chain has {n}",
            target.n_modes()
        )));
    }
    if epsilon.len() != n {
        return Err(Error::invalid(format!(
            "epsilon: expected {n} entries, got {}",
            epsilon.len()
        )));
    }
    let basis = chain_modes(chain)?;
    let transformed = transform_target(target, &basis)?;
    let mut tone_frequencies = RMat::zeros(n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            tone_frequencies[(j, k)] = epsilon[j] - basis.frequencies[k];
            tone_frequencies[(j, n + k)] = epsilon[j] + basis.frequencies[k];
        }
    }
    let blue_coupling = match chain.topology {
        Topology::Open => basis.couplings.clone(),
        Topology::Closed => basis.couplings.map(|z| z.conj()),
    };
    synthesize_with_couplings(
        transformed.a(),
        transformed.b(),
        &basis.couplings,
        &blue_coupling,
        eta_pivot,
        tone_frequencies,
        DriveMode::Cooling,
    )
}

/// Frequency-layout planner inputs. All frequencies in 2π×MHz.
#[derive(Debug, Clone, PartialEq)]
pub struct PlannerParams<T: Scalar> {
    /// Coupling scale g: max |g_jk| for chains, bare coupling all-to-all.
    pub g: T,
    /// Top qubit frequency ε₁; qubits descend from it in steps of `qubit_spacing`.
    pub eps1: T,
    pub qubit_spacing: T,
    /// Lowest admissible mode frequency.
    pub omega_min: T,
    /// Top mode frequency ω₁ (all-to-all layouts only; modes descend by
    /// `mode_spacing` from it).
    pub omega_top: Option<T>,
    pub mode_spacing: Option<T>,
    /// Feasibility threshold: margin ε_N - ω_max must exceed this many g.
    pub margin_threshold: T,
    /// Largest N to sweep.
    pub n_cap: usize,
}

/// One row of the feasibility sweep.
#[derive(Debug, Clone)]
pub struct FeasibilityRow<T: Scalar> {
    pub n_modes: usize,
    /// Minimal hopping meeting the gap ≥ g criterion (asymptotic form the
    /// margin arithmetic is based on); None for all-to-all layouts.
    pub j_required: Option<T>,
    /// Normal-mode gap the exact dispersion yields at `j_required`.
    pub exact_gap: Option<T>,
    /// Largest mode frequency of the layout.
    pub omega_max: T,
    /// Smallest qubit frequency.
    pub eps_n: T,
    /// (ε_N - ω_max)/g.
    pub margin_over_g: T,
    pub feasible: bool,
}

/// Feasibility sweep over N.
#[derive(Debug, Clone)]
pub struct FeasibilityReport<T: Scalar> {
    pub rows: Vec<FeasibilityRow<T>>,
    /// Largest N with every N' ≤ N feasible.
    pub max_feasible: Option<usize>,
}

/// Which layout the planner sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlannerTopology {
    Open,
    Closed,
    /// Direct all-to-all layout, modes spaced down from `omega_top`.
    AllToAll,
}

/// Sweep N and report the frequency-layout feasibility margin.
///
/// Chains: the minimal hopping is the asymptotic J = gN²/(3π²) (open) or
/// gN²/(8π²) (closed), the mode band is [ω_min, ω_min + 4J], and the margin
/// is ε_N - ω_max with ε_N = ε₁ - (N-1)·spacing. Feasible when the margin
/// exceeds `margin_threshold`·g. The exact band-edge gap at that hopping
/// (2J[cos(π/(N+1)) - cos(2π/(N+1))] open, 2J[cos(π/N) - cos(3π/N)] closed
/// at the optimal gauge φ = π/N) is reported alongside.
///
/// All-to-all: modes descend from ω_top in `mode_spacing` steps and the layout
/// is feasible while the lowest mode stays at or above ω_min.
pub fn frequency_planner<T: Scalar>(
    topology: PlannerTopology,
    params: &PlannerParams<T>,
) -> Result<FeasibilityReport<T>> {
    if params.g <= T::zero() {
        return Err(Error::invalid("planner: coupling scale must be positive"));
    }
    if params.n_cap < 2 {
        return Err(Error::invalid("planner: n_cap must be at least 2"));
    }
    let pi = T::pi();
    let mut rows = Vec::with_capacity(params.n_cap - 1);
    for n in 2..=params.n_cap {
        let nf = real::<T>(n as f64);
        let eps_n = params.eps1 - (nf - T::one()) * params.qubit_spacing;
        let row = match topology {
            PlannerTopology::Open | PlannerTopology::Closed => {
                let coeff = match topology {
                    PlannerTopology::Open => real::<T>(3.0) * pi * pi,
                    _ => real::<T>(8.0) * pi * pi,
                };
                let j_req = params.g * nf * nf / coeff;
                let exact_gap = match topology {
                    PlannerTopology::Open => {
                        let denom = real::<T>((n + 1) as f64);
                        real::<T>(2.0)
                            * j_req
                            * ((pi / denom).cos() - (real::<T>(2.0) * pi / denom).cos())
                    }
                    _ => {
                        real::<T>(2.0)
                            * j_req
                            * ((pi / nf).cos() - (real::<T>(3.0) * pi / nf).cos())
                    }
                };
                let omega_max = params.omega_min + real::<T>(4.0) * j_req;
                let margin = (eps_n - omega_max) / params.g;
                FeasibilityRow {
                    n_modes: n,
                    j_required: Some(j_req),
                    exact_gap: Some(exact_gap),
                    omega_max,
                    eps_n,
                    margin_over_g: margin,
                    feasible: margin > params.margin_threshold,
                }
            }
            PlannerTopology::AllToAll => {
                let omega_top = params.omega_top.ok_or_else(|| {
                    Error::invalid("planner: all-to-all layout requires omega_top")
                })?;
                let spacing = params.mode_spacing.ok_or_else(|| {
                    Error::invalid("planner: all-to-all layout requires mode_spacing")
                })?;
                let omega_lowest = omega_top - (nf - T::one()) * spacing;
                let margin = (eps_n - omega_top) / params.g;
                FeasibilityRow {
                    n_modes: n,
                    j_required: None,
                    exact_gap: None,
                    omega_max: omega_top,
                    eps_n,
                    margin_over_g: margin,
                    feasible: omega_lowest >= params.omega_min
                        && margin > params.margin_threshold,
                }
            }
        };
        rows.push(row);
    }
    let max_feasible = rows
        .iter()
        .take_while(|r| r.feasible)
        .map(|r| r.n_modes)
        .last();
    Ok(FeasibilityReport { rows, max_feasible })
}
