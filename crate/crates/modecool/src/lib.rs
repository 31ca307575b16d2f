//! Dissipative engineering of multimode Gaussian states.
//!
//! A register of N bosonic modes is steered into an arbitrary Gaussian state
//! by multi-chromatically modulated lossy qubits. This crate covers the full
//! desk-scale workflow:
//!
//! - [`gaussian`]: Bogoliubov pairs (A, B), covariance matrices, fidelity,
//!   symplectic spectra;
//! - [`builders`]: squeezers, beam splitters and the CV GHZ target;
//! - [`synthesis`]: tone frequencies, amplitudes and phases realizing a
//!   target map, with effective couplings and cooling rates;
//! - [`resonance`]: census of multi-tone (near-)resonances and the |n|=3
//!   coupling corrections with their fidelity penalty;
//! - [`chain`]: open/closed nearest-neighbor chains mapped to the normal-mode
//!   picture, plus frequency-layout feasibility planning;
//! - [`dynamics`]: covariance dynamics of the cooling master equation,
//!   Lyapunov steady states and finite-cooperativity reports.
//!
//! All numerics are generic over the real scalar ([`Scalar`]); the `*64`
//! aliases below fix `f64`, which every quantitative statement in the test
//! suite uses. Frequencies and rates are plain numbers in the 2π×MHz
//! convention; quadratures are ordered (x₁..x_N, p₁..p_N) with
//! x = a + a†, p = -i(a - a†).

pub mod bessel;
pub mod builders;
pub mod chain;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod resonance;
pub mod scalar;
pub mod synthesis;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use builders::{beam_splitter, ghz_covariance, ghz_map, squeezer, GhzSpec};
pub use chain::{
    chain_modes, chain_synthesize_plan, closed_chain_modes, frequency_planner, open_chain_modes,
    transform_target, ChainSpec, FeasibilityReport, NormalModeBasis, PlannerParams,
    PlannerTopology, Topology,
};
pub use dynamics::{
    cooled_state_report, evolve_covariance, moment_generators, steady_state_covariance,
    CooledStateReport, LinearDissipator,
};
pub use gaussian::{
    compose_maps, covariance_from_map, covariance_with_residual, fidelity_pure,
    fidelity_pure_with_tol, overlap_with_pure, symplectic_spectrum, validate_gaussian_map,
    CovarianceMatrix, GaussianMap, ThermalSpec, ValidationReport,
};
pub use resonance::{
    audit_fidelity, audit_point, corrected_couplings, corrected_map, enumerate_resonances,
    term_frequency, AuditPoint, BesselIndexVector, Channel, CorrectedMap, ResonanceReport,
    ResonanceSearch,
};
pub use synthesis::{
    cooling_rates, ghz_plan_closed_form, modulation_frequencies, synthesize_plan, CoolingReport,
    DriveMode, HardwareSpec, ModulationPlan,
};

/// `f64` concrete aliases (the working precision of the whole test suite).
pub type GaussianMap64 = gaussian::GaussianMap<f64>;
pub type CovarianceMatrix64 = gaussian::CovarianceMatrix<f64>;
pub type ThermalSpec64 = gaussian::ThermalSpec<f64>;
pub type GhzSpec64 = builders::GhzSpec<f64>;
pub type HardwareSpec64 = synthesis::HardwareSpec<f64>;
pub type ModulationPlan64 = synthesis::ModulationPlan<f64>;
pub type ChainSpec64 = chain::ChainSpec<f64>;
pub type LinearDissipator64 = dynamics::LinearDissipator<f64>;

/// `f32` aliases, for callers that trade accuracy for footprint.
pub type GaussianMap32 = gaussian::GaussianMap<f32>;
pub type CovarianceMatrix32 = gaussian::CovarianceMatrix<f32>;
pub type ThermalSpec32 = gaussian::ThermalSpec<f32>;
pub type GhzSpec32 = builders::GhzSpec<f32>;
pub type HardwareSpec32 = synthesis::HardwareSpec<f32>;
pub type ModulationPlan32 = synthesis::ModulationPlan<f32>;
pub type ChainSpec32 = chain::ChainSpec<f32>;
pub type LinearDissipator32 = dynamics::LinearDissipator<f32>;
