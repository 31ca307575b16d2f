//! Elementary Gaussian maps (squeezers, beam splitters) and the
//! continuous-variable GHZ target built from them.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::gaussian::{compose_maps, covariance_from_map, CovarianceMatrix, GaussianMap, ThermalSpec};
use crate::linalg::CMat;
use crate::scalar::{real, Scalar};

/// Single-mode squeezer S_j(r): a_j ↦ a_j cosh r + a_j† sinh r.
pub fn squeezer<T: Scalar>(n_modes: usize, mode: usize, r: T) -> Result<GaussianMap<T>> {
    if mode >= n_modes {
        return Err(Error::invalid(format!(
            "squeezer mode index {mode} out of range for {n_modes} modes"
        )));
    }
    let mut a = CMat::identity(n_modes, n_modes);
    let mut b = CMat::zeros(n_modes, n_modes);
    a[(mode, mode)] = Complex::new(r.cosh(), T::zero());
    b[(mode, mode)] = Complex::new(r.sinh(), T::zero());
    GaussianMap::from_blocks(a, b)
}

/// Beam splitter B_jl(θ) with a built-in π phase on mode l:
/// a_j ↦ a_j cos θ + a_l sin θ, a_l ↦ -a_l cos θ + a_j sin θ.
///
/// The π phase is part of the definition (it makes the GHZ cascade close in
/// a single angle family); no plain beam splitter is exposed.
pub fn beam_splitter<T: Scalar>(
    n_modes: usize,
    mode_j: usize,
    mode_l: usize,
    theta: T,
) -> Result<GaussianMap<T>> {
    if mode_j >= n_modes || mode_l >= n_modes {
        return Err(Error::invalid(format!(
            "beam splitter indices ({mode_j}, {mode_l}) out of range for {n_modes} modes"
        )));
    }
    if mode_j == mode_l {
        return Err(Error::invalid(
            "beam splitter requires two distinct modes".to_string(),
        ));
    }
    let mut a = CMat::identity(n_modes, n_modes);
    let b = CMat::zeros(n_modes, n_modes);
    let (c, s) = (theta.cos(), theta.sin());
    a[(mode_j, mode_j)] = Complex::new(c, T::zero());
    a[(mode_l, mode_l)] = Complex::new(-c, T::zero());
    a[(mode_j, mode_l)] = Complex::new(s, T::zero());
    a[(mode_l, mode_j)] = Complex::new(s, T::zero());
    GaussianMap::from_blocks(a, b)
}

/// Parameters of the N-mode CV GHZ state: momentum-sum squeezing r₁ and
/// position-difference squeezing r₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzSpec<T: Scalar> {
    pub n_modes: usize,
    pub r1: T,
    pub r2: T,
}

impl<T: Scalar> GhzSpec<T> {
    pub fn new(n_modes: usize, r1: T, r2: T) -> Result<Self> {
        if n_modes < 2 {
            return Err(Error::invalid("GHZ state needs at least two modes"));
        }
        if r1 < T::zero() || r2 < T::zero() {
            return Err(Error::invalid("GHZ squeezing parameters must be nonnegative"));
        }
        Ok(GhzSpec { n_modes, r1, r2 })
    }
}

/// Beam-splitter angle θ_n of the GHZ cascade: cos θ_n = 1/√(N-n+1).
fn ghz_angle<T: Scalar>(n_modes: usize, n: usize) -> T {
    let nn = real::<T>((n_modes - n + 1) as f64);
    (T::one() / nn.sqrt()).acos()
}

/// GHZ Gaussian map: B_{N-1,N}(θ_{N-1})···B_{12}(θ₁) S_N(-r₂)···S_2(-r₂) S_1(r₁),
/// rightmost factor applied first.
pub fn ghz_map<T: Scalar>(spec: &GhzSpec<T>) -> Result<GaussianMap<T>> {
    let n = spec.n_modes;
    let mut map = squeezer(n, 0, spec.r1)?;
    for j in 1..n {
        map = compose_maps(&squeezer(n, j, -spec.r2)?, &map)?;
    }
    for k in 1..n {
        let theta = ghz_angle::<T>(n, k);
        map = compose_maps(&beam_splitter(n, k - 1, k, theta)?, &map)?;
    }
    Ok(map)
}

/// Covariance matrix of the pure GHZ state (the GHZ map applied to vacuum).
pub fn ghz_covariance<T: Scalar>(spec: &GhzSpec<T>) -> Result<CovarianceMatrix<T>> {
    covariance_from_map(&ghz_map(spec)?, &ThermalSpec::vacuum(spec.n_modes))
}
