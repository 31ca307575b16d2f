//! Covariance dynamics of linear-dissipation master equations: drift and
//! diffusion generators, Lyapunov steady states, transient integration, and
//! the cooled-state report at finite cooperativity.
//!
//! The master equation is dρ/dt = Σ_i D_{L_i}[ρ] with
//! D_C[ρ] = 2CρC† - C†Cρ - ρC†C and jump operators linear in the mode
//! operators, L_i = Σ_l (u_l a_l + v_l a_l†). The covariance then obeys
//! dV/dt = MV + VMᵀ + D.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::gaussian::{covariance_from_map, overlap_with_pure, CovarianceMatrix, GaussianMap, ThermalSpec};
use crate::linalg::{max_abs_r, symmetrize, symplectic_form, CVec, RMat, RVec};
use crate::scalar::{real, to_f64, Scalar};
use crate::synthesis::{HardwareSpec, ModulationPlan};

/// A set of jump operators L_i = Σ_l (u_l a_l + v_l a_l†), rates absorbed
/// into the coefficient rows (u | v) of length 2N.
#[derive(Debug, Clone)]
pub struct LinearDissipator<T: Scalar> {
    n_modes: usize,
    rows: Vec<CVec<T>>,
}

impl<T: Scalar> LinearDissipator<T> {
    /// Build from explicit coefficient rows of length 2N.
    pub fn from_rows(n_modes: usize, rows: Vec<CVec<T>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("dissipator needs at least one jump operator"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != 2 * n_modes {
                return Err(Error::invalid(format!(
                    "jump row {i} has {} entries, expected {}",
                    row.len(),
                    2 * n_modes
                )));
            }
            if row.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::invalid(format!("jump row {i} has non-finite entries")));
            }
        }
        Ok(LinearDissipator { n_modes, rows })
    }

    /// Jumps that cool into the state `target` prepares from vacuum, at the
    /// given rates, optionally with uniform local photon loss κ on top.
    ///
    /// The dark modes whose vacuum is the target state are the rows of the
    /// inverse Bogoliubov pair (A†, -Bᵀ); cooling those modes at rates
    /// Γ_j = |ḡ_j|²/γ_j steers the register into the target.
    pub fn cooling_into(
        target: &GaussianMap<T>,
        rates: &RVec<T>,
        kappa: Option<&RVec<T>>,
    ) -> Result<Self> {
        let n = target.n_modes();
        if rates.len() != n {
            return Err(Error::invalid(format!(
                "rates: expected {n} entries, got {}",
                rates.len()
            )));
        }
        if rates.iter().any(|&r| r < T::zero()) {
            return Err(Error::invalid("cooling rates must be nonnegative"));
        }
        let inverse = target.inverse();
        let mut rows = Vec::new();
        for j in 0..n {
            if rates[j] == T::zero() {
                continue;
            }
            let scale = Complex::new(rates[j].sqrt(), T::zero());
            let mut row = CVec::zeros(2 * n);
            for l in 0..n {
                row[l] = inverse.a()[(j, l)] * scale;
                row[n + l] = inverse.b()[(j, l)] * scale;
            }
            rows.push(row);
        }
        if let Some(kappas) = kappa {
            if kappas.len() != n {
                return Err(Error::invalid(format!(
                    "kappa: expected {n} entries, got {}",
                    kappas.len()
                )));
            }
            for j in 0..n {
                if kappas[j] < T::zero() {
                    return Err(Error::invalid("kappa entries must be nonnegative"));
                }
                if kappas[j] == T::zero() {
                    continue;
                }
                let mut row = CVec::zeros(2 * n);
                row[j] = Complex::new(kappas[j].sqrt(), T::zero());
                rows.push(row);
            }
        }
        Self::from_rows(n, rows)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn rows(&self) -> &[CVec<T>] {
        &self.rows
    }
}

/// Drift M and diffusion D of dV/dt = MV + VMᵀ + D.
///
/// With quadrature-basis coefficient vectors c_i = ((u+v)/2, i(u-v)/2) and
/// Γ = Σ_i c_i c_i†: M = -4Ω·Im Γ and D = -8Ω·Re Γ·Ω.
pub fn moment_generators<T: Scalar>(d: &LinearDissipator<T>) -> (RMat<T>, RMat<T>) {
    let n = d.n_modes;
    let half = real::<T>(0.5);
    let mut gamma_re = RMat::zeros(2 * n, 2 * n);
    let mut gamma_im = RMat::zeros(2 * n, 2 * n);
    for row in &d.rows {
        // c = ((u + v)/2, i(u - v)/2)
        let mut c = CVec::zeros(2 * n);
        for l in 0..n {
            let u = row[l];
            let v = row[n + l];
            c[l] = (u + v) * Complex::new(half, T::zero());
            c[n + l] = (u - v) * Complex::new(T::zero(), half);
        }
        for a in 0..2 * n {
            for b in 0..2 * n {
                let z = c[a] * c[b].conj();
                gamma_re[(a, b)] += z.re;
                gamma_im[(a, b)] += z.im;
            }
        }
    }
    let om = symplectic_form::<T>(n);
    let four = real::<T>(4.0);
    let m = -(&om * gamma_im) * four;
    let d_mat = -(&om * gamma_re * &om) * (four + four);
    (m, d_mat)
}

/// Solve MV + VMᵀ + D = 0 by vectorization (Kronecker-sum linear system).
///
/// Requires M Hurwitz, verified without an iterative eigensolve through the
/// Lyapunov stability theorem: the Gramian solving MW + WMᵀ = -I exists and
/// is positive definite exactly when M is Hurwitz. The solve is O(N⁶) and
/// intended for desk scale (N ≤ 32). One refinement pass keeps the residual
/// at max|MV + VMᵀ + D| ≤ 1e-10 for well-scaled inputs.
pub fn steady_state_covariance<T: Scalar>(m: &RMat<T>, d: &RMat<T>) -> Result<CovarianceMatrix<T>> {
    let dim = m.nrows();
    if m.ncols() != dim || d.nrows() != dim || d.ncols() != dim || dim % 2 != 0 {
        return Err(Error::invalid("drift/diffusion must be square 2N x 2N"));
    }
    let eye = RMat::<T>::identity(dim, dim);
    let k = eye.kronecker(m) + m.kronecker(&eye);
    let lu = k.clone().lu();

    let unvec = |x: &RVec<T>| {
        let mut v = RMat::zeros(dim, dim);
        for col in 0..dim {
            for row in 0..dim {
                v[(row, col)] = x[col * dim + row];
            }
        }
        v
    };

    // Hurwitz check: Gramian of MW + WMᵀ = -I must exist and be PD
    let minus_eye = RVec::from_iterator(dim * dim, eye.iter().map(|&x| -x));
    let gramian_vec = lu.solve(&minus_eye).ok_or_else(|| Error::NoUniqueSteadyState {
        detail: "an eigenvalue pair of the drift sums to zero".to_string(),
    })?;
    let mut gramian = unvec(&gramian_vec);
    symmetrize(&mut gramian);
    if gramian.clone().cholesky().is_none() {
        return Err(Error::NoUniqueSteadyState {
            detail: "stability Gramian is not positive definite".to_string(),
        });
    }

    let rhs = RVec::from_iterator(dim * dim, d.iter().map(|&x| -x));
    let mut x = lu.solve(&rhs).ok_or_else(|| Error::NoUniqueSteadyState {
        detail: "Kronecker system is singular".to_string(),
    })?;
    // one refinement pass against roundoff in the Kronecker solve
    let resid = &k * &x - &rhs;
    if let Some(corr) = lu.solve(&resid) {
        x -= corr;
    }
    let mut v = unvec(&x);
    symmetrize(&mut v);
    CovarianceMatrix::new(v)
}

/// Residual max|MV + VMᵀ + D| of a candidate steady state.
pub fn lyapunov_residual<T: Scalar>(m: &RMat<T>, d: &RMat<T>, v: &CovarianceMatrix<T>) -> T {
    max_abs_r(&(m * v.matrix() + v.matrix() * m.transpose() + d))
}

/// Integrate dV/dt = MV + VMᵀ + D from `v0` for time `t` with fixed RK4 steps
/// of size `dt`, re-symmetrizing after every step.
///
/// Rejects steps with dt·max|M| ≥ 0.1.
pub fn evolve_covariance<T: Scalar>(
    v0: &CovarianceMatrix<T>,
    m: &RMat<T>,
    d: &RMat<T>,
    t: T,
    dt: T,
) -> Result<CovarianceMatrix<T>> {
    if dt <= T::zero() || t < T::zero() {
        return Err(Error::invalid("evolve_covariance: t >= 0 and dt > 0 required"));
    }
    if dt * max_abs_r(m) >= real::<T>(0.1) {
        return Err(Error::invalid(
            "evolve_covariance: dt too large for stable integration (dt·max|M| >= 0.1)",
        ));
    }
    let steps = (to_f64(t / dt)).ceil() as usize;
    let mut v = v0.matrix().clone();
    let rhs = |v: &RMat<T>| m * v + v * m.transpose() + d;
    let half = real::<T>(0.5);
    let sixth = T::one() / real::<T>(6.0);
    let two = real::<T>(2.0);
    for _ in 0..steps {
        let k1 = rhs(&v);
        let k2 = rhs(&(&v + &k1 * (dt * half)));
        let k3 = rhs(&(&v + &k2 * (dt * half)));
        let k4 = rhs(&(&v + &k3 * dt));
        v += (k1 + k2 * two + k3 * two + k4) * (dt * sixth);
        symmetrize(&mut v);
    }
    CovarianceMatrix::new(v)
}

/// Steady state of the cooled register at finite cooperativity.
#[derive(Debug, Clone)]
pub struct CooledStateReport<T: Scalar> {
    pub steady_state: CovarianceMatrix<T>,
    /// Overlap ⟨ψ_target|ρ_ss|ψ_target⟩ with the pure target state.
    pub fidelity: T,
    /// Residual occupations ⟨Â_j†Â_j⟩ of the cooled collective modes.
    pub occupations: RVec<T>,
    /// Cooling rates |ḡ_j|²/γ_j that entered the dissipator.
    pub rates: RVec<T>,
    /// max|MV + VMᵀ + D| of the returned steady state.
    pub residual: T,
}

/// Assemble the cooled-register dissipator for `plan` against `target`,
/// solve for the steady state, and report fidelity and residual occupations.
///
/// `kappa_override` replaces the uniform hw.kappa with per-mode decay rates.
pub fn cooled_state_report<T: Scalar>(
    plan: &ModulationPlan<T>,
    target: &GaussianMap<T>,
    hw: &HardwareSpec<T>,
    kappa_override: Option<&RVec<T>>,
) -> Result<CooledStateReport<T>> {
    let n = target.n_modes();
    if plan.n_modes != n || hw.n_modes() != n {
        return Err(Error::invalid("plan, target and hardware dimensions differ"));
    }
    if hw.gamma.iter().any(|&x| x <= T::zero()) {
        return Err(Error::invalid(
            "hardware.gamma: cooling requires strictly positive qubit decay",
        ));
    }
    let rates = RVec::from_iterator(n, (0..n).map(|j| plan.gbar[j] * plan.gbar[j] / hw.gamma[j]));
    let kappas = match kappa_override {
        Some(k) => k.clone(),
        None => RVec::from_element(n, hw.kappa),
    };
    let dissipator = LinearDissipator::cooling_into(target, &rates, Some(&kappas))?;
    let (m, d) = moment_generators(&dissipator);
    let v_ss = steady_state_covariance(&m, &d)?;
    let residual = lyapunov_residual(&m, &d, &v_ss);
    let v_target = covariance_from_map(target, &ThermalSpec::vacuum(n))?;
    let fidelity = overlap_with_pure(&v_target, &v_ss)?;
    let occupations = collective_occupations(target, &v_ss)?;
    Ok(CooledStateReport {
        steady_state: v_ss,
        fidelity,
        occupations,
        rates,
        residual,
    })
}

/// Occupations ⟨Â_j†Â_j⟩ of the collective modes that cool the register into
/// `target`, extracted from a covariance matrix.
///
/// For each canonical mode L = Σ(u a + v a†) the occupation is
/// c†(V + iΩ)c with c the quadrature coefficient vector of L.
pub fn collective_occupations<T: Scalar>(
    target: &GaussianMap<T>,
    v: &CovarianceMatrix<T>,
) -> Result<RVec<T>> {
    let n = target.n_modes();
    if v.n_modes() != n {
        return Err(Error::invalid("covariance and target dimensions differ"));
    }
    let inverse = target.inverse();
    let om = symplectic_form::<T>(n);
    let half = real::<T>(0.5);
    let mut occ = RVec::zeros(n);
    for j in 0..n {
        let mut c = CVec::zeros(2 * n);
        for l in 0..n {
            let u = inverse.a()[(j, l)];
            let w = inverse.b()[(j, l)];
            c[l] = (u + w) * Complex::new(half, T::zero());
            c[n + l] = (u - w) * Complex::new(T::zero(), half);
        }
        // c†(V + iΩ)c, real by construction
        let mut acc = T::zero();
        for a in 0..2 * n {
            for b in 0..2 * n {
                let vc = Complex::new(v.matrix()[(a, b)], om[(a, b)]);
                acc += (c[a].conj() * vc * c[b]).re;
            }
        }
        occ[j] = acc;
    }
    Ok(occ)
}
