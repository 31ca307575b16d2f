//! Brute-force single-mode Lindblad integrator in a truncated Fock space.
//!
//! Independent of the covariance machinery: the density matrix is evolved
//! with RK4 under dρ/dt = Σ_i (2 L_i ρ L_i† - L_i†L_i ρ - ρ L_i†L_i) with
//! jump operators L = u a + v a†, and quadrature covariances are read off
//! from ⟨a²⟩ and ⟨a†a⟩. Used as the ground truth for the moment-generator
//! construction.

use nalgebra::{Complex, DMatrix};

type C64 = Complex<f64>;
type CM = DMatrix<C64>;

/// One jump operator L = u a + v a†.
#[derive(Clone, Copy)]
pub struct FockJump {
    pub u: C64,
    pub v: C64,
}

/// L ρ with L = u a + v a†: out[i][j] = u √(i+1) ρ[i+1][j] + v √i ρ[i-1][j].
fn jump_left(jump: &FockJump, rho: &CM, out: &mut CM) {
    let dim = rho.nrows();
    out.fill(C64::new(0.0, 0.0));
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            if i + 1 < dim {
                acc += jump.u * C64::new(((i + 1) as f64).sqrt(), 0.0) * rho[(i + 1, j)];
            }
            if i > 0 {
                acc += jump.v * C64::new((i as f64).sqrt(), 0.0) * rho[(i - 1, j)];
            }
            out[(i, j)] = acc;
        }
    }
}

/// X L† with L† = ū a† + v̄ a: out[i][j] = ū √(j+1) X[i][j+1] + v̄ √j X[i][j-1].
fn jump_dagger_right(jump: &FockJump, x: &CM, out: &mut CM) {
    let dim = x.nrows();
    out.fill(C64::new(0.0, 0.0));
    let (uc, vc) = (jump.u.conj(), jump.v.conj());
    for j in 0..dim {
        for i in 0..dim {
            let mut acc = C64::new(0.0, 0.0);
            if j + 1 < dim {
                acc += uc * C64::new(((j + 1) as f64).sqrt(), 0.0) * x[(i, j + 1)];
            }
            if j > 0 {
                acc += vc * C64::new((j as f64).sqrt(), 0.0) * x[(i, j - 1)];
            }
            out[(i, j)] = acc;
        }
    }
}

/// Pentadiagonal K applied from the left.
fn banded_mul_left(k: &CM, x: &CM, out: &mut CM) {
    let dim = x.nrows();
    out.fill(C64::new(0.0, 0.0));
    for i in 0..dim {
        let lo = i.saturating_sub(2);
        let hi = (i + 2).min(dim - 1);
        for band in lo..=hi {
            let kib = k[(i, band)];
            if kib != C64::new(0.0, 0.0) {
                for j in 0..dim {
                    out[(i, j)] += kib * x[(band, j)];
                }
            }
        }
    }
}

/// Pentadiagonal K applied from the right.
fn banded_mul_right(x: &CM, k: &CM, out: &mut CM) {
    let dim = x.nrows();
    out.fill(C64::new(0.0, 0.0));
    for j in 0..dim {
        let lo = j.saturating_sub(2);
        let hi = (j + 2).min(dim - 1);
        for band in lo..=hi {
            let kbj = k[(band, j)];
            if kbj != C64::new(0.0, 0.0) {
                for i in 0..dim {
                    out[(i, j)] += x[(i, band)] * kbj;
                }
            }
        }
    }
}

pub struct FockOracle {
    cutoff: usize,
    jumps: Vec<FockJump>,
    /// Σ L†L, pentadiagonal.
    k: CM,
}

impl FockOracle {
    pub fn new(cutoff: usize, jumps: Vec<FockJump>) -> Self {
        let dim = cutoff + 1;
        let mut a = CM::zeros(dim, dim);
        for i in 0..dim - 1 {
            a[(i, i + 1)] = C64::new(((i + 1) as f64).sqrt(), 0.0);
        }
        let ad = a.adjoint();
        let mut k = CM::zeros(dim, dim);
        for jump in &jumps {
            let l = &a * jump.u + &ad * jump.v;
            k += l.adjoint() * l;
        }
        FockOracle { cutoff, jumps, k }
    }

    fn rhs(&self, rho: &CM, out: &mut CM, t1: &mut CM, t2: &mut CM) {
        banded_mul_left(&self.k, rho, t1);
        banded_mul_right(rho, &self.k, t2);
        out.fill(C64::new(0.0, 0.0));
        *out -= &*t1;
        *out -= &*t2;
        for jump in &self.jumps {
            jump_left(jump, rho, t1);
            jump_dagger_right(jump, t1, t2);
            out.zip_apply(&*t2, |dst, src| *dst += src * C64::new(2.0, 0.0));
        }
    }

    /// Integrate from vacuum for total time `t` with step `dt`; returns the
    /// 2×2 quadrature covariance of the final state and the population at the
    /// truncation boundary.
    pub fn evolve_from_vacuum(&self, t: f64, dt: f64) -> ([[f64; 2]; 2], f64) {
        let dim = self.cutoff + 1;
        let mut rho = CM::zeros(dim, dim);
        rho[(0, 0)] = C64::new(1.0, 0.0);
        let steps = (t / dt).ceil() as usize;
        let mut k1 = CM::zeros(dim, dim);
        let mut k2 = CM::zeros(dim, dim);
        let mut k3 = CM::zeros(dim, dim);
        let mut k4 = CM::zeros(dim, dim);
        let mut stage = CM::zeros(dim, dim);
        let mut t1 = CM::zeros(dim, dim);
        let mut t2 = CM::zeros(dim, dim);
        let half = C64::new(0.5 * dt, 0.0);
        let full = C64::new(dt, 0.0);
        for _ in 0..steps {
            self.rhs(&rho, &mut k1, &mut t1, &mut t2);
            stage.copy_from(&rho);
            stage.zip_apply(&k1, |dst, src| *dst += src * half);
            self.rhs(&stage, &mut k2, &mut t1, &mut t2);
            stage.copy_from(&rho);
            stage.zip_apply(&k2, |dst, src| *dst += src * half);
            self.rhs(&stage, &mut k3, &mut t1, &mut t2);
            stage.copy_from(&rho);
            stage.zip_apply(&k3, |dst, src| *dst += src * full);
            self.rhs(&stage, &mut k4, &mut t1, &mut t2);
            let w1 = C64::new(dt / 6.0, 0.0);
            let w2 = C64::new(dt / 3.0, 0.0);
            rho.zip_apply(&k1, |dst, src| *dst += src * w1);
            rho.zip_apply(&k2, |dst, src| *dst += src * w2);
            rho.zip_apply(&k3, |dst, src| *dst += src * w2);
            rho.zip_apply(&k4, |dst, src| *dst += src * w1);
            let tr: f64 = (0..dim).map(|i| rho[(i, i)].re).sum();
            rho /= C64::new(tr, 0.0);
        }
        let mut n_exp = 0.0;
        for i in 0..dim {
            n_exp += i as f64 * rho[(i, i)].re;
        }
        let mut a2 = C64::new(0.0, 0.0);
        for i in 2..dim {
            // tr(ρ a²) = Σ_i √(i(i-1)) ρ[i][i-2]
            a2 += rho[(i, i - 2)] * C64::new(((i * (i - 1)) as f64).sqrt(), 0.0);
        }
        let vxx = 2.0 * a2.re + 2.0 * n_exp + 1.0;
        let vpp = -2.0 * a2.re + 2.0 * n_exp + 1.0;
        let vxp = 2.0 * a2.im;
        let tail = rho[(self.cutoff, self.cutoff)].re;
        ([[vxx, vxp], [vxp, vpp]], tail)
    }
}
