//! Galerkin Krylov solver for `(I - τνΔ)v + τ L v = b`, `L = Π_N P(a·∇·)`.
//!
//! With `D = I - τνΔ` and `S = D^{-1/2}` the system becomes
//! `(I + τ S L S) y = S b`, `v = S y`. For divergence-free `a` the transport
//! `L` is skew-adjoint on the truncated solenoidal subspace, so the Lanczos
//! process for `τ S L S` yields a skew tridiagonal matrix and the Galerkin
//! iterate can be updated with short recurrences (no stored basis). Restarts
//! are driven by the true residual in the original variables.

use crate::error::{Result, SolverError};
use crate::spectral::{inner_product, l2_norm, Advection, SpectralVectorField};

pub(crate) struct KrylovSolve {
    pub solution: SpectralVectorField,
    pub iterations: usize,
    pub residual: f64,
    pub restart_residuals: Vec<f64>,
}

const MAX_RESTARTS: usize = 50;

fn half_inverse(v: &SpectralVectorField, tau: f64, nu: f64) -> SpectralVectorField {
    if nu == 0.0 {
        return v.clone();
    }
    let a = tau * nu;
    v.map(|c| c.scale_modes(|k1, k2| (1.0 + a * (k1 * k1 + k2 * k2) as f64).powf(-0.5)))
}

fn residual(
    transport: &Advection,
    rhs: &SpectralVectorField,
    x: &SpectralVectorField,
    tau: f64,
    nu: f64,
) -> Result<SpectralVectorField> {
    let ax = super::viscous_operator(x, tau, nu).axpy(tau, &transport.apply(x)?);
    Ok(rhs - &ax)
}

pub(crate) fn solve(
    transport: &Advection,
    rhs: &SpectralVectorField,
    tau: f64,
    nu: f64,
    tol: f64,
    max_iterations: usize,
) -> Result<KrylovSolve> {
    let mut x = rhs.scale(0.0);
    let mut r = rhs.clone();
    let mut res = l2_norm(&r);
    let mut restarts = vec![res];
    let mut total = 0usize;

    let op = |q: &SpectralVectorField| -> Result<SpectralVectorField> {
        let sq = half_inverse(q, tau, nu);
        Ok(half_inverse(&transport.apply(&sq)?, tau, nu).scale(tau))
    };

    while res >= tol {
        if restarts.len() > MAX_RESTARTS || total >= max_iterations {
            return Err(SolverError::KrylovLimit {
                iterations: total,
                residual: res,
            });
        }
        let c = half_inverse(&r, tau, nu);
        let beta0 = l2_norm(&c);
        let mut q = c.scale(1.0 / beta0);
        let mut q_prev: Option<SpectralVectorField> = None;
        let mut p_prev: Option<SpectralVectorField> = None;
        let mut dy = x.scale(0.0);
        let mut beta = 0.0_f64;
        let mut eta_prev = 1.0_f64;
        let mut zeta = beta0;
        // the preconditioned residual only bounds the true one up to the
        // largest entry of D^{1/2}; aim below the target and verify after
        let inner_tol = 0.1 * tol;
        for j in 1.. {
            total += 1;
            let sq = op(&q)?;
            let alpha = inner_product(&sq, &q)?;
            let mut w = sq.axpy(-alpha, &q);
            if let Some(qp) = &q_prev {
                w = w.axpy(beta, qp);
            }
            let (eta, p) = if j == 1 {
                let eta = 1.0 + alpha;
                (eta, q.scale(1.0 / eta))
            } else {
                let lambda = beta / eta_prev;
                let eta = 1.0 + alpha + lambda * beta;
                zeta = -lambda * zeta;
                let pp = p_prev.as_ref().expect("set after first iteration");
                (eta, q.axpy(beta, pp).scale(1.0 / eta))
            };
            dy = dy.axpy(zeta, &p);
            let beta_next = l2_norm(&w);
            let estimate = beta_next * (zeta / eta).abs();
            if !estimate.is_finite() {
                return Err(SolverError::non_finite("Krylov recurrence"));
            }
            if estimate <= inner_tol || beta_next <= f64::EPSILON * beta0 || total >= max_iterations {
                break;
            }
            q_prev = Some(q);
            q = w.scale(1.0 / beta_next);
            p_prev = Some(p);
            eta_prev = eta;
            beta = beta_next;
        }
        x = x.axpy(1.0, &half_inverse(&dy, tau, nu));
        r = residual(transport, rhs, &x, tau, nu)?;
        let new_res = l2_norm(&r);
        restarts.push(new_res);
        if new_res >= res && new_res >= tol {
            // no progress: attainable accuracy reached
            return Err(SolverError::KrylovLimit {
                iterations: total,
                residual: new_res,
            });
        }
        res = new_res;
    }
    Ok(KrylovSolve {
        solution: x,
        iterations: total,
        residual: res,
        restart_residuals: restarts,
    })
}
