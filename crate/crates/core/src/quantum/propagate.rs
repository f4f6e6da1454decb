//! Fixed-step fourth-order commutator-free Magnus integrator.
//!
//! Each step is two exponentials of Hamiltonian combinations sampled at the
//! Gauss points; each exponential is applied with a matrix-free Taylor series
//! summed to roundoff, so the map is unitary to machine precision for any
//! Hermitian H.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::hamiltonian::EpochHamiltonian;

/// Largest allowed dt·max|H|.
pub const STABILITY_LIMIT: f64 = 0.1;
/// Default step is 1/(STEP_DIVISOR·max|H|).
pub const STEP_DIVISOR: f64 = 20.0;
const TAYLOR_MAX_TERMS: usize = 40;
const TAYLOR_TOL: f64 = 1e-17;

const SQRT3: f64 = 1.732_050_807_568_877_2;
const C1: f64 = 0.5 - SQRT3 / 6.0;
const C2: f64 = 0.5 + SQRT3 / 6.0;
const ALPHA1: f64 = (3.0 - 2.0 * SQRT3) / 12.0;
const ALPHA2: f64 = (3.0 + 2.0 * SQRT3) / 12.0;

/// Scratch buffers reused across steps.
#[derive(Debug, Default, Clone)]
pub struct Workspace {
    c1: Vec<Complex64>,
    c2: Vec<Complex64>,
    mix: Vec<Complex64>,
    term: Vec<Complex64>,
    next: Vec<Complex64>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Default step for a Hamiltonian with the given element bound.
pub fn default_dt(max_element: f64) -> f64 {
    1.0 / (STEP_DIVISOR * max_element)
}

fn check_dt(dt: f64, bound: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Integration {
            message: format!("step size must be positive, got {dt}"),
            suggested_dt: None,
        });
    }
    if dt * bound > STABILITY_LIMIT {
        let suggested = default_dt(bound);
        return Err(Error::Integration {
            message: format!(
                "dt·max|H| = {:.3} exceeds {STABILITY_LIMIT}; use dt ≤ {suggested:.3e} s",
                dt * bound
            ),
            suggested_dt: Some(suggested),
        });
    }
    Ok(())
}

/// x ← exp(−i·dt·(diag_scale·D + C)) x.
fn expm_apply(
    h: &EpochHamiltonian,
    diag_scale: f64,
    coeffs: &[Complex64],
    dt: f64,
    x: &mut [Complex64],
    term: &mut Vec<Complex64>,
    next: &mut Vec<Complex64>,
) -> Result<()> {
    let n = x.len();
    term.clear();
    term.extend_from_slice(x);
    next.resize(n, Complex64::default());
    let scale = x
        .iter()
        .map(|z| z.norm_sqr())
        .fold(0.0, f64::max)
        .sqrt()
        .max(f64::MIN_POSITIVE);
    for k in 1..=TAYLOR_MAX_TERMS {
        h.apply(diag_scale, coeffs, term, next);
        let f = Complex64::new(0.0, -dt / k as f64);
        let mut largest = 0.0f64;
        for ((t, nx), xi) in term.iter_mut().zip(next.iter()).zip(x.iter_mut()) {
            *t = nx * f;
            *xi += *t;
            largest = largest.max(t.norm_sqr());
        }
        if largest.sqrt() <= TAYLOR_TOL * scale {
            return Ok(());
        }
    }
    Err(Error::Integration {
        message: format!("Taylor exponential did not converge in {TAYLOR_MAX_TERMS} terms"),
        suggested_dt: Some(dt / 2.0),
    })
}

/// Advances the epoch-frame state χ from t to t + dt.
pub fn step(
    h: &EpochHamiltonian,
    chi: &mut [Complex64],
    t: f64,
    dt: f64,
    ws: &mut Workspace,
) -> Result<()> {
    check_dt(dt, h.max_element())?;
    step_unchecked(h, chi, t, dt, ws)
}

fn step_unchecked(
    h: &EpochHamiltonian,
    chi: &mut [Complex64],
    t: f64,
    dt: f64,
    ws: &mut Workspace,
) -> Result<()> {
    h.coefficients(t + C1 * dt, &mut ws.c1);
    h.coefficients(t + C2 * dt, &mut ws.c2);
    let half = 0.5;
    ws.mix.clear();
    ws.mix.extend(
        ws.c1
            .iter()
            .zip(&ws.c2)
            .map(|(a, b)| a * ALPHA2 + b * ALPHA1),
    );
    expm_apply(h, half, &ws.mix, dt, chi, &mut ws.term, &mut ws.next)?;
    ws.mix.clear();
    ws.mix.extend(
        ws.c1
            .iter()
            .zip(&ws.c2)
            .map(|(a, b)| a * ALPHA1 + b * ALPHA2),
    );
    expm_apply(h, half, &ws.mix, dt, chi, &mut ws.term, &mut ws.next)
}

/// Propagates χ over [t0, t1] in equal steps no longer than `dt_max`
/// (default 1/(20·max|H|)). Returns the number of steps taken.
pub fn propagate(
    h: &EpochHamiltonian,
    chi: &mut [Complex64],
    t0: f64,
    t1: f64,
    dt_max: Option<f64>,
    ws: &mut Workspace,
) -> Result<usize> {
    let span = t1 - t0;
    if span < 0.0 {
        return Err(Error::Integration {
            message: format!("negative propagation span {span}"),
            suggested_dt: None,
        });
    }
    if span == 0.0 {
        return Ok(0);
    }
    let bound = h.max_element();
    if bound == 0.0 {
        return Ok(0);
    }
    if h.num_couplings() == 0 {
        // Diagonal only: exact phases (and decay).
        for (a, d) in chi.iter_mut().zip(h.diagonal()) {
            *a *= (Complex64::new(0.0, -span) * d).exp();
        }
        return Ok(0);
    }
    let dt_cap = dt_max.unwrap_or_else(|| default_dt(bound));
    check_dt(dt_cap, bound)?;
    let steps = (span / dt_cap).ceil().max(1.0) as usize;
    let dt = span / steps as f64;
    for i in 0..steps {
        step_unchecked(h, chi, t0 + i as f64 * dt, dt, ws)?;
    }
    Ok(steps)
}
