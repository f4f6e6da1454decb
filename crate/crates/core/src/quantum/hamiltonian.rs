//! Hamiltonian assembly on a recoil basis.
//!
//! Amplitudes are kept in the frame rotating at the bare internal energies, so
//! the diagonal carries only kinetic energy and each coupling carries
//! (Ω(t)/2)·e^{iφ}·e^{−iδt}. Within one epoch (fixed set of active pulses) a
//! further per-state frame χ_j = e^{i f_j (t − t_ref)} ψ_j removes the optical
//! phase factors: frame frequencies are assigned along a spanning forest of
//! the coupling graph so every tree edge becomes time independent. Only
//! edges closing a loop keep a residual e^{−iδ_res(t − t_ref)}.

use ndarray::Array2;
use num_complex::Complex64;
use std::collections::VecDeque;
use std::f64::consts::TAU;

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::pulses::event::PulseEvent;
use crate::quantum::basis::Basis;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianOptions {
    /// Include ω_r(n_z² + n_x²) on the diagonal.
    pub kinetic: bool,
    /// Excited-state decay rate Γ (rad/s); adds −iΓ/2 on excited levels.
    pub decay_rate: Option<f64>,
}

impl Default for HamiltonianOptions {
    fn default() -> Self {
        HamiltonianOptions {
            kinetic: true,
            decay_rate: None,
        }
    }
}

/// One off-diagonal matrix element H[row, col].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub row: usize,
    pub col: usize,
    pub value: Complex64,
}

/// Snapshot of the Hamiltonian at one instant, in the epoch's rotating frame.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    /// Real diagonal (rad/s): kinetic energy minus frame frequency.
    pub diagonal: Vec<f64>,
    /// Γ/2 per state; all zero when decay is disabled.
    pub decay: Vec<f64>,
    /// Both (i, j) and (j, i) entries are listed.
    pub couplings: Vec<Coupling>,
}

impl HamiltonianSpec {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn to_matrix(&self) -> Array2<Complex64> {
        let n = self.dim();
        let mut m = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            m[[i, i]] = Complex64::new(self.diagonal[i], -self.decay[i]);
        }
        for c in &self.couplings {
            m[[c.row, c.col]] += c.value;
        }
        m
    }

    /// Exact equality with the conjugate transpose.
    pub fn is_hermitian(&self) -> bool {
        let m = self.to_matrix();
        let h = m.t().mapv(|z| z.conj());
        m == h
    }

    pub fn max_element(&self) -> f64 {
        self.to_matrix()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
struct Term {
    row: usize,
    col: usize,
    pulse: usize,
    base: Complex64,
    residual: f64,
}

/// Hamiltonian of one epoch: fixed basis, fixed active pulses, fixed frame.
#[derive(Debug, Clone)]
pub struct EpochHamiltonian {
    pulses: Vec<PulseEvent>,
    terms: Vec<Term>,
    diag: Vec<Complex64>,
    frame: Vec<f64>,
    t_ref: f64,
}

impl EpochHamiltonian {
    pub fn new(
        basis: &Basis,
        pulses: &[PulseEvent],
        atom: &AtomParams,
        t_ref: f64,
        opts: &HamiltonianOptions,
    ) -> Result<Self> {
        let n = basis.len();
        let energy: Vec<f64> = basis
            .states()
            .iter()
            .map(|s| {
                if opts.kinetic {
                    atom.kinetic(s.nz, s.nx)
                } else {
                    0.0
                }
            })
            .collect();

        struct Edge {
            row: usize,
            col: usize,
            pulse: usize,
            detuning: f64,
        }
        let mut edges = Vec::new();
        for (p, pulse) in pulses.iter().enumerate() {
            pulse.validate()?;
            let tr = pulse.transition();
            if !basis.has_level(tr.from) || !basis.has_level(tr.to) {
                return Err(Error::config(format!(
                    "pulse couples {} and {}, which are not both in the basis",
                    tr.from, tr.to
                )));
            }
            for (col, s) in basis.states().iter().enumerate() {
                if s.level != tr.from {
                    continue;
                }
                let target = s.with_level(tr.to).shifted(tr.axis, tr.shift);
                if let Some(row) = basis.index_of(&target) {
                    edges.push(Edge {
                        row,
                        col,
                        pulse: p,
                        detuning: pulse.detuning,
                    });
                }
            }
        }

        let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.col].push((e.row, e.detuning));
            adjacency[e.row].push((e.col, -e.detuning));
        }
        let mut frame = vec![f64::NAN; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if !frame[root].is_nan() {
                continue;
            }
            frame[root] = energy[root];
            queue.push_back(root);
            while let Some(i) = queue.pop_front() {
                for &(j, d) in &adjacency[i] {
                    if frame[j].is_nan() {
                        frame[j] = frame[i] + d;
                        queue.push_back(j);
                    }
                }
            }
        }

        let half_gamma = opts.decay_rate.unwrap_or(0.0) * 0.5;
        let diag = basis
            .states()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let loss = if s.level.is_excited() {
                    half_gamma
                } else {
                    0.0
                };
                Complex64::new(energy[i] - frame[i], -loss)
            })
            .collect();

        let terms = edges
            .iter()
            .map(|e| {
                let pulse = &pulses[e.pulse];
                let phase = pulse.phase - (e.detuning * t_ref).rem_euclid(TAU);
                Term {
                    row: e.row,
                    col: e.col,
                    pulse: e.pulse,
                    base: Complex64::from_polar(0.5, phase),
                    residual: e.detuning - (frame[e.row] - frame[e.col]),
                }
            })
            .collect();

        Ok(EpochHamiltonian {
            pulses: pulses.to_vec(),
            terms,
            diag,
            frame,
            t_ref,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Diagonal entries, with −iΓ/2 on excited levels when decay is on.
    pub fn diagonal(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn t_ref(&self) -> f64 {
        self.t_ref
    }

    /// Frame frequency f_j per basis state.
    pub fn frame(&self) -> &[f64] {
        &self.frame
    }

    pub fn num_couplings(&self) -> usize {
        self.terms.len()
    }

    /// Largest |residual detuning| over couplings.
    pub fn max_residual(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.residual.abs())
            .fold(0.0, f64::max)
    }

    /// Lower-triangle coupling values at time t, one per term.
    pub fn coefficients(&self, t: f64, out: &mut Vec<Complex64>) {
        out.clear();
        let tau = t - self.t_ref;
        for term in &self.terms {
            let omega = self.pulses[term.pulse].envelope.value(t);
            let v = if term.residual == 0.0 {
                term.base * omega
            } else {
                term.base * Complex64::from_polar(omega, -term.residual * tau)
            };
            out.push(v);
        }
    }

    /// y = (diag_scale·D + C) x where C is built from `coeffs`.
    pub fn apply(
        &self,
        diag_scale: f64,
        coeffs: &[Complex64],
        x: &[Complex64],
        y: &mut [Complex64],
    ) {
        for ((yi, xi), d) in y.iter_mut().zip(x).zip(&self.diag) {
            *yi = d * diag_scale * xi;
        }
        for (term, v) in self.terms.iter().zip(coeffs) {
            y[term.row] += v * x[term.col];
            y[term.col] += v.conj() * x[term.row];
        }
    }

    /// Upper bound on any matrix element over the epoch, including residual
    /// rotation rates.
    pub fn max_element(&self) -> f64 {
        let d = self.diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let c = self
            .terms
            .iter()
            .map(|t| 0.5 * self.pulses[t.pulse].envelope.peak + t.residual.abs())
            .fold(0.0, f64::max);
        d.max(c)
    }

    pub fn at(&self, t: f64) -> HamiltonianSpec {
        let mut coeffs = Vec::new();
        self.coefficients(t, &mut coeffs);
        let mut couplings = Vec::with_capacity(2 * coeffs.len());
        for (term, v) in self.terms.iter().zip(&coeffs) {
            couplings.push(Coupling {
                row: term.row,
                col: term.col,
                value: *v,
            });
            couplings.push(Coupling {
                row: term.col,
                col: term.row,
                value: v.conj(),
            });
        }
        HamiltonianSpec {
            diagonal: self.diag.iter().map(|z| z.re).collect(),
            decay: self.diag.iter().map(|z| -z.im).collect(),
            couplings,
        }
    }

    /// ψ (internal-energy frame) → χ (epoch frame).
    pub fn to_epoch_frame(&self, psi: &mut [Complex64], t: f64) {
        let tau = t - self.t_ref;
        for (a, f) in psi.iter_mut().zip(&self.frame) {
            *a *= Complex64::from_polar(1.0, f * tau);
        }
    }

    /// χ (epoch frame) → ψ (internal-energy frame).
    pub fn from_epoch_frame(&self, chi: &mut [Complex64], t: f64) {
        let tau = t - self.t_ref;
        for (a, f) in chi.iter_mut().zip(&self.frame) {
            *a *= Complex64::from_polar(1.0, -f * tau);
        }
    }
}

/// Hamiltonian of the active pulse set at time t, in the frame referenced at t.
pub fn assemble(
    basis: &Basis,
    active_pulses: &[PulseEvent],
    t: f64,
    atom: &AtomParams,
) -> Result<HamiltonianSpec> {
    let active: Vec<PulseEvent> = active_pulses
        .iter()
        .filter(|p| p.is_active(t))
        .cloned()
        .collect();
    Ok(EpochHamiltonian::new(basis, &active, atom, t, &HamiltonianOptions::default())?.at(t))
}
