use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::qpe::phase_estimation;
use super::{to_complex, QuantumState};
use crate::error::{Error, Result};
use crate::sset::{SimplexRef, TruncatedSimplicialSet};

/// Agreement required between the simulated and the analytic success probability.
pub const GROVER_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroverResult {
    #[serde(skip)]
    pub state: QuantumState,
    pub degree: usize,
    pub iterations: usize,
    /// `|X_n| / |nondeg_n|`.
    pub ratio: f64,
    /// `θ` with `sin(θ/2) = ratio^{-1/2}`.
    pub theta: f64,
    /// Probability mass on the non-degenerate simplices after the iterations.
    pub success_probability: f64,
    /// `sin²((2p + 1)θ/2)`.
    pub analytic_probability: f64,
}

/// The preparation unitary `W` with `W|0⟩ = |u⟩`, realized as the
/// Householder reflection exchanging `|0⟩` and the uniform state.
struct Preparation {
    v: DVector<f64>,
    vv: f64,
}

impl Preparation {
    fn new(dim: usize) -> Self {
        let mut v = DVector::from_element(dim, -1.0 / (dim as f64).sqrt());
        v[0] += 1.0;
        let vv = v.norm_squared();
        Preparation { v, vv }
    }

    /// `W ψ`; `W` is a symmetric reflection, so it is also `W⁺ ψ`.
    fn apply(&self, psi: &DVector<f64>) -> DVector<f64> {
        if self.vv == 0.0 {
            return psi.clone();
        }
        psi - &self.v * (2.0 * self.v.dot(psi) / self.vv)
    }
}

struct GroverOperator {
    prep: Preparation,
    marked: Vec<bool>,
}

impl GroverOperator {
    fn new(x: &TruncatedSimplicialSet, n: usize) -> Self {
        GroverOperator {
            prep: Preparation::new(x.count(n)),
            marked: (0..x.count(n)).map(|k| !x.is_degenerate(SimplexRef::new(n, k))).collect(),
        }
    }

    /// `G = −W D₀ W⁺ D`.
    fn apply(&self, psi: &DVector<f64>) -> DVector<f64> {
        let mut out = psi.clone();
        for (k, &m) in self.marked.iter().enumerate() {
            if m {
                out[k] = -out[k];
            }
        }
        out = self.prep.apply(&out);
        out[0] = -out[0];
        -self.prep.apply(&out)
    }

    fn matrix(&self) -> DMatrix<f64> {
        let dim = self.marked.len();
        let mut m = DMatrix::zeros(dim, dim);
        for c in 0..dim {
            let mut e = DVector::zeros(dim);
            e[c] = 1.0;
            m.set_column(c, &self.apply(&e));
        }
        m
    }

    fn success(&self, psi: &DVector<f64>) -> f64 {
        self.marked.iter().zip(psi.iter()).filter(|(&m, _)| m).map(|(_, a)| a * a).sum()
    }
}

fn ratio_and_theta(x: &TruncatedSimplicialSet, n: usize) -> Result<(f64, f64)> {
    if n > x.cutoff() {
        return Err(Error::out_of_range("Grover projection", n, x.cutoff()));
    }
    let nondeg = x.nondegenerate(n).len();
    if nondeg == 0 {
        return Err(Error::NoTarget(format!("no non-degenerate {n}-simplices")));
    }
    let ratio = x.count(n) as f64 / nondeg as f64;
    Ok((ratio, 2.0 * (1.0 / ratio.sqrt()).asin()))
}

/// Amplifies the uniform degree-`n` state onto the non-degenerate simplices
/// with `⌊(π/4)·√ρ⌋` iterations (capped by `max_iters`), and checks the
/// reached probability against the analytic formula.
pub fn grover_project(x: &TruncatedSimplicialSet, n: usize, max_iters: Option<usize>) -> Result<GroverResult> {
    let (ratio, theta) = ratio_and_theta(x, n)?;
    let mut iterations = (PI / 4.0 * ratio.sqrt()).floor() as usize;
    if let Some(cap) = max_iters {
        iterations = iterations.min(cap);
    }
    let g = GroverOperator::new(x, n);
    let mut o = DVector::zeros(x.count(n));
    o[0] = 1.0;
    let mut psi = g.prep.apply(&o);
    for _ in 0..iterations {
        psi = g.apply(&psi);
    }
    let success_probability = g.success(&psi);
    let analytic_probability = ((2 * iterations + 1) as f64 * theta / 2.0).sin().powi(2);
    if (success_probability - analytic_probability).abs() > GROVER_TOL {
        return Err(Error::invariant(format!(
            "Grover success {success_probability} differs from sin² formula {analytic_probability}"
        )));
    }
    Ok(GroverResult {
        state: QuantumState::new(Some(n), psi.map(|a| Complex64::new(a, 0.0)))?,
        degree: n,
        iterations,
        ratio,
        theta,
        success_probability,
        analytic_probability,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountingResult {
    pub degree: usize,
    pub bits: u32,
    pub distribution: Vec<f64>,
    /// Most likely clock value, lowest on ties.
    pub mode: usize,
    /// Phase `θ/2π` read from the mode, folded into `[0, 1/2]`.
    pub phase_estimate: f64,
    pub phase_exact: f64,
    /// Distance between estimated and exact phase, in clock bins.
    pub bin_error: f64,
    /// `None` when the mode reads phase 0, which corresponds to no solutions.
    pub ratio_estimate: Option<f64>,
    pub ratio_exact: f64,
    /// Largest change of the ratio estimate across one clock bin, when finite.
    pub ratio_error_bound: Option<f64>,
}

fn ratio_from_phase(phase: f64) -> Option<f64> {
    let s = (PI * phase).sin();
    (phase > 0.0).then(|| 1.0 / (s * s))
}

/// Estimates `ρ = |X_n| / |nondeg_n|` by phase estimation on the Grover
/// operator started from the uniform state.
pub fn quantum_count(x: &TruncatedSimplicialSet, n: usize, bits: u32) -> Result<CountingResult> {
    if bits < 3 {
        return Err(Error::invalid(format!("counting needs at least 3 clock bits, got {bits}")));
    }
    if bits > 16 {
        return Err(Error::invalid(format!("{bits} clock bits is beyond desk scale")));
    }
    let (ratio, theta) = ratio_and_theta(x, n)?;
    let g = GroverOperator::new(x, n);
    let mut powers = vec![to_complex(&g.matrix())];
    for _ in 1..bits {
        let last = powers.last().expect("nonempty");
        powers.push(last * last);
    }
    let mut o = DVector::zeros(x.count(n));
    o[0] = 1.0;
    let psi = g.prep.apply(&o).map(|a| Complex64::new(a, 0.0));
    let amps = phase_estimation(&powers, &psi);
    let distribution: Vec<f64> = amps.iter().map(|a| a.norm_squared()).collect();
    let mode = distribution
        .iter()
        .enumerate()
        .fold(0, |best, (m, &p)| if p > distribution[best] { m } else { best });
    let size = 1usize << bits;
    let bin = 1.0 / size as f64;
    let phase_estimate = mode.min(size - mode) as f64 * bin;
    let phase_exact = theta / (2.0 * PI);
    let ratio_estimate = ratio_from_phase(phase_estimate);
    let ratio_error_bound = ratio_estimate.and_then(|r| {
        let lo = ratio_from_phase(phase_estimate - bin)?;
        let hi = ratio_from_phase((phase_estimate + bin).min(0.5)).expect("positive phase");
        Some((lo - r).abs().max((hi - r).abs()))
    });
    Ok(CountingResult {
        degree: n,
        bits,
        mode,
        phase_estimate,
        phase_exact,
        bin_error: (phase_estimate - phase_exact).abs() * size as f64,
        ratio_estimate,
        ratio_exact: ratio,
        ratio_error_bound,
        distribution,
    })
}
