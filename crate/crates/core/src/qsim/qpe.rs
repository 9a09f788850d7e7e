use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::dirac::{dirac_matrix, evolve_spectral};
use super::{to_complex, DensityMatrix};
use crate::error::{Error, Result};
use crate::homology::normalized_complex;
use crate::linalg::spectral::SymSpectrum;
use crate::sset::TruncatedSimplicialSet;

/// Agreement required between the simulated and the analytic outcome distribution.
pub const DISTRIBUTION_TOL: f64 = 1e-10;

/// Mixtures with at most this many components are simulated by averaging
/// pure runs under [`MixedStateMethod::Auto`].
pub const PURE_AVERAGE_LIMIT: usize = 256;

/// Nonzero eigenphases must sit at least this many clock bins from 0.
pub const MIN_SEPARATION_BINS: f64 = 2.0;

/// Scale factors tried for `τ = 2πc/λ_max`, in order: `1/2`, then steps of
/// `1/64` up to 4.
fn scale_candidates() -> impl Iterator<Item = f64> {
    std::iter::once(0.5).chain((1..=224).map(|k| 0.5 + k as f64 / 64.0))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedStateMethod {
    #[default]
    Auto,
    /// Convex combination of runs started from each basis state of the mixture.
    PureAverage,
    /// The full density matrix conjugated by the explicit QPE unitary.
    DensityEvolution,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QpeConfig {
    pub clock_bits: u32,
    /// Evolution time; chosen from the spectrum when absent.
    pub tau: Option<f64>,
    pub shots: usize,
    pub seed: u64,
    pub method: MixedStateMethod,
}

impl QpeConfig {
    pub fn new(clock_bits: u32, shots: usize, seed: u64) -> Self {
        QpeConfig {
            clock_bits,
            tau: None,
            shots,
            seed,
            method: MixedStateMethod::Auto,
        }
    }

    fn check(&self) -> Result<()> {
        if self.clock_bits == 0 || self.clock_bits > 12 {
            return Err(Error::Config(format!("clock bits must be in 1..=12, got {}", self.clock_bits)));
        }
        if let Some(t) = self.tau {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("evolution time must be positive, got {t}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QpeReport {
    pub degree: usize,
    pub clock_bits: u32,
    pub tau: f64,
    /// `τ·λ_max/2π` when `τ` was chosen automatically.
    pub scale: Option<f64>,
    pub method: MixedStateMethod,
    pub nondegenerate: usize,
    pub kernel_dim: usize,
    /// `kernel_dim / nondegenerate`.
    pub kernel_fraction: f64,
    /// Exact probability of reading clock value 0.
    pub p_zero: f64,
    /// Bound on `|p_zero − kernel_fraction|` from the Fejér kernel.
    pub leakage_bound: f64,
    pub distribution: Vec<f64>,
    pub shots: usize,
    pub seed: u64,
    /// Outcome counts, clock values with no hits omitted.
    pub histogram: BTreeMap<usize, usize>,
    pub sampled_p_zero: f64,
    pub betti_estimate: usize,
    /// Largest entry of the post-measurement state outside the kernel.
    pub kernel_residual: Option<f64>,
    /// Largest entry of the difference to the normalized kernel projector.
    pub projector_deviation: Option<f64>,
    pub controlled_evolutions: u32,
    pub truncation_sensitive: bool,
}

#[derive(Clone, Debug)]
pub struct QpeOutcome {
    pub report: QpeReport,
    /// Register state after reading clock value 0, if that value can occur.
    pub post_measurement: Option<DensityMatrix>,
}

/// Clock amplitudes of textbook phase estimation: `powers[j]` is the
/// controlled unitary for clock bit `j`; `out[m]` is the register vector
/// paired with clock value `m` after the inverse Fourier transform.
pub(crate) fn phase_estimation(powers: &[DMatrix<Complex64>], psi: &DVector<Complex64>) -> Vec<DVector<Complex64>> {
    let size = 1usize << powers.len();
    let mut branches: Vec<DVector<Complex64>> = Vec::with_capacity(size);
    branches.push(psi.clone());
    for k in 1..size {
        let j = (usize::BITS - 1 - k.leading_zeros()) as usize;
        let next = &powers[j] * &branches[k - (1 << j)];
        branches.push(next);
    }
    let scale = 1.0 / size as f64;
    (0..size)
        .map(|m| {
            let mut acc = DVector::zeros(psi.len());
            for (k, v) in branches.iter().enumerate() {
                let angle = -2.0 * PI * ((k * m) % size) as f64 / size as f64;
                acc += v * Complex64::from_polar(scale, angle);
            }
            acc
        })
        .collect()
}

/// Probability of reading clock value 0 for an eigenphase offset `delta`
/// (in turns) with `bits` clock bits.
fn fejer(bits: u32, delta: f64) -> f64 {
    let size = (1u64 << bits) as f64;
    let s = (PI * delta).sin();
    if s.abs() < 1e-15 {
        return 1.0;
    }
    let r = (PI * size * delta).sin() / (size * s);
    r * r
}

fn circular_distance(phase: f64) -> f64 {
    let f = phase.rem_euclid(1.0);
    f.min(1.0 - f)
}

/// Picks `τ` or checks a given one: every nonzero eigenphase `τλ/2π` must
/// be at least [`MIN_SEPARATION_BINS`] bins from 0 modulo 1.
fn choose_tau(spec: &SymSpectrum, cfg: &QpeConfig) -> Result<(f64, Option<f64>)> {
    let min_dist = MIN_SEPARATION_BINS / (1u64 << cfg.clock_bits) as f64;
    let nonzero: Vec<f64> = spec.values.iter().copied().filter(|&l| !spec.is_zero_eigenvalue(l)).collect();
    let worst = |tau: f64| {
        nonzero
            .iter()
            .map(|&l| (l, circular_distance(tau * l / (2.0 * PI))))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    };
    if let Some(tau) = cfg.tau {
        return match worst(tau) {
            Some((l, d)) if d < min_dist => Err(Error::Config(format!(
                "eigenvalue {l} has phase {d} turns from 0 at τ = {tau}, closer than {MIN_SEPARATION_BINS} clock bins"
            ))),
            _ => Ok((tau, None)),
        };
    }
    let Some(lmax) = nonzero.iter().map(|l| l.abs()).reduce(f64::max) else {
        return Ok((PI, Some(0.5)));
    };
    let mut offender = None;
    for c in scale_candidates() {
        let tau = 2.0 * PI * c / lmax;
        match worst(tau) {
            Some((l, d)) if d < min_dist => {
                offender.get_or_insert(l);
            }
            _ => return Ok((tau, Some(c))),
        }
    }
    Err(Error::Config(format!(
        "eigenvalue {} cannot be kept {MIN_SEPARATION_BINS} clock bins from phase 0 with {} clock bits",
        offender.expect("some candidate failed"),
        cfg.clock_bits
    )))
}

/// Samples `β_n` by phase estimation of `exp(iτB)` on the uniform mixture
/// of non-degenerate `n`-simplices, `B` being the Dirac operator of the
/// normalized register.
///
/// The outcome distribution is simulated and checked against the Fejér
/// formula over the spectrum of `B`; the probability of clock value 0 is
/// checked against `dim ker / |nondeg_n|` within the leakage bound.
pub fn qpe_betti(x: &TruncatedSimplicialSet, n: usize, cfg: &QpeConfig) -> Result<QpeOutcome> {
    cfg.check()?;
    if n > x.cutoff() {
        return Err(Error::out_of_range("phase-estimation Betti number", n, x.cutoff()));
    }
    let view = normalized_complex(x)?;
    let nondeg = view.dim(n);
    if nondeg == 0 {
        return Err(Error::NoTarget(format!("no non-degenerate {n}-simplices")));
    }
    let dim = view.total_dim();
    let offset = view.offset(n);
    let support: Vec<usize> = (offset..offset + nondeg).collect();
    let b = dirac_matrix(&view).to_f64();
    let spec = SymSpectrum::of(&b)?;
    let kernel_dim = SymSpectrum::of_int(&view.laplacian(n))?.kernel_dim();
    let (tau, scale) = choose_tau(&spec, cfg)?;
    let bits = cfg.clock_bits;
    let size = 1usize << bits;

    // weight of each eigenvector in the initial mixture
    let weights: Vec<f64> = (0..dim)
        .map(|e| support.iter().map(|&s| spec.vectors[(s, e)].powi(2)).sum::<f64>() / nondeg as f64)
        .collect();
    let kernel_weight: f64 = (0..dim).filter(|&e| spec.is_zero_eigenvalue(spec.values[e])).map(|e| weights[e]).sum();
    let kernel_fraction = kernel_dim as f64 / nondeg as f64;
    if (kernel_weight - kernel_fraction).abs() > 1e-9 {
        return Err(Error::invariant(format!(
            "kernel of the Dirac operator carries weight {kernel_weight}, expected {kernel_fraction}"
        )));
    }
    let analytic: Vec<f64> = (0..size)
        .map(|m| {
            (0..dim)
                .map(|e| weights[e] * fejer(bits, tau * spec.values[e] / (2.0 * PI) - m as f64 / size as f64))
                .sum()
        })
        .collect();
    let leakage_bound: f64 = (0..dim)
        .filter(|&e| !spec.is_zero_eigenvalue(spec.values[e]))
        .map(|e| {
            let d = circular_distance(tau * spec.values[e] / (2.0 * PI));
            weights[e] * (1.0 / (4.0 * (size * size) as f64 * d * d)).min(1.0)
        })
        .sum();

    let powers: Vec<DMatrix<Complex64>> = (0..bits).map(|j| evolve_spectral(&spec, tau * (1u64 << j) as f64)).collect();
    let method = match cfg.method {
        MixedStateMethod::Auto if nondeg <= PURE_AVERAGE_LIMIT => MixedStateMethod::PureAverage,
        MixedStateMethod::Auto => MixedStateMethod::DensityEvolution,
        m => m,
    };
    let (distribution, post) = match method {
        MixedStateMethod::DensityEvolution => density_evolution(&powers, dim, &support)?,
        _ => pure_average(&powers, dim, &support),
    };
    let mismatch = distribution.iter().zip(&analytic).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if mismatch > DISTRIBUTION_TOL {
        return Err(Error::invariant(format!(
            "simulated outcome distribution differs from the spectral formula by {mismatch:e}"
        )));
    }
    let p_zero = distribution[0];
    if (p_zero - kernel_fraction).abs() > leakage_bound + DISTRIBUTION_TOL {
        return Err(Error::invariant(format!(
            "P(0) = {p_zero} is farther than {leakage_bound:e} from {kernel_fraction}"
        )));
    }

    let histogram = sample(&distribution, cfg.shots, cfg.seed)?;
    let hits = histogram.get(&0).copied().unwrap_or(0);
    let sampled_p_zero = if cfg.shots == 0 { 0.0 } else { hits as f64 / cfg.shots as f64 };

    let (post_measurement, kernel_residual, projector_deviation) = if p_zero > DISTRIBUTION_TOL {
        let rho = DensityMatrix::new(post / Complex64::new(p_zero, 0.0))?;
        let p = to_complex(&spec.kernel_projector());
        let inside = &p * &rho.matrix * &p;
        let residual = (&rho.matrix - inside).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let deviation = (kernel_dim > 0).then(|| {
            let mut target = DMatrix::<f64>::zeros(dim, dim);
            let kernel = SymSpectrum::of_int(&view.laplacian(n)).expect("checked above").kernel_projector();
            target.view_mut((offset, offset), (nondeg, nondeg)).copy_from(&(kernel / kernel_dim as f64));
            (&rho.matrix - to_complex(&target)).iter().map(|z| z.norm()).fold(0.0, f64::max)
        });
        (Some(rho), Some(residual), deviation)
    } else {
        (None, None, None)
    };

    Ok(QpeOutcome {
        report: QpeReport {
            degree: n,
            clock_bits: bits,
            tau,
            scale,
            method,
            nondegenerate: nondeg,
            kernel_dim,
            kernel_fraction,
            p_zero,
            leakage_bound,
            distribution,
            shots: cfg.shots,
            seed: cfg.seed,
            histogram,
            sampled_p_zero,
            betti_estimate: (sampled_p_zero * nondeg as f64).round() as usize,
            kernel_residual,
            projector_deviation,
            controlled_evolutions: bits,
            truncation_sensitive: n == x.cutoff(),
        },
        post_measurement,
    })
}

fn sample(distribution: &[f64], shots: usize, seed: u64) -> Result<BTreeMap<usize, usize>> {
    let mut histogram = BTreeMap::new();
    if shots == 0 {
        return Ok(histogram);
    }
    let weights: Vec<f64> = distribution.iter().map(|&p| p.max(0.0)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::invariant(format!("outcome distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..shots {
        *histogram.entry(dist.sample(&mut rng)).or_insert(0) += 1;
    }
    Ok(histogram)
}

/// Runs one pure phase estimation per basis state of the mixture and
/// averages outcome probabilities and the unnormalized clock-0 state.
fn pure_average(powers: &[DMatrix<Complex64>], dim: usize, support: &[usize]) -> (Vec<f64>, DMatrix<Complex64>) {
    let size = 1usize << powers.len();
    let w = 1.0 / support.len() as f64;
    let mut distribution = vec![0.0; size];
    let mut post = DMatrix::zeros(dim, dim);
    for &s in support {
        let mut psi = DVector::zeros(dim);
        psi[s] = Complex64::new(1.0, 0.0);
        let amps = phase_estimation(powers, &psi);
        for (p, a) in distribution.iter_mut().zip(&amps) {
            *p += w * a.norm_squared();
        }
        post += &amps[0] * amps[0].adjoint() * Complex64::new(w, 0.0);
    }
    (distribution, post)
}

/// Conjugates `|0⟩⟨0| ⊗ ρ` by the explicit unitary
/// `(F⁺ ⊗ 1)·(Σ_k |k⟩⟨k| ⊗ U^k)·(H^{⊗b} ⊗ 1)` and reads the clock blocks.
/// Cubic in `2^b · dim`.
fn density_evolution(
    powers: &[DMatrix<Complex64>],
    dim: usize,
    support: &[usize],
) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let bits = powers.len();
    let size = 1usize << bits;
    let total = size * dim;
    let rho0 = DensityMatrix::uniform_mixture(dim, support)?;
    let mut rho = DMatrix::zeros(total, total);
    rho.view_mut((0, 0), (dim, dim)).copy_from(&rho0.matrix);

    let amp = 1.0 / (size as f64).sqrt();
    let hadamard = DMatrix::from_fn(total, total, |r, c| {
        if r % dim != c % dim {
            return Complex64::new(0.0, 0.0);
        }
        let sign = if ((r / dim) & (c / dim)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::new(sign * amp, 0.0)
    });
    let mut controlled = DMatrix::zeros(total, total);
    let mut block = DMatrix::<Complex64>::identity(dim, dim);
    for k in 0..size {
        if k > 0 {
            let j = (usize::BITS - 1 - k.leading_zeros()) as usize;
            let lower = k - (1 << j);
            let base = controlled.view((lower * dim, lower * dim), (dim, dim)).clone_owned();
            block = &powers[j] * base;
        }
        controlled.view_mut((k * dim, k * dim), (dim, dim)).copy_from(&block);
    }
    let inverse_qft = DMatrix::from_fn(total, total, |r, c| {
        if r % dim != c % dim {
            return Complex64::new(0.0, 0.0);
        }
        let (m, k) = (r / dim, c / dim);
        Complex64::from_polar(amp, -2.0 * PI * ((m * k) % size) as f64 / size as f64)
    });
    let v = inverse_qft * controlled * hadamard;
    let evolved = DensityMatrix::new(&v * rho * v.adjoint())?;
    let distribution = (0..size)
        .map(|m| (0..dim).map(|a| evolved.matrix[(m * dim + a, m * dim + a)].re).sum())
        .collect();
    let post = evolved.matrix.view((0, 0), (dim, dim)).clone_owned();
    Ok((distribution, post))
}
