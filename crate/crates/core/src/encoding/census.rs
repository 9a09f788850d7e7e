use num_integer::binomial;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sset::TruncatedSimplicialSet;

/// Simplex counts of a truncation and the register width needed to hold
/// all of them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub totals: Vec<u64>,
    pub nondegenerate: Vec<u64>,
    /// `|X_n| / |nondeg_n|`, absent when there are no non-degenerate simplices.
    pub ratios: Vec<Option<f64>>,
    pub truncation_total: u64,
    pub kappa: u32,
}

/// Smallest `l` with `total ≤ 2^l`.
pub fn register_width(total: u64) -> u32 {
    if total <= 1 {
        0
    } else {
        u64::BITS - (total - 1).leading_zeros()
    }
}

/// `|X_n| = Σ_m C(n, m)·|nondeg_m|`, each simplex being a unique degeneracy
/// string applied to a non-degenerate base.
pub fn recombine(nondegenerate: &[u64], n: usize) -> u64 {
    (0..=n).map(|m| binomial(n as u64, m as u64) * nondegenerate[m]).sum()
}

/// Counts every degree by enumeration and checks them against the binomial
/// recombination of the non-degenerate counts.
pub fn census(x: &TruncatedSimplicialSet) -> Result<CensusReport> {
    let totals: Vec<u64> = x.counts().iter().map(|&c| c as u64).collect();
    let nondegenerate: Vec<u64> = x.nondegenerate_counts().iter().map(|&c| c as u64).collect();
    for (n, &t) in totals.iter().enumerate() {
        let r = recombine(&nondegenerate, n);
        if r != t {
            return Err(Error::invariant(format!(
                "degree {n} has {t} simplices but recombination gives {r}"
            )));
        }
    }
    let ratios = totals
        .iter()
        .zip(&nondegenerate)
        .map(|(&t, &c)| (c > 0).then(|| t as f64 / c as f64))
        .collect();
    let truncation_total = totals.iter().sum();
    Ok(CensusReport {
        kappa: register_width(truncation_total),
        totals,
        nondegenerate,
        ratios,
        truncation_total,
    })
}

/// Closed forms for the nerve of a group of the given order.
pub mod nerve_counts {
    pub fn total(order: u64, n: u32) -> u64 {
        order.pow(n)
    }

    pub fn nondegenerate(order: u64, n: u32) -> u64 {
        (order - 1).pow(n)
    }

    /// `(|G|^{N+1} − 1)/(|G| − 1)`, or `N + 1` for the trivial group.
    pub fn truncation_total(order: u64, cutoff: u32) -> u64 {
        if order == 1 {
            cutoff as u64 + 1
        } else {
            (order.pow(cutoff + 1) - 1) / (order - 1)
        }
    }
}

/// Closed forms for the simplicial set of the full complex on `d + 1` vertices.
pub mod complex_counts {
    use num_integer::binomial;

    pub fn total(d: u64, n: u64) -> u64 {
        binomial(d + n + 1, n + 1)
    }

    pub fn nondegenerate(d: u64, n: u64) -> u64 {
        if n > d {
            0
        } else {
            binomial(d + 1, n + 1)
        }
    }

    /// `C(d + N + 2, d + 1) − 1`.
    pub fn truncation_total(d: u64, cutoff: u64) -> u64 {
        binomial(d + cutoff + 2, d + 1) - 1
    }
}
