//! Workloads shared by the benchmarks.

use spectra_core::analysis;
use spectra_core::diagonal::{self, DiagonalOperator, IdentityReport};
use spectra_core::{Ordinal, SpecSet, SpectrumKind};

/// Applies `acc` `n` times.
pub fn iterated_acc(s: &SpecSet, n: u64) -> SpecSet {
    (0..n).fold(s.clone(), |acc, _| acc.acc())
}

/// Realizes a diagonal model and checks the identity clauses at `depth`.
pub fn identity_run(m: &spectra_core::OperatorModel, alpha: &Ordinal, depth: usize) -> Option<IdentityReport> {
    let cut = analysis::find_spectral_set(m, SpectrumKind::Sigma, alpha).ok()?;
    let t = DiagonalOperator::realize(&m.spectrum(SpectrumKind::Sigma)).ok()?;
    let s = diagonal::drazin_like_inverse(&t, &cut.radius).ok()?;
    Some(diagonal::verify_identities(&t, &s, &cut.radius, alpha, SpectrumKind::Sigma, depth))
}
