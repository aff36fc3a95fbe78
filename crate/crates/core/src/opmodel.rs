//! Operator models and their spectral profiles.

use std::fmt;

use thiserror::Error;

use crate::num::ComplexRational;
use crate::specset::SpecSet;

/// Which spectrum `σ_*` a statement refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpectrumKind {
    Sigma,
    Browder,
    Drazin,
}

impl SpectrumKind {
    pub const ALL: [SpectrumKind; 3] = [SpectrumKind::Sigma, SpectrumKind::Browder, SpectrumKind::Drazin];

    pub fn name(self) -> &'static str {
        match self {
            SpectrumKind::Sigma => "sigma",
            SpectrumKind::Browder => "browder",
            SpectrumKind::Drazin => "drazin",
        }
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SpectrumKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sigma" => Ok(SpectrumKind::Sigma),
            "browder" => Ok(SpectrumKind::Browder),
            "drazin" => Ok(SpectrumKind::Drazin),
            other => Err(format!("unknown spectrum kind `{other}`")),
        }
    }
}

/// A broken profile invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Violation {
    EmptySpectrum,
    EssentialNotInBrowder,
    BrowderNotInSpectrum,
    DrazinNotInBrowder,
    AccNotInDrazin,
    BrowderIdentity,
    Unrealizable,
    NotCountable,
    ZeroInSpectrum,
    EmptySum,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::EmptySpectrum => "sigma is empty",
            Violation::EssentialNotInBrowder => "sigma_e is not contained in sigma_b",
            Violation::BrowderNotInSpectrum => "sigma_b is not contained in sigma",
            Violation::DrazinNotInBrowder => "sigma_d is not contained in sigma_b",
            Violation::AccNotInDrazin => "acc sigma is not contained in sigma_d",
            Violation::BrowderIdentity => "sigma_b differs from sigma_e union acc sigma",
            Violation::Unrealizable => "acc sigma minus the perfect kernel is not contained in sigma_e",
            Violation::NotCountable => "diagonal spectrum is not countable",
            Violation::ZeroInSpectrum => "invertible atom has 0 in its spectrum",
            Violation::EmptySum => "direct sum has no summands",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid model: {}", join(.0))]
    Invalid(Vec<Violation>),
}

fn join(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// The spectrum, essential, Browder and Drazin spectra of an operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralProfile {
    pub sigma: SpecSet,
    pub sigma_e: SpecSet,
    pub sigma_b: SpecSet,
    pub sigma_d: SpecSet,
}

impl SpectralProfile {
    /// Profile with `σ_e = σ_b = σ_d = acc σ`.
    pub fn diagonal(sigma: SpecSet) -> Self {
        let a = sigma.acc();
        SpectralProfile {
            sigma,
            sigma_e: a.clone(),
            sigma_b: a.clone(),
            sigma_d: a,
        }
    }

    /// Profile from explicit sets; omitted sets default to the smallest
    /// choice allowed by the invariants.
    pub fn explicit(sigma: SpecSet, e: Option<SpecSet>, b: Option<SpecSet>, d: Option<SpecSet>) -> Self {
        let a = sigma.acc();
        let sigma_e = e.unwrap_or_else(|| a.clone());
        let sigma_b = b.unwrap_or_else(|| sigma_e.union(&a));
        let sigma_d = d.unwrap_or(a);
        SpectralProfile {
            sigma,
            sigma_e,
            sigma_b,
            sigma_d,
        }
    }

    pub fn quasinilpotent() -> Self {
        let zero = SpecSet::point(ComplexRational::zero());
        SpectralProfile {
            sigma: zero.clone(),
            sigma_e: zero.clone(),
            sigma_b: zero.clone(),
            sigma_d: zero,
        }
    }

    pub fn get(&self, kind: SpectrumKind) -> &SpecSet {
        match kind {
            SpectrumKind::Sigma => &self.sigma,
            SpectrumKind::Browder => &self.sigma_b,
            SpectrumKind::Drazin => &self.sigma_d,
        }
    }

    pub fn map(&self, f: impl Fn(&SpecSet) -> SpecSet) -> Self {
        SpectralProfile {
            sigma: f(&self.sigma),
            sigma_e: f(&self.sigma_e),
            sigma_b: f(&self.sigma_b),
            sigma_d: f(&self.sigma_d),
        }
    }

    pub fn union(&self, other: &SpectralProfile) -> Self {
        SpectralProfile {
            sigma: self.sigma.union(&other.sigma),
            sigma_e: self.sigma_e.union(&other.sigma_e),
            sigma_b: self.sigma_b.union(&other.sigma_b),
            sigma_d: self.sigma_d.union(&other.sigma_d),
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let acc = self.sigma.acc();
        if self.sigma.is_empty() {
            out.push(Violation::EmptySpectrum);
        }
        if !self.sigma_e.subset(&self.sigma_b) {
            out.push(Violation::EssentialNotInBrowder);
        }
        if !self.sigma_b.subset(&self.sigma) {
            out.push(Violation::BrowderNotInSpectrum);
        }
        if !self.sigma_d.subset(&self.sigma_b) {
            out.push(Violation::DrazinNotInBrowder);
        }
        if !acc.subset(&self.sigma_d) {
            out.push(Violation::AccNotInDrazin);
        }
        if !self.sigma_b.equal(&self.sigma_e.union(&acc)) {
            out.push(Violation::BrowderIdentity);
        }
        if !acc.subset(&self.sigma_e.union(&self.sigma.perfect_kernel())) {
            out.push(Violation::Unrealizable);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorModel {
    Diagonal(SpecSet),
    Explicit(SpectralProfile),
    Invertible(SpectralProfile),
    Quasinilpotent,
    DirectSum(Vec<OperatorModel>),
    /// `T - λI` for the child `T`.
    Shifted(Box<OperatorModel>, ComplexRational),
    Dual(Box<OperatorModel>),
}

impl OperatorModel {
    pub fn diagonal(s: SpecSet) -> Result<Self, ModelError> {
        OperatorModel::Diagonal(s).validated()
    }

    pub fn explicit(p: SpectralProfile) -> Result<Self, ModelError> {
        OperatorModel::Explicit(p).validated()
    }

    /// Invertible atom with `σ = s` and the diagonal profile.
    pub fn invertible(s: SpecSet) -> Result<Self, ModelError> {
        OperatorModel::Invertible(SpectralProfile::diagonal(s)).validated()
    }

    pub fn direct_sum(children: Vec<OperatorModel>) -> Result<Self, ModelError> {
        OperatorModel::DirectSum(children).validated()
    }

    pub fn shifted(self, lambda: ComplexRational) -> Self {
        OperatorModel::Shifted(Box::new(self), lambda)
    }

    pub fn dual(self) -> Self {
        OperatorModel::Dual(Box::new(self))
    }

    fn validated(self) -> Result<Self, ModelError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(ModelError::Invalid(v))
        }
    }

    /// Every violated invariant in the tree, without duplicates.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        self.collect_violations(&mut out);
        let mut seen = Vec::new();
        out.retain(|v| {
            let fresh = !seen.contains(v);
            seen.push(*v);
            fresh
        });
        out
    }

    fn collect_violations(&self, out: &mut Vec<Violation>) {
        match self {
            OperatorModel::Diagonal(s) => {
                if !s.is_countable() {
                    out.push(Violation::NotCountable);
                }
                if s.is_empty() {
                    out.push(Violation::EmptySpectrum);
                }
            }
            OperatorModel::Explicit(p) => out.extend(p.violations()),
            OperatorModel::Invertible(p) => {
                if p.sigma.member(&ComplexRational::zero()) {
                    out.push(Violation::ZeroInSpectrum);
                }
                out.extend(p.violations());
            }
            OperatorModel::Quasinilpotent => {}
            OperatorModel::DirectSum(cs) => {
                if cs.is_empty() {
                    out.push(Violation::EmptySum);
                }
                for c in cs {
                    c.collect_violations(out);
                }
            }
            OperatorModel::Shifted(m, _) | OperatorModel::Dual(m) => m.collect_violations(out),
        }
    }

    /// Profile of the model; the model must validate.
    pub fn profile(&self) -> SpectralProfile {
        match self {
            OperatorModel::Diagonal(s) => SpectralProfile::diagonal(s.clone()),
            OperatorModel::Explicit(p) | OperatorModel::Invertible(p) => p.clone(),
            OperatorModel::Quasinilpotent => SpectralProfile::quasinilpotent(),
            OperatorModel::DirectSum(cs) => {
                let mut it = cs.iter().map(OperatorModel::profile);
                let first = it.next().unwrap_or_else(|| SpectralProfile {
                    sigma: SpecSet::empty(),
                    sigma_e: SpecSet::empty(),
                    sigma_b: SpecSet::empty(),
                    sigma_d: SpecSet::empty(),
                });
                it.fold(first, |acc, p| acc.union(&p))
            }
            OperatorModel::Shifted(m, lambda) => {
                let shift = -lambda;
                m.profile().map(|s| s.translate(&shift))
            }
            OperatorModel::Dual(m) => m.profile(),
        }
    }

    pub fn spectrum(&self, kind: SpectrumKind) -> SpecSet {
        self.profile().get(kind).clone()
    }
}

fn fmt_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{it}")?;
    }
    Ok(())
}

impl fmt::Display for OperatorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorModel::Diagonal(s) => write!(f, "diag({s})"),
            OperatorModel::Explicit(p) => write!(
                f,
                "explicit(sigma={}, e={}, b={}, d={})",
                p.sigma, p.sigma_e, p.sigma_b, p.sigma_d
            ),
            OperatorModel::Invertible(p) => write!(f, "invertible({})", p.sigma),
            OperatorModel::Quasinilpotent => f.write_str("qnil"),
            OperatorModel::DirectSum(cs) => {
                f.write_str("dsum(")?;
                fmt_list(f, cs)?;
                f.write_str(")")
            }
            OperatorModel::Shifted(m, z) => write!(f, "mshift({m}, {z})"),
            OperatorModel::Dual(m) => write!(f, "dual({m})"),
        }
    }
}
