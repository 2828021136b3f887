use serde::{Deserialize, Serialize};

use super::classes::ClassId;
use super::decompose::ClassNorms;
use crate::scalar::Real;

/// Points where `‖∇ω‖` is at most this are treated as parallel and satisfy
/// every type.
pub const PARALLEL_LOCUS: f64 = 1e-12;

/// Default relative threshold for a component to count as absent.
pub const DEFAULT_TOL_REL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedType {
    Cosymplectic,
    AlmostCosymplectic,
    QuasiSasakian,
    AKenmotsu,
    ASasakian,
    NearlyKCosymplectic,
    QuasiKCosymplectic,
    SemiCosymplectic,
    TransSasakian,
    NearlyTransSasakian,
    AlmostKContact,
    Normal,
}

impl NamedType {
    pub const ALL: [NamedType; 12] = [
        NamedType::Cosymplectic,
        NamedType::AlmostCosymplectic,
        NamedType::QuasiSasakian,
        NamedType::AKenmotsu,
        NamedType::ASasakian,
        NamedType::NearlyKCosymplectic,
        NamedType::QuasiKCosymplectic,
        NamedType::SemiCosymplectic,
        NamedType::TransSasakian,
        NamedType::NearlyTransSasakian,
        NamedType::AlmostKContact,
        NamedType::Normal,
    ];

    /// Class numbers whose direct sum defines the type.
    pub fn span(self) -> &'static [usize] {
        match self {
            NamedType::Cosymplectic => &[],
            NamedType::AlmostCosymplectic => &[2, 9],
            NamedType::QuasiSasakian => &[6, 7],
            NamedType::AKenmotsu => &[5],
            NamedType::ASasakian => &[6],
            NamedType::NearlyKCosymplectic => &[1],
            NamedType::QuasiKCosymplectic => &[1, 2, 9, 10],
            NamedType::SemiCosymplectic => &[1, 2, 3, 7, 8, 9, 10, 11, 12],
            NamedType::TransSasakian => &[5, 6],
            NamedType::NearlyTransSasakian => &[1, 5, 6],
            NamedType::AlmostKContact => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
            NamedType::Normal => &[3, 4, 5, 6, 7, 8],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedType::Cosymplectic => "cosymplectic",
            NamedType::AlmostCosymplectic => "almost cosymplectic",
            NamedType::QuasiSasakian => "quasi-Sasakian",
            NamedType::AKenmotsu => "a-Kenmotsu",
            NamedType::ASasakian => "a-Sasakian",
            NamedType::NearlyKCosymplectic => "nearly-K-cosymplectic",
            NamedType::QuasiKCosymplectic => "quasi-K-cosymplectic",
            NamedType::SemiCosymplectic => "semi-cosymplectic",
            NamedType::TransSasakian => "trans-Sasakian",
            NamedType::NearlyTransSasakian => "nearly trans-Sasakian",
            NamedType::AlmostKContact => "almost K-contact",
            NamedType::Normal => "normal",
        }
    }

    fn contains(self, other: NamedType) -> bool {
        other.span().iter().all(|c| self.span().contains(c))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeVerdict {
    pub name: NamedType,
    pub holds: bool,
    /// Largest `‖βᵢ‖ / ‖∇ω‖` over samples and classes outside the span.
    pub worst_ratio: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub verdicts: Vec<TypeVerdict>,
    /// Largest `‖βᵢ‖ / ‖∇ω‖` per class over non-parallel samples.
    pub class_ratios: [f64; 12],
    pub parallel_points: usize,
    pub total_points: usize,
    pub tolerance: f64,
}

impl ClassReport {
    pub fn holds(&self, t: NamedType) -> bool {
        self.verdicts.iter().any(|v| v.name == t && v.holds)
    }

    /// The holding types not strictly containing another holding type.
    pub fn most_specific(&self) -> Vec<NamedType> {
        let holding: Vec<NamedType> = self.verdicts.iter().filter(|v| v.holds).map(|v| v.name).collect();
        holding
            .iter()
            .copied()
            .filter(|t| !holding.iter().any(|o| o != t && t.contains(*o) && !o.contains(*t)))
            .collect()
    }

    /// Classes present somewhere above tolerance.
    pub fn present_classes(&self) -> Vec<ClassId> {
        ClassId::ALL.iter().zip(self.class_ratios).filter(|(_, r)| *r > self.tolerance).map(|(c, _)| *c).collect()
    }
}

/// Named types satisfied by a field, from the component norms at every sample.
pub fn classify<T: Real>(samples: &[ClassNorms<T>], tol_rel: f64) -> ClassReport {
    let mut class_ratios = [0.0f64; 12];
    let mut parallel_points = 0;
    for s in samples {
        let a = s.alpha_norm.to_f64_lossy();
        if a <= PARALLEL_LOCUS {
            parallel_points += 1;
            continue;
        }
        for (r, c) in class_ratios.iter_mut().zip(s.component) {
            *r = r.max(c.to_f64_lossy() / a);
        }
    }
    let verdicts = NamedType::ALL
        .iter()
        .map(|t| {
            let worst = (1..=12).filter(|k| !t.span().contains(k)).map(|k| class_ratios[k - 1]).fold(0.0, f64::max);
            TypeVerdict { name: *t, holds: worst <= tol_rel, worst_ratio: worst, tolerance: tol_rel }
        })
        .collect();
    ClassReport { verdicts, class_ratios, parallel_points, total_points: samples.len(), tolerance: tol_rel }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn only(k: usize) -> ClassNorms<f64> {
        let mut component = [0.0; 12];
        component[k - 1] = 2.0;
        ClassNorms { component, alpha_norm: 2.0 }
    }

    #[test]
    fn zero_is_cosymplectic() {
        let r = classify(&[ClassNorms { component: [0.0; 12], alpha_norm: 0.0 }], DEFAULT_TOL_REL);
        assert!(r.verdicts.iter().all(|v| v.holds));
        assert_eq!(r.most_specific(), vec![NamedType::Cosymplectic]);
        assert_eq!(r.parallel_points, 1);
    }

    #[test]
    fn pure_c6_is_a_sasakian() {
        let r = classify(&[only(6)], DEFAULT_TOL_REL);
        assert!(r.holds(NamedType::ASasakian));
        assert!(r.holds(NamedType::QuasiSasakian));
        assert!(r.holds(NamedType::TransSasakian));
        assert!(r.holds(NamedType::Normal));
        assert!(!r.holds(NamedType::AKenmotsu));
        assert!(!r.holds(NamedType::Cosymplectic));
        assert_eq!(r.most_specific(), vec![NamedType::ASasakian]);
    }

    #[test]
    fn c12_excludes_almost_k_contact() {
        let r = classify(&[only(12)], DEFAULT_TOL_REL);
        assert!(!r.holds(NamedType::AlmostKContact));
        assert!(r.holds(NamedType::SemiCosymplectic));
    }
}
