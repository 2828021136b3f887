use serde::{Deserialize, Serialize};

use super::classes::ClassId;
use super::invariants::QuadraticInvariants;
use crate::scalar::Real;

/// A quantity a relation can refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    /// `i_m`, 1-based.
    I(usize),
    NormSq,
    C12NormSq,
    C12BarNormSq,
    /// `Σ_{k ≤ 6} c₁₂α(e_k)²`
    C12PerpSq,
}

impl Quantity {
    fn eval<T: Real>(self, inv: &QuadraticInvariants<T>) -> T {
        match self {
            Quantity::I(m) => inv.get(m),
            Quantity::NormSq => inv.norm_sq,
            Quantity::C12NormSq => inv.c12_norm_sq(),
            Quantity::C12BarNormSq => inv.c12bar_norm_sq(),
            Quantity::C12PerpSq => inv.c12_perp_sq(),
        }
    }

    fn label(self) -> String {
        match self {
            Quantity::I(m) => format!("i{m}"),
            Quantity::NormSq => "|a|^2".into(),
            Quantity::C12NormSq => "|c12 a|^2".into(),
            Quantity::C12BarNormSq => "|c12bar a|^2".into(),
            Quantity::C12PerpSq => "sum_k c12(e_k)^2".into(),
        }
    }
}

/// `Σ coeff · quantity = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub label: String,
    pub terms: Vec<(f64, Quantity)>,
}

impl Relation {
    fn new(terms: Vec<(f64, Quantity)>) -> Self {
        let mut label = String::new();
        let (lhs, rhs): (Vec<_>, Vec<_>) = terms.iter().partition(|(c, _)| *c > 0.0);
        let side = |v: &[&(f64, Quantity)]| -> String {
            if v.is_empty() {
                return "0".into();
            }
            v.iter()
                .map(|(c, q)| {
                    let c = c.abs();
                    if c == 1.0 {
                        q.label()
                    } else {
                        format!("{c}*{}", q.label())
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        label.push_str(&side(&lhs));
        label.push_str(" = ");
        label.push_str(&side(&rhs));
        Self { label, terms }
    }

    /// `a·x = b·y`
    fn eq(a: f64, x: Quantity, b: f64, y: Quantity) -> Self {
        Self::new(vec![(a, x), (-b, y)])
    }

    fn zero(m: usize) -> Self {
        Self::new(vec![(1.0, Quantity::I(m))])
    }

    pub fn residual<T: Real>(&self, inv: &QuadraticInvariants<T>) -> T {
        self.terms.iter().fold(T::zero(), |s, (c, q)| s + T::lit(*c) * q.eval(inv))
    }
}

/// Which version of the per-class relation rows to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationTable {
    /// The classical rows, with the `C₄` proportionality constant and the
    /// `C₇` sign of `i₁₂` fixed by projection, and the three norm
    /// identities in their classical form.
    Classical,
    /// As [`Self::Classical`], but with the `(ξ, ξ, ·)` block counted twice
    /// in `‖α‖²`, which changes the `C₁₂` row to `i₁₆ = ‖α‖²/2`.
    Corrected,
}

const A_SET: [usize; 12] = [1, 2, 3, 4, 5, 7, 11, 13, 15, 16, 17, 18];

fn zeros_except(keep: &[usize]) -> impl Iterator<Item = Relation> + '_ {
    (1..=18).filter(move |m| !keep.contains(m)).map(Relation::zero)
}

/// The relations holding on a single class.
pub fn relations(class: ClassId, table: RelationTable) -> Vec<Relation> {
    use Quantity::{I, NormSq};
    let n = 3.0;
    let mut r = Vec::new();
    let half_norm = |r: &mut Vec<Relation>, signs: [f64; 4]| {
        for (m, s) in [6, 8, 9, 12].into_iter().zip(signs) {
            r.push(Relation::eq(s, I(m), 0.5, NormSq));
        }
        r.push(Relation::zero(10));
        r.push(Relation::zero(14));
        r.extend(A_SET.iter().map(|m| Relation::zero(*m)));
    };
    match class {
        ClassId::C1 => {
            r.push(Relation::eq(1.0, I(1), 1.0, NormSq));
            r.push(Relation::eq(-1.0, I(2), 1.0, NormSq));
            r.push(Relation::eq(-1.0, I(3), 1.0, NormSq));
            r.extend((4..=18).map(Relation::zero));
        }
        ClassId::C2 => {
            r.push(Relation::eq(1.0, I(1), 1.0, NormSq));
            r.push(Relation::eq(2.0, I(2), 1.0, NormSq));
            r.push(Relation::eq(-1.0, I(3), 1.0, NormSq));
            r.extend((4..=18).map(Relation::zero));
        }
        ClassId::C3 => {
            r.push(Relation::eq(1.0, I(1), 1.0, NormSq));
            r.push(Relation::eq(1.0, I(3), 1.0, NormSq));
            r.push(Relation::zero(2));
            r.extend((4..=18).map(Relation::zero));
        }
        ClassId::C4 => {
            // Projection gives i₁ = i₃ = 2/(n-1) · i₄.
            let k = 2.0 / (n - 1.0);
            r.push(Relation::eq(1.0, I(1), 1.0, I(3)));
            r.push(Relation::eq(1.0, I(1), k, I(4)));
            r.push(Relation::eq(1.0, I(4), 1.0, Quantity::C12PerpSq));
            r.push(Relation::zero(2));
            r.extend((5..=18).map(Relation::zero));
        }
        ClassId::C5 => {
            for (m, s) in [(6, 1.0), (8, -1.0), (9, 1.0), (12, -1.0)] {
                r.push(Relation::eq(s, I(m), 1.0 / (2.0 * n), I(14)));
            }
            r.push(Relation::zero(10));
            r.extend(A_SET.iter().map(|m| Relation::zero(*m)));
        }
        ClassId::C6 => {
            for m in [6, 8, 9, 12] {
                r.push(Relation::eq(1.0, I(m), 1.0 / (2.0 * n), I(10)));
            }
            r.push(Relation::zero(14));
            r.extend(A_SET.iter().map(|m| Relation::zero(*m)));
        }
        // Projection gives i₁₂ = +‖α‖²/2 on C₇.
        ClassId::C7 => half_norm(&mut r, [1.0, 1.0, 1.0, 1.0]),
        ClassId::C8 => half_norm(&mut r, [1.0, -1.0, 1.0, -1.0]),
        ClassId::C9 => half_norm(&mut r, [1.0, 1.0, -1.0, -1.0]),
        ClassId::C10 => half_norm(&mut r, [1.0, -1.0, -1.0, 1.0]),
        ClassId::C11 => {
            r.push(Relation::eq(1.0, I(5), 1.0, NormSq));
            r.extend(zeros_except(&[5]));
        }
        ClassId::C12 => {
            let k = match table {
                RelationTable::Classical => 1.0,
                RelationTable::Corrected => 2.0,
            };
            r.push(Relation::eq(k, I(16), 1.0, NormSq));
            r.extend(zeros_except(&[16]));
        }
        ClassId::D1 | ClassId::D2 => {}
    }
    let k16 = match table {
        RelationTable::Classical => 1.0,
        RelationTable::Corrected => 2.0,
    };
    r.push(Relation::new(vec![
        (1.0, NormSq),
        (-1.0, I(1)),
        (-1.0, I(5)),
        (-2.0, I(6)),
        (-k16, I(16)),
    ]));
    r.push(Relation::new(vec![
        (1.0, Quantity::C12NormSq),
        (-1.0, I(4)),
        (-1.0, I(10)),
        (-1.0, I(16)),
        (-2.0, I(17)),
    ]));
    r.push(Relation::new(vec![(1.0, Quantity::C12BarNormSq), (-1.0, I(4)), (-1.0, I(14))]));
    r
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationOutcome {
    pub label: String,
    /// `|residual| / ‖α‖²`
    pub relative_residual: f64,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub class: ClassId,
    pub tolerance: f64,
    pub outcomes: Vec<RelationOutcome>,
}

impl RelationReport {
    pub fn all_satisfied(&self) -> bool {
        self.outcomes.iter().all(|o| o.satisfied)
    }

    pub fn violations(&self) -> impl Iterator<Item = &RelationOutcome> {
        self.outcomes.iter().filter(|o| !o.satisfied)
    }
}

/// Evaluates every relation of `class` on the invariants of a tensor
/// assumed to lie in that class.
pub fn relation_check<T: Real>(
    class: ClassId,
    inv: &QuadraticInvariants<T>,
    table: RelationTable,
    tol_rel: f64,
) -> RelationReport {
    let scale = inv.norm_sq.to_f64_lossy().max(f64::MIN_POSITIVE);
    let outcomes = relations(class, table)
        .into_iter()
        .map(|rel| {
            let rr = rel.residual(inv).to_f64_lossy().abs() / scale;
            RelationOutcome { label: rel.label, relative_residual: rr, satisfied: rr <= tol_rel }
        })
        .collect();
    RelationReport { class, tolerance: tol_rel, outcomes }
}
