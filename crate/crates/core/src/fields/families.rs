//! Unit vector fields used as test subjects.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::calculus::NormalizedField;
use super::trig::{Phase, TrigVectorField};
use crate::algebra7::{Metric7, Vector7, DIM};
use crate::scalar::Real;

/// Total coefficient mass of the random part; keeps `|ξ_raw| ≥ 0.2`.
const PERTURBATION_MASS: f64 = 0.8;

fn random_wave(rng: &mut ChaCha8Rng, axes: &[usize], max_wave: i32) -> [i32; DIM] {
    loop {
        let mut w = [0; DIM];
        for &a in axes {
            w[a] = rng.random_range(-max_wave..=max_wave);
        }
        if w.iter().any(|k| *k != 0) {
            return w;
        }
    }
}

fn random_coeff<T: Real>(rng: &mut ChaCha8Rng, axes: &[usize], mass: f64) -> Vector7<T> {
    let mut c = [0.0; DIM];
    for &a in axes {
        c[a] = rng.random_range(-1.0..1.0);
    }
    let n = c.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    Vector7::from_fn(|a| T::lit(c[a] * mass / n))
}

fn perturbed_e7<T: Real>(seed: u64, terms: usize, max_wave: i32, coeff_axes: &[usize], wave_axes: &[usize]) -> TrigVectorField<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mass = PERTURBATION_MASS / terms.max(1) as f64;
    let mut f = TrigVectorField::constant(Vector7::basis(DIM - 1));
    for _ in 0..terms {
        let coeff = random_coeff(&mut rng, coeff_axes, mass);
        let wave = random_wave(&mut rng, wave_axes, max_wave);
        let phase = if rng.random_bool(0.5) { Phase::Cos } else { Phase::Sin };
        f = f.push(coeff, wave, phase);
    }
    f
}

/// `e₇` plus `terms` random waves of total amplitude below one, normalized.
/// The raw field never vanishes.
pub fn random_unit_field<T: Real>(seed: u64, terms: usize, max_wave: i32) -> NormalizedField<TrigVectorField<T>, T> {
    let all: Vec<usize> = (0..DIM).collect();
    NormalizedField::new_unchecked(perturbed_e7(seed, terms, max_wave, &all, &all), Metric7::identity())
}

/// A unit field with values in `span(e₅, e₆, e₇)` depending only on
/// `x¹ … x⁴`, so `∇_ξ ξ = 0` and `div ξ = 0` everywhere.
pub fn geodesic_unit_field<T: Real>(seed: u64, terms: usize, max_wave: i32) -> NormalizedField<TrigVectorField<T>, T> {
    let raw = perturbed_e7(seed, terms, max_wave, &[4, 5, 6], &[0, 1, 2, 3]);
    NormalizedField::new_unchecked(raw, Metric7::identity())
}

/// `c e₁ + s cos(m x¹) e₂ + s sin(m x¹) e₃` with `c² + s² = 1`.
///
/// Unit and divergence free; `∇_ξ ξ = c m s (-sin(m x¹) e₂ + cos(m x¹) e₃)`.
pub fn helix_field<T: Real>(c: f64, m: i32) -> TrigVectorField<T> {
    let s = (1.0 - c * c).sqrt();
    let mut wave = [0; DIM];
    wave[0] = m;
    TrigVectorField::constant(Vector7::basis(0) * T::lit(c))
        .push(Vector7::basis(1) * T::lit(s), wave, Phase::Cos)
        .push(Vector7::basis(2) * T::lit(s), wave, Phase::Sin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{DifferentiationContext, Field, LatticeSampling};

    #[test]
    fn random_fields_are_unit_and_deterministic() {
        let s = LatticeSampling::<f64>::subsample(8, 200, 1).unwrap();
        let f = random_unit_field::<f64>(7, 4, 2);
        let g = random_unit_field::<f64>(7, 4, 2);
        for x in s.points() {
            let v = f.value(&x);
            assert!((v.dot(&v) - 1.0).abs() < 1e-14);
            assert_eq!(v, g.value(&x));
            assert!({ let r = f.raw().value(&x); r.dot(&r) >= 0.04 - 1e-12 });
        }
    }

    #[test]
    fn geodesic_field_is_geodesic() {
        let f = geodesic_unit_field::<f64>(3, 3, 2);
        let ctx = DifferentiationContext::exact();
        let s = LatticeSampling::<f64>::subsample(8, 100, 2).unwrap();
        for x in s.points() {
            let j = ctx.jet(&f, &x);
            let along = (0..DIM).fold(Vector7::zero(), |acc, a| acc + j.partials[a] * j.value.0[a]);
            assert!(along.max_abs() < 1e-14);
        }
    }

    #[test]
    fn helix_is_unit_and_divergence_free() {
        let f = helix_field::<f64>(0.6, 2);
        let s = LatticeSampling::<f64>::subsample(8, 100, 3).unwrap();
        for x in s.points() {
            let j = f.jet(&x);
            assert!((j.value.dot(&j.value) - 1.0).abs() < 1e-14);
            let div: f64 = (0..DIM).map(|a| j.partials[a].0[a]).sum();
            assert!(div.abs() < 1e-14);
        }
    }
}
