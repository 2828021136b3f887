use crate::acms::AlmostContactMetric;
use crate::algebra7::{Covector7, Matrix7, Metric7, Vector7, DIM};
use crate::scalar::Real;

pub(crate) const LEN: usize = DIM * DIM * DIM;

#[inline]
pub(crate) fn idx(a: usize, b: usize, c: usize) -> usize {
    49 * a + 7 * b + c
}

/// A covariant 3-tensor on the model space, components `α(e_a, e_b, e_c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovDeg3Tensor<T> {
    c: Vec<T>,
}

impl<T: Real> CovDeg3Tensor<T> {
    pub fn zero() -> Self {
        Self { c: vec![T::zero(); LEN] }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut c = Vec::with_capacity(LEN);
        for a in 0..DIM {
            for b in 0..DIM {
                for k in 0..DIM {
                    c.push(f(a, b, k));
                }
            }
        }
        Self { c }
    }

    /// Components in `49a + 7b + c` order; `None` unless there are 343.
    pub fn from_vec(c: Vec<T>) -> Option<Self> {
        (c.len() == LEN).then_some(Self { c })
    }

    pub fn as_slice(&self) -> &[T] {
        &self.c
    }

    pub fn into_vec(self) -> Vec<T> {
        self.c
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> T {
        self.c[idx(a, b, c)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: T) {
        self.c[idx(a, b, c)] = v;
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { c: self.c.iter().zip(&o.c).map(|(x, y)| *x + *y).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { c: self.c.iter().zip(&o.c).map(|(x, y)| *x - *y).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { c: self.c.iter().map(|x| *x * s).collect() }
    }

    /// Sum of componentwise products: the tensor inner product in an
    /// orthonormal frame.
    pub fn dot(&self, o: &Self) -> T {
        self.c.iter().zip(&o.c).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.c.iter().fold(T::zero(), |acc, x| acc.max(x.abs()))
    }

    pub fn eval(&self, x: &Vector7<T>, y: &Vector7<T>, z: &Vector7<T>) -> T {
        let mut s = T::zero();
        for a in 0..DIM {
            if x.0[a] == T::zero() {
                continue;
            }
            for b in 0..DIM {
                let xy = x.0[a] * y.0[b];
                if xy == T::zero() {
                    continue;
                }
                for c in 0..DIM {
                    s = s + xy * z.0[c] * self.get(a, b, c);
                }
            }
        }
        s
    }

    /// Replaces slot `slot` by `M`: `out(…, i, …) = α(…, M e_i, …)`.
    pub fn contract_slot(&self, slot: usize, m: &Matrix7<T>) -> Self {
        let mut out = Self::zero();
        for a in 0..DIM {
            for b in 0..DIM {
                for c in 0..DIM {
                    let v = self.get(a, b, c);
                    if v == T::zero() {
                        continue;
                    }
                    let (s, fixed): (usize, [usize; 3]) = match slot {
                        0 => (a, [usize::MAX, b, c]),
                        1 => (b, [a, usize::MAX, c]),
                        _ => (c, [a, b, usize::MAX]),
                    };
                    for i in 0..DIM {
                        let w = m.0[s][i];
                        if w == T::zero() {
                            continue;
                        }
                        let mut t = fixed;
                        t[slot.min(2)] = i;
                        out.c[idx(t[0], t[1], t[2])] = out.c[idx(t[0], t[1], t[2])] + w * v;
                    }
                }
            }
        }
        out
    }

    /// `out(i, j, k) = α(M e_i, M e_j, M e_k)`. With `M` the matrix of a
    /// frame this gives the frame components; with its inverse it maps frame
    /// components back to coordinates.
    pub fn transform(&self, m: &Matrix7<T>) -> Self {
        self.contract_slot(0, m).contract_slot(1, m).contract_slot(2, m)
    }

    /// `⟨α, β⟩ = Σ g^{aa'} g^{bb'} g^{cc'} α_{abc} β_{a'b'c'}`.
    pub fn inner(&self, o: &Self, metric: &Metric7<T>) -> T {
        if metric.is_identity() {
            return self.dot(o);
        }
        self.dot(&o.transform(metric.inverse()))
    }

    /// `c₁₂α(z) = Σ g^{ab} α(e_a, e_b, z)`.
    pub fn c12(&self, metric: &Metric7<T>) -> Covector7<T> {
        let gi = metric.inverse();
        Covector7(std::array::from_fn(|z| {
            let mut s = T::zero();
            for a in 0..DIM {
                for b in 0..DIM {
                    s = s + gi.0[a][b] * self.get(a, b, z);
                }
            }
            s
        }))
    }

    /// `c̄₁₂α(z) = Σ g^{ab} α(e_a, φ e_b, z)`.
    pub fn c12bar(&self, metric: &Metric7<T>, phi: &Matrix7<T>) -> Covector7<T> {
        self.contract_slot(1, phi).c12(metric)
    }

    /// `max |α(x, y, z) + α(x, z, y)|` over basis triples.
    pub fn antisymmetry_residual(&self) -> T {
        let mut r = T::zero();
        for a in 0..DIM {
            for b in 0..DIM {
                for c in 0..DIM {
                    r = r.max((self.get(a, b, c) + self.get(a, c, b)).abs());
                }
            }
        }
        r
    }

    /// `max |α(x,y,z) + α(x,φy,φz) - η(y)α(x,ξ,z) - η(z)α(x,y,ξ)|`.
    pub fn phi_relation_residual(&self, acms: &AlmostContactMetric<T>) -> T {
        let phi = acms.phi();
        let xi = acms.xi();
        let eta = acms.eta();
        let app = self.contract_slot(1, phi).contract_slot(2, phi);
        let mut r = T::zero();
        for a in 0..DIM {
            let xa = Vector7::basis(a);
            for b in 0..DIM {
                for c in 0..DIM {
                    let mut v = self.get(a, b, c) + app.get(a, b, c);
                    if eta.0[b] != T::zero() {
                        v = v - eta.0[b] * self.eval(&xa, xi, &Vector7::basis(c));
                    }
                    if eta.0[c] != T::zero() {
                        v = v - eta.0[c] * self.eval(&xa, &Vector7::basis(b), xi);
                    }
                    r = r.max(v.abs());
                }
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CovDeg3Tensor<f64> {
        CovDeg3Tensor::from_fn(|a, b, c| ((a * 31 + b * 7 + c * 3) % 11) as f64 - 5.0)
    }

    #[test]
    fn transform_matches_evaluation() {
        let t = sample();
        let m = Matrix7::from_fn(|i, j| ((i * 3 + j * 5) % 7) as f64 * 0.1 - 0.2);
        let tt = t.transform(&m);
        for (i, j, k) in [(0, 1, 2), (6, 3, 3), (4, 0, 5)] {
            let direct = t.eval(&m.column(i), &m.column(j), &m.column(k));
            assert!((tt.get(i, j, k) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_transform_round_trips() {
        let t = sample();
        let m = Matrix7::from_fn(|i, j| if i == j { 2.0 } else { 0.1 * (i as f64 - j as f64) });
        let back = t.transform(&m).transform(&m.inverse().unwrap());
        assert!(back.sub(&t).max_abs() < 1e-11);
    }
}
