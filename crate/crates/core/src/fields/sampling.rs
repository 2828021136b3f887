use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra7::{Vector7, DIM};
use crate::error::{Error, Result};
use crate::scalar::Real;

const MIN_RESOLUTION: usize = 4;

#[derive(Clone, Debug, PartialEq)]
enum Layout {
    Full,
    Subsample(Vec<usize>),
}

/// Points of the uniform grid `(2π/N)·ℤ⁷` on the torus, either all `N⁷` of
/// them or a seeded random subset.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSampling<T> {
    resolution: usize,
    layout: Layout,
    _scalar: std::marker::PhantomData<T>,
}

impl<T: Real> LatticeSampling<T> {
    pub fn full_grid(resolution: usize) -> Result<Self> {
        Self::check_resolution(resolution)?;
        Ok(Self { resolution, layout: Layout::Full, _scalar: std::marker::PhantomData })
    }

    /// `count` distinct grid points drawn without replacement. The same seed
    /// always gives the same points.
    pub fn subsample(resolution: usize, count: usize, seed: u64) -> Result<Self> {
        Self::check_resolution(resolution)?;
        let total = Self::grid_size(resolution)?;
        if count == 0 || count > total {
            return Err(Error::InvalidSampling(format!("subsample count {count} outside 1..={total}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = rand::seq::index::sample(&mut rng, total, count).into_vec();
        idx.sort_unstable();
        Ok(Self { resolution, layout: Layout::Subsample(idx), _scalar: std::marker::PhantomData })
    }

    fn check_resolution(resolution: usize) -> Result<()> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::InvalidSampling(format!("resolution {resolution} below {MIN_RESOLUTION}")));
        }
        Self::grid_size(resolution).map(|_| ())
    }

    fn grid_size(resolution: usize) -> Result<usize> {
        resolution
            .checked_pow(DIM as u32)
            .ok_or_else(|| Error::InvalidSampling(format!("resolution {resolution} overflows the grid size")))
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn is_full_grid(&self) -> bool {
        matches!(self.layout, Layout::Full)
    }

    pub fn len(&self) -> usize {
        match &self.layout {
            Layout::Full => self.resolution.pow(DIM as u32),
            Layout::Subsample(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Linear grid index of the `k`-th sample.
    pub fn grid_index(&self, k: usize) -> usize {
        match &self.layout {
            Layout::Full => k,
            Layout::Subsample(v) => v[k],
        }
    }

    pub fn point(&self, k: usize) -> Vector7<T> {
        let mut lin = self.grid_index(k);
        let step = T::lit(2.0 * std::f64::consts::PI / self.resolution as f64);
        let mut x = [T::zero(); DIM];
        for xa in x.iter_mut() {
            *xa = step * T::lit((lin % self.resolution) as f64);
            lin /= self.resolution;
        }
        Vector7(x)
    }

    pub fn points(&self) -> impl Iterator<Item = Vector7<T>> + '_ {
        (0..self.len()).map(move |k| self.point(k))
    }

    /// Applies `f` to every sample in parallel; results are in sample order.
    pub fn par_map<R, F>(&self, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize, &Vector7<T>) -> R + Sync + Send,
    {
        (0..self.len()).into_par_iter().map(|k| f(k, &self.point(k))).collect()
    }

    /// Like [`Self::par_map`] but stops at the first error in sample order.
    pub fn try_par_map<R, F>(&self, f: F) -> Result<Vec<R>>
    where
        R: Send,
        F: Fn(usize, &Vector7<T>) -> Result<R> + Sync + Send,
    {
        self.par_map(f).into_iter().collect()
    }
}

/// `∫_{T⁷} f` by the rectangle rule on the full grid, which is exact for
/// trigonometric polynomials of degree below the resolution.
///
/// Partial sums are taken over fixed chunks and combined in order, so the
/// result does not depend on the thread count.
pub fn integrate<T, F>(f: F, sampling: &LatticeSampling<T>) -> Result<T>
where
    T: Real,
    F: Fn(&Vector7<T>) -> T + Sync + Send,
{
    if !sampling.is_full_grid() {
        return Err(Error::QuadratureRequiresFullGrid);
    }
    const CHUNK: usize = 4096;
    let n = sampling.len();
    let partial: Vec<T> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(n)).fold(T::zero(), |acc, k| acc + f(&sampling.point(k)))
        })
        .collect();
    let total = partial.into_iter().fold(T::zero(), |a, b| a + b);
    let vol = T::lit((2.0 * std::f64::consts::PI).powi(DIM as i32));
    Ok(total / T::lit(n as f64) * vol)
}
