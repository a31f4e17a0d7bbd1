//! Symmetric covariance matrices with a cached triangular factorization,
//! quadratic-form solves and Gaussian path sampling.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rates::GridPath;
use crate::rng::SimRng;
use crate::theory::variance::{current_cov, VarianceSpec};

/// Relative diagonal jitter allowed before a matrix is flagged singular.
pub const CHOL_JITTER_REL: f64 = 1e-12;

/// Outcome of the factorization attempt.
#[derive(Debug, Clone)]
pub enum Factor {
    /// Strictly positive pivots: full-rank lower-triangular factor.
    Definite(Vec<f64>),
    /// Some pivots vanished (within jitter); the factor has zeroed columns.
    /// Sampling works, quadratic-form solves require a range check.
    Semidefinite(Vec<f64>),
    /// Negative pivot beyond jitter: not a covariance matrix numerically.
    Singular,
}

/// Symmetric matrix `A(i,j)` over a time grid, with factorization cache.
#[derive(Debug, Clone)]
pub struct CovMatrix {
    times: Vec<f64>,
    data: Vec<f64>, // row-major m x m
    factor: Factor,
}

impl CovMatrix {
    /// Build from the limiting current covariance over strictly increasing
    /// positive times.
    pub fn from_times(times: &[f64], spec: &VarianceSpec) -> Result<CovMatrix> {
        if times.is_empty() {
            return Err(Error::InvalidParams("empty time grid".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) || times[0] <= 0.0 {
            return Err(Error::InvalidParams(
                "times must be strictly increasing and positive".into(),
            ));
        }
        let m = times.len();
        let mut data = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..=i {
                let v = current_cov(times[i], times[j], spec);
                data[i * m + j] = v;
                data[j * m + i] = v;
            }
        }
        Ok(CovMatrix::from_parts(times.to_vec(), data))
    }

    /// Build from explicit symmetric entries (row-major).
    pub fn from_entries(times: Vec<f64>, data: Vec<f64>) -> Result<CovMatrix> {
        let m = times.len();
        if data.len() != m * m {
            return Err(Error::InvalidParams("entry count does not match grid".into()));
        }
        for i in 0..m {
            for j in 0..i {
                let rel = (data[i * m + j] - data[j * m + i]).abs();
                if rel > 1e-10 * (1.0 + data[i * m + j].abs()) {
                    return Err(Error::InvalidParams("matrix is not symmetric".into()));
                }
            }
        }
        Ok(CovMatrix::from_parts(times, data))
    }

    fn from_parts(times: Vec<f64>, data: Vec<f64>) -> CovMatrix {
        let factor = factorize(&data, times.len());
        CovMatrix { times, data, factor }
    }

    pub fn dim(&self) -> usize {
        self.times.len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim() + j]
    }

    pub fn factor(&self) -> &Factor {
        &self.factor
    }

    /// True unless the factorization produced a full-rank factor.
    pub fn is_singular(&self) -> bool {
        !matches!(self.factor, Factor::Definite(_))
    }

    /// Quadratic form `r^T A^{-1} r` via a forward triangular solve
    /// (`= |L^{-1} r|^2`). Errors on rank-deficient matrices.
    pub fn quad_form(&self, r: &[f64]) -> Result<f64> {
        let m = self.dim();
        if r.len() != m {
            return Err(Error::InvalidParams("vector/matrix dimension mismatch".into()));
        }
        match &self.factor {
            Factor::Definite(l) => {
                let y = forward_solve(l, m, r);
                Ok(y.iter().map(|v| v * v).sum())
            }
            _ => Err(Error::SingularMatrix("rank-deficient covariance".into())),
        }
    }

    /// Quadratic form against the pseudo-inverse: `r^T A^+ r` when `r` lies
    /// in the range of `A`, `+inf` otherwise. This is the value of the
    /// Legendre supremum of the associated Gaussian rate.
    pub fn pseudo_quad_form(&self, r: &[f64]) -> Result<f64> {
        let m = self.dim();
        if r.len() != m {
            return Err(Error::InvalidParams("vector/matrix dimension mismatch".into()));
        }
        let scale = (0..m).map(|i| self.entry(i, i).abs()).fold(0.0_f64, f64::max);
        let tol = 1e-9 * (1.0 + scale);
        match &self.factor {
            Factor::Definite(l) => {
                let y = forward_solve(l, m, r);
                Ok(y.iter().map(|v| v * v).sum())
            }
            Factor::Semidefinite(l) => {
                // L has zeroed columns; consistency of the skipped equations
                // decides whether r is reachable.
                let mut y = vec![0.0; m];
                for i in 0..m {
                    let mut acc = r[i];
                    for (k, yk) in y.iter().enumerate().take(i) {
                        acc -= l[i * m + k] * yk;
                    }
                    let piv = l[i * m + i];
                    if piv > 0.0 {
                        y[i] = acc / piv;
                    } else if acc.abs() <= tol {
                        y[i] = 0.0;
                    } else {
                        return Ok(f64::INFINITY);
                    }
                }
                Ok(y.iter().map(|v| v * v).sum())
            }
            Factor::Singular => Err(Error::SingularMatrix(
                "factorization failed beyond jitter".into(),
            )),
        }
    }

    /// Mean-zero Gaussian vector with this covariance, deterministic in the
    /// seed. Works for semidefinite matrices (degenerate directions are
    /// simply absent); errors only when factorization failed outright.
    pub fn sample_path(&self, seed: u64) -> Result<GridPath> {
        use rand::SeedableRng;
        let mut rng = SimRng::seed_from_u64(seed);
        self.sample_path_with(&mut rng)
    }

    /// As [`CovMatrix::sample_path`] drawing from a caller-owned stream.
    pub fn sample_path_with(&self, rng: &mut SimRng) -> Result<GridPath> {
        let m = self.dim();
        let l = match &self.factor {
            Factor::Definite(l) | Factor::Semidefinite(l) => l,
            Factor::Singular => {
                return Err(Error::SingularMatrix(
                    "cannot sample from a failed factorization".into(),
                ))
            }
        };
        let z: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let mut values = vec![0.0; m];
        for i in 0..m {
            let mut acc = 0.0;
            for (k, zk) in z.iter().enumerate().take(i + 1) {
                acc += l[i * m + k] * zk;
            }
            values[i] = acc;
        }
        GridPath::new(self.times.clone(), values)
    }
}

/// Lower-triangular Cholesky with a strict pass first and a jittered,
/// semidefinite-tolerant pass second.
fn factorize(a: &[f64], m: usize) -> Factor {
    if let Some(l) = cholesky_strict(a, m) {
        return Factor::Definite(l);
    }
    let max_diag = (0..m).map(|i| a[i * m + i].abs()).fold(0.0_f64, f64::max);
    let jitter = CHOL_JITTER_REL * max_diag;
    // pivots within ten jitters of zero count as degenerate directions
    let band = 10.0 * CHOL_JITTER_REL * max_diag.max(1e-300);
    match cholesky_psd(a, m, jitter, band) {
        Some((l, true)) => Factor::Semidefinite(l),
        Some((l, false)) => Factor::Definite(l),
        None => Factor::Singular,
    }
}

fn cholesky_strict(a: &[f64], m: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; m * m];
    for j in 0..m {
        let mut d = a[j * m + j];
        for k in 0..j {
            d -= l[j * m + k] * l[j * m + k];
        }
        if d <= 0.0 {
            return None;
        }
        let diag = d.sqrt();
        l[j * m + j] = diag;
        for i in (j + 1)..m {
            let mut v = a[i * m + j];
            for k in 0..j {
                v -= l[i * m + k] * l[j * m + k];
            }
            l[i * m + j] = v / diag;
        }
    }
    Some(l)
}

/// Semidefinite-tolerant Cholesky on the jittered matrix: pivots within
/// `band` of zero become zero columns; pivots below `-band` fail. Returns
/// the factor and whether any column was zeroed.
fn cholesky_psd(a: &[f64], m: usize, jitter: f64, band: f64) -> Option<(Vec<f64>, bool)> {
    let mut l = vec![0.0; m * m];
    let mut deficient = false;
    for j in 0..m {
        let mut d = a[j * m + j] + jitter;
        for k in 0..j {
            d -= l[j * m + k] * l[j * m + k];
        }
        if d > band {
            let diag = d.sqrt();
            l[j * m + j] = diag;
            for i in (j + 1)..m {
                let mut v = a[i * m + j];
                for k in 0..j {
                    v -= l[i * m + k] * l[j * m + k];
                }
                l[i * m + j] = v / diag;
            }
        } else if d >= -band {
            deficient = true;
            // zero column: leave l[i][j] = 0 for all i >= j
        } else {
            return None;
        }
    }
    Some((l, deficient))
}

fn forward_solve(l: &[f64], m: usize, r: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; m];
    for i in 0..m {
        let mut acc = r[i];
        for (k, yk) in y.iter().enumerate().take(i) {
            acc -= l[i * m + k] * yk;
        }
        y[i] = acc / l[i * m + i];
    }
    y
}
