//! Compactly supported test functions on uniform spatial grids.
//!
//! A [`GridFunction`] is the piecewise-linear interpolant of node values on
//! `[lo, hi]`, identically zero outside. A node value at the boundary may be
//! nonzero, so step-like edges (the ramp at the origin) are represented
//! exactly. All inner products and overlaps are evaluated exactly per cell
//! (Simpson on products of linears).

use crate::error::{Error, Result};

/// Default grid spacing.
pub const DEFAULT_SPACING: f64 = 1.0 / 64.0;

#[derive(Debug, Clone)]
pub struct GridFunction {
    lo: f64,
    h: f64,
    values: Vec<f64>,
}

impl GridFunction {
    /// Sample `f` on `[lo, hi]` with spacing `h` (the last cell may be
    /// shortened so the grid ends exactly at `hi`).
    pub fn from_fn(lo: f64, hi: f64, h: f64, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        if !(hi > lo) || !(h > 0.0) {
            return Err(Error::Grid(format!("invalid grid [{lo}, {hi}] with h = {h}")));
        }
        let n = ((hi - lo) / h).ceil() as usize + 1;
        let h = (hi - lo) / (n - 1) as f64;
        let values = (0..n).map(|i| f(lo + i as f64 * h)).collect();
        Ok(GridFunction { lo, h, values })
    }

    /// Construct from explicit node values.
    pub fn from_values(lo: f64, h: f64, values: Vec<f64>) -> Result<GridFunction> {
        if values.len() < 2 || !(h > 0.0) {
            return Err(Error::Grid("need at least two nodes and h > 0".into()));
        }
        Ok(GridFunction { lo, h, values })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.lo + self.h * (self.values.len() - 1) as f64)
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn node_values(&self) -> &[f64] {
        &self.values
    }

    /// Interpolated value; zero outside the support.
    pub fn eval(&self, u: f64) -> f64 {
        let (lo, hi) = self.support();
        if u < lo || u > hi {
            return 0.0;
        }
        let x = (u - lo) / self.h;
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let frac = x - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// Exact integral of `self(u) * other(u - shift)` over the overlap.
    pub fn product_integral(&self, other: &GridFunction, shift: f64) -> f64 {
        let (alo, ahi) = self.support();
        let (blo, bhi) = other.support();
        let lo = alo.max(blo + shift);
        let hi = ahi.min(bhi + shift);
        if lo >= hi {
            return 0.0;
        }
        // merged breakpoints of both grids inside [lo, hi]
        let mut cuts = Vec::with_capacity(self.values.len() + other.values.len() + 2);
        cuts.push(lo);
        let mut push_range = |start: f64, step: f64, count: usize| {
            let first = ((lo - start) / step).ceil().max(0.0) as usize;
            for i in first..count {
                let x = start + i as f64 * step;
                if x > lo && x < hi {
                    cuts.push(x);
                }
            }
        };
        push_range(alo, self.h, self.values.len());
        push_range(blo + shift, other.h, other.values.len());
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14 * (1.0 + a.abs()));

        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let m = 0.5 * (a + b);
            let fa = self.eval(a) * other.eval(a - shift);
            let fm = self.eval(m) * other.eval(m - shift);
            let fb = self.eval(b) * other.eval(b - shift);
            // Simpson is exact for the quadratic product of two linears
            total += (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        }
        total
    }

    /// Exact squared L2 norm.
    pub fn l2_norm_sq(&self) -> f64 {
        self.product_integral(self, 0.0)
    }

    /// Exact inner product with another grid function.
    pub fn l2_inner(&self, other: &GridFunction) -> f64 {
        self.product_integral(other, 0.0)
    }

    /// Autocorrelation `C(w) = int self(u) self(u - w) du` (even in `w`).
    pub fn autocorrelation(&self, w: f64) -> f64 {
        self.product_integral(self, w)
    }

    /// Exact signed integral over `[a, b]` (negated when `a > b`).
    pub fn integral_between(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let (lo_b, hi_b, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let (slo, shi) = self.support();
        let lo = lo_b.max(slo);
        let hi = hi_b.min(shi);
        if lo >= hi {
            return 0.0;
        }
        // trapezoid per (partial) cell is exact for the interpolant
        let ncells = self.values.len() - 1;
        let i0 = (((lo - slo) / self.h).floor().max(0.0) as usize).min(ncells - 1);
        let i1 = (((hi - slo) / self.h).ceil().max(1.0) as usize).min(ncells);
        let mut total = 0.0;
        for i in i0..i1 {
            let a = (slo + i as f64 * self.h).max(lo);
            let b = (slo + (i + 1) as f64 * self.h).min(hi);
            if b > a {
                total += 0.5 * (self.eval(a) + self.eval(b)) * (b - a);
            }
        }
        sign * total
    }

    /// Exact integral over the whole support.
    pub fn integral(&self) -> f64 {
        let (lo, hi) = self.support();
        self.integral_between(lo, hi)
    }

    /// Squared L2 norm of the interpolant's derivative (interior slopes
    /// only; support-edge jumps carry no gradient mass by convention).
    pub fn gradient_norm_sq(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| {
                let s = (w[1] - w[0]) / self.h;
                s * s * self.h
            })
            .sum()
    }

    /// Interior slopes and their cell boundaries, for exact pairings of the
    /// piecewise-constant derivative against smooth weights.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values.windows(2).enumerate().map(move |(i, w)| {
            let a = self.lo + i as f64 * self.h;
            (a, a + self.h, (w[1] - w[0]) / self.h)
        })
    }

    /// L2 distance to another grid function.
    pub fn l2_distance(&self, other: &GridFunction) -> f64 {
        let d2 = self.l2_norm_sq() - 2.0 * self.l2_inner(other) + other.l2_norm_sq();
        d2.max(0.0).sqrt()
    }
}

/// The ramp `(1 - u/l) 1{0 <= u <= l}`, exact: the jump at 0 sits on the
/// support boundary where the interpolant is allowed to be discontinuous.
pub fn ramp(l: u32) -> GridFunction {
    assert!(l >= 1);
    let lf = l as f64;
    GridFunction::from_fn(0.0, lf, DEFAULT_SPACING, |u| 1.0 - u / lf).unwrap()
}

/// Smooth bump on `[-w/2, w/2]`, normalised to unit mass by `bump_mass`.
fn bump(y: f64, w: f64) -> f64 {
    let x = 2.0 * y / w;
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

/// 24-point Gauss-Legendre nodes/weights on [-1, 1] (abscissae symmetric).
const GL24: [(f64, f64); 12] = [
    (0.064_056_892_862_605_626, 0.127_938_195_346_752_16),
    (0.191_118_867_473_616_3, 0.125_837_456_346_828_3),
    (0.315_042_679_696_163_37, 0.121_670_472_927_803_39),
    (0.433_793_507_626_045_14, 0.115_505_668_053_725_6),
    (0.545_421_471_388_839_56, 0.107_444_270_115_965_63),
    (0.648_093_651_936_975_57, 0.097_618_652_104_113_89),
    (0.740_124_191_578_554_4, 0.086_190_161_531_953_27),
    (0.820_001_985_973_902_9, 0.073_346_481_411_080_3),
    (0.886_415_527_004_401_1, 0.059_298_584_915_436_78),
    (0.938_274_552_002_732_8, 0.044_277_438_817_419_806),
    (0.974_728_555_971_309_5, 0.028_531_388_628_933_66),
    (0.995_187_219_997_021_4, 0.012_341_229_799_987_2),
];

fn gl24_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL24 {
        acc += w * (f(c + r * x) + f(c - r * x));
    }
    acc * r
}

/// Ramp mollified by a bump of width `1/l`, supported well inside
/// `[-2l, 2l]`. The grid is refined so the mollifier transition is
/// resolved.
pub fn smooth_ramp(l: u32) -> GridFunction {
    assert!(l >= 1);
    let lf = l as f64;
    let width = 1.0 / lf;
    let half = 0.5 * width;
    let h = (DEFAULT_SPACING).min(width / 8.0);
    // bump normalisation with the same rule used for the convolution
    let mass = gl24_integrate(|y| bump(y, width), -half, half);
    let exact_ramp = |u: f64| {
        if (0.0..=lf).contains(&u) {
            1.0 - u / lf
        } else {
            0.0
        }
    };
    let convolved = |x: f64| {
        // integrate b(y) ramp(x - y) over [-half, half], splitting at the
        // ramp's breakpoints y = x and y = x - l
        let mut cuts = vec![-half, half];
        for bp in [x, x - lf] {
            if bp > -half && bp < half {
                cuts.push(bp);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut acc = 0.0;
        for w in cuts.windows(2) {
            acc += gl24_integrate(|y| bump(y, width) * exact_ramp(x - y), w[0], w[1]);
        }
        acc / mass
    };
    GridFunction::from_fn(-half - h, lf + half + h, h, convolved).unwrap()
}

/// Gaussian bump `amp exp(-(u-c)^2 / (2 w^2))` truncated at five widths.
pub fn gaussian_bump(center: f64, width: f64, amplitude: f64) -> Result<GridFunction> {
    if width <= 0.0 {
        return Err(Error::Grid("bump width must be positive".into()));
    }
    let h = DEFAULT_SPACING.min(width / 8.0);
    GridFunction::from_fn(center - 5.0 * width, center + 5.0 * width, h, |u| {
        amplitude * (-0.5 * ((u - center) / width).powi(2)).exp()
    })
}

/// Space-time test function: time slices of spatial grid functions sharing
/// one spatial grid, linearly interpolated in time on `[0, T]`.
#[derive(Debug, Clone)]
pub struct SpaceTimeGridFunction {
    times: Vec<f64>,
    slices: Vec<GridFunction>,
}

impl SpaceTimeGridFunction {
    pub fn new(times: Vec<f64>, slices: Vec<GridFunction>) -> Result<SpaceTimeGridFunction> {
        if times.len() != slices.len() || times.len() < 2 {
            return Err(Error::Grid("need matching times and at least two slices".into()));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Grid("slice times must increase".into()));
        }
        let (lo0, hi0) = slices[0].support();
        let h0 = slices[0].spacing();
        for s in &slices[1..] {
            let (lo, hi) = s.support();
            if (lo - lo0).abs() > 1e-12 || (hi - hi0).abs() > 1e-12 || (s.spacing() - h0).abs() > 1e-12 {
                return Err(Error::Grid("slices must share one spatial grid".into()));
            }
        }
        Ok(SpaceTimeGridFunction { times, slices })
    }

    /// Constant-in-time extension of a single profile over `[0, horizon]`.
    pub fn constant_in_time(profile: GridFunction, horizon: f64) -> Result<SpaceTimeGridFunction> {
        SpaceTimeGridFunction::new(vec![0.0, horizon], vec![profile.clone(), profile])
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn slices(&self) -> &[GridFunction] {
        &self.slices
    }

    /// Spatial slice at time `t` (linear interpolation of node values;
    /// clamped at the ends).
    pub fn slice_at(&self, t: f64) -> GridFunction {
        if t <= self.times[0] {
            return self.slices[0].clone();
        }
        if t >= *self.times.last().unwrap() {
            return self.slices.last().unwrap().clone();
        }
        let idx = self.times.partition_point(|&u| u < t);
        let (t0, t1) = (self.times[idx - 1], self.times[idx]);
        let frac = (t - t0) / (t1 - t0);
        let a = &self.slices[idx - 1];
        let b = &self.slices[idx];
        let values = a
            .node_values()
            .iter()
            .zip(b.node_values())
            .map(|(x, y)| x * (1.0 - frac) + y * frac)
            .collect();
        let (lo, _) = a.support();
        GridFunction::from_values(lo, a.spacing(), values).unwrap()
    }

    /// Space-time Dirichlet energy `int_0^T |grad slice(t)|^2 dt`, exact:
    /// slopes are linear in t per slab, so Simpson in t is exact.
    pub fn dirichlet_energy(&self) -> f64 {
        let mut total = 0.0;
        for k in 0..self.times.len() - 1 {
            let (t0, t1) = (self.times[k], self.times[k + 1]);
            let tm = 0.5 * (t0 + t1);
            let e0 = self.slices[k].gradient_norm_sq();
            let em = self.slice_at(tm).gradient_norm_sq();
            let e1 = self.slices[k + 1].gradient_norm_sq();
            total += (t1 - t0) / 6.0 * (e0 + 4.0 * em + e1);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ramp_endpoint_values() {
        let g = ramp(1);
        assert_eq!(g.eval(0.0), 1.0);
        assert_eq!(g.eval(1.0), 0.0);
        assert_eq!(g.eval(-0.1), 0.0);
        assert_eq!(g.eval(1.1), 0.0);
        assert_relative_eq!(g.eval(0.25), 0.75, max_relative = 1e-14);
        let g4 = ramp(4);
        assert_eq!(g4.eval(0.0), 1.0);
        assert_relative_eq!(g4.eval(2.0), 0.5, max_relative = 1e-14);
    }

    // int_0^1 (1-u)^2 du = 1/3 exactly for the piecewise-linear ramp.
    #[test]
    fn ramp_l2_norm_is_exact() {
        let g = ramp(1);
        assert_relative_eq!(g.l2_norm_sq(), 1.0 / 3.0, max_relative = 1e-13);
        let g3 = ramp(3);
        assert_relative_eq!(g3.l2_norm_sq(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn ramp_autocorrelation_closed_form() {
        // C(w) = d^2/(2l) - d^3/(6l^2) with d = l - |w|
        for l in [1u32, 4] {
            let g = ramp(l);
            let lf = l as f64;
            for w in [0.0, 0.3, 0.9 * lf] {
                let d = lf - w.abs();
                let want = d * d / (2.0 * lf) - d * d * d / (6.0 * lf * lf);
                assert_relative_eq!(g.autocorrelation(w), want, max_relative = 1e-12);
                assert_relative_eq!(g.autocorrelation(-w), want, max_relative = 1e-12);
            }
            assert_eq!(g.autocorrelation(lf + 0.1), 0.0);
        }
    }

    #[test]
    fn integral_between_partial_cells() {
        let g = ramp(1);
        // int_0^1 (1-u) du = 1/2
        assert_relative_eq!(g.integral(), 0.5, max_relative = 1e-13);
        // int_a^b (1-u) du = (b-a) - (b^2-a^2)/2 with off-node bounds
        let (a, b) = (0.1234, 0.777);
        let want = (b - a) - 0.5 * (b * b - a * a);
        assert_relative_eq!(g.integral_between(a, b), want, max_relative = 1e-10);
        assert_relative_eq!(g.integral_between(b, a), -want, max_relative = 1e-10);
        // window extending past the support clips
        assert_relative_eq!(g.integral_between(-3.0, 5.0), 0.5, max_relative = 1e-13);
    }

    #[test]
    fn gradient_norm_of_ramp() {
        // slope -1/l on (0, l): integral of slope^2 is 1/l
        for l in [1u32, 2, 8] {
            let g = ramp(l);
            assert_relative_eq!(g.gradient_norm_sq(), 1.0 / l as f64, max_relative = 1e-12);
        }
    }

    #[test]
    fn smooth_ramp_l2_bound_at_small_l() {
        // mollifier of width 1/l keeps the L2 distance under 2/l here
        for l in [1u32, 2, 4, 8] {
            let g = ramp(l);
            let gs = smooth_ramp(l);
            let d = gs.l2_distance(&g);
            assert!(d <= 2.0 / l as f64, "l={l}: {d} > {}", 2.0 / l as f64);
        }
    }

    #[test]
    fn smooth_ramp_support_is_contained() {
        for l in [1u32, 4, 16] {
            let (lo, hi) = smooth_ramp(l).support();
            assert!(lo >= -2.0 * l as f64 && hi <= 2.0 * l as f64);
        }
        // the old jump is smoothed through ~1/2 (up to the ramp slope bias,
        // negligible once l is a few units)
        for l in [4u32, 16] {
            let v = smooth_ramp(l).eval(0.0);
            assert!((v - 0.5).abs() < 0.05, "l={l}: {v}");
        }
    }

    #[test]
    fn gaussian_bump_mass() {
        let g = gaussian_bump(0.7, 0.2, 1.0).unwrap();
        let want = 0.2 * crate::theory::special::SQRT_2PI;
        assert_relative_eq!(g.integral(), want, max_relative = 1e-4);
    }

    #[test]
    fn product_integral_shifted_disjoint() {
        let g = ramp(1);
        assert_eq!(g.product_integral(&g, 3.0), 0.0);
    }

    #[test]
    fn space_time_constant_profile_energy() {
        let g = SpaceTimeGridFunction::constant_in_time(ramp(1), 1.0).unwrap();
        // |grad G_1|^2 = 1 on (0,1), times T = 1
        assert_relative_eq!(g.dirichlet_energy(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(g.slice_at(0.3).eval(0.5), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn space_time_linear_in_time_energy() {
        // G(t, u) = t * G_1(u) over [0,1]: energy = int_0^1 t^2 dt = 1/3
        let zero = GridFunction::from_fn(0.0, 1.0, DEFAULT_SPACING, |_| 0.0).unwrap();
        let mut one = ramp(1);
        // share the exact same grid layout as `zero`
        one = GridFunction::from_values(0.0, zero.spacing(), one.node_values().to_vec()).unwrap();
        let g = SpaceTimeGridFunction::new(vec![0.0, 1.0], vec![zero, one]).unwrap();
        assert_relative_eq!(g.dirichlet_energy(), 1.0 / 3.0, max_relative = 1e-12);
    }
}
