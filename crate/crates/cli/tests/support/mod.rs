//! Test-only oracles kept independent of the solver: plain real Newton
//! from many starts, direct residuals, and seeded random configurations.

#![allow(dead_code)]

use fouranchor_core::{validate, Configuration, Label, Point2};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Real4 = [f64; 4];

#[derive(Clone, Copy, Debug)]
pub struct Plain {
    pub t: [(f64, f64); 4],
    pub k: [f64; 4],
}

impl Plain {
    pub fn of(config: &Configuration) -> Self {
        let f = |r: &BigRational| r.to_f64().unwrap();
        Self {
            t: std::array::from_fn(|i| {
                let p = &config.anchors[i];
                (f(&p.x), f(&p.y))
            }),
            k: std::array::from_fn(|i| f(&config.k[i])),
        }
    }

    fn pq(&self, i: usize, z: &Real4) -> (f64, f64) {
        let (a, b) = self.t[i];
        ((z[0] - a).powi(2) + (z[1] - b).powi(2), (z[2] - a).powi(2) + (z[3] - b).powi(2))
    }

    pub fn poly(&self, z: &Real4) -> Real4 {
        std::array::from_fn(|i| {
            let (p, q) = self.pq(i, z);
            self.k[i] * p * q - p - q
        })
    }

    pub fn max_poly(&self, z: &Real4) -> f64 {
        self.poly(z).iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Residual of the original reciprocal-distance equations.
    pub fn max_rational(&self, z: &Real4) -> f64 {
        (0..4)
            .map(|i| {
                let (p, q) = self.pq(i, z);
                (1.0 / p + 1.0 / q - self.k[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    fn jac(&self, z: &Real4) -> [[f64; 4]; 4] {
        std::array::from_fn(|i| {
            let (p, q) = self.pq(i, z);
            let (a, b) = self.t[i];
            let (u, v) = (self.k[i] * q - 1.0, self.k[i] * p - 1.0);
            [2.0 * u * (z[0] - a), 2.0 * u * (z[1] - b), 2.0 * v * (z[2] - a), 2.0 * v * (z[3] - b)]
        })
    }

    fn min_dist(&self, z: &Real4) -> f64 {
        (0..4).map(|i| self.pq(i, z)).fold(f64::INFINITY, |m, (p, q)| m.min(p).min(q))
    }

    /// Undamped Newton from `z`; a converged point with every squared
    /// anchor distance bounded away from zero.
    pub fn newton(&self, mut z: Real4) -> Option<Real4> {
        for _ in 0..60 {
            let f = self.poly(&z);
            let step = solve4(self.jac(&z), f)?;
            for i in 0..4 {
                z[i] -= step[i];
            }
            if z.iter().any(|v| !v.is_finite() || v.abs() > 1e6) {
                return None;
            }
            if step.iter().fold(0.0f64, |m, s| m.max(s.abs())) < 1e-14 * (1.0 + max4(&z)) {
                break;
            }
        }
        let scale = 1.0 + max4(&z).powi(4);
        (self.max_poly(&z) <= 1e-10 * scale && self.min_dist(&z) > 1e-6).then_some(z)
    }
}

pub fn max4(z: &Real4) -> f64 {
    z.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn dist4(a: &Real4, b: &Real4) -> f64 {
    (0..4).fold(0.0, |m, i| m.max((a[i] - b[i]).abs()))
}

/// Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn solve4(mut a: [[f64; 4]; 4], mut b: Real4) -> Option<Real4> {
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..4 {
            let f = a[r][c] / a[c][c];
            for k in c..4 {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let s: f64 = (r + 1..4).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Real solutions found by Newton from a grid of starts plus random ones.
pub fn multistart_real(config: &Configuration, seed: u64) -> Vec<Real4> {
    let plain = Plain::of(config);
    let mut starts: Vec<Real4> = Vec::new();
    let grid = [-4.0, -2.2, -0.9, 0.3, 1.4, 2.7, 4.5];
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                for &d in &grid {
                    starts.push([a, b, c, d]);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3000 {
        let r = if rng.gen_bool(0.5) { 4.0 } else { 12.0 };
        starts.push(std::array::from_fn(|_| rng.gen_range(-r..r)));
    }
    let mut found: Vec<Real4> = Vec::new();
    for s in starts {
        if let Some(z) = plain.newton(s) {
            if !found.iter().any(|f| dist4(f, &z) <= 1e-7 * (1.0 + max4(&z))) {
                found.push(z);
            }
        }
    }
    found
}

fn random_rational(rng: &mut ChaCha8Rng, lo: (i64, i64), hi: (i64, i64)) -> BigRational {
    let d: i64 = rng.gen_range(1..=8);
    // Smallest and largest numerators over `d` inside [lo, hi].
    let nlo = (lo.0 * d + lo.1 - 1).div_euclid(lo.1);
    let nhi = (hi.0 * d).div_euclid(hi.1);
    BigRational::new(rng.gen_range(nlo..=nhi).into(), d.into())
}

/// Seeded configurations with anchors in `[-3, 3]²` and constants in
/// `[1/4, 4]` that satisfy both non-degeneracy conditions.
pub fn random_configs(seed: u64, count: usize) -> Vec<Configuration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let anchors: [Point2; 4] = std::array::from_fn(|_| {
            Point2::new(random_rational(&mut rng, (-3, 1), (3, 1)), random_rational(&mut rng, (-3, 1), (3, 1)))
        });
        let k: [BigRational; 4] = std::array::from_fn(|_| random_rational(&mut rng, (1, 4), (4, 1)));
        let cfg = Configuration::new(anchors, k);
        if cfg.check().is_err() {
            continue;
        }
        if validate(&cfg).map(|v| v.all_ok()).unwrap_or(false) {
            out.push(cfg);
        }
    }
    out
}

/// `X` from `Y` by subtracting the squared-distance relations of anchors
/// `A, B, C` pairwise and solving the 2×2 linear system.
pub fn recover_x(plain: &Plain, y: [Complex64; 2]) -> Option<[Complex64; 2]> {
    let g: Vec<Complex64> = (0..3)
        .map(|i| {
            let (a, b) = plain.t[i];
            let q = (y[0] - a).powu(2) + (y[1] - b).powu(2);
            q / (plain.k[i] * q - 1.0) - (a * a + b * b)
        })
        .collect();
    let (a, b, c) = (plain.t[0], plain.t[1], plain.t[2]);
    // g_T = |X|² − 2 X·T, so g_T − g_A = −2 X·(T − A).
    let (m11, m12, r1) = (-2.0 * (b.0 - a.0), -2.0 * (b.1 - a.1), g[1] - g[0]);
    let (m21, m22, r2) = (-2.0 * (c.0 - a.0), -2.0 * (c.1 - a.1), g[2] - g[0]);
    let det = m11 * m22 - m12 * m21;
    (det.abs() > 1e-300).then(|| [(r1 * m22 - r2 * m12) / det, (r2 * m11 - r1 * m21) / det])
}

pub fn label_name(i: usize) -> &'static str {
    Label::ALL[i].name()
}
