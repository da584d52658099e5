//! Numeric integration oracle over `C^q` against `e^{−|w|²} dm` and over the
//! unit ball `B^q` against `dm`.
//!
//! Small problems use a tensor rule (Gauss–Hermite per real axis; polar
//! coordinates with stick-breaking Gauss–Legendre radii and trapezoid angles
//! on the ball). Anything larger falls back to seeded Monte Carlo.

use std::f64::consts::PI;

use gauss_quad::{GaussHermite, GaussLegendre};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Integration domain; coordinates of a product are concatenated in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// `C^q` with weight `e^{−|w|²} dm(w)` (total mass 1).
    Gaussian(usize),
    /// `B^q` with `dm` (total mass `1/q!`).
    Ball(usize),
    Product(Vec<Domain>),
}

impl Domain {
    /// Number of complex coordinates.
    pub fn dim(&self) -> usize {
        match self {
            Domain::Gaussian(q) | Domain::Ball(q) => *q,
            Domain::Product(parts) => parts.iter().map(Domain::dim).sum(),
        }
    }

    fn rule_size(&self, nodes: usize) -> f64 {
        match self {
            Domain::Gaussian(q) => (nodes as f64).powi(2 * *q as i32),
            Domain::Ball(q) => (nodes as f64 * angle_count(nodes) as f64).powi(*q as i32),
            Domain::Product(parts) => parts.iter().map(|d| d.rule_size(nodes)).product(),
        }
    }

    /// Tensor factors of the rule; products are iterated lazily.
    fn factor_rules(&self, nodes: usize, out: &mut Vec<Vec<(Vec<Complex64>, f64)>>) {
        match self {
            Domain::Gaussian(q) => out.push(gaussian_rule(*q, nodes)),
            Domain::Ball(q) => out.push(ball_rule(*q, nodes)),
            Domain::Product(parts) => parts.iter().for_each(|d| d.factor_rules(nodes, out)),
        }
    }

    /// One Monte Carlo draw and its weight (zero outside the ball).
    fn sample(&self, rng: &mut ChaCha8Rng, out: &mut Vec<Complex64>) -> f64 {
        match self {
            Domain::Gaussian(q) => {
                let sd = std::f64::consts::FRAC_1_SQRT_2;
                for _ in 0..*q {
                    let x: f64 = rng.sample(StandardNormal);
                    let y: f64 = rng.sample(StandardNormal);
                    out.push(Complex64::new(sd * x, sd * y));
                }
                1.0
            }
            Domain::Ball(q) => {
                // Uniform on the unit polydisk, which has dm-mass 1.
                let mut norm = 0.0;
                for _ in 0..*q {
                    let r = rng.gen::<f64>().sqrt();
                    let theta = 2.0 * PI * rng.gen::<f64>();
                    norm += r * r;
                    out.push(Complex64::from_polar(r, theta));
                }
                if norm < 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Domain::Product(parts) => parts.iter().map(|d| d.sample(rng, out)).product(),
        }
    }
}

fn angle_count(nodes: usize) -> usize {
    2 * nodes
}

fn gaussian_rule(q: usize, nodes: usize) -> Vec<(Vec<Complex64>, f64)> {
    let gh = GaussHermite::new(nodes.max(1)).expect("positive Hermite degree");
    let axis = gh.as_node_weight_pairs();
    let mut plane = Vec::with_capacity(axis.len() * axis.len());
    for &(x, wx) in axis {
        for &(y, wy) in axis {
            plane.push((Complex64::new(x, y), wx * wy / PI));
        }
    }
    let mut acc = vec![(Vec::new(), 1.0)];
    for _ in 0..q {
        let mut next = Vec::with_capacity(acc.len() * plane.len());
        for (pt, w) in &acc {
            for &(z, wz) in &plane {
                let mut p = pt.clone();
                p.push(z);
                next.push((p, w * wz));
            }
        }
        acc = next;
    }
    acc
}

/// `ζ_j = √s_j e^{iθ_j}` maps `dm` to `Π ds_j dθ_j/2π` on the simplex
/// `Σ s_j < 1`, which is covered by stick-breaking.
fn ball_rule(q: usize, nodes: usize) -> Vec<(Vec<Complex64>, f64)> {
    let gl = GaussLegendre::new(nodes.max(2)).expect("Legendre degree at least 2");
    let radial: Vec<(f64, f64)> = gl.as_node_weight_pairs().iter().map(|&(x, w)| ((x + 1.0) / 2.0, w / 2.0)).collect();
    let n_theta = angle_count(nodes);
    let angles: Vec<Complex64> = (0..n_theta).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n_theta as f64)).collect();

    let mut sticks: Vec<(Vec<f64>, f64, f64)> = vec![(Vec::new(), 1.0, 1.0)];
    for _ in 0..q {
        let mut next = Vec::with_capacity(sticks.len() * radial.len());
        for (s, w, rem) in &sticks {
            for &(u, wu) in &radial {
                let mut t = s.clone();
                t.push(u * rem);
                next.push((t, w * wu * rem, rem * (1.0 - u)));
            }
        }
        sticks = next;
    }

    let angle_weight = (1.0 / n_theta as f64).powi(q as i32);
    let mut out = Vec::with_capacity(sticks.len() * n_theta.pow(q as u32));
    for (s, w, _) in &sticks {
        let radii: Vec<f64> = s.iter().map(|x| x.sqrt()).collect();
        let mut acc: Vec<Vec<Complex64>> = vec![Vec::new()];
        for r in &radii {
            let mut next = Vec::with_capacity(acc.len() * n_theta);
            for pt in &acc {
                for a in &angles {
                    let mut p = pt.clone();
                    p.push(a * *r);
                    next.push(p);
                }
            }
            acc = next;
        }
        out.extend(acc.into_iter().map(|p| (p, w * angle_weight)));
    }
    out
}

/// Resource limits for [`quad_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    /// Quadrature nodes per real axis (radial nodes on the ball).
    pub nodes: usize,
    /// Largest tensor rule allowed before switching to Monte Carlo.
    pub max_points: usize,
    pub samples: usize,
    pub seed: u64,
    /// Target for the reported error estimate.
    pub tolerance: f64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { nodes: 12, max_points: 2_000_000, samples: 200_000, seed: 7, tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    MonteCarlo,
}

/// Numeric value with an error estimate. `converged` is false when the
/// budget ran out before the estimate met the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    /// Standard error for Monte Carlo; difference from a coarser rule for
    /// quadrature.
    pub std_error: f64,
    pub method: Method,
    pub evaluations: usize,
    pub converged: bool,
}

impl Estimate {
    /// Whether `target` lies within `k` error estimates, or within `abs`.
    pub fn agrees(&self, target: Complex64, k: f64, abs: f64) -> bool {
        let d = (self.value - target).norm();
        d <= abs || d <= k * self.std_error
    }
}

fn run_rules<F: Fn(&[Complex64]) -> Complex64>(f: &F, rules: &[Vec<(Vec<Complex64>, f64)>], point: &mut Vec<Complex64>, weight: f64) -> Complex64 {
    let Some((first, rest)) = rules.split_first() else {
        return f(point) * weight;
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for (pt, w) in first {
        let len = point.len();
        point.extend_from_slice(pt);
        acc += run_rules(f, rest, point, weight * w);
        point.truncate(len);
    }
    acc
}

fn tensor<F: Fn(&[Complex64]) -> Complex64>(f: &F, domain: &Domain, nodes: usize) -> (Complex64, usize) {
    let mut rules = Vec::new();
    domain.factor_rules(nodes, &mut rules);
    let count = rules.iter().map(Vec::len).product();
    let mut point = Vec::with_capacity(domain.dim());
    (run_rules(f, &rules, &mut point, 1.0), count)
}

/// Integrates `f` over `domain`.
pub fn quad_oracle<F>(f: F, domain: &Domain, budget: &Budget) -> Estimate
where
    F: Fn(&[Complex64]) -> Complex64,
{
    let nodes = budget.nodes.max(2);
    if domain.rule_size(nodes) <= budget.max_points as f64 {
        let (value, n_fine) = tensor(&f, domain, nodes);
        let (coarse, n_coarse) = tensor(&f, domain, nodes.saturating_sub(2).max(2));
        let err = (value - coarse).norm();
        return Estimate {
            value,
            std_error: err,
            method: Method::Quadrature,
            evaluations: n_fine + n_coarse,
            converged: err <= budget.tolerance,
        };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let n = budget.samples.max(2);
    let mut mean = Complex64::new(0.0, 0.0);
    let mut m2 = 0.0;
    let mut point = Vec::with_capacity(domain.dim());
    for i in 0..n {
        point.clear();
        let w = domain.sample(&mut rng, &mut point);
        let x = if w == 0.0 { Complex64::new(0.0, 0.0) } else { f(&point) * w };
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta.norm() * (x - mean).norm();
    }
    let std_error = (m2 / (n - 1) as f64 / n as f64).sqrt();
    Estimate { value: mean, std_error, method: Method::MonteCarlo, evaluations: n, converged: std_error <= budget.tolerance }
}
