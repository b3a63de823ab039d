//! Composite Gauss-Legendre quadrature for `exp(-x^2) |x - t|^gamma` in
//! MPFR arithmetic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use super::NumericConfig;
use crate::algebra::{Poly, Rational};
use crate::error::{Error, Result};

/// Ratio of graded panel endpoints toward `x = t`.
const GRADING: f64 = 0.5;
/// `log10(2 + sqrt 5)`: Bernstein ellipse size for a panel whose nearest
/// singularity sits two half-widths beyond an endpoint.
const RHO_LOG10: f64 = 0.627;

type RuleCache = Mutex<HashMap<(usize, u32), Arc<GaussLegendre>>>;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

/// Gauss-Legendre rule with `n` points at `bits` of precision, cached.
pub fn gauss_legendre(n: usize, bits: u32) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(n, bits)) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(compute_gauss_legendre(n, bits));
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert((n, bits), Arc::clone(&rule));
    rule
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let bits = x.prec();
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let kf = k as u32;
        let a = Float::with_val(bits, x * &p1) * (2 * kf - 1);
        let next = (a - Float::with_val(bits, &p0 * (kf - 1))) / kf;
        p0 = std::mem::replace(&mut p1, next);
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    let x2m1 = Float::with_val(bits, x * x) - 1u32;
    let dp = (Float::with_val(bits, x * &p1) - &p0) * n as u32 / x2m1;
    (p1, dp)
}

fn compute_gauss_legendre(n: usize, bits: u32) -> GaussLegendre {
    assert!(n >= 1);
    let eps = Float::with_val(bits, Float::i_exp(1, 8 - bits as i32));
    let mut nodes = vec![Float::new(bits); n];
    let mut weights = vec![Float::new(bits); n];
    for i in 0..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(bits, guess);
        let mut dp = Float::new(bits);
        for _ in 0..100 {
            let (p, d) = legendre(n, &x);
            let dx = Float::with_val(bits, &p / &d);
            x -= &dx;
            dp = d;
            if dx.abs() < eps {
                break;
            }
        }
        let (_, d) = legendre(n, &x);
        dp = if d.is_finite() { d } else { dp };
        let one_minus = Float::with_val(bits, 1u32) - Float::with_val(bits, &x * &x);
        let w = Float::with_val(bits, 2u32) / (one_minus * Float::with_val(bits, &dp * &dp));
        nodes[n - 1 - i] = x.clone();
        weights[n - 1 - i] = w.clone();
        nodes[i] = -x;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = Float::new(bits);
    }
    GaussLegendre { nodes, weights }
}

/// Describes how the real line was cut up.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Layout {
    pub bits: u32,
    /// Points on each unit-width panel; graded panels use fewer.
    pub nodes_per_panel: usize,
    pub total_nodes: usize,
    /// Geometrically graded panels on each side of `t`.
    pub graded_panels: usize,
    pub panels: usize,
    pub truncation_radius: f64,
}

/// Quadrature nodes with the full weight `exp(-x^2) |x - t|^gamma` folded
/// into the weights.
#[derive(Debug, Clone)]
pub struct WeightedNodes {
    pub x: Vec<Float>,
    pub w: Vec<Float>,
    pub layout: Layout,
}

impl WeightedNodes {
    pub fn bits(&self) -> u32 {
        self.layout.bits
    }

    /// `sum_i w_i f(x_i)`.
    pub fn integrate<F: Fn(&Float) -> Float>(&self, f: F) -> Float {
        let mut acc = Float::new(self.bits());
        for (x, w) in self.x.iter().zip(&self.w) {
            acc += Float::with_val(self.bits(), w * &f(x));
        }
        acc
    }
}

/// Working precision in bits for `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

/// Gauss-Legendre points per panel. Apart from the innermost graded panel,
/// whose mass is below the target anyway, every panel keeps `x = t` at least
/// two half-widths away.
pub fn nodes_for_digits(digits: u32) -> usize {
    ((digits + 10) as f64 / (2.0 * RHO_LOG10)).ceil() as usize + 8
}

/// Radius beyond which `exp(-x^2) |x|^power < 10^-(digits + 10)`.
pub fn truncation_radius(digits: u32, power: f64) -> f64 {
    let target = (digits + 10) as f64 * std::f64::consts::LN_10;
    let mut r: f64 = 2.0;
    while r * r - power * r.ln() < target {
        r += 0.25;
    }
    r + 1.0
}

/// Nodes for a panel holding about `10^-mass_digits` of the total mass,
/// rounded up to a multiple of 8 so few distinct rules get built.
fn tapered_nodes(digits: u32, mass_digits: f64) -> usize {
    let needed = ((digits + 10) as f64 - mass_digits).max(0.0);
    let n = (needed / (2.0 * RHO_LOG10)).ceil() as usize + 8;
    n.div_ceil(8) * 8
}

fn graded_panels_for(digits: u32, gamma: f64) -> usize {
    // the innermost panel carries about GRADING^(J (gamma + 1)) of the mass
    let per_panel = -GRADING.log10() * (gamma + 1.0);
    ((digits + 10) as f64 / per_panel).ceil() as usize
}

fn rational_to_float(v: &Rational, bits: u32) -> Float {
    Float::with_val(bits, v.as_rug())
}

/// Builds the weighted node set for `exp(-x^2) |x - t|^gamma`, accurate for
/// integrands `poly(x) * weight` with `deg poly <= max_degree`.
pub fn weighted_nodes(gamma: &Rational, t: &Rational, cfg: &NumericConfig, max_degree: usize) -> Result<WeightedNodes> {
    if gamma.signum() < 0 {
        return Err(Error::NegativeGamma(gamma.to_string()));
    }
    cfg.validate()?;
    let digits = cfg.precision_digits;
    let bits = bits_for_digits(digits);
    let gamma_f64 = gamma.to_f64();
    let t_f64 = t.to_f64();

    let radius = cfg.truncation_radius.unwrap_or_else(|| truncation_radius(digits, gamma_f64 + max_degree as f64));
    let nodes_per_panel = cfg.quad_nodes.unwrap_or_else(|| nodes_for_digits(digits));
    let graded =
        if gamma.is_integer() { 0 } else { cfg.quad_panels.unwrap_or_else(|| graded_panels_for(digits, gamma_f64)) };

    // Panels on one side as (near, far, nodes) offsets from t: the graded
    // part 0, 2^-J, ..., 1/2, 1, then unit steps. A graded panel only needs
    // the digits its share of the mass calls for.
    let full = |n: usize| cfg.quad_nodes.unwrap_or(n);
    let mut layout: Vec<(Float, Float, usize)> = Vec::new();
    if graded > 0 {
        let off = |j: usize| Float::with_val(bits, Float::i_exp(1, -(j as i32)));
        layout.push((Float::new(bits), off(graded), full(tapered_nodes(digits, f64::INFINITY))));
        for j in (0..graded).rev() {
            let mass_digits = j as f64 * (gamma_f64 + 1.0) * -GRADING.log10();
            layout.push((off(j + 1), off(j), full(tapered_nodes(digits, mass_digits))));
        }
    }
    let first_unit = if graded > 0 { 1 } else { 0 };
    let reach_right = (radius - t_f64).max(1.0).ceil() as u32;
    let reach_left = (radius + t_f64).max(1.0).ceil() as u32;

    let t_f = rational_to_float(t, bits);
    let mut edges: Vec<(Float, Float, usize)> = Vec::new();
    for (sign, reach) in [(1i32, reach_right), (-1i32, reach_left)] {
        let mut side = layout.clone();
        for step in first_unit..reach {
            side.push((Float::with_val(bits, step), Float::with_val(bits, step + 1), nodes_per_panel));
        }
        for (near, far, nodes) in side {
            let a = Float::with_val(bits, &t_f + near * sign);
            let b = Float::with_val(bits, &t_f + far * sign);
            edges.push(if sign > 0 { (a, b, nodes) } else { (b, a, nodes) });
        }
    }

    let gamma_f = rational_to_float(gamma, bits);
    let integer_gamma = gamma.to_i64().filter(|_| gamma.is_integer());
    let total: usize = edges.iter().map(|e| e.2).sum();
    let mut xs = Vec::with_capacity(total);
    let mut ws = Vec::with_capacity(total);
    for (a, b, nodes) in &edges {
        let rule = gauss_legendre(*nodes, bits);
        let half = Float::with_val(bits, b - a) / 2u32;
        let mid = Float::with_val(bits, a + b) / 2u32;
        for (xi, wi) in rule.nodes.iter().zip(&rule.weights) {
            let x = Float::with_val(bits, &mid + Float::with_val(bits, &half * xi));
            let dist = Float::with_val(bits, &x - &t_f).abs();
            let gauss = Float::with_val(bits, &x * &x);
            let density = match integer_gamma {
                Some(0) => (-gauss).exp(),
                Some(g) => (-gauss).exp() * dist.pow(g as u32),
                // one exponential for exp(-x^2) |x - t|^gamma
                None => (dist.ln() * &gamma_f - gauss).exp(),
            };
            let w = Float::with_val(bits, wi * &half) * density;
            xs.push(x);
            ws.push(w);
        }
    }

    Ok(WeightedNodes {
        x: xs,
        w: ws,
        layout: Layout {
            bits,
            nodes_per_panel,
            total_nodes: total,
            graded_panels: graded,
            panels: edges.len(),
            truncation_radius: radius,
        },
    })
}

fn eval_poly(p: &Poly, x: &Float) -> Float {
    let bits = x.prec();
    let mut acc = Float::new(bits);
    for c in p.coeffs().iter().rev() {
        acc *= x;
        acc += Float::with_val(bits, c.as_rug());
    }
    acc
}

/// `integral f(x) g(x) exp(-x^2) |x - t|^gamma dx` for polynomial `f`, `g`.
pub fn hp_inner_product(f: &Poly, g: &Poly, gamma: &Rational, t: &Rational, cfg: &NumericConfig) -> Result<Float> {
    let degree = f.degree().unwrap_or(0) + g.degree().unwrap_or(0);
    let nodes = weighted_nodes(gamma, t, cfg, degree)?;
    Ok(nodes.integrate(|x| eval_poly(f, x) * eval_poly(g, x)))
}

/// `sqrt(pi)` at the given precision.
pub fn sqrt_pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi).sqrt()
}
