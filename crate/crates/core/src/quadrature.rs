//! Quadrature on the circle and on bounded intervals.

use crate::{Error, Result};
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::rc::Rc;

thread_local! {
    static RULES: RefCell<HashMap<usize, Rc<QuadratureRule>>> = RefCell::new(HashMap::new());
}

/// Shared trapezoid rule with `n` nodes (cached per thread).
pub fn rule(n: usize) -> Rc<QuadratureRule> {
    RULES.with(|r| {
        r.borrow_mut()
            .entry(n)
            .or_insert_with(|| Rc::new(QuadratureRule::new(n).expect("grid size validated by the caller")))
            .clone()
    })
}

/// Node count used when nothing else is requested.
pub const DEFAULT_QUADRATURE_N: usize = 2048;

/// Smallest admissible periodic grid.
pub const MIN_QUADRATURE_N: usize = 256;

/// Periodic trapezoid rule on `[0, 2π)`: nodes `2πi/N`, equal weights `2π/N`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    n: usize,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(n: usize) -> Result<Self> {
        check_grid_size(n)?;
        let (sin, cos) = (0..n).map(|i| node(i, n).sin_cos()).unzip();
        Ok(Self { n, cos, sin })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn node(&self, i: usize) -> f64 {
        node(i, self.n)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.node(i))
    }

    pub fn weight(&self) -> f64 {
        TAU / self.n as f64
    }

    pub fn cos(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin(&self) -> &[f64] {
        &self.sin
    }

    /// `∫₀^{2π} f dθ` from node values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n);
        values.iter().sum::<f64>() * self.weight()
    }

    /// Average with respect to `dσ = dθ / 2π`.
    pub fn mean(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() / self.n as f64
    }
}

pub(crate) fn node(i: usize, n: usize) -> f64 {
    TAU * i as f64 / n as f64
}

pub fn check_grid_size(n: usize) -> Result<()> {
    if n < MIN_QUADRATURE_N || !n.is_power_of_two() {
        return Err(Error::Domain(format!(
            "grid size {n} must be a power of two and at least {MIN_QUADRATURE_N}"
        )));
    }
    Ok(())
}

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` from the Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
