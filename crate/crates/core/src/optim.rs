//! Derivative-free minimization and bracketed root finding.

use std::cmp::Ordering;

/// Nelder–Mead simplex search with dimension-adaptive coefficients
/// (Gao & Han), which reduce to the classic (1, 2, ½, ½) in two dimensions.
#[derive(Debug, Clone)]
pub struct NelderMead {
    /// Stop when `max f − min f` over the simplex drops to this value.
    pub ftol: f64,
    pub max_iter: usize,
    pub max_evals: usize,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self { ftol: 1e-10, max_iter: 500, max_evals: usize::MAX }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evals: usize,
    pub converged: bool,
}

impl NelderMead {
    pub fn minimize<F>(&self, f: F, x0: &[f64], step: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        self.minimize_traced(f, x0, step, |_, _| {})
    }

    /// As [`minimize`](Self::minimize); `trace(iteration, best_value)` is
    /// called after every iteration.
    pub fn minimize_traced<F, T>(&self, mut f: F, x0: &[f64], step: &[f64], mut trace: T) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
        T: FnMut(usize, f64),
    {
        let n = x0.len();
        assert_eq!(step.len(), n, "one step per coordinate");
        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        if n == 0 {
            let value = eval(x0, &mut evals);
            return Minimum { x: vec![], value, iterations: 0, evals, converged: true };
        }

        let nf = n as f64;
        let (rho, chi, gamma, sigma) = if n <= 2 {
            (1.0, 2.0, 0.5, 0.5)
        } else {
            (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let v0 = eval(x0, &mut evals);
        simplex.push((x0.to_vec(), v0));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += step[i];
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }

        let mut iterations = 0;
        let mut converged = false;
        let mut centroid = vec![0.0; n];
        loop {
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            if iterations > 0 {
                trace(iterations, best);
            }
            if (worst - best).abs() <= self.ftol || (best.is_infinite() && worst.is_infinite() && iterations > 0) {
                converged = worst.is_finite();
                break;
            }
            if iterations >= self.max_iter || evals >= self.max_evals {
                break;
            }
            iterations += 1;

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / nf;
                }
            }
            let along = |t: f64, from: &[f64]| -> Vec<f64> {
                centroid.iter().zip(from).map(|(c, w)| c + t * (c - w)).collect()
            };

            let xw = simplex[n].0.clone();
            let xr = along(rho, &xw);
            let fr = eval(&xr, &mut evals);
            if fr < best {
                let xe = along(rho * chi, &xw);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let contracted = if fr < worst {
                let xc = along(rho * gamma, &xw);
                let fc = eval(&xc, &mut evals);
                (fc <= fr).then_some((xc, fc))
            } else {
                let xc = along(-gamma, &xw);
                let fc = eval(&xc, &mut evals);
                (fc < worst).then_some((xc, fc))
            };
            match contracted {
                Some(p) => simplex[n] = p,
                None => {
                    let x_best = simplex[0].0.clone();
                    for (x, v) in simplex.iter_mut().skip(1) {
                        for (xi, bi) in x.iter_mut().zip(&x_best) {
                            *xi = bi + sigma * (*xi - bi);
                        }
                        *v = eval(x, &mut evals);
                    }
                }
            }
        }
        let (x, value) = simplex.swap_remove(0);
        Minimum { x, value, iterations, evals, converged }
    }
}

/// Root of `f` in `[a, b]` given a sign change, by the Illinois variant of
/// regula falsi with a bisection safeguard. Returns when the bracket is
/// narrower than `xtol` or `f` vanishes. Without a sign change (a bracket
/// found on slightly different samples) the endpoint nearer zero is returned.
pub fn bracketed_root<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if fa * fb > 0.0 {
        return if fa.abs() <= fb.abs() { a } else { b };
    }
    let mut side = 0i8;
    for it in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        // every fourth step is a plain bisection
        if !(c > a.min(b) && c < a.max(b)) || it % 4 == 3 {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if fc * fb < 0.0 {
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            side = 0;
        } else {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        }
    }
    if fa.abs() < fb.abs() {
        a
    } else {
        b
    }
}
