//! Composite Gauss–Legendre quadrature.

use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule on `[-1, 1]`; nodes from Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
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
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integrates `f` over `[lo, hi]` split into `panels` equal sub-intervals.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64, panels: usize) -> f64 {
        let panels = panels.max(1);
        let width = (hi - lo) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let a = lo + p as f64 * width;
            let mid = a + 0.5 * width;
            let half = 0.5 * width;
            let s: f64 = self
                .nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * f(mid + half * x))
                .sum();
            total += half * s;
        }
        total
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 32] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let g = GaussLegendre::new(5);
        // degree 9 is exact for 5 nodes
        let v = g.integrate(|x| x.powi(8) + x.powi(9), 0.0, 1.0, 1);
        assert!((v - (1.0 / 9.0 + 0.1)).abs() < 1e-15);
    }

    #[test]
    fn smooth_integrand() {
        let g = GaussLegendre::new(20);
        let v = g.integrate(f64::cos, 0.0, PI / 2.0, 4);
        assert!((v - 1.0).abs() < 1e-15);
    }
}
