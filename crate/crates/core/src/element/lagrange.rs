//! Nodal Lagrange basis on the Gauss–Lobatto nodes of the reference edge [-1, 1].

use crate::error::Result;
use crate::quadrature::{gauss_lobatto, QuadratureRule1D};

#[derive(Clone, Debug)]
pub struct EdgeLagrange {
    pub rule: QuadratureRule1D,
    /// Barycentric weights `1 / prod_{m != k} (x_k - x_m)`.
    bary: Vec<f64>,
}

impl EdgeLagrange {
    /// Basis of degree `p` with `p + 1` nodes.
    pub fn new(p: usize) -> Result<Self> {
        let rule = gauss_lobatto(p)?;
        let x = &rule.nodes;
        let bary = (0..x.len())
            .map(|k| {
                1.0 / (0..x.len())
                    .filter(|&m| m != k)
                    .map(|m| x[k] - x[m])
                    .product::<f64>()
            })
            .collect();
        Ok(Self { rule, bary })
    }

    pub fn degree(&self) -> usize {
        self.rule.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.rule.nodes
    }

    /// Values of all `p + 1` basis functions at `t`.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let x = &self.rule.nodes;
        if let Some(k) = x.iter().position(|&xk| xk == t) {
            let mut out = vec![0.0; x.len()];
            out[k] = 1.0;
            return out;
        }
        // first form of the barycentric formula: l(t) * w_k / (t - x_k)
        let l: f64 = x.iter().map(|&xk| t - xk).product();
        x.iter()
            .zip(&self.bary)
            .map(|(&xk, &w)| l * w / (t - xk))
            .collect()
    }

    /// Derivatives of all basis functions at `t`.
    pub fn eval_derivative(&self, t: f64) -> Vec<f64> {
        let x = &self.rule.nodes;
        let n = x.len();
        (0..n)
            .map(|k| {
                let mut sum = 0.0;
                for j in 0..n {
                    if j == k {
                        continue;
                    }
                    let mut prod = self.bary[k];
                    for (m, &xm) in x.iter().enumerate() {
                        if m != k && m != j {
                            prod *= t - xm;
                        }
                    }
                    sum += prod;
                }
                sum
            })
            .collect()
    }

    /// Divided differences `(l_k(s) - l_k(t)) / (s - t)`, the derivative when `s == t`.
    pub fn divided_difference(&self, s: f64, t: f64) -> Vec<f64> {
        if s == t {
            return self.eval_derivative(s);
        }
        let (a, b) = (self.eval(s), self.eval(t));
        a.iter().zip(&b).map(|(u, v)| (u - v) / (s - t)).collect()
    }
}
