//! Gaussian quadrature on the reference elements used by the scheme:
//! the unit interval (time direction and prism height), the reference
//! triangle, the reference tetrahedron, and the reference triangular prism.
//!
//! Triangle and tetrahedron rules are conical products built from
//! Gauss-Jacobi rules so that `n` points per axis integrate total degree
//! `2n - 1` exactly. The paper-facing counts are
//! `max(8, (N+1)^3)` points on the tetrahedron and
//! `max(2, N+1) * max(4, (N+1)^2)` on the prism, with a boosted variant
//! using `N+2` in place of `N+1` for surface-flux integrals.

use crate::{Error, Result};
use nalgebra::DMatrix;

/// Nodes and weights on a reference element. For the triangle the third node
/// coordinate is zero; for the prism the node is (zeta1, zeta2, height).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// One-dimensional rule on [0, 1].
#[derive(Debug, Clone)]
pub struct LineRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LineRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
}

/// Gauss-Jacobi rule with weight (1-x)^alpha on [0, 1] via Golub-Welsch.
/// alpha = 0 reduces to Gauss-Legendre.
fn gauss_jacobi_unit(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let b = 0.0f64;
    let a = alpha;
    // Recurrence coefficients of the (non-monic) Jacobi polynomials on [-1,1].
    let diag = |k: usize| -> f64 {
        let k = k as f64;
        if k == 0.0 && a + b == 0.0 {
            0.0
        } else {
            (b * b - a * a) / ((2.0 * k + a + b) * (2.0 * k + a + b + 2.0))
        }
    };
    let offd = |k: usize| -> f64 {
        let k = k as f64;
        let num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
        let den = (2.0 * k + a + b).powi(2) * (2.0 * k + a + b + 1.0) * (2.0 * k + a + b - 1.0);
        (num / den).sqrt()
    };
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = diag(k);
        if k + 1 < n {
            let e = offd(k + 1);
            m[(k, k + 1)] = e;
            m[(k + 1, k)] = e;
        }
    }
    let eig = m.symmetric_eigen();
    // mu0 = integral of (1-t)^a (1+t)^b over [-1,1] with b = 0.
    let mu0 = 2.0f64.powf(a + 1.0) / (a + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = eig.eigenvalues[i];
            let w = mu0 * eig.eigenvectors[(0, i)].powi(2);
            // Map [-1,1] -> [0,1] carrying the weight normalization.
            ((t + 1.0) * 0.5, w * 2.0f64.powf(-a - 1.0))
        })
        .collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    pairs.into_iter().unzip()
}

/// Gauss-Legendre rule on [0, 1].
pub fn gauss_legendre_unit(n: usize) -> LineRule {
    let (nodes, weights) = gauss_jacobi_unit(n, 0.0);
    LineRule { nodes, weights }
}

/// Conical-product rule on the reference triangle {(0,0),(1,0),(0,1)} with
/// n*n points, exact for total degree 2n-1.
pub fn triangle_rule(n: usize) -> QuadratureRule {
    let (x, wx) = gauss_jacobi_unit(n, 1.0);
    let (u, wu) = gauss_jacobi_unit(n, 0.0);
    let mut nodes = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            nodes.push([x[i], (1.0 - x[i]) * u[j], 0.0]);
            weights.push(wx[i] * wu[j]);
        }
    }
    QuadratureRule { nodes, weights }
}

/// Conical-product rule on the reference tetrahedron with n^3 points,
/// exact for total degree 2n-1.
pub fn tetrahedron_rule(n: usize) -> QuadratureRule {
    let (x, wx) = gauss_jacobi_unit(n, 2.0);
    let (v, wv) = gauss_jacobi_unit(n, 1.0);
    let (w, ww) = gauss_jacobi_unit(n, 0.0);
    let mut nodes = Vec::with_capacity(n * n * n);
    let mut weights = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let xi = x[i];
                let yj = (1.0 - xi) * v[j];
                let zk = (1.0 - xi) * (1.0 - v[j]) * w[k];
                nodes.push([xi, yj, zk]);
                weights.push(wx[i] * wv[j] * ww[k]);
            }
        }
    }
    QuadratureRule { nodes, weights }
}

/// Tensor rule on the reference triangular prism: triangle rule with
/// nt*nt points times an nh-point Gauss-Legendre rule in the height.
pub fn prism_rule(nt: usize, nh: usize) -> QuadratureRule {
    let tri = triangle_rule(nt);
    let line = gauss_legendre_unit(nh);
    let mut nodes = Vec::with_capacity(tri.len() * line.len());
    let mut weights = Vec::with_capacity(tri.len() * line.len());
    for h in 0..line.len() {
        for t in 0..tri.len() {
            nodes.push([tri.nodes[t][0], tri.nodes[t][1], line.nodes[h]]);
            weights.push(tri.weights[t] * line.weights[h]);
        }
    }
    QuadratureRule { nodes, weights }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Tet,
    Prism,
    PrismBoosted,
}

/// Per-axis point count for degree N: max(2, N+1), or max(2, N+2) boosted.
fn axis_points(n_degree: usize, boosted: bool) -> usize {
    let base = if boosted { n_degree + 2 } else { n_degree + 1 };
    base.max(2)
}

/// Reference rules sized by the polynomial degree N of the scheme:
/// tet: max(8, (N+1)^3) points; prism: max(2, N+1) * max(4, (N+1)^2);
/// boosted prism: max(2, N+2) * max(4, (N+2)^2).
pub fn reference_quadrature(kind: RuleKind, n_degree: usize) -> Result<QuadratureRule> {
    if n_degree > 3 {
        return Err(Error::UnsupportedDegree(n_degree));
    }
    let rule = match kind {
        RuleKind::Tet => tetrahedron_rule(axis_points(n_degree, false)),
        RuleKind::Prism => {
            let n = axis_points(n_degree, false);
            prism_rule(n, n)
        }
        RuleKind::PrismBoosted => {
            let n = axis_points(n_degree, true);
            prism_rule(n, n)
        }
    };
    Ok(rule)
}

/// Gauss points in normalized time [0, 1]; the paper uses max(2, N+1)
/// slices for space-time volume measures.
pub fn time_rule(n_degree: usize) -> LineRule {
    gauss_legendre_unit((n_degree + 1).max(2))
}

/// Time rule used when assembling solver volume integrals. One extra point
/// over the measure rule makes the moving-test-function volume terms exact
/// for polynomial data, which the stationary-exactness checks rely on.
pub fn solver_time_rule(n_degree: usize) -> LineRule {
    gauss_legendre_unit((n_degree + 2).max(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monomials_up_to(total: usize, dim: usize) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for i in 0..=total {
            for j in 0..=total {
                for k in 0..=total {
                    if i + j + k <= total && (dim >= 3 || k == 0) && (dim >= 2 || j == 0) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// Exact integral of x^i y^j z^k over the reference tetrahedron:
    /// i! j! k! / (i+j+k+3)!.
    fn tet_exact(i: usize, j: usize, k: usize) -> f64 {
        fn fact(n: usize) -> f64 {
            (1..=n).map(|v| v as f64).product()
        }
        fact(i) * fact(j) * fact(k) / fact(i + j + k + 3)
    }

    /// Exact integral of x^i y^j over the reference triangle: i! j! / (i+j+2)!.
    fn tri_exact(i: usize, j: usize) -> f64 {
        fn fact(n: usize) -> f64 {
            (1..=n).map(|v| v as f64).product()
        }
        fact(i) * fact(j) / fact(i + j + 2)
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in 1..=6 {
            let rule = gauss_legendre_unit(n);
            for p in 0..=(2 * n - 1) {
                let num: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * x.powi(p as i32))
                    .sum();
                let exact = 1.0 / (p as f64 + 1.0);
                assert!(
                    (num - exact).abs() < 1e-13,
                    "n={n} p={p}: {num} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn tetrahedron_measure_and_exactness() {
        for deg in 0..=3usize {
            let n = (deg + 1).max(2);
            let rule = tetrahedron_rule(n);
            assert_eq!(rule.len(), n * n * n);
            assert!((rule.total_weight() - 1.0 / 6.0).abs() < 1e-14);
            // Exact through total degree 2n-1 >= 2*deg.
            for m in monomials_up_to(2 * deg, 3) {
                let num: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| {
                        w * x[0].powi(m[0] as i32)
                            * x[1].powi(m[1] as i32)
                            * x[2].powi(m[2] as i32)
                    })
                    .sum();
                let exact = tet_exact(m[0], m[1], m[2]);
                assert!(
                    (num - exact).abs() < 1e-13,
                    "deg={deg} m={m:?}: {num} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn triangle_exactness() {
        for deg in 0..=5usize {
            let n = (deg + 1).max(2);
            let rule = triangle_rule(n);
            for m in monomials_up_to(2 * deg, 2) {
                let num: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * x[0].powi(m[0] as i32) * x[1].powi(m[1] as i32))
                    .sum();
                let exact = tri_exact(m[0], m[1]);
                assert!((num - exact).abs() < 1e-13, "m={m:?}");
            }
        }
    }

    #[test]
    fn prism_counts_match_formula() {
        // tet: max(8,(N+1)^3); prism: max(2,N+1)*max(4,(N+1)^2).
        let cases = [(0usize, 8usize, 8usize), (1, 8, 8), (2, 27, 27), (3, 64, 64)];
        for (n, tet_count, _) in cases {
            let tet = reference_quadrature(RuleKind::Tet, n).unwrap();
            assert_eq!(tet.len(), tet_count.max(8));
        }
        assert_eq!(reference_quadrature(RuleKind::Prism, 1).unwrap().len(), 8);
        assert_eq!(reference_quadrature(RuleKind::Prism, 2).unwrap().len(), 27);
        assert_eq!(
            reference_quadrature(RuleKind::PrismBoosted, 1).unwrap().len(),
            3 * 9
        );
        // Reference prism measure is 1/2.
        let p = reference_quadrature(RuleKind::Prism, 0).unwrap();
        assert!((p.total_weight() - 0.5).abs() < 1e-14);
        assert!(reference_quadrature(RuleKind::Tet, 4).is_err());
    }
}
