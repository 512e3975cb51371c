//! Modal Taylor-monomial bases.
//!
//! Multi-indices with total degree at most N are linearized by the
//! co-lexicographic order (the highest-dimension exponent is the most
//! significant), which gives the embedding property: a spatial index
//! (l1,l2,l3) has the same linear index as the space-time index
//! (l1,l2,l3,0). Three families share these indices:
//!
//! * `phi`   — spatial monomials ((x - c)/h)^l on a cell;
//! * `theta` — `phi` times ((t - t_n)/dt)^l4 on a space-time volume;
//! * `psi`   — spatial monomials around the linearly moving center
//!   c(t) = lerp(c0, c1), used as test functions in the corrector.

use crate::geometry::V3;

/// Number of d-variate monomials with total degree <= n: (1/d!) prod (n+k).
pub fn cardinality(n: usize, d: usize) -> usize {
    let mut num = 1usize;
    let mut den = 1usize;
    for k in 1..=d {
        num *= n + k;
        den *= k;
    }
    num / den
}

/// Multi-indices of total degree <= n in `d` variables (d <= 4), sorted
/// co-lexicographically: the last exponent is the most significant.
pub fn multi_indices(n: usize, d: usize) -> Vec<[usize; 4]> {
    assert!(d >= 1 && d <= 4);
    fn fill(n: usize, d: usize, level: usize, idx: &mut [usize; 4], out: &mut Vec<[usize; 4]>) {
        if level == 0 {
            out.push(*idx);
            return;
        }
        let used: usize = (level..d).map(|k| idx[k]).sum();
        for e in 0..=(n - used) {
            idx[level - 1] = e;
            fill(n, d, level - 1, idx, out);
        }
        idx[level - 1] = 0;
    }
    let mut out = Vec::with_capacity(cardinality(n, d));
    let mut idx = [0usize; 4];
    fill(n, d, d, &mut idx, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct BasisSpec {
    pub degree: usize,
    pub dim: usize,
    pub indices: Vec<[usize; 4]>,
}

impl BasisSpec {
    pub fn new(degree: usize, dim: usize) -> Self {
        Self { degree, dim, indices: multi_indices(degree, dim) }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn linear_index(&self, idx: &[usize]) -> Option<usize> {
        let mut padded = [0usize; 4];
        padded[..idx.len()].copy_from_slice(idx);
        self.indices.iter().position(|m| *m == padded)
    }
}

fn powers(x: f64, n: usize, out: &mut [f64; 5]) {
    out[0] = 1.0;
    for k in 1..=n {
        out[k] = out[k - 1] * x;
    }
}

/// Spatial basis phi on a cell with center `c` and characteristic length `h`.
/// `vals` has length L and, when given, `grad[l]` receives the gradient of
/// phi_l. Both are fully analytic.
pub fn eval_phi(
    indices: &[[usize; 4]],
    degree: usize,
    c: &V3,
    h: f64,
    x: &V3,
    vals: &mut [f64],
    mut grad: Option<&mut [[f64; 3]]>,
) {
    let mut p = [[0.0f64; 5]; 3];
    for d in 0..3 {
        powers((x[d] - c[d]) / h, degree, &mut p[d]);
    }
    for (l, m) in indices.iter().enumerate() {
        vals[l] = p[0][m[0]] * p[1][m[1]] * p[2][m[2]];
        if let Some(g) = grad.as_deref_mut() {
            for d in 0..3 {
                g[l][d] = if m[d] == 0 {
                    0.0
                } else {
                    let mut v = m[d] as f64 / h * p[d][m[d] - 1];
                    for o in 0..3 {
                        if o != d {
                            v *= p[o][m[o]];
                        }
                    }
                    v
                };
            }
        }
    }
}

/// Space-time basis theta: phi times tau^l4 with tau = (t - t_n)/dt.
/// Optionally fills spatial gradients and the time derivative.
#[allow(clippy::too_many_arguments)]
pub fn eval_theta(
    indices: &[[usize; 4]],
    degree: usize,
    c: &V3,
    h: f64,
    dt: f64,
    x: &V3,
    tau: f64,
    vals: &mut [f64],
    mut grad: Option<&mut [[f64; 3]]>,
    mut dt_vals: Option<&mut [f64]>,
) {
    let mut p = [[0.0f64; 5]; 4];
    for d in 0..3 {
        powers((x[d] - c[d]) / h, degree, &mut p[d]);
    }
    powers(tau, degree, &mut p[3]);
    for (l, m) in indices.iter().enumerate() {
        let spatial = p[0][m[0]] * p[1][m[1]] * p[2][m[2]];
        vals[l] = spatial * p[3][m[3]];
        if let Some(g) = grad.as_deref_mut() {
            for d in 0..3 {
                g[l][d] = if m[d] == 0 {
                    0.0
                } else {
                    let mut v = m[d] as f64 / h * p[d][m[d] - 1] * p[3][m[3]];
                    for o in 0..3 {
                        if o != d {
                            v *= p[o][m[o]];
                        }
                    }
                    v
                };
            }
        }
        if let Some(dv) = dt_vals.as_deref_mut() {
            dv[l] = if m[3] == 0 {
                0.0
            } else {
                spatial * m[3] as f64 / dt * p[3][m[3] - 1]
            };
        }
    }
}

/// Moving basis psi: spatial monomials centered at the linearly interpolated
/// center c(t) = (1 - tau) c0 + tau c1, scale h (held at its t_n value).
/// The time derivative carries the chain-rule term -(c1 - c0)/dt . grad(psi).
#[allow(clippy::too_many_arguments)]
pub fn eval_psi(
    indices: &[[usize; 4]],
    degree: usize,
    c0: &V3,
    c1: &V3,
    h: f64,
    dt: f64,
    x: &V3,
    tau: f64,
    vals: &mut [f64],
    mut grad: Option<&mut [[f64; 3]]>,
    mut dt_vals: Option<&mut [f64]>,
) {
    let c = c0 * (1.0 - tau) + c1 * tau;
    let cdot = (c1 - c0) / dt;
    let mut p = [[0.0f64; 5]; 3];
    for d in 0..3 {
        powers((x[d] - c[d]) / h, degree, &mut p[d]);
    }
    let need_grad = grad.is_some() || dt_vals.is_some();
    let mut g_tmp = [0.0f64; 3];
    for (l, m) in indices.iter().enumerate() {
        vals[l] = p[0][m[0]] * p[1][m[1]] * p[2][m[2]];
        if need_grad {
            for d in 0..3 {
                g_tmp[d] = if m[d] == 0 {
                    0.0
                } else {
                    let mut v = m[d] as f64 / h * p[d][m[d] - 1];
                    for o in 0..3 {
                        if o != d {
                            v *= p[o][m[o]];
                        }
                    }
                    v
                };
            }
            if let Some(g) = grad.as_deref_mut() {
                g[l] = g_tmp;
            }
            if let Some(dv) = dt_vals.as_deref_mut() {
                dv[l] = -(cdot[0] * g_tmp[0] + cdot[1] * g_tmp[1] + cdot[2] * g_tmp[2]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cardinalities() {
        assert_eq!(
            (0..4).map(|n| cardinality(n, 3)).collect::<Vec<_>>(),
            vec![1, 4, 10, 20]
        );
        assert_eq!(
            (0..4).map(|n| cardinality(n, 4)).collect::<Vec<_>>(),
            vec![1, 5, 15, 35]
        );
    }

    #[test]
    fn colex_order_and_embedding() {
        for n in 0..4usize {
            let m3 = multi_indices(n, 3);
            let m4 = multi_indices(n, 4);
            assert_eq!(m3.len(), cardinality(n, 3));
            assert_eq!(m4.len(), cardinality(n, 4));
            // Embedding: l4 = 0 entries of the 4D list coincide positionally
            // with the 3D list.
            for (l, m) in m3.iter().enumerate() {
                assert_eq!(m4[l], *m, "n={n} l={l}");
                assert_eq!(m4[l][3], 0);
            }
        }
        // Fixed ordering example: index 1 is (1,0,0).
        let m = multi_indices(1, 3);
        assert_eq!(m[1], [1, 0, 0, 0]);
        assert_eq!(m[2], [0, 1, 0, 0]);
        assert_eq!(m[3], [0, 0, 1, 0]);
    }

    #[test]
    fn phi_at_center_and_offset() {
        let spec = BasisSpec::new(1, 3);
        let c = V3::new(0.3, -0.2, 0.9);
        let mut vals = vec![0.0; spec.len()];
        eval_phi(&spec.indices, 1, &c, 0.5, &c, &mut vals, None);
        assert_eq!(vals, vec![1.0, 0.0, 0.0, 0.0]);
        // x - c = (h, 0, 0) gives (1, 1, 0, 0) in co-lex order.
        let x = c + V3::new(0.5, 0.0, 0.0);
        eval_phi(&spec.indices, 1, &c, 0.5, &x, &mut vals, None);
        assert_eq!(vals, vec![1.0, 1.0, 0.0, 0.0]);
    }

    fn fd_check<F: Fn(&V3) -> Vec<f64>>(f: F, x: &V3, grad: &[[f64; 3]], scale: f64) {
        let h = 1e-6;
        for d in 0..3 {
            let mut xp = *x;
            let mut xm = *x;
            xp[d] += h;
            xm[d] -= h;
            let fp = f(&xp);
            let fm = f(&xm);
            for l in 0..fp.len() {
                let fd = (fp[l] - fm[l]) / (2.0 * h);
                assert!(
                    (fd - grad[l][d]).abs() <= 1e-8 * scale,
                    "l={l} d={d}: fd={fd} vs {an}",
                    an = grad[l][d]
                );
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        for n in 0..4usize {
            let spec = BasisSpec::new(n, 3);
            let c = V3::new(0.1, 0.2, -0.3);
            let h = 0.7;
            let x = V3::new(0.4, -0.1, 0.2);
            let mut vals = vec![0.0; spec.len()];
            let mut grad = vec![[0.0; 3]; spec.len()];
            eval_phi(&spec.indices, n, &c, h, &x, &mut vals, Some(&mut grad));
            fd_check(
                |y| {
                    let mut v = vec![0.0; spec.len()];
                    eval_phi(&spec.indices, n, &c, h, y, &mut v, None);
                    v
                },
                &x,
                &grad,
                10.0,
            );
        }
    }

    #[test]
    fn theta_matches_phi_at_tn() {
        // Compatibility: theta at t = t_n restricted to l4 = 0 equals phi.
        let n = 2;
        let s3 = BasisSpec::new(n, 3);
        let s4 = BasisSpec::new(n, 4);
        let c = V3::new(0.5, 0.5, 0.5);
        let x = V3::new(0.9, 0.1, 0.4);
        let mut phi = vec![0.0; s3.len()];
        let mut theta = vec![0.0; s4.len()];
        eval_phi(&s3.indices, n, &c, 0.8, &x, &mut phi, None);
        eval_theta(&s4.indices, n, &c, 0.8, 0.1, &x, 0.0, &mut theta, None, None);
        for l in 0..s3.len() {
            assert!((theta[l] - phi[l]).abs() < 1e-15);
        }
        assert!((theta[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn theta_time_derivative_fd() {
        let n = 3;
        let s4 = BasisSpec::new(n, 4);
        let c = V3::new(0.0, 0.0, 0.0);
        let (h, dt) = (0.6, 0.05);
        let x = V3::new(0.2, -0.3, 0.15);
        let tau = 0.37;
        let mut vals = vec![0.0; s4.len()];
        let mut dts = vec![0.0; s4.len()];
        eval_theta(&s4.indices, n, &c, h, dt, &x, tau, &mut vals, None, Some(&mut dts));
        let eps = 1e-6;
        let mut vp = vec![0.0; s4.len()];
        let mut vm = vec![0.0; s4.len()];
        eval_theta(&s4.indices, n, &c, h, dt, &x, tau + eps, &mut vp, None, None);
        eval_theta(&s4.indices, n, &c, h, dt, &x, tau - eps, &mut vm, None, None);
        for l in 0..s4.len() {
            let fd = (vp[l] - vm[l]) / (2.0 * eps) / dt;
            assert!((fd - dts[l]).abs() < 1e-6, "l={l}");
        }
    }

    #[test]
    fn psi_endpoints_and_static_center() {
        let n = 2;
        let s3 = BasisSpec::new(n, 3);
        let c0 = V3::new(0.0, 0.0, 0.0);
        let c1 = V3::new(0.2, -0.1, 0.3);
        let (h, dt) = (1.0, 0.1);
        let x = V3::new(0.5, 0.4, -0.3);
        let mut psi = vec![0.0; s3.len()];
        let mut phi = vec![0.0; s3.len()];
        // At tau = 0 psi equals phi centered at c0; at tau = 1, centered at c1.
        eval_psi(&s3.indices, n, &c0, &c1, h, dt, &x, 0.0, &mut psi, None, None);
        eval_phi(&s3.indices, n, &c0, 1.0, &x, &mut phi, None);
        assert_eq!(psi, phi);
        eval_psi(&s3.indices, n, &c0, &c1, h, dt, &x, 1.0, &mut psi, None, None);
        eval_phi(&s3.indices, n, &c1, 1.0, &x, &mut phi, None);
        assert_eq!(psi, phi);
        // Static center: time derivative vanishes.
        let mut dts = vec![0.0; s3.len()];
        eval_psi(&s3.indices, n, &c0, &c0, h, dt, &x, 0.5, &mut psi, None, Some(&mut dts));
        assert!(dts.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn psi_time_derivative_fd() {
        let n = 3;
        let s3 = BasisSpec::new(n, 3);
        let c0 = V3::new(0.1, 0.0, -0.2);
        let c1 = V3::new(0.15, 0.07, -0.12);
        let (h, dt) = (0.8, 0.02);
        let x = V3::new(0.3, 0.25, 0.1);
        let tau = 0.61;
        let mut vals = vec![0.0; s3.len()];
        let mut dts = vec![0.0; s3.len()];
        eval_psi(&s3.indices, n, &c0, &c1, h, dt, &x, tau, &mut vals, None, Some(&mut dts));
        let eps = 1e-7;
        let mut vp = vec![0.0; s3.len()];
        let mut vm = vec![0.0; s3.len()];
        eval_psi(&s3.indices, n, &c0, &c1, h, dt, &x, tau + eps, &mut vp, None, None);
        eval_psi(&s3.indices, n, &c0, &c1, h, dt, &x, tau - eps, &mut vm, None, None);
        for l in 0..s3.len() {
            let fd = (vp[l] - vm[l]) / (2.0 * eps) / dt;
            let denom = 1.0 + dts[l].abs();
            assert!(((fd - dts[l]) / denom).abs() < 1e-6, "l={l}: {fd} vs {}", dts[l]);
        }
    }
}
