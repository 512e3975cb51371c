//! Generator motion: high-order Lagrangian trajectories, mesh smoothing
//! with quality-weighted averaging, the blending of the two, and the
//! incremental flip optimizer that updates the connectivity.

pub mod flips;
pub mod optimize;
pub mod quality;

use crate::geometry::V3;
use crate::mesh::{GeneratorSet, Tetrahedralization};
use quality::{tet_quality, Q_MAX};

/// Velocity and spatial derivatives up to third order at a point, as
/// recovered from the local polynomial solution. Entries beyond the
/// polynomial degree are zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct VelocityDerivs {
    pub v: [f64; 3],
    /// dv[i][j] = d v_i / d x_j
    pub dv: [[f64; 3]; 3],
    pub d2v: [[[f64; 3]; 3]; 3],
    pub d3v: [[[[f64; 3]; 3]; 3]; 3],
}

/// Source of the mesh velocity for trajectory integration.
pub trait VelocityField {
    /// Evaluate at `x` with derivatives up to `order` (0..=3).
    fn eval(&self, cell: usize, x: &V3, order: usize) -> VelocityDerivs;
}

/// Fourth-order Taylor advance of a point along the stationary velocity
/// field, with time derivatives replaced by spatial ones through the
/// trajectory equation dx/dt = v(x).
pub fn taylor_advance(p: &V3, d: &VelocityDerivs, dt: f64) -> V3 {
    let v = d.v;
    let mut d2 = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            d2[i] += d.dv[i][j] * v[j];
        }
    }
    let mut d3 = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                d3[i] += d.d2v[i][j][k] * v[j] * v[k] + d.dv[i][j] * d.dv[j][k] * v[k];
            }
        }
    }
    let mut d4 = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    d4[i] += d.d3v[i][j][k][l] * v[j] * v[k] * v[l]
                        + d.d2v[i][j][k] * d.dv[k][l] * v[l] * v[j]
                        + 2.0 * d.d2v[i][j][k] * v[k] * d.dv[j][l] * v[l]
                        + d.dv[i][j] * d.d2v[j][k][l] * v[l] * v[k]
                        + d.dv[i][j] * d.dv[j][k] * d.dv[k][l] * v[l];
                }
            }
        }
    }
    let mut out = *p;
    for i in 0..3 {
        out[i] += dt * v[i]
            + dt * dt / 2.0 * d2[i]
            + dt.powi(3) / 6.0 * d3[i]
            + dt.powi(4) / 24.0 * d4[i];
    }
    out
}

/// Blending factor between Lagrangian and smoothed positions:
/// min(1, sqrt(U* dt kappa / h_min)).
pub fn compute_mu(u_star: f64, dt: f64, h_min: f64, kappa: f64) -> f64 {
    (u_star * dt * kappa / h_min).sqrt().min(1.0)
}

/// p = (1 - mu) hat + mu star.
pub fn blend(hat: &V3, star: &V3, mu: f64) -> V3 {
    hat * (1.0 - mu) + star * mu
}

/// Ideal position of vertex `i` that would make tet `T` regular: the apex
/// over the centroid of the opposite face at height sqrt(2/3) times the
/// mean edge of that face, on i's side.
pub fn per_tet_optimal_position(i_pos: &V3, opposite: &[V3; 3]) -> V3 {
    let centroid = (opposite[0] + opposite[1] + opposite[2]) / 3.0;
    let mut n = (opposite[1] - opposite[0]).cross(&(opposite[2] - opposite[0]));
    let len = n.norm();
    if len == 0.0 {
        return *i_pos;
    }
    n /= len;
    if (i_pos - centroid).dot(&n) < 0.0 {
        n = -n;
    }
    let mean_edge = ((opposite[1] - opposite[0]).norm()
        + (opposite[2] - opposite[1]).norm()
        + (opposite[0] - opposite[2]).norm())
        / 3.0;
    centroid + n * ((2.0f64 / 3.0).sqrt() * mean_edge)
}

/// Quality-weighted smoothed position of generator `i`, evaluated on the
/// connectivity of `mesh` with the Lagrangian candidate coordinates `hat`.
/// Weights are max(Q, Q_MAX) per incident tet; inverted tets count as Q_MAX.
pub fn smooth_position(i: usize, mesh: &Tetrahedralization, hat: &[V3]) -> V3 {
    let ball = mesh.ball(i);
    if ball.is_empty() {
        return hat[i];
    }
    let mut weight_sum = 0.0;
    let mut acc = V3::zeros();
    for &t in ball {
        let vs = mesh.vertices(t);
        let verts = [hat[vs[0]], hat[vs[1]], hat[vs[2]], hat[vs[3]]];
        // Tets inverted by the Lagrangian motion weigh in at the cutoff.
        let signed = crate::geometry::tet_volume(&verts[0], &verts[1], &verts[2], &verts[3]);
        let w = if signed <= 0.0 { Q_MAX } else { tet_quality(&verts).max(Q_MAX) };
        let mut opp = [V3::zeros(); 3];
        let mut j = 0;
        for &v in vs.iter() {
            if v != i {
                opp[j] = hat[v];
                j += 1;
            }
        }
        acc += w * per_tet_optimal_position(&hat[i], &opp);
        weight_sum += w;
    }
    acc / weight_sum
}

/// Constrain a candidate position to the subspace a boundary generator may
/// move in: every flagged wall pins its coordinate.
pub fn constrain_to_walls(p: &V3, walls: u8, domain: &crate::mesh::DomainBox) -> V3 {
    let mut q = *p;
    for w in 0..crate::mesh::WALL_COUNT {
        if walls & (1 << w) != 0 {
            q[crate::mesh::wall_axis(w)] = domain.wall_coordinate(w);
        }
    }
    q
}

/// Largest generator displacement rate; the velocity scale entering mu.
pub fn max_generator_speed(old: &GeneratorSet, hat: &[V3], dt: f64) -> f64 {
    old.positions
        .iter()
        .zip(hat)
        .map(|(p, q)| (q - p).norm() / dt)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Tetrahedralization;

    #[test]
    fn taylor_constant_field() {
        let d = VelocityDerivs { v: [1.0, 0.0, 0.0], ..Default::default() };
        let p = taylor_advance(&V3::zeros(), &d, 0.1);
        assert!((p - V3::new(0.1, 0.0, 0.0)).norm() < 1e-16);
        // Zero field: unchanged.
        let z = VelocityDerivs::default();
        let q = V3::new(0.3, -0.4, 0.9);
        assert_eq!(taylor_advance(&q, &z, 0.5), q);
    }

    #[test]
    fn taylor_matches_circular_orbit_series() {
        // v = (-y, x, 0); exact orbit of (1,0,0) is (cos t, sin t, 0).
        let mut d = VelocityDerivs::default();
        d.v = [0.0, 1.0, 0.0];
        d.dv[0][1] = -1.0;
        d.dv[1][0] = 1.0;
        for dt in [0.05, 0.1, 0.2] {
            let p = taylor_advance(&V3::new(1.0, 0.0, 0.0), &d, dt);
            // Fourth-order truncation of (cos, sin).
            let cx = 1.0 - dt * dt / 2.0 + dt.powi(4) / 24.0;
            let sx = dt - dt.powi(3) / 6.0;
            assert!((p[0] - cx).abs() < 1e-14, "dt={dt}");
            assert!((p[1] - sx).abs() < 1e-14, "dt={dt}");
        }
    }

    #[test]
    fn mu_formula() {
        assert!((compute_mu(1.0, 0.01, 0.2, 1.0 / 200.0) - 1.5811388300841898e-2).abs() < 1e-12);
        // Argument 1 -> 1; 0.04 -> 0.2; clamps at 1.
        assert!((compute_mu(1.0, 1.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((compute_mu(0.04, 1.0, 1.0, 1.0) - 0.2).abs() < 1e-15);
        assert!((compute_mu(4.0, 2.0, 1.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn blend_endpoints() {
        let hat = V3::new(0.0, 0.0, 0.0);
        let star = V3::new(1.0, 1.0, 1.0);
        assert_eq!(blend(&hat, &star, 0.0), hat);
        assert_eq!(blend(&hat, &star, 1.0), star);
        assert_eq!(blend(&hat, &star, 0.5), V3::new(0.5, 0.5, 0.5));
    }

    #[test]
    fn smoothing_symmetric_ball_is_fixed_point() {
        // Vertex 0 at the origin surrounded by the 8 octant tets (0, +-e1,
        // +-e2, +-e3): by symmetry the weighted average lands back at 0.
        let mut pos = vec![V3::zeros()];
        pos.push(V3::new(1.0, 0.0, 0.0)); // 1
        pos.push(V3::new(-1.0, 0.0, 0.0)); // 2
        pos.push(V3::new(0.0, 1.0, 0.0)); // 3
        pos.push(V3::new(0.0, -1.0, 0.0)); // 4
        pos.push(V3::new(0.0, 0.0, 1.0)); // 5
        pos.push(V3::new(0.0, 0.0, -1.0)); // 6
        let tets = vec![
            [0, 1, 3, 5],
            [0, 3, 2, 5],
            [0, 2, 4, 5],
            [0, 4, 1, 5],
            [0, 3, 1, 6],
            [0, 2, 3, 6],
            [0, 4, 2, 6],
            [0, 1, 4, 6],
        ];
        let mesh = Tetrahedralization::new(tets, &pos).unwrap();
        let s = smooth_position(0, &mesh, &pos);
        assert!(s.norm() < 1e-14, "drifted to {s:?}");
    }

    #[test]
    fn smoothing_single_tet_is_per_tet_optimum() {
        let pos = vec![
            V3::new(0.2, 0.1, 0.9),
            V3::new(1.0, 0.0, 0.0),
            V3::new(0.0, 1.0, 0.0),
            V3::new(0.0, 0.0, 0.0),
        ];
        let mesh = Tetrahedralization::new(vec![[0, 1, 2, 3]], &pos).unwrap();
        let s = smooth_position(0, &mesh, &pos);
        let expect = per_tet_optimal_position(&pos[0], &[pos[1], pos[2], pos[3]]);
        assert!((s - expect).norm() < 1e-14);
        // The per-tet optimum of a regular tet is the current apex.
        let reg = [
            V3::new(1.0, 1.0, 1.0),
            V3::new(1.0, -1.0, -1.0),
            V3::new(-1.0, 1.0, -1.0),
            V3::new(-1.0, -1.0, 1.0),
        ];
        let apex = per_tet_optimal_position(&reg[0], &[reg[1], reg[2], reg[3]]);
        assert!((apex - reg[0]).norm() < 1e-12);
    }

    #[test]
    fn smoothing_matches_direct_formula_on_random_ball() {
        // Brute-force evaluation of the weighted average, written
        // independently of smooth_position's loop structure.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // 5-tet fan around edge (0,1) with ring 2,3,4,5,6.
        let mut pos = vec![V3::new(0.0, 0.0, -1.0), V3::new(0.0, 0.0, 1.0)];
        for k in 0..5 {
            let a = k as f64 / 5.0 * std::f64::consts::TAU;
            let r = 1.0 + rng.gen_range(-0.2..0.2);
            pos.push(V3::new(r * a.cos(), r * a.sin(), rng.gen_range(-0.1..0.1)));
        }
        let tets: Vec<[usize; 4]> = (0..5).map(|k| [0, 1, 2 + k, 2 + (k + 1) % 5]).collect();
        let mesh = Tetrahedralization::new(tets.clone(), &pos).unwrap();
        let got = smooth_position(0, &mesh, &pos);
        let mut num = V3::zeros();
        let mut den = 0.0;
        for t in &tets {
            let verts = [pos[t[0]], pos[t[1]], pos[t[2]], pos[t[3]]];
            let w = tet_quality(&verts).max(Q_MAX);
            let opp: Vec<V3> = t.iter().filter(|&&v| v != 0).map(|&v| pos[v]).collect();
            num += w * per_tet_optimal_position(&pos[0], &[opp[0], opp[1], opp[2]]);
            den += w;
        }
        assert!((got - num / den).norm() < 1e-13);
    }
}
