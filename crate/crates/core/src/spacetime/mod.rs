//! 4D space-time geometry: control volumes connecting two tessellations,
//! hole elements filling the gaps opened by flips, and the bilinear prism
//! surfaces carrying all lateral flux integrals.

pub mod tracks;
pub mod volumes;

use crate::geometry::V3;

/// A space-time triangular prism: three vertex tracks, each running from a
/// point at t_n to a point at t_{n+1}. Points on the surface follow the
/// bilinear basis: barycentric in (zeta1, zeta2) on the triangle, linear in
/// normalized time tau. Degenerate bases (repeated points, zero area) are
/// legitimate: hole surfaces pinch onto edges and points at the ends of the
/// step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrismTrack {
    /// tracks[k] = (position at t_n, position at t_{n+1}).
    pub tracks: [(V3, V3); 3],
}

/// Below this jacobian magnitude a sample is treated as an exact geometric
/// degeneracy and contributes zero flux; interior Gauss nodes never sit on
/// an exact pinch, but guard anyway.
pub const DEGENERACY_TOL: f64 = 1e-300;

/// One quadrature sample of a space-time surface: the 4D position, the unit
/// space-time normal split into spatial and time parts, and the jacobian
/// magnitude that multiplies the quadrature weight.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceSample {
    pub x: V3,
    pub tau: f64,
    pub nx: V3,
    pub nt: f64,
    pub jac: f64,
}

impl PrismTrack {
    pub fn new(tracks: [(V3, V3); 3]) -> Self {
        Self { tracks }
    }

    /// Spatial position of the bilinear map at (zeta1, zeta2, tau).
    pub fn eval(&self, z1: f64, z2: f64, tau: f64) -> V3 {
        let z3 = 1.0 - z1 - z2;
        let bottom = self.tracks[0].0 * z1 + self.tracks[1].0 * z2 + self.tracks[2].0 * z3;
        let top = self.tracks[0].1 * z1 + self.tracks[1].1 * z2 + self.tracks[2].1 * z3;
        bottom * (1.0 - tau) + top * tau
    }

    /// Unnormalized space-time normal (the generalized cross product of the
    /// three tangent vectors) at a parameter point. With u = d/dz1, v = d/dz2
    /// (purely spatial) and w = d/dtau = (w_x, dt):
    /// n = (dt (u x v), -(u x v) . w_x).
    pub fn raw_normal(&self, dt: f64, z1: f64, z2: f64, tau: f64) -> (V3, f64) {
        let (a0, a1) = self.tracks[0];
        let (b0, b1) = self.tracks[1];
        let (c0, c1) = self.tracks[2];
        let u = (a0 - c0) * (1.0 - tau) + (a1 - c1) * tau;
        let v = (b0 - c0) * (1.0 - tau) + (b1 - c1) * tau;
        let z3 = 1.0 - z1 - z2;
        let w = (a1 - a0) * z1 + (b1 - b0) * z2 + (c1 - c0) * z3;
        let cross = u.cross(&v);
        (cross * dt, -cross.dot(&w))
    }

    /// Quadrature sample with unit normal and jacobian magnitude; `sign`
    /// flips the normal so it points outward from the owning element.
    pub fn sample(&self, dt: f64, z1: f64, z2: f64, tau: f64, sign: f64) -> SurfaceSample {
        let (nx_raw, nt_raw) = self.raw_normal(dt, z1, z2, tau);
        let jac = (nx_raw.norm_squared() + nt_raw * nt_raw).sqrt();
        if jac <= DEGENERACY_TOL {
            return SurfaceSample {
                x: self.eval(z1, z2, tau),
                tau,
                nx: V3::zeros(),
                nt: 0.0,
                jac: 0.0,
            };
        }
        SurfaceSample {
            x: self.eval(z1, z2, tau),
            tau,
            nx: nx_raw * (sign / jac),
            nt: nt_raw * sign / jac,
            jac,
        }
    }

    /// 3D space-time measure of the patch (integral of the jacobian over
    /// the reference prism; reference weights sum to 1/2, hence the factor).
    pub fn measure(&self, dt: f64, rule: &crate::quadrature::QuadratureRule) -> f64 {
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(n, w)| {
                let (nx, nt) = self.raw_normal(dt, n[0], n[1], n[2]);
                w * (nx.norm_squared() + nt * nt).sqrt()
            })
            .sum::<f64>()
    }
}

/// A tracked sub-tetrahedron of a space-time volume: four vertex tracks,
/// first vertex at the element center. Slices at fixed tau are ordinary
/// tetrahedra; their signed volume is positive for outward-oriented facets.
#[derive(Debug, Clone, Copy)]
pub struct SubTetTrack {
    pub start: [V3; 4],
    pub end: [V3; 4],
}

impl SubTetTrack {
    pub fn slice(&self, tau: f64) -> [V3; 4] {
        [
            self.start[0] * (1.0 - tau) + self.end[0] * tau,
            self.start[1] * (1.0 - tau) + self.end[1] * tau,
            self.start[2] * (1.0 - tau) + self.end[2] * tau,
            self.start[3] * (1.0 - tau) + self.end[3] * tau,
        ]
    }

    pub fn volume_at(&self, tau: f64) -> f64 {
        let v = self.slice(tau);
        crate::geometry::tet_volume(&v[0], &v[1], &v[2], &v[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature;

    #[test]
    fn beta_eval_corners_and_static_surface() {
        let a = V3::new(0.0, 0.0, 0.0);
        let b = V3::new(1.0, 0.0, 0.0);
        let c = V3::new(0.0, 1.0, 0.0);
        let a1 = V3::new(0.1, 0.0, 0.5);
        let b1 = V3::new(1.1, 0.0, 0.5);
        let c1 = V3::new(0.1, 1.0, 0.5);
        let p = PrismTrack::new([(a, a1), (b, b1), (c, c1)]);
        // tau = 0 restricts to the bottom triangle.
        assert!((p.eval(1.0, 0.0, 0.0) - a).norm() < 1e-15);
        assert!((p.eval(0.0, 1.0, 0.0) - b).norm() < 1e-15);
        assert!((p.eval(0.0, 0.0, 0.0) - c).norm() < 1e-15);
        // Vertex track corner: (1,0,1) lands on the top image of vertex 1.
        assert!((p.eval(1.0, 0.0, 1.0) - a1).norm() < 1e-15);
        // Static surface: result independent of tau.
        let s = PrismTrack::new([(a, a), (b, b), (c, c)]);
        for tau in [0.0, 0.3, 1.0] {
            assert!((s.eval(0.2, 0.3, tau) - s.eval(0.2, 0.3, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn static_triangle_normal_and_measure() {
        // Right triangle in the z = 0 plane, area 1/2, dt = 1:
        // normal (0,0,±1,0), jacobian 2A = 1.
        let a = V3::new(0.0, 0.0, 0.0);
        let b = V3::new(1.0, 0.0, 0.0);
        let c = V3::new(0.0, 1.0, 0.0);
        let p = PrismTrack::new([(a, a), (b, b), (c, c)]);
        let s = p.sample(1.0, 0.25, 0.25, 0.5, 1.0);
        assert!((s.nx - V3::new(0.0, 0.0, 1.0)).norm() < 1e-14);
        assert!(s.nt.abs() < 1e-15);
        assert!((s.jac - 1.0).abs() < 1e-14);
        // Measure over dt: A * dt.
        let rule = quadrature::reference_quadrature(quadrature::RuleKind::Prism, 1).unwrap();
        for dt in [1.0, 0.05] {
            assert!((p.measure(dt, &rule) - 0.5 * dt).abs() < 1e-13);
        }
    }

    #[test]
    fn rigid_translation_recovers_grid_velocity() {
        // Surface translating with velocity v: -nt/|nx| = v . unit spatial
        // normal at every sample point.
        let a = V3::new(0.0, 0.0, 0.0);
        let b = V3::new(1.0, 0.2, 0.0);
        let c = V3::new(0.3, 1.0, 0.1);
        let vel = V3::new(0.4, -0.3, 0.8);
        let dt = 0.07;
        let p = PrismTrack::new([(a, a + vel * dt), (b, b + vel * dt), (c, c + vel * dt)]);
        for (z1, z2, tau) in [(0.2, 0.3, 0.1), (0.5, 0.25, 0.9), (0.1, 0.1, 0.5)] {
            let s = p.sample(dt, z1, z2, tau, 1.0);
            let vn = -s.nt / s.nx.norm();
            let expect = vel.dot(&(s.nx / s.nx.norm()));
            assert!((vn - expect).abs() < 1e-12, "{vn} vs {expect}");
        }
    }

    #[test]
    fn degenerate_samples_are_finite() {
        // Fully pinched triangle (all tracks to one point) at tau = 1.
        let a = V3::new(0.0, 0.0, 0.0);
        let b = V3::new(1.0, 0.0, 0.0);
        let c = V3::new(0.0, 1.0, 0.0);
        let q = V3::new(0.5, 0.5, 1.0);
        let p = PrismTrack::new([(a, q), (b, q), (c, q)]);
        let s = p.sample(0.1, 1.0 / 3.0, 1.0 / 3.0, 1.0, 1.0);
        assert_eq!(s.jac, 0.0);
        assert!(s.nx.norm().is_finite() && s.nt.is_finite());
        // Interior samples stay finite and nonzero.
        let s = p.sample(0.1, 0.3, 0.3, 0.5, 1.0);
        assert!(s.jac > 0.0 && s.jac.is_finite());
    }

    #[test]
    fn subtet_track_volume() {
        let t = SubTetTrack {
            start: [
                V3::new(0.0, 0.0, 0.0),
                V3::new(1.0, 0.0, 0.0),
                V3::new(0.0, 1.0, 0.0),
                V3::new(0.0, 0.0, 1.0),
            ],
            end: [
                V3::new(0.0, 0.0, 0.0),
                V3::new(2.0, 0.0, 0.0),
                V3::new(0.0, 2.0, 0.0),
                V3::new(0.0, 0.0, 2.0),
            ],
        };
        assert!((t.volume_at(0.0) - 1.0 / 6.0).abs() < 1e-15);
        assert!((t.volume_at(1.0) - 8.0 / 6.0).abs() < 1e-14);
        // Cubic growth in tau.
        let tau = 0.5;
        assert!((t.volume_at(tau) - 1.5f64.powi(3) / 6.0).abs() < 1e-14);
    }
}
