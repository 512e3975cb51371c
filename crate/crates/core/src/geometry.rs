//! Small geometric primitives shared by the mesh and space-time modules.

use nalgebra::Vector3;

pub type V3 = Vector3<f64>;

/// Signed volume of the tetrahedron (a, b, c, d).
pub fn tet_volume(a: &V3, b: &V3, c: &V3, d: &V3) -> f64 {
    (b - a).cross(&(c - a)).dot(&(d - a)) / 6.0
}

pub fn tet_centroid(a: &V3, b: &V3, c: &V3, d: &V3) -> V3 {
    (a + b + c + d) / 4.0
}

pub fn triangle_area(a: &V3, b: &V3, c: &V3) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

/// Area-weighted normal (twice the area vector) of triangle (a, b, c).
pub fn triangle_normal(a: &V3, b: &V3, c: &V3) -> V3 {
    (b - a).cross(&(c - a))
}

/// Circumsphere of a tetrahedron from the equidistance conditions.
/// Returns `None` when the 3x3 system is close to singular (flat tet),
/// which callers treat as worst quality.
pub fn circumsphere(a: &V3, b: &V3, c: &V3, d: &V3) -> Option<(V3, f64)> {
    let m = nalgebra::Matrix3::from_rows(&[
        (b - a).transpose(),
        (c - a).transpose(),
        (d - a).transpose(),
    ]);
    let rhs = V3::new(
        0.5 * (b.norm_squared() - a.norm_squared()),
        0.5 * (c.norm_squared() - a.norm_squared()),
        0.5 * (d.norm_squared() - a.norm_squared()),
    );
    // Scale-aware singularity guard standing in for a condition estimate:
    // |det| / |rows|^3 below 1e-12 is treated as numerically singular.
    let det = m.determinant();
    let scale = m.row(0).norm().max(m.row(1).norm()).max(m.row(2).norm());
    if scale <= 0.0 || det.abs() < 1e-12 * scale.powi(3) {
        return None;
    }
    let center = m.lu().solve(&rhs)?;
    let r = (center - a).norm();
    Some((center, r))
}

/// Cosine of the maximum dihedral angle of a tetrahedron; flat slivers
/// approach -1. For unit outward face normals the dihedral angle along the
/// edge shared by two faces satisfies cos(beta) = -n_i . n_j, and the widest
/// angle carries the smallest cosine.
pub fn max_dihedral_cos(verts: &[V3; 4]) -> f64 {
    const FACE: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];
    let mut normals = [V3::zeros(); 4];
    for (k, f) in FACE.iter().enumerate() {
        let n = triangle_normal(&verts[f[0]], &verts[f[1]], &verts[f[2]]);
        let len = n.norm();
        if len == 0.0 {
            return -1.0;
        }
        let opp = verts[k];
        let sign = if (opp - verts[f[0]]).dot(&n) > 0.0 { -1.0 } else { 1.0 };
        normals[k] = n * (sign / len);
    }
    let mut min_cos = 1.0f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            min_cos = min_cos.min(-normals[i].dot(&normals[j]));
        }
    }
    min_cos
}

/// Inradius-style diameter of a planar polygon: 4*area/perimeter.
/// For a triangle this is exactly the incircle diameter.
pub fn incircle_diameter(points: &[V3]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let bary: V3 = points.iter().sum::<V3>() / n as f64;
    let mut area = 0.0;
    let mut perim = 0.0;
    for k in 0..n {
        let a = points[k];
        let b = points[(k + 1) % n];
        area += triangle_area(&a, &b, &bary);
        perim += (b - a).norm();
    }
    if perim == 0.0 {
        0.0
    } else {
        4.0 * area / perim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tet_volume_unit() {
        let a = V3::zeros();
        let b = V3::new(1.0, 0.0, 0.0);
        let c = V3::new(0.0, 1.0, 0.0);
        let d = V3::new(0.0, 0.0, 1.0);
        assert!((tet_volume(&a, &b, &c, &d) - 1.0 / 6.0).abs() < 1e-15);
        assert!((tet_volume(&a, &c, &b, &d) + 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn circumsphere_regular() {
        // Regular tetrahedron inscribed in a cube has circumradius sqrt(3).
        let v = [
            V3::new(1.0, 1.0, 1.0),
            V3::new(1.0, -1.0, -1.0),
            V3::new(-1.0, 1.0, -1.0),
            V3::new(-1.0, -1.0, 1.0),
        ];
        let (c, r) = circumsphere(&v[0], &v[1], &v[2], &v[3]).unwrap();
        assert!(c.norm() < 1e-12);
        assert!((r - 3.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn circumsphere_flat_is_none() {
        let a = V3::zeros();
        let b = V3::new(1.0, 0.0, 0.0);
        let c = V3::new(0.0, 1.0, 0.0);
        let d = V3::new(0.3, 0.3, 0.0);
        assert!(circumsphere(&a, &b, &c, &d).is_none());
    }

    #[test]
    fn dihedral_regular_tet() {
        let v = [
            V3::new(1.0, 1.0, 1.0),
            V3::new(1.0, -1.0, -1.0),
            V3::new(-1.0, 1.0, -1.0),
            V3::new(-1.0, -1.0, 1.0),
        ];
        // Regular tetrahedron dihedral: arccos(1/3) ~ 70.53 deg.
        let c = max_dihedral_cos(&v);
        assert!((c - 1.0 / 3.0).abs() < 1e-12, "cos = {c}");
    }

    #[test]
    fn dihedral_sliver_approaches_pi() {
        let v = [
            V3::new(0.0, 0.0, 1e-6),
            V3::new(1.0, 0.0, 0.0),
            V3::new(-1.0, 0.0, 0.0),
            V3::new(0.0, 1.0, 0.0),
        ];
        assert!(max_dihedral_cos(&v) < -0.99);
    }

    #[test]
    fn incircle_of_triangle() {
        // Equilateral triangle with side 2: r = side/(2*sqrt(3)).
        let s = 2.0f64;
        let pts = [
            V3::new(0.0, 0.0, 0.0),
            V3::new(s, 0.0, 0.0),
            V3::new(s / 2.0, s * 3.0f64.sqrt() / 2.0, 0.0),
        ];
        let d = incircle_diameter(&pts);
        assert!((d - s / 3.0f64.sqrt()).abs() < 1e-12);
    }
}
