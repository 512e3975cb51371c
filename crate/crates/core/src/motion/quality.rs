//! Tetrahedron quality measures driving smoothing and flip selection.

use crate::geometry::{circumsphere, max_dihedral_cos, tet_volume, V3};
use crate::mesh::{TetId, Tetrahedralization};

/// Cutoff parameter of the smoothing weights; also the sentinel quality for
/// degenerate or inverted tets.
pub const Q_MAX: f64 = 100.0;

/// cos of the dihedral-angle threshold beta_min = arccos(-0.7) (~135 deg).
pub const COS_BETA_MIN: f64 = -0.7;

/// Shape quality: (sqrt(3)/216) (sum of squared edge lengths)^(3/2) / |T|.
/// Equals 1 for the regular tetrahedron, grows as the shape degrades, and
/// is invariant under uniform scaling. Degenerate or inverted tets return
/// the Q_MAX sentinel.
pub fn tet_quality(verts: &[V3; 4]) -> f64 {
    let vol = tet_volume(&verts[0], &verts[1], &verts[2], &verts[3]).abs();
    if vol == 0.0 {
        return Q_MAX;
    }
    let mut sum = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            sum += (verts[i] - verts[j]).norm_squared();
        }
    }
    3.0f64.sqrt() / 216.0 * sum.powf(1.5) / vol
}

/// Delaunay-and-shape quality in [0, 1]:
/// min(1, min_k |p_k - center| / radius, (1 + cos beta_max)/(1 + cos beta_min))
/// where k runs over the given neighborhood points (vertices of the balls of
/// the tet's corners). Near-degenerate circumspheres give 0.
pub fn tet_alpha(verts: &[V3; 4], neighborhood: &[V3]) -> f64 {
    let Some((center, radius)) = circumsphere(&verts[0], &verts[1], &verts[2], &verts[3]) else {
        return 0.0;
    };
    if !(radius > 0.0) || !radius.is_finite() {
        return 0.0;
    }
    let mut alpha: f64 = 1.0;
    for p in neighborhood {
        alpha = alpha.min((p - center).norm() / radius);
    }
    let dihedral = (1.0 + max_dihedral_cos(verts)) / (1.0 + COS_BETA_MIN);
    alpha.min(dihedral).min(1.0).max(0.0)
}

/// alpha of a mesh tet evaluated at candidate coordinates, gathering the
/// neighborhood from the balls of its four vertices (own vertices excluded;
/// they sit on the sphere and contribute exactly 1).
pub fn alpha_of_tet(mesh: &Tetrahedralization, tet: TetId, positions: &[V3]) -> f64 {
    let vs = mesh.vertices(tet);
    let verts = [
        positions[vs[0]],
        positions[vs[1]],
        positions[vs[2]],
        positions[vs[3]],
    ];
    let mut pts: Vec<usize> = Vec::with_capacity(32);
    for &g in vs.iter() {
        for &t in mesh.ball(g) {
            for &v in mesh.vertices(t).iter() {
                if !vs.contains(&v) {
                    pts.push(v);
                }
            }
        }
    }
    pts.sort_unstable();
    pts.dedup();
    let neighborhood: Vec<V3> = pts.into_iter().map(|v| positions[v]).collect();
    tet_alpha(&verts, &neighborhood)
}
