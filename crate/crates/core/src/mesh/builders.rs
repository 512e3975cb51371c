//! Built-in mesh generators for the shipped scenarios: the 14-generator
//! sanity cube hosting a single forced flip, and structured lattices split
//! into tetrahedra (used by the rotation and vortex runs).

use super::{DomainBox, GeneratorSet, Tetrahedralization};
use crate::geometry::V3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SanityKind {
    /// Central edge (0,1) shared by 3 tets; the forced flip removes it.
    Flip32,
    /// Starts from the two-tet configuration; the forced flip inserts (0,1).
    Flip23,
    /// Central edge (2,3) shared by 4 tets; the forced flip re-pairs them.
    Flip44,
}

/// The 14-point cube [-1,1]^3: 8 corners, 4 face centers on the x/y walls
/// and two points on the z walls offset by y_s (-0.5 for 3-2/2-3, 0 for 4-4).
pub fn sanity_generators(kind: SanityKind) -> (GeneratorSet, DomainBox) {
    let y_s = match kind {
        SanityKind::Flip44 => 0.0,
        _ => -0.5,
    };
    let positions = vec![
        V3::new(0.0, y_s, -1.0),
        V3::new(0.0, y_s, 1.0),
        V3::new(1.0, 0.0, 0.0),
        V3::new(-1.0, 0.0, 0.0),
        V3::new(0.0, -1.0, 0.0),
        V3::new(0.0, 1.0, 0.0),
        V3::new(-1.0, -1.0, -1.0),
        V3::new(1.0, -1.0, -1.0),
        V3::new(1.0, 1.0, -1.0),
        V3::new(-1.0, 1.0, -1.0),
        V3::new(-1.0, -1.0, 1.0),
        V3::new(1.0, -1.0, 1.0),
        V3::new(1.0, 1.0, 1.0),
        V3::new(-1.0, 1.0, 1.0),
    ];
    let domain = DomainBox {
        lo: V3::new(-1.0, -1.0, -1.0),
        hi: V3::new(1.0, 1.0, 1.0),
    };
    let walls = positions.iter().map(|p| domain.wall_mask(p, 1e-12)).collect();
    (GeneratorSet { positions, walls }, domain)
}

/// Outer shell of the sanity cube: 8 corner tets (corner + 3 adjacent face
/// points) and 12 edge tets (cube edge + 2 adjacent face points). The
/// central octahedral region is meshed per flip kind.
fn sanity_outer_tets() -> Vec<[usize; 4]> {
    // Face point ids: x+ = 2, x- = 3, y- = 4, y+ = 5, z- = 0, z+ = 1.
    let fp = |sx: i32, axis: usize| -> usize {
        match (axis, sx) {
            (0, 1) => 2,
            (0, -1) => 3,
            (1, -1) => 4,
            (1, 1) => 5,
            (2, -1) => 0,
            (2, 1) => 1,
            _ => unreachable!(),
        }
    };
    let corner = |sx: i32, sy: i32, sz: i32| -> usize {
        match (sx, sy, sz) {
            (-1, -1, -1) => 6,
            (1, -1, -1) => 7,
            (1, 1, -1) => 8,
            (-1, 1, -1) => 9,
            (-1, -1, 1) => 10,
            (1, -1, 1) => 11,
            (1, 1, 1) => 12,
            (-1, 1, 1) => 13,
            _ => unreachable!(),
        }
    };
    let mut tets = Vec::with_capacity(20);
    for &sx in &[-1, 1] {
        for &sy in &[-1, 1] {
            for &sz in &[-1, 1] {
                tets.push([corner(sx, sy, sz), fp(sx, 0), fp(sy, 1), fp(sz, 2)]);
            }
        }
    }
    // Edge tets along each axis.
    for &sy in &[-1, 1] {
        for &sz in &[-1, 1] {
            tets.push([corner(-1, sy, sz), corner(1, sy, sz), fp(sy, 1), fp(sz, 2)]);
        }
    }
    for &sx in &[-1, 1] {
        for &sz in &[-1, 1] {
            tets.push([corner(sx, -1, sz), corner(sx, 1, sz), fp(sx, 0), fp(sz, 2)]);
        }
    }
    for &sx in &[-1, 1] {
        for &sy in &[-1, 1] {
            tets.push([corner(sx, sy, -1), corner(sx, sy, 1), fp(sx, 0), fp(sy, 1)]);
        }
    }
    tets
}

/// Central tets of the sanity cube for a flip kind, in its pre-flip state.
pub fn sanity_central_tets(kind: SanityKind) -> Vec<[usize; 4]> {
    match kind {
        // Three tets around edge (0,1) plus the bipyramid over (2,3,5)
        // covering the rest of the octahedral cavity.
        SanityKind::Flip32 => vec![
            [0, 1, 2, 3],
            [0, 1, 3, 4],
            [0, 1, 4, 2],
            [0, 2, 3, 5],
            [1, 2, 3, 5],
        ],
        // The two-tet state the 2-3 flip starts from (shared face (2,3,4)).
        SanityKind::Flip23 => vec![
            [0, 2, 3, 4],
            [1, 4, 3, 2],
            [0, 2, 3, 5],
            [1, 2, 3, 5],
        ],
        // Four tets around edge (2,3), equator cycle (0, 4, 1, 5).
        SanityKind::Flip44 => vec![
            [2, 3, 0, 4],
            [2, 3, 4, 1],
            [2, 3, 1, 5],
            [2, 3, 5, 0],
        ],
    }
}

pub fn sanity_cube(kind: SanityKind) -> (GeneratorSet, Tetrahedralization, DomainBox) {
    let (gens, domain) = sanity_generators(kind);
    let mut tets = sanity_central_tets(kind);
    tets.extend(sanity_outer_tets());
    let mesh = Tetrahedralization::new(tets, &gens.positions).expect("sanity cube is valid");
    (gens, mesh, domain)
}

/// Structured lattice of nx*ny*nz generators over the box, each grid cell
/// split into six tetrahedra sharing the main diagonal (Kuhn subdivision,
/// consistent across neighboring cells).
pub fn lattice_box(domain: &DomainBox, n: [usize; 3]) -> (GeneratorSet, Tetrahedralization) {
    assert!(n.iter().all(|&k| k >= 2));
    let mut positions = Vec::with_capacity(n[0] * n[1] * n[2]);
    let step = [
        (domain.hi[0] - domain.lo[0]) / (n[0] - 1) as f64,
        (domain.hi[1] - domain.lo[1]) / (n[1] - 1) as f64,
        (domain.hi[2] - domain.lo[2]) / (n[2] - 1) as f64,
    ];
    let id = |i: usize, j: usize, k: usize| -> usize { (k * n[1] + j) * n[0] + i };
    for k in 0..n[2] {
        for j in 0..n[1] {
            for i in 0..n[0] {
                positions.push(V3::new(
                    domain.lo[0] + i as f64 * step[0],
                    domain.lo[1] + j as f64 * step[1],
                    domain.lo[2] + k as f64 * step[2],
                ));
            }
        }
    }
    // Kuhn subdivision: six tets per cube, all containing the main diagonal
    // from (0,0,0) to (1,1,1) of the cell.
    const CUBE_TETS: [[[usize; 3]; 4]; 6] = [
        [[0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 1]],
        [[0, 0, 0], [1, 0, 0], [1, 0, 1], [1, 1, 1]],
        [[0, 0, 0], [0, 1, 0], [1, 1, 0], [1, 1, 1]],
        [[0, 0, 0], [0, 1, 0], [0, 1, 1], [1, 1, 1]],
        [[0, 0, 0], [0, 0, 1], [1, 0, 1], [1, 1, 1]],
        [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 1, 1]],
    ];
    let mut tets = Vec::with_capacity(6 * (n[0] - 1) * (n[1] - 1) * (n[2] - 1));
    for k in 0..n[2] - 1 {
        for j in 0..n[1] - 1 {
            for i in 0..n[0] - 1 {
                for tet in CUBE_TETS.iter() {
                    tets.push([
                        id(i + tet[0][0], j + tet[0][1], k + tet[0][2]),
                        id(i + tet[1][0], j + tet[1][1], k + tet[1][2]),
                        id(i + tet[2][0], j + tet[2][1], k + tet[2][2]),
                        id(i + tet[3][0], j + tet[3][1], k + tet[3][2]),
                    ]);
                }
            }
        }
    }
    let walls = positions.iter().map(|p| domain.wall_mask(p, 1e-9)).collect();
    let mesh = Tetrahedralization::new(tets, &positions).expect("lattice is valid");
    (GeneratorSet { positions, walls }, mesh)
}
