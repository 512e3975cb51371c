//! Elementary connectivity changes: 3-2 (edge removal), 2-3 (edge
//! insertion) and 4-4 (edge re-pairing) flips, with the bookkeeping the
//! space-time hole construction needs.

use crate::geometry::{tet_volume, V3};
use crate::mesh::{StarRegion, TetId, Tetrahedralization};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipKind {
    F32,
    F23,
    F44,
}

impl std::fmt::Display for FlipKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FlipKind::F32 => write!(f, "3-2"),
            FlipKind::F23 => write!(f, "2-3"),
            FlipKind::F44 => write!(f, "4-4"),
        }
    }
}

/// One executed elementary flip. Removed ids live in the pre-step slab,
/// created ids are assigned on application; both keep the cyclic orders the
/// hole geometry relies on.
#[derive(Debug, Clone)]
pub struct FlipEvent {
    pub kind: FlipKind,
    /// All generators of the cavity: 5 for 3-2/2-3, 6 for 4-4 (sorted).
    pub generators: Vec<usize>,
    /// 3-2: the cyclic star around the removed edge. 2-3: [tet containing
    /// apex a, tet containing apex b]. 4-4: the cyclic star of the old edge.
    pub removed: Vec<TetId>,
    /// 3-2: [tet containing edge.0, tet containing edge.1]. 2-3: the cyclic
    /// ring around the new edge, ring position k between face corners k and
    /// k+1. 4-4: the cyclic star of the new edge.
    pub created: Vec<TetId>,
    pub geometry: FlipGeometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipGeometry {
    /// 3-2: `edge` disappears; the dual face between its endpoints' cells
    /// collapses onto the dual edge between the two created tets.
    EdgeRemoval { edge: (usize, usize) },
    /// 2-3: `face` is pierced by the new edge; the dual edge between the
    /// two removed tets expands into the new cells' shared face.
    FaceRemoval { face: [usize; 3], new_edge: (usize, usize) },
    /// 4-4: `old_edge` is replaced by `new_edge` across the same 6 points.
    EdgeRepair { old_edge: (usize, usize), new_edge: (usize, usize) },
}

impl FlipEvent {
    pub fn touches(&self, generator: usize) -> bool {
        self.generators.binary_search(&generator).is_ok()
    }
}

/// Link cycle of a closed star: vertex k is shared by ring tets k-1 and k,
/// so tet k spans {a, b, link[k], link[k+1]}.
pub fn link_cycle(
    mesh: &Tetrahedralization,
    a: usize,
    b: usize,
    star: &StarRegion,
) -> Result<Vec<usize>> {
    if !star.closed {
        return Err(Error::TopologyCorrupt(format!(
            "link cycle requested for open star of ({a},{b})"
        )));
    }
    let m = star.tets.len();
    let mut link = Vec::with_capacity(m);
    for k in 0..m {
        let prev = star.tets[(k + m - 1) % m];
        let cur = star.tets[k];
        let pv = mesh.vertices(prev);
        let shared = mesh
            .vertices(cur)
            .into_iter()
            .find(|&v| v != a && v != b && pv.contains(&v))
            .ok_or_else(|| {
                Error::TopologyCorrupt(format!("ring tets around ({a},{b}) share no link vertex"))
            })?;
        link.push(shared);
    }
    Ok(link)
}

fn cavity_volume(mesh: &Tetrahedralization, tets: &[TetId], pos: &[V3]) -> f64 {
    tets.iter().map(|&t| mesh.volume(t, pos).abs()).sum()
}

fn tets_volume(tets: &[[usize; 4]], pos: &[V3]) -> Option<f64> {
    let mut sum = 0.0;
    for t in tets {
        let v = tet_volume(&pos[t[0]], &pos[t[1]], &pos[t[2]], &pos[t[3]]);
        if v.abs() <= 0.0 {
            return None;
        }
        sum += v.abs();
    }
    Some(sum)
}

const CAVITY_TOL: f64 = 1e-9;

/// Plan a 3-2 flip removing `edge`; the star must have exactly 3 tets.
/// Returns (ordered removed ids, created connectivity, generators) or None
/// when the configuration is not flippable (new tets degenerate or the
/// cavity volume not conserved).
pub fn plan_32(
    mesh: &Tetrahedralization,
    pos: &[V3],
    edge: (usize, usize),
) -> Result<Option<(Vec<TetId>, Vec<[usize; 4]>, Vec<usize>)>> {
    let star = mesh.star_region(edge.0, edge.1)?;
    if !star.closed || star.tets.len() != 3 {
        return Err(Error::TopologyCorrupt(format!(
            "3-2 flip needs a closed 3-star on ({},{})",
            edge.0, edge.1
        )));
    }
    let link = link_cycle(mesh, edge.0, edge.1, &star)?;
    let created = vec![
        [edge.0, link[0], link[1], link[2]],
        [edge.1, link[0], link[2], link[1]],
    ];
    let old_vol = cavity_volume(mesh, &star.tets, pos);
    match tets_volume(&created, pos) {
        Some(new_vol) if (new_vol - old_vol).abs() <= CAVITY_TOL * old_vol => {
            let mut gens = vec![edge.0, edge.1, link[0], link[1], link[2]];
            gens.sort_unstable();
            Ok(Some((star.tets, created, gens)))
        }
        _ => Ok(None),
    }
}

/// Plan a 2-3 flip inserting an edge through interior face `face`.
pub fn plan_23(
    mesh: &Tetrahedralization,
    pos: &[V3],
    face: [usize; 3],
) -> Result<Option<(Vec<TetId>, Vec<[usize; 4]>, Vec<usize>, (usize, usize))>> {
    // The two tets sharing the face.
    let mut pair: Vec<(TetId, usize)> = Vec::new();
    for &t in mesh.ball(face[0]) {
        let vs = mesh.vertices(t);
        if face.iter().all(|v| vs.contains(v)) {
            let apex = vs.into_iter().find(|v| !face.contains(v)).unwrap();
            pair.push((t, apex));
        }
    }
    if pair.len() != 2 {
        return Err(Error::TopologyCorrupt(format!(
            "face {face:?} is not an interior face (shared by {} tets)",
            pair.len()
        )));
    }
    let (ta, a) = pair[0];
    let (tb, b) = pair[1];
    let created = vec![
        [a, b, face[0], face[1]],
        [a, b, face[1], face[2]],
        [a, b, face[2], face[0]],
    ];
    let old_vol = cavity_volume(mesh, &[ta, tb], pos);
    match tets_volume(&created, pos) {
        Some(new_vol) if (new_vol - old_vol).abs() <= CAVITY_TOL * old_vol => {
            let mut gens = vec![a, b, face[0], face[1], face[2]];
            gens.sort_unstable();
            Ok(Some((vec![ta, tb], created, gens, (a, b))))
        }
        _ => Ok(None),
    }
}

/// Plan a 4-4 flip on `edge` whose 4-star link cycle (w0..w3) is re-paired
/// across `diagonal`, which must join two opposite link vertices.
pub fn plan_44(
    mesh: &Tetrahedralization,
    pos: &[V3],
    edge: (usize, usize),
    diagonal: (usize, usize),
) -> Result<Option<(Vec<TetId>, Vec<[usize; 4]>, Vec<usize>)>> {
    let star = mesh.star_region(edge.0, edge.1)?;
    if !star.closed || star.tets.len() != 4 {
        return Err(Error::TopologyCorrupt(format!(
            "4-4 flip needs a closed 4-star on ({},{})",
            edge.0, edge.1
        )));
    }
    let link = link_cycle(mesh, edge.0, edge.1, &star)?;
    let d0 = link.iter().position(|&v| v == diagonal.0);
    let d1 = link.iter().position(|&v| v == diagonal.1);
    let (d0, d1) = match (d0, d1) {
        (Some(i), Some(j)) if (i + 2) % 4 == j => (i, j),
        (Some(i), Some(j)) if (j + 2) % 4 == i => (j, i),
        _ => {
            return Err(Error::TopologyCorrupt(format!(
                "diagonal {diagonal:?} does not join opposite link vertices {link:?}"
            )))
        }
    };
    let (u, v) = (link[d0], link[d1]);
    let s = link[(d0 + 1) % 4];
    let t = link[(d0 + 3) % 4];
    // New ring around (u, v) over the cycle (edge.0, s, edge.1, t).
    let created = vec![
        [u, v, edge.0, s],
        [u, v, s, edge.1],
        [u, v, edge.1, t],
        [u, v, t, edge.0],
    ];
    let old_vol = cavity_volume(mesh, &star.tets, pos);
    match tets_volume(&created, pos) {
        Some(new_vol) if (new_vol - old_vol).abs() <= CAVITY_TOL * old_vol => {
            let mut gens = vec![edge.0, edge.1, link[0], link[1], link[2], link[3]];
            gens.sort_unstable();
            Ok(Some((star.tets, created, gens)))
        }
        _ => Ok(None),
    }
}

/// Execute a planned 3-2 flip and record the event. The created list is
/// ordered [tet containing edge.0, tet containing edge.1].
pub fn execute_32(
    mesh: &mut Tetrahedralization,
    pos: &[V3],
    edge: (usize, usize),
) -> Result<Option<FlipEvent>> {
    let Some((removed, created, generators)) = plan_32(mesh, pos, edge)? else {
        return Ok(None);
    };
    let ids = mesh.apply_flip(&removed, &created, pos)?;
    Ok(Some(FlipEvent {
        kind: FlipKind::F32,
        generators,
        removed,
        created: ids,
        geometry: FlipGeometry::EdgeRemoval { edge },
    }))
}

pub fn execute_23(
    mesh: &mut Tetrahedralization,
    pos: &[V3],
    face: [usize; 3],
) -> Result<Option<FlipEvent>> {
    let Some((removed, created, generators, new_edge)) = plan_23(mesh, pos, face)? else {
        return Ok(None);
    };
    let ids = mesh.apply_flip(&removed, &created, pos)?;
    Ok(Some(FlipEvent {
        kind: FlipKind::F23,
        generators,
        removed,
        created: ids,
        geometry: FlipGeometry::FaceRemoval { face, new_edge },
    }))
}

pub fn execute_44(
    mesh: &mut Tetrahedralization,
    pos: &[V3],
    edge: (usize, usize),
    diagonal: (usize, usize),
) -> Result<Option<FlipEvent>> {
    let Some((removed, created, generators)) = plan_44(mesh, pos, edge, diagonal)? else {
        return Ok(None);
    };
    let ids = mesh.apply_flip(&removed, &created, pos)?;
    Ok(Some(FlipEvent {
        kind: FlipKind::F44,
        generators,
        removed,
        created: ids,
        geometry: FlipGeometry::EdgeRepair { old_edge: edge, new_edge: diagonal },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::builders::{self, SanityKind};

    #[test]
    fn sanity_32_flip_round_trip() {
        let (gens, mut mesh, _) = builders::sanity_cube(SanityKind::Flip32);
        let n0 = mesh.n_alive();
        let vol0 = mesh.total_volume(&gens.positions);
        let ev = execute_32(&mut mesh, &gens.positions, (0, 1)).unwrap().unwrap();
        assert_eq!(ev.kind, FlipKind::F32);
        assert_eq!(ev.removed.len(), 3);
        assert_eq!(ev.created.len(), 2);
        assert_eq!(ev.generators, vec![0, 1, 2, 3, 4]);
        assert_eq!(mesh.n_alive(), n0 - 1);
        assert!(!mesh.contains_edge(0, 1));
        assert!((mesh.total_volume(&gens.positions) - vol0).abs() < 1e-12 * vol0);
        mesh.validate(&gens.positions).unwrap();
        // Reverse with a 2-3 on the middle face restores the tet count.
        let ev2 = execute_23(&mut mesh, &gens.positions, [2, 3, 4]).unwrap().unwrap();
        assert_eq!(ev2.kind, FlipKind::F23);
        let FlipGeometry::FaceRemoval { face, new_edge } = ev2.geometry else {
            panic!("wrong geometry kind");
        };
        assert_eq!(face, [2, 3, 4]);
        assert_eq!((new_edge.0.min(new_edge.1), new_edge.0.max(new_edge.1)), (0, 1));
        assert!(mesh.contains_edge(0, 1));
        assert_eq!(mesh.n_alive(), n0);
        mesh.validate(&gens.positions).unwrap();
    }

    #[test]
    fn sanity_44_flip() {
        let (gens, mut mesh, _) = builders::sanity_cube(SanityKind::Flip44);
        let n0 = mesh.n_alive();
        let ev = execute_44(&mut mesh, &gens.positions, (2, 3), (0, 1)).unwrap().unwrap();
        assert_eq!(ev.kind, FlipKind::F44);
        assert_eq!(ev.generators, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(mesh.n_alive(), n0);
        assert!(!mesh.contains_edge(2, 3));
        assert!(mesh.contains_edge(0, 1));
        mesh.validate(&gens.positions).unwrap();
        let star = mesh.star_region(0, 1).unwrap();
        assert_eq!(star.tets.len(), 4);
    }

    #[test]
    fn cavity_volume_conserved_on_random_configs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut tried = 0;
        let mut flipped = 0;
        while flipped < 25 && tried < 500 {
            tried += 1;
            // Random 3-star around a vertical edge.
            let mut pos = vec![
                V3::new(
                    rng.gen_range(-0.2..0.2),
                    rng.gen_range(-0.2..0.2),
                    -1.0 + rng.gen_range(-0.2..0.2),
                ),
                V3::new(
                    rng.gen_range(-0.2..0.2),
                    rng.gen_range(-0.2..0.2),
                    1.0 + rng.gen_range(-0.2..0.2),
                ),
            ];
            for k in 0..3 {
                let a = k as f64 / 3.0 * std::f64::consts::TAU + rng.gen_range(-0.3..0.3);
                let r = 1.0 + rng.gen_range(-0.3..0.5);
                pos.push(V3::new(r * a.cos(), r * a.sin(), rng.gen_range(-0.3..0.3)));
            }
            let tets = vec![[0, 1, 2, 3], [0, 1, 3, 4], [0, 1, 4, 2]];
            let Ok(mut mesh) = Tetrahedralization::new(tets, &pos) else {
                continue;
            };
            let vol0 = mesh.total_volume(&pos);
            match execute_32(&mut mesh, &pos, (0, 1)).unwrap() {
                Some(_) => {
                    flipped += 1;
                    let vol1 = mesh.total_volume(&pos);
                    assert!(
                        (vol1 - vol0).abs() <= 1e-12 * vol0,
                        "cavity volume changed: {vol0} -> {vol1}"
                    );
                }
                None => {}
            }
        }
        assert!(flipped >= 25, "only {flipped} random flips realizable");
    }
}
