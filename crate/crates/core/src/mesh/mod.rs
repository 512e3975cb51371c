//! Tetrahedralization of the generator points, with the adjacency queries
//! the dual construction and the flip optimizer rely on. The domain is an
//! axis-aligned box; generators carry wall-membership flags so boundary
//! cells can be closed against the walls.

pub mod builders;
pub mod dual;
pub mod io;

use crate::geometry::{tet_volume, V3};
use crate::{Error, Result};
use std::collections::HashMap;

pub type TetId = usize;

/// Wall identifiers: axis * 2 + side (0 = low, 1 = high).
pub const WALL_COUNT: u8 = 6;

pub fn wall_axis(w: u8) -> usize {
    (w / 2) as usize
}

pub fn wall_is_high(w: u8) -> bool {
    w % 2 == 1
}

#[derive(Debug, Clone, Copy)]
pub struct DomainBox {
    pub lo: V3,
    pub hi: V3,
}

impl DomainBox {
    pub fn volume(&self) -> f64 {
        (self.hi - self.lo).iter().product()
    }

    pub fn wall_coordinate(&self, w: u8) -> f64 {
        if wall_is_high(w) {
            self.hi[wall_axis(w)]
        } else {
            self.lo[wall_axis(w)]
        }
    }

    /// Outward unit normal of a wall.
    pub fn wall_normal(&self, w: u8) -> V3 {
        let mut n = V3::zeros();
        n[wall_axis(w)] = if wall_is_high(w) { 1.0 } else { -1.0 };
        n
    }

    /// Project a point onto a wall plane.
    pub fn project_wall(&self, w: u8, p: &V3) -> V3 {
        let mut q = *p;
        q[wall_axis(w)] = self.wall_coordinate(w);
        q
    }

    /// Project onto the intersection line of two wall planes.
    pub fn project_line(&self, w1: u8, w2: u8, p: &V3) -> V3 {
        self.project_wall(w2, &self.project_wall(w1, p))
    }

    /// Wall membership mask of a point.
    pub fn wall_mask(&self, p: &V3, tol: f64) -> u8 {
        let mut m = 0u8;
        for w in 0..WALL_COUNT {
            if (p[wall_axis(w)] - self.wall_coordinate(w)).abs() <= tol {
                m |= 1 << w;
            }
        }
        m
    }
}

/// Generator points with wall flags. The number of generators is fixed for
/// the whole run; only positions change.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub positions: Vec<V3>,
    /// Bitmask over the six box walls; 0 marks an interior generator.
    pub walls: Vec<u8>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.walls[i] != 0
    }
}

/// Ordered ring of tetrahedra sharing an edge (the star region). For
/// interior edges the ring is a closed cycle; for wall edges it is an open
/// fan whose end tets carry boundary faces.
#[derive(Debug, Clone)]
pub struct StarRegion {
    pub tets: Vec<TetId>,
    pub closed: bool,
}

/// Tetrahedra over the generator set, stored in a slab so ids stay stable
/// across the flips of a timestep.
#[derive(Debug, Clone)]
pub struct Tetrahedralization {
    pub n_generators: usize,
    tets: Vec<[usize; 4]>,
    alive: Vec<bool>,
    /// neighbors[4 t + k] = tet across the face opposite local vertex k.
    neighbors: Vec<Option<TetId>>,
    balls: Vec<Vec<TetId>>,
    n_alive: usize,
}

fn sorted3(mut f: [usize; 3]) -> [usize; 3] {
    f.sort_unstable();
    f
}

impl Tetrahedralization {
    /// Build from raw connectivity; reorders every tet to positive volume
    /// and checks that no face is shared by more than two tets.
    pub fn new(mut tets: Vec<[usize; 4]>, positions: &[V3]) -> Result<Self> {
        let n_generators = positions.len();
        for t in tets.iter_mut() {
            for &v in t.iter() {
                if v >= n_generators {
                    return Err(Error::TopologyCorrupt(format!(
                        "tet vertex {v} out of range"
                    )));
                }
            }
            let vol = tet_volume(
                &positions[t[0]],
                &positions[t[1]],
                &positions[t[2]],
                &positions[t[3]],
            );
            if vol == 0.0 {
                return Err(Error::DegenerateGeometry(format!("zero-volume tet {t:?}")));
            }
            if vol < 0.0 {
                t.swap(2, 3);
            }
        }
        let n = tets.len();
        let mut out = Self {
            n_generators,
            tets,
            alive: vec![true; n],
            neighbors: vec![None; 4 * n],
            balls: vec![Vec::new(); n_generators],
            n_alive: n,
        };
        out.rebuild_adjacency()?;
        Ok(out)
    }

    fn rebuild_adjacency(&mut self) -> Result<()> {
        let mut by_face: HashMap<[usize; 3], Vec<(TetId, usize)>> = HashMap::new();
        for b in self.balls.iter_mut() {
            b.clear();
        }
        self.neighbors.iter_mut().for_each(|n| *n = None);
        for t in 0..self.tets.len() {
            if !self.alive[t] {
                continue;
            }
            let verts = self.tets[t];
            for k in 0..4 {
                self.balls[verts[k]].push(t);
                let f = sorted3(face_opposite(&verts, k));
                by_face.entry(f).or_default().push((t, k));
            }
        }
        for (f, users) in by_face {
            match users.len() {
                1 => {}
                2 => {
                    let (t0, k0) = users[0];
                    let (t1, k1) = users[1];
                    self.neighbors[4 * t0 + k0] = Some(t1);
                    self.neighbors[4 * t1 + k1] = Some(t0);
                }
                n => {
                    return Err(Error::TopologyCorrupt(format!(
                        "face {f:?} shared by {n} tets"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn n_alive(&self) -> usize {
        self.n_alive
    }

    pub fn is_alive(&self, t: TetId) -> bool {
        self.alive[t]
    }

    pub fn vertices(&self, t: TetId) -> [usize; 4] {
        self.tets[t]
    }

    pub fn neighbor_opposite(&self, t: TetId, local: usize) -> Option<TetId> {
        self.neighbors[4 * t + local]
    }

    pub fn ball(&self, generator: usize) -> &[TetId] {
        &self.balls[generator]
    }

    pub fn alive_tets(&self) -> impl Iterator<Item = TetId> + '_ {
        (0..self.tets.len()).filter(|&t| self.alive[t])
    }

    pub fn centroid(&self, t: TetId, positions: &[V3]) -> V3 {
        let v = self.tets[t];
        (positions[v[0]] + positions[v[1]] + positions[v[2]] + positions[v[3]]) / 4.0
    }

    pub fn volume(&self, t: TetId, positions: &[V3]) -> f64 {
        let v = self.tets[t];
        tet_volume(
            &positions[v[0]],
            &positions[v[1]],
            &positions[v[2]],
            &positions[v[3]],
        )
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        self.balls[a].iter().any(|&t| self.tets[t].contains(&b))
    }

    /// All unique edges of alive tets, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut set = std::collections::HashSet::new();
        for t in self.alive_tets() {
            let v = self.tets[t];
            for i in 0..4 {
                for j in (i + 1)..4 {
                    set.insert((v[i].min(v[j]), v[i].max(v[j])));
                }
            }
        }
        let mut edges: Vec<_> = set.into_iter().collect();
        edges.sort_unstable();
        edges
    }

    fn local_index(&self, t: TetId, v: usize) -> usize {
        self.tets[t].iter().position(|&x| x == v).unwrap()
    }

    fn edge_others(&self, t: TetId, a: usize, b: usize) -> [usize; 2] {
        let v = self.tets[t];
        let mut o = [usize::MAX; 2];
        let mut j = 0;
        for &x in v.iter() {
            if x != a && x != b {
                o[j] = x;
                j += 1;
            }
        }
        o
    }

    /// Walk the ring of tets around edge (a, b). Consecutive entries share a
    /// face containing the edge; for interior edges the cycle closes.
    pub fn star_region(&self, a: usize, b: usize) -> Result<StarRegion> {
        let start = self
            .balls
            .get(a)
            .ok_or(Error::EdgeNotFound(a, b))?
            .iter()
            .copied()
            .filter(|&t| self.alive[t])
            .find(|&t| self.tets[t].contains(&b))
            .ok_or(Error::EdgeNotFound(a, b))?;
        // State: (tet, exit vertex c) meaning we leave through face (a, b, c).
        let step = |t: TetId, exit: usize| -> Option<(TetId, usize)> {
            let [c, d] = self.edge_others(t, a, b);
            let keep = if exit == c { d } else { c };
            let next = self.neighbors[4 * t + self.local_index(t, keep)]?;
            let [c2, d2] = self.edge_others(next, a, b);
            let new_exit = if exit == c2 { d2 } else { c2 };
            Some((next, new_exit))
        };
        let [c0, d0] = self.edge_others(start, a, b);
        let mut ring = vec![start];
        let mut cur = (start, d0);
        let mut closed = false;
        loop {
            match step(cur.0, cur.1) {
                Some((t, e)) => {
                    if t == start {
                        closed = true;
                        break;
                    }
                    ring.push(t);
                    cur = (t, e);
                    if ring.len() > 4 * self.n_alive.max(1) {
                        return Err(Error::TopologyCorrupt(format!(
                            "star walk around ({a},{b}) does not terminate"
                        )));
                    }
                }
                None => break,
            }
        }
        if !closed {
            let mut cur = (start, c0);
            while let Some((t, e)) = step(cur.0, cur.1) {
                ring.insert(0, t);
                cur = (t, e);
                if ring.len() > 4 * self.n_alive.max(1) {
                    return Err(Error::TopologyCorrupt(format!(
                        "star walk around ({a},{b}) does not terminate"
                    )));
                }
            }
        }
        Ok(StarRegion { tets: ring, closed })
    }

    /// Third vertices of the two boundary faces capping an open star,
    /// ordered (first end, last end) to match the fan ordering.
    pub fn open_star_ends(&self, a: usize, b: usize, star: &StarRegion) -> (usize, usize) {
        assert!(!star.closed);
        if star.tets.len() == 1 {
            let [c, d] = self.edge_others(star.tets[0], a, b);
            let (lo, hi) = (c.min(d), c.max(d));
            return (lo, hi);
        }
        let end_of = |t: TetId, adj: TetId| -> usize {
            let va = self.tets[adj];
            let [c, d] = self.edge_others(t, a, b);
            // The vertex NOT shared with the adjacent ring tet caps the fan.
            if va.contains(&c) {
                d
            } else {
                c
            }
        };
        let first = end_of(star.tets[0], star.tets[1]);
        let last = end_of(
            *star.tets.last().unwrap(),
            star.tets[star.tets.len() - 2],
        );
        (first, last)
    }

    /// Remove a set of tets and insert new ones. Returns the created ids.
    pub fn apply_flip(
        &mut self,
        removed: &[TetId],
        created: &[[usize; 4]],
        positions: &[V3],
    ) -> Result<Vec<TetId>> {
        for &t in removed {
            if !self.alive[t] {
                return Err(Error::TopologyCorrupt(format!("tet {t} already removed")));
            }
            self.alive[t] = false;
            self.n_alive -= 1;
        }
        let mut ids = Vec::with_capacity(created.len());
        for tet in created {
            let mut tet = *tet;
            let vol = tet_volume(
                &positions[tet[0]],
                &positions[tet[1]],
                &positions[tet[2]],
                &positions[tet[3]],
            );
            if vol == 0.0 {
                return Err(Error::DegenerateGeometry(format!(
                    "flip created zero-volume tet {tet:?}"
                )));
            }
            if vol < 0.0 {
                tet.swap(2, 3);
            }
            self.tets.push(tet);
            self.alive.push(true);
            self.neighbors.extend_from_slice(&[None; 4]);
            self.n_alive += 1;
            ids.push(self.tets.len() - 1);
        }
        // Few flips per step; a linear adjacency rebuild keeps this simple.
        self.rebuild_adjacency()?;
        Ok(ids)
    }

    /// Consistency checks: positive volumes and ball consistency.
    pub fn validate(&self, positions: &[V3]) -> Result<()> {
        for t in self.alive_tets() {
            if self.volume(t, positions) <= 0.0 {
                return Err(Error::DegenerateGeometry(format!(
                    "tet {t} has non-positive volume"
                )));
            }
        }
        for (g, ball) in self.balls.iter().enumerate() {
            for &t in ball {
                if !self.alive[t] || !self.tets[t].contains(&g) {
                    return Err(Error::TopologyCorrupt(format!(
                        "ball of generator {g} lists tet {t} inconsistently"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn total_volume(&self, positions: &[V3]) -> f64 {
        self.alive_tets().map(|t| self.volume(t, positions)).sum()
    }
}

pub fn face_opposite(verts: &[usize; 4], k: usize) -> [usize; 3] {
    let mut f = [0usize; 3];
    let mut j = 0;
    for (i, &v) in verts.iter().enumerate() {
        if i != k {
            f[j] = v;
            j += 1;
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::builders;
    use super::*;

    #[test]
    fn single_tet_star_is_open() {
        let pos = vec![
            V3::new(0.0, 0.0, 0.0),
            V3::new(1.0, 0.0, 0.0),
            V3::new(0.0, 1.0, 0.0),
            V3::new(0.0, 0.0, 1.0),
        ];
        let mesh = Tetrahedralization::new(vec![[0, 1, 2, 3]], &pos).unwrap();
        let star = mesh.star_region(0, 1).unwrap();
        assert_eq!(star.tets.len(), 1);
        assert!(!star.closed);
    }

    #[test]
    fn missing_edge_errors() {
        let pos = vec![
            V3::new(0.0, 0.0, 0.0),
            V3::new(1.0, 0.0, 0.0),
            V3::new(0.0, 1.0, 0.0),
            V3::new(0.0, 0.0, 1.0),
            V3::new(5.0, 5.0, 5.0),
        ];
        let mesh = Tetrahedralization::new(vec![[0, 1, 2, 3]], &pos).unwrap();
        assert!(matches!(
            mesh.star_region(0, 4),
            Err(Error::EdgeNotFound(0, 4))
        ));
    }

    #[test]
    fn sanity_32_central_edge_star() {
        let (_, mesh, _) = builders::sanity_cube(builders::SanityKind::Flip32);
        let star = mesh.star_region(0, 1).unwrap();
        assert_eq!(star.tets.len(), 3);
        assert!(star.closed);
    }

    #[test]
    fn sanity_44_central_edge_star() {
        let (_, mesh, _) = builders::sanity_cube(builders::SanityKind::Flip44);
        let star = mesh.star_region(2, 3).unwrap();
        assert_eq!(star.tets.len(), 4);
        assert!(star.closed);
    }

    #[test]
    fn sanity_meshes_fill_the_cube() {
        for kind in [
            builders::SanityKind::Flip32,
            builders::SanityKind::Flip23,
            builders::SanityKind::Flip44,
        ] {
            let (gens, mesh, domain) = builders::sanity_cube(kind);
            mesh.validate(&gens.positions).unwrap();
            let vol = mesh.total_volume(&gens.positions);
            assert!(
                (vol - domain.volume()).abs() < 1e-12 * domain.volume(),
                "{kind:?}: {vol}"
            );
        }
    }

    #[test]
    fn lattice_fills_box() {
        let domain = DomainBox {
            lo: V3::new(0.0, 0.0, 0.0),
            hi: V3::new(2.0, 1.0, 1.0),
        };
        let (gens, mesh) = builders::lattice_box(&domain, [4, 3, 3]);
        mesh.validate(&gens.positions).unwrap();
        assert!((mesh.total_volume(&gens.positions) - 2.0).abs() < 1e-12);
        // Star closure agrees with wall flags of the edge.
        for (a, b) in mesh.edges() {
            let star = mesh.star_region(a, b).unwrap();
            let shared = gens.walls[a] & gens.walls[b];
            assert_eq!(star.closed, shared == 0, "edge ({a},{b})");
        }
    }
}
