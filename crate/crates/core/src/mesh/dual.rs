//! Centroid-based polyhedral tessellation dual to the tetrahedralization.
//!
//! Every edge (a, b) of the tetrahedralization contributes one face to the
//! cells of a and b: its contour joins the centroids of the tets sharing
//! the edge (the star region), ordered cyclically, and the face is fanned
//! into triangular facets around the contour barycenter. Boundary cells are
//! closed against the box walls by projected centroids (the construction a
//! mirror-reflected mesh would produce): open star contours are completed
//! through wall and edge-line projections, and each boundary generator
//! additionally receives one polygon per wall it lies on, made of the
//! wall-projected centroids of its boundary tets.

use super::{DomainBox, GeneratorSet, StarRegion, TetId, Tetrahedralization, WALL_COUNT};
use crate::geometry::{triangle_normal, V3};
use crate::{Error, Result};
use std::collections::HashMap;

/// Provenance of a contour point; the space-time tracking matches contour
/// sequences of two meshes through these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSrc {
    /// Centroid of a tet.
    Tet(TetId),
    /// Centroid of a tet projected onto a wall plane.
    WallProj(TetId, u8),
    /// Centroid of a tet projected onto the intersection line of two walls.
    LineProj(TetId, u8, u8),
    /// A corner generator position (intersection of three walls).
    Corner(usize),
}

impl PointSrc {
    pub fn tet(&self) -> Option<TetId> {
        match self {
            PointSrc::Tet(t) | PointSrc::WallProj(t, _) | PointSrc::LineProj(t, _, _) => Some(*t),
            PointSrc::Corner(_) => None,
        }
    }

    pub fn with_tet(&self, t: TetId) -> PointSrc {
        match *self {
            PointSrc::Tet(_) => PointSrc::Tet(t),
            PointSrc::WallProj(_, w) => PointSrc::WallProj(t, w),
            PointSrc::LineProj(_, w1, w2) => PointSrc::LineProj(t, w1, w2),
            PointSrc::Corner(g) => PointSrc::Corner(g),
        }
    }

    pub fn position(
        &self,
        mesh: &Tetrahedralization,
        positions: &[V3],
        domain: &DomainBox,
    ) -> V3 {
        match *self {
            PointSrc::Tet(t) => mesh.centroid(t, positions),
            PointSrc::WallProj(t, w) => domain.project_wall(w, &mesh.centroid(t, positions)),
            PointSrc::LineProj(t, w1, w2) => {
                domain.project_line(w1, w2, &mesh.centroid(t, positions))
            }
            PointSrc::Corner(g) => positions[g],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPoint {
    pub pos: V3,
    pub src: PointSrc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceNeighbor {
    Cell(usize),
    Wall(u8),
}

/// A polyhedral face: either the dual face of a tetrahedralization edge
/// (between two cells) or a wall-closure polygon. The contour is ordered so
/// that the fan around the barycenter is outward for the owner.
#[derive(Debug, Clone)]
pub struct PolyFace {
    pub owner: usize,
    pub neighbor: FaceNeighbor,
    /// For edge-dual faces, the generating edge (owner, other).
    pub dual_edge: Option<(usize, usize)>,
    pub contour: Vec<ContourPoint>,
    pub barycenter: V3,
}

impl PolyFace {
    pub fn facet_count(&self) -> usize {
        self.contour.len()
    }
}

#[derive(Debug, Clone)]
pub struct PolyCell {
    pub generator: usize,
    /// (face index, owned): owned faces are traversed as stored, the rest
    /// with reversed contour.
    pub faces: Vec<(usize, bool)>,
    pub centroid: V3,
    pub volume: f64,
    /// Characteristic length: twice the minimum center-to-face-barycenter
    /// distance.
    pub h: f64,
    pub neighbors: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PolyTessellation {
    pub faces: Vec<PolyFace>,
    pub cells: Vec<PolyCell>,
}

impl PolyTessellation {
    pub fn total_volume(&self) -> f64 {
        self.cells.iter().map(|c| c.volume).sum()
    }

    pub fn min_h(&self) -> f64 {
        self.cells.iter().map(|c| c.h).fold(f64::INFINITY, f64::min)
    }
}

/// Characteristic length of a cell: 2 min_j |c_i - b_ij|.
pub fn characteristic_length(centroid: &V3, face_barycenters: &[V3]) -> f64 {
    2.0 * face_barycenters
        .iter()
        .map(|b| (centroid - b).norm())
        .fold(f64::INFINITY, f64::min)
}

fn single_wall_bit(mask: u8) -> Option<u8> {
    if mask != 0 && mask.count_ones() == 1 {
        Some(mask.trailing_zeros() as u8)
    } else {
        None
    }
}

/// Wall carrying the boundary face (a, b, x); the face must lie in exactly
/// one wall plane.
fn face_wall(gens: &GeneratorSet, a: usize, b: usize, x: usize) -> Result<u8> {
    let mask = gens.walls[a] & gens.walls[b] & gens.walls[x];
    single_wall_bit(mask).ok_or_else(|| {
        Error::TopologyCorrupt(format!(
            "boundary face ({a},{b},{x}) not on a unique wall (mask {mask:#b})"
        ))
    })
}

/// Contour sources of the dual face of edge (a, b), including wall-closure
/// points for open stars. Pure function of the connectivity; positions are
/// resolved separately so the same sources serve both time levels.
pub fn edge_face_sources(
    mesh: &Tetrahedralization,
    gens: &GeneratorSet,
    a: usize,
    b: usize,
    star: &StarRegion,
) -> Result<Vec<PointSrc>> {
    let mut srcs: Vec<PointSrc> = star.tets.iter().map(|&t| PointSrc::Tet(t)).collect();
    if !star.closed {
        let (x_first, x_last) = mesh.open_star_ends(a, b, star);
        let w_s = face_wall(gens, a, b, x_first)?;
        let w_e = face_wall(gens, a, b, x_last)?;
        let t1 = star.tets[0];
        let tm = *star.tets.last().unwrap();
        if w_s == w_e {
            srcs.push(PointSrc::WallProj(tm, w_e));
            srcs.push(PointSrc::WallProj(t1, w_s));
        } else {
            srcs.push(PointSrc::WallProj(tm, w_e));
            srcs.push(PointSrc::LineProj(tm, w_s, w_e));
            srcs.push(PointSrc::LineProj(t1, w_s, w_e));
            srcs.push(PointSrc::WallProj(t1, w_s));
        }
    }
    Ok(srcs)
}

/// Ordered fan of boundary tets around generator g on wall w, plus closure
/// sources. Boundary triangles on w containing g are walked by shared wall
/// edges (g, x).
pub fn wall_polygon_sources(
    mesh: &Tetrahedralization,
    gens: &GeneratorSet,
    g: usize,
    w: u8,
) -> Result<Vec<PointSrc>> {
    // Boundary faces on w around g: (tet, [3 face verts]).
    let mut tris: Vec<(TetId, [usize; 3])> = Vec::new();
    for &t in mesh.ball(g) {
        let verts = mesh.vertices(t);
        for k in 0..4 {
            if verts[k] == g {
                continue;
            }
            if mesh.neighbor_opposite(t, k).is_none() {
                let f = super::face_opposite(&verts, k);
                let mask = gens.walls[f[0]] & gens.walls[f[1]] & gens.walls[f[2]];
                if mask & (1 << w) != 0 {
                    debug_assert!(f.contains(&g));
                    tris.push((t, f));
                }
            }
        }
    }
    if tris.is_empty() {
        return Err(Error::TopologyCorrupt(format!(
            "generator {g} flagged on wall {w} but owns no boundary face there"
        )));
    }
    // Order by adjacency through shared wall edges (g, x). Each fan edge is
    // shared by at most two triangles, so the fan graph is a path or cycle.
    let edge_of = |f: &[usize; 3]| -> [usize; 2] {
        let mut o = [usize::MAX; 2];
        let mut j = 0;
        for &v in f.iter() {
            if v != g {
                o[j] = v;
                j += 1;
            }
        }
        o
    };
    let n = tris.len();
    let mut by_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, (_, f)) in tris.iter().enumerate() {
        for v in edge_of(f) {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for members in by_vertex.values() {
        if members.len() == 2 {
            adj[members[0]].push(members[1]);
            adj[members[1]].push(members[0]);
        } else if members.len() > 2 {
            return Err(Error::TopologyCorrupt(format!(
                "wall fan edge around generator {g} shared by {} triangles",
                members.len()
            )));
        }
    }
    let start = (0..n).find(|&i| adj[i].len() < 2).unwrap_or(0);
    let closes = adj[start].len() == 2;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    while order.len() < n {
        let cur = *order.last().unwrap();
        let next = adj[cur].iter().copied().find(|&i| i != prev);
        match next {
            Some(i) if i != start => {
                prev = cur;
                order.push(i);
            }
            _ => break,
        }
    }
    if order.len() != n {
        return Err(Error::TopologyCorrupt(format!(
            "wall fan of generator {g} on wall {w} is not a single chain"
        )));
    }
    let mut srcs: Vec<PointSrc> = order
        .iter()
        .map(|&i| PointSrc::WallProj(tris[i].0, w))
        .collect();
    if !closes {
        // Fan ends on the wall-patch boundary: find the unshared edge vertex
        // at each end and the second wall it lies on.
        let end_vertex = |i: usize, adj: Option<usize>| -> usize {
            let e = edge_of(&tris[i].1);
            match adj {
                Some(j) => {
                    let ej = edge_of(&tris[j].1);
                    if ej.contains(&e[0]) {
                        e[1]
                    } else {
                        e[0]
                    }
                }
                // Single-triangle fan: order deterministically.
                None => e[0].min(e[1]),
            }
        };
        let (vs, ve) = if n == 1 {
            let e = edge_of(&tris[order[0]].1);
            (e[0].min(e[1]), e[0].max(e[1]))
        } else {
            (
                end_vertex(order[0], Some(order[1])),
                end_vertex(order[n - 1], Some(order[n - 2])),
            )
        };
        let second_wall = |x: usize| -> Result<u8> {
            let mask = (gens.walls[g] & gens.walls[x]) & !(1u8 << w);
            single_wall_bit(mask).ok_or_else(|| {
                Error::TopologyCorrupt(format!(
                    "wall-patch boundary edge ({g},{x}) not on a unique second wall"
                ))
            })
        };
        let w_s = second_wall(vs)?;
        let w_e = second_wall(ve)?;
        let t1 = tris[order[0]].0;
        let tm = tris[order[n - 1]].0;
        if w_s == w_e {
            srcs.push(PointSrc::LineProj(tm, w, w_e));
            srcs.push(PointSrc::LineProj(t1, w, w_s));
        } else {
            srcs.push(PointSrc::LineProj(tm, w, w_e));
            srcs.push(PointSrc::Corner(g));
            srcs.push(PointSrc::LineProj(t1, w, w_s));
        }
    }
    Ok(srcs)
}

fn resolve_contour(
    srcs: &[PointSrc],
    mesh: &Tetrahedralization,
    positions: &[V3],
    domain: &DomainBox,
) -> Vec<ContourPoint> {
    srcs.iter()
        .map(|s| ContourPoint { pos: s.position(mesh, positions, domain), src: *s })
        .collect()
}

/// Vector area of the barycenter fan of a contour (the polygon area normal).
fn fan_area_vector(contour: &[ContourPoint], bary: &V3) -> V3 {
    let n = contour.len();
    let mut area = V3::zeros();
    for k in 0..n {
        let a = contour[k].pos;
        let b = contour[(k + 1) % n].pos;
        area += 0.5 * triangle_normal(&a, &b, bary);
    }
    area
}

fn contour_barycenter(contour: &[ContourPoint]) -> V3 {
    contour.iter().map(|c| c.pos).sum::<V3>() / contour.len() as f64
}

/// Build the dual tessellation. Faces are stored once, oriented outward for
/// their owner (the lower generator index for edge faces).
pub fn build_dual(
    mesh: &Tetrahedralization,
    gens: &GeneratorSet,
    domain: &DomainBox,
) -> Result<PolyTessellation> {
    let positions = &gens.positions;
    let mut faces: Vec<PolyFace> = Vec::new();
    for (a, b) in mesh.edges() {
        let star = mesh.star_region(a, b)?;
        if star.closed && star.tets.len() < 3 {
            return Err(Error::TopologyCorrupt(format!(
                "closed star of edge ({a},{b}) has fewer than 3 tets"
            )));
        }
        let srcs = edge_face_sources(mesh, gens, a, b, &star)?;
        let mut contour = resolve_contour(&srcs, mesh, positions, domain);
        let barycenter = contour_barycenter(&contour);
        // Orient outward from the owner a: fan normal along (p_b - p_a).
        let dir = positions[b] - positions[a];
        if fan_area_vector(&contour, &barycenter).dot(&dir) < 0.0 {
            contour.reverse();
        }
        faces.push(PolyFace {
            owner: a,
            neighbor: FaceNeighbor::Cell(b),
            dual_edge: Some((a, b)),
            contour,
            barycenter,
        });
    }
    for g in 0..gens.len() {
        let mask = gens.walls[g];
        for w in 0..WALL_COUNT {
            if mask & (1 << w) == 0 {
                continue;
            }
            let srcs = wall_polygon_sources(mesh, gens, g, w)?;
            let mut contour = resolve_contour(&srcs, mesh, positions, domain);
            let barycenter = contour_barycenter(&contour);
            let dir = domain.wall_normal(w);
            if fan_area_vector(&contour, &barycenter).dot(&dir) < 0.0 {
                contour.reverse();
            }
            faces.push(PolyFace {
                owner: g,
                neighbor: FaceNeighbor::Wall(w),
                dual_edge: None,
                contour,
                barycenter,
            });
        }
    }
    assemble_cells(faces, gens)
}

/// Group faces into cells and compute volume, centroid and h.
pub fn assemble_cells(faces: Vec<PolyFace>, gens: &GeneratorSet) -> Result<PolyTessellation> {
    let np = gens.len();
    let mut cell_faces: Vec<Vec<(usize, bool)>> = vec![Vec::new(); np];
    for (fi, f) in faces.iter().enumerate() {
        cell_faces[f.owner].push((fi, true));
        if let FaceNeighbor::Cell(nb) = f.neighbor {
            cell_faces[nb].push((fi, false));
        }
    }
    let mut cells = Vec::with_capacity(np);
    for g in 0..np {
        if cell_faces[g].is_empty() {
            return Err(Error::TopologyCorrupt(format!(
                "generator {g} has no dual faces"
            )));
        }
        let origin = gens.positions[g];
        let mut volume = 0.0;
        let mut moment = V3::zeros();
        let mut barys = Vec::with_capacity(cell_faces[g].len());
        let mut neighbors = Vec::new();
        for &(fi, owned) in &cell_faces[g] {
            let f = &faces[fi];
            if let FaceNeighbor::Cell(nb) = f.neighbor {
                neighbors.push(if owned { nb } else { f.owner });
            }
            barys.push(f.barycenter);
            let n = f.contour.len();
            for k in 0..n {
                let (mut p0, mut p1) = (f.contour[k].pos, f.contour[(k + 1) % n].pos);
                if !owned {
                    std::mem::swap(&mut p0, &mut p1);
                }
                // Cone from the generator over the outward facet.
                let v = (p0 - origin)
                    .cross(&(p1 - origin))
                    .dot(&(f.barycenter - origin))
                    / 6.0;
                volume += v;
                moment += v * (p0 + p1 + f.barycenter + origin) / 4.0;
            }
        }
        if volume <= 0.0 {
            return Err(Error::DegenerateGeometry(format!(
                "cell {g} has non-positive volume {volume}"
            )));
        }
        let centroid = moment / volume;
        let h = characteristic_length(&centroid, &barys);
        neighbors.sort_unstable();
        neighbors.dedup();
        cells.push(PolyCell {
            generator: g,
            faces: std::mem::take(&mut cell_faces[g]),
            centroid,
            volume,
            h,
            neighbors,
        });
    }
    Ok(PolyTessellation { faces, cells })
}

/// Diagnostic report of the tessellation invariants.
#[derive(Debug, Clone, Default)]
pub struct TessellationReport {
    pub watertight_residual: f64,
    /// Faces whose facet orientation disagrees with the owner-outward rule.
    pub orientation_violations: Vec<usize>,
    /// Pairs (i, j) with j listed as neighbor of i but not conversely.
    pub symmetry_violations: Vec<(usize, usize)>,
    /// (cell, face) pairs with negative sub-tet volume.
    pub negative_subtets: Vec<(usize, usize)>,
}

impl TessellationReport {
    pub fn is_clean(&self, tol: f64) -> bool {
        self.watertight_residual <= tol
            && self.orientation_violations.is_empty()
            && self.symmetry_violations.is_empty()
            && self.negative_subtets.is_empty()
    }
}

pub fn validate_tessellation(
    tess: &PolyTessellation,
    gens: &GeneratorSet,
    domain_volume: f64,
) -> TessellationReport {
    let mut report = TessellationReport::default();
    let total = tess.total_volume();
    report.watertight_residual = (total - domain_volume).abs() / domain_volume;
    for (fi, f) in tess.faces.iter().enumerate() {
        let dir = match f.neighbor {
            FaceNeighbor::Cell(nb) => gens.positions[nb] - gens.positions[f.owner],
            FaceNeighbor::Wall(w) => {
                let mut n = V3::zeros();
                n[super::wall_axis(w)] = if super::wall_is_high(w) { 1.0 } else { -1.0 };
                n
            }
        };
        let scale = dir.norm();
        let n = f.contour.len();
        let mut bad = false;
        for k in 0..n {
            let a = f.contour[k].pos;
            let b = f.contour[(k + 1) % n].pos;
            let fn_vec = triangle_normal(&a, &b, &f.barycenter);
            if fn_vec.dot(&dir) < -1e-12 * scale * fn_vec.norm().max(1e-300) {
                bad = true;
            }
        }
        if bad {
            report.orientation_violations.push(fi);
        }
    }
    for cell in &tess.cells {
        for &nb in &cell.neighbors {
            if !tess.cells[nb].neighbors.contains(&cell.generator) {
                report.symmetry_violations.push((cell.generator, nb));
            }
        }
        for &(fi, owned) in &cell.faces {
            let f = &tess.faces[fi];
            let n = f.contour.len();
            let scale3 = cell.h.powi(3).max(1e-300);
            for k in 0..n {
                let (mut p0, mut p1) = (f.contour[k].pos, f.contour[(k + 1) % n].pos);
                if !owned {
                    std::mem::swap(&mut p0, &mut p1);
                }
                let v = (p0 - cell.centroid)
                    .cross(&(p1 - cell.centroid))
                    .dot(&(f.barycenter - cell.centroid))
                    / 6.0;
                if v < -1e-12 * scale3 {
                    report.negative_subtets.push((cell.generator, fi));
                    break;
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::super::builders::{self, SanityKind};
    use super::*;

    #[test]
    fn sanity_duals_are_watertight() {
        for kind in [SanityKind::Flip32, SanityKind::Flip23, SanityKind::Flip44] {
            let (gens, mesh, domain) = builders::sanity_cube(kind);
            let tess = build_dual(&mesh, &gens, &domain).unwrap();
            let report = validate_tessellation(&tess, &gens, domain.volume());
            assert!(
                report.watertight_residual <= 1e-12,
                "{kind:?}: residual {}",
                report.watertight_residual
            );
            assert!(report.orientation_violations.is_empty(), "{kind:?}");
            assert!(report.symmetry_violations.is_empty());
            assert!(report.negative_subtets.is_empty(), "{kind:?}: {:?}", report.negative_subtets);
        }
    }

    #[test]
    fn sanity_32_cells_share_triangular_face() {
        let (gens, mesh, domain) = builders::sanity_cube(SanityKind::Flip32);
        let tess = build_dual(&mesh, &gens, &domain).unwrap();
        // Cells of generators 0 and 1 share the dual face of edge (0,1),
        // a triangle (3 tets in the star).
        let f = tess
            .faces
            .iter()
            .find(|f| f.dual_edge == Some((0, 1)))
            .expect("face exists");
        assert_eq!(f.contour.len(), 3);
        assert!(tess.cells[0].neighbors.contains(&1));
        assert!(tess.cells[1].neighbors.contains(&0));
    }

    #[test]
    fn lattice_dual_watertight_and_dualities() {
        let domain = DomainBox {
            lo: V3::new(0.0, 0.0, 0.0),
            hi: V3::new(1.0, 1.0, 1.0),
        };
        let (gens, mesh) = builders::lattice_box(&domain, [4, 4, 4]);
        let tess = build_dual(&mesh, &gens, &domain).unwrap();
        let report = validate_tessellation(&tess, &gens, domain.volume());
        assert!(report.watertight_residual <= 1e-12, "{}", report.watertight_residual);
        assert!(report.orientation_violations.is_empty());
        assert!(report.negative_subtets.is_empty());
        // Interior generators: face count equals incident edge count.
        for (g, cell) in tess.cells.iter().enumerate() {
            if gens.walls[g] != 0 {
                continue;
            }
            let incident_edges = mesh
                .edges()
                .iter()
                .filter(|&&(a, b)| a == g || b == g)
                .count();
            assert_eq!(cell.faces.len(), incident_edges, "generator {g}");
        }
    }

    #[test]
    fn translation_equivariance() {
        let (mut gens, mesh, domain) = builders::sanity_cube(SanityKind::Flip44);
        let tess = build_dual(&mesh, &gens, &domain).unwrap();
        let shift = V3::new(10.0, -3.0, 7.0);
        for p in gens.positions.iter_mut() {
            *p += shift;
        }
        let domain2 = DomainBox { lo: domain.lo + shift, hi: domain.hi + shift };
        let tess2 = build_dual(&mesh, &gens, &domain2).unwrap();
        for (c1, c2) in tess.cells.iter().zip(&tess2.cells) {
            assert!((c1.volume - c2.volume).abs() < 1e-12);
            assert!((c1.centroid + shift - c2.centroid).norm() < 1e-12);
            assert!((c1.h - c2.h).abs() < 1e-12);
        }
    }

    #[test]
    fn characteristic_length_examples() {
        // Unit-cube cell: centroid at the center, face barycenters at
        // distance 1/2, h = 1.
        let c = V3::new(0.5, 0.5, 0.5);
        let barys = vec![
            V3::new(0.0, 0.5, 0.5),
            V3::new(1.0, 0.5, 0.5),
            V3::new(0.5, 0.0, 0.5),
            V3::new(0.5, 1.0, 0.5),
            V3::new(0.5, 0.5, 0.0),
            V3::new(0.5, 0.5, 1.0),
        ];
        assert!((characteristic_length(&c, &barys) - 1.0).abs() < 1e-15);
        // Scaling by s scales h by s.
        let s = 3.7;
        let scaled: Vec<V3> = barys.iter().map(|b| b * s).collect();
        assert!((characteristic_length(&(c * s), &scaled) - s).abs() < 1e-12);
    }

    #[test]
    fn injected_orientation_fault_is_reported() {
        let (gens, mesh, domain) = builders::sanity_cube(SanityKind::Flip44);
        let mut tess = build_dual(&mesh, &gens, &domain).unwrap();
        // Flip one interior face's contour; orientation check must flag it.
        let fi = tess
            .faces
            .iter()
            .position(|f| matches!(f.neighbor, FaceNeighbor::Cell(_)) && f.contour.len() >= 3)
            .unwrap();
        tess.faces[fi].contour.reverse();
        let report = validate_tessellation(&tess, &gens, domain.volume());
        assert!(report.orientation_violations.contains(&fi));
    }

    #[test]
    fn face_views_are_opposite() {
        // f_ij and f_ji reference the same contour with opposite orientation:
        // the stored face is shared, owner reads it forward, neighbor
        // backward; together the two traversals cancel.
        let (gens, mesh, domain) = builders::sanity_cube(SanityKind::Flip32);
        let tess = build_dual(&mesh, &gens, &domain).unwrap();
        let f = tess.faces.iter().find(|f| f.dual_edge == Some((0, 1))).unwrap();
        let fwd = fan_area_vector(&f.contour, &f.barycenter);
        let mut rev = f.contour.clone();
        rev.reverse();
        let bwd = fan_area_vector(&rev, &f.barycenter);
        assert!((fwd + bwd).norm() < 1e-14 * fwd.norm());
    }
}
