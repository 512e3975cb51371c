//! Correspondence between the tessellations at the two ends of a timestep.
//!
//! Faces are matched by their generating key (tetrahedralization edge or
//! wall polygon); their contours are aligned source-by-source, with flip
//! substitutions spliced in through padded tracks: where a flip replaces a
//! run of star tets by a shorter or longer run, the shorter side duplicates
//! its end points, producing the zero-volume padding facets that keep every
//! cell boundary closed at all intermediate times. The dual faces of a
//! vanished or created tetrahedralization edge are not tracked; the hole
//! element of the corresponding flip covers them.

use super::volumes::{
    BasisFrame, CellVolume, ElementRef, HoleVolume, Interface, InterfaceNeighbor, SpaceTimeMesh,
};
use super::{PrismTrack, SubTetTrack};
use crate::geometry::{incircle_diameter, V3};
use crate::mesh::dual::{ContourPoint, FaceNeighbor, PolyFace, PolyTessellation};
use crate::mesh::{DomainBox, GeneratorSet, TetId, Tetrahedralization};
use crate::motion::flips::{FlipEvent, FlipGeometry, FlipKind};
use crate::{Error, Result};
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum FaceKey {
    Edge(usize, usize),
    Wall(usize, u8),
}

fn face_key(face: &PolyFace) -> FaceKey {
    match face.neighbor {
        FaceNeighbor::Cell(_) => {
            let (a, b) = face.dual_edge.expect("cell faces carry their edge");
            FaceKey::Edge(a, b)
        }
        FaceNeighbor::Wall(w) => FaceKey::Wall(face.owner, w),
    }
}

/// Shape of a contour item for structural matching: everything but the
/// (possibly substituted) tet identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SrcShape {
    Tet,
    WallProj(u8),
    LineProj(u8, u8),
    Corner(usize),
}

fn shape_of(p: &ContourPoint) -> SrcShape {
    use crate::mesh::dual::PointSrc;
    match p.src {
        PointSrc::Tet(_) => SrcShape::Tet,
        PointSrc::WallProj(_, w) => SrcShape::WallProj(w),
        PointSrc::LineProj(_, w1, w2) => SrcShape::LineProj(w1, w2),
        PointSrc::Corner(g) => SrcShape::Corner(g),
    }
}

/// Pair two same-shape gap segments: non-tet closure items match one to
/// one, runs of tet centroids pad by repeating the end of the shorter run.
fn pair_gap(
    c0: &[ContourPoint],
    c1: &[ContourPoint],
    g0: &[usize],
    g1: &[usize],
    pairs: &mut Vec<(V3, V3)>,
) -> Result<()> {
    let mut i = 0;
    let mut j = 0;
    while i < g0.len() || j < g1.len() {
        let s0 = (i < g0.len()).then(|| shape_of(&c0[g0[i]]));
        let s1 = (j < g1.len()).then(|| shape_of(&c1[g1[j]]));
        match (s0, s1) {
            (Some(SrcShape::Tet), Some(SrcShape::Tet)) => {
                let p = g0[i..].iter().take_while(|&&k| shape_of(&c0[k]) == SrcShape::Tet).count();
                let q = g1[j..].iter().take_while(|&&k| shape_of(&c1[k]) == SrcShape::Tet).count();
                for s in 0..p.max(q) {
                    pairs.push((c0[g0[i + s.min(p - 1)]].pos, c1[g1[j + s.min(q - 1)]].pos));
                }
                i += p;
                j += q;
            }
            (Some(a), Some(b)) if a == b => {
                pairs.push((c0[g0[i]].pos, c1[g1[j]].pos));
                i += 1;
                j += 1;
            }
            _ => {
                return Err(Error::SpaceTimeConstruction(format!(
                    "contour substitution changes the closure structure: {s0:?} vs {s1:?}"
                )))
            }
        }
    }
    Ok(())
}

/// Pair the contours of the same face at the two time levels. Returns the
/// tracked contour (positions at t0 and t1 per slot, padded across flips).
fn align_contours(
    c0: &[ContourPoint],
    c1: &[ContourPoint],
    removed: &HashSet<TetId>,
    created: &HashSet<TetId>,
) -> Result<Vec<(V3, V3)>> {
    let sub0: Vec<bool> = c0
        .iter()
        .map(|p| p.src.tet().map_or(false, |t| removed.contains(&t)))
        .collect();
    let sub1: Vec<bool> = c1
        .iter()
        .map(|p| p.src.tet().map_or(false, |t| created.contains(&t)))
        .collect();
    let surv0: Vec<usize> = (0..c0.len()).filter(|&i| !sub0[i]).collect();
    let surv1: Vec<usize> = (0..c1.len()).filter(|&i| !sub1[i]).collect();
    if surv0.len() != surv1.len() {
        return Err(Error::SpaceTimeConstruction(format!(
            "survivor mismatch: {} vs {}",
            surv0.len(),
            surv1.len()
        )));
    }
    if surv0.is_empty() {
        return align_without_anchors(c0, c1);
    }
    let ns = surv0.len();
    let rot = (0..ns)
        .find(|&r| (0..ns).all(|j| c1[surv1[(j + r) % ns]].src == c0[surv0[j]].src))
        .ok_or_else(|| {
            Error::SpaceTimeConstruction("no rotation aligns surviving contour points".into())
        })?;
    let cyclic_gap = |from: usize, to: usize, len: usize| -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = (from + 1) % len;
        while i != to {
            out.push(i);
            i = (i + 1) % len;
        }
        out
    };
    let mut pairs = Vec::with_capacity(c0.len().max(c1.len()));
    for j in 0..ns {
        let a0 = surv0[j];
        let b0 = surv0[(j + 1) % ns];
        let a1 = surv1[(j + rot) % ns];
        let b1 = surv1[(j + 1 + rot) % ns];
        pairs.push((c0[a0].pos, c1[a1].pos));
        let g0 = cyclic_gap(a0, b0, c0.len());
        let g1 = cyclic_gap(a1, b1, c1.len());
        if g0.is_empty() != g1.is_empty() {
            return Err(Error::SpaceTimeConstruction(
                "substitution arc present on one side only".into(),
            ));
        }
        pair_gap(c0, c1, &g0, &g1, &mut pairs)?;
    }
    Ok(pairs)
}

/// Whole contour substituted (no surviving tet). Closure points keep their
/// structural identity across the flip, so rotations that align the item
/// shapes are enumerated and the cheapest (total squared track length)
/// wins; a pure-centroid contour falls back to cost alone.
fn align_without_anchors(c0: &[ContourPoint], c1: &[ContourPoint]) -> Result<Vec<(V3, V3)>> {
    if c0.is_empty() || c1.is_empty() {
        return Err(Error::SpaceTimeConstruction("empty contour".into()));
    }
    let anchors0: Vec<usize> = (0..c0.len())
        .filter(|&i| shape_of(&c0[i]) != SrcShape::Tet)
        .collect();
    let anchors1: Vec<usize> = (0..c1.len())
        .filter(|&i| shape_of(&c1[i]) != SrcShape::Tet)
        .collect();
    if anchors0.len() != anchors1.len() {
        return Err(Error::SpaceTimeConstruction(
            "closure structure differs between time levels".into(),
        ));
    }
    let cost_of = |pairs: &[(V3, V3)]| -> f64 {
        pairs.iter().map(|(a, b)| (b - a).norm_squared()).sum()
    };
    if anchors0.is_empty() {
        // Closed star fully replaced: positional pairing over rotations.
        let (p, q) = (c0.len(), c1.len());
        let n = p.max(q);
        let mut best: Option<(f64, Vec<(V3, V3)>)> = None;
        for r in 0..q {
            let mut pairs = Vec::with_capacity(n);
            for i in 0..n {
                pairs.push((c0[i.min(p - 1)].pos, c1[(r + i.min(q - 1)) % q].pos));
            }
            let cost = cost_of(&pairs);
            if best.as_ref().map_or(true, |(c, _)| cost < *c) {
                best = Some((cost, pairs));
            }
        }
        return Ok(best.unwrap().1);
    }
    let na = anchors0.len();
    let mut best: Option<(f64, Vec<(V3, V3)>)> = None;
    'rot: for r in 0..na {
        for j in 0..na {
            if shape_of(&c0[anchors0[j]]) != shape_of(&c1[anchors1[(j + r) % na]]) {
                continue 'rot;
            }
        }
        let cyclic_gap = |from: usize, to: usize, len: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let mut i = (from + 1) % len;
            while i != to {
                out.push(i);
                i = (i + 1) % len;
            }
            out
        };
        let mut pairs = Vec::new();
        let mut ok = true;
        for j in 0..na {
            let a0 = anchors0[j];
            let b0 = anchors0[(j + 1) % na];
            let a1 = anchors1[(j + r) % na];
            let b1 = anchors1[(j + 1 + r) % na];
            pairs.push((c0[a0].pos, c1[a1].pos));
            let g0 = cyclic_gap(a0, b0, c0.len());
            let g1 = cyclic_gap(a1, b1, c1.len());
            if g0.is_empty() != g1.is_empty() {
                ok = false;
                break;
            }
            if pair_gap(c0, c1, &g0, &g1, &mut pairs).is_err() {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let cost = cost_of(&pairs);
        if best.as_ref().map_or(true, |(c, _)| cost < *c) {
            best = Some((cost, pairs));
        }
    }
    best.map(|(_, p)| p).ok_or_else(|| {
        Error::SpaceTimeConstruction("no structural alignment of a fully replaced contour".into())
    })
}

/// Flip the triangle orientation of a prism (swaps the first two tracks).
fn reversed(p: &PrismTrack) -> PrismTrack {
    PrismTrack::new([p.tracks[1], p.tracks[0], p.tracks[2]])
}

/// Orient a prism so its normal points away from the element center track;
/// samples a few interior parameter points until the sign is unambiguous.
fn orient_outward(prism: PrismTrack, center: &(V3, V3), dt: f64) -> Result<PrismTrack> {
    const SAMPLES: [(f64, f64, f64); 4] = [
        (1.0 / 3.0, 1.0 / 3.0, 0.5),
        (0.2, 0.3, 0.35),
        (0.4, 0.15, 0.7),
        (0.25, 0.5, 0.55),
    ];
    for (z1, z2, tau) in SAMPLES {
        let (nx, _) = prism.raw_normal(dt, z1, z2, tau);
        let x = prism.eval(z1, z2, tau);
        let m = center.0 * (1.0 - tau) + center.1 * tau;
        let d = nx.dot(&(x - m));
        let scale = nx.norm() * (x - m).norm();
        if d.abs() > 1e-10 * scale.max(1e-300) {
            return Ok(if d > 0.0 { prism } else { reversed(&prism) });
        }
    }
    Err(Error::SpaceTimeConstruction(
        "cannot orient a degenerate hole surface".into(),
    ))
}

struct Assembler {
    dt: f64,
    interfaces: Vec<Interface>,
    cell_iface: Vec<Vec<(usize, f64)>>,
    cell_subtets: Vec<Vec<SubTetTrack>>,
    frames: Vec<BasisFrame>,
}

impl Assembler {
    /// Register a tracked face between owner and neighbor: one interface
    /// plus the cone sub-tets on both sides.
    fn add_tracked_face(
        &mut self,
        owner: usize,
        neighbor: FaceNeighbor,
        pairs: &[(V3, V3)],
        bary: (V3, V3),
    ) {
        let n = pairs.len();
        let mut prisms = Vec::with_capacity(n);
        for k in 0..n {
            let a = pairs[k];
            let b = pairs[(k + 1) % n];
            prisms.push(PrismTrack::new([a, b, bary]));
        }
        let idx = self.interfaces.len();
        self.interfaces.push(Interface {
            owner: ElementRef::Cell(owner),
            neighbor: match neighbor {
                FaceNeighbor::Cell(c) => InterfaceNeighbor::Element(ElementRef::Cell(c)),
                FaceNeighbor::Wall(w) => InterfaceNeighbor::Wall(w),
            },
            prisms,
        });
        self.cell_iface[owner].push((idx, 1.0));
        let fo = self.frames[owner];
        for k in 0..n {
            let a = pairs[k];
            let b = pairs[(k + 1) % n];
            self.cell_subtets[owner].push(SubTetTrack {
                start: [fo.c0, a.0, b.0, bary.0],
                end: [fo.c1, a.1, b.1, bary.1],
            });
        }
        if let FaceNeighbor::Cell(nb) = neighbor {
            self.cell_iface[nb].push((idx, -1.0));
            let fn_ = self.frames[nb];
            for k in 0..n {
                let a = pairs[k];
                let b = pairs[(k + 1) % n];
                self.cell_subtets[nb].push(SubTetTrack {
                    start: [fn_.c0, b.0, a.0, bary.0],
                    end: [fn_.c1, b.1, a.1, bary.1],
                });
            }
        }
    }

    /// Register one hole surface patch: interface owned by the hole (normal
    /// outward from it), the neighbor cell's reversed cone sub-tets, and
    /// the hole's own cone sub-tets.
    fn add_hole_patch(
        &mut self,
        hole_idx: usize,
        hole_center: &(V3, V3),
        hole_subtets: &mut Vec<SubTetTrack>,
        hole_ifaces: &mut Vec<(usize, f64)>,
        cell: usize,
        prisms: Vec<PrismTrack>,
    ) -> Result<()> {
        let mut oriented = Vec::with_capacity(prisms.len());
        for p in prisms {
            oriented.push(orient_outward(p, hole_center, self.dt)?);
        }
        let idx = self.interfaces.len();
        for p in &oriented {
            hole_subtets.push(SubTetTrack {
                start: [
                    hole_center.0,
                    p.tracks[0].0,
                    p.tracks[1].0,
                    p.tracks[2].0,
                ],
                end: [hole_center.1, p.tracks[0].1, p.tracks[1].1, p.tracks[2].1],
            });
            let f = self.frames[cell];
            self.cell_subtets[cell].push(SubTetTrack {
                start: [f.c0, p.tracks[1].0, p.tracks[0].0, p.tracks[2].0],
                end: [f.c1, p.tracks[1].1, p.tracks[0].1, p.tracks[2].1],
            });
        }
        self.interfaces.push(Interface {
            owner: ElementRef::Hole(hole_idx),
            neighbor: InterfaceNeighbor::Element(ElementRef::Cell(cell)),
            prisms: oriented,
        });
        hole_ifaces.push((idx, 1.0));
        self.cell_iface[cell].push((idx, -1.0));
        Ok(())
    }
}

fn find_face<'t>(
    tess: &'t PolyTessellation,
    map: &HashMap<FaceKey, usize>,
    a: usize,
    b: usize,
) -> Result<&'t PolyFace> {
    let key = FaceKey::Edge(a.min(b), a.max(b));
    map.get(&key)
        .map(|&i| &tess.faces[i])
        .ok_or_else(|| Error::SpaceTimeConstruction(format!("missing dual face of edge ({a},{b})")))
}

/// Shared link generator of two consecutive star tets, excluding the edge
/// endpoints.
fn shared_link_generator(
    va: [usize; 4],
    vb: [usize; 4],
    exclude: (usize, usize),
) -> Result<usize> {
    va.into_iter()
        .find(|&v| v != exclude.0 && v != exclude.1 && vb.contains(&v))
        .ok_or_else(|| Error::SpaceTimeConstruction("star tets share no link generator".into()))
}

/// Build the whole space-time layer between two meshes related by a set of
/// pairwise-disjoint flips. `mesh1` must share the tet-id slab with `mesh0`
/// (it is mesh0 plus the applied flips).
#[allow(clippy::too_many_arguments)]
pub fn build_spacetime(
    mesh0: &Tetrahedralization,
    gens0: &GeneratorSet,
    tess0: &PolyTessellation,
    mesh1: &Tetrahedralization,
    gens1: &GeneratorSet,
    tess1: &PolyTessellation,
    events: &[FlipEvent],
    _domain: &DomainBox,
    dt: f64,
) -> Result<SpaceTimeMesh> {
    let np = gens0.len();
    let removed: HashSet<TetId> = events.iter().flat_map(|e| e.removed.iter().copied()).collect();
    let created: HashSet<TetId> = events.iter().flat_map(|e| e.created.iter().copied()).collect();
    let map0: HashMap<FaceKey, usize> = tess0
        .faces
        .iter()
        .enumerate()
        .map(|(i, f)| (face_key(f), i))
        .collect();
    let map1: HashMap<FaceKey, usize> = tess1
        .faces
        .iter()
        .enumerate()
        .map(|(i, f)| (face_key(f), i))
        .collect();
    // Dual faces of flip-removed/created edges are covered by holes.
    let mut hole_edge_keys: HashSet<FaceKey> = HashSet::new();
    for ev in events {
        match ev.geometry {
            FlipGeometry::EdgeRemoval { edge } => {
                hole_edge_keys.insert(FaceKey::Edge(edge.0.min(edge.1), edge.0.max(edge.1)));
            }
            FlipGeometry::FaceRemoval { new_edge, .. } => {
                hole_edge_keys.insert(FaceKey::Edge(
                    new_edge.0.min(new_edge.1),
                    new_edge.0.max(new_edge.1),
                ));
            }
            FlipGeometry::EdgeRepair { old_edge, new_edge } => {
                hole_edge_keys.insert(FaceKey::Edge(
                    old_edge.0.min(old_edge.1),
                    old_edge.0.max(old_edge.1),
                ));
                hole_edge_keys.insert(FaceKey::Edge(
                    new_edge.0.min(new_edge.1),
                    new_edge.0.max(new_edge.1),
                ));
            }
        }
    }
    let frames: Vec<BasisFrame> = (0..np)
        .map(|g| BasisFrame {
            c0: tess0.cells[g].centroid,
            c1: tess1.cells[g].centroid,
            h0: tess0.cells[g].h,
            h1: tess1.cells[g].h,
        })
        .collect();
    let mut asm = Assembler {
        dt,
        interfaces: Vec::new(),
        cell_iface: vec![Vec::new(); np],
        cell_subtets: vec![Vec::new(); np],
        frames,
    };
    // Tracked faces present at both levels, in deterministic key order so
    // downstream summation orders are reproducible.
    let mut keys0: Vec<FaceKey> = map0.keys().copied().collect();
    keys0.sort_unstable();
    for key in keys0 {
        if hole_edge_keys.contains(&key) {
            continue;
        }
        let i0 = map0[&key];
        let Some(&i1) = map1.get(&key) else {
            return Err(Error::SpaceTimeConstruction(format!(
                "face {key:?} vanished without a flip"
            )));
        };
        let f0 = &tess0.faces[i0];
        let f1 = &tess1.faces[i1];
        let pairs = align_contours(&f0.contour, &f1.contour, &removed, &created)?;
        asm.add_tracked_face(
            f0.owner,
            f0.neighbor,
            &pairs,
            (f0.barycenter, f1.barycenter),
        );
    }
    for key in map1.keys() {
        if !map0.contains_key(key) && !hole_edge_keys.contains(key) {
            return Err(Error::SpaceTimeConstruction(format!(
                "face {key:?} appeared without a flip"
            )));
        }
    }
    // Holes, one per event.
    let mut holes: Vec<HoleVolume> = Vec::with_capacity(events.len());
    for ev in events {
        let hole_idx = holes.len();
        let hole = match ev.geometry {
            FlipGeometry::EdgeRemoval { edge } => build_hole_32(
                &mut asm, hole_idx, ev, edge, mesh0, mesh1, gens1, tess0, &map0,
            )?,
            FlipGeometry::FaceRemoval { new_edge, .. } => build_hole_23(
                &mut asm, hole_idx, ev, new_edge, mesh0, mesh1, gens0, tess1, &map1,
            )?,
            FlipGeometry::EdgeRepair { old_edge, new_edge } => build_hole_44(
                &mut asm, hole_idx, ev, old_edge, new_edge, mesh0, mesh1, gens0, gens1, tess0,
                tess1, &map0, &map1,
            )?,
        };
        holes.push(hole);
    }
    let cells: Vec<CellVolume> = (0..np)
        .map(|g| {
            let mut neighbors: Vec<ElementRef> = Vec::new();
            for &(idx, sign) in &asm.cell_iface[g] {
                let iface = &asm.interfaces[idx];
                let other = if sign > 0.0 {
                    match iface.neighbor {
                        InterfaceNeighbor::Element(e) => Some(e),
                        InterfaceNeighbor::Wall(_) => None,
                    }
                } else {
                    Some(iface.owner)
                };
                if let Some(e) = other {
                    if !neighbors.contains(&e) {
                        neighbors.push(e);
                    }
                }
            }
            CellVolume {
                cell: g,
                frame: asm.frames[g],
                subtets: std::mem::take(&mut asm.cell_subtets[g]),
                interfaces: std::mem::take(&mut asm.cell_iface[g]),
                neighbors,
            }
        })
        .collect();
    Ok(SpaceTimeMesh {
        dt,
        cells,
        holes,
        interfaces: asm.interfaces,
    })
}

/// 3-2 hole: the triangular dual face of the removed edge collapses onto
/// the dual edge joining the two created tet centroids. Slices are oblique
/// triangular prisms; both ends are spatially degenerate (a face at t0, an
/// edge at t1).
#[allow(clippy::too_many_arguments)]
fn build_hole_32(
    asm: &mut Assembler,
    hole_idx: usize,
    ev: &FlipEvent,
    edge: (usize, usize),
    mesh0: &Tetrahedralization,
    mesh1: &Tetrahedralization,
    gens1: &GeneratorSet,
    tess0: &PolyTessellation,
    map0: &HashMap<FaceKey, usize>,
) -> Result<HoleVolume> {
    let face = find_face(tess0, map0, edge.0, edge.1)?;
    let pts: Vec<V3> = face.contour.iter().map(|p| p.pos).collect();
    let tets: Vec<TetId> = face
        .contour
        .iter()
        .map(|p| {
            p.src.tet().ok_or_else(|| {
                Error::SpaceTimeConstruction("hole base face has non-tet contour point".into())
            })
        })
        .collect::<Result<_>>()?;
    if pts.len() != 3 {
        return Err(Error::SpaceTimeConstruction(format!(
            "3-2 base face has {} contour points",
            pts.len()
        )));
    }
    let u = mesh1.centroid(ev.created[0], &gens1.positions);
    let v = mesh1.centroid(ev.created[1], &gens1.positions);
    let bary = face.barycenter;
    let center_track = (bary, (u + v) * 0.5);
    let mut subtets = Vec::new();
    let mut ifaces = Vec::new();
    // Caps: the face's facet fan collapsing onto each edge endpoint's side.
    for (cell, target) in [(edge.0, u), (edge.1, v)] {
        let mut prisms = Vec::with_capacity(3);
        for k in 0..3 {
            prisms.push(PrismTrack::new([
                (pts[k], target),
                (pts[(k + 1) % 3], target),
                (bary, target),
            ]));
        }
        asm.add_hole_patch(hole_idx, &center_track, &mut subtets, &mut ifaces, cell, prisms)?;
    }
    // Lateral quads between consecutive corners, facing the link generator
    // the two star tets share.
    let mut lateral_cells = Vec::with_capacity(3);
    for k in 0..3 {
        let kn = (k + 1) % 3;
        let w = shared_link_generator(mesh0.vertices(tets[k]), mesh0.vertices(tets[kn]), edge)?;
        lateral_cells.push(w);
        let prisms = vec![
            PrismTrack::new([(pts[k], u), (pts[kn], u), (pts[kn], v)]),
            PrismTrack::new([(pts[kn], v), (pts[k], v), (pts[k], u)]),
        ];
        asm.add_hole_patch(hole_idx, &center_track, &mut subtets, &mut ifaces, w, prisms)?;
    }
    let corner_tracks = vec![
        (pts[0], u),
        (pts[1], u),
        (pts[2], u),
        (pts[0], v),
        (pts[1], v),
        (pts[2], v),
    ];
    let center = (pts[0] + pts[1] + pts[2] + u + v) / 5.0;
    let h = (u - v).norm().min(incircle_diameter(&pts));
    let mut neighbors = vec![edge.0, edge.1];
    neighbors.extend(lateral_cells);
    Ok(HoleVolume {
        kind: FlipKind::F32,
        corner_tracks,
        center,
        h,
        subtets,
        interfaces: ifaces,
        neighbors,
    })
}

/// 2-3 hole: the time reversal of the 3-2 case; the dual edge between the
/// two removed tet centroids expands into the new triangular face.
#[allow(clippy::too_many_arguments)]
fn build_hole_23(
    asm: &mut Assembler,
    hole_idx: usize,
    ev: &FlipEvent,
    new_edge: (usize, usize),
    mesh0: &Tetrahedralization,
    mesh1: &Tetrahedralization,
    gens0: &GeneratorSet,
    tess1: &PolyTessellation,
    map1: &HashMap<FaceKey, usize>,
) -> Result<HoleVolume> {
    let face = find_face(tess1, map1, new_edge.0, new_edge.1)?;
    let pts: Vec<V3> = face.contour.iter().map(|p| p.pos).collect();
    let tets: Vec<TetId> = face
        .contour
        .iter()
        .map(|p| {
            p.src.tet().ok_or_else(|| {
                Error::SpaceTimeConstruction("hole base face has non-tet contour point".into())
            })
        })
        .collect::<Result<_>>()?;
    if pts.len() != 3 {
        return Err(Error::SpaceTimeConstruction(format!(
            "2-3 base face has {} contour points",
            pts.len()
        )));
    }
    let u = mesh0.centroid(ev.removed[0], &gens0.positions);
    let v = mesh0.centroid(ev.removed[1], &gens0.positions);
    let bary = face.barycenter;
    let center_track = ((u + v) * 0.5, bary);
    let mut subtets = Vec::new();
    let mut ifaces = Vec::new();
    for (cell, source) in [(new_edge.0, u), (new_edge.1, v)] {
        let mut prisms = Vec::with_capacity(3);
        for k in 0..3 {
            prisms.push(PrismTrack::new([
                (source, pts[k]),
                (source, pts[(k + 1) % 3]),
                (source, bary),
            ]));
        }
        asm.add_hole_patch(hole_idx, &center_track, &mut subtets, &mut ifaces, cell, prisms)?;
    }
    let mut lateral_cells = Vec::with_capacity(3);
    for k in 0..3 {
        let kn = (k + 1) % 3;
        let w = shared_link_generator(
            mesh1.vertices(tets[k]),
            mesh1.vertices(tets[kn]),
            new_edge,
        )?;
        lateral_cells.push(w);
        let prisms = vec![
            PrismTrack::new([(u, pts[k]), (u, pts[kn]), (v, pts[kn])]),
            PrismTrack::new([(v, pts[kn]), (v, pts[k]), (u, pts[k])]),
        ];
        asm.add_hole_patch(hole_idx, &center_track, &mut subtets, &mut ifaces, w, prisms)?;
    }
    let corner_tracks = vec![
        (u, pts[0]),
        (u, pts[1]),
        (u, pts[2]),
        (v, pts[0]),
        (v, pts[1]),
        (v, pts[2]),
    ];
    let center = (pts[0] + pts[1] + pts[2] + u + v) / 5.0;
    let h = (u - v).norm().min(incircle_diameter(&pts));
    let mut neighbors = vec![new_edge.0, new_edge.1];
    neighbors.extend(lateral_cells);
    Ok(HoleVolume {
        kind: FlipKind::F23,
        corner_tracks,
        center,
        h,
        subtets,
        interfaces: ifaces,
        neighbors,
    })
}

/// 4-4 hole: the quadrangular dual face of the old edge morphs into the
/// quadrangular dual face of the new edge. Old and new corner centroids are
/// associated where their tets share a face; slices are hexahedra.
#[allow(clippy::too_many_arguments)]
fn build_hole_44(
    asm: &mut Assembler,
    hole_idx: usize,
    ev: &FlipEvent,
    old_edge: (usize, usize),
    new_edge: (usize, usize),
    mesh0: &Tetrahedralization,
    mesh1: &Tetrahedralization,
    gens0: &GeneratorSet,
    gens1: &GeneratorSet,
    tess0: &PolyTessellation,
    tess1: &PolyTessellation,
    map0: &HashMap<FaceKey, usize>,
    map1: &HashMap<FaceKey, usize>,
) -> Result<HoleVolume> {
    let f0 = find_face(tess0, map0, old_edge.0, old_edge.1)?;
    let f1 = find_face(tess1, map1, new_edge.0, new_edge.1)?;
    let get = |f: &PolyFace| -> Result<(Vec<V3>, Vec<TetId>)> {
        let pts: Vec<V3> = f.contour.iter().map(|p| p.pos).collect();
        let tets: Vec<TetId> = f
            .contour
            .iter()
            .map(|p| {
                p.src.tet().ok_or_else(|| {
                    Error::SpaceTimeConstruction("4-4 base face has non-tet contour".into())
                })
            })
            .collect::<Result<_>>()?;
        Ok((pts, tets))
    };
    let (pts0, tets0) = get(f0)?;
    let (pts1, tets1) = get(f1)?;
    if pts0.len() != 4 || pts1.len() != 4 {
        return Err(Error::SpaceTimeConstruction(
            "4-4 base faces are not quadrangular".into(),
        ));
    }
    // Corner association: old tet k pairs with new tet m when they share a
    // face (three common generators).
    let shares_face = |k: usize, m: usize| -> bool {
        let va = mesh0.vertices(tets0[k]);
        let vb = mesh1.vertices(tets1[m]);
        va.iter().filter(|v| vb.contains(v)).count() == 3
    };
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(8);
    for k in 0..4 {
        for m in 0..4 {
            if shares_face(k, m) {
                pairs.push((k, m));
            }
        }
    }
    if pairs.len() != 8 {
        return Err(Error::SpaceTimeConstruction(format!(
            "4-4 corner association found {} pairs (expected 8)",
            pairs.len()
        )));
    }
    let center_track = (f0.barycenter, f1.barycenter);
    let mut subtets = Vec::new();
    let mut ifaces = Vec::new();
    // Caps on the vanishing face: cells of the old edge. Contour corner k
    // tracks to the centroid of its face-sharing partner containing the cap
    // generator; the barycenter tracks to the midpoint of the two targets.
    let mut neighbors = Vec::with_capacity(6);
    for g in [old_edge.0, old_edge.1] {
        let target_of = |k: usize| -> Result<V3> {
            pairs
                .iter()
                .find(|&&(pk, pm)| pk == k && mesh1.vertices(tets1[pm]).contains(&g))
                .map(|&(_, pm)| mesh1.centroid(tets1[pm], &gens1.positions))
                .ok_or_else(|| {
                    Error::SpaceTimeConstruction("4-4 cap corner has no partner".into())
                })
        };
        let targets: Vec<V3> = (0..4).map(target_of).collect::<Result<_>>()?;
        let mut distinct: Vec<V3> = Vec::new();
        for t in &targets {
            if !distinct.iter().any(|d| (d - t).norm() == 0.0) {
                distinct.push(*t);
            }
        }
        let bary_target = distinct.iter().sum::<V3>() / distinct.len() as f64;
        let mut prisms = Vec::with_capacity(4);
        for k in 0..4 {
            let kn = (k + 1) % 4;
            prisms.push(PrismTrack::new([
                (pts0[k], targets[k]),
                (pts0[kn], targets[kn]),
                (f0.barycenter, bary_target),
            ]));
        }
        asm.add_hole_patch(hole_idx, &center_track, &mut subtets, &mut ifaces, g, prisms)?;
        neighbors.push(g);
    }
    // Caps on the appearing face: cells of the new edge, time-mirrored.
    for g in [new_edge.0, new_edge.1] {
        let source_of = |m: usize| -> Result<V3> {
            pairs
                .iter()
                .find(|&&(pk, pm)| pm == m && mesh0.vertices(tets0[pk]).contains(&g))
                .map(|&(pk, _)| mesh0.centroid(tets0[pk], &gens0.positions))
                .ok_or_else(|| {
                    Error::SpaceTimeConstruction("4-4 cap corner has no partner".into())
                })
        };
        let sources: Vec<V3> = (0..4).map(source_of).collect::<Result<_>>()?;
        let mut distinct: Vec<V3> = Vec::new();
        for s in &sources {
            if !distinct.iter().any(|d| (d - s).norm() == 0.0) {
                distinct.push(*s);
            }
        }
        let bary_source = distinct.iter().sum::<V3>() / distinct.len() as f64;
        let mut prisms = Vec::with_capacity(4);
        for m in 0..4 {
            let mn = (m + 1) % 4;
            prisms.push(PrismTrack::new([
                (sources[m], pts1[m]),
                (sources[mn], pts1[mn]),
                (bary_source, f1.barycenter),
            ]));
        }
        asm.add_hole_patch(hole_idx, &center_track, &mut subtets, &mut ifaces, g, prisms)?;
        neighbors.push(g);
    }
    // Ruled side faces for the two shared link generators: the 4 corner
    // pairs whose tets both contain the generator, ordered by shared-corner
    // adjacency, split along a diagonal (degenerate at both step ends).
    let side_gens: Vec<usize> = ev
        .generators
        .iter()
        .copied()
        .filter(|&g| g != old_edge.0 && g != old_edge.1 && g != new_edge.0 && g != new_edge.1)
        .collect();
    if side_gens.len() != 2 {
        return Err(Error::SpaceTimeConstruction(
            "4-4 flip does not have two side generators".into(),
        ));
    }
    for &g in &side_gens {
        let verts: Vec<(usize, usize)> = pairs
            .iter()
            .copied()
            .filter(|&(k, m)| {
                mesh0.vertices(tets0[k]).contains(&g) && mesh1.vertices(tets1[m]).contains(&g)
            })
            .collect();
        if verts.len() != 4 {
            return Err(Error::SpaceTimeConstruction(format!(
                "4-4 side face of generator {g} has {} corners",
                verts.len()
            )));
        }
        // Order into a 4-cycle: consecutive corners share an old or a new tet.
        let adj = |x: (usize, usize), y: (usize, usize)| x.0 == y.0 || x.1 == y.1;
        let mut cycle = vec![verts[0]];
        let mut rest: Vec<_> = verts[1..].to_vec();
        while !rest.is_empty() {
            let cur = *cycle.last().unwrap();
            let pos = rest
                .iter()
                .position(|&v| adj(cur, v))
                .ok_or_else(|| Error::SpaceTimeConstruction("4-4 side face not a cycle".into()))?;
            cycle.push(rest.remove(pos));
        }
        let track = |(k, m): (usize, usize)| -> (V3, V3) { (pts0[k], pts1[m]) };
        let t = [track(cycle[0]), track(cycle[1]), track(cycle[2]), track(cycle[3])];
        let prisms = vec![
            PrismTrack::new([t[0], t[1], t[2]]),
            PrismTrack::new([t[0], t[2], t[3]]),
        ];
        asm.add_hole_patch(hole_idx, &center_track, &mut subtets, &mut ifaces, g, prisms)?;
        neighbors.push(g);
    }
    let corner_tracks: Vec<(V3, V3)> = pairs.iter().map(|&(k, m)| (pts0[k], pts1[m])).collect();
    let center = (pts0.iter().sum::<V3>() + pts1.iter().sum::<V3>()) / 8.0;
    let h = incircle_diameter(&pts0).min(incircle_diameter(&pts1));
    Ok(HoleVolume {
        kind: FlipKind::F44,
        corner_tracks,
        center,
        h,
        subtets,
        interfaces: ifaces,
        neighbors,
    })
}
