//! Space-time control volumes, hole elements and their assembly into the
//! per-step geometry. Interfaces are stored once and referenced with a sign
//! from both sides, so every flux value is computed at shared quadrature
//! points and enters the two adjacent elements with opposite orientation.

use super::{PrismTrack, SubTetTrack};
use crate::geometry::V3;
use crate::motion::flips::FlipKind;
use crate::quadrature::{time_rule, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementRef {
    Cell(usize),
    Hole(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfaceNeighbor {
    Element(ElementRef),
    Wall(u8),
}

/// A lateral space-time surface shared by two elements (or an element and a
/// wall), decomposed into bilinear prisms oriented outward from `owner`.
#[derive(Debug, Clone)]
pub struct Interface {
    pub owner: ElementRef,
    pub neighbor: InterfaceNeighbor,
    pub prisms: Vec<PrismTrack>,
}

/// Basis frame of a cell across a step: centers and characteristic lengths
/// at both time levels. Space-time bases use (c0, h0); the new spatial basis
/// uses (c1, h1); the moving test basis interpolates c0 -> c1 at scale h0.
#[derive(Debug, Clone, Copy)]
pub struct BasisFrame {
    pub c0: V3,
    pub c1: V3,
    pub h0: f64,
    pub h1: f64,
}

/// Classical space-time control volume of one cell: its tracked sub-tet
/// decomposition (including zero-volume padding next to holes) and the
/// interfaces it touches with their orientation sign.
#[derive(Debug, Clone)]
pub struct CellVolume {
    pub cell: usize,
    pub frame: BasisFrame,
    pub subtets: Vec<SubTetTrack>,
    /// (interface index, +1 as owner / -1 as neighbor).
    pub interfaces: Vec<(usize, f64)>,
    /// Space-time neighbors: shared-at-both-levels cells plus hole indices.
    pub neighbors: Vec<ElementRef>,
}

/// Degenerate 4D element filling the gap of one flip: zero 3D volume at one
/// or both step ends, strictly positive 4D measure.
#[derive(Debug, Clone)]
pub struct HoleVolume {
    pub kind: FlipKind,
    /// Corner tracks: 6 for 3-2/2-3 (triangle-to-edge prisms), 8 for 4-4.
    pub corner_tracks: Vec<(V3, V3)>,
    /// Basis center: arithmetic mean of the generating geometry vertices.
    pub center: V3,
    /// Basis scale: minimum of generating edge length / incircle diameters.
    pub h: f64,
    pub subtets: Vec<SubTetTrack>,
    pub interfaces: Vec<(usize, f64)>,
    /// The 5 (3-2/2-3) or 6 (4-4) neighbor cells.
    pub neighbors: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SpaceTimeMesh {
    pub dt: f64,
    pub cells: Vec<CellVolume>,
    pub holes: Vec<HoleVolume>,
    pub interfaces: Vec<Interface>,
}

/// 4D measure of a tracked volume: Gaussian rule in time over the 3D slice
/// volumes (sub-tet decomposition), scaled by dt.
pub fn st_volume(subtets: &[SubTetTrack], dt: f64, degree: usize) -> f64 {
    let rule = time_rule(degree);
    let mut total = 0.0;
    for (tau, w) in rule.nodes.iter().zip(&rule.weights) {
        let slice: f64 = subtets.iter().map(|t| t.volume_at(*tau)).sum();
        total += w * slice;
    }
    total * dt
}

/// Slice volume at a fixed normalized time.
pub fn slice_volume(subtets: &[SubTetTrack], tau: f64) -> f64 {
    subtets.iter().map(|t| t.volume_at(tau)).sum()
}

impl SpaceTimeMesh {
    /// Sum of classical 4D measures.
    pub fn total_cell_measure(&self, degree: usize) -> f64 {
        self.cells
            .iter()
            .map(|c| st_volume(&c.subtets, self.dt, degree))
            .sum()
    }

    pub fn total_hole_measure(&self, degree: usize) -> f64 {
        self.holes
            .iter()
            .map(|h| st_volume(&h.subtets, self.dt, degree))
            .sum()
    }

    /// Closed-boundary integral of the outward space-time normal times the
    /// jacobian (lateral prisms plus the two caps with normals (0,0,0,-+1)).
    /// Vanishes for every well-formed element; the divergence-free geometry
    /// underpinning the GCL.
    pub fn closure_defect(
        &self,
        element: ElementRef,
        surf_rule: &QuadratureRule,
    ) -> [f64; 4] {
        let (subtets, interfaces) = match element {
            ElementRef::Cell(i) => (&self.cells[i].subtets, &self.cells[i].interfaces),
            ElementRef::Hole(i) => (&self.holes[i].subtets, &self.holes[i].interfaces),
        };
        let mut acc = [0.0f64; 4];
        // Caps: bottom normal (0,0,0,-1) with weight |P(0)|, top +|P(1)|.
        acc[3] += slice_volume(subtets, 1.0) - slice_volume(subtets, 0.0);
        for &(idx, sign) in interfaces {
            for prism in &self.interfaces[idx].prisms {
                for (node, w) in surf_rule.nodes.iter().zip(&surf_rule.weights) {
                    let (nx, nt) = prism.raw_normal(self.dt, node[0], node[1], node[2]);
                    for d in 0..3 {
                        acc[d] += sign * w * nx[d];
                    }
                    acc[3] += sign * w * nt;
                }
            }
        }
        acc
    }

    /// Characteristic scale of an element's boundary, used to normalize the
    /// closure defect.
    pub fn boundary_scale(&self, element: ElementRef, surf_rule: &QuadratureRule) -> f64 {
        let interfaces = match element {
            ElementRef::Cell(i) => &self.cells[i].interfaces,
            ElementRef::Hole(i) => &self.holes[i].interfaces,
        };
        let mut scale: f64 = 0.0;
        for &(idx, _) in interfaces {
            for prism in &self.interfaces[idx].prisms {
                scale += prism.measure(self.dt, surf_rule);
            }
        }
        scale
    }
}

/// Plain-text dump of the hole elements: kind, corner tracks, and the 3D
/// space-time measure of every lateral surface. Consumed by the geometry
/// tests and the snapshot visualizer.
pub fn debug_dump_holes(st: &SpaceTimeMesh, degree: usize) -> String {
    let rule = crate::quadrature::reference_quadrature(
        crate::quadrature::RuleKind::Prism,
        degree.min(3),
    )
    .expect("degree validated");
    let mut out = String::new();
    for (k, hole) in st.holes.iter().enumerate() {
        out.push_str(&format!(
            "hole {k} kind {} neighbors {:?} measure {:.12e}\n",
            hole.kind,
            hole.neighbors,
            st_volume(&hole.subtets, st.dt, degree)
        ));
        for (i, (a, b)) in hole.corner_tracks.iter().enumerate() {
            out.push_str(&format!(
                "  track {i}: ({:.9}, {:.9}, {:.9}) -> ({:.9}, {:.9}, {:.9})\n",
                a[0], a[1], a[2], b[0], b[1], b[2]
            ));
        }
        for &(idx, _) in &hole.interfaces {
            let iface = &st.interfaces[idx];
            let measure: f64 = iface.prisms.iter().map(|p| p.measure(st.dt, &rule)).sum();
            let nb = match iface.neighbor {
                InterfaceNeighbor::Element(ElementRef::Cell(c)) => format!("cell {c}"),
                InterfaceNeighbor::Element(ElementRef::Hole(h)) => format!("hole {h}"),
                InterfaceNeighbor::Wall(w) => format!("wall {w}"),
            };
            out.push_str(&format!("  surface -> {nb}: measure {measure:.12e}\n"));
        }
    }
    out
}
