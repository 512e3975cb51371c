//! The discrete solution: modal coefficients per cell, their projection
//! from point-wise initial data, and evaluation helpers.

use crate::basis::{eval_phi, BasisSpec};
use crate::euler::{GasModel, State as ConsState, NV};
use crate::geometry::V3;
use crate::mesh::dual::PolyTessellation;
use crate::quadrature::{reference_quadrature, RuleKind};
use crate::{Error, Result};
use nalgebra::DMatrix;

/// Piecewise polynomial solution: one (L x 5) coefficient block per cell.
#[derive(Debug, Clone)]
pub struct DGField {
    pub degree: usize,
    pub coeffs: Vec<DMatrix<f64>>,
}

impl DGField {
    pub fn eval(&self, spec: &BasisSpec, cell: usize, c: &V3, h: f64, x: &V3) -> ConsState {
        let mut vals = vec![0.0; spec.len()];
        eval_phi(&spec.indices, self.degree, c, h, x, &mut vals, None);
        let mut q = [0.0; NV];
        let co = &self.coeffs[cell];
        for l in 0..spec.len() {
            for v in 0..NV {
                q[v] += vals[l] * co[(l, v)];
            }
        }
        q
    }
}

/// Quadrature nodes covering one polyhedral cell: its facet-fan sub-tet
/// decomposition sampled with the reference tetrahedron rule.
pub fn cell_nodes(
    tess: &PolyTessellation,
    cell: usize,
    degree: usize,
    boost: bool,
) -> Result<Vec<(V3, f64)>> {
    let rule = reference_quadrature(RuleKind::Tet, degree.min(3))?;
    let c = &tess.cells[cell];
    let mut out = Vec::new();
    for &(fi, owned) in &c.faces {
        let f = &tess.faces[fi];
        let n = f.contour.len();
        for k in 0..n {
            let (mut a, mut b) = (f.contour[k].pos, f.contour[(k + 1) % n].pos);
            if !owned {
                std::mem::swap(&mut a, &mut b);
            }
            let verts = [c.centroid, a, b, f.barycenter];
            let vol6 = (verts[1] - verts[0])
                .cross(&(verts[2] - verts[0]))
                .dot(&(verts[3] - verts[0]));
            for (node, w) in rule.nodes.iter().zip(&rule.weights) {
                let x = verts[0]
                    + (verts[1] - verts[0]) * node[0]
                    + (verts[2] - verts[0]) * node[1]
                    + (verts[3] - verts[0]) * node[2];
                out.push((x, w * vol6));
            }
        }
    }
    let _ = boost;
    Ok(out)
}

/// L2-project point-wise conserved data onto the modal basis of every cell.
pub fn project_field<F: Fn(&V3) -> ConsState>(
    tess: &PolyTessellation,
    degree: usize,
    ic: F,
) -> Result<DGField> {
    let spec = BasisSpec::new(degree, 3);
    let l = spec.len();
    let mut coeffs = Vec::with_capacity(tess.cells.len());
    for (ci, cell) in tess.cells.iter().enumerate() {
        let nodes = cell_nodes(tess, ci, degree, false)?;
        let mut mass = DMatrix::<f64>::zeros(l, l);
        let mut rhs = DMatrix::<f64>::zeros(l, NV);
        let mut vals = vec![0.0; l];
        for (x, w) in &nodes {
            eval_phi(&spec.indices, degree, &cell.centroid, cell.h, x, &mut vals, None);
            let q = ic(x);
            for k in 0..l {
                let wk = w * vals[k];
                for m in 0..l {
                    mass[(k, m)] += wk * vals[m];
                }
                for v in 0..NV {
                    rhs[(k, v)] += wk * q[v];
                }
            }
        }
        let lu = mass.lu();
        let sol = lu
            .solve(&rhs)
            .ok_or(Error::SingularMass(ci))?;
        coeffs.push(sol);
    }
    Ok(DGField { degree, coeffs })
}

/// Integral of the conserved variables over every cell, summed: the global
/// invariants (mass, momentum, energy).
pub fn totals(tess: &PolyTessellation, field: &DGField) -> Result<[f64; NV]> {
    let spec = BasisSpec::new(field.degree, 3);
    let l = spec.len();
    let mut acc = [0.0; NV];
    let mut vals = vec![0.0; l];
    for (ci, cell) in tess.cells.iter().enumerate() {
        let nodes = cell_nodes(tess, ci, field.degree, false)?;
        let mut phi_int = vec![0.0; l];
        for (x, w) in &nodes {
            eval_phi(&spec.indices, field.degree, &cell.centroid, cell.h, x, &mut vals, None);
            for k in 0..l {
                phi_int[k] += w * vals[k];
            }
        }
        let co = &field.coeffs[ci];
        for k in 0..l {
            for v in 0..NV {
                acc[v] += phi_int[k] * co[(k, v)];
            }
        }
    }
    Ok(acc)
}

/// Check the cell-average states are physically admissible.
pub fn validate_field(
    tess: &PolyTessellation,
    field: &DGField,
    gas: &GasModel,
) -> Result<()> {
    let spec = BasisSpec::new(field.degree, 3);
    for (ci, cell) in tess.cells.iter().enumerate() {
        let q = field.eval(&spec, ci, &cell.centroid, cell.h, &cell.centroid);
        crate::euler::pressure(&q, gas).map_err(|_| Error::InvalidState {
            cell: ci,
            reason: "non-physical cell state".into(),
        })?;
    }
    Ok(())
}
