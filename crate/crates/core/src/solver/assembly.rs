//! Per-element quadrature and matrix assembly shared by the predictor, the
//! hole solve and the corrector. All space-time volume integrals run over
//! the tracked sub-tet decomposition with a Gaussian rule in time; lateral
//! integrals run over the interface prisms.

use crate::basis::eval_theta;
use crate::geometry::V3;
use crate::quadrature::{
    gauss_legendre_unit, reference_quadrature, QuadratureRule, RuleKind,
};
use crate::spacetime::volumes::BasisFrame;
use crate::spacetime::{PrismTrack, SubTetTrack, SurfaceSample};
use crate::{Error, Result};
use nalgebra::DMatrix;

/// Volume quadrature node of a space-time element: position, normalized
/// time, and total weight (reference weight x slice jacobian x dt x time
/// weight).
#[derive(Debug, Clone, Copy)]
pub struct VolNode {
    pub x: V3,
    pub tau: f64,
    pub w: f64,
}

/// Nodes over a tracked 4D volume. One extra time point over the measure
/// rule keeps the moving-test volume terms exact for polynomial states.
pub fn volume_nodes(
    subtets: &[SubTetTrack],
    dt: f64,
    degree: usize,
    scale: f64,
) -> Result<Vec<VolNode>> {
    let trule = gauss_legendre_unit((degree + 2).max(2));
    let tet = reference_quadrature(RuleKind::Tet, degree.min(3))?;
    let mut out = Vec::with_capacity(trule.len() * subtets.len() * tet.len());
    let floor = -1e-12 * scale.powi(3);
    for (tau, wt) in trule.nodes.iter().zip(&trule.weights) {
        for st in subtets {
            let v = st.slice(*tau);
            let vol6 = (v[1] - v[0]).cross(&(v[2] - v[0])).dot(&(v[3] - v[0]));
            if vol6 / 6.0 < floor {
                return Err(Error::DegenerateGeometry(format!(
                    "negative space-time slice volume {} at tau {tau}",
                    vol6 / 6.0
                )));
            }
            for (node, w) in tet.nodes.iter().zip(&tet.weights) {
                let x = v[0]
                    + (v[1] - v[0]) * node[0]
                    + (v[2] - v[0]) * node[1]
                    + (v[3] - v[0]) * node[2];
                out.push(VolNode { x, tau: *tau, w: w * vol6 * wt * dt });
            }
        }
    }
    Ok(out)
}

/// Nodes over the spatial cap at tau = 0 or 1.
pub fn cap_nodes(subtets: &[SubTetTrack], tau: f64, degree: usize) -> Result<Vec<(V3, f64)>> {
    let tet = reference_quadrature(RuleKind::Tet, degree.min(3))?;
    let mut out = Vec::with_capacity(subtets.len() * tet.len());
    for st in subtets {
        let v = st.slice(tau);
        let vol6 = (v[1] - v[0]).cross(&(v[2] - v[0])).dot(&(v[3] - v[0]));
        for (node, w) in tet.nodes.iter().zip(&tet.weights) {
            let x = v[0]
                + (v[1] - v[0]) * node[0]
                + (v[2] - v[0]) * node[1]
                + (v[3] - v[0]) * node[2];
            out.push((x, w * vol6));
        }
    }
    Ok(out)
}

/// Quadrature samples over the prisms of one interface, oriented outward
/// from the owner; the per-node weight multiplies the jacobian in.
pub fn surface_nodes(
    prisms: &[PrismTrack],
    dt: f64,
    rule: &QuadratureRule,
) -> Vec<(SurfaceSample, f64)> {
    let mut out = Vec::with_capacity(prisms.len() * rule.len());
    for p in prisms {
        for (node, w) in rule.nodes.iter().zip(&rule.weights) {
            let s = p.sample(dt, node[0], node[1], node[2], 1.0);
            out.push((s, w * s.jac));
        }
    }
    out
}

pub fn surface_rule(degree: usize, boosted: bool) -> Result<QuadratureRule> {
    reference_quadrature(
        if boosted { RuleKind::PrismBoosted } else { RuleKind::Prism },
        degree.min(3),
    )
}

/// Space-time basis values at volume nodes: theta, its time derivative and
/// spatial gradients, as (nodes x L) matrices.
pub struct ThetaTables {
    pub v: DMatrix<f64>,
    pub dt: DMatrix<f64>,
    pub dx: [DMatrix<f64>; 3],
}

pub fn theta_tables(
    indices: &[[usize; 4]],
    degree: usize,
    center: &V3,
    h: f64,
    dt: f64,
    nodes: &[VolNode],
) -> ThetaTables {
    let l = indices.len();
    let n = nodes.len();
    let mut v = DMatrix::<f64>::zeros(n, l);
    let mut vt = DMatrix::<f64>::zeros(n, l);
    let mut vx = [
        DMatrix::<f64>::zeros(n, l),
        DMatrix::<f64>::zeros(n, l),
        DMatrix::<f64>::zeros(n, l),
    ];
    let mut vals = vec![0.0; l];
    let mut grad = vec![[0.0; 3]; l];
    let mut dts = vec![0.0; l];
    for (i, node) in nodes.iter().enumerate() {
        eval_theta(
            indices,
            degree,
            center,
            h,
            dt,
            &node.x,
            node.tau,
            &mut vals,
            Some(&mut grad),
            Some(&mut dts),
        );
        for k in 0..l {
            v[(i, k)] = vals[k];
            vt[(i, k)] = dts[k];
            for d in 0..3 {
                vx[d][(i, k)] = grad[k][d];
            }
        }
    }
    ThetaTables { v, dt: vt, dx: vx }
}

/// A^T diag(w) B for quadrature-weighted Galerkin matrices.
pub fn weighted_gram(a: &DMatrix<f64>, w: &[f64], b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut wb = b.clone();
    for (i, wi) in w.iter().enumerate() {
        for k in 0..wb.ncols() {
            wb[(i, k)] *= wi;
        }
    }
    a.transpose() * wb
}

/// Frame helper: space-time basis parameters of a cell.
pub fn theta_frame(frame: &BasisFrame) -> (V3, f64) {
    (frame.c0, frame.h0)
}
