//! Locally implicit space-time DG solve on a hole element: boundary flux
//! integrals against the neighbor predictors balance the interior
//! space-time flux divergence. The system is a small dense Newton problem;
//! the dissipation coefficient uses a smooth maximum so the residual stays
//! differentiable, with the sharpness frozen at the initial-guess signal
//! scale. The converged boundary fluxes are cached and reused verbatim by
//! the neighbors' correctors, which makes the scheme conservative to the
//! Newton tolerance.

use super::assembly::{surface_nodes, surface_rule, theta_tables, volume_nodes, weighted_gram};
use super::predictor::{flux_tables, scale_rows, state_at, CellSolution};
use super::SolverConfig;
use crate::basis::{eval_theta, BasisSpec};
use crate::euler::{
    ale_signal, flux_jacobian_dot_n, rusanov_ale, rusanov_dql, MaxMode, State as ConsState, NV,
};
use crate::geometry::V3;
use crate::spacetime::volumes::{ElementRef, InterfaceNeighbor, SpaceTimeMesh};
use crate::spacetime::SurfaceSample;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// One cached boundary quadrature node of a hole interface: position, the
/// outward (from the hole) unit space-time normal, the weight including the
/// jacobian, the neighbor trace, and the final flux value.
#[derive(Debug, Clone, Copy)]
pub struct HoleFluxNode {
    pub x: V3,
    pub tau: f64,
    pub nx: V3,
    pub nt: f64,
    pub w: f64,
    pub flux: ConsState,
}

pub struct HoleSolution {
    pub qhat: DMatrix<f64>,
    pub newton_iters: usize,
    /// (interface index, cached nodes) for every surface of the hole.
    pub iface_flux: Vec<(usize, Vec<HoleFluxNode>)>,
}

struct BoundaryNode {
    sample: SurfaceSample,
    w: f64,
    iface_slot: usize,
    theta: Vec<f64>,
    neighbor_q: ConsState,
}

/// Assemble and solve the hole system for hole `hi`.
pub fn solve_hole(
    st: &SpaceTimeMesh,
    hi: usize,
    cells: &[CellSolution],
    cfg: &SolverConfig,
) -> Result<HoleSolution> {
    let hole = &st.holes[hi];
    let n_deg = cfg.degree;
    let spec4 = BasisSpec::new(n_deg, 4);
    let l4 = spec4.len();
    let dt = st.dt;
    // Interior tables.
    let nodes = volume_nodes(&hole.subtets, dt, n_deg, hole.h)?;
    let w: Vec<f64> = nodes.iter().map(|n| n.w).collect();
    let tables = theta_tables(&spec4.indices, n_deg, &hole.center, hole.h, dt, &nodes);
    let m4 = weighted_gram(&tables.v, &w, &tables.v);
    let m4_lu = m4.clone().lu();
    // Derivative on the test function for the interior term.
    let kt_t = weighted_gram(&tables.dt, &w, &tables.v);
    let kx_t: Vec<DMatrix<f64>> = (0..3)
        .map(|d| weighted_gram(&tables.dx[d], &w, &tables.v))
        .collect();
    // Boundary quadrature with neighbor traces (their predictors are final).
    let rule = surface_rule(n_deg, cfg.boosted_surface_quadrature)?;
    let mut boundary: Vec<BoundaryNode> = Vec::new();
    let mut iface_ids: Vec<usize> = Vec::new();
    for (slot, &(idx, sign)) in hole.interfaces.iter().enumerate() {
        debug_assert!(sign > 0.0, "holes own their interfaces");
        iface_ids.push(idx);
        let iface = &st.interfaces[idx];
        let InterfaceNeighbor::Element(ElementRef::Cell(nb)) = iface.neighbor else {
            return Err(Error::SpaceTimeConstruction(
                "hole interface must face a cell".into(),
            ));
        };
        let frame = st.cells[nb].frame;
        let mut theta = vec![0.0; l4];
        for (sample, wjac) in surface_nodes(&iface.prisms, dt, &rule) {
            if wjac == 0.0 {
                continue;
            }
            eval_theta(
                &spec4.indices,
                n_deg,
                &hole.center,
                hole.h,
                dt,
                &sample.x,
                sample.tau,
                &mut theta,
                None,
                None,
            );
            let mut nb_theta = vec![0.0; l4];
            eval_theta(
                &spec4.indices,
                n_deg,
                &frame.c0,
                frame.h0,
                dt,
                &sample.x,
                sample.tau,
                &mut nb_theta,
                None,
                None,
            );
            let qn = &cells[nb].qhat;
            let mut neighbor_q = [0.0; NV];
            for l in 0..l4 {
                for v in 0..NV {
                    neighbor_q[v] += nb_theta[l] * qn[(l, v)];
                }
            }
            boundary.push(BoundaryNode {
                sample,
                w: wjac,
                iface_slot: slot,
                theta: theta.clone(),
                neighbor_q,
            });
        }
    }
    // Initial guess: 4D-measure weighted average of the neighbor
    // predictors, re-expanded in the hole basis by L2 projection.
    let mut weights = Vec::with_capacity(hole.neighbors.len());
    let mut wsum = 0.0;
    for &nb in &hole.neighbors {
        weights.push(cells[nb].st_measure);
        wsum += cells[nb].st_measure;
    }
    let mut avg_nodes = DMatrix::<f64>::zeros(nodes.len(), NV);
    {
        let mut nb_theta = vec![0.0; l4];
        for (j, &nb) in hole.neighbors.iter().enumerate() {
            let frame = st.cells[nb].frame;
            let qn = &cells[nb].qhat;
            let wj = weights[j] / wsum;
            for (i, node) in nodes.iter().enumerate() {
                eval_theta(
                    &spec4.indices,
                    n_deg,
                    &frame.c0,
                    frame.h0,
                    dt,
                    &node.x,
                    node.tau,
                    &mut nb_theta,
                    None,
                    None,
                );
                for v in 0..NV {
                    let mut q = 0.0;
                    for l in 0..l4 {
                        q += nb_theta[l] * qn[(l, v)];
                    }
                    avg_nodes[(i, v)] += wj * q;
                }
            }
        }
    }
    let mut qhat = m4_lu
        .solve(&(tables.v.transpose() * scale_rows(&avg_nodes, &w)))
        .ok_or(Error::HoleNewtonFailed(hi))?;
    // Frozen smooth-max sharpness from the initial-guess signal scale.
    let mut s_ref = 0.0f64;
    for b in &boundary {
        s_ref = s_ref.max(ale_signal(&b.neighbor_q, &cfg.gas, &b.sample.nx, b.sample.nt));
    }
    let mode = MaxMode::Soft(cfg.softmax_sharpness / s_ref.max(1e-300));
    let scale = boundary.iter().map(|b| b.w).sum::<f64>()
        * (1.0 + qhat.amax());
    let tol = cfg.newton_tol * scale.max(1e-300);

    let residual = |qhat: &DMatrix<f64>,
                    cache: Option<&mut Vec<(usize, Vec<HoleFluxNode>)>>|
     -> Result<DMatrix<f64>> {
        let mut r = DMatrix::<f64>::zeros(l4, NV);
        let mut cache_store: Vec<Vec<HoleFluxNode>> = vec![Vec::new(); iface_ids.len()];
        for b in &boundary {
            let mut ql = [0.0; NV];
            for l in 0..l4 {
                for v in 0..NV {
                    ql[v] += b.theta[l] * qhat[(l, v)];
                }
            }
            if !(ql[0] > 0.0) {
                return Err(Error::HoleNewtonFailed(hi));
            }
            let f = rusanov_ale(&ql, &b.neighbor_q, &b.sample.nx, b.sample.nt, &cfg.gas, mode);
            for k in 0..l4 {
                let wt = b.w * b.theta[k];
                for v in 0..NV {
                    r[(k, v)] += wt * f[v];
                }
            }
            if cache.is_some() {
                cache_store[b.iface_slot].push(HoleFluxNode {
                    x: b.sample.x,
                    tau: b.sample.tau,
                    nx: b.sample.nx,
                    nt: b.sample.nt,
                    w: b.w,
                    flux: f,
                });
            }
        }
        // Interior space-time flux divergence against grad(theta_k).
        let q_nodes = &tables.v * qhat;
        let f = flux_tables(&q_nodes, &cfg.gas, usize::MAX)
            .map_err(|_| Error::HoleNewtonFailed(hi))?;
        r -= &kt_t * qhat;
        for d in 0..3 {
            let proj = m4_lu
                .solve(&(tables.v.transpose() * scale_rows(&f[d], &w)))
                .ok_or(Error::HoleNewtonFailed(hi))?;
            r -= &kx_t[d] * proj;
        }
        if let Some(store) = cache {
            *store = iface_ids
                .iter()
                .copied()
                .zip(cache_store)
                .collect();
        }
        Ok(r)
    };

    let mut r = residual(&qhat, None)?;
    let mut iters = 0;
    let n_unknown = l4 * NV;
    while r.amax() > tol && iters < cfg.newton_max_iters {
        iters += 1;
        // Jacobian: boundary + interior, analytic.
        let mut jac = DMatrix::<f64>::zeros(n_unknown, n_unknown);
        for b in &boundary {
            let mut ql = [0.0; NV];
            for l in 0..l4 {
                for v in 0..NV {
                    ql[v] += b.theta[l] * qhat[(l, v)];
                }
            }
            let dfl = rusanov_dql(&ql, &b.neighbor_q, &b.sample.nx, b.sample.nt, &cfg.gas, mode);
            for k in 0..l4 {
                let wt = b.w * b.theta[k];
                for l in 0..l4 {
                    let wtl = wt * b.theta[l];
                    for a in 0..NV {
                        for c in 0..NV {
                            jac[(k * NV + a, l * NV + c)] += wtl * dfl[a][c];
                        }
                    }
                }
            }
        }
        for k in 0..l4 {
            for l in 0..l4 {
                for a in 0..NV {
                    jac[(k * NV + a, l * NV + a)] -= kt_t[(k, l)];
                }
            }
        }
        // d/dqhat of Kx . Fhat(qhat): G_d = Kx_t M4^{-1} V^T W, then chain
        // through the pointwise flux jacobians.
        let q_nodes = &tables.v * &qhat;
        for d in 0..3 {
            let vt_w = scale_rows(&tables.v, &w).transpose();
            let minv_vt = m4_lu.solve(&vt_w).ok_or(Error::HoleNewtonFailed(hi))?;
            let g = &kx_t[d] * minv_vt; // L4 x nodes
            let e_d = {
                let mut e = V3::zeros();
                e[d] = 1.0;
                e
            };
            for (i, _) in nodes.iter().enumerate() {
                let q = state_at(&q_nodes, i);
                let jf = flux_jacobian_dot_n(&q, &cfg.gas, &e_d);
                for k in 0..l4 {
                    let gk = g[(k, i)];
                    if gk == 0.0 {
                        continue;
                    }
                    for l in 0..l4 {
                        let gkl = gk * tables.v[(i, l)];
                        for a in 0..NV {
                            for c in 0..NV {
                                jac[(k * NV + a, l * NV + c)] -= gkl * jf[a][c];
                            }
                        }
                    }
                }
            }
        }
        let mut rhs = DVector::<f64>::zeros(n_unknown);
        for k in 0..l4 {
            for a in 0..NV {
                rhs[k * NV + a] = -r[(k, a)];
            }
        }
        let delta = jac
            .lu()
            .solve(&rhs)
            .ok_or(Error::HoleNewtonFailed(hi))?;
        // Damped update: halve until the residual decreases.
        let base_norm = r.amax();
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=cfg.newton_max_halvings {
            let mut trial = qhat.clone();
            for k in 0..l4 {
                for a in 0..NV {
                    trial[(k, a)] += lambda * delta[k * NV + a];
                }
            }
            match residual(&trial, None) {
                Ok(rt) if rt.amax() < base_norm || rt.amax() <= tol => {
                    qhat = trial;
                    r = rt;
                    accepted = true;
                    break;
                }
                _ => lambda *= 0.5,
            }
        }
        if !accepted {
            return Err(Error::HoleNewtonFailed(hi));
        }
    }
    if r.amax() > tol {
        return Err(Error::HoleNewtonFailed(hi));
    }
    // Final evaluation fills the flux cache the neighbors reuse.
    let mut cache = Vec::new();
    let _ = residual(&qhat, Some(&mut cache))?;
    Ok(HoleSolution { qhat, newton_iters: iters, iface_flux: cache })
}
