//! Element-local space-time predictor: the Picard iteration for the weak
//! Cauchy problem on every classical control volume, plus the pieces of the
//! corrector that only depend on the cell's own data (moving-test volume
//! term and the two mass matrices).

use super::assembly::{cap_nodes, theta_tables, volume_nodes, weighted_gram, VolNode};
use super::SolverConfig;
use crate::basis::{eval_phi, eval_psi, BasisSpec};
use crate::euler::{flux, pressure_unchecked, State as ConsState, NV};
use crate::spacetime::volumes::CellVolume;
use crate::{Error, Result};
use nalgebra::DMatrix;

pub struct CellSolution {
    /// Space-time modal coefficients (L4 x 5).
    pub qhat: DMatrix<f64>,
    pub picard_iters: usize,
    /// M0_psi_phi u + volume term of the corrector (L3 x 5).
    pub rhs_partial: DMatrix<f64>,
    /// New-level mass matrix of the moving-test update (L3 x L3).
    pub m1: DMatrix<f64>,
    /// 4D measure, reused as weight for hole initial guesses.
    pub st_measure: f64,
}

pub(crate) fn state_at(
    q_nodes: &DMatrix<f64>,
    i: usize,
) -> ConsState {
    [
        q_nodes[(i, 0)],
        q_nodes[(i, 1)],
        q_nodes[(i, 2)],
        q_nodes[(i, 3)],
        q_nodes[(i, 4)],
    ]
}

/// Flux tables f_d at every node, with state validity checks.
pub(crate) fn flux_tables(
    q_nodes: &DMatrix<f64>,
    gas: &crate::euler::GasModel,
    cell: usize,
) -> Result<[DMatrix<f64>; 3]> {
    let n = q_nodes.nrows();
    let mut out = [
        DMatrix::<f64>::zeros(n, NV),
        DMatrix::<f64>::zeros(n, NV),
        DMatrix::<f64>::zeros(n, NV),
    ];
    for i in 0..n {
        let q = state_at(q_nodes, i);
        if !(q[0] > 0.0) || !(pressure_unchecked(&q, gas) > 0.0) {
            return Err(Error::InvalidState {
                cell,
                reason: format!("non-physical state at quadrature node: rho={}", q[0]),
            });
        }
        let f = flux(&q, gas);
        for d in 0..3 {
            for v in 0..NV {
                out[d][(i, v)] = f[d][v];
            }
        }
    }
    Ok(out)
}

pub(crate) fn scale_rows(m: &DMatrix<f64>, w: &[f64]) -> DMatrix<f64> {
    let mut out = m.clone();
    for i in 0..out.nrows() {
        for k in 0..out.ncols() {
            out[(i, k)] *= w[i];
        }
    }
    out
}

/// Solve the predictor on one control volume and assemble the cell-local
/// corrector pieces from the converged space-time polynomial.
pub fn predict_cell(
    cv: &CellVolume,
    u: &DMatrix<f64>,
    dt: f64,
    cfg: &SolverConfig,
) -> Result<CellSolution> {
    let n_deg = cfg.degree;
    let spec4 = BasisSpec::new(n_deg, 4);
    let spec3 = BasisSpec::new(n_deg, 3);
    let l4 = spec4.len();
    let l3 = spec3.len();
    let frame = cv.frame;
    let nodes: Vec<VolNode> = volume_nodes(&cv.subtets, dt, n_deg, frame.h0)?;
    let w: Vec<f64> = nodes.iter().map(|n| n.w).collect();
    let tables = theta_tables(&spec4.indices, n_deg, &frame.c0, frame.h0, dt, &nodes);
    let st_measure: f64 = w.iter().sum();
    let m4 = weighted_gram(&tables.v, &w, &tables.v);
    let kt = weighted_gram(&tables.v, &w, &tables.dt);
    let kx: Vec<DMatrix<f64>> = (0..3)
        .map(|d| weighted_gram(&tables.v, &w, &tables.dx[d]))
        .collect();
    // Initial-level mass on the cap.
    let cap0 = cap_nodes(&cv.subtets, 0.0, n_deg)?;
    let mut theta0 = DMatrix::<f64>::zeros(cap0.len(), l4);
    let w0: Vec<f64> = cap0.iter().map(|(_, w)| *w).collect();
    {
        let mut vals = vec![0.0; l4];
        for (i, (x, _)) in cap0.iter().enumerate() {
            crate::basis::eval_theta(
                &spec4.indices, n_deg, &frame.c0, frame.h0, dt, x, 0.0, &mut vals, None, None,
            );
            for k in 0..l4 {
                theta0[(i, k)] = vals[k];
            }
        }
    }
    let m0 = weighted_gram(&theta0, &w0, &theta0);
    let lhs = (&kt + &m0)
        .lu();
    let m4_lu = m4.lu();
    // The t_n projection of u: theta at t_n restricted to l4 = 0 equals phi,
    // so the first L3 columns of m0 carry the projection.
    let mut rhs0 = DMatrix::<f64>::zeros(l4, NV);
    for k in 0..l4 {
        for l in 0..l3 {
            for v in 0..NV {
                rhs0[(k, v)] += m0[(k, l)] * u[(l, v)];
            }
        }
    }
    // Picard iteration from (u, 0, ..., 0).
    let mut qhat = DMatrix::<f64>::zeros(l4, NV);
    for l in 0..l3 {
        for v in 0..NV {
            qhat[(l, v)] = u[(l, v)];
        }
    }
    let u_scale = u.amax();
    let tol = cfg.picard_tol * (1.0 + u_scale);
    let max_iters = 2 * (n_deg + 1);
    let mut iters = 0;
    for _ in 0..max_iters {
        iters += 1;
        let q_nodes = &tables.v * &qhat;
        let f = flux_tables(&q_nodes, &cfg.gas, cv.cell)?;
        let mut rhs = rhs0.clone();
        for d in 0..3 {
            let proj = m4_lu
                .solve(&(tables.v.transpose() * scale_rows(&f[d], &w)))
                .ok_or(Error::SingularMass(cv.cell))?;
            rhs -= &kx[d] * proj;
        }
        let next = lhs.solve(&rhs).ok_or(Error::SingularMass(cv.cell))?;
        let res = (&next - &qhat).amax();
        qhat = next;
        if !res.is_finite() {
            return Err(Error::PredictorDiverged(cv.cell));
        }
        if res <= tol {
            break;
        }
    }
    // Corrector pieces: volume term with the moving test functions and the
    // two mass matrices.
    let q_nodes = &tables.v * &qhat;
    let f = flux_tables(&q_nodes, &cfg.gas, cv.cell)?;
    let mut vol = DMatrix::<f64>::zeros(l3, NV);
    {
        let mut vals = vec![0.0; l3];
        let mut grad = vec![[0.0; 3]; l3];
        let mut dts = vec![0.0; l3];
        for (i, node) in nodes.iter().enumerate() {
            eval_psi(
                &spec3.indices,
                n_deg,
                &frame.c0,
                &frame.c1,
                frame.h0,
                dt,
                &node.x,
                node.tau,
                &mut vals,
                Some(&mut grad),
                Some(&mut dts),
            );
            for k in 0..l3 {
                for v in 0..NV {
                    let mut term = dts[k] * q_nodes[(i, v)];
                    for d in 0..3 {
                        term += grad[k][d] * f[d][(i, v)];
                    }
                    vol[(k, v)] += node.w * term;
                }
            }
        }
    }
    // M0_psi_phi = phi0 x phi0 mass: the l4=0 block of m0.
    let mut rhs_partial = vol;
    for k in 0..l3 {
        for l in 0..l3 {
            for v in 0..NV {
                rhs_partial[(k, v)] += m0[(k, l)] * u[(l, v)];
            }
        }
    }
    // M1: psi at tau=1 (centered c1, scale h0) against the new spatial basis.
    let cap1 = cap_nodes(&cv.subtets, 1.0, n_deg)?;
    let mut psi1 = DMatrix::<f64>::zeros(cap1.len(), l3);
    let mut phi1 = DMatrix::<f64>::zeros(cap1.len(), l3);
    let w1: Vec<f64> = cap1.iter().map(|(_, w)| *w).collect();
    {
        let mut vals = vec![0.0; l3];
        for (i, (x, _)) in cap1.iter().enumerate() {
            eval_phi(&spec3.indices, n_deg, &frame.c1, frame.h0, x, &mut vals, None);
            for k in 0..l3 {
                psi1[(i, k)] = vals[k];
            }
            eval_phi(&spec3.indices, n_deg, &frame.c1, frame.h1, x, &mut vals, None);
            for k in 0..l3 {
                phi1[(i, k)] = vals[k];
            }
        }
    }
    let m1 = weighted_gram(&psi1, &w1, &phi1);
    Ok(CellSolution { qhat, picard_iters: iters, rhs_partial, m1, st_measure })
}
