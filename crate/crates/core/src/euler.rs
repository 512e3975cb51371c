//! Compressible Euler equations: conserved state, ideal-gas EOS, physical
//! flux, signal speeds, and the Rusanov-type ALE numerical flux on 4D
//! space-time normals, together with the analytic derivatives required by
//! the locally implicit hole solve.

use crate::geometry::V3;
use crate::{Error, Result};

pub const NV: usize = 5;

/// Conserved variables (rho, rho u, rho v, rho w, rho E).
pub type State = [f64; NV];

#[derive(Debug, Clone, Copy)]
pub struct GasModel {
    pub gamma: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

pub fn velocity(q: &State) -> V3 {
    V3::new(q[1] / q[0], q[2] / q[0], q[3] / q[0])
}

pub fn pressure(q: &State, gas: &GasModel) -> Result<f64> {
    let kinetic = 0.5 * (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]) / q[0];
    let p = (gas.gamma - 1.0) * (q[4] - kinetic);
    if !(q[0] > 0.0) || !(p > 0.0) || !p.is_finite() {
        return Err(Error::InvalidState {
            cell: usize::MAX,
            reason: format!("rho = {}, p = {p}", q[0]),
        });
    }
    Ok(p)
}

/// Pressure without validity checks, for use inside tight loops where the
/// state has already been validated.
pub fn pressure_unchecked(q: &State, gas: &GasModel) -> f64 {
    let kinetic = 0.5 * (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]) / q[0];
    (gas.gamma - 1.0) * (q[4] - kinetic)
}

pub fn sound_speed(q: &State, gas: &GasModel) -> Result<f64> {
    let p = pressure(q, gas)?;
    Ok((gas.gamma * p / q[0]).sqrt())
}

/// Physical flux: columns are the x, y, z directional fluxes.
pub fn flux(q: &State, gas: &GasModel) -> [[f64; NV]; 3] {
    let p = pressure_unchecked(q, gas);
    let u = velocity(q);
    let mut f = [[0.0; NV]; 3];
    for d in 0..3 {
        f[d][0] = q[1 + d];
        for m in 0..3 {
            f[d][1 + m] = q[1 + m] * u[d];
        }
        f[d][1 + d] += p;
        f[d][4] = u[d] * (q[4] + p);
    }
    f
}

/// Directional flux contracted with a spatial vector n (not necessarily unit).
pub fn flux_dot_n(q: &State, gas: &GasModel, n: &V3) -> State {
    let p = pressure_unchecked(q, gas);
    let u = velocity(q);
    let un = u.dot(n);
    [
        q[0] * un,
        q[1] * un + p * n[0],
        q[2] * un + p * n[1],
        q[3] * un + p * n[2],
        (q[4] + p) * un,
    ]
}

/// Largest Euler signal speed along a unit direction: |u . n| + c.
pub fn max_signal(q: &State, gas: &GasModel, n: &V3) -> Result<f64> {
    let c = sound_speed(q, gas)?;
    Ok(velocity(q).dot(n).abs() + c)
}

/// Spectral radius bound over all unit directions: |u| + c.
pub fn max_signal_any_direction(q: &State, gas: &GasModel) -> Result<f64> {
    let c = sound_speed(q, gas)?;
    let s = velocity(q).norm() + c;
    if s.is_finite() {
        Ok(s)
    } else {
        Err(Error::NonFiniteSignal)
    }
}

/// Signal speed entering the ALE Rusanov dissipation for a space-time normal
/// (n_x, n_t): the spectral radius of dF/dQ . n_x - (v . n_x) I with grid
/// velocity v = -n_t / |n_x| along the unit spatial normal, which evaluates
/// to |u . n_x + n_t| + c |n_x|.
pub fn ale_signal(q: &State, gas: &GasModel, nx: &V3, nt: f64) -> f64 {
    let c = (gas.gamma * pressure_unchecked(q, gas) / q[0]).sqrt();
    (velocity(q).dot(nx) + nt).abs() + c * nx.norm()
}

/// How the dissipation coefficient s_max is evaluated: the exact maximum of
/// the two signal speeds, or a smooth surrogate used inside the hole Newton
/// solve so that the residual stays differentiable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxMode {
    Exact,
    /// Soft maximum (a e^{s a} + b e^{s b}) / (e^{s a} + e^{s b}) with the
    /// given sharpness.
    Soft(f64),
}

pub fn soft_max(a: f64, b: f64, sharp: f64) -> f64 {
    let m = a.max(b);
    let ea = (sharp * (a - m)).exp();
    let eb = (sharp * (b - m)).exp();
    (a * ea + b * eb) / (ea + eb)
}

fn combine_max(a: f64, b: f64, mode: MaxMode) -> f64 {
    match mode {
        MaxMode::Exact => a.max(b),
        MaxMode::Soft(sharp) => soft_max(a, b, sharp),
    }
}

/// Rusanov-type ALE flux on a unit 4D space-time normal n = (n_x, n_t):
/// 1/2 (F(qL) + F(qR)) . n_x + 1/2 (qL + qR) n_t - 1/2 s_max (qR - qL).
pub fn rusanov_ale(
    ql: &State,
    qr: &State,
    nx: &V3,
    nt: f64,
    gas: &GasModel,
    mode: MaxMode,
) -> State {
    debug_assert!(nx.norm() > 0.0, "pure-time normals never occur on lateral surfaces");
    let fl = flux_dot_n(ql, gas, nx);
    let fr = flux_dot_n(qr, gas, nx);
    let s = combine_max(ale_signal(ql, gas, nx, nt), ale_signal(qr, gas, nx, nt), mode);
    let mut out = [0.0; NV];
    for k in 0..NV {
        out[k] = 0.5 * (fl[k] + fr[k]) + 0.5 * (ql[k] + qr[k]) * nt - 0.5 * s * (qr[k] - ql[k]);
    }
    out
}

/// Jacobian of the directional flux F(q) . n with respect to q (n spatial,
/// not necessarily unit). Standard ideal-gas Euler Jacobian.
pub fn flux_jacobian_dot_n(q: &State, gas: &GasModel, n: &V3) -> [[f64; NV]; NV] {
    let g = gas.gamma;
    let u = velocity(q);
    let vn = u.dot(n);
    let p = pressure_unchecked(q, gas);
    let h_tot = (q[4] + p) / q[0];
    let phi2 = 0.5 * (g - 1.0) * u.norm_squared();
    let mut a = [[0.0; NV]; NV];
    a[0][1] = n[0];
    a[0][2] = n[1];
    a[0][3] = n[2];
    for j in 0..3 {
        a[1 + j][0] = phi2 * n[j] - u[j] * vn;
        for k in 0..3 {
            a[1 + j][1 + k] = u[j] * n[k] - (g - 1.0) * u[k] * n[j];
        }
        a[1 + j][1 + j] += vn;
        a[1 + j][4] = (g - 1.0) * n[j];
    }
    a[4][0] = (phi2 - h_tot) * vn;
    for k in 0..3 {
        a[4][1 + k] = h_tot * n[k] - (g - 1.0) * u[k] * vn;
    }
    a[4][4] = g * vn;
    a
}

/// Gradient of the ALE signal speed |u . n_x + n_t| + c |n_x| with respect
/// to the conserved state.
pub fn ale_signal_gradient(q: &State, gas: &GasModel, nx: &V3, nt: f64) -> State {
    let g = gas.gamma;
    let rho = q[0];
    let u = velocity(q);
    let p = pressure_unchecked(q, gas);
    let c = (g * p / rho).sqrt();
    let nn = nx.norm();
    let sgn = if u.dot(nx) + nt >= 0.0 { 1.0 } else { -1.0 };
    // d(u.n)/dq
    let mut grad = [0.0; NV];
    grad[0] = -u.dot(nx) / rho * sgn;
    for k in 0..3 {
        grad[1 + k] = nx[k] / rho * sgn;
    }
    // dc/dq = g/(2c) d(p/rho)/dq
    let dp = [
        0.5 * (g - 1.0) * u.norm_squared(),
        -(g - 1.0) * u[0],
        -(g - 1.0) * u[1],
        -(g - 1.0) * u[2],
        g - 1.0,
    ];
    for k in 0..NV {
        let dpr = dp[k] / rho - if k == 0 { p / (rho * rho) } else { 0.0 };
        grad[k] += nn * g / (2.0 * c) * dpr;
    }
    grad
}

/// Partial derivatives of the soft maximum with respect to both arguments.
pub fn soft_max_gradient(a: f64, b: f64, sharp: f64) -> (f64, f64) {
    let m = a.max(b);
    let ea = (sharp * (a - m)).exp();
    let eb = (sharp * (b - m)).exp();
    let z = ea + eb;
    let s = (a * ea + b * eb) / z;
    let wa = ea / z;
    let wb = eb / z;
    (wa * (1.0 + sharp * (a - s)), wb * (1.0 + sharp * (b - s)))
}

/// Derivative of the Rusanov ALE flux with respect to its left state, the
/// only derivative the hole Newton solve needs. `mode` must match the
/// residual evaluation.
pub fn rusanov_dql(
    ql: &State,
    qr: &State,
    nx: &V3,
    nt: f64,
    gas: &GasModel,
    mode: MaxMode,
) -> [[f64; NV]; NV] {
    let mut jac = flux_jacobian_dot_n(ql, gas, nx);
    for r in 0..NV {
        for c in 0..NV {
            jac[r][c] *= 0.5;
        }
        jac[r][r] += 0.5 * nt;
    }
    let sl = ale_signal(ql, gas, nx, nt);
    let sr = ale_signal(qr, gas, nx, nt);
    let (s, ds_dsl) = match mode {
        MaxMode::Exact => (sl.max(sr), if sl >= sr { 1.0 } else { 0.0 }),
        MaxMode::Soft(sharp) => (soft_max(sl, sr, sharp), soft_max_gradient(sl, sr, sharp).0),
    };
    let dsl = ale_signal_gradient(ql, gas, nx, nt);
    for r in 0..NV {
        jac[r][r] += 0.5 * s;
        for c in 0..NV {
            jac[r][c] -= 0.5 * (qr[r] - ql[r]) * ds_dsl * dsl[c];
        }
    }
    jac
}
