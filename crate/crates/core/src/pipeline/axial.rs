//! Axial decomposition `V = e^{iδ} R_z(α) H R_z(β) H R_z(γ)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::verify::{gate_complex, is_unitary_c2, rz, C2};
use crate::circuit::Gate1Q;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZxzAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

fn mul(x: &C2, y: &C2) -> C2 {
    [x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]]
}

pub fn compose_zxz(a: &ZxzAngles) -> C2 {
    let h = gate_complex(Gate1Q::H);
    let m = mul(&mul(&mul(&mul(&rz(a.alpha), &h), &rz(a.beta)), &h), &rz(a.gamma));
    let ph = Complex64::from_polar(1.0, a.delta);
    m.map(|x| x * ph)
}

/// H·R_z(β)·H = R_x(β), so this is a z-x-z Euler decomposition.
pub fn decompose_zxz(u: &C2) -> Result<ZxzAngles, Error> {
    if !is_unitary_c2(u, 1e-12) {
        return Err(Error::NotUnitary);
    }
    let det = u[0] * u[3] - u[1] * u[2];
    let delta = det.arg() / 2.0;
    let ph = Complex64::from_polar(1.0, -delta);
    let (a, b) = (u[0] * ph, u[1] * ph);
    let beta = 2.0 * b.norm().atan2(a.norm());
    // a = e^{−i(α+γ)/2} cos(β/2), b = −i e^{−i(α−γ)/2} sin(β/2)
    let sum = if a.norm() > 1e-15 { -2.0 * a.arg() } else { 0.0 };
    let diff = if b.norm() > 1e-15 { -2.0 * b.arg() - std::f64::consts::PI } else { 0.0 };
    Ok(ZxzAngles { alpha: (sum + diff) / 2.0, beta, gamma: (sum - diff) / 2.0, delta })
}
