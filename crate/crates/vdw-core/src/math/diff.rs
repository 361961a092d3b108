//! Central finite differences.

use crate::error::{Error, Result};
use crate::math::Vector3;

/// Second-order central-difference gradient of a scalar field at `at`.
///
/// The field is evaluated at the six stencil points `at ± h·ê_i`; a
/// non-finite value fails naming the offending point.
pub fn gradient_central(
    mut f: impl FnMut(Vector3) -> Result<f64>,
    at: Vector3,
    h: f64,
) -> Result<Vector3> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidStep { h });
    }
    let axes = [
        Vector3::new(h, 0.0, 0.0),
        Vector3::new(0.0, h, 0.0),
        Vector3::new(0.0, 0.0, h),
    ];
    let mut out = [0.0; 3];
    for (i, step) in axes.iter().enumerate() {
        let plus = eval(&mut f, at + *step)?;
        let minus = eval(&mut f, at - *step)?;
        out[i] = (plus - minus) / (2.0 * h);
    }
    Ok(Vector3::from(out))
}

fn eval(f: &mut impl FnMut(Vector3) -> Result<f64>, point: Vector3) -> Result<f64> {
    let value = f(point)?;
    if !value.is_finite() {
        return Err(Error::NonFiniteStencil { point });
    }
    Ok(value)
}
