//! Fixed-size 3D algebra and the quadrature / finite-difference engines the
//! physics modules consume.

mod diff;
mod quadrature;
mod tensor;

pub use diff::gradient_central;
pub(crate) use quadrature::single_pass_semi_infinite;
pub use quadrature::{
    integrate_periodic, integrate_semi_infinite, AxisRule, Estimate, QuadValue, QuadratureSpec,
};
pub use tensor::{CTensor3, CVector3, Tensor3, Vector3};
