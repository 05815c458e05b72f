//! Symplectic Schubert calculus on `Sp(2n)/B` and its arithmetic refinement.

mod memo;

pub mod arakelov;
pub mod invforms;
pub mod linalg;
pub mod polyring;
pub mod qbasis;
pub mod symplectic;
pub mod weyl;
