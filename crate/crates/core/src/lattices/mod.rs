pub mod hom;
pub mod lattice;
pub mod tate;
pub mod tower;

pub use hom::*;
pub use lattice::*;
pub use tate::*;
pub use tower::*;
