pub mod adjunction;
pub mod bimodule;
pub mod functor;
pub mod hochschild;
pub mod transfer;

pub use adjunction::*;
pub use bimodule::*;
pub use functor::*;
pub use hochschild::*;
pub use transfer::*;
