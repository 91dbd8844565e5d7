pub mod asymptotics;
pub mod bijection;
pub mod brute;
pub mod cli;
pub mod error;
pub mod kernel;
pub mod limits;
pub mod model;
pub mod reproduce;
pub mod roots;
pub mod sampler;
pub mod series;

pub use error::{Error, Result};
pub use model::{CatastrophePolicy, JumpSet, ParamVector, Path, Step};
