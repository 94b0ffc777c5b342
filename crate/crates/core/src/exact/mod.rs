//! Exact arithmetic over the rationals.

pub mod interval;
pub mod linalg;
pub mod poly;
pub mod rat;
pub mod ratfunc;
pub mod sturm;

pub use interval::Interval;
pub use poly::Poly;
pub use rat::Rat;
pub use ratfunc::RatFunc;
pub use sturm::sturm_count;
