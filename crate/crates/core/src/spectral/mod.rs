//! Eigenpolynomials, Wronskian families, Frobenius series and
//! semi-simplicity.

mod eigen;
pub mod frobenius;
pub mod monodromy;
mod semisimple;
mod wronskian;

pub use eigen::{eigenpairs, EigenPair, ExceptionalSystem};
pub use frobenius::{frobenius_solutions, FrobeniusReport, FrobeniusSolution};
pub use monodromy::{trivial_monodromy_certificate, MonodromyEntry, MonodromyReport, NumericConfig};
pub use semisimple::{semisimplicity_check, Defect, SemisimplicityVerdict};
pub use wronskian::{wronskian_family, wronskian_poly, WronskianFamily};
