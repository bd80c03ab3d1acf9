//! Exact symbolic computations for the discrete series of `SO_e(4,1)`.

pub mod clifford;
pub mod cohomology;
pub mod combo;
pub mod discrete;
pub mod induction;
pub mod kmod;
pub mod lie;
pub mod linalg;
pub mod pbw;
pub mod report;
pub mod suites;
