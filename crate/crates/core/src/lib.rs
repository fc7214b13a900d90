//! Local solvability of quadratic twists `q y^2 = f(x)` of a monic integer
//! quartic, the counting function of square-free twists that are
//! everywhere locally solvable, and the Dirichlet series identities behind
//! its asymptotic.

pub mod arith;
pub mod counting;
pub mod criterion;
pub mod error;
pub mod localsolve;
pub mod quartic;
pub mod series;
pub mod zeta;

pub use counting::{count_l, fit_cf, CountCheckpoint, CountContext, FitReport, RootCache};
pub use criterion::{is_els_criterion, CriterionBundle, DirectRoots, RootLookup};
pub use error::{Error, Result};
pub use localsolve::{is_els_direct, is_locally_solvable, SolvabilityReport};
pub use quartic::{classify_galois, FactorizationType, GaloisType, Quartic, RootTable};
pub use series::{CoefficientStream, FrobenianRho};
pub use zeta::{verify_identity, LocalFactor, ZetaCase};
