//! Exact rational arithmetic, linear algebra, linear programming and the
//! geometric predicates built on them.

pub mod config;
pub mod linalg;
pub mod lp;
pub mod predicates;
pub mod rat;

pub use config::PointConfig;
pub use linalg::{dot, rank, RatMat, RatVec};
pub use lp::{lp_feasible, Constraint, LinearSystem, LpOutcome, LpWitness, Relation, VarKind, WitnessKind};
pub use predicates::{
    cones_meet_nontrivially, covers_sphere, in_conv, in_interior, in_relint, lineality_space, open_hemis_intersect,
    verify_zero_combination, Coefficients, Lineality,
};
pub use rat::Rat;
