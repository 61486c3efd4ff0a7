//! Time evolution, stationary states and the repeated-interaction oracle.

mod collision;
mod evolve;
mod steady;

pub use collision::{collision_step, collision_trajectory, convergence_order, CollisionMap, ConvergenceReport};
pub use evolve::{evolve_final, evolve_many, evolve_me, Integrator, InvariantStats, Trajectory, TRACE_ABORT};
pub use steady::{bell_steady_state_map, steady_states, BellPhase, SteadyStateResult, KERNEL_TOL};
