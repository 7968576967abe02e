//! Numerical laboratory for the second-order energy of the dilute
//! hard-sphere Bose gas: correlation kernels of a variational trial state,
//! its energy density, numerical checks of the estimates it relies on, and
//! its operators on truncated Fock spaces.

// Range checks are written as `!(x > 0.0)` on purpose so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod energy;
pub mod estimates;
pub mod fock;
pub mod kernels;
pub mod lattice;
pub mod report;
