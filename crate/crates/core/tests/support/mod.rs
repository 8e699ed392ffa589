//! Shared oracle machinery for the integration-test suite. Everything here is
//! deliberately independent of the library's computational paths: reference
//! ODE integration, finite-difference collocation, quadrature Poisson solves,
//! and seeded input generation.
#![allow(dead_code)]

pub mod colloc;
pub mod ode;
pub mod poisson_fd;
pub mod rng;
