//! Availability modelling of IP and SDN backbone elements with stochastic
//! activity networks.
//!
//! * [`san`]: the SAN formalism (places, exponential activities, cases, gates).
//! * [`ctmc`]: state-space exploration and exact steady-state solution.
//! * [`sim`]: Monte Carlo estimation of time-averaged unavailability.
//! * [`catalog`]: the element and minimal-cut-set models with their studies.
//! * [`structural`]: minimal-cut-set enumeration on the backbone topology.

pub mod catalog;
pub mod ctmc;
pub mod san;
pub mod sim;
pub mod structural;
