pub mod aircraft;
pub mod airspace;
pub mod batch;
pub mod engine;
pub mod network;
pub mod observation;
pub mod protocols;
pub mod rng;
pub mod scenario;

#[cfg(test)]
pub(crate) mod testkit;
