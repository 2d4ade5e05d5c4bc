//! Modularity-based graph partitioning through QUBO reformulation and a
//! simulated quantum-Hamiltonian-descent solver.
//!
//! The crate is organized around the pipeline:
//!
//! 1. [`graph`] — weighted undirected graphs, edge-list ingestion, and
//!    modularity scoring with incremental gains.
//! 2. [`qubo`] — the penalty-method QUBO encoding of k-way modularity
//!    maximization (one-hot assignment and balance constraints), plus
//!    sparse text / JSON interchange.
//! 3. [`qhd`] — Schrödinger evolution under a kinetic-to-potential damping
//!    schedule, with an exact full-state backend for small problems and a
//!    mean-field product-state backend for large ones, followed by
//!    measurement sampling and greedy rounding.
//! 4. [`multilevel`] — heavy-edge-matching coarsening, base solve, and
//!    projection/refinement back to the input graph.
//! 5. [`oracle`] — exhaustive and simulated-annealing baselines used for
//!    validation and comparison.

pub mod error;
pub mod graph;
pub mod multilevel;
pub mod oracle;
pub mod qhd;
pub mod qubo;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{load_edge_list, modularity, modularity_gain, Graph, Partition};
pub use multilevel::{partition_graph, PipelineConfig, PipelineReport};
pub use qhd::{solve_qubo, Backend, QhdSchedule, SolverParams};
pub use qubo::{build_qubo, decode_assignment, PenaltyWeights, QuboProblem, Repair};
