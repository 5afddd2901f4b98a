//! Text formats: native problems, solutions, SDPA input, graphs and
//! certificates.

mod certificate_file;
mod graph;
mod problem_file;
mod sdpa;
mod solution;
pub mod text;

pub use certificate_file::{parse_certificate, write_certificate};
pub use graph::{parse_graph, write_graph};
pub use problem_file::{parse_problem, write_problem};
pub use sdpa::parse_sdpa;
pub use solution::{parse_solution, write_solution, SolutionFile};
