pub mod cli;
pub mod combinatorics;
pub mod dof;
pub mod duality;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod spaces;
pub mod simplicial;
