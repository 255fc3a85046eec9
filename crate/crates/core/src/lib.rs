//! Verification workbench for pure higher-order quantum processes written
//! as double-kets: the quantum switch, its relative-frame decompositions,
//! perspective changes between agents, and the scaffold construction.

pub mod choi;
pub mod error;
pub mod foliation;
pub mod frame_change;
pub mod linalg;
pub mod optim;
pub mod report;
pub mod sampling;
pub mod scaffold;
pub mod switch;
pub mod tensor;

pub use choi::{insert_gate, link, max_entangled, vectorize, weyl_basis, GateSpec, UnitaryBasis};
pub use error::{Error, Result};
pub use foliation::{erase_interfaces, Boundary, Foliation, FragmentNetwork};
pub use frame_change::{apply_perspective_change, build_j_a_to_b, BoundaryData, PerspectiveChange};
pub use linalg::Matrix;
pub use report::{Bound, Status, VerificationReport};
pub use scaffold::{build_scaffold, build_s_a_to_b, build_timestep_swaps, build_delocalized_gate, Side};
pub use switch::{build_switch, crf_process, tds_fragments, Agent};
pub use tensor::{LabeledTensor, PhaseComparison, SystemLabel, DEFAULT_TOL};
