pub mod circuit;
pub mod complexity;
pub mod loader;
pub mod pareto;
pub mod plot;
pub mod registry;
pub mod report;
pub mod scaling;

pub use circuit::{Circuit, Gate, Statevector};
pub use complexity::{Bindings, ComplexityExpr};
pub use loader::{load_dense, load_sparse, BitPattern, DenseState, SparseBuilder, SparsePointSet};
pub use pareto::{ConstraintSet, ObjectivePoint, WeightVector};
pub use plot::render_scatter_svg;
pub use registry::{builtin_registry, AlgorithmRecord, Representation};
pub use report::{build_report, parse_compare_csv, ComparisonReport};
