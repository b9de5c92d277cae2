pub mod error;
pub mod folner;
pub mod generate;
pub mod graph;
pub mod io;
pub mod measure;
pub mod multipack;
pub mod packing;
pub mod quasitile;
pub mod randseq;
pub mod rational;
pub mod rng;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{Coloring, Diameter, Graph, Vertex, VertexSet};
pub use measure::Measure;
pub use multipack::Multipacking;
pub use packing::Packing;
pub use rational::Rational;
pub use witness::{WitnessFamily, WitnessReport};
