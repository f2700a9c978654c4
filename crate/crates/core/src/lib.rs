//! Word metrics, hyperbolic-structure posets and confining subsets for
//! lamplighter-type wreath products `G wr Z` with `G` finite abelian.

pub mod config;
pub mod confining;
pub mod element;
pub mod error;
pub mod group;
pub mod metrics;
pub mod poly;
pub mod structures;

pub use config::LampConfig;
pub use element::Element;
pub use error::{Error, Result};
pub use group::{subgroup_closure, Coeff, GroupDesc, SubgroupDesc};
pub use metrics::{GenSet, Side, WalkPlan, WordMetric};
