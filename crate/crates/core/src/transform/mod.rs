//! Structural transformation of a packing into few boxes.

pub mod bars;
pub mod columns;
pub mod partition;
pub mod containers;
pub mod reorder;
pub mod snap;
pub mod structure;
pub mod subbox;

pub use bars::{Arrangement, Bar, BarKind, Part};
pub use containers::{alpha_bound, build_containers, container_fit, FitError};
pub use reorder::{reorder_box, ReorderError, ReorderOutcome};
pub use columns::{normalize_tall, ColumnBox, ColumnError};
pub use partition::{check_partition, free_boxes, partition_boxes, Partition, PartitionCheck, PartitionError};
pub use snap::{snap_box_heights, snap_to_eps, SnapError, SnapReport};
pub use structure::{build_structure, Structure, StructureCertificate, StructureError};
pub use subbox::{plan_high_box, rearrange_short_box, BoxPlan, BoxStats, SubboxError};
