//! Strip packing: exact small-instance solver and the building blocks of a
//! (4/3 + ε)-approximation in pseudo-polynomial time.

pub mod classify;
pub mod driver;
pub mod geom;
pub mod layout;
pub mod lpconfig;
pub mod oracle;
pub mod place;
pub mod rational;
pub mod talldp;
pub mod transform;
