pub mod connection;
pub mod delta;
pub mod kapranov;
pub mod sections;

pub use connection::{build_connection, dbar, ddbar, del, holo_tilde_series, Alpha, Connection, ConnectionData};
pub use delta::{delta, delta_anti, delta_anti_inv, delta_family, delta_holo, delta_holo_inv, delta_inv, delta_star, DeltaOp};
pub use kapranov::KapranovTensors;
pub use sections::{classical_flat_section, mixed_part, phi_sections, quantum_flat_section, star_product, PhiSections};
