//! Exact numerics for the wall-and-chamber structure on the Bridgeland
//! moduli spaces attached to `Bl_X P^g`, where `X ⊂ P^g` is a K3 surface of
//! genus `g` with Picard group `Z·h`.

pub mod cones;
pub mod duality;
pub mod error;
pub mod exact;
pub mod flips;
pub mod lattice;
pub mod report;
pub mod rr;
pub mod sod;
pub mod sweep;
pub mod verify;
pub mod walls;

pub use error::{Error, Result};
pub use lattice::{GenusContext, MukaiVector, Parity};
pub use walls::{build_wall_system, WallPair, WallSystem};
