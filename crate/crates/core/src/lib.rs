//! Extended visual cryptography.
//!
//! Builds `(k, n)` schemes whose shares carry meaningful cover images:
//! binary, gray-level, palette colour and multi-secret variants. Encodes
//! images into shares, stacks them back, and audits schemes for contrast and
//! security.
//!
//! The crate is `no_std` (it needs `alloc`); file formats and the command
//! line live in the `evcs` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod basis;
pub mod build;
pub mod codec;
pub mod combin;
pub mod error;
pub mod extension;
pub mod matrix;
pub mod mevcs;
pub mod scheme;
pub mod verify;

pub use basis::{builtin, color_basis, gray_ladder, naor_shamir_kk, BasisSet, GrayLadder, SymbolKind};
pub use build::{build_binary_evcs, build_color_evcs, build_gray_evcs, default_binary_base};
pub use codec::{encode, measure, plan_tile, stack, CellImage, IndexedImage, ShareImage, TileShape};
pub use error::{Error, Result};
pub use extension::{build_extension, replicate_gray, ColorModel, StarCollection};
pub use matrix::{concat, permute_columns, stack_or, weight, Cell, StackedRow, SymbolMatrix, WeightReport};
pub use mevcs::{build_mevcs, enumerate_qualified, ChannelScheme, QualifiedSet};
pub use scheme::{Block, Mode, Ratio, Reveal, Scheme};
pub use verify::{audit, AuditOptions, AuditReport};
