//! Exact computational algebra for towers of finite l-groups: character
//! tables with cyclotomic-integer values, affine representations into
//! `Sigma_n ⋉ (Z/l^k)^n`, representation-ring ideal arithmetic over `F_l`,
//! truncated root rings, and the coordinate-subspace orbit combinatorics
//! that ties them together. Everything is exact; no floating point anywhere.

pub mod bar;
pub mod chars;
pub mod cyc;
pub mod error;
pub mod filtration;
pub mod fp;
pub mod group;
pub mod perm;
pub mod repring;
pub mod rootring;
pub mod suites;
pub mod tower;

pub use error::{Error, Result};
