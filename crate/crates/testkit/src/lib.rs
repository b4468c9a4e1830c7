//! Test support: seeded random catalogs and requests, brute-force oracles
//! written independently of the engine, and fixture loading.

pub mod fixtures;
pub mod gen;
pub mod oracle;

use std::str::FromStr;

pub use skyselect_core::Decimal;

/// Parses a decimal literal, panicking on malformed input.
pub fn d(text: &str) -> Decimal {
    Decimal::from_str(text).unwrap_or_else(|e| panic!("bad decimal `{text}`: {e}"))
}

/// Decimal literal from source text: `dec!(0.15)`.
#[macro_export]
macro_rules! dec {
    ($x:expr) => {
        $crate::d(&stringify!($x).replace(' ', ""))
    };
}
