use rust_decimal::{Decimal, RoundingStrategy};
use serde::{Deserialize, Serialize};

use super::CatalogError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MemoryUnit {
    #[serde(rename = "MB")]
    Mb,
    #[serde(rename = "GB")]
    Gb,
}

const MB_PER_GB: Decimal = Decimal::from_parts(1024, 0, 0, false, 0);

/// Converts a memory quantity to GB (1 GB = 1024 MB), rounded to 3 decimal places.
///
/// GB inputs pass through untouched.
pub fn normalize_memory(value: Decimal, unit: MemoryUnit) -> Result<Decimal, CatalogError> {
    if value.is_sign_negative() && !value.is_zero() {
        return Err(CatalogError::NegativeQuantity { field: "memory", value });
    }
    Ok(match unit {
        MemoryUnit::Gb => value,
        MemoryUnit::Mb => {
            (value / MB_PER_GB).round_dp_with_strategy(3, RoundingStrategy::MidpointAwayFromZero).normalize()
        }
    })
}
