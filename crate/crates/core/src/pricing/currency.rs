use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDate;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::PricingError;

/// ISO-4217 codes accepted for presenting results.
pub const SUPPORTED_CURRENCIES: &[&str] = &[
    "AED", "AFN", "ALL", "AMD", "ANG", "AOA", "ARS", "AUD", "AWG", "AZN", "BAM", "BBD", "BDT", "BGN", "BHD", "BIF",
    "BMD", "BND", "BOB", "BRL", "BSD", "BTN", "BWP", "BYR", "BZD", "CAD", "CDF", "CHF", "CLF", "CLP", "CNH", "CNY",
    "COP", "CRC", "CUP", "CVE", "CZK", "DJF", "DKK", "DOP", "DZD", "EGP", "ETB", "EUR", "FJD", "FKP", "GBP", "GEL",
    "GHS", "GIP", "GMD", "GNF", "GTQ", "GYD", "HKD", "HNL", "HRK", "HTG", "HUF", "IDR", "IEP", "ILS", "INR", "IQD",
    "IRR", "ISK", "JMD", "JOD", "JPY", "KES", "KGS", "KHR", "KMF", "KPW", "KRW", "KWD", "KZT", "LAK", "LBP", "LKR",
    "LRD", "LSL", "LTL", "LVL", "LYD", "MAD", "MDL", "MGA", "MKD", "MMR", "MNT", "MOP", "MRO", "MUR", "MVR", "MWK",
    "MXN", "MYR", "MZN", "NAD", "NGN", "NIO", "NOK", "NPR", "NZD", "OMR", "PAB", "PEN", "PKG", "PHP", "PKR", "PLN",
    "PYG", "QAR", "RON", "RSD", "RUB", "RWF", "SAR", "SBD", "SCR", "SDG", "SEK", "SGD", "SHP", "SLL", "SOS", "SRD",
    "STD", "SVC", "SYP", "SZL", "THB", "TJS", "TMT", "TND", "TOP", "TRY", "TTD", "TWD", "TZS", "UAH", "UGX", "USD",
    "UYU", "UZS", "VEF", "VND", "VUV", "WST", "XAF", "XCD", "XDR", "XOF", "XPF", "YER", "ZAR", "ZMK", "ZWL",
];

/// Upper-cased three-letter currency code.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurrencyCode(String);

impl CurrencyCode {
    pub fn new(code: &str) -> Self {
        CurrencyCode(code.trim().to_ascii_uppercase())
    }

    pub fn usd() -> Self {
        CurrencyCode("USD".to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CurrencyCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Units of each currency per 1 USD.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateTable {
    pub effective_date: NaiveDate,
    pub rates: BTreeMap<CurrencyCode, Decimal>,
}

impl RateTable {
    /// A table knowing only USD.
    pub fn usd_only(effective_date: NaiveDate) -> Self {
        RateTable { effective_date, rates: BTreeMap::from([(CurrencyCode::usd(), Decimal::ONE)]) }
    }

    pub fn with_rate(mut self, code: &str, rate: Decimal) -> Self {
        self.rates.insert(CurrencyCode::new(code), rate);
        self
    }

    pub fn supported(&self) -> Vec<String> {
        self.rates.keys().map(|c| c.0.clone()).collect()
    }

    pub fn contains(&self, code: &CurrencyCode) -> bool {
        self.rates.contains_key(code)
    }

    pub fn rate(&self, code: &CurrencyCode) -> Result<Decimal, PricingError> {
        self.rates
            .get(code)
            .copied()
            .ok_or_else(|| PricingError::UnknownCurrency { code: code.0.clone(), supported: self.supported() })
    }

    pub fn check(&self) -> Result<(), PricingError> {
        if self.rates.get(&CurrencyCode::usd()) != Some(&Decimal::ONE) {
            return Err(PricingError::InvalidRates("rates must contain USD = 1".into()));
        }
        for (code, rate) in &self.rates {
            if !SUPPORTED_CURRENCIES.contains(&code.as_str()) {
                return Err(PricingError::InvalidRates(format!("unsupported currency code `{code}`")));
            }
            if *rate <= Decimal::ZERO {
                return Err(PricingError::InvalidRates(format!("rate for {code} must be > 0")));
            }
        }
        Ok(())
    }
}

/// Parses and checks a rates file: `{"effective_date": "YYYY-MM-DD", "rates": {"USD": 1, ...}}`.
pub fn load_rates(text: &str) -> Result<RateTable, PricingError> {
    let table: RateTable = serde_json::from_str(text).map_err(|e| PricingError::InvalidRates(e.to_string()))?;
    table.check()?;
    Ok(table)
}

/// Converts a USD amount into `target`.
pub fn convert_currency(amount: Decimal, target: &CurrencyCode, rates: &RateTable) -> Result<Decimal, PricingError> {
    Ok(amount * rates.rate(target)?)
}
