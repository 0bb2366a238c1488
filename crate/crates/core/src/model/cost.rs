//! Exact cost accounting.
//!
//! Prices are quoted per 1000 tokens with up to six fractional digits of
//! currency (micro-units). A cost of `tokens / 1000 × price-per-1k` is then
//! an exact integer count of nano-units (`tokens × price-in-micro`), so all
//! arithmetic here is integral: costs add without rounding and summing
//! per-call costs equals costing the summed usage.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ModelSpec, Usage};

/// Price per 1000 tokens, stored as integer micro-units of currency.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct PricePer1k {
    micro: i64,
}

impl PricePer1k {
    pub fn zero() -> Self {
        PricePer1k { micro: 0 }
    }

    /// From a decimal currency amount, e.g. `0.5` for $0.50 per 1k tokens.
    /// Rounds to the nearest micro-unit; amounts with at most six
    /// fractional digits convert exactly.
    pub fn from_currency(amount: f64) -> crate::Result<Self> {
        if !amount.is_finite() || amount < 0.0 {
            return Err(crate::Error::Validation(format!(
                "price must be a finite non-negative number, got {amount}"
            )));
        }
        Ok(PricePer1k {
            micro: (amount * 1_000_000.0).round() as i64,
        })
    }

    pub fn as_currency(&self) -> f64 {
        self.micro as f64 / 1_000_000.0
    }
}

impl Serialize for PricePer1k {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_currency())
    }
}

impl<'de> Deserialize<'de> for PricePer1k {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let amount = f64::deserialize(deserializer)?;
        PricePer1k::from_currency(amount).map_err(serde::de::Error::custom)
    }
}

/// An exact currency amount in nano-units (10^-9 currency).
///
/// Nano-units are the natural grain for `tokens × micro-price / 1000`:
/// every cost the crate produces is an exact integer of them. Display
/// rounds to six fractional digits (half away from zero); JSON carries the
/// currency amount as a number.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cost {
    nano: i128,
}

impl Cost {
    pub fn zero() -> Self {
        Cost { nano: 0 }
    }

    pub fn from_nano(nano: i128) -> Self {
        Cost { nano }
    }

    pub fn nano(&self) -> i128 {
        self.nano
    }

    pub fn as_currency(&self) -> f64 {
        self.nano as f64 / 1_000_000_000.0
    }

    /// Fixed-point rendering with exactly six fractional digits.
    pub fn to_decimal_string(&self) -> String {
        let negative = self.nano < 0;
        let abs = self.nano.unsigned_abs();
        // nano -> micro, rounding half away from zero
        let micro = (abs + 500) / 1000;
        let whole = micro / 1_000_000;
        let frac = micro % 1_000_000;
        let sign = if negative { "-" } else { "" };
        format!("{sign}{whole}.{frac:06}")
    }
}

impl std::ops::Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost {
            nano: self.nano + rhs.nano,
        }
    }
}

impl std::ops::AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        self.nano += rhs.nano;
    }
}

impl std::fmt::Display for Cost {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_currency())
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let amount = f64::deserialize(deserializer)?;
        Ok(Cost {
            nano: (amount * 1_000_000_000.0).round() as i128,
        })
    }
}

/// Exact cost of a usage at a model's prices:
/// `prompt/1000 × price_in + completion/1000 × price_out`.
pub fn cost_of(usage: &Usage, model: &ModelSpec) -> Cost {
    let nano = usage.prompt_tokens as i128 * model.price_in_per_1k.micro as i128
        + usage.completion_tokens as i128 * model.price_out_per_1k.micro as i128;
    Cost { nano }
}
