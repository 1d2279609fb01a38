//! Exact numbers of the form `m * 2^(e/2)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// `mantissa * 2^(halfexp / 2)` with an odd mantissa, or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfPow {
    mantissa: u128,
    halfexp: i64,
}

impl HalfPow {
    pub const ZERO: HalfPow = HalfPow {
        mantissa: 0,
        halfexp: 0,
    };

    /// Normalizes `mantissa * 2^(halfexp/2)` by moving factors of 2 out of
    /// the mantissa.
    pub fn new(mantissa: u128, halfexp: i64) -> Self {
        if mantissa == 0 {
            return Self::ZERO;
        }
        let tz = mantissa.trailing_zeros();
        Self {
            mantissa: mantissa >> tz,
            halfexp: halfexp + 2 * tz as i64,
        }
    }

    /// `2^(halfexp/2)`.
    pub fn sqrt2_pow(halfexp: i64) -> Self {
        Self::new(1, halfexp)
    }

    /// `count * 2^(halfexp/2)`.
    pub fn scaled(count: u128, halfexp: i64) -> Self {
        Self::new(count, halfexp)
    }

    pub fn mantissa(&self) -> u128 {
        self.mantissa
    }

    pub fn halfexp(&self) -> i64 {
        self.halfexp
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0
    }

    /// Sum of two values whose half-exponents share parity. `None` if the
    /// parities differ (the sum is not of this form) or on overflow.
    pub fn checked_add(&self, rhs: &HalfPow) -> Option<HalfPow> {
        if self.is_zero() {
            return Some(*rhs);
        }
        if rhs.is_zero() {
            return Some(*self);
        }
        if (self.halfexp - rhs.halfexp).rem_euclid(2) != 0 {
            return None;
        }
        let (lo, hi) = match self.halfexp.cmp(&rhs.halfexp) {
            Ordering::Greater => (rhs, self),
            _ => (self, rhs),
        };
        let shift = u32::try_from((hi.halfexp - lo.halfexp) / 2).ok()?;
        if shift >= 128 || hi.mantissa.leading_zeros() < shift {
            return None;
        }
        let m = lo.mantissa.checked_add(hi.mantissa << shift)?;
        Some(HalfPow::new(m, lo.halfexp))
    }

    /// Sum of an iterator; `None` under the same conditions as `checked_add`.
    pub fn checked_sum<'a>(values: impl IntoIterator<Item = &'a HalfPow>) -> Option<HalfPow> {
        values
            .into_iter()
            .try_fold(HalfPow::ZERO, |acc, v| acc.checked_add(v))
    }

    /// Floating-point approximation, for display only.
    pub fn approx(&self) -> f64 {
        self.mantissa as f64 * 2f64.powf(self.halfexp as f64 / 2.0)
    }
}

impl fmt::Display for HalfPow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        match self.halfexp {
            0 => write!(f, "{}", self.mantissa),
            e if e % 2 == 0 => write!(f, "{}*2^{}", self.mantissa, e / 2),
            e => write!(f, "{}*2^({}/2)", self.mantissa, e),
        }
    }
}
