use serde::Serialize;

/// Working-precision budget for a series job.
///
/// The largest Bessel argument is `π√(24n−1)/(6c)` at `c = 1`, and the
/// series terms scale like its exponential, so that many bits are needed
/// just to hold the integer part; `guard_bits` is what survives for the
/// residual, and `10·log2(N+2)` covers accumulated rounding over `N` terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrecisionPolicy {
    pub base_bits: u32,
    pub guard_bits: u32,
    /// Overrides the budget when set.
    pub fixed_bits: Option<u32>,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self {
            base_bits: 64,
            guard_bits: 64,
            fixed_bits: None,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_guard(guard_bits: u32) -> Self {
        Self {
            guard_bits,
            ..Self::default()
        }
    }

    /// Always `bits`, whatever the job.
    pub fn fixed(bits: u32) -> Self {
        Self {
            fixed_bits: Some(bits),
            ..Self::default()
        }
    }

    /// `max(base, ⌈π√(24n−1)/(6 ln 2)⌉ + guard + ⌈10·log2(N+2)⌉)`.
    pub fn bits_for(&self, n: u64, truncation: f64) -> u32 {
        if let Some(bits) = self.fixed_bits {
            return bits;
        }
        let d = (24 * n).saturating_sub(1) as f64;
        let range = (std::f64::consts::PI * d.sqrt() / (6.0 * std::f64::consts::LN_2)).ceil();
        let terms = (10.0 * (truncation.max(0.0) + 2.0).log2()).ceil();
        (range as u32 + self.guard_bits + terms as u32).max(self.base_bits)
    }
}
