//! Bernoulli numbers, exact and as `f64`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Highest index kept in the table.
pub const MAX_INDEX: usize = 120;

struct Table {
    exact: Vec<BigRational>,
    float: Vec<f64>,
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_m = -1/(m+1) Σ_{i<m} C(m+1, i) B_i, with B_1 = -1/2.
        let mut exact: Vec<BigRational> = Vec::with_capacity(MAX_INDEX + 1);
        exact.push(BigRational::one());
        for m in 1..=MAX_INDEX {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (i, b) in exact.iter().enumerate() {
                if !b.is_zero() {
                    acc += b * BigRational::from_integer(binom.clone());
                }
                // C(m+1, i+1) from C(m+1, i).
                binom = binom * BigInt::from(m + 1 - i) / BigInt::from(i + 1);
            }
            exact.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        let float = exact
            .iter()
            .map(|b| b.to_f64().expect("Bernoulli numbers up to B_120 fit in f64"))
            .collect();
        Table { exact, float }
    })
}

/// `B_n` as an exact rational (`B_1 = -1/2`). Panics for `n > MAX_INDEX`.
pub fn bernoulli_exact(n: usize) -> &'static BigRational {
    &table().exact[n]
}

/// `B_n` rounded to `f64`. Panics for `n > MAX_INDEX`.
pub fn bernoulli(n: usize) -> f64 {
    table().float[n]
}
