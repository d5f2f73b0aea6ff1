//! Computable forms of the bound formulas and counting arguments.
//!
//! The evaluators fix all asymptotic constants at 1 and clamp at zero
//! instead of returning negatives. They exist for measured-vs-formula
//! reporting: an empirical run cannot confirm a lower bound, only exhibit
//! consistency with it, so nothing here is a pass/fail criterion by
//! itself.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Pointer-chasing communication bound: `max(0, n/p^4 - p^2 log2 n)`.
pub fn pc_cc_bound(n: f64, p: f64) -> f64 {
    (n / p.powi(4) - p.powi(2) * n.log2()).max(0.0)
}

/// Per-pass depth space bound: `max(0, n/p^7 - log2(n/p))`.
///
/// The unclamped expression is meaningful for `p < n`; once `p` reaches
/// `n` the log term flips sign.
pub fn depth_pass_bound(n: f64, p: f64) -> f64 {
    (n / p.powi(7) - (n / p).log2()).max(0.0)
}

/// Set-chasing intersection communication bound:
/// `n^(1 + 1/(2(p+1))) / (p^e log2(n)^(3/2))` with `e = 16` in the
/// theorem form and `e = 19` in the claim form.
pub fn intersect_cc_bound(n: f64, p: f64, claim_form: bool) -> f64 {
    let exponent = 1.0 + 1.0 / (2.0 * (p + 1.0));
    let denom_exp = if claim_form { 19 } else { 16 };
    (n.powf(exponent) / (p.powi(denom_exp) * n.log2().powf(1.5))).max(0.0)
}

/// Stirling number of the second kind via the standard recurrence
/// `S(n, k) = k S(n-1, k) + S(n-1, k-1)`.
pub fn stirling2(n: usize, k: usize) -> Result<BigUint> {
    if k > n {
        return Err(Error::InvalidArgument(format!("stirling2 needs k <= n, got ({n}, {k})")));
    }
    Ok(stirling2_row(n).swap_remove(k))
}

/// The full row `S(n, 0..=n)`.
fn stirling2_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for i in 1..=n {
        let mut next = vec![BigUint::zero(); i + 1];
        for k in 1..=i {
            let mut value = if k < i { &row[k] * k } else { BigUint::zero() };
            value += &row[k - 1];
            next[k] = value;
        }
        row = next;
    }
    row
}

/// `log2` of a big integer, accurate enough for ratio reporting.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 53 {
        return x.to_f64().expect("fits in f64").log2();
    }
    let top = (x >> (bits - 53)).to_f64().expect("53 bits fit");
    (bits - 53) as f64 + top.log2()
}

/// The tree-depth counting chain: `sum_{i=1}^{n-2} n * S(n-1, i)`,
/// returned with its `log2`.
pub fn depth_count_lower(n: usize) -> Result<(BigUint, f64)> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("need n >= 3, got {n}")));
    }
    let row = stirling2_row(n - 1);
    let mut total = BigUint::zero();
    for value in &row[1..=n - 2] {
        total += value;
    }
    total *= n;
    let log2 = log2_biguint(&total);
    Ok((total, log2))
}

const PROFILE_ENUM_CAP: usize = 9;

/// Counts the functions `d: V -> Z+` realizable as the depth function of
/// some rooted labeled tree on `n` nodes: `d(root) = 0` and every occupied
/// depth `k >= 1` has depth `k - 1` occupied. Exhaustive enumeration over
/// the `(n-1)^(n-1)` assignments, so `n <= 9`.
pub fn realizable_depth_profiles(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    if n > PROFILE_ENUM_CAP {
        return Err(Error::InvalidArgument(format!(
            "exhaustive profile enumeration is capped at n = {PROFILE_ENUM_CAP}"
        )));
    }
    let nodes = n - 1;
    let mut counts = vec![0u32; n];
    let mut total = 0u64;
    // Depth-first over assignments, tracking occupancy so the contiguity
    // check at each leaf is O(1): contiguous iff distinct == max.
    fn assign(
        node: usize,
        nodes: usize,
        max_depth: usize,
        distinct: usize,
        counts: &mut [u32],
        total: &mut u64,
    ) {
        if node == nodes {
            if distinct == max_depth {
                *total += 1;
            }
            return;
        }
        for d in 1..=nodes {
            counts[d] += 1;
            let new_distinct = if counts[d] == 1 { distinct + 1 } else { distinct };
            assign(node + 1, nodes, max_depth.max(d), new_distinct, counts, total);
            counts[d] -= 1;
        }
    }
    assign(0, nodes, 0, 0, &mut counts, &mut total);
    Ok(BigUint::from(total))
}

/// One measured-vs-formula comparison.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub formula: &'static str,
    pub n: u64,
    pub p: u32,
    pub formula_bits: f64,
    pub measured_bits: f64,
}

impl BoundReport {
    /// `measured / formula` when the formula is positive, else 0.
    pub fn ratio(&self) -> f64 {
        if self.formula_bits > 0.0 {
            self.measured_bits / self.formula_bits
        } else {
            0.0
        }
    }
}
