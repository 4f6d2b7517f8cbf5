//! Exact coefficients of `f(q)` and of the partition generating function.

use std::io::Write;

use rug::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffKind {
    Alpha,
    Partition,
}

/// Coefficients `values[0..=max_index]` of one generating function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    pub kind: CoeffKind,
    pub values: Vec<Integer>,
}

impl CoeffTable {
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&Integer> {
        self.values.get(n)
    }

    /// `index,value` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "value"])?;
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([i.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// In place, `a ← a / (1 + q^j)` modulo `q^{a.len()}`.
fn divide_one_plus(a: &mut [Integer], j: usize) {
    for i in j..a.len() {
        let (lo, hi) = a.split_at_mut(i);
        hi[0] -= &lo[i - j];
    }
}

/// `α(0..=max_n)` from `f(q) = 1 + Σ_{k≥1} q^{k²} / Π_{j≤k} (1+q^j)²`.
///
/// The running product is divided by `(1+q^j)` twice per step, using the
/// recurrence `b_i = a_i − b_{i−j}`; its length shrinks to `max_n − k² + 1`.
pub fn alpha_exact(max_n: usize) -> CoeffTable {
    let mut values = vec![Integer::new(); max_n + 1];
    values[0] = Integer::from(1);
    let mut running = vec![Integer::new(); max_n + 1];
    running[0] = Integer::from(1);
    let mut k = 1usize;
    while k * k <= max_n {
        let len = max_n - k * k + 1;
        running.truncate(len);
        divide_one_plus(&mut running, k);
        divide_one_plus(&mut running, k);
        for (i, r) in running.iter().enumerate() {
            values[k * k + i] += r;
        }
        k += 1;
    }
    CoeffTable {
        kind: CoeffKind::Alpha,
        values,
    }
}

pub const RANK_ORACLE_LIMIT: u64 = 40;

/// `N_e(n) − N_o(n)`: partitions of `n` with even rank minus those with odd
/// rank, where rank = largest part − number of parts. Enumerates every
/// partition, so `n` is capped at [`RANK_ORACLE_LIMIT`].
pub fn alpha_rank_oracle(n: u64) -> Result<i64> {
    if n > RANK_ORACLE_LIMIT {
        return Err(Error::SizeLimit {
            value: n,
            limit: RANK_ORACLE_LIMIT,
        });
    }
    if n == 0 {
        return Ok(1);
    }
    // Parts chosen in nonincreasing order; the first part is the largest.
    fn walk(rest: u64, max_part: u64, largest: u64, parts: u64, acc: &mut i64) {
        if rest == 0 {
            let rank = largest as i64 - parts as i64;
            *acc += if rank % 2 == 0 { 1 } else { -1 };
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            let largest = if parts == 0 { part } else { largest };
            walk(rest - part, part, largest, parts + 1, acc);
        }
    }
    let mut acc = 0;
    walk(n, n, 0, 0, &mut acc);
    Ok(acc)
}

/// `p(0..=max_n)` by Euler's pentagonal-number recurrence.
pub fn partition_exact(max_n: usize) -> CoeffTable {
    let mut values: Vec<Integer> = Vec::with_capacity(max_n + 1);
    values.push(Integer::from(1));
    for n in 1..=max_n {
        let mut sum = Integer::new();
        for k in 1usize.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let plus = k % 2 == 1;
            let mut term = values[n - g1].clone();
            let g2 = g1 + k;
            if g2 <= n {
                term += &values[n - g2];
            }
            if plus {
                sum += term;
            } else {
                sum -= term;
            }
        }
        values.push(sum);
    }
    CoeffTable {
        kind: CoeffKind::Partition,
        values,
    }
}
