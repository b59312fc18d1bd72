//! Littlewood-Richardson coefficients by direct tableau enumeration.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::partition::Partition;

/// `c^ν_{λμ}` for all `ν`: fillings of `ν/λ` built from successive
/// horizontal strips of sizes `μ_1, μ_2, …` labelled `1, 2, …`, kept when the
/// reverse reading word is a lattice word.
pub fn lr_oracle(lambda: &Partition, mu: &Partition) -> BTreeMap<Partition, BigInt> {
    let mut out: BTreeMap<Partition, BigInt> = BTreeMap::new();
    let shape = lambda.parts().to_vec();
    let filling: Vec<Vec<usize>> = vec![Vec::new(); shape.len()];
    grow(&shape, &filling, mu.parts(), 0, &mut out);
    out
}

fn grow(
    shape: &[usize],
    filling: &[Vec<usize>],
    mu: &[usize],
    step: usize,
    out: &mut BTreeMap<Partition, BigInt>,
) {
    if step == mu.len() {
        if is_lattice(filling, mu.len()) {
            *out.entry(Partition::from_unsorted(shape.to_vec())).or_default() += 1;
        }
        return;
    }
    let label = step + 1;
    for (new_shape, added) in horizontal_strips(shape, mu[step]) {
        let mut f = filling.to_vec();
        f.resize(added.len().max(f.len()), Vec::new());
        for (row, count) in added.iter().enumerate() {
            f[row].extend(std::iter::repeat_n(label, *count));
        }
        grow(&new_shape, &f, mu, step + 1, out);
    }
}

/// All ways to add a horizontal strip of `m` boxes to `shape`, with the
/// number of boxes added per row.
fn horizontal_strips(shape: &[usize], m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let rows = shape.len() + 1;
    let mut added = vec![0usize; rows];
    strip_rec(shape, 0, m, &mut added, &mut out);
    out
}

fn strip_rec(shape: &[usize], row: usize, rest: usize, added: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
    let rows = shape.len() + 1;
    if row == rows {
        if rest == 0 {
            let mut new_shape: Vec<usize> = (0..rows)
                .map(|r| shape.get(r).copied().unwrap_or(0) + added[r])
                .collect();
            while new_shape.last() == Some(&0) {
                new_shape.pop();
            }
            out.push((new_shape, added.clone()));
        }
        return;
    }
    let cur = shape.get(row).copied().unwrap_or(0);
    // a horizontal strip never puts two boxes in one column: the new row
    // length may not exceed the old length of the row above
    let cap = if row == 0 { rest } else { (shape[row - 1] - cur).min(rest) };
    for a in 0..=cap {
        added[row] = a;
        strip_rec(shape, row + 1, rest - a, added, out);
    }
    added[row] = 0;
}

/// Reading rows top to bottom, each right to left, every prefix contains at
/// least as many `i` as `i + 1`.
fn is_lattice(filling: &[Vec<usize>], labels: usize) -> bool {
    let mut counts = vec![0usize; labels + 2];
    for row in filling {
        for &x in row.iter().rev() {
            counts[x] += 1;
            if x > 1 && counts[x] > counts[x - 1] {
                return false;
            }
        }
    }
    true
}
