//! Integer lattice reductions over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// Nonzero invariant factors of the Smith normal form, in divisibility
/// order and all positive. The count is the rank of the matrix.
pub fn smith_diagonal(matrix: &Matrix) -> Vec<BigInt> {
    let mut a = matrix.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = smallest_nonzero(&a, t) else {
                return diagonal;
            };
            a.swap(t, pr);
            for row in a.iter_mut() {
                row.swap(t, pc);
            }

            let mut clean = true;
            for r in t + 1..rows {
                if a[r][t].is_zero() {
                    continue;
                }
                let q = a[r][t].div_floor(&a[t][t]);
                row_sub(&mut a, r, t, &q);
                if !a[r][t].is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..cols {
                if a[t][c].is_zero() {
                    continue;
                }
                let q = a[t][c].div_floor(&a[t][t]);
                for r in 0..rows {
                    let delta = &q * &a[r][t];
                    a[r][c] -= delta;
                }
                if !a[t][c].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // The pivot must divide every entry of the trailing block.
            let pivot = a[t][t].clone();
            let offender = (t + 1..rows)
                .find(|&r| (t + 1..cols).any(|c| !a[r][c].is_multiple_of(&pivot)));
            match offender {
                Some(r) => {
                    for c in 0..cols {
                        let v = a[r][c].clone();
                        a[t][c] += v;
                    }
                }
                None => {
                    diagonal.push(pivot.abs());
                    break;
                }
            }
        }
    }
    diagonal
}

fn smallest_nonzero(a: &Matrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (r, row) in a.iter().enumerate().skip(t) {
        for (c, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if a[br][bc].abs() <= v.abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

fn row_sub(a: &mut Matrix, target: usize, source: usize, factor: &BigInt) {
    let (src, dst) = if source < target {
        let (lo, hi) = a.split_at_mut(target);
        (&lo[source], &mut hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(source);
        (&hi[0], &mut lo[target])
    };
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= factor * s;
    }
}

/// Row echelon form of the integer row lattice: pivot columns strictly
/// increase and pivots are positive. Zero rows are dropped.
pub fn lattice_echelon(matrix: &Matrix) -> Matrix {
    let mut a: Matrix = matrix.iter().filter(|r| r.iter().any(|v| !v.is_zero())).cloned().collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut top = 0;
    for c in 0..cols {
        if top == a.len() {
            break;
        }
        loop {
            let pivot = (top..a.len())
                .filter(|&r| !a[r][c].is_zero())
                .min_by(|&x, &y| a[x][c].abs().cmp(&a[y][c].abs()));
            let Some(p) = pivot else { break };
            a.swap(top, p);
            let mut done = true;
            for r in top + 1..a.len() {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[top][c]);
                row_sub(&mut a, r, top, &q);
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                if a[top][c].is_negative() {
                    for v in a[top].iter_mut() {
                        *v = -v.clone();
                    }
                }
                top += 1;
                break;
            }
        }
    }
    a.retain(|r| r.iter().any(|v| !v.is_zero()));
    a
}

/// Whether `target` is an integer combination of the rows of `matrix`.
pub fn in_row_lattice(target: &[BigInt], matrix: &Matrix) -> bool {
    let echelon = lattice_echelon(matrix);
    let mut t = target.to_vec();
    for row in &echelon {
        let Some(p) = row.iter().position(|v| !v.is_zero()) else {
            continue;
        };
        if t[p].is_zero() {
            continue;
        }
        if !t[p].is_multiple_of(&row[p]) {
            return false;
        }
        let q = &t[p] / &row[p];
        for (tv, rv) in t.iter_mut().zip(row) {
            *tv -= &q * rv;
        }
    }
    t.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn diag(rows: &[&[i64]]) -> Vec<i64> {
        smith_diagonal(&m(rows))
            .iter()
            .map(|v| i64::try_from(v).unwrap())
            .collect()
    }

    #[test]
    fn smith_examples() {
        assert_eq!(diag(&[&[1, -2, 0], &[0, 1, -2]]), vec![1, 1]);
        assert_eq!(diag(&[&[1], &[2]]), vec![1]);
        assert_eq!(diag(&[&[1, 1], &[1, -1]]), vec![1, 2]);
        assert_eq!(diag(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(diag(&[&[0, 0], &[0, 0]]), Vec::<i64>::new());
        assert_eq!(diag(&[&[6, 0], &[0, 4]]), vec![2, 12]);
    }

    #[test]
    fn lattice_membership() {
        let gens = m(&[&[1, -2, 0], &[0, 1, -2]]);
        let target = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(!in_row_lattice(&target(&[1, 0, 0]), &gens));
        assert!(in_row_lattice(&target(&[1, -1, -2]), &gens));
        assert!(in_row_lattice(&target(&[0, 0, 0]), &gens));
        let even = m(&[&[2, 0], &[0, 2]]);
        assert!(!in_row_lattice(&target(&[1, 0]), &even));
        assert!(in_row_lattice(&target(&[4, -2]), &even));
    }
}
