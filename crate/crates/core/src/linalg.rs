//! Dense Gaussian elimination with partial pivoting.

/// Solves `a x = b` in place for a square row-major matrix.
///
/// Returns `None` when a pivot vanishes relative to the matrix scale.
pub(crate) fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);

    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        // Negated so a NaN pivot also counts as singular.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(a[pivot][col].abs() > scale * 1e-14) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }

    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn needs_pivoting() {
        let x = solve(vec![vec![0.0, 1.0], vec![2.0, 1.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn singular_is_none() {
        assert!(solve(vec![vec![1.0, 2.0], vec![2.0, 4.0]], vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn three_by_three() {
        let a = vec![
            vec![4.0, -2.0, 1.0],
            vec![-2.0, 4.0, -2.0],
            vec![1.0, -2.0, 4.0],
        ];
        let want = [1.0, -1.0, 2.0];
        let b: Vec<f64> = a
            .iter()
            .map(|r| r.iter().zip(&want).map(|(x, y)| x * y).sum())
            .collect();
        let x = solve(a, b).unwrap();
        for (got, want) in x.iter().zip(want) {
            assert!((got - want).abs() < 1e-13);
        }
    }
}
