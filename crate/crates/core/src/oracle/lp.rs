//! Exact feasibility for homogeneous load-balance systems.
//!
//! Decides whether `A l = 0` has a solution with every `l_k > 0`. The system
//! is homogeneous, so strict positivity can be traded for `l_k >= 1`;
//! substituting `l = 1 + u` leaves `A u = -A 1, u >= 0`, which a phase-one
//! simplex over exact rationals settles. Bland's rule rules out cycling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Returns a vector `l` with `l_k >= 1` and `A l = 0`, or `None`.
///
/// `rows[r][k]` is the coefficient of variable `k` in equation `r`; every row
/// must have length `vars`.
pub fn positive_kernel_point(rows: &[Vec<i64>], vars: usize) -> Option<Vec<BigRational>> {
    let m = rows.len();
    let n = vars;
    let width = n + m + 1;
    let rhs = width - 1;
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));

    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (r, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n, "row {r} has the wrong width");
        let b: i64 = -row.iter().sum::<i64>();
        let sign = if b < 0 { -1 } else { 1 };
        let mut line = vec![BigRational::zero(); width];
        for (k, &a) in row.iter().enumerate() {
            line[k] = q(sign * a);
        }
        line[n + r] = BigRational::one();
        line[rhs] = q(sign * b);
        t.push(line);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase-one objective: minimize the sum of artificials. Stored as the
    // reduced-cost row, with the negated objective value in the last column.
    let mut z = vec![BigRational::zero(); width];
    for line in &t {
        for k in 0..n {
            z[k] -= &line[k];
        }
        z[rhs] -= &line[rhs];
    }

    while let Some(enter) = (0..n + m).find(|&k| z[k].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..m {
            if t[r][enter].is_positive() {
                let ratio = &t[r][rhs] / &t[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // The phase-one objective is bounded below by zero.
        let (pr, _) = leave.expect("phase-one objective is bounded");
        let pivot = t[pr][enter].clone();
        for v in t[pr].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[pr].clone();
        for (r, line) in t.iter_mut().enumerate() {
            if r != pr && !line[enter].is_zero() {
                let f = line[enter].clone();
                for (v, p) in line.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        if !z[enter].is_zero() {
            let f = z[enter].clone();
            for (v, p) in z.iter_mut().zip(&prow) {
                *v -= &f * p;
            }
        }
        basis[pr] = enter;
    }

    if !z[rhs].is_zero() {
        return None;
    }
    let mut l = vec![BigRational::one(); n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            l[b] += &t[r][rhs];
        }
    }
    Some(l)
}
