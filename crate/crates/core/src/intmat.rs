//! Dense exact matrices over Z and Q: Bareiss determinants, linear solves,
//! column Hermite form with unimodular transform, Kronecker products, and a
//! Gram-matrix LLL used to precondition enumeration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut r = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                r[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    r
}

pub fn transpose(a: &IMat) -> IMat {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn mat_vec(a: &IMat, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Fraction-free determinant (Bareiss).
pub fn det_bareiss(m: &IMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IMat = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Solve A x = b exactly over Q. A square nonsingular.
pub fn solve_q(a: &IMat, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                a[i].iter().map(|x| BigRational::from(x.clone())).collect();
            row.push(BigRational::from(b[i].clone()));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, piv);
        let pv = m[c][c].clone();
        for x in &mut m[c] {
            *x /= pv.clone();
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..=n {
                    let t = &f * &m[c][j];
                    m[r][j] -= t;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Column-style Hermite reduction with transform: returns (H, U) with
/// A * U = H, U unimodular, and the nonzero columns of H echelonized.
/// Columns of U corresponding to zero columns of H span ker(A) over Z
/// (and that span is saturated).
pub fn column_hnf_with_transform(a: &IMat) -> (IMat, IMat) {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut h = a.to_vec();
    let mut u = identity(cols);
    let mut pivot_col = 0usize;
    for r in 0..rows {
        if pivot_col >= cols {
            break;
        }
        // gcd-reduce row r across columns pivot_col..cols
        loop {
            // find column with smallest nonzero |entry| in row r
            let mut best: Option<usize> = None;
            for c in pivot_col..cols {
                if !h[r][c].is_zero() {
                    best = match best {
                        None => Some(c),
                        Some(b) if h[r][c].abs() < h[r][b].abs() => Some(c),
                        keep => keep,
                    };
                }
            }
            let Some(bc) = best else { break };
            h.iter_mut().for_each(|row| row.swap(pivot_col, bc));
            u.iter_mut().for_each(|row| row.swap(pivot_col, bc));
            let mut done = true;
            for c in pivot_col + 1..cols {
                if h[r][c].is_zero() {
                    continue;
                }
                let q = div_round(&h[r][c], &h[r][pivot_col]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let t = &q * &h[i][pivot_col];
                        h[i][c] -= t;
                    }
                    for i in 0..cols {
                        let t = &q * &u[i][pivot_col];
                        u[i][c] -= t;
                    }
                }
                if !h[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !h[r][pivot_col].is_zero() {
            if h[r][pivot_col].is_negative() {
                for i in 0..rows {
                    h[i][pivot_col] = -h[i][pivot_col].clone();
                }
                for i in 0..cols {
                    u[i][pivot_col] = -u[i][pivot_col].clone();
                }
            }
            pivot_col += 1;
        }
    }
    (h, u)
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer to a/b
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    if &two * &r >= b.abs() {
        q + 1
    } else {
        q
    }
}

/// Integer kernel basis of A (columns), saturated.
pub fn kernel_basis(a: &IMat) -> Vec<Vec<BigInt>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let (h, u) = column_hnf_with_transform(a);
    let mut out = Vec::new();
    for c in 0..cols {
        if h.iter().all(|row| row[c].is_zero()) {
            out.push((0..cols).map(|i| u[i][c].clone()).collect());
        }
    }
    out
}

pub fn kronecker(a: &IMat, b: &IMat) -> IMat {
    let (ra, ca) = (a.len(), a[0].len());
    let (rb, cb) = (b.len(), b[0].len());
    let mut r = vec![vec![BigInt::zero(); ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    r[i * rb + k][j * cb + l] = &a[i][j] * &b[k][l];
                }
            }
        }
    }
    r
}

/// Exact LLL (delta = 3/4) on a positive definite Gram matrix.
/// Returns (G', U) with G' = U^T G U reduced and U unimodular.
pub fn lll_gram(g: &IMat) -> (IMat, IMat) {
    let n = g.len();
    let mut gram: Vec<Vec<BigRational>> = g
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    let mut u = identity(n);
    if n <= 1 {
        return (g.to_vec(), u);
    }

    // mu[i][j] (j < i) and B[i] from the Gram matrix, recomputed incrementally
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut b = vec![BigRational::zero(); n];
    let compute_gso = |gram: &Vec<Vec<BigRational>>,
                       mu: &mut Vec<Vec<BigRational>>,
                       b: &mut Vec<BigRational>| {
        for i in 0..n {
            for j in 0..i {
                let mut t = gram[i][j].clone();
                for k in 0..j {
                    t -= &mu[i][k] * &mu[j][k] * &b[k];
                }
                mu[i][j] = if b[j].is_zero() { BigRational::zero() } else { t / &b[j] };
            }
            let mut t = gram[i][i].clone();
            for k in 0..i {
                t -= &mu[i][k] * &mu[i][k] * &b[k];
            }
            b[i] = t;
        }
    };
    compute_gso(&gram, &mut mu, &mut b);

    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));

    // column operation: basis_col[k] += q * basis_col[j]  (on gram and u)
    let add_col = |gram: &mut Vec<Vec<BigRational>>, u: &mut IMat, k: usize, j: usize, q: &BigInt| {
        let qr = BigRational::from(q.clone());
        for i in 0..n {
            u[i][k] = &u[i][k] + q * &u[i][j];
        }
        // G[k][*] += q G[j][*]; G[*][k] += q G[*][j]; G[k][k] handled by both
        for i in 0..n {
            let t = &qr * &gram[j][i];
            gram[k][i] += t;
        }
        for i in 0..n {
            let t = &qr * &gram[i][j];
            gram[i][k] += t;
        }
    };
    let swap_cols = |gram: &mut Vec<Vec<BigRational>>, u: &mut IMat, k: usize| {
        u.iter_mut().for_each(|row| row.swap(k - 1, k));
        gram.swap(k - 1, k);
        for row in gram.iter_mut() {
            row.swap(k - 1, k);
        }
    };

    let mut k = 1usize;
    let mut guard = 0usize;
    let guard_max = 10_000 + 400 * n * n;
    while k < n {
        guard += 1;
        assert!(guard < guard_max, "LLL failed to terminate");
        // size-reduce column k against k-1 .. 0
        for j in (0..k).rev() {
            if mu[k][j].clone().abs() > half {
                let q = -round_rational(&mu[k][j]);
                add_col(&mut gram, &mut u, k, j, &q);
                compute_gso(&gram, &mut mu, &mut b);
            }
        }
        // Lovász condition
        let lhs = b[k].clone();
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            swap_cols(&mut gram, &mut u, k);
            compute_gso(&gram, &mut mu, &mut b);
            k = k.max(2) - 1;
            if k == 0 {
                k = 1;
            }
        }
    }

    let gi: IMat = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    assert!(x.is_integer(), "reduced Gram must stay integral");
                    x.to_integer()
                })
                .collect()
        })
        .collect();
    (gi, u)
}

fn round_rational(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    let (n, d) = (x.numer(), x.denom());
    num_integer::Integer::div_floor(&(&two * n + d), &(&two * d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det_bareiss(&m(&[&[2, 1], &[1, 2]])), BigInt::from(3));
        assert_eq!(det_bareiss(&m(&[&[1, 1], &[1, 1]])), BigInt::zero());
        assert_eq!(
            det_bareiss(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])),
            BigInt::from(-5)
        );
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let a = m(&[&[1, 1], &[1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] + &k[0][1], BigInt::zero());
        assert_eq!(k[0][0].clone().abs(), BigInt::one());
    }

    #[test]
    fn hnf_transform_is_unimodular() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let (h, u) = column_hnf_with_transform(&a);
        assert_eq!(det_bareiss(&u).abs(), BigInt::one());
        assert_eq!(mat_mul(&a, &u), h);
    }

    #[test]
    fn lll_preserves_determinant() {
        let g = m(&[&[10, 3, 2], &[3, 8, 1], &[2, 1, 12]]);
        let (g2, u) = lll_gram(&g);
        assert_eq!(det_bareiss(&u).abs(), BigInt::one());
        assert_eq!(det_bareiss(&g2), det_bareiss(&g));
        let ut_g_u = mat_mul(&transpose(&u), &mat_mul(&g, &u));
        assert_eq!(ut_g_u, g2);
    }
}
