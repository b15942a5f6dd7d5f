//! Positive (semi)definite Z-form machinery on exact integers.
//!
//! A `ZForm` stores the doubled Gram matrix `D = 2 M_Q`, which is integral
//! with even diagonal for every Z-form, classical or not. Enumeration is
//! Fincke-Pohst over the exact rational LDL^T of an LLL-reduced Gram; no
//! floating point enters any bound.

use crate::error::{Error, Result};
use crate::exec;
use crate::intmat::{self, IMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZForm {
    pub rank: usize,
    /// Doubled Gram matrix 2*M_Q: symmetric, even diagonal.
    pub doubled: IMat,
    /// True iff all off-diagonal entries of `doubled` are even (M_Q integral).
    pub classical: bool,
}

/// Minimum of a positive definite form together with all minimal vectors.
#[derive(Debug, Clone)]
pub struct MinimaResult {
    pub min: BigInt,
    /// One representative per +-pair, first nonzero coordinate positive, sorted.
    pub vectors: Vec<Vec<BigInt>>,
    /// Total number of minimal vectors including signs.
    pub count: usize,
}

impl ZForm {
    pub fn from_doubled(doubled: IMat) -> Result<ZForm> {
        let rank = doubled.len();
        for (i, row) in doubled.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::SpecParse("doubled Gram must be square".into()));
            }
            for j in 0..rank {
                if doubled[i][j] != doubled[j][i] {
                    return Err(Error::SpecParse("doubled Gram must be symmetric".into()));
                }
            }
            if !row[i].is_even() {
                return Err(Error::SpecParse(
                    "doubled Gram must have even diagonal".into(),
                ));
            }
        }
        let classical = (0..rank)
            .all(|i| (0..rank).all(|j| i == j || doubled[i][j].is_even()));
        Ok(ZForm {
            rank,
            doubled,
            classical,
        })
    }

    /// Classical form from its integral Gram matrix.
    pub fn from_integral_gram(m: IMat) -> Result<ZForm> {
        let doubled = m
            .iter()
            .map(|row| row.iter().map(|x| x * 2).collect())
            .collect();
        ZForm::from_doubled(doubled)
    }

    pub fn identity(r: usize) -> Result<ZForm> {
        ZForm::from_integral_gram(intmat::identity(r))
    }

    /// Q(v), exact.
    pub fn evaluate(&self, v: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..self.rank {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if !v[j].is_zero() {
                    acc += &v[i] * &self.doubled[i][j] * &v[j];
                }
            }
        }
        let (q, r) = acc.div_mod_floor(&BigInt::from(2));
        debug_assert!(r.is_zero());
        q
    }

    /// 2*B_Q(u, v) = u^T D v (always integral).
    pub fn bilinear2(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..self.rank {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if !v[j].is_zero() {
                    acc += &u[i] * &self.doubled[i][j] * &v[j];
                }
            }
        }
        acc
    }

    pub fn det_doubled(&self) -> BigInt {
        intmat::det_bareiss(&self.doubled)
    }

    fn ldl(&self) -> Option<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
        ldl_rational(&self.doubled)
    }

    pub fn is_positive_definite(&self) -> bool {
        if self.rank == 0 {
            return true;
        }
        match self.ldl() {
            Some((_, d)) => d.iter().all(|x| x.is_positive()),
            None => false,
        }
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        if self.rank == 0 {
            return true;
        }
        psd_check(&self.doubled)
    }

    /// LLL-reduce; returns (reduced form, U) with reduced.doubled = U^T D U.
    pub fn lll_reduced(&self) -> (ZForm, IMat) {
        let (g, u) = intmat::lll_gram(&self.doubled);
        (
            ZForm {
                rank: self.rank,
                doubled: g,
                classical: self.classical,
            },
            u,
        )
    }

    /// All nonzero v with Q(v) <= bound, one per +-pair (first nonzero
    /// coordinate positive), sorted by (value, coordinates).
    pub fn enumerate_up_to(&self, bound: &BigInt) -> Result<Vec<(BigInt, Vec<BigInt>)>> {
        if !self.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        if bound < &BigInt::one() || self.rank == 0 {
            return Ok(vec![]);
        }
        let (red, u) = self.lll_reduced();
        // process coordinates in decreasing LDL diagonal order: permute so the
        // largest pivot sits at the outermost (last) position
        let (_, d0) = red.ldl().expect("reduced form stays definite");
        let mut order: Vec<usize> = (0..self.rank).collect();
        order.sort_by(|&a, &b| d0[a].cmp(&d0[b]));
        let perm_doubled: IMat = (0..self.rank)
            .map(|i| (0..self.rank).map(|j| red.doubled[order[i]][order[j]].clone()).collect())
            .collect();
        let (l, d) = ldl_rational(&perm_doubled).expect("permuted form stays definite");

        let enumerated = enumerate_ldl(&l, &d, bound);

        let mut out: Vec<(BigInt, Vec<BigInt>)> = enumerated
            .into_iter()
            .map(|(val, x)| {
                // un-permute, then map through U back to original coordinates
                let mut y = vec![BigInt::zero(); self.rank];
                for (i, &oi) in order.iter().enumerate() {
                    y[oi] = x[i].clone();
                }
                let mut v = intmat::mat_vec(&u, &y);
                canonical_sign(&mut v);
                debug_assert_eq!(self.evaluate(&v), val);
                (val, v)
            })
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn minima(&self) -> Result<MinimaResult> {
        if self.rank == 0 {
            return Err(Error::NotPositiveDefinite);
        }
        let (red, _) = self.lll_reduced();
        let bound = (0..self.rank)
            .map(|i| red.doubled[i][i].clone() / 2)
            .min()
            .unwrap();
        let all = self.enumerate_up_to(&bound)?;
        let min = all
            .first()
            .map(|(v, _)| v.clone())
            .ok_or_else(|| Error::InvariantViolation("empty enumeration below a diagonal".into()))?;
        let vectors: Vec<Vec<BigInt>> = all
            .into_iter()
            .take_while(|(v, _)| *v == min)
            .map(|(_, x)| x)
            .collect();
        let count = 2 * vectors.len();
        Ok(MinimaResult { min, vectors, count })
    }

    pub fn vectors_with_value(&self, m: &BigInt) -> Result<Vec<Vec<BigInt>>> {
        if m < &BigInt::one() {
            return Err(Error::SpecParse("value must be >= 1".into()));
        }
        Ok(self
            .enumerate_up_to(m)?
            .into_iter()
            .filter(|(v, _)| v == m)
            .map(|(_, x)| x)
            .collect())
    }

    /// Kronecker tensor product; at least one factor must be classical.
    pub fn tensor(&self, other: &ZForm) -> Result<ZForm> {
        if !self.classical && !other.classical {
            return Err(Error::BothNonClassical);
        }
        let k = intmat::kronecker(&self.doubled, &other.doubled);
        let doubled: IMat = k
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let (q, r) = x.div_mod_floor(&BigInt::from(2));
                        debug_assert!(r.is_zero());
                        q
                    })
                    .collect()
            })
            .collect();
        ZForm::from_doubled(doubled)
    }

    /// Orthogonal sum.
    pub fn direct_sum(&self, other: &ZForm) -> ZForm {
        let n = self.rank + other.rank;
        let mut d = vec![vec![BigInt::zero(); n]; n];
        for i in 0..self.rank {
            for j in 0..self.rank {
                d[i][j] = self.doubled[i][j].clone();
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                d[self.rank + i][self.rank + j] = other.doubled[i][j].clone();
            }
        }
        ZForm::from_doubled(d).unwrap()
    }

    pub fn repeated_sum(&self, m: usize) -> ZForm {
        let mut acc = self.clone();
        for _ in 1..m {
            acc = acc.direct_sum(self);
        }
        acc
    }

    /// Kneser-style orthogonal decomposition into indecomposable constituents.
    /// Returns the constituent forms with their basis columns inside the
    /// original lattice; the stacked basis is verified unimodular and
    /// block-diagonalizing.
    pub fn orthogonal_constituents(&self) -> Result<Vec<(ZForm, IMat)>> {
        if !self.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        let (red, _) = self.lll_reduced();
        let bound = (0..self.rank)
            .map(|i| red.doubled[i][i].clone() / 2)
            .max()
            .unwrap();
        let short = self.enumerate_up_to(&bound)?;
        // lattice-indecomposable: not a sum of two strictly shorter nonzero vectors
        let mut irreducible: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
        'outer: for (val, v) in &short {
            for (xv, x) in &short {
                if xv >= val {
                    break;
                }
                for s in [1i64, -1] {
                    let xs: Vec<BigInt> = x.iter().map(|c| c * s).collect();
                    let y: Vec<BigInt> = v.iter().zip(&xs).map(|(a, b)| a - b).collect();
                    if y.iter().all(|c| c.is_zero()) {
                        continue;
                    }
                    if &self.evaluate(&y) < val {
                        continue 'outer;
                    }
                }
            }
            irreducible.push((val.clone(), v.clone()));
        }
        // connectivity under nonzero inner product
        let n = irreducible.len();
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut Vec<usize>, i: usize) -> usize {
            if dsu[i] != i {
                let r = find(dsu, dsu[i]);
                dsu[i] = r;
            }
            dsu[i]
        }
        for i in 0..n {
            for j in i + 1..n {
                if !self.bilinear2(&irreducible[i].1, &irreducible[j].1).is_zero() {
                    let (a, b) = (find(&mut dsu, i), find(&mut dsu, j));
                    if a != b {
                        dsu[a] = b;
                    }
                }
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<(usize, usize)> = Vec::new();
        for i in 0..n {
            let r = find(&mut dsu, i);
            match root_of.iter().find(|(root, _)| *root == r) {
                Some(&(_, idx)) => comps[idx].push(i),
                None => {
                    root_of.push((r, comps.len()));
                    comps.push(vec![i]);
                }
            }
        }
        // basis of each component span via column HNF
        let mut pieces: Vec<(ZForm, IMat)> = Vec::new();
        let mut stacked_cols: Vec<Vec<BigInt>> = Vec::new();
        for comp in &comps {
            let mat: IMat = (0..self.rank)
                .map(|row| comp.iter().map(|&k| irreducible[k].1[row].clone()).collect())
                .collect();
            let (h, _) = intmat::column_hnf_with_transform(&mat);
            let mut basis_cols: Vec<Vec<BigInt>> = Vec::new();
            for c in 0..comp.len() {
                if h.iter().any(|row| !row[c].is_zero()) {
                    basis_cols.push((0..self.rank).map(|r| h[r][c].clone()).collect());
                }
            }
            let b = basis_cols.len();
            let basis: IMat = (0..self.rank)
                .map(|r| basis_cols.iter().map(|col| col[r].clone()).collect())
            .collect();
            let mut gram = vec![vec![BigInt::zero(); b]; b];
            for i in 0..b {
                for j in 0..b {
                    gram[i][j] = self.bilinear2(&basis_cols[i], &basis_cols[j]);
                }
            }
            pieces.push((
                ZForm::from_doubled(gram)?,
                basis,
            ));
            stacked_cols.extend(basis_cols);
        }
        // soundness: ranks sum to r, stacked basis unimodular, Gram block-diagonal
        if stacked_cols.len() != self.rank {
            return Err(Error::InvariantViolation(
                "constituent ranks do not sum to the full rank".into(),
            ));
        }
        let t: IMat = (0..self.rank)
            .map(|r| stacked_cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        if intmat::det_bareiss(&t).abs() != BigInt::one() {
            return Err(Error::InvariantViolation(
                "constituent bases do not form a unimodular change of basis".into(),
            ));
        }
        for (i, ci) in stacked_cols.iter().enumerate() {
            for (j, cj) in stacked_cols.iter().enumerate() {
                let b2 = self.bilinear2(ci, cj);
                let same_block = block_of(&pieces, i) == block_of(&pieces, j);
                if !same_block && !b2.is_zero() {
                    return Err(Error::InvariantViolation(
                        "constituents are not pairwise orthogonal".into(),
                    ));
                }
                let _ = (i, j);
            }
        }
        Ok(pieces)
    }
}

fn block_of(pieces: &[(ZForm, IMat)], mut idx: usize) -> usize {
    for (k, (p, _)) in pieces.iter().enumerate() {
        if idx < p.rank {
            return k;
        }
        idx -= p.rank;
    }
    usize::MAX
}

/// Canonical sign: first nonzero coordinate positive.
pub fn canonical_sign(v: &mut [BigInt]) {
    for c in v.iter() {
        if c.is_positive() {
            return;
        }
        if c.is_negative() {
            break;
        }
    }
    for c in v.iter_mut() {
        *c = -c.clone();
    }
}

/// LDL^T of a symmetric rational matrix given by its integral double.
/// Returns None if a leading pivot is negative or a zero pivot has a nonzero
/// residual row (i.e. the matrix is not PSD); zero pivots with zero rows are
/// not accepted here (use `psd_check`), so `Some` means positive definite
/// when all pivots are returned positive.
fn ldl_rational(doubled: &IMat) -> Option<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let n = doubled.len();
    let mut a: Vec<Vec<BigRational>> = doubled
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| BigRational::new(x.clone(), BigInt::from(2)))
                .collect()
        })
        .collect();
    let mut l = vec![vec![BigRational::zero(); n]; n];
    let mut d = vec![BigRational::zero(); n];
    for k in 0..n {
        let pivot = a[k][k].clone();
        if !pivot.is_positive() {
            return None;
        }
        d[k] = pivot.clone();
        l[k][k] = BigRational::one();
        for i in k + 1..n {
            l[i][k] = &a[i][k] / &pivot;
        }
        for i in k + 1..n {
            for j in k + 1..=i {
                let t = &l[i][k] * &a[k][j];
                a[i][j] -= t;
                let v = a[i][j].clone();
                a[j][i] = v;
            }
        }
    }
    Some((l, d))
}

fn psd_check(doubled: &IMat) -> bool {
    let n = doubled.len();
    let mut a: Vec<Vec<BigRational>> = doubled
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| BigRational::new(x.clone(), BigInt::from(2)))
                .collect()
        })
        .collect();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_negative() {
            return false;
        }
        if pivot.is_zero() {
            // PSD forces the whole residual row to vanish
            if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &pivot;
            for j in k + 1..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    true
}

/// Fincke-Pohst enumeration below `bound` on a fixed LDL^T, half-space
/// convention: the outermost nonzero coordinate is positive.
fn enumerate_ldl(
    l: &[Vec<BigRational>],
    d: &[BigRational],
    bound: &BigInt,
) -> Vec<(BigInt, Vec<BigInt>)> {
    let n = d.len();
    let bound_r = BigRational::from(bound.clone());

    // outermost level candidates (center 0): x_{n-1} in [0, sqrt(bound/d)]
    let mut outer: Vec<BigInt> = Vec::new();
    {
        let mut x = BigInt::zero();
        loop {
            let xr = BigRational::from(x.clone());
            if &xr * &xr * &d[n - 1] > bound_r {
                break;
            }
            outer.push(x.clone());
            x += 1;
        }
    }

    let run_outer = |chunk: &[BigInt]| -> Vec<(BigInt, Vec<BigInt>)> {
        let mut results = Vec::new();
        for x_last in chunk {
            let mut x = vec![BigInt::zero(); n];
            x[n - 1] = x_last.clone();
            // partial inner-product sums: sums[i] = sum_{j>level} L[j][i]*x_j
            let mut sums = vec![BigRational::zero(); n];
            for i in 0..n - 1 {
                sums[i] = &l[n - 1][i] * BigRational::from(x_last.clone());
            }
            let xr = BigRational::from(x_last.clone());
            let used = &xr * &xr * &d[n - 1];
            let rem = &bound_r - used;
            if rem.is_negative() {
                continue;
            }
            if n == 1 {
                if !x_last.is_zero() {
                    let val = (&xr * &xr * &d[0]).to_integer();
                    results.push((val, x.clone()));
                }
                continue;
            }
            descend(
                l,
                d,
                n - 2,
                rem,
                &mut x,
                &mut sums,
                x_last.is_zero(),
                &mut results,
            );
        }
        results
    };

    let chunked = exec::par_flat_map_chunks(&outer, 1, run_outer);
    let mut out = chunked;
    // values: recompute from the recursion output (value carried along)
    out.retain(|(_, v)| v.iter().any(|c| !c.is_zero()));
    out
}

#[allow(clippy::too_many_arguments)]
fn descend(
    l: &[Vec<BigRational>],
    d: &[BigRational],
    level: usize,
    budget: BigRational,
    x: &mut Vec<BigInt>,
    sums: &mut Vec<BigRational>,
    all_zero_above: bool,
    results: &mut Vec<(BigInt, Vec<BigInt>)>,
) {
    let c = sums[level].clone(); // center offset: term is d*(x + c)^2
    let term = |xi: &BigInt| -> BigRational {
        let t = BigRational::from(xi.clone()) + &c;
        &t * &t * &d[level]
    };

    // integer range around -c
    let start = rational_floor(&-c.clone());
    let mut candidates: Vec<BigInt> = Vec::new();
    let mut xi = start.clone();
    while term(&xi) <= budget {
        candidates.push(xi.clone());
        xi -= 1;
    }
    xi = &start + 1;
    while term(&xi) <= budget {
        candidates.push(xi.clone());
        xi += 1;
    }
    candidates.sort();

    for cand in candidates {
        if all_zero_above && cand.is_negative() {
            continue; // half-space: first (outermost) nonzero coordinate positive
        }
        let used = term(&cand);
        let rem = &budget - used;
        x[level] = cand.clone();
        if level == 0 {
            if !(all_zero_above && cand.is_zero()) {
                let total = total_value(l, d, x);
                results.push((total, x.clone()));
            }
        } else {
            let saved: Vec<BigRational> = (0..level).map(|i| sums[i].clone()).collect();
            for i in 0..level {
                sums[i] += &l[level][i] * BigRational::from(cand.clone());
            }
            descend(
                l,
                d,
                level - 1,
                rem,
                x,
                sums,
                all_zero_above && cand.is_zero(),
                results,
            );
            for (i, s) in saved.into_iter().enumerate() {
                sums[i] = s;
            }
        }
    }
    x[level] = BigInt::zero();
}

fn total_value(l: &[Vec<BigRational>], d: &[BigRational], x: &[BigInt]) -> BigInt {
    let n = d.len();
    let mut acc = BigRational::zero();
    for i in 0..n {
        let mut y = BigRational::from(x[i].clone());
        for j in i + 1..n {
            y += &l[j][i] * BigRational::from(x[j].clone());
        }
        acc += &y * &y * &d[i];
    }
    debug_assert!(acc.is_integer());
    acc.to_integer()
}

fn rational_floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Reshape v (length d*r, basis index outer, form index inner) as a d x r
/// matrix and return an integer rank-1 factorization beta * w^T if one
/// exists; w is primitive with positive first nonzero entry.
pub fn split_factor(v: &[BigInt], d: usize, r: usize) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    assert_eq!(v.len(), d * r);
    if v.iter().all(|c| c.is_zero()) {
        return None;
    }
    let rows: Vec<&[BigInt]> = (0..d).map(|i| &v[i * r..(i + 1) * r]).collect();
    let pivot = rows.iter().position(|row| row.iter().any(|c| !c.is_zero()))?;
    let mut g = BigInt::zero();
    for c in rows[pivot] {
        g = g.gcd(c);
    }
    let mut w: Vec<BigInt> = rows[pivot].iter().map(|c| c / &g).collect();
    canonical_sign(&mut w);
    let j0 = w.iter().position(|c| !c.is_zero()).unwrap();
    let mut beta = Vec::with_capacity(d);
    for row in &rows {
        let (q, rem) = row[j0].div_mod_floor(&w[j0]);
        if !rem.is_zero() {
            return None;
        }
        for (a, b) in row.iter().zip(&w) {
            if *a != &q * b {
                return None;
            }
        }
        beta.push(q);
    }
    Some((beta, w))
}

/// Radical quotient of an integral PSD doubled Gram: returns the induced
/// positive definite form of rank m <= d and the m x d projection matrix P
/// with Q0(y) = Q1(P y) identically.
pub fn radical_quotient(doubled: &IMat) -> Result<(ZForm, IMat)> {
    let d = doubled.len();
    let form = ZForm::from_doubled(doubled.to_vec())?;
    if !form.is_positive_semidefinite() {
        return Err(Error::NotSemidefinite);
    }
    let (h, u) = intmat::column_hnf_with_transform(doubled);
    let kernel_cols: Vec<usize> = (0..d)
        .filter(|&c| h.iter().all(|row| row[c].is_zero()))
        .collect();
    if kernel_cols.is_empty() {
        return Ok((form, intmat::identity(d)));
    }
    let section_cols: Vec<usize> = (0..d).filter(|c| !kernel_cols.contains(c)).collect();
    let m = section_cols.len();
    // reorder U columns: kernel first, then section; still unimodular
    let reordered: IMat = (0..d)
        .map(|r| {
            kernel_cols
                .iter()
                .chain(&section_cols)
                .map(|&c| u[r][c].clone())
                .collect()
        })
        .collect();
    // projection = last m rows of reordered^{-1}
    let mut proj = vec![vec![BigInt::zero(); d]; m];
    for col in 0..d {
        let mut e = vec![BigInt::zero(); d];
        e[col] = BigInt::one();
        let sol = intmat::solve_q(&reordered, &e)
            .ok_or_else(|| Error::InvariantViolation("transform not invertible".into()))?;
        for i in 0..m {
            let r = &sol[d - m + i];
            if !r.is_integer() {
                return Err(Error::InvariantViolation(
                    "unimodular inverse had a non-integer entry".into(),
                ));
            }
            proj[i][col] = r.to_integer();
        }
    }
    let mut g1 = vec![vec![BigInt::zero(); m]; m];
    let section_vecs: Vec<Vec<BigInt>> = section_cols
        .iter()
        .map(|&c| (0..d).map(|r| u[r][c].clone()).collect())
        .collect();
    for i in 0..m {
        for j in 0..m {
            g1[i][j] = form.bilinear2(&section_vecs[i], &section_vecs[j]);
        }
    }
    let quotient = ZForm::from_doubled(g1)?;
    if !quotient.is_positive_definite() {
        return Err(Error::InvariantViolation(
            "radical quotient is not definite".into(),
        ));
    }
    Ok((quotient, proj))
}

/// Equivalence test by backtracking over prescribed-norm vectors; returns U
/// with U^T D_a U = D_b when the forms are equivalent. Intended for small
/// ranks (tests and selftest).
pub fn equivalent(a: &ZForm, b: &ZForm) -> Result<Option<IMat>> {
    if a.rank != b.rank {
        return Ok(None);
    }
    if a.det_doubled() != b.det_doubled() {
        return Ok(None);
    }
    let n = a.rank;
    // candidate images of e_j: vectors of norm Q_b(e_j), both signs
    let mut cand: Vec<Vec<Vec<BigInt>>> = Vec::new();
    for j in 0..n {
        let target = b.doubled[j][j].clone() / 2;
        let reps = a.vectors_with_value(&target)?;
        let mut full = Vec::with_capacity(2 * reps.len());
        for r in reps {
            let neg: Vec<BigInt> = r.iter().map(|c| -c.clone()).collect();
            full.push(r);
            full.push(neg);
        }
        cand.push(full);
    }
    let mut chosen: Vec<Vec<BigInt>> = Vec::new();
    fn bt(
        a: &ZForm,
        b: &ZForm,
        cand: &[Vec<Vec<BigInt>>],
        chosen: &mut Vec<Vec<BigInt>>,
    ) -> Option<IMat> {
        let j = chosen.len();
        if j == b.rank {
            let u: IMat = (0..a.rank)
                .map(|r| chosen.iter().map(|c| c[r].clone()).collect())
                .collect();
            if intmat::det_bareiss(&u).abs() == BigInt::one() {
                return Some(u);
            }
            return None;
        }
        'cands: for v in &cand[j] {
            for (i, prev) in chosen.iter().enumerate() {
                if a.bilinear2(prev, v) != b.doubled[i][j] {
                    continue 'cands;
                }
            }
            chosen.push(v.clone());
            if let Some(u) = bt(a, b, cand, chosen) {
                return Some(u);
            }
            chosen.pop();
        }
        None
    }
    Ok(bt(a, b, &cand, &mut chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::parse_form;

    fn zf(rows: &[&[i64]]) -> ZForm {
        ZForm::from_doubled(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn definiteness_examples() {
        assert!(ZForm::identity(3).unwrap().is_positive_definite());
        let psd = zf(&[&[2, 2], &[2, 2]]); // Gram [[1,1],[1,1]]
        assert!(!psd.is_positive_definite());
        assert!(psd.is_positive_semidefinite());
        let neither = zf(&[&[2, 2], &[2, 0]]); // Gram [[1,1],[1,0]], det -1
        assert!(!neither.is_positive_definite());
        assert!(!neither.is_positive_semidefinite());
    }

    #[test]
    fn minima_identity_and_a2() {
        let i4 = ZForm::identity(4).unwrap();
        let m = i4.minima().unwrap();
        assert_eq!(m.min, BigInt::one());
        assert_eq!(m.count, 8);

        let a2 = parse_form("a2").unwrap();
        let m = a2.minima().unwrap();
        assert_eq!(m.min, BigInt::one());
        assert_eq!(m.count, 6);
    }

    #[test]
    fn minima_match_brute_force_small_ranks() {
        // deterministic pseudo-random doubled Grams of rank <= 3
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut tested = 0;
        while tested < 12 {
            let r = 2 + (next() % 2) as usize; // rank 2 or 3
            let mut d = vec![vec![BigInt::zero(); r]; r];
            for i in 0..r {
                d[i][i] = BigInt::from(2 * (1 + (next() % 4) as i64));
                for j in 0..i {
                    let off = (next() % 9) as i64 - 4;
                    d[i][j] = BigInt::from(off);
                    d[j][i] = BigInt::from(off);
                }
            }
            let q = match ZForm::from_doubled(d) {
                Ok(q) => q,
                Err(_) => continue,
            };
            if !q.is_positive_definite() {
                continue;
            }
            tested += 1;
            let m = q.minima().unwrap();
            // brute force over |x_i| <= 12
            let mut best: Option<BigInt> = None;
            let mut count = 0usize;
            let range: Vec<i64> = (-12..=12).collect();
            let mut idx = vec![0usize; r];
            loop {
                let v: Vec<BigInt> = idx.iter().map(|&i| BigInt::from(range[i])).collect();
                if v.iter().any(|c| !c.is_zero()) {
                    let val = q.evaluate(&v);
                    match &best {
                        Some(b) if &val > b => {}
                        Some(b) if &val == b => count += 1,
                        _ => {
                            best = Some(val);
                            count = 1;
                        }
                    }
                }
                let mut k = 0;
                loop {
                    idx[k] += 1;
                    if idx[k] < range.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                    if k == r {
                        break;
                    }
                }
                if k == r {
                    break;
                }
            }
            assert_eq!(m.min, best.unwrap());
            assert_eq!(m.count, count);
        }
    }

    #[test]
    fn tensor_identity_block_structure() {
        let a2 = parse_form("a2").unwrap();
        let i2 = ZForm::identity(2).unwrap();
        let t = i2.tensor(&a2).unwrap();
        assert_eq!(t, a2.direct_sum(&a2));
        let m = t.minima().unwrap();
        assert_eq!(m.min, BigInt::one());

        let m2 = zf(&[&[2, 2], &[2, 4]]); // classical Gram [[1,1],[1,2]]
        let t2 = a2.tensor(&m2).unwrap();
        assert_eq!(t2.minima().unwrap().min, BigInt::one());

        assert_eq!(a2.tensor(&a2).unwrap_err(), Error::BothNonClassical);
    }

    #[test]
    fn tensor_min_bound_on_random_classical_pairs() {
        let pairs = [
            (zf(&[&[2, 0], &[0, 4]]), zf(&[&[4, 2], &[2, 4]])),
            (ZForm::identity(2).unwrap(), zf(&[&[6, 2], &[2, 4]])),
            (zf(&[&[4, 2], &[2, 6]]), ZForm::identity(3).unwrap()),
        ];
        for (q1, q2) in pairs {
            let t = q1.tensor(&q2).unwrap();
            let lhs = t.minima().unwrap().min;
            let rhs = q1.minima().unwrap().min * q2.minima().unwrap().min;
            assert!(lhs <= rhs);
            assert_eq!(lhs, rhs); // E-type at these ranks
        }
    }

    #[test]
    fn split_factor_examples() {
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let (b, w) = split_factor(&v(&[1, 0, 1, 0]), 2, 2).unwrap();
        assert_eq!(b, v(&[1, 1]));
        assert_eq!(w, v(&[1, 0]));
        assert!(split_factor(&v(&[1, 0, 0, 1]), 2, 2).is_none());
        let (b, w) = split_factor(&v(&[2, 4, 3, 6]), 2, 2).unwrap();
        assert_eq!(b, v(&[2, 3]));
        assert_eq!(w, v(&[1, 2]));
    }

    #[test]
    fn constituents_examples() {
        let i2 = ZForm::identity(2).unwrap();
        let c = i2.orthogonal_constituents().unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|(p, _)| p.rank == 1));

        let a2 = parse_form("a2").unwrap();
        assert_eq!(a2.orthogonal_constituents().unwrap().len(), 1);

        let d4 = parse_form("deutsch4").unwrap();
        assert_eq!(d4.orthogonal_constituents().unwrap().len(), 1);

        let pair = parse_form("deutsch-pair").unwrap();
        assert_eq!(pair.orthogonal_constituents().unwrap().len(), 2);
    }

    #[test]
    fn radical_quotient_examples() {
        let zero = vec![vec![BigInt::zero(); 3]; 3];
        let (q, _) = radical_quotient(&zero).unwrap();
        assert_eq!(q.rank, 0);

        let psd = vec![
            vec![BigInt::from(2), BigInt::from(2)],
            vec![BigInt::from(2), BigInt::from(2)],
        ];
        let (q, p) = radical_quotient(&psd).unwrap();
        assert_eq!(q.rank, 1);
        assert_eq!(q.doubled[0][0], BigInt::from(2)); // x^2
        // value preservation through the projection on a few vectors
        let form = ZForm::from_doubled(psd.clone()).unwrap();
        for v in [[1i64, 0], [0, 1], [3, -2], [5, 5]] {
            let vv: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            let pv = intmat::mat_vec(&p, &vv);
            assert_eq!(form.evaluate(&vv), q.evaluate(&pv));
        }

        let def = zf(&[&[2, 1], &[1, 2]]);
        let (q, p) = radical_quotient(&def.doubled).unwrap();
        assert_eq!(q, def);
        assert_eq!(p, intmat::identity(2));

        let indef = vec![
            vec![BigInt::from(2), BigInt::from(2)],
            vec![BigInt::from(2), BigInt::from(0)],
        ];
        assert_eq!(radical_quotient(&indef).unwrap_err(), Error::NotSemidefinite);
    }

    #[test]
    fn equivalence_detects_basis_change() {
        let i2 = ZForm::identity(2).unwrap();
        let other = zf(&[&[2, 2], &[2, 4]]); // [[1,1],[1,2]] ~ I2
        let u = equivalent(&other, &i2).unwrap().unwrap();
        let ut_d_u = intmat::mat_mul(
            &intmat::transpose(&u),
            &intmat::mat_mul(&other.doubled, &u),
        );
        assert_eq!(ut_d_u, i2.doubled);
        let a2 = parse_form("a2").unwrap();
        assert!(equivalent(&a2, &i2).unwrap().is_none());
    }

    #[test]
    fn paper_quintic_gram_has_min_5() {
        let rows: [[i64; 5]; 5] = [
            [5, -5, 11, -13, 30],
            [-5, 11, -13, 30, -35],
            [11, -13, 30, -35, 86],
            [-13, 30, -35, 86, -94],
            [30, -35, 86, -94, 252],
        ];
        let gram: IMat = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let q = ZForm::from_integral_gram(gram).unwrap();
        assert!(q.is_positive_definite());
        assert_eq!(q.minima().unwrap().min, BigInt::from(5));
    }
}
