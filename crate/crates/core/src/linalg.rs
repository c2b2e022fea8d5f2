//! Exact linear algebra over Q and Z.
//!
//! Everything here works with arbitrary-precision rationals and integers.
//! Ranks of large sparse matrices go through [`SparseMatrix::rank`], which
//! splits the matrix into connected blocks and runs fraction-free
//! elimination on each block, first in `i128` and, if an intermediate value
//! overflows, again in `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

pub fn qvec(values: &[i64]) -> Vec<Q> {
    values.iter().map(|&v| q(v)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Q], b: &[i64]) -> Q {
    a.iter()
        .zip(b)
        .fold(Q::zero(), |acc, (x, &y)| acc + x * BigInt::from(y))
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_integral(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Converts an integral rational vector to `i64`; `None` if any entry is not
/// an integer or does not fit.
pub fn to_i64_vec(v: &[Q]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                x.to_integer().to_i64()
            } else {
                None
            }
        })
        .collect()
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Scales a nonzero rational vector to the primitive integer vector pointing
/// in the same direction.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Reduced row-echelon form, in place. Columns are visited in `order`; the
/// returned pivots are listed in the order they were found. Zero rows are
/// dropped so that `rows.len()` equals the rank afterwards.
pub fn rref_in_order(rows: &mut Vec<Vec<Q>>, order: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in order {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Reduced row-echelon form with the natural column order.
pub fn rref(rows: &mut Vec<Vec<Q>>, ncols: usize) -> Vec<usize> {
    let order: Vec<usize> = (0..ncols).collect();
    rref_in_order(rows, &order)
}

pub fn rank_dense(rows: &[Vec<Q>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Canonical basis of the right kernel `{x : A x = 0}` of `rows` (each of
/// length `ncols`): the kernel basis is itself returned in reduced
/// row-echelon form, together with its pivot columns.
pub fn kernel(rows: &[Vec<Q>], ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vec<Q>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    let basis_pivots = rref(&mut basis, ncols);
    (basis, basis_pivots)
}

/// Solves the square system `A x = b`; `None` when `A` is singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let order: Vec<usize> = (0..n).collect();
    let pivots = rref_in_order(&mut aug, &order);
    if pivots.len() < n {
        return None;
    }
    Some(aug.iter().map(|row| row[n].clone()).collect())
}

/// Solves `A x = b` for a possibly rectangular system, returning one solution
/// (free variables set to zero) or `None` if inconsistent.
pub fn solve_any(a: &[Vec<Q>], b: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m = a.to_vec();
    let mut result = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            result = -result;
        }
        let pivot = m[c][c].clone();
        result *= &pivot;
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] / &pivot;
            for j in c..n {
                let sub = &factor * &m[c][j];
                m[i][j] -= sub;
            }
        }
    }
    result
}

pub fn invert(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let order: Vec<usize> = (0..n).collect();
    if rref_in_order(&mut aug, &order).len() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Z-basis, in Hermite normal form, of the saturated lattice
/// `{x ∈ Z^ncols : A x = 0}`.
pub fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    // Column operations A U = [H | 0]; the trailing columns of U span the kernel.
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut col = 0;
    for r in 0..a.len() {
        if col == ncols {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (col..ncols).filter(|&c| !a[r][c].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let &best = nonzero
                .iter()
                .min_by(|&&x, &&y| a[r][x].abs().cmp(&a[r][y].abs()))
                .unwrap();
            swap_cols(&mut a, &mut u, col, best);
            let mut done = true;
            for c in col + 1..ncols {
                if a[r][c].is_zero() {
                    continue;
                }
                let factor = a[r][c].div_floor(&a[r][col]);
                add_col_multiple(&mut a, &mut u, c, col, &-factor);
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                col += 1;
                break;
            }
        }
    }
    let basis: Vec<Vec<BigInt>> = (col..ncols)
        .map(|c| (0..ncols).map(|i| u[i][c].clone()).collect())
        .collect();
    hermite_rows(basis, ncols)
}

fn swap_cols(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut().chain(u.iter_mut()) {
        row.swap(i, j);
    }
}

/// column `dst` += factor * column `src`
fn add_col_multiple(
    a: &mut [Vec<BigInt>],
    u: &mut [Vec<BigInt>],
    dst: usize,
    src: usize,
    factor: &BigInt,
) {
    for row in a.iter_mut().chain(u.iter_mut()) {
        let add = &row[src] * factor;
        row[dst] += add;
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: echelon,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped.
pub fn hermite_rows(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let Some(best) = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&x, &y| rows[x][c].abs().cmp(&rows[y][c].abs()))
            else {
                break;
            };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let factor = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let pivot_row = rows[r].clone();
            for i in 0..r {
                let factor = rows[i][c].div_floor(&pivot_row[c]);
                if factor.is_zero() {
                    continue;
                }
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

/// A sparse rational matrix stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    rows: Vec<Vec<(usize, Q)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    /// Adds `value` to entry `(row, col)`.
    pub fn add(&mut self, row: usize, col: usize, value: Q) {
        if value.is_zero() {
            return;
        }
        let entries = &mut self.rows[row];
        if let Some(slot) = entries.iter_mut().find(|(c, _)| *c == col) {
            slot.1 += value;
        } else {
            entries.push((col, value));
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Q {
        self.rows[row]
            .iter()
            .find(|(c, _)| *c == col)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, &Q)> {
        self.rows[row]
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (*c, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut dense = vec![vec![Q::zero(); self.ncols]; self.nrows];
        for (r, entries) in self.rows.iter().enumerate() {
            for (c, v) in entries {
                dense[r][*c] += v;
            }
        }
        dense
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|(_, v)| v.is_zero())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut out = SparseMatrix::new(self.nrows, other.ncols);
        for r in 0..self.nrows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    out.add(r, c, a * b);
                }
            }
        }
        out
    }

    /// Multiplies every entry of column `col` by `factor`.
    pub fn scale_col(&mut self, col: usize, factor: &Q) {
        for entries in &mut self.rows {
            for (c, v) in entries.iter_mut() {
                if *c == col {
                    *v *= factor;
                }
            }
        }
    }

    /// Exact rank over Q.
    pub fn rank(&self) -> usize {
        let int_rows: Vec<Vec<(usize, BigInt)>> = self
            .rows
            .iter()
            .map(|entries| integer_row(entries))
            .filter(|r| !r.is_empty())
            .collect();
        components(&int_rows, self.ncols)
            .into_iter()
            .map(|(row_ids, cols)| block_rank(&int_rows, &row_ids, &cols))
            .sum()
    }
}

fn integer_row(entries: &[(usize, Q)]) -> Vec<(usize, BigInt)> {
    let nonzero: Vec<&(usize, Q)> = entries.iter().filter(|(_, v)| !v.is_zero()).collect();
    let lcm = nonzero
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    nonzero
        .into_iter()
        .map(|(c, v)| (*c, (v * &lcm).to_integer()))
        .collect()
}

/// Groups rows into blocks that share no columns.
fn components(rows: &[Vec<(usize, BigInt)>], ncols: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut parent: Vec<usize> = (0..ncols).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for row in rows {
        let first = row[0].0;
        for (c, _) in &row[1..] {
            let a = find(&mut parent, first);
            let b = find(&mut parent, *c);
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut block_of_root = std::collections::HashMap::new();
    let mut blocks: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let root = find(&mut parent, row[0].0);
        let id = *block_of_root.entry(root).or_insert_with(|| {
            blocks.push((Vec::new(), Vec::new()));
            blocks.len() - 1
        });
        blocks[id].0.push(i);
    }
    for c in 0..ncols {
        let root = find(&mut parent, c);
        if let Some(&id) = block_of_root.get(&root) {
            blocks[id].1.push(c);
        }
    }
    blocks
}

fn block_rank(rows: &[Vec<(usize, BigInt)>], row_ids: &[usize], cols: &[usize]) -> usize {
    let local: std::collections::HashMap<usize, usize> =
        cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense_big: Vec<Vec<BigInt>> = row_ids
        .iter()
        .map(|&r| {
            let mut v = vec![BigInt::zero(); cols.len()];
            for (c, x) in &rows[r] {
                v[local[c]] = x.clone();
            }
            v
        })
        .collect();
    let small: Option<Vec<Vec<i128>>> = dense_big
        .iter()
        .map(|row| row.iter().map(|x| x.to_i128()).collect())
        .collect();
    if let Some(mut m) = small {
        if let Some(rank) = fraction_free_rank(&mut m, cols.len()) {
            return rank;
        }
    }
    let mut m = dense_big;
    fraction_free_rank(&mut m, cols.len()).expect("BigInt elimination cannot overflow")
}

/// Integer-preserving Gaussian elimination; pivots on the entry of least
/// absolute value in each column and divides every updated row by its
/// content. Returns `None` on overflow of `T`.
pub fn fraction_free_rank<T>(m: &mut [Vec<T>], ncols: usize) -> Option<usize>
where
    T: Integer + Signed + Clone + CheckedMul + CheckedSub,
{
    let nrows = m.len();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by(|&x, &y| m[x][c].abs().cmp(&m[y][c].abs()))
        else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row[c].clone();
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = row[c].gcd(&pivot);
            let row_factor = pivot.div_floor(&g);
            let pivot_factor = row[c].div_floor(&g);
            let mut content = T::zero();
            for j in c..ncols {
                let lhs = row[j].checked_mul(&row_factor)?;
                let rhs = pivot_row[j].checked_mul(&pivot_factor)?;
                row[j] = lhs.checked_sub(&rhs)?;
                content = content.gcd(&row[j]);
            }
            if !content.is_zero() && !content.is_one() {
                for x in row[c..].iter_mut() {
                    *x = x.div_floor(&content);
                }
            }
        }
        r += 1;
    }
    Some(r)
}

/// Binomial coefficient with the convention `C(n, m) = 0` for `m < 0` or
/// `m > n` (in particular for negative `n`).
pub fn binomial(n: i64, m: i64) -> i64 {
    if m < 0 || n < 0 || m > n {
        return 0;
    }
    let m = m.min(n - m);
    let mut acc: i128 = 1;
    for i in 0..m {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn kernel_of_single_ray_is_echelon() {
        let (basis, pivots) = kernel(&[qvec(&[1, 2])], 2);
        assert_eq!(
            basis,
            vec![vec![q(1), Q::new(BigInt::from(-1), BigInt::from(2))]]
        );
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // x + 2y + 3z = 0 has lattice basis of covolume 1 in the plane.
        let basis = integer_kernel(&big(&[&[1, 2, 3]]), 3);
        assert_eq!(basis.len(), 2);
        for b in &basis {
            let s = &b[0] + BigInt::from(2) * &b[1] + BigInt::from(3) * &b[2];
            assert!(s.is_zero());
        }
        // saturated: the 2x2 minors have gcd 1
        let minors = [
            &basis[0][0] * &basis[1][1] - &basis[0][1] * &basis[1][0],
            &basis[0][0] * &basis[1][2] - &basis[0][2] * &basis[1][0],
            &basis[0][1] * &basis[1][2] - &basis[0][2] * &basis[1][1],
        ];
        let g = minors.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
        assert!(g.is_one());
    }

    #[test]
    fn integer_kernel_of_zero_matrix_is_identity() {
        let basis = integer_kernel(&[], 2);
        assert_eq!(basis, big(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_rows(big(&[&[2, 4], &[1, 3]]), 2);
        let b = hermite_rows(big(&[&[1, 3], &[1, 1]]), 2);
        assert_eq!(a, b);
        assert_eq!(a, big(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let mut m = SparseMatrix::new(4, 5);
        let entries = [
            (0, 0, 2),
            (0, 1, -1),
            (1, 1, 3),
            (1, 0, -6),
            (2, 3, 1),
            (2, 4, 1),
            (3, 3, 2),
            (3, 4, 2),
        ];
        for (r, c, v) in entries {
            m.add(r, c, q(v));
        }
        assert_eq!(m.rank(), 2);
        assert_eq!(rank_dense(&m.to_dense(), 5), 2);
    }

    #[test]
    fn large_entries_fall_back_to_bigint() {
        let big_val = i64::MAX / 2;
        let mut m = SparseMatrix::new(3, 3);
        for (r, c, v) in [
            (0, 0, big_val),
            (0, 1, big_val - 1),
            (1, 0, big_val - 3),
            (1, 1, big_val),
            (2, 2, big_val),
            (2, 0, 7),
        ] {
            m.add(r, c, q(v));
        }
        assert_eq!(m.rank(), rank_dense(&m.to_dense(), 3));
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, -1), 0);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn det_and_inverse() {
        let a = vec![qvec(&[1, 0]), qvec(&[1, 2])];
        assert_eq!(det(&a), q(2));
        let inv = invert(&a).unwrap();
        assert_eq!(inv[1][0], Q::new(BigInt::from(-1), BigInt::from(2)));
    }
}
