//! Smith normal form with small transforms.
//!
//! The input is first brought to column and then row Hermite form. After
//! each Hermite pass the kernel part of the transform is LLL-reduced and the
//! remaining columns (or rows) are size-reduced against it, which removes the
//! coefficient growth that plain elimination produces. The nonsingular core
//! left over is diagonalized by elimination with the smallest-pivot rule.
//! All arithmetic is arbitrary precision; only the results are narrowed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;
use super::KError;

/// `u * a * v = d` with `u`, `v` unimodular and `d` in Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i)).take_while(|&x| x != 0).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Columns of `v` spanning the integer kernel of the input.
    pub fn kernel_basis(&self) -> IntMatrix {
        self.v.columns(self.rank()..self.v.cols())
    }
}

#[derive(Clone)]
struct Mat {
    rows: usize,
    cols: usize,
    a: Vec<BigInt>,
}

impl Mat {
    fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, a: vec![BigInt::zero(); rows * cols] }
    }

    fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.a[i * n + i] = BigInt::one();
        }
        m
    }

    fn from(m: &IntMatrix) -> Self {
        let a = (0..m.rows()).flat_map(|r| m.row(r).iter().map(|&x| BigInt::from(x))).collect();
        Mat { rows: m.rows(), cols: m.cols(), a }
    }

    fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.a[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, x: BigInt) {
        self.a[r * self.cols + c] = x;
    }

    fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let mut b = Mat::zeros(rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                b.set(i, j, self.get(r, c).clone());
            }
        }
        b
    }

    /// `diag(self, I_extra)`
    fn pad(&self, extra: usize) -> Mat {
        let n = self.rows + extra;
        let mut m = Mat::identity(n);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        m
    }

    fn mul(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let y = o.get(k, c);
                    if !y.is_zero() {
                        m.a[r * o.cols + c] += x * y;
                    }
                }
            }
        }
        m
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        for c in 0..self.cols {
            self.a.swap(x * self.cols + c, y * self.cols + c);
        }
    }

    fn swap_cols(&mut self, x: usize, y: usize) {
        for r in 0..self.rows {
            self.a.swap(r * self.cols + x, r * self.cols + y);
        }
    }

    /// `row dst += k * row src`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let x = self.get(src, c) * k;
            self.a[dst * self.cols + c] += x;
        }
    }

    /// `col dst += k * col src`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let x = self.get(r, src) * k;
            self.a[r * self.cols + dst] += x;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let x = -self.get(r, c);
            self.set(r, c, x);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let x = -self.get(r, c);
            self.set(r, c, x);
        }
    }

    /// Columns `(s, t) <- (x s + y t, z s + w t)`.
    fn combine_cols(&mut self, s: usize, t: usize, [x, y, z, w]: &[BigInt; 4]) {
        for r in 0..self.rows {
            let (p, q) = (self.get(r, s).clone(), self.get(r, t).clone());
            self.set(r, s, x * &p + y * &q);
            self.set(r, t, z * &p + w * &q);
        }
    }

    fn narrow(&self) -> Result<IntMatrix, KError> {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).to_i64().ok_or(KError::Overflow)?);
            }
        }
        Ok(m)
    }
}

/// Column Hermite form of `d` in place, mirroring each column operation on
/// `t`. Pivot entries are positive and entries left of a pivot lie in
/// `[0, pivot)`. Returns the rank; columns from the rank on are zero.
fn column_hermite(d: &mut Mat, t: &mut Mat) -> usize {
    let mut k = 0;
    for r in 0..d.rows {
        if k == d.cols {
            break;
        }
        for j in k + 1..d.cols {
            if d.get(r, j).is_zero() {
                continue;
            }
            if d.get(r, k).is_zero() {
                d.swap_cols(k, j);
                t.swap_cols(k, j);
                continue;
            }
            let (p, q) = (d.get(r, k).clone(), d.get(r, j).clone());
            let e = p.extended_gcd(&q);
            let g = e.gcd;
            let coeffs = [e.x, e.y, -(&q / &g), &p / &g];
            d.combine_cols(k, j, &coeffs);
            t.combine_cols(k, j, &coeffs);
        }
        if d.get(r, k).is_zero() {
            continue;
        }
        if d.get(r, k).is_negative() {
            d.negate_col(k);
            t.negate_col(k);
        }
        let p = d.get(r, k).clone();
        for j in 0..k {
            let q = d.get(r, j).div_floor(&p);
            if !q.is_zero() {
                d.add_col(j, k, &-&q);
                t.add_col(j, k, &-&q);
            }
        }
        k += 1;
    }
    k
}

fn col_dot(t: &Mat, a: usize, b: usize, h: usize) -> BigInt {
    (0..h).map(|r| t.get(r, a) * t.get(r, b)).sum()
}

/// Nearest integer to `n / d` for `d > 0`.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let twice: BigInt = n * 2 + d;
    twice.div_floor(&(d * 2))
}

/// An elementary column operation, reported so that it can be mirrored.
enum ColOp {
    /// `col dst += k * col src`
    Add(usize, usize, BigInt),
    Swap(usize, usize),
}

fn apply(t: &mut Mat, op: &ColOp) {
    match op {
        ColOp::Add(dst, src, k) => t.add_col(*dst, *src, k),
        ColOp::Swap(a, b) => t.swap_cols(*a, *b),
    }
}

/// Integral LLL state over columns `cols` of a matrix, with inner products
/// taken over its first `h` rows. `d[i]` is the Gram determinant of the
/// first `i` vectors and `lam[k][j] = d[j+1] μ_{k,j}`; everything stays in
/// the integers.
struct Lll {
    cols: Vec<usize>,
    h: usize,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl Lll {
    fn new(cols: &[usize], h: usize) -> Self {
        let n = cols.len();
        Lll { cols: cols.to_vec(), h, d: vec![BigInt::one(); n + 1], lam: vec![vec![BigInt::zero(); n]; n] }
    }

    /// Gram-Schmidt data for vector `k`, given all earlier ones.
    fn incorporate(&mut self, t: &Mat, k: usize) {
        for j in 0..=k {
            let mut u = col_dot(t, self.cols[k], self.cols[j], self.h);
            for i in 0..j {
                u = (&self.d[i + 1] * u - &self.lam[k][i] * &self.lam[j][i]) / &self.d[i];
            }
            if j < k {
                self.lam[k][j] = u;
            } else {
                self.d[k + 1] = u;
            }
        }
    }

    fn reduce(&mut self, t: &mut Mat, k: usize, l: usize, mirror: &mut dyn FnMut(&ColOp)) {
        let dl = &self.d[l + 1];
        if BigInt::from(2) * self.lam[k][l].abs() <= *dl {
            return;
        }
        let q = round_div(&self.lam[k][l], dl);
        let op = ColOp::Add(self.cols[k], self.cols[l], -&q);
        apply(t, &op);
        mirror(&op);
        self.lam[k][l] -= &q * dl;
        for i in 0..l {
            let x = &q * &self.lam[l][i];
            self.lam[k][i] -= x;
        }
    }

    fn swap(&mut self, t: &mut Mat, k: usize, kmax: usize, mirror: &mut dyn FnMut(&ColOp)) {
        let op = ColOp::Swap(self.cols[k], self.cols[k - 1]);
        apply(t, &op);
        mirror(&op);
        for j in 0..k - 1 {
            let x = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], x);
        }
        let lam = self.lam[k][k - 1].clone();
        let b = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k + 1] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k];
            self.lam[i][k - 1] = (&b * t + &lam * &self.lam[i][k]) / &self.d[k + 1];
        }
        self.d[k] = b;
    }

    /// Reduces the (linearly independent) vectors with δ = 3/4.
    fn run(&mut self, t: &mut Mat, mirror: &mut dyn FnMut(&ColOp)) {
        let n = self.cols.len();
        if n == 0 {
            return;
        }
        self.incorporate(t, 0);
        let mut kmax = 0;
        let mut k = 1;
        while k < n {
            if k > kmax {
                kmax = k;
                self.incorporate(t, k);
            }
            self.reduce(t, k, k - 1, mirror);
            let lhs = BigInt::from(4) * &self.d[k + 1] * &self.d[k - 1];
            let rhs = BigInt::from(3) * &self.d[k] * &self.d[k] - BigInt::from(4) * &self.lam[k][k - 1] * &self.lam[k][k - 1];
            if lhs < rhs {
                self.swap(t, k, kmax, mirror);
                k = (k - 1).max(1);
            } else {
                for l in (0..k - 1).rev() {
                    self.reduce(t, k, l, mirror);
                }
                k += 1;
            }
        }
    }
}

fn lll(t: &mut Mat, cols: &[usize], h: usize, mirror: &mut dyn FnMut(&ColOp)) {
    Lll::new(cols, h).run(t, mirror);
}

/// Nearest-plane reduction of column `target` of `t` against the lattice
/// spanned by `gens` (given as integer combinations of columns of `t`). The
/// combinations are LLL-reduced first. Calls `step(src, k)` for every
/// `col target += k * col src` it performs.
fn nearest_plane(t: &Mat, target: usize, gens: &[Vec<(usize, BigInt)>], step: &mut dyn FnMut(usize, &BigInt)) {
    if gens.is_empty() {
        return;
    }
    let (h, g) = (t.rows, gens.len());
    // Generators then the target on top; coefficients relative to the
    // columns of `t` below.
    let mut c = Mat::zeros(h + t.cols, g + 1);
    for (k, gen) in gens.iter().enumerate() {
        for (src, w) in gen {
            for r in 0..h {
                let x = t.get(r, *src) * w;
                c.a[r * (g + 1) + k] += x;
            }
            c.a[(h + src) * (g + 1) + k] += w;
        }
    }
    for r in 0..h {
        c.set(r, g, t.get(r, target).clone());
    }
    let basis: Vec<usize> = (0..g).collect();
    lll(&mut c, &basis, h, &mut |_| {});
    // Size reduction of the appended target is nearest-plane rounding.
    let mut all = basis;
    all.push(g);
    let mut state = Lll::new(&all, h);
    for k in 0..g {
        state.incorporate(&c, k);
    }
    for j in 0..g {
        let mut u = col_dot(&c, g, j, h);
        for i in 0..j {
            u = (&state.d[i + 1] * u - &state.lam[g][i] * &state.lam[j][i]) / &state.d[i];
        }
        state.lam[g][j] = u;
    }
    let mut moves = Vec::new();
    for l in (0..g).rev() {
        state.reduce(&mut c, g, l, &mut |op| {
            if let ColOp::Add(_, src, k) = op {
                moves.push((*src, k.clone()));
            }
        });
    }
    for (k, q) in moves {
        for src in 0..t.cols {
            let w = c.get(h + src, k);
            if !w.is_zero() {
                step(src, &(&q * w));
            }
        }
    }
}

/// LLL-reduces the kernel columns `rank..` of `t`, then moves each earlier
/// column to the nearest point of its coset modulo their span.
fn reduce_transform(t: &mut Mat, rank: usize) {
    let kernel: Vec<usize> = (rank..t.cols).collect();
    if kernel.is_empty() {
        return;
    }
    lll(t, &kernel, t.rows, &mut |_| {});
    let gens: Vec<Vec<(usize, BigInt)>> = kernel.iter().map(|&k| vec![(k, BigInt::one())]).collect();
    for c in 0..rank {
        let mut moves = Vec::new();
        nearest_plane(t, c, &gens, &mut |src, k| moves.push((src, k.clone())));
        for (src, k) in moves {
            t.add_col(c, src, &k);
        }
    }
}

/// Shrinks `u` and `v` while keeping `u a v = d`, where `d` has diagonal
/// `diag` (with zeros past it). Writing `d_k` for the k-th entry, for `i < j`
/// the move `col_i(v) += c col_j(v)` is paired with
/// `row_j(u) -= c (d_j / d_i) row_i(u)`, and `col_j(v) += c (d_j / d_i) col_i(v)`
/// with `row_i(u) -= c row_j(u)`. Within a block of equal `d_k` this allows
/// full LLL reduction; across blocks it allows size reduction.
fn shrink_transforms(u: &mut Mat, v: &mut Mat, diag: &[BigInt]) {
    let n = v.cols;
    let rank = diag.iter().take_while(|x| !x.is_zero()).count();
    let dk = |k: usize| diag.get(k).cloned().unwrap_or_else(BigInt::zero);

    let mut start = 0;
    while start < rank {
        let end = (start..rank).find(|&k| diag[k] != diag[start]).unwrap_or(rank);
        let block: Vec<usize> = (start..end).collect();
        lll(v, &block, v.rows, &mut |op| match op {
            ColOp::Add(dst, src, k) => u.add_row(*src, *dst, &-k),
            ColOp::Swap(a, b) => u.swap_rows(*a, *b),
        });
        start = end;
    }

    // Later image columns against scaled earlier ones.
    for j in 1..rank {
        let gens: Vec<Vec<(usize, BigInt)>> = (0..j).map(|i| vec![(i, &diag[j] / &diag[i])]).collect();
        let mut moves = Vec::new();
        nearest_plane(v, j, &gens, &mut |src, k| moves.push((src, k.clone())));
        for (i, k) in moves {
            // `k` is a multiple of d_j / d_i: col_j += k col_i, row_i -= (k d_i / d_j) row_j.
            v.add_col(j, i, &k);
            u.add_row(i, j, &-(&k * &diag[i] / &diag[j]));
        }
    }

    // Earlier image columns against everything after them.
    for (i, di) in diag.iter().enumerate().take(rank) {
        let gens: Vec<Vec<(usize, BigInt)>> = (i + 1..n).map(|j| vec![(j, BigInt::one())]).collect();
        let mut moves = Vec::new();
        nearest_plane(v, i, &gens, &mut |src, k| moves.push((src, k.clone())));
        for (j, k) in moves {
            v.add_col(i, j, &k);
            let dj = dk(j);
            if !dj.is_zero() {
                u.add_row(j, i, &-(&k * &dj / di));
            }
        }
    }

    // Rows of `u` meeting only zeros of `d` are free.
    let mut ut = u.transpose();
    reduce_transform(&mut ut, rank);
    *u = ut.transpose();
}

/// Smallest nonzero |entry| in the trailing block from `t`; ties go to the
/// leftmost column, then the topmost row.
fn find_pivot(d: &Mat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for c in t..d.cols {
        for r in t..d.rows {
            let x = d.get(r, c).abs();
            if !x.is_zero() && best.as_ref().is_none_or(|(b, _, _)| &x < b) {
                best = Some((x, r, c));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

/// Diagonalizes `d` by elimination, recording row operations in `u` and
/// column operations in `v`.
fn eliminate(d: &mut Mat, u: &mut Mat, v: &mut Mat) {
    let (m, n) = (d.rows, d.cols);
    let mut t = 0;
    while t < m.min(n) {
        let Some((r, c)) = find_pivot(d, t) else { break };
        d.swap_rows(t, r);
        u.swap_rows(t, r);
        d.swap_cols(t, c);
        v.swap_cols(t, c);

        let p = d.get(t, t).clone();
        let mut dirty = false;
        for i in t + 1..m {
            let q = d.get(i, t) / &p;
            if !q.is_zero() {
                d.add_row(i, t, &-&q);
                u.add_row(i, t, &-&q);
            }
            dirty |= !d.get(i, t).is_zero();
        }
        for j in t + 1..n {
            let q = d.get(t, j) / &p;
            if !q.is_zero() {
                d.add_col(j, t, &-&q);
                v.add_col(j, t, &-&q);
            }
            dirty |= !d.get(t, j).is_zero();
        }
        if dirty {
            // A nonzero remainder smaller than |p| is now present; re-pivot.
            continue;
        }

        let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(d.get(i, j) % &p).is_zero()));
        if let Some(i) = bad {
            d.add_row(t, i, &BigInt::one());
            u.add_row(t, i, &BigInt::one());
            continue;
        }

        if p.is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Result<Snf, KError> {
    let (m, n) = (a.rows(), a.cols());

    // a t = [x | 0] with x of full column rank.
    let mut h = Mat::from(a);
    let mut t = Mat::identity(n);
    let rank = column_hermite(&mut h, &mut t);
    reduce_transform(&mut t, rank);

    // s x = [y; 0], computed as column operations on the transpose.
    let mut xt = h.block(0..m, 0..rank).transpose();
    let mut st = Mat::identity(m);
    column_hermite(&mut xt, &mut st);
    reduce_transform(&mut st, rank);
    let s = st.transpose();
    let mut y = xt.block(0..rank, 0..rank).transpose();

    let mut p = Mat::identity(rank);
    let mut q = Mat::identity(rank);
    eliminate(&mut y, &mut p, &mut q);

    let mut u = p.pad(m - rank).mul(&s);
    let mut v = t.mul(&q.pad(n - rank));
    let diag: Vec<BigInt> = (0..rank).map(|i| y.get(i, i).clone()).collect();
    shrink_transforms(&mut u, &mut v, &diag);
    let mut d = Mat::zeros(m, n);
    for (i, x) in diag.into_iter().enumerate() {
        d.set(i, i, x);
    }
    Ok(Snf { u: u.narrow()?, d: d.narrow()?, v: v.narrow()? })
}
