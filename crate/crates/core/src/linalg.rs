//! Dense matrices over a [`FieldCtx`].
//!
//! Row-vector convention throughout: a linear map acts on coordinate rows
//! as `v ↦ v·M`, subspaces are row spaces, kernels are left kernels.
//! Prime fields take a fast path with deferred modular reduction.

use std::fmt;

use crate::ff::{FieldCtx, Fq, ModP, Poly};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.ctx.label())?;
        for i in 0..self.rows.min(12) {
            let row: Vec<String> = self.row(i).iter().take(16).map(|&x| self.ctx.fmt_elem(x)).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form of a row space.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// rank × cols, pivot entries 1, zero elsewhere in pivot columns.
    pub basis: Matrix,
    /// Pivot column of each basis row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the basis in place; afterwards `v` vanishes on
    /// all pivot columns. Returns the coordinates that were subtracted.
    pub fn reduce(&self, v: &mut [Fq]) -> Vec<Fq> {
        let f = &self.basis.ctx;
        let mut coords = vec![0; self.rank()];
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c != 0 {
                coords[i] = c;
                axpy(f, v, f.neg(c), self.basis.row(i));
            }
        }
        coords
    }

    /// Coordinates of `v` in the basis when `v` lies in the span.
    pub fn coords(&self, v: &[Fq]) -> Option<Vec<Fq>> {
        let mut w = v.to_vec();
        let c = self.reduce(&mut w);
        w.iter().all(|&x| x == 0).then_some(c)
    }

    pub fn contains(&self, v: &[Fq]) -> bool {
        self.coords(v).is_some()
    }
}

/// `dst += c · src` elementwise.
#[inline]
pub fn axpy(f: &FieldCtx, dst: &mut [Fq], c: Fq, src: &[Fq]) {
    if c == 0 {
        return;
    }
    if f.is_prime_field() {
        let m: ModP = f.fastmod();
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = m.reduce(*d + c * s);
        }
    } else {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = f.add(*d, f.mul(c, s));
        }
    }
}

pub fn scale_in_place(f: &FieldCtx, v: &mut [Fq], c: Fq) {
    if f.is_prime_field() {
        let m = f.fastmod();
        for x in v.iter_mut() {
            *x = m.reduce(*x * c);
        }
    } else {
        for x in v.iter_mut() {
            *x = f.mul(*x, c);
        }
    }
}

impl Matrix {
    pub fn zeros(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix { ctx: ctx.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        Self::scalar(ctx, n, 1)
    }

    pub fn scalar(ctx: &FieldCtx, n: usize, c: Fq) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_flat(ctx: &FieldCtx, rows: usize, cols: usize, data: Vec<Fq>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { ctx: ctx.clone(), rows, cols, data }
    }

    pub fn from_rows(ctx: &FieldCtx, cols: usize, rows: &[Vec<Fq>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Matrix { ctx: ctx.clone(), rows: rows.len(), cols, data }
    }

    pub fn from_ints(ctx: &FieldCtx, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let v: Vec<Vec<Fq>> = rows.iter().map(|r| r.iter().map(|&x| ctx.from_int(x)).collect()).collect();
        Self::from_rows(ctx, cols, &v)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[Fq] {
        &self.data
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Fq] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_vecs(&self) -> Vec<Vec<Fq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn push_row(&mut self, r: &[Fq]) {
        assert_eq!(r.len(), self.cols);
        self.data.extend_from_slice(r);
        self.rows += 1;
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { ctx: self.ctx.clone(), rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            let r = self.row(i);
            data.extend(idx.iter().map(|&j| r[j]));
        }
        Matrix { ctx: self.ctx.clone(), rows: self.rows, cols: idx.len(), data }
    }

    /// First `n` columns.
    pub fn truncate_cols(&self, n: usize) -> Matrix {
        self.select_cols(&(0..n.min(self.cols)).collect::<Vec<_>>())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = &self.ctx;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = &self.ctx;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn scale(&self, c: Fq) -> Matrix {
        let mut m = self.clone();
        scale_in_place(&self.ctx, &mut m.data, c);
        m
    }

    /// `self − λ·I`.
    pub fn sub_scalar(&self, lambda: Fq) -> Matrix {
        assert!(self.is_square());
        let mut m = self.clone();
        let f = &self.ctx;
        for i in 0..self.rows {
            let v = m.get(i, i);
            m.set(i, i, f.sub(v, lambda));
        }
        m
    }

    pub fn trace(&self) -> Fq {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| self.ctx.add(acc, self.get(i, i)))
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let f = &self.ctx;
        let mut out = Matrix::zeros(f, self.rows, o.cols);
        if f.is_prime_field() {
            let m = f.fastmod();
            let mut acc = vec![0u64; o.cols];
            for i in 0..self.rows {
                acc.iter_mut().for_each(|x| *x = 0);
                for (k, &a) in self.row(i).iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    let a = a as u64;
                    for (x, &b) in acc.iter_mut().zip(o.row(k)) {
                        *x += a * b as u64;
                    }
                }
                for (d, &x) in out.row_mut(i).iter_mut().zip(&acc) {
                    *d = m.reduce64(x);
                }
            }
        } else {
            for i in 0..self.rows {
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a == 0 {
                        continue;
                    }
                    let (src, dst) = (o.row(k).to_vec(), out.row_mut(i));
                    axpy(f, dst, a, &src);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Fq]) -> Vec<Fq> {
        let m = Matrix::from_flat(&self.ctx, 1, v.len(), v.to_vec());
        m.mul(self).data
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.ctx, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn commutes_with(&self, o: &Matrix) -> bool {
        self.mul(o) == o.mul(self)
    }

    /// Gauss–Jordan elimination in place. Returns pivot columns; rows past
    /// the rank are left zero. When `transform` is given, the same row
    /// operations are applied to it.
    fn gauss_jordan(&mut self, mut transform: Option<&mut Matrix>) -> Vec<usize> {
        let f = self.ctx.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else { continue };
            if pr != r {
                self.swap_rows(pr, r);
                if let Some(t) = transform.as_deref_mut() {
                    t.swap_rows(pr, r);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).unwrap();
            scale_in_place(&f, &mut self.data[r * cols + c..(r + 1) * cols], inv);
            if let Some(t) = transform.as_deref_mut() {
                scale_in_place(&f, t.row_mut(r), inv);
            }
            let pivot_row = self.data[r * cols + c..(r + 1) * cols].to_vec();
            let t_row = transform.as_deref().map(|t| t.row(r).to_vec());
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let x = self.data[i * cols + c];
                if x == 0 {
                    continue;
                }
                let nx = f.neg(x);
                axpy(&f, &mut self.data[i * cols + c..(i + 1) * cols], nx, &pivot_row);
                if let (Some(t), Some(tr)) = (transform.as_deref_mut(), t_row.as_ref()) {
                    axpy(&f, t.row_mut(i), nx, tr);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (x, y) = self.data.split_at_mut(hi * c);
        x[lo * c..(lo + 1) * c].swap_with_slice(&mut y[..c]);
    }

    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.gauss_jordan(None);
        m.data.truncate(pivots.len() * m.cols);
        m.rows = pivots.len();
        Echelon { basis: m, pivots }
    }

    /// Echelon form together with `T` such that `T·self` is the echelon
    /// matrix padded with zero rows; rows `rank..` of `T` span the left
    /// kernel.
    pub fn echelon_with_transform(&self) -> (Echelon, Matrix) {
        let mut m = self.clone();
        let mut t = Matrix::identity(&self.ctx, self.rows);
        let pivots = m.gauss_jordan(Some(&mut t));
        m.data.truncate(pivots.len() * m.cols);
        m.rows = pivots.len();
        (Echelon { basis: m, pivots }, t)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Rows `v` with `v·self = 0`, as an echelonized basis.
    pub fn left_kernel(&self) -> Matrix {
        let (e, t) = self.echelon_with_transform();
        let idx: Vec<usize> = (e.rank()..self.rows).collect();
        t.select_rows(&idx).echelon().basis
    }

    /// Column vectors `x` with `self·x = 0`, returned as rows.
    pub fn right_kernel(&self) -> Matrix {
        let e = self.echelon();
        let f = &self.ctx;
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, 1);
            for (i, &pc) in e.pivots.iter().enumerate() {
                out.set(k, pc, f.neg(e.basis.get(i, fc)));
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let (e, t) = self.echelon_with_transform();
        (e.rank() == self.rows).then_some(t)
    }

    /// Left kernel of `self^n` for n large: the generalized 0-eigenspace
    /// for the right action. Computed by repeated squaring until the rank
    /// stabilises.
    pub fn generalized_kernel(&self) -> Matrix {
        assert!(self.is_square());
        let mut b = self.clone();
        let mut rank = b.rank();
        loop {
            if rank == 0 {
                return Matrix::identity(&self.ctx, self.rows);
            }
            let b2 = b.mul(&b);
            let r2 = b2.rank();
            if r2 == rank {
                return b.left_kernel();
            }
            b = b2;
            rank = r2;
        }
    }

    /// Characteristic polynomial det(x·I − self) via Hessenberg reduction.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let f = self.ctx.clone();
        let n = self.rows;
        // Work in column convention internally; the charpoly is the same.
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| h.get(i, m - 1) != 0) else { continue };
            if i != m {
                h.swap_rows(i, m);
                for r in 0..n {
                    let (a, b) = (h.get(r, i), h.get(r, m));
                    h.set(r, i, b);
                    h.set(r, m, a);
                }
            }
            let inv = f.inv(h.get(m, m - 1)).unwrap();
            for i in m + 1..n {
                let u = f.mul(h.get(i, m - 1), inv);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = f.sub(h.get(i, c), f.mul(u, h.get(m, c)));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = f.add(h.get(r, m), f.mul(u, h.get(r, i)));
                    h.set(r, m, v);
                }
            }
        }
        let mut ps: Vec<Poly> = vec![Poly::new(vec![1])];
        for m in 1..=n {
            let x_minus = Poly::new(vec![f.neg(h.get(m - 1, m - 1)), 1]);
            let mut pm = x_minus.mul(&f, &ps[m - 1]);
            let mut t = 1;
            for i in (1..m).rev() {
                t = f.mul(t, h.get(i, i - 1));
                let c = f.mul(t, h.get(i - 1, m - 1));
                pm = pm.sub(&f, &ps[i - 1].mul(&f, &Poly::new(vec![c])));
            }
            ps.push(pm);
        }
        ps.pop().unwrap()
    }
}

/// Restriction of `op` (n×n) to the invariant row space spanned by the
/// rows of `sub` (d×n, full rank): returns X with sub·op = X·sub, or
/// `None` if the space is not invariant.
pub fn restrict(sub: &Matrix, op: &Matrix) -> Option<Matrix> {
    let img = sub.mul(op);
    let (e, t) = sub.echelon_with_transform();
    assert_eq!(e.rank(), sub.rows(), "restrict needs independent rows");
    let d = sub.rows();
    let f = sub.ctx();
    let mut ce = Matrix::zeros(f, d, d);
    for i in 0..d {
        let c = e.coords(img.row(i))?;
        ce.row_mut(i).copy_from_slice(&c);
    }
    let tt = t.select_rows(&(0..d).collect::<Vec<_>>());
    Some(ce.mul(&tt))
}

/// Coordinates of the rows of `w` in terms of the rows of `basis`
/// (independent); `None` if some row lies outside the span.
pub fn express_in(basis: &Matrix, w: &Matrix) -> Option<Matrix> {
    let (e, t) = basis.echelon_with_transform();
    let d = basis.rows();
    let tt = t.select_rows(&(0..d).collect::<Vec<_>>());
    let mut ce = Matrix::zeros(basis.ctx(), w.rows(), e.rank());
    for i in 0..w.rows() {
        let c = e.coords(w.row(i))?;
        ce.row_mut(i).copy_from_slice(&c);
    }
    Some(ce.mul(&tt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use rand::{Rng, SeedableRng};

    fn random(f: &FieldCtx, r: usize, c: usize, rng: &mut impl Rng) -> Matrix {
        Matrix::from_flat(f, r, c, (0..r * c).map(|_| rng.gen_range(0..f.order())).collect())
    }

    fn det_bruteforce(m: &Matrix) -> Fq {
        // Laplace expansion; small n only.
        let f = m.ctx();
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0);
        }
        let mut acc = 0;
        for j in 0..n {
            let minor_rows: Vec<Vec<Fq>> =
                (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| m.get(i, c)).collect()).collect();
            let minor = Matrix::from_rows(f, n - 1, &minor_rows);
            let term = f.mul(m.get(0, j), det_bruteforce(&minor));
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    #[test]
    fn echelon_transform_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, r) in [(5, 1), (7, 1), (5, 2)] {
            let f = make_field(p, r).unwrap();
            for _ in 0..20 {
                let a = random(&f, 6, 9, &mut rng);
                let a = a.select_rows(&[0, 1, 2, 3, 1, 5]); // force dependence
                let (e, t) = a.echelon_with_transform();
                let prod = t.mul(&a);
                for i in 0..e.rank() {
                    assert_eq!(prod.row(i), e.basis.row(i));
                }
                for i in e.rank()..a.rows() {
                    assert!(prod.row(i).iter().all(|&x| x == 0));
                }
                assert!(a.left_kernel().mul(&a).is_zero());
                assert!(a.mul(&a.right_kernel().transpose()).is_zero());
            }
        }
    }

    #[test]
    fn charpoly_matches_determinant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let f = make_field(7, 1).unwrap();
        for _ in 0..30 {
            let a = random(&f, 5, 5, &mut rng);
            let cp = a.charpoly();
            assert_eq!(cp.degree(), Some(5));
            // cp(x) = det(xI − A) at a few points
            for x in 0..7 {
                let xi_minus_a = Matrix::scalar(&f, 5, x).sub(&a);
                assert_eq!(cp.eval(&f, x), det_bruteforce(&xi_minus_a));
            }
        }
    }

    #[test]
    fn generalized_kernel_of_jordan_block() {
        let f = make_field(5, 1).unwrap();
        let j = Matrix::from_ints(&f, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(j.left_kernel().rows(), 1);
        assert_eq!(j.generalized_kernel().rows(), 3);
        let d = Matrix::from_ints(&f, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 2]]);
        assert_eq!(d.generalized_kernel().rows(), 2);
    }

    #[test]
    fn restriction_to_invariant_subspace() {
        let f = make_field(5, 1).unwrap();
        let a = Matrix::from_ints(&f, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]]);
        let sub = Matrix::from_ints(&f, &[&[0, 1, 0], &[1, 0, 0]]);
        let x = restrict(&sub, &a).unwrap();
        assert_eq!(x.mul(&sub), sub.mul(&a));
        let bad = Matrix::from_ints(&f, &[&[0, 1, 1]]);
        assert!(restrict(&bad, &a).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let f = make_field(5, 2).unwrap();
        let mut found = 0;
        for _ in 0..20 {
            let a = random(&f, 4, 4, &mut rng);
            if let Some(inv) = a.inverse() {
                assert_eq!(a.mul(&inv), Matrix::identity(&f, 4));
                found += 1;
            }
        }
        assert!(found > 0);
    }
}
