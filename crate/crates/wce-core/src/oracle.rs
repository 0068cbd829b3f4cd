//! Dense-matrix ground truth: realizations, rank and bases, inverses,
//! operator two-norms, Hermitian square roots, and polar decomposition.
//!
//! Every adjoint, norm, and Hermitian notion here is taken with respect to
//! the μ-weighted inner product `⟨f, g⟩ = Σ μ_i f_i conj(g_i)`. A matrix A is
//! μ-self-adjoint iff `D A = A^H D` with `D = diag(μ)`; conjugating by
//! `D^{1/2}` turns such matrices into ordinary Hermitian ones, which is how
//! the eigenvalue routines below operate.

use crate::error::{Error, Result};
use crate::measure::{FiniteMeasureSpace, MeasurableFn};
use crate::operator::WceOperator;
use crate::scalar::{Scalar, C};

/// Default relative pivot tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// A square complex matrix acting on the N-dimensional function space.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S: Scalar> {
    dim: usize,
    entries: Vec<C<S>>, // row-major
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C::new(S::zero(), S::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C::new(S::one(), S::zero()));
        }
        m
    }

    pub fn from_diag(diag: &[C<S>]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds an N×N matrix whose leading columns are the given vectors and
    /// whose remaining columns are zero. Used for rank checks on spanning
    /// sets of at most N vectors.
    pub fn from_columns(dim: usize, cols: &[MeasurableFn<S>]) -> Self {
        assert!(cols.len() <= dim, "at most dim columns");
        let mut m = Self::zeros(dim);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dim);
            for i in 0..dim {
                m.set(i, j, col.value(i));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<S> {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C<S>) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: C<S>) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C::new(S::zero(), S::zero());
                for k in 0..n {
                    acc = acc + self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// n-th power by repeated multiplication; `pow(0)` is the identity.
    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::identity(self.dim);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, f: &MeasurableFn<S>) -> MeasurableFn<S> {
        assert_eq!(f.len(), self.dim);
        let mut values = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut acc = C::new(S::zero(), S::zero());
            for j in 0..self.dim {
                acc = acc + self.get(i, j) * f.value(j);
            }
            values.push(acc);
        }
        MeasurableFn::new(values)
    }

    /// Conjugate transpose (plain, unweighted).
    pub fn conj_transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    /// Adjoint under the μ-weighted inner product: `D^{-1} M^H D`.
    pub fn mu_adjoint(&self, space: &FiniteMeasureSpace<S>) -> Self {
        assert_eq!(self.dim, space.len());
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = self.get(j, i).conj() * (space.mass(j) / space.mass(i));
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn max_abs(&self) -> S {
        self.entries
            .iter()
            .map(|a| a.norm())
            .fold(S::zero(), |acc, m| if m > acc { m } else { acc })
    }

    pub fn max_abs_diff(&self, other: &Self) -> S {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(S::zero(), |acc, m| if m > acc { m } else { acc })
    }

    pub fn approx_eq(&self, other: &Self, tol: S) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn frobenius(&self) -> S {
        self.entries
            .iter()
            .fold(S::zero(), |acc, a| acc + a.norm_sqr())
            .sqrt()
    }
}

/// Matrix realization of a WCE operator:
/// `M[i][j] = w_i u_j μ_j / μ(B)` when i and j share block B, else 0.
pub fn realize<S: Scalar>(op: &WceOperator<S>) -> DenseMatrix<S> {
    let space = op.space();
    let n = space.len();
    let mut m = DenseMatrix::zeros(n);
    for block in op.subalgebra().blocks() {
        let total = space.mass_of(block);
        for &i in block {
            let wi = op.outer().value(i);
            if wi == C::new(S::zero(), S::zero()) {
                continue;
            }
            for &j in block {
                m.set(i, j, wi * op.inner_weight().value(j) * (space.mass(j) / total));
            }
        }
    }
    m
}

/// Rank, an orthonormalized null-space basis, and a range basis (pivot
/// columns of the original matrix).
#[derive(Debug, Clone)]
pub struct RankResult<S: Scalar> {
    pub rank: usize,
    pub null_basis: Vec<MeasurableFn<S>>,
    pub range_basis: Vec<MeasurableFn<S>>,
    pub pivot_tol: S,
}

/// Gaussian elimination with partial pivoting. A pivot is accepted when its
/// modulus exceeds `tol` times the initial magnitude of its own column, so
/// uniformly scaled columns (powers of block operators) keep their rank.
pub fn rank_and_bases<S: Scalar>(m: &DenseMatrix<S>, tol: S) -> RankResult<S> {
    assert!(tol > S::zero(), "pivot tolerance must be positive");
    let n = m.dim();
    let mut u = m.clone();

    let col_scale: Vec<S> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| m.get(i, j).norm())
                .fold(S::zero(), |a, b| if b > a { b } else { a })
        })
        .collect();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut pivot_rows: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        if row >= n {
            break;
        }
        // partial pivoting: largest modulus in this column at or below `row`
        let mut best = row;
        let mut best_mag = u.get(row, col).norm();
        for r in (row + 1)..n {
            let mag = u.get(r, col).norm();
            if mag > best_mag {
                best = r;
                best_mag = mag;
            }
        }
        if !(best_mag > tol * col_scale[col]) || col_scale[col] == S::zero() {
            continue; // free column
        }
        if best != row {
            for j in 0..n {
                let a = u.get(row, j);
                u.set(row, j, u.get(best, j));
                u.set(best, j, a);
            }
        }
        let pivot = u.get(row, col);
        for r in (row + 1)..n {
            let factor = u.get(r, col) / pivot;
            if factor != C::new(S::zero(), S::zero()) {
                u.set(r, col, C::new(S::zero(), S::zero()));
                for j in (col + 1)..n {
                    let v = u.get(r, j) - factor * u.get(row, j);
                    u.set(r, j, v);
                }
            }
        }
        pivot_cols.push(col);
        pivot_rows.push(row);
        row += 1;
    }

    let rank = pivot_cols.len();

    // Null basis: one vector per free column by back substitution.
    let mut null_basis: Vec<MeasurableFn<S>> = Vec::new();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    for free in 0..n {
        if is_pivot[free] {
            continue;
        }
        let mut x = vec![C::new(S::zero(), S::zero()); n];
        x[free] = C::new(S::one(), S::zero());
        for k in (0..rank).rev() {
            let (r, c) = (pivot_rows[k], pivot_cols[k]);
            let mut acc = C::new(S::zero(), S::zero());
            for j in (c + 1)..n {
                acc = acc + u.get(r, j) * x[j];
            }
            x[c] = -acc / u.get(r, c);
        }
        null_basis.push(MeasurableFn::new(x));
    }

    // Orthonormalize the null basis (modified Gram-Schmidt, Euclidean).
    let mut ortho: Vec<MeasurableFn<S>> = Vec::new();
    for v in null_basis {
        let mut x: Vec<C<S>> = v.values().to_vec();
        for q in &ortho {
            let mut proj = C::new(S::zero(), S::zero());
            for i in 0..n {
                proj = proj + x[i] * q.value(i).conj();
            }
            for i in 0..n {
                x[i] = x[i] - proj * q.value(i);
            }
        }
        let norm = x
            .iter()
            .fold(S::zero(), |acc, a| acc + a.norm_sqr())
            .sqrt();
        if norm > S::zero() {
            for xi in x.iter_mut() {
                *xi = *xi / norm;
            }
        }
        ortho.push(MeasurableFn::new(x));
    }

    let range_basis = pivot_cols
        .iter()
        .map(|&c| MeasurableFn::new((0..n).map(|i| m.get(i, c)).collect()))
        .collect();

    RankResult {
        rank,
        null_basis: ortho,
        range_basis,
        pivot_tol: tol,
    }
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn invert<S: Scalar>(m: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
    let n = m.dim();
    let rank = rank_and_bases(m, S::of(1e-10)).rank;
    if rank < n {
        return Err(Error::SingularMatrix { rank, dim: n });
    }
    let mut a = m.clone();
    let mut inv = DenseMatrix::identity(n);
    for col in 0..n {
        let mut best = col;
        let mut best_mag = a.get(col, col).norm();
        for r in (col + 1)..n {
            let mag = a.get(r, col).norm();
            if mag > best_mag {
                best = r;
                best_mag = mag;
            }
        }
        if best != col {
            for j in 0..n {
                let x = a.get(col, j);
                a.set(col, j, a.get(best, j));
                a.set(best, j, x);
                let y = inv.get(col, j);
                inv.set(col, j, inv.get(best, j));
                inv.set(best, j, y);
            }
        }
        let pivot = a.get(col, col);
        if pivot.norm() == S::zero() {
            return Err(Error::SingularMatrix { rank: col, dim: n });
        }
        for j in 0..n {
            a.set(col, j, a.get(col, j) / pivot);
            inv.set(col, j, inv.get(col, j) / pivot);
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a.get(r, col);
            if factor != C::new(S::zero(), S::zero()) {
                for j in 0..n {
                    let va = a.get(r, j) - factor * a.get(col, j);
                    a.set(r, j, va);
                    let vi = inv.get(r, j) - factor * inv.get(col, j);
                    inv.set(r, j, vi);
                }
            }
        }
    }
    Ok(inv)
}

/// Eigendecomposition of a standard Hermitian matrix by cyclic complex
/// Jacobi sweeps. Returns (eigenvalues, unitary V with A = V diag(λ) V^H).
/// Sweeps run until the off-diagonal Frobenius norm reaches the machine
/// floor (1e-15 relative), at most 100 sweeps; anything looser leaves
/// numerically-zero eigenvalues at the threshold scale, whose square roots
/// then contaminate every spectral function built on top.
fn jacobi_hermitian<S: Scalar>(a: &DenseMatrix<S>) -> (Vec<S>, DenseMatrix<S>) {
    let n = a.dim();
    let mut m = a.clone();
    let mut v = DenseMatrix::identity(n);
    let scale = m.frobenius();
    if scale == S::zero() {
        return (vec![S::zero(); n], v);
    }
    let threshold = S::of(1e-15) * scale;
    for _sweep in 0..100 {
        let mut off = S::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off + m.get(i, j).norm_sqr();
                }
            }
        }
        if off.sqrt() <= threshold {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let mag = apq.norm();
                if mag == S::zero() {
                    continue;
                }
                let phase = apq / mag; // e^{iφ}
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let tau = (aqq - app) / (S::of(2.0) * mag);
                let t = if tau == S::zero() {
                    S::one()
                } else {
                    let sign = if tau > S::zero() { S::one() } else { -S::one() };
                    sign / (tau.abs() + (S::one() + tau * tau).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = t * c;
                // column update: B = M J with J[p][p]=c, J[p][q]=s e^{iφ},
                // J[q][p]=-s e^{-iφ}, J[q][q]=c
                for i in 0..n {
                    let mip = m.get(i, p);
                    let miq = m.get(i, q);
                    m.set(i, p, mip * c - miq * phase.conj() * s);
                    m.set(i, q, mip * phase * s + miq * c);
                }
                // row update: M' = J^H B
                for j in 0..n {
                    let mpj = m.get(p, j);
                    let mqj = m.get(q, j);
                    m.set(p, j, mpj * c - mqj * phase * s);
                    m.set(q, j, mpj * phase.conj() * s + mqj * c);
                }
                // keep the block exactly Hermitian against drift
                let dpp = m.get(p, p);
                let dqq = m.get(q, q);
                m.set(p, p, C::new(dpp.re, S::zero()));
                m.set(q, q, C::new(dqq.re, S::zero()));
                m.set(q, p, m.get(p, q).conj());
                // accumulate eigenvectors: V = V J
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * c - viq * phase.conj() * s);
                    v.set(i, q, vip * phase * s + viq * c);
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| m.get(i, i).re).collect();
    (eigenvalues, v)
}

/// `D^{1/2} M D^{-1/2}`: similarity that turns μ-self-adjoint matrices into
/// standard Hermitian ones.
fn to_standard<S: Scalar>(m: &DenseMatrix<S>, space: &FiniteMeasureSpace<S>) -> DenseMatrix<S> {
    let n = m.dim();
    let mut out = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let factor = (space.mass(i) / space.mass(j)).sqrt();
            out.set(i, j, m.get(i, j) * factor);
        }
    }
    out
}

/// Inverse similarity of [`to_standard`].
fn from_standard<S: Scalar>(m: &DenseMatrix<S>, space: &FiniteMeasureSpace<S>) -> DenseMatrix<S> {
    let n = m.dim();
    let mut out = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let factor = (space.mass(j) / space.mass(i)).sqrt();
            out.set(i, j, m.get(i, j) * factor);
        }
    }
    out
}

/// Spectral decomposition of a μ-self-adjoint matrix: eigenvalues plus the
/// standard-Hermitian eigenvector matrix of `D^{1/2} M D^{-1/2}`. Apply a
/// function to the eigenvalues and rebuild with [`rebuild_mu`].
fn mu_eigen<S: Scalar>(
    m: &DenseMatrix<S>,
    space: &FiniteMeasureSpace<S>,
) -> (Vec<S>, DenseMatrix<S>) {
    jacobi_hermitian(&to_standard(m, space))
}

/// Rebuilds `D^{-1/2} V diag(g) V^H D^{1/2}` from a [`mu_eigen`] result.
fn rebuild_mu<S: Scalar>(
    v: &DenseMatrix<S>,
    diag: &[S],
    space: &FiniteMeasureSpace<S>,
) -> DenseMatrix<S> {
    let n = v.dim();
    let mut b = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = C::new(S::zero(), S::zero());
            for k in 0..n {
                acc = acc + v.get(i, k) * v.get(j, k).conj() * diag[k];
            }
            b.set(i, j, acc);
        }
    }
    from_standard(&b, space)
}

/// Largest singular value under the μ-weighted inner product, computed from
/// the eigendecomposition of `M*M` (with `M*` the μ-adjoint). The Jacobi
/// route is exact to machine precision even for clustered spectra; the
/// power-iteration variant below cross-checks it.
///
/// The matrix is normalized by its largest entry first: norms of high powers
/// reach magnitudes whose Gram entries would otherwise underflow.
pub fn two_norm<S: Scalar>(m: &DenseMatrix<S>, space: &FiniteMeasureSpace<S>) -> S {
    let magnitude = m.max_abs();
    if magnitude == S::zero() {
        return S::zero();
    }
    if !magnitude.is_finite() {
        return magnitude;
    }
    let unit = m.scale(C::new(S::one() / magnitude, S::zero()));
    let std = to_standard(&unit, space);
    let gram = std.conj_transpose().mul(&std);
    let (eigenvalues, _) = jacobi_hermitian(&gram);
    let lambda_max = eigenvalues
        .into_iter()
        .fold(S::zero(), |a, b| if b > a { b } else { a });
    magnitude * lambda_max.sqrt()
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Power iteration on `M*M` under the μ-weighted inner product, with a fixed
/// pseudo-random start vector. Converged when successive Rayleigh quotients
/// agree to 1e-12 (relative above one), capped at 10000 iterations; returns
/// the best estimate and the convergence flag.
pub fn two_norm_power_iteration<S: Scalar>(
    m: &DenseMatrix<S>,
    space: &FiniteMeasureSpace<S>,
) -> (S, bool) {
    let n = m.dim();
    let magnitude = m.max_abs();
    if magnitude == S::zero() {
        return (S::zero(), true);
    }
    let unit = m.scale(C::new(S::one() / magnitude, S::zero()));
    let gram = unit.mu_adjoint(space).mul(&unit);
    let mut v: Vec<C<S>> = (0..n)
        .map(|i| {
            let a = splitmix64(0x5EED_0001 ^ (i as u64));
            let b = splitmix64(a);
            let unit = |x: u64| S::of((x >> 11) as f64 / (1u64 << 53) as f64 - 0.5);
            C::new(unit(a), unit(b))
        })
        .collect();
    let mu_norm = |x: &[C<S>]| -> S {
        x.iter()
            .enumerate()
            .fold(S::zero(), |acc, (i, a)| acc + a.norm_sqr() * space.mass(i))
            .sqrt()
    };
    let nv = mu_norm(&v);
    for x in v.iter_mut() {
        *x = *x / nv;
    }
    let mut rayleigh = S::zero();
    let mut converged = false;
    for _ in 0..10000 {
        let av = gram.apply(&MeasurableFn::new(v.clone()));
        let mut r = S::zero();
        for i in 0..n {
            r = r + (av.value(i) * v[i].conj()).re * space.mass(i);
        }
        let diff = (r - rayleigh).abs();
        let done = diff < S::of(1e-12) * r.abs().max(S::one());
        rayleigh = r;
        let na = mu_norm(av.values());
        if na == S::zero() {
            // the iterate fell into the null space; the quotient is final
            converged = true;
            break;
        }
        for (x, a) in v.iter_mut().zip(av.values()) {
            *x = *a / na;
        }
        if done {
            converged = true;
            break;
        }
    }
    (magnitude * rayleigh.max(S::zero()).sqrt(), converged)
}

fn check_mu_hermitian<S: Scalar>(
    m: &DenseMatrix<S>,
    space: &FiniteMeasureSpace<S>,
    tol: S,
) -> Result<()> {
    let n = m.dim();
    let mut max_dev = S::zero();
    let mut scale = S::zero();
    for i in 0..n {
        for j in 0..n {
            let dm = m.get(i, j) * space.mass(i);
            let hd = m.get(j, i).conj() * space.mass(j);
            let dev = (dm - hd).norm();
            if dev > max_dev {
                max_dev = dev;
            }
            if dm.norm() > scale {
                scale = dm.norm();
            }
        }
    }
    if max_dev > tol * scale.max(S::one()) {
        return Err(Error::NotHermitianPsd {
            reason: format!("deviation {max_dev} from mu-self-adjointness"),
        });
    }
    Ok(())
}

/// Square root of a μ-Hermitian positive semidefinite matrix via Jacobi
/// eigendecomposition; eigenvalues are clamped at zero from below.
pub fn hermitian_sqrt<S: Scalar>(
    m: &DenseMatrix<S>,
    space: &FiniteMeasureSpace<S>,
) -> Result<DenseMatrix<S>> {
    check_mu_hermitian(m, space, S::of(1e-10))?;
    let magnitude = m.max_abs();
    if magnitude == S::zero() {
        return Ok(DenseMatrix::zeros(m.dim()));
    }
    let unit = m.scale(C::new(S::one() / magnitude, S::zero()));
    let (scaled_eigenvalues, v) = mu_eigen(&unit, space);
    let eigenvalues: Vec<S> = scaled_eigenvalues.iter().map(|&l| l * magnitude).collect();
    let lambda_max = eigenvalues
        .iter()
        .fold(S::zero(), |a, &b| if b > a { b } else { a });
    for &l in &eigenvalues {
        if l < -S::of(1e-10) * lambda_max.max(S::one()) {
            return Err(Error::NotHermitianPsd {
                reason: format!("significantly negative eigenvalue {l}"),
            });
        }
    }
    let roots: Vec<S> = eigenvalues
        .iter()
        .map(|&l| l.max(S::zero()).sqrt())
        .collect();
    Ok(rebuild_mu(&v, &roots, space))
}

/// Aluthge transform `|M|^{1/2} U |M|^{1/2}` of the polar decomposition
/// `M = U |M|`, with `|M| = (M*M)^{1/2}` and the partial isometry built from
/// a spectral pseudoinverse (singular values above `1e-10` of the largest
/// are inverted).
pub fn polar_aluthge<S: Scalar>(
    m: &DenseMatrix<S>,
    space: &FiniteMeasureSpace<S>,
) -> DenseMatrix<S> {
    let n = m.dim();
    let magnitude = m.max_abs();
    if magnitude == S::zero() {
        return DenseMatrix::zeros(n);
    }
    // scale-invariant construction: the transform is linear in the matrix,
    // so factor out the magnitude and reassemble at the end
    let unit = m.scale(C::new(S::one() / magnitude, S::zero()));
    let gram = unit.mu_adjoint(space).mul(&unit);
    let (eigenvalues, v) = mu_eigen(&gram, space);
    // rank-revealing truncation: Gram eigenvalues at roundoff scale are
    // exact zeros of M*M, and must not leak into |M|^{1/2}
    let lambda_max = eigenvalues
        .iter()
        .fold(S::zero(), |a, &b| if b > a { b } else { a });
    let lambda_floor = S::of(1e-12) * lambda_max;
    let sigma: Vec<S> = eigenvalues
        .iter()
        .map(|&l| if l > lambda_floor { l.sqrt() } else { S::zero() })
        .collect();
    let sigma_max = sigma
        .iter()
        .fold(S::zero(), |a, &b| if b > a { b } else { a });
    let cutoff = S::of(1e-10) * sigma_max;
    let inv_sigma: Vec<S> = sigma
        .iter()
        .map(|&s| if s > cutoff { S::one() / s } else { S::zero() })
        .collect();
    let sqrt_sigma: Vec<S> = sigma.iter().map(|&s| s.sqrt()).collect();

    let abs_half = rebuild_mu(&v, &sqrt_sigma, space); // |unit|^{1/2}
    let abs_pinv = rebuild_mu(&v, &inv_sigma, space); // |unit|^+
    let u = unit.mul(&abs_pinv);
    abs_half
        .mul(&u)
        .mul(&abs_half)
        .scale(C::new(magnitude, S::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn space(masses: &[f64]) -> FiniteMeasureSpace<f64> {
        FiniteMeasureSpace::new(masses.to_vec()).unwrap()
    }

    fn averaging2() -> DenseMatrix<f64> {
        let mut m = DenseMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                m.set(i, j, cx(0.5, 0.0));
            }
        }
        m
    }

    #[test]
    fn rank_examples() {
        let id = DenseMatrix::<f64>::identity(4);
        let r = rank_and_bases(&id, 1e-8);
        assert_eq!(r.rank, 4);
        assert!(r.null_basis.is_empty());

        let z = DenseMatrix::<f64>::zeros(3);
        let r = rank_and_bases(&z, 1e-8);
        assert_eq!(r.rank, 0);
        assert_eq!(r.null_basis.len(), 3);

        let r = rank_and_bases(&averaging2(), 1e-8);
        assert_eq!(r.rank, 1);
        assert_eq!(r.null_basis.len(), 1);
        let v = &r.null_basis[0];
        // null vector proportional to (1, -1)
        assert!((v.value(0) + v.value(1)).norm() < 1e-12);
        assert!(v.value(0).norm() > 0.1);
    }

    #[test]
    fn null_vectors_are_annihilated() {
        let mut m = DenseMatrix::<f64>::zeros(3);
        m.set(0, 0, cx(1.0, 2.0));
        m.set(0, 1, cx(-1.0, 0.0));
        m.set(0, 2, cx(0.5, 0.5));
        m.set(1, 0, cx(2.0, 4.0));
        m.set(1, 1, cx(-2.0, 0.0));
        m.set(1, 2, cx(1.0, 1.0)); // row 1 = 2 * row 0
        m.set(2, 0, cx(0.0, 1.0));
        m.set(2, 1, cx(1.0, 1.0));
        m.set(2, 2, cx(3.0, 0.0));
        let r = rank_and_bases(&m, 1e-8);
        assert_eq!(r.rank, 2);
        for v in &r.null_basis {
            assert!(m.apply(v).max_abs() <= 1e-9);
        }
    }

    #[test]
    fn invert_examples() {
        let id = DenseMatrix::<f64>::identity(3);
        assert!(invert(&id).unwrap().approx_eq(&id, 1e-14));

        let d = DenseMatrix::from_diag(&[cx(2.0, 0.0), cx(4.0, 0.0)]);
        let want = DenseMatrix::from_diag(&[cx(0.5, 0.0), cx(0.25, 0.0)]);
        assert!(invert(&d).unwrap().approx_eq(&want, 1e-14));

        assert!(matches!(
            invert(&averaging2()),
            Err(Error::SingularMatrix { rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn two_norm_examples() {
        let sp = space(&[1.0, 1.0]);
        assert_eq!(two_norm(&DenseMatrix::zeros(2), &sp), 0.0);
        assert!((two_norm(&DenseMatrix::identity(2), &sp) - 1.0).abs() < 1e-12);
        assert!((two_norm(&averaging2(), &sp) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_iteration_agrees_with_jacobi() {
        let sp = space(&[0.5, 2.0, 1.0]);
        let mut m = DenseMatrix::<f64>::zeros(3);
        m.set(0, 0, cx(1.0, 0.5));
        m.set(0, 2, cx(-2.0, 1.0));
        m.set(1, 1, cx(0.3, -0.7));
        m.set(2, 0, cx(0.9, 0.0));
        m.set(2, 2, cx(1.5, 2.0));
        let exact = two_norm(&m, &sp);
        let (est, converged) = two_norm_power_iteration(&m, &sp);
        assert!(converged);
        assert!((est - exact).abs() <= 1e-8 * exact.max(1.0));
    }

    #[test]
    fn hermitian_sqrt_examples() {
        let sp = space(&[1.0, 1.0]);
        let z = DenseMatrix::<f64>::zeros(2);
        assert!(hermitian_sqrt(&z, &sp).unwrap().approx_eq(&z, 0.0));
        let id = DenseMatrix::identity(2);
        assert!(hermitian_sqrt(&id, &sp).unwrap().approx_eq(&id, 1e-12));
        let d = DenseMatrix::from_diag(&[cx(4.0, 0.0), cx(9.0, 0.0)]);
        let want = DenseMatrix::from_diag(&[cx(2.0, 0.0), cx(3.0, 0.0)]);
        assert!(hermitian_sqrt(&d, &sp).unwrap().approx_eq(&want, 1e-12));
    }

    #[test]
    fn hermitian_sqrt_rejects_non_hermitian() {
        let sp = space(&[1.0, 1.0]);
        let mut m = DenseMatrix::<f64>::zeros(2);
        m.set(0, 1, cx(1.0, 0.0)); // nilpotent, not self-adjoint
        assert!(matches!(
            hermitian_sqrt(&m, &sp),
            Err(Error::NotHermitianPsd { .. })
        ));
        let neg = DenseMatrix::from_diag(&[cx(-1.0, 0.0), cx(1.0, 0.0)]);
        assert!(matches!(
            hermitian_sqrt(&neg, &sp),
            Err(Error::NotHermitianPsd { .. })
        ));
    }

    #[test]
    fn hermitian_sqrt_squares_back_weighted() {
        // mu-self-adjoint PSD matrix on a non-uniform space:
        // A = B* B for a generic B, adjoint in the weighted inner product.
        let sp = space(&[0.5, 2.0, 3.0]);
        let mut b = DenseMatrix::<f64>::zeros(3);
        b.set(0, 0, cx(1.0, 1.0));
        b.set(0, 1, cx(0.0, -0.5));
        b.set(1, 2, cx(2.0, 0.0));
        b.set(2, 0, cx(-1.0, 0.25));
        b.set(2, 2, cx(0.5, 0.5));
        let a = b.mu_adjoint(&sp).mul(&b);
        let root = hermitian_sqrt(&a, &sp).unwrap();
        assert!(root.mul(&root).approx_eq(&a, 1e-8 * a.max_abs().max(1.0)));
    }

    #[test]
    fn polar_aluthge_fixes_psd_matrices() {
        let sp = space(&[1.0, 3.0]);
        let z = DenseMatrix::<f64>::zeros(2);
        assert!(polar_aluthge(&z, &sp).approx_eq(&z, 0.0));
        // mu-self-adjoint PSD: aluthge transform leaves it unchanged
        let mut b = DenseMatrix::<f64>::zeros(2);
        b.set(0, 0, cx(1.0, 0.5));
        b.set(0, 1, cx(0.5, 0.0));
        b.set(1, 1, cx(-0.3, 1.0));
        let a = b.mu_adjoint(&sp).mul(&b);
        let t = polar_aluthge(&a, &sp);
        assert!(t.approx_eq(&a, 1e-10 * a.max_abs().max(1.0)));
    }

    #[test]
    fn mu_adjoint_matches_inner_product() {
        let sp = space(&[0.5, 2.0, 1.5]);
        let mut m = DenseMatrix::<f64>::zeros(3);
        m.set(0, 1, cx(1.0, -2.0));
        m.set(1, 0, cx(0.5, 0.5));
        m.set(2, 2, cx(3.0, 1.0));
        let adj = m.mu_adjoint(&sp);
        let f = MeasurableFn::new(vec![cx(1.0, 1.0), cx(-2.0, 0.5), cx(0.0, 3.0)]);
        let g = MeasurableFn::new(vec![cx(0.5, -1.0), cx(2.0, 2.0), cx(1.0, 0.0)]);
        let lhs = sp.inner(&m.apply(&f), &g);
        let rhs = sp.inner(&f, &adj.apply(&g));
        assert!((lhs - rhs).norm() < 1e-12);
    }
}
