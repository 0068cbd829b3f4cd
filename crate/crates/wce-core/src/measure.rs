//! Finite discrete measure spaces, partition subalgebras, measurable
//! functions, supports, and L^p norms.
//!
//! Atoms are indexed `0..n`. A σ-subalgebra is represented by the partition
//! that generates it; "A-measurable" means constant on every block. All masses
//! are strictly positive, so the space is complete and σ-finite by
//! construction and essential suprema coincide with maxima.

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

/// Absolute tolerance used by default when deciding whether a computed value
/// counts as zero (supports, block activity).
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-12;

/// A finite measure space: atoms `0..n` with strictly positive masses.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasureSpace<S: Scalar> {
    masses: Vec<S>,
}

impl<S: Scalar> FiniteMeasureSpace<S> {
    /// Builds a space from atom masses. Every mass must be finite and `> 0`.
    pub fn new(masses: Vec<S>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::EmptySpace);
        }
        for (i, &m) in masses.iter().enumerate() {
            if !(m.is_finite() && m > S::zero()) {
                return Err(Error::NonpositiveMass {
                    index: i,
                    mass: m.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self { masses })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty spaces
    }

    pub fn mass(&self, i: usize) -> S {
        self.masses[i]
    }

    pub fn masses(&self) -> &[S] {
        &self.masses
    }

    /// Total mass of a set of atoms.
    pub fn mass_of(&self, indices: &[usize]) -> S {
        indices.iter().fold(S::zero(), |acc, &i| acc + self.masses[i])
    }

    /// μ-weighted inner product `⟨f, g⟩ = Σ μ_i f_i conj(g_i)`.
    pub fn inner(&self, f: &MeasurableFn<S>, g: &MeasurableFn<S>) -> C<S> {
        assert_eq!(f.len(), self.len());
        assert_eq!(g.len(), self.len());
        let mut acc = C::<S>::new(S::zero(), S::zero());
        for i in 0..self.len() {
            acc = acc + f.values()[i] * g.values()[i].conj() * self.masses[i];
        }
        acc
    }
}

/// A σ-subalgebra of the power set, given by the partition of atoms that
/// generates it.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSubalgebra {
    blocks: Vec<Vec<usize>>,
    /// For each atom, the index of the block containing it.
    block_of: Vec<usize>,
}

impl SigmaSubalgebra {
    /// Builds a subalgebra from blocks that must partition `0..n` exactly.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition {
                    reason: format!("block {b} is empty"),
                });
            }
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidPartition {
                        reason: format!("block {b} contains out-of-range index {i} (n = {n})"),
                    });
                }
                if block_of[i] != usize::MAX {
                    return Err(Error::InvalidPartition {
                        reason: format!("atom {i} appears in more than one block"),
                    });
                }
                block_of[i] = b;
            }
        }
        if let Some(i) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition {
                reason: format!("atom {i} is not covered by any block"),
            });
        }
        Ok(Self { blocks, block_of })
    }

    /// The trivial subalgebra: a single block containing every atom.
    pub fn trivial(n: usize) -> Self {
        Self::new(n, vec![(0..n).collect()]).expect("one full block partitions the atoms")
    }

    /// The discrete subalgebra: every atom its own block.
    pub fn discrete(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| vec![i]).collect()).expect("singletons partition the atoms")
    }

    pub fn atom_count(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_index_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    pub fn block_of(&self, atom: usize) -> &[usize] {
        &self.blocks[self.block_of[atom]]
    }
}

/// A complex-valued function on the atoms, an element of L^0.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurableFn<S: Scalar> {
    values: Vec<C<S>>,
}

impl<S: Scalar> MeasurableFn<S> {
    pub fn new(values: Vec<C<S>>) -> Self {
        Self { values }
    }

    /// Real-valued function from scalar entries.
    pub fn from_real(values: Vec<S>) -> Self {
        Self {
            values: values.into_iter().map(|x| C::new(x, S::zero())).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![C::new(S::zero(), S::zero()); n],
        }
    }

    pub fn constant(n: usize, value: C<S>) -> Self {
        Self {
            values: vec![value; n],
        }
    }

    /// Indicator function of a set of atoms.
    pub fn indicator(n: usize, set: &Support) -> Self {
        let mut values = vec![C::new(S::zero(), S::zero()); n];
        for &i in set.indices() {
            values[i] = C::new(S::one(), S::zero());
        }
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C<S>] {
        &self.values
    }

    pub fn value(&self, i: usize) -> C<S> {
        self.values[i]
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: C<S>) -> Self {
        Self {
            values: self.values.iter().map(|a| a * c).collect(),
        }
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(|a| a.conj()).collect(),
        }
    }

    /// Pointwise modulus, as a real-valued function.
    pub fn abs(&self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|a| C::new(a.norm(), S::zero()))
                .collect(),
        }
    }

    /// Pointwise |f|^q for real q, as a real-valued function.
    pub fn abs_pow(&self, q: S) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|a| {
                    let m = a.norm();
                    let v = if m == S::zero() { S::zero() } else { m.powf(q) };
                    C::new(v, S::zero())
                })
                .collect(),
        }
    }

    pub fn max_abs(&self) -> S {
        self.values
            .iter()
            .map(|a| a.norm())
            .fold(S::zero(), |acc, m| if m > acc { m } else { acc })
    }
}

/// The set of atoms where a function is (numerically) nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    indices: Vec<usize>, // sorted, deduplicated
}

impl Support {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }

    pub fn empty() -> Self {
        Self {
            indices: Vec::new(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self {
            indices: self
                .indices
                .iter()
                .copied()
                .filter(|i| other.contains(*i))
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&other.indices);
        Self::new(indices)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }
}

/// An exponent p with 1 ≤ p; the ∞ marker is used only for sup-norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent<S: Scalar> {
    Finite(S),
    Infinity,
}

impl<S: Scalar> Exponent<S> {
    /// A finite exponent; must satisfy p ≥ 1.
    pub fn finite(p: S) -> Result<Self> {
        if !(p.is_finite() && p >= S::one()) {
            return Err(Error::ExponentBelowOne {
                p: p.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self::Finite(p))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    /// The conjugate exponent p' with 1/p + 1/p' = 1.
    pub fn conjugate(&self) -> Self {
        match *self {
            Self::Infinity => Self::Finite(S::one()),
            Self::Finite(p) => {
                if p == S::one() {
                    Self::Infinity
                } else {
                    Self::Finite(p / (p - S::one()))
                }
            }
        }
    }

    pub fn value(&self) -> Option<S> {
        match *self {
            Self::Finite(p) => Some(p),
            Self::Infinity => None,
        }
    }
}

/// L^p norm of `f` on `space`: `(Σ μ_i |f_i|^p)^{1/p}` for finite p, the
/// maximum modulus for p = ∞ (every atom has positive mass).
pub fn lp_norm<S: Scalar>(
    f: &MeasurableFn<S>,
    space: &FiniteMeasureSpace<S>,
    p: Exponent<S>,
) -> Result<S> {
    if f.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            got: f.len(),
        });
    }
    match p {
        Exponent::Infinity => Ok(f.max_abs()),
        Exponent::Finite(p) => {
            let mut acc = S::zero();
            for i in 0..f.len() {
                let m = f.value(i).norm();
                if m > S::zero() {
                    acc = acc + space.mass(i) * m.powf(p);
                }
            }
            Ok(acc.powf(S::one() / p))
        }
    }
}

/// Atoms where `|f_i| > tol`.
pub fn support<S: Scalar>(f: &MeasurableFn<S>, tol: S) -> Support {
    Support::new(
        (0..f.len())
            .filter(|&i| f.value(i).norm() > tol)
            .collect(),
    )
}

/// True iff `f` is constant on every block of `A`, within an absolute
/// tolerance on complex values.
pub fn is_a_measurable<S: Scalar>(f: &MeasurableFn<S>, a: &SigmaSubalgebra, tol: S) -> bool {
    assert_eq!(f.len(), a.atom_count(), "function must live on A's atoms");
    a.blocks().iter().all(|block| {
        let first = f.value(block[0]);
        block.iter().all(|&i| (f.value(i) - first).norm() <= tol)
    })
}

/// Union of the blocks of `A` that intersect `s`: the smallest A-measurable
/// set containing `s`.
pub fn smallest_a_set_containing(s: &Support, a: &SigmaSubalgebra) -> Support {
    let mut hit = vec![false; a.blocks().len()];
    for &i in s.indices() {
        hit[a.block_index_of(i)] = true;
    }
    let mut indices = Vec::new();
    for (b, block) in a.blocks().iter().enumerate() {
        if hit[b] {
            indices.extend_from_slice(block);
        }
    }
    Support::new(indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    type F = MeasurableFn<f64>;

    fn space(masses: &[f64]) -> FiniteMeasureSpace<f64> {
        FiniteMeasureSpace::new(masses.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_constructions() {
        assert_eq!(
            FiniteMeasureSpace::<f64>::new(vec![]),
            Err(Error::EmptySpace)
        );
        assert!(matches!(
            FiniteMeasureSpace::new(vec![1.0, 0.0]),
            Err(Error::NonpositiveMass { index: 1, .. })
        ));
        assert!(SigmaSubalgebra::new(3, vec![vec![0, 1]]).is_err()); // atom 2 uncovered
        assert!(SigmaSubalgebra::new(3, vec![vec![0, 1], vec![1, 2]]).is_err()); // overlap
        assert!(SigmaSubalgebra::new(2, vec![vec![0, 1], vec![]]).is_err()); // empty block
        assert!(SigmaSubalgebra::new(2, vec![vec![0, 1, 5]]).is_err()); // out of range
        assert!(Exponent::finite(0.5).is_err());
    }

    #[test]
    fn lp_norm_examples() {
        let s2 = space(&[1.0, 1.0]);
        let zero = F::zeros(2);
        assert_eq!(
            lp_norm(&zero, &s2, Exponent::Finite(2.0)).unwrap(),
            0.0
        );
        let ones = F::from_real(vec![1.0, 1.0]);
        let got = lp_norm(&ones, &s2, Exponent::Finite(2.0)).unwrap();
        // oracle: direct summation (1*1^2 + 1*1^2)^(1/2)
        let want = (1.0f64 * 1.0 + 1.0 * 1.0).sqrt();
        assert!((got - want).abs() < 1e-15);
        // f = (3, -4i), sup norm = 4
        let f = F::new(vec![cx(3.0, 0.0), cx(0.0, -4.0)]);
        assert_eq!(lp_norm(&f, &s2, Exponent::Infinity).unwrap(), 4.0);
        // dimension mismatch is a structural error
        assert!(matches!(
            lp_norm(&F::zeros(3), &s2, Exponent::Finite(1.0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn support_examples() {
        let f = F::zeros(3);
        assert!(support(&f, 0.0).is_empty());
        let f = F::from_real(vec![1.0, 0.0, 2.0]);
        assert_eq!(support(&f, 0.0).indices(), &[0, 2]);
        let f = F::from_real(vec![1e-14, 1.0]);
        assert_eq!(support(&f, 1e-12).indices(), &[1]);
    }

    #[test]
    fn measurability_examples() {
        let a = SigmaSubalgebra::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let f = F::from_real(vec![5.0, 5.0, 7.0]);
        assert!(is_a_measurable(&f, &a, 0.0));
        let g = F::from_real(vec![5.0, 6.0, 7.0]);
        assert!(!is_a_measurable(&g, &a, 0.0));
        let discrete = SigmaSubalgebra::discrete(3);
        assert!(is_a_measurable(&g, &discrete, 0.0));
    }

    #[test]
    fn smallest_a_set_examples() {
        let a = SigmaSubalgebra::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert!(smallest_a_set_containing(&Support::empty(), &a).is_empty());
        let s = Support::new(vec![0]);
        assert_eq!(smallest_a_set_containing(&s, &a).indices(), &[0, 1]);
        let a4 = SigmaSubalgebra::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let s = Support::new(vec![0, 2]);
        assert_eq!(
            smallest_a_set_containing(&s, &a4).indices(),
            &[0, 1, 2, 3]
        );
    }

    #[test]
    fn conjugate_exponents() {
        let p1: Exponent<f64> = Exponent::finite(1.0).unwrap();
        assert_eq!(p1.conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::<f64>::Infinity.conjugate(), Exponent::Finite(1.0));
        let p = Exponent::finite(1.5f64).unwrap();
        assert!((p.conjugate().value().unwrap() - 3.0f64).abs() < 1e-15);
        let p2 = Exponent::finite(2.0).unwrap();
        assert_eq!(p2.conjugate(), Exponent::Finite(2.0));
    }
}
