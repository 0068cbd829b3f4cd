//! Conditional expectation with respect to a partition subalgebra.
//!
//! On a finite discrete space the conditional expectation is blockwise
//! weighted averaging: it fixes A-measurable functions, satisfies the
//! averaging identity on every block, and is the μ-orthogonal projection
//! onto the A-measurable functions.

use crate::measure::{FiniteMeasureSpace, MeasurableFn, SigmaSubalgebra};
use crate::oracle::DenseMatrix;
use crate::scalar::{Scalar, C};

/// Conditional expectation of `f`: on each block B, the constant
/// `(Σ_{j∈B} μ_j f_j) / μ(B)`.
pub fn cond_exp<S: Scalar>(
    f: &MeasurableFn<S>,
    a: &SigmaSubalgebra,
    space: &FiniteMeasureSpace<S>,
) -> MeasurableFn<S> {
    assert_eq!(f.len(), space.len(), "function must live on the space");
    assert_eq!(a.atom_count(), space.len(), "subalgebra must partition the space");
    let mut values = vec![C::new(S::zero(), S::zero()); f.len()];
    for block in a.blocks() {
        let mut num = C::new(S::zero(), S::zero());
        let mut den = S::zero();
        for &j in block {
            num = num + f.value(j) * space.mass(j);
            den = den + space.mass(j);
        }
        let avg = num / den;
        for &j in block {
            values[j] = avg;
        }
    }
    MeasurableFn::new(values)
}

/// Matrix realization P of the conditional expectation:
/// `P[i][j] = μ_j / μ(B)` when i and j share block B, else 0.
pub fn cond_exp_matrix<S: Scalar>(
    a: &SigmaSubalgebra,
    space: &FiniteMeasureSpace<S>,
) -> DenseMatrix<S> {
    assert_eq!(a.atom_count(), space.len());
    let n = space.len();
    let mut m = DenseMatrix::zeros(n);
    for block in a.blocks() {
        let total = space.mass_of(block);
        for &i in block {
            for &j in block {
                m.set(i, j, C::new(space.mass(j) / total, S::zero()));
            }
        }
    }
    m
}
