//! The weighted conditional expectation operator `T: f ↦ w·E(u·f)` and its
//! closed forms: powers, Cesàro means, adjoint, Aluthge transform, Neumann
//! inverse, and the boundedness/spectral-radius functionals.
//!
//! Every closed form factors through the cached A-measurable function
//! `E(uw)`, which is computed once at construction and is the single source
//! of truth for all spectral and boundedness criteria.

use crate::error::{Error, Result};
use crate::expectation::cond_exp;
use crate::measure::{
    support, Exponent, FiniteMeasureSpace, MeasurableFn, SigmaSubalgebra, Support,
    DEFAULT_SUPPORT_TOL,
};
use crate::scalar::{Scalar, C};

/// `T = M_w E M_u` on L^p of a finite discrete measure space.
#[derive(Debug, Clone, PartialEq)]
pub struct WceOperator<S: Scalar> {
    space: FiniteMeasureSpace<S>,
    subalgebra: SigmaSubalgebra,
    inner_weight: MeasurableFn<S>,
    outer_weight: MeasurableFn<S>,
    p: S,
    euw: MeasurableFn<S>,
}

impl<S: Scalar> WceOperator<S> {
    /// Builds the operator, validating dimensions and the exponent
    /// (1 ≤ p < ∞; the operator theorems do not cover the p = ∞ endpoint).
    pub fn new(
        space: FiniteMeasureSpace<S>,
        subalgebra: SigmaSubalgebra,
        inner_weight: MeasurableFn<S>,
        outer_weight: MeasurableFn<S>,
        p: Exponent<S>,
    ) -> Result<Self> {
        let n = space.len();
        if subalgebra.atom_count() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: subalgebra.atom_count(),
            });
        }
        for f in [&inner_weight, &outer_weight] {
            if f.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: f.len(),
                });
            }
        }
        let p = match p {
            Exponent::Finite(p) => {
                if p < S::one() || !p.is_finite() {
                    return Err(Error::ExponentBelowOne {
                        p: p.to_f64().unwrap_or(f64::NAN),
                    });
                }
                p
            }
            Exponent::Infinity => {
                return Err(Error::UnsupportedExponent {
                    context: "operators act on L^p with 1 <= p < infinity".into(),
                })
            }
        };
        let euw = cond_exp(&inner_weight.mul(&outer_weight), &subalgebra, &space);
        Ok(Self {
            space,
            subalgebra,
            inner_weight,
            outer_weight,
            p,
            euw,
        })
    }

    pub fn space(&self) -> &FiniteMeasureSpace<S> {
        &self.space
    }

    pub fn subalgebra(&self) -> &SigmaSubalgebra {
        &self.subalgebra
    }

    /// The weight u applied inside the conditional expectation.
    pub fn inner_weight(&self) -> &MeasurableFn<S> {
        &self.inner_weight
    }

    /// The weight w applied outside the conditional expectation.
    pub fn outer(&self) -> &MeasurableFn<S> {
        &self.outer_weight
    }

    pub fn exponent(&self) -> S {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.space.len()
    }

    /// The cached A-measurable function E(uw).
    pub fn euw(&self) -> &MeasurableFn<S> {
        &self.euw
    }

    /// `Tf = w · E(u f)`.
    pub fn apply(&self, f: &MeasurableFn<S>) -> Result<MeasurableFn<S>> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: f.len(),
            });
        }
        let e = cond_exp(&self.inner_weight.mul(f), &self.subalgebra, &self.space);
        Ok(self.outer_weight.mul(&e))
    }

    /// The boundedness functional whose sup-norm bounds `‖T‖`:
    /// `(E(|u|^{p'}))^{1/p'} (E(|w|^p))^{1/p}` for 1 < p < ∞ (A-measurable),
    /// `|u|·E(|w|)` for p = 1.
    pub fn bound_functional(&self) -> MeasurableFn<S> {
        if self.p == S::one() {
            let ew = cond_exp(&self.outer_weight.abs(), &self.subalgebra, &self.space);
            self.inner_weight.abs().mul(&ew)
        } else {
            let q = self.p / (self.p - S::one());
            let eu = cond_exp(&self.inner_weight.abs_pow(q), &self.subalgebra, &self.space)
                .abs_pow(S::one() / q);
            let ew = cond_exp(&self.outer_weight.abs_pow(self.p), &self.subalgebra, &self.space)
                .abs_pow(S::one() / self.p);
            eu.mul(&ew)
        }
    }

    /// Sup-norm K of the boundedness functional.
    pub fn bound_constant(&self) -> S {
        self.bound_functional().max_abs()
    }

    /// `T^n = M_{E(uw)^{n-1} w} E M_u` for n ≥ 1, returned as a WCE operator.
    pub fn power_closed_form(&self, n: usize) -> Self {
        assert!(n >= 1, "powers start at n = 1");
        let zero = C::new(S::zero(), S::zero());
        let outer: Vec<C<S>> = (0..self.dim())
            .map(|i| {
                let w = self.outer_weight.value(i);
                if w == zero {
                    zero
                } else {
                    pow_u(self.euw.value(i), n - 1) * w
                }
            })
            .collect();
        Self::new(
            self.space.clone(),
            self.subalgebra.clone(),
            self.inner_weight.clone(),
            MeasurableFn::new(outer),
            Exponent::Finite(self.p),
        )
        .expect("power of a valid operator is valid")
    }

    /// The Cesàro multiplier pair for index n:
    /// `v_n = Σ_{i=0}^{n-2} E(uw)^i` and `w_n = Σ_{i=1}^{n-2} (n-i-1) E(uw)^{i-1}`
    /// (empty sums are zero).
    pub fn cesaro_weights(&self, n: usize) -> CesaroWeights<S> {
        assert!(n >= 1);
        let dim = self.dim();
        let mut v = vec![C::new(S::zero(), S::zero()); dim];
        let mut w = vec![C::new(S::zero(), S::zero()); dim];
        for i in 0..dim {
            let a = self.euw.value(i);
            let mut power = C::new(S::one(), S::zero()); // a^0
            let mut v_acc = C::new(S::zero(), S::zero());
            let mut w_acc = C::new(S::zero(), S::zero());
            for k in 1..=n.saturating_sub(1) {
                // after this step `power` holds a^{k-1}
                v_acc = v_acc + power;
                if k <= n - 2 {
                    let coeff = S::from_usize(n - 1 - k).expect("small integer");
                    w_acc = w_acc + power * coeff;
                }
                power = power * a;
            }
            v[i] = v_acc;
            w[i] = w_acc;
        }
        CesaroWeights {
            n,
            v_n: MeasurableFn::new(v),
            w_n: MeasurableFn::new(w),
        }
    }

    /// Cesàro mean `A_n(T) f = n^{-1}(f + v_n·Tf)`, equal to
    /// `n^{-1} Σ_{i=0}^{n-1} T^i f`; `A_1 = I`.
    pub fn cesaro_mean_apply(&self, n: usize, f: &MeasurableFn<S>) -> Result<MeasurableFn<S>> {
        assert!(n >= 1);
        let weights = self.cesaro_weights(n);
        let tf = self.apply(f)?;
        let inv_n = C::new(S::one() / S::from_usize(n).expect("small integer"), S::zero());
        Ok(f.add(&weights.v_n.mul(&tf)).scale(inv_n))
    }

    /// `B_n(T) f = n^{-1}(w_n·Tf + (n-1)f)`, equal to
    /// `n^{-1} Σ_{k=0}^{n-2} (n-1-k) T^k f`; requires n ≥ 2.
    pub fn b_n_apply(&self, n: usize, f: &MeasurableFn<S>) -> Result<MeasurableFn<S>> {
        assert!(n >= 2, "B_n is defined for n >= 2");
        let weights = self.cesaro_weights(n);
        let tf = self.apply(f)?;
        let n_s = S::from_usize(n).expect("small integer");
        let scaled_f = f.scale(C::new(n_s - S::one(), S::zero()));
        Ok(weights
            .w_n
            .mul(&tf)
            .add(&scaled_f)
            .scale(C::new(S::one() / n_s, S::zero())))
    }

    /// Hilbert-space adjoint `T* = M_ū E M_w̄` (swap and conjugate weights).
    /// Defined for p = 2 only.
    pub fn adjoint(&self) -> Result<Self> {
        self.require_p2("adjoint")?;
        Self::new(
            self.space.clone(),
            self.subalgebra.clone(),
            self.outer_weight.conj(),
            self.inner_weight.conj(),
            Exponent::Finite(self.p),
        )
    }

    /// Aluthge transform `T̂ = M_v E M_u` with
    /// `v = χ_S · E(uw) ū / E(|u|²)`, S the support of `E(|u|²)`; the
    /// quotient is taken as zero off S. Defined for p = 2 only.
    pub fn aluthge(&self) -> Result<Self> {
        self.require_p2("aluthge transform")?;
        let eu2 = cond_exp(
            &self.inner_weight.abs_pow(S::of(2.0)),
            &self.subalgebra,
            &self.space,
        );
        let s = support(&eu2, S::of(DEFAULT_SUPPORT_TOL));
        let zero = C::new(S::zero(), S::zero());
        let v: Vec<C<S>> = (0..self.dim())
            .map(|i| {
                if s.contains(i) {
                    self.euw.value(i) * self.inner_weight.value(i).conj() / eu2.value(i)
                } else {
                    zero
                }
            })
            .collect();
        Self::new(
            self.space.clone(),
            self.subalgebra.clone(),
            self.inner_weight.clone(),
            MeasurableFn::new(v),
            Exponent::Finite(self.p),
        )
    }

    /// Spectral radius `‖E(uw)‖_∞`.
    pub fn spectral_radius_formula(&self) -> S {
        self.euw.max_abs()
    }

    /// `(I-T)^{-1} f = f + (1-E(uw))^{-1}·Tf`, valid when the spectral
    /// radius is strictly below one.
    pub fn neumann_inverse_apply(&self, f: &MeasurableFn<S>) -> Result<MeasurableFn<S>> {
        let radius = self.spectral_radius_formula();
        if !(radius < S::one()) {
            return Err(Error::NotInvertibleByNeumann {
                radius: radius.to_f64().unwrap_or(f64::NAN),
            });
        }
        let tf = self.apply(f)?;
        let one = C::new(S::one(), S::zero());
        let geometric: Vec<C<S>> = (0..self.dim())
            .map(|i| tf.value(i) / (one - self.euw.value(i)))
            .collect();
        Ok(f.add(&MeasurableFn::new(geometric)))
    }

    /// Support of the boundedness functional at the default tolerance; the
    /// set on which the strict power-boundedness criterion inspects E(uw).
    pub fn bound_support(&self) -> Support {
        support(&self.bound_functional(), S::of(DEFAULT_SUPPORT_TOL))
    }

    fn require_p2(&self, what: &str) -> Result<()> {
        if self.p != S::of(2.0) {
            return Err(Error::UnsupportedExponent {
                context: format!("{what} requires p = 2, operator has p = {}", self.p),
            });
        }
        Ok(())
    }
}

/// Multiplier pair shared by the Cesàro mean `A_n` and the averaged inverse
/// approximation `B_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CesaroWeights<S: Scalar> {
    pub n: usize,
    pub v_n: MeasurableFn<S>,
    pub w_n: MeasurableFn<S>,
}

/// Integer power with an exact-zero short circuit (so zero weights never mix
/// with huge multipliers).
fn pow_u<S: Scalar>(z: C<S>, k: usize) -> C<S> {
    let zero = C::new(S::zero(), S::zero());
    if k == 0 {
        return C::new(S::one(), S::zero());
    }
    if z == zero {
        return zero;
    }
    let mut acc = z;
    for _ in 1..k {
        acc = acc * z;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{invert, polar_aluthge, realize, two_norm, DenseMatrix};
    use crate::scalar::cx;

    type F = MeasurableFn<f64>;

    fn op(
        masses: &[f64],
        blocks: Vec<Vec<usize>>,
        u: Vec<C<f64>>,
        w: Vec<C<f64>>,
        p: f64,
    ) -> WceOperator<f64> {
        let space = FiniteMeasureSpace::new(masses.to_vec()).unwrap();
        let a = SigmaSubalgebra::new(masses.len(), blocks).unwrap();
        WceOperator::new(
            space,
            a,
            F::new(u),
            F::new(w),
            Exponent::finite(p).unwrap(),
        )
        .unwrap()
    }

    fn ones(n: usize) -> Vec<C<f64>> {
        vec![cx(1.0, 0.0); n]
    }

    /// u = w = 1 on a single two-atom block: the averaging projection.
    fn projection() -> WceOperator<f64> {
        op(&[1.0, 1.0], vec![vec![0, 1]], ones(2), ones(2), 2.0)
    }

    /// u = (1,-1), w = (1,1) on one block: T ≠ 0 with T² = 0.
    fn nilpotent() -> WceOperator<f64> {
        op(
            &[1.0, 1.0],
            vec![vec![0, 1]],
            vec![cx(1.0, 0.0), cx(-1.0, 0.0)],
            ones(2),
            2.0,
        )
    }

    #[test]
    fn apply_examples() {
        let t = projection();
        let out = t.apply(&F::from_real(vec![2.0, 4.0])).unwrap();
        assert_eq!(out, F::from_real(vec![3.0, 3.0]));

        assert_eq!(t.apply(&F::zeros(2)).unwrap(), F::zeros(2));

        let t = nilpotent();
        let out = t.apply(&F::from_real(vec![1.0, 0.0])).unwrap();
        assert_eq!(out, F::from_real(vec![0.5, 0.5]));

        assert!(matches!(
            t.apply(&F::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn euw_is_cached_consistently()  {
        let t = nilpotent();
        // E(uw) = ((1)(1) + (-1)(1))/2 = 0
        assert_eq!(t.euw().max_abs(), 0.0);
        let recomputed = cond_exp(
            &t.inner_weight().mul(t.outer()),
            t.subalgebra(),
            t.space(),
        );
        assert_eq!(*t.euw(), recomputed);
    }

    #[test]
    fn bound_functional_examples() {
        let z = op(&[1.0, 1.0], vec![vec![0, 1]], vec![cx(0.0, 0.0); 2], vec![cx(0.0, 0.0); 2], 2.0);
        assert_eq!(z.bound_functional().max_abs(), 0.0);

        let t = projection();
        let b = t.bound_functional();
        for i in 0..2 {
            assert!((b.value(i) - cx(1.0, 0.0)).norm() < 1e-15);
        }

        // per-block weighted averages, frozen from the defining formula:
        // block {0,1}, masses (1,1): E|u|^2 = 5/2, E|w|^2 = 1 -> sqrt(5/2)
        // block {2,3}, masses (2,1): E|u|^2 = 2/3, E|w|^2 = 19/3 -> sqrt(38/9)
        let t = op(
            &[1.0, 1.0, 2.0, 1.0],
            vec![vec![0, 1], vec![2, 3]],
            vec![cx(1.0, 0.0), cx(2.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)],
            vec![cx(1.0, 0.0), cx(1.0, 0.0), cx(3.0, 0.0), cx(1.0, 0.0)],
            2.0,
        );
        let b = t.bound_functional();
        let block1 = (5.0f64 / 2.0).sqrt();
        let block2 = (38.0f64 / 9.0).sqrt();
        assert!((b.value(0).re - block1).abs() < 1e-12);
        assert!((b.value(1).re - block1).abs() < 1e-12);
        assert!((b.value(2).re - block2).abs() < 1e-12);
        assert!((b.value(3).re - block2).abs() < 1e-12);
    }

    #[test]
    fn bound_functional_p1_uses_moduli() {
        let t = op(
            &[1.0, 2.0],
            vec![vec![0, 1]],
            vec![cx(-2.0, 0.0), cx(0.0, 1.0)],
            vec![cx(0.0, -3.0), cx(1.0, 0.0)],
            1.0,
        );
        // E(|w|) = (1*3 + 2*1)/3 = 5/3; |u| = (2, 1)
        let b = t.bound_functional();
        assert!((b.value(0).re - 10.0 / 3.0).abs() < 1e-14);
        assert!((b.value(1).re - 5.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn power_closed_form_examples() {
        let t = nilpotent();
        // n = 1 returns T itself
        assert_eq!(t.power_closed_form(1), t);
        // euw = 0 forces T^2 = 0, cross-checked against the matrix square
        let m = realize(&t);
        let t2 = t.power_closed_form(2);
        assert_eq!(realize(&t2).max_abs(), 0.0);
        assert!(m.mul(&m).max_abs() < 1e-15);

        // euw = 1 everywhere: T^n = T for all n
        let t = projection();
        let m = realize(&t);
        for n in 2..6 {
            let tn = realize(&t.power_closed_form(n));
            assert!(tn.approx_eq(&m, 1e-14));
            assert!(m.pow(n).approx_eq(&m, 1e-14));
        }
    }

    #[test]
    fn cesaro_mean_examples() {
        let t = nilpotent();
        let f = F::new(vec![cx(1.0, 2.0), cx(-0.5, 1.0)]);
        // A_1 = I
        assert_eq!(t.cesaro_mean_apply(1, &f).unwrap(), f);
        // A_2 = (f + Tf)/2
        let want = f.add(&t.apply(&f).unwrap()).scale(cx(0.5, 0.0));
        assert_eq!(t.cesaro_mean_apply(2, &f).unwrap(), want);

        // a generic instance against the direct power sum at n = 5
        let t = op(
            &[1.0, 2.0, 0.5],
            vec![vec![0, 2], vec![1]],
            vec![cx(0.4, 0.3), cx(-1.0, 0.2), cx(0.8, 0.0)],
            vec![cx(1.0, -0.5), cx(0.6, 0.0), cx(-0.2, 0.9)],
            2.0,
        );
        let f = F::new(vec![cx(1.0, 0.0), cx(0.0, 1.0), cx(2.0, -1.0)]);
        let m = realize(&t);
        let mut sum = F::zeros(3);
        for i in 0..5 {
            sum = sum.add(&m.pow(i).apply(&f));
        }
        let want = sum.scale(cx(0.2, 0.0));
        let got = t.cesaro_mean_apply(5, &f).unwrap();
        for i in 0..3 {
            assert!((got.value(i) - want.value(i)).norm() < 1e-10);
        }
    }

    #[test]
    fn b_n_examples() {
        let t = nilpotent();
        let f = F::new(vec![cx(2.0, 0.0), cx(0.0, -1.0)]);
        // n = 2: w_2 = 0, result f/2
        assert_eq!(t.b_n_apply(2, &f).unwrap(), f.scale(cx(0.5, 0.0)));
        // n = 3: (Tf + 2f)/3
        let want = t
            .apply(&f)
            .unwrap()
            .add(&f.scale(cx(2.0, 0.0)))
            .scale(cx(1.0 / 3.0, 0.0));
        assert_eq!(t.b_n_apply(3, &f).unwrap(), want);

        // n = 6 against the weighted power sum
        let t = op(
            &[1.0, 3.0],
            vec![vec![0, 1]],
            vec![cx(0.5, 0.1), cx(0.2, -0.4)],
            vec![cx(1.0, 0.0), cx(-0.3, 0.6)],
            2.0,
        );
        let f = F::new(vec![cx(1.0, 1.0), cx(-1.0, 0.5)]);
        let m = realize(&t);
        let n = 6usize;
        let mut sum = F::zeros(2);
        for k in 0..=(n - 2) {
            let coeff = (n - 1 - k) as f64;
            sum = sum.add(&m.pow(k).apply(&f).scale(cx(coeff, 0.0)));
        }
        let want = sum.scale(cx(1.0 / n as f64, 0.0));
        let got = t.b_n_apply(n, &f).unwrap();
        for i in 0..2 {
            assert!((got.value(i) - want.value(i)).norm() < 1e-10);
        }
    }

    #[test]
    fn adjoint_examples() {
        // real u = w: self-adjoint
        let t = projection();
        assert_eq!(t.adjoint().unwrap(), t);

        // inner-product identity for a complex instance
        let t = op(
            &[0.5, 2.0, 1.0],
            vec![vec![0, 1], vec![2]],
            vec![cx(1.0, 0.5), cx(-0.3, 0.2), cx(0.0, 1.0)],
            vec![cx(0.7, -0.1), cx(1.2, 0.0), cx(0.5, 0.5)],
            2.0,
        );
        let adj = t.adjoint().unwrap();
        let f = F::new(vec![cx(1.0, 0.0), cx(0.0, 1.0), cx(-1.0, 2.0)]);
        let g = F::new(vec![cx(0.5, 0.5), cx(2.0, 0.0), cx(0.0, -1.0)]);
        let lhs = t.space().inner(&t.apply(&f).unwrap(), &g);
        let rhs = t.space().inner(&f, &adj.apply(&g).unwrap());
        assert!((lhs - rhs).norm() < 1e-10);

        // p != 2 is rejected
        let t15 = op(&[1.0], vec![vec![0]], ones(1), ones(1), 1.5);
        assert!(matches!(
            t15.adjoint(),
            Err(Error::UnsupportedExponent { .. })
        ));
    }

    #[test]
    fn aluthge_examples() {
        // averaging projection is fixed by the transform
        let t = projection();
        let hat = t.aluthge().unwrap();
        assert_eq!(hat, t);

        // u = 0: the transform is zero (S is empty)
        let t = op(
            &[1.0, 1.0],
            vec![vec![0, 1]],
            vec![cx(0.0, 0.0); 2],
            ones(2),
            2.0,
        );
        let hat = t.aluthge().unwrap();
        assert_eq!(realize(&hat).max_abs(), 0.0);

        // generic instance against the polar-decomposition oracle
        let t = op(
            &[1.0, 2.0, 0.5, 1.5],
            vec![vec![0, 2], vec![1, 3]],
            vec![cx(1.0, 0.3), cx(0.4, -1.0), cx(-0.7, 0.2), cx(0.0, 0.9)],
            vec![cx(0.8, 0.0), cx(1.0, 1.0), cx(0.3, -0.5), cx(-1.2, 0.1)],
            2.0,
        );
        let hat = realize(&t.aluthge().unwrap());
        let oracle = polar_aluthge(&realize(&t), t.space());
        assert!(hat.approx_eq(&oracle, 1e-8 * oracle.max_abs().max(1.0)));
    }

    #[test]
    fn spectral_radius_examples() {
        let z = op(
            &[1.0, 1.0],
            vec![vec![0, 1]],
            vec![cx(0.0, 0.0); 2],
            ones(2),
            2.0,
        );
        assert_eq!(z.spectral_radius_formula(), 0.0);

        let t = nilpotent();
        assert_eq!(t.spectral_radius_formula(), 0.0);
        // matrix eigen-oracle: T^2 = 0 so every Gelfand iterate past 1 vanishes
        assert_eq!(realize(&t).pow(2).max_abs(), 0.0);

        let t = projection();
        assert_eq!(t.spectral_radius_formula(), 1.0);
        // Gelfand limit at n = 64 on the projection is exactly 1
        let norm64 = two_norm(&realize(&t).pow(64), t.space());
        assert!((norm64.powf(1.0 / 64.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn neumann_examples() {
        // T = 0: inverse of I - T is the identity
        let z = op(
            &[1.0, 1.0],
            vec![vec![0, 1]],
            vec![cx(0.0, 0.0); 2],
            ones(2),
            2.0,
        );
        let f = F::new(vec![cx(1.0, 2.0), cx(-3.0, 0.0)]);
        assert_eq!(z.neumann_inverse_apply(&f).unwrap(), f);

        // euw = 1/2: (I-T)^{-1} = I + 2T, checked by direct algebra
        let t = op(
            &[1.0, 1.0],
            vec![vec![0, 1]],
            ones(2),
            vec![cx(0.5, 0.0), cx(0.5, 0.0)],
            2.0,
        );
        let m = realize(&t);
        let i = DenseMatrix::identity(2);
        let lhs = i.sub(&m).mul(&i.add(&m.scale(cx(2.0, 0.0))));
        assert!(lhs.approx_eq(&i, 1e-14));
        let got = t.neumann_inverse_apply(&f).unwrap();
        let want = f.add(&t.apply(&f).unwrap().scale(cx(2.0, 0.0)));
        assert_eq!(got, want);
        // and against the Gaussian-elimination inverse
        let inv = invert(&i.sub(&m)).unwrap();
        let want2 = inv.apply(&f);
        for i in 0..2 {
            assert!((got.value(i) - want2.value(i)).norm() < 1e-12);
        }

        // spectral radius 1 refuses the closed form
        let p = projection();
        assert!(matches!(
            p.neumann_inverse_apply(&f),
            Err(Error::NotInvertibleByNeumann { .. })
        ));
    }

    #[test]
    fn cesaro_weights_match_their_defining_sums() {
        let t = op(
            &[1.0, 2.0],
            vec![vec![0, 1]],
            vec![cx(0.9, 0.2), cx(0.1, -0.5)],
            vec![cx(1.1, 0.0), cx(0.4, 0.4)],
            2.0,
        );
        for n in 1..=7 {
            let cw = t.cesaro_weights(n);
            assert_eq!(cw.n, n);
            for i in 0..2 {
                let a = t.euw().value(i);
                let mut v = cx::<f64>(0.0, 0.0);
                if n >= 2 {
                    for k in 0..=(n - 2) {
                        v += pow_u(a, k);
                    }
                }
                let mut w = cx::<f64>(0.0, 0.0);
                if n >= 3 {
                    for k in 1..=(n - 2) {
                        w += pow_u(a, k - 1) * ((n - k - 1) as f64);
                    }
                }
                assert!((cw.v_n.value(i) - v).norm() < 1e-12);
                assert!((cw.w_n.value(i) - w).norm() < 1e-12);
            }
        }
    }
}
