//! The group algebra `A = k[G]` with its involution `g* = g^-1`.
//!
//! Elements are plain coefficient vectors indexed by group element; the
//! [`GroupAlgebra`] context supplies the group table and field arithmetic
//! and checks that operands belong to it.

mod equivalence;
mod hermitian;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldElement, Gf2nField};
use crate::group::{Element, EssentialCharacter, FiniteGroup};
use crate::linalg::Matrix;

pub use equivalence::{EgEvidence, InvariantVerdict, DEFAULT_EQUIV_BUDGET};
pub use hermitian::HermitianElement;

/// `x = Σ x_g g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraElement {
    coeffs: Vec<FieldElement>,
}

impl AlgebraElement {
    pub fn from_coeffs(coeffs: Vec<FieldElement>) -> Self {
        AlgebraElement { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    /// `δ_g(x) = x_g`.
    #[inline]
    pub fn coeff(&self, g: Element) -> FieldElement {
        self.coeffs[g]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    group: Arc<FiniteGroup>,
    field: Gf2nField,
}

impl PartialEq for GroupAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
    }
}

impl GroupAlgebra {
    pub fn new(group: impl Into<Arc<FiniteGroup>>, field: Gf2nField) -> Self {
        GroupAlgebra {
            group: group.into(),
            field,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> &Gf2nField {
        &self.field
    }

    /// `|G|`, the `k`-dimension of `A`.
    pub fn dim(&self) -> usize {
        self.group.order()
    }

    /// Validates a coefficient vector.
    pub fn element(&self, coeffs: Vec<FieldElement>) -> Result<AlgebraElement> {
        if coeffs.len() != self.dim() {
            return Err(Error::Mismatch(format!(
                "{} coefficients for a group of order {}",
                coeffs.len(),
                self.dim()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| !self.field.contains(c)) {
            return Err(Error::element(format!("{c} is not in {}", self.field)));
        }
        Ok(AlgebraElement { coeffs })
    }

    pub(crate) fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Mismatch(format!(
                "element of length {} in an algebra of dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            coeffs: vec![FieldElement::ZERO; self.dim()],
        }
    }

    pub fn scalar(&self, lambda: FieldElement) -> AlgebraElement {
        let mut x = self.zero();
        x.coeffs[0] = lambda;
        x
    }

    pub fn one(&self) -> AlgebraElement {
        self.scalar(FieldElement::ONE)
    }

    /// The basis element `g`.
    pub fn basis(&self, g: Element) -> AlgebraElement {
        let mut x = self.zero();
        x.coeffs[g] = FieldElement::ONE;
        x
    }

    /// `σ_G = Σ_g g`.
    pub fn sigma_g(&self) -> AlgebraElement {
        AlgebraElement {
            coeffs: vec![FieldElement::ONE; self.dim()],
        }
    }

    pub fn random_element<R: rand_core::RngCore + ?Sized>(&self, rng: &mut R) -> AlgebraElement {
        AlgebraElement {
            coeffs: (0..self.dim()).map(|_| self.field.random(rng)).collect(),
        }
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(AlgebraElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn scale(&self, lambda: FieldElement, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: x.coeffs.iter().map(|&c| self.field.mul(lambda, c)).collect(),
        }
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        let mut out = vec![FieldElement::ZERO; self.dim()];
        self.mul_into(&x.coeffs, &y.coeffs, &mut out);
        Ok(AlgebraElement { coeffs: out })
    }

    /// Convolution on raw slices; `out` is overwritten.
    pub(crate) fn mul_into(&self, x: &[FieldElement], y: &[FieldElement], out: &mut [FieldElement]) {
        out.iter_mut().for_each(|c| *c = FieldElement::ZERO);
        let g = &*self.group;
        for (a, &xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                out[g.mul(a, b)] += self.field.mul(xa, yb);
            }
        }
    }

    /// `x* = Σ x_g g^-1`.
    pub fn star(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            coeffs: (0..x.len()).map(|g| x.coeffs[self.group.inv(g)]).collect(),
        }
    }

    /// `δ_g(x)`.
    pub fn delta(&self, x: &AlgebraElement, g: Element) -> FieldElement {
        x.coeffs[g]
    }

    /// `δ(x) = δ_1(x)`, the coefficient of the identity.
    pub fn trace_delta(&self, x: &AlgebraElement) -> FieldElement {
        x.coeffs[0]
    }

    /// `t(x) = Σ_g x_g`.
    pub fn augmentation(&self, x: &AlgebraElement) -> FieldElement {
        x.coeffs.iter().copied().sum()
    }

    /// `x x* = 1`, computed both as a product and through the defining
    /// equations `(A_1)`, `(A_s)` for `s ∈ Σ`; the two agree.
    pub fn is_unitary(&self, x: &AlgebraElement) -> bool {
        let by_equations = self.satisfies_unitary_equations(x.coeffs());
        debug_assert_eq!(by_equations, {
            let p = self.mul(x, &self.star(x)).expect("same context");
            p == self.one()
        });
        by_equations
    }

    /// `(A_1)`: `Σ x_g = 1`; `(A_s)`: `Σ_g x_g x_{sg} = 0` for `s ∈ Σ`. For
    /// `s ∈ G_2` the equation is trivially `0 = 0` and `(A_s) ⟺ (A_{s^-1})`.
    pub fn satisfies_unitary_equations(&self, x: &[FieldElement]) -> bool {
        if x.iter().copied().sum::<FieldElement>() != FieldElement::ONE {
            return false;
        }
        self.group
            .sigma_partition()
            .sigma
            .iter()
            .all(|&s| self.quadratic_equation(x, s).is_zero())
    }

    /// `P_s(x) = Σ_g x_g x_{sg}`.
    pub fn quadratic_equation(&self, x: &[FieldElement], s: Element) -> FieldElement {
        (0..x.len())
            .map(|g| self.field.mul(x[g], x[self.group.mul(s, g)]))
            .sum()
    }

    /// `μ_ε(x) = Σ_{ε(g)=c} x_g` for unitary `x`, which is always 0 or 1.
    pub fn mu_epsilon(&self, x: &AlgebraElement, eps: &EssentialCharacter) -> Result<u8> {
        self.check(x)?;
        if !self.is_unitary(x) {
            return Err(Error::precondition("μ_ε is only defined on unitary elements"));
        }
        let v = self.partial_sum(x, eps, 1);
        match v.bits() {
            0 | 1 => Ok(v.bits() as u8),
            _ => Err(Error::violation(format!("μ_ε(x) = {v} is not in GF(2)"))),
        }
    }

    /// `Σ_{ε(g) = side} x_g`.
    pub fn partial_sum(&self, x: &AlgebraElement, eps: &EssentialCharacter, side: u8) -> FieldElement {
        (0..x.len())
            .filter(|&g| eps.value(g) == side)
            .map(|g| x.coeffs[g])
            .sum()
    }

    /// The matrix of `y ↦ x y` in the basis `G`: entry `(g, h)` is `x_{g h^-1}`.
    pub fn left_regular_matrix(&self, x: &AlgebraElement) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for h in 0..n {
            for a in 0..n {
                m[(self.group.mul(a, h), h)] = x.coeffs[a];
            }
        }
        m
    }

    /// Units of `A` are exactly the elements with invertible left-regular matrix.
    pub fn is_invertible(&self, x: &AlgebraElement) -> bool {
        self.left_regular_matrix(x).rank(&self.field) == self.dim()
    }

    pub fn inverse(&self, x: &AlgebraElement) -> Option<AlgebraElement> {
        let mut e = vec![FieldElement::ZERO; self.dim()];
        e[0] = FieldElement::ONE;
        let m = self.left_regular_matrix(x);
        if m.rank(&self.field) != self.dim() {
            return None;
        }
        m.solve(&self.field, &e).map(AlgebraElement::from_coeffs)
    }

    /// `(x_+, x_-)`: the parts of `x` supported on `ker ε` and on its complement.
    pub fn split_by_character(&self, x: &AlgebraElement, eps: &EssentialCharacter) -> (AlgebraElement, AlgebraElement) {
        let mut plus = self.zero();
        let mut minus = self.zero();
        for g in 0..self.dim() {
            if eps.value(g) == 0 {
                plus.coeffs[g] = x.coeffs[g];
            } else {
                minus.coeffs[g] = x.coeffs[g];
            }
        }
        (plus, minus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, quaternion8};

    fn fe(b: u32) -> FieldElement {
        FieldElement::from_bits(b)
    }

    #[test]
    fn basics() {
        let a = GroupAlgebra::new(quaternion8(), Gf2nField::prime());
        for g in 0..8 {
            let x = a.basis(g);
            assert_eq!(a.mul(&x, &a.star(&x)).unwrap(), a.one());
            assert!(a.is_unitary(&x));
        }
        let u = 2;
        let x = a.add(&a.one(), &a.basis(u)).unwrap();
        let sq = a.mul(&x, &x).unwrap();
        assert_eq!(sq, a.add(&a.one(), &a.basis(1)).unwrap());
        assert_eq!(a.augmentation(&a.sigma_g()), FieldElement::ZERO);
        assert!(a.mul(&x, &AlgebraElement::from_coeffs(vec![fe(1)])).is_err());
        assert!(a.element(vec![fe(2); 8]).is_err());
    }

    #[test]
    fn unitary_examples() {
        let c2 = GroupAlgebra::new(cyclic(2), Gf2nField::with_degree(3).unwrap());
        for t in c2.field().elements() {
            // 1 + t(1 + c)
            let x = c2.element(vec![FieldElement::ONE + t, t]).unwrap();
            assert!(c2.is_unitary(&x));
        }
        let c4 = GroupAlgebra::new(cyclic(4), Gf2nField::prime());
        let x = c4.element(vec![fe(1), fe(1), fe(0), fe(0)]).unwrap();
        assert!(!c4.is_unitary(&x));
        assert!(!c4.is_invertible(&x));
        let s = c4.basis(1);
        assert_eq!(c4.inverse(&s).unwrap(), c4.basis(3));
    }

    #[test]
    fn mu_on_group_elements() {
        let a = GroupAlgebra::new(quaternion8(), Gf2nField::with_degree(2).unwrap());
        for eps in a.group().essential_characters() {
            for g in 0..8 {
                assert_eq!(a.mu_epsilon(&a.basis(g), &eps).unwrap(), eps.value(g));
            }
            assert_eq!(a.mu_epsilon(&a.one(), &eps).unwrap(), 0);
        }
        let eps = &a.group().essential_characters()[1];
        assert!(a.mu_epsilon(&a.zero(), eps).is_err());
    }
}
