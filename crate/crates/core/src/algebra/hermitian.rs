//! Hermitian elements `h = h*`, their forms `q_h(a, b) = δ(a h b*)` and the
//! invariants `h_ε`.

use alloc::vec;
use alloc::vec::Vec;

use super::{AlgebraElement, GroupAlgebra};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::{Element, EssentialCharacter, QuotientCoordinates};
use crate::linalg::Matrix;

/// A `*`-fixed element together with its cached flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermitianElement {
    element: AlgebraElement,
    special: bool,
    normalized: bool,
    lambda: FieldElement,
}

impl HermitianElement {
    pub fn element(&self) -> &AlgebraElement {
        &self.element
    }

    pub fn into_element(self) -> AlgebraElement {
        self.element
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        self.element.coeffs()
    }

    /// Coefficients vanish on every element of order exactly 2.
    pub fn is_special(&self) -> bool {
        self.special
    }

    /// Special with `t(h) = 1`.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `λ = δ(h)`, the coefficient of the identity.
    pub fn lambda(&self) -> FieldElement {
        self.lambda
    }
}

impl GroupAlgebra {
    pub fn make_hermitian(&self, x: AlgebraElement) -> Result<HermitianElement> {
        self.check(&x)?;
        if self.star(&x) != x {
            return Err(Error::element("element is not fixed by the involution"));
        }
        let g = self.group();
        let special = g.order_two_elements().iter().all(|&s| x.coeff(s).is_zero());
        let normalized = special && self.augmentation(&x) == FieldElement::ONE;
        Ok(HermitianElement {
            lambda: x.coeff(0),
            element: x,
            special,
            normalized,
        })
    }

    pub fn is_special(&self, h: &HermitianElement) -> bool {
        h.special
    }

    /// `h = (μ·1) h' (μ·1)*` with `μ = t(h)^{1/2}` and `t(h') = 1`.
    pub fn normalize(&self, h: &HermitianElement) -> Result<(HermitianElement, FieldElement)> {
        let t = self.augmentation(&h.element);
        if t.is_zero() || !self.is_invertible(&h.element) {
            return Err(Error::precondition("normalization needs an invertible hermitian element"));
        }
        let inv = self.field().inv(t)?;
        let hn = self.make_hermitian(self.scale(inv, &h.element))?;
        Ok((hn, self.field().sqrt(t)))
    }

    /// Gram matrix of `q_h` in the basis `G`: entry `(g, g')` is
    /// `δ(g h g'^-1) = h_{g^-1 g'}`.
    pub fn q_h_gram(&self, h: &HermitianElement) -> Matrix {
        let g = self.group();
        let n = g.order();
        let mut m = Matrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                m[(a, b)] = h.element.coeff(g.mul(g.inv(a), b));
            }
        }
        debug_assert!(m.is_symmetric());
        m
    }

    /// `h = Σ_g q(v, g v) g` for a G-form given by its Gram matrix and the
    /// matrices of the `G`-action, and a free generator `v`.
    pub fn hermitian_from_generator(&self, gram: &Matrix, action: &[Matrix], v: &[FieldElement]) -> Result<HermitianElement> {
        let n = self.dim();
        if gram.rows() != n || gram.cols() != n || action.len() != n || v.len() != n {
            return Err(Error::Mismatch("G-form dimensions do not match the group".into()));
        }
        let f = self.field();
        let orbit: Vec<Vec<FieldElement>> = action.iter().map(|m| m.mul_vec(f, v)).collect();
        if Matrix::from_columns(&orbit)?.rank(f) != n {
            return Err(Error::precondition("vector does not generate a free k[G]-module"));
        }
        let coeffs = orbit.iter().map(|gv| gram.bilinear(f, v, gv)).collect();
        self.make_hermitian(AlgebraElement::from_coeffs(coeffs))
    }

    /// `h_ε = Σ_{s ∈ S} δ_s(h)` where `G_c = S ⊔ S^-1`; `0` for trivial `ε`.
    pub fn h_epsilon(&self, h: &HermitianElement, eps: &EssentialCharacter) -> FieldElement {
        let g = self.group();
        let half = |pick_small: bool| -> FieldElement {
            eps.support()
                .into_iter()
                .filter(|&s| (s < g.inv(s)) == pick_small)
                .map(|s| h.element.coeff(s))
                .sum()
        };
        let value = half(true);
        debug_assert_eq!(value, half(false), "h_ε depends on the half-set");
        value
    }

    /// `h_ε / t(h)`.
    pub fn h_epsilon_norm(&self, h: &HermitianElement, eps: &EssentialCharacter) -> Result<FieldElement> {
        let t = self.augmentation(&h.element);
        if t.is_zero() {
            return Err(Error::precondition("t(h) = 0, h is not invertible"));
        }
        self.field().div(self.h_epsilon(h, eps), t)
    }

    /// `a h a*`.
    pub fn transform(&self, a: &AlgebraElement, h: &HermitianElement) -> Result<HermitianElement> {
        let ah = self.mul(a, &h.element)?;
        let x = self.mul(&ah, &self.star(a))?;
        self.make_hermitian(x)
    }

    /// `h(z_1, ..., z_n) = 1 + Σ z_i (γ_i + γ_i^-1)`.
    pub fn hermitian_family(&self, gammas: &[Element], zs: &[FieldElement]) -> Result<HermitianElement> {
        if gammas.len() != zs.len() {
            return Err(Error::precondition("one scalar per γ is required"));
        }
        let g = self.group();
        for &gamma in gammas {
            if gamma >= g.order() {
                return Err(Error::element("γ is not a group element"));
            }
            let ord = g.element_order(gamma);
            if ord <= 2 || !ord.is_power_of_two() {
                return Err(Error::precondition("each γ must have 2-power order > 2"));
            }
        }
        QuotientCoordinates::new(g).dual_characters(gammas)?;
        let mut x = self.one();
        for (&gamma, &z) in gammas.iter().zip(zs) {
            if !self.field().contains(z) {
                return Err(Error::element("scalar outside the field"));
            }
            let mut c = x.clone().into_coeffs();
            c[gamma] += z;
            c[g.inv(gamma)] += z;
            x = AlgebraElement::from_coeffs(c);
        }
        self.make_hermitian(x)
    }

    /// All normalized special hermitian elements, `1 + Σ_{s∈Σ} a_s (s + s^-1)`,
    /// ordered by `Σ a_s q^i` over the `Σ` order.
    pub fn normalized_special_hermitians(&self) -> Vec<HermitianElement> {
        let sigma = self.group().sigma_partition().sigma;
        let q = self.field().order() as usize;
        let total = q.pow(sigma.len() as u32);
        (0..total)
            .map(|mut idx| {
                let mut c = vec![FieldElement::ZERO; self.dim()];
                c[0] = FieldElement::ONE;
                for &s in &sigma {
                    let a = FieldElement::from_bits((idx % q) as u32);
                    idx /= q;
                    c[s] = a;
                    c[self.group().inv(s)] = a;
                }
                self.make_hermitian(AlgebraElement::from_coeffs(c)).expect("hermitian by construction")
            })
            .collect()
    }
}
