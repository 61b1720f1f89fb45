//! `G`-forms given concretely: a Gram matrix plus the matrices of the
//! `G`-action, and the three structural conditions satisfied by trace forms.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{GroupAlgebra, HermitianElement};
use crate::error::{Error, Result};
use crate::field::{FieldElement, Gf2nField};
use crate::group::FiniteGroup;
use crate::linalg::Matrix;

#[derive(Clone, Debug)]
pub struct GFormGram {
    pub group: Arc<FiniteGroup>,
    pub field: Gf2nField,
    pub gram: Matrix,
    /// `action[u]` has the coordinates of `u·e_b` as column `b`.
    pub action: Vec<Matrix>,
    /// Columns `F(e_b)` of the squaring map of a trace form; `F` is
    /// semilinear, `F(Σ c_b e_b) = Σ c_b^2 F(e_b)`.
    pub frobenius: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormPropertyReport {
    /// `q(x, s x) = 0` for every `s` of order 2.
    pub isotropic: bool,
    /// `σ_G x = q(x, e) e` and `q(e, x)^2 = q(x, x)` for a fixed vector `e`.
    pub fixed_vector: bool,
    pub e: Option<Vec<FieldElement>>,
    /// `q(Fx, Fy) = q(x, y)^2`; only defined for trace forms.
    pub frobenius: Option<bool>,
    pub random_samples: usize,
}

impl FormPropertyReport {
    pub fn all_pass(&self) -> bool {
        self.isotropic && self.fixed_vector && self.frobenius != Some(false)
    }
}

fn permutation_action(group: &FiniteGroup) -> Vec<Matrix> {
    let n = group.order();
    (0..n)
        .map(|a| {
            let mut m = Matrix::zeros(n, n);
            for h in 0..n {
                m[(group.mul(a, h), h)] = FieldElement::ONE;
            }
            m
        })
        .collect()
}

impl GFormGram {
    /// Validates symmetry, nondegeneracy, the action law and invariance
    /// `q(a x, y) = q(x, a^-1 y)`.
    pub fn new(
        group: Arc<FiniteGroup>,
        field: Gf2nField,
        gram: Matrix,
        action: Vec<Matrix>,
        frobenius: Option<Matrix>,
    ) -> Result<Self> {
        let n = group.order();
        let square = |m: &Matrix| m.rows() == n && m.cols() == n;
        if !square(&gram) || action.len() != n || !action.iter().all(square) || !frobenius.as_ref().is_none_or(square) {
            return Err(Error::Mismatch("G-form dimensions do not match the group".into()));
        }
        if !gram.is_symmetric() {
            return Err(Error::element("Gram matrix is not symmetric"));
        }
        if gram.rank(&field) != n {
            return Err(Error::element("Gram matrix is degenerate"));
        }
        for a in 0..n {
            for b in 0..n {
                if action[a].mul(&field, &action[b])? != action[group.mul(a, b)] {
                    return Err(Error::element("action matrices do not follow the group law"));
                }
            }
            let lhs = action[a].transpose().mul(&field, &gram)?;
            let rhs = gram.mul(&field, &action[group.inv(a)])?;
            if lhs != rhs {
                return Err(Error::element("form is not G-invariant"));
            }
        }
        Ok(GFormGram {
            group,
            field,
            gram,
            action,
            frobenius,
        })
    }

    /// The unit form `q(g, h) = δ_{g,h}` on `k[G]`, with the identity as the
    /// squaring map of the idempotent basis of `k^G`.
    pub fn unit(group: Arc<FiniteGroup>, field: Gf2nField) -> Self {
        let n = group.order();
        GFormGram {
            action: permutation_action(&group),
            group,
            field,
            gram: Matrix::identity(n),
            frobenius: Some(Matrix::identity(n)),
        }
    }

    /// `q_h` on `A` in the basis `G`.
    pub fn from_hermitian(alg: &GroupAlgebra, h: &HermitianElement) -> Self {
        GFormGram {
            group: alg.group_arc().clone(),
            field: alg.field().clone(),
            gram: alg.q_h_gram(h),
            action: permutation_action(alg.group()),
            frobenius: None,
        }
    }

    /// Copy with entries `(i, j)` and `(j, i)` changed by `1`.
    pub fn perturbed(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.gram[(i, j)] += FieldElement::ONE;
        if i != j {
            out.gram[(j, i)] += FieldElement::ONE;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn q(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        self.gram.bilinear(&self.field, x, y)
    }

    pub fn act(&self, u: usize, x: &[FieldElement]) -> Vec<FieldElement> {
        self.action[u].mul_vec(&self.field, x)
    }

    fn apply_frobenius(&self, f: &Matrix, x: &[FieldElement]) -> Vec<FieldElement> {
        let sq: Vec<FieldElement> = x.iter().map(|&c| self.field.square(c)).collect();
        f.mul_vec(&self.field, &sq)
    }

    /// Checks the three conditions on every basis vector and on
    /// `samples` seeded random vectors.
    pub fn check_form_properties(&self, seed: u64, samples: usize) -> FormPropertyReport {
        let n = self.dim();
        let f = &self.field;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vectors: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| {
                let mut v = vec![FieldElement::ZERO; n];
                v[i] = FieldElement::ONE;
                v
            })
            .collect();
        for _ in 0..samples {
            vectors.push((0..n).map(|_| f.random(&mut rng)).collect());
        }

        let involutions = self.group.order_two_elements();
        let isotropic = involutions
            .iter()
            .all(|&s| vectors.iter().all(|x| self.q(x, &self.act(s, x)).is_zero()));

        let e = self.fixed_vector();
        let fixed_vector = e.as_ref().is_some_and(|e| {
            vectors.iter().all(|x| {
                let sigma_x = (0..n).fold(vec![FieldElement::ZERO; n], |acc, u| {
                    acc.iter().zip(self.act(u, x)).map(|(&a, b)| a + b).collect()
                });
                let qe = self.q(x, e);
                let rhs: Vec<FieldElement> = e.iter().map(|&c| f.mul(qe, c)).collect();
                sigma_x == rhs && f.square(qe) == self.q(x, x)
            })
        });

        let frobenius = self.frobenius.as_ref().map(|fm| {
            vectors.iter().enumerate().all(|(i, x)| {
                let y = &vectors[(i * 7 + 3) % vectors.len()];
                let lhs = self.q(&self.apply_frobenius(fm, x), &self.apply_frobenius(fm, y));
                lhs == f.square(self.q(x, y))
            })
        });

        FormPropertyReport {
            isotropic,
            fixed_vector,
            e,
            frobenius,
            random_samples: samples,
        }
    }

    /// The vector `e` with `σ_G x = q(x, e) e`: writing `σ_G x = ℓ(x) v` on
    /// the fixed line `k v`, `ℓ = λ q(·, v)` and `e = λ^{1/2} v`.
    fn fixed_vector(&self) -> Option<Vec<FieldElement>> {
        let n = self.dim();
        let f = &self.field;
        let mut rows = Vec::new();
        for u in 0..n {
            let mut m = self.action[u].clone();
            for i in 0..n {
                m[(i, i)] += FieldElement::ONE;
            }
            rows.extend(m.to_rows());
        }
        let line = Matrix::from_rows(rows).ok()?.kernel(f);
        if line.len() != 1 {
            return None;
        }
        let v = &line[0];
        let pivot = v.iter().position(|c| !c.is_zero())?;
        let mut lambda = None;
        for b in 0..n {
            let mut x = vec![FieldElement::ZERO; n];
            x[b] = FieldElement::ONE;
            let sum: FieldElement = (0..n).map(|u| self.action[u][(pivot, b)]).sum();
            let ell = f.div(sum, v[pivot]).ok()?;
            let qv = self.q(&x, v);
            match (qv.is_zero(), lambda) {
                (true, _) if !ell.is_zero() => return None,
                (true, _) => {}
                (false, None) => lambda = Some(f.div(ell, qv).ok()?),
                (false, Some(l)) if f.mul(l, qv) != ell => return None,
                _ => {}
            }
        }
        let mu = f.sqrt(lambda?);
        Some(v.iter().map(|&c| f.mul(mu, c)).collect())
    }
}
