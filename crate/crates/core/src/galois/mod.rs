//! `G`-Galois algebras over `k = F_q` and their trace forms.
//!
//! Over a finite field a Galois algebra is determined by the image `g ∈ G`
//! of Frobenius. With `m = ord(g)` and `K = F_{q^m}` we realize it as
//!
//! ```text
//! L = { f : G -> K  |  f(g x) = f(x)^q },     (u·f)(x) = f(x u),
//! ```
//!
//! with pointwise multiplication. Such an `f` is determined by its values on
//! representatives of the right cosets `<g> \ G` (the smallest index in each
//! coset), so `L ≅ K^{[G:<g>]}` as an algebra and `Tr_{L/k}(f) = Σ_r Tr_{K/k} f(r)`.
//! Pointwise `q`-th powers act as left translation by `g`, so `g` is the
//! Frobenius image; for `g = 1` this is the split algebra `k^G`.

mod dictionary;
mod forms;

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldElement, Gf2nField, SubfieldEmbedding, MAX_DEGREE};
use crate::group::{Element, FiniteGroup};
use crate::linalg::Matrix;

pub use dictionary::{BnaResult, CharacterInvariants, CoincidenceReport, Construction, EquivSearch, IsoMethod, IsoReport};
pub use forms::{FormPropertyReport, GFormGram};

#[derive(Clone, Debug)]
pub struct GaloisAlgebra {
    group: Arc<FiniteGroup>,
    base: Gf2nField,
    frobenius_image: Element,
    m: usize,
    ext: Gf2nField,
    embedding: SubfieldEmbedding,
    reps: Vec<Element>,
    /// `y = g^i r_j` stored as `(i, j)`.
    decomposition: Vec<(usize, usize)>,
    /// `α^p`, `p < m`, for a primitive `α` of `K`: a `k`-basis of `K`.
    powers: Vec<FieldElement>,
    /// Inverse of `T_pq = Tr_{K/k}(α^{p+q})`.
    dual: Matrix,
}

impl GaloisAlgebra {
    pub fn new(group: impl Into<Arc<FiniteGroup>>, frobenius_image: Element, base: Gf2nField) -> Result<Self> {
        let group = group.into();
        if frobenius_image >= group.order() {
            return Err(Error::element("Frobenius image is not a group element"));
        }
        let m = group.element_order(frobenius_image);
        let degree = base.degree() as usize * m;
        if degree > MAX_DEGREE as usize {
            return Err(Error::field(format!(
                "extension of degree {m} over {base} exceeds GF(2^{MAX_DEGREE})"
            )));
        }
        let ext = Gf2nField::with_degree(degree as u32)?;
        let embedding = SubfieldEmbedding::new(&base, &ext)?;

        let g = frobenius_image;
        let mut decomposition = vec![(usize::MAX, usize::MAX); group.order()];
        let mut reps = Vec::new();
        for r in 0..group.order() {
            if decomposition[r].0 != usize::MAX {
                continue;
            }
            let j = reps.len();
            reps.push(r);
            let mut y = r;
            for i in 0..m {
                decomposition[y] = (i, j);
                y = group.mul(g, y);
            }
        }

        let alpha = ext.primitive_element();
        let powers: Vec<FieldElement> = (0..m as u64).map(|p| ext.pow(alpha, p)).collect();
        let mut t = Matrix::zeros(m, m);
        for p in 0..m {
            for q in 0..m {
                t[(p, q)] = embedding.relative_trace(ext.mul(powers[p], powers[q]))?;
            }
        }
        let dual = t
            .inverse(&base)
            .ok_or_else(|| Error::violation("trace form of K/k is degenerate"))?;
        Ok(GaloisAlgebra {
            group,
            base,
            frobenius_image,
            m,
            ext,
            embedding,
            reps,
            decomposition,
            powers,
            dual,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn base_field(&self) -> &Gf2nField {
        &self.base
    }

    pub fn extension_field(&self) -> &Gf2nField {
        &self.ext
    }

    pub fn frobenius_image(&self) -> Element {
        self.frobenius_image
    }

    /// `m = ord(g) = [K : k]`.
    pub fn extension_degree(&self) -> usize {
        self.m
    }

    pub fn coset_reps(&self) -> &[Element] {
        &self.reps
    }

    pub fn is_split(&self) -> bool {
        self.frobenius_image == 0
    }

    /// `k`-dimension, equal to `|G|`.
    pub fn dim(&self) -> usize {
        self.reps.len() * self.m
    }

    /// Values of `f` at the coset representatives.
    pub fn value_at(&self, f: &[FieldElement], y: Element) -> FieldElement {
        let (i, j) = self.decomposition[y];
        let mut v = f[j];
        for _ in 0..i {
            v = self.embedding.frobenius(v);
        }
        v
    }

    pub fn one(&self) -> Vec<FieldElement> {
        vec![FieldElement::ONE; self.reps.len()]
    }

    pub fn mul(&self, f: &[FieldElement], h: &[FieldElement]) -> Vec<FieldElement> {
        f.iter().zip(h).map(|(&a, &b)| self.ext.mul(a, b)).collect()
    }

    /// `(u·f)(x) = f(x u)`.
    pub fn act(&self, u: Element, f: &[FieldElement]) -> Vec<FieldElement> {
        self.reps.iter().map(|&r| self.value_at(f, self.group.mul(r, u))).collect()
    }

    /// Pointwise `q`-th power (`= g·` from the left).
    pub fn frobenius(&self, f: &[FieldElement]) -> Vec<FieldElement> {
        f.iter().map(|&a| self.embedding.frobenius(a)).collect()
    }

    /// Pointwise square, the absolute Frobenius of `L`.
    pub fn square(&self, f: &[FieldElement]) -> Vec<FieldElement> {
        f.iter().map(|&a| self.ext.square(a)).collect()
    }

    pub fn trace(&self, f: &[FieldElement]) -> FieldElement {
        f.iter()
            .map(|&a| self.embedding.relative_trace(a).expect("trace lands in k"))
            .sum()
    }

    /// Element with `k`-coordinates `c` in the basis `e_{j,p} = α^p · [r_j]`.
    pub fn from_coords(&self, c: &[FieldElement]) -> Vec<FieldElement> {
        (0..self.reps.len())
            .map(|j| {
                (0..self.m)
                    .map(|p| self.ext.mul(self.embedding.embed(c[j * self.m + p]), self.powers[p]))
                    .sum()
            })
            .collect()
    }

    pub fn to_coords(&self, f: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.dim());
        for &v in f {
            let t: Vec<FieldElement> = self
                .powers
                .iter()
                .map(|&a| self.embedding.relative_trace(self.ext.mul(v, a)).expect("trace lands in k"))
                .collect();
            out.extend(self.dual.mul_vec(&self.base, &t));
        }
        out
    }

    pub fn basis_element(&self, i: usize) -> Vec<FieldElement> {
        let mut c = vec![FieldElement::ZERO; self.dim()];
        c[i] = FieldElement::ONE;
        self.from_coords(&c)
    }

    /// Coordinates of `u·v` for every `u ∈ G`.
    pub fn orbit_coords(&self, v: &[FieldElement]) -> Vec<Vec<FieldElement>> {
        (0..self.group.order()).map(|u| self.to_coords(&self.act(u, v))).collect()
    }

    /// `{u·v}` is a `k`-basis.
    pub fn is_free_generator(&self, v: &[FieldElement]) -> bool {
        Matrix::from_columns(&self.orbit_coords(v))
            .map(|m| m.rank(&self.base) == self.dim())
            .unwrap_or(false)
    }

    /// `L^H` for a subgroup `H`, as coordinate vectors.
    pub fn fixed_subspace(&self, subgroup: &[Element]) -> Vec<Vec<FieldElement>> {
        let n = self.dim();
        let mut rows = Vec::new();
        for &u in subgroup {
            let cols: Vec<Vec<FieldElement>> = (0..n)
                .map(|b| {
                    let mut c = self.to_coords(&self.act(u, &self.basis_element(b)));
                    c[b] += FieldElement::ONE;
                    c
                })
                .collect();
            rows.extend(Matrix::from_columns(&cols).expect("square").to_rows());
        }
        if rows.is_empty() {
            return (0..n)
                .map(|i| {
                    let mut c = vec![FieldElement::ZERO; n];
                    c[i] = FieldElement::ONE;
                    c
                })
                .collect();
        }
        Matrix::from_rows(rows).expect("rectangular").kernel(&self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, quaternion8};

    #[test]
    fn model_laws() {
        for (grp, g, n) in [(cyclic(4), 1, 1), (cyclic(4), 2, 1), (quaternion8(), 2, 2), (cyclic(2), 1, 1)] {
            let l = GaloisAlgebra::new(grp.clone(), g, Gf2nField::with_degree(n).unwrap()).unwrap();
            assert_eq!(l.dim(), grp.order());
            for i in 0..l.dim() {
                let e = l.basis_element(i);
                let mut c = vec![FieldElement::ZERO; l.dim()];
                c[i] = FieldElement::ONE;
                assert_eq!(l.to_coords(&e), c);
                for u in 0..grp.order() {
                    for w in 0..grp.order() {
                        assert_eq!(l.act(u, &l.act(w, &e)), l.act(grp.mul(u, w), &e));
                    }
                    let f = l.basis_element((i + 1) % l.dim());
                    assert_eq!(l.act(u, &l.mul(&e, &f)), l.mul(&l.act(u, &e), &l.act(u, &f)));
                }
            }
            // Frobenius is left translation by g
            let x = l.basis_element(l.dim() - 1);
            let fx = l.frobenius(&x);
            for y in 0..grp.order() {
                assert_eq!(l.value_at(&fx, y), l.value_at(&x, grp.mul(g, y)));
            }
            assert_eq!(l.fixed_subspace(&(0..grp.order()).collect::<Vec<_>>()).len(), 1);
        }
    }

    #[test]
    fn size_limit() {
        let f = Gf2nField::with_degree(3).unwrap();
        assert!(GaloisAlgebra::new(cyclic(8), 1, f).is_err());
    }
}
