//! Hermitian equivalence `h ~ h'` ⟺ `h' = a h a*` for a unit `a`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::{AlgebraElement, GroupAlgebra, HermitianElement};
use crate::error::{Error, Result};
use crate::field::FieldElement;

/// Default cap on brute-force candidates (`q^|G|`).
pub const DEFAULT_EQUIV_BUDGET: u64 = 1 << 24;

/// How the hypothesis `E_G = 1` of the invariant criterion was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EgEvidence {
    /// Point counts gave `|U_G/U_G^0| ≥ [G:G_0]·bound`; only `bound = 1` is
    /// accepted, and the result remains conditional on the bound being sharp.
    PointCounts { e_g_order_bound: u128 },
    /// The caller vouches for `E_G = 1`.
    UserAssertion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantVerdict {
    pub equivalent: bool,
    /// `(character label, class of h_ε + h'_ε)` for every nontrivial `ε`.
    pub classes: Vec<(u32, u8)>,
    pub evidence: EgEvidence,
}

impl GroupAlgebra {
    /// `q^|G|`, the number of brute-force candidates.
    pub fn candidate_count(&self) -> u128 {
        (self.field().order() as u128).pow(self.dim() as u32)
    }

    fn check_budget(&self, budget: u64, what: &'static str, required: u128) -> Result<()> {
        if required > budget as u128 {
            return Err(Error::BudgetExceeded {
                what,
                required,
                budget,
            });
        }
        Ok(())
    }

    pub(crate) fn equivalence_preconditions(&self, h: &HermitianElement, h2: &HermitianElement) -> Result<()> {
        self.check(h.element())?;
        self.check(h2.element())?;
        if !self.is_invertible(h.element()) || !self.is_invertible(h2.element()) {
            return Err(Error::precondition("equivalence is only defined for invertible hermitians"));
        }
        Ok(())
    }

    /// Least (in the order `Σ a_i q^i`) `a` with `a h a* = h'`, or `None`
    /// after an exhaustive search. Any such `a` is a unit since `h'` is.
    pub fn herm_equiv_bruteforce(&self, h: &HermitianElement, h2: &HermitianElement, budget: u64) -> Result<Option<AlgebraElement>> {
        self.equivalence_preconditions(h, h2)?;
        let total = self.candidate_count();
        self.check_budget(budget, "hermitian equivalence search", total)?;
        Ok(self.herm_equiv_search_range(h, h2, 0..total))
    }

    /// Scans candidate indices in `range` (no precondition checks). Used by
    /// the parallel driver, which splits on the most significant digit.
    pub fn herm_equiv_search_range(&self, h: &HermitianElement, h2: &HermitianElement, range: Range<u128>) -> Option<AlgebraElement> {
        let n = self.dim();
        let q = self.field().order();
        let f = self.field();
        let g = self.group();
        let th = self.augmentation(h.element());
        let th2 = self.augmentation(h2.element());
        let mut a = decode(range.start, n, q);
        let mut b = vec![FieldElement::ZERO; n];
        let hc = h.coeffs();
        let target = h2.coeffs();
        for _ in range.start..range.end {
            let ta: FieldElement = a.iter().copied().sum();
            if f.mul(f.square(ta), th) == th2 {
                self.mul_into(&a, hc, &mut b);
                let hit = (0..n).all(|x| {
                    let v: FieldElement = (0..n).map(|y| f.mul(b[g.mul(x, y)], a[y])).sum();
                    v == target[x]
                });
                if hit {
                    return Some(AlgebraElement::from_coeffs(a));
                }
            }
            increment(&mut a, q);
        }
        None
    }

    /// Partitions `hs` into equivalence classes by computing the orbit of one
    /// representative per class under `h ↦ a h a*`. Returns a class id per
    /// element (ids in order of first appearance).
    pub fn hermitian_classes(&self, hs: &[HermitianElement], budget: u64) -> Result<Vec<usize>> {
        for h in hs {
            self.check(h.element())?;
            if !self.is_invertible(h.element()) {
                return Err(Error::precondition("classes are only defined for invertible hermitians"));
            }
        }
        let index: BTreeMap<&[FieldElement], usize> = hs.iter().enumerate().map(|(i, h)| (h.coeffs(), i)).collect();
        let mut class = vec![usize::MAX; hs.len()];
        let mut next = 0;
        let total = self.candidate_count();
        let n = self.dim();
        let q = self.field().order();
        let mut spent: u128 = 0;
        let mut b = vec![FieldElement::ZERO; n];
        let mut x = vec![FieldElement::ZERO; n];
        for i in 0..hs.len() {
            if class[i] != usize::MAX {
                continue;
            }
            spent += total;
            self.check_budget(budget, "hermitian orbit enumeration", spent)?;
            class[i] = next;
            let mut a = vec![FieldElement::ZERO; n];
            for _ in 0..total {
                if !a.iter().copied().sum::<FieldElement>().is_zero() {
                    self.mul_into(&a, hs[i].coeffs(), &mut b);
                    let astar: Vec<FieldElement> = (0..n).map(|g| a[self.group().inv(g)]).collect();
                    self.mul_into(&b, &astar, &mut x);
                    if let Some(&j) = index.get(x.as_slice()) {
                        if class[j] == usize::MAX {
                            class[j] = next;
                        } else if class[j] != next {
                            return Err(Error::violation("hermitian equivalence is not transitive"));
                        }
                    }
                }
                increment(&mut a, q);
            }
            next += 1;
        }
        Ok(class)
    }

    /// The criterion for 2-groups with `E_G = 1`: `h ~ h'` iff
    /// `h_ε ≡ h'_ε mod ℘(k)` for every essential `ε`.
    pub fn herm_equiv_invariant(&self, h: &HermitianElement, h2: &HermitianElement, evidence: EgEvidence) -> Result<InvariantVerdict> {
        self.check(h.element())?;
        self.check(h2.element())?;
        if !self.group().is_two_group() {
            return Err(Error::precondition("the invariant criterion needs a 2-group"));
        }
        if !h.is_normalized() || !h2.is_normalized() {
            return Err(Error::precondition("the invariant criterion needs normalized hermitians"));
        }
        if let EgEvidence::PointCounts { e_g_order_bound } = evidence {
            if e_g_order_bound != 1 {
                return Err(Error::precondition("point counts do not support E_G = 1"));
            }
        }
        let classes: Vec<(u32, u8)> = self
            .group()
            .essential_characters()
            .iter()
            .skip(1)
            .map(|eps| {
                let d = self.h_epsilon(h, eps) + self.h_epsilon(h2, eps);
                (eps.label, self.field().artin_schreier_class(d))
            })
            .collect();
        Ok(InvariantVerdict {
            equivalent: classes.iter().all(|&(_, c)| c == 0),
            classes,
            evidence,
        })
    }
}

/// Digits of `index` in base `q`, least significant first.
pub(crate) fn decode(mut index: u128, n: usize, q: u32) -> Vec<FieldElement> {
    (0..n)
        .map(|_| {
            let d = (index % q as u128) as u32;
            index /= q as u128;
            FieldElement::from_bits(d)
        })
        .collect()
}

fn increment(a: &mut [FieldElement], q: u32) {
    for d in a.iter_mut() {
        let v = d.bits() + 1;
        if v < q {
            *d = FieldElement::from_bits(v);
            return;
        }
        *d = FieldElement::ZERO;
    }
}
