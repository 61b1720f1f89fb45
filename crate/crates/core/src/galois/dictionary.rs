//! From Galois algebras to hermitian elements and back: trace hermitians,
//! isomorphism of trace forms, self-dual normal bases and the explicit
//! "almost unit" forms.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{GFormGram, GaloisAlgebra};
use crate::algebra::{AlgebraElement, GroupAlgebra, HermitianElement};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::{Element, EssentialCharacter, QuotientCoordinates};
use crate::linalg::Matrix;

const GENERATOR_SEED: u64 = 0x7d1c_43b5;
const RANDOM_GENERATOR_TRIES: usize = 4096;

/// A search for `a` with `a h a* = h'`; the default is
/// [`GroupAlgebra::herm_equiv_bruteforce`], the command line substitutes a
/// parallel one.
pub type EquivSearch<'a> =
    &'a (dyn Fn(&GroupAlgebra, &HermitianElement, &HermitianElement) -> Result<Option<AlgebraElement>> + Sync);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoMethod {
    CriterionAndWitness,
    CriterionOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoReport {
    /// Frobenius images agree in `G/G_0`.
    pub criterion: bool,
    /// `Some(search result)` when the witness search ran within budget.
    pub witness: Option<Option<AlgebraElement>>,
    pub method: IsoMethod,
}

impl IsoReport {
    pub fn isomorphic(&self) -> bool {
        self.criterion
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BnaResult {
    /// Coordinates of `v` with `q_L(v, g v) = δ_{g,1}`.
    pub generator: Option<Vec<FieldElement>>,
    pub criterion: bool,
    pub method: IsoMethod,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub v: Vec<FieldElement>,
    pub z: FieldElement,
    pub s: Element,
    /// `q_L(v, u v)` for every `u ∈ G`.
    pub gram_row: Vec<FieldElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterInvariants {
    pub label: u32,
    /// Class of the quadratic algebra `L^{ker ε}`.
    pub l_epsilon: u8,
    /// Class of `h_ε^norm` for the trace hermitian.
    pub h_epsilon: u8,
    /// `0` iff `ε(g) = 1`.
    pub oracle: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoincidenceReport {
    pub characters: Vec<CharacterInvariants>,
    pub coincide: bool,
}

impl GaloisAlgebra {
    /// `k[G]` over the base field.
    pub fn group_algebra(&self) -> GroupAlgebra {
        GroupAlgebra::new(self.group_arc().clone(), self.base_field().clone())
    }

    /// Gram matrix of `Tr_{L/k}(xy)` in the basis `e_{j,p}`, with the action
    /// and squaring matrices.
    pub fn trace_form_gram(&self) -> Result<GFormGram> {
        let n = self.dim();
        let basis: Vec<Vec<FieldElement>> = (0..n).map(|i| self.basis_element(i)).collect();
        let mut gram = Matrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let t = self.trace(&self.mul(&basis[a], &basis[b]));
                gram[(a, b)] = t;
                gram[(b, a)] = t;
            }
        }
        let action = (0..self.group().order())
            .map(|u| {
                let cols: Vec<Vec<FieldElement>> = basis.iter().map(|e| self.to_coords(&self.act(u, e))).collect();
                Matrix::from_columns(&cols)
            })
            .collect::<Result<Vec<_>>>()?;
        let squares: Vec<Vec<FieldElement>> = basis.iter().map(|e| self.to_coords(&self.square(e))).collect();
        GFormGram::new(
            self.group_arc().clone(),
            self.base_field().clone(),
            gram,
            action,
            Some(Matrix::from_columns(&squares)?),
        )
    }

    /// Coordinates of a free generator `v` with `Tr_{L/k}(v) = 1`: basis
    /// vectors first, then sums of two, then seeded random vectors.
    pub fn find_free_generator(&self) -> Result<Vec<FieldElement>> {
        let n = self.dim();
        let k = self.base_field();
        let unit = |i: usize| {
            let mut c = vec![FieldElement::ZERO; n];
            c[i] = FieldElement::ONE;
            c
        };
        let singles = (0..n).map(unit);
        let pairs = (0..n).flat_map(move |i| {
            (i + 1..n).map(move |j| {
                let mut c = unit(i);
                c[j] = FieldElement::ONE;
                c
            })
        });
        let mut rng = ChaCha8Rng::seed_from_u64(GENERATOR_SEED);
        let random = (0..RANDOM_GENERATOR_TRIES).map(move |_| (0..n).map(|_| k.random(&mut rng)).collect::<Vec<_>>());
        for c in singles.chain(pairs).chain(random) {
            let v = self.from_coords(&c);
            let t = self.trace(&v);
            if t.is_zero() || !self.is_free_generator(&v) {
                continue;
            }
            let inv = k.inv(t)?;
            return Ok(c.iter().map(|&x| k.mul(inv, x)).collect());
        }
        Err(Error::violation("no free generator found"))
    }

    /// `h = Σ_g q_L(v, g v) g` for the generator of
    /// [`find_free_generator`](Self::find_free_generator); normalized.
    pub fn trace_hermitian(&self) -> Result<(HermitianElement, Vec<FieldElement>)> {
        let form = self.trace_form_gram()?;
        let v = self.find_free_generator()?;
        let h = self.group_algebra().hermitian_from_generator(&form.gram, &form.action, &v)?;
        if !h.is_normalized() {
            return Err(Error::violation("trace hermitian is not normalized"));
        }
        Ok((h, v))
    }

    /// `a·v = Σ a_g (g·v)` in coordinates.
    pub fn module_action(&self, form: &GFormGram, a: &AlgebraElement, v: &[FieldElement]) -> Vec<FieldElement> {
        let k = self.base_field();
        let mut out = vec![FieldElement::ZERO; self.dim()];
        for (g, &ag) in a.coeffs().iter().enumerate() {
            if ag.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(form.act(g, v)) {
                *o += k.mul(ag, x);
            }
        }
        out
    }

    /// Image of the Frobenius in `G/G_0`, as a coordinate bitmask.
    pub fn frobenius_class(&self) -> u32 {
        QuotientCoordinates::new(self.group()).coordinate(self.frobenius_image())
    }

    /// Artin-Schreier class of the quadratic algebra `L^{ker ε}`.
    pub fn l_epsilon(&self, eps: &EssentialCharacter) -> Result<u8> {
        if eps.is_trivial() {
            return Err(Error::precondition("L_ε needs a nontrivial character"));
        }
        let k = self.base_field();
        let fixed = self.fixed_subspace(&eps.kernel());
        if fixed.len() != 2 {
            return Err(Error::violation("fixed algebra of ker ε is not quadratic"));
        }
        let one = self.to_coords(&self.one());
        let u = fixed
            .iter()
            .find(|c| Matrix::from_columns(&[one.clone(), (*c).clone()]).map(|m| m.rank(k) == 2).unwrap_or(false))
            .ok_or_else(|| Error::violation("fixed algebra is spanned by 1"))?;
        let u2 = self.to_coords(&self.square(&self.from_coords(u)));
        let sol = Matrix::from_columns(&[one, u.clone()])?
            .solve(k, &u2)
            .ok_or_else(|| Error::violation("fixed algebra is not closed under products"))?;
        let (beta, alpha) = (sol[0], sol[1]);
        if alpha.is_zero() {
            return Err(Error::violation("fixed algebra is not étale"));
        }
        Ok(k.artin_schreier_class(k.div(beta, k.square(alpha))?))
    }

    /// Both invariants for every nontrivial essential character, checked
    /// against `class = 0 ⟺ ε(g) = 1`.
    pub fn invariants_coincide(&self) -> Result<CoincidenceReport> {
        let (h, _) = self.trace_hermitian()?;
        let alg = self.group_algebra();
        let k = self.base_field();
        let characters = self
            .group()
            .essential_characters()
            .iter()
            .skip(1)
            .map(|eps| {
                Ok(CharacterInvariants {
                    label: eps.label,
                    l_epsilon: self.l_epsilon(eps)?,
                    h_epsilon: k.artin_schreier_class(alg.h_epsilon_norm(&h, eps)?),
                    oracle: eps.value(self.frobenius_image()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let coincide = characters.iter().all(|c| c.l_epsilon == c.h_epsilon && c.h_epsilon == c.oracle);
        Ok(CoincidenceReport { characters, coincide })
    }

    pub fn gform_isomorphic(&self, other: &GaloisAlgebra, budget: u64) -> Result<IsoReport> {
        self.gform_isomorphic_with(other, &|a, h, h2| a.herm_equiv_bruteforce(h, h2, budget))
    }

    /// Criterion (equal Frobenius classes in `G/G_0`) and, when the search
    /// fits its budget, an explicit witness; the two must agree.
    pub fn gform_isomorphic_with(&self, other: &GaloisAlgebra, search: EquivSearch) -> Result<IsoReport> {
        if self.group() != other.group() || self.base_field() != other.base_field() {
            return Err(Error::Mismatch("Galois algebras over different G or k".into()));
        }
        let criterion = self.frobenius_class() == other.frobenius_class();
        let (h, _) = self.trace_hermitian()?;
        let (h2, _) = other.trace_hermitian()?;
        let alg = self.group_algebra();
        match search(&alg, &h, &h2) {
            Ok(w) => {
                if w.is_some() != criterion {
                    return Err(Error::violation("witness search contradicts the G/G_0 criterion"));
                }
                Ok(IsoReport {
                    criterion,
                    witness: Some(w),
                    method: IsoMethod::CriterionAndWitness,
                })
            }
            Err(e) if e.is_budget() => Ok(IsoReport {
                criterion,
                witness: None,
                method: IsoMethod::CriterionOnly,
            }),
            Err(e) => Err(e),
        }
    }

    pub fn find_bna(&self, budget: u64) -> Result<BnaResult> {
        self.find_bna_with(&|a, h, h2| a.herm_equiv_bruteforce(h, h2, budget))
    }

    /// A self-dual normal basis generator `a·v` where `a h a* = 1`, which
    /// exists iff the Frobenius image lies in `G_0`.
    pub fn find_bna_with(&self, search: EquivSearch) -> Result<BnaResult> {
        let criterion = self.frobenius_class() == 0;
        let alg = self.group_algebra();
        let one = alg.make_hermitian(alg.one())?;
        match self.transport(&alg, &one, search)? {
            Some((v, row)) => {
                if !criterion {
                    return Err(Error::violation("found a self-dual normal basis outside G_0"));
                }
                debug_assert!(row.iter().enumerate().all(|(g, &x)| x == alg.one().coeff(g)));
                Ok(BnaResult {
                    generator: Some(v),
                    criterion,
                    method: IsoMethod::CriterionAndWitness,
                })
            }
            None if criterion => Err(Error::violation("no self-dual normal basis although g ∈ G_0")),
            None => Ok(BnaResult {
                generator: None,
                criterion,
                method: IsoMethod::CriterionAndWitness,
            }),
        }
        .or_else(|e| {
            if e.is_budget() && !criterion {
                Ok(BnaResult {
                    generator: None,
                    criterion,
                    method: IsoMethod::CriterionOnly,
                })
            } else {
                Err(e)
            }
        })
    }

    pub fn construct_7_3_2(&self, s: Option<Element>, budget: u64) -> Result<Construction> {
        self.construct_7_3_2_with(s, &|a, h, h2| a.herm_equiv_bruteforce(h, h2, budget))
    }

    /// A generator `v` with `q(v, v) = 1`, `q(v, s^{±1} v) = z` and
    /// `q(v, g v) = 0` otherwise, where `z ∈ {0, ρ}` is the class of the
    /// quadratic extension cut out by the Frobenius image in `G/G_0`, and `s`
    /// a 2-power-order lift of that image.
    pub fn construct_7_3_2_with(&self, s: Option<Element>, search: EquivSearch) -> Result<Construction> {
        let group = self.group();
        let qc = QuotientCoordinates::new(group);
        let gamma = qc.coordinate(self.frobenius_image());
        let lifts = |x: Element| group.element_order(x).is_power_of_two() && qc.coordinate(x) == gamma;
        let s = match s {
            Some(x) if x >= group.order() => return Err(Error::element("s is not a group element")),
            Some(x) if !lifts(x) => {
                return Err(Error::precondition("s must have 2-power order and map to the Frobenius image in G/G_0"))
            }
            Some(x) => x,
            None => (0..group.order()).find(|&x| lifts(x)).expect("a 2-Sylow maps onto G/G_0"),
        };
        let k = self.base_field();
        let alg = self.group_algebra();
        let z = if gamma == 0 { FieldElement::ZERO } else { k.nonsplit_representative() };
        let mut target = alg.one().into_coeffs();
        if gamma != 0 {
            target[s] += z;
            target[group.inv(s)] += z;
        }
        let target = alg.make_hermitian(AlgebraElement::from_coeffs(target))?;
        let (v, gram_row) = self
            .transport(&alg, &target, search)?
            .ok_or_else(|| Error::violation("trace form does not match the explicit pattern"))?;
        Ok(Construction { v, z, s, gram_row })
    }

    /// Finds `a` with `a h_L a* = target` and returns `a·v` with its row
    /// `q(a v, u a v)`, which equals `target` by construction (re-checked).
    fn transport(
        &self,
        alg: &GroupAlgebra,
        target: &HermitianElement,
        search: EquivSearch,
    ) -> Result<Option<(Vec<FieldElement>, Vec<FieldElement>)>> {
        let form = self.trace_form_gram()?;
        let (h, v) = self.trace_hermitian()?;
        let Some(a) = search(alg, &h, target)? else {
            return Ok(None);
        };
        let w = self.module_action(&form, &a, &v);
        let row: Vec<FieldElement> = (0..self.group().order()).map(|u| form.q(&w, &form.act(u, &w))).collect();
        if row != target.coeffs() {
            return Err(Error::violation("transported generator has the wrong Gram row"));
        }
        if !self.is_free_generator(&self.from_coords(&w)) {
            return Err(Error::violation("transported vector is not a free generator"));
        }
        Ok(Some((w, row)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_EQUIV_BUDGET;
    use crate::field::Gf2nField;
    use crate::group::{cyclic, quaternion8};

    fn fe(b: u32) -> FieldElement {
        FieldElement::from_bits(b)
    }

    #[test]
    fn gf4_over_gf2() {
        let l = GaloisAlgebra::new(cyclic(2), 1, Gf2nField::prime()).unwrap();
        let form = l.trace_form_gram().unwrap();
        // ω and ω^2 in coordinates of the basis {1, α}, α = ω
        let w = l.to_coords(&[fe(2)]);
        let w2 = l.to_coords(&[fe(3)]);
        assert_eq!(form.q(&w, &w), fe(1));
        assert_eq!(form.q(&w2, &w2), fe(1));
        assert_eq!(form.q(&w, &w2), fe(0));
        let bna = l.find_bna(DEFAULT_EQUIV_BUDGET).unwrap();
        let v = bna.generator.unwrap();
        assert_eq!(form.q(&v, &v), fe(1));
        assert_eq!(form.q(&v, &form.act(1, &v)), fe(0));
    }

    #[test]
    fn c4_dictionary() {
        let k = Gf2nField::prime();
        let split = GaloisAlgebra::new(cyclic(4), 0, k.clone()).unwrap();
        let mid = GaloisAlgebra::new(cyclic(4), 2, k.clone()).unwrap();
        let full = GaloisAlgebra::new(cyclic(4), 1, k.clone()).unwrap();
        assert_eq!(split.trace_hermitian().unwrap().0.element(), &split.group_algebra().one());
        let r = mid.gform_isomorphic(&split, DEFAULT_EQUIV_BUDGET).unwrap();
        assert!(r.criterion && matches!(r.witness, Some(Some(_))));
        let r = full.gform_isomorphic(&split, DEFAULT_EQUIV_BUDGET).unwrap();
        assert!(!r.criterion && r.witness == Some(None));
        assert!(full.find_bna(DEFAULT_EQUIV_BUDGET).unwrap().generator.is_none());
        assert!(mid.find_bna(DEFAULT_EQUIV_BUDGET).unwrap().generator.is_some());

        let c = full.construct_7_3_2(None, DEFAULT_EQUIV_BUDGET).unwrap();
        assert_eq!((c.s, c.z), (1, fe(1)));
        assert_eq!(c.gram_row, vec![fe(1), fe(1), fe(0), fe(1)]);
        assert!(full.construct_7_3_2(Some(2), DEFAULT_EQUIV_BUDGET).is_err());

        for l in [&split, &mid, &full] {
            let rep = l.invariants_coincide().unwrap();
            assert!(rep.coincide);
            assert!(l.trace_form_gram().unwrap().check_form_properties(1, 50).all_pass());
        }
        assert_eq!(full.l_epsilon(&cyclic(4).essential_characters()[1]).unwrap(), 1);
    }

    #[test]
    fn q8_invariants() {
        let l = GaloisAlgebra::new(quaternion8(), 2, Gf2nField::with_degree(2).unwrap()).unwrap();
        let rep = l.invariants_coincide().unwrap();
        assert_eq!(rep.characters.len(), 3);
        assert!(rep.coincide);
        let c = l.construct_7_3_2(None, DEFAULT_EQUIV_BUDGET).unwrap();
        assert_eq!(l.base_field().artin_schreier_class(c.z), 1);
    }
}
