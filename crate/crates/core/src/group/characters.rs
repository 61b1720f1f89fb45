//! Essential characters: homomorphisms `G -> Z/2` that vanish on `G_2`,
//! i.e. the dual of the elementary abelian 2-group `G/G_0`.

use alloc::vec;
use alloc::vec::Vec;

use super::{Element, FiniteGroup};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EssentialCharacter {
    /// Index of the character in the dual basis (`0` is trivial).
    pub label: u32,
    /// `values[g] = 1` iff `ε(g) = c`.
    pub values: Vec<u8>,
}

impl EssentialCharacter {
    /// Validates an arbitrary 0/1 vector as an essential character.
    pub fn from_values(group: &FiniteGroup, values: Vec<u8>) -> Result<Self> {
        if values.len() != group.order() || values.iter().any(|&v| v > 1) {
            return Err(Error::element("character values must be one bit per element"));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if values[group.mul(a, b)] != values[a] ^ values[b] {
                    return Err(Error::element("not a homomorphism to Z/2"));
                }
            }
        }
        if group.involutions().members.iter().any(|&s| values[s] != 0) {
            return Err(Error::element("character does not vanish on G_2"));
        }
        let label = QuotientCoordinates::new(group)
            .characters()
            .into_iter()
            .find(|c| c.values == values)
            .map(|c| c.label)
            .expect("every essential character is in the dual");
        Ok(EssentialCharacter { label, values })
    }

    #[inline]
    pub fn value(&self, g: Element) -> u8 {
        self.values[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `G_1 = ker ε`.
    pub fn kernel(&self) -> Vec<Element> {
        (0..self.values.len()).filter(|&g| self.values[g] == 0).collect()
    }

    /// `G_c = G \ ker ε`.
    pub fn support(&self) -> Vec<Element> {
        (0..self.values.len()).filter(|&g| self.values[g] == 1).collect()
    }

    pub fn product(&self, other: &EssentialCharacter) -> EssentialCharacter {
        EssentialCharacter {
            label: self.label ^ other.label,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a ^ b).collect(),
        }
    }
}

/// Coordinates on `G/G_0 ≅ (Z/2)^r` with respect to a greedy basis: the
/// first element (by index) outside `G_0`, then the first outside the
/// subgroup generated so far, and so on.
#[derive(Clone, Debug)]
pub struct QuotientCoordinates {
    pub basis: Vec<Element>,
    coord: Vec<u32>,
}

impl QuotientCoordinates {
    pub fn new(group: &FiniteGroup) -> Self {
        let g0 = group.g0();
        let mut gens = g0.clone();
        let mut span = g0.clone();
        let mut basis = Vec::new();
        for g in 0..group.order() {
            if span.binary_search(&g).is_err() {
                basis.push(g);
                gens.push(g);
                span = group.generated_subgroup(&gens);
            }
        }
        let mut coord = vec![u32::MAX; group.order()];
        for mask in 0u32..(1 << basis.len()) {
            let rep = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0, |acc, (_, &b)| group.mul(acc, b));
            for &h in &g0 {
                coord[group.mul(rep, h)] = mask;
            }
        }
        debug_assert!(coord.iter().all(|&c| c != u32::MAX));
        QuotientCoordinates { basis, coord }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn coordinate(&self, g: Element) -> u32 {
        self.coord[g]
    }

    /// `ε_c(x) = <coord(x), c>`; the trivial character comes first.
    pub fn character(&self, c: u32) -> EssentialCharacter {
        EssentialCharacter {
            label: c,
            values: self.coord.iter().map(|&x| ((x & c).count_ones() % 2) as u8).collect(),
        }
    }

    pub fn characters(&self) -> Vec<EssentialCharacter> {
        (0..1u32 << self.rank()).map(|c| self.character(c)).collect()
    }

    /// For elements whose images form a basis of `G/G_0`, the characters
    /// `ε_j` with `ε_j(γ_i) = δ_ij`.
    pub fn dual_characters(&self, gammas: &[Element]) -> Result<Vec<EssentialCharacter>> {
        if gammas.len() != self.rank() {
            return Err(Error::precondition("elements do not form a basis of G/G_0"));
        }
        let all = self.characters();
        gammas
            .iter()
            .enumerate()
            .map(|(j, _)| {
                all.iter()
                    .find(|e| gammas.iter().enumerate().all(|(i, &g)| e.value(g) == (i == j) as u8))
                    .cloned()
                    .ok_or_else(|| Error::precondition("images in G/G_0 are dependent"))
            })
            .collect()
    }
}
