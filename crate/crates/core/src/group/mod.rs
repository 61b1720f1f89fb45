//! Finite groups as validated Cayley tables.
//!
//! Elements are indices `0..order`; index 0 is always the identity.

mod catalog;
mod characters;

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use catalog::*;
pub use characters::{EssentialCharacter, QuotientCoordinates};

pub const DEFAULT_ORDER_CAP: usize = 24;

pub type Element = usize;

/// A permutation of `0..degree`, stored as its image table.
pub type Permutation = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<Element>,
    inverse: Vec<Element>,
    names: Option<Vec<String>>,
}

/// `G_2 = { g : g^2 = 1 }`, identity included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionSet {
    pub members: Vec<Element>,
}

impl InvolutionSet {
    pub fn contains(&self, g: Element) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// One element out of each pair `{s, s^-1}` of non-involutions, the smaller
/// index chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaPartition {
    pub sigma: Vec<Element>,
}

impl SigmaPartition {
    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table with identity at index 0.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<Element>>, cap: usize) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::group("empty table"));
        }
        if order > cap {
            return Err(Error::group(format!("order {order} exceeds cap {cap}")));
        }
        if table.iter().any(|row| row.len() != order) {
            return Err(Error::group("table is not square"));
        }
        if table.iter().flatten().any(|&x| x >= order) {
            return Err(Error::group("table entry out of range"));
        }
        let flat: Vec<Element> = table.into_iter().flatten().collect();
        Self::from_flat(name.into(), order, flat)
    }

    fn from_flat(name: String, order: usize, table: Vec<Element>) -> Result<Self> {
        let at = |a: usize, b: usize| table[a * order + b];
        for g in 0..order {
            if at(0, g) != g || at(g, 0) != g {
                return Err(Error::group("index 0 is not an identity"));
            }
        }
        let mut seen = vec![false; order];
        for i in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for j in 0..order {
                let x = at(i, j);
                if seen[x] {
                    return Err(Error::group(format!("row {i} is not a permutation")));
                }
                seen[x] = true;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for j in 0..order {
                let x = at(j, i);
                if seen[x] {
                    return Err(Error::group(format!("column {i} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::group(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inverse = (0..order)
            .map(|g| (0..order).find(|&h| at(g, h) == 0).expect("latin square"))
            .collect();
        Ok(FiniteGroup {
            name,
            order,
            table,
            inverse,
            names: None,
        })
    }

    /// Closes a set of permutations of `0..degree` under products,
    /// breadth first, in first-visit order (identity first, then right
    /// multiplication by each generator in turn). Products compose right to
    /// left: `(a b)(p) = a(b(p))`.
    pub fn from_permutations(
        name: impl Into<String>,
        degree: usize,
        generators: &[Permutation],
        cap: usize,
    ) -> Result<Self> {
        for g in generators {
            if g.len() != degree {
                return Err(Error::group("generator has the wrong degree"));
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(Error::group("generator is not a permutation"));
                }
                seen[x] = true;
            }
        }
        let compose = |a: &Permutation, b: &Permutation| -> Permutation { b.iter().map(|&x| a[x]).collect() };
        let identity: Permutation = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index = alloc::collections::BTreeMap::new();
        index.insert(identity, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = compose(&elements[i], g);
                if !index.contains_key(&p) {
                    if elements.len() == cap {
                        return Err(Error::group(format!(
                            "generated group exceeds order cap {cap}"
                        )));
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let order = elements.len();
        let mut table = Vec::with_capacity(order * order);
        for a in &elements {
            for b in &elements {
                table.push(index[&compose(a, b)]);
            }
        }
        Self::from_flat(name.into(), order, table)
    }

    /// Builds a group from a multiplication rule on `0..order`.
    pub fn from_fn(name: impl Into<String>, order: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let c = mul(a, b);
                if c >= order {
                    return Err(Error::group("product out of range"));
                }
                table.push(c);
            }
        }
        Self::from_flat(name.into(), order, table)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.order {
            return Err(Error::group("wrong number of element names"));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Element {
        0
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inverse[a]
    }

    pub fn pow(&self, a: Element, e: usize) -> Element {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_name(&self, g: Element) -> String {
        match &self.names {
            Some(n) => n[g].clone(),
            None => format!("g{g}"),
        }
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// The table as rows, for serialization.
    pub fn table_rows(&self) -> Vec<Vec<Element>> {
        self.table.chunks(self.order).map(<[_]>::to_vec).collect()
    }

    pub fn element_order(&self, g: Element) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn is_two_group(&self) -> bool {
        self.order.is_power_of_two()
    }

    pub fn involutions(&self) -> InvolutionSet {
        InvolutionSet {
            members: (0..self.order).filter(|&g| self.mul(g, g) == 0).collect(),
        }
    }

    /// Elements of order exactly 2 (`G_2` without the identity).
    pub fn order_two_elements(&self) -> Vec<Element> {
        (1..self.order).filter(|&g| self.mul(g, g) == 0).collect()
    }

    pub fn sigma_partition(&self) -> SigmaPartition {
        SigmaPartition {
            sigma: (0..self.order)
                .filter(|&g| self.mul(g, g) != 0 && g < self.inv(g))
                .collect(),
        }
    }

    /// Sorted closure of `gens` under multiplication.
    pub fn generated_subgroup(&self, gens: &[Element]) -> Vec<Element> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut members = vec![0];
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }

    pub fn is_normal(&self, subgroup: &[Element]) -> bool {
        (0..self.order).all(|g| {
            subgroup
                .iter()
                .all(|&h| subgroup.binary_search(&self.mul(self.mul(g, h), self.inv(g))).is_ok())
        })
    }

    /// `G_0`: the subgroup generated by all squares and all involutions.
    pub fn g0(&self) -> Vec<Element> {
        let mut gens: Vec<Element> = (0..self.order).map(|g| self.mul(g, g)).collect();
        gens.extend(self.order_two_elements());
        gens.sort_unstable();
        gens.dedup();
        let h = self.generated_subgroup(&gens);
        debug_assert!(self.is_normal(&h));
        h
    }

    /// `G_0` as a group in its own right (indices renumbered in sorted order).
    pub fn g0_group(&self) -> FiniteGroup {
        let members = self.g0();
        let pos = |x: Element| members.binary_search(&x).expect("closed");
        let n = members.len();
        FiniteGroup::from_fn(format!("{}_0", self.name), n, |a, b| {
            pos(self.mul(members[a], members[b]))
        })
        .expect("a subgroup is a group")
    }

    /// `[G : G_0]`, always a power of two.
    pub fn g0_index(&self) -> usize {
        self.order / self.g0().len()
    }

    /// Whether a self-dual normal basis exists for every Galois algebra that is
    /// a field: `G` is generated by involutions and odd-order elements,
    /// equivalently `G_0 = G`.
    pub fn bna_exists(&self) -> bool {
        self.g0().len() == self.order
    }

    /// `dim U_G = |G_2| - 1 + |Σ| = (|G| + |G_2|)/2 - 1`.
    pub fn unitary_dim(&self) -> usize {
        let g2 = self.involutions().len();
        let d = g2 - 1 + self.sigma_partition().len();
        debug_assert_eq!(2 * (d + 1), self.order + g2);
        d
    }

    pub fn essential_characters(&self) -> Vec<EssentialCharacter> {
        QuotientCoordinates::new(self).characters()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_validation() {
        let z2 = FiniteGroup::from_table("Z2", vec![vec![0, 1], vec![1, 0]], 24).unwrap();
        assert_eq!(z2.order(), 2);
        assert!(FiniteGroup::from_table("bad", vec![vec![0, 1], vec![1, 1]], 24).is_err());
        assert!(FiniteGroup::from_table("noid", vec![vec![1, 0], vec![0, 1]], 24).is_err());
        // a Latin square with identity that is not associative (order 5 loop)
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table("loop", loop5, 24).unwrap_err();
        assert!(matches!(err, Error::InvalidGroup(m) if m.contains("associative")));
        assert!(FiniteGroup::from_table("big", vec![vec![0]; 1], 0).is_err());
    }

    #[test]
    fn permutation_closure() {
        let c4 = FiniteGroup::from_permutations("C4", 4, &[vec![1, 2, 3, 0]], 24).unwrap();
        assert_eq!(c4.order(), 4);
        assert_eq!(c4.involutions().len(), 2);
        let s4 = FiniteGroup::from_permutations("S4", 4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], 24);
        assert_eq!(s4.unwrap().order(), 24);
        let s5 = FiniteGroup::from_permutations("S5", 5, &[vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]], 24);
        assert!(s5.is_err());
    }

    #[test]
    fn derived_sets() {
        let c4 = cyclic(4);
        assert_eq!(c4.involutions().members, vec![0, 2]);
        assert_eq!(c4.sigma_partition().sigma, vec![1]);
        assert_eq!(c4.g0(), vec![0, 2]);
        assert_eq!(c4.essential_characters().len(), 2);
        assert!(!c4.bna_exists());
        assert_eq!(c4.unitary_dim(), 2);

        let c2 = cyclic(2);
        assert!(c2.sigma_partition().is_empty());
        assert_eq!(c2.unitary_dim(), 1);

        let s3 = symmetric3();
        assert_eq!(s3.g0().len(), 6);
        assert_eq!(s3.essential_characters().len(), 1);
        assert!(s3.bna_exists());

        let q8 = quaternion8();
        assert_eq!(q8.involutions().len(), 2);
        assert_eq!(q8.sigma_partition().len(), 3);
        assert_eq!(q8.g0(), vec![0, 1]);
        assert_eq!(q8.essential_characters().len(), 4);
        assert!(!q8.bna_exists());
        assert_eq!(q8.unitary_dim(), 4);

        let d4 = dihedral(4);
        assert_eq!(d4.involutions().len(), 6);
        assert_eq!(d4.unitary_dim(), 6);
        assert!(d4.bna_exists());
    }

    #[test]
    fn g0_subgroup_view() {
        let q8 = quaternion8();
        let z = q8.g0_group();
        assert_eq!(z.order(), 2);
        assert!(q8.is_normal(&q8.g0()));
    }
}
