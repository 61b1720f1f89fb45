//! The unitary group `U_G(F_q) = { x ∈ k[G] : x x* = 1 }`: exhaustive
//! enumeration, point counts `N = 2^c q^d`, and Jacobian ranks.
//!
//! # Search strategy
//!
//! The equations are `(A_1) Σ x_g = 1` and `(A_s) P_s(x) = Σ_g x_g x_{sg} = 0`
//! for `s ∈ Σ`. Every `P_s` involves every variable, so assigning variables
//! one at a time prunes nothing until the very end. Instead the variables are
//! split into a branching part and a *linear tail* `R`: a largest set with
//! `b a^-1 ∈ G_2` for all `a, b ∈ R`. No monomial `x_g x_{sg}` has both
//! indices in `R` (their quotient is `s ∉ G_2`), so once the other variables
//! are fixed every equation is affine in the tail:
//!
//! ```text
//! P_s = Σ_{a ∈ R} (x_{sa} + x_{s^-1 a}) x_a + Σ_{g, sg ∉ R} x_g x_{sg}
//! ```
//!
//! Each leaf of the depth-first search over `G \ R` is a small linear system
//! whose solutions are enumerated from a particular solution plus a kernel
//! basis. The node count is known in advance, so budgets are checked before
//! any work starts.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::GroupAlgebra;
use crate::error::{Error, Result};
use crate::field::{FieldElement, Gf2nField};
use crate::group::{Element, FiniteGroup};
use crate::linalg::Matrix;

/// Default cap on visited search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 26;

pub const METHOD_LINEAR_TAIL: &str = "dfs-linear-tail";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCountReport {
    pub group: String,
    pub field: String,
    /// `N = |U_G(F_q)|`.
    pub n: u128,
    pub d: usize,
    /// `N = 2^c q^d`. Always present for 2-groups, where `U_G` is unipotent;
    /// otherwise present only if `N` happens to have that shape (a torus in
    /// `U_G^0` contributes odd factors).
    pub c: Option<u32>,
    pub two_group: bool,
    pub method: &'static str,
    pub nodes: u128,
}

impl PointCountReport {
    /// Splits `N` as `2^c q^d`. For a 2-group anything else contradicts the
    /// structure theorem.
    pub fn from_count(group: &FiniteGroup, field: &Gf2nField, n: u128, nodes: u128, method: &'static str) -> Result<Self> {
        let d = group.unitary_dim();
        let qd = (field.order() as u128)
            .checked_pow(d as u32)
            .ok_or_else(|| Error::precondition("q^d overflows"))?;
        let two_group = group.is_two_group();
        let c = (n != 0 && n.is_multiple_of(qd) && (n / qd).is_power_of_two()).then(|| (n / qd).trailing_zeros());
        if c.is_none() && two_group {
            return Err(Error::violation(format!(
                "|U_G(F_q)| = {n} is not of the form 2^c q^{d}"
            )));
        }
        Ok(PointCountReport {
            group: group.name().into(),
            field: field.spec_string(),
            n,
            d,
            c,
            two_group,
            method,
            nodes,
        })
    }

    /// `N = 2^v · m` with `m` odd.
    pub fn two_adic(&self) -> (u32, u128) {
        let v = self.n.trailing_zeros();
        (v, self.n >> v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentEstimate {
    /// `(field spec, c(q))` per supplied field.
    pub per_field: Vec<(String, u32)>,
    /// `max 2^c(q)`, a lower bound on `|U_G / U_G^0|`.
    pub component_order_bound: u128,
    /// `[G : G_0]`.
    pub g_over_g0_order: usize,
    /// `component_order_bound / [G : G_0]`, a lower bound on `|E_G|`.
    pub e_g_order_bound: u128,
}

impl ComponentEstimate {
    pub fn from_reports(group: &FiniteGroup, reports: &[PointCountReport]) -> Result<Self> {
        let index = group.g0_index();
        let mut best = 1u128;
        for r in reports {
            let c = r.c.ok_or_else(|| {
                Error::precondition(format!("{} points over {} do not split as 2^c q^d", r.n, r.field))
            })?;
            let comps = 1u128 << c;
            // G/G_0 embeds in the group of rational components
            if !comps.is_multiple_of(index as u128) {
                return Err(Error::violation(format!(
                    "[G:G_0] = {index} does not divide 2^c = {comps} over {}",
                    r.field
                )));
            }
            best = best.max(comps);
        }
        Ok(ComponentEstimate {
            per_field: reports.iter().map(|r| (r.field.clone(), r.c.unwrap_or(0))).collect(),
            component_order_bound: best,
            g_over_g0_order: index,
            e_g_order_bound: best / index as u128,
        })
    }

    /// No evidence of components beyond those forced by `G/G_0` — and none
    /// at all when `G = G_0`.
    pub fn consistent_with_connected(&self) -> bool {
        self.component_order_bound == 1
    }
}

/// Largest `R ∋ 1` with `b a^-1 ∈ G_2` for all `a, b ∈ R`.
pub fn linear_tail(group: &FiniteGroup) -> Vec<Element> {
    let inv = group.involutions();
    let cand: Vec<Element> = inv.members.clone();
    let adj = |a: Element, b: Element| inv.contains(group.mul(b, group.inv(a)));
    fn grow(
        cand: &[Element],
        current: &mut Vec<Element>,
        best: &mut Vec<Element>,
        adj: &dyn Fn(Element, Element) -> bool,
    ) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        for (i, &c) in cand.iter().enumerate() {
            if current.len() + cand.len() - i <= best.len() {
                return;
            }
            if current.iter().all(|&x| adj(x, c)) {
                current.push(c);
                grow(&cand[i + 1..], current, best, adj);
                current.pop();
            }
        }
    }
    let mut best = vec![0];
    let mut current = vec![0];
    grow(&cand[1..], &mut current, &mut best, &adj);
    best
}

/// Exhaustive solver for `x x* = 1` over a fixed `k[G]`.
#[derive(Clone, Debug)]
pub struct UnitaryEnumerator {
    alg: GroupAlgebra,
    sigma: Vec<Element>,
    tail: Vec<Element>,
    free: Vec<Element>,
    budget: u64,
}

impl UnitaryEnumerator {
    pub fn new(alg: GroupAlgebra, budget: u64) -> Result<Self> {
        let group = alg.group();
        let sigma = group.sigma_partition().sigma;
        let tail = linear_tail(group);
        let free = (0..group.order()).filter(|g| !tail.contains(g)).collect();
        let e = UnitaryEnumerator {
            alg,
            sigma,
            tail,
            free,
            budget,
        };
        let nodes = e.node_count();
        if nodes > budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "unitary enumeration",
                required: nodes,
                budget,
            });
        }
        Ok(e)
    }

    pub fn algebra(&self) -> &GroupAlgebra {
        &self.alg
    }

    pub fn tail(&self) -> &[Element] {
        &self.tail
    }

    /// Branching variables in search order.
    pub fn branching(&self) -> &[Element] {
        &self.free
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Search nodes: `Σ_{i=0}^{f} q^i` with `f` branching variables.
    pub fn node_count(&self) -> u128 {
        let q = self.alg.field().order() as u128;
        let mut total = 0u128;
        let mut layer = 1u128;
        for _ in 0..=self.free.len() {
            total = total.saturating_add(layer);
            layer = layer.saturating_mul(q);
        }
        total
    }

    /// Nodes below one prefix of the given depth, including the prefix node.
    pub fn subtree_nodes(&self, depth: usize) -> u128 {
        let q = self.alg.field().order() as u128;
        let mut total = 0u128;
        let mut layer = 1u128;
        for _ in depth..=self.free.len() {
            total = total.saturating_add(layer);
            layer = layer.saturating_mul(q);
        }
        total
    }

    /// Clamps a requested prefix depth to the number of branching variables.
    pub fn effective_depth(&self, depth: usize) -> usize {
        depth.min(self.free.len())
    }

    pub fn prefix_count(&self, depth: usize) -> usize {
        (self.alg.field().order() as usize).pow(self.effective_depth(depth) as u32)
    }

    /// Visits every point in deterministic order.
    pub fn for_each(&self, mut visit: impl FnMut(&[FieldElement])) {
        self.for_each_in_prefix(0, 0, &mut visit);
    }

    /// Visits the points whose first `depth` branching variables spell
    /// `prefix` (most significant first). Concatenating prefixes `0, 1, ...`
    /// reproduces [`for_each`](Self::for_each).
    pub fn for_each_in_prefix(&self, depth: usize, prefix: usize, visit: &mut dyn FnMut(&[FieldElement])) {
        let depth = self.effective_depth(depth);
        let q = self.alg.field().order() as usize;
        let mut x = vec![FieldElement::ZERO; self.alg.dim()];
        let mut p = prefix;
        for i in (0..depth).rev() {
            x[self.free[i]] = FieldElement::from_bits((p % q) as u32);
            p /= q;
        }
        let mut leaf = LeafSolver::new(self);
        self.dfs(depth, &mut x, &mut leaf, &mut |s, x| s.enumerate(x, visit));
    }

    pub fn count(&self) -> u128 {
        self.count_in_prefix(0, 0)
    }

    pub fn count_in_prefix(&self, depth: usize, prefix: usize) -> u128 {
        let depth = self.effective_depth(depth);
        let q = self.alg.field().order() as usize;
        let mut x = vec![FieldElement::ZERO; self.alg.dim()];
        let mut p = prefix;
        for i in (0..depth).rev() {
            x[self.free[i]] = FieldElement::from_bits((p % q) as u32);
            p /= q;
        }
        let mut leaf = LeafSolver::new(self);
        let mut total = 0u128;
        let qq = q as u128;
        self.dfs(depth, &mut x, &mut leaf, &mut |s, x| {
            if let Some(k) = s.solve(x) {
                total += qq.pow(k as u32);
            }
        });
        total
    }

    pub fn report(&self) -> Result<PointCountReport> {
        let n = self.count();
        PointCountReport::from_count(self.alg.group(), self.alg.field(), n, self.node_count(), METHOD_LINEAR_TAIL)
    }

    fn dfs(
        &self,
        depth: usize,
        x: &mut [FieldElement],
        leaf: &mut LeafSolver,
        at_leaf: &mut dyn FnMut(&mut LeafSolver, &mut [FieldElement]),
    ) {
        if depth == self.free.len() {
            at_leaf(leaf, x);
            return;
        }
        let var = self.free[depth];
        for v in 0..self.alg.field().order() {
            x[var] = FieldElement::from_bits(v);
            self.dfs(depth + 1, x, leaf, at_leaf);
        }
        x[var] = FieldElement::ZERO;
    }

    /// Rank of the differentials of `L` and `P_s`, `s ∈ Σ`, at `x`:
    /// `dL = Σ dx_g`, `∂P_s/∂x_g = x_{sg} + x_{s^-1 g}`.
    pub fn jacobian_rank(alg: &GroupAlgebra, x: &[FieldElement]) -> usize {
        jacobian(alg, x).rank(alg.field())
    }
}

pub fn jacobian(alg: &GroupAlgebra, x: &[FieldElement]) -> Matrix {
    let g = alg.group();
    let sigma = g.sigma_partition().sigma;
    let n = g.order();
    let mut m = Matrix::zeros(1 + sigma.len(), n);
    for j in 0..n {
        m[(0, j)] = FieldElement::ONE;
    }
    for (i, &s) in sigma.iter().enumerate() {
        let si = g.inv(s);
        for j in 0..n {
            m[(i + 1, j)] = x[g.mul(s, j)] + x[g.mul(si, j)];
        }
    }
    m
}

/// Reusable buffers for the affine system in the tail variables.
struct LeafSolver<'a> {
    e: &'a UnitaryEnumerator,
    /// `rows × (r + 1)` augmented matrix.
    m: Vec<FieldElement>,
    pivots: Vec<usize>,
    particular: Vec<FieldElement>,
    kernel: Vec<Vec<FieldElement>>,
    /// For each `s ∈ Σ`, the pairs `(g, sg)` outside the tail.
    constant_pairs: Vec<Vec<(Element, Element)>>,
}

impl<'a> LeafSolver<'a> {
    fn new(e: &'a UnitaryEnumerator) -> Self {
        let g = e.alg.group();
        let in_tail = |x: Element| e.tail.contains(&x);
        let constant_pairs = e
            .sigma
            .iter()
            .map(|&s| {
                (0..g.order())
                    .filter(|&h| !in_tail(h) && !in_tail(g.mul(s, h)))
                    .map(|h| (h, g.mul(s, h)))
                    .collect()
            })
            .collect();
        let r = e.tail.len();
        LeafSolver {
            e,
            m: vec![FieldElement::ZERO; (1 + e.sigma.len()) * (r + 1)],
            pivots: Vec::with_capacity(r),
            particular: vec![FieldElement::ZERO; r],
            kernel: Vec::with_capacity(r),
            constant_pairs,
        }
    }

    /// Solves for the tail given the branching values in `x`; returns the
    /// kernel dimension, or `None` if inconsistent.
    fn solve(&mut self, x: &[FieldElement]) -> Option<usize> {
        let e = self.e;
        let f = e.alg.field();
        let g = e.alg.group();
        let r = e.tail.len();
        let w = r + 1;
        let rows = 1 + e.sigma.len();
        // (A_1)
        for j in 0..r {
            self.m[j] = FieldElement::ONE;
        }
        self.m[r] = FieldElement::ONE + e.free.iter().map(|&v| x[v]).sum::<FieldElement>();
        // (A_s)
        for (i, &s) in e.sigma.iter().enumerate() {
            let row = &mut self.m[(i + 1) * w..(i + 2) * w];
            let si = g.inv(s);
            for (j, &a) in e.tail.iter().enumerate() {
                row[j] = x[g.mul(s, a)] + x[g.mul(si, a)];
            }
            row[r] = self.constant_pairs[i].iter().map(|&(h, sh)| f.mul(x[h], x[sh])).sum();
        }
        // reduced row echelon form
        self.pivots.clear();
        let mut pr = 0;
        for c in 0..w {
            if pr == rows {
                break;
            }
            let Some(p) = (pr..rows).find(|&i| !self.m[i * w + c].is_zero()) else {
                continue;
            };
            if c == r {
                return None;
            }
            if p != pr {
                for j in 0..w {
                    self.m.swap(p * w + j, pr * w + j);
                }
            }
            let inv = f.inv(self.m[pr * w + c]).expect("nonzero pivot");
            for j in c..w {
                self.m[pr * w + j] = f.mul(self.m[pr * w + j], inv);
            }
            for i in 0..rows {
                let fac = self.m[i * w + c];
                if i != pr && !fac.is_zero() {
                    for j in c..w {
                        let t = f.mul(fac, self.m[pr * w + j]);
                        self.m[i * w + j] += t;
                    }
                }
            }
            self.pivots.push(c);
            pr += 1;
        }
        self.particular.iter_mut().for_each(|v| *v = FieldElement::ZERO);
        for (i, &c) in self.pivots.iter().enumerate() {
            self.particular[c] = self.m[i * w + r];
        }
        Some(r - self.pivots.len())
    }

    fn enumerate(&mut self, x: &mut [FieldElement], visit: &mut dyn FnMut(&[FieldElement])) {
        let Some(k) = self.solve(x) else {
            return;
        };
        let e = self.e;
        let r = e.tail.len();
        let w = r + 1;
        let f = e.alg.field();
        self.kernel.clear();
        for c in (0..r).filter(|c| !self.pivots.contains(c)) {
            let mut v = vec![FieldElement::ZERO; r];
            v[c] = FieldElement::ONE;
            for (i, &pc) in self.pivots.iter().enumerate() {
                v[pc] = self.m[i * w + c];
            }
            self.kernel.push(v);
        }
        let q = f.order() as usize;
        let total = q.pow(k as u32);
        for mut idx in 0..total {
            let mut sol = self.particular.clone();
            for v in &self.kernel {
                let t = FieldElement::from_bits((idx % q) as u32);
                idx /= q;
                if !t.is_zero() {
                    for (s, &b) in sol.iter_mut().zip(v) {
                        *s += f.mul(t, b);
                    }
                }
            }
            for (j, &a) in e.tail.iter().enumerate() {
                x[a] = sol[j];
            }
            visit(x);
        }
        for &a in &e.tail {
            x[a] = FieldElement::ZERO;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, dihedral, quaternion8};

    fn count(g: FiniteGroup, n: u32) -> PointCountReport {
        let alg = GroupAlgebra::new(g, Gf2nField::with_degree(n).unwrap());
        UnitaryEnumerator::new(alg, DEFAULT_NODE_BUDGET).unwrap().report().unwrap()
    }

    #[test]
    fn tails() {
        assert_eq!(linear_tail(&cyclic(4)), vec![0, 2]);
        assert_eq!(linear_tail(&quaternion8()), vec![0, 1]);
        assert_eq!(linear_tail(&dihedral(4)).len(), 4);
        assert_eq!(linear_tail(&cyclic(1)), vec![0]);
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(cyclic(1), 1).n, 1);
        for n in 1..=3 {
            let r = count(cyclic(2), n);
            assert_eq!((r.n, r.c), (1 << n, Some(0)));
        }
        assert_eq!(count(cyclic(4), 1).n, 8);
        let q8 = count(quaternion8(), 1);
        assert_eq!((q8.n, q8.c), (64, Some(2)));
    }

    #[test]
    fn enumeration_matches_bruteforce() {
        let alg = GroupAlgebra::new(cyclic(4), Gf2nField::prime());
        let e = UnitaryEnumerator::new(alg.clone(), DEFAULT_NODE_BUDGET).unwrap();
        let mut seen = Vec::new();
        e.for_each(|x| seen.push(x.to_vec()));
        let mut brute = Vec::new();
        for i in 0..16u32 {
            let x: Vec<FieldElement> = (0..4).map(|j| FieldElement::from_bits(i >> j & 1)).collect();
            if alg.satisfies_unitary_equations(&x) {
                brute.push(x);
            }
        }
        let mut sorted = seen.clone();
        sorted.sort();
        brute.sort();
        assert_eq!(sorted, brute);
        let mut by_prefix = Vec::new();
        for p in 0..e.prefix_count(2) {
            e.for_each_in_prefix(2, p, &mut |x| by_prefix.push(x.to_vec()));
        }
        assert_eq!(by_prefix, seen);
        for x in &seen {
            assert_eq!(UnitaryEnumerator::jacobian_rank(&alg, x), 2);
        }
    }

    #[test]
    fn budget_fails_fast() {
        let alg = GroupAlgebra::new(cyclic(16), Gf2nField::with_degree(4).unwrap());
        let err = UnitaryEnumerator::new(alg, 1000).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn component_estimates() {
        let q8 = quaternion8();
        let reps = [count(q8.clone(), 1), count(q8.clone(), 2)];
        let est = ComponentEstimate::from_reports(&q8, &reps).unwrap();
        assert_eq!((est.component_order_bound, est.e_g_order_bound), (4, 1));
        let c4 = cyclic(4);
        let est = ComponentEstimate::from_reports(&c4, &[count(c4.clone(), 1)]).unwrap();
        assert_eq!((est.component_order_bound, est.e_g_order_bound), (2, 1));
        assert!(PointCountReport::from_count(&c4, &Gf2nField::prime(), 12, 0, "x").unwrap_err().is_violation());
    }
}
