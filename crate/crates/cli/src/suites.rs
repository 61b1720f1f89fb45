//! Property suites run by `unitrace verify`. Each check is an exact
//! equality over enumerated points or seeded random samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use unitrace_core::algebra::{EgEvidence, DEFAULT_EQUIV_BUDGET};
use unitrace_core::group::{cyclic, dicyclic12, dihedral, quaternion8, symmetric3};
use unitrace_core::unitary::ComponentEstimate;
use unitrace_core::{AlgebraElement, FiniteGroup, GaloisAlgebra, Gf2nField, GroupAlgebra, HermitianElement, UnitaryEnumerator};

use crate::parallel;

pub const SUITES: &[&str] = &["dimension", "smoothness", "mu", "transform", "forms", "coincidence", "equivalence"];

const MAX_MESSAGES: usize = 8;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Tally {
    pub checks: u64,
    pub failures: u64,
    pub messages: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.messages.len() < MAX_MESSAGES {
                self.messages.push(msg());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.failures += other.failures;
        for m in other.messages {
            if self.messages.len() < MAX_MESSAGES {
                self.messages.push(m);
            }
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContextResult {
    pub group: String,
    pub field: String,
    #[serde(flatten)]
    pub tally: Tally,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: u64,
    pub failures: u64,
    pub contexts: Vec<ContextResult>,
}

impl SuiteReport {
    fn new(suite: &str, contexts: Vec<ContextResult>) -> Self {
        let checks = contexts.iter().map(|c| c.tally.checks).sum();
        let failures = contexts.iter().map(|c| c.tally.failures).sum();
        SuiteReport {
            suite: suite.into(),
            passed: failures == 0,
            checks,
            failures,
            contexts,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub node_budget: u64,
    pub equiv_budget: u64,
    pub samples: usize,
    pub prefix_depth: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            node_budget: unitrace_core::unitary::DEFAULT_NODE_BUDGET,
            equiv_budget: DEFAULT_EQUIV_BUDGET,
            samples: 1000,
            prefix_depth: 2,
        }
    }
}

fn field(n: u32) -> Gf2nField {
    Gf2nField::with_degree(n).expect("small degree")
}

fn ctx(g: &FiniteGroup, n: u32) -> GroupAlgebra {
    GroupAlgebra::new(g.clone(), field(n))
}

fn result(alg: &GroupAlgebra, tally: Tally) -> ContextResult {
    ContextResult {
        group: alg.group().name().into(),
        field: alg.field().spec_string(),
        tally,
    }
}

fn failed(alg: &GroupAlgebra, msg: String) -> ContextResult {
    result(
        alg,
        Tally {
            checks: 1,
            failures: 1,
            messages: vec![msg],
        },
    )
}

fn rng(cfg: &SuiteConfig, context: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ (context as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn run(name: &str, cfg: &SuiteConfig) -> Option<SuiteReport> {
    Some(match name {
        "dimension" => dimension(),
        "smoothness" => smoothness(cfg),
        "mu" => mu(cfg),
        "transform" => transform(cfg),
        "forms" => forms(cfg),
        "coincidence" => coincidence(),
        "equivalence" => equivalence(cfg),
        _ => return None,
    })
}

pub fn catalog() -> Vec<FiniteGroup> {
    vec![
        cyclic(1),
        cyclic(2),
        cyclic(4),
        cyclic(8),
        quaternion8(),
        dihedral(4),
        symmetric3(),
        dicyclic12(),
    ]
}

/// The contexts whose point counts are pinned down exactly.
pub fn count_contexts() -> Vec<(FiniteGroup, u32)> {
    vec![
        (cyclic(2), 1),
        (cyclic(2), 2),
        (cyclic(2), 3),
        (cyclic(4), 1),
        (cyclic(4), 2),
        (cyclic(8), 1),
        (quaternion8(), 1),
        (quaternion8(), 2),
        (dihedral(4), 1),
    ]
}

/// `dim U_G = (|G| + |G_2|)/2 − 1`, with `G_2` counted from the table.
pub fn dimension() -> SuiteReport {
    let k = field(1);
    let contexts = catalog()
        .into_iter()
        .map(|g| {
            let g2 = (0..g.order()).filter(|&x| g.mul(x, x) == 0).count();
            let expected = (g.order() + g2) / 2 - 1;
            let mut t = Tally::default();
            t.check(g.unitary_dim() == expected, || {
                format!("dim {} but the formula gives {expected}", g.unitary_dim())
            });
            result(&GroupAlgebra::new(g, k.clone()), t)
        })
        .collect();
    SuiteReport::new("dimension", contexts)
}

fn points(alg: GroupAlgebra, cfg: &SuiteConfig) -> Result<Vec<Vec<unitrace_core::FieldElement>>, String> {
    let e = UnitaryEnumerator::new(alg, cfg.node_budget).map_err(|e| e.to_string())?;
    Ok(parallel::collect_points(&e, cfg.prefix_depth))
}

/// The Jacobian of `(L, P_s)_{s∈Σ}` has full rank `1 + |Σ|` at every point.
pub fn smoothness(cfg: &SuiteConfig) -> SuiteReport {
    let contexts = count_contexts()
        .iter()
        .map(|(g, n)| {
            let alg = ctx(g, *n);
            let pts = match points(alg.clone(), cfg) {
                Ok(p) => p,
                Err(e) => return failed(&alg, e),
            };
            let want = 1 + g.sigma_partition().len();
            let tally = pts
                .par_iter()
                .map(|x| {
                    let mut t = Tally::default();
                    let r = UnitaryEnumerator::jacobian_rank(&alg, x);
                    t.check(r == want, || format!("rank {r} ≠ {want} at {x:?}"));
                    t
                })
                .reduce(Tally::default, Tally::merge);
            result(&alg, tally)
        })
        .collect();
    SuiteReport::new("smoothness", contexts)
}

fn mu_contexts() -> Vec<(FiniteGroup, u32)> {
    let mut v = Vec::new();
    for g in [cyclic(4), cyclic(8), quaternion8(), dihedral(4)] {
        for n in 1..=2 {
            v.push((g.clone(), n));
        }
    }
    v
}

/// `μ_ε ∈ {0,1}`, `μ_ε(xy) = μ_ε(x) + μ_ε(y)` on seeded partners,
/// `μ_ε(x²) = 0`, and for `ε₁ ≠ ε₂` exactly one of the four partial sums
/// over the classes of `(ε₁, ε₂)` is `1`, the others `0`.
pub fn mu(cfg: &SuiteConfig) -> SuiteReport {
    let contexts = mu_contexts()
        .iter()
        .enumerate()
        .map(|(ci, (g, n))| {
            let alg = ctx(g, *n);
            let pts = match points(alg.clone(), cfg) {
                Ok(p) => p,
                Err(e) => return failed(&alg, e),
            };
            let chars = g.essential_characters();
            let nontrivial: Vec<_> = chars.iter().filter(|c| !c.is_trivial()).collect();
            let f = alg.field().clone();
            let tally = pts
                .par_iter()
                .enumerate()
                .map(|(i, x)| {
                    let mut t = Tally::default();
                    let mut r = rng(cfg, ci * 1_000_003 + i);
                    let x = AlgebraElement::from_coeffs(x.clone());
                    let y = AlgebraElement::from_coeffs(pts[r.gen_range(0..pts.len())].clone());
                    let xy = alg.mul(&x, &y).expect("same algebra");
                    let xx = alg.mul(&x, &x).expect("same algebra");
                    for eps in &chars {
                        let (mx, my, mxy, mxx) = (
                            alg.mu_epsilon(&x, eps),
                            alg.mu_epsilon(&y, eps),
                            alg.mu_epsilon(&xy, eps),
                            alg.mu_epsilon(&xx, eps),
                        );
                        match (mx, my, mxy, mxx) {
                            (Ok(a), Ok(b), Ok(c), Ok(d)) => {
                                t.check(a <= 1, || format!("μ_{} = {a}", eps.label));
                                t.check(c == a ^ b, || format!("μ_{} not multiplicative", eps.label));
                                t.check(d == 0, || format!("μ_{}(x²) = {d}", eps.label));
                            }
                            _ => t.check(false, || format!("μ_{} undefined on a unitary point", eps.label)),
                        }
                    }
                    for (a, e1) in nontrivial.iter().enumerate() {
                        for e2 in &nontrivial[a + 1..] {
                            let mut sums = [unitrace_core::FieldElement::ZERO; 4];
                            for (h, &c) in x.coeffs().iter().enumerate() {
                                let cls = (e1.value(h) + 2 * e2.value(h)) as usize;
                                sums[cls] = f.add(sums[cls], c);
                            }
                            let ones = sums.iter().filter(|s| s.bits() == 1).count();
                            let zeros = sums.iter().filter(|s| s.is_zero()).count();
                            t.check(ones == 1 && zeros == 3, || {
                                format!("(X,Y,Z,T) = {sums:?} for characters {} and {}", e1.label, e2.label)
                            });
                        }
                    }
                    t
                })
                .reduce(Tally::default, Tally::merge);
            result(&alg, tally)
        })
        .collect();
    SuiteReport::new("mu", contexts)
}

pub fn random_hermitian(alg: &GroupAlgebra, rng: &mut ChaCha8Rng) -> HermitianElement {
    let x = alg.random_element(rng);
    let h = alg.add(&x, &alg.star(&x)).expect("same algebra");
    let h = alg.add(&h, &alg.scalar(alg.field().random(rng))).expect("same algebra");
    alg.make_hermitian(h).expect("x + x* + λ is hermitian")
}

/// `(a h a*)_ε = t(a)² h_ε + t(h) t(a₊) t(a₋)` and `h_{ε₁ε₂} = h_{ε₁} + h_{ε₂}`.
pub fn transform(cfg: &SuiteConfig) -> SuiteReport {
    let mut list = Vec::new();
    for g in [cyclic(4), cyclic(8), quaternion8(), dihedral(4)] {
        for n in 1..=3 {
            list.push(ctx(&g, n));
        }
    }
    let contexts = list
        .par_iter()
        .enumerate()
        .map(|(ci, alg)| {
            let mut r = rng(cfg, ci);
            let f = alg.field();
            let chars = alg.group().essential_characters();
            let mut t = Tally::default();
            for _ in 0..cfg.samples {
                let a = alg.random_element(&mut r);
                let h = random_hermitian(alg, &mut r);
                let eps = &chars[r.gen_range(0..chars.len())];
                let aha = alg.transform(&a, &h).expect("hermitian");
                let (ap, am) = alg.split_by_character(&a, eps);
                let rhs = f.add(
                    f.mul(f.square(alg.augmentation(&a)), alg.h_epsilon(&h, eps)),
                    f.mul(alg.augmentation(h.element()), f.mul(alg.augmentation(&ap), alg.augmentation(&am))),
                );
                let lhs = alg.h_epsilon(&aha, eps);
                t.check(lhs == rhs, || format!("(aha*)_ε = {lhs} ≠ {rhs} for ε = {}", eps.label));
                for e2 in &chars {
                    let l = alg.h_epsilon(&h, &eps.product(e2));
                    let r2 = f.add(alg.h_epsilon(&h, eps), alg.h_epsilon(&h, e2));
                    t.check(l == r2, || format!("h_ε₁ε₂ = {l} ≠ {r2}"));
                }
            }
            result(alg, t)
        })
        .collect();
    SuiteReport::new("transform", contexts)
}

/// Trace forms of every Galois algebra satisfy the G-form conditions,
/// and perturbing one Gram entry breaks them.
pub fn forms(cfg: &SuiteConfig) -> SuiteReport {
    let mut list = Vec::new();
    for g in [cyclic(2), cyclic(4), cyclic(8), quaternion8(), dihedral(4)] {
        for n in 1..=2 {
            list.push((g.clone(), n));
        }
    }
    let contexts = list
        .par_iter()
        .enumerate()
        .map(|(ci, (g, n))| {
            let alg = ctx(g, *n);
            let mut t = Tally::default();
            for x in 0..g.order() {
                let l = match GaloisAlgebra::new(g.clone(), x, field(*n)) {
                    Ok(l) => l,
                    Err(_) => continue,
                };
                let form = match l.trace_form_gram() {
                    Ok(f) => f,
                    Err(e) => {
                        t.check(false, || e.to_string());
                        continue;
                    }
                };
                let rep = form.check_form_properties(cfg.seed.wrapping_add(ci as u64), 50);
                t.check(rep.all_pass(), || format!("trace form of g = {x} fails {rep:?}"));
                t.check(form.gram.rank(l.base_field()) == l.dim(), || "degenerate trace form".into());
                // q(e, s e) for s = first involution: flipping it breaks isotropy
                if let Some(&s) = g.order_two_elements().first() {
                    let mut e = vec![unitrace_core::FieldElement::ZERO; l.dim()];
                    e[0] = unitrace_core::FieldElement::ONE;
                    let col = form.act(s, &e);
                    let j = col.iter().position(|c| !c.is_zero()).expect("action is invertible");
                    let bad = form.perturbed(0, j);
                    t.check(!bad.check_form_properties(0, 10).isotropic, || {
                        format!("perturbed Gram of g = {x} still isotropic")
                    });
                }
            }
            result(&alg, t)
        })
        .collect();
    SuiteReport::new("forms", contexts)
}

/// `L^{ker ε}` and `h_ε` give the same class, and both equal `ε(g)`.
pub fn coincidence() -> SuiteReport {
    let mut list = Vec::new();
    for g in [cyclic(2), cyclic(4), cyclic(8), quaternion8()] {
        for n in 1..=2 {
            list.push((g.clone(), n));
        }
    }
    let contexts = list
        .par_iter()
        .map(|(g, n)| {
            let alg = ctx(g, *n);
            let mut t = Tally::default();
            for x in 0..g.order() {
                // algebras whose extension field exceeds the supported tower are skipped
                let Ok(l) = GaloisAlgebra::new(g.clone(), x, field(*n)) else {
                    continue;
                };
                match l.invariants_coincide() {
                    Ok(rep) => t.check(rep.coincide, || format!("g = {x}: {:?}", rep.characters)),
                    Err(e) => t.check(false, || format!("g = {x}: {e}")),
                }
            }
            result(&alg, t)
        })
        .collect();
    SuiteReport::new("coincidence", contexts)
}

pub fn equivalence_contexts() -> Vec<(FiniteGroup, u32)> {
    vec![(quaternion8(), 1), (quaternion8(), 2), (cyclic(8), 1)]
}

/// `E_G` bound from point counts over GF(2) and GF(4).
pub fn e_g_bound(g: &FiniteGroup, cfg: &SuiteConfig) -> Result<u128, String> {
    let reports = (1..=2)
        .map(|n| {
            let e = UnitaryEnumerator::new(ctx(g, n), cfg.node_budget).map_err(|e| e.to_string())?;
            let count = parallel::count_points(&e, cfg.prefix_depth);
            unitrace_core::PointCountReport::from_count(g, &field(n), count, e.node_count(), unitrace_core::unitary::METHOD_LINEAR_TAIL)
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, String>>()?;
    ComponentEstimate::from_reports(g, &reports)
        .map(|c| c.e_g_order_bound)
        .map_err(|e| e.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassTable {
    pub group: String,
    pub field: String,
    pub elements: usize,
    pub class_sizes: Vec<usize>,
    pub orbit_classes: Vec<usize>,
    pub search_classes: Vec<usize>,
    /// `(character label, class of h_ε)` per element.
    pub signatures: Vec<Vec<(u32, u8)>>,
    pub pairs: usize,
    /// Pairs on which the invariant criterion matches the searches; absent
    /// when the criterion does not apply.
    pub agreements: Option<usize>,
}

impl ClassTable {
    pub fn agree(&self) -> bool {
        self.orbit_classes == self.search_classes && self.agreements.is_none_or(|a| a == self.pairs)
    }
}

/// Classes of all normalized special hermitians three ways: orbits, pairwise
/// searches, and (given `E_G = 1` evidence) the invariant criterion on every
/// pair.
pub fn class_table(alg: &GroupAlgebra, cfg: &SuiteConfig, evidence: Option<EgEvidence>) -> Result<ClassTable, unitrace_core::Error> {
    let hs = alg.normalized_special_hermitians();
    let orbit = alg.hermitian_classes(&hs, cfg.equiv_budget)?;
    let search = parallel::pairwise_classes(alg, &hs, cfg.equiv_budget)?;
    let agreements = match evidence {
        Some(ev) if alg.group().is_two_group() => {
            let verdicts: Vec<Vec<bool>> = hs
                .par_iter()
                .map(|h| {
                    hs.iter()
                        .map(|h2| alg.herm_equiv_invariant(h, h2, ev).map(|v| v.equivalent))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?;
            let mut n = 0;
            for i in 0..hs.len() {
                for j in 0..hs.len() {
                    if verdicts[i][j] == (search[i] == search[j]) {
                        n += 1;
                    }
                }
            }
            Some(n)
        }
        _ => None,
    };
    let nclasses = orbit.iter().max().map_or(0, |m| m + 1);
    let mut class_sizes = vec![0; nclasses];
    for &c in &orbit {
        class_sizes[c] += 1;
    }
    let chars = alg.group().essential_characters();
    let signatures = hs
        .iter()
        .map(|h| {
            chars
                .iter()
                .skip(1)
                .map(|eps| (eps.label, alg.field().artin_schreier_class(alg.h_epsilon(h, eps))))
                .collect()
        })
        .collect();
    Ok(ClassTable {
        group: alg.group().name().into(),
        field: alg.field().spec_string(),
        elements: hs.len(),
        class_sizes,
        orbit_classes: orbit,
        search_classes: search,
        signatures,
        pairs: hs.len() * hs.len(),
        agreements,
    })
}

pub fn equivalence(cfg: &SuiteConfig) -> SuiteReport {
    let contexts = equivalence_contexts()
        .iter()
        .map(|(g, n)| {
            let alg = ctx(g, *n);
            let bound = match e_g_bound(g, cfg) {
                Ok(b) => b,
                Err(e) => return failed(&alg, e),
            };
            let evidence = EgEvidence::PointCounts { e_g_order_bound: bound };
            match class_table(&alg, cfg, Some(evidence)) {
                Ok(table) => {
                    let mut t = Tally::default();
                    let agreements = table.agreements.unwrap_or(0);
                    t.checks = table.pairs as u64;
                    t.failures = (table.pairs - agreements) as u64;
                    if t.failures > 0 {
                        t.messages.push(format!("{} pairs disagree", t.failures));
                    }
                    t.check(table.orbit_classes == table.search_classes, || {
                        "orbit and pairwise classes differ".into()
                    });
                    result(&alg, t)
                }
                Err(e) => failed(&alg, e.to_string()),
            }
        })
        .collect();
    SuiteReport::new("equivalence", contexts)
}
