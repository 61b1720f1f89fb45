//! One line per acceptance criterion; exits non-zero if any blocking
//! criterion fails. The last line reports the non-blocking stretch goal.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use unitrace_cli::suites::{self, SuiteConfig};
use unitrace_core::algebra::{EgEvidence, DEFAULT_EQUIV_BUDGET};
use unitrace_core::galois::IsoMethod;
use unitrace_core::group::{cyclic, dicyclic12, dihedral, quaternion8, symmetric3};
use unitrace_core::unitary::{ComponentEstimate, DEFAULT_NODE_BUDGET};
use unitrace_core::{
    AlgebraElement, FieldElement, FiniteGroup, GaloisAlgebra, Gf2nField, GroupAlgebra, UnitaryEnumerator,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn field(n: u32) -> Gf2nField {
    Gf2nField::with_degree(n).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn suite(r: suites::SuiteReport) -> Outcome {
    let bad: Vec<String> = r
        .contexts
        .iter()
        .filter(|c| c.tally.failures > 0)
        .map(|c| format!("{}/{}: {:?}", c.group, c.field, c.tally.messages))
        .collect();
    ensure(r.passed && r.checks > 0, bad.join("; "))?;
    Ok(format!("{} checks over {} contexts, 0 failures", r.checks, r.contexts.len()))
}

fn c1_dimension() -> Outcome {
    let groups = [
        cyclic(1),
        cyclic(2),
        cyclic(4),
        cyclic(8),
        quaternion8(),
        dihedral(4),
        symmetric3(),
        dicyclic12(),
    ];
    let expected = [0, 1, 2, 4, 4, 6, 4, 6];
    for (g, want) in groups.iter().zip(expected) {
        let g2 = (0..g.order()).filter(|&x| g.mul(x, x) == 0).count();
        ensure(
            g.unitary_dim() == want && (g.order() + g2) / 2 - 1 == want,
            format!("{}: dim {} vs {want}", g.name(), g.unitary_dim()),
        )?;
    }
    suite(suites::dimension())
}

fn timed_count(g: &FiniteGroup, n: u32) -> Result<(u128, Duration, UnitaryEnumerator), String> {
    let start = Instant::now();
    let e = UnitaryEnumerator::new(GroupAlgebra::new(g.clone(), field(n)), DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let count = e.count();
    Ok((count, start.elapsed(), e))
}

fn c2_counts() -> Outcome {
    let mut cases: Vec<(FiniteGroup, u32, u128)> = Vec::new();
    for n in 1..=3 {
        cases.push((cyclic(2), n, 1 << n));
    }
    for n in 1..=2 {
        let q = 1u128 << n;
        cases.push((cyclic(4), n, 2 * q * q));
    }
    cases.push((cyclic(8), 1, 32));
    cases.push((quaternion8(), 1, 64));
    cases.push((quaternion8(), 2, 1024));
    cases.push((dihedral(4), 1, 64));
    let mut slowest = Duration::ZERO;
    let mut reports = Vec::new();
    for (g, n, want) in &cases {
        let (got, took, e) = timed_count(g, *n)?;
        ensure(got == *want, format!("{} over GF(2^{n}): {got} ≠ {want}", g.name()))?;
        ensure(took < Duration::from_secs(5), format!("{} over GF(2^{n}) took {took:?}", g.name()))?;
        slowest = slowest.max(took);
        reports.push(e.report().map_err(|e| e.to_string())?);
    }
    let q8: Vec<_> = reports.iter().filter(|r| r.group == "Q8").cloned().collect();
    let est = ComponentEstimate::from_reports(&quaternion8(), &q8).map_err(|e| e.to_string())?;
    ensure(est.component_order_bound == 4, format!("Q8 component bound {}", est.component_order_bound))?;
    let d4 = reports.iter().find(|r| r.group == "D4").unwrap();
    ensure(d4.c == Some(0), format!("D4 c = {:?}", d4.c))?;
    Ok(format!(
        "{} exact counts, Q8 component order 4, D4 c = 0, slowest {:.1} ms",
        cases.len(),
        slowest.as_secs_f64() * 1e3
    ))
}

fn c3_smoothness(cfg: &SuiteConfig) -> Outcome {
    suite(suites::smoothness(cfg))
}

fn c4_mu(cfg: &SuiteConfig) -> Outcome {
    suite(suites::mu(cfg))
}

fn c5_equivalence(cfg: &SuiteConfig) -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let expected: [(FiniteGroup, u32, Vec<usize>); 3] = [
        (quaternion8(), 1, vec![2; 4]),
        (quaternion8(), 2, vec![16; 4]),
        (cyclic(8), 1, vec![4; 2]),
    ];
    for (g, n, sizes) in &expected {
        let alg = GroupAlgebra::new(g.clone(), field(*n));
        let bound = suites::e_g_bound(g, cfg)?;
        ensure(bound == 1, format!("{}: E_G bound {bound}", g.name()))?;
        let table = suites::class_table(&alg, cfg, Some(EgEvidence::PointCounts { e_g_order_bound: bound }))
            .map_err(|e| e.to_string())?;
        ensure(table.agree(), format!("{} over GF(2^{n}): criterion and search disagree", g.name()))?;
        ensure(&table.class_sizes == sizes, format!("{} over GF(2^{n}): classes {:?}", g.name(), table.class_sizes))?;
        lines.push(format!("{}/GF({}) {}×{}", g.name(), 1 << n, sizes.len(), sizes[0]));
    }
    // the serial core search on every pair where that is cheap
    for (g, n) in [(quaternion8(), 1), (cyclic(8), 1)] {
        let alg = GroupAlgebra::new(g.clone(), field(n));
        let hs = alg.normalized_special_hermitians();
        for h in &hs {
            for h2 in &hs {
                let brute = alg.herm_equiv_bruteforce(h, h2, DEFAULT_EQUIV_BUDGET).map_err(|e| e.to_string())?;
                let inv = alg
                    .herm_equiv_invariant(h, h2, EgEvidence::PointCounts { e_g_order_bound: 1 })
                    .map_err(|e| e.to_string())?;
                ensure(brute.is_some() == inv.equivalent, format!("{}: pair disagrees", g.name()))?;
            }
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), format!("took {took:?}"))?;
    Ok(format!("{}; 100% agreement in {:.1} s", lines.join(", "), took.as_secs_f64()))
}

fn c6_transform(cfg: &SuiteConfig) -> Outcome {
    let r = suites::transform(cfg);
    ensure(r.contexts.len() == 12, "expected 12 contexts")?;
    suite(r)
}

/// `q_L(v, u v)` for all `u`, evaluated by multiplying in `L`.
fn gram_row(l: &GaloisAlgebra, v: &[FieldElement]) -> Vec<FieldElement> {
    let x = l.from_coords(v);
    (0..l.group().order()).map(|u| l.trace(&l.mul(&x, &l.act(u, &x)))).collect()
}

fn delta(n: usize) -> Vec<FieldElement> {
    let mut d = vec![FieldElement::ZERO; n];
    d[0] = FieldElement::ONE;
    d
}

fn c7_dictionary() -> Outcome {
    let g = cyclic(4);
    let k = Gf2nField::prime();
    // Frobenius images 1, s², s
    let algs: Vec<GaloisAlgebra> = [0, 2, 1]
        .iter()
        .map(|&x| GaloisAlgebra::new(g.clone(), x, k.clone()).unwrap())
        .collect();
    let expected_iso = [(0, 1, true), (0, 2, false), (1, 2, false)];
    for (i, j, want) in expected_iso {
        let r = algs[i].gform_isomorphic(&algs[j], DEFAULT_EQUIV_BUDGET).map_err(|e| e.to_string())?;
        ensure(r.method == IsoMethod::CriterionAndWitness, "witness search did not run")?;
        let witness = r.witness.clone().unwrap();
        ensure(
            r.criterion == want && witness.is_some() == want,
            format!("pair ({i}, {j}): criterion {} witness {}", r.criterion, witness.is_some()),
        )?;
        if let Some(a) = witness {
            let alg = algs[i].group_algebra();
            let (h, _) = algs[i].trace_hermitian().unwrap();
            let (h2, _) = algs[j].trace_hermitian().unwrap();
            ensure(alg.transform(&a, &h).unwrap().coeffs() == h2.coeffs(), "witness does not transform")?;
        }
    }
    for (idx, l) in algs.iter().enumerate() {
        let bna = l.find_bna(DEFAULT_EQUIV_BUDGET).map_err(|e| e.to_string())?;
        match (&bna.generator, idx < 2) {
            (Some(v), true) => ensure(gram_row(l, v) == delta(4), "BNA generator has the wrong Gram row")?,
            (None, false) => {}
            _ => return Err(format!("BNA presence wrong for algebra {idx}")),
        }
    }
    let c2 = GaloisAlgebra::new(cyclic(2), 1, k.clone()).unwrap();
    let v = c2
        .find_bna(DEFAULT_EQUIV_BUDGET)
        .map_err(|e| e.to_string())?
        .generator
        .ok_or("no BNA for C2")?;
    ensure(gram_row(&c2, &v) == delta(2), "C2 BNA Gram is not the identity")?;
    let omega = c2.extension_field().primitive_element();
    let value = c2.value_at(&c2.from_coords(&v), 0);
    let classical = value == omega || value == c2.extension_field().square(omega);
    Ok(format!(
        "C4: (1,s²) isomorphic with witness, s isomorphic to neither, 3/3 criterion = witness, BNA for 1 and s² only; C2: BNA Gram = I (v {} the classical ω basis)",
        if classical { "is" } else { "is not" }
    ))
}

fn c8_coincidence() -> Outcome {
    let r = suites::coincidence();
    ensure(r.checks == 44, format!("{} algebras checked, expected 44", r.checks))?;
    suite(r)
}

fn c9_construction() -> Outcome {
    let l = GaloisAlgebra::new(cyclic(4), 1, Gf2nField::prime()).unwrap();
    let c = l.construct_7_3_2(Some(1), DEFAULT_EQUIV_BUDGET).map_err(|e| e.to_string())?;
    let want: Vec<FieldElement> = [1, 1, 0, 1].map(FieldElement::from_bits).to_vec();
    ensure(c.gram_row == want, format!("Gram row {:?}", c.gram_row))?;
    ensure(c.z == FieldElement::ONE, format!("z = {}", c.z))?;
    // the full Gram matrix on {v, sv, s²v, s³v} from products in L
    let orbit: Vec<Vec<FieldElement>> = (0..4).map(|i| l.act(i, &l.from_coords(&c.v))).collect();
    for i in 0..4 {
        for j in 0..4 {
            let q = l.trace(&l.mul(&orbit[i], &orbit[j]));
            // q(s^i v, s^j v) = q(v, s^{j-i} v)
            ensure(q == want[(j + 4 - i) % 4], format!("q(s^{i}v, s^{j}v) = {q}"))?;
        }
    }
    Ok("v has Gram row (1, 1, 0, 1), z = 1, re-evaluated on {v, sv, s²v, s³v}".into())
}

fn c10_negative() -> Outcome {
    let l = GaloisAlgebra::new(cyclic(4), 1, Gf2nField::prime()).unwrap();
    let form = l.trace_form_gram().map_err(|e| e.to_string())?;
    ensure(form.check_form_properties(0, 50).all_pass(), "unperturbed form fails")?;
    let e0 = delta(4);
    let col = form.act(2, &e0);
    let j = col.iter().position(|c| !c.is_zero()).unwrap();
    let bad = form.perturbed(0, j);
    ensure(!bad.check_form_properties(0, 50).isotropic, "perturbed form still isotropic")?;

    let alg = GroupAlgebra::new(quaternion8(), Gf2nField::prime());
    let g = alg.group();
    let u = 2;
    let h1 = alg.make_hermitian(alg.one()).unwrap();
    let mut c = alg.one().into_coeffs();
    c[u] = FieldElement::ONE;
    c[g.inv(u)] = FieldElement::ONE;
    let h2 = alg.make_hermitian(AlgebraElement::from_coeffs(c)).unwrap();
    let brute = alg.herm_equiv_bruteforce(&h1, &h2, DEFAULT_EQUIV_BUDGET).map_err(|e| e.to_string())?;
    ensure(brute.is_none(), "found a witness for 1 ~ 1 + (u + u⁻¹)")?;
    let inv = alg
        .herm_equiv_invariant(&h1, &h2, EgEvidence::PointCounts { e_g_order_bound: 1 })
        .map_err(|e| e.to_string())?;
    ensure(!inv.equivalent, "invariants claim equivalence")?;
    Ok(format!(
        "perturbed Gram loses isotropy; 1 vs 1 + (u + u⁻¹) inequivalent after {} candidates, invariant classes {:?}",
        alg.candidate_count(),
        inv.classes
    ))
}

/// Non-blocking: the count over GF(4) is compared with `2^2 · 4^6` as
/// literally stated, and the 2-adic valuations over GF(2), GF(4) give the
/// fitted component exponent.
fn stretch() -> (bool, String) {
    let g = dicyclic12();
    let start = Instant::now();
    let counts: Result<Vec<u128>, String> = (1..=2).map(|n| timed_count(&g, n).map(|(c, _, _)| c)).collect();
    let took = start.elapsed();
    let counts = match counts {
        Ok(c) => c,
        Err(e) => return (false, e),
    };
    let (n2, n4) = (counts[0], counts[1]);
    let target = 4u128 * 4u128.pow(6);
    let (v2, v4) = (n2.trailing_zeros() as i64, n4.trailing_zeros() as i64);
    let unipotent = v4 - v2;
    let c = 2 * v2 - v4;
    let met = n4 == target;
    (
        met,
        format!(
            "N(GF(4)) = {n4} = {}·4^6 vs 2^2·4^6 = {target}; odd part {} over GF(4), {} over GF(2) (N(GF(2)) = {n2}); 2-adic fit: unipotent dim {unipotent}, c = {c}; {:.2} s",
            n4 / 4u128.pow(6),
            n4 >> v4,
            n2 >> v2,
            took.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let cfg = SuiteConfig {
        seed: 20_250_101,
        ..SuiteConfig::default()
    };
    let criteria: Vec<Criterion> = vec![
        ("dimension formula", Box::new(c1_dimension)),
        ("point counts", Box::new(c2_counts)),
        ("smoothness", Box::new(move || c3_smoothness(&cfg))),
        ("μ-invariant suite", Box::new(move || c4_mu(&cfg))),
        ("hermitian equivalence oracle", Box::new(move || c5_equivalence(&cfg))),
        ("transformation law and additivity", Box::new(move || c6_transform(&cfg))),
        ("trace-form dictionary", Box::new(c7_dictionary)),
        ("invariant coincidence", Box::new(c8_coincidence)),
        ("explicit construction", Box::new(c9_construction)),
        ("negative controls", Box::new(c10_negative)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    let (met, detail) = stretch();
    println!(
        "stretch      {}  Ŝ3 over GF(4) (non-blocking): {detail}",
        if met { "MET    " } else { "NOT MET" }
    );
    if failed == 0 {
        println!("acceptance: {} of {} criteria pass", criteria.len(), criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria FAIL", criteria.len());
        ExitCode::FAILURE
    }
}
