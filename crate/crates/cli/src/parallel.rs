//! Work splitting over rayon. Results never depend on the thread count:
//! counts are sums over a fixed prefix partition and searches return the
//! least hit in candidate order.

use rayon::prelude::*;
use unitrace_core::algebra::EgEvidence;
use unitrace_core::{AlgebraElement, Error, FieldElement, GroupAlgebra, HermitianElement, UnitaryEnumerator};

pub fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
}

pub fn count_points(e: &UnitaryEnumerator, prefix_depth: usize) -> u128 {
    let depth = e.effective_depth(prefix_depth);
    (0..e.prefix_count(depth))
        .into_par_iter()
        .map(|p| e.count_in_prefix(depth, p))
        .sum()
}

/// Every point, in the same order as [`UnitaryEnumerator::for_each`].
pub fn collect_points(e: &UnitaryEnumerator, prefix_depth: usize) -> Vec<Vec<FieldElement>> {
    let depth = e.effective_depth(prefix_depth);
    let chunks: Vec<Vec<Vec<FieldElement>>> = (0..e.prefix_count(depth))
        .into_par_iter()
        .map(|p| {
            let mut v = Vec::new();
            e.for_each_in_prefix(depth, p, &mut |x| v.push(x.to_vec()));
            v
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Parallel drop-in for [`GroupAlgebra::herm_equiv_bruteforce`]: the
/// candidate range is cut on its most significant digits and the first chunk
/// with a hit wins, so the witness is the same least one.
pub fn herm_equiv(
    alg: &GroupAlgebra,
    h: &HermitianElement,
    h2: &HermitianElement,
    budget: u64,
) -> Result<Option<AlgebraElement>, Error> {
    let total = alg.candidate_count();
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "hermitian equivalence search",
            required: total,
            budget,
        });
    }
    if h.coeffs().len() != alg.dim() || h2.coeffs().len() != alg.dim() {
        return Err(Error::Mismatch("hermitian from another algebra".into()));
    }
    if !alg.is_invertible(h.element()) || !alg.is_invertible(h2.element()) {
        return Err(Error::Precondition("equivalence is only defined for invertible hermitians".into()));
    }
    let q = alg.field().order() as u128;
    let mut chunk = total;
    // aim for a few hundred chunks; each stays a contiguous index range
    while chunk >= q && total / chunk < 256 {
        chunk /= q;
    }
    let chunks = total.div_ceil(chunk) as u64;
    Ok((0..chunks).into_par_iter().find_map_first(|k| {
        let start = k as u128 * chunk;
        let end = (start + chunk).min(total);
        alg.herm_equiv_search_range(h, h2, start..end)
    }))
}

/// Equivalence classes of `hs` from pairwise parallel searches against one
/// representative per class; the orbit method in the core is faster, this is
/// the independent check.
pub fn pairwise_classes(alg: &GroupAlgebra, hs: &[HermitianElement], budget: u64) -> Result<Vec<usize>, Error> {
    let mut reps: Vec<usize> = Vec::new();
    let mut class = vec![0; hs.len()];
    for (i, h) in hs.iter().enumerate() {
        let hit: Vec<bool> = reps
            .par_iter()
            .map(|&r| herm_equiv(alg, &hs[r], h, budget).map(|w| w.is_some()))
            .collect::<Result<_, _>>()?;
        match hit.iter().position(|&b| b) {
            Some(c) => class[i] = c,
            None => {
                class[i] = reps.len();
                reps.push(i);
            }
        }
    }
    Ok(class)
}

/// `E_G = 1` evidence for the invariant criterion.
pub fn evidence(assume_trivial: bool, e_g_order_bound: Option<u128>) -> Option<EgEvidence> {
    if assume_trivial {
        Some(EgEvidence::UserAssertion)
    } else {
        e_g_order_bound.map(|b| EgEvidence::PointCounts { e_g_order_bound: b })
    }
}
