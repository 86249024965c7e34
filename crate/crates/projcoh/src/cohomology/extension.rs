//! Candidate groups for unresolved extension problems.
//!
//! For finite abelian `p`-groups of types `λ` (subgroup) and `μ` (quotient),
//! a group of type `ν` fits into `0 → A_λ → G → A_μ → 0` exactly when the
//! Littlewood–Richardson coefficient `c^ν_{λμ}` is positive, and a group of
//! type `λ` has a subgroup of type `μ` exactly when `μ ⊆ λ`. Finite groups
//! split into primary parts, so both questions are answered prime by prime.

use std::collections::{BTreeMap, BTreeSet};

use crate::exact_linalg::AbelianGroup;

/// A partition with weakly decreasing positive parts.
pub type Partition = Vec<u32>;

/// All partitions `μ ⊆ λ`.
pub fn sub_partitions(lambda: &[u32]) -> Vec<Partition> {
    fn rec(lambda: &[u32], i: usize, bound: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == lambda.len() {
            out.push(cur.iter().copied().filter(|&x| x > 0).collect());
            return;
        }
        for v in 0..=lambda[i].min(bound) {
            cur.push(v);
            rec(lambda, i + 1, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lambda, 0, u32::MAX, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// All `ν` with `c^ν_{λμ} > 0`.
///
/// Letters `1, 2, …` are added to `λ` as successive horizontal strips of sizes
/// `μ₁, μ₂, …`; the reverse reading word is a lattice word exactly when, for
/// every row `r`, the number of letters `i+1` in rows `≤ r` is at most the
/// number of letters `i` in rows `< r`.
pub fn lr_shapes(lambda: &[u32], mu: &[u32]) -> BTreeSet<Partition> {
    // state: (shape, per-row counts of the most recent letter)
    let mut states: BTreeSet<(Vec<u32>, Vec<u32>)> = BTreeSet::new();
    states.insert((lambda.to_vec(), Vec::new()));
    for (letter, &size) in mu.iter().enumerate() {
        let mut next = BTreeSet::new();
        for (shape, prev) in &states {
            let rows = shape.len() + 1;
            let mut counts = vec![0u32; rows];
            strips(shape, prev, letter == 0, size, 0, 0, 0, &mut counts, &mut next);
        }
        states = next;
    }
    states.into_iter().map(|(s, _)| s).collect()
}

#[allow(clippy::too_many_arguments)]
fn strips(
    shape: &[u32],
    prev: &[u32],
    first: bool,
    remaining: u32,
    row: usize,
    cum_new: u32,
    cum_prev: u32,
    counts: &mut Vec<u32>,
    out: &mut BTreeSet<(Vec<u32>, Vec<u32>)>,
) {
    let rows = shape.len() + 1;
    if row == rows {
        if remaining == 0 {
            let mut new_shape: Vec<u32> = (0..rows)
                .map(|r| shape.get(r).copied().unwrap_or(0) + counts[r])
                .collect();
            while new_shape.last() == Some(&0) {
                new_shape.pop();
            }
            let mut c = counts.clone();
            while c.last() == Some(&0) {
                c.pop();
            }
            out.insert((new_shape, c));
        }
        return;
    }
    let current = shape.get(row).copied().unwrap_or(0);
    let cap = if row == 0 {
        remaining
    } else {
        (shape[row - 1] - current).min(remaining)
    };
    for m in 0..=cap {
        let total = cum_new + m;
        if !first && total > cum_prev {
            break;
        }
        counts[row] = m;
        let prev_here = prev.get(row).copied().unwrap_or(0);
        strips(
            shape,
            prev,
            first,
            remaining - m,
            row + 1,
            total,
            cum_prev + prev_here,
            counts,
            out,
        );
    }
    counts[row] = 0;
}

/// Whether a group of type `mu` embeds in a group of type `lambda`.
pub fn contains_partition(lambda: &[u32], mu: &[u32]) -> bool {
    mu.len() <= lambda.len() && mu.iter().zip(lambda).all(|(a, b)| a <= b)
}

fn combine(per_prime: Vec<(u64, Vec<Partition>)>) -> Vec<AbelianGroup> {
    let mut acc: Vec<BTreeMap<u64, Vec<u32>>> = vec![BTreeMap::new()];
    for (p, options) in per_prime {
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for a in &acc {
            for o in &options {
                let mut m = a.clone();
                if !o.is_empty() {
                    m.insert(p, o.clone());
                }
                next.push(m);
            }
        }
        acc = next;
    }
    let mut out: Vec<AbelianGroup> = acc
        .iter()
        .map(|parts| AbelianGroup::from_primary_parts(0, parts))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn primes_of(groups: &[&AbelianGroup]) -> BTreeSet<u64> {
    groups
        .iter()
        .flat_map(|g| g.primary_parts().into_keys())
        .collect()
}

/// Isomorphism types of subgroups of the torsion part of `g`.
pub fn subgroup_types(g: &AbelianGroup) -> Vec<AbelianGroup> {
    let parts = g.primary_parts();
    combine(
        parts
            .into_iter()
            .map(|(p, lambda)| (p, sub_partitions(&lambda)))
            .collect(),
    )
}

/// Isomorphism types of finite groups `E` with `0 → sub → E → quot → 0`
/// (torsion parts only).
pub fn extension_types(sub: &AbelianGroup, quot: &AbelianGroup) -> Vec<AbelianGroup> {
    let a = sub.primary_parts();
    let b = quot.primary_parts();
    let per_prime = primes_of(&[sub, quot])
        .into_iter()
        .map(|p| {
            let la = a.get(&p).cloned().unwrap_or_default();
            let lb = b.get(&p).cloned().unwrap_or_default();
            (p, lr_shapes(&la, &lb).into_iter().collect())
        })
        .collect();
    combine(per_prime)
}

/// Torsion types of `E` in `0 → B → E → Q → 0` where `B` has torsion among
/// `sub_options` and `Q` has torsion `quot`, assuming the free rank of `B`
/// is large enough for every subgroup of `quot` to occur as the image of the
/// torsion of `E` (always the case when rank `B` ≥ number of generators of `quot`).
pub fn torsion_candidates(sub_options: &[AbelianGroup], quot: &AbelianGroup) -> Vec<AbelianGroup> {
    let mut out = BTreeSet::new();
    for s in subgroup_types(quot) {
        for b in sub_options {
            for e in extension_types(&b.torsion_part(), &s) {
                out.insert(e);
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(t: &[u64]) -> AbelianGroup {
        AbelianGroup::new(0, t)
    }

    #[test]
    fn pieri_and_small_products() {
        // s_1 · s_1 = s_2 + s_11
        let r = lr_shapes(&[1], &[1]);
        assert_eq!(r, [vec![1, 1], vec![2]].into_iter().collect());
        // s_21 · s_21 = s_42 + s_411 + s_33 + 2 s_321 + s_3111 + s_222 + s_2211
        assert_eq!(lr_shapes(&[2, 1], &[2, 1]).len(), 7);
        // empty partitions are units
        assert_eq!(lr_shapes(&[], &[3, 1]), [vec![3, 1]].into_iter().collect());
        assert_eq!(lr_shapes(&[2, 2], &[]), [vec![2, 2]].into_iter().collect());
    }

    #[test]
    fn lr_matches_brute_force_for_elementary_factors() {
        // e_k · e_j = Σ_a s_{(2^a, 1^{k+j−2a})}
        for k in 0..4u32 {
            for j in 0..4u32 {
                let la: Vec<u32> = vec![1; k as usize];
                let mu: Vec<u32> = vec![1; j as usize];
                let got = lr_shapes(&la, &mu);
                let want: BTreeSet<Partition> = (0..=k.min(j))
                    .map(|a| {
                        let mut p = vec![2; a as usize];
                        p.extend(std::iter::repeat(1).take((k + j - 2 * a) as usize));
                        p
                    })
                    .collect();
                assert_eq!(got, want, "k={k} j={j}");
            }
        }
    }

    #[test]
    fn subgroups_of_small_groups() {
        assert_eq!(subgroup_types(&g(&[2])), vec![g(&[]), g(&[2])]);
        assert_eq!(
            subgroup_types(&g(&[2, 4])),
            vec![g(&[]), g(&[2]), g(&[2, 2]), g(&[2, 4]), g(&[4])]
        );
        // primes combine independently
        assert_eq!(subgroup_types(&g(&[6])).len(), 4);
    }

    #[test]
    fn extensions_of_cyclic_groups() {
        // 0 → ℤ₂ → E → ℤ₂ → 0: E ∈ {ℤ₂², ℤ₄}
        assert_eq!(extension_types(&g(&[2]), &g(&[2])), vec![g(&[2, 2]), g(&[4])]);
        // coprime orders split
        assert_eq!(extension_types(&g(&[2]), &g(&[3])), vec![g(&[6])]);
    }

    #[test]
    fn free_by_order_two_dichotomy() {
        // ℤ^m ↪ E ↠ ℤ₂: the torsion of E is 0 or ℤ₂
        let c = torsion_candidates(&[AbelianGroup::free(20)], &g(&[2]));
        assert_eq!(c, vec![g(&[]), g(&[2])]);
    }

    #[test]
    fn lr_coefficients_symmetric_support() {
        for (a, b) in [(vec![2, 1], vec![1]), (vec![3], vec![2, 2]), (vec![2], vec![1, 1])] {
            assert_eq!(lr_shapes(&a, &b), lr_shapes(&b, &a));
        }
        for nu in lr_shapes(&[2, 1], &[1, 1]) {
            assert_eq!(nu.iter().sum::<u32>(), 5);
            assert!(contains_partition(&nu, &[2, 1]));
        }
    }
}
