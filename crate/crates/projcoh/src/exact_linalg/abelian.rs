//! Finitely generated abelian groups and presentations of them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{hnf, invariant_factors, kernel_basis, HermiteBasis, IntMatrix, LinalgError};

/// `ℤ^free_rank ⊕ ℤ_{t₁} ⊕ … ⊕ ℤ_{t_k}` with `1 < t₁ | t₂ | … | t_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize, PartialOrd, Ord)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    /// The trivial group.
    pub fn zero() -> Self {
        Self::default()
    }

    /// `ℤ^n`.
    pub fn free(n: usize) -> Self {
        Self {
            free_rank: n,
            torsion: Vec::new(),
        }
    }

    /// Builds a group from a free rank and arbitrary cyclic orders (units dropped,
    /// the list normalised into an invariant-factor chain).
    pub fn new(free_rank: usize, cyclic_orders: &[u64]) -> Self {
        let mut g = Self::free(free_rank);
        g.torsion = normalise_torsion(cyclic_orders);
        g
    }

    /// Builds the group `ℤ^free ⊕ ⊕ ℤ/dᵢ` from big invariant factors.
    pub fn from_factors(free_rank: usize, factors: &[BigInt]) -> Self {
        let orders: Vec<u64> = factors
            .iter()
            .map(|d| {
                d.to_u64()
                    .expect("torsion coefficient exceeds 64 bits")
            })
            .collect();
        Self::new(free_rank, &orders)
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// The torsion subgroup.
    pub fn torsion_part(&self) -> AbelianGroup {
        Self {
            free_rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u128 {
        self.torsion.iter().map(|&t| t as u128).product()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut orders = self.torsion.clone();
        orders.extend(&other.torsion);
        Self::new(self.free_rank + other.free_rank, &orders)
    }

    /// Direct sum of many groups.
    pub fn sum_all<'a>(groups: impl IntoIterator<Item = &'a AbelianGroup>) -> AbelianGroup {
        groups
            .into_iter()
            .fold(AbelianGroup::zero(), |acc, g| acc.direct_sum(g))
    }

    /// Primary decomposition of the torsion: prime ↦ exponents of the cyclic
    /// `p`-power summands, sorted in decreasing order (a partition).
    pub fn primary_parts(&self) -> BTreeMap<u64, Vec<u32>> {
        let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &t in &self.torsion {
            for (p, e) in factorize(t) {
                parts.entry(p).or_default().push(e);
            }
        }
        for v in parts.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        parts
    }

    /// Rebuilds a torsion group from its primary parts.
    pub fn from_primary_parts(free_rank: usize, parts: &BTreeMap<u64, Vec<u32>>) -> Self {
        let mut orders = Vec::new();
        for (&p, es) in parts {
            for &e in es {
                orders.push(p.pow(e));
            }
        }
        Self::new(free_rank, &orders)
    }

    /// Human-readable form such as `ℤ²⁴⊕ℤ₅²` (and `0` for the trivial group).
    pub fn pretty(&self) -> String {
        self.to_string()
    }

    /// Plain ASCII form such as `Z^24+Z_5^2`.
    pub fn ascii(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        for (t, k) in grouped(&self.torsion) {
            if k == 1 {
                parts.push(format!("Z_{t}"));
            } else {
                parts.push(format!("Z_{t}^{k}"));
            }
        }
        parts.join("+")
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            n => parts.push(format!("ℤ{}", superscript(n as u64))),
        }
        for (t, k) in grouped(&self.torsion) {
            let base = format!("ℤ{}", subscript(t));
            if k == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}{}", superscript(k as u64)));
            }
        }
        write!(f, "{}", parts.join("⊕"))
    }
}

fn grouped(torsion: &[u64]) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for &t in torsion {
        match out.last_mut() {
            Some((u, k)) if *u == t => *k += 1,
            _ => out.push((t, 1)),
        }
    }
    out
}

fn superscript(n: u64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

fn subscript(n: u64) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// Prime factorisation by trial division (torsion orders here are small).
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Normalises cyclic orders into an invariant-factor chain (`1 < t₁ | t₂ | …`).
fn normalise_torsion(orders: &[u64]) -> Vec<u64> {
    assert!(orders.iter().all(|&t| t > 0), "cyclic orders must be positive");
    // collect prime powers per prime, largest first
    let mut per_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &t in orders {
        for (p, e) in factorize(t) {
            per_prime.entry(p).or_default().push(e);
        }
    }
    let len = per_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut chain = vec![1u64; len];
    for (p, mut es) in per_prime {
        es.sort_unstable();
        // smallest exponents go to the earliest factors
        let offset = len - es.len();
        for (k, e) in es.into_iter().enumerate() {
            chain[offset + k] *= p.pow(e);
        }
    }
    chain
}

/// `ℤ^rows / colspan(a)`.
pub fn cokernel(a: &IntMatrix) -> AbelianGroup {
    let inv = invariant_factors(a);
    let free = a.rows() - inv.len();
    let tors: Vec<BigInt> = inv.into_iter().filter(|d| !d.is_one()).collect();
    AbelianGroup::from_factors(free, &tors)
}

/// Quotient `S / R` of lattices given by generators in `ℤ^n`, where `R ⊆ S`.
pub fn lattice_quotient(sub: &HermiteBasis, rel: &HermiteBasis) -> Result<AbelianGroup, LinalgError> {
    if sub.ambient_rank() != rel.ambient_rank() {
        return Err(LinalgError::AmbientMismatch {
            left: sub.ambient_rank(),
            right: rel.ambient_rank(),
        });
    }
    let mut coords = Vec::with_capacity(rel.rank());
    for c in rel.basis().columns() {
        coords.push(sub.coordinates(&c).ok_or(LinalgError::NotContained)?);
    }
    let m = IntMatrix::from_columns(sub.rank(), &coords);
    Ok(cokernel(&m))
}

/// A homomorphism between presented groups `ℤ^a / R_A → ℤ^b / R_B`, induced by
/// the integer matrix `f` (`b × a`), which must map `R_A` into `R_B`.
#[derive(Clone, Debug)]
pub struct PresentedMap {
    pub f: IntMatrix,
    /// Relations of the source (columns in `ℤ^a`).
    pub source_relations: IntMatrix,
    /// Relations of the target (columns in `ℤ^b`).
    pub target_relations: IntMatrix,
}

impl PresentedMap {
    pub fn new(
        f: IntMatrix,
        source_relations: IntMatrix,
        target_relations: IntMatrix,
    ) -> Result<Self, LinalgError> {
        if source_relations.rows() != f.cols() || target_relations.rows() != f.rows() {
            return Err(LinalgError::ShapeMismatch {
                op: "presented map",
                left: (f.rows(), f.cols()),
                right: (target_relations.rows(), source_relations.rows()),
            });
        }
        let m = Self {
            f,
            source_relations,
            target_relations,
        };
        // well-definedness: f(R_A) ⊆ R_B
        let rb = hnf(&m.target_relations);
        let image = m.f.mul(&m.source_relations)?;
        if !image.columns().iter().all(|c| rb.contains(c)) {
            return Err(LinalgError::NotContained);
        }
        Ok(m)
    }

    /// The lattice `{x ∈ ℤ^a : f x ∈ R_B}`.
    pub fn preimage_of_relations(&self) -> Result<HermiteBasis, LinalgError> {
        let a = self.f.cols();
        let stacked = self.f.hcat(&self.target_relations.neg())?;
        let k = kernel_basis(&stacked);
        let top: Vec<usize> = (0..a).collect();
        Ok(hnf(&k.select_rows(&top)))
    }

    /// Kernel of the induced map.
    pub fn kernel(&self) -> Result<AbelianGroup, LinalgError> {
        let pre = self.preimage_of_relations()?;
        lattice_quotient(&pre, &hnf(&self.source_relations))
    }

    /// Cokernel of the induced map.
    pub fn cokernel(&self) -> Result<AbelianGroup, LinalgError> {
        Ok(cokernel(&self.f.hcat(&self.target_relations)?))
    }

    /// Image of the induced map.
    pub fn image(&self) -> Result<AbelianGroup, LinalgError> {
        let im = hnf(&self.f.hcat(&self.target_relations)?);
        lattice_quotient(&im, &hnf(&self.target_relations))
    }
}

/// Integer solution of `m x = b`, if one exists.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length mismatch");
    let ech = super::hermite::column_echelon(m, true);
    let u = ech.u.as_ref().expect("transform tracked");
    let r = ech.rank();
    // forward substitution on the echelon columns
    let mut w = vec![BigInt::zero(); m.cols()];
    let mut rest = b.to_vec();
    let mut next_row = 0;
    for (j, &p) in ech.pivots.iter().enumerate() {
        if rest[next_row..p].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, rem) = rest[p].div_rem(ech.h.get(p, j));
        if !rem.is_zero() {
            return None;
        }
        for (i, x) in rest.iter_mut().enumerate().skip(p) {
            let h = ech.h.get(i, j);
            if !h.is_zero() {
                *x -= &q * h;
            }
        }
        w[j] = q;
        next_row = p + 1;
    }
    debug_assert!(w[r..].iter().all(Zero::is_zero));
    if rest.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(u.mul_vec(&w).expect("shapes agree"))
}
