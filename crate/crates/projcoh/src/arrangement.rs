//! Intersection closure of the singular families up to translation by `Γ = ℤ^N`.
//!
//! A translation class is a saturated direction lattice together with an
//! offset that is canonical modulo `ℤ^N + V`. Two classes `A`, `B` meet in
//! the translates `A ∩ (B + γ)` with `o_B − o_A + γ ∈ V_A + V_B`; the valid
//! `γ` form a coset of `M = ℤ^N ∩ (V_A + V_B)`, and the resulting components
//! fall into exactly `[M : Γ^A + Γ^B]` translation classes, one per coset.
//!
//! A class `X` of smaller dimension lies in a fixed representative of a class
//! `Θ` for at most one orbit of the stabilizer `Γ^Θ` (two parallel translates
//! of `Θ` either coincide or are disjoint), so incidence is a containment
//! relation: `X` belongs to `I^Θ` when `V_X ⊆ V_Θ` and `o_X ∈ o_Θ + ℤ^N + V_Θ`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::exact_linalg::{
    hnf, lattice_intersection, lattice_sum, saturate, HermiteBasis, IntMatrix, LinalgError,
    RatMatrix,
};
use crate::scheme::{format_rational, QuotientChart, SchemeSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    /// An intersection has a direction rank that is not a multiple of `ν`:
    /// the scheme is not rational and its point classes are not finite.
    #[error("intersection of {left} and {right} has direction rank {rank}, not a multiple of ν = {nu}")]
    NonRational {
        left: String,
        right: String,
        rank: usize,
        nu: usize,
    },
    /// The sum of two stabilizers has an infinite index in its saturation.
    #[error("intersection of {left} and {right} splits into infinitely many orbits")]
    InfiniteOrbits { left: String, right: String },
    /// Defensive guard against runaway closure.
    #[error("closure did not stabilise within {0} classes")]
    DepthExceeded(usize),
    #[error("classes live in ambient ranks {0} and {1}")]
    AmbientMismatch(usize, usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A translation class of rational affine subspaces of `ℚ^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineClass {
    /// The saturated direction lattice, which is also the stabilizer.
    pub dir: HermiteBasis,
    /// Canonical offset.
    pub offset: Vec<BigRational>,
    chart: QuotientChart,
}

impl AffineClass {
    pub fn new(dir: &HermiteBasis, offset: &[BigRational]) -> Self {
        let chart = QuotientChart::new(dir);
        Self {
            dir: chart.direction().clone(),
            offset: chart.canonical(offset),
            chart,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.dir.ambient_rank()
    }

    /// Rank of the stabilizer.
    pub fn rank(&self) -> usize {
        self.dir.rank()
    }

    pub fn chart(&self) -> &QuotientChart {
        &self.chart
    }

    fn key(&self) -> (usize, Vec<BigInt>, Vec<BigRational>) {
        (self.rank(), self.dir.basis().entries().to_vec(), self.offset.clone())
    }

    /// Whether some translate of `self` lies in the representative of `other`;
    /// returns the translation `γ` with `self − γ ⊆ other`-representative
    /// (i.e. `o_self − γ − o_other ∈ V_other`).
    pub fn inside(&self, other: &AffineClass) -> Option<Vec<BigInt>> {
        if !other.dir.contains_lattice(&self.dir) {
            return None;
        }
        let diff: Vec<BigRational> = self
            .offset
            .iter()
            .zip(&other.offset)
            .map(|(a, b)| a - b)
            .collect();
        other.chart.lift_translation(&diff)
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        let off: Vec<String> = self.offset.iter().map(format_rational).collect();
        format!("rank {} at ({})", self.rank(), off.join(", "))
    }
}

/// All translation classes of the nonempty components of `A ∩ (B + γ)`,
/// `γ ∈ ℤ^N`, each with its multiplicity (number of cosets producing it).
pub fn intersect_classes(
    a: &AffineClass,
    b: &AffineClass,
) -> Result<Vec<(AffineClass, usize)>, ArrangementError> {
    let n = a.ambient_rank();
    if b.ambient_rank() != n {
        return Err(ArrangementError::AmbientMismatch(n, b.ambient_rank()));
    }
    let sum = lattice_sum(&[a.dir.clone(), b.dir.clone()])?;
    let sat = saturate(&sum);
    if sat.rank() != sum.rank() {
        return Err(ArrangementError::InfiniteOrbits {
            left: a.describe(),
            right: b.describe(),
        });
    }
    let chart = QuotientChart::new(&sat);
    let diff: Vec<BigRational> = b.offset.iter().zip(&a.offset).map(|(x, y)| x - y).collect();
    // γ₀ with diff + γ₀ ∈ V_A + V_B
    let Some(g) = chart.lift_translation(&diff) else {
        return Ok(Vec::new());
    };
    let dir = lattice_intersection(&a.dir, &b.dir)?;

    // coset representatives of Γ^A + Γ^B inside M, via the Hermite form of
    // the sum in M-coordinates
    let mut coords = Vec::with_capacity(sum.rank());
    for c in sum.basis().columns() {
        coords.push(sat.coordinates(&c).expect("sum lies in its saturation"));
    }
    let rel = hnf(&IntMatrix::from_columns(sat.rank(), &coords));
    let diag: Vec<BigInt> = (0..rel.rank())
        .map(|j| rel.basis().get(rel.pivots()[j], j).clone())
        .collect();
    let reps = box_points(&diag);

    let basis_a = RatMatrix::from_int(a.dir.basis());
    let stacked = a.dir.basis().hcat(&b.dir.basis().neg())?;
    let stacked = RatMatrix::from_int(&stacked);
    let mut found: BTreeMap<(usize, Vec<BigInt>, Vec<BigRational>), (AffineClass, usize)> =
        BTreeMap::new();
    for x in reps {
        let shift = sat.basis().mul_vec(&x)?;
        // γ = −g + shift, right-hand side o_B + γ − o_A = diff − g + shift
        let rhs: Vec<BigRational> = diff
            .iter()
            .zip(g.iter().zip(&shift))
            .map(|(d, (gi, si))| d - BigRational::from_integer(gi - si))
            .collect();
        let st = stacked
            .solve(&rhs)
            .expect("difference lies in the direction sum");
        let s = &st[..a.rank()];
        let step = basis_a.mul_vec(s);
        let point: Vec<BigRational> = a.offset.iter().zip(&step).map(|(o, t)| o + t).collect();
        let class = AffineClass::new(&dir, &point);
        found
            .entry(class.key())
            .and_modify(|e| e.1 += 1)
            .or_insert((class, 1));
    }
    Ok(found.into_values().collect())
}

/// All integer vectors `x` with `0 ≤ xᵢ < dᵢ`.
fn box_points(d: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for di in d {
        let m = usize::try_from(di).expect("coset index fits in memory");
        let mut next = Vec::with_capacity(out.len() * m);
        for p in &out {
            for v in 0..m {
                let mut q = p.clone();
                q.push(BigInt::from(v));
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// One incidence: the child class `child` (an index into a lower level) lies
/// in the parent's representative after translating by `-translation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub child: usize,
    pub translation: Vec<BigInt>,
}

/// The closed arrangement.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub ambient_rank: usize,
    pub codim: usize,
    pub nu: usize,
    /// `levels[r]` is `I_r`: classes of singular spaces of internal dimension `r`.
    pub levels: Vec<Vec<AffineClass>>,
    /// `incidence[k][i][r]` is `I_r^Θ` for `Θ = levels[k][i]` (`r < k`).
    pub incidence: Vec<Vec<Vec<Vec<Incidence>>>>,
    /// Labels of the scheme families that generate each top-level class.
    pub family_labels: Vec<Vec<String>>,
}

/// Upper bound on the number of classes before closure is abandoned.
pub const MAX_CLASSES: usize = 200_000;

/// Builds the intersection closure of the scheme's families.
pub fn close_arrangement(s: &SchemeSpec) -> Result<Arrangement, ArrangementError> {
    let n = s.ambient_rank();
    let nu = s.nu();
    let codim = s.codim();
    let mut table: BTreeMap<(usize, Vec<BigInt>, Vec<BigRational>), AffineClass> = BTreeMap::new();
    let mut labels: BTreeMap<(usize, Vec<BigInt>, Vec<BigRational>), Vec<String>> =
        BTreeMap::new();
    let mut generators = Vec::new();
    for f in s.families() {
        let c = AffineClass::new(&f.direction, &f.offset);
        if c.rank() % nu != 0 || c.rank() / nu + 1 != codim {
            return Err(ArrangementError::NonRational {
                left: f.label.clone(),
                right: f.label.clone(),
                rank: c.rank(),
                nu,
            });
        }
        labels.entry(c.key()).or_default().push(f.label.clone());
        if !table.contains_key(&c.key()) {
            table.insert(c.key(), c.clone());
            generators.push((f.label.clone(), c));
        }
    }
    let mut work: Vec<AffineClass> = generators.iter().map(|(_, c)| c.clone()).collect();
    while let Some(x) = work.pop() {
        for (label, f) in &generators {
            for (c, _) in intersect_classes(&x, f)? {
                if c.rank() >= x.rank() {
                    continue;
                }
                if c.rank() % nu != 0 {
                    return Err(ArrangementError::NonRational {
                        left: x.describe(),
                        right: label.clone(),
                        rank: c.rank(),
                        nu,
                    });
                }
                let key = c.key();
                if !table.contains_key(&key) {
                    table.insert(key, c.clone());
                    work.push(c);
                    if table.len() > MAX_CLASSES {
                        return Err(ArrangementError::DepthExceeded(MAX_CLASSES));
                    }
                }
            }
        }
    }
    let mut levels: Vec<Vec<AffineClass>> = vec![Vec::new(); codim];
    let mut family_labels = Vec::new();
    for (key, c) in table {
        let r = c.rank() / nu;
        if r + 1 == codim {
            family_labels.push(labels.remove(&key).unwrap_or_default());
        }
        levels[r].push(c);
    }
    let incidence = levels
        .iter()
        .enumerate()
        .map(|(k, parents)| {
            parents
                .iter()
                .map(|p| {
                    (0..k)
                        .map(|r| {
                            levels[r]
                                .iter()
                                .enumerate()
                                .filter_map(|(i, c)| {
                                    c.inside(p).map(|t| Incidence {
                                        child: i,
                                        translation: t,
                                    })
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(Arrangement {
        ambient_rank: n,
        codim,
        nu,
        levels,
        incidence,
        family_labels,
    })
}

/// Aggregate counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    /// `L_r = |I_r|`.
    pub l: Vec<usize>,
    /// `L_r^Θ` for every class: `per_class[k][i][r]`.
    pub per_class: Vec<Vec<Vec<usize>>>,
    /// `Σ_α L₁^α` over top-level classes α (codim 3).
    pub sum_l1_alpha: usize,
    /// `Σ_α L₀^α` over top-level classes.
    pub sum_l0_alpha: usize,
    /// `Σ_θ L₀^θ` over line classes θ ∈ I₁.
    pub sum_l0_theta: usize,
    /// `Σ_α Σ_{θ∈I₁^α} L₀^θ`.
    pub sum_alpha_theta_l0: usize,
}

impl Arrangement {
    pub fn count(&self, r: usize) -> usize {
        self.levels.get(r).map_or(0, Vec::len)
    }

    pub fn children(&self, k: usize, i: usize, r: usize) -> &[Incidence] {
        &self.incidence[k][i][r]
    }

    /// Index of the top dimension (`n − 1`).
    pub fn top(&self) -> usize {
        self.codim - 1
    }

    pub fn counts(&self) -> Counts {
        let per_class: Vec<Vec<Vec<usize>>> = self
            .incidence
            .iter()
            .map(|lvl| {
                lvl.iter()
                    .map(|p| p.iter().map(Vec::len).collect())
                    .collect()
            })
            .collect();
        let top = self.top();
        let l0_of = |k: usize, i: usize| per_class[k][i].first().copied().unwrap_or(0);
        let sum_l0_alpha = (0..self.count(top)).map(|i| l0_of(top, i)).sum();
        let sum_l1_alpha = if top >= 2 {
            (0..self.count(top)).map(|i| per_class[top][i][1]).sum()
        } else {
            0
        };
        let sum_l0_theta = if top >= 1 && self.codim >= 3 {
            (0..self.count(1)).map(|i| l0_of(1, i)).sum()
        } else if top >= 1 {
            (0..self.count(top)).map(|i| l0_of(top, i)).sum()
        } else {
            0
        };
        let sum_alpha_theta_l0 = if top >= 2 {
            (0..self.count(top))
                .map(|a| {
                    self.children(top, a, 1)
                        .iter()
                        .map(|inc| l0_of(1, inc.child))
                        .sum::<usize>()
                })
                .sum()
        } else {
            0
        };
        Counts {
            l: (0..self.codim).map(|r| self.count(r)).collect(),
            per_class,
            sum_l1_alpha,
            sum_l0_alpha,
            sum_l0_theta,
            sum_alpha_theta_l0,
        }
    }
}
