//! The integer matrices entering the long exact sequences.
//!
//! Every group in the sequences is either an exterior power `Λ_kΓ^Θ` of a
//! stabilizer, with the basis induced from the Hermite basis of `Γ^Θ`, or a
//! degree-zero group `H_0(Γ^Θ; C_0^0) ≅ Γ^Θ ⊕ ker ε^Θ`. For the latter, with
//! point representatives `y₀, …, y_{L−1}` of the `Γ^Θ`-orbits of points in
//! `Θ`, the element `Σ nᵢ gᵢ·y_{pᵢ}` (`Σ nᵢ = 0`) is identified with
//! `(Σ nᵢ gᵢ, Σ nᵢ e_{pᵢ})`; the basis is the basis of `Γ^Θ` followed by
//! `y_i − y_0`, `i ≥ 1`.

use num_bigint::BigInt;
use num_traits::One;

use crate::arrangement::Arrangement;
use crate::exact_linalg::{HermiteBasis, IntMatrix};
use crate::exterior::exterior_power_of_matrix;

/// A point of a source class, located in the target: it is the target's
/// point `target_point` translated by `shift` (target lattice coordinates).
#[derive(Clone, Debug)]
struct LocatedPoint {
    target_point: usize,
    shift: Vec<BigInt>,
}

/// One source summand of a degree-zero map.
#[derive(Clone, Debug)]
struct DegreeZeroSource {
    /// Basis of the source stabilizer in target lattice coordinates (columns).
    lattice: IntMatrix,
    points: Vec<LocatedPoint>,
}

/// Matrix of `⊕ (Γ^s ⊕ ker ε^s) → Γ^t ⊕ ker ε^t`.
fn degree_zero_map(sources: &[DegreeZeroSource], target_rank: usize, target_points: usize) -> IntMatrix {
    let rows = target_rank + target_points.saturating_sub(1);
    let cols: usize = sources
        .iter()
        .map(|s| s.lattice.cols() + s.points.len().saturating_sub(1))
        .sum();
    let mut m = IntMatrix::zeros(rows, cols);
    let point_row = |p: usize| if p == 0 { None } else { Some(target_rank + p - 1) };
    let mut col = 0;
    for s in sources {
        for j in 0..s.lattice.cols() {
            for i in 0..target_rank {
                m.set(i, col, s.lattice.get(i, j).clone());
            }
            col += 1;
        }
        if let Some(base) = s.points.first() {
            for p in &s.points[1..] {
                for i in 0..target_rank {
                    m.set(i, col, &p.shift[i] - &base.shift[i]);
                }
                if let Some(r) = point_row(p.target_point) {
                    let v = m.get(r, col) + BigInt::one();
                    m.set(r, col, v);
                }
                if let Some(r) = point_row(base.target_point) {
                    let v = m.get(r, col) - BigInt::one();
                    m.set(r, col, v);
                }
                col += 1;
            }
        }
    }
    m
}

fn negated(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

fn coordinates_matrix(outer: &HermiteBasis, inner: &HermiteBasis) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = inner
        .basis()
        .columns()
        .iter()
        .map(|c| outer.coordinates(c).expect("inner stabilizer lies in the outer one"))
        .collect();
    IntMatrix::from_columns(outer.rank(), &cols)
}

/// All maps of the sequences for codimension 2 and 3, indexed by exterior degree.
#[derive(Clone, Debug)]
pub struct DiagramMaps {
    pub ambient_rank: usize,
    pub nu: usize,
    pub codim: usize,
    /// `plane_embedding[α][k] = Λ_k(Γ^α ↪ Γ)` for the top-dimensional classes.
    pub plane_embedding: Vec<Vec<IntMatrix>>,
    /// `top_wedge[k]`: `⊕_α Λ_kΓ^α → Λ_kΓ` (`β_{k−1}` in codim 2, `φ′_{k−2}` in codim 3).
    pub top_wedge: Vec<IntMatrix>,
    /// `line_wedge[k]`: `⊕_θ Λ_kΓ^θ → Λ_kΓ` over line classes (`γ_{k−1}`; codim 3).
    pub line_wedge: Vec<IntMatrix>,
    /// `local_wedge[α][k]`: `⊕_{θ∈I₁^α} Λ_kΓ^θ → Λ_kΓ^α` in `Γ^α` coordinates (`β^α_{k−1}`).
    pub local_wedge: Vec<Vec<IntMatrix>>,
    /// `local_to_global[k]`: `⊕_α ⊕_{θ∈I₁^α} Λ_kΓ^θ → ⊕_θ Λ_kΓ^θ` (`j_{k−1}`).
    pub local_to_global: Vec<IntMatrix>,
    /// Degree-zero map out of the top classes: `β₀` (codim 2).
    pub top_degree_zero: IntMatrix,
    /// `γ₀` (codim 3).
    pub line_degree_zero: Option<IntMatrix>,
    /// `β^α_0` (codim 3).
    pub local_degree_zero: Vec<IntMatrix>,
}

impl DiagramMaps {
    /// Assembles every map from the arrangement's stabilizers and incidences.
    pub fn build(arr: &Arrangement) -> Self {
        let n = arr.ambient_rank;
        let top = arr.top();
        let planes = &arr.levels[top];
        let plane_embedding: Vec<Vec<IntMatrix>> = planes
            .iter()
            .map(|a| (0..=n).map(|k| exterior_power_of_matrix(a.dir.basis(), k)).collect())
            .collect();
        let top_wedge: Vec<IntMatrix> = (0..=n)
            .map(|k| {
                let blocks: Vec<IntMatrix> = plane_embedding.iter().map(|e| e[k].clone()).collect();
                let rows = crate::exterior::binomial(n, k);
                IntMatrix::hcat_all(rows, &blocks).expect("row counts agree")
            })
            .collect();

        // the top-class degree-zero map into H_0(Γ; C_0^0)
        let top_degree_zero = degree_zero_map(
            &planes
                .iter()
                .enumerate()
                .map(|(a, p)| DegreeZeroSource {
                    lattice: p.dir.basis().clone(),
                    points: arr
                        .children(top, a, 0)
                        .iter()
                        .map(|inc| LocatedPoint {
                            target_point: inc.child,
                            shift: negated(&inc.translation),
                        })
                        .collect(),
                })
                .collect::<Vec<_>>(),
            n,
            arr.count(0),
        );

        let mut maps = Self {
            ambient_rank: n,
            nu: arr.nu,
            codim: arr.codim,
            plane_embedding,
            top_wedge,
            line_wedge: Vec::new(),
            local_wedge: Vec::new(),
            local_to_global: Vec::new(),
            top_degree_zero,
            line_degree_zero: None,
            local_degree_zero: Vec::new(),
        };
        if arr.codim == 3 {
            maps.add_line_data(arr);
        }
        maps
    }

    fn add_line_data(&mut self, arr: &Arrangement) {
        let n = arr.ambient_rank;
        let planes = &arr.levels[2];
        let lines = &arr.levels[1];
        let line_embedding: Vec<Vec<IntMatrix>> = lines
            .iter()
            .map(|t| (0..=n).map(|k| exterior_power_of_matrix(t.dir.basis(), k)).collect())
            .collect();
        self.line_wedge = (0..=n)
            .map(|k| {
                let blocks: Vec<IntMatrix> = line_embedding.iter().map(|e| e[k].clone()).collect();
                IntMatrix::hcat_all(crate::exterior::binomial(n, k), &blocks).expect("rows agree")
            })
            .collect();

        // local wedges β^α and the block map j
        let line_dims: Vec<Vec<usize>> = lines
            .iter()
            .map(|t| (0..=n).map(|k| crate::exterior::binomial(t.rank(), k)).collect())
            .collect();
        let line_offsets: Vec<Vec<usize>> = (0..=n)
            .map(|k| {
                let mut acc = 0;
                line_dims
                    .iter()
                    .map(|d| {
                        let o = acc;
                        acc += d[k];
                        o
                    })
                    .collect()
            })
            .collect();
        let global_dim: Vec<usize> = (0..=n).map(|k| line_dims.iter().map(|d| d[k]).sum()).collect();
        let mut local_wedge = Vec::with_capacity(planes.len());
        let mut j_blocks: Vec<Vec<IntMatrix>> = vec![Vec::new(); n + 1];
        for (a, plane) in planes.iter().enumerate() {
            let incs = arr.children(2, a, 1);
            let coords: Vec<IntMatrix> = incs
                .iter()
                .map(|inc| coordinates_matrix(&plane.dir, &lines[inc.child].dir))
                .collect();
            let per_k: Vec<IntMatrix> = (0..=n)
                .map(|k| {
                    let blocks: Vec<IntMatrix> =
                        coords.iter().map(|c| exterior_power_of_matrix(c, k)).collect();
                    IntMatrix::hcat_all(crate::exterior::binomial(plane.rank(), k), &blocks)
                        .expect("rows agree")
                })
                .collect();
            local_wedge.push(per_k);
            for (k, blocks) in j_blocks.iter_mut().enumerate() {
                let width: usize = incs.iter().map(|inc| line_dims[inc.child][k]).sum();
                let mut m = IntMatrix::zeros(global_dim[k], width);
                let mut col = 0;
                for inc in incs {
                    for e in 0..line_dims[inc.child][k] {
                        m.set(line_offsets[k][inc.child] + e, col, BigInt::one());
                        col += 1;
                    }
                }
                blocks.push(m);
            }
        }
        self.local_wedge = local_wedge;
        self.local_to_global = j_blocks
            .iter()
            .enumerate()
            .map(|(k, b)| IntMatrix::hcat_all(global_dim[k], b).expect("rows agree"))
            .collect();

        // γ₀
        self.line_degree_zero = Some(degree_zero_map(
            &lines
                .iter()
                .enumerate()
                .map(|(t, l)| DegreeZeroSource {
                    lattice: l.dir.basis().clone(),
                    points: arr
                        .children(1, t, 0)
                        .iter()
                        .map(|inc| LocatedPoint {
                            target_point: inc.child,
                            shift: negated(&inc.translation),
                        })
                        .collect(),
                })
                .collect::<Vec<_>>(),
            n,
            arr.count(0),
        ));

        // β^α_0: a local line θ' = θ − s carries the points o_x − t − s, which
        // are the plane's local point o_x − u shifted by u − t − s ∈ Γ^α
        self.local_degree_zero = planes
            .iter()
            .enumerate()
            .map(|(a, plane)| {
                let plane_points = arr.children(2, a, 0);
                let local_index = |x: usize| {
                    plane_points
                        .iter()
                        .position(|p| p.child == x)
                        .expect("points of a line in a plane lie in the plane")
                };
                let sources: Vec<DegreeZeroSource> = arr
                    .children(2, a, 1)
                    .iter()
                    .map(|line_inc| {
                        let s = &line_inc.translation;
                        let points = arr
                            .children(1, line_inc.child, 0)
                            .iter()
                            .map(|pt| {
                                let k = local_index(pt.child);
                                let u = &plane_points[k].translation;
                                let g: Vec<BigInt> = (0..n)
                                    .map(|i| &u[i] - &pt.translation[i] - &s[i])
                                    .collect();
                                LocatedPoint {
                                    target_point: k,
                                    shift: plane
                                        .dir
                                        .coordinates(&g)
                                        .expect("shift lies in the plane stabilizer"),
                                }
                            })
                            .collect();
                        DegreeZeroSource {
                            lattice: coordinates_matrix(&plane.dir, &lines[line_inc.child].dir),
                            points,
                        }
                    })
                    .collect();
                degree_zero_map(&sources, plane.rank(), plane_points.len())
            })
            .collect();
    }

    /// Checks the commuting squares `ι^α ∘ β^α = γ ∘ j^α` in every degree.
    pub fn squares_commute(&self) -> bool {
        if self.codim != 3 {
            return true;
        }
        let n = self.ambient_rank;
        (0..=n).all(|k| {
            let lhs_blocks: Vec<IntMatrix> = self
                .plane_embedding
                .iter()
                .zip(&self.local_wedge)
                .map(|(emb, w)| emb[k].mul(&w[k]).expect("shapes agree"))
                .collect();
            let lhs = IntMatrix::hcat_all(crate::exterior::binomial(n, k), &lhs_blocks)
                .expect("rows agree");
            let rhs = self.line_wedge[k]
                .mul(&self.local_to_global[k])
                .expect("shapes agree");
            lhs == rhs
        })
    }

    /// `⊕_α β^α_{k−1}` as one block-diagonal matrix.
    pub fn local_wedge_block(&self, k: usize) -> IntMatrix {
        let blocks: Vec<IntMatrix> = self.local_wedge.iter().map(|w| w[k].clone()).collect();
        IntMatrix::block_diagonal(&blocks)
    }

    /// `⊕_α Λ_kΓ^α → Λ_kΓ` restricted to nothing: the plain inclusion sum.
    pub fn plane_inclusion(&self, k: usize) -> &IntMatrix {
        &self.top_wedge[k]
    }

    /// Whether a matrix is surjective over ℤ.
    pub fn is_onto(m: &IntMatrix) -> bool {
        let g = crate::exact_linalg::cokernel(m);
        g.is_zero()
    }
}

/// Dimension of `ker ε`-style difference lattices: `max(L − 1, 0)`.
pub fn difference_rank(points: usize) -> usize {
    points.saturating_sub(1)
}
