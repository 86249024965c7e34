//! The torus-arrangement route.
//!
//! Every class `Θ` of the arrangement is a subtorus `T_Θ = (o_Θ + V_Θ)/Γ^Θ` of
//! `𝕋 = ℝ^N/ℤ^N`; their union is `𝔸`. The classes ordered by containment form
//! a poset whose nerve resolves `𝔸` (the layers through a point have a least
//! element), so there is a spectral sequence with
//! `E¹_{p,q} = ⊕_{X₀<…<X_p} H_q(T_{X₀}) = ⊕ Λ_qΓ^{X₀}` converging to `H_*(𝔸)`.
//! The differential is `Σ_i (−1)^i d_i`, where `d_0` drops the bottom element
//! (inclusion of its torus into the next one) and the other faces are
//! identities. The cone of `𝔸 → 𝕋` has homology `H^{N−r}(Ω)` in degree `r`:
//!
//! `0 → coker(H_r(𝔸) → Λ_rΓ) → H^{N−r}(Ω) → ker(H_{r−1}(𝔸) → Λ_{r−1}Γ) → 0`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::cohomology::extension::torsion_candidates;
use crate::cohomology::{CohomologyError, CohomologyResult, DegreeResult, Diagnostics, Status};
use crate::exact_linalg::{
    cokernel, hnf, kernel_basis, kernel_lattice, lattice_quotient, AbelianGroup, HermiteBasis,
    IntMatrix, RatMatrix,
};
use crate::exterior::{binomial, exterior_power_map, exterior_power_of_matrix, generated_rank, wedge, WedgeIndex};

/// A class of the arrangement: `(level, index)`.
pub type Layer = (usize, usize);

/// The first page: chains of the layer poset and the `d¹` matrices.
#[derive(Clone, Debug)]
pub struct MVPage {
    pub ambient_rank: usize,
    /// `chains[p]`: strictly increasing chains of `p + 1` layers, bottom first.
    pub chains: Vec<Vec<Vec<Layer>>>,
    /// `ranks[p][q] = rk E¹_{p,q}`.
    pub ranks: Vec<Vec<usize>>,
    /// `d1[p][q]: E¹_{p,q} → E¹_{p−1,q}` for `p ≥ 1` (`d1[0]` is empty).
    pub d1: Vec<Vec<IntMatrix>>,
}

fn layer_basis<'a>(arr: &'a Arrangement, l: Layer) -> &'a HermiteBasis {
    &arr.levels[l.0][l.1].dir
}

fn coordinates_matrix(outer: &HermiteBasis, inner: &HermiteBasis) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> = inner
        .basis()
        .columns()
        .iter()
        .map(|c| outer.coordinates(c).expect("stabilizers are nested"))
        .collect();
    IntMatrix::from_columns(outer.rank(), &cols)
}

/// Builds `E¹` and `d¹` for the layer poset of any arrangement.
pub fn build_e1(arr: &Arrangement) -> Result<MVPage, CohomologyError> {
    let n = arr.ambient_rank;
    let levels = arr.codim;
    // chains of length 1, 2, 3, … from the incidence lists
    let mut chains: Vec<Vec<Vec<Layer>>> = vec![Vec::new()];
    for (lvl, classes) in arr.levels.iter().enumerate() {
        for i in 0..classes.len() {
            chains[0].push(vec![(lvl, i)]);
        }
    }
    loop {
        let last = chains.last().expect("nonempty");
        let mut next = Vec::new();
        for c in last {
            let bottom = c[0];
            // prepend every child of the current bottom
            for r in 0..bottom.0 {
                for inc in arr.children(bottom.0, bottom.1, r) {
                    let mut nc = Vec::with_capacity(c.len() + 1);
                    nc.push((r, inc.child));
                    nc.extend_from_slice(c);
                    next.push(nc);
                }
            }
        }
        if next.is_empty() || chains.len() == levels {
            break;
        }
        next.sort();
        chains.push(next);
    }
    let top_q = n;
    let ranks: Vec<Vec<usize>> = chains
        .iter()
        .map(|col| {
            (0..=top_q)
                .map(|q| col.iter().map(|c| binomial(layer_basis(arr, c[0]).rank(), q)).sum())
                .collect()
        })
        .collect();
    let mut d1: Vec<Vec<IntMatrix>> = vec![Vec::new()];
    for p in 1..chains.len() {
        let target_offsets: Vec<HashMap<&Vec<Layer>, usize>> = (0..=top_q)
            .map(|q| {
                let mut acc = 0;
                chains[p - 1]
                    .iter()
                    .map(|c| {
                        let o = acc;
                        acc += binomial(layer_basis(arr, c[0]).rank(), q);
                        (c, o)
                    })
                    .collect()
            })
            .collect();
        let mut per_q = Vec::with_capacity(top_q + 1);
        for q in 0..=top_q {
            let mut m = IntMatrix::zeros(ranks[p - 1][q], ranks[p][q]);
            let mut col = 0;
            for c in &chains[p] {
                let bottom_rank = layer_basis(arr, c[0]).rank();
                let width = binomial(bottom_rank, q);
                if width == 0 {
                    continue;
                }
                for i in 0..c.len() {
                    let mut face = c.clone();
                    face.remove(i);
                    let row = target_offsets[q][&face];
                    let block = if i == 0 {
                        exterior_power_of_matrix(
                            &coordinates_matrix(layer_basis(arr, c[1]), layer_basis(arr, c[0])),
                            q,
                        )
                    } else {
                        IntMatrix::identity(width)
                    };
                    let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    for a in 0..block.rows() {
                        for b in 0..block.cols() {
                            let v = block.get(a, b);
                            if !v.is_zero() {
                                let cur = m.get(row + a, col + b) + v * &sign;
                                m.set(row + a, col + b, cur);
                            }
                        }
                    }
                }
                col += width;
            }
            per_q.push(m);
        }
        d1.push(per_q);
    }
    let page = MVPage {
        ambient_rank: n,
        chains,
        ranks,
        d1,
    };
    if !page.squares_to_zero() {
        return Err(CohomologyError::Inconsistent("d¹ ∘ d¹ ≠ 0".into()));
    }
    Ok(page)
}

impl MVPage {
    pub fn columns(&self) -> usize {
        self.chains.len()
    }

    fn d(&self, p: usize, q: usize) -> Option<&IntMatrix> {
        self.d1.get(p).and_then(|v| v.get(q))
    }

    pub fn squares_to_zero(&self) -> bool {
        (2..self.columns()).all(|p| {
            (0..self.ranks[p].len()).all(|q| {
                self.d1[p - 1][q]
                    .mul(&self.d1[p][q])
                    .map(|m| m.is_zero())
                    .unwrap_or(false)
            })
        })
    }

    /// `E²_{p,q} = ker d¹_{p,q} / im d¹_{p+1,q}`.
    pub fn e2(&self, p: usize, q: usize) -> Result<AbelianGroup, CohomologyError> {
        let dim = self.ranks[p][q];
        let cycles = match self.d(p, q) {
            Some(m) => kernel_lattice(m),
            None => HermiteBasis::full(dim),
        };
        let boundaries = match self.d(p + 1, q) {
            Some(m) => hnf(m),
            None => HermiteBasis::zero(dim),
        };
        Ok(lattice_quotient(&cycles, &boundaries)?)
    }

    /// `Σ_{p+q=n} (−1)^n rk E¹_{p,q}` summed over `n`.
    pub fn euler_e1(&self) -> i64 {
        let mut e = 0i64;
        for (p, col) in self.ranks.iter().enumerate() {
            for (q, &r) in col.iter().enumerate() {
                let sign = if (p + q) % 2 == 0 { 1 } else { -1 };
                e += sign * r as i64;
            }
        }
        e
    }
}

/// `H_*(𝔸)` assembled from `E² = E^∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementHomology {
    /// `e2[p][q]`.
    pub e2: Vec<Vec<AbelianGroup>>,
    /// `rk H_n(𝔸)`.
    pub betti: Vec<usize>,
    /// Torsion of `H_n(𝔸)` where it is determined by the page, and the
    /// torsion-carrying positions otherwise.
    pub torsion: Vec<AbelianGroup>,
    /// Whether some `E²_{p,q}` with `p > 0` or `n ≠ 2` has torsion (a
    /// filtration extension would then be unresolved).
    pub ambiguous: Vec<bool>,
}

/// Homology of the arrangement from the page (the page degenerates at `E²`
/// rationally because every differential `d^r`, `r ≥ 2`, starts in column
/// `p ≥ 2` only in row 0 and its target is torsion-free).
pub fn homology_of_a(page: &MVPage) -> Result<ArrangementHomology, CohomologyError> {
    let n = page.ambient_rank;
    let mut e2 = Vec::with_capacity(page.columns());
    for p in 0..page.columns() {
        let mut col = Vec::with_capacity(n + 1);
        for q in 0..=n {
            col.push(page.e2(p, q)?);
        }
        e2.push(col);
    }
    let mut betti = vec![0; n + 1];
    let mut torsion = vec![AbelianGroup::zero(); n + 1];
    let mut ambiguous = vec![false; n + 1];
    for (p, col) in e2.iter().enumerate() {
        for (q, g) in col.iter().enumerate() {
            if p + q > n {
                continue;
            }
            betti[p + q] += g.free_rank;
            if !g.is_free() {
                torsion[p + q] = torsion[p + q].direct_sum(&g.torsion_part());
                // torsion off column 0 sits in a filtration extension; torsion in
                // column 0 may still be hit by a higher differential from p ≥ 2
                let hit = (2..e2.len()).any(|s| s > p && q + 1 + p >= s && !e2[s][q + 1 + p - s].is_zero());
                if p > 0 || hit {
                    ambiguous[p + q] = true;
                }
            }
        }
    }
    Ok(ArrangementHomology {
        e2,
        betti,
        torsion,
        ambiguous,
    })
}

/// Per-degree data of `α_*: H_r(𝔸) → Λ_rΓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaDegree {
    pub degree: usize,
    /// `ρ_r`: rank of the image (the span of `Λ_rΓ^Θ` over all classes).
    pub image_rank: usize,
    /// `s_r = C(N,r) − ρ_r`.
    pub s: usize,
    /// `f_r = rk H_r(𝔸) − ρ_r`.
    pub f: usize,
    /// `coker α_*` when the integral image is known.
    pub cokernel: Option<AbelianGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaData {
    pub degrees: Vec<AlphaDegree>,
    pub arrangement_homology: ArrangementHomology,
}

fn rational(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// The correction `S(a, b) ∈ Λ₃ℚ⁴` for the 2-torus spanned by `a, b` in
/// the standard 4-torus: the cubical 3-chain sweeping the coordinate
/// decomposition of `a ∧ b` onto the straight torus.
fn sweep_correction(a: &[BigInt], b: &[BigInt]) -> Vec<BigRational> {
    let m = a.len();
    let idx = WedgeIndex::new(m, 3);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let e = |i: usize| -> Vec<BigRational> {
        (0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()
    };
    let bq: Vec<BigRational> = b.iter().map(rational).collect();
    let mut out = vec![BigRational::zero(); idx.len()];
    let mut add = |v: Vec<BigRational>, c: BigRational| {
        for (o, x) in out.iter_mut().zip(v) {
            *o += x * &c;
        }
    };
    for i in 0..m {
        for k in i + 1..m {
            let c = -(&half) * rational(&(&a[i] * &a[k]));
            if !c.is_zero() {
                add(wedge(m, &[e(i), e(k), bq.clone()]), c);
            }
        }
    }
    for i in 0..m {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..m {
            for l in j + 1..m {
                let c = &half * rational(&(&a[i] * &b[j] * &b[l]));
                if !c.is_zero() {
                    add(wedge(m, &[e(i), e(j), e(l)]), c);
                }
            }
        }
    }
    out
}

/// Images in `Λ₃Γ` of lifts of a basis of `ker d¹_{1,2}` (codim 3, `ν = 2`).
fn lifted_images(arr: &Arrangement, page: &MVPage) -> Result<Vec<Vec<BigInt>>, CohomologyError> {
    let n = arr.ambient_rank;
    let d = &page.d1[1][2];
    let kernel = kernel_basis(d);
    // the column of each (line < plane) chain in E¹_{1,2}
    let mut col_of: Vec<(Layer, Layer)> = Vec::new();
    for c in &page.chains[1] {
        let w = binomial(layer_basis(arr, c[0]).rank(), 2);
        for _ in 0..w {
            col_of.push((c[0], c[1]));
        }
    }
    let mut images = Vec::with_capacity(kernel.cols());
    for x in kernel.columns() {
        let mut acc = vec![BigRational::zero(); binomial(n, 3)];
        for (j, m) in x.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let (line, plane) = col_of[j];
            if line.0 != 1 || plane.0 != 2 {
                return Err(CohomologyError::Inconsistent(
                    "degree-2 chains must be line < plane".into(),
                ));
            }
            let lcls = &arr.levels[1][line.1];
            let pcls = &arr.levels[2][plane.1];
            let shift = &arr
                .children(2, plane.1, 1)
                .iter()
                .find(|i| i.child == line.1)
                .expect("incidence recorded")
                .translation;
            let position: Vec<BigRational> = (0..n)
                .map(|i| &lcls.offset[i] - rational(&shift[i]) - &pcls.offset[i])
                .collect();
            let basis = lcls.dir.basis();
            let a = basis.column(0);
            let b = basis.column(1);
            let sweep = wedge(
                n,
                &[position, a.iter().map(rational).collect(), b.iter().map(rational).collect()],
            );
            let ac = pcls.dir.coordinates(&a).expect("line inside plane");
            let bc = pcls.dir.coordinates(&b).expect("line inside plane");
            let local = RatMatrix::from_int(&exterior_power_of_matrix(pcls.dir.basis(), 3))
                .mul_vec(&sweep_correction(&ac, &bc));
            let mq = rational(m);
            for (o, (s, l)) in acc.iter_mut().zip(sweep.iter().zip(&local)) {
                *o += (s + l) * &mq;
            }
        }
        let mut v = Vec::with_capacity(acc.len());
        for c in acc {
            if !c.denom().is_one() {
                return Err(CohomologyError::Inconsistent(
                    "lifted degree-3 class has a non-integral image".into(),
                ));
            }
            v.push(c.numer().clone());
        }
        images.push(v);
    }
    Ok(images)
}

fn plane_wedges(arr: &Arrangement, r: usize) -> IntMatrix {
    let top = arr.top();
    let blocks: Vec<IntMatrix> = arr.levels[top]
        .iter()
        .map(|c| exterior_power_of_matrix(c.dir.basis(), r))
        .collect();
    IntMatrix::hcat_all(binomial(arr.ambient_rank, r), &blocks).expect("rows agree")
}

/// Integral image of `α_*` in degree `r ≥ codim` as generators (columns).
fn integral_image(arr: &Arrangement, page: &MVPage, r: usize) -> Result<IntMatrix, CohomologyError> {
    let base = plane_wedges(arr, r);
    if arr.codim == 3 && r == 3 {
        let lifts = lifted_images(arr, page)?;
        if lifts.is_empty() {
            return Ok(base);
        }
        let extra = IntMatrix::from_columns(binomial(arr.ambient_rank, 3), &lifts);
        return Ok(base.hcat(&extra)?);
    }
    Ok(base)
}

/// `coker(α_*: H_r(𝔸) → Λ_rΓ)` for `r ≥ codim`.
pub fn geometric_cokernel(arr: &Arrangement, r: usize) -> Result<AbelianGroup, CohomologyError> {
    check_supported(arr)?;
    let page = build_e1(arr)?;
    Ok(cokernel(&integral_image(arr, &page, r)?))
}

fn check_supported(arr: &Arrangement) -> Result<(), CohomologyError> {
    match (arr.codim, arr.nu) {
        (2, _) | (3, 2) => Ok(()),
        (3, nu) => Err(CohomologyError::UnsupportedNu(nu)),
        (c, _) => Err(CohomologyError::UnsupportedCodim(c)),
    }
}

fn all_class_span(arr: &Arrangement, r: usize) -> usize {
    if r == 0 {
        return usize::from(arr.levels.iter().any(|l| !l.is_empty()));
    }
    let maps: Vec<_> = arr
        .levels
        .iter()
        .flatten()
        .filter(|c| c.rank() >= r)
        .map(|c| exterior_power_map(&c.dir, r).expect("degree within range"))
        .collect();
    generated_rank(&maps).expect("compatible maps")
}

/// `α_*` data for every degree.
pub fn alpha_data(arr: &Arrangement, page: &MVPage) -> Result<AlphaData, CohomologyError> {
    let n = arr.ambient_rank;
    let h = homology_of_a(page)?;
    let mut degrees = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let rho = all_class_span(arr, r);
        let cok = if r >= arr.codim {
            Some(cokernel(&integral_image(arr, page, r)?))
        } else {
            None
        };
        degrees.push(AlphaDegree {
            degree: r,
            image_rank: rho,
            s: binomial(n, r) - rho,
            f: h.betti[r]
                .checked_sub(rho)
                .ok_or_else(|| CohomologyError::Inconsistent(format!("α_* in degree {r} has rank above rk H_{r}(𝔸)")))?,
            cokernel: cok,
        });
    }
    Ok(AlphaData {
        degrees,
        arrangement_homology: h,
    })
}

/// The cohomology of the hull from the torus arrangement.
pub fn alpha_assembly(name: &str, arr: &Arrangement) -> Result<(AlphaData, CohomologyResult), CohomologyError> {
    check_supported(arr)?;
    let n = arr.ambient_rank;
    let page = build_e1(arr)?;
    let data = alpha_data(arr, &page)?;
    let h = &data.arrangement_homology;
    // the degrees feeding H^0 … H^d must have determined torsion
    for k in arr.codim - 1..=n {
        if h.ambiguous[k] {
            return Err(CohomologyError::Inconsistent(format!(
                "torsion {} in H_{k} of the torus arrangement is not determined by the page",
                h.torsion[k]
            )));
        }
    }
    if h.betti[0] != 1 {
        return Err(CohomologyError::Inconsistent("the torus arrangement is not connected".into()));
    }
    let d = n - arr.codim;
    let mut degrees = Vec::with_capacity(d + 1);
    let mut extension_data = Vec::new();
    for s in 0..=d {
        let r = n - s;
        let alpha = &data.degrees[r];
        let sub = alpha.cokernel.clone().expect("integral image known for r ≥ codim");
        let quotient_free = data.degrees[r - 1].f;
        let quotient_torsion = &h.torsion[r - 1];
        if quotient_torsion.is_zero() {
            degrees.push(DegreeResult::exact(s, sub.direct_sum(&AbelianGroup::free(quotient_free))));
        } else {
            let torsions = torsion_candidates(&[sub.clone()], quotient_torsion);
            let free = sub.free_rank + quotient_free;
            extension_data.push((format!("coker α_* in degree {r} (sub of H{})", crate::cohomology::superscript(s)), sub));
            extension_data.push((
                format!("ker α_* in degree {} (quotient of H{})", r - 1, crate::cohomology::superscript(s)),
                AbelianGroup::free(quotient_free).direct_sum(quotient_torsion),
            ));
            degrees.push(DegreeResult::from_candidates(
                s,
                torsions
                    .iter()
                    .map(|t| AbelianGroup::free(free).direct_sum(t))
                    .collect(),
            ));
        }
    }
    let diagnostics = Diagnostics {
        extension_data,
        ..Diagnostics::default()
    };
    Ok((data, CohomologyResult::new(name, "mv", arr, degrees, diagnostics)))
}

/// Outcome of comparing the two routes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crosscheck {
    pub agree: bool,
    pub messages: Vec<String>,
    /// Per degree, groups allowed by both routes.
    pub common: Vec<Vec<AbelianGroup>>,
}

/// Free ranks must agree everywhere, torsion wherever both routes are exact,
/// and the candidate sets must intersect.
pub fn route_crosscheck(fhk: &CohomologyResult, mv: &CohomologyResult) -> Crosscheck {
    let mut messages = Vec::new();
    let mut common = Vec::new();
    if fhk.degrees.len() != mv.degrees.len() {
        return Crosscheck {
            agree: false,
            messages: vec!["different degree ranges".into()],
            common,
        };
    }
    for (a, b) in fhk.degrees.iter().zip(&mv.degrees) {
        if a.free_rank != b.free_rank {
            messages.push(format!(
                "H{}: free ranks differ ({} vs {})",
                crate::cohomology::superscript(a.degree),
                a.free_rank,
                b.free_rank
            ));
        }
        let pa = a.possibilities();
        let pb = b.possibilities();
        let both: Vec<AbelianGroup> = pa.iter().filter(|g| pb.contains(g)).cloned().collect();
        if a.status == Status::Exact && b.status == Status::Exact && pa != pb {
            messages.push(format!(
                "H{}: {} vs {}",
                crate::cohomology::superscript(a.degree),
                a.display(),
                b.display()
            ));
        } else if both.is_empty() {
            messages.push(format!(
                "H{}: candidate sets {} and {} are disjoint",
                crate::cohomology::superscript(a.degree),
                a.display(),
                b.display()
            ));
        }
        common.push(both);
    }
    Crosscheck {
        agree: messages.is_empty(),
        messages,
        common,
    }
}
