//! Derivation of the built-in schemes from point-group data.
//!
//! The frozen files under `schemes/` were produced by [`derive_builtin`]; a
//! test asserts the two stay identical.
//!
//! **Dihedral family.** `Γ = ℤ[ζ_m]` with basis `1, ζ, …, ζ^{φ(m)−1}`.
//! Multiplication by `ζ` is the companion matrix of the cyclotomic polynomial
//! and complex conjugation `x ↦ x̄` is integral. The lattice of translations
//! parallel to the internal line through `ζ^i` is the fixed lattice of the
//! reflection `x ↦ ζ^{2i} x̄`; the line through `ζ^i(1+ζ)` (bisecting two
//! neighbouring roots) is fixed by `x ↦ ζ^{2i+1} x̄`.
//!
//! **Icosahedral family.** `Γ_P = ℤ⁶` on the six icosahedron vertices
//! `(0,±1,τ), (±1,τ,0), (±τ,0,1)`; the internal image of a basis vector is
//! its Galois conjugate (`τ ↦ 1 − τ`). A singular plane perpendicular to an
//! internal axis `a` has direction lattice `{x : Σ xᵢ⟨v̄ᵢ, a⟩ = 0}`, two
//! rational equations after splitting into rational and `√5` parts. Axes of
//! the conjugate icosahedron: 6 five-fold (vertices), 10 three-fold (face
//! centres), 15 two-fold (edge midpoints). `Γ_F` is the index-2 sublattice of
//! even coordinate sum, used in its own Hermite coordinates.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{SchemeError, SchemeSpec, SingularFamily};
use crate::exact_linalg::{hnf, kernel_lattice, HermiteBasis, IntMatrix, RatMatrix};

/// The lattice fixed by an integral linear map: `ker(m − I)`.
pub fn fixed_sublattice(m: &IntMatrix) -> Result<HermiteBasis, SchemeError> {
    if !m.is_square() {
        return Err(SchemeError::Invalid(format!(
            "fixed sublattice of a non-square {}×{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let d = m
        .add(&IntMatrix::identity(m.rows()).neg())
        .expect("same shape");
    Ok(kernel_lattice(&d))
}

// --- cyclotomic data ---

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both little-endian, den monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&x| x == 0), "inexact polynomial division");
    quot
}

/// Little-endian coefficients of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: usize) -> Vec<i64> {
    let mut p = vec![0i64; m + 1];
    p[0] = -1;
    p[m] = 1;
    for d in 1..m {
        if m % d == 0 {
            p = poly_div_exact(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

/// The ring `ℤ[ζ_m]` in the power basis.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    pub order: usize,
    pub degree: usize,
    /// Multiplication by `ζ`.
    pub zeta: IntMatrix,
    /// Complex conjugation.
    pub conjugation: IntMatrix,
}

impl Cyclotomic {
    pub fn new(order: usize) -> Self {
        let poly = cyclotomic_polynomial(order);
        let degree = poly.len() - 1;
        let mut cols = Vec::with_capacity(degree);
        for i in 0..degree {
            let mut c = vec![0i64; degree];
            if i + 1 < degree {
                c[i + 1] = 1;
            } else {
                for (j, slot) in c.iter_mut().enumerate() {
                    *slot = -poly[j];
                }
            }
            cols.push(c);
        }
        let zeta = IntMatrix::from_columns_i64(degree, &cols);
        let mut out = Self {
            order,
            degree,
            conjugation: IntMatrix::identity(degree),
            zeta,
        };
        let conj_cols: Vec<Vec<BigInt>> = (0..degree)
            .map(|i| out.power((order - i) % order).column(0))
            .collect();
        out.conjugation = IntMatrix::from_columns(degree, &conj_cols);
        out
    }

    /// Multiplication by `ζ^k`.
    pub fn power(&self, k: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(self.degree);
        for _ in 0..k % self.order {
            m = self.zeta.mul(&m).expect("square");
        }
        m
    }

    /// The reflection `x ↦ ζ^k x̄`.
    pub fn reflection(&self, k: usize) -> IntMatrix {
        self.power(k).mul(&self.conjugation).expect("square")
    }

    /// Direction lattice of the line through `ζ^i`.
    pub fn vertex_line(&self, i: usize) -> HermiteBasis {
        fixed_sublattice(&self.reflection(2 * i)).expect("square")
    }

    /// Direction lattice of the line through `ζ^i(1 + ζ)`.
    pub fn mid_line(&self, i: usize) -> HermiteBasis {
        fixed_sublattice(&self.reflection(2 * i + 1)).expect("square")
    }

    /// Multiplication by an element given in the power basis.
    pub fn multiplication(&self, element: &[i64]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.degree, self.degree);
        for (k, &c) in element.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = self.power(k);
            let scaled: Vec<BigInt> = p.entries().iter().map(|x| x * c).collect();
            m = m
                .add(&IntMatrix::new(self.degree, self.degree, scaled).expect("shape"))
                .expect("same shape");
        }
        m
    }
}

fn zero_offset(n: usize) -> Vec<BigRational> {
    vec![BigRational::zero(); n]
}

/// Lines of the given kinds (`'a'`: through roots, `'b'`: bisecting roots).
fn dihedral_scheme(name: &str, order: usize, kinds: &[char]) -> SchemeSpec {
    let ring = Cyclotomic::new(order);
    let mut families = Vec::new();
    for &kind in kinds {
        for i in 0..order / 2 {
            let dir = match kind {
                'a' => ring.vertex_line(i),
                _ => ring.mid_line(i),
            };
            families.push(SingularFamily::new(
                format!("{kind}{i}"),
                dir,
                &zero_offset(ring.degree),
            ));
        }
    }
    SchemeSpec::new(name, ring.degree, 2, families).expect("catalog scheme is well formed")
}

/// The generalised Penrose scheme with shift parameter `gamma`: two lines
/// through `−γζ` and `γ(ζ + ζ²)` parallel to the real axis, and their images
/// under the five-fold rotation `ζ²`.
pub fn generalized_penrose(gamma: &BigRational) -> SchemeSpec {
    let ring = Cyclotomic::new(10);
    let n = ring.degree;
    let mut base_offsets = vec![zero_offset(n), zero_offset(n)];
    base_offsets[0][1] = -gamma.clone();
    base_offsets[1][1] = gamma.clone();
    base_offsets[1][2] = gamma.clone();
    let base_dir = ring.vertex_line(0);
    let mut families = Vec::new();
    for j in 0..5 {
        let rot = ring.power(2 * j);
        let dir = hnf(&rot.mul(base_dir.basis()).expect("shape"));
        let rot_q = RatMatrix::from_int(&rot);
        for (s, o) in base_offsets.iter().enumerate() {
            families.push(SingularFamily::new(
                format!("r{j}{}", ["m", "p"][s]),
                dir.clone(),
                &rot_q.mul_vec(o),
            ));
        }
    }
    SchemeSpec::new("generalized_penrose", n, 2, families).expect("catalog scheme is well formed")
}

/// Default shift parameter of the generalised Penrose scheme.
pub fn default_gamma() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(3))
}

// --- the golden field ℚ(√5) ---

/// `a + b√5` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Golden {
    pub a: BigRational,
    pub b: BigRational,
}

impl Golden {
    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn int(a: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(a)))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    /// The golden ratio `τ = (1 + √5)/2`.
    pub fn tau() -> Self {
        let h = BigRational::new(BigInt::one(), BigInt::from(2));
        Self { a: h.clone(), b: h }
    }

    /// Galois conjugate `a − b√5`.
    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Floating approximation, used only for ordering distinct exact values.
    pub fn approx(&self) -> f64 {
        self.a.to_f64().unwrap_or(0.0) + self.b.to_f64().unwrap_or(0.0) * 5f64.sqrt()
    }
}

impl Add for &Golden {
    type Output = Golden;
    fn add(self, o: &Golden) -> Golden {
        Golden {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
}

impl Sub for &Golden {
    type Output = Golden;
    fn sub(self, o: &Golden) -> Golden {
        Golden {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
}

impl Mul for &Golden {
    type Output = Golden;
    fn mul(self, o: &Golden) -> Golden {
        let five = BigRational::from_integer(BigInt::from(5));
        Golden {
            a: &self.a * &o.a + five * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for &Golden {
    type Output = Golden;
    fn neg(self) -> Golden {
        Golden {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

type Vec3 = [Golden; 3];

fn dot(u: &Vec3, v: &Vec3) -> Golden {
    let mut acc = Golden::zero();
    for i in 0..3 {
        acc = &acc + &(&u[i] * &v[i]);
    }
    acc
}

fn vsub(u: &Vec3, v: &Vec3) -> Vec3 {
    [&u[0] - &v[0], &u[1] - &v[1], &u[2] - &v[2]]
}

fn vadd(u: &Vec3, v: &Vec3) -> Vec3 {
    [&u[0] + &v[0], &u[1] + &v[1], &u[2] + &v[2]]
}

fn vneg(u: &Vec3) -> Vec3 {
    [-&u[0], -&u[1], -&u[2]]
}

/// The six icosahedron vertices spanning `Γ_P`, in physical coordinates.
pub fn icosahedral_vertices() -> [Vec3; 6] {
    let t = Golden::tau;
    let i = Golden::int;
    [
        [i(0), i(1), t()],
        [i(0), i(-1), t()],
        [i(1), t(), i(0)],
        [i(-1), t(), i(0)],
        [t(), i(0), i(1)],
        [-&t(), i(0), i(1)],
    ]
}

/// Internal images of the basis vectors (Galois conjugates of the vertices).
pub fn internal_vertices() -> [Vec3; 6] {
    icosahedral_vertices().map(|v| [v[0].conjugate(), v[1].conjugate(), v[2].conjugate()])
}

/// Representative of `±v` with a positive leading nonzero coordinate.
fn sign_normalise(v: Vec3) -> Vec3 {
    let lead = v.iter().find(|x| !x.is_zero()).map(Golden::approx).unwrap_or(0.0);
    if lead < 0.0 {
        vneg(&v)
    } else {
        v
    }
}

fn push_unique(axes: &mut Vec<Vec3>, v: Vec3) {
    let v = sign_normalise(v);
    if !axes.contains(&v) {
        axes.push(v);
    }
}

/// Rotation axes of the internal icosahedron: (five-fold, three-fold, two-fold).
pub fn internal_axes() -> (Vec<Vec3>, Vec<Vec3>, Vec<Vec3>) {
    let base = internal_vertices();
    let mut verts: Vec<Vec3> = base.to_vec();
    verts.extend(base.iter().map(vneg));
    let dist = |u: &Vec3, v: &Vec3| {
        let d = vsub(u, v);
        dot(&d, &d)
    };
    let mut min: Option<Golden> = None;
    for i in 0..12 {
        for j in i + 1..12 {
            let d = dist(&verts[i], &verts[j]);
            if d.is_zero() {
                continue;
            }
            if min.as_ref().is_none_or(|m| d.approx() < m.approx()) {
                min = Some(d);
            }
        }
    }
    let min = min.expect("twelve distinct vertices");
    let adjacent = |i: usize, j: usize| dist(&verts[i], &verts[j]) == min;

    let mut five = Vec::new();
    for v in &base {
        push_unique(&mut five, v.clone());
    }
    let mut two = Vec::new();
    let mut three = Vec::new();
    for i in 0..12 {
        for j in i + 1..12 {
            if !adjacent(i, j) {
                continue;
            }
            push_unique(&mut two, vadd(&verts[i], &verts[j]));
            for k in j + 1..12 {
                if adjacent(i, k) && adjacent(j, k) {
                    push_unique(&mut three, vadd(&vadd(&verts[i], &verts[j]), &verts[k]));
                }
            }
        }
    }
    (five, three, two)
}

/// Integer equations (rows) cutting out the plane perpendicular to an internal axis.
pub fn plane_equations(axis: &Vec3) -> IntMatrix {
    let imgs = internal_vertices();
    let f: Vec<Golden> = imgs.iter().map(|v| dot(v, axis)).collect();
    let mut rows = RatMatrix::zeros(2, 6);
    for (j, g) in f.iter().enumerate() {
        rows.set(0, j, g.a.clone());
        rows.set(1, j, g.b.clone());
    }
    let den = rows.common_denominator();
    rows.scaled_to_int(&den)
}

/// Hermite basis of the face-centred lattice `Γ_F = {x ∈ ℤ⁶ : Σ xᵢ even}`.
pub fn face_centred_basis() -> HermiteBasis {
    let mut gens = Vec::new();
    for i in 0..6 {
        for j in i..6 {
            let mut v = vec![BigInt::zero(); 6];
            v[i] += 1;
            v[j] += 1;
            gens.push(v);
        }
    }
    HermiteBasis::from_generators(6, &gens)
}

/// Which lattice an icosahedral scheme is built over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcosahedralLattice {
    Primitive,
    FaceCentred,
}

fn icosahedral_scheme(name: &str, lattice: IcosahedralLattice, kinds: &[usize]) -> SchemeSpec {
    let (five, three, two) = internal_axes();
    let coords = match lattice {
        IcosahedralLattice::Primitive => IntMatrix::identity(6),
        IcosahedralLattice::FaceCentred => face_centred_basis().basis().clone(),
    };
    let mut families = Vec::new();
    for &k in kinds {
        let axes = match k {
            5 => &five,
            3 => &three,
            _ => &two,
        };
        for (i, a) in axes.iter().enumerate() {
            let eqs = plane_equations(a).mul(&coords).expect("shape");
            let dir = kernel_lattice(&eqs);
            families.push(SingularFamily::new(format!("p{k}_{i}"), dir, &zero_offset(6)));
        }
    }
    SchemeSpec::new(name, 6, 3, families).expect("catalog scheme is well formed")
}

/// Re-derives a catalog scheme from first principles.
pub fn derive_builtin(name: &str) -> Result<SchemeSpec, SchemeError> {
    use IcosahedralLattice::{FaceCentred, Primitive};
    Ok(match name {
        "penrose" => dihedral_scheme(name, 10, &['a']),
        "ttt" => dihedral_scheme(name, 10, &['b']),
        "ammann_beenker" => dihedral_scheme(name, 8, &['a']),
        "ammann_beenker_coloured" => dihedral_scheme(name, 8, &['b']),
        "ammann_beenker_decorated" => dihedral_scheme(name, 8, &['a', 'b']),
        "socolar" => dihedral_scheme(name, 12, &['a']),
        "socolar_decorated" => dihedral_scheme(name, 12, &['a', 'b']),
        "generalized_penrose" => generalized_penrose(&default_gamma()),
        "heptagonal_a" => dihedral_scheme(name, 14, &['a']),
        "heptagonal_b" => dihedral_scheme(name, 14, &['b']),
        "ammann_kramer" => icosahedral_scheme(name, Primitive, &[2]),
        "dual_canonical_d6" => icosahedral_scheme(name, FaceCentred, &[2]),
        "canonical_d6" => icosahedral_scheme(name, FaceCentred, &[5, 3]),
        "danzer" => icosahedral_scheme(name, FaceCentred, &[5]),
        _ => return Err(SchemeError::UnknownScheme(name.to_string())),
    })
}

/// Whether translating by `t` maps every member of the family onto a member
/// (that is, `t ∈ ℤ^N + span(direction)`).
pub fn translation_preserves(family: &SingularFamily, t: &[BigRational]) -> bool {
    let chart = super::QuotientChart::new(&family.direction);
    chart.is_trivial(t)
}

/// `|det|` of a square integer matrix, as a convenience for index checks.
pub fn index_of(m: &IntMatrix) -> BigInt {
    m.determinant().expect("square").abs()
}
