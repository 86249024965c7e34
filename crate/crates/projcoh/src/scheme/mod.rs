//! Rational cut-and-project schemes in the lifted lattice picture.
//!
//! A scheme is the translation lattice `Γ = ℤ^N`, a codimension `n` (the
//! dimension of the internal space) and a finite list of singular families:
//! rational affine subspaces of `ℚ^N`, each given by a saturated direction
//! lattice and an offset. Everything downstream works on this data alone; the
//! physical and internal spaces are never represented numerically.
//!
//! - [`SchemeSpec`], [`SingularFamily`]: the validated model.
//! - [`QuotientChart`]: canonical coordinates on `ℚ^N / (ℤ^N + V)`.
//! - [`builtin_scheme`], [`load_scheme_file`]: the catalog and the JSON format.
//! - [`catalog`]: the derivations that produced the frozen catalog data.

pub mod catalog;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_linalg::{
    is_saturated, kernel_basis, saturate, solve_integer, HermiteBasis, IntMatrix,
};

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
    #[error("malformed scheme file: {0}")]
    Parse(String),
    #[error("invalid scheme: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Canonical coordinates on the torus `ℚ^N / (ℤ^N + V)` for a rational
/// subspace `V` spanned by a lattice.
///
/// `projection` is a surjection `ℤ^N → ℤ^k` whose kernel is `ℤ^N ∩ V`, so `x`
/// and `y` are congruent modulo `ℤ^N + V` exactly when `projection·(x − y)`
/// is integral. `section` is an integral right inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientChart {
    direction: HermiteBasis,
    projection: IntMatrix,
    section: IntMatrix,
}

impl QuotientChart {
    pub fn new(direction: &HermiteBasis) -> Self {
        let n = direction.ambient_rank();
        let sat = saturate(direction);
        let projection = kernel_basis(&sat.basis().transpose()).transpose();
        let k = projection.rows();
        let mut cols = Vec::with_capacity(k);
        for i in 0..k {
            let mut e = vec![BigInt::zero(); k];
            e[i] = BigInt::one();
            cols.push(solve_integer(&projection, &e).expect("annihilator rows are primitive"));
        }
        Self {
            direction: sat,
            projection,
            section: IntMatrix::from_columns(n, &cols),
        }
    }

    /// The saturated direction lattice `ℤ^N ∩ V`.
    pub fn direction(&self) -> &HermiteBasis {
        &self.direction
    }

    /// Codimension of `V` (number of torus coordinates).
    pub fn codim(&self) -> usize {
        self.projection.rows()
    }

    /// `projection · v` over ℚ.
    pub fn project(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.projection.rows())
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.projection.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += BigRational::from_integer(a.clone()) * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Torus coordinates of `v`, each reduced into `[0, 1)`.
    pub fn residue(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.project(v).into_iter().map(|x| fract(&x)).collect()
    }

    /// The canonical representative of `v + ℤ^N + V`.
    pub fn canonical(&self, v: &[BigRational]) -> Vec<BigRational> {
        let r = self.residue(v);
        (0..self.section.rows())
            .map(|i| {
                let mut acc = BigRational::zero();
                for (j, x) in r.iter().enumerate() {
                    let s = self.section.get(i, j);
                    if !s.is_zero() && !x.is_zero() {
                        acc += BigRational::from_integer(s.clone()) * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Whether `v ∈ ℤ^N + V`.
    pub fn is_trivial(&self, v: &[BigRational]) -> bool {
        self.project(v).iter().all(BigRational::is_integer)
    }

    /// An integer vector `γ` with `v − γ ∈ V`, if `v ∈ ℤ^N + V`.
    pub fn lift_translation(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        let z = self.project(v);
        if !z.iter().all(BigRational::is_integer) {
            return None;
        }
        let z: Vec<BigInt> = z.into_iter().map(|x| x.to_integer()).collect();
        Some(self.section.mul_vec(&z).expect("shapes agree"))
    }
}

/// Fractional part in `[0, 1)`.
pub fn fract(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// One translation family of singular spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularFamily {
    pub label: String,
    /// Direction lattice (saturated for a valid scheme).
    pub direction: HermiteBasis,
    /// Offset, canonical modulo `ℤ^N + span(direction)`.
    pub offset: Vec<BigRational>,
}

impl SingularFamily {
    /// Builds a family, canonicalising the offset.
    pub fn new(label: impl Into<String>, direction: HermiteBasis, offset: &[BigRational]) -> Self {
        let chart = QuotientChart::new(&direction);
        Self {
            label: label.into(),
            offset: chart.canonical(offset),
            direction,
        }
    }
}

/// A rational projection scheme `(Γ = ℤ^N, codim n, families)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeSpec {
    name: String,
    ambient_rank: usize,
    codim: usize,
    families: Vec<SingularFamily>,
}

impl SchemeSpec {
    /// Checks the structural invariants: `n | N`, consistent vector lengths and
    /// no duplicate families. Rationality is checked by [`validate_rationality`].
    pub fn new(
        name: impl Into<String>,
        ambient_rank: usize,
        codim: usize,
        families: Vec<SingularFamily>,
    ) -> Result<Self, SchemeError> {
        let name = name.into();
        if codim == 0 || ambient_rank == 0 || ambient_rank % codim != 0 {
            return Err(SchemeError::Invalid(format!(
                "rank {ambient_rank} is not a positive multiple of codimension {codim}"
            )));
        }
        if codim >= ambient_rank {
            return Err(SchemeError::Invalid(format!(
                "codimension {codim} leaves no physical dimension in rank {ambient_rank}"
            )));
        }
        if families.is_empty() {
            return Err(SchemeError::Invalid("no singular families".into()));
        }
        let mut seen = BTreeSet::new();
        for f in &families {
            if f.direction.ambient_rank() != ambient_rank || f.offset.len() != ambient_rank {
                return Err(SchemeError::Invalid(format!(
                    "family `{}` does not live in rank {ambient_rank}",
                    f.label
                )));
            }
            let key = (f.direction.basis().entries().to_vec(), f.offset.clone());
            if !seen.insert(key) {
                return Err(SchemeError::Invalid(format!("duplicate family `{}`", f.label)));
            }
        }
        Ok(Self {
            name,
            ambient_rank,
            codim,
            families,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `N`.
    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    /// `n`, the codimension.
    pub fn codim(&self) -> usize {
        self.codim
    }

    /// `d = N − n`, the tiling dimension.
    pub fn dim(&self) -> usize {
        self.ambient_rank - self.codim
    }

    /// `ν = N / n`.
    pub fn nu(&self) -> usize {
        self.ambient_rank / self.codim
    }

    pub fn families(&self) -> &[SingularFamily] {
        &self.families
    }

    /// A renamed copy.
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// One violated rationality condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub subject: String,
    pub message: String,
}

/// Outcome of [`validate_rationality`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub nu: usize,
    pub violations: Vec<Violation>,
    /// Whether the intersection closure was completed with finitely many
    /// classes in every dimension (finite point count).
    pub finite: Option<bool>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.finite != Some(false)
    }
}

/// Checks the rationality conditions: each family direction is saturated of
/// rank `ν(n−1)`, and every intersection in the closure has a direction whose
/// rank is a multiple of `ν` (which is what makes the point count finite).
pub fn validate_rationality(s: &SchemeSpec) -> ValidationReport {
    let nu = s.nu();
    let want = nu * (s.codim() - 1);
    let mut violations = Vec::new();
    for f in s.families() {
        if f.direction.rank() != want {
            violations.push(Violation {
                subject: f.label.clone(),
                message: format!(
                    "direction rank {} but rank ν(n−1) = {want} is required",
                    f.direction.rank()
                ),
            });
        }
        if !is_saturated(&f.direction) {
            violations.push(Violation {
                subject: f.label.clone(),
                message: "direction lattice is not saturated".into(),
            });
        }
    }
    let finite = if violations.is_empty() {
        match crate::arrangement::close_arrangement(s) {
            Ok(_) => Some(true),
            Err(e) => {
                violations.push(Violation {
                    subject: "intersection closure".into(),
                    message: e.to_string(),
                });
                Some(false)
            }
        }
    } else {
        None
    };
    ValidationReport {
        nu,
        violations,
        finite,
    }
}

// --- JSON format ---

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    label: String,
    direction: Vec<Vec<i64>>,
    offset: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    name: String,
    rank: usize,
    codim: usize,
    families: Vec<FamilyFile>,
}

/// Parses a rational written as `p/q` or `p`.
pub fn parse_rational(s: &str) -> Result<BigRational, SchemeError> {
    let bad = || SchemeError::Parse(format!("`{s}` is not a rational of the form p/q"));
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

/// Formats a rational as `p/q` in lowest terms.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses a scheme from its JSON text.
pub fn parse_scheme_json(text: &str) -> Result<SchemeSpec, SchemeError> {
    let file: SchemeFile =
        serde_json::from_str(text).map_err(|e| SchemeError::Parse(e.to_string()))?;
    let mut families = Vec::with_capacity(file.families.len());
    for f in &file.families {
        if f.offset.len() != file.rank {
            return Err(SchemeError::Parse(format!(
                "family `{}` has an offset of length {} in rank {}",
                f.label,
                f.offset.len(),
                file.rank
            )));
        }
        if let Some(c) = f.direction.iter().find(|c| c.len() != file.rank) {
            return Err(SchemeError::Parse(format!(
                "family `{}` has a direction vector of length {} in rank {}",
                f.label,
                c.len(),
                file.rank
            )));
        }
        let offset = f
            .offset
            .iter()
            .map(|x| parse_rational(x))
            .collect::<Result<Vec<_>, _>>()?;
        let direction = HermiteBasis::from_generators(
            file.rank,
            &f.direction
                .iter()
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect::<Vec<_>>(),
        );
        families.push(SingularFamily::new(f.label.clone(), direction, &offset));
    }
    SchemeSpec::new(file.name, file.rank, file.codim, families)
}

/// Serialises a scheme into the JSON format (directions as their Hermite bases).
pub fn scheme_to_json(s: &SchemeSpec) -> String {
    let file = SchemeFile {
        name: s.name.clone(),
        rank: s.ambient_rank,
        codim: s.codim,
        families: s
            .families
            .iter()
            .map(|f| FamilyFile {
                label: f.label.clone(),
                direction: f
                    .direction
                    .basis()
                    .columns()
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|x| i64::try_from(x).expect("catalog entries fit in i64"))
                            .collect()
                    })
                    .collect(),
                offset: f.offset.iter().map(format_rational).collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("serialisable");
    text.push('\n');
    text
}

/// Reads a scheme file.
pub fn load_scheme_file(path: &Path) -> Result<SchemeSpec, SchemeError> {
    let text = std::fs::read_to_string(path).map_err(|source| SchemeError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scheme_json(&text)
}

/// Names of the built-in catalog, in display order.
pub const CATALOG: [&str; 14] = [
    "penrose",
    "ttt",
    "ammann_beenker",
    "ammann_beenker_coloured",
    "ammann_beenker_decorated",
    "socolar",
    "socolar_decorated",
    "generalized_penrose",
    "heptagonal_a",
    "heptagonal_b",
    "ammann_kramer",
    "dual_canonical_d6",
    "canonical_d6",
    "danzer",
];

fn builtin_text(name: &str) -> Option<&'static str> {
    macro_rules! catalog_file {
        ($($name:literal),*) => {
            match name {
                $($name => Some(include_str!(concat!("../../../../schemes/", $name, ".json"))),)*
                _ => None,
            }
        };
    }
    catalog_file!(
        "penrose",
        "ttt",
        "ammann_beenker",
        "ammann_beenker_coloured",
        "ammann_beenker_decorated",
        "socolar",
        "socolar_decorated",
        "generalized_penrose",
        "heptagonal_a",
        "heptagonal_b",
        "ammann_kramer",
        "dual_canonical_d6",
        "canonical_d6",
        "danzer"
    )
}

/// A scheme from the built-in catalog.
pub fn builtin_scheme(name: &str) -> Result<SchemeSpec, SchemeError> {
    let text = builtin_text(name).ok_or_else(|| SchemeError::UnknownScheme(name.to_string()))?;
    parse_scheme_json(text)
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} N={} n={} ν={}",
            self.name,
            self.ambient_rank,
            self.codim,
            self.nu()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn lat(n: usize, gens: &[&[i64]]) -> HermiteBasis {
        let g: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        HermiteBasis::from_generators(n, &g)
    }

    #[test]
    fn chart_canonicalises_modulo_lattice_and_span() {
        // V = span(2,1) is saturated with pivot 2: ℚ²/(ℤ² + V) ≅ ℚ/ℤ via x − 2y
        let chart = QuotientChart::new(&lat(2, &[&[2, 1]]));
        let a = chart.canonical(&[q(1, 3), q(0, 1)]);
        let b = chart.canonical(&[q(1, 3) + q(2, 1) * q(5, 7), q(5, 7) + q(3, 1)]);
        assert_eq!(a, b);
        assert!(chart.is_trivial(&[q(2, 1), q(1, 1)]));
        assert!(chart.is_trivial(&[q(1, 1), q(0, 1)]));
        assert!(!chart.is_trivial(&[q(1, 2), q(0, 1)]));
        let g = chart.lift_translation(&[q(3, 1), q(5, 2)]).unwrap();
        let rest: Vec<BigRational> = vec![
            q(3, 1) - BigRational::from_integer(g[0].clone()),
            q(5, 2) - BigRational::from_integer(g[1].clone()),
        ];
        // the remainder lies on the line: x = 2y
        assert_eq!(rest[0], q(2, 1) * &rest[1]);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-2/4").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("3").unwrap(), q(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert_eq!(format_rational(&q(0, 1)), "0/1");
    }

    #[test]
    fn invalid_dimension_is_reported() {
        let fam = SingularFamily::new("bad", lat(4, &[&[1, 0, 0, 0]]), &vec![q(0, 1); 4]);
        let s = SchemeSpec::new("bad", 4, 2, vec![fam]).unwrap();
        let r = validate_rationality(&s);
        assert!(!r.is_valid());
        assert!(r.violations[0].message.contains("rank"));
    }

    #[test]
    fn codim_one_point_windows_are_accepted() {
        let fam = SingularFamily::new("pt", HermiteBasis::zero(2), &[q(0, 1), q(0, 1)]);
        let s = SchemeSpec::new("pt", 2, 1, vec![fam]).unwrap();
        assert_eq!(s.nu(), 2);
        assert!(validate_rationality(&s).is_valid());
    }

    #[test]
    fn json_rejects_unknown_keys_and_bad_shapes() {
        let ok = r#"{"name":"grid","rank":2,"codim":1,"families":[
            {"label":"p","direction":[],"offset":["0/1","1/2"]}]}"#;
        let s = parse_scheme_json(ok).unwrap();
        assert_eq!(parse_scheme_json(&scheme_to_json(&s)).unwrap(), s);
        let extra = ok.replace("\"codim\":1", "\"codim\":1,\"colour\":3");
        assert!(matches!(parse_scheme_json(&extra), Err(SchemeError::Parse(_))));
        let short = ok.replace("[\"0/1\",\"1/2\"]", "[\"0/1\"]");
        assert!(matches!(parse_scheme_json(&short), Err(SchemeError::Parse(_))));
        assert!(matches!(
            builtin_scheme("nope"),
            Err(SchemeError::UnknownScheme(_))
        ));
    }

    #[test]
    fn duplicate_families_are_rejected() {
        let f = SingularFamily::new("x", lat(2, &[&[1, 0]]), &[q(0, 1), q(0, 1)]);
        let g = SingularFamily::new("y", lat(2, &[&[1, 0]]), &[q(3, 1), q(1, 1)]);
        assert!(SchemeSpec::new("dup", 4, 2, vec![f.clone()]).is_err());
        assert!(SchemeSpec::new("dup", 2, 1, vec![f, g]).is_err());
    }
}
