//! Global linear orbifold charts `(R^{2n}, G)` with Christoffel data, the
//! JSON chart description format, and chart-morphism checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::connection::{check_connection_invariance, Christoffel, InvarianceReport};
use crate::error::{Error, Result};
use crate::group::{check_symplectic_action, enumerate_group, FiniteGroup, SymplecticReport, DEFAULT_GROUP_BOUND};
use crate::matrix::{MatrixText, RatMatrix};
use crate::poly::BasePoly;
use crate::weyl::{Convention, TruncationPolicy};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    group: FiniteGroup,
    christoffel: Christoffel,
    policy: TruncationPolicy,
}

impl Chart {
    pub fn new(group: FiniteGroup, christoffel: Christoffel, policy: TruncationPolicy) -> Result<Self> {
        let dim = policy.dim;
        if group.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: group.dim() });
        }
        if christoffel.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: christoffel.dim() });
        }
        Ok(Chart { group, christoffel, policy })
    }

    /// Flat chart with the given generators.
    pub fn flat(generators: &[RatMatrix], dim: usize, n_max: u32) -> Result<Self> {
        let group = enumerate_group(generators, dim, DEFAULT_GROUP_BOUND)?;
        Chart::new(group, Christoffel::zero(dim), TruncationPolicy::new(dim, n_max)?)
    }

    pub fn dim(&self) -> usize {
        self.policy.dim
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn christoffel(&self) -> &Christoffel {
        &self.christoffel
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    pub fn with_n_max(&self, n_max: u32) -> Chart {
        Chart { policy: self.policy.with_n_max(n_max), ..self.clone() }
    }

    pub fn with_convention(&self, convention: Convention) -> Chart {
        Chart { policy: TruncationPolicy { convention, ..self.policy }, ..self.clone() }
    }

    pub fn with_christoffel(&self, christoffel: Christoffel) -> Result<Chart> {
        Chart::new(self.group.clone(), christoffel, self.policy)
    }

    pub fn validate(&self) -> Result<ChartValidation> {
        Ok(ChartValidation {
            symplectic: check_symplectic_action(self.group.elements()),
            fully_symmetric: self.christoffel.is_fully_symmetric(),
            invariance: check_connection_invariance(&self.christoffel, &self.group)?,
        })
    }

    /// Parse a JSON chart description.
    pub fn from_json(text: &str) -> Result<Chart> {
        let file: ChartFile = serde_json::from_str(text).map_err(|e| Error::ChartFile(e.to_string()))?;
        file.into_chart(None)
    }

    pub fn to_file(&self) -> ChartFile {
        let mut christoffel = BTreeMap::new();
        for ((i, j, k), p) in self.christoffel.nonzero_entries() {
            christoffel.insert(format!("({},{},{})", i + 1, j + 1, k + 1), p.to_string());
        }
        ChartFile {
            dim: self.dim(),
            generators: self.group.generators().iter().map(MatrixText::from).collect(),
            christoffel,
            n_max: self.policy.n_max,
            group_bound: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartValidation {
    pub symplectic: SymplecticReport,
    pub fully_symmetric: bool,
    pub invariance: InvarianceReport,
}

impl ChartValidation {
    pub fn passed(&self) -> bool {
        self.symplectic.symplectic && self.fully_symmetric && self.invariance.invariant
    }
}

/// On-disk chart description:
/// `{"dim": 2, "generators": [[["-1","0"],["0","-1"]]],
///   "christoffel": {"(1,1,1)": "0"}, "n_max": 6}`.
/// Christoffel keys are 1-based `(i,j,k)`, values use the polynomial
/// grammar; omitted entries are zero. Entries are taken literally, so a
/// torsionfree symplectic connection must list every permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartFile {
    pub dim: usize,
    #[serde(default)]
    pub generators: Vec<MatrixText>,
    #[serde(default)]
    pub christoffel: BTreeMap<String, String>,
    pub n_max: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_bound: Option<usize>,
}

fn parse_index_key(key: &str, dim: usize) -> Result<(usize, usize, usize)> {
    let bad =
        || Error::ChartFile(format!("christoffel key '{key}' is not of the form (i,j,k) with 1 <= i,j,k <= {dim}"));
    let inner = key.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let idx: Vec<usize> = inner
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    match idx[..] {
        [i, j, k] if (1..=dim).contains(&i) && (1..=dim).contains(&j) && (1..=dim).contains(&k) => {
            Ok((i - 1, j - 1, k - 1))
        }
        _ => Err(bad()),
    }
}

impl ChartFile {
    pub fn into_chart(self, n_max_override: Option<u32>) -> Result<Chart> {
        let dim = self.dim;
        let policy = TruncationPolicy::new(dim, n_max_override.unwrap_or(self.n_max))?;
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let m = m.parse().map_err(|e| Error::ChartFile(format!("generator {}: {e}", i + 1)))?;
                if !m.is_square() || m.rows() != dim {
                    return Err(Error::ChartFile(format!("generator {} is not {dim}x{dim}", i + 1)));
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        let group = enumerate_group(&generators, dim, self.group_bound.unwrap_or(DEFAULT_GROUP_BOUND))?;
        let mut christoffel = Christoffel::zero(dim);
        for (key, value) in &self.christoffel {
            let (i, j, k) = parse_index_key(key, dim)?;
            let p = BasePoly::parse(value, dim).map_err(|e| Error::ChartFile(format!("christoffel {key}: {e}")))?;
            christoffel.set(i, j, k, p);
        }
        Chart::new(group, christoffel, policy)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    /// `φᵀ ω_target φ = ω_source`.
    pub pullback: bool,
    /// `φ·h = ι(h)·φ`, per source generator.
    pub equivariant: Vec<bool>,
    /// `ι(h)` lies in the target group, per source generator.
    pub iota_in_target: Vec<bool>,
}

impl MorphismReport {
    pub fn passed(&self) -> bool {
        self.pullback && self.equivariant.iter().all(|&b| b) && self.iota_in_target.iter().all(|&b| b)
    }
}

/// Check a linear chart morphism `(φ, ι)`; `iota[i]` is the image of the
/// i-th source generator.
pub fn check_chart_morphism(
    source: &Chart,
    target: &Chart,
    phi: &RatMatrix,
    iota: &[RatMatrix],
) -> Result<MorphismReport> {
    let (sd, td) = (source.dim(), target.dim());
    if sd > td {
        return Err(Error::DimensionMismatch { expected: td, found: sd });
    }
    if phi.rows() != td || phi.cols() != sd {
        return Err(Error::DimensionMismatch { expected: td * sd, found: phi.rows() * phi.cols() });
    }
    let gens = source.group().generators();
    if iota.len() != gens.len() {
        return Err(Error::DimensionMismatch { expected: gens.len(), found: iota.len() });
    }
    let pulled = phi.transpose().try_mul(&RatMatrix::standard_symplectic(td))?.try_mul(phi)?;
    let pullback = pulled == RatMatrix::standard_symplectic(sd);
    let mut equivariant = Vec::new();
    let mut iota_in_target = Vec::new();
    for (h, ih) in gens.iter().zip(iota) {
        if !ih.is_square() || ih.rows() != td {
            return Err(Error::DimensionMismatch { expected: td, found: ih.rows() });
        }
        equivariant.push(phi.try_mul(h)? == ih.try_mul(phi)?);
        iota_in_target.push(target.group().contains(ih));
    }
    Ok(MorphismReport { pullback, equivariant, iota_in_target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::standard::minus_identity;

    const CONE: &str =
        r#"{"dim": 2, "generators": [[["-1","0"],["0","-1"]]], "christoffel": {"(1,1,1)": "0"}, "n_max": 6}"#;

    #[test]
    fn parses_cone_file() {
        let chart = Chart::from_json(CONE).unwrap();
        assert_eq!(chart.dim(), 2);
        assert_eq!(chart.group().order(), 2);
        assert!(chart.christoffel().is_zero());
        assert_eq!(chart.policy().n_max, 6);
        assert!(chart.validate().unwrap().passed());
        let again = serde_json::to_string(&chart.to_file()).unwrap();
        assert_eq!(Chart::from_json(&again).unwrap(), chart);
    }

    #[test]
    fn bad_files_report_location() {
        let err = Chart::from_json("{\"dim\": 2,\n \"n_max\": }").unwrap_err();
        match err {
            Error::ChartFile(msg) => assert!(msg.contains("line 2"), "{msg}"),
            e => panic!("{e:?}"),
        }
        let err = Chart::from_json(r#"{"dim": 2, "christoffel": {"(1,1,3)": "1"}, "n_max": 2}"#).unwrap_err();
        assert!(matches!(err, Error::ChartFile(_)));
        let err = Chart::from_json(r#"{"dim": 2, "christoffel": {"(1,1,1)": "x7"}, "n_max": 2}"#).unwrap_err();
        assert!(matches!(err, Error::ChartFile(_)));
    }

    #[test]
    fn morphism_examples() {
        let cone = Chart::flat(&[minus_identity(2)], 2, 4).unwrap();
        let id = RatMatrix::identity(2);
        let r = check_chart_morphism(&cone, &cone, &id, &[minus_identity(2)]).unwrap();
        assert!(r.passed());

        let plane = Chart::flat(&[], 2, 4).unwrap();
        assert!(check_chart_morphism(&plane, &plane, &id, &[]).unwrap().passed());

        let scale = RatMatrix::from_ints(&[&[2, 0], &[0, 2]]);
        let r = check_chart_morphism(&plane, &plane, &scale, &[]).unwrap();
        assert!(!r.pullback);

        let wrong = RatMatrix::identity(3);
        assert!(check_chart_morphism(&plane, &plane, &wrong, &[]).is_err());
    }

    #[test]
    fn symplectic_embedding_into_larger_chart() {
        let small = Chart::flat(&[minus_identity(2)], 2, 4).unwrap();
        let big = Chart::flat(&[minus_identity(4)], 4, 4).unwrap();
        // x1 -> x1, x2 -> x3 (the first symplectic pair of R⁴)
        let phi = RatMatrix::from_ints(&[&[1, 0], &[0, 0], &[0, 1], &[0, 0]]);
        let r = check_chart_morphism(&small, &big, &phi, &[minus_identity(4)]).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
