use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::files::{read_domain, read_graph, read_text};
use crate::error::{Error, Result};
use crate::forcing::ForcingSpec;
use crate::graph::{DomainDecomposition, VertexField, WeightedGraph};
use crate::rothe::{make_grid, ProblemSpec, TimeGrid, DEFAULT_TOLERANCE};

/// Forcing section of a problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub amplitude: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

impl Default for ForcingConfig {
    fn default() -> Self {
        ForcingConfig {
            kind: "zero".into(),
            amplitude: BTreeMap::new(),
            omega: None,
        }
    }
}

const FORCING_KINDS: [&str; 4] = ["zero", "constant", "sinusoid", "sqrt_time"];

/// A parsed problem file. Relative paths are resolved against `base_dir`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<PathBuf>,
    pub p: f64,
    pub horizon: f64,
    pub n: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub g: BTreeMap<String, f64>,
    #[serde(default)]
    pub h: BTreeMap<String, f64>,
    #[serde(default)]
    pub forcing: ForcingConfig,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_tol() -> f64 {
    DEFAULT_TOLERANCE
}

/// Everything needed to run a configured problem.
#[derive(Debug, Clone)]
pub struct LoadedProblem {
    pub graph: WeightedGraph,
    pub dom: DomainDecomposition,
    pub forcing: ForcingSpec,
    pub spec: ProblemSpec,
    pub grid: TimeGrid,
    pub tol: f64,
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses and validates the problem-file text. Vertex references are
/// checked later by [`RunConfig::load`], which needs the graph.
pub fn parse_problem(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reads a problem file; relative paths inside it refer to its directory.
pub fn read_problem(path: &Path) -> Result<RunConfig> {
    let mut cfg = parse_problem(&read_text(path)?)?;
    cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(cfg)
}

/// Renders a configuration in the problem-file format.
pub fn emit(cfg: &RunConfig) -> String {
    toml::to_string(cfg).expect("configuration is always representable")
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::InvalidExponent { value: self.p });
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::NonpositiveHorizon { value: self.horizon });
        }
        if self.n == 0 {
            return Err(Error::ZeroSteps);
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tol",
                detail: format!("must be positive, got {}", self.tol),
            });
        }
        let f = &self.forcing;
        if !FORCING_KINDS.contains(&f.kind.as_str()) {
            return Err(Error::UnknownForcingKind { kind: f.kind.clone() });
        }
        if f.kind == "zero" && !f.amplitude.is_empty() {
            return Err(Error::InvalidParameter {
                name: "forcing.amplitude",
                detail: "zero forcing takes no amplitude".into(),
            });
        }
        match (f.kind.as_str(), f.omega) {
            ("sinusoid", None) => Err(Error::InvalidParameter {
                name: "forcing.omega",
                detail: "sinusoid forcing requires omega".into(),
            }),
            ("sinusoid", Some(w)) if !w.is_finite() => Err(Error::InvalidParameter {
                name: "forcing.omega",
                detail: format!("must be finite, got {w}"),
            }),
            (kind, Some(_)) if kind != "sinusoid" => Err(Error::InvalidParameter {
                name: "forcing.omega",
                detail: format!("omega does not apply to {kind} forcing"),
            }),
            _ => Ok(()),
        }
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn graph_path(&self) -> Result<PathBuf> {
        self.graph.as_deref().map(|p| self.resolve(p)).ok_or(Error::InvalidParameter {
            name: "graph",
            detail: "no graph file given".into(),
        })
    }

    pub fn measure_path(&self) -> Option<PathBuf> {
        self.measure.as_deref().map(|p| self.resolve(p))
    }

    pub fn domain_path(&self) -> Result<PathBuf> {
        self.domain.as_deref().map(|p| self.resolve(p)).ok_or(Error::InvalidParameter {
            name: "domain",
            detail: "no domain file given".into(),
        })
    }

    pub fn out_path(&self) -> Option<PathBuf> {
        self.out.as_deref().map(|p| self.resolve(p))
    }

    /// Reads the referenced files and assembles the problem.
    pub fn load(&self) -> Result<LoadedProblem> {
        self.validate()?;
        let graph = read_graph(&self.graph_path()?, self.measure_path().as_deref())?;
        let dom = read_domain(&graph, &self.domain_path()?)?;
        let g = interior_field(&graph, &dom, &self.g)?;
        let h = interior_field(&graph, &dom, &self.h)?;
        let forcing = self.forcing_spec(&graph, &dom)?;
        let spec = ProblemSpec::new(&dom, self.p, g, h, forcing.clone(), self.horizon)?;
        let grid = make_grid(self.horizon, self.n)?;
        Ok(LoadedProblem {
            graph,
            dom,
            forcing,
            spec,
            grid,
            tol: self.tol,
        })
    }

    fn forcing_spec(&self, graph: &WeightedGraph, dom: &DomainDecomposition) -> Result<ForcingSpec> {
        let f = &self.forcing;
        let amplitude = interior_field(graph, dom, &f.amplitude)?;
        Ok(match f.kind.as_str() {
            "zero" => ForcingSpec::Zero,
            "constant" => ForcingSpec::Constant { amplitude },
            "sinusoid" => ForcingSpec::Sinusoid {
                amplitude,
                angular_frequency: f.omega.unwrap_or_default(),
            },
            "sqrt_time" => ForcingSpec::SqrtTime { amplitude },
            other => return Err(Error::UnknownForcingKind { kind: other.into() }),
        })
    }
}

/// Builds a Dirichlet field from a label→value map. Nonzero values off `Ω°`
/// are rejected.
fn interior_field(
    graph: &WeightedGraph,
    dom: &DomainDecomposition,
    values: &BTreeMap<String, f64>,
) -> Result<VertexField> {
    let mut field = VertexField::zeros(graph.vertex_count());
    for (label, &value) in values {
        let x = graph.index_of(label)?;
        if !value.is_finite() {
            return Err(Error::InvalidParameter {
                name: "field value",
                detail: format!("vertex {label} has non-finite value {value}"),
            });
        }
        if value != 0.0 && !dom.is_interior(x) {
            return Err(Error::NotInInterior {
                vertex: label.clone(),
                value,
            });
        }
        field[x] = value;
    }
    Ok(field)
}
