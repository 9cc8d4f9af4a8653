//! Run configuration: TOML schema, sweep expansion and problem assembly.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dnls_core::{
    Boundary, Coefficient, Graph, Potential, PowerNonlinearity, PresetKind, Problem, SolverOptions,
    VerifyOptions,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Optional guard: when set it must name the subcommand being run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    pub graph: GraphSpec,
    pub potential: PotentialSpec,
    pub nonlinearity: NonlinearitySpec,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub verify: VerifyOptions,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate: Option<TruncateSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    Lattice {
        dim: usize,
        sides: Vec<usize>,
        boundary: Boundary,
    },
    Preset {
        name: PresetKind,
        size: usize,
    },
    Edges {
        vertices: usize,
        #[serde(default)]
        edges: Vec<[usize; 2]>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dip {
    pub vertex: usize,
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    Constant {
        value: f64,
    },
    Periodic {
        cell: Vec<f64>,
        period: Vec<usize>,
    },
    Well {
        vinf: f64,
        #[serde(default)]
        dips: Vec<Dip>,
    },
    OrbitInvariant {
        values: Vec<f64>,
    },
    Values {
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySpec {
    /// Exponents `q_i > 2` of the terms `a_i |u|^{q_i - 2} u`.
    pub exponents: Vec<f64>,
    /// One entry per exponent: a number or a per-vertex array. Defaults to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<Coefficient>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// Output directory, relative to the config file.
    pub dir: PathBuf,
    /// File name prefix; the config file stem when empty.
    pub name: String,
    pub trace: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: PathBuf::from("."),
            name: String::new(),
            trace: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Worker threads for sweep entries; 0 uses all cores.
    #[serde(default)]
    pub workers: usize,
    pub axes: Vec<SweepAxis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// Dotted key path into the config, e.g. `nonlinearity.exponents[0]`.
    pub parameter: String,
    pub values: Vec<toml::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncateSpec {
    pub sizes: Vec<usize>,
}

/// A parsed config together with the location its relative paths refer to.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: RunConfig,
    pub base_dir: PathBuf,
    pub stem: String,
}

impl Loaded {
    pub fn output_dir(&self) -> PathBuf {
        self.base_dir.join(&self.config.output.dir)
    }

    pub fn output_name(&self) -> &str {
        if self.config.output.name.is_empty() {
            &self.stem
        } else {
            &self.config.output.name
        }
    }
}

pub fn read_value(path: &Path) -> Result<toml::Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    text.parse::<toml::Value>()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Deserialises a config tree, naming the offending key path on failure.
pub fn from_value(value: toml::Value) -> Result<RunConfig, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            CliError::Config(e.into_inner().to_string())
        } else {
            CliError::Config(format!("{path}: {}", e.into_inner()))
        }
    })
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let config = from_value(read_value(path)?)?;
    Ok(located(config, path))
}

pub fn located(config: RunConfig, path: &Path) -> Loaded {
    Loaded {
        config,
        base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
        stem: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into()),
    }
}

pub fn check_command(config: &RunConfig, expected: &str) -> Result<(), CliError> {
    match &config.command {
        Some(c) if c != expected => Err(CliError::Config(format!(
            "command: config is for `{c}` but `{expected}` was requested"
        ))),
        _ => Ok(()),
    }
}

enum Segment {
    Key(String),
    Index(usize),
}

fn parse_path(path: &str) -> Result<Vec<Segment>, CliError> {
    let bad = || CliError::Config(format!("sweep.axes: malformed parameter path `{path}`"));
    let mut out = Vec::new();
    for part in path.split('.') {
        let (key, mut rest) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        if key.is_empty() {
            return Err(bad());
        }
        out.push(Segment::Key(key.to_string()));
        while !rest.is_empty() {
            let close = rest.find(']').ok_or_else(bad)?;
            if !rest.starts_with('[') {
                return Err(bad());
            }
            out.push(Segment::Index(rest[1..close].parse().map_err(|_| bad())?));
            rest = &rest[close + 1..];
        }
    }
    Ok(out)
}

/// Replaces the entry at `path`; tables are created as needed, array
/// entries must already exist.
pub fn set_path(root: &mut toml::Value, path: &str, value: toml::Value) -> Result<(), CliError> {
    let segments = parse_path(path)?;
    let missing = || CliError::Config(format!("{path}: no such entry in the config"));
    let mut node = root;
    for seg in &segments {
        node = match seg {
            Segment::Key(k) => node
                .as_table_mut()
                .ok_or_else(missing)?
                .entry(k.clone())
                .or_insert_with(|| toml::Value::Table(Default::default())),
            Segment::Index(i) => node
                .as_array_mut()
                .and_then(|a| a.get_mut(*i))
                .ok_or_else(missing)?,
        };
    }
    *node = value;
    Ok(())
}

/// One point of a sweep grid: the assignments and the resulting config.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub index: usize,
    pub assignments: Vec<(String, toml::Value)>,
    pub config: RunConfig,
}

/// Cartesian product of the sweep axes, first axis slowest.
pub fn expand_sweep(base: &toml::Value, sweep: &SweepSpec) -> Result<Vec<SweepEntry>, CliError> {
    if sweep.axes.is_empty() {
        return Err(CliError::Config(
            "sweep.axes: at least one axis is required".into(),
        ));
    }
    for (i, axis) in sweep.axes.iter().enumerate() {
        if axis.values.is_empty() {
            return Err(CliError::Config(format!(
                "sweep.axes[{i}].values: empty value list"
            )));
        }
    }
    let total: usize = sweep.axes.iter().map(|a| a.values.len()).product();
    let mut entries = Vec::with_capacity(total);
    for index in 0..total {
        let mut rem = index;
        let mut picks = vec![0; sweep.axes.len()];
        for (k, axis) in sweep.axes.iter().enumerate().rev() {
            picks[k] = rem % axis.values.len();
            rem /= axis.values.len();
        }
        let mut value = base.clone();
        let mut assignments = Vec::new();
        for (axis, &pick) in sweep.axes.iter().zip(&picks) {
            let v = axis.values[pick].clone();
            set_path(&mut value, &axis.parameter, v.clone())?;
            assignments.push((axis.parameter.clone(), v));
        }
        let config = from_value(value)?;
        entries.push(SweepEntry {
            index,
            assignments,
            config,
        });
    }
    Ok(entries)
}

pub fn build_graph(spec: &GraphSpec) -> Result<Graph, CliError> {
    let g = match spec {
        GraphSpec::Lattice {
            dim,
            sides,
            boundary,
        } => Graph::lattice_box(*dim, sides, *boundary),
        GraphSpec::Preset { name, size } => Graph::preset(*name, *size),
        GraphSpec::Edges { vertices, edges } => {
            let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
            Graph::from_edges(*vertices, &pairs)
        }
    };
    g.map_err(|e| CliError::Config(format!("graph: {e}")))
}

pub fn build_potential(spec: &PotentialSpec, g: &Graph) -> Result<Potential, CliError> {
    let v = match spec {
        PotentialSpec::Constant { value } => Potential::constant(g, *value),
        PotentialSpec::Periodic { cell, period } => Potential::periodic(g, cell, period),
        PotentialSpec::Well { vinf, dips } => {
            let mut map = BTreeMap::new();
            for (i, d) in dips.iter().enumerate() {
                if map.insert(d.vertex, d.depth).is_some() {
                    return Err(CliError::Config(format!(
                        "potential.dips[{i}].vertex: vertex {} listed twice",
                        d.vertex
                    )));
                }
            }
            Potential::well(g, *vinf, &map)
        }
        PotentialSpec::OrbitInvariant { values } => Potential::orbit_invariant(g, values),
        PotentialSpec::Values { values } => Potential::from_values(g, values.clone()),
    };
    v.map_err(|e| CliError::Config(format!("potential: {e}")))
}

fn strip_model_prefix(e: dnls_core::Error) -> String {
    match e {
        dnls_core::Error::Model(msg) => msg,
        other => other.to_string(),
    }
}

pub fn build_nonlinearity(
    spec: &NonlinearitySpec,
    g: &Graph,
) -> Result<PowerNonlinearity, CliError> {
    let coefficients = spec
        .coefficients
        .clone()
        .unwrap_or_else(|| vec![Coefficient::Constant(1.0); spec.exponents.len()]);
    let nl = PowerNonlinearity::new(coefficients, spec.exponents.clone())
        .map_err(|e| CliError::Config(format!("nonlinearity.{}", strip_model_prefix(e))))?;
    nl.check_graph(g)
        .map_err(|e| CliError::Config(format!("nonlinearity.{}", strip_model_prefix(e))))?;
    Ok(nl)
}

pub fn build_problem(config: &RunConfig) -> Result<Problem, CliError> {
    let g = build_graph(&config.graph)?;
    let v = build_potential(&config.potential, &g)?;
    let nl = build_nonlinearity(&config.nonlinearity, &g)?;
    config
        .solver
        .validate()
        .map_err(|e| CliError::Config(format!("solver: {e}")))?;
    Problem::new(g, v, Arc::new(nl))
        .map_err(|e| CliError::Config(format!("nonlinearity: {}", strip_model_prefix(e))))
}
