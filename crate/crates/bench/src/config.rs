//! Experiment configuration: INI sections `[grid]`, `[lattice]`, `[potential]`,
//! `[solver]`, `[prune]`, `[report]` and, for ħ sweeps, `[sweep]`.

use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use ini::{Ini, Properties};
use pvn_core::{
    make_grid, make_lattice, GridSpec, MethodTag, PotentialModel, TabulatedPotential, VnLatticeSpec,
};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridBlock {
    pub x_min: f64,
    pub length: f64,
    pub n_points: usize,
    pub hbar: f64,
}

impl GridBlock {
    pub fn spec(&self) -> Result<GridSpec> {
        Ok(make_grid(
            self.x_min,
            self.length,
            self.n_points,
            self.hbar,
        )?)
    }
}

/// How α is chosen when `alpha` is not given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    /// `dp / (2a)`.
    Default,
    /// `dp / (2aħ)`: Gaussian widths in the same ratio as the cell sides.
    Balanced,
}

impl FromStr for AlphaRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "default" => Ok(Self::Default),
            "balanced" => Ok(Self::Balanced),
            other => Err(format!("expected `default` or `balanced`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeBlock {
    pub n_x: usize,
    pub n_p: usize,
    pub alpha: Option<f64>,
    pub alpha_rule: AlphaRule,
}

impl LatticeBlock {
    pub fn spec(&self, grid: GridSpec) -> Result<VnLatticeSpec> {
        let alpha = match (self.alpha, self.alpha_rule) {
            (Some(alpha), _) => Some(alpha),
            (None, AlphaRule::Default) => None,
            (None, AlphaRule::Balanced) => {
                let probe = make_lattice(grid, self.n_x, self.n_p, None)?;
                Some(probe.default_alpha() / grid.hbar())
            }
        };
        Ok(make_lattice(grid, self.n_x, self.n_p, alpha)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneSelection {
    EnergyCut(f64),
    TargetCount(usize),
    /// Keep every cell (`e_cut = all`).
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneBlock {
    pub selection: PruneSelection,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceKind {
    Absolute,
    Relative,
}

impl FromStr for ToleranceKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "absolute" => Ok(Self::Absolute),
            "relative" => Ok(Self::Relative),
            other => Err(format!("expected `absolute` or `relative`, got `{other}`")),
        }
    }
}

/// Per-level bound for `digits` correct digits: `5·10^-(digits+1)`.
pub fn tolerance_for_digits(digits: u32) -> f64 {
    5.0 * 10f64.powi(-(digits as i32) - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBlock {
    pub label: String,
    pub n_levels: Option<usize>,
    pub oracle: bool,
    pub tolerance_digits: Option<u32>,
    pub tolerance: ToleranceKind,
    pub result_file: String,
    pub table_file: String,
    pub assumptions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepBlock {
    pub e_shell: f64,
    pub hbar_values: Vec<f64>,
    pub n_x_values: Vec<usize>,
    pub n_p_values: Vec<usize>,
    pub alpha_rule: AlphaRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub grid: GridBlock,
    pub lattice: Option<LatticeBlock>,
    pub potential: PotentialModel,
    pub method: MethodTag,
    pub prune: Option<PruneBlock>,
    pub report: ReportBlock,
    pub sweep: Option<SweepBlock>,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("grid", &["x_min", "length", "n_points", "hbar"]),
    ("lattice", &["n_x", "n_p", "alpha", "alpha_rule"]),
    (
        "potential",
        &[
            "kind",
            "mass",
            "omega",
            "depth",
            "steepness",
            "charge",
            "core_offset",
            "table",
        ],
    ),
    ("solver", &["method"]),
    ("prune", &["e_cut", "target_count", "margin"]),
    (
        "report",
        &[
            "label",
            "n_levels",
            "oracle",
            "tolerance_digits",
            "tolerance",
            "result_file",
            "table_file",
            "assumption",
        ],
    ),
    (
        "sweep",
        &[
            "e_shell",
            "hbar_values",
            "n_x_values",
            "n_p_values",
            "alpha_rule",
        ],
    ),
];

struct Section<'a> {
    name: &'static str,
    props: Option<&'a Properties>,
}

impl<'a> Section<'a> {
    fn raw(&self, key: &str) -> Option<&'a str> {
        self.props.and_then(|p| p.get(key)).map(str::trim)
    }

    fn field(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(text) => text
                .parse::<T>()
                .map(Some)
                .map_err(|e| BenchError::config(self.field(key), format!("`{text}`: {e}"))),
        }
    }

    fn req<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: Display,
    {
        self.opt(key)?
            .ok_or_else(|| BenchError::config(self.field(key), "missing"))
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>>
    where
        T::Err: Display,
    {
        let text = self
            .raw(key)
            .ok_or_else(|| BenchError::config(self.field(key), "missing"))?;
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<T>()
                    .map_err(|e| BenchError::config(self.field(key), format!("`{s}`: {e}")))
            })
            .collect()
    }
}

fn parse_bool(field: String, text: &str) -> Result<bool> {
    match text {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        other => Err(BenchError::config(
            field,
            format!("expected on/off, got `{other}`"),
        )),
    }
}

/// Reads a two-column `x V` table; columns separated by whitespace or a comma,
/// `#` starts a comment.
pub fn parse_table(text: &str) -> std::result::Result<TabulatedPotential, String> {
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let [x, v] = cols[..] else {
            return Err(format!("line {}: expected two columns", lineno + 1));
        };
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| format!("line {}: `{s}`: {e}", lineno + 1))
        };
        xs.push(parse(x)?);
        vs.push(parse(v)?);
    }
    TabulatedPotential::new(xs, vs).map_err(|e| e.to_string())
}

impl ExperimentConfig {
    /// Parses a config; `base_dir` resolves a relative `potential.table` path.
    pub fn from_ini_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let ini = Ini::load_from_str(text)
            .map_err(|e| BenchError::config("config", format!("not valid INI: {e}")))?;
        for (name, props) in ini.iter() {
            let Some(name) = name else {
                if let Some((key, _)) = props.iter().next() {
                    return Err(BenchError::config(key, "key outside any section"));
                }
                continue;
            };
            let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| *s == name) else {
                return Err(BenchError::config(name, "unknown section"));
            };
            for (key, _) in props.iter() {
                if !keys.contains(&key) {
                    return Err(BenchError::config(format!("{name}.{key}"), "unknown key"));
                }
            }
        }
        let section = |name: &'static str| Section {
            name,
            props: ini.section(Some(name)),
        };

        let g = section("grid");
        let grid = GridBlock {
            x_min: g.req("x_min")?,
            length: g.req("length")?,
            n_points: g.req("n_points")?,
            hbar: g.req("hbar")?,
        };

        let l = section("lattice");
        let lattice = match l.props {
            None => None,
            Some(_) => Some(LatticeBlock {
                n_x: l.req("n_x")?,
                n_p: l.req("n_p")?,
                alpha: l.opt("alpha")?,
                alpha_rule: l.opt("alpha_rule")?.unwrap_or(AlphaRule::Default),
            }),
        };

        let potential = Self::parse_potential(&section("potential"), base_dir)?;

        let method: MethodTag = section("solver").req("method")?;

        let p = section("prune");
        let prune = match p.props {
            None => None,
            Some(_) => {
                let e_cut = p.raw("e_cut");
                let target: Option<usize> = p.opt("target_count")?;
                let selection = match (e_cut, target) {
                    (Some(_), Some(_)) => {
                        return Err(BenchError::config(
                            "prune",
                            "give exactly one of e_cut and target_count",
                        ))
                    }
                    (None, None) => {
                        return Err(BenchError::config(
                            "prune",
                            "needs one of e_cut and target_count",
                        ))
                    }
                    (Some("all"), None) => PruneSelection::All,
                    (Some(_), None) => {
                        let e: f64 = p.req("e_cut")?;
                        if !e.is_finite() {
                            return Err(BenchError::config(
                                "prune.e_cut",
                                "must be finite; use `all` to keep every cell",
                            ));
                        }
                        PruneSelection::EnergyCut(e)
                    }
                    (None, Some(0)) => {
                        return Err(BenchError::config(
                            "prune.target_count",
                            "must be at least 1",
                        ))
                    }
                    (None, Some(k)) => PruneSelection::TargetCount(k),
                };
                Some(PruneBlock {
                    selection,
                    margin: p.opt("margin")?.unwrap_or(0.0),
                })
            }
        };

        let r = section("report");
        let default_tolerance = match potential {
            PotentialModel::Coulomb { .. } => ToleranceKind::Relative,
            _ => ToleranceKind::Absolute,
        };
        let label = r.raw("label").unwrap_or("experiment").to_string();
        let report = ReportBlock {
            n_levels: r.opt("n_levels")?,
            oracle: match r.raw("oracle") {
                None => true,
                Some(text) => parse_bool(r.field("oracle"), text)?,
            },
            tolerance_digits: r.opt("tolerance_digits")?,
            tolerance: r.opt("tolerance")?.unwrap_or(default_tolerance),
            result_file: r
                .raw("result_file")
                .map_or_else(|| format!("{label}.json"), str::to_string),
            table_file: r
                .raw("table_file")
                .map_or_else(|| format!("{label}.csv"), str::to_string),
            assumptions: r
                .props
                .map(|p| {
                    p.get_all("assumption")
                        .map(|s| s.trim().to_string())
                        .collect()
                })
                .unwrap_or_default(),
            label,
        };

        let s = section("sweep");
        let sweep = match s.props {
            None => None,
            Some(_) => Some(SweepBlock {
                e_shell: s.req("e_shell")?,
                hbar_values: s.list("hbar_values")?,
                n_x_values: s.list("n_x_values")?,
                n_p_values: s.list("n_p_values")?,
                alpha_rule: s.opt("alpha_rule")?.unwrap_or(AlphaRule::Default),
            }),
        };

        let config = Self {
            grid,
            lattice,
            potential,
            method,
            prune,
            report,
            sweep,
        };
        config.validate()?;
        Ok(config)
    }

    fn parse_potential(p: &Section<'_>, base_dir: Option<&Path>) -> Result<PotentialModel> {
        let kind: String = p.req("kind")?;
        let mass: f64 = p.req("mass")?;
        let model = match kind.as_str() {
            "harmonic" => PotentialModel::harmonic(mass, p.req("omega")?),
            "morse" => PotentialModel::morse(p.req("depth")?, p.req("steepness")?, mass),
            "coulomb" => PotentialModel::coulomb(
                p.req("charge")?,
                mass,
                p.opt("core_offset")?.unwrap_or(0.0),
            ),
            "free" => PotentialModel::free(mass),
            "tabulated" => {
                let name: String = p.req("table")?;
                let path = match base_dir {
                    Some(dir) => dir.join(&name),
                    None => name.into(),
                };
                let text = std::fs::read_to_string(&path).map_err(|source| BenchError::Read {
                    path: path.clone(),
                    source,
                })?;
                let table = parse_table(&text).map_err(|e| {
                    BenchError::config("potential.table", format!("{}: {e}", path.display()))
                })?;
                PotentialModel::tabulated(mass, table)
            }
            other => {
                return Err(BenchError::config(
                    "potential.kind",
                    format!("unknown kind `{other}` (harmonic, morse, coulomb, free, tabulated)"),
                ))
            }
        };
        model.map_err(|e| match e {
            pvn_core::Error::InvalidArgument { field, reason } => {
                BenchError::config(format!("potential.{field}"), reason)
            }
            other => other.into(),
        })
    }

    fn validate(&self) -> Result<()> {
        let grid = self.grid.spec().map_err(field_prefix("grid"))?;
        if let Some(lattice) = &self.lattice {
            lattice.spec(grid).map_err(field_prefix("lattice"))?;
        }
        let needs_lattice = self.method != MethodTag::Fgh || self.prune.is_some();
        if needs_lattice && self.lattice.is_none() {
            return Err(BenchError::config(
                "lattice",
                format!("required for method {}", self.method),
            ));
        }
        if self.prune.is_some() && self.method != MethodTag::Bvn {
            return Err(BenchError::config(
                "prune",
                format!("only valid with method bvn, not {}", self.method),
            ));
        }
        if self.method == MethodTag::Bvn && self.prune.is_none() && self.sweep.is_none() {
            return Err(BenchError::config(
                "prune",
                "method bvn needs e_cut or target_count",
            ));
        }
        if let Some(PruneSelection::TargetCount(k)) = self.prune.as_ref().map(|p| p.selection) {
            if k > grid.n_points() {
                return Err(BenchError::config(
                    "prune.target_count",
                    format!("{k} exceeds the {} lattice cells", grid.n_points()),
                ));
            }
        }
        if self.report.n_levels == Some(0) {
            return Err(BenchError::config("report.n_levels", "must be at least 1"));
        }
        if let Some(sweep) = &self.sweep {
            let n = sweep.hbar_values.len();
            if n == 0 {
                return Err(BenchError::config("sweep.hbar_values", "empty"));
            }
            if sweep.n_x_values.len() != n || sweep.n_p_values.len() != n {
                return Err(BenchError::config(
                    "sweep",
                    "hbar_values, n_x_values and n_p_values need the same length",
                ));
            }
            if sweep.hbar_values.iter().any(|h| !(*h > 0.0)) {
                return Err(BenchError::config("sweep.hbar_values", "must be positive"));
            }
            if !sweep.e_shell.is_finite() {
                return Err(BenchError::config("sweep.e_shell", "must be finite"));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_ini_str(&text, path.parent())
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        self.grid.spec()
    }

    pub fn lattice_spec(&self) -> Result<VnLatticeSpec> {
        let lattice = self
            .lattice
            .as_ref()
            .ok_or_else(|| BenchError::config("lattice", "missing"))?;
        lattice.spec(self.grid_spec()?)
    }

    /// Levels compared against the oracle when `report.n_levels` is not set.
    pub fn n_levels(&self) -> usize {
        if let Some(n) = self.report.n_levels {
            return n;
        }
        match &self.potential {
            PotentialModel::Morse { .. } => self
                .potential
                .bound_state_count(self.grid.hbar)
                .unwrap_or(1)
                .max(1),
            PotentialModel::Coulomb { .. } => 9,
            _ => 8,
        }
    }

    /// Copy with the grid and lattice of sweep point `index`.
    pub fn sweep_point(&self, index: usize) -> Result<Self> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| BenchError::config("sweep", "missing"))?;
        let (n_x, n_p) = (sweep.n_x_values[index], sweep.n_p_values[index]);
        let mut point = self.clone();
        point.grid.hbar = sweep.hbar_values[index];
        point.grid.n_points = n_x * n_p;
        point.lattice = Some(LatticeBlock {
            n_x,
            n_p,
            alpha: None,
            alpha_rule: sweep.alpha_rule,
        });
        point.report.n_levels = None;
        point.sweep = None;
        // the sweep searches the cut itself; the echoed config records it
        point.prune = Some(PruneBlock {
            selection: PruneSelection::All,
            margin: 0.0,
        });
        point.validate()?;
        Ok(point)
    }
}

fn field_prefix(section: &'static str) -> impl Fn(BenchError) -> BenchError {
    move |e| match e {
        BenchError::Numerical(pvn_core::Error::InvalidArgument { field, reason }) => {
            BenchError::config(format!("{section}.{field}"), reason)
        }
        BenchError::Numerical(pvn_core::Error::LatticeMismatch {
            lattice_cells,
            grid_points,
        }) => BenchError::config(
            section,
            format!("n_x·n_p = {lattice_cells} must equal grid.n_points = {grid_points}"),
        ),
        other => other,
    }
}
