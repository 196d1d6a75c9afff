//! Run configuration: defaults, `key=value` config files (dotted keys, same
//! shape as calib.txt), and command-line overrides applied on top.

use std::path::{Path, PathBuf};

use crate::cost::{DwacParams, WindowSpec};
use crate::error::{Error, Result};
use crate::ingest::SceneNaming;
use crate::matching::{CostFn, MatchParams, Method};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset_root: PathBuf,
    pub output_dir: PathBuf,
    /// Working-resolution factor in (0, 1].
    pub scale: f64,
    pub methods: Vec<Method>,
    pub costfns: Vec<CostFn>,
    /// Run the full method x costfn cross product instead of the default
    /// assignment matrix.
    pub all: bool,
    /// Worker threads; 0 picks the machine default.
    pub threads: usize,
    pub naming: SceneNaming,
    pub params: MatchParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dataset_root: PathBuf::new(),
            output_dir: PathBuf::from("out"),
            scale: 0.25,
            methods: Method::ALL.to_vec(),
            costfns: CostFn::ALL.to_vec(),
            all: false,
            threads: 0,
            naming: SceneNaming::default(),
            params: MatchParams::default(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::MalformedValue {
        key: key.into(),
        value: value.trim().into(),
    })
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::MalformedValue { key: key.into(), value: other.into() }),
    }
}

fn parse_list<T>(value: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr<Err = Error>,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

impl RunConfig {
    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "dataset_root" => self.dataset_root = PathBuf::from(v),
            "output_dir" => self.output_dir = PathBuf::from(v),
            "scale" => self.scale = parse_num(key, v)?,
            "methods" => self.methods = parse_list(v)?,
            "costfns" => self.costfns = parse_list(v)?,
            "all" => self.all = parse_bool(key, v)?,
            "threads" => self.threads = parse_num(key, v)?,
            "window_radius" => self.params.window = WindowSpec::new(parse_num(key, v)?),
            "names.left" => self.naming.left = v.into(),
            "names.right" => self.naming.right = v.into(),
            "names.gt" => self.naming.gt = v.into(),
            "names.calib" => self.naming.calib = v.into(),
            "dp.lambda" => self.params.dp.lambda = parse_num(key, v)?,
            "dp.tau_s" => self.params.dp.tau_s = parse_num(key, v)?,
            "bp.iterations" => self.params.bp.iterations = parse_num(key, v)?,
            "bp.lambda" => self.params.bp.lambda = parse_num(key, v)?,
            "bp.tau_s" => self.params.bp.tau_s = parse_num(key, v)?,
            "bp.tau_d" => {
                self.params.bp.tau_d =
                    if v.is_empty() || v == "none" { None } else { Some(parse_num(key, v)?) }
            }
            "hog.cell_size" => self.params.hog.cell_size = parse_num(key, v)?,
            "hog.bins" => self.params.hog.bins = parse_num(key, v)?,
            "hog.block_cells" => self.params.hog.block_cells = parse_num(key, v)?,
            "hog.signed" => self.params.hog.signed = parse_bool(key, v)?,
            "hog.epsilon" => self.params.hog.epsilon = parse_num(key, v)?,
            "dwac.alpha" => self.params.dwac.alpha = parse_num(key, v)?,
            "dwac.window_radius" => {
                self.params.dwac = DwacParams {
                    alpha: self.params.dwac.alpha,
                    window: WindowSpec::new(parse_num(key, v)?),
                }
            }
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Parses a config file of newline-delimited `key=value` pairs. Blank
    /// lines and `#` comments are ignored.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "{}:{}: expected key=value, got `{line}`",
                    path.display(),
                    lineno + 1
                )));
            };
            self.set(key, value)?;
        }
        Ok(())
    }

    /// Checks the invariants before a run.
    pub fn validate(&self) -> Result<()> {
        if self.dataset_root.as_os_str().is_empty() {
            return Err(Error::Config("dataset_root is required".into()));
        }
        if !(self.scale > 0.0 && self.scale <= 1.0) {
            return Err(Error::Config(format!("scale {} outside (0, 1]", self.scale)));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("methods must be nonempty".into()));
        }
        if self.costfns.is_empty() {
            return Err(Error::Config("costfns must be nonempty".into()));
        }
        let p = &self.params;
        if p.dp.lambda < 0.0 || p.dp.tau_s <= 0.0 {
            return Err(Error::Config("dp: lambda >= 0 and tau_s > 0 required".into()));
        }
        if p.bp.iterations < 1 || p.bp.lambda < 0.0 || p.bp.tau_s <= 0.0 {
            return Err(Error::Config("bp: iterations >= 1, lambda >= 0, tau_s > 0 required".into()));
        }
        if p.hog.cell_size < 1 || p.hog.bins < 2 || p.hog.block_cells < 1 || p.hog.epsilon <= 0.0 {
            return Err(Error::Config("hog: cell_size >= 1, bins >= 2, block_cells >= 1, epsilon > 0".into()));
        }
        if !(0.0..=1.0).contains(&p.dwac.alpha) {
            return Err(Error::Config(format!("dwac.alpha {} outside [0, 1]", p.dwac.alpha)));
        }
        Ok(())
    }
}
