//! Named constructions and their parameters.

use anyhow::{bail, Context, Result};
use boxgt::constructions::*;
use boxgt::geometry::Config;
use boxgt::io;

use crate::GenerateArgs;

pub const NAMES: &[&str] = &[
    "grid-lines",
    "embed-grid-lines-2d",
    "subspaces",
    "project-subspaces",
    "hyperplanes",
    "long-rect",
    "long-rect-tower",
    "single-defective-grid",
    "disjoint",
    "hard-instance",
];

/// What a registry entry produces.
pub enum Generated {
    Config(Config),
    Points(Vec<Vec<i64>>),
}

struct Params<'a> {
    name: &'a str,
    args: &'a GenerateArgs,
    used: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn new(name: &'a str, args: &'a GenerateArgs) -> Self {
        Params {
            name,
            args,
            used: Vec::new(),
        }
    }

    fn value(&mut self, key: &'static str) -> Option<usize> {
        self.used.push(key);
        match key {
            "n" => self.args.n,
            "d" => self.args.d,
            "k" => self.args.k,
            "t" => self.args.t,
            "m" => self.args.m,
            "steps" => self.args.steps,
            _ => None,
        }
    }

    fn get(&mut self, key: &'static str) -> Result<usize> {
        self.value(key).with_context(|| format!("{} needs --{key}", self.name))
    }

    fn or(&mut self, key: &'static str, default: usize) -> usize {
        self.value(key).unwrap_or(default)
    }

    fn finish(self) -> Result<()> {
        let given = [
            ("n", self.args.n.is_some()),
            ("d", self.args.d.is_some()),
            ("k", self.args.k.is_some()),
            ("t", self.args.t.is_some()),
            ("m", self.args.m.is_some()),
            ("steps", self.args.steps.is_some()),
            ("base", self.args.base.is_some()),
            ("base-file", self.args.base_file.is_some()),
        ];
        for (key, present) in given {
            if present && !self.used.contains(&key) {
                bail!("{} does not take --{key}", self.name);
            }
        }
        Ok(())
    }
}

pub fn generate(name: &str, args: &GenerateArgs) -> Result<Generated> {
    let mut p = Params::new(name, args);
    let out = match name {
        "grid-lines" => Generated::Config(grid_lines(p.get("n")?, p.get("d")?)?),
        "embed-grid-lines-2d" => Generated::Config(embed_grid_lines_2d(p.get("n")?, p.get("d")?)?),
        "subspaces" => Generated::Config(subspace_config(p.get("k")?, p.get("d")?, p.get("m")?)?),
        "project-subspaces" => Generated::Config(project_subspace_config(p.get("k")?, p.get("d")?, p.get("m")?)?),
        "hyperplanes" => Generated::Config(hyperplane_config(p.get("k")?, p.get("t")?, p.get("m")?)?),
        "long-rect" => {
            p.used.extend(["base", "base-file"]);
            let mut config = long_rect_base(&mut p)?;
            let k = p.get("k")?;
            for _ in 0..p.or("steps", 1) {
                config = long_rect_step(&config, k)?;
            }
            Generated::Config(config)
        }
        "long-rect-tower" => {
            let k = p.value("k");
            Generated::Config(long_rect_tower(p.get("d")?, p.get("t")?, p.get("m")?, k)?)
        }
        "single-defective-grid" => Generated::Config(single_defective_grid(p.get("n")?)?),
        "disjoint" => Generated::Config(disjoint_boxes(p.get("m")?, p.or("d", 2))?),
        "hard-instance" => Generated::Points(boxgt::patterns::hard_instance(p.get("k")? as u64)),
        _ => bail!("unknown construction {name:?}; known: {}", NAMES.join(", ")),
    };
    p.finish()?;
    Ok(out)
}

fn long_rect_base(p: &mut Params) -> Result<Config> {
    match (&p.args.base, &p.args.base_file) {
        (Some(_), Some(_)) => bail!("--base and --base-file are exclusive"),
        (None, Some(path)) => {
            let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(io::parse_config(&bytes).with_context(|| format!("parsing {}", path.display()))?)
        }
        (base, None) => {
            let base = base.as_deref().unwrap_or("grid2d");
            Ok(match base {
                "grid2d" => grid_lines(p.get("n")?, 2)?,
                "grid-lines" => grid_lines(p.get("n")?, p.get("d")?)?,
                "embed" => embed_grid_lines_2d(p.get("n")?, p.get("d")?)?,
                "single-defective-grid" => single_defective_grid(p.get("n")?)?,
                "hyperplanes" => hyperplane_config(p.get("k")?, p.get("t")?, p.get("m")?)?,
                other => bail!(
                    "unknown base {other:?}; known: grid2d, grid-lines, embed, single-defective-grid, hyperplanes"
                ),
            })
        }
    }
}

/// The lower-dimensional equivalent of a generated grid-line or subspace
/// configuration, rebuilt from its recorded parameters.
pub fn embed(config: &Config) -> Result<Config> {
    let claims = config.claims();
    let param = |key: &str| -> Result<usize> {
        let v = claims
            .params
            .get(key)
            .with_context(|| format!("input has no parameter {key:?}"))?;
        usize::try_from(*v).with_context(|| format!("parameter {key} = {v} is negative"))
    };
    let (reference, embedded) = match claims.construction.as_deref() {
        Some("grid-lines") => {
            let (n, d) = (param("n")?, param("d")?);
            (grid_lines(n, d)?, embed_grid_lines_2d(n, d)?)
        }
        Some("subspaces") => {
            let (k, d, m) = (param("k")?, param("d")?, param("m")?);
            (subspace_config(k, d, m)?, project_subspace_config(k, d, m)?)
        }
        other => bail!("embed takes grid-lines or subspaces configurations, got {other:?}"),
    };
    if reference.induce()? != config.induce()? {
        bail!("input does not match the configuration its parameters describe");
    }
    Ok(embedded)
}

pub fn to_json(g: &Generated) -> Result<String> {
    Ok(match g {
        Generated::Config(c) => io::to_json(c)?,
        Generated::Points(p) => io::to_json(p)?,
    })
}
