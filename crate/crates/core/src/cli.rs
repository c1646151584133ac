//! Command-line interface. Every command prints one JSON document on stdout.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::{Field, Vector};
use crate::baseconstruct::{certify, find_base, find_base_fallback};
use crate::error::{Error, Result};
use crate::group::cap_from_env;
use crate::matgrp::{
    field_of, matrix_to_entries, orbit_size, vector_from_entries, vector_to_entries, Entry, MatGroup, MatGroupSpec,
};
use crate::partitions::{
    affine_partition, mixed_char_partition, partition_properties, regular_coloring, AffineSpace,
};
use crate::permgrp::{coloring_stabilizer, is_regular_partition, point_stabilizer, PermGroup, PermGroupSpec, SetPartition};

#[derive(Parser, Debug)]
#[command(name = "grpbase", version, about = "Regular partitions and two-element bases of finite groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Enumeration cap (default: GRPBASE_CAP or 2000000).
    #[arg(long)]
    pub cap: Option<usize>,
    /// Accepted for compatibility; output is always JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Regular partition of GF(q)^n, optionally against a permutation group on its points.
    Partition {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        group: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Regular partition of a direct sum of spaces in distinct characteristics.
    Mixedpartition {
        /// Summands as `q^n`, comma separated, e.g. `2^3,3`.
        #[arg(long)]
        spaces: String,
        #[arg(long)]
        group: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Coloring with at most p colors fixed only by the identity.
    Color {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Two vectors x, y with trivial pointwise stabilizer.
    Base2 {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        fallback_only: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Re-check a partition, coloring or base against a group.
    Verify {
        #[arg(long)]
        group: PathBuf,
        /// Output of `partition`, `mixedpartition`, `color` or `base2`.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Orbit size of a point or vector.
    Orbit {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        common: Common,
    },
}

/// `{"kind": "perm", "degree": .., "generators": ..}` or
/// `{"kind": "matrix", "p": .., "a": .., "dim": .., "generators": ..}`.
#[derive(Deserialize, Debug, Clone)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupFile {
    Perm(PermGroupSpec),
    Matrix(MatGroupSpec),
}

pub enum LoadedGroup {
    Perm(PermGroup),
    Matrix(MatGroup),
}

impl GroupFile {
    pub fn load(&self, cap: usize) -> Result<LoadedGroup> {
        Ok(match self {
            GroupFile::Perm(s) => LoadedGroup::Perm(s.build()?.enumerate(cap)?),
            GroupFile::Matrix(s) => LoadedGroup::Matrix(s.build()?.enumerate(cap)?),
        })
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_group(path: &Path, cap: usize) -> Result<LoadedGroup> {
    read_json::<GroupFile>(path)?.load(cap)
}

fn perm_group_arg(path: &Path, cap: usize) -> Result<PermGroup> {
    match load_group(path, cap)? {
        LoadedGroup::Perm(g) => Ok(g),
        LoadedGroup::Matrix(_) => Err(Error::Input("expected a permutation group".into())),
    }
}

fn matrix_group_arg(path: &Path, cap: usize) -> Result<MatGroup> {
    match load_group(path, cap)? {
        LoadedGroup::Matrix(g) => Ok(g),
        LoadedGroup::Perm(_) => Err(Error::Input("expected a matrix group".into())),
    }
}

/// `1,2,0` or a JSON list whose entries are integers or coefficient lists.
fn parse_entries(s: &str) -> Result<Vec<Entry>> {
    let t = s.trim();
    let text = if t.starts_with('[') { t.to_string() } else { format!("[{t}]") };
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("bad vector `{s}`: {e}")))
}

fn parse_vector(f: &Field, dim: usize, s: &str) -> Result<Vector> {
    let v = vector_from_entries(f, &parse_entries(s)?)?;
    if v.len() != dim {
        return Err(Error::Input(format!("vector has length {}, expected {dim}", v.len())));
    }
    Ok(v)
}

fn parse_spaces(s: &str) -> Result<Vec<AffineSpace>> {
    s.split(',')
        .map(|item| {
            let (q, n) = item.trim().split_once('^').unwrap_or((item.trim(), "1"));
            let q = q.parse().map_err(|_| Error::Input(format!("bad summand `{item}`")))?;
            let n = n.parse().map_err(|_| Error::Input(format!("bad summand `{item}`")))?;
            AffineSpace::new(q, n)
        })
        .collect()
}

fn parts_json(part: &SetPartition) -> Value {
    json!(part.parts().iter().map(|p| p.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// Outcome of a command: a JSON document and an exit code.
pub struct Outcome {
    pub code: i32,
    pub body: Value,
}

fn ok(body: Value) -> Outcome {
    Outcome { code: 0, body }
}

fn run_command(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Partition { q, n, group, common } => {
            let cap = common.cap.unwrap_or_else(cap_from_env);
            let space = AffineSpace::new(*q, *n)?;
            let g = group.as_deref().map(|p| perm_group_arg(p, cap)).transpose()?;
            let ap = affine_partition(&space, g.as_ref())?;
            let props = partition_properties(&ap.partition, ap.case);
            Ok(ok(json!({
                "case": ap.case.number(),
                "degree": space.size(),
                "parts": parts_json(&ap.partition),
                "large_part_ok": props.large_part_ok,
                "unique_size_part": props.unique_size_part,
            })))
        }
        Command::Mixedpartition { spaces, group, common } => {
            let cap = common.cap.unwrap_or_else(cap_from_env);
            let spaces = parse_spaces(spaces)?;
            let g = group.as_deref().map(|p| perm_group_arg(p, cap)).transpose()?;
            let part = mixed_char_partition(&spaces, g.as_ref())?;
            Ok(ok(json!({ "degree": part.degree(), "parts": parts_json(&part) })))
        }
        Command::Color { group, p, common } => {
            let cap = common.cap.unwrap_or_else(cap_from_env);
            let g = perm_group_arg(group, cap)?;
            let c = regular_coloring(&g, *p)?;
            Ok(ok(json!({ "p": c.p, "colors": c.colors })))
        }
        Command::Base2 { group, fallback_only, common } => {
            let cap = common.cap.unwrap_or_else(cap_from_env);
            let g = matrix_group_arg(group, cap)?;
            let bp = if *fallback_only { find_base_fallback(&g, cap)? } else { find_base(&g, cap)? };
            let f = field_of(&g);
            Ok(ok(json!({
                "x": vector_to_entries(f, &bp.x),
                "y": vector_to_entries(f, &bp.y),
                "path": bp.path,
                "certificate_order": bp.certificate_order(),
            })))
        }
        Command::Verify { group, partition, x, y, common } => {
            let cap = common.cap.unwrap_or_else(cap_from_env);
            let g = load_group(group, cap)?;
            let doc: Option<Value> = partition.as_deref().map(read_json).transpose()?;
            verify(&g, doc.as_ref(), x.as_deref(), y.as_deref())
        }
        Command::Orbit { group, x, common } => {
            let cap = common.cap.unwrap_or_else(cap_from_env);
            match load_group(group, cap)? {
                LoadedGroup::Perm(g) => {
                    let pt: usize = x.trim().parse().map_err(|_| Error::Input(format!("bad point `{x}`")))?;
                    if pt >= g.ops().degree {
                        return Err(Error::Input(format!("point {pt} out of range")));
                    }
                    let stab = point_stabilizer(&g, pt).order();
                    Ok(ok(json!({ "group_order": g.order(), "orbit_size": g.order() / stab })))
                }
                LoadedGroup::Matrix(g) => {
                    let v = parse_vector(field_of(&g), g.ops().dim, x)?;
                    Ok(ok(json!({ "group_order": g.order(), "orbit_size": orbit_size(&g, &v) })))
                }
            }
        }
    }
}

fn verify(g: &LoadedGroup, doc: Option<&Value>, x: Option<&str>, y: Option<&str>) -> Result<Outcome> {
    let field = |k: &str| doc.and_then(|d| d.get(k));
    match g {
        LoadedGroup::Perm(g) => {
            let n = g.ops().degree;
            if let Some(parts) = field("parts") {
                let parts: Vec<Vec<usize>> = serde_json::from_value(parts.clone())
                    .map_err(|e| Error::Input(format!("bad parts: {e}")))?;
                let part = SetPartition::from_vecs(n, parts).map_err(|e| Error::Input(e.to_string()))?;
                return Ok(match is_regular_partition(g, &part) {
                    Ok(()) => ok(json!({ "ok": true, "kind": "partition" })),
                    Err(w) => Outcome { code: 1, body: json!({ "ok": false, "kind": "partition", "witness": w.images() }) },
                });
            }
            if let Some(colors) = field("colors") {
                let colors: Vec<u32> = serde_json::from_value(colors.clone())
                    .map_err(|e| Error::Input(format!("bad colors: {e}")))?;
                if colors.len() != n {
                    return Err(Error::Input(format!("{} colors for degree {n}", colors.len())));
                }
                let stab = coloring_stabilizer(g, &colors);
                let witness = stab.elements().iter().find(|h| !h.is_identity());
                return Ok(match witness {
                    None => ok(json!({ "ok": true, "kind": "coloring" })),
                    Some(w) => Outcome { code: 1, body: json!({ "ok": false, "kind": "coloring", "witness": w.images() }) },
                });
            }
            Err(Error::Input("nothing to verify for a permutation group".into()))
        }
        LoadedGroup::Matrix(g) => {
            let f = field_of(g);
            let dim = g.ops().dim;
            let vec_of = |flag: Option<&str>, key: &str| -> Result<Option<Vector>> {
                if let Some(s) = flag {
                    return parse_vector(f, dim, s).map(Some);
                }
                match field(key) {
                    None => Ok(None),
                    Some(v) => {
                        let entries: Vec<Entry> = serde_json::from_value(v.clone())
                            .map_err(|e| Error::Input(format!("bad `{key}`: {e}")))?;
                        let v = vector_from_entries(f, &entries)?;
                        if v.len() != dim {
                            return Err(Error::Input(format!("`{key}` has length {}, expected {dim}", v.len())));
                        }
                        Ok(Some(v))
                    }
                }
            };
            let (Some(xv), Some(yv)) = (vec_of(x, "x")?, vec_of(y, "y")?) else {
                return Err(Error::Input("verify on a matrix group needs x and y".into()));
            };
            let cert = certify(g, &xv, &yv);
            Ok(match cert.iter().find(|h| !h.is_identity()) {
                None => ok(json!({ "ok": true, "kind": "base", "certificate_order": 1 })),
                Some(w) => Outcome {
                    code: 1,
                    body: json!({
                        "ok": false,
                        "kind": "base",
                        "certificate_order": cert.len(),
                        "witness": matrix_to_entries(f, w),
                    }),
                },
            })
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoBase | Error::Construction { .. } => 1,
        _ => 2,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(if code == 0 { out as &mut dyn Write } else { err as &mut dyn Write }, "{e}");
            return code;
        }
    };
    match run_command(&cli.command) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.body);
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
