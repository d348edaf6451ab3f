//! Command-line front end: JSON operands in, JSON (or DOT) out, with a
//! fixed exit-code contract.
//!
//! Exit codes: `0` success, `2` malformed input (JSON syntax, schema
//! violations, flag conflicts), `3` domain errors raised by the library
//! (`SingularMatrix`, `NotAVertex`, `CapExceeded`, `ConstantDirection`,
//! ...). Identical invocations produce identical output bytes.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::building::{
    act, cartan, distance2, fold_fixed, relpos, stabilizes, StabMode,
};
use crate::compactification::{boundary_stab_check, eval_poly, ray_limit, stratum_of};
use crate::json::{
    self, as_array, as_object, ball_value, decimal_string, get_field, parse_document,
    parse_matrix_value, parse_point, parse_polynomial, parse_rational_value, parse_scalar_value,
    parse_vertex, point_value, relpos_value, resolve_config, snf_value, stratum_value, val_string,
    vertex_value, WireError, WireResult,
};
use crate::linalg::{snf_dvr, SnfResult};
use crate::scalars::Val;
use crate::tree::{
    ball, galois_gap, link_counts_sl3, path as tree_path, TreeBall, TreeVertex, DEFAULT_ENUM_CAP,
};

#[derive(Parser, Debug)]
#[command(
    name = "bt",
    version,
    about = "Exact computations in the space of p-adic norms: distances, normal forms, boundary seminorms, and the rank-2 lattice tree"
)]
pub struct Cli {
    /// Prime p, used when an operand does not carry its own "p" field.
    #[arg(long, global = true)]
    pub prime: Option<u64>,

    /// Ramification index m of k_m (default 1).
    #[arg(long, global = true)]
    pub ram: Option<u32>,

    /// Vertex cap for tree enumeration (default 100000).
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    /// Write the output document to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Add 12-digit decimal renderings next to exact rational outputs.
    #[arg(long, global = true)]
    pub approx: bool,

    /// Read the JSON operand from FILE instead of stdin.
    #[arg(long = "in", global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a point at a vector: operand {"x": point, "vec": rational array}.
    Eval,
    /// Apply a matrix to a point: operand {"g": matrix, "x": point}.
    Act,
    /// Relative position of two norms: operand {"x": point, "y": point}.
    Relpos,
    /// Squared CAT(0) distance: operand {"x": point, "y": point}.
    Distance,
    /// Cartan decomposition of a base-field matrix: operand {"matrix": matrix}.
    Cartan,
    /// Smith normal form over the valuation ring: operand {"matrix": matrix}.
    Snf,
    /// Stabilizer membership: operand {"g": matrix, "x": point, "mode"?: "norm"|"class"}.
    StabCheck,
    /// Fixed-half-apartment test for an elementary unipotent:
    /// operand {"i": int, "j": int, "lam": scalar, "x": point}.
    Fold,
    /// Boundary limit of a weight ray: operand {"x": point, "dir": rational array}.
    RayLimit,
    /// Kernel and quotient data of a seminorm: operand {"x": point}.
    Stratum,
    /// Gauss evaluation of a polynomial: operand {"x": point, "poly": polynomial}.
    EvalPoly,
    /// Enumerate the tree ball around a vertex (standard lattice unless an
    /// operand {"vertex": matrix} is supplied via --in).
    TreeBall {
        #[arg(long)]
        radius: u32,
    },
    /// Geodesic between two tree vertices: operand {"u": matrix, "v": matrix}.
    TreePath,
    /// DOT graph of a tree ball.
    TreeDot {
        #[arg(long)]
        radius: u32,
    },
    /// Local incidence counts for the rank-3 lattice link at --prime.
    LinkCount,
    /// Fixed-point-gap criterion for a degree-e totally ramified extension.
    GaloisGap {
        #[arg(long)]
        e: u64,
    },
}

/// Renders a tree ball as a deterministic undirected DOT graph: nodes
/// labeled by canonical keys, sorted; one edge per BFS parent link, so a
/// ball always has `node count − 1` edges.
pub fn export_dot(b: &TreeBall) -> String {
    let mut out = String::from("graph tree {\n");
    for v in &b.vertices {
        out.push_str(&format!("  \"{}\";\n", v.key_string()));
    }
    for &(a, bidx) in &b.edges {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\";\n",
            b.vertices[a].key_string(),
            b.vertices[bidx].key_string()
        ));
    }
    out.push_str("}\n");
    out
}

fn read_operand(cli: &Cli) -> WireResult<Value> {
    let raw = match &cli.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| WireError::Parse(format!("cannot read {}: {}", path.display(), e)))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| WireError::Parse(format!("cannot read stdin: {}", e)))?;
            buf
        }
    };
    parse_document(&raw)
}

fn approx_field(obj: &mut Map<String, Value>, name: &str, value: &Val, enabled: bool) {
    if enabled {
        if let Val::Finite(r) = value {
            obj.insert(format!("{}_approx", name), Value::String(decimal_string(r, 12)));
        }
    }
}

fn emit(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("JSON emission cannot fail");
    s.push('\n');
    s
}

fn resolve_cap(cli: &Cli) -> WireResult<usize> {
    let cap = cli.cap.unwrap_or(DEFAULT_ENUM_CAP);
    if cap == 0 {
        return Err(WireError::Parse("--cap must be >= 1".into()));
    }
    Ok(cap)
}

fn tree_center(cli: &Cli) -> WireResult<TreeVertex> {
    if cli.input.is_some() {
        let doc = read_operand(cli)?;
        let obj = as_object(&doc, "operand")?;
        let cfg = resolve_config(Some(obj), cli.prime, cli.ram, "operand")?;
        parse_vertex(get_field(obj, "vertex", "operand")?, cfg, "operand.vertex")
    } else {
        let cfg = resolve_config(None, cli.prime, cli.ram, "operand")?;
        TreeVertex::standard(cfg).map_err(WireError::Domain)
    }
}

/// Dispatches a parsed command line and returns the output document.
pub fn run(cli: &Cli) -> WireResult<String> {
    match &cli.command {
        Command::Eval => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let x = parse_point(get_field(obj, "x", "operand")?, cli.prime, cli.ram, "operand.x")?;
            let varr = as_array(get_field(obj, "vec", "operand")?, "operand.vec")?;
            let vec = varr
                .iter()
                .enumerate()
                .map(|(i, v)| parse_rational_value(v, &format!("operand.vec[{}]", i)))
                .collect::<WireResult<Vec<_>>>()?;
            let value = x.eval_rational(&vec)?;
            let mut out = Map::new();
            out.insert("value".into(), Value::String(val_string(&value)));
            approx_field(&mut out, "value", &value, cli.approx);
            Ok(emit(&Value::Object(out)))
        }
        Command::Act => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let x = parse_point(get_field(obj, "x", "operand")?, cli.prime, cli.ram, "operand.x")?;
            let g = parse_matrix_value(get_field(obj, "g", "operand")?, x.config(), "operand.g")?;
            let gx = act(&g, &x)?;
            Ok(emit(&point_value(&gx)))
        }
        Command::Relpos => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let x = parse_point(get_field(obj, "x", "operand")?, cli.prime, cli.ram, "operand.x")?;
            let y = parse_point(get_field(obj, "y", "operand")?, cli.prime, cli.ram, "operand.y")?;
            let rp = relpos(&x, &y)?;
            Ok(emit(&relpos_value(&rp)))
        }
        Command::Distance => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let x = parse_point(get_field(obj, "x", "operand")?, cli.prime, cli.ram, "operand.x")?;
            let y = parse_point(get_field(obj, "y", "operand")?, cli.prime, cli.ram, "operand.y")?;
            let d2 = distance2(&x, &y)?;
            let mut out = Map::new();
            out.insert("distance2".into(), Value::String(json::rational_string(&d2)));
            approx_field(&mut out, "distance2", &Val::Finite(d2), cli.approx);
            Ok(emit(&Value::Object(out)))
        }
        Command::Cartan => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let cfg = resolve_config(Some(obj), cli.prime, cli.ram, "operand")?;
            let g = parse_matrix_value(get_field(obj, "matrix", "operand")?, cfg, "operand.matrix")?;
            let dec = cartan(&g)?;
            let as_snf = SnfResult {
                u: dec.u.clone(),
                exponents: dec.exponents.deltas().to_vec(),
                w: dec.w.clone(),
            };
            Ok(emit(&snf_value(&as_snf)))
        }
        Command::Snf => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let cfg = resolve_config(Some(obj), cli.prime, cli.ram, "operand")?;
            let m = parse_matrix_value(get_field(obj, "matrix", "operand")?, cfg, "operand.matrix")?;
            let snf = snf_dvr(&m)?;
            Ok(emit(&snf_value(&snf)))
        }
        Command::StabCheck => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let x = parse_point(get_field(obj, "x", "operand")?, cli.prime, cli.ram, "operand.x")?;
            let g = parse_matrix_value(get_field(obj, "g", "operand")?, x.config(), "operand.g")?;
            let fixes = if x.is_norm() {
                let mode = match obj.get("mode") {
                    None => StabMode::Norm,
                    Some(v) => match json::as_str(v, "operand.mode")? {
                        "norm" => StabMode::Norm,
                        "class" => StabMode::Class,
                        other => {
                            return Err(WireError::Parse(format!(
                                "operand.mode: expected \"norm\" or \"class\", got {:?}",
                                other
                            )))
                        }
                    },
                };
                stabilizes(&g, &x, mode)?
            } else {
                boundary_stab_check(&g, &x)?
            };
            Ok(emit(&json!({ "stabilizes": fixes })))
        }
        Command::Fold => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let x = parse_point(get_field(obj, "x", "operand")?, cli.prime, cli.ram, "operand.x")?;
            let i = get_index(obj, "i")?;
            let j = get_index(obj, "j")?;
            let lam = parse_scalar_value(get_field(obj, "lam", "operand")?, x.config(), "operand.lam")?;
            let fixed = fold_fixed(i, j, &lam, &x)?;
            Ok(emit(&json!({ "fixed": fixed })))
        }
        Command::RayLimit => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let x = parse_point(get_field(obj, "x", "operand")?, cli.prime, cli.ram, "operand.x")?;
            let darr = as_array(get_field(obj, "dir", "operand")?, "operand.dir")?;
            let dir = darr
                .iter()
                .enumerate()
                .map(|(i, v)| parse_rational_value(v, &format!("operand.dir[{}]", i)))
                .collect::<WireResult<Vec<_>>>()?;
            let lim = ray_limit(&x, &dir)?;
            Ok(emit(&point_value(&lim)))
        }
        Command::Stratum => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let x = parse_point(get_field(obj, "x", "operand")?, cli.prime, cli.ram, "operand.x")?;
            Ok(emit(&stratum_value(&stratum_of(&x))))
        }
        Command::EvalPoly => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let x = parse_point(get_field(obj, "x", "operand")?, cli.prime, cli.ram, "operand.x")?;
            let f = parse_polynomial(get_field(obj, "poly", "operand")?, x.dim(), "operand.poly")?;
            let value = eval_poly(&x, &f);
            let mut out = Map::new();
            out.insert("value".into(), Value::String(val_string(&value)));
            approx_field(&mut out, "value", &value, cli.approx);
            Ok(emit(&Value::Object(out)))
        }
        Command::TreeBall { radius } => {
            let center = tree_center(cli)?;
            let b = ball(&center, *radius, resolve_cap(cli)?)?;
            Ok(emit(&ball_value(&b)))
        }
        Command::TreeDot { radius } => {
            let center = tree_center(cli)?;
            let b = ball(&center, *radius, resolve_cap(cli)?)?;
            Ok(export_dot(&b))
        }
        Command::TreePath => {
            let doc = read_operand(cli)?;
            let obj = as_object(&doc, "operand")?;
            let cfg = resolve_config(Some(obj), cli.prime, cli.ram, "operand")?;
            let u = parse_vertex(get_field(obj, "u", "operand")?, cfg, "operand.u")?;
            let v = parse_vertex(get_field(obj, "v", "operand")?, cfg, "operand.v")?;
            let p = tree_path(&u, &v)?;
            Ok(emit(&json!({
                "length": p.len() - 1,
                "path": p.iter().map(vertex_value).collect::<Vec<_>>(),
            })))
        }
        Command::LinkCount => {
            let cfg = resolve_config(None, cli.prime, cli.ram, "operand")?;
            let (link_size, triangles) = link_counts_sl3(&cfg)?;
            Ok(emit(&json!({
                "link_size": link_size,
                "triangles_per_edge": triangles,
            })))
        }
        Command::GaloisGap { e } => {
            let cfg = resolve_config(None, cli.prime, cli.ram, "operand")?;
            let gap = galois_gap(&cfg, *e)?;
            let mut out = Map::new();
            out.insert("gap_exists".into(), Value::Bool(gap.gap_exists));
            out.insert(
                "alpha_val".into(),
                Value::String(json::rational_string(&gap.alpha_val)),
            );
            approx_field(&mut out, "alpha_val", &Val::Finite(gap.alpha_val), cli.approx);
            Ok(emit(&Value::Object(out)))
        }
    }
}

fn get_index(obj: &Map<String, Value>, name: &str) -> WireResult<usize> {
    let v = get_field(obj, name, "operand")?;
    let n = v
        .as_u64()
        .ok_or_else(|| WireError::Parse(format!("operand.{}: expected a non-negative integer", name)))?;
    usize::try_from(n).map_err(|_| WireError::Parse(format!("operand.{}: index out of range", name)))
}

/// Full CLI entry point; returns the process exit code.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(output) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, output) {
                    eprintln!("error: cannot write {}: {}", path.display(), e);
                    return 3;
                }
            } else {
                print!("{}", output);
            }
            0
        }
        Err(WireError::Parse(msg)) => {
            eprintln!("error: parse: {}", msg);
            2
        }
        Err(WireError::Domain(e)) => {
            eprintln!("error: {}", e);
            3
        }
    }
}
