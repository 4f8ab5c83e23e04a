use std::fmt::Write as _;
use std::path::Path;

use nodal_core::analytic::{
    check_rational_minimum, check_rational_minimum_2d, default_step, gcd, interval_score_rational, square_score,
    MinimumCheck, RationalPoint,
};
use nodal_core::graph::{
    heatmap_pgm_bytes, mesh_graph, parse_edge_list, parse_obj, parse_pgm, patch_graph, score_csv_string, score_graph,
    synthetic_anomaly_image, GraphScoreOptions, PatchGraphConfig,
};
use nodal_core::paley::{paley_score_closed_form, paley_score_numeric, PaleyScore};
use nodal_core::spectral::{argmax, argmin, find_strict_local_minima, DegeneratePolicy, Topology};
use nodal_core::torus::{find_n_eps, grid_point, torus_score, Bump, PotentialSpec, TorusOptions};
use nodal_core::{Graph, LaplacianKind};

use crate::args::*;
use crate::config::echo_config;
use crate::Failure;

/// Ordered `key=value` pairs printed on one line.
#[derive(Default)]
pub struct Summary(Vec<(String, String)>);

impl Summary {
    fn new(command: &str) -> Self {
        let mut s = Self::default();
        s.push("command", command);
        s
    }

    fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn line(&self) -> String {
        let mut out = String::new();
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{k}={v}");
        }
        out
    }
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read_file(path)?).map_err(|_| Failure::Runtime(format!("{} is not UTF-8", path.display())))
}

fn extremes(s: &mut Summary, values: &[f64], coord: impl Fn(usize) -> String) {
    if let (Some(lo), Some(hi)) = (argmin(values), argmax(values)) {
        s.push("argmin", lo)
            .push("argmin_at", coord(lo))
            .push("min", values[lo])
            .push("argmax", hi)
            .push("argmax_at", coord(hi))
            .push("max", values[hi]);
    }
}

/// Score at the grid point `i/m`, exact in rational arithmetic.
fn interval_grid_score(i: u64, m: u64, n_terms: u64) -> Result<f64, Failure> {
    if i == 0 || i == m {
        return Ok(0.0);
    }
    let g = gcd(i, m);
    Ok(interval_score_rational(RationalPoint::new(i / g, m / g)?, n_terms))
}

pub fn interval(a: &IntervalArgs) -> Result<Summary, Failure> {
    let values = (0..=a.grid)
        .map(|i| interval_grid_score(i, a.grid, a.n_terms))
        .collect::<Result<Vec<_>, _>>()?;
    write_file(&a.out, score_csv_string(&values))?;
    echo_config("interval", a, &a.out)?;
    let m = a.grid;
    let mut s = Summary::new("interval");
    s.push("n_terms", a.n_terms).push("points", values.len());
    extremes(&mut s, &values, |i| format!("{}/{m}", i));
    if a.find_minima {
        let minima = find_strict_local_minima(&values, &Topology::Grid1d)?;
        let mut csv = String::new();
        for &i in &minima {
            let _ = writeln!(csv, "{i},{:.16e},{:.16e}", i as f64 / m as f64, values[i]);
        }
        let mut path = a.out.as_os_str().to_owned();
        path.push(".minima.csv");
        write_file(Path::new(&path), csv)?;
        s.push("minima", minima.len());
    }
    Ok(s)
}

pub fn square(a: &SquareArgs) -> Result<Summary, Failure> {
    let (mx, my) = grid_dims(&a.grid).map_err(Failure::Usage)?;
    let (w, h) = (mx + 1, my + 1);
    let mut values = Vec::with_capacity(w * h);
    for row in 0..h {
        let y = row as f64 / my as f64;
        for col in 0..w {
            values.push(square_score(col as f64 / mx as f64, y, a.lambda_cut));
        }
    }
    write_file(&a.out, score_csv_string(&values))?;
    if let Some(pgm) = &a.pgm {
        write_file(pgm, heatmap_pgm_bytes(&values, w, h)?)?;
    }
    echo_config("square", a, &a.out)?;
    let mut s = Summary::new("square");
    s.push("lambda_cut", a.lambda_cut).push("width", w).push("height", h);
    extremes(&mut s, &values, |i| format!("({}/{mx},{}/{my})", i % w, i / w));
    Ok(s)
}

fn push_check(s: &mut Summary, check: &MinimumCheck) {
    let neighbors: Vec<String> = check.neighbors.iter().map(f64::to_string).collect();
    s.push("center", check.center)
        .push("neighbors", neighbors.join(";"))
        .push("margin", check.margin())
        .push("strict_min", check.holds);
}

pub fn rational_check(a: &RationalArgs) -> Result<Summary, Failure> {
    let x = RationalPoint::new(a.p, a.q)?;
    let mut s = Summary::new("rational-check");
    s.push("p", a.p).push("q", a.q);
    match (a.r, a.s) {
        (Some(r), Some(den)) => {
            let y = RationalPoint::new(r, den)?;
            let h = a.step.unwrap_or_else(|| default_step(a.q.max(den)));
            let check = check_rational_minimum_2d(x, y, a.lambda_cut, h)?;
            s.push("r", r).push("s", den).push("lambda_cut", a.lambda_cut).push("step", h);
            push_check(&mut s, &check);
        }
        _ => {
            let n = a.n_terms.unwrap_or(a.q * a.q);
            let h = a.step.unwrap_or_else(|| default_step(a.q));
            let check = check_rational_minimum(x, n, h)?;
            s.push("n_terms", n).push("step", h);
            push_check(&mut s, &check);
        }
    }
    if let Some(out) = &a.out {
        write_file(out, format!("{}\n", s.line()))?;
        echo_config("rational-check", a, out)?;
    }
    Ok(s)
}

fn max_deviation(a: &PaleyScore, b: &PaleyScore) -> f64 {
    a.per_vertex
        .iter()
        .zip(&b.per_vertex)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub const PALEY_TOLERANCE: f64 = 1e-10;

pub fn paley(a: &PaleyArgs) -> Result<Summary, Failure> {
    let score = paley_score_closed_form(a.p)?;
    let mut s = Summary::new("paley");
    s.push("p", a.p)
        .push("s_zero", score.s_zero.re)
        .push("s_residue", score.s_residue.re)
        .push("s_nonresidue", score.s_nonresidue.re);
    if let Some(out) = &a.out {
        let mut csv = String::new();
        for (i, v) in score.per_vertex.iter().enumerate() {
            let _ = writeln!(csv, "{i},{:.16e},{:.16e}", v.re, v.im);
        }
        write_file(out, csv)?;
        echo_config("paley", a, out)?;
    }
    if a.verify {
        let dev = max_deviation(&score, &paley_score_numeric(a.p)?);
        let ok = dev <= PALEY_TOLERANCE;
        s.push("max_deviation", format!("{dev:e}")).push("verified", ok);
        if !ok {
            println!("{}", s.line());
            return Err(Failure::Runtime(format!(
                "closed-form vs numeric max deviation {dev:e} exceeds {PALEY_TOLERANCE:e}"
            )));
        }
    }
    Ok(s)
}

fn rotation_policy(trials: Option<usize>, seed: u64) -> DegeneratePolicy {
    match trials {
        Some(trials) => DegeneratePolicy::RotationAverage { trials, seed },
        None => DegeneratePolicy::AsGiven,
    }
}

pub fn torus(a: &TorusArgs) -> Result<Summary, Failure> {
    let bump = match a.bump {
        BumpArg::Constant => Bump::ConstantWell,
        BumpArg::Cosine => Bump::CosineWell,
    };
    let spec = PotentialSpec::new(a.y, a.eps, bump)?;
    let opts = TorusOptions {
        include_ground: a.include_ground,
        policy: rotation_policy(a.rotation_trials, a.seed),
        seed: a.seed,
        ..TorusOptions::default()
    };
    let mut s = Summary::new("torus");
    s.push("y", spec.y()).push("eps", spec.eps()).push("bump", bump.name()).push("n_grid", a.n_grid);
    let n_terms = match (a.n_terms, a.find_n_eps) {
        (Some(n), _) => n,
        (None, Some(n_max)) => {
            let n_eps = find_n_eps(&spec, a.n_grid, n_max, &opts)?;
            s.push("n_max", n_max).push("n_eps", n_eps);
            if a.out.is_none() {
                return Ok(s);
            }
            n_eps.max(1)
        }
        (None, None) => return Err(Failure::Usage("one of --n-terms or --find-n-eps is required".into())),
    };
    let field = torus_score(a.n_grid, &spec, n_terms, &opts)?;
    let lo = field.argmin().ok_or(Failure::Runtime("empty score field".into()))?;
    let x = grid_point(a.n_grid, lo);
    s.push("n_terms", n_terms)
        .push("argmin", lo)
        .push("argmin_x", x)
        .push("min", field.values()[lo])
        .push("in_window", spec.contains(x));
    if let Some(out) = &a.out {
        write_file(out, score_csv_string(field.values()))?;
        echo_config("torus", a, out)?;
    }
    Ok(s)
}

pub fn graph(a: &GraphArgs) -> Result<Summary, Failure> {
    let laplacian = a.laplacian.unwrap_or(match a.format {
        FormatArg::Edges => LaplacianArg::Comb,
        FormatArg::Pgm | FormatArg::Obj => LaplacianArg::Sym,
    });
    let kind = match laplacian {
        LaplacianArg::Sym => LaplacianKind::SymNormalized,
        LaplacianArg::Comb => LaplacianKind::Combinatorial,
        LaplacianArg::Rw => LaplacianKind::RandomWalk,
    };
    if a.pgm.is_some() && a.format != FormatArg::Pgm {
        return Err(Failure::Usage("--pgm heatmaps need --format pgm".into()));
    }
    let mut dims = None;
    let g: Graph = match a.format {
        FormatArg::Edges => parse_edge_list(&read_text(&a.input)?)?,
        FormatArg::Obj => {
            let (mesh, stats) = parse_obj(&read_text(&a.input)?)?;
            if stats.ignored > 0 {
                log::warn!("ignored {} OBJ records", stats.ignored);
            }
            mesh_graph(&mesh)?
        }
        FormatArg::Pgm => {
            let img = parse_pgm(&read_file(&a.input)?)?;
            dims = Some((img.width(), img.height()));
            let bandwidth = match a.bandwidth.as_str() {
                "auto" => None,
                v => Some(v.parse::<f64>().map_err(|e| Failure::Usage(e.to_string()))?),
            };
            let cfg = PatchGraphConfig {
                patch_size: a.patch,
                k_neighbors: a.knn,
                bandwidth,
            };
            patch_graph(&img, &cfg)?
        }
    };
    let opts = GraphScoreOptions {
        n_terms: a.n_terms as usize,
        kind,
        policy: rotation_policy(a.rotation_trials, a.seed),
        seed: a.seed,
        ..GraphScoreOptions::default()
    };
    let field = score_graph(&g, &opts)?;
    let values = field.values();
    write_file(&a.out, score_csv_string(values))?;
    if let (Some(pgm), Some((w, h))) = (&a.pgm, dims) {
        write_file(pgm, heatmap_pgm_bytes(values, w, h)?)?;
    }
    let mut effective = serde_json::to_value(a).map_err(|e| Failure::Runtime(e.to_string()))?;
    effective["laplacian"] = laplacian.name().into();
    echo_config("graph", &effective, &a.out)?;
    let mut s = Summary::new("graph");
    s.push("vertices", g.n_vertices())
        .push("edges", g.n_edges())
        .push("components", g.components().len())
        .push("laplacian", laplacian.name())
        .push("n_terms", a.n_terms);
    match dims {
        Some((w, _)) => extremes(&mut s, values, |i| format!("({},{})", i / w, i % w)),
        None => extremes(&mut s, values, |i| i.to_string()),
    }
    s.push("basis_hash", field.basis_hash());
    Ok(s)
}

pub fn synth(a: &SynthArgs) -> Result<Summary, Failure> {
    let scene = synthetic_anomaly_image(a.size, a.block, a.seed)?;
    write_file(&a.out, scene.image.to_pgm())?;
    echo_config("synth", a, &a.out)?;
    let mut s = Summary::new("synth");
    s.push("size", a.size)
        .push("block", a.block)
        .push("seed", a.seed)
        .push("block_row", scene.block_row)
        .push("block_col", scene.block_col);
    Ok(s)
}
