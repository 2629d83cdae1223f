//! Command-line front end for the `dimers` library.
//!
//! Exit codes: 0 when every requested check passes (or the command is
//! informational), 1 when a requested check fails, 2 on input errors.

pub mod output;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use dimers::algebra::ToricAlgebra;
use dimers::fans::ZigZagFans;
use dimers::matchings::enumerate_matchings;
use dimers::polygen::{parse_pattern, pattern_to_dimer, square_pattern, validate_pattern};
use dimers::polygon::{polygon, PointKind};
use dimers::zigzag::{geometric_check, zigzag_paths};
use dimers::TorusGraph;

use crate::output::{Format, Record, Sink};
use crate::report::{describe_failure, ladder, load_rung};

/// Exit code: success.
pub const EXIT_OK: i32 = 0;
/// Exit code: a requested check failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit code: unreadable or invalid input, or bad usage.
pub const EXIT_INPUT: i32 = 2;

/// Dimer models on the torus: consistency checks and toric data.
#[derive(Debug, Parser)]
#[command(name = "dimers", version, about)]
pub struct Cli {
    /// Degree bound for the algebra checks.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_degree: u32,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// The command to run.
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a DIMER file and print its sizes.
    Validate {
        /// Input file.
        file: PathBuf,
    },
    /// Run the consistency ladder.
    Report {
        /// Input file.
        file: PathBuf,
    },
    /// List all perfect matchings with their classes.
    Matchings {
        /// Input file.
        file: PathBuf,
    },
    /// Print the perfect-matching polygon with multiplicities.
    Polygon {
        /// Input file.
        file: PathBuf,
    },
    /// List zig-zag paths and the geometric-consistency verdict.
    Zigzag {
        /// Input file.
        file: PathBuf,
    },
    /// List extremal and external perfect matchings.
    Extremal {
        /// Input file.
        file: PathBuf,
    },
    /// Compare the path algebra with its lattice model up to the degree bound.
    Algebra {
        /// Input file.
        file: PathBuf,
    },
    /// Check exactness of the one-sided Calabi–Yau complex up to the bound.
    Cy3 {
        /// Input file.
        file: PathBuf,
    },
    /// Write the dimer model of the n × n square base pattern.
    GenSquare {
        /// Size of the square.
        n: usize,
    },
    /// Draw a model as SVG.
    Svg {
        /// Input file.
        file: PathBuf,
        /// Extra layers: `quiver`, `matching=K`, `zigzag=K` (comma separated).
        #[arg(long, value_delimiter = ',')]
        layers: Vec<String>,
        /// Number of copies of the fundamental domain along each axis.
        #[arg(long, default_value_t = 2)]
        tiles: usize,
    },
    /// Validate a PATTERN file of curves.
    PatternCheck {
        /// Input file.
        file: PathBuf,
    },
}

/// Failure of a command.
#[derive(Debug)]
enum Failure {
    /// Bad input: exit code 2.
    Input(String),
    /// Output could not be written.
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<TorusGraph, Failure> {
    let text = read(path)?;
    dimers::load(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

fn code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

/// Parses arguments and runs a command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(c) => c,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(cli: &Cli) -> Outcome {
    let d = cli.max_degree;
    match &cli.command {
        Command::GenSquare { n } => gen_square(*n, &cli.out),
        Command::Svg {
            file,
            layers,
            tiles,
        } => svg_command(file, layers, *tiles, &cli.out),
        Command::Report { file } => {
            let mut sink = Sink::new(cli.format, writer(&cli.out)?);
            let out = report_command(file, d, &mut sink);
            sink.flush()?;
            out
        }
        cmd => {
            let mut sink = Sink::new(cli.format, writer(&cli.out)?);
            let out = match cmd {
                Command::Validate { file } => validate(file, &mut sink),
                Command::Matchings { file } => matchings(file, &mut sink),
                Command::Polygon { file } => polygon_command(file, &mut sink),
                Command::Zigzag { file } => zigzag(file, &mut sink),
                Command::Extremal { file } => extremal(file, &mut sink),
                Command::Algebra { file } => algebra(file, d, &mut sink),
                Command::Cy3 { file } => cy3(file, d, &mut sink),
                Command::PatternCheck { file } => pattern_check(file, &mut sink),
                _ => unreachable!("handled above"),
            };
            sink.flush()?;
            out
        }
    }
}

fn model_record(g: &TorusGraph) -> Record {
    let q = g.quiver();
    Record::new("model")
        .int("vertices", g.num_vertices())
        .int("edges", g.num_edges())
        .int("faces", g.num_faces())
        .int("nodes", q.num_nodes())
        .int("arrows", q.num_arrows())
}

fn validate(file: &Path, sink: &mut Sink) -> Outcome {
    let g = load_model(file)?;
    sink.emit(&model_record(&g))?;
    Ok(EXIT_OK)
}

fn report_command(file: &Path, d: u32, sink: &mut Sink) -> Outcome {
    let g = match load_model(file) {
        Ok(g) => g,
        Err(Failure::Input(msg)) => {
            let r = Record::new("rung")
                .word("name", "load")
                .status(false)
                .text("summary", msg.clone());
            sink.emit(&r)?;
            return Err(Failure::Input(msg));
        }
        Err(e) => return Err(e),
    };
    let mut pass = true;
    sink.emit(&load_rung(&g).record())?;
    for r in ladder(&g, d) {
        pass &= r.pass;
        sink.emit(&r.record())?;
    }
    Ok(code(pass))
}

fn matchings(file: &Path, sink: &mut Sink) -> Outcome {
    let g = load_model(file)?;
    let ms = enumerate_matchings(&g);
    sink.emit(&Record::new("matchings").int("count", ms.len()))?;
    for (i, m) in ms.iter().enumerate() {
        sink.emit(
            &Record::new("matching")
                .int("index", i)
                .ints("class", m.class)
                .ints("edges", m.support.iter().copied()),
        )?;
    }
    Ok(EXIT_OK)
}

fn polygon_command(file: &Path, sink: &mut Sink) -> Outcome {
    let g = load_model(file)?;
    let poly = match polygon(&enumerate_matchings(&g)) {
        Ok(p) => p,
        Err(e) => {
            sink.emit(
                &Record::new("polygon")
                    .status(false)
                    .text("summary", e.to_string()),
            )?;
            return Ok(EXIT_FAIL);
        }
    };
    sink.emit(&Record::new("polygon").status(true).text(
        "summary",
        format!(
            "{} matchings, {} vertices, doubled area {}",
            poly.total(),
            poly.vertices.len(),
            poly.doubled_area()
        ),
    ))?;
    for v in &poly.vertices {
        sink.emit(&Record::new("vertex").ints("point", *v))?;
    }
    for (&p, &m) in &poly.points {
        let kind = match poly.kind(p) {
            Some(PointKind::Vertex) => "vertex",
            Some(PointKind::Edge) => "edge",
            _ => "interior",
        };
        sink.emit(
            &Record::new("point")
                .ints("point", p)
                .int("multiplicity", m)
                .word("type", kind),
        )?;
    }
    for (p, m) in poly.normal_form() {
        sink.emit(
            &Record::new("normal")
                .ints("point", p)
                .int("multiplicity", m),
        )?;
    }
    Ok(EXIT_OK)
}

fn zigzag(file: &Path, sink: &mut Sink) -> Outcome {
    let g = load_model(file)?;
    let paths = zigzag_paths(g.quiver());
    for (i, z) in paths.iter().enumerate() {
        sink.emit(
            &Record::new("zigzag")
                .int("index", i)
                .ints("class", z.class)
                .ints("arrows", z.arrows.iter().copied()),
        )?;
    }
    let r = geometric_check(&paths);
    for f in &r.failures {
        sink.emit(&Record::new("failure").text("summary", describe_failure(f)))?;
    }
    sink.emit(
        &Record::new("geometric")
            .status(r.verdict)
            .int("failures", r.failures.len()),
    )?;
    Ok(code(r.verdict))
}

fn extremal(file: &Path, sink: &mut Sink) -> Outcome {
    let g = load_model(file)?;
    let ms = enumerate_matchings(&g);
    let Some(pi0) = ms.first() else {
        sink.emit(
            &Record::new("extremal")
                .status(false)
                .text("summary", "no perfect matchings"),
        )?;
        return Ok(EXIT_FAIL);
    };
    let fans = match ZigZagFans::new(&g, &pi0.support) {
        Ok(f) => f,
        Err(e) => {
            sink.emit(
                &Record::new("extremal")
                    .status(false)
                    .text("summary", e.to_string()),
            )?;
            return Ok(EXIT_FAIL);
        }
    };
    let ext = match fans.extremal_matchings() {
        Ok(x) => x,
        Err(e) => {
            sink.emit(
                &Record::new("extremal")
                    .status(false)
                    .text("summary", e.to_string()),
            )?;
            return Ok(EXIT_FAIL);
        }
    };
    for x in &ext {
        sink.emit(
            &Record::new("cone")
                .ints("cw", x.cone.0)
                .ints("ccw", x.cone.1)
                .ints("class", x.matching.class)
                .ints("edges", x.matching.support.iter().copied()),
        )?;
    }
    for &ray in &fans.global.rays {
        match fans.external_matchings(ray) {
            Ok(list) => {
                for m in list {
                    sink.emit(
                        &Record::new("external")
                            .ints("ray", ray)
                            .ints("class", m.class)
                            .ints("edges", m.support.iter().copied()),
                    )?;
                }
            }
            Err(e) => {
                sink.emit(
                    &Record::new("extremal")
                        .status(false)
                        .text("summary", e.to_string()),
                )?;
                return Ok(EXIT_FAIL);
            }
        }
    }
    sink.emit(&Record::new("extremal").status(true).text(
        "summary",
        format!("{} cones, {} rays", ext.len(), fans.global.rays.len()),
    ))?;
    Ok(EXIT_OK)
}

fn toric<'g>(
    g: &'g TorusGraph,
    name: &str,
    sink: &mut Sink,
) -> Result<Option<ToricAlgebra<'g>>, Failure> {
    match ToricAlgebra::with_default_grading(g) {
        Ok(t) => {
            let gr = t.grading();
            sink.emit(
                &Record::new("grading")
                    .ints("weights", gr.weights.iter().copied())
                    .int("lambda", gr.lambda),
            )?;
            Ok(Some(t))
        }
        Err(e) => {
            sink.emit(
                &Record::new(name)
                    .status(false)
                    .text("summary", e.to_string()),
            )?;
            Ok(None)
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn algebra(file: &Path, d: u32, sink: &mut Sink) -> Outcome {
    let g = load_model(file)?;
    let Some(t) = toric(&g, "algebraic", sink)? else {
        return Ok(EXIT_FAIL);
    };
    let max = i64::from(d);
    let v = match t.algebraic_consistency(max) {
        Ok(v) => v,
        Err(e) => {
            sink.emit(
                &Record::new("algebraic")
                    .status(false)
                    .text("summary", e.to_string()),
            )?;
            return Ok(EXIT_FAIL);
        }
    };
    for p in &v.pieces {
        sink.emit(
            &Record::new("piece")
                .int("i", p.i)
                .int("j", p.j)
                .int("degree", p.degree)
                .int("lattice_points", p.lattice_points)
                .int("path_classes", p.path_classes)
                .int("fterm_classes", p.fterm_classes)
                .word("surjective", yes(p.surjective))
                .word("injective", yes(p.injective)),
        )?;
    }
    for c in &v.counterexamples {
        sink.emit(&Record::new("counterexample").text("summary", c.to_string()))?;
    }
    if let Ok(gens) = t.center_generators(max) {
        for c in gens {
            sink.emit(
                &Record::new("central")
                    .int("degree", c.degree)
                    .ints("hom", c.hom)
                    .int("deg", c.deg),
            )?;
        }
    }
    sink.emit(&Record::new("algebraic").status(v.consistent()).text(
        "summary",
        format!("{} pieces up to R-degree {max}", v.pieces.len()),
    ))?;
    Ok(code(v.consistent()))
}

fn cy3(file: &Path, d: u32, sink: &mut Sink) -> Outcome {
    let g = load_model(file)?;
    let Some(t) = toric(&g, "cy3", sink)? else {
        return Ok(EXIT_FAIL);
    };
    let r = match t.cy3_check(i64::from(d)) {
        Ok(r) => r,
        Err(e) => {
            sink.emit(
                &Record::new("cy3")
                    .status(false)
                    .text("summary", e.to_string()),
            )?;
            return Ok(EXIT_FAIL);
        }
    };
    for p in &r.pieces {
        sink.emit(
            &Record::new("cy3piece")
                .int("j", p.j)
                .int("degree", p.degree)
                .int("dim_t2", p.dim_t2)
                .int("dim_t3", p.dim_t3)
                .int("rank_f2", p.rank_f2)
                .int("rank_f3", p.rank_f3)
                .word("composite_zero", yes(p.composite_zero))
                .word("exact", yes(p.exact())),
        )?;
    }
    sink.emit(&Record::new("cy3").status(r.exact()).text(
        "summary",
        format!("{} pieces up to degree bound {d}", r.pieces.len()),
    ))?;
    Ok(code(r.exact()))
}

fn gen_square(n: usize, out: &Option<PathBuf>) -> Outcome {
    if n == 0 {
        return Err(Failure::Input("gen-square needs n ≥ 1".into()));
    }
    let g = pattern_to_dimer(&square_pattern(n))
        .map_err(|e| Failure::Input(format!("square pattern {n}: {e}")))?;
    let text = g.to_text(Some(&format!(
        "dimer model of the {n}x{n} square base pattern"
    )));
    let mut w = writer(out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(EXIT_OK)
}

fn svg_command(file: &Path, layers: &[String], tiles: usize, out: &Option<PathBuf>) -> Outcome {
    let g = load_model(file)?;
    let ms = enumerate_matchings(&g);
    let paths = zigzag_paths(g.quiver());
    let mut sel = svg::Layers::default();
    for l in layers {
        let (name, arg) = match l.split_once('=') {
            Some((n, a)) => (n, Some(a)),
            None => (l.as_str(), None),
        };
        let index = |what: &str, len: usize| -> Result<usize, Failure> {
            let k: usize = arg
                .ok_or_else(|| Failure::Input(format!("layer {what} needs an index: {what}=K")))?
                .parse()
                .map_err(|_| Failure::Input(format!("bad index in layer `{l}`")))?;
            if k >= len {
                return Err(Failure::Input(format!("layer `{l}`: only {len} available")));
            }
            Ok(k)
        };
        match name {
            "tiling" => {}
            "quiver" => sel.quiver = true,
            "matching" => sel.matching = Some(&ms[index("matching", ms.len())?]),
            "zigzag" => sel.zigzag = Some(&paths[index("zigzag", paths.len())?]),
            other => return Err(Failure::Input(format!("unknown layer `{other}`"))),
        }
    }
    let text = svg::emit_svg(&g, &sel, tiles);
    let mut w = writer(out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(EXIT_OK)
}

fn pattern_check(file: &Path, sink: &mut Sink) -> Outcome {
    let text = read(file)?;
    let p = parse_pattern(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    sink.emit(
        &Record::new("pattern")
            .int("crossings", p.num_crossings())
            .int("segments", p.segments().len())
            .int("curves", p.curves().len()),
    )?;
    for (i, k) in p.classes().into_iter().enumerate() {
        sink.emit(&Record::new("curve").int("index", i).ints("class", k))?;
    }
    let r = validate_pattern(&p);
    for f in &r.failures {
        sink.emit(&Record::new("failure").text("summary", f.to_string()))?;
    }
    if r.good {
        match pattern_to_dimer(&p) {
            Ok(g) => sink.emit(&model_record(&g))?,
            Err(e) => {
                sink.emit(
                    &Record::new("check")
                        .status(false)
                        .text("summary", e.to_string()),
                )?;
                return Ok(EXIT_FAIL);
            }
        }
    }
    sink.emit(
        &Record::new("check")
            .status(r.good)
            .text("summary", format!("{} failures", r.failures.len())),
    )?;
    Ok(code(r.good))
}
