//! `pcurv` command line.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::automorphism::{
    cellular_automorphisms, is_three_connected, kernel_neighbourhood_injective, restrict_to_tg, verify_order_bounds,
    verify_rigidity,
};
use crate::corpus::{corpus_check, freeze, parse_manifest, GeneratorSpec};
use crate::curvature::{classify_profile, curvature_profile, VertexClass};
use crate::discharging::{find_certificate, verify_certificate, Discharge, DischargingCertificate, DEFAULT_RADIUS};
use crate::error::Error;
use crate::glue::{glue_patches, periodic_closure_check, GlueSpec, PeriodicBundle};
use crate::io::{read_surface, write_text, MapDocument};
use crate::pattern_tables::{render_json, render_text, Sign};
use crate::planar_map::AnySurface;
use crate::prismlike::{band_decomposition, is_prismlike};
use crate::rational::{self, Rational};
use crate::validate::validate_tessellation;

#[derive(Parser, Debug)]
#[command(name = "pcurv", version, about = "Combinatorial curvature of planar tessellations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum RowFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Positive,
    Zero,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the tessellation axioms.
    Validate { file: String },
    /// Per-vertex pattern and curvature.
    Curvature {
        file: String,
        #[arg(long, value_enum, default_value_t)]
        format: RowFormat,
    },
    /// Total curvature.
    Total { file: String },
    /// Good / bad / zero classification.
    Classify {
        file: String,
        #[arg(long, default_value = "1/132")]
        threshold: String,
        #[arg(long, value_enum, default_value_t)]
        format: RowFormat,
    },
    /// Pattern tables for positive or zero curvature.
    Tables {
        #[arg(long, value_enum, default_value = "positive")]
        sign: SignArg,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Prism-like verdict and band structure.
    Prismlike { file: String },
    /// Find a discharging certificate, or `discharge verify <file> <cert>`.
    Discharge {
        #[arg(num_args = 1..=3, required = true)]
        args: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: usize,
        #[arg(long, default_value = "1/132")]
        threshold: String,
    },
    /// Cellular automorphism group.
    Aut {
        file: String,
        #[arg(long)]
        verify_bounds: bool,
    },
    /// Emit a generated map.
    Generate {
        #[command(subcommand)]
        family: Family,
        #[arg(long, value_enum, default_value_t, global = true)]
        format: Format,
    },
    /// Glue two patches along boundary cycles.
    Glue {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Lines `left right` pairing boundary vertices.
        #[arg(long)]
        corr: String,
    },
    /// Split every hexagon into six triangles.
    SubdivideHex { file: String },
    /// Check a periodic bundle (core, annulus, seams).
    Periodic { file: String },
    /// Run a corpus manifest.
    Corpus {
        manifest: String,
        /// Print the manifest with measured expectations instead.
        #[arg(long)]
        freeze: bool,
    },
}

#[derive(Subcommand, Debug)]
enum Family {
    Prism {
        #[arg(long)]
        n: usize,
    },
    Antiprism {
        #[arg(long)]
        n: usize,
    },
    Platonic {
        name: String,
    },
    C60,
    Grid {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
    StackedPrism {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rings: usize,
    },
}

impl Family {
    fn spec(&self) -> GeneratorSpec {
        match self {
            Family::Prism { n } => GeneratorSpec::Prism { n: *n },
            Family::Antiprism { n } => GeneratorSpec::Antiprism { n: *n },
            Family::Platonic { name } => GeneratorSpec::Platonic { name: name.clone() },
            Family::C60 => GeneratorSpec::C60,
            Family::Grid { a, b } => GeneratorSpec::Grid { a: *a, b: *b },
            Family::StackedPrism { n, rings } => GeneratorSpec::StackedPrism { n: *n, rings: *rings },
        }
    }
}

/// Failure modes mapped to exit codes: 1 for a check that ran and failed,
/// 2 for input that could not be used.
enum Failure {
    Check(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedInput(_)
            | Error::NonSphericalEmbedding(_)
            | Error::InvalidArgument(_)
            | Error::IncompatibleBoundaries(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> std::result::Result<String, Failure> {
        let mut text = String::new();
        if path == "-" {
            self.stdin.read_to_string(&mut text).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        } else {
            text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        }
        Ok(text)
    }

    fn surface(&mut self, path: &str) -> std::result::Result<AnySurface, Failure> {
        let text = self.read(path)?;
        Ok(read_surface(&text)?)
    }

    fn print(&mut self, s: &str) {
        let _ = self.out.write_all(s.as_bytes());
        if !s.ends_with('\n') {
            let _ = self.out.write_all(b"\n");
        }
    }

    fn warn(&mut self, s: &str) {
        let _ = writeln!(self.err, "{s}");
    }
}

fn threshold(s: &str) -> std::result::Result<Rational, Failure> {
    let t = rational::parse(s)?;
    if t <= Rational::from_integer(0.into()) {
        return Err(Failure::Input(format!("threshold {t} must be positive")));
    }
    Ok(t)
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn parse_pairs(text: &str) -> std::result::Result<Vec<(u64, u64)>, Failure> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Failure::Input(format!("correspondence line {}: {t:?}", i + 1))))
            .collect::<std::result::Result<_, _>>()?;
        if nums.len() != 2 {
            return Err(Failure::Input(format!("correspondence line {} needs two labels", i + 1)));
        }
        out.push((nums[0], nums[1]));
    }
    Ok(out)
}

fn as_patch(s: AnySurface, what: &str) -> std::result::Result<crate::planar_map::Patch, Failure> {
    match s {
        AnySurface::Patch(p) => Ok(p),
        AnySurface::Closed(_) => Err(Failure::Input(format!("{what} has no boundary face"))),
    }
}

fn execute(cmd: Command, io: &mut Io) -> Outcome {
    match cmd {
        Command::Validate { file } => {
            let s = io.surface(&file)?;
            let report = validate_tessellation(&s);
            io.print(&report.to_string());
            if !report.is_valid() {
                return Err(Failure::Check("tessellation axioms violated".into()));
            }
        }
        Command::Curvature { file, format } => {
            let s = io.surface(&file)?;
            let profile = curvature_profile(&s);
            match format {
                RowFormat::Csv => io.print(&profile.to_csv()),
                RowFormat::Json => io.print(&pretty(&profile)),
            }
            if profile.vertices.is_empty() {
                io.warn("no interior vertices");
            }
        }
        Command::Total { file } => {
            let s = io.surface(&file)?;
            io.print(&curvature_profile(&s).total.to_string());
        }
        Command::Classify { file, threshold: t, format } => {
            let s = io.surface(&file)?;
            let t = threshold(&t)?;
            let profile = curvature_profile(&s);
            classify_profile(&profile, &t)?;
            let rows: Vec<_> = profile
                .vertices
                .iter()
                .map(|e| (e, VertexClass::of(&e.curvature, &t).expect("checked nonnegative")))
                .collect();
            match format {
                RowFormat::Csv => {
                    let text: String = rows
                        .iter()
                        .map(|(e, c)| format!("{},{},{},{c}\n", e.vertex, e.pattern, e.curvature))
                        .collect();
                    io.print(&text);
                }
                RowFormat::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|(e, c)| {
                            json!({"vertex": e.vertex, "pattern": e.pattern, "curvature": e.curvature.to_string(), "class": c})
                        })
                        .collect();
                    io.print(&pretty(&v));
                }
            }
        }
        Command::Tables { sign, format } => {
            let sign = match sign {
                SignArg::Positive => Sign::Positive,
                SignArg::Zero => Sign::Zero,
            };
            match format {
                Format::Text => io.print(&render_text(sign)),
                Format::Json => io.print(&render_json(sign)),
            }
        }
        Command::Prismlike { file } => {
            let s = io.surface(&file)?;
            let verdict = is_prismlike(&s);
            let mut out = json!({
                "prismlike": verdict.prismlike,
                "witnesses": verdict.witnesses,
                "witness_degrees": verdict.witness_degrees,
            });
            let mut failure = None;
            if verdict.prismlike {
                let sub = match &s {
                    AnySurface::Closed(m) => AnySurface::Closed(crate::generators::subdivide_hexagons(m)),
                    AnySurface::Patch(p) => AnySurface::Patch(crate::generators::subdivide_patch_hexagons(p)),
                };
                match band_decomposition(&sub) {
                    Ok(d) => {
                        out["bands"] = json!(d
                            .bands
                            .iter()
                            .map(|b| json!({"kind": b.kind, "faces": b.faces.len()}))
                            .collect::<Vec<_>>());
                        out["big_degree"] = json!(d.big_degree);
                    }
                    Err(e) => {
                        out["error"] = json!(e.to_string());
                        failure = Some(Failure::Check(e.to_string()));
                    }
                }
            }
            io.print(&pretty(&out));
            if let Some(f) = failure {
                return Err(f);
            }
        }
        Command::Discharge { args, radius, threshold: t } => {
            if args[0] == "verify" {
                let [_, file, cert] = args.as_slice() else {
                    return Err(Failure::Input("usage: discharge verify <file> <cert.json>".into()));
                };
                let s = io.surface(file)?;
                let cert = DischargingCertificate::from_json(&io.read(cert)?)?;
                let check = verify_certificate(&s, &cert);
                io.print(&pretty(&json!({"valid": check.is_valid(), "violations": check.violations})));
                if !check.is_valid() {
                    return Err(Failure::Check("certificate does not verify".into()));
                }
            } else {
                if args.len() != 1 {
                    return Err(Failure::Input("usage: discharge <file> [--radius N] [--threshold p/q]".into()));
                }
                let s = io.surface(&args[0])?;
                match find_certificate(&s, radius, &threshold(&t)?)? {
                    Discharge::Feasible(cert) => io.print(&cert.to_json()),
                    Discharge::Infeasible { unmet, shortfall } => {
                        io.print("infeasible");
                        io.warn(&format!("shortfall {shortfall} at vertices {unmet:?}"));
                        return Err(Failure::Check("no certificate at this radius".into()));
                    }
                }
            }
        }
        Command::Aut { file, verify_bounds } => {
            let AnySurface::Closed(m) = io.surface(&file)? else {
                return Err(Failure::Input("automorphisms need a closed map".into()));
            };
            let group = cellular_automorphisms(&m);
            let mut out = json!({
                "order": group.order(),
                "orientation_split": {"preserving": group.preserving_count(), "reversing": group.order() - group.preserving_count()},
                "three_connected": is_three_connected(&m),
            });
            let mut ok = true;
            if verify_bounds {
                let bounds = verify_order_bounds(&m, &group)?;
                let restriction = restrict_to_tg(&m, &group)?;
                let rigid = verify_rigidity(&m, &group);
                let injective = kernel_neighbourhood_injective(&m, &group, &restriction);
                ok = bounds.divides && rigid && injective;
                out["a"] = json!(bounds.a);
                out["b"] = json!(bounds.b);
                out["max_face_degree"] = json!(bounds.max_face_degree);
                out["divisibility_checks"] = json!({
                    "divisor": bounds.divisor,
                    "divides": bounds.divides,
                });
                out["restriction"] = json!({"image": restriction.image_order, "kernel": restriction.kernel_order});
                out["rigidity"] = json!(rigid);
                out["kernel_neighbourhood_injective"] = json!(injective);
            }
            io.print(&pretty(&out));
            if !ok {
                return Err(Failure::Check("group bounds fail".into()));
            }
        }
        Command::Generate { family, format } => {
            let s = family.spec().build()?;
            let doc = MapDocument::from_surface(&s, &s.boundary_darts());
            match format {
                Format::Text => io.print(&doc.to_text()),
                Format::Json => io.print(&doc.to_json()),
            }
        }
        Command::Glue { left, right, corr } => {
            let left = as_patch(io.surface(&left)?, "left")?;
            let right = as_patch(io.surface(&right)?, "right")?;
            let correspondence = parse_pairs(&io.read(&corr)?)?;
            let glued = glue_patches(&GlueSpec { left, right, correspondence })?;
            io.print(&write_text(&glued.surface));
            let report = validate_tessellation(&glued.surface);
            if !report.is_valid() {
                io.warn(&report.to_string());
                return Err(Failure::Check("glued map violates the tessellation axioms".into()));
            }
        }
        Command::SubdivideHex { file } => {
            let s = match io.surface(&file)? {
                AnySurface::Closed(m) => AnySurface::Closed(crate::generators::subdivide_hexagons(&m)),
                AnySurface::Patch(p) => AnySurface::Patch(crate::generators::subdivide_patch_hexagons(&p)),
            };
            io.print(&write_text(&s));
        }
        Command::Periodic { file } => {
            let spec = PeriodicBundle::parse(&io.read(&file)?)?.to_spec()?;
            let report = periodic_closure_check(&spec)?;
            let passed = report.passed();
            let mut out = serde_json::to_value(&report).expect("reports serialize");
            out["passed"] = json!(passed);
            out["interior_t_g"] = json!(report.interior_t_g.len());
            io.print(&pretty(&out));
            if !passed {
                return Err(Failure::Check("periodic extension fails".into()));
            }
        }
        Command::Corpus { manifest, freeze: do_freeze } => {
            let entries = parse_manifest(&io.read(&manifest)?)?;
            let base: PathBuf = if manifest == "-" {
                PathBuf::from(".")
            } else {
                Path::new(&manifest).parent().map(Path::to_path_buf).unwrap_or_default()
            };
            if do_freeze {
                io.print(&pretty(&freeze(&entries, &base)));
                return Ok(());
            }
            let report = corpus_check(&entries, &base);
            let text = report.to_string();
            io.print(&text);
            for e in report.skipped() {
                io.warn(&format!("warning: skipped {}", e.name));
            }
            if !report.passed() {
                return Err(Failure::Check("corpus mismatches".into()));
            }
        }
    }
    Ok(())
}

/// Runs one invocation against the given streams and returns the exit code.
pub fn run_with<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let mut io = Io { stdin, out, err };
    match execute(cli.command, &mut io) {
        Ok(()) => 0,
        Err(Failure::Check(msg)) => {
            io.warn(&format!("error: {msg}"));
            1
        }
        Err(Failure::Input(msg)) => {
            io.warn(&format!("error: {msg}"));
            2
        }
    }
}

/// Runs against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (stdin, stdout, stderr) = (std::io::stdin(), std::io::stdout(), std::io::stderr());
    run_with(argv, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
