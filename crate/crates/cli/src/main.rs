//! `pushout`: load complexes and set models, run the push-out recursion and
//! its reports, and render 2D scenes.
//!
//! Exit status: 0 on success, 2 for usage, I/O and parse errors, 3 for
//! inputs that violate an invariant, 4 for numerical failures.

mod error;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use complex_core::point::Point;
use complex_core::{subdivide, validate_complex, validate_data, ComplexData, SimplicialComplex, Violation};
use measure::{hausdorff_points, k_constants};
use pushout::{
    approximate_near, retract_chain, run, RetractChain, RunOptions, RunStats, SetModel, SetModelData, TransportMap,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::render::render_svg;

#[derive(Debug, Parser)]
#[command(name = "pushout", version, about = "Push closed sets off the simplices of a subcomplex")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a complex and report its structure.
    Validate,
    /// Refine a complex until every simplex is smaller than --epsilon.
    Subdivide,
    /// Push the set off Q and emit S̃, the transport map and statistics.
    Push,
    /// Refine to --epsilon, restrict Q to the simplices meeting S, and push.
    Near,
    /// Estimate the Hausdorff measure of the set's sample points.
    Measure,
    /// Report the magnification constants of Q for --a.
    Constants,
    /// Build the retraction chain of a push-out run, with frames.
    Retract,
    /// Render the complex, the set, and the first push as SVG.
    Render,
}

#[derive(Debug, Args)]
struct Options {
    /// Complex JSON: {"vertices": [...], "simplices": [...], "Q": [...]}.
    #[arg(long, global = true)]
    complex: Option<PathBuf>,
    /// Set-model JSON: {"a": .., "samples": [{"point": [..], "weight": ..}], "full": [..]}.
    #[arg(long, global = true)]
    set: Option<PathBuf>,
    /// Dimension parameter; overrides the set file's value.
    #[arg(long, global = true)]
    a: Option<f64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Override for the apex search-simplex scale.
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Apex candidates drawn per push before giving up.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Covering scales for `measure`, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    ladder: Option<Vec<f64>>,
    /// Directory for artifact files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG scene (push, near).
    #[arg(long, global = true)]
    render: bool,
    /// Coordinate axes to draw when the ambient dimension exceeds 2.
    #[arg(long, global = true, value_delimiter = ',', num_args = 1)]
    project: Option<Vec<usize>>,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    ambient_dim: usize,
    dim: Option<usize>,
    vertices: usize,
    simplices: usize,
    q_simplices: usize,
    q_dim: Option<usize>,
    notes: Vec<String>,
    violations: Vec<Violation>,
}

impl Options {
    fn need<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T> {
        value
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("--{flag} is required for this command")))
    }

    fn complex_data(&self) -> Result<ComplexData> {
        read_json(Self::need(&self.complex, "complex")?)
    }

    fn complex(&self) -> Result<SimplicialComplex> {
        let data = self.complex_data()?;
        let report = validate_data(&data);
        if report.has_fatal() {
            return Err(CliError::Invalid(format!(
                "complex violates {} invariant(s): {}",
                report.violations.len(),
                serde_json::to_string(&report.violations).unwrap_or_default()
            )));
        }
        let cx = SimplicialComplex::from_data(&data)?;
        let report = validate_complex(&cx);
        if report.has_fatal() {
            return Err(CliError::Invalid(format!(
                "complex violates {} invariant(s): {}",
                report.violations.len(),
                serde_json::to_string(&report.violations).unwrap_or_default()
            )));
        }
        Ok(cx)
    }

    fn set_data(&self) -> Result<SetModelData> {
        let mut data: SetModelData = read_json(Self::need(&self.set, "set")?)?;
        if let Some(a) = self.a {
            data.a = a;
        }
        Ok(data)
    }

    fn set(&self, cx: &SimplicialComplex) -> Result<SetModel> {
        Ok(SetModel::from_data(cx, &self.set_data()?)?)
    }

    fn run_options(&self) -> RunOptions {
        RunOptions {
            seed: self.seed,
            gamma: self.gamma,
            budget: self.budget,
            ..Default::default()
        }
    }

    fn projection(&self) -> Result<Option<(usize, usize)>> {
        match self.project.as_deref() {
            None => Ok(None),
            Some([i, j]) => Ok(Some((*i, *j))),
            Some(_) => Err(CliError::Usage("--project takes exactly two axes, e.g. 0,1".into())),
        }
    }

    fn epsilon(&self) -> Result<f64> {
        let eps = *Self::need(&self.epsilon, "epsilon")?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(CliError::Usage(format!("--epsilon must be positive, got {eps}")));
        }
        Ok(eps)
    }
}

/// Where results go: the report to stdout, artifacts under `--out`.
struct Sink<'a> {
    out: Option<&'a Path>,
}

impl Sink<'_> {
    fn file(&self, name: &str, contents: &str) -> Result<()> {
        let Some(dir) = self.out else {
            return Ok(());
        };
        let io = |source| CliError::Io {
            path: dir.join(name),
            source,
        };
        fs::create_dir_all(dir).map_err(io)?;
        fs::write(dir.join(name), contents).map_err(io)
    }

    fn svg(&self, name: &str, contents: &str) -> Result<()> {
        if self.out.is_none() {
            return Err(CliError::Usage("--render needs --out".into()));
        }
        self.file(name, contents)
    }
}

#[derive(Serialize)]
struct PushReport<'a> {
    set: SetModelData,
    transport: &'a TransportMap,
    stats: &'a RunStats,
}

#[derive(Serialize)]
struct Frame {
    stage: usize,
    t: f64,
    points: Vec<Point>,
}

#[derive(Serialize)]
struct RetractReport<'a> {
    chain: &'a RetractChain,
    /// Sample points of `E_k`, `k = 0..=m`.
    e_samples: Vec<Vec<Point>>,
    frames: Vec<Frame>,
}

const FRAME_TIMES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn execute(cli: &Cli) -> Result<String> {
    let o = &cli.opts;
    let sink = Sink { out: o.out.as_deref() };
    match cli.command {
        Command::Validate => {
            let data = o.complex_data()?;
            let mut violations = validate_data(&data).violations;
            let built = if violations.iter().any(Violation::is_fatal) {
                None
            } else {
                SimplicialComplex::from_data(&data).ok()
            };
            if let Some(cx) = &built {
                violations.extend(validate_complex(cx).violations);
            }
            let valid = built.is_some() && !violations.iter().any(Violation::is_fatal);
            let report = ValidateReport {
                valid,
                ambient_dim: data.vertices.first().map_or(0, Vec::len),
                dim: built.as_ref().map(SimplicialComplex::dim),
                vertices: data.vertices.len(),
                simplices: built.as_ref().map_or(0, SimplicialComplex::len),
                q_simplices: built.as_ref().map_or(0, |c| c.q_ids().len()),
                q_dim: built.as_ref().and_then(SimplicialComplex::q_dim),
                notes: built.as_ref().map_or(Vec::new(), |c| c.notes().to_vec()),
                violations,
            };
            let text = to_json(&report);
            sink.file("validate.json", &text)?;
            if !valid {
                print!("{text}");
                return Err(CliError::Invalid("complex failed validation".into()));
            }
            Ok(text)
        }
        Command::Subdivide => {
            let cx = o.complex()?;
            let sub = subdivide(&cx, o.epsilon()?)?;
            #[derive(Serialize)]
            struct Report {
                rounds: usize,
                t0: Option<f64>,
                simplices: usize,
                parent: Vec<usize>,
                complex: ComplexData,
            }
            let text = to_json(&Report {
                rounds: sub.rounds,
                t0: sub.t0,
                simplices: sub.complex.len(),
                parent: sub.parent.clone(),
                complex: sub.complex.to_data(),
            });
            sink.file("complex.json", &to_json(&sub.complex.to_data()))?;
            sink.file("subdivide.json", &text)?;
            Ok(text)
        }
        Command::Push => {
            let cx = o.complex()?;
            let s = o.set(&cx)?;
            let out = run(&cx, &s, o.run_options())?;
            let text = to_json(&PushReport {
                set: out.set.to_data(),
                transport: &out.transport,
                stats: &out.stats,
            });
            sink.file("set.json", &to_json(&out.set.to_data()))?;
            sink.file("transport.json", &to_json(&out.transport))?;
            sink.file("stats.json", &to_json(&out.stats))?;
            if o.render {
                sink.svg("push.svg", &render_svg(&cx, Some(&out.set), &out.transport.records, o.projection()?)?)?;
            }
            Ok(text)
        }
        Command::Near => {
            let cx = o.complex()?;
            let s = o.set(&cx)?;
            let eps = o.epsilon()?;
            let near = approximate_near(&cx, &s, eps, o.run_options())?;
            #[derive(Serialize)]
            struct Report<'a> {
                summary: pushout::NearSummary,
                complex: ComplexData,
                #[serde(flatten)]
                push: PushReport<'a>,
            }
            let text = to_json(&Report {
                summary: near.summary(eps),
                complex: near.complex.to_data(),
                push: PushReport {
                    set: near.output.set.to_data(),
                    transport: &near.output.transport,
                    stats: &near.output.stats,
                },
            });
            sink.file("complex.json", &to_json(&near.complex.to_data()))?;
            sink.file("set.json", &to_json(&near.output.set.to_data()))?;
            sink.file("transport.json", &to_json(&near.output.transport))?;
            if o.render {
                let svg = render_svg(
                    &near.complex,
                    Some(&near.output.set),
                    &near.output.transport.records,
                    o.projection()?,
                )?;
                sink.svg("near.svg", &svg)?;
            }
            Ok(text)
        }
        Command::Measure => {
            let data = o.set_data()?;
            let points: Vec<Point> = data.samples.iter().map(|x| x.point.clone()).collect();
            let est = hausdorff_points(&points, data.a, o.ladder.as_deref())?;
            let text = to_json(&est);
            sink.file("measure.json", &text)?;
            Ok(text)
        }
        Command::Constants => {
            let cx = o.complex()?;
            let a = match o.a {
                Some(a) => a,
                None => o.set_data()?.a,
            };
            let text = to_json(&k_constants(&cx, a)?);
            sink.file("constants.json", &text)?;
            Ok(text)
        }
        Command::Retract => {
            let cx = o.complex()?;
            let s = o.set(&cx)?;
            let out = run(&cx, &s, o.run_options())?;
            let chain = retract_chain(&cx, &out.transport, &s)?;
            let e_samples = (0..=chain.len())
                .map(|k| chain.e_samples(k))
                .collect::<pushout::Result<Vec<_>>>()?;
            let mut frames = Vec::new();
            for (i, pts) in e_samples.iter().enumerate().take(chain.len()) {
                for t in FRAME_TIMES {
                    let points = pts
                        .iter()
                        .map(|y| chain.f(i, y, t))
                        .collect::<pushout::Result<Vec<_>>>()?;
                    frames.push(Frame { stage: i, t, points });
                }
            }
            let text = to_json(&RetractReport {
                chain: &chain,
                e_samples,
                frames,
            });
            sink.file("retract.json", &text)?;
            Ok(text)
        }
        Command::Render => {
            let cx = o.complex()?;
            let (s, records) = match &o.set {
                None => (None, Vec::new()),
                Some(_) => {
                    let s = o.set(&cx)?;
                    let mut records = run(&cx, &s, o.run_options())?.transport.records;
                    records.truncate(1);
                    (Some(s), records)
                }
            };
            let svg = render_svg(&cx, s.as_ref(), &records, o.projection()?)?;
            sink.file("scene.svg", &svg)?;
            Ok(svg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { error::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
