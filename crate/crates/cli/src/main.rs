//! `shc`: verify squared Hopf coalgebra data, build coends, evaluate
//! placement expressions.
//!
//! Exit codes: 0 when every check passes, 1 when an axiom fails, 2 on
//! input or construction errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shc::coend::{build_coend, check_opposite, generators, opposite};
use shc::comod::{check_comodule, check_morphism};
use shc::error::Error;
use shc::fixtures;
use shc::hopf::{check_cqt, check_hopf};
use shc::io::{self, CoalgebraBody, CoendDoc, Ctx, DiagramDoc, StructureDoc};
use shc::pipeline::{self, Options};
use shc::placement::{parse, realize, Bindings};
use shc::squared::{
    canonical, check_antipode, check_bicoalgebra, check_qt, check_ribbon, check_squared, check_squared_comodule,
};
use shc::{Field, Matrix, VerificationReport};

#[derive(Parser)]
#[command(name = "shc", version, about = "Squared Hopf coalgebras over H-comod, in exact arithmetic")]
struct Cli {
    /// Print reports as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the checker for one kind of structure on a JSON file.
    Verify {
        kind: Kind,
        file: PathBuf,
        /// Also run the slower redundant checks.
        #[arg(long)]
        paranoid: bool,
    },
    /// Build the coend of a diagram and induce structures on it.
    Coend {
        diagram: PathBuf,
        /// Induce the product and unit.
        #[arg(long)]
        monoidal: bool,
        /// Induce the antipodes (needs a dual table); implies --monoidal.
        #[arg(long)]
        antipode: bool,
        /// Induce R± from the r-form; implies --antipode.
        #[arg(long)]
        rmatrix: bool,
        /// Induce Θ from the twists; implies --rmatrix.
        #[arg(long)]
        ribbon: bool,
        /// Check that the objects' matrix coefficients span H.
        #[arg(long = "check-c58")]
        check_c58: bool,
        /// Also run the slower redundant checks.
        #[arg(long)]
        paranoid: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Realize a placement expression.
    Eval {
        expr: String,
        /// NAME=FILE with a comodule or structure file.
        #[arg(long = "bind", value_parser = parse_bind)]
        bind: Vec<(String, PathBuf)>,
        /// Hopf algebra when no binding fixes one.
        #[arg(long, default_value = "builtin:trivial")]
        hopf: String,
    },
    /// Run a scripted end-to-end scenario.
    Demo { name: Demo },
    /// Opposite coalgebra of a coend written by `shc coend`.
    Opposite {
        coend: PathBuf,
        /// Write the result here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write a built-in diagram (or, with --structure, the structure induced
    /// on its coend) as JSON.
    Fixture {
        /// comatrix, trivial-comatrix, trivial-k2-e11, trivial-k2-end, trivial-rigid, kZ2 or sweedler4
        name: String,
        #[arg(long)]
        structure: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Hopf,
    Comodule,
    Morphism,
    Squared,
    SquaredComodule,
    Bicoalgebra,
    HopfCoalgebra,
    Quasitriangular,
    Ribbon,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    TrivialComatrix,
    #[value(name = "kZ2-qt")]
    Kz2Qt,
    Sweedler4Hopf,
}

fn parse_bind(s: &str) -> Result<(String, PathBuf), String> {
    let (name, path) = s.split_once('=').ok_or_else(|| format!("expected NAME=FILE, got `{s}`"))?;
    if name.is_empty() {
        return Err("empty binding name".into());
    }
    Ok((name.to_string(), PathBuf::from(path)))
}

/// A report, and whether to print it (not when stdout carries a document).
struct Done {
    report: VerificationReport,
    show: bool,
}

impl From<VerificationReport> for Done {
    fn from(report: VerificationReport) -> Done {
        Done { report, show: true }
    }
}

type Outcome = Result<Done, Error>;

/// Report for a command that wrote `out`, or printed its document when
/// `out` is absent.
fn finish(report: VerificationReport, text: &str, out: Option<&Path>) -> Outcome {
    write_or_print(text, out)?;
    Ok(Done { report, show: out.is_some() })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let res = match cli.cmd {
        Cmd::Verify { kind, file, paranoid } => verify(kind, &file, paranoid),
        Cmd::Coend { diagram, monoidal, antipode, rmatrix, ribbon, check_c58, paranoid, out } => {
            let opts = Options { monoidal, antipode, rmatrix, ribbon, check_c58, paranoid };
            coend(&diagram, opts, out.as_deref())
        }
        Cmd::Eval { expr, bind, hopf } => eval(&expr, &bind, &hopf, json),
        Cmd::Demo { name } => demo(name),
        Cmd::Opposite { coend, out } => opposite_cmd(&coend, out.as_deref()),
        Cmd::Fixture { name, structure, out } => fixture(&name, structure, out.as_deref()),
    };
    match res {
        Ok(Done { report, show }) => {
            if show {
                print_report(&report, json);
            } else {
                for e in report.failures() {
                    eprintln!("FAIL {}", e.name);
                }
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", kind_name(&e));
            ExitCode::from(2)
        }
    }
}

/// Variant name of an error, e.g. `NotDualClosed`.
fn kind_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn print_report(r: &VerificationReport, json: bool) {
    if json {
        print!("{}", io::to_json(r));
        return;
    }
    for e in r.failures() {
        let mut line = format!("FAIL {}", e.name);
        if let Some(w) = &e.witness {
            line.push_str(&format!(" {w}"));
        }
        if let Some(n) = &e.note {
            line.push_str(&format!(" ({n})"));
        }
        println!("{line}");
    }
    let failed = r.failures().count();
    if r.entries.is_empty() {
        return;
    }
    if failed == 0 {
        println!("ok: {} checks passed", r.entries.len());
    } else {
        println!("FAILED: {failed} of {} checks", r.entries.len());
    }
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(kind: Kind, file: &Path, paranoid: bool) -> Outcome {
    let mut r = VerificationReport::new();
    match kind {
        Kind::Hopf => {
            let h = io::load_hopf_file(file)?;
            r.extend("", check_hopf(&h));
            if h.rform.is_some() {
                r.extend("rform", check_cqt(&h)?);
            }
        }
        Kind::Comodule => r.extend("", check_comodule(&io::load_comodule(file)?)),
        Kind::Morphism => {
            let (src, dst, m) = io::load_morphism(file)?;
            r.extend("", check_morphism(&src, &dst, &m)?);
        }
        Kind::SquaredComodule => r.extend("", check_squared_comodule(&io::load_squared_comodule(file)?)?),
        Kind::Squared | Kind::Bicoalgebra | Kind::HopfCoalgebra | Kind::Quasitriangular | Kind::Ribbon => {
            let l = io::load_structure(file)?;
            let (doc, h) = (&l.value, &l.hopf);
            r.extend("", check_squared(&doc.coalgebra(h)?, paranoid)?);
            if matches!(kind, Kind::Squared) {
                return Ok(r.into());
            }
            r.extend("", check_bicoalgebra(&doc.bicoalgebra(h)?, paranoid)?);
            if matches!(kind, Kind::Bicoalgebra) {
                return Ok(r.into());
            }
            r.extend("", check_antipode(&doc.hopf_coalgebra(h)?, &doc.generator_list(h.field)?)?);
            if matches!(kind, Kind::HopfCoalgebra) {
                return Ok(r.into());
            }
            r.extend("", check_qt(&doc.quasitriangular(h)?, paranoid)?);
            if matches!(kind, Kind::Ribbon) {
                r.extend("", check_ribbon(&doc.ribbon(h)?)?);
            }
        }
    }
    Ok(r.into())
}

fn coend(path: &Path, opts: Options, out: Option<&Path>) -> Outcome {
    let (d, twists) = io::load_diagram(path)?;
    let (e, report) = pipeline::run(&d, opts, twists.as_ref())?;
    let doc = CoendDoc::from_coend(&e, twists.as_ref(), report.clone());
    finish(report, &io::to_json(&doc), out)
}

fn eval(expr: &str, binds: &[(String, PathBuf)], hopf: &str, json: bool) -> Outcome {
    let e = parse(expr)?;
    let mut bind = Bindings::new();
    for (name, path) in binds {
        let v: serde_json::Value = io::read_json(path)?;
        let x = if v.get("comodule").is_some() {
            let l = io::load_structure(path)?;
            l.value.comodule.to_comodule(&l.hopf)?
        } else {
            io::load_comodule(path)?
        };
        bind.insert(name.clone(), x);
    }
    let h = match bind.values().next() {
        Some(x) => x.hopf.clone(),
        None => io::load_hopf_file(Path::new(hopf))?,
    };
    let real = realize(&e, &h, &bind)?;
    let x = &real.comodule;
    if json {
        let body = io::ComoduleBody::from_comodule(x);
        let out = serde_json::json!({ "expr": e.to_string(), "level": x.level, "dim": x.dim, "coaction": body.coaction });
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        println!("expr: {e}");
        println!("level: {}", x.level);
        println!("dim: {}", x.dim);
        println!("coaction:");
        print!("{}", x.coaction);
    }
    Ok(Done { report: VerificationReport::new(), show: false })
}

fn demo(name: Demo) -> Outcome {
    let f = field_from_env()?;
    let mut r = VerificationReport::new();
    match name {
        Demo::TrivialComatrix => {
            let h = shc::hopf::builtin("trivial", f)?;
            let c = canonical(&shc::comod::Comodule::trivial(&h, 1, 2))?;
            println!("comatrix coalgebra on k²: dim {}", c.dim());
            r.extend("comatrix", check_squared(&c, true)?);
            for (fx, gens) in [("trivial-comatrix", "id"), ("trivial-k2-e11", "id, E11"), ("trivial-k2-end", "End(k²)")] {
                let (e, rep) = pipeline::run(&fixtures::by_name(fx, f)?, Options::default(), None)?;
                println!("coend of k² with {gens}: dim {}", e.dim());
                r.extend(fx, rep);
            }
            let opts = Options { monoidal: true, antipode: true, ..Options::default() };
            let (e, rep) = pipeline::run(&fixtures::trivial_rigid(f)?, opts, None)?;
            println!("coend of {{I, k², (k²)^∨}} with product and antipodes: dim {}", e.dim());
            r.extend("trivial-rigid", rep);
        }
        Demo::Kz2Qt => {
            let (e, rep) = pipeline::run(&fixtures::kz2(f)?, Options::all(), None)?;
            println!("coend of {{I, V_odd}} over kZ2: dim {}", e.dim());
            if let Some(q) = &e.qt {
                println!("R_plus = {}", row_text(&q.r_plus));
                println!("R_minus = {}", row_text(&q.r_minus));
            }
            if let Some(rb) = &e.ribbon {
                println!("Theta = {}", row_text(&rb.theta));
            }
            r.extend("kZ2", rep);
        }
        Demo::Sweedler4Hopf => {
            let opts = Options { monoidal: true, antipode: true, check_c58: true, ..Options::default() };
            let (e, rep) = pipeline::run(&fixtures::sweedler(f)?, opts, None)?;
            println!("coend of {{I, G, X, GX}} over Sweedler's algebra: dim {}", e.dim());
            r.extend("sweedler4", rep);
        }
    }
    Ok(r.into())
}

fn row_text(m: &Matrix) -> String {
    let cells: Vec<String> = (0..m.cols()).map(|j| m.get(0, j).to_text()).collect();
    format!("[{}]", cells.join(", "))
}

fn field_from_env() -> Result<Field, Error> {
    Ok(Ctx::new(None, Path::new("."))?.field)
}

fn opposite_cmd(path: &Path, out: Option<&Path>) -> Outcome {
    let (doc, ctx) = io::load_coend_doc(path)?;
    let (d, _) = doc.diagram.to_diagram(&ctx)?;
    let e = build_coend(&d)?;
    let mut r = VerificationReport::new();
    r.flag("coend.matches_file", CoalgebraBody::from_coalgebra(&e.c) == doc.coalgebra, None);
    let source = match &doc.hopf_coalgebra {
        Some(hc) => io::zeta_from_doc(&hc.zeta, ctx.field)?,
        None => pipeline::zeta_source(&d)?,
    };
    r.extend("", check_opposite(&e, &source)?);
    let (op, z) = opposite(&e, &source)?;
    let out_doc = serde_json::json!({
        "field": ctx.field.name(),
        "coalgebra": CoalgebraBody::from_coalgebra(&op),
        "z": io::matrix_to_raw(&z),
        "report": r,
    });
    finish(r, &format!("{}
", serde_json::to_string_pretty(&out_doc).expect("serializable")), out)
}

fn fixture(name: &str, structure: bool, out: Option<&Path>) -> Outcome {
    let f = field_from_env()?;
    if name == "comatrix" {
        let h = shc::hopf::builtin("trivial", f)?;
        let c = canonical(&shc::comod::Comodule::trivial(&h, 1, 2))?;
        return finish(VerificationReport::new(), &io::to_json(&StructureDoc::from_parts(&c, None, None, None, None)), out);
    }
    let d = fixtures::by_name(name, f)?;
    if !structure {
        return finish(VerificationReport::new(), &io::to_json(&DiagramDoc::from_diagram(&d, None)), out);
    }
    let opts = if d.unit_object.is_none() {
        Options::default()
    } else if d.hopf.ribbon.is_some() {
        Options::all()
    } else {
        Options { monoidal: true, antipode: true, rmatrix: true, ..Options::default() }
    };
    let (e, report) = pipeline::run(&d, opts, None)?;
    let mut doc = StructureDoc::from_parts(&e.c, e.bi.as_ref(), e.hopf.as_ref(), e.qt.as_ref(), e.ribbon.as_ref());
    if e.hopf.is_some() {
        doc.generators = generators(&e).iter().map(|(n, m)| (n.clone(), io::matrix_to_raw(m))).collect::<BTreeMap<_, _>>();
    }
    finish(report, &io::to_json(&doc), out)
}
