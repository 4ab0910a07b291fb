use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use ainfty::category::AInftyCategory;
use ainfty::comparison::{demo_complexes, demo_dg};
use ainfty::dg::build_dg_category;
use ainfty::functor::{check_functor, AInftyFunctor};
use ainfty::generate::{generate_corpus, GeneratorConfig};
use ainfty::hpt::{check_sdr, minimal_model, transfer, SDRData};
use ainfty::io::{
    from_text, peek_kind, to_text, Complexes, Document, Manifest, ManifestEntry, NamedMorphism,
    Report, TwistedDocument,
};
use ainfty::relations::{check_relations, check_units};
use ainfty::report::{FieldMode, RelationReport};
use ainfty::shifts::{enlarge, hpt_square_check_paired, ShiftConvention};

#[derive(Parser)]
#[command(
    name = "ainfty",
    version,
    about = "Exact checks and constructions for finite A-infinity categories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args)]
struct Opts {
    /// Input document
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output document (a directory for `generate`)
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Shift sign convention
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    convention: u8,
    /// Relation arity to check, or arity of transferred structures
    #[arg(long, global = true)]
    arity: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// `q` for the rationals, `p:<prime>` to judge residuals modulo a prime
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Corpus size for `generate`
    #[arg(long, global = true, default_value_t = 25)]
    size: usize,
    /// Comma-separated shifts for the enlargement
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    shifts: Option<Vec<i32>>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the identities of any structure document
    Verify,
    /// Transfer along an SDR, writing the transferred category
    Transfer {
        /// Also write the comparison functor here
        #[arg(long)]
        functor: Option<PathBuf>,
    },
    /// Minimal model of a category or of the DG category of complexes
    MinimalModel {
        #[arg(long)]
        functor: Option<PathBuf>,
    },
    /// Enlarge a category by shifted objects
    Enlarge,
    /// Compare transfer-then-enlarge with enlarge-then-transfer
    SquareCheck {
        /// Run the enlarged path with the other convention (must fail)
        #[arg(long)]
        cross: bool,
    },
    /// Maurer-Cartan and shift checks on twisted complexes
    TwCheck,
    /// Mapping cone of a closed morphism and its triangle checks
    Cone {
        /// Morphism name; defaults to the first one in the document
        #[arg(long)]
        morphism: Option<String>,
    },
    /// Compare the DG category of shifted complexes with both enlargements
    DemoDg,
    /// Write a seeded corpus with its manifest
    Generate,
}

/// Anything that stops a command before a verdict: exit code 2.
struct Fatal(String);

impl From<ainfty::Error> for Fatal {
    fn from(e: ainfty::Error) -> Self {
        Fatal(e.to_string())
    }
}

type Run<T> = Result<T, Fatal>;

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Run<()> {
    fs::write(path, text).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

impl Opts {
    fn input_text(&self) -> Run<String> {
        let path = self
            .input
            .as_ref()
            .ok_or_else(|| Fatal("--input is required".into()))?;
        read(path)
    }

    fn input<D: Document>(&self) -> Run<D> {
        Ok(from_text(&self.input_text()?)?)
    }

    fn convention(&self) -> ShiftConvention {
        ShiftConvention::from_int(self.convention).expect("validated by clap")
    }

    fn field(&self) -> Run<FieldMode> {
        Ok(FieldMode::parse(&self.field)?)
    }

    fn rationals_only(&self, command: &str) -> Run<()> {
        match self.field()? {
            FieldMode::Rationals => Ok(()),
            f => Err(Fatal(format!(
                "{command} computes over q; --field {f} only applies to verify and tw-check"
            ))),
        }
    }

    fn shifts(&self, default: &[i32]) -> Vec<i32> {
        self.shifts.clone().unwrap_or_else(|| default.to_vec())
    }

    /// Writes a structure to `--output`, or to stdout.
    fn emit<D: Document>(&self, doc: &D) -> Run<()> {
        let text = to_text(doc);
        match &self.output {
            Some(p) => write(p, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// Writes a report to `--output` when given.
    fn emit_report(&self, r: &Report) -> Run<()> {
        match &self.output {
            Some(p) => write(p, &to_text(r)),
            None => Ok(()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Run<bool> {
    let o = &cli.opts;
    match &cli.command {
        Command::Verify => verify(o),
        Command::Transfer { functor } => cmd_transfer(o, functor.as_deref()),
        Command::MinimalModel { functor } => cmd_minimal_model(o, functor.as_deref()),
        Command::Enlarge => cmd_enlarge(o),
        Command::SquareCheck { cross } => square_check(o, *cross),
        Command::TwCheck => tw_check(o),
        Command::Cone { morphism } => cone(o, morphism.as_deref()),
        Command::DemoDg => cmd_demo_dg(o),
        Command::Generate => generate(o),
    }
}

fn relation_details(r: &RelationReport) -> serde_json::Value {
    serde_json::to_value(r).expect("reports serialize")
}

/// Checks one parsed document; returns the report sections.
fn verify_text(o: &Opts, text: &str, field: FieldMode) -> Run<Vec<(String, RelationReport)>> {
    let kind = peek_kind(text)?;
    let mut sections = Vec::new();
    match kind.as_str() {
        "category" | "complexes" => {
            let c: AInftyCategory = if kind == "category" {
                from_text(text)?
            } else {
                let cx: Complexes = from_text(text)?;
                build_dg_category(&cx.0, o.arity.unwrap_or(3).max(2))?
            };
            let n = o.arity.unwrap_or(c.arity_bound());
            sections.push(("relations".to_string(), check_relations(&c, n)?));
            sections.push(("units".to_string(), check_units(&c)));
        }
        "sdr" => {
            let s: SDRData = from_text(text)?;
            sections.push(("sdr".to_string(), check_sdr(&s)?));
        }
        "functor" => {
            let f: AInftyFunctor = from_text(text)?;
            let n = o.arity.unwrap_or(f.arity_bound());
            sections.push((
                "source".to_string(),
                check_relations(f.source(), n.min(2 * f.source().arity_bound() - 1))?,
            ));
            sections.push((
                "target".to_string(),
                check_relations(f.target(), n.min(2 * f.target().arity_bound() - 1))?,
            ));
            sections.push(("functor".to_string(), check_functor(&f, n)?));
        }
        "twisted" => {
            let d: TwistedDocument = from_text(text)?;
            for t in &d.complexes {
                sections.push((format!("maurer-cartan {}", t.name), d.tw.check_mc(t)?));
            }
        }
        other => return Err(Fatal(format!("verify does not handle {other:?} documents"))),
    }
    sections
        .into_iter()
        .map(|(name, r)| Ok((name, field.reduce(r)?)))
        .collect()
}

fn verify(o: &Opts) -> Run<bool> {
    let field = o.field()?;
    let text = o.input_text()?;
    let mut sections = Vec::new();
    if peek_kind(&text)? == "manifest" {
        let m: Manifest = from_text(&text)?;
        let dir = o
            .input
            .as_ref()
            .and_then(|p| p.parent())
            .unwrap_or(Path::new("."));
        for e in &m.entries {
            for (kind, file) in &e.files {
                let sub = read(&dir.join(file))?;
                for (name, r) in verify_text(o, &sub, field)? {
                    sections.push((format!("{} {kind} {name}", e.name), r));
                }
            }
        }
    } else {
        sections = verify_text(o, &text, field)?;
    }
    let passed = sections.iter().all(|(_, r)| r.passed());
    let mut summary = Vec::new();
    for (name, r) in &sections {
        let line = format!("{name}: {}", if r.passed() { "ok" } else { "FAILED" });
        println!("{line}");
        if !r.passed() {
            print!("{}", r.render());
        }
        summary.push(line);
    }
    let details = serde_json::Value::Object(
        sections
            .iter()
            .map(|(name, r)| (name.clone(), relation_details(r)))
            .collect(),
    );
    o.emit_report(&Report {
        command: "verify".into(),
        passed,
        summary,
        details,
    })?;
    Ok(passed)
}

fn write_functor(path: Option<&Path>, f: &AInftyFunctor) -> Run<()> {
    match path {
        Some(p) => write(p, &to_text(f)),
        None => Ok(()),
    }
}

fn cmd_transfer(o: &Opts, functor: Option<&Path>) -> Run<bool> {
    o.rationals_only("transfer")?;
    let s: SDRData = o.input()?;
    let (model, f) = transfer(&s, o.arity.unwrap_or(5))?;
    write_functor(functor, &f)?;
    o.emit(&model)?;
    Ok(true)
}

fn cmd_minimal_model(o: &Opts, functor: Option<&Path>) -> Run<bool> {
    o.rationals_only("minimal-model")?;
    let text = o.input_text()?;
    let k = o.arity.unwrap_or(5);
    let c: AInftyCategory = match peek_kind(&text)?.as_str() {
        "complexes" => build_dg_category(&from_text::<Complexes>(&text)?.0, k)?,
        _ => from_text(&text)?,
    };
    let (model, f) = minimal_model(&c, k)?;
    write_functor(functor, &f)?;
    o.emit(&model)?;
    Ok(true)
}

fn cmd_enlarge(o: &Opts) -> Run<bool> {
    o.rationals_only("enlarge")?;
    let c: AInftyCategory = o.input()?;
    let e = enlarge(&c, o.convention(), &o.shifts(&[-1, 0, 1]))?;
    o.emit(e.category())?;
    Ok(true)
}

fn square_check(o: &Opts, cross: bool) -> Run<bool> {
    o.rationals_only("square-check")?;
    let s: SDRData = o.input()?;
    let a = o.convention();
    let a2 = if cross { a.other() } else { a };
    let r = hpt_square_check_paired(&s, a, a2, o.arity.unwrap_or(4), &o.shifts(&[-1, 0, 1]))?;
    let line = format!(
        "square (path 1 a={}, path 2 a={}, arity {}): {}",
        r.path1_convention,
        r.path2_convention,
        r.arity,
        if r.equal() { "EQUAL" } else { "DIFFERS" }
    );
    println!("{line}");
    if let Some(m) = &r.first_mismatch {
        println!(
            "  first {} mismatch at arity {}: objects ({}) inputs ({}): {:?} vs {:?}",
            m.part,
            m.arity,
            m.objects.join(", "),
            m.inputs.join(", "),
            m.left,
            m.right
        );
    }
    let details = serde_json::to_value(&r).expect("reports serialize");
    o.emit_report(&Report {
        command: "square-check".into(),
        passed: r.equal(),
        summary: vec![line],
        details,
    })?;
    Ok(r.equal())
}

fn tw_check(o: &Opts) -> Run<bool> {
    let field = o.field()?;
    let d: TwistedDocument = o.input()?;
    let tw = &d.tw;
    let mut summary = Vec::new();
    let mut details = serde_json::Map::new();
    let mut passed = true;
    let mut record = |name: String, ok: bool, detail: serde_json::Value| {
        let line = format!("{name}: {}", if ok { "ok" } else { "FAILED" });
        println!("{line}");
        passed &= ok;
        summary.push(line);
        details.insert(name, detail);
    };
    for t in &d.complexes {
        let mc = field.reduce(tw.check_mc(t)?)?;
        record(
            format!("maurer-cartan {}", t.name),
            mc.passed(),
            relation_details(&mc),
        );
        let shifted = tw.shift_complex(t);
        let tmc = field.reduce(tw.check_mc(&shifted)?)?;
        record(
            format!("maurer-cartan {}", shifted.name),
            tmc.passed(),
            relation_details(&tmc),
        );
    }
    for m in &d.morphisms {
        let (x, y) = (&d.complexes[m.source], &d.complexes[m.target]);
        let ok = tw.check_tw_shift_compatibility(&[x, y], &[&m.morphism])?;
        record(format!("shift compatibility {}", m.name), ok, json!(ok));
    }
    o.emit_report(&Report {
        command: "tw-check".into(),
        passed,
        summary,
        details: details.into(),
    })?;
    Ok(passed)
}

fn cone(o: &Opts, name: Option<&str>) -> Run<bool> {
    o.rationals_only("cone")?;
    let mut d: TwistedDocument = o.input()?;
    let m = match name {
        Some(n) => d
            .morphism(n)
            .ok_or_else(|| Fatal(format!("no morphism {n:?}")))?,
        None => d
            .morphisms
            .first()
            .ok_or_else(|| Fatal("the document has no morphisms".into()))?,
    }
    .clone();
    let (x, y) = (d.complexes[m.source].clone(), d.complexes[m.target].clone());
    let r = d.tw.triangle_check(&x, &y, &m.morphism)?;
    let checks = [
        ("cone maurer-cartan", r.cone_mc),
        ("inclusion closed", r.inclusion_closed),
        ("projection closed", r.projection_closed),
        ("first composite null-homotopic", r.first_zero_class),
        ("second composite null-homotopic", r.second_zero_class),
    ];
    for (what, ok) in checks {
        println!("{what}: {}", if ok { "ok" } else { "FAILED" });
    }
    let incl = d.tw.cone_inclusion(&x, &y, &r.cone)?;
    let proj = d.tw.cone_projection(&x, &r.cone)?;
    let c = d.complexes.len();
    if d.complex(&r.cone.name).is_some() {
        return Err(Fatal(format!(
            "the document already has a complex named {:?}",
            r.cone.name
        )));
    }
    d.complexes.push(r.cone.clone());
    for (suffix, source, target, morphism) in [
        ("inclusion", m.target, c, incl),
        ("projection", c, m.source, proj),
    ] {
        d.morphisms.push(NamedMorphism {
            name: format!("{} {suffix}", m.name),
            source,
            target,
            morphism,
        });
    }
    o.emit(&d)?;
    Ok(r.ok())
}

fn cmd_demo_dg(o: &Opts) -> Run<bool> {
    o.rationals_only("demo-dg")?;
    let complexes = match &o.input {
        Some(_) => o.input::<Complexes>()?.0,
        None => demo_complexes(),
    };
    let d = demo_dg(&complexes, &o.shifts(&[-2, -1, 0, 1, 2]))?;
    let line = d.summary();
    println!("{line}");
    let details = serde_json::to_value(&d).expect("reports serialize");
    let passed = d.convention_two.equal();
    o.emit_report(&Report {
        command: "demo-dg".into(),
        passed,
        summary: vec![line],
        details,
    })?;
    Ok(passed)
}

fn generate(o: &Opts) -> Run<bool> {
    o.rationals_only("generate")?;
    let dir = o.output.clone().unwrap_or_else(|| PathBuf::from("corpus"));
    fs::create_dir_all(&dir).map_err(|e| Fatal(format!("{}: {e}", dir.display())))?;
    let cfg = GeneratorConfig {
        model_arity: o.arity.unwrap_or(5),
        ..GeneratorConfig::default()
    };
    let corpus = generate_corpus(o.seed, o.size, &cfg)?;
    let mut manifest = Manifest {
        seed: o.seed,
        size: o.size,
        arity_bound: cfg.arity_bound,
        model_arity: cfg.model_arity,
        entries: Vec::new(),
    };
    let mut passed = true;
    for e in &corpus {
        let n = cfg.model_arity;
        let checks = [
            check_relations(&e.category, n.min(2 * cfg.arity_bound - 1))?,
            check_sdr(&e.sdr)?,
            check_relations(&e.model, n.min(2 * cfg.model_arity - 1))?,
            check_functor(&e.functor, n.min(e.functor.soundness_bound()))?,
        ];
        let ok = checks.iter().all(RelationReport::passed);
        passed &= ok;
        let texts = [
            ("complexes", to_text(&Complexes(e.complexes.clone()))),
            ("category", to_text(&e.category)),
            ("sdr", to_text(&e.sdr)),
            ("model", to_text(&e.model)),
            ("functor", to_text(&e.functor)),
        ];
        let mut files = std::collections::BTreeMap::new();
        for (kind, text) in texts {
            let file = format!("{}.{kind}.json", e.name);
            write(&dir.join(&file), &text)?;
            files.insert(kind.to_string(), file);
        }
        println!(
            "{}: {}{}",
            e.name,
            if ok { "ok" } else { "FAILED" },
            if e.has_m3() { " (m3 nonzero)" } else { "" }
        );
        manifest.entries.push(ManifestEntry {
            name: e.name.clone(),
            objects: e.category.objects().to_vec(),
            total_dim: e.complexes.iter().map(|(_, c)| c.total_dim()).sum(),
            files,
            m3: e.has_m3(),
        });
    }
    write(&dir.join("manifest.json"), &to_text(&manifest))?;
    println!(
        "{} instance(s), {} with nonzero m3",
        manifest.entries.len(),
        manifest.m3_instances().count()
    );
    Ok(passed)
}
