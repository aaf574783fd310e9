use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use diaghom::colimits::{colim_group, colim_presentation, ColimResult, DEFAULT_MAX_COSETS};
use diaghom::connectivity::{connectivity, Cocon, FirstGroup};
use diaghom::cotriple::{degenerate_generation_formula, moore_homotopy, verify_main1, CotripleResolution};
use diaghom::diagramhomology::{
    colim_ab, colim_n, flow_subgroup, full_replacement, les_check, FormalReplacement, ShortExactSequence,
};
use diaghom::diagrams::{abelianize, homology_diagram, AbelianDiagram, GroupDiagram};
use diaghom::document::{Diagram, InputDocument, TaskSpec};
use diaghom::permgroups::abelianization;
use diaghom::spaces::{hocolim_pointed, SimplicialDiagram};
use diaghom::suite::{random_abelian_diagram_on, rng, DEFAULT_SEED};
use diaghom::{Error, FpAbelianGroup};

#[derive(Parser)]
#[command(name = "dh", version, about = "Colimits, homology and connectivity of group diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Colim,
    Homology,
    Flows,
    Connectivity,
    Hocolim,
    GroupHomology,
    VerifyMain1,
    Moore,
}

#[derive(Subcommand)]
enum Command {
    /// Colimit of the diagram (abelian colimit for abelian input).
    Colim(Opts),
    /// Derived colimits coLim_n of the abelian(ized) diagram.
    Homology(Opts),
    /// Flow subgroup of the abelian(ized) diagram.
    Flows(Opts),
    /// Connectivity of the colimit and the first nonvanishing group.
    Connectivity(Opts),
    /// Reduced homology of the pointed homotopy colimit of classifying spaces.
    Hocolim(Opts),
    /// Group homology of every object.
    GroupHomology(Opts),
    /// Compare the colimit of the cotriple resolution with the simplicial replacement.
    VerifyMain1(Opts),
    /// Moore homotopy of the simplicial replacement.
    Moore(Opts),
    /// Run every applicable cross-check, then the document's tasks.
    Verify(Opts),
}

#[derive(Args, Clone)]
struct Opts {
    /// Input document (JSON).
    file: PathBuf,
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    /// Single dimension; for `hocolim`, the top dimension of the construction.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
    max_cosets: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok,
    /// Unknown colimit, ambiguous extension, or a failed check.
    Unresolved,
}

struct Report {
    fields: Map<String, Value>,
    lines: Vec<String>,
    status: Status,
}

impl Report {
    fn new() -> Self {
        Report { fields: Map::new(), lines: Vec::new(), status: Status::Ok }
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.fields.insert(key.into(), v.into());
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn unresolved(&mut self) {
        self.status = Status::Unresolved;
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BoundExceeded { .. } => 2,
        Error::UnknownColim(_) => 3,
        _ => 1,
    }
}

fn group_diagram(d: &Diagram) -> Result<&GroupDiagram, Error> {
    match d {
        Diagram::Group(g) => Ok(g),
        Diagram::Abelian(_) => Err(Error::Input("this command needs a group diagram, not an abelian one".into())),
    }
}

fn abelian_diagram(d: &Diagram) -> Result<AbelianDiagram, Error> {
    match d {
        Diagram::Group(g) => abelianize(g),
        Diagram::Abelian(a) => Ok(a.clone()),
    }
}

fn show(g: &FpAbelianGroup) -> String {
    g.to_string()
}

fn colim(d: &Diagram, o: &Opts) -> Result<Report, Error> {
    let mut r = Report::new();
    let g = match d {
        Diagram::Abelian(a) => {
            let g = colim_ab(a)?;
            r.set("kind", "abelian");
            r.set("group", show(&g));
            r.line(format!("colimit: {g}"));
            return Ok(r);
        }
        Diagram::Group(g) => g,
    };
    let c = colim_group(g, o.max_cosets)?;
    let presentation = colim_presentation(g)?.presentation;
    let ab = match &c {
        ColimResult::Trivial => FpAbelianGroup::trivial(),
        ColimResult::Finite { group, .. } => abelianization(group)?.group,
        ColimResult::Unknown { .. } => presentation.abelianization(),
    };
    match &c {
        ColimResult::Trivial => {
            r.set("kind", "trivial");
            r.set("order", 1);
            r.line("colimit: trivial group");
        }
        ColimResult::Finite { group, .. } => {
            let n = group.order()?;
            r.set("kind", "finite");
            r.set("order", n);
            r.line(format!("colimit: group of order {n}"));
        }
        ColimResult::Unknown { bound } => {
            r.set("kind", "unknown");
            r.set("max_cosets", *bound);
            r.line(format!("colimit: not determined within {bound} cosets"));
            r.unresolved();
        }
    }
    r.set("abelianization", show(&ab));
    r.line(format!("abelianization: {ab}"));
    r.set("presentation", presentation.to_string());
    r.line(format!("presentation: {presentation}"));
    Ok(r)
}

fn dims(o: &Opts, from: usize) -> Vec<usize> {
    match o.dim {
        Some(n) => vec![n],
        None => (from..=o.max_dim).collect(),
    }
}

fn homology(d: &Diagram, o: &Opts) -> Result<Report, Error> {
    let a = abelian_diagram(d)?;
    let mut r = Report::new();
    let mut out = Vec::new();
    for n in dims(o, 0) {
        let g = colim_n(&a, n)?;
        r.line(format!("coLim_{n} = {g}"));
        out.push(json!({"n": n, "group": show(&g)}));
    }
    r.set("colim_n", out);
    Ok(r)
}

fn flows(d: &Diagram, _: &Opts) -> Result<Report, Error> {
    let g = flow_subgroup(&abelian_diagram(d)?)?;
    let mut r = Report::new();
    r.set("flows", show(&g));
    r.line(format!("flows: {g}"));
    Ok(r)
}

fn connectivity_cmd(d: &Diagram, o: &Opts) -> Result<Report, Error> {
    let rep = connectivity(group_diagram(d)?, o.max_dim, o.max_cosets)?;
    let mut r = Report::new();
    match rep.cocon {
        Cocon::Exact(n) => {
            r.set("cocon", n);
            r.set("cocon_exact", true);
        }
        Cocon::AtLeast(n) => {
            r.set("cocon", n);
            r.set("cocon_exact", false);
        }
    }
    r.line(format!("cocon = {}", rep.cocon));
    r.set("first_group", rep.first_group.to_string());
    if let Cocon::Exact(n) = rep.cocon {
        r.line(format!("colim_{n} = {}", rep.first_group));
    }
    if matches!(rep.first_group, FirstGroup::Ambiguous { .. }) {
        r.unresolved();
    }
    let trail: Vec<Value> = rep
        .trail
        .iter()
        .map(|t| {
            r.line(format!(
                "  n = {}: colim H_{} = {}, flows of H_{} = {} ({})",
                t.dimension,
                t.dimension,
                t.left,
                t.dimension - 1,
                t.right,
                serde_json::to_value(t.resolution).expect("serializes").as_str().unwrap_or_default()
            ));
            json!({"dimension": t.dimension, "left": show(&t.left), "right": show(&t.right), "resolution": t.resolution})
        })
        .collect();
    r.set("trail", trail);
    Ok(r)
}

fn hocolim(d: &Diagram, o: &Opts) -> Result<Report, Error> {
    let g = group_diagram(d)?;
    let cap = o.dim.unwrap_or(o.max_dim + 1).max(2);
    let h = hocolim_pointed(&SimplicialDiagram::classifying(g, cap)?, cap)?;
    let table = h.reduced_homology_table(cap - 1)?;
    let groups: Vec<String> = table[1..].iter().map(show).collect();
    let mut r = Report::new();
    r.set("dim", cap);
    r.set("reduced_homology", groups.clone());
    r.set("nondegenerate_simplices", (0..=cap).map(|n| h.nondegenerate(n).len()).collect::<Vec<_>>());
    r.line(format!("reduced homology H~_1..H~_{}: ({})", cap - 1, groups.join(", ")));
    Ok(r)
}

fn group_homology_cmd(d: &Diagram, o: &Opts) -> Result<Report, Error> {
    let g = group_diagram(d)?;
    let cat = g.base();
    let mut r = Report::new();
    let mut per = Map::new();
    let ns = dims(o, 1);
    let diagrams = ns.iter().map(|&n| homology_diagram(g, n)).collect::<Result<Vec<_>, _>>()?;
    for v in 0..cat.num_objects() {
        let hs: Vec<String> = diagrams.iter().map(|h| show(h.object(v))).collect();
        let name = cat.object_name(v).to_string();
        r.line(format!(
            "{name} ({}): {}",
            g.object(v).describe(),
            ns.iter().zip(&hs).map(|(n, h)| format!("H_{n} = {h}")).collect::<Vec<_>>().join(", ")
        ));
        per.insert(name, json!(hs));
    }
    r.set("dims", ns);
    r.set("homology", per);
    Ok(r)
}

fn verify_main1_cmd(d: &Diagram, o: &Opts) -> Result<Report, Error> {
    let rep = verify_main1(&abelian_diagram(d)?, o.max_dim)?;
    let mut r = Report::new();
    r.set("holds", rep.holds());
    r.set("levels_isomorphic", rep.levels_isomorphic);
    r.set("faces_commute", rep.faces_commute);
    r.set("degeneracies_commute", rep.degeneracies_commute);
    let hs: Vec<Value> = rep.homology.iter().map(|(x, y)| json!([show(x), show(y)])).collect();
    r.set("homology", hs);
    r.line(format!("comparison holds through level {}: {}", o.max_dim, rep.holds()));
    r.line(format!(
        "  levels isomorphic: {}, faces commute: {}, degeneracies commute: {}",
        rep.levels_isomorphic, rep.faces_commute, rep.degeneracies_commute
    ));
    for (n, (x, y)) in rep.homology.iter().enumerate() {
        r.line(format!("  H_{n}: replacement {x}, resolution colimit {y}"));
    }
    if !rep.holds() {
        r.unresolved();
    }
    Ok(r)
}

fn moore(d: &Diagram, o: &Opts) -> Result<Report, Error> {
    let top = o.dim.unwrap_or(o.max_dim);
    let g = full_replacement(&abelian_diagram(d)?, top + 1)?;
    let alt = g.alternating_complex()?;
    let mut r = Report::new();
    let mut out = Vec::new();
    for n in dims(o, 0) {
        let m = moore_homotopy(&g, n)?;
        let h = alt.homology_group(n);
        let formula = match degenerate_generation_formula(&g, n) {
            Ok(f) => Some(f),
            Err(Error::PreconditionFailed(_)) => None,
            Err(e) => return Err(e),
        };
        if m != h || formula.as_ref().is_some_and(|f| *f != m) {
            r.unresolved();
        }
        r.line(format!(
            "pi_{n} = {m} (alternating sum: {h}, degenerate formula: {})",
            formula.as_ref().map_or("not applicable".to_string(), show)
        ));
        out.push(json!({"n": n, "moore": show(&m), "alternating": show(&h), "formula": formula.as_ref().map(show)}));
    }
    r.set("homotopy", out);
    Ok(r)
}

fn run(kind: Kind, d: &Diagram, o: &Opts) -> Result<Report, Error> {
    match kind {
        Kind::Colim => colim(d, o),
        Kind::Homology => homology(d, o),
        Kind::Flows => flows(d, o),
        Kind::Connectivity => connectivity_cmd(d, o),
        Kind::Hocolim => hocolim(d, o),
        Kind::GroupHomology => group_homology_cmd(d, o),
        Kind::VerifyMain1 => verify_main1_cmd(d, o),
        Kind::Moore => moore(d, o),
    }
}

fn parse_kind(name: &str) -> Result<Kind, Error> {
    Ok(match name {
        "colim" => Kind::Colim,
        "homology" => Kind::Homology,
        "flows" => Kind::Flows,
        "connectivity" => Kind::Connectivity,
        "hocolim" => Kind::Hocolim,
        "group-homology" | "group_homology" => Kind::GroupHomology,
        "verify-main1" | "verify_main1" => Kind::VerifyMain1,
        "moore" => Kind::Moore,
        other => return Err(Error::Input(format!("unknown task command `{other}`"))),
    })
}

struct Check {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<(bool, String), Error>) -> Result<Check, Error> {
    match f() {
        Ok((ok, detail)) => Ok(Check { name, ok, detail }),
        Err(e @ (Error::UnknownColim(_) | Error::PreconditionFailed(_) | Error::Unsupported(_))) => {
            Ok(Check { name, ok: true, detail: format!("skipped: {e}") })
        }
        Err(e) => Err(e),
    }
}

fn group_checks(g: &GroupDiagram, o: &Opts) -> Result<Vec<Check>, Error> {
    let mut out = Vec::new();
    let c = colim_group(g, o.max_cosets)?;
    out.push(check("colimit cocone", || {
        c.verify(g)?;
        Ok((true, "insertions commute with every arrow".into()))
    })?);
    out.push(check("H~_1(hocolim) = colimit abelianization", || {
        let want = match &c {
            ColimResult::Trivial => FpAbelianGroup::trivial(),
            ColimResult::Finite { group, .. } => abelianization(group)?.group,
            ColimResult::Unknown { .. } => colim_presentation(g)?.presentation.abelianization(),
        };
        let h1 = hocolim_pointed(&SimplicialDiagram::classifying(g, 2)?, 2)?.reduced_homology(1)?;
        Ok((h1 == want, format!("{h1} vs {want}")))
    })?);
    out.push(check("connectivity agrees with hocolim", || {
        let rep = connectivity(g, o.max_dim.min(2), o.max_cosets)?;
        let top = match rep.cocon {
            Cocon::Exact(n) => n + 1,
            Cocon::AtLeast(n) => n,
        };
        let h = hocolim_pointed(&SimplicialDiagram::classifying(g, top + 1)?, top + 1)?;
        let table = h.reduced_homology_table(top)?;
        let low = table[1..top].iter().all(FpAbelianGroup::is_trivial);
        let at_top = match &rep.first_group {
            FirstGroup::Abelian(x) => *x == table[top],
            FirstGroup::None => table[top].is_trivial(),
            FirstGroup::Colim(_) | FirstGroup::Ambiguous { .. } => true,
        };
        Ok((low && at_top, format!("cocon {}, H~_{top} = {}", rep.cocon, table[top])))
    })?);
    out.push(check("formal replacement identities", || {
        let n = FormalReplacement::new(g, 3).check_identities()?;
        Ok((true, format!("{n} equations")))
    })?);
    Ok(out)
}

fn abelian_checks(a: &AbelianDiagram, o: &Opts) -> Result<Vec<Check>, Error> {
    let top = o.max_dim.min(3);
    let mut out = Vec::new();
    out.push(check("flows = coLim_1", || {
        let (f, c) = (flow_subgroup(a)?, colim_n(a, 1)?);
        Ok((f == c, format!("{f} vs {c}")))
    })?);
    out.push(check("cotriple resolution identities", || {
        let res = CotripleResolution::new(a, top)?;
        res.check_identities()?;
        Ok((res.augmentation_coequalizes()?, "augmentation coequalizes".into()))
    })?);
    out.push(check("cotriple colimit = simplicial replacement", || {
        let rep = verify_main1(a, top)?;
        Ok((rep.holds(), format!("through level {top}")))
    })?);
    out.push(check("Moore homotopy = alternating homology", || {
        let g = full_replacement(a, top)?;
        let alt = g.alternating_complex()?;
        let ok = (0..top).map(|n| Ok(moore_homotopy(&g, n)? == alt.homology_group(n))).collect::<Result<Vec<_>, Error>>()?;
        Ok((ok.iter().all(|&b| b), format!("dimensions 0..{top}")))
    })?);
    out.push(check("long exact sequences", || {
        let q = random_abelian_diagram_on(&mut rng(o.seed), a.base());
        let split = les_check(&ShortExactSequence::split(a, &q)?, 2)?;
        let cover = les_check(&ShortExactSequence::free_cover(a)?, 2)?;
        Ok((split.is_exact() && cover.is_exact(), format!("split with seed {} and free cover", o.seed)))
    })?);
    Ok(out)
}

fn verify(doc: &InputDocument, d: &Diagram, o: &Opts) -> Result<Report, Error> {
    let mut checks = match d {
        Diagram::Group(g) => group_checks(g, o)?,
        Diagram::Abelian(_) => Vec::new(),
    };
    checks.extend(abelian_checks(&abelian_diagram(d)?, o)?);
    let mut r = Report::new();
    let mut cs = Vec::new();
    for c in &checks {
        r.line(format!("{} {}: {}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail));
        cs.push(json!({"name": c.name, "ok": c.ok, "detail": c.detail}));
        if !c.ok {
            r.unresolved();
        }
    }
    r.set("checks", cs);
    let mut tasks = Vec::new();
    for t in &doc.tasks {
        let TaskSpec { command, max_dim, dim } = t;
        let kind = parse_kind(command)?;
        let to = Opts { max_dim: max_dim.unwrap_or(o.max_dim), dim: *dim, ..o.clone() };
        let sub = run(kind, d, &to)?;
        r.line(format!("task {command}:"));
        r.lines.extend(sub.lines.iter().map(|l| format!("  {l}")));
        r.status = r.status.max(sub.status);
        let mut v = sub.fields;
        v.insert("command".into(), json!(command));
        tasks.push(Value::Object(v));
    }
    r.set("tasks", tasks);
    Ok(r)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, o) = match &cli.command {
        Command::Colim(o) => (Some(Kind::Colim), o),
        Command::Homology(o) => (Some(Kind::Homology), o),
        Command::Flows(o) => (Some(Kind::Flows), o),
        Command::Connectivity(o) => (Some(Kind::Connectivity), o),
        Command::Hocolim(o) => (Some(Kind::Hocolim), o),
        Command::GroupHomology(o) => (Some(Kind::GroupHomology), o),
        Command::VerifyMain1(o) => (Some(Kind::VerifyMain1), o),
        Command::Moore(o) => (Some(Kind::Moore), o),
        Command::Verify(o) => (None, o),
    };
    let start = Instant::now();
    let result = std::fs::read_to_string(&o.file)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", o.file.display())))
        .and_then(|text| InputDocument::parse(&text))
        .and_then(|doc| {
            let d = doc.to_diagram()?;
            match kind {
                Some(k) => run(k, &d, o),
                None => verify(&doc, &d, o),
            }
        });
    match result {
        Ok(r) => {
            match o.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&Value::Object(r.fields)).expect("serializes")),
                Format::Text => {
                    for l in &r.lines {
                        println!("{l}");
                    }
                    println!("elapsed: {:.2?}", start.elapsed());
                }
            }
            match r.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Unresolved => ExitCode::from(3),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
