use std::collections::BTreeSet;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use infshift::algebra::{surjectivity_witness, block_code_images, verify_ck_family, AlgebraElement, CkVerdict};
use infshift::code::{
    compose, compose_over, higher_block_code, recode_to_1block, verify_conjugacy, ConjugacyWitness, NamedCode,
    Verification,
};
use infshift::groupoid::{groupoid_map_h, Groupoid, GroupoidElement, GroupoidError};
use infshift::space::{words_of_length, Classification, Membership, ShiftPresentation};
use infshift::topology::{metric_d, metric_da};
use infshift::{BoundaryPath, Graph, Seq};

#[derive(Parser)]
#[command(name = "infshift", version, about = "Shift spaces over countable alphabets and their codes")]
struct Cli {
    /// Symbol and graph horizon for anything enumerated.
    #[arg(long, global = true, default_value_t = 8)]
    horizon: u64,
    /// Block depth for conjugacy checks.
    #[arg(long, global = true, default_value_t = 4)]
    depth: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Lines,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Part {
    Forward,
    Backward,
    Target,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    /// The enumeration metric d_A.
    Da,
    /// First-disagreement metric on infinite sequences.
    D,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupoidOp {
    Compose,
    Inverse,
    Unit,
    Map,
}

#[derive(Subcommand)]
enum Command {
    /// List the blocks of length n.
    Blocks {
        #[arg(long)]
        shift: String,
        #[arg(long)]
        n: usize,
    },
    /// Decide membership of a sequence.
    Member {
        #[arg(long)]
        shift: String,
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
    },
    /// Finite-symbol / row-finite classification.
    Classify {
        #[arg(long)]
        shift: String,
    },
    /// Turn an M-block code on a shift into a 1-block code on its M-th higher block presentation.
    Recode {
        #[arg(long)]
        shift: String,
        #[arg(long)]
        code: PathBuf,
    },
    /// The higher block code, its inverse and the higher block presentation.
    HigherBlock {
        #[arg(long)]
        shift: String,
        #[arg(long)]
        n: usize,
        /// Print only one part.
        #[arg(long, value_enum)]
        emit: Option<Part>,
    },
    /// Compose two block maps: apply phi, then psi.
    Compose {
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        psi: PathBuf,
        /// Materialize the composition over this shift's alphabet (needed when phi has a fallback).
        #[arg(long)]
        shift: Option<String>,
    },
    /// Check a conjugacy witness on blocks and eventually periodic samples.
    VerifyConjugacy {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        forward: PathBuf,
        #[arg(long)]
        backward: PathBuf,
        /// Samples are the source members with |pre| + |per| up to this length.
        #[arg(long, default_value_t = 4)]
        sample_len: usize,
    },
    /// Images of the generators of E's algebra under a block map onto F's edges.
    CkImage {
        #[arg(long = "E")]
        source: PathBuf,
        #[arg(long = "F")]
        target: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        /// Check the Cuntz-Krieger relations.
        #[arg(long)]
        verify: bool,
        /// Exhibit a preimage of every edge generator of F.
        #[arg(long)]
        surjectivity: bool,
    },
    /// Groupoid operations; elements are written x;k;y.
    Groupoid {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        op: GroupoidOp,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Boundary path for `unit`.
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        forward: Option<PathBuf>,
        #[arg(long)]
        backward: Option<PathBuf>,
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Distance between two sequences.
    Metric {
        #[arg(long, value_enum)]
        kind: Metric,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
}

enum Failure {
    /// Bad input: exit 2.
    Input(String),
    /// A check ran and failed: exit 1. The report is already printed.
    Negative(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Input(format!("{context}: {e}"))
}

struct Out {
    format: Format,
}

impl Out {
    /// `tag: a b` as text, `tag<TAB>a<TAB>b` as lines.
    fn record(&self, tag: &str, fields: &[String]) {
        match self.format {
            Format::Text => println!("{tag}: {}", fields.join(" ")),
            Format::Lines => println!("{tag}\t{}", fields.join("\t")),
        }
    }

    /// A whole file in one of the text formats; as lines, one record per line.
    fn file(&self, section: &str, text: &str) {
        match self.format {
            Format::Text => print!("{text}"),
            Format::Lines => {
                for line in text.lines() {
                    println!("{section}\t{line}");
                }
            }
        }
    }
}

fn read(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &FsPath) -> Result<Graph, Failure> {
    Graph::parse(&read(path)?).map_err(input(&path.display().to_string()))
}

fn load_code(path: &FsPath) -> Result<NamedCode, Failure> {
    NamedCode::parse(&read(path)?).map_err(input(&path.display().to_string()))
}

/// `edges:<graph file>`, `builtin:<name>` or a presentation file.
fn load_shift(spec: &str) -> Result<ShiftPresentation, Failure> {
    if let Some(path) = spec.strip_prefix("edges:") {
        let g = load_graph(FsPath::new(path))?;
        return ShiftPresentation::edge_shift(g).map_err(input(path));
    }
    if let Some(name) = spec.strip_prefix("builtin:") {
        return ShiftPresentation::builtin(name).map_err(input(spec));
    }
    let path = FsPath::new(spec);
    let base = path.parent().map(FsPath::to_path_buf).unwrap_or_default();
    ShiftPresentation::parse(&read(path)?, |g| fs::read_to_string(base.join(g))).map_err(input(spec))
}

fn parse_seq(text: &str) -> Result<Seq, Failure> {
    text.parse().map_err(input(text))
}

fn sorted<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    let mut v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    v.sort();
    v
}

fn blocks(out: &Out, shift: &str, n: usize, horizon: u64) -> Outcome {
    let x = load_shift(shift)?;
    let lang = x.block_language(n, horizon);
    let words = sorted(&lang.words);
    match out.format {
        Format::Text => {
            println!("{{{}}}", words.join(", "));
            if lang.partial {
                println!("# truncated at horizon {horizon}");
            }
        }
        Format::Lines => {
            for w in &words {
                out.record("block", std::slice::from_ref(w));
            }
            out.record("partial", &[lang.partial.to_string()]);
        }
    }
    Ok(())
}

fn member(out: &Out, shift: &str, seq: &str) -> Outcome {
    let x = load_shift(shift)?;
    let s = parse_seq(seq)?;
    let answer = match x.contains(&s) {
        Membership::Yes => "Yes",
        Membership::No => "No",
        Membership::PartialYes => "PartialYes",
    };
    match out.format {
        Format::Text => println!("{answer}"),
        Format::Lines => out.record("member", &[s.to_string(), answer.into()]),
    }
    Ok(())
}

fn classify(out: &Out, shift: &str, horizon: u64) -> Outcome {
    let x = load_shift(shift)?;
    let class = match x.classify(horizon) {
        Classification::FiniteSymbol => "FiniteSymbol",
        Classification::RowFiniteInfinite => "RowFiniteInfinite",
        Classification::NotRowFinite => "NotRowFinite",
        Classification::Unknown => "Unknown",
    };
    match out.format {
        Format::Text => println!("{class}"),
        Format::Lines => out.record("class", &[class.into()]),
    }
    Ok(())
}

fn recode(out: &Out, shift: &str, code: &FsPath, horizon: u64) -> Outcome {
    let x = load_shift(shift)?;
    let named = load_code(code)?;
    let recoded = recode_to_1block(&named.code, &x, horizon).map_err(input("recode"))?;
    let name = format!("{}_1block", named.name);
    out.file("blockmap", &NamedCode { name, code: recoded }.to_string());
    Ok(())
}

fn shift_text(x: &ShiftPresentation) -> String {
    match x.graph() {
        Some(g) => g.to_text(),
        None => x.to_string(),
    }
}

fn higher_block(out: &Out, shift: &str, n: usize, emit: Option<Part>, horizon: u64) -> Outcome {
    let x = load_shift(shift)?;
    let hb = higher_block_code(&x, n, horizon).map_err(input("higher-block"))?;
    let forward = NamedCode { name: format!("phi{n}"), code: hb.forward.clone() }.to_string();
    let backward = NamedCode { name: format!("pi{n}"), code: hb.backward.clone() }.to_string();
    let target = shift_text(&hb.target);
    match emit {
        Some(Part::Forward) => out.file("forward", &forward),
        Some(Part::Backward) => out.file("backward", &backward),
        Some(Part::Target) => out.file("target", &target),
        None => {
            for (section, text) in [("forward", &forward), ("backward", &backward), ("target", &target)] {
                if out.format == Format::Text {
                    println!("# {section}");
                }
                out.file(section, text);
            }
        }
    }
    if hb.partial && out.format == Format::Text {
        println!("# truncated at horizon {horizon}");
    }
    Ok(())
}

fn compose_cmd(out: &Out, phi: &FsPath, psi: &FsPath, shift: Option<&str>, horizon: u64) -> Outcome {
    let f = load_code(phi)?;
    let g = load_code(psi)?;
    let composed = match shift {
        Some(s) => compose_over(&f.code, &g.code, &load_shift(s)?.horizon_alphabet(horizon)),
        None => compose(&f.code, &g.code),
    }
    .map_err(input("compose"))?;
    let name = format!("{}_then_{}", f.name, g.name);
    out.file("blockmap", &NamedCode { name, code: composed }.to_string());
    Ok(())
}

/// Eventually periodic members with `|pre| + |per| <= max_len` over the
/// horizon alphabet.
fn periodic_members(x: &ShiftPresentation, max_len: usize, horizon: u64) -> Vec<Seq> {
    let symbols = x.horizon_alphabet(horizon);
    let mut found = BTreeSet::new();
    for total in 1..=max_len {
        for per_len in 1..=total {
            let pres = words_of_length(&symbols, total - per_len);
            let pers = words_of_length(&symbols, per_len);
            for pre in &pres {
                for per in &pers {
                    let s = Seq::periodic(pre.clone(), per.clone()).expect("nonempty period");
                    if x.contains(&s) == Membership::Yes {
                        found.insert(s);
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

#[allow(clippy::too_many_arguments)]
fn verify_conjugacy_cmd(
    out: &Out,
    source: &str,
    target: &str,
    forward: &FsPath,
    backward: &FsPath,
    sample_len: usize,
    depth: usize,
    horizon: u64,
) -> Outcome {
    let src = load_shift(source)?;
    let tgt = load_shift(target)?;
    let samples = periodic_members(&src, sample_len, horizon);
    let mut w = ConjugacyWitness::new(load_code(forward)?.code, load_code(backward)?.code, src, tgt);
    w.horizon = horizon;
    match verify_conjugacy(&w, depth, &samples) {
        Verification::VerifiedToDepth(d) => {
            out.record("VerifiedToDepth", &[d.to_string(), format!("samples={}", samples.len())]);
            Ok(())
        }
        Verification::Refuted(c) => {
            out.record("Refuted", &[c.to_string()]);
            Err(Failure::Negative(c.to_string()))
        }
        Verification::Unchecked => unreachable!("verify_conjugacy always decides"),
    }
}

fn element_line(e: &AlgebraElement) -> String {
    let terms: Vec<String> = e.to_string().lines().map(str::to_string).collect();
    terms.join(" + ")
}

fn ck_image(
    out: &Out,
    source: &FsPath,
    target: &FsPath,
    phi: &FsPath,
    verify: bool,
    surjectivity: bool,
) -> Outcome {
    let e = Arc::new(load_graph(source)?);
    let f = Arc::new(load_graph(target)?);
    let code = load_code(phi)?;
    let map = code
        .code
        .block_map()
        .ok_or_else(|| Failure::Input(format!("{}: ck-image needs a bounded code", phi.display())))?;
    let images = block_code_images(&e, &f, map).map_err(input("ck-image"))?;
    for (v, img) in &images.vertices {
        out.record(&format!("p_{v}"), &[element_line(img)]);
    }
    for (a, img) in &images.edges {
        out.record(&format!("s_{a}"), &[element_line(img)]);
    }
    let mut failed = None;
    if verify {
        match verify_ck_family(&images).map_err(input("ck-image"))? {
            CkVerdict::Valid {
                projections,
                orthogonal_pairs,
                ck1,
                ck2,
            } => out.record(
                "Valid",
                &[
                    format!("projections={projections}"),
                    format!("orthogonal_pairs={orthogonal_pairs}"),
                    format!("ck1={ck1}"),
                    format!("ck2={ck2}"),
                ],
            ),
            CkVerdict::FailedRelation { relation, witness } => {
                out.record("FailedRelation", &[relation.to_string(), witness.clone()]);
                failed = Some(format!("{relation} fails: {witness}"));
            }
        }
    }
    if surjectivity {
        let (edges, _) = f.edges_upto(u64::MAX);
        for a in sorted_symbols(edges) {
            let pre = surjectivity_witness(&images, map, &a).map_err(input("ck-image"))?;
            let img = images.apply(&pre).map_err(input("ck-image"))?;
            let goal = AlgebraElement::edge(&f, &a).map_err(input("ck-image"))?;
            let ok = img.equal(&goal).map_err(input("ck-image"))?;
            out.record(&format!("t_{a}"), &[if ok { "recovered" } else { "missed" }.into(), element_line(&pre)]);
            if !ok && failed.is_none() {
                failed = Some(format!("t_{a} is not the image of its witness"));
            }
        }
    }
    match failed {
        Some(m) => Err(Failure::Negative(m)),
        None => Ok(()),
    }
}

fn sorted_symbols(items: Vec<infshift::Symbol>) -> Vec<infshift::Symbol> {
    let mut v = items;
    v.sort_by_key(|s| s.to_string());
    v
}

fn parse_boundary(g: &Graph, text: &str) -> Result<BoundaryPath, Failure> {
    let text = text.trim();
    if text.contains('(') {
        return Ok(BoundaryPath::Infinite(parse_seq(text)?));
    }
    g.parse_path(text).map(BoundaryPath::Finite).map_err(input(text))
}

/// `x;k;y`.
fn parse_element(gr: &Groupoid, text: &str) -> Result<GroupoidElement, Failure> {
    let parts: Vec<&str> = text.split(';').collect();
    let [x, k, y] = parts.as_slice() else {
        return Err(Failure::Input(format!("{text}: expected x;k;y")));
    };
    let k: i64 = k.trim().parse().map_err(input(k))?;
    let x = parse_boundary(gr.graph(), x)?;
    let y = parse_boundary(gr.graph(), y)?;
    gr.from_triple(&x, k, &y).map_err(input(text))
}

fn element_text(el: &GroupoidElement) -> String {
    format!("{};{};{}", el.x(), el.k(), el.y())
}

fn required<'a, T: ?Sized>(v: Option<&'a T>, flag: &str) -> Result<&'a T, Failure> {
    v.ok_or_else(|| Failure::Input(format!("this operation needs --{flag}")))
}

#[allow(clippy::too_many_arguments)]
fn groupoid_cmd(
    out: &Out,
    graph: &FsPath,
    op: GroupoidOp,
    a: Option<&str>,
    b: Option<&str>,
    point: Option<&str>,
    code_paths: [Option<&FsPath>; 3],
    horizon: u64,
) -> Outcome {
    let g = Arc::new(load_graph(graph)?);
    let gr = Groupoid::new(g.clone()).map_err(input(&graph.display().to_string()))?;
    let result = match op {
        GroupoidOp::Unit => {
            let x = parse_boundary(&g, required(point, "point")?)?;
            gr.unit(&x).map_err(input("unit"))?
        }
        GroupoidOp::Inverse => parse_element(&gr, required(a, "a")?)?.inverse(),
        GroupoidOp::Compose => {
            let x = parse_element(&gr, required(a, "a")?)?;
            let y = parse_element(&gr, required(b, "b")?)?;
            match gr.compose(&x, &y) {
                Ok(z) => z,
                Err(e @ GroupoidError::NotComposable(..)) => {
                    out.record("NotComposable", &[element_text(&x), element_text(&y)]);
                    return Err(Failure::Negative(e.to_string()));
                }
                Err(e) => return Err(Failure::Input(format!("compose: {e}"))),
            }
        }
        GroupoidOp::Map => {
            let [fwd, bwd, tgt] = code_paths;
            let fwd = load_code(required(fwd, "forward")?)?;
            let bwd = load_code(required(bwd, "backward")?)?;
            let tgt_path = required(tgt, "target")?;
            let tgt = Arc::new(load_graph(tgt_path)?);
            let target = Groupoid::new(tgt.clone()).map_err(input(&tgt_path.display().to_string()))?;
            let mut w = ConjugacyWitness::new(
                fwd.code,
                bwd.code,
                ShiftPresentation::edge_shift((*g).clone()).map_err(input("map"))?,
                ShiftPresentation::edge_shift((*tgt).clone()).map_err(input("map"))?,
            );
            w.horizon = horizon;
            let x = parse_element(&gr, required(a, "a")?)?;
            match groupoid_map_h(&w, &target, &x, horizon) {
                Ok(z) => z,
                Err(e @ GroupoidError::WellDefinednessViolation(..)) => {
                    out.record("WellDefinednessViolation", &[e.to_string()]);
                    return Err(Failure::Negative(e.to_string()));
                }
                Err(e) => return Err(Failure::Input(format!("map: {e}"))),
            }
        }
    };
    out.record("element", &[element_text(&result)]);
    Ok(())
}

fn metric(out: &Out, kind: Metric, x: &str, y: &str) -> Outcome {
    let (sx, sy) = (parse_seq(x)?, parse_seq(y)?);
    let d = match kind {
        Metric::Da => metric_da(&sx, &sy),
        Metric::D => metric_d(&sx, &sy),
    }
    .map_err(input("metric"))?;
    match out.format {
        Format::Text => println!("{d}"),
        Format::Lines => out.record("distance", &[d.to_string()]),
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let out = Out { format: cli.format };
    let h = cli.horizon;
    match &cli.command {
        Command::Blocks { shift, n } => blocks(&out, shift, *n, h),
        Command::Member { shift, seq } => member(&out, shift, seq),
        Command::Classify { shift } => classify(&out, shift, h),
        Command::Recode { shift, code } => recode(&out, shift, code, h),
        Command::HigherBlock { shift, n, emit } => higher_block(&out, shift, *n, *emit, h),
        Command::Compose { phi, psi, shift } => compose_cmd(&out, phi, psi, shift.as_deref(), h),
        Command::VerifyConjugacy {
            source,
            target,
            forward,
            backward,
            sample_len,
        } => verify_conjugacy_cmd(&out, source, target, forward, backward, *sample_len, cli.depth, h),
        Command::CkImage {
            source,
            target,
            phi,
            verify,
            surjectivity,
        } => ck_image(&out, source, target, phi, *verify, *surjectivity),
        Command::Groupoid {
            graph,
            op,
            a,
            b,
            point,
            forward,
            backward,
            target,
        } => groupoid_cmd(
            &out,
            graph,
            *op,
            a.as_deref(),
            b.as_deref(),
            point.as_deref(),
            [forward.as_deref(), backward.as_deref(), target.as_deref()],
            h,
        ),
        Command::Metric { kind, x, y } => metric(&out, *kind, x, y),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
