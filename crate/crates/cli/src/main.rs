//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure (witness on stdout),
//! 2 usage or input error, 3 resource budget exceeded.

mod repro;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unital_core::grp::Geometry;
use unital_core::para::{self, stabilizer, stabilizer_order_by_orbit, verify_classes, Parallelism, ParallelismKind};
use unital_core::structure::SmallGroup;
use unital_core::unital::{classify, search_d_sets};
use unital_core::{classify as cls, closure, format, iso, trans, ArGroup, AffineUnital, Design, Error, FieldSpec, Perm, Subgroup};

#[derive(Parser)]
#[command(name = "unital", version, about = "Affine SL(2,q)-unitals, parallelisms and their closures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Finite field information.
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// SL(2,q) information.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Affine unitals.
    Unital {
        #[command(subcommand)]
        cmd: UnitalCmd,
    },
    /// Parallelisms of the short blocks.
    Para {
        #[command(subcommand)]
        cmd: ParaCmd,
    },
    /// Close an affine unital along a parallelism and write the design.
    Close {
        unital: PathBuf,
        para: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Designs.
    Design {
        #[command(subcommand)]
        cmd: DesignCmd,
    },
    /// Automorphisms and isomorphisms of designs.
    Iso {
        #[command(subcommand)]
        cmd: IsoCmd,
    },
    /// Translations.
    Trans {
        #[command(subcommand)]
        cmd: TransCmd,
    },
    /// Reproduce the order 4 classification and related counts.
    Repro(repro::ReproArgs),
}

#[derive(Subcommand)]
enum FieldCmd {
    Info {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    Info {
        #[arg(long)]
        q: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SChoice {
    Cyclic,
    Index,
}

#[derive(Subcommand)]
enum UnitalCmd {
    /// Find all long-block families for `S` and classify the unitals.
    Search {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value = "cyclic")]
        s: SChoice,
        /// Which subgroup of order q+1 when `--s index` is given.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 0)]
        budget: u64,
        /// Directory for one `.unital` file per type.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Flat,
    Natural,
    Odd,
    OddPrime,
    Sq,
    SqInv,
}

impl From<KindArg> for ParallelismKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Flat => ParallelismKind::Flat,
            KindArg::Natural => ParallelismKind::Natural,
            KindArg::Odd => ParallelismKind::Odd,
            KindArg::OddPrime => ParallelismKind::OddPrime,
            KindArg::Sq => ParallelismKind::Square,
            KindArg::SqInv => ParallelismKind::SquareInverse,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    #[value(name = "autH")]
    AutH,
    #[value(name = "autE")]
    AutE,
    #[value(name = "AR")]
    Ar,
}

#[derive(Clone, Copy, ValueEnum)]
enum StabMethod {
    Filter,
    Orbit,
}

#[derive(Subcommand)]
enum ParaCmd {
    /// Build a named parallelism.
    Gen {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check the parallelism laws.
    Verify { file: PathBuf },
    /// Enumerate all parallelisms.
    Enum {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        budget: u64,
        /// Directory for one `.para` file per parallelism.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stabilizer in the semilinear-times-right-multiplication group.
    Stab {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "filter")]
        method: StabMethod,
    },
    /// Group files into orbits.
    Orbits {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DesignCmd {
    /// Check the 2-(n^3+1, n+1, 1) laws.
    Verify {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct BlockArg {
    /// Block index or `last`.
    #[arg(long, default_value = "last")]
    block: String,
}

#[derive(Subcommand)]
enum IsoCmd {
    /// Automorphism group order and generators.
    Aut {
        file: PathBuf,
        /// Write the canonical form here.
        #[arg(long)]
        canonical: Option<PathBuf>,
    },
    /// Isomorphism test; exits 1 when the designs are not isomorphic.
    Cmp { a: PathBuf, b: PathBuf },
    /// Whether every automorphism fixes a block.
    Blockfix {
        file: PathBuf,
        #[command(flatten)]
        block: BlockArg,
    },
}

#[derive(Subcommand)]
enum TransCmd {
    /// Translations with center at each new point of a closure.
    Report { unital: PathBuf, para: PathBuf },
    /// Translations at every point of a design.
    All {
        design: PathBuf,
        /// Index of the first new point, to label centers by Sylow subgroup.
        #[arg(long)]
        infinity: Option<u32>,
    },
}

/// Why a command did not succeed.
pub enum Failure {
    /// A checked property does not hold.
    Verify(String),
    Usage(String),
    Budget(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verify(m) | Failure::Usage(m) | Failure::Budget(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::TooLarge(_) | Error::Timeout { .. } => Failure::Budget(m),
            Error::AxiomViolation { .. } | Error::InvalidParallelism(_) | Error::Unexpected(_) => Failure::Verify(m),
            _ => Failure::Usage(m),
        }
    }
}

pub type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn geometry(q: u32) -> Result<Arc<Geometry>, Failure> {
    Ok(Arc::new(Geometry::of_order(q)?))
}

fn load_design(path: &Path) -> Result<Design, Failure> {
    Ok(format::read_blocks(&read(path)?)?)
}

fn load_para(path: &Path) -> Result<(Arc<Geometry>, Parallelism), Failure> {
    let text = read(path)?;
    let geo = geometry(format::para_order(&text)?)?;
    let f = format::read_para(&geo, &text)?;
    let p = Parallelism::from_classes(&geo, &f.classes)?;
    Ok((geo, p))
}

fn load_unital(path: &Path, geo: Option<Arc<Geometry>>) -> Result<AffineUnital, Failure> {
    let f = format::read_unital(&read(path)?)?;
    let geo = match geo {
        Some(g) if g.q() == f.q => g,
        Some(g) => return Err(Failure::Usage(format!("unital has q={}, parallelism has q={}", f.q, g.q()))),
        None => geometry(f.q)?,
    };
    Ok(AffineUnital::new(geo, Subgroup::new(f.s), f.d_sets)?)
}

fn print_perm(p: &Perm) -> String {
    p.as_slice().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn field_info(p: u32, e: u32) -> Outcome {
    let f = FieldSpec::new(p, e)?;
    println!("q={} p={} e={}", f.order(), f.p(), f.e());
    println!("modulus: {}", f.modulus_string());
    println!("generator: {}", f.generator().code());
    let squares: Vec<String> = f.elements().filter(|&a| f.is_square(a)).map(|a| a.code().to_string()).collect();
    println!("squares ({}): {}", squares.len(), squares.join(" "));
    Ok(())
}

fn group_info(q: u32) -> Outcome {
    let geo = geometry(q)?;
    let g = &geo.g;
    println!("q={q} order={}", g.order());
    println!("sylow subgroups: {}", geo.sb.sylows.len());
    for (i, s) in geo.sb.sylows.iter().enumerate() {
        println!("  P{i}: {}", s.members.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    }
    println!("short blocks: {}", geo.block_count());
    println!("subgroups of order q+1 avoiding the Sylow subgroups: {}", g.subgroups_of_order_q_plus_1().len());
    Ok(())
}

fn unital_search(q: u32, s: SChoice, index: usize, budget: u64, out: Option<&Path>) -> Outcome {
    let geo = geometry(q)?;
    let ar = ArGroup::new(&geo.g);
    let sub = match s {
        SChoice::Cyclic => geo.g.cyclic_s(),
        SChoice::Index => {
            let all = geo.g.subgroups_of_order_q_plus_1();
            let n = all.len();
            all.into_iter().nth(index).ok_or_else(|| Failure::Usage(format!("index {index} out of range, {n} subgroups")))?
        }
    };
    println!("S: {}", sub.members.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    let sols = search_d_sets(&geo, &sub, budget)?;
    println!("solutions: {}", sols.len());
    let types = classify(Arc::clone(&geo), &ar, &sub, budget)?;
    println!("types: {}", types.len());
    for (i, t) in types.iter().enumerate() {
        println!("  type {i}: solutions={} aut_order={}", t.solutions, t.aut_order);
        if let Some(dir) = out {
            std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(e.to_string()))?;
            write(&dir.join(format!("type-{i}.unital")), &format::write_unital(q, &t.unital.s, &t.unital.d_sets))?;
        }
    }
    Ok(())
}

fn para_verify(path: &Path) -> Outcome {
    let text = read(path)?;
    let geo = geometry(format::para_order(&text)?)?;
    let f = format::read_para(&geo, &text)?;
    let rep = verify_classes(&geo, &f.classes);
    match rep.witness {
        None => {
            println!("ok");
            Ok(())
        }
        Some(w) => Err(Failure::Verify(format!("violation: {w}"))),
    }
}

fn para_enum(q: u32, budget: u64, out: Option<&Path>) -> Outcome {
    let geo = geometry(q)?;
    let paras = para::enumerate_parallelisms(&geo, budget)?;
    println!("parallelisms: {}", paras.len());
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(e.to_string()))?;
        for (i, p) in paras.iter().enumerate() {
            write(&dir.join(format!("para-{i:04}.para")), &format::write_para(&geo, p))?;
        }
    }
    Ok(())
}

fn para_stab(path: &Path, method: StabMethod) -> Outcome {
    let (geo, p) = load_para(path)?;
    match method {
        StabMethod::Orbit => println!("order: {}", stabilizer_order_by_orbit(&geo, &p)),
        StabMethod::Filter => {
            let ar = ArGroup::new(&geo.g);
            let st = stabilizer(&geo, &ar, &p);
            println!("order: {}", st.len());
            let perms: Vec<Perm> = st.iter().map(|t| t.to_perm(&geo.g)).collect();
            println!("fingerprint: {}", SmallGroup::from_elements(perms).fingerprint());
        }
    }
    Ok(())
}

fn para_orbits(group: GroupArg, files: &[PathBuf]) -> Outcome {
    let mut loaded = Vec::new();
    for f in files {
        loaded.push(load_para(f)?);
    }
    let geo = Arc::clone(&loaded[0].0);
    if loaded.iter().any(|(g, _)| g.q() != geo.q()) {
        return Err(Failure::Usage("files have different orders".into()));
    }
    let paras: Vec<Parallelism> = loaded.into_iter().map(|(_, p)| p).collect();
    let ar = ArGroup::new(&geo.g);
    let elems = match group {
        GroupArg::Ar => ar.elements().collect(),
        GroupArg::AutH | GroupArg::AutE => {
            if geo.q() != 4 {
                return Err(Failure::Usage("autH and autE exist for q=4 only".into()));
            }
            let types = classify(Arc::clone(&geo), &ar, &geo.g.cyclic_s(), 0)?;
            let k = if matches!(group, GroupArg::AutH) { 0 } else { 1 };
            types[k].unital.aut_affine(&ar)?
        }
    };
    let orbs = para::orbits(&geo, &paras, &elems);
    println!("orbits: {}", orbs.len());
    for o in &orbs {
        let names: Vec<String> = o.iter().map(|&i| files[i].display().to_string()).collect();
        println!("  {}", names.join(" "));
    }
    Ok(())
}

fn close_cmd(unital: &Path, para: &Path, out: Option<&Path>) -> Outcome {
    let (geo, p) = load_para(para)?;
    let u = load_unital(unital, Some(geo))?;
    let d = closure::close(&u, &p)?;
    emit(out, &format::write_blocks(&d))
}

fn design_verify(path: &Path, n: usize) -> Outcome {
    let d = load_design(path)?;
    let rep = closure::verify_design(&d, n);
    match rep.witness {
        None => {
            println!("ok v={} b={}", rep.v, rep.b);
            Ok(())
        }
        Some(w) => Err(Failure::Verify(format!("violation: {w}"))),
    }
}

fn iso_aut(path: &Path, canonical: Option<&Path>) -> Outcome {
    let d = load_design(path)?;
    let r = iso::automorphisms(&d)?;
    println!("order: {}", r.order);
    if let Some(g) = SmallGroup::from_generators(d.v, &r.generators, 20_000) {
        println!("fingerprint: {}", g.fingerprint());
        if let Some(s) = cls::Structure::identify(&g) {
            println!("structure: {}", s.name());
        }
    }
    println!("generators: {}", r.generators.len());
    for g in &r.generators {
        println!("  {}", print_perm(g));
    }
    if let Some(p) = canonical {
        write(p, &format::write_blocks(&Design { v: d.v, blocks: r.canonical }))?;
    }
    Ok(())
}

fn iso_cmp(a: &Path, b: &Path) -> Outcome {
    let (da, db) = (load_design(a)?, load_design(b)?);
    match iso::isomorphism(&da, &db)? {
        Some(p) => {
            println!("isomorphic: true");
            println!("map: {}", print_perm(&p));
            Ok(())
        }
        None => Err(Failure::Verify("isomorphic: false".into())),
    }
}

fn iso_blockfix(path: &Path, block: &str) -> Outcome {
    let d = load_design(path)?;
    let b = match block {
        "last" => d.blocks.len().checked_sub(1).ok_or_else(|| Failure::Usage("design has no blocks".into()))?,
        s => s.parse::<usize>().ok().filter(|&i| i < d.blocks.len()).ok_or_else(|| Failure::Usage(format!("bad block `{s}`")))?,
    };
    println!("block {b} fixed: {}", iso::block_stabilizer_check(&d, b)?);
    Ok(())
}

fn print_report(r: &trans::TranslationReport, n: usize) {
    let label = r.sylow.map(|s| format!(" (P{s})")).unwrap_or_default();
    println!(
        "center {}{label}: order={} translation_center={} semiregular={} {}",
        r.center,
        r.order(),
        r.is_translation_center(n),
        r.semiregular,
        r.fingerprint
    );
}

fn trans_report(unital: &Path, para: &Path) -> Outcome {
    let (geo, p) = load_para(para)?;
    let u = load_unital(unital, Some(Arc::clone(&geo)))?;
    let ar = ArGroup::new(&geo.g);
    let mut reports = Vec::new();
    for s in 0..=geo.q() {
        let r = trans::translations_at_infinity(&u, &ar, &p, s)?;
        print_report(&r, geo.q() as usize);
        reports.push(r);
    }
    let sum = trans::summarize(&reports, geo.q() as usize);
    println!("nontrivial: {}", sum.nontrivial);
    if let Some(fp) = sum.generated {
        println!("generated: {fp}");
    }
    if let Some(r) = reports.iter().find(|r| !r.semiregular) {
        return Err(Failure::Verify(format!("translation group at {} is not semiregular", r.center)));
    }
    Ok(())
}

fn trans_all(path: &Path, infinity: Option<u32>) -> Outcome {
    let d = load_design(path)?;
    let n = d.blocks.first().map_or(0, |b| b.len().saturating_sub(1));
    let reports = trans::all_translations(&d, infinity)?;
    for r in &reports {
        print_report(r, n);
    }
    let sum = trans::summarize(&reports, n);
    println!("nontrivial: {}", sum.nontrivial);
    println!("translation centers: {}", sum.translation_centers.len());
    if let Some(fp) = sum.generated {
        println!("generated: {fp}");
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.cmd {
        Cmd::Field { cmd: FieldCmd::Info { p, e } } => field_info(p, e),
        Cmd::Group { cmd: GroupCmd::Info { q } } => group_info(q),
        Cmd::Unital { cmd: UnitalCmd::Search { q, s, index, budget, out } } => unital_search(q, s, index, budget, out.as_deref()),
        Cmd::Para { cmd } => match cmd {
            ParaCmd::Gen { q, kind, out } => {
                let geo = geometry(q)?;
                let p = ParallelismKind::from(kind).build(&geo)?;
                emit(out.as_deref(), &format::write_para(&geo, &p))
            }
            ParaCmd::Verify { file } => para_verify(&file),
            ParaCmd::Enum { q, budget, out } => para_enum(q, budget, out.as_deref()),
            ParaCmd::Stab { file, method } => para_stab(&file, method),
            ParaCmd::Orbits { group, files } => para_orbits(group, &files),
        },
        Cmd::Close { unital, para, out } => close_cmd(&unital, &para, out.as_deref()),
        Cmd::Design { cmd: DesignCmd::Verify { file, n } } => design_verify(&file, n),
        Cmd::Iso { cmd } => match cmd {
            IsoCmd::Aut { file, canonical } => iso_aut(&file, canonical.as_deref()),
            IsoCmd::Cmp { a, b } => iso_cmp(&a, &b),
            IsoCmd::Blockfix { file, block } => iso_blockfix(&file, &block.block),
        },
        Cmd::Trans { cmd } => match cmd {
            TransCmd::Report { unital, para } => trans_report(&unital, &para),
            TransCmd::All { design, infinity } => trans_all(&design, infinity),
        },
        Cmd::Repro(args) => repro::run(&args),
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("UNITAL_THREADS") else { return Ok(()) };
    let n: usize = v.parse().map_err(|_| Failure::Usage(format!("UNITAL_THREADS={v} is not a number")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = match &f {
                Failure::Verify(m) => {
                    println!("{m}");
                    1
                }
                Failure::Usage(m) => {
                    eprintln!("error: {m}");
                    2
                }
                Failure::Budget(m) => {
                    eprintln!("budget exceeded: {m}");
                    3
                }
            };
            ExitCode::from(code)
        }
    }
}
