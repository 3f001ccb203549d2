//! Command-line front end. Exit codes: 0 success, 1 mathematical negative,
//! 2 usage or input error, 3 internal failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis;
use crate::ancestry::{self, Descendant, Iso};
use crate::engine::check_consistency;
use crate::enumeration;
use crate::error::Error;
use crate::group::Group;
use crate::presentation::Presentation;
use crate::{catalog, suite};

#[derive(Parser, Debug)]
#[command(name = "pnlab", version, about = "Powerful and powerfully nilpotent p-groups from power-commutator presentations")]
pub struct Cli {
    /// Stable key=value output.
    #[arg(long, global = true)]
    pub porcelain: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariants, predicates and the theorem bounds they satisfy.
    Analyze { file: PathBuf },
    /// Overlap tests for a presentation.
    Consistency { file: PathBuf },
    /// Upper powerfully central series.
    Series { file: PathBuf },
    /// Tail and maximal-tail test.
    Tail { file: PathBuf },
    /// The direct descendant G/Z(G)^p.
    Descendant { file: PathBuf },
    /// Direct ancestors up to order p^bound.
    Ancestors {
        file: PathBuf,
        #[arg(long)]
        bound: u32,
    },
    /// Isomorphism test.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = ancestry::ISO_BUDGET)]
        budget: u64,
    },
    /// Isomorphism classes of a given powerful coclass.
    Census {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        coclass: u32,
        /// Write one presentation file per class here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Size of the exponent-p² presentation spaces.
    Count {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        x: Option<u64>,
    },
    /// h(x) table, maximizer and normalized exponent.
    Growth {
        #[arg(long)]
        n: u64,
    },
    /// Property suites over the enumerated corpus and the fixtures.
    Selftest {
        #[arg(long, default_value_t = 6)]
        corpus_n: u32,
    },
    /// Write the catalog fixtures as presentation files.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
}

/// Outcome of a command: text to print and an exit code.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistent(_) | Error::NotPowerfullyNilpotent | Error::NotNormal => 1,
        Error::Syntax { .. } | Error::NotPrime(_) | Error::InvalidPresentation(_) | Error::Domain(_) | Error::Infeasible(_) => 2,
        Error::CollectionBudget(_) | Error::PowerSubgroup(_) | Error::Internal(_) => 3,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(Fail::Math(e)) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
        Err(Fail::Io(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

enum Fail {
    Math(Error),
    Io(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Math(e)
    }
}

type Res = std::result::Result<(i32, String), Fail>;

fn load(path: &Path) -> std::result::Result<Presentation, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))?;
    Ok(Presentation::parse(&text)?)
}

fn load_group(path: &Path) -> std::result::Result<Group, Fail> {
    Ok(Group::from_presentation(&load(path)?)?)
}

fn opt(v: Option<u32>) -> String {
    v.map_or("-".into(), |x| x.to_string())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "VIOLATED"
    }
}

fn dispatch(cli: &Cli) -> Res {
    let porcelain = cli.porcelain;
    let mut out = String::new();
    match &cli.command {
        Command::Analyze { file } => {
            let g = load_group(file)?;
            let rep = analysis::analyze(&g)?;
            if porcelain {
                writeln!(out, "{}", rep.porcelain()).unwrap();
                return Ok((0, out));
            }
            writeln!(out, "order        p^{} (p = {})", rep.n, rep.p).unwrap();
            writeln!(out, "rank         {}", rep.r).unwrap();
            writeln!(out, "exponent     p^{}", rep.e).unwrap();
            writeln!(out, "powerful     {}", rep.powerful).unwrap();
            writeln!(out, "strongly     {}", rep.strongly_powerful).unwrap();
            writeln!(out, "pn           {}", rep.pn).unwrap();
            writeln!(out, "class c      {}", opt(rep.c)).unwrap();
            writeln!(out, "coclass d    {}", opt(rep.d)).unwrap();
            writeln!(out, "p-th power s {}", opt(rep.s)).unwrap();
            writeln!(
                out,
                "tail t       {}{}",
                opt(rep.t),
                match rep.maximal_tail {
                    Some(true) => " (maximal)",
                    Some(false) => " (not maximal)",
                    None => "",
                }
            )
            .unwrap();
            writeln!(out, "s(1..e)      {:?}", rep.order_counts).unwrap();
            if let (Some(c), Some(s), Some(t)) = (rep.c, rep.s, rep.t) {
                let (n, r, e) = (rep.n, rep.r, rep.e);
                writeln!(out, "bounds").unwrap();
                writeln!(out, "  r ≤ n - c + 1 (rank bound): {} ≤ {}  {}", r, n - c + 1, verdict(r <= n - c + 1)).unwrap();
                writeln!(out, "  e ≤ n - c + 1 (exponent bound): {} ≤ {}  {}", e, n - c + 1, verdict(e <= n - c + 1)).unwrap();
                writeln!(out, "  s = n - r + 1 (p-th power length): {} = {}  {}", s, n - r + 1, verdict(s == n - r + 1)).unwrap();
                if r >= 2 {
                    let b = 1 + r * (r - 1) / 2;
                    writeln!(out, "  t ≤ 1 + r(r-1)/2 (tail bound): {} ≤ {}  {}", t, b, verdict(t <= b)).unwrap();
                    let w = analysis::class_bound_witness(&g)?;
                    writeln!(out, "  c ≤ witness length (class witness): {} ≤ {}  {}", c, w.bound, verdict(c <= w.bound)).unwrap();
                }
            }
            Ok((0, out))
        }
        Command::Consistency { file } => {
            let pres = load(file)?;
            let rep = check_consistency(&pres)?;
            if porcelain {
                writeln!(out, "consistent={} log_order={} pc_length={}", rep.consistent, pres.log_order(), rep.pc_length).unwrap();
                if let Some(f) = &rep.failure {
                    writeln!(out, "failure={f}").unwrap();
                }
            } else if rep.consistent {
                writeln!(out, "consistent: order p^{} = product of generator orders", pres.log_order()).unwrap();
            } else {
                writeln!(out, "inconsistent: {}", rep.failure.as_deref().unwrap_or("?")).unwrap();
            }
            Ok((if rep.consistent { 0 } else { 1 }, out))
        }
        Command::Series { file } => {
            let g = load_group(file)?;
            let s = analysis::upper_series(&g)?;
            let orders = s.orders();
            if porcelain {
                let list: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
                writeln!(out, "orders={} reaches_group={}", list.join(","), s.reaches_group).unwrap();
            } else {
                for (i, o) in orders.iter().enumerate() {
                    writeln!(out, "Ẑ_{i}  order p^{o}").unwrap();
                }
                if s.reaches_group {
                    writeln!(out, "reaches G: powerfully nilpotent of class {}", orders.len() - 1).unwrap();
                } else {
                    writeln!(out, "stabilizes below G: not powerfully nilpotent").unwrap();
                }
            }
            Ok((if s.reaches_group { 0 } else { 1 }, out))
        }
        Command::Tail { file } => {
            let g = load_group(file)?;
            let t = analysis::tail_analysis(&g)?;
            if porcelain {
                writeln!(out, "t={} tail_order={} maximal_tail={}", t.length, t.tail.order_log(), t.maximal).unwrap();
            } else {
                writeln!(out, "tail length {} (order p^{}), {}", t.length, t.tail.order_log(), if t.maximal { "maximal" } else { "not maximal" })
                    .unwrap();
            }
            Ok((0, out))
        }
        Command::Descendant { file } => {
            let g = load_group(file)?;
            match ancestry::direct_descendant(&g)? {
                Descendant::AbelianLeaf => {
                    writeln!(out, "{}", if porcelain { "abelian_leaf=true" } else { "abelian: no direct descendant" }).unwrap();
                }
                Descendant::Group(q) => {
                    if porcelain {
                        writeln!(out, "abelian_leaf=false order={}", q.group.n()).unwrap();
                    } else {
                        writeln!(out, "# G/Z(G)^p, order p^{}", q.group.n()).unwrap();
                    }
                    out.push_str(&q.group.presentation().to_text());
                }
            }
            Ok((0, out))
        }
        Command::Ancestors { file, bound } => {
            let h = load_group(file)?;
            let found = ancestry::ancestors(&h, *bound)?;
            if porcelain {
                writeln!(out, "count={}", found.len()).unwrap();
            } else {
                writeln!(out, "{} direct ancestor(s) of order at most p^{bound}", found.len()).unwrap();
                if *bound > ancestry::CORPUS_EXHAUSTIVE {
                    writeln!(out, "(exhaustive up to p^{}, catalog fixtures above)", ancestry::CORPUS_EXHAUSTIVE).unwrap();
                }
            }
            for a in found {
                writeln!(out, "# {} (order p^{})", a.name, a.group.n()).unwrap();
                out.push_str(&a.group.presentation().to_text());
            }
            Ok((0, out))
        }
        Command::Iso { a, b, budget } => {
            let g = load_group(a)?;
            let h = load_group(b)?;
            let res = ancestry::are_isomorphic(&g, &h, *budget)?;
            writeln!(out, "{}{}", if porcelain { "isomorphic=" } else { "" }, res.label()).unwrap();
            if let Iso::Yes(images) = &res {
                if !porcelain {
                    for (k, x) in images.iter().enumerate() {
                        writeln!(out, "a{} -> {}", k + 1, h.to_nf(x)?).unwrap();
                    }
                }
            }
            Ok((if matches!(res, Iso::Yes(_)) { 0 } else { 1 }, out))
        }
        Command::Census { p, coclass, out: dir } => {
            let recs = ancestry::census(*p, *coclass)?;
            if porcelain {
                writeln!(out, "classes={}", recs.len()).unwrap();
                for r in &recs {
                    writeln!(out, "fingerprint={}", r.fingerprint).unwrap();
                }
            } else {
                writeln!(out, "{} isomorphism class(es) of powerful coclass {coclass} for p = {p}", recs.len()).unwrap();
                for r in &recs {
                    out.push_str(&r.to_text());
                }
            }
            if let Some(dir) = dir {
                std::fs::create_dir_all(dir).map_err(|e| Fail::Io(e.to_string()))?;
                for (i, r) in recs.iter().enumerate() {
                    let path = dir.join(format!("census_p{p}_d{coclass}_{i}.pg"));
                    std::fs::write(&path, r.to_text()).map_err(|e| Fail::Io(e.to_string()))?;
                }
            }
            Ok((0, out))
        }
        Command::Count { p, n, x } => {
            let xs: Vec<u64> = match x {
                Some(x) => vec![*x],
                None => (0..=n / 2).collect(),
            };
            for x in xs {
                writeln!(out, "{}", enumeration::count_line(*p, *n, x)?).unwrap();
            }
            Ok((0, out))
        }
        Command::Growth { n } => {
            let g = enumeration::growth_report(*n)?;
            if !porcelain {
                writeln!(out, "{:>8}  {:>20}", "x", "h(x)").unwrap();
                for (x, h) in g.table.iter().enumerate() {
                    let mark = if x as u64 == g.x_n { "  <- x(n)" } else { "" };
                    writeln!(out, "{x:>8}  {h:>20}{mark}").unwrap();
                }
                writeln!(out, "x_max = {:.6}, |x(n) - x_max| ≤ 1: {}", g.x_max, verdict((g.x_n as f64 - g.x_max).abs() <= 1.0)).unwrap();
                writeln!(out, "alpha (limit of h(x(n))/n³) = (9+4√2)/294 = {:.9}", enumeration::alpha()).unwrap();
            }
            writeln!(out, "{}", g.porcelain()).unwrap();
            Ok((0, out))
        }
        Command::Selftest { corpus_n } => {
            let mut rep = suite::SuiteReport::default();
            let opts = suite::SuiteOptions::default();
            for (name, pres) in catalog::fixtures() {
                let g = Group::from_presentation(&pres)?;
                rep.merge(suite::check_group(&name, &g, &opts)?);
            }
            for (i, pres) in ancestry::corpus(3, *corpus_n)?.iter().enumerate() {
                let g = Group::from_presentation(pres)?;
                let name = format!("corpus#{i}");
                rep.merge(suite::check_group(&name, &g, &opts)?);
                if g.n() <= 6 {
                    rep.merge(suite::engine_soundness(&name, &g, 100, i as u64)?);
                }
            }
            writeln!(out, "groups={} checks={} violations={}", rep.groups, rep.checks, rep.violations.len()).unwrap();
            for v in &rep.violations {
                writeln!(out, "violation: {v}").unwrap();
            }
            Ok((if rep.passed() { 0 } else { 1 }, out))
        }
        Command::Fixtures { out: dir } => {
            let paths = catalog::export_fixtures(dir).map_err(|e| Fail::Io(e.to_string()))?;
            for p in paths {
                writeln!(out, "{}", p.display()).unwrap();
            }
            Ok((0, out))
        }
    }
}
