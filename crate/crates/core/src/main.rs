use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use alg2d::automorphisms::automorphisms_bruteforce;
use alg2d::catalog::{build, expected_aut, expected_der, CharClass, FamilyId, ParamVector, Sampling};
use alg2d::derivations::derivations;
use alg2d::isomorphism::{find_isomorphism, orbit, ORBIT_CAP};
use alg2d::linalg::DEFAULT_ENUM_CAP;
use alg2d::verify::{self, Report};
use alg2d::{Error, FieldSpec, Msc};

#[derive(Parser)]
#[command(name = "alg2d", version, about = "Automorphisms and derivations of two-dimensional algebras")]
struct Cli {
    /// Worker threads for enumeration-heavy commands.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derivation algebra of an MSC literal.
    Der { msc: String },
    /// Automorphism group of an MSC literal over a finite field.
    Aut {
        msc: String,
        #[arg(long, env = "ALG2D_ENUM_CAP", default_value_t = DEFAULT_ENUM_CAP)]
        cap: u64,
    },
    /// Canonical families.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Run verification campaigns.
    Verify(VerifyArgs),
    /// Search for g with gA(g⁻¹⊗g⁻¹) = B.
    Iso {
        a: String,
        b: String,
        #[arg(long, env = "ALG2D_ENUM_CAP", default_value_t = DEFAULT_ENUM_CAP)]
        cap: u64,
    },
    /// Orbit of an MSC under basis changes.
    Orbit {
        msc: String,
        #[arg(long, default_value_t = ORBIT_CAP)]
        cap: u64,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Family table, optionally for one class (`@neq23`, `@char2`, `@char3`).
    List { class: Option<String> },
    /// `build <family> [params..] <field>`
    Build {
        #[arg(num_args = 2.., allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Stated Aut and Der of a cell: `expect <family> [params..] <field>`
    Expect {
        #[arg(num_args = 2.., allow_hyphen_values = true)]
        args: Vec<String>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    aut: bool,
    #[arg(long)]
    der: bool,
    #[arg(long)]
    twins: bool,
    #[arg(long)]
    genericity: bool,
    #[arg(long)]
    distinct: bool,
    #[arg(long)]
    orbits: bool,
    #[arg(long)]
    inclusion: bool,
    /// Comma-separated classes: neq23, char2, char3.
    #[arg(long)]
    chars: Option<String>,
    /// Comma-separated fields, e.g. `GF(5),GF(7)`.
    #[arg(long)]
    fields: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random parameter tuples per family when a sweep is too large.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, env = "ALG2D_ENUM_CAP", default_value_t = DEFAULT_ENUM_CAP)]
    cap: u64,
    /// Print the structured report instead of text lines.
    #[arg(long)]
    json: bool,
    /// Also write the structured summary to this path.
    #[arg(long)]
    summary_file: Option<String>,
}

enum Failure {
    Lib(Error),
    Verification,
    Message(String, u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::CapExceeded { .. } | Error::SamplingBudget { .. } => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Message(m, code)) => {
            eprintln!("error: {m}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Der { msc } => {
            let a: Msc = msc.parse()?;
            println!("{}", derivations(&a));
        }
        Cmd::Aut { msc, cap } => {
            let a: Msc = msc.parse()?;
            if !a.spec().is_finite() {
                return Err(Failure::Message(
                    "infinite field: use catalog expected-group mode".into(),
                    4,
                ));
            }
            let elems = automorphisms_bruteforce(&a, cap)?;
            for g in &elems {
                println!("{g}");
            }
            println!("order={}", elems.len());
        }
        Cmd::Catalog(c) => catalog(c)?,
        Cmd::Verify(v) => verify_cmd(v)?,
        Cmd::Iso { a, b, cap } => {
            let (a, b): (Msc, Msc) = (a.parse()?, b.parse()?);
            match find_isomorphism(&a, &b, cap)? {
                Some(g) => println!("ISO {a} {b} witness={g}"),
                None => println!("ISO {a} {b} none"),
            }
        }
        Cmd::Orbit { msc, cap } => {
            let a: Msc = msc.parse()?;
            let o = orbit(&a, cap)?;
            for m in &o {
                println!("{m}");
            }
            println!("size={}", o.len());
        }
    }
    Ok(())
}

/// `<family> [params..] <field>` → the cell.
fn cell(args: &[String]) -> Result<(FamilyId, ParamVector, FieldSpec), Failure> {
    let (first, rest) = args.split_first().expect("clap enforces two arguments");
    let (last, middle) = rest.split_last().expect("clap enforces two arguments");
    let spec: FieldSpec = last.parse()?;
    let fam = FamilyId::parse(first)?;
    let params = ParamVector::parse(fam, spec, &middle.join(" "))?;
    Ok((fam, params, spec))
}

fn catalog(c: CatalogCmd) -> Result<(), Failure> {
    match c {
        CatalogCmd::List { class } => {
            let classes = match class {
                Some(c) => vec![c.parse::<CharClass>()?],
                None => CharClass::ALL.to_vec(),
            };
            for class in classes {
                for fam in FamilyId::all(class) {
                    let names: Vec<&str> = fam.params().iter().map(|p| p.ascii()).collect();
                    println!("{fam} ({}) {}", names.join(","), fam.template());
                }
            }
        }
        CatalogCmd::Build { args } => {
            let (fam, params, spec) = cell(&args)?;
            println!("{}", build(fam, &params, spec)?);
        }
        CatalogCmd::Expect { args } => {
            let (fam, params, spec) = cell(&args)?;
            println!("aut {}", expected_aut(fam, &params, spec)?);
            println!("der {}", expected_der(fam, &params, spec)?);
        }
    }
    Ok(())
}

/// Splits on commas outside parentheses.
fn split_top(text: &str) -> Vec<String> {
    let (mut out, mut cur, mut depth) = (Vec::new(), String::new(), 0i32);
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn verify_cmd(v: VerifyArgs) -> Result<(), Failure> {
    let fields: Option<Vec<FieldSpec>> = match &v.fields {
        Some(f) => Some(split_top(f).iter().map(|s| s.parse()).collect::<Result<_, _>>()?),
        None => None,
    };
    let classes: Vec<CharClass> = match (&v.chars, &fields) {
        (Some(c), _) => split_top(c).iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
        (None, Some(fs)) => {
            let mut cs: Vec<CharClass> = fs.iter().map(|&f| CharClass::of(f)).collect();
            cs.sort();
            cs.dedup();
            cs
        }
        (None, None) => CharClass::ALL.to_vec(),
    };
    if let Some(fs) = &fields {
        if let Some(&f) = fs.iter().find(|&&f| !classes.iter().any(|c| c.admits(f))) {
            return Err(Error::CharMismatch { family: "selected classes".into(), field: f }.into());
        }
    }
    let none = !(v.aut || v.der || v.twins || v.genericity || v.distinct || v.orbits || v.inclusion);
    let (aut, der) = (v.aut || none, v.der || none);
    let sampling = Sampling::Auto { n: v.samples, seed: v.seed };

    let mut report = Report::default();
    for class in classes {
        let fs: Vec<FieldSpec> = match &fields {
            Some(fs) => fs.iter().copied().filter(|&f| class.admits(f)).collect(),
            None => verify::default_fields(class),
        };
        if aut {
            report.merge(verify::verify_aut_tables(class, &fs, sampling, v.cap)?);
        }
        if der {
            report.merge(verify::verify_der_tables(class, &fs, sampling)?);
        }
        if v.twins {
            report.merge(verify::verify_twins(&fs, 20, v.seed, v.cap)?);
        }
        for &f in &fs {
            if v.genericity {
                report.merge(verify::verify_genericity(f, sampling, 100, v.seed, v.cap)?);
            }
            if v.distinct {
                report.merge(verify::verify_distinct(f, 30, v.seed, v.cap)?);
            }
            if v.orbits {
                let cap = ORBIT_CAP.min(v.cap);
                if f.order().is_some_and(|q| q <= cap) {
                    report.merge(verify::verify_orbits(f, sampling, cap)?);
                } else {
                    report.note(format!("orbits skipped over {f}: order above the orbit cap {cap}"));
                }
            }
        }
        if v.inclusion && class == CharClass::NotTwoThree {
            for f in [FieldSpec::rationals(), FieldSpec::quad_rationals(3)?] {
                report.merge(verify::verify_inclusion(f, 5, 20, v.seed)?);
            }
        }
    }

    let summary = report.summary();
    if v.json {
        let doc = json!({ "summary": summary, "entries": report.entries });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        print!("{report}");
    }
    if let Some(path) = &v.summary_file {
        let text = serde_json::to_string_pretty(&summary).expect("serializable");
        std::fs::write(path, text + "\n")
            .map_err(|e| Failure::Message(format!("cannot write {path}: {e}"), 4))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
