use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schutz_core::marking::ExtendedAlphabet;
use schutz_core::schutz::{BinarySchutz, UnarySchutz};
use schutz_core::verify::{run, Campaign, TheoremId};
use schutz_core::{
    dual_recogniser, generate_algebra, schutz_sum, syntactic_monoid, Alphabet, Dfa, Error, FiniteMonoid,
    LanguageAlgebra, Limits, Regex, Universe,
};

#[derive(Parser)]
#[command(name = "schutz", version, about = "Schützenberger products, language algebras and their verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one construction and emit its canonical output.
    Construct(ConstructArgs),
    /// Run a verification campaign and emit a JSON-lines report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Synmon,
    Quotient,
    Exists,
    Schutz1,
    Schutz2,
    Algebra,
    Bsum,
    Dualrec,
}

#[derive(Clone, Copy, ValueEnum)]
enum Campaigns {
    Prop2,
    Thm4,
    Thm8,
    Cor9,
    Thm10,
    Thm11,
    Lemmas,
}

#[derive(Args)]
struct Output {
    /// Emit compact JSON (the default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Emit human-readable text.
    #[arg(long)]
    pretty: bool,
    /// Write output files into this directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    kind: Kind,
    /// Comma separated letters (for `exists`: the base alphabet).
    #[arg(long)]
    alphabet: Option<String>,
    /// A regex, or a Dfa, monoid or algebra JSON file. Repeatable.
    #[arg(long, short)]
    input: Vec<String>,
    /// Word for `quotient`.
    #[arg(long, default_value = "")]
    word: String,
    /// Take the right quotient `Lw⁻¹` instead of `w⁻¹L`.
    #[arg(long)]
    right: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    campaign: Campaigns,
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[command(flatten)]
    output: Output,
}

/// One named output file plus the value printed to stdout.
struct Emitted {
    files: Vec<(String, Value)>,
    summary: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = Limits::from_env();
    let result = match cli.command {
        Command::Construct(args) => construct(&args, &limits),
        Command::Verify(args) => verify(&args, &limits),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("schutz: {e}");
            ExitCode::from(match e {
                Error::Input(_) => 2,
                Error::Resource(_) => 3,
                Error::Precondition(_) | Error::Domain(_) => 4,
                Error::Internal(_) => 70,
            })
        }
    }
}

enum Loaded {
    Language(Dfa),
    Monoid(FiniteMonoid),
    Generators(Vec<Dfa>),
}

fn read_alphabet(spec: Option<&str>) -> schutz_core::Result<Option<Alphabet>> {
    spec.map(Alphabet::parse_list).transpose()
}

fn load(input: &str, alphabet: Option<&Alphabet>) -> schutz_core::Result<Loaded> {
    let path = Path::new(input);
    if !path.is_file() {
        let sigma = alphabet.ok_or_else(|| Error::Input("regex inputs need --alphabet".into()))?;
        return Ok(Loaded::Language(Regex::parse(input)?.to_dfa(sigma)?));
    }
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{input}: {e}")))?;
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(_) => {
            let sigma = alphabet.ok_or_else(|| Error::Input("regex files need --alphabet".into()))?;
            let gens = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| Regex::parse(l)?.to_dfa(sigma))
                .collect::<schutz_core::Result<Vec<_>>>()?;
            return Ok(if gens.len() == 1 {
                Loaded::Language(gens.into_iter().next().unwrap())
            } else {
                Loaded::Generators(gens)
            });
        }
    };
    let bad = |e: serde_json::Error| Error::Input(format!("{input}: {e}"));
    match &value {
        Value::Object(o) if o.contains_key("table") => Ok(Loaded::Monoid(serde_json::from_value(value).map_err(bad)?)),
        Value::Object(_) => Ok(Loaded::Language(serde_json::from_value(value).map_err(bad)?)),
        Value::Array(items) => {
            let mut gens = Vec::new();
            for item in items {
                gens.push(match item {
                    Value::String(s) if Path::new(s).is_file() => match load(s, alphabet)? {
                        Loaded::Language(d) => d,
                        _ => return Err(Error::Input(format!("{s}: expected a Dfa file"))),
                    },
                    Value::String(s) => {
                        let sigma = alphabet.ok_or_else(|| Error::Input("regex generators need --alphabet".into()))?;
                        Regex::parse(s)?.to_dfa(sigma)?
                    }
                    other => serde_json::from_value(other.clone()).map_err(bad)?,
                });
            }
            Ok(Loaded::Generators(gens))
        }
        _ => Err(Error::Input(format!("{input}: unrecognised file contents"))),
    }
}

fn language(input: &str, alphabet: Option<&Alphabet>) -> schutz_core::Result<Dfa> {
    match load(input, alphabet)? {
        Loaded::Language(d) => Ok(d),
        _ => Err(Error::Input(format!("{input}: expected a language"))),
    }
}

fn monoid(input: &str) -> schutz_core::Result<FiniteMonoid> {
    match load(input, None)? {
        Loaded::Monoid(m) => Ok(m),
        _ => Err(Error::Input(format!("{input}: expected a monoid file"))),
    }
}

fn algebra(input: &str, alphabet: Option<&Alphabet>, limits: &Limits) -> schutz_core::Result<LanguageAlgebra> {
    let gens = match load(input, alphabet)? {
        Loaded::Language(d) => vec![d],
        Loaded::Generators(g) => g,
        Loaded::Monoid(_) => return Err(Error::Input(format!("{input}: expected generators"))),
    };
    let sigma = match (gens.first(), alphabet) {
        (Some(d), _) => d.alphabet().clone(),
        (None, Some(a)) => a.clone(),
        (None, None) => return Err(Error::Input("an empty generator list needs --alphabet".into())),
    };
    generate_algebra(&sigma, Universe::Star, &gens, limits)
}

fn inputs(args: &ConstructArgs, n: usize) -> schutz_core::Result<&[String]> {
    if args.input.len() != n {
        return Err(Error::Input(format!("expected {n} --input value(s), got {}", args.input.len())));
    }
    Ok(&args.input)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

fn algebra_files(b: &LanguageAlgebra) -> Emitted {
    let regexes = b.atom_regexes();
    let mut files: Vec<(String, Value)> = b
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, atom)| (format!("atom_{i}.json"), to_value(atom)))
        .collect();
    files.insert(0, ("atoms.json".into(), json!(regexes)));
    let mut summary = format!("{} atoms\n", b.atom_count());
    for (i, r) in regexes.iter().enumerate() {
        summary.push_str(&format!("  {i}: {r}\n"));
    }
    Emitted { files, summary }
}

fn construct(args: &ConstructArgs, limits: &Limits) -> schutz_core::Result<ExitCode> {
    let sigma = read_alphabet(args.alphabet.as_deref())?;
    let emitted = match args.kind {
        Kind::Synmon => {
            let l = language(&inputs(args, 1)?[0], sigma.as_ref())?;
            let syn = syntactic_monoid(&l);
            let m = &syn.monoid;
            Emitted {
                summary: format!(
                    "syntactic monoid of size {}, letter images {:?}, accepting {:?}\n",
                    m.size(),
                    syn.morphism.images(),
                    syn.accepting
                ),
                files: vec![
                    ("monoid.json".into(), to_value(&**m)),
                    (
                        "morphism.json".into(),
                        json!({
                            "alphabet": l.alphabet(),
                            "images": syn.morphism.images(),
                            "accepting": syn.accepting,
                        }),
                    ),
                ],
            }
        }
        Kind::Quotient => {
            let l = language(&inputs(args, 1)?[0], sigma.as_ref())?;
            let w = l.alphabet().parse_word(&args.word)?;
            let q = if args.right { l.right_quotient(&w)? } else { l.left_quotient(&w)? };
            Emitted {
                summary: format!("{}\n", Regex::from_dfa(&q)),
                files: vec![("quotient.json".into(), to_value(&q))],
            }
        }
        Kind::Exists => {
            let input = &inputs(args, 1)?[0];
            let ext = match &sigma {
                Some(base) => ExtendedAlphabet::new(base),
                None => match load(input, None)? {
                    Loaded::Language(d) => ExtendedAlphabet::from_extended(d.alphabet())?,
                    _ => return Err(Error::Input("expected a language over the marked alphabet".into())),
                },
            };
            let l = language(input, Some(ext.extended()))?;
            let e = ext.exists_projection(&l)?;
            Emitted {
                summary: format!("{}\n", Regex::from_dfa(&e)),
                files: vec![("exists.json".into(), to_value(&e))],
            }
        }
        Kind::Schutz1 => {
            let m = Arc::new(monoid(&inputs(args, 1)?[0])?);
            let d = UnarySchutz::new(m)?.materialize(limits)?;
            Emitted {
                summary: format!("unary product of size {}\n", d.size()),
                files: vec![("schutz1.json".into(), to_value(&d))],
            }
        }
        Kind::Schutz2 => {
            let ins = inputs(args, 2)?;
            let (m, n) = (Arc::new(monoid(&ins[0])?), Arc::new(monoid(&ins[1])?));
            let d = BinarySchutz::new(m, n)?.materialize(limits)?;
            Emitted {
                summary: format!("binary product of size {}\n", d.size()),
                files: vec![("schutz2.json".into(), to_value(&d))],
            }
        }
        Kind::Algebra => algebra_files(&algebra(&inputs(args, 1)?[0], sigma.as_ref(), limits)?),
        Kind::Bsum => {
            let ins = inputs(args, 2)?;
            let b1 = algebra(&ins[0], sigma.as_ref(), limits)?;
            let b2 = algebra(&ins[1], sigma.as_ref(), limits)?;
            algebra_files(&schutz_sum(&b1, &b2, limits)?)
        }
        Kind::Dualrec => {
            let b = algebra(&inputs(args, 1)?[0], sigma.as_ref(), limits)?;
            let d = dual_recogniser(&b, limits)?;
            let mut summary = format!("dual monoid of size {}\n", d.monoid.size());
            for (i, r) in b.atom_regexes().iter().enumerate() {
                summary.push_str(&format!("  {i}: {r}\n"));
            }
            Emitted {
                summary,
                files: vec![
                    ("monoid.json".into(), to_value(&*d.monoid)),
                    ("tau.json".into(), json!({ "alphabet": b.alphabet(), "images": d.tau.images() })),
                ],
            }
        }
    };
    emit(&args.output, &emitted)?;
    Ok(ExitCode::SUCCESS)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> schutz_core::Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn emit(output: &Output, emitted: &Emitted) -> schutz_core::Result<()> {
    if let Some(dir) = &output.out {
        for (name, value) in &emitted.files {
            write_file(dir, name, &format!("{value}\n"))?;
        }
        print!("{}", emitted.summary);
        for (name, _) in &emitted.files {
            println!("wrote {}", dir.join(name).display());
        }
    } else if output.pretty {
        print!("{}", emitted.summary);
    } else if let [(_, value)] = emitted.files.as_slice() {
        println!("{value}");
    } else {
        let obj: serde_json::Map<String, Value> = emitted
            .files
            .iter()
            .map(|(name, v)| (name.trim_end_matches(".json").to_string(), v.clone()))
            .collect();
        println!("{}", Value::Object(obj));
    }
    Ok(())
}

fn verify(args: &VerifyArgs, limits: &Limits) -> schutz_core::Result<ExitCode> {
    let id = match args.campaign {
        Campaigns::Prop2 => TheoremId::Prop2,
        Campaigns::Thm4 => TheoremId::Thm4,
        Campaigns::Thm8 => TheoremId::Thm8,
        Campaigns::Cor9 => TheoremId::Cor9,
        Campaigns::Thm10 => TheoremId::Thm10,
        Campaigns::Thm11 => TheoremId::Thm11,
        Campaigns::Lemmas => TheoremId::Lemmas,
    };
    let mut c = Campaign::new(id);
    c.seed = args.seed;
    if let Some(v) = args.max_size {
        c.max_size = v;
    }
    if let Some(v) = args.max_len {
        c.max_len = v;
    }
    if let Some(v) = args.samples {
        c.samples = v;
    }
    if let Some(sigma) = read_alphabet(args.alphabet.as_deref())? {
        c.alphabet = sigma.letters().to_vec();
    }
    let report = run(&c, limits)?;
    let text = if args.output.pretty {
        report.to_pretty()
    } else {
        report.to_json_lines()
    };
    match &args.output.out {
        Some(dir) => {
            write_file(dir, &format!("{id}.jsonl"), &report.to_json_lines())?;
            print!("{}", report.to_pretty().lines().last().map(|l| format!("{l}\n")).unwrap_or_default());
        }
        None => print!("{text}"),
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
