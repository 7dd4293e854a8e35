//! Thin command-line surface over the library: membership analysis, random
//! model experiments, the commutator-insertion map, Fox matrix dumps, growth
//! estimation and exact counting.
//!
//! Exit codes: 0 decided/success, 1 usage or input error, 2 UNKNOWN verdict.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bnskit::{
    count_cyclically_reduced, decide, estimate_degree, fox_derivative, grade, growth_sequence,
    insert_commutators, remove_commutators, run_experiment_with_log, symmetry_report,
    AutomorphismSpec, Character, GrowthClass, Membership, Presentation, SampleConfig, Word,
};

#[derive(Parser)]
#[command(name = "bnskit", version, about = "BNS invariant toolkit for deficiency-1 presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnalyzeFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SampleFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide BNS membership for a presentation file.
    Analyze(AnalyzeArgs),
    /// Monte Carlo survey of the few-relator random model.
    Sample(SampleArgs),
    /// Apply the commutator-insertion map (or its inverse with --remove).
    Transform(TransformArgs),
    /// Dump the Fox derivative matrix of a presentation.
    Fox(FoxArgs),
    /// Iterate an automorphism and estimate the growth degree.
    Growth(GrowthArgs),
    /// Exact counts of cyclically reduced words by length.
    Count(CountArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Presentation file (`<g1,...,gm | r1, ..., rn>`).
    #[arg(long)]
    pres: String,
    /// Character values, e.g. `1,0,-1`. Defaults to the primitive character
    /// when the first Betti number is 1.
    #[arg(long = "char")]
    character: Option<String>,
    /// Assert that the group ring has no zero divisors.
    #[arg(long)]
    assume_no_zero_divisors: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: AnalyzeFormat,
}

#[derive(Args)]
struct SampleArgs {
    /// Number of generators m.
    #[arg(long)]
    gens: usize,
    /// Number of relators n.
    #[arg(long)]
    rels: usize,
    /// Maximum relator length l.
    #[arg(long)]
    len: usize,
    /// Number of sampled presentations.
    #[arg(long)]
    trials: u64,
    /// RNG seed (required: reports are reproducible bit-for-bit).
    #[arg(long)]
    seed: u64,
    /// Write a JSONL per-sample log to this path.
    #[arg(long)]
    log: Option<String>,
    /// Worker threads; defaults to $BNSKIT_THREADS or 1. Results do not
    /// depend on the thread count.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "csv")]
    format: SampleFormat,
}

#[derive(Args)]
struct TransformArgs {
    /// Presentation file holding the (normalized) relator tuple.
    #[arg(long = "in", alias = "pres")]
    input: String,
    /// Character values, e.g. `1,-1`.
    #[arg(long = "char")]
    character: String,
    /// Remove the inserted commutators instead of inserting them.
    #[arg(long)]
    remove: bool,
}

#[derive(Args)]
struct FoxArgs {
    /// Presentation file.
    #[arg(long)]
    pres: String,
    /// Optional character; adds degree data to every term.
    #[arg(long = "char")]
    character: Option<String>,
}

#[derive(Args)]
struct GrowthArgs {
    /// Automorphism file (`x -> x; y -> y x`, optional `inverse:` block).
    #[arg(long)]
    auto: String,
    /// Word to iterate, in the automorphism's generator names.
    #[arg(long)]
    word: String,
    /// Number of iterations.
    #[arg(long, default_value_t = 64)]
    iters: usize,
    /// Letter cap; iteration stops with a truncation marker beyond it.
    #[arg(long, default_value_t = 1_000_000)]
    cap: usize,
}

#[derive(Args)]
struct CountArgs {
    /// Number of generators m.
    #[arg(long)]
    gens: usize,
    /// Maximum length; prints counts for 1..=len.
    #[arg(long)]
    len: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Sample(args) => sample(args),
        Command::Transform(args) => transform(args),
        Command::Fox(args) => fox(args),
        Command::Growth(args) => growth(args),
        Command::Count(args) => count(args),
    }
}

fn load_presentation(path: &str) -> Result<Presentation, Box<dyn std::error::Error>> {
    Ok(Presentation::parse(&fs::read_to_string(path)?)?)
}

fn analyze(args: AnalyzeArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let pres = load_presentation(&args.pres)?;
    match args.character {
        Some(text) => {
            let chi = Character::parse(&text)?;
            let verdict = decide(&pres, &chi, args.assume_no_zero_divisors)?;
            match args.format {
                AnalyzeFormat::Json => println!("{}", serde_json::to_string_pretty(&verdict)?),
                AnalyzeFormat::Text => {
                    println!("presentation: {pres}");
                    println!("character:    {}", verdict.character);
                    println!("membership:   {}", verdict.membership);
                    for step in &verdict.justification {
                        println!("  - {step}");
                    }
                }
            }
            Ok(exit_for(&[verdict.membership]))
        }
        None => {
            let b1 = pres.first_betti();
            if b1 != 1 {
                return Err(format!("b1 = {b1}, supply --char").into());
            }
            let report = symmetry_report(&pres, args.assume_no_zero_divisors)?;
            match args.format {
                AnalyzeFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
                AnalyzeFormat::Text => {
                    println!("presentation: {pres}");
                    println!("b1:           {}", report.b1);
                    println!("character:    {}", report.character);
                    println!("plus:         {}", report.plus.membership);
                    println!("minus:        {}", report.minus.membership);
                    println!("nonsymmetric: {}", report.nonsymmetric);
                    println!("not LERF:     {}", report.not_lerf);
                    println!("not fibering: {}", report.not_fibering);
                }
            }
            Ok(exit_for(&[report.plus.membership, report.minus.membership]))
        }
    }
}

fn exit_for(verdicts: &[Membership]) -> ExitCode {
    if verdicts.contains(&Membership::Unknown) {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn sample(args: SampleArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if args.gens < 2 || args.rels < 1 || args.len < 1 || args.trials < 1 {
        return Err("need --gens >= 2, --rels >= 1, --len >= 1, --trials >= 1".into());
    }
    let threads = args
        .threads
        .or_else(|| std::env::var("BNSKIT_THREADS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(1);
    let mut cfg = SampleConfig::new(args.gens, args.rels, args.len, args.trials, args.seed);
    cfg.threads = threads;
    let (report, logs) = run_experiment_with_log(&cfg, args.log.is_some());
    if let Some(path) = &args.log {
        let mut file = fs::File::create(path)?;
        for entry in &logs {
            writeln!(file, "{}", serde_json::to_string(entry)?)?;
        }
    }
    match args.format {
        SampleFormat::Csv => print!("{}", report.to_csv()),
        SampleFormat::Json => println!("{}", serde_json::to_string_pretty(&report)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn transform(args: TransformArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let pres = load_presentation(&args.input)?;
    let chi = Character::parse(&args.character)?;
    if args.remove {
        let recovered = remove_commutators(pres.relators(), &chi)?;
        let out = Presentation::new(pres.rank(), recovered)?;
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "input": pres.to_text(),
                "character": chi.values(),
                "recovered": out.to_text(),
                "recovered_relators": out.relators(),
            }))?
        );
    } else {
        let record = insert_commutators(pres.relators(), &chi)?;
        let out = Presentation::new(pres.rank(), record.output.clone())?;
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "input": pres.to_text(),
                "character": chi.values(),
                "insertions": record.insertions,
                "output": out.to_text(),
                "output_relators": record.output,
            }))?
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn fox(args: FoxArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let pres = load_presentation(&args.pres)?;
    let chi = args.character.as_deref().map(Character::parse).transpose()?;
    let mut matrix = Vec::new();
    for relator in pres.relators() {
        let mut row = Vec::new();
        for gen in 1..=pres.rank() as u32 {
            let derivative = fox_derivative(relator, gen);
            let terms: Vec<serde_json::Value> = derivative
                .terms()
                .map(|(w, c)| {
                    let mut term = json!({
                        "word": pres.display_word(w),
                        "coeff": c.to_string(),
                    });
                    if let Some(chi) = &chi {
                        term["degree"] = json!(chi.evaluate(w));
                    }
                    term
                })
                .collect();
            let mut entry = json!({ "terms": terms });
            if let Some(chi) = &chi {
                entry["min_degree"] = json!(grade(&derivative, chi)?.min_degree());
            }
            row.push(entry);
        }
        matrix.push(row);
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "presentation": pres.to_text(),
            "generators": pres.names().names(),
            "character": chi.as_ref().map(|c| c.values().to_vec()),
            "matrix": matrix,
        }))?
    );
    Ok(ExitCode::SUCCESS)
}

fn growth(args: GrowthArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let auto = AutomorphismSpec::parse(&fs::read_to_string(&args.auto)?)?;
    let word: Word = bnskit::parse_word(&args.word, auto.names())?;
    let seq = growth_sequence(&auto, &word, args.iters, args.cap)?;
    let estimate = estimate_degree(&seq)?;
    let levitt_ok = bnskit::check_levitt_bound(&auto, &estimate);
    let (class, degree) = match estimate.classification {
        GrowthClass::Polynomial(d) => ("POLYNOMIAL", Some(d)),
        GrowthClass::Exponential => ("EXPONENTIAL", None),
        GrowthClass::Inconclusive => ("INCONCLUSIVE", None),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "verified_automorphism": auto.verified(),
            "lengths": seq.lengths,
            "truncated": seq.truncated,
            "classification": class,
            "degree": degree,
            "levitt_bound_ok": levitt_ok,
            "diagnostics": estimate.diagnostics,
        }))?
    );
    if estimate.classification == GrowthClass::Inconclusive {
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn count(args: CountArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if args.gens < 1 || args.len < 1 {
        return Err("need --gens >= 1 and --len >= 1".into());
    }
    let counts: Vec<String> = (1..=args.len)
        .map(|k| count_cyclically_reduced(args.gens, k).to_string())
        .collect();
    println!("{}", counts.join(","));
    Ok(ExitCode::SUCCESS)
}
