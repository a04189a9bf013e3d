use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use regdiag::diagram::{parse_diagram, Diagram, PortGraph};
use regdiag::finrel::{countermodel_search, decode, soundness_sweep, eval_diagram, FinModel, FinRelation};
use regdiag::logic::{factor_through_diagonal, parse_formula, parse_tuple, theta, theta_term, SortTree};
use regdiag::rewrite::{check_derivation, load_derivations};
use regdiag::Signature;

mod doctrine;

#[derive(Parser)]
#[command(name = "regdiag", version)]
#[command(about = "Regular logic as string diagrams: translation, finite semantics, derivations, doctrines")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for sampled checks and searches
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (all cores by default)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct SigArgs {
    /// Signature file: {"functions": {"f": 1}, "predicates": {"P": 2}}
    #[arg(long)]
    sig: PathBuf,
}

#[derive(Args)]
struct TermArgs {
    #[command(flatten)]
    sig: SigArgs,

    /// Number of free variables x1..xn
    #[arg(long, default_value_t = 0)]
    context: usize,
}

#[derive(Args)]
struct DiagramInput {
    #[command(flatten)]
    terms: TermArgs,

    /// Read inputs as formulas (or term tuples `<t1,..>`) and translate them
    #[arg(long)]
    formula: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a formula or term tuple into a string diagram
    Translate {
        #[command(flatten)]
        terms: TermArgs,
        /// Formula, or a term tuple written `<t1, ..., tm>`
        input: String,
    },
    /// Sort-check a formula or term tuple and print its derivation
    Typecheck {
        #[command(flatten)]
        terms: TermArgs,
        input: String,
    },
    /// Evaluate a diagram in a finite model
    Eval {
        #[command(flatten)]
        input: DiagramInput,
        /// Model file
        #[arg(long)]
        model: PathBuf,
        diagram: String,
    },
    /// Check that one diagram is included in another in a finite model
    Include {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long)]
        model: PathBuf,
        lhs: String,
        rhs: String,
    },
    /// Search for a finite model in which HYP is not included in CONCL
    Countermodel {
        #[command(flatten)]
        input: DiagramInput,
        /// Largest carrier size searched
        #[arg(long, default_value_t = 3)]
        max_carrier: usize,
        /// Candidate models enumerated per carrier size before sampling
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
        hyp: String,
        concl: String,
    },
    /// Check every rewrite rule in all small models and in random larger ones
    Soundness {
        #[command(flatten)]
        sig: SigArgs,
        /// Every model up to this carrier size is checked
        #[arg(long, default_value_t = 2)]
        max_carrier: usize,
        /// Number of random models
        #[arg(long, default_value_t = 200)]
        random_models: u64,
        /// Carrier size of the random models
        #[arg(long, default_value_t = 3)]
        random_size: usize,
        /// Random diagrams per model instantiating the lax rules
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Decide whether a pair of terms factors through the diagonal
    Factor {
        #[command(flatten)]
        terms: TermArgs,
        /// A pair `<t, u>`
        pair: String,
    },
    /// Check derivation files step by step
    CheckDerivation {
        #[command(flatten)]
        sig: SigArgs,
        file: PathBuf,
    },
    /// Checks on finite doctrines and their bicategories
    #[command(subcommand)]
    Doctrine(doctrine::DoctrineCommand),
    /// Check the cartesian bicategory axioms for Bicat_P or the relation truncation
    CbcVerify(doctrine::CbcVerifyArgs),
    /// Print a diagram's normal text, canonical form or DOT graph
    Render {
        #[command(flatten)]
        sig: SigArgs,
        diagram: String,
    },
}

/// A command's outcome: `Ok(true)` for success, `Ok(false)` for a checked
/// failure.
type Outcome = Result<bool>;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_sig(args: &SigArgs) -> Result<Signature> {
    Ok(Signature::from_json(&read(&args.sig)?)?)
}

fn is_tuple(text: &str) -> bool {
    text.trim_start().starts_with('<') || text.trim_start().starts_with('⟨')
}

fn diagram_of(input: &DiagramInput, sig: &Signature, text: &str) -> Result<Diagram> {
    if !input.formula {
        return Ok(parse_diagram(text, sig)?);
    }
    let n = input.terms.context;
    if is_tuple(text) {
        Ok(theta_term(&parse_tuple(text, sig, n)?))
    } else {
        Ok(theta(&parse_formula(text, sig, n)?))
    }
}

fn emit_diagram(format: Format, d: &Diagram, extra: Value) {
    match format {
        Format::Dot => print!("{}", PortGraph::from_diagram(d).to_dot()),
        Format::Json => {
            let mut v = json!({
                "diagram": d.to_string(),
                "dom": d.dom(),
                "cod": d.cod(),
                "canonical": d.canonical_form(),
            });
            if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
                m.extend(e);
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Text => println!("{d} : {} → {}", d.dom(), d.cod()),
    }
}

fn no_dot(format: Format, what: &str) -> Result<()> {
    if format == Format::Dot {
        bail!("--format dot applies to diagrams, not to {what}");
    }
    Ok(())
}

fn translate(format: Format, args: &TermArgs, text: &str) -> Outcome {
    let sig = load_sig(&args.sig)?;
    let d = if is_tuple(text) {
        theta_term(&parse_tuple(text, &sig, args.context)?)
    } else {
        theta(&parse_formula(text, &sig, args.context)?)
    };
    emit_diagram(format, &d, json!({ "input": text, "context": args.context }));
    Ok(true)
}

fn tree_json(t: &SortTree) -> Value {
    json!({
        "rule": t.rule.to_string(),
        "sort": [t.sort.0, t.sort.1],
        "premises": t.premises.iter().map(tree_json).collect::<Vec<_>>(),
    })
}

fn tree_text(t: &SortTree, depth: usize, out: &mut String) {
    out.push_str(&format!("{}{} : ({},{})\n", "  ".repeat(depth), t.rule, t.sort.0, t.sort.1));
    for p in &t.premises {
        tree_text(p, depth + 1, out);
    }
}

fn typecheck(format: Format, args: &TermArgs, text: &str) -> Outcome {
    no_dot(format, "sort derivations")?;
    let sig = load_sig(&args.sig)?;
    let (shown, tree) = if is_tuple(text) {
        let t = parse_tuple(text, &sig, args.context)?;
        (t.to_string(), t.sort_tree(&sig)?)
    } else {
        let f = parse_formula(text, &sig, args.context)?;
        (f.to_string(), f.derivation)
    };
    if format == Format::Json {
        let v = json!({ "input": shown, "sort": [tree.sort.0, tree.sort.1], "derivation": tree_json(&tree) });
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        let mut out = format!("{shown} : ({},{})\n", tree.sort.0, tree.sort.1);
        tree_text(&tree, 1, &mut out);
        print!("{out}");
    }
    Ok(true)
}

fn named_pairs(m: &FinModel, r: &FinRelation) -> Vec<(Vec<String>, Vec<String>)> {
    let names = |t: &[usize]| t.iter().map(|&i| m.carrier()[i].clone()).collect::<Vec<_>>();
    r.pairs().iter().map(|(a, b)| (names(a), names(b))).collect()
}

fn show_pair((a, b): &(Vec<String>, Vec<String>)) -> String {
    format!("(({}), ({}))", a.join(","), b.join(","))
}

fn eval(format: Format, input: &DiagramInput, model: &Path, text: &str) -> Outcome {
    no_dot(format, "relations")?;
    let sig = load_sig(&input.terms.sig)?;
    let m = FinModel::from_json(&read(model)?, &sig)?;
    let d = diagram_of(input, &sig, text)?;
    let r = eval_diagram(&m, &d)?;
    let pairs = named_pairs(&m, &r);
    if format == Format::Json {
        let v = json!({ "diagram": d.to_string(), "dom": d.dom(), "cod": d.cod(), "pairs": pairs });
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        println!("{d} : {} → {}", d.dom(), d.cod());
        println!("{} pairs", pairs.len());
        for p in &pairs {
            println!("  {}", show_pair(p));
        }
    }
    Ok(true)
}

fn include(format: Format, input: &DiagramInput, model: &Path, lhs: &str, rhs: &str) -> Outcome {
    no_dot(format, "inclusion checks")?;
    let sig = load_sig(&input.terms.sig)?;
    let m = FinModel::from_json(&read(model)?, &sig)?;
    let (d1, d2) = (diagram_of(input, &sig, lhs)?, diagram_of(input, &sig, rhs)?);
    let (r1, r2) = (eval_diagram(&m, &d1)?, eval_diagram(&m, &d2)?);
    if (r1.dom(), r1.cod()) != (r2.dom(), r2.cod()) {
        bail!("widths differ: {} → {} against {} → {}", r1.dom(), r1.cod(), r2.dom(), r2.cod());
    }
    let missing = r1.index_pairs().find(|&(i, j)| !r2.get(i, j));
    let witness = missing.map(|(i, j)| {
        let names = |t: Vec<usize>| t.into_iter().map(|x| m.carrier()[x].clone()).collect::<Vec<_>>();
        show_pair(&(names(decode(m.size(), r1.dom(), i)), names(decode(m.size(), r1.cod(), j))))
    });
    if format == Format::Json {
        let v = json!({ "included": witness.is_none(), "witness": witness });
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        match &witness {
            None => println!("included"),
            Some(w) => println!("not included: {w} is related by the left side only"),
        }
    }
    Ok(witness.is_none())
}

fn countermodel(format: Format, input: &DiagramInput, max_carrier: usize, budget: u64, seed: u64, hyp: &str, concl: &str) -> Outcome {
    no_dot(format, "model search")?;
    let sig = load_sig(&input.terms.sig)?;
    let (h, c) = (diagram_of(input, &sig, hyp)?, diagram_of(input, &sig, concl)?);
    let out = countermodel_search(&h, &c, max_carrier, budget, seed)?;
    if format == Format::Json {
        let found = out.found.as_ref().map(|cm| {
            let model: Value = serde_json::from_str(&cm.model.to_json()).expect("model json");
            let name = |t: &[usize]| t.iter().map(|&i| cm.model.carrier()[i].clone()).collect::<Vec<_>>();
            json!({ "model": model, "input": name(&cm.input), "output": name(&cm.output) })
        });
        println!("{}", serde_json::to_string_pretty(&json!({ "countermodel": found, "sizes": out.sizes })).expect("json"));
    } else {
        for s in &out.sizes {
            let mode = if s.exhaustive { "exhaustive" } else { "sampled" };
            println!("carrier {}: {} candidates, {mode}", s.carrier_size, s.candidates);
        }
        match &out.found {
            None => println!("no countermodel up to carrier size {max_carrier}"),
            Some(cm) => {
                let name = |t: &[usize]| t.iter().map(|&i| cm.model.carrier()[i].clone()).collect::<Vec<_>>().join(",");
                println!("countermodel: ({}) ↦ ({}) holds for the hypothesis only", name(&cm.input), name(&cm.output));
                println!("{}", cm.model.to_json());
            }
        }
    }
    Ok(out.found.is_none())
}

fn check_derivations(format: Format, sig: &SigArgs, file: &Path) -> Outcome {
    no_dot(format, "derivations")?;
    let sig = load_sig(sig)?;
    let files = load_derivations(&read(file)?)?;
    let mut all = true;
    let mut json_out = vec![];
    for (k, f) in files.iter().enumerate() {
        let name = f.name.clone().unwrap_or_else(|| format!("derivation {}", k + 1));
        let (dv, goal) = f.resolve(&sig)?;
        let v = check_derivation(&dv, &goal);
        all &= v.accepted;
        if format == Format::Json {
            json_out.push(json!({ "name": name, "verdict": v }));
            continue;
        }
        match (&v.failure, v.established) {
            (None, Some(rel)) => println!("{name}: Accepted, start {rel} goal (claimed {})", v.claimed),
            (None, None) => println!("{name}: Accepted"),
            (Some(fail), _) => println!("{name}: Rejected at {:?} step {}: {}", fail.chain, fail.index, fail.reason),
        }
        for t in &v.trace {
            println!("  {:?} {}: {} {} [{}] {}", t.chain, t.index, t.rule, t.direction, t.relation, t.result);
        }
    }
    if format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&json_out).expect("json"));
    }
    Ok(all)
}

fn soundness(format: Format, sig: &SigArgs, max_carrier: usize, random_models: u64, random_size: usize, samples: usize, seed: u64) -> Outcome {
    no_dot(format, "soundness reports")?;
    let sig = load_sig(sig)?;
    let r = soundness_sweep(&sig, max_carrier, random_size, random_models, samples, seed)?;
    if format == Format::Json {
        println!("{}", serde_json::to_string_pretty(&r).expect("json"));
    } else {
        println!(
            "{} models with carrier ≤ {max_carrier} and {} random models of size {random_size}: {} rule instances, {} violations",
            r.exhaustive_models,
            r.random_models,
            r.checks,
            r.violations.len()
        );
        for v in &r.violations {
            let inst = v.violation.instance.as_deref().unwrap_or("-");
            println!("  {} at {inst}: {} against {} in {}", v.violation.rule, v.violation.lhs, v.violation.rhs, v.model);
        }
    }
    Ok(r.violations.is_empty())
}

fn factor(format: Format, args: &TermArgs, text: &str) -> Outcome {
    no_dot(format, "term tuples")?;
    let sig = load_sig(&args.sig)?;
    let pair = parse_tuple(text, &sig, args.context)?;
    if pair.terms().len() != 2 {
        bail!("expected a pair of terms, got {} terms", pair.terms().len());
    }
    let f = factor_through_diagonal(&pair);
    if format == Format::Json {
        println!("{}", json!({ "pair": pair.to_string(), "factor": f.as_ref().map(|t| t.to_string()) }));
    } else {
        match &f {
            Some(t) => println!("{pair} = {t} ; Δ"),
            None => println!("{pair} does not factor through the diagonal"),
        }
    }
    Ok(true)
}

fn render(format: Format, sig: &SigArgs, text: &str) -> Outcome {
    let sig = load_sig(sig)?;
    let d = parse_diagram(text, &sig)?;
    if format == Format::Text {
        println!("{d} : {} → {}", d.dom(), d.cod());
        println!("canonical: {}", d.canonical_form());
    } else {
        emit_diagram(format, &d, json!({}));
    }
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    let f = cli.format;
    match &cli.command {
        Command::Translate { terms, input } => translate(f, terms, input),
        Command::Typecheck { terms, input } => typecheck(f, terms, input),
        Command::Eval { input, model, diagram } => eval(f, input, model, diagram),
        Command::Include { input, model, lhs, rhs } => include(f, input, model, lhs, rhs),
        Command::Countermodel { input, max_carrier, budget, hyp, concl } => {
            countermodel(f, input, *max_carrier, *budget, cli.seed, hyp, concl)
        }
        Command::Soundness { sig, max_carrier, random_models, random_size, samples } => {
            soundness(f, sig, *max_carrier, *random_models, *random_size, *samples, cli.seed)
        }
        Command::Factor { terms, pair } => factor(f, terms, pair),
        Command::CheckDerivation { sig, file } => check_derivations(f, sig, file),
        Command::Doctrine(cmd) => doctrine::run(f == Format::Json, cli.seed, cmd, f == Format::Dot),
        Command::CbcVerify(args) => doctrine::cbc_verify(f == Format::Json, cli.seed, args, f == Format::Dot),
        Command::Render { sig, diagram } => render(f, sig, diagram),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
