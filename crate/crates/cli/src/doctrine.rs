use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};

use regdiag::adjunction::{check_epsilon_iso, check_eta_iso, check_fiberwise_iso, check_triangle_left, check_triangle_right, demonstrate_l_not_faithful};
use regdiag::bicat::{
    check_comprehensive_diagonals, check_graph_functor, check_map_detection, check_oracle_agreement, check_ruc, doctrine_of_cbc,
    verify_cbc_axioms, FinBicat,
};
use regdiag::doctrine::{doctrine_from_file, samples, validate_doctrine, BaseCategory, Budget, Doctrine, Obj, PowersetDoctrine};
use regdiag::report::Report;

use crate::Outcome;

#[derive(Args, Clone)]
pub struct Source {
    /// A doctrine file, or one of: pow, pow-neg, pow-klein
    doctrine: String,

    /// Atom sizes for `pow`, comma separated
    #[arg(long, default_value = "2", value_delimiter = ',')]
    atoms: Vec<usize>,

    /// Product depth of the base for builtin doctrines
    #[arg(long, default_value_t = 1)]
    depth: usize,

    /// Only base objects with at most this many elements are checked
    #[arg(long, default_value_t = 4)]
    max_object_card: usize,

    /// Also check X×I and I×X for every listed object X
    #[arg(long)]
    unit_products: bool,

    /// Largest parameter space enumerated in full per instance
    #[arg(long, default_value_t = 1 << 16)]
    budget: u64,

    /// Random points drawn when a space exceeds the budget
    #[arg(long, default_value_t = 1024)]
    samples: u64,
}

#[derive(Subcommand)]
pub enum DoctrineCommand {
    /// Check the doctrine laws
    Validate(Source),
    /// Check the cartesian bicategory axioms of Bicat_P and the graph functor
    Bicat(Source),
    /// Check that maps of Bicat_P are exactly the functional elements
    Maps(Source),
    /// Check the rule of unique choice
    Ruc(Source),
    /// Check that every diagonal-satisfying pair factors through a diagonal
    Comprehension(Source),
    /// Check both triangle identities and the counit isomorphism
    Triangles {
        #[command(flatten)]
        source: Source,
        /// Also check the counit on the relation truncation of the base
        #[arg(long)]
        with_rel: bool,
    },
    /// Decide whether the unit at P is invertible, cross-checked against
    /// unique choice and comprehensive diagonals
    EtaIso(Source),
    /// Validate the doctrine of a cartesian bicategory and compare it fiberwise
    /// with P
    OfCbc {
        #[command(flatten)]
        source: Source,
        /// Use the relation truncation of the base instead of Bicat_P
        #[arg(long)]
        rel: bool,
    },
    /// Show that the two lifts of negation have the same image under L
    LiftsAgree {
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
}

#[derive(Args)]
pub struct CbcVerifyArgs {
    #[command(flatten)]
    source: Source,
    /// Verify the relation truncation of the base instead of Bicat_P
    #[arg(long)]
    rel: bool,
}

struct Loaded {
    p: Arc<dyn Doctrine>,
    base: Arc<BaseCategory>,
    objects: Vec<Obj>,
    budget: Budget,
}

fn load(src: &Source, seed: u64) -> Result<Loaded> {
    let p: Arc<dyn Doctrine> = match src.doctrine.as_str() {
        "pow" => {
            if src.atoms.is_empty() {
                bail!("--atoms needs at least one size");
            }
            Arc::new(PowersetDoctrine::new(Arc::new(BaseCategory::build(&src.atoms, src.depth)?)))
        }
        "pow-neg" => Arc::new(samples::pow_over_negation(src.depth)?),
        "pow-klein" => Arc::new(samples::pow_over_klein(src.depth)?),
        path => {
            let text = std::fs::read_to_string(Path::new(path)).with_context(|| format!("reading {path}"))?;
            Arc::new(doctrine_from_file(&text)?)
        }
    };
    let base = Arc::new(p.base().clone());
    let mut objects: Vec<Obj> = base.objects().iter().filter(|x| x.card() <= src.max_object_card).cloned().collect();
    if src.unit_products {
        let i = base.unit();
        let listed = objects.clone();
        for x in &listed {
            for y in [Obj::prod(x, &i), Obj::prod(&i, x)] {
                if !objects.contains(&y) {
                    objects.push(y);
                }
            }
        }
    }
    let budget = Budget { cap: src.budget, samples: src.samples, seed };
    Ok(Loaded { p, base, objects, budget })
}

fn emit(json: bool, report: &Report) -> Outcome {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(report.passed())
}

fn no_dot(dot: bool) -> Result<()> {
    if dot {
        bail!("--format dot applies to diagrams, not to doctrine reports");
    }
    Ok(())
}

pub fn run(json: bool, seed: u64, cmd: &DoctrineCommand, dot: bool) -> Outcome {
    no_dot(dot)?;
    let report = match cmd {
        DoctrineCommand::Validate(s) => {
            let l = load(s, seed)?;
            validate_doctrine(l.p.as_ref(), &l.budget)
        }
        DoctrineCommand::Bicat(s) => {
            let l = load(s, seed)?;
            let b = FinBicat::of_doctrine(l.p.clone());
            let mut r = verify_cbc_axioms(&b, &l.objects, &l.budget);
            r.extend(check_graph_functor(&b, &l.objects, &l.budget));
            r
        }
        DoctrineCommand::Maps(s) => {
            let l = load(s, seed)?;
            check_map_detection(&l.p, &l.objects, &l.budget)
        }
        DoctrineCommand::Ruc(s) => {
            let l = load(s, seed)?;
            check_ruc(&l.p, &l.budget)
        }
        DoctrineCommand::Comprehension(s) => {
            let l = load(s, seed)?;
            check_comprehensive_diagonals(&l.p, &l.budget)
        }
        DoctrineCommand::Triangles { source, with_rel } => {
            let l = load(source, seed)?;
            let b = FinBicat::of_doctrine(l.p.clone());
            let mut r = check_triangle_left(&l.p, &l.objects, &l.budget);
            r.extend(check_triangle_right(&b, &l.objects, &l.budget));
            r.extend(check_epsilon_iso(&b, &l.objects, &l.budget));
            if *with_rel {
                let rel = FinBicat::rel_truncation(l.base.clone());
                r.extend(check_triangle_right(&rel, &l.objects, &l.budget));
                r.extend(check_epsilon_iso(&rel, &l.objects, &l.budget));
            }
            r
        }
        DoctrineCommand::EtaIso(s) => {
            let l = load(s, seed)?;
            check_eta_iso(&l.p, &l.budget)
        }
        DoctrineCommand::OfCbc { source, rel } => {
            let l = load(source, seed)?;
            let b = if *rel { FinBicat::rel_truncation(l.base.clone()) } else { FinBicat::of_doctrine(l.p.clone()) };
            let q = doctrine_of_cbc(b);
            let mut r = validate_doctrine(&q, &l.budget);
            r.extend(check_fiberwise_iso(&l.p, &q, &l.objects, &l.budget));
            r
        }
        DoctrineCommand::LiftsAgree { depth } => demonstrate_l_not_faithful(*depth, &Budget { seed, ..Budget::default() })?,
    };
    emit(json, &report)
}

pub fn cbc_verify(json: bool, seed: u64, args: &CbcVerifyArgs, dot: bool) -> Outcome {
    no_dot(dot)?;
    let l = load(&args.source, seed)?;
    let b = if args.rel { FinBicat::rel_truncation(l.base.clone()) } else { FinBicat::of_doctrine(l.p.clone()) };
    let mut report = verify_cbc_axioms(&b, &l.objects, &l.budget);
    report.extend(check_graph_functor(&b, &l.objects, &l.budget));
    if l.base.atoms().len() == 1 {
        report.extend(check_oracle_agreement(&b, &l.objects, &l.budget));
    }
    emit(json, &report)
}
