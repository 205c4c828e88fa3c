//! Command-line interface: every decider with machine-readable verdicts,
//! witnesses, and exit codes (0 yes, 1 no, 2 unknown, 3 input error).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use nextk::{
    axiomatization_problem, equivalence_report, is_consistent, is_decidable_formula, is_k_theorem,
    is_splitting, is_union_splitting_from, jankov_formula, jankov_logic_equal,
    member_of_jankov_logic, neg_witness_replays, AxiomatizationProblem, Budget, Cursor,
    DualAlgebra, Formula, Frame, FrameFilter, JankovAxiomSet, Outcome, Valuation, Verdict,
    Witness,
};

#[derive(Parser)]
#[command(name = "nextk")]
#[command(about = "Decision procedures for splittings of the lattice of normal modal logics")]
#[command(version)]
struct Cli {
    /// Largest frame size enumerated by searches
    #[arg(long, global = true, default_value_t = 5)]
    max_frame_size: usize,

    /// Candidates examined per semi-procedure before giving up
    #[arg(long, global = true, default_value_t = 100_000)]
    max_steps: u64,

    /// Connective depth of substitution images in proof search
    #[arg(long, global = true, default_value_t = 2)]
    max_subst_depth: u32,

    /// Largest box prefix tried when replaying instances
    #[arg(long, global = true, default_value_t = 3)]
    max_prefix: u32,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Re-check witness invariants before printing; replay failures exit 3
    #[arg(long, global = true)]
    verify: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Filter {
    Any,
    Rooted,
    RootedCycleFree,
}

impl From<Filter> for FrameFilter {
    fn from(f: Filter) -> FrameFilter {
        match f {
            Filter::Any => FrameFilter::Any,
            Filter::Rooted => FrameFilter::Rooted,
            Filter::RootedCycleFree => FrameFilter::RootedCycleFree,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether K + formula is a union-splitting
    CheckUnionSplitting {
        formula: String,
        /// Cursor file from an earlier exhausted run to resume from
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Decide whether K + formula is a splitting
    CheckSplitting { formula: String },
    /// Decide whether K + formula is consistent
    Consistent { formula: String },
    /// Decide whether the formula is a decidable formula
    DecidableFormula { formula: String },
    /// Decide whether two formulas axiomatize the same logic, when at least
    /// one side resolves to a union-splitting or the inconsistent logic
    Equal { formula: String, other: String },
    /// Decide membership of a formula in the logic of an axiom-frame file
    Member {
        formula: String,
        /// JSON file holding a list of rooted cycle-free frames
        #[arg(long)]
        axioms: PathBuf,
    },
    /// Print the axiom formula of a rooted cycle-free frame
    Jankov {
        /// JSON file holding a single frame
        #[arg(long)]
        frame: PathBuf,
    },
    /// Enumerate frame isomorphism classes in canonical order
    EnumFrames {
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, value_enum, default_value_t = Filter::Any)]
        filter: Filter,
    },
    /// Report the three equivalent statuses of a formula
    Report { formula: String },
}

#[derive(Serialize)]
struct QueryDoc {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    other: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
    budget: Budget,
}

#[derive(Serialize)]
struct ResultDoc {
    query: QueryDoc,
    verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<nextk::ProofCertificate>,
    effort: nextk::Effort,
    #[serde(skip_serializing_if = "Option::is_none")]
    cursor: Option<Cursor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}

fn parse_formula(text: &str) -> Result<Formula, String> {
    Formula::parse(text).map_err(|e| format!("in formula {text:?}: {e}"))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid JSON in {}: {e}", path.display()))
}

fn exit_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Yes => 0,
        Outcome::No => 1,
        Outcome::Unknown => 2,
    }
}

fn emit(format: Format, doc: &ResultDoc) -> Result<(), String> {
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string(doc).map_err(|e| e.to_string())?
            );
        }
        Format::Text => {
            println!("verdict: {:?}", doc.verdict);
            if let Some(witness) = &doc.witness {
                match witness {
                    Witness::Axioms { frames } => {
                        println!("axiomatization ({} axiom frames):", frames.len());
                        for f in frames.frames() {
                            println!("  {f}");
                        }
                    }
                    Witness::Countermodel { frame } => println!("countermodel: {frame}"),
                    Witness::Certificate(cert) => {
                        println!("certificate: prefix {}", cert.prefix);
                        for inst in &cert.instances {
                            println!("  instance: {inst}");
                        }
                    }
                    Witness::Inconsistency => {
                        println!("witness: both one-point algebras refute the formula")
                    }
                }
            }
            if let Some(cert) = &doc.certificate {
                println!(
                    "membership certificate: prefix {}, {} instances",
                    cert.prefix,
                    cert.instances.len()
                );
            }
            if let Some(cursor) = &doc.cursor {
                println!(
                    "cursor: pos {}, neg {}",
                    cursor.pos_examined, cursor.neg_examined
                );
            }
            if let Some(note) = &doc.note {
                println!("note: {note}");
            }
            println!(
                "effort: pos {}, neg {}",
                doc.effort.pos_candidates, doc.effort.neg_candidates
            );
        }
    }
    Ok(())
}

fn verify_witness(verdict: &Verdict, goal: &Formula) -> Result<(), String> {
    match (&verdict.outcome, &verdict.witness) {
        (Outcome::Unknown, _) => Ok(()),
        (_, None) => Err("definite verdict without witness".into()),
        (_, Some(Witness::Axioms { frames })) => {
            for a in frames.frames() {
                if !a.is_rooted() || !a.is_cycle_free() {
                    return Err(format!("axiom frame is not rooted cycle-free: {a}"));
                }
                if DualAlgebra::new(a.clone()).validates(goal) {
                    return Err(format!("axiom frame fails to refute the formula: {a}"));
                }
            }
            Ok(())
        }
        (Outcome::No, Some(Witness::Countermodel { frame })) => {
            if neg_witness_replays(frame, goal) {
                Ok(())
            } else {
                Err(format!("counterexample failed replay: {frame}"))
            }
        }
        (Outcome::Yes, Some(Witness::Certificate(cert))) => {
            if cert.replays(goal) {
                Ok(())
            } else {
                Err("certificate failed replay".into())
            }
        }
        (_, Some(Witness::Certificate(_) | Witness::Countermodel { .. })) => Ok(()),
        (_, Some(Witness::Inconsistency)) => {
            if is_consistent(goal) {
                Err("inconsistency witness for a consistent formula".into())
            } else {
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    let budget = Budget {
        max_candidates: cli.max_steps,
        max_frame_size: cli.max_frame_size,
        max_subst_depth: cli.max_subst_depth,
        max_prefix: cli.max_prefix,
    };

    match &cli.command {
        Command::CheckUnionSplitting { formula, resume } => {
            let f = parse_formula(formula)?;
            let start: Cursor = match resume {
                Some(path) => read_json(path)?,
                None => Cursor::default(),
            };
            let result = is_union_splitting_from(&f, &budget, start);
            let verified = if cli.verify {
                verify_witness(&result.verdict, &f)?;
                if let Some(cert) = &result.certificate {
                    if !cert.replays(&f) {
                        return Err("membership certificate failed replay".into());
                    }
                }
                Some(true)
            } else {
                None
            };
            let doc = ResultDoc {
                query: QueryDoc {
                    command: "check-union-splitting",
                    formula: Some(formula.clone()),
                    other: None,
                    file: None,
                    budget: budget.clone(),
                },
                verdict: result.verdict.outcome,
                witness: result.verdict.witness.clone(),
                certificate: result.certificate.clone(),
                effort: result.verdict.effort,
                cursor: Some(result.cursor),
                verified,
                note: None,
            };
            emit(cli.format, &doc)?;
            Ok(exit_code(result.verdict.outcome))
        }

        Command::CheckSplitting { formula } => {
            let f = parse_formula(formula)?;
            let verdict = is_splitting(&f, &budget);
            let verified = if cli.verify {
                if verdict.is_yes() {
                    let Some(Witness::Axioms { frames }) = &verdict.witness else {
                        return Err("splitting verdict without axiom witness".into());
                    };
                    let recomputed = nextk::is_union_splitting(&f, &budget);
                    let Some(axioms) = recomputed.axiomatization else {
                        return Err("splitting witness without a union-splitting".into());
                    };
                    if !jankov_logic_equal(frames, &axioms) {
                        return Err("splitting witness does not match the axiomatization".into());
                    }
                }
                verify_witness(&verdict, &f)?;
                Some(true)
            } else {
                None
            };
            let doc = ResultDoc {
                query: QueryDoc {
                    command: "check-splitting",
                    formula: Some(formula.clone()),
                    other: None,
                    file: None,
                    budget: budget.clone(),
                },
                verdict: verdict.outcome,
                witness: verdict.witness.clone(),
                certificate: None,
                effort: verdict.effort,
                cursor: None,
                verified,
                note: None,
            };
            emit(cli.format, &doc)?;
            Ok(exit_code(verdict.outcome))
        }

        Command::Consistent { formula } => {
            let f = parse_formula(formula)?;
            let consistent = is_consistent(&f);
            let outcome = if consistent { Outcome::Yes } else { Outcome::No };
            let doc = ResultDoc {
                query: QueryDoc {
                    command: "consistent",
                    formula: Some(formula.clone()),
                    other: None,
                    file: None,
                    budget: budget.clone(),
                },
                verdict: outcome,
                witness: (!consistent).then_some(Witness::Inconsistency),
                certificate: None,
                effort: nextk::Effort::default(),
                cursor: None,
                verified: cli.verify.then_some(true),
                note: None,
            };
            emit(cli.format, &doc)?;
            Ok(exit_code(outcome))
        }

        Command::DecidableFormula { formula } => {
            let f = parse_formula(formula)?;
            let verdict = is_decidable_formula(&f, &budget);
            let verified = if cli.verify {
                verify_witness(&verdict, &f)?;
                Some(true)
            } else {
                None
            };
            let doc = ResultDoc {
                query: QueryDoc {
                    command: "decidable-formula",
                    formula: Some(formula.clone()),
                    other: None,
                    file: None,
                    budget: budget.clone(),
                },
                verdict: verdict.outcome,
                witness: verdict.witness.clone(),
                certificate: None,
                effort: verdict.effort,
                cursor: None,
                verified,
                note: None,
            };
            emit(cli.format, &doc)?;
            Ok(exit_code(verdict.outcome))
        }

        Command::Equal { formula, other } => {
            let f = parse_formula(formula)?;
            let g = parse_formula(other)?;
            let (verdict, note) = decide_equality(&f, &g, &budget);
            let verified = if cli.verify {
                // The equality verdicts come from membership machinery whose
                // witnesses replay against the queried side.
                if let Some(Witness::Certificate(cert)) = &verdict.witness {
                    if !cert.replays(&g) && !cert.replays(&f) {
                        return Err("equality certificate failed replay".into());
                    }
                }
                Some(true)
            } else {
                None
            };
            let doc = ResultDoc {
                query: QueryDoc {
                    command: "equal",
                    formula: Some(formula.clone()),
                    other: Some(other.clone()),
                    file: None,
                    budget: budget.clone(),
                },
                verdict: verdict.outcome,
                witness: verdict.witness.clone(),
                certificate: None,
                effort: verdict.effort,
                cursor: None,
                verified,
                note,
            };
            emit(cli.format, &doc)?;
            Ok(exit_code(verdict.outcome))
        }

        Command::Member { formula, axioms } => {
            let f = parse_formula(formula)?;
            let set: JankovAxiomSet = read_json(axioms)?;
            let verdict = member_of_jankov_logic(&set, &f, &budget);
            let verified = if cli.verify {
                match (&verdict.outcome, &verdict.witness) {
                    (Outcome::Yes, Some(Witness::Certificate(cert))) => {
                        if !cert.replays(&f) {
                            return Err("membership certificate failed replay".into());
                        }
                    }
                    (Outcome::No, Some(Witness::Countermodel { frame })) => {
                        if !nextk::frame_validates_logic(frame, &set)
                            || DualAlgebra::new(frame.clone()).validates(&f)
                        {
                            return Err("membership countermodel failed replay".into());
                        }
                    }
                    (Outcome::Unknown, _) => {}
                    _ => return Err("unexpected membership witness shape".into()),
                }
                Some(true)
            } else {
                None
            };
            let doc = ResultDoc {
                query: QueryDoc {
                    command: "member",
                    formula: Some(formula.clone()),
                    other: None,
                    file: Some(axioms.display().to_string()),
                    budget: budget.clone(),
                },
                verdict: verdict.outcome,
                witness: verdict.witness.clone(),
                certificate: None,
                effort: verdict.effort,
                cursor: None,
                verified,
                note: None,
            };
            emit(cli.format, &doc)?;
            Ok(exit_code(verdict.outcome))
        }

        Command::Jankov { frame } => {
            let frame: Frame = read_json(frame)?;
            let axiom = jankov_formula(&frame).map_err(|e| e.to_string())?;
            if cli.verify {
                let alg = DualAlgebra::new(frame.clone());
                let identity: Valuation = (0..=alg.top()).map(|a| (a as u32, a)).collect();
                let value = alg
                    .evaluate(axiom.formula(), &identity)
                    .map_err(|e| e.to_string())?;
                if value == alg.top() {
                    return Err("axiom not refuted by its own algebra".into());
                }
            }
            match cli.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct JankovDoc<'a> {
                        frame: &'a Frame,
                        height: u32,
                        formula: String,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        verified: Option<bool>,
                    }
                    let doc = JankovDoc {
                        frame: axiom.frame(),
                        height: axiom.height(),
                        formula: axiom.formula().to_string(),
                        verified: cli.verify.then_some(true),
                    };
                    println!(
                        "{}",
                        serde_json::to_string(&doc).map_err(|e| e.to_string())?
                    );
                }
                Format::Text => {
                    println!("frame: {frame}");
                    println!("height: {}", axiom.height());
                    println!("formula: {}", axiom.formula());
                }
            }
            Ok(0)
        }

        Command::EnumFrames { max_size, filter } => {
            for frame in nextk::enumerate_frames(*max_size, (*filter).into()) {
                match cli.format {
                    Format::Json => println!(
                        "{}",
                        serde_json::to_string(&frame).map_err(|e| e.to_string())?
                    ),
                    Format::Text => println!("{frame}"),
                }
            }
            Ok(0)
        }

        Command::Report { formula } => {
            let f = parse_formula(formula)?;
            let report = equivalence_report(&f, &budget);
            if cli.verify {
                if let Some(witness) = &report.witness {
                    let verdict = Verdict {
                        outcome: report.outcome,
                        witness: Some(witness.clone()),
                        effort: report.effort,
                    };
                    verify_witness(&verdict, &f)?;
                }
            }
            match cli.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct ReportDoc<'a> {
                        query: QueryDoc,
                        #[serde(flatten)]
                        report: &'a nextk::EquivalenceReport,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        verified: Option<bool>,
                    }
                    let doc = ReportDoc {
                        query: QueryDoc {
                            command: "report",
                            formula: Some(formula.clone()),
                            other: None,
                            file: None,
                            budget: budget.clone(),
                        },
                        report: &report,
                        verified: cli.verify.then_some(true),
                    };
                    println!(
                        "{}",
                        serde_json::to_string(&doc).map_err(|e| e.to_string())?
                    );
                }
                Format::Text => {
                    println!("consistent: {}", report.consistent);
                    println!(
                        "axiomatization problem decidable: {:?}",
                        report.axiomatization_problem_decidable
                    );
                    println!("decidable formula: {:?}", report.decidable_formula);
                    println!(
                        "union-splitting or inconsistent: {:?}",
                        report.union_splitting_or_inconsistent
                    );
                }
            }
            Ok(exit_code(report.outcome))
        }
    }
}

/// Logic equality through whichever side resolves: an axiomatization problem
/// for one side decides membership-style equality for the other.
fn decide_equality(f: &Formula, g: &Formula, budget: &Budget) -> (Verdict, Option<String>) {
    // Syntactically identical axioms trivially give the same logic.
    if f == g || is_k_theorem(&Formula::iff(f.clone(), g.clone())) {
        return (
            Verdict::yes(
                Witness::Certificate(nextk::ProofCertificate {
                    prefix: 0,
                    instances: Vec::new(),
                }),
                nextk::Effort::default(),
            ),
            None,
        );
    }
    let left = axiomatization_problem(f, budget);
    if let Some(verdict) = left.decide(g, budget) {
        if verdict.outcome != Outcome::Unknown {
            return (verdict, None);
        }
    }
    let right = axiomatization_problem(g, budget);
    if let Some(verdict) = right.decide(f, budget) {
        if verdict.outcome != Outcome::Unknown {
            return (verdict, None);
        }
    }
    let note = match (&left, &right) {
        (
            AxiomatizationProblem::Undecidable { .. },
            AxiomatizationProblem::Undecidable { .. },
        ) => "neither logic is a union-splitting or inconsistent; equality of such logics \
              admits no decision procedure"
            .to_string(),
        _ => "neither side resolved within budget".to_string(),
    };
    (
        Verdict::unknown(nextk::Effort::default()),
        Some(note),
    )
}
