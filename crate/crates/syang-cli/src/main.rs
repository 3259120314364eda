use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use syang::hopf::{verify_coassoc, verify_correspondence, verify_reflection_compat, CoproductTable, Cutoffs, Residual};
use syang::idealcheck::{ideal_span, support_for, tensor_member, verify_hom_chained, verify_hom_in, SpanPool, SupportPolicy};
use syang::matrixrep::{check_relations, realize};
use syang::parser::{parse_expression, Parsed};
use syang::presentations::{
    classical_reflection_map, drinfeld_lift, drinfeld_relations, kac_moody_relations, label_level_sum,
    minimalistic_relations, quantum_reflection, reflection_suite, serre_block_determinant,
};
use syang::report::Report;
use syang::roots::Letter;
use syang::weyl::{apply_word, default_orbit_depth, orbit, reflect_simple, GroupoidWord, ReflectionKind};
use syang::{Error, RootDatum, Q};

const SCHEMA: &str = "syang/1";

#[derive(Parser)]
#[command(name = "syang", version, about = "Root data, odd reflections and super Yangian checks for sl(m|n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// E/D word of the simple root system, e.g. EEEDD.
    #[arg(long, global = true)]
    word: Option<String>,
    /// Use the affine root datum (adds alpha_0).
    #[arg(long, global = true)]
    affine: bool,
    /// Largest loop degree N kept in the realization and the Casimir.
    #[arg(long, global = true, value_name = "N")]
    loop_cutoff: Option<usize>,
    /// Largest finite root height H in the Casimir.
    #[arg(long, global = true, value_name = "H")]
    height_cutoff: Option<usize>,
    /// Word-length bound L for ideal membership.
    #[arg(long, global = true, value_name = "L")]
    maxlen: Option<usize>,
    /// Simple root index.
    #[arg(long, global = true, value_name = "i")]
    index: Option<usize>,
    /// JSON output (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Human-readable output.
    #[arg(long, global = true)]
    text: bool,
    /// Worker threads for independent relation checks.
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan matrix, Dynkin diagram or positive roots.
    Roots {
        #[command(subcommand)]
        what: RootsCmd,
    },
    /// Simple reflections and the odd-reflection orbit.
    Weyl {
        #[command(subcommand)]
        what: WeylCmd,
    },
    /// Run one of the exact verification checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Reduce an expression modulo the minimalistic relations.
    Normalize { expression: String },
    /// The 3x3 Cartan block of rows (m,n,k) and columns (j-1,j,j+1).
    SerreBlock {
        #[arg(long, value_name = "M,N,K")]
        rows: String,
    },
}

#[derive(Subcommand)]
enum RootsCmd {
    Cartan,
    Dynkin,
    Posroots,
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Reflect in --index, or compose along --path.
    Reflect {
        #[arg(long, value_name = "I,J,...")]
        path: Option<String>,
    },
    /// Words reachable by odd reflections, up to --depth steps.
    Orbit {
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Level-zero relations in the loop realization; with --index also the
    /// classical odd reflection as an ideal check.
    KacMoody,
    /// Odd reflection on the level-one relations near the reflected root.
    ReflectionHom,
    /// Reflection images of every minimalistic relation.
    YangianReflection,
    /// Coproduct residuals of the odd reflection.
    CoproductCompat,
    /// hbar^-1 (Delta - Delta^op) h(i,1) against [h(i,0) x 1, Omega].
    Correspondence,
    /// (Delta x 1) Delta = (1 x Delta) Delta on the selected generators.
    Coassoc,
    /// Lifted Drinfeld relations with level sum up to --level-sum.
    DrinfeldLift {
        #[arg(long, default_value_t = 2)]
        level_sum: usize,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(Value, String, u8), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(k) = cli.common.jobs {
        if k == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(3);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    match run(&cli) {
        Ok((value, text, code)) => {
            if cli.common.text {
                print!("{text}");
                if !text.ends_with('\n') {
                    println!();
                }
            } else {
                let mut out = json!({"schema": SCHEMA});
                if let (Some(o), Value::Object(v)) = (out.as_object_mut(), value) {
                    o.extend(v);
                }
                println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            }
            ExitCode::from(code)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            // Running out of room is a bound problem, not bad input.
            match e {
                Error::Overflow(_) | Error::BoundTooSmall { .. } | Error::LengthBound { .. } => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn datum(c: &Common) -> Result<RootDatum, Failure> {
    let w = c.word.as_deref().ok_or_else(|| Failure::Usage("--word is required".into()))?;
    Ok(RootDatum::parse(w, c.affine)?)
}

fn index(c: &Common, rd: &RootDatum) -> Result<usize, Failure> {
    let i = c.index.ok_or_else(|| Failure::Usage("--index is required".into()))?;
    rd.check_index(i)?;
    Ok(i)
}

/// --index if given, otherwise every index passing `keep`.
fn indices(c: &Common, rd: &RootDatum, keep: impl Fn(usize) -> bool) -> Result<Vec<usize>, Failure> {
    match c.index {
        Some(i) => {
            rd.check_index(i)?;
            Ok(vec![i])
        }
        None => Ok(rd.indices().into_iter().filter(|&i| keep(i)).collect()),
    }
}

fn loop_cutoff(c: &Common, rd: &RootDatum) -> usize {
    if rd.affine {
        c.loop_cutoff.unwrap_or(2)
    } else {
        0
    }
}

fn cutoffs(c: &Common, rd: &RootDatum) -> Cutoffs {
    let full = Cutoffs::full(rd, loop_cutoff(c, rd));
    Cutoffs { height: c.height_cutoff.unwrap_or(full.height), ..full }
}

fn list(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| Failure::Usage(format!("bad index list {text:?}"))))
        .collect()
}

fn datum_json(rd: &RootDatum) -> Value {
    json!({"word": rd.word_string(), "affine": rd.affine})
}

fn report_out(command: &str, rd: &RootDatum, report: &Report, extra: Option<Value>) -> Outcome {
    let mut v = json!({"command": command, "datum": datum_json(rd), "report": report.to_json(false)});
    let mut text = report.to_text();
    if let Some(x) = extra {
        text.push_str(&format!("{}\n", serde_json::to_string_pretty(&x).expect("serializable")));
        v["details"] = x;
    }
    Ok((v, text, report.outcome().exit_code() as u8))
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::Roots { what } => roots(c, what),
        Command::Weyl { what } => weyl(c, what),
        Command::Verify { what } => verify(c, what),
        Command::Normalize { expression } => normalize(c, expression),
        Command::SerreBlock { rows } => {
            let rd = datum(c)?;
            let j = index(c, &rd)?;
            let r = list(rows)?;
            let [a, b, k] = r[..] else {
                return Err(Failure::Usage("--rows takes three indices".into()));
            };
            let (block, det) = serre_block_determinant(&rd, j, (a, b, k))?;
            let text = block.iter().map(|row| format!("{row:?}")).collect::<Vec<_>>().join("\n") + &format!("\ndet = {det}\n");
            Ok((json!({"command": "serre-block", "datum": datum_json(&rd), "index": j, "rows": r, "block": block, "determinant": det}), text, 0))
        }
    }
}

fn roots(c: &Common, what: &RootsCmd) -> Outcome {
    let rd = datum(c)?;
    match what {
        RootsCmd::Cartan => {
            let cm = rd.cartan_matrix();
            let text = cm.entries.iter().map(|row| format!("{row:?}")).collect::<Vec<_>>().join("\n");
            let mut v = cm.to_json(&rd);
            v["command"] = json!("roots cartan");
            Ok((v, text, 0))
        }
        RootsCmd::Dynkin => {
            let d = rd.dynkin_diagram();
            let nodes: Vec<Value> = d.nodes.iter().map(|n| json!({"index": n.index, "grey": n.grey})).collect();
            let v = json!({
                "command": "roots dynkin",
                "datum": datum_json(&rd),
                "nodes": nodes,
                "edges": d.edges.iter().map(|(a, b, e)| json!([a, b, e])).collect::<Vec<_>>(),
                "dot": d.to_dot(),
            });
            Ok((v, d.to_ascii(), 0))
        }
        RootsCmd::Posroots => {
            let roots = rd.positive_roots(loop_cutoff(c, &rd) as i64)?;
            let rows: Vec<Value> = roots
                .iter()
                .map(|r| json!({"weight": r.weight.to_string(), "parity": r.parity, "multiplicity": r.multiplicity}))
                .collect();
            let text = roots
                .iter()
                .map(|r| format!("{:<24} parity {} multiplicity {}", r.weight.to_string(), r.parity, r.multiplicity))
                .collect::<Vec<_>>()
                .join("\n");
            Ok((json!({"command": "roots posroots", "datum": datum_json(&rd), "count": roots.len(), "roots": rows}), text, 0))
        }
    }
}

fn weyl(c: &Common, what: &WeylCmd) -> Outcome {
    let rd = datum(c)?;
    match what {
        WeylCmd::Reflect { path: Some(p) } => {
            let steps = list(p)?;
            let r = apply_word(&GroupoidWord { start: rd.clone(), indices: steps.clone() })?;
            let images: Vec<String> = r.root_images.iter().map(|w| w.to_string()).collect();
            let text = format!("{} -> {}\n{}", rd.word_string(), r.datum.word_string(), images.join("\n"));
            let v = json!({"command": "weyl reflect", "datum": datum_json(&rd), "path": steps, "result": r.datum.word_string(), "root_images": images});
            Ok((v, text, 0))
        }
        WeylCmd::Reflect { path: None } => {
            let i = index(c, &rd)?;
            let r = reflect_simple(&rd, i)?;
            let kind = if r.kind == ReflectionKind::Odd { "odd" } else { "even" };
            let images: Vec<String> = r.root_images.iter().map(|w| w.to_string()).collect();
            let text = format!("{kind} reflection {i}: {} -> {}\n{}", rd.word_string(), r.new_datum.word_string(), images.join("\n"));
            let v = json!({"command": "weyl reflect", "datum": datum_json(&rd), "index": i, "kind": kind, "result": r.new_datum.word_string(), "root_images": images});
            Ok((v, text, 0))
        }
        WeylCmd::Orbit { depth } => {
            let m = rd.word.iter().filter(|l| **l == Letter::E).count();
            let n = rd.word.len() - m;
            let o = orbit(m, n, rd.affine, depth.unwrap_or_else(|| default_orbit_depth(m, n)))?;
            let mut v = o.to_json();
            v["command"] = json!("weyl orbit");
            v["m"] = json!(m);
            v["n"] = json!(n);
            v["node_count"] = json!(o.nodes.len());
            Ok((v, o.to_dot(), 0))
        }
    }
}

fn verify(c: &Common, what: &VerifyCmd) -> Outcome {
    let rd = datum(c)?;
    match what {
        VerifyCmd::KacMoody => {
            let real = realize::<Q>(&rd, loop_cutoff(c, &rd) as i64)?;
            let mut report = check_relations(&real, &kac_moody_relations::<Q>(&rd))?;
            if let Some(i) = c.index {
                let (map, t) = classical_reflection_map::<Q>(&rd, i)?;
                let tgt = kac_moody_relations::<Q>(&t);
                let pool = SpanPool::stretched(&tgt, c.maxlen.unwrap_or(4));
                report.merge(verify_hom_in(&pool, &map, &kac_moody_relations(&rd), SupportPolicy::Indices)?);
            }
            report_out("verify kac-moody", &rd, &report, None)
        }
        VerifyCmd::ReflectionHom => {
            let mut report = Report::new(&format!("odd reflections on {}", rd.word_string()));
            for i in indices(c, &rd, |i| rd.is_odd(i))? {
                let (map, t) = quantum_reflection::<Q>(&rd, i)?;
                let src = reflection_suite::<Q>(&rd, i)?;
                let tgt = minimalistic_relations::<Q>(&t);
                let pool = SpanPool::new(&tgt, c.maxlen.unwrap_or(5));
                report.merge(verify_hom_in(&pool, &map, &src, SupportPolicy::Indices)?);
            }
            report_out("verify reflection-hom", &rd, &report, None)
        }
        VerifyCmd::YangianReflection => {
            let mut report = Report::new(&format!("quantum reflections on {}", rd.word_string()));
            let src = minimalistic_relations::<Q>(&rd);
            for i in indices(c, &rd, |_| true)? {
                let (map, t) = quantum_reflection::<Q>(&rd, i)?;
                let tgt = minimalistic_relations::<Q>(&t);
                let pool = SpanPool::new(&tgt, c.maxlen.unwrap_or(4));
                report.merge(verify_hom_in(&pool, &map, &src, SupportPolicy::Indices)?);
            }
            report_out("verify yangian-reflection", &rd, &report, None)
        }
        VerifyCmd::CoproductCompat => {
            let cut = cutoffs(c, &rd);
            let mut report = Report::new(&format!("coproduct compatibility on {}", rd.word_string()));
            let mut details = Vec::new();
            for i in indices(c, &rd, |i| rd.is_odd(i))? {
                let (r, residuals) = verify_reflection_compat::<Q>(&rd, i, &cut, c.maxlen.unwrap_or(4))?;
                report.merge(r);
                details.extend(residuals.iter().map(|r| residual_json(i, r)));
            }
            report_out("verify coproduct-compat", &rd, &report, Some(Value::Array(details)))
        }
        VerifyCmd::Correspondence => {
            let cut = cutoffs(c, &rd);
            let report = verify_correspondence::<Q>(&rd, &indices(c, &rd, |_| true)?, &cut)?;
            report_out("verify correspondence", &rd, &report, None)
        }
        VerifyCmd::Coassoc => {
            let cut = cutoffs(c, &rd);
            let table = CoproductTable::<Q>::new(&rd, &cut)?;
            let keep = indices(c, &rd, |_| true)?;
            let gens: Vec<_> = table.generators().filter(|g| keep.contains(&g.index())).copied().collect();
            let report = verify_coassoc::<Q>(&rd, &gens, &cut, c.maxlen.unwrap_or(4))?;
            report_out("verify coassoc", &rd, &report, None)
        }
        VerifyCmd::DrinfeldLift { level_sum } => {
            let top = (*level_sum).max(1);
            let map = drinfeld_lift::<Q>(&rd, top)?;
            let mut src = drinfeld_relations::<Q>(&rd, top)?;
            src.relations.retain(|r| label_level_sum(&r.label).is_some_and(|s| s <= *level_sum));
            if let Some(i) = c.index {
                rd.check_index(i)?;
                src.relations.retain(|r| r.element.generators().iter().any(|g| g.index() == i));
            }
            let tgt = minimalistic_relations::<Q>(&rd);
            let report = verify_hom_chained(&map, &src, &tgt, &[c.maxlen.unwrap_or(5)], SupportPolicy::LiftNeighbour)?;
            report_out("verify drinfeld-lift", &rd, &report, None)
        }
    }
}

fn residual_json(i: usize, r: &Residual<Q>) -> Value {
    json!({
        "reflection": i,
        "generator": r.label,
        "p": r.actual.to_string(),
        "extracted": r.extracted.to_string(),
        "expected": r.expected.as_ref().map(|e| e.to_string()),
        "extracted_is_actual": r.extracted_is_actual,
        "extracted_is_expected": r.extracted_is_expected,
        "remainder_member": r.remainder_member,
        "remainder_lie_zero": r.remainder_lie_zero,
    })
}

fn normalize(c: &Common, text: &str) -> Outcome {
    let rd = datum(c)?;
    let parsed = parse_expression::<Q>(text, &rd)?;
    let rels = minimalistic_relations::<Q>(&rd);
    let gens: BTreeSet<_> = match &parsed {
        Parsed::Element(e) => e.generators(),
        Parsed::Tensor(t) => t.generators(),
    };
    let bound = c.maxlen.unwrap_or(4);
    let (normal, member) = if gens.is_empty() {
        (parsed.to_text(), parsed.to_text() == "0")
    } else {
        let span = ideal_span(&rels, &support_for(&rels, &gens, SupportPolicy::Indices), bound)?;
        match &parsed {
            Parsed::Element(e) => {
                let nf = span.normal_form(e);
                (nf.to_string(), nf.is_zero())
            }
            Parsed::Tensor(t) => {
                let (verdict, left) = tensor_member(&span, t)?;
                (left.to_string(), verdict.is_member())
            }
        }
    };
    let v = json!({
        "command": "normalize",
        "datum": datum_json(&rd),
        "input": parsed.to_text(),
        "L": bound,
        "normal_form": normal,
        "member": member,
    });
    Ok((v, format!("{normal}\n"), 0))
}
