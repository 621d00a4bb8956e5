use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use bibracket::expr::{evaluate, render};
use bibracket::verify::{self, CheckReport, DepthCase, GdshCase, SuiteOptions};
use bibracket::{gsh_in_g, Error, GshIndex, LinComb, QSeries, SeriesCache, Word};

#[derive(Parser)]
#[command(
    name = "bibracket",
    version,
    about = "Exact bi-bracket and q-MZV calculator"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word expression to a normalized linear combination.
    Expand { expr: String },
    /// q-expansion of the bracket image of an expression.
    Qseries {
        expr: String,
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// Use the regularized map g^sh (expression must lie in H^1).
        #[arg(long)]
        regularized: bool,
        /// Also print decimal approximations.
        #[arg(long)]
        float: bool,
    },
    /// q-expansion of g^sh_{k1,...,kr}.
    Gsh {
        /// Comma-separated index, e.g. 2,1,3.
        indices: String,
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[arg(long)]
        float: bool,
    },
    /// Run one check, or `all`.
    Verify {
        check_id: String,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        max_weight: Option<u32>,
        /// Index tuple, e.g. 2,2; repeat for several pairs.
        #[arg(long)]
        indices: Vec<String>,
        /// i, ii, iii (lemma-gdsh1) or depth2, depth3.
        #[arg(long)]
        case: Option<String>,
    },
    /// Mine linear relations among brackets.
    Relations {
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[arg(long, default_value_t = 40)]
        order: usize,
        /// Additional candidate words, e.g. e(4,1).
        #[arg(long)]
        extra: Vec<String>,
    },
}

const CHECK_IDS: &[&str] = &[
    "partition-relation",
    "double-shuffle",
    "derivative-square",
    "gsh-routes",
    "gsh-regular",
    "gsh-shuffle",
    "gsh-square",
    "relation-example",
    "derivative-depth1",
    "remark-depth1",
    "prop-dgk",
    "lemma-g10",
    "lemma-gdsh1",
    "thm-dgsh23",
    "example-dgsh22",
    "conjecture",
];

fn parse_indices(text: &str) -> Result<Vec<u32>, Error> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::Hypothesis(format!("bad index list {text:?}")))
        })
        .collect()
}

fn terms_json(x: &LinComb) -> Value {
    Value::Array(
        x.iter()
            .map(|(w, c)| json!({ "word": w.to_string(), "coefficient": c.to_string() }))
            .collect(),
    )
}

fn series_output(s: &QSeries, float: bool, json_mode: bool, extra: Value) -> String {
    let floats: Vec<f64> = s
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect();
    if json_mode {
        let mut v = serde_json::to_value(s).expect("series serializes");
        if float {
            v["float"] = json!(floats);
        }
        if let Value::Object(map) = extra {
            v.as_object_mut().unwrap().extend(map);
        }
        return v.to_string();
    }
    let mut out = s.to_text();
    if float {
        for (n, f) in floats.iter().enumerate() {
            out.push_str(&format!("\n  q^{n}: {} ~ {f:.12e}", s.coeff(n)));
        }
    }
    out
}

fn report_line(r: &CheckReport, json_mode: bool) -> String {
    if json_mode {
        r.to_json_line()
    } else {
        let status = serde_json::to_value(r.status).unwrap();
        format!(
            "{:<8} {} {} order={}",
            status.as_str().unwrap().to_uppercase(),
            r.check_id,
            r.parameters,
            r.order
        )
    }
}

fn run_check(
    id: &str,
    order: Option<usize>,
    kmax: Option<u32>,
    max_weight: Option<u32>,
    indices: &[String],
    case: Option<&str>,
) -> Result<CheckReport, Error> {
    let identity_order = order.unwrap_or(30);
    let congruence_order = order.unwrap_or(verify::WIDE_CONGRUENCE_ORDER);
    let weight = max_weight.unwrap_or(7);
    let tuples = indices
        .iter()
        .map(|t| parse_indices(t))
        .collect::<Result<Vec<_>, _>>()?;
    let single = || {
        tuples
            .first()
            .cloned()
            .ok_or_else(|| Error::Hypothesis("--indices is required for this check".into()))
    };
    let depth_case = |ks: &[u32]| -> Result<DepthCase, Error> {
        match case {
            Some(c) => c.parse(),
            None => match ks.len() {
                2 => Ok(DepthCase::Depth2),
                3 => Ok(DepthCase::Depth3),
                n => Err(Error::Hypothesis(format!(
                    "no derivative formula for depth {n}"
                ))),
            },
        }
    };
    Ok(match id {
        "partition-relation" => verify::check_partition_relation(weight, identity_order),
        "double-shuffle" => verify::check_double_shuffle_g(weight, identity_order),
        "derivative-square" => verify::check_derivative_square(weight, identity_order),
        "gsh-routes" => verify::check_gsh_routes(weight, identity_order),
        "gsh-regular" => verify::check_gsh_regular(weight, identity_order),
        "gsh-shuffle" => verify::check_gsh_shuffle(weight, identity_order),
        "gsh-square" => verify::check_gsh_square(weight, identity_order),
        "relation-example" => verify::check_relation_example(order.unwrap_or(40)),
        "derivative-depth1" => {
            verify::check_thm_derivative_depth1(kmax.unwrap_or(8), order.unwrap_or(50))
        }
        "remark-depth1" => verify::check_remark_depth1(kmax.unwrap_or(8), order.unwrap_or(50)),
        "prop-dgk" => verify::check_prop_dgk(kmax.unwrap_or(5), order.unwrap_or(50))?,
        "lemma-g10" => {
            let pairs: Vec<(u32, u32)> = if tuples.is_empty() {
                vec![(2, 2), (2, 3), (3, 2), (3, 3)]
            } else {
                tuples
                    .iter()
                    .map(|t| match t[..] {
                        [a, b] => Ok((a, b)),
                        _ => Err(Error::Hypothesis(format!("expected a pair, got {t:?}"))),
                    })
                    .collect::<Result<_, _>>()?
            };
            verify::check_lemma_g10(&pairs, congruence_order)?
        }
        "lemma-gdsh1" => {
            let ks = single()?;
            let case: GdshCase = case
                .ok_or_else(|| Error::Hypothesis("--case i|ii|iii is required".into()))?
                .parse()?;
            verify::check_lemma_gdsh1(case, &ks, congruence_order)?
        }
        "thm-dgsh23" => {
            let ks = single()?;
            verify::check_thm_dgsh23(depth_case(&ks)?, &ks, congruence_order)?
        }
        "conjecture" => {
            let ks = single()?;
            verify::check_conjecture_formal(depth_case(&ks)?, &ks, congruence_order)?
        }
        "example-dgsh22" => verify::check_example_dgsh22(congruence_order)?,
        other => {
            return Err(Error::Hypothesis(format!(
                "unknown check {other:?}; known: all, {}",
                CHECK_IDS.join(", ")
            )))
        }
    })
}

fn run(cli: Cli) -> Result<bool, Error> {
    let json_mode = cli.json;
    match cli.command {
        Command::Expand { expr } => {
            let x = evaluate(&expr)?;
            if json_mode {
                println!(
                    "{}",
                    json!({ "expression": expr, "result": render(&x), "terms": terms_json(&x) })
                );
            } else {
                println!("{}", render(&x));
            }
        }
        Command::Qseries {
            expr,
            order,
            regularized,
            float,
        } => {
            let x = evaluate(&expr)?;
            let cache = SeriesCache::new(order);
            let s = if regularized {
                cache.map_gsh(&x)?
            } else {
                cache.map_g(&x)
            };
            let extra = json!({ "expression": render(&x) });
            println!("{}", series_output(&s, float, json_mode, extra));
        }
        Command::Gsh {
            indices,
            order,
            float,
        } => {
            let idx = GshIndex::new(parse_indices(&indices)?)?;
            let s = bibracket::eval_gsh(&idx, order);
            let expansion = gsh_in_g(&idx).ok();
            let extra = json!({
                "index": idx.ks(),
                "bi_brackets": expansion.as_ref().map(render),
            });
            println!("{}", series_output(&s, float, json_mode, extra));
            if let (Some(x), false) = (expansion, json_mode) {
                println!("{idx} = g({})", render(&x));
            }
        }
        Command::Verify {
            check_id,
            order,
            kmax,
            max_weight,
            indices,
            case,
        } => {
            if check_id == "all" {
                let opts = SuiteOptions {
                    order: order.unwrap_or(30),
                    max_weight: max_weight.unwrap_or(7),
                };
                let reports = verify::run_all(&opts, |r| println!("{}", report_line(r, json_mode)));
                return Ok(reports.iter().all(|r| !r.is_fail()));
            }
            let report = run_check(
                &check_id,
                order,
                kmax,
                max_weight,
                &indices,
                case.as_deref(),
            )?;
            println!("{}", report_line(&report, json_mode));
            return Ok(!report.is_fail());
        }
        Command::Relations {
            weight,
            max_depth,
            order,
            extra,
        } => {
            let extra_words = extra
                .iter()
                .map(|text| {
                    let x = evaluate(text)?;
                    let words: Vec<Word> = x.words().cloned().collect();
                    match &words[..] {
                        [w] => Ok(w.clone()),
                        _ => Err(Error::Hypothesis(format!(
                            "--extra {text:?} is not a single word"
                        ))),
                    }
                })
                .collect::<Result<Vec<Word>, Error>>()?;
            let relations = verify::find_relations(weight, max_depth, order, &extra_words);
            if json_mode {
                let rels: Vec<Value> = relations
                    .iter()
                    .map(|r| json!({ "relation": render(r), "terms": terms_json(r) }))
                    .collect();
                println!(
                    "{}",
                    json!({ "weight": weight, "max_depth": max_depth, "order": order, "relations": rels })
                );
            } else {
                for r in &relations {
                    println!("{} = 0", render(r));
                }
                if relations.is_empty() {
                    println!("no relations");
                }
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
