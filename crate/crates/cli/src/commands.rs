//! Resolved command inputs, computation and rendering.

use std::fmt::Write as _;

use relfree_core::cp::{
    divisibility_certificate, verify_cp_conditions_with_depth, CaseId, CpReport, Nonfreeness,
    Witness,
};
use relfree_core::factorization::{
    extend_automorphism, free_factor_certificate, is_primitive_with, triangular_solve,
    FreeFactorOutcome, PrimitivityVerdict, WhiteheadConfig,
};
use relfree_core::stallings::{fold, fold_tracked, support_closure, SubgroupGraph};
use relfree_core::varieties::{abelian_independent, abelianize, dyadic_eval, nil2_normal_form};
use relfree_core::{BasisCertificate, GeneratorMap, Word};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::{inputs, CliError, Command};

pub const SCHEMA: u64 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReduceInput {
    /// The word as typed; reduction is the computation.
    pub word: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GensInput {
    pub gens: Vec<Word>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QueryInput {
    pub gens: Vec<Word>,
    pub word: Word,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosureInput {
    pub seeds: Vec<Word>,
    pub bases: Vec<Vec<Word>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrimitiveInput {
    pub word: Word,
    pub rank: u32,
    pub max_rank: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveInput {
    #[serde(flatten)]
    pub witness: Witness,
    pub n: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorInput {
    pub gens: Vec<Word>,
    pub rank: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtendInput {
    pub map: GeneratorMap,
    pub rank: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<GeneratorMap>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WordInput {
    pub word: Word,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndependentInput {
    pub gens: Vec<Word>,
    pub modulus: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Nil2Input {
    pub word: Word,
    pub rank: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CpInput {
    #[serde(flatten)]
    pub witness: Witness,
    #[serde(rename = "N")]
    pub truncation: u32,
    pub depth: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DepthInput {
    pub depth: u64,
}

/// Everything a command computes from, recorded in JSON artifacts so that
/// `--verify-file` can recompute without the original command line.
#[derive(Clone, Debug)]
pub enum CommandInput {
    Reduce(ReduceInput),
    Fold(GensInput),
    Member(QueryInput),
    Basis(GensInput),
    Express(QueryInput),
    SupportClosure(ClosureInput),
    Primitive(PrimitiveInput),
    TriangularSolve(SolveInput),
    FreeFactor(FactorInput),
    ExtendAut(ExtendInput),
    Abelianize(WordInput),
    Independent(IndependentInput),
    Nil2(Nil2Input),
    Dyadic(WordInput),
    CpVerify(CpInput),
    Divisibility(DepthInput),
}

pub struct Output {
    pub result: Map<String, Value>,
    pub text: String,
    pub dot: Option<String>,
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("serializable")
}

fn object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        other => panic!("expected a JSON object, got {other}"),
    }
}

fn join(words: &[Word]) -> String {
    words.iter().map(Word::to_string).collect::<Vec<_>>().join(", ")
}

fn default_rank(word: &Word) -> u32 {
    word.max_index().map_or(1, |i| i + 1)
}

fn parse_input<T: DeserializeOwned>(value: Value) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Invalid(format!("stored input: {e}")))
}

impl CommandInput {
    pub fn from_command(command: Command) -> Result<CommandInput, CliError> {
        use inputs::{gens, required, word, word_file, word_list};
        Ok(match command {
            Command::Reduce { word: text } => {
                let text = required(text, "WORD")?;
                word(&text, "word")?;
                CommandInput::Reduce(ReduceInput { word: text })
            }
            Command::Fold(args) => CommandInput::Fold(GensInput { gens: gens(args)? }),
            Command::Basis(args) => CommandInput::Basis(GensInput { gens: gens(args)? }),
            Command::Member { gens: args, word: text } => {
                let text = required(text, "--word")?;
                let gens = gens(args)?;
                CommandInput::Member(QueryInput { gens, word: word(&text, "word")? })
            }
            Command::Express { gens: args, word: text } => {
                let text = required(text, "--word")?;
                let gens = gens(args)?;
                CommandInput::Express(QueryInput { gens, word: word(&text, "word")? })
            }
            Command::SupportClosure { seeds, bases, basis_files } => {
                let seeds = word_list(&required(seeds, "--seeds")?, "seed")?;
                if bases.is_empty() && basis_files.is_empty() {
                    return Err(CliError::Usage(
                        "missing required argument --basis or --basis-file".into(),
                    ));
                }
                let mut all = Vec::new();
                for (i, text) in bases.iter().enumerate() {
                    all.push(word_list(text, &format!("basis {i} word"))?);
                }
                for path in &basis_files {
                    all.push(word_file(path)?);
                }
                CommandInput::SupportClosure(ClosureInput { seeds, bases: all })
            }
            Command::Primitive { word: text, rank } => {
                let w = word(&required(text, "WORD")?, "word")?;
                let rank = rank.unwrap_or_else(|| default_rank(&w));
                let max_rank = WhiteheadConfig::from_env().max_rank;
                CommandInput::Primitive(PrimitiveInput { word: w, rank, max_rank })
            }
            Command::TriangularSolve { recipe, n } => {
                let witness = inputs::witness(recipe)?;
                let n = required(n, "--n")?;
                CommandInput::TriangularSolve(SolveInput { witness, n })
            }
            Command::FreeFactor { gens: args, rank } => {
                let gens = gens(args)?;
                let rank = match rank {
                    Some(r) => r,
                    None => gens.iter().filter_map(Word::max_index).max().map_or(0, |i| i + 1),
                };
                CommandInput::FreeFactor(FactorInput { gens, rank })
            }
            Command::ExtendAut { map, rank, inverse } => {
                let map = inputs::map(&required(map, "--map")?, "--map")?;
                let rank = required(rank, "--rank")?;
                let inverse = inverse.map(|t| inputs::map(&t, "--inverse")).transpose()?;
                CommandInput::ExtendAut(ExtendInput { map, rank, inverse })
            }
            Command::Abelianize { word: text } => CommandInput::Abelianize(WordInput {
                word: word(&required(text, "WORD")?, "word")?,
            }),
            Command::Independent { gens: args, modulus } => {
                if modulus == 1 {
                    return Err(CliError::Usage("--modulus must be 0 or at least 2".into()));
                }
                CommandInput::Independent(IndependentInput { gens: gens(args)?, modulus })
            }
            Command::Nil2 { word: text, rank } => {
                let w = word(&required(text, "WORD")?, "word")?;
                let rank = rank.unwrap_or_else(|| default_rank(&w));
                CommandInput::Nil2(Nil2Input { word: w, rank })
            }
            Command::Dyadic { word: text } => CommandInput::Dyadic(WordInput {
                word: word(&required(text, "WORD")?, "word")?,
            }),
            Command::CpVerify { recipe, n, depth } => {
                let witness = inputs::witness(recipe)?;
                if n == 0 {
                    return Err(CliError::Usage("--n must be at least 1".into()));
                }
                let depth = depth.unwrap_or(2 * u64::from(n));
                CommandInput::CpVerify(CpInput { witness, truncation: n, depth })
            }
            Command::Divisibility { depth } => CommandInput::Divisibility(DepthInput {
                depth: depth.unwrap_or(2 * u64::from(relfree_core::cp::DEFAULT_TRUNCATION)),
            }),
        })
    }

    /// Parses the `input` object of a stored artifact for command `name`.
    pub fn from_json(name: &str, value: Value) -> Result<CommandInput, CliError> {
        Ok(match name {
            "reduce" => CommandInput::Reduce(parse_input(value)?),
            "fold" => CommandInput::Fold(parse_input(value)?),
            "member" => CommandInput::Member(parse_input(value)?),
            "basis" => CommandInput::Basis(parse_input(value)?),
            "express" => CommandInput::Express(parse_input(value)?),
            "support-closure" => CommandInput::SupportClosure(parse_input(value)?),
            "primitive" => CommandInput::Primitive(parse_input(value)?),
            "triangular-solve" => CommandInput::TriangularSolve(parse_input(value)?),
            "free-factor" => CommandInput::FreeFactor(parse_input(value)?),
            "extend-aut" => CommandInput::ExtendAut(parse_input(value)?),
            "abelianize" => CommandInput::Abelianize(parse_input(value)?),
            "independent" => CommandInput::Independent(parse_input(value)?),
            "nil2" => CommandInput::Nil2(parse_input(value)?),
            "dyadic" => CommandInput::Dyadic(parse_input(value)?),
            "cp-verify" => CommandInput::CpVerify(parse_input(value)?),
            "divisibility" => CommandInput::Divisibility(parse_input(value)?),
            other => return Err(CliError::Usage(format!("unknown command {other}"))),
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            CommandInput::Reduce(i) => to_value(i),
            CommandInput::Fold(i) | CommandInput::Basis(i) => to_value(i),
            CommandInput::Member(i) | CommandInput::Express(i) => to_value(i),
            CommandInput::SupportClosure(i) => to_value(i),
            CommandInput::Primitive(i) => to_value(i),
            CommandInput::TriangularSolve(i) => to_value(i),
            CommandInput::FreeFactor(i) => to_value(i),
            CommandInput::ExtendAut(i) => to_value(i),
            CommandInput::Abelianize(i) | CommandInput::Dyadic(i) => to_value(i),
            CommandInput::Independent(i) => to_value(i),
            CommandInput::Nil2(i) => to_value(i),
            CommandInput::CpVerify(i) => to_value(i),
            CommandInput::Divisibility(i) => to_value(i),
        }
    }

    pub fn run(&self) -> Result<Output, CliError> {
        match self {
            CommandInput::Reduce(i) => run_reduce(i),
            CommandInput::Fold(i) => Ok(run_fold(i)),
            CommandInput::Member(i) => Ok(run_member(i)),
            CommandInput::Basis(i) => Ok(run_basis(i)),
            CommandInput::Express(i) => Ok(run_express(i)),
            CommandInput::SupportClosure(i) => run_closure(i),
            CommandInput::Primitive(i) => run_primitive(i),
            CommandInput::TriangularSolve(i) => Ok(run_solve(i)),
            CommandInput::FreeFactor(i) => run_factor(i),
            CommandInput::ExtendAut(i) => run_extend(i),
            CommandInput::Abelianize(i) => Ok(run_abelianize(i)),
            CommandInput::Independent(i) => Ok(run_independent(i)),
            CommandInput::Nil2(i) => run_nil2(i),
            CommandInput::Dyadic(i) => Ok(run_dyadic(i)),
            CommandInput::CpVerify(i) => run_cp(i),
            CommandInput::Divisibility(i) => Ok(run_divisibility(i)),
        }
    }
}

/// `{"schema": 1, "command", "input", ...result}`.
pub fn envelope(name: &str, input: &CommandInput, output: &Output) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("command".into(), json!(name));
    map.insert("input".into(), input.to_json());
    for (key, value) in &output.result {
        map.insert(key.clone(), value.clone());
    }
    Value::Object(map)
}

fn plain(result: Map<String, Value>, text: String) -> Output {
    Output { result, text, dot: None }
}

fn run_reduce(input: &ReduceInput) -> Result<Output, CliError> {
    let w = inputs::word(&input.word, "word")?;
    let mut result = Map::new();
    result.insert("reduced".into(), to_value(&w));
    Ok(plain(result, format!("{w}\n")))
}

fn graph_text(graph: &SubgroupGraph) -> String {
    let mut text = String::new();
    writeln!(text, "vertices: {}", graph.vertex_count()).unwrap();
    writeln!(text, "edges: {}", graph.edges().len()).unwrap();
    writeln!(text, "rank: {}", graph.rank()).unwrap();
    for e in graph.edges() {
        writeln!(text, "  {} -x{}-> {}", e.source, e.label, e.target).unwrap();
    }
    text
}

fn run_fold(input: &GensInput) -> Output {
    let graph = fold(&input.gens);
    let mut result = Map::new();
    result.insert("graph".into(), to_value(&graph));
    Output {
        result,
        text: graph_text(&graph),
        dot: Some(graph.to_dot()),
    }
}

fn run_member(input: &QueryInput) -> Output {
    let member = fold(&input.gens).contains(&input.word);
    let mut result = Map::new();
    result.insert("member".into(), json!(member));
    let text = if member { "member\n" } else { "non-member\n" };
    plain(result, text.to_string())
}

fn run_basis(input: &GensInput) -> Output {
    let graph = fold(&input.gens);
    let basis = graph.basis();
    let mut result = Map::new();
    result.insert("rank".into(), json!(basis.len()));
    result.insert("basis".into(), to_value(&basis));
    let mut text = format!("rank: {}\n", basis.len());
    for (j, b) in basis.iter().enumerate() {
        writeln!(text, "  b{j} = {b}").unwrap();
    }
    Output {
        result,
        text,
        dot: Some(graph.to_dot()),
    }
}

fn run_express(input: &QueryInput) -> Output {
    let graph = fold(&input.gens);
    let basis = graph.basis();
    let found = graph.member_express(&input.word);
    let tracked = fold_tracked(&input.gens);
    let in_gens = tracked.express(&input.word);
    let mut result = Map::new();
    result.insert("member".into(), json!(found.member));
    result.insert("basis".into(), to_value(&basis));
    let expression = found.member.then(|| found.expression.display_with('b').to_string());
    result.insert("expression".into(), json!(expression));
    let generators = in_gens.as_ref().map(|w| w.display_with('g').to_string());
    result.insert("generators_expression".into(), json!(generators));

    let mut text = String::new();
    match (&expression, &generators) {
        (Some(e), Some(g)) => {
            writeln!(text, "member").unwrap();
            writeln!(text, "in basis: {e}").unwrap();
            for (j, b) in basis.iter().enumerate() {
                writeln!(text, "  b{j} = {b}").unwrap();
            }
            writeln!(text, "in generators: {g}").unwrap();
        }
        _ => text.push_str("non-member\n"),
    }
    plain(result, text)
}

fn run_closure(input: &ClosureInput) -> Result<Output, CliError> {
    let closure = support_closure(&input.seeds, &input.bases).map_err(invalid)?;
    let supports: Vec<Value> = (0..input.bases.len())
        .map(|i| {
            json!({
                "positions": closure.supports[i],
                "words": closure.support_words(i, &input.bases),
            })
        })
        .collect();
    let mut result = Map::new();
    result.insert("rounds".into(), json!(closure.rounds));
    result.insert("supports".into(), Value::Array(supports));
    let mut text = format!("rounds: {}\n", closure.rounds);
    for i in 0..input.bases.len() {
        let words = closure.support_words(i, &input.bases);
        writeln!(text, "basis {i}: {}", if words.is_empty() { "-".into() } else { join(&words) })
            .unwrap();
    }
    Ok(plain(result, text))
}

fn run_primitive(input: &PrimitiveInput) -> Result<Output, CliError> {
    let config = WhiteheadConfig {
        max_rank: input.max_rank,
    };
    let verdict = is_primitive_with(&input.word, input.rank, &config).map_err(invalid)?;
    let mut result = Map::new();
    result.insert("primitive".into(), json!(verdict.is_primitive()));
    result.extend(object(to_value(&verdict)));
    let mut text = String::new();
    match &verdict {
        PrimitivityVerdict::Primitive { basis, trace } => {
            writeln!(text, "primitive").unwrap();
            writeln!(text, "basis: {}", join(basis)).unwrap();
            writeln!(text, "whitehead steps: {}", trace.len()).unwrap();
        }
        PrimitivityVerdict::NotPrimitive { reason, trace } => {
            writeln!(text, "not primitive: {reason}").unwrap();
            writeln!(text, "whitehead steps: {}", trace.len()).unwrap();
        }
    }
    Ok(plain(result, text))
}

/// Renders a word over the solved basis: symbol `k*i` (for `i <= n`) is
/// `y_i`, every other symbol `j` is `x_j`.
fn basis_symbols(word: &Word, k: u32, n: u32) -> String {
    if word.is_identity() {
        return "e".into();
    }
    let name = |index: u32| {
        if index.is_multiple_of(k) && index / k <= n {
            format!("y{}", index / k)
        } else {
            format!("x{index}")
        }
    };
    let letters = word.letters();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let letter = letters[i];
        let mut run = 1;
        while i + run < letters.len() && letters[i + run] == letter {
            run += 1;
        }
        let exponent = run as i64 * letter.sign.as_i64();
        parts.push(if exponent == 1 {
            name(letter.index)
        } else {
            format!("{}^{exponent}", name(letter.index))
        });
        i += run;
    }
    parts.join(" ")
}

fn certificate_problems(certificate: &BasisCertificate, subgroup: &[Word]) -> Vec<String> {
    let mut problems = Vec::new();
    if let Err(e) = certificate.verify() {
        problems.push(e.to_string());
    } else if let Err(e) = certificate.check_extends(subgroup) {
        problems.push(e.to_string());
    }
    problems
}

fn run_solve(input: &SolveInput) -> Output {
    let recipe = &input.witness.recipe;
    let n = input.n;
    let family = recipe.family(n);
    let certificate = triangular_solve(recipe, n);
    let problems = certificate_problems(&certificate, &family);
    let mut result = Map::new();
    result.insert("family".into(), to_value(&family));
    result.insert("certificate".into(), to_value(&certificate));
    result.insert("verified".into(), json!(problems.is_empty()));
    result.insert("problems".into(), json!(problems));

    let mut text = String::new();
    writeln!(text, "recipe: {recipe}").unwrap();
    writeln!(text, "n: {n}").unwrap();
    writeln!(text, "ambient rank: {}", certificate.ambient_rank).unwrap();
    writeln!(text, "Z: {}", join(&certificate.z_basis)).unwrap();
    writeln!(text, "forward: {}", certificate.forward).unwrap();
    writeln!(text, "backward:").unwrap();
    for (index, image) in certificate.backward.assignments() {
        writeln!(text, "  x{index} = {}", basis_symbols(image, recipe.k(), n)).unwrap();
    }
    writeln!(text, "verified: {}", problems.is_empty()).unwrap();
    for p in &problems {
        writeln!(text, "problem: {p}").unwrap();
    }
    plain(result, text)
}

fn run_factor(input: &FactorInput) -> Result<Output, CliError> {
    let outcome = free_factor_certificate(&input.gens, input.rank).map_err(invalid)?;
    let mut result = object(to_value(&outcome));
    let mut text = String::new();
    match &outcome {
        FreeFactorOutcome::Certified { certificate } => {
            let problems = certificate_problems(certificate, &input.gens);
            result.insert("verified".into(), json!(problems.is_empty()));
            result.insert("problems".into(), json!(problems));
            writeln!(text, "certified").unwrap();
            writeln!(text, "Z: {}", join(&certificate.z_basis)).unwrap();
            writeln!(text, "forward: {}", certificate.forward).unwrap();
            writeln!(text, "backward: {}", certificate.backward).unwrap();
            writeln!(text, "verified: {}", problems.is_empty()).unwrap();
            for p in &problems {
                writeln!(text, "problem: {p}").unwrap();
            }
        }
        FreeFactorOutcome::NoCertificateFound { reason } => {
            writeln!(text, "no certificate found: {reason}").unwrap();
            writeln!(text, "(this is not a proof that the subgroup is not a free factor)").unwrap();
        }
    }
    Ok(plain(result, text))
}

fn run_extend(input: &ExtendInput) -> Result<Output, CliError> {
    let extension =
        extend_automorphism(&input.map, input.rank, input.inverse.as_ref()).map_err(invalid)?;
    let mut result = Map::new();
    result.insert("extension".into(), to_value(&extension));
    Ok(plain(result, format!("{extension}\n")))
}

fn run_abelianize(input: &WordInput) -> Output {
    let vector = abelianize(&input.word);
    let mut result = Map::new();
    result.insert("vector".into(), to_value(&vector));
    plain(result, format!("{vector}\n"))
}

fn run_independent(input: &IndependentInput) -> Output {
    let vectors: Vec<_> = input.gens.iter().map(abelianize).collect();
    let independent = abelian_independent(&vectors, input.modulus);
    let mut result = Map::new();
    result.insert("independent".into(), json!(independent));
    let text = if independent { "independent\n" } else { "dependent\n" };
    plain(result, text.to_string())
}

fn run_nil2(input: &Nil2Input) -> Result<Output, CliError> {
    let element = nil2_normal_form(&input.word, input.rank).map_err(invalid)?;
    let mut result = Map::new();
    result.insert("normal_form".into(), to_value(&element));
    result.insert("word".into(), to_value(&element.to_word()));
    Ok(plain(result, format!("{element}\n")))
}

fn run_dyadic(input: &WordInput) -> Output {
    let value = dyadic_eval(&input.word);
    let mut result = Map::new();
    result.insert("value".into(), to_value(&value));
    plain(result, format!("{value}\n"))
}

pub fn case_name(case: CaseId) -> String {
    match to_value(&case) {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

pub fn cp_text(report: &CpReport) -> String {
    let mut text = String::new();
    writeln!(text, "case: {}", case_name(report.case)).unwrap();
    writeln!(text, "recipe: {}", report.recipe).unwrap();
    writeln!(text, "N: {}", report.truncation).unwrap();
    for check in &report.checks {
        write!(
            text,
            "n={}: independence {}, folded rank {}, certificate {}",
            check.n,
            if check.independence { "ok" } else { "FAILED" },
            check.folded_rank,
            if check.certificate_verified { "ok" } else { "FAILED" },
        )
        .unwrap();
        if let Some(f) = &check.failure {
            write!(text, " ({f})").unwrap();
        }
        text.push('\n');
    }
    match &report.nonfreeness {
        Nonfreeness::Dyadic { depth, .. } => {
            writeln!(text, "nonfreeness: dyadic, depth {depth}").unwrap()
        }
        Nonfreeness::Delegated { reference } => {
            writeln!(text, "nonfreeness: delegated to {reference}").unwrap()
        }
        Nonfreeness::Absent { reason } => writeln!(text, "nonfreeness: absent ({reason})").unwrap(),
    }
    writeln!(text, "note: {}", report.note).unwrap();
    writeln!(text, "pass: {}", report.pass).unwrap();
    text
}

fn run_cp(input: &CpInput) -> Result<Output, CliError> {
    let report = verify_cp_conditions_with_depth(&input.witness, input.truncation, input.depth)
        .map_err(invalid)?;
    Ok(plain(object(to_value(&report)), cp_text(&report)))
}

fn run_divisibility(input: &DepthInput) -> Output {
    let certificate = divisibility_certificate(input.depth);
    let verified = certificate.verify();
    let mut result = object(to_value(&certificate));
    result.insert("verified".into(), json!(verified.is_ok()));
    let mut text = String::new();
    for entry in &certificate.entries {
        writeln!(text, "2^{} | x0: x{} = {}", entry.j, entry.j, entry.value).unwrap();
    }
    writeln!(text, "verified: {}", verified.is_ok()).unwrap();
    if let Err(e) = verified {
        writeln!(text, "problem: {e}").unwrap();
    }
    plain(result, text)
}
