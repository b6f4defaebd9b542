//! Turning command-line text into validated core values.

use std::path::Path;

use relfree_core::cp::{build_custom_witness, build_witness, CaseId, Witness};
use relfree_core::words::split_top_level;
use relfree_core::{GeneratorMap, Sign, Word};

use crate::{CliError, GensArgs, RecipeArgs};

pub fn required<T>(value: Option<T>, what: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required argument {what}")))
}

pub fn word(text: &str, what: &str) -> Result<Word, CliError> {
    Word::parse(text).map_err(|e| CliError::Invalid(format!("{what} {text:?}: {e}")))
}

/// Top-level comma split; an all-blank list is empty.
pub fn word_list(text: &str, what: &str) -> Result<Vec<Word>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(text, ',')
        .into_iter()
        .enumerate()
        .map(|(i, part)| {
            if part.trim().is_empty() {
                return Err(CliError::Invalid(format!("{what} {i} is empty")));
            }
            word(part, &format!("{what} {i}"))
        })
        .collect()
}

/// One word per line, `#` comments and blank lines ignored.
pub fn word_file(path: &Path) -> Result<Vec<Word>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let mut words = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        words.push(word(content, &format!("{}:{}", path.display(), n + 1))?);
    }
    Ok(words)
}

pub fn gens(args: GensArgs) -> Result<Vec<Word>, CliError> {
    match (args.gens, args.gens_file) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "give either --gens or --gens-file, not both".into(),
        )),
        (Some(text), None) => word_list(&text, "generator"),
        (None, Some(path)) => word_file(&path),
        (None, None) => Err(CliError::Usage(
            "missing required argument --gens or --gens-file".into(),
        )),
    }
}

pub fn map(text: &str, what: &str) -> Result<GeneratorMap, CliError> {
    text.parse()
        .map_err(|e| CliError::Invalid(format!("{what}: {e}")))
}

fn sign(text: &str) -> Result<Sign, CliError> {
    match text.trim() {
        "1" | "+1" | "+" => Ok(Sign::Pos),
        "-1" | "-" => Ok(Sign::Neg),
        other => Err(CliError::Usage(format!("--sign must be 1 or -1, got {other:?}"))),
    }
}

pub fn witness(args: RecipeArgs) -> Result<Witness, CliError> {
    let custom_given = args.k.is_some() || args.h.is_some() || args.w.is_some() || args.sign.is_some();
    match args.case.as_deref().map(str::trim) {
        Some("custom") | None if custom_given => {
            let k = required(args.k, "--k")?;
            let h = required(args.h, "--h")?;
            let w = required(args.w, "--w")?;
            let s = sign(args.sign.as_deref().unwrap_or("1"))?;
            build_custom_witness(k, h, &w, s).map_err(|e| CliError::Invalid(e.to_string()))
        }
        Some("custom") => Err(CliError::Usage("custom recipes need --k, --h and --w".into())),
        None => Err(CliError::Usage(
            "missing required argument --case (or --k/--h/--w for a custom recipe)".into(),
        )),
        Some(_) if custom_given => Err(CliError::Usage(
            "--k/--h/--w/--sign only apply to --case custom".into(),
        )),
        Some(number) => {
            let case = number
                .parse::<u32>()
                .ok()
                .and_then(|n| CaseId::from_number(n).ok())
                .ok_or_else(|| {
                    CliError::Usage(format!("--case must be 1, 2, 3 or custom, got {number:?}"))
                })?;
            build_witness(case).map_err(|e| CliError::Invalid(e.to_string()))
        }
    }
}
