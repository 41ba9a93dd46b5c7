//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three operations are exposed, each taking plain strings and returning a
//! JSON document:
//!
//! * [`gt_patterns`] — Gelfand–Tsetlin patterns of `λ` with their nested
//!   idempotents;
//! * [`branch_check`] — the branching rule `dim V_λ = Σ_{μ∈τ(λ)} dim V_μ`
//!   and the restricted-character comparison;
//! * [`klr_normal_form`] — normal form and degree of a KLR word.
//!
//! The `*_json` functions hold the logic and are plain Rust, so they are
//! tested natively; the `#[wasm_bindgen]` wrappers only convert errors.

use serde_json::json;
use wasm_bindgen::prelude::*;

use klrlab::combi::{enumerate_gt_patterns, interlacing_set, weyl_dim, Partition};
use klrlab::cyclo::gt_idempotent;
use klrlab::klr::{degree, make_word, normal_form, parse_ops, KlrElement, StrandSeq};
use klrlab::uqmod::branching_character_check;

/// Largest partition size accepted by the demo, to keep the page responsive.
pub const MAX_BOXES: u32 = 8;

fn partition(text: &str) -> Result<Partition, String> {
    let lambda = Partition::parse(text).map_err(|e| e.to_string())?;
    if lambda.size() > MAX_BOXES {
        return Err(format!("the demo is limited to |λ| ≤ {MAX_BOXES}"));
    }
    Ok(lambda)
}

/// Gelfand–Tsetlin patterns of `λ` (e.g. `"2,1,0"`) and their idempotents.
pub fn gt_patterns_json(partition_text: &str) -> Result<String, String> {
    let lambda = partition(partition_text)?;
    let mut patterns = Vec::new();
    for s in enumerate_gt_patterns(&lambda) {
        let e = gt_idempotent(&s).map_err(|e| e.to_string())?;
        patterns.push(json!({ "pattern": s, "sequence": e.sequence.labels }));
    }
    let doc = json!({
        "lambda": lambda,
        "weyl_dim": weyl_dim(&lambda).to_string(),
        "count": patterns.len(),
        "patterns": patterns,
    });
    Ok(doc.to_string())
}

/// The branching rule for `λ`: interlacing partitions with their
/// dimensions, and the character comparison through the module oracle.
pub fn branch_check_json(partition_text: &str) -> Result<String, String> {
    let lambda = partition(partition_text)?;
    let mu: Vec<_> = interlacing_set(&lambda, None)
        .into_iter()
        .map(|m| json!({ "mu": m, "dim": weyl_dim(&m).to_string() }))
        .collect();
    let report = branching_character_check(&lambda).map_err(|e| e.to_string())?;
    let doc = json!({
        "lambda": lambda,
        "dim": weyl_dim(&lambda).to_string(),
        "tau": mu,
        "ok": report.ok,
        "lhs": report.lhs,
        "rhs": report.rhs,
    });
    Ok(doc.to_string())
}

/// Normal form of the word `ops` (read bottom to top, e.g. `"s1,x1"`) on
/// the strands `seq` (e.g. `"1,2,1"`) in type `A_rank`.
pub fn klr_normal_form_json(rank: usize, seq: &str, ops: &str) -> Result<String, String> {
    let bottom = StrandSeq::parse(rank, seq).map_err(|e| e.to_string())?;
    if bottom.len() > 6 {
        return Err("the demo is limited to 6 strands".into());
    }
    let word = make_word(&bottom, parse_ops(ops).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let nf = normal_form(&KlrElement::from_word(word.clone()));
    let doc = json!({
        "input": word.to_string(),
        "degree": degree(&word),
        "top": word.top(),
        "normal_form": nf.to_string(),
        "terms": nf.len(),
    });
    Ok(doc.to_string())
}

#[wasm_bindgen]
pub fn gt_patterns(partition_text: &str) -> Result<String, JsError> {
    gt_patterns_json(partition_text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn branch_check(partition_text: &str) -> Result<String, JsError> {
    branch_check_json(partition_text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn klr_normal_form(rank: usize, seq: &str, ops: &str) -> Result<String, JsError> {
    klr_normal_form_json(rank, seq, ops).map_err(|e| JsError::new(&e))
}
