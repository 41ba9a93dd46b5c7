//! Command definitions and their dispatch to the library.

use std::fmt::Display;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use klrlab::acceptance;
use klrlab::combi::{enumerate_gt_patterns, schur_weights, weight_of_partition, Partition};
use klrlab::cyclo::{
    compare_pair, compare_weight_space, cyc_reduce, gdim_hom, gt_idempotent, gt_orthogonality_check, make_context,
    weyl_vanishing_check, CycContext, CycError,
};
use klrlab::klr::{
    degree, factor_general, make_word, normal_form, parse_ops, reconstruct, KlrElement, KlrWord, Rewriter, StrandSeq,
};
use klrlab::uqmod::{branching_character_check, seq_of, shapovalov_gram};

use crate::output::Format;

/// Errors that stop a command before it produces a document.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent input; exit status 2.
    #[error("{0}")]
    Usage(String),
    /// The computation itself failed; exit status 1.
    #[error("{0}")]
    Failure(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn usage(e: impl Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn cyc_err(e: CycError) -> CliError {
    match e {
        CycError::NonIntegral(_) | CycError::Overflow => CliError::Failure(e.to_string()),
        other => usage(other),
    }
}

/// Flags shared by every command.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Partition λ as comma-separated parts with explicit trailing zeros,
    /// e.g. `2,1,0`.
    #[arg(long, global = true, value_parser = parse_partition)]
    pub partition: Option<Partition>,
    /// Rank n of the Dynkin diagram A_n (strand labels 1..=n). Defaults to
    /// one less than the number of parts of --partition.
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Strand labels, comma-separated, e.g. `1,2,1`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub seq: Option<String>,
    /// Degree cap for cyclotomic reduction.
    #[arg(long = "deg-cap", global = true, allow_negative_numbers = true)]
    pub deg_cap: Option<i64>,
    /// Cap on the dot exponent searched for nilpotency certificates.
    #[arg(long = "dot-cap", global = true)]
    pub dot_cap: Option<u32>,
    /// Exit with status 1 if any part of the result is only valid below the
    /// caps.
    #[arg(long = "require-exact", global = true)]
    pub require_exact: bool,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Cache directory (overrides KLRLAB_CACHE and the per-user default).
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Disable the result cache.
    #[arg(long = "no-cache", global = true)]
    pub no_cache: bool,
    /// Read the input element or word from a JSON file.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Write the document to a file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Gelfand–Tsetlin patterns.
    #[command(subcommand)]
    Gt(GtCmd),
    /// Branching rules.
    #[command(subcommand)]
    Branch(BranchCmd),
    /// Weights of the q-Schur algebra.
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// The KLR algebra: normal forms, degrees and factorizations.
    #[command(subcommand)]
    Klr(KlrCmd),
    /// Cyclotomic quotients R^λ.
    #[command(subcommand)]
    Cyc(CycCmd),
    /// The quantum-group module oracle.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Test suites.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand, Debug, Clone)]
pub enum GtCmd {
    /// All Gelfand–Tsetlin patterns with top row λ.
    Enum,
    /// The nested idempotent e(s) of every pattern.
    Idem,
}

#[derive(Subcommand, Debug, Clone)]
pub enum BranchCmd {
    /// Compares the restricted character of V_λ with the sum over τ(λ).
    Check,
}

#[derive(Subcommand, Debug, Clone)]
pub enum WeightsCmd {
    /// Weights of degree d with a given number of entries.
    Schur {
        /// Number of entries of each weight.
        #[arg(long)]
        parts: usize,
        /// Total degree.
        #[arg(long)]
        degree: u32,
        /// Only dominant weights (partitions).
        #[arg(long)]
        dominant: bool,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum KlrCmd {
    /// Normal form of a word or element.
    Nf(WordArgs),
    /// Degree of a word or homogeneous element.
    Degree(WordArgs),
    /// Factorization of 1_seq through special idempotents.
    Factor {
        /// Number of strands labelled n to factor through (default: all).
        #[arg(long)]
        k: Option<usize>,
    },
}

/// A word given by generators on top of `--seq`.
#[derive(Args, Debug, Clone)]
pub struct WordArgs {
    /// Generators read bottom to top, e.g. `x1,s2` (x = dot, s = crossing).
    #[arg(long, default_value = "")]
    pub ops: String,
}

#[derive(Subcommand, Debug, Clone)]
pub enum CycCmd {
    /// Canonical representative modulo the cyclotomic ideal.
    Reduce(WordArgs),
    /// Graded dimension of 1_{seq2} R^λ 1_{seq}.
    Gdim(PairArgs),
    /// Graded dimensions against the q-Shapovalov form.
    Compare {
        #[command(flatten)]
        pair: PairArgs,
        /// Compare a whole weight space instead of one pair.
        #[arg(long, value_delimiter = ',')]
        beta: Option<Vec<u32>>,
    },
    /// The sl2 base case: λ̄+1 strands vanish, λ̄ strands do not.
    #[command(name = "sl2-vanish")]
    Sl2Vanish,
    /// Region-weight vanishing for one idempotent, or all up to a size.
    #[command(name = "weyl-vanish")]
    WeylVanish {
        /// Without --seq, check every idempotent with at most this many
        /// strands.
        #[arg(long, default_value_t = 3)]
        max_size: u32,
    },
    /// Orthogonality of Gelfand–Tsetlin idempotents.
    #[command(name = "gt-ortho")]
    GtOrtho,
}

/// A pair of idempotents.
#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// The top idempotent (default: --seq).
    #[arg(long, allow_hyphen_values = true)]
    pub seq2: Option<String>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum OracleCmd {
    /// The q-Shapovalov Gram matrix on a weight space.
    Gram {
        /// The weight space, as root multiplicities.
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<u32>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum SuiteCmd {
    /// The acceptance criteria; PASS/FAIL lines go to standard error.
    Acceptance {
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

fn parse_partition(text: &str) -> Result<Partition, String> {
    Partition::parse(text).map_err(|e| e.to_string())
}

/// A computed document with its verdicts.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub doc: Value,
    /// The command's check passed (always true for pure computations).
    pub ok: bool,
    /// Every computed quantity has exact status.
    pub exact: bool,
}

impl Outcome {
    fn value(doc: impl Serialize) -> Result<Self, CliError> {
        Ok(Self {
            doc: serde_json::to_value(doc).map_err(|e| CliError::Failure(e.to_string()))?,
            ok: true,
            exact: true,
        })
    }

    fn check(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }

    fn exact(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }
}

fn partition(c: &Common) -> Result<&Partition, CliError> {
    c.partition.as_ref().ok_or_else(|| usage("--partition is required"))
}

fn rank(c: &Common) -> Result<usize, CliError> {
    match (c.rank, &c.partition) {
        (Some(r), _) => Ok(r),
        (None, Some(p)) if !p.is_empty() => Ok(p.len() - 1),
        _ => Err(usage("--rank or --partition is required")),
    }
}

fn context(c: &Common) -> Result<CycContext, CliError> {
    let ctx = make_context(partition(c)?, c.deg_cap, c.dot_cap).map_err(cyc_err)?;
    if let Some(r) = c.rank {
        if r != ctx.rank() {
            return Err(usage(format!("--rank {r} does not match the partition (rank {})", ctx.rank())));
        }
    }
    Ok(ctx)
}

fn sequence(c: &Common, rank: usize) -> Result<StrandSeq, CliError> {
    let text = c.seq.as_deref().ok_or_else(|| usage("--seq is required"))?;
    StrandSeq::parse(rank, text).map_err(usage)
}

/// The input element: `--in FILE` (an element or a word as JSON, carrying
/// its own rank), or `--seq` with `--ops` in rank `rank` (default: from
/// --rank or --partition).
fn element(c: &Common, w: &WordArgs, rank: Option<usize>) -> Result<KlrElement, CliError> {
    if let Some(path) = &c.input {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        if let Ok(x) = serde_json::from_str::<KlrElement>(&text) {
            return Ok(x);
        }
        let word: KlrWord = serde_json::from_str(&text)
            .map_err(|e| usage(format!("{}: neither an element nor a word: {e}", path.display())))?;
        word.validate().map_err(usage)?;
        return Ok(KlrElement::from_word(word));
    }
    let rank = match rank {
        Some(r) => r,
        None => self::rank(c)?,
    };
    let seq = sequence(c, rank)?;
    Ok(KlrElement::from_word(make_word(&seq, parse_ops(&w.ops).map_err(usage)?).map_err(usage)?))
}

fn element_doc(x: &KlrElement) -> Value {
    json!({ "element": x, "text": x.to_string() })
}

/// A stable cache key for the expensive commands, or `None` if the
/// command is not cached.
pub fn cache_key(cmd: &Command, c: &Common) -> Result<Option<String>, CliError> {
    let (name, extra) = match cmd {
        Command::Cyc(CycCmd::Gdim(p)) => ("cyc gdim", json!({ "seq2": p.seq2 })),
        Command::Cyc(CycCmd::Compare { pair, beta }) => ("cyc compare", json!({ "seq2": pair.seq2, "beta": beta })),
        Command::Cyc(CycCmd::GtOrtho) => ("cyc gt-ortho", Value::Null),
        Command::Oracle(OracleCmd::Gram { beta }) => ("oracle gram", json!({ "beta": beta })),
        _ => return Ok(None),
    };
    let lambda = partition(c)?;
    let caps = match cmd {
        Command::Oracle(_) => Value::Null,
        _ => {
            let ctx = context(c)?;
            json!([ctx.degree_cap, ctx.dot_cap])
        }
    };
    let key = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "lambda": lambda,
        "seq": c.seq,
        "caps": caps,
        "extra": extra,
    });
    Ok(Some(key.to_string()))
}

/// Runs `cmd`.
pub fn execute(cmd: &Command, c: &Common) -> Result<Outcome, CliError> {
    match cmd {
        Command::Gt(GtCmd::Enum) => Outcome::value(enumerate_gt_patterns(partition(c)?)),
        Command::Gt(GtCmd::Idem) => {
            let mut out = Vec::new();
            for s in enumerate_gt_patterns(partition(c)?) {
                let e = gt_idempotent(&s).map_err(cyc_err)?;
                out.push(json!({ "pattern": s, "sequence": e.sequence.labels }));
            }
            Outcome::value(out)
        }
        Command::Branch(BranchCmd::Check) => {
            let r = branching_character_check(partition(c)?).map_err(usage)?;
            let ok = r.ok;
            Ok(Outcome::value(r)?.check(ok))
        }
        Command::Weights(WeightsCmd::Schur { parts, degree, dominant }) => {
            let ws: Vec<Vec<i64>> = schur_weights(*parts, *degree, *dominant).into_iter().map(|w| w.0).collect();
            Outcome::value(ws)
        }
        Command::Klr(KlrCmd::Nf(w)) => {
            let x = element(c, w, None)?;
            Outcome::value(element_doc(&normal_form(&x)))
        }
        Command::Klr(KlrCmd::Degree(w)) => {
            let x = element(c, w, None)?;
            let d = if x.len() == 1 {
                x.terms().next().map(|(word, _)| degree(word))
            } else {
                normal_form(&x).degree()
            };
            Outcome::value(json!({ "degree": d }))
        }
        Command::Klr(KlrCmd::Factor { k }) => {
            let r = rank(c)?;
            let seq = sequence(c, r)?;
            let k = k.unwrap_or_else(|| seq.count(r as u8));
            let terms = factor_general(&seq, k).map_err(usage)?;
            let ok = reconstruct(&mut Rewriter::new(), r, &terms) == KlrElement::idempotent(&seq);
            Ok(Outcome::value(json!({ "seq": seq.labels, "k": k, "terms": terms, "reconstructs": ok }))?.check(ok))
        }
        Command::Cyc(cmd) => execute_cyc(cmd, c),
        Command::Oracle(OracleCmd::Gram { beta }) => {
            let lb = weight_of_partition(partition(c)?).map_err(usage)?;
            let g = shapovalov_gram(&lb, beta).map_err(usage)?;
            let symmetric = g.is_symmetric();
            Ok(Outcome::value(g.to_json_value())?.check(symmetric))
        }
        Command::Suite(SuiteCmd::Acceptance { criterion }) => {
            let report = match criterion {
                Some(id) => {
                    let r = acceptance::run_criterion(*id)
                        .ok_or_else(|| usage(format!("no criterion {id} (1..={})", acceptance::CRITERIA)))?;
                    let pass = r.pass;
                    acceptance::AcceptanceReport { criteria: vec![r], pass }
                }
                None => acceptance::run_all(),
            };
            for line in &report.criteria {
                eprintln!("{}", line.line());
            }
            let pass = report.pass;
            Ok(Outcome::value(report)?.check(pass))
        }
    }
}

fn execute_cyc(cmd: &CycCmd, c: &Common) -> Result<Outcome, CliError> {
    let ctx = context(c)?;
    let rank = ctx.rank();
    let pair = |p: &PairArgs| -> Result<(StrandSeq, StrandSeq), CliError> {
        let e = sequence(c, rank)?;
        let e2 = match &p.seq2 {
            Some(t) => StrandSeq::parse(rank, t).map_err(usage)?,
            None => e.clone(),
        };
        Ok((e, e2))
    };
    match cmd {
        CycCmd::Reduce(w) => {
            let x = element(c, w, Some(rank))?;
            let (r, status) = cyc_reduce(&x, &ctx).map_err(cyc_err)?;
            let mut doc = element_doc(&r);
            doc["status"] = json!(status);
            Ok(Outcome::value(doc)?.exact(status.is_exact()))
        }
        CycCmd::Gdim(p) => {
            let (e, e2) = pair(p)?;
            let (g, status) = gdim_hom(&e, &e2, &ctx).map_err(cyc_err)?;
            let doc = json!({ "left": e.labels, "right": e2.labels, "gdim": g, "status": status });
            Ok(Outcome::value(doc)?.exact(status.is_exact()))
        }
        CycCmd::Compare { pair: p, beta } => {
            if let Some(beta) = beta {
                if beta.len() != rank {
                    return Err(usage(format!("--beta needs {rank} entries")));
                }
                let r = compare_weight_space(beta, &ctx).map_err(cyc_err)?;
                let (ok, exact) = (r.ok, r.status.is_exact());
                return Ok(Outcome::value(r)?.check(ok).exact(exact));
            }
            let (e, e2) = pair(p)?;
            let r = compare_pair(&e, &e2, &ctx).map_err(cyc_err)?;
            let (ok, exact) = (r.ok, r.status.is_exact());
            Ok(Outcome::value(r)?.check(ok).exact(exact))
        }
        CycCmd::Sl2Vanish => {
            if rank != 1 {
                return Err(usage("sl2-vanish needs a partition with two parts"));
            }
            let l = ctx.lambda_bar.0[0] as usize;
            let above = KlrElement::idempotent(&StrandSeq::new(1, vec![1; l + 1]).map_err(usage)?);
            let below = KlrElement::idempotent(&StrandSeq::new(1, vec![1; l]).map_err(usage)?);
            let (ra, sa) = cyc_reduce(&above, &ctx).map_err(cyc_err)?;
            let (rb, sb) = cyc_reduce(&below, &ctx).map_err(cyc_err)?;
            let status = sa.and(sb);
            let (vanishes, below_nonzero) = (ra.is_zero(), !rb.is_zero());
            let doc = json!({
                "lambda_bar": l,
                "vanishes": vanishes,
                "below_nonzero": below_nonzero,
                "status": status,
                "ok": vanishes && below_nonzero,
            });
            Ok(Outcome::value(doc)?.check(vanishes && below_nonzero).exact(status.is_exact()))
        }
        CycCmd::WeylVanish { max_size } => {
            if c.seq.is_some() {
                let r = weyl_vanishing_check(&sequence(c, rank)?, &ctx).map_err(cyc_err)?;
                let (ok, exact) = (r.holds, r.status.is_exact());
                return Ok(Outcome::value(r)?.check(ok).exact(exact));
            }
            let mut reports = Vec::new();
            for size in 0..=*max_size {
                for beta in compositions(rank, size) {
                    for labels in seq_of(&beta) {
                        let seq = StrandSeq::new(rank, labels).map_err(usage)?;
                        reports.push(weyl_vanishing_check(&seq, &ctx).map_err(cyc_err)?);
                    }
                }
            }
            let ok = reports.iter().all(|r| r.holds);
            let exact = reports.iter().all(|r| r.status.is_exact());
            Ok(Outcome::value(json!({ "ok": ok, "reports": reports }))?.check(ok).exact(exact))
        }
        CycCmd::GtOrtho => {
            let r = gt_orthogonality_check(&ctx).map_err(cyc_err)?;
            let (ok, exact) = (r.ok, r.status.is_exact());
            Ok(Outcome::value(r)?.check(ok).exact(exact))
        }
    }
}

/// All `β ∈ ℕ^rank` with `|β| = size`.
fn compositions(rank: usize, size: u32) -> Vec<Vec<u32>> {
    if rank == 0 {
        return if size == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    (0..=size)
        .flat_map(|first| {
            compositions(rank - 1, size - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(2, 3).len(), 4);
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
    }
}
