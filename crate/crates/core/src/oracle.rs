//! Bounded evidence for the ordinal-grammar hypothesis, and rank-function
//! cross-checks used by tests.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::components::compute_components;
use crate::error::Result;
use crate::grammar::{Grammar, SForm, Symbol};
use crate::normalize::{to_normal_form, Normalized};
use crate::ordinal::Ordinal;
use crate::words::{strictly_below, Letter, UpWord, Word};

/// Default cap on the number of words held during enumeration.
pub const ENUMERATION_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    PrefixViolation {
        nonterminal: String,
        shorter: String,
        longer: String,
    },
    /// Words `p·q^k·s` for `k = 0..4`, each below the previous one.
    DescendingChain {
        nonterminal: String,
        chain: Vec<String>,
    },
    NotBelowPeriod {
        nonterminal: String,
        word: String,
        period: String,
    },
    NormalizationFailed {
        class: String,
        message: String,
    },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &str| {
            if w.is_empty() {
                "ε".to_string()
            } else {
                w.to_string()
            }
        };
        match self {
            Finding::PrefixViolation {
                nonterminal,
                shorter,
                longer,
            } => write!(
                f,
                "prefix violation in {nonterminal}: {} <_p {}",
                show(shorter),
                show(longer)
            ),
            Finding::DescendingChain { nonterminal, chain } => {
                let chain: Vec<String> = chain.iter().map(|w| show(w)).collect();
                write!(
                    f,
                    "descending chain in {nonterminal}: {}",
                    chain.join(" > ")
                )
            }
            Finding::NotBelowPeriod {
                nonterminal,
                word,
                period,
            } => write!(
                f,
                "{nonterminal}: {} is not strictly below ({period})^w",
                show(word)
            ),
            Finding::NormalizationFailed { class, message } => {
                write!(f, "normalization failed: {class}: {message}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub findings: Vec<Finding>,
    /// Number of words when the language is finite.
    pub finite_count: Option<usize>,
    pub max_len: usize,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Checks the bounded enumeration of every nonterminal for prefix
/// violations and pumped descending chains, and every recursive nonterminal
/// of the normal form for words not strictly below `u_X^ω`.
pub fn validate(g: &Grammar, max_len: usize, budget: usize) -> Result<Report> {
    let alphabet = g.alphabet();
    let langs = g.bounded_languages(max_len, budget)?;
    let mut findings = Vec::new();
    for x in g.nonterminals() {
        let words = &langs[x.index()];
        let name = g.name(x).to_string();
        if let Some((a, b)) = prefix_violation(words) {
            findings.push(Finding::PrefixViolation {
                nonterminal: name.clone(),
                shorter: alphabet.render(a),
                longer: alphabet.render(b),
            });
        }
        if let Some(chain) = descending_chain(words, max_len) {
            findings.push(Finding::DescendingChain {
                nonterminal: name,
                chain: chain.iter().map(|w| alphabet.render(w)).collect(),
            });
        }
    }

    let mut finite_count = None;
    match to_normal_form(g, budget) {
        Err(e) => findings.push(Finding::NormalizationFailed {
            class: e.class().to_string(),
            message: e.to_string(),
        }),
        Ok(Normalized::Empty) => finite_count = Some(0),
        Ok(Normalized::Finite(ws)) => finite_count = Some(ws.len()),
        Ok(Normalized::Grammar(ng)) => match compute_components(&ng) {
            Err(e) => findings.push(Finding::NormalizationFailed {
                class: e.class().to_string(),
                message: e.to_string(),
            }),
            Ok(t) => {
                let nlangs = ng.bounded_languages(max_len, budget)?;
                for x in ng.nonterminals() {
                    let Some(u) = t.u(x) else { continue };
                    let period = UpWord::periodic(Vec::new(), u.clone());
                    if let Some(w) = by_length(&nlangs[x.index()])
                        .into_iter()
                        .find(|w| !strictly_below(w, &period))
                    {
                        findings.push(Finding::NotBelowPeriod {
                            nonterminal: ng.name(x).to_string(),
                            word: ng.alphabet().render(w),
                            period: ng.alphabet().render(u),
                        });
                    }
                }
            }
        },
    }
    Ok(Report {
        findings,
        finite_count,
        max_len,
    })
}

/// In sorted order every extension of a word follows it with only further
/// extensions in between, so checking neighbours suffices.
fn prefix_violation(words: &BTreeSet<Word>) -> Option<(&Word, &Word)> {
    let list: Vec<&Word> = words.iter().collect();
    list.windows(2)
        .find(|p| p[1].starts_with(p[0]))
        .map(|p| (p[0], p[1]))
}

/// Shortest words first, so that reported witnesses are small.
fn by_length(words: &BTreeSet<Word>) -> Vec<&Word> {
    let mut v: Vec<&Word> = words.iter().collect();
    v.sort_by_key(|w| w.len());
    v
}

fn descending_chain(words: &BTreeSet<Word>, max_len: usize) -> Option<Vec<Word>> {
    const LEN: usize = 4;
    let sorted = by_length(words);
    for &w0 in &sorted {
        let room = max_len.saturating_sub(w0.len()) / (LEN - 1);
        for &w1 in &sorted {
            let extra = w1.len().saturating_sub(w0.len());
            if extra == 0 || extra > room || w1 >= w0 {
                continue;
            }
            for i in 0..=w0.len() {
                let (p, s) = w0.split_at(i);
                if !w1.starts_with(p) || !w1.ends_with(s) {
                    continue;
                }
                let q = &w1[i..i + extra];
                let chain: Vec<Word> = (0..LEN)
                    .map(|k| {
                        let mut w = p.to_vec();
                        for _ in 0..k {
                            w.extend_from_slice(q);
                        }
                        w.extend_from_slice(s);
                        w
                    })
                    .collect();
                if chain.iter().all(|w| words.contains(w)) && chain.windows(2).all(|c| c[0] > c[1])
                {
                    return Some(chain);
                }
            }
        }
    }
    None
}

/// True iff, over the bounded enumeration of `L(G)`, lexicographic order
/// agrees with the order of ranks and every rank is below `claimed`.
pub fn rank_check(
    g: &Grammar,
    claimed: &Ordinal,
    rank: impl Fn(&[Letter]) -> Ordinal,
    max_len: usize,
    budget: usize,
) -> Result<bool> {
    let words = g.lex_enumerate([&SForm(vec![Symbol::N(g.start())])], max_len, budget)?;
    let ranks: Vec<Ordinal> = words.iter().map(|w| rank(w)).collect();
    Ok(ranks.windows(2).all(|r| r[0] < r[1]) && ranks.iter().all(|r| r < claimed))
}

/// Number of letters before each occurrence of `sep`, counted from the
/// previous one. `a^n b a^m b` with `sep = b` gives `[n, m]`.
pub fn block_lengths(w: &[Letter], sep: Letter) -> Vec<u64> {
    let mut out = Vec::new();
    let mut run = 0u64;
    for &l in w {
        if l == sep {
            out.push(run);
            run = 0;
        } else {
            run += 1;
        }
    }
    out
}
