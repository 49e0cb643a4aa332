//! Table-driven finite-alphabet symmetric decoders and their exact density
//! evolution.
//!
//! A tabular rule carries a small signed-weight alphabet (two-bit rules use
//! weights {-2, -1, +1, +2}), a binary check-node table that is folded over
//! the d_c - 1 inputs, and a variable-node rule expressed over the
//! channel-relative agreement score
//!
//! `u = channel_weight + sign(channel) * sum(weights of incoming messages)`.
//!
//! Writing the variable-node output in the channel frame makes the rule
//! symmetric by construction; the check-node table is explicitly validated
//! for sign equivariance in each argument, and tables failing the check are
//! rejected at load time.
//!
//! Density evolution for these rules tracks the full message distribution:
//! the check law is a (d_c - 1)-fold convolution through the table, the
//! variable law an exact integer convolution of message weights combined
//! with the channel value.

use crate::error::{Error, Result};
use std::path::Path;

use super::DeTrajectory;

/// Inclusive integer interval with unbounded sentinels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UBand {
    /// Lower edge; `i64::MIN` means unbounded below.
    pub lo: i64,
    /// Upper edge; `i64::MAX` means unbounded above.
    pub hi: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct VnRow {
    band: UBand,
    /// Output symbol in the channel-positive frame.
    out: usize,
}

/// A finite-alphabet symmetric message-passing rule.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularRule {
    names: Vec<String>,
    weights: Vec<i32>,
    neg: Vec<usize>,
    /// Row-major `a x a` check-node update table.
    cn_table: Vec<usize>,
    vn_rows: Vec<VnRow>,
    channel_weight: i32,
    init_symbol: usize,
}

impl TabularRule {
    pub fn alphabet_size(&self) -> usize {
        self.names.len()
    }

    pub fn symbol_name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weight(&self, idx: usize) -> i32 {
        self.weights[idx]
    }

    pub fn negate(&self, idx: usize) -> usize {
        self.neg[idx]
    }

    /// Check-node binary update.
    pub fn cn_apply(&self, x: usize, y: usize) -> usize {
        self.cn_table[x * self.alphabet_size() + y]
    }

    /// Left fold of the check-node table over a message sequence.
    pub fn cn_fold(&self, msgs: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut it = msgs.into_iter();
        let first = it.next()?;
        Some(it.fold(first, |acc, m| self.cn_apply(acc, m)))
    }

    /// Variable-node output in the channel-positive frame for agreement
    /// score `u`.
    pub fn vn_output_rel(&self, u: i64) -> usize {
        self.vn_rows
            .iter()
            .find(|r| r.band.lo <= u && u <= r.band.hi)
            .expect("vn rows cover the integers")
            .out
    }

    /// Variable-node update in absolute terms: `channel_sign` is the sign
    /// of the received channel value, `incoming` the absolute incoming
    /// symbols.
    pub fn vn_apply(&self, channel_sign: i8, incoming: &[usize]) -> usize {
        let t: i64 = incoming.iter().map(|&m| self.weights[m] as i64).sum();
        let u = self.channel_weight as i64 + channel_sign as i64 * t;
        let rel = self.vn_output_rel(u);
        if channel_sign >= 0 {
            rel
        } else {
            self.neg[rel]
        }
    }

    /// Symbol emitted before the first iteration for a channel bit that was
    /// received correctly (its negation for a flipped bit).
    pub fn initial_symbol(&self, correct: bool) -> usize {
        if correct {
            self.init_symbol
        } else {
            self.neg[self.init_symbol]
        }
    }

    /// Message distribution before the first iteration on a BSC(p0).
    pub fn initial_dist(&self, p0: f64) -> Vec<f64> {
        let mut dist = vec![0.0; self.alphabet_size()];
        dist[self.init_symbol] = 1.0 - p0;
        dist[self.neg[self.init_symbol]] += p0;
        dist
    }

    /// Probability mass on negative-weight (erroneous) symbols.
    pub fn error_mass(&self, dist: &[f64]) -> f64 {
        dist.iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w < 0)
            .map(|(p, _)| p)
            .sum()
    }

    /// Two-valued encoding of the Gallager-A rule: weights {+1, -1},
    /// sign-product check table, flip exactly when all d_v - 1 incoming
    /// messages disagree with the channel value.
    pub fn gallager_a_encoding(d_v: u32) -> TabularRule {
        let k = (d_v - 1) as i64;
        TabularRule {
            names: vec!["+".into(), "-".into()],
            weights: vec![1, -1],
            neg: vec![1, 0],
            cn_table: vec![0, 1, 1, 0],
            vn_rows: vec![
                VnRow {
                    band: UBand {
                        lo: i64::MIN,
                        hi: -k,
                    },
                    out: 1,
                },
                VnRow {
                    band: UBand {
                        lo: -k + 1,
                        hi: i64::MAX,
                    },
                    out: 0,
                },
            ],
            channel_weight: 0,
            init_symbol: 0,
        }
    }

    pub fn from_file(path: &Path) -> Result<TabularRule> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            Error::Parse { line, message, .. } => Error::Parse {
                path: path.to_path_buf(),
                line,
                message,
            },
            other => other,
        })
    }

    /// Parses the structured-text rule format:
    ///
    /// ```text
    /// symbol <name> <weight>     # one per alphabet entry
    /// init <name>
    /// channel_weight <integer>
    /// cn <x> <y> <out>           # one per (x, y) pair
    /// vn <lo|-inf> <hi|inf> <out>
    /// ```
    pub fn parse(text: &str) -> Result<TabularRule> {
        let mut names: Vec<String> = Vec::new();
        let mut weights: Vec<i32> = Vec::new();
        let mut init: Option<String> = None;
        let mut channel_weight: Option<i32> = None;
        let mut cn_entries: Vec<(String, String, String, usize)> = Vec::new();
        let mut vn_entries: Vec<(i64, i64, String, usize)> = Vec::new();

        let perr = |line: usize, message: String| Error::Parse {
            path: "<inline>".into(),
            line,
            message,
        };

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            match tok[0] {
                "symbol" if tok.len() == 3 => {
                    let w: i32 = tok[2]
                        .parse()
                        .map_err(|_| perr(line_no, format!("bad weight {:?}", tok[2])))?;
                    names.push(tok[1].to_string());
                    weights.push(w);
                }
                "init" if tok.len() == 2 => init = Some(tok[1].to_string()),
                "channel_weight" if tok.len() == 2 => {
                    channel_weight = Some(
                        tok[1]
                            .parse()
                            .map_err(|_| perr(line_no, format!("bad channel weight {:?}", tok[1])))?,
                    )
                }
                "cn" if tok.len() == 4 => cn_entries.push((
                    tok[1].to_string(),
                    tok[2].to_string(),
                    tok[3].to_string(),
                    line_no,
                )),
                "vn" if tok.len() == 4 => {
                    let parse_edge = |s: &str, unbounded: i64| -> Result<i64> {
                        match s {
                            "-inf" | "inf" | "+inf" => Ok(unbounded),
                            _ => s
                                .parse()
                                .map_err(|_| perr(line_no, format!("bad band edge {s:?}"))),
                        }
                    };
                    let lo = parse_edge(tok[1], i64::MIN)?;
                    let hi = parse_edge(tok[2], i64::MAX)?;
                    vn_entries.push((lo, hi, tok[3].to_string(), line_no));
                }
                other => {
                    return Err(perr(line_no, format!("unrecognized directive {other:?}")));
                }
            }
        }

        let a = names.len();
        if a < 2 {
            return Err(perr(0, "alphabet needs at least two symbols".into()));
        }
        for (i, w) in weights.iter().enumerate() {
            if *w == 0 {
                return Err(perr(0, format!("symbol {} has zero weight", names[i])));
            }
        }
        for i in 0..a {
            for j in (i + 1)..a {
                if weights[i] == weights[j] {
                    return Err(perr(0, format!("duplicate weight {}", weights[i])));
                }
                if names[i] == names[j] {
                    return Err(perr(0, format!("duplicate symbol name {}", names[i])));
                }
            }
        }
        // Negation involution through weights.
        let mut neg = vec![usize::MAX; a];
        for i in 0..a {
            match weights.iter().position(|w| *w == -weights[i]) {
                Some(j) => neg[i] = j,
                None => {
                    return Err(perr(
                        0,
                        format!("alphabet not closed under negation: no partner for {}", names[i]),
                    ))
                }
            }
        }

        let lookup = |name: &str, line: usize| -> Result<usize> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| perr(line, format!("unknown symbol {name:?}")))
        };

        let mut cn_table = vec![usize::MAX; a * a];
        for (x, y, out, line) in &cn_entries {
            let (xi, yi, oi) = (lookup(x, *line)?, lookup(y, *line)?, lookup(out, *line)?);
            if cn_table[xi * a + yi] != usize::MAX {
                return Err(perr(*line, format!("duplicate cn entry for ({x}, {y})")));
            }
            cn_table[xi * a + yi] = oi;
        }
        if let Some(pos) = cn_table.iter().position(|&e| e == usize::MAX) {
            return Err(perr(
                0,
                format!(
                    "cn table incomplete: missing ({}, {})",
                    names[pos / a],
                    names[pos % a]
                ),
            ));
        }

        // Symmetry: negating either argument negates the output.
        for x in 0..a {
            for y in 0..a {
                let out = cn_table[x * a + y];
                if cn_table[neg[x] * a + y] != neg[out] || cn_table[x * a + neg[y]] != neg[out] {
                    return Err(perr(
                        0,
                        format!(
                            "cn table not sign-symmetric at ({}, {})",
                            names[x], names[y]
                        ),
                    ));
                }
            }
        }

        let init_name = init.ok_or_else(|| perr(0, "missing init directive".into()))?;
        let init_symbol = lookup(&init_name, 0)?;
        let channel_weight =
            channel_weight.ok_or_else(|| perr(0, "missing channel_weight directive".into()))?;
        if channel_weight < 0 {
            return Err(perr(0, "channel_weight must be nonnegative".into()));
        }

        let mut vn_rows: Vec<VnRow> = Vec::new();
        for (lo, hi, out, line) in &vn_entries {
            if lo > hi {
                return Err(perr(*line, format!("empty vn band [{lo}, {hi}]")));
            }
            vn_rows.push(VnRow {
                band: UBand { lo: *lo, hi: *hi },
                out: lookup(out, *line)?,
            });
        }
        if vn_rows.is_empty() {
            return Err(perr(0, "missing vn rows".into()));
        }
        vn_rows.sort_by_key(|r| r.band.lo);
        if vn_rows[0].band.lo != i64::MIN || vn_rows.last().unwrap().band.hi != i64::MAX {
            return Err(perr(0, "vn rows must cover all agreement scores".into()));
        }
        for w in vn_rows.windows(2) {
            if w[0].band.hi.checked_add(1) != Some(w[1].band.lo) {
                return Err(perr(
                    0,
                    format!(
                        "vn rows must tile contiguously; gap or overlap after [{}, {}]",
                        w[0].band.lo, w[0].band.hi
                    ),
                ));
            }
        }

        Ok(TabularRule {
            names,
            weights,
            neg,
            cn_table,
            vn_rows,
            channel_weight,
            init_symbol,
        })
    }

    /// Distribution of the check-node output for `arity` iid inputs drawn
    /// from `dist`, by repeated convolution through the table.
    fn cn_fold_law(&self, dist: &[f64], arity: u32) -> Vec<f64> {
        let a = self.alphabet_size();
        let mut acc = dist.to_vec();
        for _ in 1..arity {
            let mut next = vec![0.0; a];
            for x in 0..a {
                if acc[x] == 0.0 {
                    continue;
                }
                for y in 0..a {
                    next[self.cn_table[x * a + y]] += acc[x] * dist[y];
                }
            }
            acc = next;
        }
        acc
    }

    /// Law of the summed message weight for `count` iid symbols from
    /// `dist`, as (offset, probabilities) over a contiguous integer range.
    fn weight_sum_law(&self, dist: &[f64], count: u32) -> (i64, Vec<f64>) {
        let w_max = self.weights.iter().map(|w| w.abs() as i64).max().unwrap();
        let span = w_max * count as i64;
        let len = (2 * span + 1) as usize;
        let mut acc = vec![0.0; len];
        acc[span as usize] = 1.0; // zero symbols summed
        for _ in 0..count {
            let mut next = vec![0.0; len];
            for (t, &p) in acc.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for (s, &ps) in dist.iter().enumerate() {
                    if ps == 0.0 {
                        continue;
                    }
                    let nt = t as i64 + self.weights[s] as i64;
                    next[nt as usize] += p * ps;
                }
            }
            acc = next;
        }
        (-span, acc)
    }
}

/// One exact density-evolution step for a tabular rule: check-node law by
/// (d_c - 1)-fold convolution under the table, then the variable-node law
/// from the (d_v - 1)-fold weight sum combined with the channel value.
pub fn tabular_de_step(
    dist: &[f64],
    p0: f64,
    rule: &TabularRule,
    d_v: u32,
    d_c: u32,
) -> Result<Vec<f64>> {
    let a = rule.alphabet_size();
    if dist.len() != a {
        return Err(Error::domain(format!(
            "distribution has {} entries for an alphabet of {a}",
            dist.len()
        )));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > 1e-9 || dist.iter().any(|p| *p < -1e-15) {
        return Err(Error::domain(format!(
            "message distribution must be a probability vector (sum {total})"
        )));
    }
    if !(0.0..=0.5).contains(&p0) {
        return Err(Error::domain(format!("p0 must lie in [0, 0.5], got {p0}")));
    }
    if d_v < 2 || d_c <= d_v {
        return Err(Error::domain(format!(
            "need d_c > d_v >= 2, got d_v = {d_v}, d_c = {d_c}"
        )));
    }

    let cn_law = rule.cn_fold_law(dist, d_c - 1);
    let (offset, sum_law) = rule.weight_sum_law(&cn_law, d_v - 1);

    let mut out = vec![0.0; a];
    for (i, &pt) in sum_law.iter().enumerate() {
        if pt == 0.0 {
            continue;
        }
        let t = offset + i as i64;
        // Channel received correctly (sign +1).
        let rel_plus = rule.vn_output_rel(rule.channel_weight as i64 + t);
        out[rel_plus] += (1.0 - p0) * pt;
        // Channel flipped (sign -1): score negates, output is the negated
        // relative symbol.
        let rel_minus = rule.vn_output_rel(rule.channel_weight as i64 - t);
        out[rule.neg[rel_minus]] += p0 * pt;
    }
    // The convolutions preserve mass up to float roundoff; renormalize so
    // iterated evolution cannot drift.
    let total: f64 = out.iter().sum();
    for p in &mut out {
        *p /= total;
    }
    Ok(out)
}

/// Full distribution evolution for a tabular rule; the trajectory's scalar
/// iterates are the error masses of each per-iteration distribution.
pub fn tabular_de_run(
    rule: &TabularRule,
    p0: f64,
    d_v: u32,
    d_c: u32,
    max_iters: u32,
) -> Result<DeTrajectory> {
    let mut dist = rule.initial_dist(p0);
    let mut dists = Vec::new();
    let mut ln_iterates = Vec::new();
    let mut converged = p0 == 0.0;
    for _ in 0..max_iters {
        if converged {
            break;
        }
        dist = tabular_de_step(&dist, p0, rule, d_v, d_c)?;
        let mass = rule.error_mass(&dist);
        ln_iterates.push(mass.ln());
        dists.push(dist.clone());
        if mass < 1e-300 {
            converged = true;
        }
    }
    Ok(DeTrajectory {
        p0,
        ln_iterates,
        dists: Some(dists),
        converged,
    })
}
