//! Code-parameter algebra for (d_v, d_c)-regular LDPC codes.
//!
//! Design rate, the girth-limited iteration budget, blocklength bounds as a
//! function of girth and of target bit-error probability, the minimum
//! AWGN-pseudoweight upper bound, and ingestion of minimum-blocklength code
//! tables.
//!
//! Natural logarithms throughout.

use crate::error::{Error, Result};
use std::fmt;
use std::path::{Path, PathBuf};

/// Parameters of a regular LDPC code.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeParams {
    pub d_v: u32,
    pub d_c: u32,
    /// Tanner-graph girth (even, >= 4).
    pub girth: u32,
    /// Blocklength, when known (from a table row or a constructed graph).
    pub n: Option<u64>,
}

impl CodeParams {
    pub fn new(d_v: u32, d_c: u32, girth: u32, n: Option<u64>) -> Result<Self> {
        validate_degrees(d_v, d_c)?;
        validate_girth(girth)?;
        if let Some(n) = n {
            if (n * d_v as u64) % d_c as u64 != 0 {
                return Err(Error::domain(format!(
                    "n*d_v = {} not divisible by d_c = {d_c}",
                    n * d_v as u64
                )));
            }
        }
        Ok(CodeParams { d_v, d_c, girth, n })
    }

    /// Design rate `1 - d_v/d_c`, assumed equal to the code rate.
    pub fn rate(&self) -> f64 {
        design_rate(self.d_v, self.d_c).expect("degrees validated at construction")
    }

    /// Source bits per block, `n * rate`, when the blocklength is known.
    pub fn k(&self) -> Option<f64> {
        self.n.map(|n| n as f64 * self.rate())
    }
}

fn validate_degrees(d_v: u32, d_c: u32) -> Result<()> {
    if d_v < 2 || d_c <= d_v {
        return Err(Error::domain(format!(
            "need d_c > d_v >= 2, got d_v = {d_v}, d_c = {d_c}"
        )));
    }
    Ok(())
}

fn validate_girth(girth: u32) -> Result<()> {
    if girth < 4 || girth % 2 != 0 {
        return Err(Error::domain(format!(
            "girth must be an even integer >= 4, got {girth}"
        )));
    }
    Ok(())
}

/// Maximum number of decoding iterations for which all messages arriving at
/// a node are mutually independent: `floor((g - 2) / 4)` for girth `g`.
pub fn max_indep_iters(girth: u32) -> Result<u32> {
    validate_girth(girth)?;
    Ok((girth - 2) / 4)
}

/// Blocklength sandwich implied by the girth:
/// lower `((d_v-1)(d_c-1))^floor((g-2)/4)`,
/// upper `2 (d_v+d_c) d_v d_c (2 d_v d_c + 1)^(3g/4)`.
pub fn blocklength_bounds_from_girth(d_v: u32, d_c: u32, girth: u32) -> Result<(f64, f64)> {
    validate_degrees(d_v, d_c)?;
    validate_girth(girth)?;
    let iters = max_indep_iters(girth)? as i32;
    let lower = (((d_v - 1) * (d_c - 1)) as f64).powi(iters);
    let dvdc = (d_v * d_c) as f64;
    let upper = 2.0 * (d_v + d_c) as f64 * dvdc * (2.0 * dvdc + 1.0).powf(0.75 * girth as f64);
    Ok((lower, upper))
}

/// Blocklength needed by *any* iterative message-passing decoder to reach
/// bit-error probability `pe` at transmit power `p_t` on the
/// `Es/N0 = eta * P_T` channel (order-level lower bound; established for
/// `p_t >= 1/eta`).
///
/// For `d_v >= 3` the bound follows from the minimum-pseudoweight route;
/// for `d_v = 2` from the logarithmic minimum-distance of degree-2 codes.
pub fn blocklength_lower_bound_pe(d_v: u32, d_c: u32, pe: f64, p_t: f64, eta: f64) -> Result<f64> {
    validate_degrees(d_v, d_c)?;
    if !(pe > 0.0 && pe < 0.5) {
        return Err(Error::domain(format!("pe must be in (0, 0.5), got {pe}")));
    }
    if !(eta > 0.0) {
        return Err(Error::domain(format!("eta must be positive, got {eta}")));
    }
    if p_t < 1.0 / eta {
        return Err(Error::Regime(format!(
            "bound established only for p_t >= 1/eta = {}, got {p_t}",
            1.0 / eta
        )));
    }
    let one_plus_9pi = 1.0 + 9.0 * std::f64::consts::PI;
    if d_v >= 3 {
        let dv = d_v as f64;
        let ratio = (dv - 2.0) / (dv * (dv - 1.0));
        let base = ratio * ratio * (1.0 / pe).ln() / (one_plus_9pi * eta * p_t);
        let exponent = (1.0 + ((d_c - 1) as f64).ln() / ((d_v - 1) as f64).ln()) / 2.0;
        Ok(base.powf(exponent))
    } else {
        let exponent = 1.0 / (eta * p_t * one_plus_9pi * (2.0 + 2.0 / ((d_c - 1) as f64).ln()));
        Ok((1.0 / std::f64::consts::E) * (1.0 / pe).powf(exponent))
    }
}

/// Upper bound on the minimum AWGN pseudoweight of any (d_v, d_c)-regular
/// code of blocklength `n`:
/// `(d_v (d_v - 1) / (d_v - 2))^2 * n^(2 log(d_v-1) / log((d_v-1)(d_c-1)))`.
/// Requires `d_v >= 3`.
pub fn pseudoweight_upper_bound(d_v: u32, d_c: u32, n: u64) -> Result<f64> {
    validate_degrees(d_v, d_c)?;
    if d_v < 3 {
        return Err(Error::domain(
            "pseudoweight bound requires d_v >= 3".to_string(),
        ));
    }
    if n < 1 {
        return Err(Error::domain("n must be >= 1".to_string()));
    }
    let dv = d_v as f64;
    let coeff = (dv * (dv - 1.0) / (dv - 2.0)).powi(2);
    let exponent = 2.0 * (dv - 1.0).ln() / (((d_v - 1) * (d_c - 1)) as f64).ln();
    Ok(coeff * (n as f64).powf(exponent))
}

/// Design rate `1 - d_v/d_c`.
pub fn design_rate(d_v: u32, d_c: u32) -> Result<f64> {
    validate_degrees(d_v, d_c)?;
    Ok(1.0 - d_v as f64 / d_c as f64)
}

/// One row of a minimum-blocklength code table.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeRow {
    pub girth: u32,
    pub d_v: u32,
    pub d_c: u32,
    pub n_min: u64,
    /// Optional path (relative to the table file) of a Tanner-graph file
    /// realizing this row.
    pub graph_file: Option<PathBuf>,
}

impl CodeRow {
    pub fn code_params(&self) -> CodeParams {
        CodeParams {
            d_v: self.d_v,
            d_c: self.d_c,
            girth: self.girth,
            n: Some(self.n_min),
        }
    }

    pub fn label(&self) -> String {
        format!(
            "n{}-g{}-dv{}-dc{}",
            self.n_min, self.girth, self.d_v, self.d_c
        )
    }
}

/// A validated minimum-blocklength code table.
#[derive(Debug, Clone, Default)]
pub struct CodeTable {
    pub rows: Vec<CodeRow>,
    /// Non-fatal observations from loading (e.g. an empty file).
    pub warnings: Vec<String>,
    /// Directory of the source file, for resolving graph-file references.
    pub base_dir: Option<PathBuf>,
}

impl CodeTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Absolute path of a row's graph file, if any.
    pub fn graph_path(&self, row: &CodeRow) -> Option<PathBuf> {
        row.graph_file.as_ref().map(|rel| match &self.base_dir {
            Some(dir) => dir.join(rel),
            None => rel.clone(),
        })
    }
}

impl fmt::Display for CodeRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.girth, self.d_v, self.d_c, self.n_min
        )
    }
}

/// Loads a code table from delimited text with columns
/// `girth,d_v,d_c,n_min[,graph_file]`. Lines starting with `#` are comments.
///
/// Every row is checked against the girth-implied blocklength lower bound
/// and the divisibility constraint `d_c | n*d_v`; violating rows are
/// rejected with their line number.
pub fn load_code_table(path: &Path) -> Result<CodeTable> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut table = CodeTable {
        base_dir: path.parent().map(|p| p.to_path_buf()),
        ..CodeTable::default()
    };
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 4 || fields.len() > 5 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("expected 4 or 5 comma-separated fields, got {}", fields.len()),
            });
        }
        let parse_u32 = |s: &str, what: &str| -> Result<u32> {
            s.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("invalid {what}: {s:?}"),
            })
        };
        let girth = parse_u32(fields[0], "girth")?;
        let d_v = parse_u32(fields[1], "d_v")?;
        let d_c = parse_u32(fields[2], "d_c")?;
        let n_min: u64 = fields[3].parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message: format!("invalid n_min: {:?}", fields[3]),
        })?;
        let graph_file = fields.get(4).filter(|s| !s.is_empty()).map(PathBuf::from);

        let (lower, _) = blocklength_bounds_from_girth(d_v, d_c, girth).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message: e.to_string(),
        })?;
        if (n_min as f64) < lower {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: format!(
                    "n_min = {n_min} violates the girth-{girth} blocklength lower bound {lower}"
                ),
            });
        }
        if (n_min * d_v as u64) % d_c as u64 != 0 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("n_min*d_v = {} not divisible by d_c = {d_c}", n_min * d_v as u64),
            });
        }
        table.rows.push(CodeRow {
            girth,
            d_v,
            d_c,
            n_min,
            graph_file,
        });
    }
    if table.rows.is_empty() {
        table
            .warnings
            .push(format!("code table {} is empty", path.display()));
    }
    Ok(table)
}
