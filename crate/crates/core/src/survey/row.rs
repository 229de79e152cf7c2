//! Survey rows and their CSV / JSON / Markdown renderings.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 18] = [
    "k",
    "n",
    "d",
    "s",
    "ambient_dim",
    "exp_dim_proj",
    "computed_dim_proj",
    "defect",
    "verdict",
    "prediction_source",
    "predicted_verdict",
    "predicted_delta",
    "agreement",
    "conjecture39",
    "prime",
    "seed",
    "trials",
    "elapsed_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Agreement {
    #[serde(rename = "MATCH")]
    Match,
    #[serde(rename = "BOUND-OK")]
    BoundOk,
    #[serde(rename = "MISMATCH")]
    Mismatch,
    #[serde(rename = "UNPREDICTED")]
    Unpredicted,
}

impl Agreement {
    pub fn as_str(&self) -> &'static str {
        match self {
            Agreement::Match => "MATCH",
            Agreement::BoundOk => "BOUND-OK",
            Agreement::Mismatch => "MISMATCH",
            Agreement::Unpredicted => "UNPREDICTED",
        }
    }
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const SKIPPED_BUDGET: &str = "SKIPPED-BUDGET";

/// One line of the answer table. Field order matches [`CSV_HEADER`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub s: usize,
    pub ambient_dim: usize,
    pub exp_dim_proj: usize,
    pub computed_dim_proj: Option<usize>,
    pub defect: Option<usize>,
    pub verdict: String,
    pub prediction_source: String,
    pub predicted_verdict: String,
    pub predicted_delta: String,
    pub agreement: Option<Agreement>,
    pub conjecture39: String,
    /// Primes that contributed evidence, separated by ';'.
    pub prime: String,
    pub seed: u64,
    pub trials: usize,
    pub elapsed_ms: Option<u64>,
}

impl SurveyRow {
    pub fn cell_key(&self) -> (usize, usize, usize, usize) {
        (self.k, self.n, self.d, self.s)
    }

    pub fn is_k1_edge(&self) -> bool {
        self.predicted_delta.contains("K1-EDGE")
    }

    fn fields(&self) -> [String; 18] {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.k.to_string(),
            self.n.to_string(),
            self.d.to_string(),
            self.s.to_string(),
            self.ambient_dim.to_string(),
            self.exp_dim_proj.to_string(),
            opt(self.computed_dim_proj),
            opt(self.defect),
            self.verdict.clone(),
            self.prediction_source.clone(),
            self.predicted_verdict.clone(),
            self.predicted_delta.clone(),
            self.agreement.map(|a| a.as_str().to_string()).unwrap_or_default(),
            self.conjecture39.clone(),
            self.prime.clone(),
            self.seed.to_string(),
            self.trials.to_string(),
            self.elapsed_ms.map(|v| v.to_string()).unwrap_or_default(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Markdown),
            other => Err(Error::Usage(format!("unknown format '{other}' (csv, json, md)"))),
        }
    }
}

fn io_err(e: impl fmt::Display) -> Error {
    Error::Io(e.to_string())
}

pub fn write_rows<W: Write>(rows: &[SurveyRow], format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER).map_err(io_err)?;
            for r in rows {
                w.write_record(r.fields()).map_err(io_err)?;
            }
            w.flush()?;
        }
        Format::Json => {
            writeln!(out, "[")?;
            for (i, r) in rows.iter().enumerate() {
                let sep = if i + 1 == rows.len() { "" } else { "," };
                writeln!(out, "  {}{sep}", serde_json::to_string(r).map_err(io_err)?)?;
            }
            writeln!(out, "]")?;
        }
        Format::Markdown => {
            let body: Vec<[String; 18]> = rows.iter().map(|r| r.fields()).collect();
            let mut widths: Vec<usize> = CSV_HEADER.iter().map(|h| h.len()).collect();
            for f in &body {
                for (w, v) in widths.iter_mut().zip(f) {
                    *w = (*w).max(v.len());
                }
            }
            let line = |cells: Vec<&str>| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                format!("| {} |", padded.join(" | "))
            };
            writeln!(out, "{}", line(CSV_HEADER.to_vec()))?;
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            writeln!(out, "|-{}-|", rule.join("-|-"))?;
            for f in &body {
                writeln!(out, "{}", line(f.iter().map(|s| s.as_str()).collect()))?;
            }
        }
    }
    Ok(())
}

pub fn render_rows(rows: &[SurveyRow], format: Format) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(rows, format, &mut buf)?;
    String::from_utf8(buf).map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SurveyRow {
        SurveyRow {
            k: 1,
            n: 2,
            d: 3,
            s: 2,
            ambient_dim: 9,
            exp_dim_proj: 9,
            computed_dim_proj: Some(8),
            defect: Some(1),
            verdict: "defective".into(),
            prediction_source: "CGG".into(),
            predicted_verdict: "defective".into(),
            predicted_delta: String::new(),
            agreement: Some(Agreement::Match),
            conjecture39: "CONSISTENT".into(),
            prime: "2147483647".into(),
            seed: 0,
            trials: 3,
            elapsed_ms: None,
        }
    }

    #[test]
    fn csv_header_is_exact() {
        let text = render_rows(&[], Format::Csv).unwrap();
        assert_eq!(
            text,
            "k,n,d,s,ambient_dim,exp_dim_proj,computed_dim_proj,defect,verdict,prediction_source,predicted_verdict,predicted_delta,agreement,conjecture39,prime,seed,trials,elapsed_ms\n"
        );
    }

    #[test]
    fn csv_row() {
        let text = render_rows(&[sample()], Format::Csv).unwrap();
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "1,2,3,2,9,9,8,1,defective,CGG,defective,,MATCH,CONSISTENT,2147483647,0,3,"
        );
    }

    #[test]
    fn json_uses_the_same_field_names() {
        let text = render_rows(&[sample()], Format::Json).unwrap();
        let parsed: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
        let obj = parsed[0].as_object().unwrap();
        let keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
        for h in CSV_HEADER {
            assert!(keys.contains(&h), "missing {h}");
        }
        assert_eq!(obj["agreement"], "MATCH");
        assert_eq!(render_rows(&[], Format::Json).unwrap(), "[\n]\n");
    }

    #[test]
    fn markdown_is_aligned() {
        let text = render_rows(&[sample(), sample()], Format::Markdown).unwrap();
        let widths: Vec<usize> = text.lines().map(|l| l.len()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
        assert!("xml".parse::<Format>().is_err());
    }
}
