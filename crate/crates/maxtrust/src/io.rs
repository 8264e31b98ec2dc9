//! Text formats shared by the CLI and the fixtures.
//!
//! Matrices: a header line "n m", then n rows of m whitespace-separated
//! tokens; finite entries are decimal literals, ε is the token "eps". A
//! file without any "eps" token reads as a conventional matrix; modes that
//! need a max-plus matrix take its image with zeros mapped to ε.
//!
//! Ledgers: a line "n", then one "i j s" triple per known pair.
//!
//! Trust vectors emit as CSV with columns agent_id, value ("eps" when the
//! agent has no finite trust) and 1-based rank.

use std::fmt;

use maxtrust_core::graph::NormalForm;
use maxtrust_core::real::RealMatrix;
use maxtrust_core::tropical::{TropicalMatrix, TropicalScalar};
use maxtrust_core::trust::{InteractionLedger, TrustVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line of the offending token.
    pub line: usize,
    /// 1-based character column of the offending token.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

/// Tokens of one line with their 1-based character columns.
fn line_tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Non-empty lines with their 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, Vec<(usize, &str)>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, line_tokens(l)))
        .filter(|(_, toks)| !toks.is_empty())
        .collect()
}

fn parse_usize(line: usize, col: usize, tok: &str, what: &str) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| err(line, col, format!("expected {what}, found '{tok}'")))
}

fn parse_entry(line: usize, col: usize, tok: &str) -> Result<Option<f64>, ParseError> {
    if tok == "eps" {
        return Ok(None);
    }
    let v: f64 = tok
        .parse()
        .map_err(|_| err(line, col, format!("expected a number or 'eps', found '{tok}'")))?;
    if !v.is_finite() {
        return Err(err(line, col, "matrix entries must be finite"));
    }
    Ok(Some(v))
}

/// A matrix file as parsed: conventional when every token is numeric,
/// max-plus as soon as an "eps" token appears.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedMatrix {
    Conventional(RealMatrix),
    MaxPlus(TropicalMatrix),
}

impl ParsedMatrix {
    pub fn rows(&self) -> usize {
        match self {
            ParsedMatrix::Conventional(m) => m.rows(),
            ParsedMatrix::MaxPlus(m) => m.rows(),
        }
    }

    /// Max-plus view: image with zeros as ε for conventional input,
    /// identity for max-plus input.
    pub fn to_tropical(&self) -> TropicalMatrix {
        match self {
            ParsedMatrix::Conventional(m) => max_plus_image(m),
            ParsedMatrix::MaxPlus(m) => m.clone(),
        }
    }
}

/// Max-plus image of a conventional matrix: zero entries (absent trust)
/// become ε, everything else stays as a finite weight.
pub fn max_plus_image(m: &RealMatrix) -> TropicalMatrix {
    TropicalMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let v = m.get(i, j);
        if v == 0.0 {
            TropicalScalar::EPSILON
        } else {
            TropicalScalar::finite(v)
        }
    })
}

pub fn parse_matrix(text: &str) -> Result<ParsedMatrix, ParseError> {
    let lines = content_lines(text);
    let Some((hline, header)) = lines.first() else {
        return Err(err(1, 1, "empty input, expected a header line 'rows cols'"));
    };
    if header.len() != 2 {
        return Err(err(*hline, header[0].0, "header must be exactly 'rows cols'"));
    }
    let n = parse_usize(*hline, header[0].0, header[0].1, "a row count")?;
    let m = parse_usize(*hline, header[1].0, header[1].1, "a column count")?;
    if lines.len() != n + 1 {
        let (l, toks) = lines.last().expect("nonempty");
        return Err(err(
            *l,
            toks[0].0,
            format!("expected {n} matrix rows, found {}", lines.len() - 1),
        ));
    }
    let mut grid: Vec<Vec<Option<f64>>> = Vec::with_capacity(n);
    let mut tropical = false;
    for (lno, toks) in &lines[1..] {
        if toks.len() != m {
            return Err(err(*lno, toks[0].0, format!("expected {m} entries, found {}", toks.len())));
        }
        let mut row = Vec::with_capacity(m);
        for (col, tok) in toks {
            let entry = parse_entry(*lno, *col, tok)?;
            tropical |= entry.is_none();
            row.push(entry);
        }
        grid.push(row);
    }
    if tropical {
        let t = TropicalMatrix::from_fn(n, m, |i, j| match grid[i][j] {
            Some(v) => TropicalScalar::finite(v),
            None => TropicalScalar::EPSILON,
        });
        Ok(ParsedMatrix::MaxPlus(t))
    } else {
        let r = RealMatrix::from_fn(n, m, |i, j| grid[i][j].expect("no eps seen"));
        Ok(ParsedMatrix::Conventional(r))
    }
}

pub fn write_real_matrix(m: &RealMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_tropical_matrix(m: &TropicalMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| {
                let v = m.get(i, j);
                if v.is_epsilon() {
                    "eps".to_string()
                } else {
                    v.raw().to_string()
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_ledger(text: &str) -> Result<InteractionLedger, ParseError> {
    let lines = content_lines(text);
    let Some((hline, header)) = lines.first() else {
        return Err(err(1, 1, "empty input, expected an agent count line"));
    };
    if header.len() != 1 {
        return Err(err(*hline, header[0].0, "first line must be the agent count alone"));
    }
    let n = parse_usize(*hline, header[0].0, header[0].1, "an agent count")?;
    let mut ledger = InteractionLedger::new(n);
    for (lno, toks) in &lines[1..] {
        if toks.len() != 3 {
            return Err(err(*lno, toks[0].0, "expected a triple 'i j score'"));
        }
        let i = parse_usize(*lno, toks[0].0, toks[0].1, "an agent index")?;
        let j = parse_usize(*lno, toks[1].0, toks[1].1, "an agent index")?;
        if i >= n || j >= n {
            return Err(err(*lno, toks[0].0, format!("agent index out of range 0..{n}")));
        }
        let s: i64 = toks[2]
            .1
            .parse()
            .map_err(|_| err(*lno, toks[2].0, format!("expected an integer score, found '{}'", toks[2].1)))?;
        ledger.set_score(i, j, s);
    }
    Ok(ledger)
}

pub fn write_ledger(ledger: &InteractionLedger) -> String {
    let n = ledger.len();
    let mut out = format!("{n}\n");
    for i in 0..n {
        for j in 0..n {
            if let Some(s) = ledger.score(i, j) {
                out.push_str(&format!("{i} {j} {s}\n"));
            }
        }
    }
    out
}

pub fn trust_vector_csv(tv: &TrustVector) -> String {
    let mut rank_of = vec![0usize; tv.len()];
    for (pos, id) in tv.ranking().into_iter().enumerate() {
        rank_of[id] = pos + 1;
    }
    let mut out = String::from("agent_id,value,rank\n");
    for (id, v) in tv.values.iter().enumerate() {
        let value = match v {
            Some(x) => x.to_string(),
            None => "eps".to_string(),
        };
        out.push_str(&format!("{id},{value},{}\n", rank_of[id]));
    }
    out
}

/// Structured text for a normal form: the permutation (new index to old),
/// the block ranges, then the permuted matrix in the matrix text format.
pub fn normal_form_text(nf: &NormalForm) -> String {
    let perm: Vec<String> = nf.permutation().iter().map(|p| p.to_string()).collect();
    let blocks: Vec<String> =
        nf.blocks().iter().map(|r| format!("{}..{}", r.start, r.end)).collect();
    format!(
        "permutation {}\nblocks {}\n{}",
        perm.join(" "),
        blocks.join(" "),
        write_tropical_matrix(nf.permuted())
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventional_matrix_round_trips() {
        let m = RealMatrix::from_rows(&[vec![0.75, 0.0, 0.25], vec![0.0, 1.0, 0.0], vec![
            0.25, 0.0, 0.75,
        ]]);
        let text = write_real_matrix(&m);
        match parse_matrix(&text).unwrap() {
            ParsedMatrix::Conventional(back) => assert_eq!(back, m),
            other => panic!("expected conventional, got {other:?}"),
        }
    }

    #[test]
    fn tropical_matrix_round_trips() {
        let m = TropicalMatrix::from_rows(&[
            vec![0.1, f64::NEG_INFINITY],
            vec![0.0, 1.5e-7],
        ]);
        let text = write_tropical_matrix(&m);
        match parse_matrix(&text).unwrap() {
            ParsedMatrix::MaxPlus(back) => assert_eq!(back, m),
            other => panic!("expected max-plus, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_and_column() {
        let e = parse_matrix("2 2\n0 1\n0 x\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_matrix("2 2\n0 1 2\n0 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_matrix("2\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
    }

    #[test]
    fn zero_entries_map_to_epsilon_only_in_the_image() {
        let m = RealMatrix::from_rows(&[vec![0.0, 0.5], vec![1.0, 0.0]]);
        let img = max_plus_image(&m);
        assert!(img.get(0, 0).is_epsilon());
        assert_eq!(img.get(0, 1).raw(), 0.5);
        assert!(img.get(1, 1).is_epsilon());
    }

    #[test]
    fn ledger_round_trips() {
        let mut ledger = InteractionLedger::new(3);
        ledger.set_score(0, 1, 5);
        ledger.set_score(2, 0, -2);
        let text = write_ledger(&ledger);
        let back = parse_ledger(&text).unwrap();
        assert_eq!(back.score(0, 1), Some(5));
        assert_eq!(back.score(2, 0), Some(-2));
        assert_eq!(back.score(1, 2), None);
        assert_eq!(write_ledger(&back), text);
    }

    #[test]
    fn ledger_rejects_out_of_range_indices() {
        let e = parse_ledger("2\n0 5 1\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn trust_csv_lists_values_and_ranks() {
        let tv = TrustVector { values: vec![Some(0.25), None, Some(0.5)] };
        let csv = trust_vector_csv(&tv);
        assert_eq!(csv, "agent_id,value,rank\n0,0.25,2\n1,eps,3\n2,0.5,1\n");
    }
}
