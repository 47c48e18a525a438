use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{BaseMatrix, LiftReport, LiftedCode, ProtographError};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct EntryJson {
    row: usize,
    col: usize,
    shifts: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CodeJson {
    q: usize,
    rows: usize,
    cols: usize,
    entries: Vec<EntryJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    report: Option<LiftReport>,
}

/// Serialises a lifted code (base matrix plus shifts) to JSON.
pub fn code_to_json(code: &LiftedCode, report: Option<&LiftReport>) -> String {
    let base = code.base();
    let mut entries = Vec::new();
    for row in 0..base.rows() {
        for col in 0..base.cols() {
            if base.get(row, col) > 0 {
                entries.push(EntryJson { row, col, shifts: code.entry_shifts(row, col) });
            }
        }
    }
    let doc = CodeJson { q: code.q(), rows: base.rows(), cols: base.cols(), entries, report: report.copied() };
    serde_json::to_string_pretty(&doc).expect("serialisable")
}

pub fn code_from_json(text: &str) -> Result<(LiftedCode, Option<LiftReport>), ProtographError> {
    let doc: CodeJson = serde_json::from_str(text).map_err(|e| ProtographError::CodeFile(e.to_string()))?;
    let mut entries = vec![0u32; doc.rows * doc.cols];
    let mut shift_of = vec![Vec::new(); doc.rows * doc.cols];
    for e in &doc.entries {
        if e.row >= doc.rows || e.col >= doc.cols {
            return Err(ProtographError::CodeFile(format!("entry ({}, {}) outside matrix", e.row, e.col)));
        }
        entries[e.row * doc.cols + e.col] = e.shifts.len() as u32;
        shift_of[e.row * doc.cols + e.col] = e.shifts.clone();
    }
    let base = BaseMatrix::new(doc.rows, doc.cols, entries)?;
    let shifts = shift_of.into_iter().flatten().collect();
    Ok((LiftedCode::from_shifts(base, doc.q, shifts)?, doc.report))
}

pub fn write_code_file(path: &Path, code: &LiftedCode, report: Option<&LiftReport>) -> Result<(), ProtographError> {
    std::fs::write(path, code_to_json(code, report))?;
    Ok(())
}

pub fn read_code_file(path: &Path) -> Result<(LiftedCode, Option<LiftReport>), ProtographError> {
    code_from_json(&std::fs::read_to_string(path)?)
}

/// Writes the lifted parity-check matrix in alist format (1-based indices,
/// rows padded with zeros).
pub fn write_alist<W: Write>(code: &LiftedCode, mut out: W) -> std::io::Result<()> {
    let cn: Vec<Vec<usize>> =
        code.check_adjacency().into_iter().map(|r| r.into_iter().map(|(v, _)| v).collect()).collect();
    let mut vn = vec![Vec::new(); code.n()];
    for (c, row) in cn.iter().enumerate() {
        for &v in row {
            vn[v].push(c);
        }
    }
    let max_col = vn.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = cn.iter().map(Vec::len).max().unwrap_or(0);
    writeln!(out, "{} {}", code.n(), code.m())?;
    writeln!(out, "{max_col} {max_row}")?;
    writeln!(out, "{}", join(vn.iter().map(Vec::len)))?;
    writeln!(out, "{}", join(cn.iter().map(Vec::len)))?;
    for (lists, width) in [(&vn, max_col), (&cn, max_row)] {
        for l in lists {
            writeln!(out, "{}", join(l.iter().map(|x| x + 1).chain(std::iter::repeat_n(0, width - l.len()))))?;
        }
    }
    Ok(())
}

fn join<I: Iterator<Item = usize>>(it: I) -> String {
    it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Parses an alist file into per-check VN lists (0-based).
pub fn read_alist<R: BufRead>(input: R) -> Result<(usize, Vec<Vec<usize>>), ProtographError> {
    let nums: Vec<usize> = input
        .lines()
        .map(|l| l.map_err(ProtographError::from))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .flat_map(|l| l.split_whitespace().map(str::to_owned).collect::<Vec<_>>())
        .map(|t| t.parse::<usize>().map_err(|e| ProtographError::CodeFile(e.to_string())))
        .collect::<Result<_, _>>()?;
    let bad = || ProtographError::CodeFile("truncated alist".into());
    let mut it = nums.into_iter();
    let mut next = || it.next().ok_or_else(bad);
    let (n, m) = (next()?, next()?);
    let (max_col, max_row) = (next()?, next()?);
    for _ in 0..n + m {
        next()?;
    }
    for _ in 0..n * max_col {
        next()?;
    }
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let mut row = Vec::new();
        for _ in 0..max_row {
            let v = next()?;
            if v > 0 {
                row.push(v - 1);
            }
        }
        rows.push(row);
    }
    Ok((n, rows))
}
