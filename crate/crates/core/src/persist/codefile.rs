//! Plain-text code archive.
//!
//! ```text
//! # comment
//! n=4 k=2 d=2 type=I
//! 1010
//! 0101
//!
//! n=8 k=4 d=4 type=II
//! ...
//! ```
//!
//! Each block is a header line followed by exactly `k` rows of `n`
//! characters from `{0,1}`. Blocks are separated by blank lines; lines
//! starting with `#` are comments.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::code::{distance_bound, CodeType, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

#[derive(Debug, Clone)]
pub struct CodeFileBlock {
    pub n: usize,
    pub k: usize,
    pub d_claimed: usize,
    pub ty: CodeType,
    pub comments: Vec<String>,
    pub code: LinearCode,
}

impl CodeFileBlock {
    /// A block describing `code` with its exact distance and type.
    pub fn describe(code: &LinearCode) -> Self {
        CodeFileBlock {
            n: code.n(),
            k: code.k(),
            d_claimed: code.min_distance().unwrap_or(0),
            ty: code.classify_type(),
            comments: Vec::new(),
            code: code.clone(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&format!(
            "n={} k={} d={} type={}\n",
            self.n,
            self.k,
            self.d_claimed,
            self.ty.tag()
        ));
        for row in self.code.generator().rows() {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }
}

struct Header {
    n: usize,
    k: usize,
    d: usize,
    ty: CodeType,
}

fn parse_header(line: &str, err: &dyn Fn(usize, String) -> Error) -> Result<Header> {
    let mut n = None;
    let mut k = None;
    let mut d = None;
    let mut ty = None;
    let mut column = 1;
    for token in line.split(' ') {
        if token.is_empty() {
            column += 1;
            continue;
        }
        let Some((key, value)) = token.split_once('=') else {
            return Err(err(column, format!("expected key=value, found {token:?}")));
        };
        let vcol = column + key.len() + 1;
        let num = || {
            value
                .parse::<usize>()
                .map_err(|_| err(vcol, format!("{key} must be a non-negative integer, found {value:?}")))
        };
        match key {
            "n" => n = Some(num()?),
            "k" => k = Some(num()?),
            "d" => d = Some(num()?),
            "type" => {
                ty = Some(match value {
                    "I" => CodeType::TypeI,
                    "II" => CodeType::TypeII,
                    "linear" => CodeType::NotSelfDual,
                    _ => return Err(err(vcol, format!("type must be I, II or linear, found {value:?}"))),
                })
            }
            _ => return Err(err(column, format!("unknown header key {key:?}"))),
        }
        column += token.len() + 1;
    }
    let missing = |name: &str| err(1, format!("header lacks {name}="));
    Ok(Header {
        n: n.ok_or_else(|| missing("n"))?,
        k: k.ok_or_else(|| missing("k"))?,
        d: d.ok_or_else(|| missing("d"))?,
        ty: ty.ok_or_else(|| missing("type"))?,
    })
}

/// Parses every block of `text`; `file` only labels error messages.
pub fn parse_blocks(text: &str, file: &Path) -> Result<Vec<CodeFileBlock>> {
    let at = |line: usize, column: usize, message: String| Error::Parse {
        file: file.to_path_buf(),
        line,
        column,
        message,
    };
    let mut blocks = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
    let mut comments = Vec::new();
    while let Some((lineno, raw)) = lines.next() {
        let line = raw.trim_end();
        if line.trim().is_empty() {
            comments.clear();
            continue;
        }
        if let Some(c) = line.trim_start().strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let header = parse_header(line, &|col, msg| at(lineno, col, msg))?;
        if header.k == 0 || header.k > header.n {
            return Err(at(lineno, 1, format!("k = {} must lie in 1..=n", header.k)));
        }
        if header.ty != CodeType::NotSelfDual {
            let bound = distance_bound(header.n, header.ty).map_err(|e| at(lineno, 1, e.to_string()))?;
            if header.d > bound {
                return Err(at(
                    lineno,
                    1,
                    format!("claimed d = {} exceeds the distance bound {bound}", header.d),
                ));
            }
        }
        let mut rows = Vec::with_capacity(header.k);
        while rows.len() < header.k {
            let Some((rl, raw_row)) = lines.next() else {
                return Err(at(
                    lineno,
                    1,
                    format!("block declares k = {} rows but the file ends after {}", header.k, rows.len()),
                ));
            };
            let row = raw_row.trim_end();
            if row.trim_start().starts_with('#') {
                continue;
            }
            if row.is_empty() {
                return Err(at(
                    rl,
                    1,
                    format!("block declares k = {} rows but has {}", header.k, rows.len()),
                ));
            }
            if let Some((pos, ch)) = row.char_indices().find(|&(_, c)| c != '0' && c != '1') {
                return Err(at(rl, pos + 1, format!("expected 0 or 1, found {ch:?}")));
            }
            if row.len() != header.n {
                return Err(at(
                    rl,
                    row.len().min(header.n) + 1,
                    format!("row has length {}, expected n = {}", row.len(), header.n),
                ));
            }
            rows.push(row.parse::<BitVector>().expect("validated row"));
        }
        let matrix = BitMatrix::new(rows, header.n).expect("validated lengths");
        let code = LinearCode::new(matrix).map_err(|e| at(lineno, 1, e.to_string()))?;
        blocks.push(CodeFileBlock {
            n: header.n,
            k: header.k,
            d_claimed: header.d,
            ty: header.ty,
            comments: std::mem::take(&mut comments),
            code,
        });
    }
    Ok(blocks)
}

pub fn load_blocks(path: &Path) -> Result<Vec<CodeFileBlock>> {
    let text = fs::read_to_string(path)?;
    parse_blocks(&text, path)
}

pub fn load_codes(path: &Path) -> Result<Vec<LinearCode>> {
    Ok(load_blocks(path)?.into_iter().map(|b| b.code).collect())
}

/// Appends one block for `code` to `out`, preceded by a blank line unless
/// `first`.
pub fn save_code(code: &LinearCode, out: &mut impl Write, first: bool) -> Result<()> {
    if !first {
        out.write_all(b"\n")?;
    }
    out.write_all(CodeFileBlock::describe(code).render().as_bytes())?;
    Ok(())
}

pub fn write_codes(path: &Path, codes: &[LinearCode]) -> Result<()> {
    let mut f = File::create(path)?;
    for (i, c) in codes.iter().enumerate() {
        save_code(c, &mut f, i == 0)?;
    }
    f.flush()?;
    Ok(())
}

/// Appends found codes to a file inside a directory.
#[derive(Debug)]
pub struct Saver {
    path: PathBuf,
    file: File,
    written: usize,
}

impl Saver {
    /// Opens `<dir>/<name>`, creating the directory; existing contents are
    /// kept and new blocks appended.
    pub fn create(dir: &Path, name: &str) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        let existing = fs::metadata(&path).map(|m| m.len() > 0).unwrap_or(false);
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Saver {
            path,
            file,
            written: usize::from(existing),
        })
    }

    /// File name used for search results of the given target.
    pub fn file_name(n: usize, k: usize, d: usize, ty: CodeType) -> String {
        format!("n{n}_k{k}_d{d}_{}.codes", ty.tag())
    }

    pub fn save(&mut self, code: &LinearCode) -> Result<()> {
        save_code(code, &mut self.file, self.written == 0)?;
        self.file.flush()?;
        self.written += 1;
        Ok(())
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}
