//! Text caches `<dir>/<label>.<kind>`.
//!
//! ```text
//! schema 1
//! kind an
//! nmax 1000
//! hash 5f2c...
//! 1 1
//! 2 -2
//! ```
//!
//! A file is written once to a temporary sibling and moved into place
//! without clobbering, then only read. A file whose header does not match
//! the request is treated as stale and rebuilt.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use iwasawa_core::curve::{an_coeffs, CurveModel};
use iwasawa_core::lvalues::{DirichletCharacter, LSeriesData};
use sha2::{Digest, Sha256};

use crate::curvefile::format_record;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Built,
    /// The old file was unusable; the reason is kept for the warning.
    Rebuilt(String),
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache io at {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Compute(#[from] iwasawa_core::Error),
}

/// One twisted value: the character's exponent at the generator, value and
/// error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwistRecord {
    pub k: u64,
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

pub fn curve_hash(e: &CurveModel) -> String {
    let digest = Sha256::digest(format_record(e).as_bytes());
    digest.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CacheError + '_ {
    move |source| CacheError::Io { path: path.display().to_string(), source }
}

struct Parsed {
    headers: Vec<(String, String)>,
    body: Vec<Vec<String>>,
}

fn parse(text: &str) -> Option<Parsed> {
    let mut headers = Vec::new();
    let mut body = Vec::new();
    for line in text.lines() {
        let f: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        if f.is_empty() {
            continue;
        }
        let numeric = f[0].chars().all(|c| c.is_ascii_digit());
        if numeric {
            body.push(f);
        } else if body.is_empty() && f.len() == 2 {
            headers.push((f[0].clone(), f[1].clone()));
        } else {
            return None;
        }
    }
    Some(Parsed { headers, body })
}

impl Parsed {
    fn header(&self, key: &str) -> Option<&str> {
        self.headers.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, label: &str, kind: &str) -> PathBuf {
        self.dir.join(format!("{label}.{kind}"))
    }

    /// Checked header of an existing file, or why it cannot be used.
    fn load(&self, path: &Path, kind: &str, hash: &str) -> Result<Option<Parsed>, String> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.to_string()),
        };
        let parsed = parse(&text).ok_or("corrupt cache file")?;
        if parsed.header("schema") != Some(&SCHEMA.to_string()) {
            return Err("schema mismatch".into());
        }
        if parsed.header("kind") != Some(kind) {
            return Err("kind mismatch".into());
        }
        if parsed.header("hash") != Some(hash) {
            return Err("curve hash mismatch".into());
        }
        Ok(Some(parsed))
    }

    /// Writes `text` to `path` unless another writer got there first.
    fn publish(&self, path: &Path, text: &str, replace: bool) -> Result<(), CacheError> {
        if replace {
            match fs::remove_file(path) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(e) => return Err(io_err(path)(e)),
            }
        }
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io_err(&self.dir))?;
        tmp.write_all(text.as_bytes()).map_err(io_err(tmp.path()))?;
        match tmp.persist_noclobber(path) {
            Ok(_) => Ok(()),
            Err(e) if e.error.kind() == std::io::ErrorKind::AlreadyExists => Ok(()),
            Err(e) => Err(io_err(path)(e.error)),
        }
    }

    /// `a_n` for `n <= nmax` (index 0 unused).
    pub fn an_table(&self, e: &CurveModel, nmax: usize) -> Result<(Vec<i64>, CacheStatus), CacheError> {
        let path = self.path(e.label(), "an");
        let hash = curve_hash(e);
        let mut status = CacheStatus::Built;
        match self.load(&path, "an", &hash) {
            Ok(Some(parsed)) => match read_an(&parsed, nmax) {
                Some(table) => return Ok((table, CacheStatus::Hit)),
                None => status = CacheStatus::Rebuilt("table too short or corrupt".into()),
            },
            Ok(None) => {}
            Err(reason) => status = CacheStatus::Rebuilt(reason),
        }
        let table = an_coeffs(e, nmax);
        let mut text = format!("schema {SCHEMA}\nkind an\nnmax {nmax}\nhash {hash}\n");
        for (n, a) in table.iter().enumerate().skip(1) {
            let _ = writeln!(text, "{n} {a}");
        }
        self.publish(&path, &text, status != CacheStatus::Built)?;
        Ok((table, status))
    }

    /// `L(E, chi, 1)` for every character modulo `p^r`, keyed by the
    /// exponent of `chi` at the generator.
    pub fn twisted_values(&self, e: &CurveModel, data: &LSeriesData, p: u64, r: u32) -> Result<(Vec<TwistRecord>, CacheStatus), CacheError> {
        let kind = format!("lvalues-{p}-{r}");
        let path = self.path(e.label(), &kind);
        let hash = curve_hash(e);
        let chars = DirichletCharacter::all(p, r)?;
        let mut status = CacheStatus::Built;
        match self.load(&path, &kind, &hash) {
            Ok(Some(parsed)) => match read_twists(&parsed, chars.len()) {
                Some(rows) => return Ok((rows, CacheStatus::Hit)),
                None => status = CacheStatus::Rebuilt("character list mismatch or corrupt".into()),
            },
            Ok(None) => {}
            Err(reason) => status = CacheStatus::Rebuilt(reason),
        }
        let rows = compute_twists(data, p, r)?;
        let mut text = format!("schema {SCHEMA}\nkind {kind}\nchars {p}^{r}\nhash {hash}\n");
        for row in &rows {
            let _ = writeln!(text, "{} {:?} {:?} {:?}", row.k, row.re, row.im, row.err);
        }
        self.publish(&path, &text, status != CacheStatus::Built)?;
        Ok((rows, status))
    }
}

/// Twisted values without a cache.
pub fn compute_twists(data: &LSeriesData, p: u64, r: u32) -> Result<Vec<TwistRecord>, iwasawa_core::Error> {
    let mut rows = Vec::new();
    for (k, chi) in DirichletCharacter::all(p, r)?.iter().enumerate() {
        let l = data.twisted_l_value(chi)?;
        rows.push(TwistRecord { k: k as u64, re: l.value.re, im: l.value.im, err: l.error_bound });
    }
    Ok(rows)
}

fn read_an(parsed: &Parsed, nmax: usize) -> Option<Vec<i64>> {
    let stored: usize = parsed.header("nmax")?.parse().ok()?;
    if stored < nmax || parsed.body.len() != stored {
        return None;
    }
    let mut table = vec![0i64; nmax + 1];
    for (i, row) in parsed.body.iter().take(nmax).enumerate() {
        if row.len() != 2 || row[0].parse::<usize>().ok()? != i + 1 {
            return None;
        }
        table[i + 1] = row[1].parse().ok()?;
    }
    Some(table)
}

fn read_twists(parsed: &Parsed, count: usize) -> Option<Vec<TwistRecord>> {
    if parsed.body.len() != count {
        return None;
    }
    parsed
        .body
        .iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != 4 || row[0].parse::<u64>().ok()? != i as u64 {
                return None;
            }
            Some(TwistRecord { k: i as u64, re: row[1].parse().ok()?, im: row[2].parse().ok()?, err: row[3].parse().ok()? })
        })
        .collect()
}
