//! On-disk cache of sphere shells with an in-memory layer.
//!
//! File format: a header line `d k count`, then `count` lines of `d`
//! integers in lexicographic order. Lines starting with `#` are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{rep_counts, sphere_shell_with, SphereShell, DEFAULT_POINT_BUDGET};

pub fn format_shell(shell: &SphereShell) -> String {
    let mut s = String::with_capacity(shell.coords().len() * 4 + 32);
    let _ = writeln!(s, "{} {} {}", shell.dimension, shell.radius_sq, shell.len());
    for p in shell.points() {
        let mut first = true;
        for x in p {
            if !first {
                s.push(' ');
            }
            first = false;
            let _ = write!(s, "{x}");
        }
        s.push('\n');
    }
    s
}

/// Writes via a sibling temp file and an atomic rename.
pub fn write_shell(shell: &SphereShell, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, format_shell(shell))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn parse_shell(text: &str, path: &Path) -> Result<SphereShell> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
    let fields: Vec<u64> = header
        .split_whitespace()
        .map(|t| t.parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(hline, format!("bad header `{header}`: {e}")))?;
    let [d, k, count] = fields[..] else {
        return Err(err(hline, format!("header needs `d k count`, got `{header}`")));
    };
    if d == 0 {
        return Err(err(hline, "dimension must be positive".into()));
    }
    let d = d as usize;
    let expected = rep_counts(d, k)?.counts[k as usize];
    if count != expected {
        return Err(Error::CountMismatch { header: count, expected });
    }
    let mut coords = Vec::with_capacity(count as usize * d);
    let mut prev: Option<Vec<i64>> = None;
    let mut seen = 0u64;
    for (n, line) in lines {
        let p: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| err(n, format!("bad coordinate in `{line}`: {e}")))?;
        if p.len() != d {
            return Err(err(n, format!("expected {d} coordinates, got {}", p.len())));
        }
        let norm: i128 = p.iter().map(|&x| x as i128 * x as i128).sum();
        if norm != k as i128 {
            return Err(err(n, format!("point has |m|^2 = {norm}, expected {k}")));
        }
        if prev.as_ref().is_some_and(|q| *q >= p) {
            return Err(err(n, "points are not in strictly increasing lexicographic order".into()));
        }
        coords.extend_from_slice(&p);
        prev = Some(p);
        seen += 1;
    }
    if seen != count {
        return Err(Error::CountMismatch { header: count, expected: seen });
    }
    SphereShell::from_points(d, k, coords)
}

pub fn read_shell(path: &Path) -> Result<SphereShell> {
    parse_shell(&fs::read_to_string(path)?, path)
}

/// Shells keyed by `(d, k)`: memory first, then `dir`, then enumeration
/// (which is written back to `dir`).
#[derive(Debug)]
pub struct ShellCache {
    dir: PathBuf,
    memory: Mutex<HashMap<(usize, u64), Arc<SphereShell>>>,
    budget: u64,
    exec: Exec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheSource {
    Memory,
    Disk,
    Enumerated,
}

impl ShellCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: dir.into(),
            memory: Mutex::new(HashMap::new()),
            budget: DEFAULT_POINT_BUDGET,
            exec: Exec::default(),
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn path_for(&self, d: usize, k: u64) -> PathBuf {
        self.dir.join(format!("shell_d{d}_k{k}.txt"))
    }

    pub fn get(&self, d: usize, k: u64) -> Result<Arc<SphereShell>> {
        self.get_traced(d, k).map(|(s, _)| s)
    }

    pub fn get_traced(&self, d: usize, k: u64) -> Result<(Arc<SphereShell>, CacheSource)> {
        if let Some(s) = self.memory.lock().expect("cache lock").get(&(d, k)) {
            return Ok((Arc::clone(s), CacheSource::Memory));
        }
        let path = self.path_for(d, k);
        let (shell, source) = if path.exists() {
            (read_shell(&path)?, CacheSource::Disk)
        } else {
            let s = sphere_shell_with(d, k, self.budget, self.exec)?;
            write_shell(&s, &path)?;
            (s, CacheSource::Enumerated)
        };
        let shell = Arc::new(shell);
        self.memory
            .lock()
            .expect("cache lock")
            .insert((d, k), Arc::clone(&shell));
        Ok((shell, source))
    }

    pub fn clear_memory(&self) {
        self.memory.lock().expect("cache lock").clear();
    }
}
