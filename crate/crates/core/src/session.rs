//! Line-oriented command scripts driving a [`Dictionary2D`].
//!
//! Each non-blank line is one command; `#` starts a comment line.
//!
//! ```text
//! add <pattern-file>     prints the assigned id
//! remove <id>
//! search <text-file>     prints MATCH lines
//! stats                  prints key=value lines
//! ```
//!
//! Relative file paths are resolved against a base directory (the script's
//! directory in the CLI).

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dictionary::{Dictionary2D, Engine};
use crate::matrix::{format_occurrences, Matrix, PatternId};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("line {line}: {message}")]
    Script { line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("output error: {0}")]
    Output(#[from] io::Error),
}

/// A script interpreter holding one dictionary.
pub struct Session {
    dict: Dictionary2D,
    base: PathBuf,
}

impl Session {
    pub fn new(engine: Engine, base: impl Into<PathBuf>) -> Self {
        Session {
            dict: Dictionary2D::with_engine(engine),
            base: base.into(),
        }
    }

    pub fn dictionary(&self) -> &Dictionary2D {
        &self.dict
    }

    /// Runs every line of `script`, stopping at the first error.
    pub fn run_script(&mut self, script: &str, out: &mut impl Write) -> Result<(), SessionError> {
        for (k, line) in script.lines().enumerate() {
            self.run_line(k + 1, line, out)?;
        }
        Ok(())
    }

    /// Runs one line; `number` is used in diagnostics.
    pub fn run_line(
        &mut self,
        number: usize,
        line: &str,
        out: &mut impl Write,
    ) -> Result<(), SessionError> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(());
        }
        let fail = |message: String| SessionError::Script {
            line: number,
            message,
        };
        let (cmd, arg) = match line.split_once(char::is_whitespace) {
            Some((c, a)) => (c, Some(a.trim())),
            None => (line, None),
        };
        let need_arg = |what: &str| arg.ok_or_else(|| fail(format!("`{cmd}` expects {what}")));
        match cmd {
            "add" => {
                let p = self.load(need_arg("a pattern file")?, number)?;
                let id = self
                    .dict
                    .insert_pattern(p)
                    .map_err(|e| fail(e.to_string()))?;
                writeln!(out, "{}", id.0)?;
            }
            "remove" => {
                let raw = need_arg("a pattern id")?;
                let id: u64 = raw
                    .parse()
                    .map_err(|_| fail(format!("invalid pattern id {raw:?}")))?;
                self.dict
                    .remove_pattern(PatternId(id))
                    .map_err(|e| fail(e.to_string()))?;
            }
            "search" => {
                let text = self.load(need_arg("a text file")?, number)?;
                let occs = self.dict.search(&text);
                out.write_all(&format_occurrences(&occs))?;
            }
            "stats" => {
                if arg.is_some() {
                    return Err(fail("`stats` takes no argument".into()));
                }
                let s = self.dict.stats();
                let c = self.dict.counters();
                writeln!(out, "d={}", s.d)?;
                writeln!(out, "ell={}", s.ell)?;
                writeln!(out, "m_bar={}", s.m_bar)?;
                writeln!(out, "m_prime={}", s.m_prime)?;
                writeln!(out, "tau={}", c.tau)?;
                writeln!(out, "comparisons={}", c.comparisons)?;
            }
            other => return Err(fail(format!("unknown command `{other}`"))),
        }
        Ok(())
    }

    fn load(&self, file: &str, number: usize) -> Result<Matrix, SessionError> {
        let path = self.resolve(file);
        let bytes = std::fs::read(&path).map_err(|source| SessionError::Read {
            path: path.clone(),
            source,
        })?;
        Matrix::parse(&bytes).map_err(|e| SessionError::Script {
            line: number,
            message: format!("{}: {e}", path.display()),
        })
    }

    fn resolve(&self, file: &str) -> PathBuf {
        let p = Path::new(file);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) {
        std::fs::write(dir.join(name), body).unwrap();
    }

    #[test]
    fn script_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "p.txt", "1 2\nab\n");
        write(dir.path(), "t.txt", "2 4\nabab\nxxab\n");
        let mut s = Session::new(Engine::Auto, dir.path());
        let mut out = Vec::new();
        s.run_script(
            "add p.txt\nsearch t.txt\n# comment\n\nremove 1\nsearch t.txt\n",
            &mut out,
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "1\nMATCH 1 1 1\nMATCH 1 1 3\nMATCH 1 2 3\n"
        );
    }

    #[test]
    fn stats_keys() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "p.txt", "2 2\nab\ncd\n");
        let mut s = Session::new(Engine::Linear, dir.path());
        let mut out = Vec::new();
        s.run_script("add p.txt\nstats", &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let keys: Vec<&str> = text
            .lines()
            .skip(1)
            .map(|l| l.split_once('=').unwrap().0)
            .collect();
        assert_eq!(keys, ["d", "ell", "m_bar", "m_prime", "tau", "comparisons"]);
        assert!(text.contains("d=1\nell=4\nm_bar=2\nm_prime=2\n"));
    }

    #[test]
    fn errors_name_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = Session::new(Engine::Auto, dir.path());
        let mut out = Vec::new();
        let e = s.run_script("stats\nremove 7\n", &mut out).unwrap_err();
        assert_eq!(e.to_string(), "line 2: unknown or removed pattern id 7");
        let e = s.run_script("frobnicate", &mut out).unwrap_err();
        assert_eq!(e.to_string(), "line 1: unknown command `frobnicate`");
        assert!(matches!(
            s.run_script("add missing.txt", &mut out),
            Err(SessionError::Read { .. })
        ));
    }
}
