//! Target-independent demo logic; the wasm exports are thin wrappers.

use dict2d::group1::VerifyPath;
use dict2d::periodicity::{
    build_lcm_table, canonize_row, classify_pattern, group_threshold, CappedLcm, Group,
};
use dict2d::{Dictionary2D, Engine, Error, Matrix, PatternId};
use serde::Serialize;

/// Parses a grid typed as newline-separated rows (no header line).
pub fn parse_grid(src: &str) -> Result<Matrix, Error> {
    let rows: Vec<&str> = src
        .lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .filter(|l| !l.is_empty())
        .collect();
    if rows.is_empty() {
        return Err(Error::ZeroDimension);
    }
    Matrix::from_rows(&rows)
}

fn rows_of(m: &Matrix) -> Vec<String> {
    m.rows()
        .map(|r| String::from_utf8_lossy(r).into_owned())
        .collect()
}

fn lcm_value(v: CappedLcm) -> Option<u64> {
    v.finite()
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct PatternInfo {
    pub id: u64,
    pub rows: Vec<String>,
    pub group: &'static str,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct SearchReport {
    pub engine: String,
    /// `[id, row, col]`, 1-based, sorted by row, column, id.
    pub matches: Vec<[u64; 3]>,
    pub d: usize,
    pub ell: usize,
    pub m_bar: usize,
    pub m_prime: usize,
    pub tau: u64,
    pub comparisons: u64,
    pub candidates: u64,
    pub vertical_duels: u64,
    pub horizontal_duels: u64,
    pub peak_workspace: u64,
}

/// A live dictionary plus the engine used for searches.
#[derive(Default)]
pub struct DemoState {
    dict: Dictionary2D,
}

impl DemoState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, grid: &str) -> Result<u64, Error> {
        Ok(self.dict.insert_pattern(parse_grid(grid)?)?.0)
    }

    pub fn remove(&mut self, id: u64) -> Result<(), Error> {
        self.dict.remove_pattern(PatternId(id))
    }

    pub fn patterns(&self) -> Vec<PatternInfo> {
        let mut out: Vec<PatternInfo> = self
            .dict
            .patterns()
            .map(|p| PatternInfo {
                id: p.id.0,
                group: match classify_pattern(&p.matrix) {
                    Group::One => "I",
                    Group::Two { .. } => "II",
                },
                rows: rows_of(&p.matrix),
            })
            .collect();
        out.sort_by_key(|p| p.id);
        out
    }

    pub fn search(&self, text: &str, engine: &str) -> Result<SearchReport, Error> {
        let engine: Engine = engine.parse()?;
        let text = parse_grid(text)?;
        self.dict.reset_counters();
        let occs = self.dict.search_with(&text, engine);
        let st = self.dict.stats();
        let c = self.dict.counters();
        Ok(SearchReport {
            engine: self.dict.resolve(engine).to_string(),
            matches: occs
                .iter()
                .map(|o| [o.pattern.0, o.row as u64, o.col as u64])
                .collect(),
            d: st.d,
            ell: st.ell,
            m_bar: st.m_bar,
            m_prime: st.m_prime,
            tau: c.tau,
            comparisons: c.comparisons,
            candidates: c.candidates,
            vertical_duels: c.vertical_duels,
            horizontal_duels: c.horizontal_duels,
            peak_workspace: c.peak_workspace,
        })
    }
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct RowReport {
    pub width: usize,
    pub period: usize,
    /// Least rotation of the period.
    pub lyndon: String,
    /// 1-based column where `lyndon` starts.
    pub lwpos: usize,
    pub canonical: String,
    pub threshold: usize,
    pub highly_periodic: bool,
}

pub fn explain_row(row: &str) -> Result<RowReport, Error> {
    let bytes = row.trim_end_matches(['\r', '\n']).as_bytes();
    if bytes.is_empty() {
        return Err(Error::ZeroDimension);
    }
    if let Some(&b) = bytes.iter().find(|&&b| b == b'\n' || b == b'\r') {
        return Err(Error::InvalidByte(b));
    }
    let c = canonize_row(bytes);
    let threshold = group_threshold(bytes.len());
    Ok(RowReport {
        width: bytes.len(),
        period: c.meta.period,
        lyndon: String::from_utf8_lossy(&c.lyndon).into_owned(),
        lwpos: c.meta.lwpos,
        canonical: String::from_utf8_lossy(&c.canonical).into_owned(),
        threshold,
        highly_periodic: c.meta.period <= threshold,
    })
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct PatternReport {
    pub group: &'static str,
    pub rows: Vec<RowReport>,
    /// Running capped LCM of the row periods; `None` past the cap.
    pub lcm: Vec<Option<u64>>,
    pub lcm_cap: u64,
    /// 1-based filter row (Group II only).
    pub filter_row: Option<usize>,
    /// Period of the class-name sequence (Group I only).
    pub class_period: Option<usize>,
    /// `signature`, `congruence` or `pblocks` (Group I only).
    pub verify: Option<&'static str>,
    /// Canonical column and modulus of the 2D Lyndon signature.
    pub z: Option<String>,
    pub modulus: Option<String>,
}

/// Classifies a pattern the way the dictionary would on insertion.
pub fn classify(grid: &str) -> Result<PatternReport, Error> {
    let p = parse_grid(grid)?;
    let rows = p
        .rows()
        .map(|r| explain_row(&String::from_utf8_lossy(r)))
        .collect::<Result<Vec<_>, _>>()?;
    let cap = 2 * p.width() as u64;
    let periods: Vec<usize> = rows.iter().map(|r| r.period).collect();
    let lcm = build_lcm_table(&periods, cap)
        .values
        .into_iter()
        .map(lcm_value)
        .collect();
    let mut report = PatternReport {
        group: "II",
        rows,
        lcm,
        lcm_cap: cap,
        filter_row: None,
        class_period: None,
        verify: None,
        z: None,
        modulus: None,
    };
    match classify_pattern(&p) {
        Group::Two { filter_row } => report.filter_row = Some(filter_row),
        Group::One => {
            let mut d = Dictionary2D::new();
            let id = d.insert_pattern(p)?;
            let g = d.group1().pattern(id).expect("Group I pattern");
            report.group = "I";
            report.class_period = Some(g.pi);
            match &g.path {
                VerifyPath::Signature(Some(sig)) => {
                    report.verify = Some("signature");
                    report.z = Some(sig.z.to_string());
                    report.modulus = Some(sig.modulus.to_string());
                }
                VerifyPath::Signature(None) => report.verify = Some("congruence"),
                VerifyPath::PBlocks(_) => report.verify = Some("pblocks"),
            }
        }
    }
    Ok(report)
}
