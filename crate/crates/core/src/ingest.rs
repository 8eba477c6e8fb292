//! Corpus ingestion: the persons, relationship-records, sign-rules and
//! dynasty TSV files, dynasty assignment, and aggregation of records into a
//! [`SignedGraph`].
//!
//! All files are UTF-8, tab-separated, with an exact header line. An empty
//! field means "absent". Malformed rows are dropped and reported with their
//! line number; structural problems (missing file, wrong header, duplicate
//! keys) are fatal.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Evidence, NodeId, Person, Sign, SignedEdge, SignedGraph};

pub type PersonRecord = Person;

pub const PERSONS_HEADER: &str = "person_id\tname_cn\tname_en\tdynasty\tbirth_year\tdeath_year";
pub const RELATIONS_HEADER: &str = "from_id\tto_id\trel_code\trel_name\tcount";
pub const RULES_HEADER: &str = "rel_code\tsign";
pub const DYNASTIES_HEADER: &str = "name\tstart_year\tend_year";

/// The dynasty table shipped with the tool, in priority order.
pub const DEFAULT_DYNASTIES_TSV: &str = "name\tstart_year\tend_year
Tang\t618\t907
Song\t960\t1279
Yuan\t1271\t1368
Ming\t1368\t1644
Qing\t1636\t1912
";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRecord {
    pub from_id: NodeId,
    pub to_id: NodeId,
    pub rel_code: String,
    pub rel_name: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignRule {
    pub rel_code: String,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynastySpan {
    pub name: String,
    pub start_year: i32,
    pub end_year: i32,
}

impl DynastySpan {
    pub fn contains(&self, year: i32) -> bool {
        (self.start_year..=self.end_year).contains(&year)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowIssue {
    pub line: usize,
    pub message: String,
}

/// Per-file parse outcome.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseSummary {
    pub file: String,
    pub rows_read: usize,
    pub kept: usize,
    pub dropped: usize,
    /// Rows dropped because both endpoints were the same person.
    pub self_relations: usize,
    pub issues: Vec<RowIssue>,
}

impl ParseSummary {
    fn new(label: &str) -> Self {
        ParseSummary {
            file: label.to_string(),
            ..Default::default()
        }
    }

    fn drop_row(&mut self, line: usize, message: impl Into<String>) {
        self.dropped += 1;
        self.issues.push(RowIssue {
            line,
            message: message.into(),
        });
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub persons: Vec<PersonRecord>,
    pub relations: Vec<RelationRecord>,
    pub rules: Vec<SignRule>,
    pub summaries: Vec<ParseSummary>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Yields `(line number, fields)` for each non-empty data row after checking the header.
fn rows<'a>(
    text: &'a str,
    label: &Path,
    header: &str,
) -> Result<impl Iterator<Item = (usize, Vec<&'a str>)> + 'a> {
    let mut lines = text.lines().enumerate();
    let found = lines
        .next()
        .map(|(_, l)| l.trim_start_matches('\u{feff}').trim_end_matches('\r'))
        .unwrap_or("");
    if found != header {
        return Err(Error::Header {
            path: label.to_path_buf(),
            expected: header.replace('\t', "\\t"),
            found: found.replace('\t', "\\t"),
        });
    }
    Ok(lines.filter_map(|(i, l)| {
        let l = l.trim_end_matches('\r');
        (!l.trim().is_empty()).then(|| (i + 1, l.split('\t').collect()))
    }))
}

fn opt_field(s: &str) -> Option<&str> {
    let s = s.trim();
    (!s.is_empty()).then_some(s)
}

fn parse_year(s: &str, what: &str) -> std::result::Result<Option<i32>, String> {
    opt_field(s)
        .map(|v| v.parse::<i32>().map_err(|_| format!("bad {what} `{v}`")))
        .transpose()
}

pub fn parse_persons(text: &str, label: &Path) -> Result<(Vec<PersonRecord>, ParseSummary)> {
    let mut summary = ParseSummary::new(&label.display().to_string());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, f) in rows(text, label, PERSONS_HEADER)? {
        summary.rows_read += 1;
        if f.len() != 6 {
            summary.drop_row(line, format!("expected 6 fields, found {}", f.len()));
            continue;
        }
        let id: NodeId = match f[0].parse() {
            Ok(id) => id,
            Err(_) => {
                summary.drop_row(line, format!("bad person_id `{}`", f[0]));
                continue;
            }
        };
        let years = parse_year(f[4], "birth_year").and_then(|b| Ok((b, parse_year(f[5], "death_year")?)));
        let (birth_year, death_year) = match years {
            Ok(y) => y,
            Err(msg) => {
                summary.drop_row(line, msg);
                continue;
            }
        };
        if let (Some(b), Some(d)) = (birth_year, death_year) {
            if b > d {
                summary.drop_row(line, format!("birth_year {b} after death_year {d}"));
                continue;
            }
        }
        if !seen.insert(id) {
            return Err(Error::Duplicate {
                path: label.to_path_buf(),
                line,
                what: "person_id",
                key: id.to_string(),
            });
        }
        summary.kept += 1;
        out.push(Person {
            id,
            name_cn: f[1].trim().to_string(),
            name_en: f[2].trim().to_string(),
            dynasty: opt_field(f[3]).map(str::to_string),
            birth_year,
            death_year,
        });
    }
    Ok((out, summary))
}

pub fn parse_relations(text: &str, label: &Path) -> Result<(Vec<RelationRecord>, ParseSummary)> {
    let mut summary = ParseSummary::new(&label.display().to_string());
    let mut out = Vec::new();
    for (line, f) in rows(text, label, RELATIONS_HEADER)? {
        summary.rows_read += 1;
        if f.len() != 5 {
            summary.drop_row(line, format!("expected 5 fields, found {}", f.len()));
            continue;
        }
        let (from_id, to_id) = match (f[0].parse::<NodeId>(), f[1].parse::<NodeId>()) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                summary.drop_row(line, "bad from_id/to_id");
                continue;
            }
        };
        let rel_code = f[2].trim();
        if rel_code.is_empty() {
            summary.drop_row(line, "empty rel_code");
            continue;
        }
        let count = match f[4].trim().parse::<u64>() {
            Ok(c) if c >= 1 => c,
            _ => {
                summary.drop_row(line, format!("bad count `{}`", f[4]));
                continue;
            }
        };
        if from_id == to_id {
            summary.self_relations += 1;
            summary.drop_row(line, format!("self-relation on {from_id}"));
            continue;
        }
        summary.kept += 1;
        out.push(RelationRecord {
            from_id,
            to_id,
            rel_code: rel_code.to_string(),
            rel_name: f[3].trim().to_string(),
            count,
        });
    }
    Ok((out, summary))
}

pub fn parse_rules(text: &str, label: &Path) -> Result<(Vec<SignRule>, ParseSummary)> {
    let mut summary = ParseSummary::new(&label.display().to_string());
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (line, f) in rows(text, label, RULES_HEADER)? {
        summary.rows_read += 1;
        if f.len() != 2 {
            summary.drop_row(line, format!("expected 2 fields, found {}", f.len()));
            continue;
        }
        let Some(sign) = Sign::from_symbol(f[1]) else {
            summary.drop_row(line, format!("bad sign `{}` (want +, - or 0)", f[1]));
            continue;
        };
        let rel_code = f[0].trim().to_string();
        if !seen.insert(rel_code.clone()) {
            return Err(Error::Duplicate {
                path: label.to_path_buf(),
                line,
                what: "rel_code",
                key: rel_code,
            });
        }
        summary.kept += 1;
        out.push(SignRule { rel_code, sign });
    }
    Ok((out, summary))
}

pub fn parse_dynasties(text: &str, label: &Path) -> Result<Vec<DynastySpan>> {
    let mut out: Vec<DynastySpan> = Vec::new();
    for (line, f) in rows(text, label, DYNASTIES_HEADER)? {
        let bad = |msg: String| Error::InvalidArgument(format!("{}:{line}: {msg}", label.display()));
        if f.len() != 3 {
            return Err(bad(format!("expected 3 fields, found {}", f.len())));
        }
        let (start_year, end_year) = match (f[1].trim().parse(), f[2].trim().parse()) {
            (Ok(s), Ok(e)) => (s, e),
            _ => return Err(bad("bad year".into())),
        };
        if start_year >= end_year {
            return Err(bad(format!("start_year {start_year} not before end_year {end_year}")));
        }
        let name = f[0].trim().to_string();
        if out.iter().any(|s| s.name == name) {
            return Err(Error::Duplicate {
                path: label.to_path_buf(),
                line,
                what: "dynasty",
                key: name,
            });
        }
        out.push(DynastySpan {
            name,
            start_year,
            end_year,
        });
    }
    Ok(out)
}

pub fn default_dynasties() -> Vec<DynastySpan> {
    parse_dynasties(DEFAULT_DYNASTIES_TSV, Path::new("<builtin dynasties>"))
        .expect("builtin dynasty table is valid")
}

pub fn read_dynasties(path: &Path) -> Result<Vec<DynastySpan>> {
    parse_dynasties(&read(path)?, path)
}

pub fn parse_corpus(persons_file: &Path, relations_file: &Path, rules_file: &Path) -> Result<Corpus> {
    let (persons, ps) = parse_persons(&read(persons_file)?, persons_file)?;
    let (relations, rs) = parse_relations(&read(relations_file)?, relations_file)?;
    let (rules, ss) = parse_rules(&read(rules_file)?, rules_file)?;
    Ok(Corpus {
        persons,
        relations,
        rules,
        summaries: vec![ps, rs, ss],
    })
}

/// Dynasty of a person: the marked label if it names a known span, else the
/// span containing the birth year, else the span containing the death year.
/// Overlapping spans resolve to the first one in table order.
pub fn assign_dynasty(p: &PersonRecord, spans: &[DynastySpan]) -> Option<String> {
    if let Some(label) = p.dynasty.as_deref() {
        if let Some(span) = spans.iter().find(|s| s.name == label) {
            return Some(span.name.clone());
        }
    }
    [p.birth_year, p.death_year]
        .into_iter()
        .flatten()
        .find_map(|year| spans.iter().find(|s| s.contains(year)))
        .map(|s| s.name.clone())
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    /// Keep only people assigned to this dynasty. `None` keeps everyone.
    pub dynasty: Option<String>,
    pub spans: Vec<DynastySpan>,
    /// Person ids removed before building (e.g. placeholder persons).
    pub exclude: BTreeSet<NodeId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BuildSummary {
    pub dynasty: Option<String>,
    pub persons_kept: usize,
    pub persons_excluded: usize,
    pub persons_outside_dynasty: usize,
    pub records_kept: usize,
    /// Sum of `count` over kept records; equals the total edge weight.
    pub record_weight: u64,
    pub records_outside_dynasty: usize,
    pub records_unknown_endpoint: usize,
    pub records_self_loop: usize,
    /// rel_code -> number of records without a sign rule (treated as neutral).
    pub unmapped_codes: BTreeMap<String, u64>,
    pub edges: usize,
    pub isolated_nodes: usize,
}

/// Aggregates relationship records into one signed edge per unordered pair.
///
/// Edge sign is the majority of record counts (`pos_count` vs `neg_count`),
/// neutral on a tie. Records with an unmapped `rel_code` count as neutral.
pub fn build_graph(
    persons: &[PersonRecord],
    relations: &[RelationRecord],
    rules: &[SignRule],
    opts: &BuildOptions,
) -> Result<(SignedGraph, BuildSummary)> {
    if let Some(d) = &opts.dynasty {
        if !opts.spans.iter().any(|s| &s.name == d) {
            return Err(Error::InvalidArgument(format!("unknown dynasty `{d}`")));
        }
    }
    let mut summary = BuildSummary {
        dynasty: opts.dynasty.clone(),
        ..Default::default()
    };
    let known: BTreeSet<NodeId> = persons.iter().map(|p| p.id).collect();
    let mut kept: BTreeMap<NodeId, Person> = BTreeMap::new();
    for p in persons {
        if opts.exclude.contains(&p.id) {
            summary.persons_excluded += 1;
            continue;
        }
        let assigned = if opts.spans.is_empty() {
            p.dynasty.clone()
        } else {
            assign_dynasty(p, &opts.spans)
        };
        if opts.dynasty.is_some() && assigned != opts.dynasty {
            summary.persons_outside_dynasty += 1;
            continue;
        }
        let mut node = p.clone();
        if assigned.is_some() {
            node.dynasty = assigned;
        }
        kept.insert(p.id, node);
    }
    summary.persons_kept = kept.len();

    let sign_of: BTreeMap<&str, Sign> = rules.iter().map(|r| (r.rel_code.as_str(), r.sign)).collect();
    // (u, v) -> rel_code -> evidence
    let mut pairs: BTreeMap<(NodeId, NodeId), BTreeMap<&str, Evidence>> = BTreeMap::new();
    for r in relations {
        if r.from_id == r.to_id {
            summary.records_self_loop += 1;
            continue;
        }
        if !known.contains(&r.from_id) || !known.contains(&r.to_id) {
            summary.records_unknown_endpoint += 1;
            continue;
        }
        if !kept.contains_key(&r.from_id) || !kept.contains_key(&r.to_id) {
            summary.records_outside_dynasty += 1;
            continue;
        }
        let sign = match sign_of.get(r.rel_code.as_str()) {
            Some(&s) => s,
            None => {
                *summary.unmapped_codes.entry(r.rel_code.clone()).or_default() += 1;
                Sign::Neutral
            }
        };
        let key = if r.from_id < r.to_id {
            (r.from_id, r.to_id)
        } else {
            (r.to_id, r.from_id)
        };
        pairs
            .entry(key)
            .or_default()
            .entry(r.rel_code.as_str())
            .or_insert_with(|| Evidence {
                rel_code: r.rel_code.clone(),
                rel_name: r.rel_name.clone(),
                sign,
                count: 0,
            })
            .count += r.count;
        summary.records_kept += 1;
        summary.record_weight += r.count;
    }

    let edges: Vec<SignedEdge> = pairs
        .into_iter()
        .map(|((u, v), by_code)| {
            let evidence: Vec<Evidence> = by_code.into_values().collect();
            let count = |s: Sign| evidence.iter().filter(|e| e.sign == s).map(|e| e.count).sum::<u64>();
            let (pos, neg, neu) = (count(Sign::Positive), count(Sign::Negative), count(Sign::Neutral));
            SignedEdge {
                u,
                v,
                sign: Sign::from_counts(pos, neg),
                pos_count: pos,
                neg_count: neg,
                neu_count: neu,
                evidence,
            }
        })
        .collect();
    let graph = SignedGraph::new(kept.into_values().collect(), edges)?;
    summary.edges = graph.edge_count();
    summary.isolated_nodes = (0..graph.node_count()).filter(|&i| graph.degree_at(i) == 0).count();
    Ok((graph, summary))
}

/// Where the corpus files live; convenience for callers that take a directory.
#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub persons: PathBuf,
    pub relations: PathBuf,
    pub rules: PathBuf,
}

impl CorpusPaths {
    pub fn in_dir(dir: &Path) -> CorpusPaths {
        CorpusPaths {
            persons: dir.join("persons.tsv"),
            relations: dir.join("relations.tsv"),
            rules: dir.join("sign_rules.tsv"),
        }
    }

    pub fn parse(&self) -> Result<Corpus> {
        parse_corpus(&self.persons, &self.relations, &self.rules)
    }
}
