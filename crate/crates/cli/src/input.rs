//! Readers for the on-disk formats. Every parse error carries a 1-based line
//! and column.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use local_scores::estimate::FrequencyTable;
use local_scores::product::{MrfModel, ProductSpace, SampleMatrix};
use local_scores::space::{OutcomeSpace, UndirectedGraph};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// A file read once, with its digest for the report.
pub struct Source {
    pub path: PathBuf,
    pub text: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn read_source(path: &Path) -> CliResult<Source> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let sha256 = sha256_hex(&bytes);
    let text = String::from_utf8(bytes).map_err(|e| {
        let prefix = &e.as_bytes()[..e.utf8_error().valid_up_to()];
        let line = prefix.iter().filter(|&&b| b == b'\n').count() as u64 + 1;
        let column = prefix.iter().rev().take_while(|&&b| b != b'\n').count() as u64 + 1;
        CliError::Parse {
            path: path.to_path_buf(),
            line,
            column,
            message: "file is not valid UTF-8".into(),
        }
    })?;
    Ok(Source {
        path: path.to_path_buf(),
        text,
        sha256,
    })
}

impl Source {
    fn error(&self, line: u64, column: u64, message: impl Into<String>) -> CliError {
        CliError::Parse {
            path: self.path.clone(),
            line,
            column,
            message: message.into(),
        }
    }

    fn csv_rows(&self, expected_header: &[String]) -> CliResult<Vec<(u64, Vec<String>)>> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(self.text.as_bytes());
        let csv_error = |e: csv::Error| {
            let line = e.position().map_or(1, |p| p.line());
            self.error(line, 1, e.to_string())
        };
        let header = reader.headers().map_err(csv_error)?.clone();
        if header.len() != expected_header.len() {
            return Err(self.error(
                1,
                1,
                format!("expected header `{}`", expected_header.join(",")),
            ));
        }
        for (j, (got, want)) in header.iter().zip(expected_header).enumerate() {
            if got != want {
                return Err(self.error(1, j as u64 + 1, format!("expected column `{want}`, found `{got}`")));
            }
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(csv_error)?;
            let line = record.position().map_or(0, |p| p.line());
            rows.push((line, record.iter().map(str::to_owned).collect()));
        }
        Ok(rows)
    }

    fn integer(&self, line: u64, column: usize, field: &str) -> CliResult<u64> {
        field.parse::<u64>().map_err(|_| {
            self.error(
                line,
                column as u64 + 1,
                format!("expected a nonnegative integer, found `{field}`"),
            )
        })
    }
}

/// `value,count` rows of nonnegative integers, each value at most once.
pub fn read_frequency_table(src: &Source) -> CliResult<FrequencyTable<f64>> {
    let header = vec!["value".to_owned(), "count".to_owned()];
    let mut seen = HashMap::new();
    let mut counts = Vec::new();
    for (line, fields) in src.csv_rows(&header)? {
        let y = src.integer(line, 0, &fields[0])?;
        let f = src.integer(line, 1, &fields[1])?;
        if let Some(first) = seen.insert(y, line) {
            return Err(src.error(line, 1, format!("value {y} already listed on line {first}")));
        }
        counts.push((y, f as f64));
    }
    Ok(FrequencyTable::new(counts)?)
}

/// `x1,...,xk` rows of integer codes, validated against `space`.
pub fn read_samples(src: &Source, space: &ProductSpace) -> CliResult<SampleMatrix<f64>> {
    let header: Vec<String> = (1..=space.k()).map(|i| format!("x{i}")).collect();
    let mut rows = Vec::new();
    for (line, fields) in src.csv_rows(&header)? {
        let mut row = Vec::with_capacity(fields.len());
        for (j, field) in fields.iter().enumerate() {
            let v = src.integer(line, j, field)? as usize;
            if v >= space.factor_size(j) {
                return Err(src.error(
                    line,
                    j as u64 + 1,
                    format!("value {v} out of range for coordinate x{} of size {}", j + 1, space.factor_size(j)),
                ));
            }
            row.push(v);
        }
        rows.push(row);
    }
    Ok(SampleMatrix::new(space.clone(), rows)?)
}

/// Edge list: one `label1,label2` per line; a single label declares an
/// isolated outcome. Blank lines and lines starting with `#` are skipped.
/// Outcomes are ordered by first appearance.
pub fn read_graph(src: &Source) -> CliResult<UndirectedGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    for (i, raw) in src.text.lines().enumerate() {
        let line = i as u64 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = raw.split(',').collect();
        if parts.len() > 2 {
            let column = raw.match_indices(',').nth(1).map_or(1, |(c, _)| c + 1) as u64;
            return Err(src.error(line, column, "expected `label1,label2`"));
        }
        let mut ids = Vec::with_capacity(2);
        let mut column = 1u64;
        for part in &parts {
            let label = part.trim();
            if label.is_empty() {
                return Err(src.error(line, column, "empty label"));
            }
            let id = *index.entry(label.to_owned()).or_insert_with(|| {
                labels.push(label.to_owned());
                labels.len() - 1
            });
            ids.push(id);
            column += part.chars().count() as u64 + 1;
        }
        if let [u, v] = ids[..] {
            if u == v {
                return Err(src.error(line, 1, format!("self-loop on `{}`", labels[u])));
            }
            edges.push((u, v));
        }
    }
    let space = OutcomeSpace::new(labels)?;
    Ok(UndirectedGraph::new(space, edges)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSpec {
    factor_sizes: Vec<usize>,
    #[serde(default)]
    edges: Vec<(usize, usize)>,
    family: String,
    #[serde(default)]
    parameter_box: Vec<(f64, f64)>,
}

/// Model JSON `{factor_sizes, edges, family, parameter_box}` with 1-based
/// coordinate indices in `edges`. Families: `ising`, `independent`, `uniform`.
pub fn read_model(src: &Source) -> CliResult<MrfModel<f64>> {
    let spec: ModelSpec = serde_json::from_str(&src.text)
        .map_err(|e| src.error(e.line() as u64, e.column() as u64, e.to_string()))?;
    let invalid = |msg: String| CliError::Invalid(format!("{}: {msg}", src.path.display()));
    let k = spec.factor_sizes.len();
    let mut edges = Vec::with_capacity(spec.edges.len());
    for &(i, j) in &spec.edges {
        if i == 0 || j == 0 || i > k || j > k || i == j {
            return Err(invalid(format!("edge ({i}, {j}) invalid for {k} coordinates (1-based)")));
        }
        edges.push((i - 1, j - 1));
    }
    let binary = spec.factor_sizes.iter().all(|&s| s == 2);
    let model = match spec.family.as_str() {
        "ising" => {
            if !binary {
                return Err(invalid("the ising family needs every factor size to be 2".into()));
            }
            let [beta, h] = spec.parameter_box[..] else {
                return Err(invalid("the ising family needs a parameter box of 2 intervals".into()));
            };
            MrfModel::ising(k, &edges, [beta, h])?
        }
        "independent" => {
            if !binary || !edges.is_empty() {
                return Err(invalid("the independent family needs binary factors and no edges".into()));
            }
            MrfModel::independent(k, spec.parameter_box)?
        }
        "uniform" => {
            if !edges.is_empty() || !spec.parameter_box.is_empty() {
                return Err(invalid("the uniform family takes no edges and no parameters".into()));
            }
            MrfModel::uniform(ProductSpace::from_sizes(&spec.factor_sizes)?)?
        }
        other => return Err(invalid(format!("unknown model family `{other}`"))),
    };
    Ok(model)
}

/// Digest entries for the report, keyed by role.
pub fn digests(sources: &[(&str, &Source)]) -> BTreeMap<String, serde_json::Value> {
    sources
        .iter()
        .map(|(role, s)| {
            (
                (*role).to_owned(),
                serde_json::json!({ "path": s.path.display().to_string(), "sha256": s.sha256 }),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn src(text: &str) -> Source {
        Source {
            path: "mem".into(),
            text: text.into(),
            sha256: sha256_hex(text.as_bytes()),
        }
    }

    fn position(e: CliError) -> (u64, u64) {
        match e {
            CliError::Parse { line, column, .. } => (line, column),
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn frequency_table_rows() {
        let ft = read_frequency_table(&src("value,count\n0, 4\n2,1\n")).unwrap();
        assert_eq!(ft.get(0), 4.0);
        assert_eq!(ft.get(1), 0.0);
        assert_eq!(ft.sum_total(), 2.0);
        assert_eq!(position(read_frequency_table(&src("value,count\n-1,4\n")).err().unwrap()), (2, 1));
        assert_eq!(position(read_frequency_table(&src("value,count\n1,2.5\n")).err().unwrap()), (2, 2));
        assert_eq!(position(read_frequency_table(&src("value,count\n1,2,3\n")).err().unwrap()).0, 2);
    }

    #[test]
    fn graph_labels_follow_first_appearance() {
        let g = read_graph(&src("# path\nb,a\n\na,c\nd\n")).unwrap();
        assert_eq!(g.space().labels(), ["b", "a", "c", "d"]);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert!(g.boundary(3).is_empty());
        assert_eq!(position(read_graph(&src("a,a\n")).err().unwrap()), (1, 1));
        assert_eq!(position(read_graph(&src("a,b\na, \n")).err().unwrap()), (2, 3));
    }

    #[test]
    fn model_edges_are_one_based() {
        let text = r#"{"factor_sizes":[2,2,2],"edges":[[1,2],[2,3]],"family":"ising","parameter_box":[[-1,1],[-1,1]]}"#;
        let m = read_model(&src(text)).unwrap();
        assert_eq!(m.edges(), vec![(0, 1), (1, 2)]);
        let zero = text.replace("[1,2]", "[0,1]");
        assert!(matches!(read_model(&src(&zero)), Err(CliError::Invalid(_))));
        let extra = text.replace("\"family\"", "\"colour\":1,\"family\"");
        assert!(matches!(read_model(&src(&extra)), Err(CliError::Parse { .. })));
        let uniform = r#"{"factor_sizes":[3,2],"family":"uniform"}"#;
        assert_eq!(read_model(&src(uniform)).unwrap().parameter_dim(), 0);
    }

    #[test]
    fn sample_rows_are_range_checked() {
        let space = ProductSpace::from_sizes(&[2, 3]).unwrap();
        let data = read_samples(&src("x1,x2\n1,2\n0,0\n"), &space).unwrap();
        assert_eq!(data.rows(), [vec![1, 2], vec![0, 0]]);
        assert_eq!(position(read_samples(&src("x1,x2\n1,3\n"), &space).err().unwrap()), (2, 2));
        assert_eq!(position(read_samples(&src("x2,x1\n1,1\n"), &space).err().unwrap()), (1, 1));
    }
}
