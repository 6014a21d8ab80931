//! Reading and writing coloured instances.
//!
//! Text format, line based: a header line `k n r`, then one line per edge
//! holding k space-separated vertex labels followed by the colour index in
//! 1..=r. Lines beginning with `#` are comments and blank lines are
//! ignored. A JSON mirror of the same schema is used when a file path ends
//! in `.json`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::colouring::Colouring;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};

/// A hypergraph together with an edge colouring and file-level metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub hypergraph: Hypergraph,
    pub colouring: Colouring,
    /// Comment lines (without the leading `#`), preserved in file order.
    pub comments: Vec<String>,
    /// Generator metadata carried verbatim in the JSON mirror.
    pub construction: Option<serde_json::Value>,
}

impl Instance {
    /// Bundles a hypergraph with a colouring covering all of its edges.
    pub fn new(hypergraph: Hypergraph, colouring: Colouring) -> Result<Self> {
        for &e in hypergraph.edges() {
            colouring.colour(e)?;
        }
        Ok(Instance {
            hypergraph,
            colouring,
            comments: Vec::new(),
            construction: None,
        })
    }

    pub fn with_comments(mut self, comments: Vec<String>) -> Self {
        self.comments = comments;
        self
    }

    pub fn with_construction(mut self, construction: serde_json::Value) -> Self {
        self.construction = Some(construction);
        self
    }

    /// Renders the text form. The instance must use the contiguous labels
    /// 0..n-1, which is what every generator and parser produces.
    pub fn to_text(&self) -> Result<String> {
        let h = &self.hypergraph;
        let n = h.n();
        if h.vertex_set() != VertexSet::range(n)? {
            return Err(Error::invalid(
                "only instances with contiguous vertex labels 0..n-1 can be written",
            ));
        }
        let mut out = String::new();
        for line in &self.comments {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!("{} {} {}\n", h.k(), n, self.colouring.r()));
        for &e in h.edges() {
            for v in e.iter() {
                out.push_str(&format!("{v} "));
            }
            out.push_str(&format!("{}\n", self.colouring.colour(e)?));
        }
        Ok(out)
    }

    /// Renders the JSON mirror (pretty-printed, trailing newline).
    pub fn to_json(&self) -> Result<String> {
        let h = &self.hypergraph;
        let n = h.n();
        if h.vertex_set() != VertexSet::range(n)? {
            return Err(Error::invalid(
                "only instances with contiguous vertex labels 0..n-1 can be written",
            ));
        }
        let edges = h
            .edges()
            .iter()
            .map(|&e| {
                Ok(JsonEdge {
                    vertices: e.to_vec(),
                    colour: self.colouring.colour(e)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mirror = JsonInstance {
            k: h.k(),
            n,
            r: self.colouring.r(),
            edges,
            comments: self.comments.clone(),
            construction: self.construction.clone(),
        };
        Ok(serde_json::to_string_pretty(&mirror)? + "\n")
    }

    /// Parses the text form.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut header: Option<(usize, usize, usize)> = None;
        let mut edges: Vec<(VertexSet, usize)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                comments.push(rest.trim_start().to_string());
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let numbers = fields
                .iter()
                .map(|f| {
                    f.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("expected a non-negative integer, found `{f}`"),
                    })
                })
                .collect::<Result<Vec<usize>>>()?;
            match header {
                None => {
                    if numbers.len() != 3 {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!(
                                "header must be `k n r` (3 fields), found {}",
                                numbers.len()
                            ),
                        });
                    }
                    if numbers[2] < 1 {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "colour count r must be at least 1".into(),
                        });
                    }
                    header = Some((numbers[0], numbers[1], numbers[2]));
                }
                Some((k, n, r)) => {
                    if numbers.len() != k + 1 {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!(
                                "edge line must hold {k} labels and a colour, found {} fields",
                                numbers.len()
                            ),
                        });
                    }
                    let (labels, colour) = numbers.split_at(k);
                    if let Some(&v) = labels.iter().find(|&&v| v >= n) {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("vertex label {v} outside 0..{n}"),
                        });
                    }
                    let e = VertexSet::from_vertices(labels.iter().copied()).map_err(|err| {
                        Error::Parse {
                            line: lineno,
                            msg: err.to_string(),
                        }
                    })?;
                    if e.len() != k {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "repeated vertex label within an edge".into(),
                        });
                    }
                    if !seen.insert(e.mask()) {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("duplicate edge {e}"),
                        });
                    }
                    let colour = colour[0];
                    if colour < 1 || colour > r {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("colour {colour} outside 1..={r}"),
                        });
                    }
                    edges.push((e, colour));
                }
            }
        }
        let (k, n, r) = header.ok_or(Error::Parse {
            line: text.lines().count().max(1),
            msg: "missing header line `k n r`".into(),
        })?;
        Self::assemble(k, n, r, edges, comments, None)
    }

    /// Parses the JSON mirror.
    pub fn from_json(text: &str) -> Result<Self> {
        let mirror: JsonInstance = serde_json::from_str(text)?;
        let mut edges = Vec::with_capacity(mirror.edges.len());
        let mut seen = std::collections::HashSet::new();
        for je in &mirror.edges {
            let e = VertexSet::from_vertices(je.vertices.iter().copied())?;
            if e.len() != je.vertices.len() {
                return Err(Error::invalid(format!(
                    "repeated vertex label within the edge {:?}",
                    je.vertices
                )));
            }
            if !seen.insert(e.mask()) {
                return Err(Error::invalid(format!("duplicate edge {e}")));
            }
            if je.colour < 1 || je.colour > mirror.r {
                return Err(Error::invalid(format!(
                    "colour {} outside 1..={}",
                    je.colour, mirror.r
                )));
            }
            edges.push((e, je.colour));
        }
        Self::assemble(
            mirror.k,
            mirror.n,
            mirror.r,
            edges,
            mirror.comments,
            mirror.construction,
        )
    }

    fn assemble(
        k: usize,
        n: usize,
        r: usize,
        edges: Vec<(VertexSet, usize)>,
        comments: Vec<String>,
        construction: Option<serde_json::Value>,
    ) -> Result<Self> {
        let hypergraph = Hypergraph::new(k, n, edges.iter().map(|&(e, _)| e).collect())?;
        let colouring = Colouring::from_pairs(&hypergraph, r, &edges)?;
        Ok(Instance {
            hypergraph,
            colouring,
            comments,
            construction,
        })
    }

    /// Reads an instance, choosing the format by file extension.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        if is_json(path) {
            Self::from_json(&text)
        } else {
            Self::from_text(&text)
        }
    }

    /// Writes an instance, choosing the format by file extension.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let rendered = if is_json(path) {
            self.to_json()?
        } else {
            self.to_text()?
        };
        std::fs::write(path, rendered)?;
        Ok(())
    }
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .map_or(false, |ext| ext.eq_ignore_ascii_case("json"))
}

#[derive(Serialize, Deserialize)]
struct JsonInstance {
    k: usize,
    n: usize,
    r: usize,
    edges: Vec<JsonEdge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    comments: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    construction: Option<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    vertices: Vec<usize>,
    colour: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Instance {
        let h = Hypergraph::new(
            3,
            6,
            vec![
                VertexSet::from_vertices([0, 1, 2]).unwrap(),
                VertexSet::from_vertices([3, 4, 5]).unwrap(),
                VertexSet::from_vertices([0, 4, 5]).unwrap(),
            ],
        )
        .unwrap();
        let c = Colouring::from_fn(&h, 2, |e| if e.contains(0) { 1 } else { 2 }).unwrap();
        Instance::new(h, c).unwrap()
    }

    #[test]
    fn text_form_is_frozen() {
        let inst = tiny().with_comments(vec!["demo".into()]);
        let text = inst.to_text().unwrap();
        assert_eq!(text, "# demo\n3 6 2\n0 1 2 1\n0 4 5 1\n3 4 5 2\n");
    }

    #[test]
    fn text_round_trip() {
        let inst = tiny().with_comments(vec!["hello".into(), "world".into()]);
        let back = Instance::from_text(&inst.to_text().unwrap()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn json_round_trip_with_construction() {
        let inst = tiny()
            .with_comments(vec!["made by hand".into()])
            .with_construction(serde_json::json!({"kind": "demo", "n": 6}));
        let back = Instance::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn blank_lines_and_interleaved_comments_are_accepted() {
        let text = "\n# top\n3 6 1\n\n0 1 2 1\n# middle\n3 4 5 1\n";
        let inst = Instance::from_text(text).unwrap();
        assert_eq!(inst.hypergraph.num_edges(), 2);
        assert_eq!(inst.comments, vec!["top".to_string(), "middle".to_string()]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases: &[(&str, usize, &str)] = &[
            ("3 6\n", 1, "header"),
            ("x 6 2\n", 1, "integer"),
            ("3 6 2\n0 1 2\n", 2, "colour"),
            ("3 6 2\n0 1 2 3 1\n", 2, "fields"),
            ("3 6 2\n0 1 9 1\n", 2, "label"),
            ("3 6 2\n0 1 1 1\n", 2, "repeated"),
            ("3 6 2\n0 1 2 1\n0 2 1 1\n", 3, "duplicate"),
            ("3 6 2\n0 1 2 5\n", 2, "colour"),
            ("3 6 0\n", 1, "colour count"),
        ];
        for (text, line, needle) in cases {
            match Instance::from_text(text) {
                Err(Error::Parse { line: l, msg }) => {
                    assert_eq!(l, *line, "line number for {text:?}");
                    assert!(
                        msg.contains(needle),
                        "message {msg:?} should mention {needle:?}"
                    );
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn missing_header_is_reported() {
        assert!(matches!(
            Instance::from_text("# only comments\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn json_rejects_bad_colours_and_duplicates() {
        let bad_colour = r#"{"k":3,"n":6,"r":2,"edges":[{"vertices":[0,1,2],"colour":3}]}"#;
        assert!(Instance::from_json(bad_colour).is_err());
        let dup = r#"{"k":3,"n":6,"r":2,"edges":[
            {"vertices":[0,1,2],"colour":1},{"vertices":[2,1,0],"colour":2}]}"#;
        assert!(Instance::from_json(dup).is_err());
        let garbled = "{not json";
        assert!(matches!(Instance::from_json(garbled), Err(Error::Json(_))));
    }

    #[test]
    fn file_round_trip_dispatches_on_extension() {
        let dir = tempfile::tempdir().unwrap();
        let inst = tiny();
        let text_path = dir.path().join("inst.txt");
        let json_path = dir.path().join("inst.json");
        inst.write(&text_path).unwrap();
        inst.write(&json_path).unwrap();
        assert_eq!(Instance::read(&text_path).unwrap(), inst);
        assert_eq!(Instance::read(&json_path).unwrap(), inst);
        let raw = std::fs::read_to_string(&json_path).unwrap();
        assert!(raw.trim_start().starts_with('{'));
    }

    #[test]
    fn instance_requires_total_colouring() {
        let h = Hypergraph::new(
            3,
            6,
            vec![
                VertexSet::from_vertices([0, 1, 2]).unwrap(),
                VertexSet::from_vertices([3, 4, 5]).unwrap(),
            ],
        )
        .unwrap();
        let partial = Colouring::from_pairs(
            &Hypergraph::new(3, 6, vec![VertexSet::from_vertices([0, 1, 2]).unwrap()]).unwrap(),
            2,
            &[(VertexSet::from_vertices([0, 1, 2]).unwrap(), 1)],
        )
        .unwrap();
        assert!(Instance::new(h, partial).is_err());
    }
}
