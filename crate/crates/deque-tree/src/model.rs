//! Versioned plain-text model files.
//!
//! One node per line in pre-order. Thresholds and regression predictions
//! carry their IEEE-754 bit pattern as hex (`0x...`) next to a decimal
//! mirror, so a load reproduces bit-identical predictions while the file
//! stays readable. The decimal field is informational; only the bits are
//! parsed back.
//!
//! ```text
//! deque-tree model v1
//! task classification
//! n_features 4
//! n_classes 3
//! criterion gini
//! max_depth 8
//! min_leaf_samples 1
//! max_leaves none
//! nodes 5
//! internal 2 0x4003333333333333 2.4
//! leaf 0 50
//! internal 3 0x3ffb333333333333 1.7
//! leaf 1 54
//! leaf 2 46
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::dataset::Task;
use crate::grow::GrowConfig;
use crate::split::Criterion;
use crate::tree::{Node, Prediction, Tree};

const MAGIC: &str = "deque-tree model v1";

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: not a deque-tree model file (bad first line)")]
    BadMagic { path: String },
    #[error("{path}: line {line}: {msg}")]
    Malformed {
        path: String,
        line: usize,
        msg: String,
    },
}

/// A tree plus the metadata needed to use and reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub tree: Tree,
    pub config: GrowConfig,
}

impl ModelFile {
    pub fn new(tree: Tree, config: GrowConfig) -> Self {
        ModelFile { tree, config }
    }

    /// Serialize to the versioned text format. Deterministic: equal models
    /// render byte-identical files.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let tree = &self.tree;
        writeln!(out, "{MAGIC}").unwrap();
        writeln!(out, "task {}", tree.task).unwrap();
        writeln!(out, "n_features {}", tree.n_features).unwrap();
        if tree.task == Task::Classification {
            let n_classes = tree
                .nodes
                .iter()
                .filter_map(|n| match n {
                    Node::Leaf {
                        prediction: Prediction::Class(c),
                        ..
                    } => Some(*c as usize + 1),
                    _ => None,
                })
                .max()
                .unwrap_or(1);
            writeln!(out, "n_classes {n_classes}").unwrap();
        }
        writeln!(out, "criterion {}", self.config.criterion.name()).unwrap();
        writeln!(out, "max_depth {}", self.config.max_depth).unwrap();
        writeln!(out, "min_leaf_samples {}", self.config.min_leaf_samples).unwrap();
        match self.config.max_leaves {
            Some(limit) => writeln!(out, "max_leaves {limit}").unwrap(),
            None => writeln!(out, "max_leaves none").unwrap(),
        }
        writeln!(out, "nodes {}", tree.nodes.len()).unwrap();
        self.write_node(&mut out, 0);
        out
    }

    fn write_node(&self, out: &mut String, at: usize) {
        match &self.tree.nodes[at] {
            Node::Internal {
                feature,
                threshold,
                left,
                right,
            } => {
                writeln!(
                    out,
                    "internal {feature} {:#018x} {threshold}",
                    threshold.to_bits()
                )
                .unwrap();
                self.write_node(out, *left);
                self.write_node(out, *right);
            }
            Node::Leaf {
                prediction,
                n_samples,
            } => match prediction {
                Prediction::Class(c) => {
                    writeln!(out, "leaf {c} {n_samples}").unwrap();
                }
                Prediction::Value(v) => {
                    writeln!(out, "leaf {:#018x} {n_samples} {v}", v.to_bits()).unwrap();
                }
            },
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        std::fs::write(path, self.render()).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<ModelFile, ModelError> {
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: display.clone(),
            source,
        })?;
        Self::parse(&text, &display)
    }

    pub fn parse(text: &str, path: &str) -> Result<ModelFile, ModelError> {
        let mut lines = text.lines().enumerate();
        let err = |line: usize, msg: String| ModelError::Malformed {
            path: path.to_string(),
            line: line + 1,
            msg,
        };

        let (_, magic) = lines
            .next()
            .ok_or_else(|| ModelError::BadMagic { path: path.into() })?;
        if magic != MAGIC {
            return Err(ModelError::BadMagic { path: path.into() });
        }

        let mut task = None;
        let mut n_features = None;
        let mut criterion = None;
        let mut max_depth = None;
        let mut min_leaf = None;
        let mut max_leaves: Option<Option<usize>> = None;
        let mut n_nodes = None;

        for (line_no, line) in lines.by_ref() {
            let (key, value) = line
                .split_once(' ')
                .ok_or_else(|| err(line_no, format!("expected `key value`, found {line:?}")))?;
            match key {
                "task" => {
                    task = Some(match value {
                        "classification" => Task::Classification,
                        "regression" => Task::Regression,
                        other => return Err(err(line_no, format!("unknown task {other:?}"))),
                    })
                }
                "n_features" => {
                    n_features = Some(
                        value
                            .parse()
                            .map_err(|_| err(line_no, format!("bad n_features {value:?}")))?,
                    )
                }
                "n_classes" => { /* informational */ }
                "criterion" => {
                    criterion = Some(
                        Criterion::parse(value)
                            .ok_or_else(|| err(line_no, format!("unknown criterion {value:?}")))?,
                    )
                }
                "max_depth" => {
                    max_depth = Some(
                        value
                            .parse()
                            .map_err(|_| err(line_no, format!("bad max_depth {value:?}")))?,
                    )
                }
                "min_leaf_samples" => {
                    min_leaf = Some(
                        value
                            .parse()
                            .map_err(|_| err(line_no, format!("bad min_leaf_samples {value:?}")))?,
                    )
                }
                "max_leaves" => {
                    max_leaves = Some(if value == "none" {
                        None
                    } else {
                        Some(
                            value
                                .parse()
                                .map_err(|_| err(line_no, format!("bad max_leaves {value:?}")))?,
                        )
                    })
                }
                "nodes" => {
                    n_nodes = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| err(line_no, format!("bad node count {value:?}")))?,
                    );
                    break;
                }
                other => return Err(err(line_no, format!("unknown header key {other:?}"))),
            }
        }

        let task = task.ok_or_else(|| err(0, "missing task".into()))?;
        let n_features = n_features.ok_or_else(|| err(0, "missing n_features".into()))?;
        let n_nodes = n_nodes.ok_or_else(|| err(0, "missing node count".into()))?;
        let config = GrowConfig {
            max_depth: max_depth.ok_or_else(|| err(0, "missing max_depth".into()))?,
            min_leaf_samples: min_leaf.ok_or_else(|| err(0, "missing min_leaf_samples".into()))?,
            max_leaves: max_leaves.ok_or_else(|| err(0, "missing max_leaves".into()))?,
            criterion: criterion.ok_or_else(|| err(0, "missing criterion".into()))?,
        };

        // Pre-order reconstruction.
        let mut nodes: Vec<Node> = Vec::with_capacity(n_nodes);
        let mut remaining: Vec<(usize, &str)> = lines.collect();
        remaining.retain(|(_, l)| !l.trim().is_empty());
        let mut cursor = 0usize;
        let root = parse_subtree(&mut nodes, &remaining, &mut cursor, task, path)?;
        debug_assert_eq!(root, 0);
        if cursor != remaining.len() {
            let (line_no, _) = remaining[cursor];
            return Err(err(
                line_no,
                "trailing node lines after complete tree".into(),
            ));
        }
        if nodes.len() != n_nodes {
            return Err(err(
                0,
                format!("header says {n_nodes} nodes, file has {}", nodes.len()),
            ));
        }

        let n_leaves = nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count();
        let mut tree = Tree {
            nodes,
            n_features,
            task,
            n_leaves,
            depth: 0,
        };
        tree.depth = tree_depth(&tree, 0);
        Ok(ModelFile { tree, config })
    }
}

fn tree_depth(tree: &Tree, at: usize) -> usize {
    match &tree.nodes[at] {
        Node::Internal { left, right, .. } => {
            1 + tree_depth(tree, *left).max(tree_depth(tree, *right))
        }
        Node::Leaf { .. } => 0,
    }
}

fn parse_bits(token: &str) -> Option<u64> {
    let hex = token.strip_prefix("0x")?;
    u64::from_str_radix(hex, 16).ok()
}

/// Parse one pre-order subtree starting at `cursor`; returns the index of
/// its root in `nodes`.
fn parse_subtree(
    nodes: &mut Vec<Node>,
    lines: &[(usize, &str)],
    cursor: &mut usize,
    task: Task,
    path: &str,
) -> Result<usize, ModelError> {
    let err = |line: usize, msg: String| ModelError::Malformed {
        path: path.to_string(),
        line: line + 1,
        msg,
    };
    let last_line = lines.last().map_or(0, |&(n, _)| n);
    let &(line_no, line) = lines
        .get(*cursor)
        .ok_or_else(|| err(last_line, "unexpected end of node list".into()))?;
    *cursor += 1;
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields.first().copied() {
        Some("internal") => {
            if fields.len() != 4 {
                return Err(err(
                    line_no,
                    format!("internal node needs 3 fields: {line:?}"),
                ));
            }
            let feature: usize = fields[1]
                .parse()
                .map_err(|_| err(line_no, format!("bad feature index {:?}", fields[1])))?;
            let bits = parse_bits(fields[2])
                .ok_or_else(|| err(line_no, format!("bad threshold bits {:?}", fields[2])))?;
            let my_index = nodes.len();
            nodes.push(Node::Leaf {
                prediction: Prediction::Class(0),
                n_samples: 0,
            }); // placeholder, replaced below
            let left = parse_subtree(nodes, lines, cursor, task, path)?;
            let right = parse_subtree(nodes, lines, cursor, task, path)?;
            nodes[my_index] = Node::Internal {
                feature,
                threshold: f64::from_bits(bits),
                left,
                right,
            };
            Ok(my_index)
        }
        Some("leaf") => {
            let prediction = match task {
                Task::Classification => {
                    if fields.len() != 3 {
                        return Err(err(line_no, format!("leaf needs 2 fields: {line:?}")));
                    }
                    Prediction::Class(
                        fields[1]
                            .parse()
                            .map_err(|_| err(line_no, format!("bad class id {:?}", fields[1])))?,
                    )
                }
                Task::Regression => {
                    if fields.len() != 4 {
                        return Err(err(line_no, format!("leaf needs 3 fields: {line:?}")));
                    }
                    let bits = parse_bits(fields[1]).ok_or_else(|| {
                        err(line_no, format!("bad prediction bits {:?}", fields[1]))
                    })?;
                    Prediction::Value(f64::from_bits(bits))
                }
            };
            let n_samples: usize = fields[2]
                .parse()
                .map_err(|_| err(line_no, format!("bad sample count {:?}", fields[2])))?;
            let my_index = nodes.len();
            nodes.push(Node::Leaf {
                prediction,
                n_samples,
            });
            Ok(my_index)
        }
        _ => Err(err(line_no, format!("unknown node line {line:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Task;
    use crate::grow::grow;
    use crate::rng::SplitMix64;
    use crate::synth;

    fn trained(task: Task, seed: u64) -> ModelFile {
        let ds = synth::synthetic(400, 3, seed, task);
        let config = GrowConfig {
            max_depth: 6,
            criterion: match task {
                Task::Classification => Criterion::Gini,
                Task::Regression => Criterion::Variance,
            },
            ..GrowConfig::default()
        };
        let out = grow(&ds, &config).unwrap();
        ModelFile::new(out.tree, config)
    }

    #[test]
    fn round_trip_reproduces_predictions_exactly() {
        for task in [Task::Classification, Task::Regression] {
            let model = trained(task, 21);
            let text = model.render();
            let back = ModelFile::parse(&text, "<memory>").unwrap();
            // The file stores nodes in pre-order, so the pool layout may
            // differ from the grower's; the trees must still be identical
            // structurally and prediction-for-prediction.
            crate::oracle::trees_equal(&back.tree, &model.tree, 0.0).unwrap();
            assert_eq!(back.config, model.config);
            assert_eq!(back.tree.depth, model.tree.depth);

            let mut rng = SplitMix64::new(5);
            for _ in 0..1000 {
                let row: Vec<f32> = (0..3).map(|_| rng.next_f64() as f32).collect();
                assert_eq!(
                    model.tree.predict(&row).unwrap(),
                    back.tree.predict(&row).unwrap()
                );
            }
        }
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = trained(Task::Classification, 9).render();
        let b = trained(Task::Classification, 9).render();
        assert_eq!(a, b);
    }

    #[test]
    fn save_and_load_via_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.txt");
        let model = trained(Task::Regression, 13);
        model.save(&path).unwrap();
        let back = ModelFile::load(&path).unwrap();
        crate::oracle::trees_equal(&back.tree, &model.tree, 0.0).unwrap();
        assert_eq!(back.config, model.config);
        // A second save of the loaded model is byte-identical: pre-order is
        // a fixed point.
        assert_eq!(back.render(), std::fs::read_to_string(&path).unwrap());
    }

    #[test]
    fn rejects_wrong_magic() {
        let err = ModelFile::parse("not a model\n", "<memory>").unwrap_err();
        assert!(matches!(err, ModelError::BadMagic { .. }));
    }

    #[test]
    fn rejects_malformed_node_line() {
        let model = trained(Task::Classification, 3);
        let text = model.render().replace("internal", "inward");
        let err = ModelFile::parse(&text, "<memory>").unwrap_err();
        assert!(matches!(err, ModelError::Malformed { .. }));
    }

    #[test]
    fn rejects_truncated_file() {
        let model = trained(Task::Classification, 3);
        let text = model.render();
        let truncated: String = text
            .lines()
            .take(text.lines().count() - 1)
            .map(|l| format!("{l}\n"))
            .collect();
        assert!(ModelFile::parse(&truncated, "<memory>").is_err());
    }
}
