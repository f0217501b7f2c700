//! Bulk-synchronous map/reduce execution of the hard weighted vote.
//!
//! Each round, every labeled node sends its label along the reversed
//! transition structure: node `j` tells each `i` with `T_ij > 0` its label,
//! weighted by `T_ij`. After all map output is in, messages are sorted by
//! `(target, label, source)` and every node takes the argmax of its summed
//! votes. The fixed merge order makes the result independent of how nodes are
//! split across partitions and workers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::graph::{argmax, reversed_transition, Graph, LabelMatrix, TransitionMatrix};
use crate::matrix::Matrix;
use crate::{Error, Result};

/// A set of nodes processed together by one worker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub id: usize,
    pub nodes: Vec<usize>,
    pub worker: usize,
}

/// `count` partitions of consecutive node ids, partition `k` on worker `k`.
pub fn contiguous_partitions(n: usize, count: usize) -> Vec<Partition> {
    let count = count.max(1);
    let (base, extra) = (n / count, n % count);
    let mut start = 0;
    (0..count)
        .map(|id| {
            let len = base + usize::from(id < extra);
            let nodes = (start..start + len).collect();
            start += len;
            Partition {
                id,
                nodes,
                worker: id,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Message {
    pub target: usize,
    pub label: usize,
    pub weight: f64,
    pub source: usize,
}

/// One message per (labeled node in `part`, nonzero entry in its row of `p`).
pub fn map_phase(part: &Partition, labels: &[Option<usize>], p: &TransitionMatrix) -> Vec<Message> {
    let mut out = Vec::new();
    for &i in &part.nodes {
        if let Some(label) = labels[i] {
            out.extend(p.row(i).map(|(j, weight)| Message {
                target: j,
                label,
                weight,
                source: i,
            }));
        }
    }
    out
}

/// Argmax of the summed message weights (ties to the lower label id). With
/// no messages the node keeps `previous`.
pub fn reduce_phase(
    target: usize,
    msgs: &[Message],
    label_count: usize,
    previous: Option<usize>,
) -> Option<usize> {
    if msgs.is_empty() {
        return previous;
    }
    let mut vec = vec![0.0; label_count];
    for msg in msgs {
        debug_assert_eq!(msg.target, target);
        vec[msg.label] += msg.weight;
    }
    argmax(&vec).or(previous)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundStats {
    pub round: usize,
    pub changed: usize,
    pub messages: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineRun {
    pub labels: Vec<Option<usize>>,
    pub rounds: Vec<RoundStats>,
}

impl EngineRun {
    /// Seed rows from `y0`, one-hot rows for inferred labels.
    pub fn to_label_matrix(&self, y0: &LabelMatrix) -> LabelMatrix {
        let mut scores = Matrix::zeros(y0.node_count(), y0.label_count());
        for (i, label) in self.labels.iter().enumerate() {
            if y0.is_seed(i) {
                scores.row_mut(i).copy_from_slice(y0.row(i));
            } else if let Some(c) = label {
                scores[(i, *c)] = 1.0;
            }
        }
        y0.with_scores(scores)
    }
}

pub fn run_rounds(
    g: &Graph,
    y0: &LabelMatrix,
    workers: usize,
    rounds: usize,
    clamp_labeled: bool,
) -> Result<EngineRun> {
    let parts = contiguous_partitions(g.node_count(), workers.max(1));
    run_rounds_partitioned(g, y0, &parts, workers, rounds, clamp_labeled)
}

/// Runs up to `rounds` rounds over the given partitions. Partition `k` runs
/// on worker `k.worker % workers`. Stops early once a round changes nothing,
/// since every later round would repeat it.
pub fn run_rounds_partitioned(
    g: &Graph,
    y0: &LabelMatrix,
    partitions: &[Partition],
    workers: usize,
    rounds: usize,
    clamp_labeled: bool,
) -> Result<EngineRun> {
    let n = g.node_count();
    if y0.node_count() != n {
        return Err(Error::SizeMismatch(format!(
            "graph has {n} nodes, label matrix {} rows",
            y0.node_count()
        )));
    }
    if workers == 0 {
        return Err(Error::InvalidConfig("workers must be at least 1".into()));
    }
    if rounds == 0 {
        return Err(Error::InvalidConfig("rounds must be at least 1".into()));
    }
    check_cover(partitions, n)?;

    let p = reversed_transition(g);
    let m = y0.label_count();
    let seeds = y0.hard_labels();
    let mut labels = seeds.clone();
    let mut stats = Vec::new();
    let by_worker: Vec<Vec<&Partition>> = (0..workers)
        .map(|w| {
            partitions
                .iter()
                .filter(|part| part.worker % workers == w)
                .collect()
        })
        .collect();

    for round in 1..=rounds {
        // map; joining the scope is the barrier
        let mut msgs: Vec<Message> = std::thread::scope(|s| {
            let handles: Vec<_> = by_worker
                .iter()
                .map(|parts| {
                    let (p, labels) = (&p, &labels);
                    s.spawn(move || {
                        parts
                            .iter()
                            .flat_map(|part| map_phase(part, labels, p))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("map worker panicked"))
                .collect()
        });
        msgs.sort_unstable_by_key(|msg| (msg.target, msg.label, msg.source));
        let mut offsets = vec![0usize; n + 1];
        for msg in &msgs {
            offsets[msg.target + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }

        // reduce
        let updates: Vec<(usize, Option<usize>)> = std::thread::scope(|s| {
            let handles: Vec<_> = by_worker
                .iter()
                .map(|parts| {
                    let (msgs, offsets, labels) = (&msgs, &offsets, &labels);
                    s.spawn(move || {
                        parts
                            .iter()
                            .flat_map(|part| part.nodes.iter())
                            .map(|&i| {
                                let slice = &msgs[offsets[i]..offsets[i + 1]];
                                (i, reduce_phase(i, slice, m, labels[i]))
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("reduce worker panicked"))
                .collect()
        });

        let mut next = labels.clone();
        for (i, label) in updates {
            next[i] = label;
        }
        if clamp_labeled {
            for &s in y0.seeds() {
                next[s] = seeds[s];
            }
        }
        let changed = next.iter().zip(&labels).filter(|(a, b)| a != b).count();
        stats.push(RoundStats {
            round,
            changed,
            messages: msgs.len(),
        });
        labels = next;
        if changed == 0 {
            break;
        }
    }
    Ok(EngineRun {
        labels,
        rounds: stats,
    })
}

fn check_cover(partitions: &[Partition], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    for part in partitions {
        for &i in &part.nodes {
            if i >= n {
                return Err(Error::InvalidPartition(format!("node {i} out of range")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPartition(format!("node {i} appears twice")));
            }
        }
    }
    match seen.iter().position(|&s| !s) {
        Some(i) => Err(Error::InvalidPartition(format!("node {i} is not covered"))),
        None => Ok(()),
    }
}

/// Writes `round<TAB>changed<TAB>messages`, one line per round.
pub fn write_round_trace(path: &Path, rounds: &[RoundStats]) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    for r in rounds {
        writeln!(w, "{}\t{}\t{}", r.round, r.changed, r.messages).map_err(io)?;
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::ica::{ica_run, LocalClassifierSpec};

    fn msg(label: usize, weight: f64, source: usize) -> Message {
        Message {
            target: 9,
            label,
            weight,
            source,
        }
    }

    #[test]
    fn map_emits_per_out_entry() {
        // node 0 labeled A with p = {1: 0.5, 2: 0.5}
        let g = build_graph(&[(0, 1, 1.0), (0, 2, 1.0)], 3, true).unwrap();
        let p =
            crate::graph::transition_matrix(&g, crate::graph::DanglingPolicy::SelfLoop).unwrap();
        let part = Partition {
            id: 0,
            nodes: vec![0, 1],
            worker: 0,
        };
        let msgs = map_phase(&part, &[Some(0), None, None], &p);
        assert_eq!(msgs.len(), 2);
        assert_eq!((msgs[0].target, msgs[0].label, msgs[0].weight), (1, 0, 0.5));
        assert_eq!((msgs[1].target, msgs[1].label, msgs[1].weight), (2, 0, 0.5));
        let empty = Partition {
            id: 1,
            nodes: vec![],
            worker: 0,
        };
        assert!(map_phase(&empty, &[Some(0), None, None], &p).is_empty());
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(
            reduce_phase(
                9,
                &[msg(0, 0.5, 1), msg(1, 0.3, 2), msg(0, 0.2, 3)],
                2,
                None
            ),
            Some(0)
        );
        assert_eq!(
            reduce_phase(9, &[msg(0, 0.5, 1), msg(1, 0.5, 2)], 2, None),
            Some(0)
        );
        assert_eq!(reduce_phase(9, &[], 2, Some(1)), Some(1));
    }

    #[test]
    fn chain_two_rounds() {
        let g = build_graph(&[(0, 1, 1.0), (1, 2, 1.0)], 3, false).unwrap();
        let y = LabelMatrix::from_hard(3, 2, &[(0, 1)]).unwrap();
        let r1 = run_rounds(&g, &y, 1, 1, true).unwrap();
        assert_eq!(r1.labels, vec![Some(1), Some(1), None]);
        let r2 = run_rounds(&g, &y, 2, 2, true).unwrap();
        assert_eq!(r2.labels, vec![Some(1), Some(1), Some(1)]);
        assert_eq!(r2.rounds[0].messages, 1);
        assert_eq!(r2.rounds[1].messages, 3);
    }

    #[test]
    fn worker_counts_and_covers_agree() {
        let edges: Vec<(usize, usize, f64)> = (0..40)
            .flat_map(|i| {
                [
                    (i, (i + 1) % 40, 1.0 + (i % 3) as f64),
                    (i, (i * 11 + 5) % 40, 0.5),
                ]
            })
            .filter(|&(a, b, _)| a != b)
            .collect();
        let g = build_graph(&edges, 40, true).unwrap();
        let y = LabelMatrix::from_hard(40, 3, &[(0, 0), (13, 1), (27, 2)]).unwrap();
        let base = run_rounds(&g, &y, 1, 6, true).unwrap();
        for w in [2, 4, 8] {
            assert_eq!(run_rounds(&g, &y, w, 6, true).unwrap(), base);
        }
        let odd_even = vec![
            Partition {
                id: 0,
                nodes: (0..40).filter(|i| i % 2 == 1).collect(),
                worker: 0,
            },
            Partition {
                id: 1,
                nodes: (0..40).filter(|i| i % 2 == 0).rev().collect(),
                worker: 1,
            },
        ];
        let r = run_rounds_partitioned(&g, &y, &odd_even, 2, 6, true).unwrap();
        assert_eq!(r.labels, base.labels);

        let ica = ica_run(&g, &y, &LocalClassifierSpec::hard_vote(), 6).unwrap();
        assert_eq!(ica.labels.hard_labels(), base.labels);
    }

    #[test]
    fn bad_cover_rejected() {
        let g = build_graph(&[(0, 1, 1.0)], 2, false).unwrap();
        let y = LabelMatrix::from_hard(2, 1, &[(0, 0)]).unwrap();
        let parts = vec![Partition {
            id: 0,
            nodes: vec![0],
            worker: 0,
        }];
        assert!(matches!(
            run_rounds_partitioned(&g, &y, &parts, 1, 1, true),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn trace_file_format() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.tsv");
        let stats = [RoundStats {
            round: 1,
            changed: 2,
            messages: 5,
        }];
        write_round_trace(&path, &stats).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "1\t2\t5\n");
    }
}
