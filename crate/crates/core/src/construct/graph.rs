//! Incompatibility graph of deficient interaction replicas, and the greedy
//! coloring whose color classes become completion rows.

use super::{CoverageArray, Interaction};
use crate::domain::interaction_cap;
use crate::error::{Error, Result};
use crate::verify::coverage_report;

/// Vertices are (interaction, replica) pairs for every interaction covered
/// fewer than lambda times, replica in [coverage+1, lambda]. Two vertices are
/// adjacent when they carry the same interaction (distinct replicas) or two
/// incompatible interactions.
#[derive(Debug, Clone)]
pub struct IncompatibilityGraph {
    pub vertices: Vec<(Interaction, u32)>,
    adjacency: Vec<Vec<u32>>,
    pub edge_count: u64,
}

impl IncompatibilityGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn build_incompatibility_graph(array: &CoverageArray) -> Result<IncompatibilityGraph> {
    let report = coverage_report(array)?;
    let lambda = u64::from(array.params.lambda);
    let mut vertices: Vec<(Interaction, u32, usize)> = Vec::new(); // (.., group id)
    for (group, (interaction, count)) in report.deficient().into_iter().enumerate() {
        for replica in count + 1..=lambda {
            vertices.push((interaction.clone(), replica as u32, group));
        }
    }
    let n = vertices.len();
    let cap = interaction_cap();
    if (n as u128) * (n as u128) > u128::from(cap) {
        return Err(Error::CapExceeded {
            needed: (n as u128) * (n as u128),
            cap,
        });
    }
    let mut adjacency = vec![Vec::new(); n];
    let mut edge_count = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            let edge = if vertices[a].2 == vertices[b].2 {
                true // same interaction, different replica
            } else {
                !vertices[a].0.compatible(&vertices[b].0)
            };
            if edge {
                adjacency[a].push(b as u32);
                adjacency[b].push(a as u32);
                edge_count += 1;
            }
        }
    }
    Ok(IncompatibilityGraph {
        vertices: vertices.into_iter().map(|(i, r, _)| (i, r)).collect(),
        adjacency,
        edge_count,
    })
}

/// Greedy proper coloring in decreasing-degree order; uses at most
/// max-degree + 1 colors.
pub fn greedy_color(graph: &IncompatibilityGraph) -> Vec<u32> {
    let mut order: Vec<usize> = (0..graph.vertex_count()).collect();
    order.sort_by(|&a, &b| graph.degree(b).cmp(&graph.degree(a)).then(a.cmp(&b)));
    greedy_color_with_order(graph, &order)
}

pub(crate) fn greedy_color_with_order(graph: &IncompatibilityGraph, order: &[usize]) -> Vec<u32> {
    let n = graph.vertex_count();
    let mut colors = vec![u32::MAX; n];
    let mut used = vec![false; n + 1];
    for &v in order {
        for &u in graph.neighbors(v) {
            let c = colors[u as usize];
            if c != u32::MAX {
                used[c as usize] = true;
            }
        }
        let mut c = 0;
        while used[c] {
            c += 1;
        }
        colors[v] = c as u32;
        for &u in graph.neighbors(v) {
            let cu = colors[u as usize];
            if cu != u32::MAX {
                used[cu as usize] = false;
            }
        }
    }
    colors
}

pub(crate) fn color_count(colors: &[u32]) -> u32 {
    colors.iter().copied().max().map_or(0, |m| m + 1)
}
