use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lattice::{ClosureLattice, TotalOrder};
use crate::stab_matrix::StabPattern;
use crate::vertex_set::VertexSet;
use crate::word::{PcGroup, Word};

/// A graph together with everything derived from it: the closure lattice,
/// the total order `≺`, the group with `≺`-canonical words, and the matrix
/// patterns of the closed sets (built on first use).
#[derive(Debug)]
pub struct Context {
    graph: Arc<Graph>,
    lattice: ClosureLattice,
    order: TotalOrder,
    group: Arc<PcGroup>,
    patterns: Vec<OnceLock<Arc<StabPattern>>>,
}

impl Context {
    pub fn new(graph: Graph) -> Result<Self> {
        let tie = TotalOrder::identity_tie_break(graph.len());
        Self::with_tie_break(graph, &tie)
    }

    pub fn with_tie_break(graph: Graph, tie_break: &[usize]) -> Result<Self> {
        let graph = Arc::new(graph);
        let lattice = ClosureLattice::enumerate(&graph);
        let order = lattice.build_total_order(tie_break)?;
        let group = PcGroup::with_order(Arc::clone(&graph), &order);
        let patterns = (0..lattice.len()).map(|_| OnceLock::new()).collect();
        Ok(Context {
            graph,
            lattice,
            order,
            group,
            patterns,
        })
    }

    /// Tie-break given as vertex names.
    pub fn with_tie_break_names<S: AsRef<str>>(graph: Graph, names: &[S]) -> Result<Self> {
        let tie = names
            .iter()
            .map(|s| {
                graph
                    .index_of(s.as_ref())
                    .map_err(|_| Error::InvalidTieBreak(format!("unknown vertex `{}`", s.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_tie_break(graph, &tie)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn lattice(&self) -> &ClosureLattice {
        &self.lattice
    }

    pub fn order(&self) -> &TotalOrder {
        &self.order
    }

    pub fn group(&self) -> &Arc<PcGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        self.graph.vertices()
    }

    pub fn pattern(&self, y: VertexSet) -> Result<&Arc<StabPattern>> {
        let i = self
            .lattice
            .index_of(y)
            .ok_or_else(|| Error::NotClosed(self.graph.format_set(y)))?;
        Ok(self.patterns[i]
            .get_or_init(|| Arc::new(StabPattern::new(&self.lattice, &self.order, y).expect("closed set"))))
    }

    /// Pattern of `S_X`.
    pub fn x_pattern(&self) -> &Arc<StabPattern> {
        self.pattern(self.vertices()).expect("X is closed")
    }

    pub fn word(&self, literal: &str) -> Result<Word> {
        self.group.parse(literal)
    }

    pub fn set(&self, names: &[&str]) -> Result<VertexSet> {
        self.graph.set_of(names)
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.graph.index_of(name)
    }
}
