//! The lattice `L(Γ)` of closed vertex sets, the `<_L` preorder on vertices,
//! the equivalence classes `[x]`, heights, and the stratified total order `≺`
//! used to index matrix rows.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{dot_id, Graph};
use crate::vertex_set::VertexSet;

/// Outcome of comparing two vertices by their closures.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LOrder {
    Less,
    Equal,
    Greater,
    Incomparable,
}

#[derive(Clone, Debug)]
pub struct ClosureLattice {
    n: usize,
    balls: Vec<VertexSet>,
    closed_sets: Vec<VertexSet>,
    singleton_closure: Vec<VertexSet>,
    lx: Vec<usize>,
    classes: Vec<VertexSet>,
    class_of: Vec<usize>,
    heights: Vec<usize>,
}

impl ClosureLattice {
    /// Every closed set is `Y^⊥` for some `Y`, i.e. an intersection of unit
    /// balls `x^⊥`; the empty intersection gives `X`. A worklist closes the
    /// balls under intersection.
    pub fn enumerate(g: &Graph) -> Self {
        let n = g.len();
        let full = g.vertices();
        let balls: Vec<VertexSet> = (0..n).map(|x| g.ball(x)).collect();

        let mut seen: HashSet<VertexSet> = HashSet::new();
        let mut queue: VecDeque<VertexSet> = VecDeque::new();
        for y in std::iter::once(full).chain(balls.iter().copied()) {
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
        while let Some(y) = queue.pop_front() {
            for b in &balls {
                let z = y & *b;
                if seen.insert(z) {
                    queue.push_back(z);
                }
            }
        }
        let mut closed_sets: Vec<VertexSet> = seen.into_iter().collect();
        closed_sets.sort_by_key(|s| (s.len(), s.bits()));

        let orth = |y: VertexSet| y.iter().fold(full, |acc, v| acc & balls[v]);
        let singleton_closure: Vec<VertexSet> = (0..n).map(|x| orth(balls[x])).collect();
        let lx = singleton_closure
            .iter()
            .map(|c| {
                closed_sets
                    .binary_search_by_key(&(c.len(), c.bits()), |s| (s.len(), s.bits()))
                    .unwrap()
            })
            .collect();

        let mut classes: Vec<VertexSet> = Vec::new();
        let mut class_of = vec![usize::MAX; n];
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let members: VertexSet = (x..n).filter(|&y| balls[y] == balls[x]).collect();
            for y in members {
                class_of[y] = classes.len();
            }
            classes.push(members);
        }

        let mut lat = ClosureLattice {
            n,
            balls,
            closed_sets,
            singleton_closure,
            lx,
            classes,
            class_of,
            heights: vec![usize::MAX; n],
        };
        lat.heights = lat.compute_heights();
        lat
    }

    /// Stage `i` collects the closures `cl(x)` not yet placed all of whose
    /// strict `<_L` predecessors' closures were placed in earlier stages.
    fn compute_heights(&self) -> Vec<usize> {
        let mut heights = vec![usize::MAX; self.n];
        let mut placed = vec![false; self.closed_sets.len()];
        let mut stage = 0;
        while heights.contains(&usize::MAX) {
            let fresh: Vec<usize> = (0..self.n)
                .filter(|&x| heights[x] == usize::MAX)
                .filter(|&x| self.strictly_below(x).iter().all(|y| placed[self.lx[y]]))
                .collect();
            assert!(!fresh.is_empty(), "height stratification stalled");
            for &x in &fresh {
                heights[x] = stage;
            }
            for &x in &fresh {
                placed[self.lx[x]] = true;
            }
            stage += 1;
        }
        heights
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Closed sets ordered by size, then bitmask.
    pub fn closed_sets(&self) -> &[VertexSet] {
        &self.closed_sets
    }

    pub fn len(&self) -> usize {
        self.closed_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closed_sets.is_empty()
    }

    pub fn index_of(&self, y: VertexSet) -> Option<usize> {
        self.closed_sets
            .binary_search_by_key(&(y.len(), y.bits()), |s| (s.len(), s.bits()))
            .ok()
    }

    pub fn contains(&self, y: VertexSet) -> bool {
        self.index_of(y).is_some()
    }

    pub fn require_closed(&self, y: VertexSet) -> Result<()> {
        if self.contains(y) {
            Ok(())
        } else {
            Err(Error::NotClosed(format!("{y}")))
        }
    }

    pub fn orth(&self, y: VertexSet) -> VertexSet {
        y.iter().fold(self.full(), |acc, v| acc & self.balls[v])
    }

    pub fn closure(&self, y: VertexSet) -> VertexSet {
        self.orth(self.orth(y))
    }

    /// `x^⊥`.
    pub fn orth_of(&self, x: usize) -> VertexSet {
        self.balls[x]
    }

    /// `cl({x})`.
    pub fn cl(&self, x: usize) -> VertexSet {
        self.singleton_closure[x]
    }

    /// Index of `cl(x)` in [`closed_sets`](Self::closed_sets).
    pub fn lx_index(&self, x: usize) -> usize {
        self.lx[x]
    }

    /// The distinct singleton closures `L_X`.
    pub fn lx_sets(&self) -> Vec<VertexSet> {
        let mut idx: Vec<usize> = self.lx.clone();
        idx.sort_unstable();
        idx.dedup();
        idx.into_iter().map(|i| self.closed_sets[i]).collect()
    }

    pub fn meet(&self, a: VertexSet, b: VertexSet) -> VertexSet {
        a & b
    }

    pub fn join(&self, a: VertexSet, b: VertexSet) -> VertexSet {
        self.closure(a | b)
    }

    /// `[x] = {y : y^⊥ = x^⊥}`.
    pub fn equiv_class(&self, x: usize) -> VertexSet {
        self.classes[self.class_of[x]]
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn class_index(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// Vertices whose class is a singleton.
    pub fn n1(&self) -> VertexSet {
        (0..self.n).filter(|&x| self.equiv_class(x).len() == 1).collect()
    }

    /// Vertices whose class has at least two members.
    pub fn n2(&self) -> VertexSet {
        (0..self.n).filter(|&x| self.equiv_class(x).len() >= 2).collect()
    }

    pub fn l_compare(&self, x: usize, y: usize) -> LOrder {
        let (cx, cy) = (self.cl(x), self.cl(y));
        if cx == cy {
            LOrder::Equal
        } else if cx.is_subset(cy) {
            LOrder::Less
        } else if cy.is_subset(cx) {
            LOrder::Greater
        } else {
            LOrder::Incomparable
        }
    }

    /// `x <_L y`.
    pub fn l_less(&self, x: usize, y: usize) -> bool {
        self.l_compare(x, y) == LOrder::Less
    }

    /// `{y : y <_L x}`.
    pub fn strictly_below(&self, x: usize) -> VertexSet {
        let cx = self.cl(x);
        (0..self.n).filter(|&y| self.cl(y).is_strict_subset(cx)).collect()
    }

    pub fn is_l_minimal(&self, x: usize) -> bool {
        self.strictly_below(x).is_empty()
    }

    pub fn is_l_maximal(&self, x: usize) -> bool {
        (0..self.n).all(|y| !self.l_less(x, y))
    }

    /// `L^max`: closures of the `<_L`-maximal vertices, without repeats.
    pub fn l_max_sets(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = Vec::new();
        for x in (0..self.n).filter(|&x| self.is_l_maximal(x)) {
            if !out.contains(&self.cl(x)) {
                out.push(self.cl(x));
            }
        }
        out
    }

    /// `{z : z is L-maximal and x ≤_L z}`.
    ///
    /// This is the non-strict reading of the set `M_x`: a strict comparison
    /// would exclude `x` itself when `x` is maximal, although the image of
    /// `x` must stay inside the subgroup these vertices generate.
    pub fn max_support(&self, x: usize) -> VertexSet {
        let cx = self.cl(x);
        (0..self.n)
            .filter(|&z| self.is_l_maximal(z) && cx.is_subset(self.cl(z)))
            .collect()
    }

    /// `∩ {cl(z) : z ∈ max_support(x)}`: every automorphism that stabilises
    /// each `G(Y)` with `Y ∈ L^max` sends `x` into the subgroup generated by
    /// this set.
    pub fn max_envelope(&self, x: usize) -> VertexSet {
        self.max_support(x)
            .iter()
            .fold(self.full(), |acc, z| acc & self.cl(z))
    }

    pub fn height(&self, x: usize) -> usize {
        self.heights[x]
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    /// Covering pairs `(lower, upper)` of the inclusion order, as indices
    /// into [`closed_sets`](Self::closed_sets).
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let sets = &self.closed_sets;
        let mut out = Vec::new();
        for (j, &upper) in sets.iter().enumerate() {
            let below: Vec<usize> = (0..sets.len())
                .filter(|&i| sets[i].is_strict_subset(upper))
                .collect();
            for &i in &below {
                let covered = below.iter().any(|&k| sets[i].is_strict_subset(sets[k]));
                if !covered {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn hasse_dot(&self, g: &Graph) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
        for (i, &y) in self.closed_sets.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label={}];", dot_id(&g.format_set(y)));
        }
        for (i, j) in self.hasse() {
            let _ = writeln!(s, "  n{i} -> n{j};");
        }
        s.push_str("}\n");
        s
    }

    /// Builds `≺` with every free choice resolved by `tie_break`.
    pub fn build_total_order(&self, tie_break: &[usize]) -> Result<TotalOrder> {
        TotalOrder::build(self, tie_break)
    }
}

/// A total order `x_1 ≺ ⋯ ≺ x_k` on the vertices in which `x <_L y` forces
/// `y ≺ x` and every class `[x]` is an interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TotalOrder {
    sequence: Vec<usize>,
    position: Vec<usize>,
    heights: Vec<usize>,
    tie_break: Vec<usize>,
}

impl TotalOrder {
    /// Stages are processed in increasing height. Each class of a stage is
    /// placed in front of everything ordered so far; the classes of one stage
    /// are placed in decreasing `tie_break` order of their least member, so
    /// that the final sequence lists them in increasing `tie_break` order.
    /// Members of a class follow `tie_break`.
    pub fn build(lat: &ClosureLattice, tie_break: &[usize]) -> Result<Self> {
        let n = lat.vertex_count();
        let mut rank = vec![usize::MAX; n];
        if tie_break.len() != n {
            return Err(Error::InvalidTieBreak(format!(
                "expected {n} vertices, got {}",
                tie_break.len()
            )));
        }
        for (i, &v) in tie_break.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(Error::InvalidTieBreak(format!("not a permutation at #{v}")));
            }
            rank[v] = i;
        }

        let max_height = lat.heights().iter().copied().max().unwrap_or(0);
        let mut sequence: VecDeque<usize> = VecDeque::with_capacity(n);
        let mut placed = VertexSet::EMPTY;
        for stage in 0..=max_height {
            let mut stage_classes: Vec<VertexSet> = Vec::new();
            for x in (0..n).filter(|&x| lat.height(x) == stage) {
                let class = lat.equiv_class(x);
                if !stage_classes.contains(&class) {
                    stage_classes.push(class);
                }
            }
            let least = |c: &VertexSet| c.iter().map(|v| rank[v]).min().unwrap();
            stage_classes.sort_by_key(|c| std::cmp::Reverse(least(c)));
            let mut stage_new = VertexSet::EMPTY;
            for class in stage_classes {
                let rep = class.first().unwrap();
                debug_assert_eq!(class, lat.cl(rep) - placed);
                let mut members: Vec<usize> = class.iter().collect();
                members.sort_by_key(|&v| rank[v]);
                for &v in members.iter().rev() {
                    sequence.push_front(v);
                }
                stage_new = stage_new | class;
            }
            placed = placed | stage_new;
        }

        let sequence: Vec<usize> = sequence.into_iter().collect();
        let mut position = vec![0; n];
        for (i, &v) in sequence.iter().enumerate() {
            position[v] = i;
        }
        Ok(TotalOrder {
            sequence,
            position,
            heights: lat.heights().to_vec(),
            tie_break: tie_break.to_vec(),
        })
    }

    pub fn identity_tie_break(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    /// Vertices listed from `≺`-least to `≺`-greatest.
    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn precedes(&self, x: usize, y: usize) -> bool {
        self.position[x] < self.position[y]
    }

    pub fn height(&self, v: usize) -> usize {
        self.heights[v]
    }

    pub fn tie_break(&self) -> &[usize] {
        &self.tie_break
    }

    /// Members of `y` in `≺` order.
    pub fn sorted(&self, y: VertexSet) -> Vec<usize> {
        let mut v: Vec<usize> = y.iter().collect();
        v.sort_by_key(|&x| self.position[x]);
        v
    }

    /// `X^min`: the `≺`-least member of every class.
    pub fn x_min(&self, lat: &ClosureLattice) -> VertexSet {
        lat.classes()
            .iter()
            .map(|c| *self.sorted(*c).first().unwrap())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn sets(g: &Graph, list: &[&[&str]]) -> Vec<VertexSet> {
        let mut v: Vec<VertexSet> = list.iter().map(|l| g.set_of(l).unwrap()).collect();
        v.sort_by_key(|s| (s.len(), s.bits()));
        v
    }

    fn brute_force_lattice(g: &Graph) -> Vec<VertexSet> {
        let mut v: Vec<VertexSet> = g.vertices().subsets().map(|y| g.orth(y)).collect();
        v.sort_by_key(|s| (s.len(), s.bits()));
        v.dedup();
        v
    }

    #[test]
    fn lattice_examples() {
        let g = p3();
        let lat = ClosureLattice::enumerate(&g);
        let expect = sets(&g, &[&["b"], &["a", "b"], &["b", "c"], &["a", "b", "c"]]);
        assert_eq!(lat.closed_sets(), expect.as_slice());
        assert_eq!(lat.closed_sets(), brute_force_lattice(&g).as_slice());

        let k = k3();
        assert_eq!(ClosureLattice::enumerate(&k).closed_sets(), &[k.vertices()]);

        let e = edgeless(&["a", "b", "c"]);
        let expect = sets(&e, &[&[], &["a"], &["b"], &["c"], &["a", "b", "c"]]);
        assert_eq!(ClosureLattice::enumerate(&e).closed_sets(), expect.as_slice());
    }

    #[test]
    fn meet_and_join() {
        let g = p3();
        let lat = ClosureLattice::enumerate(&g);
        let ab = g.set_of(&["a", "b"]).unwrap();
        let bc = g.set_of(&["b", "c"]).unwrap();
        assert_eq!(lat.meet(ab, bc), g.set_of(&["b"]).unwrap());
        assert_eq!(lat.join(ab, bc), g.vertices());
    }

    #[test]
    fn class_examples() {
        let g = p3();
        let lat = ClosureLattice::enumerate(&g);
        assert_eq!(lat.equiv_class(0), VertexSet::singleton(0));
        let k = ClosureLattice::enumerate(&k3());
        assert_eq!(k.equiv_class(0), VertexSet::full(3));
        let edge = Graph::from_named(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(
            ClosureLattice::enumerate(&edge).equiv_class(0),
            VertexSet::full(2)
        );
    }

    #[test]
    fn compare_examples() {
        let lat = ClosureLattice::enumerate(&p3());
        assert_eq!(lat.l_compare(1, 0), LOrder::Less);
        assert_eq!(lat.l_compare(2, 2), LOrder::Equal);
        assert_eq!(lat.l_compare(0, 2), LOrder::Incomparable);
        assert_eq!(lat.l_compare(0, 1), LOrder::Greater);
    }

    #[test]
    fn max_examples() {
        let g = p3();
        let lat = ClosureLattice::enumerate(&g);
        assert_eq!(
            lat.l_max_sets(),
            vec![g.set_of(&["a", "b"]).unwrap(), g.set_of(&["b", "c"]).unwrap()]
        );
        assert_eq!(lat.max_support(1), g.set_of(&["a", "c"]).unwrap());
        assert_eq!(lat.max_support(0), g.set_of(&["a"]).unwrap());
        assert_eq!(lat.max_envelope(1), g.set_of(&["b"]).unwrap());

        let k = ClosureLattice::enumerate(&k3());
        assert_eq!(k.l_max_sets(), vec![VertexSet::full(3)]);
        assert_eq!(k.max_support(0), VertexSet::full(3));

        let e = edgeless(&["a", "b", "c"]);
        let le = ClosureLattice::enumerate(&e);
        assert_eq!(le.l_max_sets().len(), 3);
    }

    #[test]
    fn total_order_examples() {
        let g = p3();
        let lat = ClosureLattice::enumerate(&g);
        let ord = lat.build_total_order(&[0, 1, 2]).unwrap();
        assert_eq!(ord.sequence(), &[0, 2, 1]);
        assert_eq!(lat.heights(), &[1, 0, 1]);

        let k = ClosureLattice::enumerate(&k3());
        let ok = k.build_total_order(&[0, 1, 2]).unwrap();
        assert_eq!(ok.sequence(), &[0, 1, 2]);
        assert_eq!(k.heights(), &[0, 0, 0]);

        let e = ClosureLattice::enumerate(&edgeless(&["a", "b", "c"]));
        let oe = e.build_total_order(&[2, 0, 1]).unwrap();
        assert_eq!(oe.sequence(), &[2, 0, 1]);
        assert_eq!(e.heights(), &[0, 0, 0]);
    }

    #[test]
    fn rejects_bad_tie_break() {
        let lat = ClosureLattice::enumerate(&p3());
        assert!(lat.build_total_order(&[0, 0, 1]).is_err());
        assert!(lat.build_total_order(&[0, 1]).is_err());
    }

    #[test]
    fn hasse_of_p3() {
        let g = p3();
        let lat = ClosureLattice::enumerate(&g);
        let mut h = lat.hasse();
        h.sort();
        // {b} < {a,b}, {b} < {b,c}, both < X
        assert_eq!(h, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(lat.hasse_dot(&g).contains("n0 -> n1"));
    }
}
