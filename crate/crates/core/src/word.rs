//! Elements of the partially commutative group `G(Γ)` in canonical normal
//! form.
//!
//! A word is kept freely and commutation reduced, and among all reduced
//! spellings of the same element the lexicographically least one is stored,
//! where letters compare by the position of their vertex in a fixed letter
//! order and then by sign (`x` before `x^-1`). Equal elements therefore have
//! identical letter sequences.

use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lattice::TotalOrder;
use crate::vertex_set::VertexSet;

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(u16);

impl Letter {
    pub fn new(vertex: usize, inverse: bool) -> Self {
        Letter((vertex as u16) << 1 | inverse as u16)
    }

    pub fn vertex(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// `+1` or `-1`.
    pub fn exponent(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }
}

/// The group `G(Γ)` together with the letter order used for normal forms.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PcGroup {
    graph: Arc<Graph>,
    adj: Vec<u64>,
    rank: Vec<u16>,
}

impl PcGroup {
    /// Letters ordered by vertex index.
    pub fn new(graph: Arc<Graph>) -> Arc<Self> {
        let rank = (0..graph.len() as u16).collect();
        Self::with_rank(graph, rank)
    }

    /// Letters ordered by `≺`.
    pub fn with_order(graph: Arc<Graph>, order: &TotalOrder) -> Arc<Self> {
        let rank = (0..graph.len()).map(|v| order.position(v) as u16).collect();
        Self::with_rank(graph, rank)
    }

    fn with_rank(graph: Arc<Graph>, rank: Vec<u16>) -> Arc<Self> {
        let adj = graph.adjacency_bits().to_vec();
        Arc::new(PcGroup { graph, adj, rank })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.adj.len()
    }

    /// Whether the two generators commute and are distinct.
    #[inline]
    pub fn commute(&self, x: usize, y: usize) -> bool {
        self.adj[x] >> y & 1 == 1
    }

    #[inline]
    fn key(&self, l: Letter) -> u32 {
        (self.rank[l.vertex()] as u32) << 1 | l.is_inverse() as u32
    }

    pub fn identity(self: &Arc<Self>) -> Word {
        Word {
            group: Arc::clone(self),
            letters: Vec::new(),
        }
    }

    pub fn generator(self: &Arc<Self>, v: usize) -> Word {
        Word {
            group: Arc::clone(self),
            letters: vec![Letter::new(v, false)],
        }
    }

    /// Normal form of a product of powers `v^e`.
    pub fn word(self: &Arc<Self>, raw: &[(usize, i64)]) -> Result<Word> {
        let mut buf = Vec::new();
        for &(v, e) in raw {
            self.graph.check_vertex(v)?;
            let l = Letter::new(v, e < 0);
            for _ in 0..e.unsigned_abs() {
                self.push_reduced(&mut buf, l);
            }
        }
        Ok(self.finish(buf))
    }

    /// Normal form of a letter sequence.
    pub fn from_letters(self: &Arc<Self>, letters: &[Letter]) -> Result<Word> {
        let mut buf = Vec::with_capacity(letters.len());
        for &l in letters {
            self.graph.check_vertex(l.vertex())?;
            self.push_reduced(&mut buf, l);
        }
        Ok(self.finish(buf))
    }

    /// Parses whitespace-separated tokens `a`, `a^-1`, `a^3`; `1` or the
    /// empty string is the identity.
    pub fn parse(self: &Arc<Self>, literal: &str) -> Result<Word> {
        let mut raw = Vec::new();
        for tok in literal.split_whitespace() {
            if tok == "1" && self.graph.index_of("1").is_err() {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((name, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                    (name, e)
                }
                None => (tok, 1),
            };
            raw.push((self.graph.index_of(name)?, exp));
        }
        self.word(&raw)
    }

    /// Appends `l` to a reduced sequence, cancelling it against the last
    /// occurrence of its vertex when everything in between commutes with it.
    fn push_reduced(&self, buf: &mut Vec<Letter>, l: Letter) {
        let v = l.vertex();
        let adj_v = self.adj[v];
        for p in (0..buf.len()).rev() {
            let k = buf[p];
            if k.vertex() == v {
                if k == l.inverse() {
                    buf.remove(p);
                    return;
                }
                break;
            }
            if adj_v >> k.vertex() & 1 == 0 {
                break;
            }
        }
        buf.push(l);
    }

    /// Lexicographically least rearrangement of a reduced sequence: repeatedly
    /// emit the smallest letter that can be commuted to the front.
    fn finish(self: &Arc<Self>, reduced: Vec<Letter>) -> Word {
        Word {
            group: Arc::clone(self),
            letters: self.canonical(reduced),
        }
    }

    fn canonical(&self, mut rest: Vec<Letter>) -> Vec<Letter> {
        let n = rest.len();
        if n <= 1 {
            return rest;
        }
        let mut out = Vec::with_capacity(n);
        while !rest.is_empty() {
            let mut seen = 0u64;
            let mut best: Option<(u32, usize)> = None;
            for (i, &l) in rest.iter().enumerate() {
                let v = l.vertex();
                if seen & !self.adj[v] == 0 {
                    let k = self.key(l);
                    if best.is_none_or(|(bk, _)| k < bk) {
                        best = Some((k, i));
                    }
                }
                seen |= 1u64 << v;
            }
            let (_, i) = best.expect("first letter is always movable");
            out.push(rest.remove(i));
        }
        out
    }
}

/// An element of `G(Γ)` in normal form.
#[derive(Clone)]
pub struct Word {
    group: Arc<PcGroup>,
    letters: Vec<Letter>,
}

/// `w = conjugator^-1 ∘ core ∘ conjugator` with `core` cyclically minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub conjugator: Word,
    pub core: Word,
}

impl Word {
    pub fn group(&self) -> &Arc<PcGroup> {
        &self.group
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// `lg(w)`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// `α(w)`: the generators occurring in the normal form.
    pub fn alpha(&self) -> VertexSet {
        self.letters.iter().map(|l| l.vertex()).collect()
    }

    pub fn same_group(&self, other: &Word) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group
    }

    fn check_group(&self, other: &Word) -> Result<()> {
        if self.same_group(other) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn try_mul(&self, other: &Word) -> Result<Word> {
        self.check_group(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Word) -> Word {
        if other.is_identity() {
            return self.clone();
        }
        if self.is_identity() {
            return other.clone();
        }
        let mut buf = self.letters.clone();
        buf.reserve(other.len());
        for &l in &other.letters {
            self.group.push_reduced(&mut buf, l);
        }
        self.group.finish(buf)
    }

    /// Multiplies by a single letter on the right.
    pub fn mul_letter(&self, l: Letter) -> Word {
        let mut buf = self.letters.clone();
        self.group.push_reduced(&mut buf, l);
        self.group.finish(buf)
    }

    pub fn inverse(&self) -> Word {
        let rev: Vec<Letter> = self.letters.iter().rev().map(|l| l.inverse()).collect();
        self.group.finish(rev)
    }

    /// `g^-1 · self · g`.
    pub fn conjugate(&self, g: &Word) -> Word {
        &(&g.inverse() * self) * g
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.group.identity();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn commutes_with(&self, other: &Word) -> bool {
        (self * other) == (other * self)
    }

    /// Whether `w = l ∘ v` for some `v`: the first occurrence of `l`'s vertex
    /// is `l` itself and every earlier letter commutes with it.
    pub fn has_left_divisor(&self, l: Letter) -> bool {
        let v = l.vertex();
        for &k in &self.letters {
            if k.vertex() == v {
                return k == l;
            }
            if !self.group.commute(v, k.vertex()) {
                return false;
            }
        }
        false
    }

    /// Whether `w = v ∘ l` for some `v`.
    pub fn has_right_divisor(&self, l: Letter) -> bool {
        let v = l.vertex();
        for &k in self.letters.iter().rev() {
            if k.vertex() == v {
                return k == l;
            }
            if !self.group.commute(v, k.vertex()) {
                return false;
            }
        }
        false
    }

    /// Letters `l` with `w = l ∘ v`, in `≺` order.
    pub fn left_divisor_letters(&self) -> Vec<Letter> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for &k in &self.letters {
            let v = k.vertex();
            if seen & !self.group.adj[v] == 0 {
                out.push(k);
            }
            seen |= 1u64 << v;
        }
        out.sort_by_key(|&l| self.group.key(l));
        out
    }

    /// Letters `l` with `w = v ∘ l`, in `≺` order.
    pub fn right_divisor_letters(&self) -> Vec<Letter> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for &k in self.letters.iter().rev() {
            let v = k.vertex();
            if seen & !self.group.adj[v] == 0 {
                out.push(k);
            }
            seen |= 1u64 << v;
        }
        out.sort_by_key(|&l| self.group.key(l));
        out
    }

    /// Removes one occurrence of a left-divisor letter.
    fn strip_left(&self, l: Letter) -> Word {
        let p = self
            .letters
            .iter()
            .position(|k| k.vertex() == l.vertex())
            .unwrap();
        let mut rest = self.letters.clone();
        rest.remove(p);
        self.group.finish(rest)
    }

    /// Removes one occurrence of a right-divisor letter.
    fn strip_right(&self, l: Letter) -> Word {
        let p = self
            .letters
            .iter()
            .rposition(|k| k.vertex() == l.vertex())
            .unwrap();
        let mut rest = self.letters.clone();
        rest.remove(p);
        self.group.finish(rest)
    }

    /// Peels letters `t` with `w = t^-1 ∘ w' ∘ t` until none remain, taking
    /// the `≺`-least candidate each time.
    pub fn cyclic_reduce(&self) -> CyclicDecomposition {
        let mut core = self.clone();
        let mut peeled: Vec<Letter> = Vec::new();
        loop {
            let t = core
                .right_divisor_letters()
                .into_iter()
                .find(|&t| core.has_left_divisor(t.inverse()));
            match t {
                Some(t) => {
                    core = core.strip_left(t.inverse()).strip_right(t);
                    peeled.push(t);
                }
                None => break,
            }
        }
        // outermost letter is applied last: d = t_k ⋯ t_1
        peeled.reverse();
        let conjugator = self.group.finish(peeled);
        CyclicDecomposition { conjugator, core }
    }

    pub fn is_cyclically_minimal(&self) -> bool {
        self.right_divisor_letters()
            .into_iter()
            .all(|t| !self.has_left_divisor(t.inverse()))
    }

    /// Splits a cyclically minimal word into pairwise commuting blocks, one
    /// per connected component of the non-commutation graph on `α(w)`.
    pub fn block_decomposition(&self) -> Result<Vec<Word>> {
        if !self.is_cyclically_minimal() {
            return Err(Error::NotCyclicallyMinimal);
        }
        let dual = self.group.graph.non_commutation_graph();
        let comps = dual.components_within(self.alpha());
        Ok(comps
            .into_iter()
            .map(|c| {
                let part: Vec<Letter> = self
                    .letters
                    .iter()
                    .copied()
                    .filter(|l| c.contains(l.vertex()))
                    .collect();
                self.group.finish(part)
            })
            .collect())
    }

    /// Membership in the parabolic subgroup `G(Y)`.
    pub fn in_parabolic(&self, y: VertexSet) -> bool {
        self.alpha().is_subset(y)
    }

    /// `w = p ∘ rest` with `p ∈ G(Y)` as long as possible, so that `rest` has
    /// no left divisor in `G(Y)`.
    pub fn strip_left_divisors(&self, y: VertexSet) -> (Word, Word) {
        let mut kept_mask = 0u64;
        let mut prefix = Vec::new();
        let mut rest = Vec::new();
        for &k in &self.letters {
            let v = k.vertex();
            if y.contains(v) && kept_mask & !self.group.adj[v] == 0 {
                prefix.push(k);
            } else {
                rest.push(k);
                kept_mask |= 1u64 << v;
            }
        }
        (self.group.finish(prefix), self.group.finish(rest))
    }

    /// Exponent sum of every generator, indexed by vertex.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.group.rank()];
        for l in &self.letters {
            out[l.vertex()] += l.exponent();
        }
        out
    }

    /// Exponents of `w` in the free abelian group `G(S)`, listed for the
    /// members of `S` in index order.
    pub fn abelian_exponents(&self, s: VertexSet) -> Result<Vec<i64>> {
        let g = &self.group.graph;
        if !g.is_simplex(s) {
            return Err(Error::NotSimplex(g.format_set(s)));
        }
        if !self.alpha().is_subset(s) {
            return Err(Error::SupportViolation {
                support: g.format_set(self.alpha()),
                allowed: g.format_set(s),
            });
        }
        let sums = self.exponent_sums();
        Ok(s.iter().map(|v| sums[v]).collect())
    }

    /// Word literal accepted by [`PcGroup::parse`], with runs of a repeated
    /// letter written as powers.
    pub fn to_literal(&self) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let g = &self.group.graph;
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.exponent();
            let name = g.name(l.vertex());
            parts.push(if e == 1 {
                name.to_string()
            } else {
                format!("{name}^{e}")
            });
            i = j;
        }
        parts.join(" ")
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Word) -> bool {
        self.letters == other.letters && self.same_group(other)
    }
}

impl Eq for Word {}

impl std::hash::Hash for Word {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.to_literal())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

/// Panics when the operands belong to different groups; use
/// [`Word::try_mul`] to get an error instead.
impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.try_mul(rhs)
            .expect("multiplying words from different groups")
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::p3;
    use crate::lattice::ClosureLattice;

    /// P3 with letters ordered a ≺ c ≺ b.
    fn p3_group() -> Arc<PcGroup> {
        let g = Arc::new(p3());
        let lat = ClosureLattice::enumerate(&g);
        let ord = lat.build_total_order(&[0, 1, 2]).unwrap();
        PcGroup::with_order(g, &ord)
    }

    #[test]
    fn normalize_examples() {
        let g = p3_group();
        assert_eq!(g.parse("a b a^-1").unwrap(), g.parse("b").unwrap());
        assert_eq!(g.parse("b a").unwrap().to_literal(), "a b");
        assert_eq!(g.parse("a c").unwrap().to_literal(), "a c");
        assert_eq!(g.parse("c a").unwrap().to_literal(), "c a");
        assert_eq!(g.parse("b c").unwrap().to_literal(), "c b");
        assert_eq!(g.parse("").unwrap(), g.identity());
        assert_eq!(g.parse("1").unwrap(), g.identity());
        assert!(matches!(g.parse("z"), Err(Error::UnknownVertex(_))));
        assert!(matches!(g.parse("a^x"), Err(Error::Parse(_))));
    }

    #[test]
    fn multiply_examples() {
        let g = p3_group();
        let u = g.parse("a c").unwrap();
        assert_eq!(&u * &g.identity(), u);
        assert_eq!(&u * &g.parse("c^-1").unwrap(), g.parse("a").unwrap());
        assert_eq!(u.inverse().to_literal(), "c^-1 a^-1");
        assert!((&u * &u.inverse()).is_identity());
    }

    #[test]
    fn cross_group_rejected() {
        let g = p3_group();
        let h = PcGroup::new(Arc::new(p3()));
        let err = g.generator(0).try_mul(&h.generator(0));
        assert!(matches!(err, Err(Error::GroupMismatch)));
    }

    #[test]
    fn length_and_alpha() {
        let g = p3_group();
        let id = g.identity();
        assert_eq!((id.len(), id.alpha()), (0, VertexSet::EMPTY));
        let w = g.parse("a b c").unwrap();
        assert_eq!((w.len(), w.alpha()), (3, VertexSet::full(3)));
        let w = g.parse("a b a^-1").unwrap();
        assert_eq!((w.len(), w.alpha()), (1, VertexSet::singleton(1)));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let g = p3_group();
        let w = g.parse("a^-1 c a").unwrap();
        let d = w.cyclic_reduce();
        assert_eq!(d.conjugator, g.parse("a").unwrap());
        assert_eq!(d.core, g.parse("c").unwrap());

        let w = g.parse("a c").unwrap();
        let d = w.cyclic_reduce();
        assert!(d.conjugator.is_identity());
        assert_eq!(d.core, w);

        let d = g.parse("a^-1 b a").unwrap().cyclic_reduce();
        assert!(d.conjugator.is_identity());
        assert_eq!(d.core, g.parse("b").unwrap());
    }

    #[test]
    fn nested_cyclic_reduce() {
        let g = p3_group();
        // (c a)^-1 b c a ... b commutes with everything, so use a c-core
        let w = g.parse("a^-1 c^-1 a c a^-1 c a").unwrap();
        let d = w.cyclic_reduce();
        assert_eq!(d.core.conjugate(&d.conjugator), w);
        assert_eq!(w.len(), 2 * d.conjugator.len() + d.core.len());
        assert!(d.core.is_cyclically_minimal());
    }

    #[test]
    fn block_examples() {
        let g = p3_group();
        let blocks = g.parse("a b").unwrap().block_decomposition().unwrap();
        assert_eq!(blocks, vec![g.parse("a").unwrap(), g.parse("b").unwrap()]);
        let blocks = g.parse("a c").unwrap().block_decomposition().unwrap();
        assert_eq!(blocks, vec![g.parse("a c").unwrap()]);
        let blocks = g.parse("c").unwrap().block_decomposition().unwrap();
        assert_eq!(blocks, vec![g.parse("c").unwrap()]);
        assert!(matches!(
            g.parse("a^-1 c a").unwrap().block_decomposition(),
            Err(Error::NotCyclicallyMinimal)
        ));
    }

    #[test]
    fn parabolic_examples() {
        let g = p3_group();
        let ab = VertexSet::from_bits(0b011);
        assert!(g.parse("a b").unwrap().in_parabolic(ab));
        assert!(!g.parse("c").unwrap().in_parabolic(ab));
        assert!(g.identity().in_parabolic(VertexSet::EMPTY));
    }

    #[test]
    fn strip_examples() {
        let g = p3_group();
        let b = VertexSet::singleton(1);
        let (p, rest) = g.parse("b c").unwrap().strip_left_divisors(b);
        assert_eq!((p.to_literal(), rest.to_literal()), ("b".into(), "c".into()));
        let (p, rest) = g.parse("a c").unwrap().strip_left_divisors(b);
        assert!(p.is_identity());
        assert_eq!(rest, g.parse("a c").unwrap());
        // b commutes with c in P3, so b is a left divisor of c·b as well
        let (p, rest) = g.parse("c b").unwrap().strip_left_divisors(b);
        assert_eq!((p.to_literal(), rest.to_literal()), ("b".into(), "c".into()));
        // in c a b, b commutes past both
        let ac = VertexSet::from_bits(0b101);
        let (p, rest) = g.parse("c a b").unwrap().strip_left_divisors(ac);
        assert_eq!(p.to_literal(), "c a");
        assert_eq!(rest.to_literal(), "b");
    }

    #[test]
    fn exponent_examples() {
        let g = p3_group();
        let ab = VertexSet::from_bits(0b011);
        assert_eq!(
            g.parse("a b^-2").unwrap().abelian_exponents(ab).unwrap(),
            vec![1, -2]
        );
        assert_eq!(g.identity().abelian_exponents(ab).unwrap(), vec![0, 0]);
        assert_eq!(g.parse("b a").unwrap().abelian_exponents(ab).unwrap(), vec![1, 1]);
        assert!(matches!(
            g.parse("a")
                .unwrap()
                .abelian_exponents(VertexSet::from_bits(0b101)),
            Err(Error::NotSimplex(_))
        ));
        assert!(matches!(
            g.parse("c").unwrap().abelian_exponents(ab),
            Err(Error::SupportViolation { .. })
        ));
    }

    #[test]
    fn literal_round_trip() {
        let g = p3_group();
        let w = g.parse("a a c^-1 c^-1 b^3").unwrap();
        assert_eq!(g.parse(&w.to_literal()).unwrap(), w);
        assert_eq!(w.to_literal(), "a^2 c^-2 b^3");
    }
}
