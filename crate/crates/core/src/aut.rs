//! Automorphisms given by the images of generators, the generating atoms of
//! the stabiliser `St(L)`, the isomorphism with `S_X`, and the factorisation
//! of any member of `S_X` into atoms.
//!
//! Maps act on the right: `φ.then(ψ)` applies `φ` first, and its matrix is
//! `[φ]·[ψ]`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::int_matrix::{IntMatrix, RowOp};
use crate::stab_matrix::StabMatrix;
use crate::vertex_set::VertexSet;
use crate::word::{PcGroup, Word};

/// A homomorphism `G(Y) → G` given by the images of the generators in `Y`.
#[derive(Clone)]
pub struct AutMap {
    group: Arc<PcGroup>,
    domain: VertexSet,
    images: Vec<Word>,
}

impl AutMap {
    pub fn identity(group: &Arc<PcGroup>) -> Self {
        let domain = group.graph().vertices();
        Self::identity_on(group, domain)
    }

    pub fn identity_on(group: &Arc<PcGroup>, domain: VertexSet) -> Self {
        let images = (0..group.rank()).map(|v| group.generator(v)).collect();
        AutMap {
            group: Arc::clone(group),
            domain,
            images,
        }
    }

    /// Images of every vertex, indexed by vertex. Fails unless images of
    /// commuting generators commute.
    pub fn from_images(group: &Arc<PcGroup>, images: Vec<Word>) -> Result<Self> {
        if images.len() != group.rank() {
            return Err(Error::DimensionMismatch {
                expected: group.rank(),
                found: images.len(),
            });
        }
        if images.iter().any(|w| !same_group(w.group(), group)) {
            return Err(Error::GroupMismatch);
        }
        let map = AutMap {
            group: Arc::clone(group),
            domain: group.graph().vertices(),
            images,
        };
        map.check_endomorphism()?;
        Ok(map)
    }

    /// Images given as word literals keyed by vertex name; unlisted vertices
    /// are fixed.
    pub fn from_literals<S: AsRef<str>>(group: &Arc<PcGroup>, pairs: &[(S, S)]) -> Result<Self> {
        let mut images: Vec<Word> = (0..group.rank()).map(|v| group.generator(v)).collect();
        for (name, lit) in pairs {
            let v = group.graph().index_of(name.as_ref())?;
            images[v] = group.parse(lit.as_ref())?;
        }
        Self::from_images(group, images)
    }

    pub(crate) fn from_images_unchecked(group: &Arc<PcGroup>, images: Vec<Word>) -> Self {
        AutMap {
            group: Arc::clone(group),
            domain: group.graph().vertices(),
            images,
        }
    }

    pub fn check_endomorphism(&self) -> Result<()> {
        let g = self.group.graph();
        for (x, y) in g.edges() {
            if self.domain.contains(x)
                && self.domain.contains(y)
                && !self.images[x].commutes_with(&self.images[y])
            {
                return Err(Error::NotEndomorphism(
                    g.name(x).to_string(),
                    g.name(y).to_string(),
                ));
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<PcGroup> {
        &self.group
    }

    pub fn domain(&self) -> VertexSet {
        self.domain
    }

    pub fn image(&self, x: usize) -> &Word {
        &self.images[x]
    }

    /// Images of the domain generators, in vertex order.
    pub fn images(&self) -> impl Iterator<Item = (usize, &Word)> {
        self.domain.iter().map(move |x| (x, &self.images[x]))
    }

    pub fn is_identity(&self) -> bool {
        self.images()
            .all(|(x, w)| w.len() == 1 && w.letters()[0] == crate::word::Letter::new(x, false))
    }

    /// Image of a word whose support lies in the domain.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if !same_group(w.group(), &self.group) {
            return Err(Error::GroupMismatch);
        }
        if !w.alpha().is_subset(self.domain) {
            return Err(Error::SupportViolation {
                support: self.group.graph().format_set(w.alpha()),
                allowed: self.group.graph().format_set(self.domain),
            });
        }
        let mut out = self.group.identity();
        for l in w.letters() {
            let img = &self.images[l.vertex()];
            out = if l.is_inverse() {
                &out * &img.inverse()
            } else {
                &out * img
            };
        }
        Ok(out)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &AutMap) -> Result<AutMap> {
        let mut images = self.images.clone();
        for x in self.domain.iter() {
            images[x] = other.apply(&self.images[x])?;
        }
        Ok(AutMap {
            group: Arc::clone(&self.group),
            domain: self.domain,
            images,
        })
    }

    /// Restriction to `G(Y)`; the images must stay inside `G(Y)`.
    pub fn restrict(&self, ctx: &Context, y: VertexSet) -> Result<AutMap> {
        ctx.lattice().require_closed(y)?;
        if !y.is_subset(self.domain) {
            return Err(Error::NotSubset {
                sub: ctx.graph().format_set(y),
                sup: ctx.graph().format_set(self.domain),
            });
        }
        for x in y.iter() {
            if !self.images[x].in_parabolic(y) {
                return Err(Error::NotStabiliser(format!(
                    "image of {} leaves G{}",
                    ctx.graph().name(x),
                    ctx.graph().format_set(y)
                )));
            }
        }
        Ok(AutMap {
            group: Arc::clone(&self.group),
            domain: y,
            images: self.images.clone(),
        })
    }

    /// Whether `x ↦ φ(x)` lies in the conjugacy class of `x` for every
    /// generator.
    pub fn is_conjugating(&self) -> bool {
        self.images().all(|(x, w)| {
            let core = w.cyclic_reduce().core;
            core.len() == 1 && core.letters()[0] == crate::word::Letter::new(x, false)
        })
    }

    /// `[φ]`: row `x` holds the exponents of `φ(x)` in the free abelian group
    /// `G(cl(x))`.
    pub fn matrix(&self, ctx: &Context) -> Result<StabMatrix> {
        let pattern = ctx.pattern(self.domain)?;
        let lat = ctx.lattice();
        let g = ctx.graph();
        let mut m = IntMatrix::zeros(pattern.dim());
        for (i, &x) in pattern.order().iter().enumerate() {
            let w = &self.images[x];
            if !w.in_parabolic(lat.cl(x)) {
                return Err(Error::NotStabiliser(format!(
                    "image {} of {} is not in G{}",
                    w,
                    g.name(x),
                    g.format_set(lat.cl(x))
                )));
            }
            for l in w.letters() {
                let j = pattern.index_of(l.vertex()).expect("cl(x) ⊆ Y");
                m.set(i, j, m.get(i, j) + l.exponent());
            }
        }
        StabMatrix::new(Arc::clone(pattern), m)
            .map_err(|e| Error::NotStabiliser(format!("induced matrix: {e}")))
    }

    /// Whether `G(Y)^φ = G(Y)` for every closed `Y` in the domain, decided
    /// through the closures of single vertices and invertibility of `[φ]`.
    pub fn stabilizes_l(&self, ctx: &Context) -> bool {
        self.matrix(ctx).is_ok()
    }

    /// Inverse of a member of `St(L)`, read off the inverse matrix.
    pub fn stab_inverse(&self, ctx: &Context) -> Result<AutMap> {
        automap_of(ctx, &self.matrix(ctx)?.inverse()?)
    }

    pub fn to_literals(&self) -> Vec<(String, String)> {
        let g = self.group.graph();
        self.images()
            .map(|(x, w)| (g.name(x).to_string(), w.to_literal()))
            .collect()
    }
}

/// Maps are equal when they have the same domain and agree on it.
impl PartialEq for AutMap {
    fn eq(&self, other: &AutMap) -> bool {
        self.domain == other.domain && self.images().eq(other.images())
    }
}

impl Eq for AutMap {}

impl fmt::Debug for AutMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, w) in self.images() {
            m.entry(&self.group.graph().name(x), &w.to_literal());
        }
        m.finish()
    }
}

impl fmt::Display for AutMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .to_literals()
            .into_iter()
            .map(|(x, w)| format!("{x} -> {w}"))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

fn same_group(a: &Arc<PcGroup>, b: &Arc<PcGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// `x_i ↦ ∏_j x_j^{a_ij}` for a member of `S_Y`.
pub fn automap_of(ctx: &Context, a: &StabMatrix) -> Result<AutMap> {
    let pattern = a.pattern();
    let group = ctx.group();
    let mut images: Vec<Word> = (0..group.rank()).map(|v| group.generator(v)).collect();
    for (i, &x) in pattern.order().iter().enumerate() {
        let raw: Vec<(usize, i64)> = pattern
            .order()
            .iter()
            .enumerate()
            .filter(|&(j, _)| a.matrix().get(i, j) != 0)
            .map(|(j, &v)| (v, a.matrix().get(i, j)))
            .collect();
        images[x] = group.word(&raw)?;
    }
    Ok(AutMap {
        group: Arc::clone(group),
        domain: pattern.closed_set(),
        images,
    })
}

/// One generator of `St(L)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GeneratorAtom {
    /// `x ↦ x^-1`.
    SignFlip(usize),
    /// A linear change of variables on a class `[x]` with at least two
    /// members; `class` fixes the indexing of `matrix`.
    ClassMove { class: Vec<usize>, matrix: IntMatrix },
    /// `x ↦ x·y^exponent`, legal when `x^⊥ ⊊ y^⊥`.
    Transvection { x: usize, y: usize, exponent: i64 },
}

impl GeneratorAtom {
    pub fn validate(&self, ctx: &Context) -> Result<()> {
        let g = ctx.graph();
        let lat = ctx.lattice();
        match self {
            GeneratorAtom::SignFlip(x) => g.check_vertex(*x),
            GeneratorAtom::ClassMove { class, matrix } => {
                for &v in class {
                    g.check_vertex(v)?;
                }
                let set: VertexSet = class.iter().copied().collect();
                if set.len() != class.len() || class.len() < 2 {
                    return Err(Error::IllegalAtom(format!(
                        "class move needs at least two distinct vertices, got {}",
                        g.format_set(set)
                    )));
                }
                if lat.equiv_class(class[0]) != set {
                    return Err(Error::IllegalAtom(format!(
                        "{} is not an equivalence class",
                        g.format_set(set)
                    )));
                }
                if matrix.dim() != class.len() {
                    return Err(Error::DimensionMismatch {
                        expected: class.len(),
                        found: matrix.dim(),
                    });
                }
                let d = matrix.det()?;
                if d != 1 && d != -1 {
                    return Err(Error::IllegalAtom(format!(
                        "class move matrix has determinant {d}"
                    )));
                }
                Ok(())
            }
            GeneratorAtom::Transvection { x, y, .. } => {
                g.check_vertex(*x)?;
                g.check_vertex(*y)?;
                if !lat.orth_of(*x).is_strict_subset(lat.orth_of(*y)) {
                    return Err(Error::IllegalAtom(format!(
                        "transvection ({}, {}) needs {}^⊥ ⊊ {}^⊥",
                        g.name(*x),
                        g.name(*y),
                        g.name(*x),
                        g.name(*y)
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn to_automap(&self, ctx: &Context) -> Result<AutMap> {
        self.validate(ctx)?;
        let group = ctx.group();
        let mut images: Vec<Word> = (0..group.rank()).map(|v| group.generator(v)).collect();
        match self {
            GeneratorAtom::SignFlip(x) => images[*x] = group.word(&[(*x, -1)])?,
            GeneratorAtom::ClassMove { class, matrix } => {
                for (i, &u) in class.iter().enumerate() {
                    let raw: Vec<(usize, i64)> = class
                        .iter()
                        .enumerate()
                        .map(|(j, &v)| (v, matrix.get(i, j)))
                        .collect();
                    images[u] = group.word(&raw)?;
                }
            }
            GeneratorAtom::Transvection { x, y, exponent } => {
                images[*x] = group.word(&[(*x, 1), (*y, *exponent)])?
            }
        }
        Ok(AutMap::from_images_unchecked(group, images))
    }

    /// The matrix in `S_X`, written down directly from the atom.
    pub fn to_matrix(&self, ctx: &Context) -> Result<StabMatrix> {
        self.validate(ctx)?;
        let p = ctx.x_pattern();
        let idx = |v: usize| p.index_of(v).expect("vertex of X");
        let mut m = IntMatrix::identity(p.dim());
        match self {
            GeneratorAtom::SignFlip(x) => m.set(idx(*x), idx(*x), -1),
            GeneratorAtom::ClassMove { class, matrix } => {
                for (i, &u) in class.iter().enumerate() {
                    for (j, &v) in class.iter().enumerate() {
                        m.set(idx(u), idx(v), matrix.get(i, j));
                    }
                }
            }
            GeneratorAtom::Transvection { x, y, exponent } => m.set(idx(*x), idx(*y), *exponent),
        }
        StabMatrix::new(Arc::clone(p), m)
    }

    pub fn inverse(&self) -> Result<GeneratorAtom> {
        Ok(match self {
            GeneratorAtom::SignFlip(x) => GeneratorAtom::SignFlip(*x),
            GeneratorAtom::ClassMove { class, matrix } => GeneratorAtom::ClassMove {
                class: class.clone(),
                matrix: matrix.inverse()?,
            },
            GeneratorAtom::Transvection { x, y, exponent } => GeneratorAtom::Transvection {
                x: *x,
                y: *y,
                exponent: -exponent,
            },
        })
    }

    pub fn describe(&self, names: &[String]) -> String {
        match self {
            GeneratorAtom::SignFlip(x) => format!("flip({})", names[*x]),
            GeneratorAtom::ClassMove { class, matrix } => {
                let c: Vec<&str> = class.iter().map(|&v| names[v].as_str()).collect();
                format!("class_move({}; {:?})", c.join(","), matrix.rows())
            }
            GeneratorAtom::Transvection { x, y, exponent } => {
                format!("tr({},{})^{}", names[*x], names[*y], exponent)
            }
        }
    }
}

/// A product of atoms, applied left to right.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GeneratorWord(pub Vec<GeneratorAtom>);

impl GeneratorWord {
    pub fn atoms(&self) -> &[GeneratorAtom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_automap(&self, ctx: &Context) -> Result<AutMap> {
        let mut acc = AutMap::identity(ctx.group());
        for atom in &self.0 {
            acc = acc.then(&atom.to_automap(ctx)?)?;
        }
        Ok(acc)
    }

    /// Product of the atom matrices.
    pub fn to_matrix(&self, ctx: &Context) -> Result<StabMatrix> {
        let mut acc = StabMatrix::identity(Arc::clone(ctx.x_pattern()));
        for atom in &self.0 {
            acc = acc.mul(&atom.to_matrix(ctx)?)?;
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Result<GeneratorWord> {
        self.0
            .iter()
            .rev()
            .map(GeneratorAtom::inverse)
            .collect::<Result<Vec<_>>>()
            .map(GeneratorWord)
    }

    /// A random word of `len` atoms; transvection exponents and class-move
    /// entries stay within `bound`.
    pub fn random<R: Rng + ?Sized>(
        inv: &GeneratorInventory,
        len: usize,
        bound: i64,
        rng: &mut R,
    ) -> GeneratorWord {
        GeneratorWord((0..len).map(|_| inv.random_atom(bound, rng)).collect())
    }
}

/// The generating sets of `St(L)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorInventory {
    /// Vertices, one sign flip each.
    pub flips: Vec<usize>,
    /// Classes with at least two members, in `≺` order.
    pub classes: Vec<Vec<usize>>,
    /// Pairs `(x, y)` with `x^⊥ ⊊ y^⊥`.
    pub transvections: Vec<(usize, usize)>,
}

impl GeneratorInventory {
    pub fn new(ctx: &Context) -> Self {
        let lat = ctx.lattice();
        let seq = ctx.order().sequence();
        let flips = seq.to_vec();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for c in lat.classes().iter().filter(|c| c.len() >= 2) {
            classes.push(ctx.order().sorted(*c));
        }
        classes.sort_by_key(|c| ctx.order().position(c[0]));
        let mut transvections = Vec::new();
        for &x in seq {
            for &y in seq {
                if lat.orth_of(x).is_strict_subset(lat.orth_of(y)) {
                    transvections.push((x, y));
                }
            }
        }
        GeneratorInventory {
            flips,
            classes,
            transvections,
        }
    }

    /// Standard generators of `GL(n, ℤ)` on one class: a transvection, a
    /// transposition and, for `n ≥ 3`, an `n`-cycle (signs come from the
    /// flips).
    pub fn class_generators(class: &[usize]) -> Vec<GeneratorAtom> {
        let n = class.len();
        let mut mats = vec![
            RowOp::AddMultiple {
                target: 0,
                source: 1,
                factor: 1,
            }
            .to_matrix(n),
            RowOp::Swap(0, 1).to_matrix(n),
        ];
        if n >= 3 {
            let mut cycle = IntMatrix::zeros(n);
            for i in 0..n {
                cycle.set(i, (i + 1) % n, 1);
            }
            mats.push(cycle);
        }
        mats.into_iter()
            .map(|matrix| GeneratorAtom::ClassMove {
                class: class.to_vec(),
                matrix,
            })
            .collect()
    }

    /// Every listed generator, with unit transvection exponents.
    pub fn atoms(&self) -> Vec<GeneratorAtom> {
        let mut out: Vec<GeneratorAtom> = self.flips.iter().map(|&x| GeneratorAtom::SignFlip(x)).collect();
        for c in &self.classes {
            out.extend(Self::class_generators(c));
        }
        out.extend(
            self.transvections
                .iter()
                .map(|&(x, y)| GeneratorAtom::Transvection { x, y, exponent: 1 }),
        );
        out
    }

    pub fn random_atom<R: Rng + ?Sized>(&self, bound: i64, rng: &mut R) -> GeneratorAtom {
        let bound = bound.max(1);
        let kinds = 1 + (!self.classes.is_empty()) as u32 + (!self.transvections.is_empty()) as u32;
        let mut pick = rng.gen_range(0..kinds);
        if pick == 0 {
            return GeneratorAtom::SignFlip(self.flips[rng.gen_range(0..self.flips.len())]);
        }
        if !self.classes.is_empty() {
            if pick == 1 {
                let class = &self.classes[rng.gen_range(0..self.classes.len())];
                let n = class.len();
                let t = rng.gen_range(0..n);
                let mut s = rng.gen_range(0..n - 1);
                if s >= t {
                    s += 1;
                }
                let op = match rng.gen_range(0..3) {
                    0 => RowOp::Swap(t, s),
                    _ => {
                        let mut factor = rng.gen_range(-bound..bound);
                        if factor >= 0 {
                            factor += 1;
                        }
                        RowOp::AddMultiple {
                            target: t,
                            source: s,
                            factor,
                        }
                    }
                };
                return GeneratorAtom::ClassMove {
                    class: class.clone(),
                    matrix: op.to_matrix(n),
                };
            }
            pick -= 1;
        }
        debug_assert_eq!(pick, 1);
        let (x, y) = self.transvections[rng.gen_range(0..self.transvections.len())];
        let mut exponent = rng.gen_range(-bound..bound);
        if exponent >= 0 {
            exponent += 1;
        }
        GeneratorAtom::Transvection { x, y, exponent }
    }
}

/// Writes a member of `S_X` as a product of atoms: `A = U·D`, the
/// unipotent part `U` is cleared by transvections taken at the last row and
/// column carrying an off-block entry, and each diagonal block of `D` is
/// factored into elementary matrices.
pub fn decompose(ctx: &Context, a: &StabMatrix) -> Result<GeneratorWord> {
    let p = ctx.x_pattern();
    if a.pattern() != p {
        return Err(Error::PatternMismatch);
    }
    let (u, d) = a.split_semidirect()?;
    let order = p.order();
    let r = p.dim();

    let mut rest = u.into_matrix();
    let mut unipotent = Vec::new();
    loop {
        let pivot = (0..r).rev().find_map(|i| {
            (0..r)
                .rev()
                .find(|&j| p.block_of(i) != p.block_of(j) && rest.get(i, j) != 0)
                .map(|j| (i, j))
        });
        let Some((i, j)) = pivot else { break };
        let e = rest.get(i, j);
        // rest ← rest · (I − e E_ij): subtract e × column i from column j
        for k in 0..r {
            let v = rest.get(k, i);
            if v != 0 {
                let updated = v
                    .checked_mul(e)
                    .and_then(|t| rest.get(k, j).checked_sub(t))
                    .ok_or(Error::Overflow)?;
                rest.set(k, j, updated);
            }
        }
        unipotent.push(GeneratorAtom::Transvection {
            x: order[i],
            y: order[j],
            exponent: e,
        });
    }
    if !rest.is_identity() {
        return Err(Error::Internal("unipotent reduction did not reach I".into()));
    }
    unipotent.reverse();

    let mut diagonal = Vec::new();
    for b in p.blocks() {
        let class: Vec<usize> = b.clone().map(|i| order[i]).collect();
        let idx: Vec<usize> = b.clone().collect();
        let block = d.matrix().submatrix(&idx);
        for op in block.elementary_factors()? {
            diagonal.push(match op {
                RowOp::Negate(i) => GeneratorAtom::SignFlip(class[i]),
                op => GeneratorAtom::ClassMove {
                    class: class.clone(),
                    matrix: op.to_matrix(class.len()),
                },
            });
        }
    }

    unipotent.extend(diagonal);
    Ok(GeneratorWord(unipotent))
}
