//! Conjugating automorphisms and the split of the conjugate-stabiliser
//! `St^conj(L) = Conj(G) ⋊ St(L)`.

use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng;

use crate::aut::{automap_of, decompose, AutMap, GeneratorAtom, GeneratorInventory, GeneratorWord};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;
use crate::word::{PcGroup, Word};

/// `α_C(x)^{±1}`: conjugates every generator of the component `C` of
/// `Γ ∖ x^⊥` by `x` (or `x^-1`) and fixes the rest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ElemConjSpec {
    pub x: usize,
    pub component: VertexSet,
    /// `+1` for `y ↦ x^-1 y x`, `-1` for `y ↦ x y x^-1`.
    pub direction: i8,
}

impl ElemConjSpec {
    pub fn inverse(self) -> Self {
        ElemConjSpec {
            direction: -self.direction,
            ..self
        }
    }

    pub fn validate(&self, ctx: &Context) -> Result<()> {
        let g = ctx.graph();
        g.check_vertex(self.x)?;
        g.check_set(self.component)?;
        if self.direction != 1 && self.direction != -1 {
            return Err(Error::Parse(format!(
                "direction must be ±1, got {}",
                self.direction
            )));
        }
        if !g.components_minus(g.ball(self.x)).contains(&self.component) {
            return Err(Error::NotComponent(
                g.format_set(self.component),
                g.name(self.x).to_string(),
            ));
        }
        Ok(())
    }

    /// Every `α_C(x)` with direction `+1`.
    pub fn all(ctx: &Context) -> Vec<ElemConjSpec> {
        let g = ctx.graph();
        let mut out = Vec::new();
        for x in 0..g.len() {
            for component in g.components_minus(g.ball(x)) {
                out.push(ElemConjSpec {
                    x,
                    component,
                    direction: 1,
                });
            }
        }
        out
    }

    pub fn to_automap(&self, ctx: &Context) -> Result<AutMap> {
        self.validate(ctx)?;
        let group = ctx.group();
        let conj = group.word(&[(self.x, self.direction as i64)])?;
        let images = (0..group.rank())
            .map(|y| {
                let gen = group.generator(y);
                if self.component.contains(y) {
                    gen.conjugate(&conj)
                } else {
                    gen
                }
            })
            .collect();
        AutMap::from_images(group, images)
    }
}

pub fn elementary_conj(ctx: &Context, spec: &ElemConjSpec) -> Result<AutMap> {
    spec.to_automap(ctx)
}

/// `x ↦ w^-1 x w`.
pub fn inner(group: &Arc<PcGroup>, w: &Word) -> Result<AutMap> {
    if !Arc::ptr_eq(w.group(), group) && **w.group() != **group {
        return Err(Error::GroupMismatch);
    }
    let images = (0..group.rank())
        .map(|x| group.generator(x).conjugate(w))
        .collect();
    AutMap::from_images(group, images)
}

/// An automorphism stored together with its inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Automorphism {
    pub forward: AutMap,
    pub inverse: AutMap,
}

impl Automorphism {
    pub fn identity(group: &Arc<PcGroup>) -> Self {
        Automorphism {
            forward: AutMap::identity(group),
            inverse: AutMap::identity(group),
        }
    }

    pub fn then(&self, other: &Automorphism) -> Result<Automorphism> {
        Ok(Automorphism {
            forward: self.forward.then(&other.forward)?,
            inverse: other.inverse.then(&self.inverse)?,
        })
    }

    pub fn invert(&self) -> Automorphism {
        Automorphism {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// A member of `St(L)`, inverted through its matrix.
    pub fn from_stab(ctx: &Context, phi: AutMap) -> Result<Automorphism> {
        let inverse = phi.stab_inverse(ctx)?;
        Ok(Automorphism {
            forward: phi,
            inverse,
        })
    }
}

/// One factor of a composite automorphism.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MixedAtom {
    Stab(GeneratorAtom),
    Conj(ElemConjSpec),
    Inner(Word),
}

impl MixedAtom {
    pub fn to_automorphism(&self, ctx: &Context) -> Result<Automorphism> {
        Ok(match self {
            MixedAtom::Stab(a) => Automorphism {
                forward: a.to_automap(ctx)?,
                inverse: a.inverse()?.to_automap(ctx)?,
            },
            MixedAtom::Conj(s) => Automorphism {
                forward: s.to_automap(ctx)?,
                inverse: s.inverse().to_automap(ctx)?,
            },
            MixedAtom::Inner(w) => Automorphism {
                forward: inner(ctx.group(), w)?,
                inverse: inner(ctx.group(), &w.inverse())?,
            },
        })
    }

    pub fn is_conjugating(&self) -> bool {
        !matches!(self, MixedAtom::Stab(_))
    }

    pub fn describe(&self, names: &[String]) -> String {
        match self {
            MixedAtom::Stab(a) => a.describe(names),
            MixedAtom::Conj(s) => {
                let c: Vec<&str> = s.component.iter().map(|v| names[v].as_str()).collect();
                format!("conj({}; {{{}}})^{}", names[s.x], c.join(","), s.direction)
            }
            MixedAtom::Inner(w) => format!("inner({w})"),
        }
    }
}

/// Composes atoms left to right.
pub fn compose_mixed(ctx: &Context, atoms: &[MixedAtom]) -> Result<Automorphism> {
    let mut acc = Automorphism::identity(ctx.group());
    for a in atoms {
        acc = acc.then(&a.to_automorphism(ctx)?)?;
    }
    Ok(acc)
}

/// A random composite of `len` atoms drawn from the stabiliser generators,
/// the elementary conjugations and inner automorphisms by single letters.
pub fn random_mixed<R: Rng + ?Sized>(
    ctx: &Context,
    inv: &GeneratorInventory,
    specs: &[ElemConjSpec],
    len: usize,
    bound: i64,
    rng: &mut R,
) -> Vec<MixedAtom> {
    (0..len)
        .map(|_| match rng.gen_range(0..3) {
            1 if !specs.is_empty() => {
                let mut s = specs[rng.gen_range(0..specs.len())];
                if rng.gen() {
                    s = s.inverse();
                }
                MixedAtom::Conj(s)
            }
            2 if !ctx.is_empty() => {
                let v = rng.gen_range(0..ctx.len());
                let e = if rng.gen() { 1 } else { -1 };
                MixedAtom::Inner(ctx.group().word(&[(v, e)]).expect("vertex"))
            }
            _ => MixedAtom::Stab(inv.random_atom(bound, rng)),
        })
        .collect()
}

/// `g` with `G(Y)^θ = G(Y)^g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConjWitness {
    pub closed_set: VertexSet,
    pub conjugator: Word,
}

/// Whether `G(Y)^θ = G(Y)^g`: `g θ(y) g^-1 ∈ G(Y)` for all `y ∈ Y`, and
/// the same for `θ^-1` with `h = θ^-1(g^-1)`, which gives the reverse
/// inclusion.
pub fn verify_witness(theta: &Automorphism, y: VertexSet, g: &Word) -> Result<bool> {
    let gi = g.inverse();
    for v in y.iter() {
        if !(&(g * theta.forward.image(v)) * &gi).in_parabolic(y) {
            return Ok(false);
        }
    }
    let h = theta.inverse.apply(&gi)?;
    let hi = h.inverse();
    for v in y.iter() {
        if !(&(&h * theta.inverse.image(v)) * &hi).in_parabolic(y) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Most candidate conjugators tried per closed set.
pub const WITNESS_SEARCH_LIMIT: usize = 4096;

/// Searches `1` and the right divisors of the conjugators in the cyclic
/// decompositions of `θ(y)`, `y ∈ Y`, shortest first.
pub fn conj_stab_witness(ctx: &Context, theta: &Automorphism, y: VertexSet) -> Result<Option<ConjWitness>> {
    ctx.lattice().require_closed(y)?;
    let mut seen: HashSet<Word> = HashSet::new();
    let mut candidates = vec![ctx.group().identity()];
    seen.insert(ctx.group().identity());
    for v in y.iter() {
        let d = theta.forward.image(v).cyclic_reduce().conjugator;
        for s in right_divisors(&d, WITNESS_SEARCH_LIMIT) {
            if seen.len() >= WITNESS_SEARCH_LIMIT {
                break;
            }
            if seen.insert(s.clone()) {
                candidates.push(s);
            }
        }
    }
    candidates.sort_by_key(|w| w.len());
    for g in candidates {
        if verify_witness(theta, y, &g)? {
            return Ok(Some(ConjWitness {
                closed_set: y,
                conjugator: g,
            }));
        }
    }
    Ok(None)
}

/// Elements `s` with `d = p ∘ s`, at most `limit` of them.
pub fn right_divisors(d: &Word, limit: usize) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    let mut seen: HashSet<Word> = HashSet::new();
    // (remaining prefix, suffix stripped so far)
    let mut stack = vec![(d.clone(), d.group().identity())];
    while let Some((prefix, suffix)) = stack.pop() {
        if out.len() >= limit {
            break;
        }
        if !seen.insert(suffix.clone()) {
            continue;
        }
        for t in prefix.right_divisor_letters() {
            let tw = d.group().from_letters(&[t]).expect("letter of d");
            let rest = &prefix * &tw.inverse();
            stack.push((rest, &tw * &suffix));
        }
        out.push(suffix);
    }
    out
}

/// `θ = τ·φ` with `τ` conjugating and `φ ∈ St(L)`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub tau: AutMap,
    pub phi: AutMap,
    pub phi_word: GeneratorWord,
    /// `g_x` with `θ(x) = g_x^-1 φ(x) g_x`, free of left divisors in
    /// `G(cl(x))` and in `G(x^⊥)`.
    pub conjugators: Vec<Word>,
}

/// Splits a member of `St^conj(L)`. The core of the cyclic decomposition of
/// `θ(x)` must lie in the free abelian group `G(cl(x))`; it is `φ(x)`, and
/// `τ = θ·φ^-1`.
pub fn factor_semidirect(ctx: &Context, theta: &AutMap) -> Result<Factorization> {
    let g = ctx.graph();
    let lat = ctx.lattice();
    let group = ctx.group();
    if theta.domain() != ctx.vertices() {
        return Err(Error::NotSubset {
            sub: g.format_set(ctx.vertices()),
            sup: g.format_set(theta.domain()),
        });
    }
    let mut images = Vec::with_capacity(ctx.len());
    let mut conjugators = Vec::with_capacity(ctx.len());
    for x in 0..ctx.len() {
        let w = theta.image(x);
        let cd = w.cyclic_reduce();
        let cl = lat.cl(x);
        if !cd.core.in_parabolic(cl) {
            return Err(Error::NotConjugateStabiliser(format!(
                "G{} (image of {} is {})",
                g.format_set(cl),
                g.name(x),
                w
            )));
        }
        let gx = normalize_conjugator(&cd.conjugator, cl, lat.orth_of(x));
        if &cd.core.conjugate(&gx) != w {
            return Err(Error::Internal(format!(
                "normalised conjugator {gx} does not conjugate {} to {w}",
                cd.core
            )));
        }
        images.push(cd.core);
        conjugators.push(gx);
    }
    let not_in = |e: Error| Error::NotConjugateStabiliser(format!("φ: {e}"));
    let phi = AutMap::from_images(group, images).map_err(not_in)?;
    let matrix = phi.matrix(ctx).map_err(not_in)?;
    let phi_word = decompose(ctx, &matrix)?;
    let phi_inv = automap_of(ctx, &matrix.inverse()?)?;
    let tau = theta.then(&phi_inv)?;

    if &tau.then(&phi)? != theta {
        return Err(Error::Internal("τ·φ does not reproduce θ".into()));
    }
    if !tau.is_conjugating() {
        return Err(Error::Internal("τ is not conjugating".into()));
    }
    if phi_word.to_automap(ctx)? != phi {
        return Err(Error::Internal(
            "generator word for φ does not reproduce φ".into(),
        ));
    }
    Ok(Factorization {
        tau,
        phi,
        phi_word,
        conjugators,
    })
}

/// Strips left divisors in `G(Y)` and in `G(Y^⊥)` until none remain.
fn normalize_conjugator(d: &Word, y: VertexSet, y_orth: VertexSet) -> Word {
    let mut g = d.clone();
    loop {
        let (p, rest) = g.strip_left_divisors(y);
        let (q, rest) = rest.strip_left_divisors(y_orth);
        g = rest;
        if p.is_identity() && q.is_identity() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn p3ctx() -> Context {
        Context::new(p3()).unwrap()
    }

    fn alpha_a_c(c: &Context, dir: i8) -> ElemConjSpec {
        ElemConjSpec {
            x: c.vertex("a").unwrap(),
            component: c.set(&["c"]).unwrap(),
            direction: dir,
        }
    }

    #[test]
    fn elementary_examples() {
        let c = p3ctx();
        let phi = elementary_conj(&c, &alpha_a_c(&c, 1)).unwrap();
        assert_eq!(phi.image(2), &c.word("a^-1 c a").unwrap());
        assert_eq!(phi.image(0), &c.word("a").unwrap());
        assert_eq!(phi.image(1), &c.word("b").unwrap());
        let back = elementary_conj(&c, &alpha_a_c(&c, -1)).unwrap();
        assert!(phi.then(&back).unwrap().is_identity());
        assert!(phi.is_conjugating());

        let k = Context::new(k3()).unwrap();
        assert!(ElemConjSpec::all(&k).is_empty());

        let bad = ElemConjSpec {
            component: c.set(&["a"]).unwrap(),
            ..alpha_a_c(&c, 1)
        };
        assert!(matches!(bad.validate(&c), Err(Error::NotComponent(..))));
    }

    #[test]
    fn inner_examples() {
        let c = p3ctx();
        let g = c.group();
        assert!(inner(g, &g.identity()).unwrap().is_identity());
        let a = c.word("a").unwrap();
        let both = inner(g, &a)
            .unwrap()
            .then(&inner(g, &a.inverse()).unwrap())
            .unwrap();
        assert!(both.is_identity());
        let ib = inner(g, &c.word("b").unwrap()).unwrap();
        assert!(ib.is_identity());
    }

    #[test]
    fn witness_examples() {
        let c = p3ctx();
        let theta = MixedAtom::Conj(alpha_a_c(&c, 1)).to_automorphism(&c).unwrap();
        let bc = c.set(&["b", "c"]).unwrap();
        let w = conj_stab_witness(&c, &theta, bc).unwrap().unwrap();
        assert_eq!(w.conjugator, c.word("a").unwrap());
        let ab = c.set(&["a", "b"]).unwrap();
        let w = conj_stab_witness(&c, &theta, ab).unwrap().unwrap();
        assert!(w.conjugator.is_identity());

        let stab = MixedAtom::Stab(GeneratorAtom::Transvection {
            x: 0,
            y: 1,
            exponent: 3,
        })
        .to_automorphism(&c)
        .unwrap();
        for &y in c.lattice().closed_sets() {
            let w = conj_stab_witness(&c, &stab, y).unwrap().unwrap();
            assert!(w.conjugator.is_identity());
        }
    }

    #[test]
    fn right_divisor_enumeration() {
        let c = p3ctx();
        let d = c.word("a c b").unwrap();
        let mut got: Vec<String> = right_divisors(&d, 100).iter().map(|w| w.to_literal()).collect();
        got.sort();
        // b is central, so a c is a right divisor as well
        assert_eq!(got, vec!["1", "a c", "a c b", "b", "c", "c b"]);
    }

    #[test]
    fn factor_examples() {
        let c = p3ctx();
        let tr = GeneratorAtom::Transvection {
            x: 0,
            y: 1,
            exponent: 1,
        };
        let conj = alpha_a_c(&c, 1);

        let phi = tr.to_automap(&c).unwrap();
        let f = factor_semidirect(&c, &phi).unwrap();
        assert!(f.tau.is_identity());
        assert_eq!(f.phi, phi);

        let tau = elementary_conj(&c, &conj).unwrap();
        let f = factor_semidirect(&c, &tau).unwrap();
        assert_eq!(f.tau, tau);
        assert!(f.phi.is_identity());

        let theta = compose_mixed(&c, &[MixedAtom::Conj(conj), MixedAtom::Stab(tr.clone())]).unwrap();
        let f = factor_semidirect(&c, &theta.forward).unwrap();
        assert_eq!(f.tau, tau);
        assert_eq!(f.phi, phi);
        assert_eq!(f.phi_word.0, vec![tr]);
        assert_eq!(f.tau.then(&f.phi).unwrap(), theta.forward);
    }

    #[test]
    fn non_member_rejected() {
        let c = p3ctx();
        // a ↦ a c is an automorphism of the free factor but moves G(cl(a))
        let theta = AutMap::from_literals(c.group(), &[("a", "a c")]).unwrap();
        assert!(matches!(
            factor_semidirect(&c, &theta),
            Err(Error::NotConjugateStabiliser(_))
        ));
    }
}
