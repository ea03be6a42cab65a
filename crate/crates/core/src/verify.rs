//! Self-checks over a graph: closure and lattice laws, the order `≺`, the
//! algebra of `S_Y`, the isomorphism with `St(L)` and the conjugating
//! split. Each check counts its cases and keeps the first failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;

use crate::aut::{automap_of, decompose, GeneratorInventory, GeneratorWord};
use crate::conj::{
    compose_mixed, factor_semidirect, random_mixed, verify_witness, Automorphism, ElemConjSpec, MixedAtom,
};
use crate::context::Context;
use crate::error::Result;
use crate::graph::Graph;
use crate::stab_matrix::max_pattern_check;
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Bound on sampled matrix entries and generator exponents.
    pub bound: u32,
    /// Random cases per graph for each sampled check.
    pub samples: usize,
    /// Longest random generator word.
    pub word_len: usize,
    /// Longest random composite for the conjugating split.
    pub mixed_len: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            bound: 5,
            samples: 20,
            word_len: 12,
            mixed_len: 6,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckResult {
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

/// Results keyed by check name.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: BTreeMap<&'static str, CheckResult>,
    pub graphs: u64,
}

impl Report {
    pub fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let c = self.checks.entry(name).or_default();
        c.cases += 1;
        if !ok {
            c.failures += 1;
            if c.first_failure.is_none() {
                c.first_failure = Some(detail());
            }
        }
    }

    fn record_result(&mut self, name: &'static str, r: Result<bool>, detail: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(name, ok, detail),
            Err(e) => self.record(name, false, || format!("{}: {e}", detail())),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.failures == 0)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<32} {:>10} {:>9}  status", "check", "cases", "failures");
        for (name, c) in &self.checks {
            let status = if c.failures == 0 { "pass" } else { "FAIL" };
            let _ = writeln!(s, "{name:<32} {:>10} {:>9}  {status}", c.cases, c.failures);
            if let Some(f) = &c.first_failure {
                let _ = writeln!(s, "    first failure: {f}");
            }
        }
        let _ = writeln!(s, "graphs checked: {}", self.graphs);
        s
    }
}

/// Runs every check on one graph.
pub fn verify_graph<R: Rng + ?Sized>(
    graph: &Graph,
    cfg: &VerifyConfig,
    rng: &mut R,
    report: &mut Report,
) -> Result<()> {
    report.graphs += 1;
    let ctx = Context::new(graph.clone())?;
    let label = || serde_json::to_string(graph).unwrap_or_default();
    closure_axioms(&ctx, report, &label);
    lattice_laws(&ctx, report, &label);
    order_properties(&ctx, report, &label)?;
    stab_algebra(&ctx, cfg, rng, report, &label);
    pi_and_decompose(&ctx, cfg, rng, report, &label);
    diagram(&ctx, cfg, rng, report, &label);
    generators_stabilise(&ctx, report, &label);
    elementary_witnesses(&ctx, report, &label);
    factorization(&ctx, cfg, rng, report, &label);
    Ok(())
}

fn closure_axioms(ctx: &Context, report: &mut Report, label: &dyn Fn() -> String) {
    let g = ctx.graph();
    for y in g.vertices().subsets() {
        let cl = g.closure(y);
        let o = g.orth(y);
        let ok = y.is_subset(cl)
            && g.orth(g.orth(o)) == o
            && g.closure(cl) == cl
            && (0..g.len()).all(|v| cl.is_subset(g.closure(y | VertexSet::singleton(v))));
        report.record("closure axioms", ok, || format!("{} Y={y:?}", label()));
    }
}

fn lattice_laws(ctx: &Context, report: &mut Report, label: &dyn Fn() -> String) {
    let g = ctx.graph();
    let lat = ctx.lattice();
    let sets = lat.closed_sets();
    for y in g.vertices().subsets() {
        report.record("lattice laws", lat.contains(g.orth(y)), || {
            format!("{} orth({y:?}) missing from L", label())
        });
    }
    for &a in sets {
        for &b in sets {
            report.record("lattice laws", lat.contains(a & b), || {
                format!("{} {a:?} ∩ {b:?} not closed", label())
            });
        }
        let union = a.iter().fold(VertexSet::EMPTY, |acc, v| acc | lat.cl(v));
        report.record("boundary decomposition", union == a, || {
            format!("{} {a:?} is not the union of its vertex closures", label())
        });
    }
    let mut cover = VertexSet::EMPTY;
    for x in ctx.order().x_min(lat).iter() {
        let below = lat
            .strictly_below(x)
            .iter()
            .fold(VertexSet::EMPTY, |acc, y| acc | lat.cl(y));
        report.record(
            "boundary decomposition",
            lat.equiv_class(x) == lat.cl(x) - below,
            || format!("{} [{}] ≠ cl minus lower closures", label(), g.name(x)),
        );
        report.record(
            "boundary decomposition",
            cover.is_disjoint(lat.equiv_class(x)),
            || format!("{} classes overlap", label()),
        );
        cover = cover | lat.equiv_class(x);
    }
    report.record("boundary decomposition", cover == g.vertices(), || {
        format!("{} classes do not cover X", label())
    });
}

fn order_properties(ctx: &Context, report: &mut Report, label: &dyn Fn() -> String) -> Result<()> {
    let lat = ctx.lattice();
    let ord = ctx.order();
    let n = ctx.len();
    for x in 0..n {
        for y in 0..n {
            if lat.l_less(x, y) {
                report.record("order reverses <_L", ord.precedes(y, x), || {
                    format!("{} x={x} y={y}", label())
                });
            }
        }
    }
    for c in lat.classes() {
        let pos: Vec<usize> = c.iter().map(|v| ord.position(v)).collect();
        let span = pos.iter().max().unwrap() - pos.iter().min().unwrap() + 1;
        report.record("classes are intervals", span == c.len(), || {
            format!("{} class {c:?}", label())
        });
    }
    let again = lat.build_total_order(ord.tie_break())?;
    report.record("order determinism", &again == ord, label);
    Ok(())
}

fn stab_algebra<R: Rng + ?Sized>(
    ctx: &Context,
    cfg: &VerifyConfig,
    rng: &mut R,
    report: &mut Report,
    label: &dyn Fn() -> String,
) {
    let sets = ctx.lattice().closed_sets();
    for _ in 0..cfg.samples {
        let y = sets[rng.gen_range(0..sets.len())];
        let subs: Vec<VertexSet> = sets.iter().copied().filter(|z| z.is_subset(y)).collect();
        let z = subs[rng.gen_range(0..subs.len())];
        let py = ctx.pattern(y).expect("closed");
        let pz = ctx.pattern(z).expect("closed");
        let a = py.sample(cfg.bound, rng);
        let b = py.sample(cfg.bound, rng);
        let ctxt = || format!("{} Y={y:?} A={:?} B={:?}", label(), a.matrix(), b.matrix());
        let r = (|| -> Result<bool> {
            let ab = a.mul(&b)?;
            let ai = a.inverse()?;
            let det = a.det()?;
            Ok(py.is_member(ab.matrix())?
                && py.is_member(ai.matrix())?
                && a.mul(&ai)?.is_identity()
                && (det == 1 || det == -1))
        })();
        report.record_result("S_Y group laws", r, ctxt);
        let r = (|| -> Result<bool> {
            let lhs = a.mul(&b)?.minor(pz)?;
            let rhs = a.minor(pz)?.mul(&b.minor(pz)?)?;
            let p = a.minor(pz)?;
            let q = b.minor(pz)?;
            let section = p.embed(py)?.minor(pz)? == p;
            let hom = p.mul(&q)?.embed(py)? == p.embed(py)?.mul(&q.embed(py)?)?;
            Ok(lhs == rhs && section && hom)
        })();
        report.record_result("minor/embed laws", r, ctxt);
        let r = (|| -> Result<bool> {
            let (u, d) = a.split_semidirect()?;
            let (u2, d2) = a.mul(&b)?.split_semidirect()?;
            let (_, db) = b.split_semidirect()?;
            Ok(u.is_in_uy() && d.is_in_dy() && u.mul(&d)? == a && d2 == d.mul(&db)? && u2.is_in_uy())
        })();
        report.record_result("semidirect split", r, ctxt);
    }
    let px = ctx.x_pattern();
    for _ in 0..cfg.samples {
        let a = px.sample(cfg.bound, rng);
        report.record(
            "max support pattern",
            max_pattern_check(a.matrix(), ctx.lattice(), ctx.order()),
            || format!("{} {:?}", label(), a.matrix()),
        );
    }
}

fn random_word<R: Rng + ?Sized>(inv: &GeneratorInventory, cfg: &VerifyConfig, rng: &mut R) -> GeneratorWord {
    let len = rng.gen_range(0..=cfg.word_len);
    GeneratorWord::random(inv, len, cfg.bound.min(3) as i64, rng)
}

fn pi_and_decompose<R: Rng + ?Sized>(
    ctx: &Context,
    cfg: &VerifyConfig,
    rng: &mut R,
    report: &mut Report,
    label: &dyn Fn() -> String,
) {
    let inv = GeneratorInventory::new(ctx);
    for _ in 0..cfg.samples {
        let u = random_word(&inv, cfg, rng);
        let v = random_word(&inv, cfg, rng);
        let r = (|| -> Result<bool> {
            let phi = u.to_automap(ctx)?;
            let psi = v.to_automap(ctx)?;
            let lhs = phi.then(&psi)?.matrix(ctx)?;
            let rhs = phi.matrix(ctx)?.mul(&psi.matrix(ctx)?)?;
            Ok(lhs == rhs && u.to_matrix(ctx)? == phi.matrix(ctx)?)
        })();
        report.record_result("pi homomorphism", r, || format!("{} {u:?} {v:?}", label()));
    }
    let px = ctx.x_pattern();
    for _ in 0..cfg.samples {
        let a = px.sample(cfg.bound, rng);
        let r = (|| -> Result<bool> {
            let w = decompose(ctx, &a)?;
            let phi = automap_of(ctx, &a)?;
            Ok(w.to_matrix(ctx)? == a && phi.matrix(ctx)? == a && w.to_automap(ctx)? == phi)
        })();
        report.record_result("decompose round trip", r, || {
            format!("{} {:?}", label(), a.matrix())
        });
    }
}

fn diagram<R: Rng + ?Sized>(
    ctx: &Context,
    cfg: &VerifyConfig,
    rng: &mut R,
    report: &mut Report,
    label: &dyn Fn() -> String,
) {
    let sets = ctx.lattice().closed_sets();
    let px = ctx.x_pattern();
    for _ in 0..cfg.samples.div_ceil(4).max(1) {
        let a = px.sample(cfg.bound, rng);
        let r = (|| -> Result<bool> {
            let phi = automap_of(ctx, &a)?;
            for &y in sets {
                let py = ctx.pattern(y)?;
                let phi_y = phi.restrict(ctx, y)?;
                if phi_y.matrix(ctx)? != a.minor(py)? {
                    return Ok(false);
                }
                for &z in sets.iter().filter(|z| z.is_subset(y)) {
                    let pz = ctx.pattern(z)?;
                    if phi_y.restrict(ctx, z)? != phi.restrict(ctx, z)?
                        || a.minor(py)?.minor(pz)? != a.minor(pz)?
                    {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })();
        report.record_result("restriction diagram", r, || {
            format!("{} {:?}", label(), a.matrix())
        });
    }
}

/// `G(Y)^φ = G(Y)` for every `Y ∈ L`, checked on generators both ways.
pub fn stabilises_every_closed_set(ctx: &Context, theta: &Automorphism) -> bool {
    ctx.lattice().closed_sets().iter().all(|&y| {
        y.iter()
            .all(|v| theta.forward.image(v).in_parabolic(y) && theta.inverse.image(v).in_parabolic(y))
    })
}

fn generators_stabilise(ctx: &Context, report: &mut Report, label: &dyn Fn() -> String) {
    for atom in GeneratorInventory::new(ctx).atoms() {
        let r = MixedAtom::Stab(atom.clone())
            .to_automorphism(ctx)
            .map(|t| stabilises_every_closed_set(ctx, &t) && t.forward.stabilizes_l(ctx));
        report.record_result("generators stabilise L", r, || format!("{} {atom:?}", label()));
    }
}

fn elementary_witnesses(ctx: &Context, report: &mut Report, label: &dyn Fn() -> String) {
    for spec in ElemConjSpec::all(ctx) {
        let r = (|| -> Result<bool> {
            let theta = MixedAtom::Conj(spec).to_automorphism(ctx)?;
            let x = ctx.group().generator(spec.x);
            let candidates = [ctx.group().identity(), x.clone(), x.inverse()];
            for &y in ctx.lattice().closed_sets() {
                let mut found = false;
                for g in &candidates {
                    if verify_witness(&theta, y, g)? {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Ok(false);
                }
            }
            Ok(theta.forward.is_conjugating())
        })();
        report.record_result("elementary conjugation witness", r, || {
            format!("{} {spec:?}", label())
        });
    }
}

fn factorization<R: Rng + ?Sized>(
    ctx: &Context,
    cfg: &VerifyConfig,
    rng: &mut R,
    report: &mut Report,
    label: &dyn Fn() -> String,
) {
    let inv = GeneratorInventory::new(ctx);
    let specs = ElemConjSpec::all(ctx);
    for _ in 0..cfg.samples {
        let len = rng.gen_range(0..=cfg.mixed_len);
        let atoms = random_mixed(ctx, &inv, &specs, len, cfg.bound.min(3) as i64, rng);
        let r = (|| -> Result<bool> {
            let theta = compose_mixed(ctx, &atoms)?;
            let f = factor_semidirect(ctx, &theta.forward)?;
            let stab_only: Vec<MixedAtom> = atoms.iter().filter(|a| !a.is_conjugating()).cloned().collect();
            let phi_only = compose_mixed(ctx, &stab_only)?;
            let g = factor_semidirect(ctx, &phi_only.forward)?;
            Ok(f.tau.then(&f.phi)? == theta.forward
                && f.tau.is_conjugating()
                && f.phi.stabilizes_l(ctx)
                && g.tau.is_identity()
                && g.phi == phi_only.forward)
        })();
        report.record_result("semidirect factorisation", r, || format!("{} {atoms:?}", label()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::all_graphs_up_to;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_graphs_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut report = Report::default();
        let cfg = VerifyConfig {
            samples: 3,
            ..VerifyConfig::default()
        };
        for g in all_graphs_up_to(4) {
            verify_graph(&g, &cfg, &mut rng, &mut report).unwrap();
        }
        assert!(report.passed(), "{}", report.table());
        assert_eq!(report.graphs, 75);
    }
}
