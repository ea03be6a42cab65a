//! JSON forms of matrices, generator words, composite automorphisms and the
//! derived structures printed by the command-line tool.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::aut::{GeneratorAtom, GeneratorInventory, GeneratorWord};
use crate::conj::{ElemConjSpec, Factorization, MixedAtom};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::int_matrix::IntMatrix;
use crate::stab_matrix::{StabMatrix, StabPattern};
use crate::vertex_set::VertexSet;

/// `{"closed_set": ["a","c","b"], "rows": [[1,0,5],[0,-1,2],[0,0,1]]}`; row
/// and column `i` belong to the `i`-th listed vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub closed_set: Vec<String>,
    pub rows: Vec<Vec<i64>>,
}

impl MatrixJson {
    pub fn from_matrix(ctx: &Context, a: &StabMatrix) -> Self {
        let g = ctx.graph();
        MatrixJson {
            closed_set: a
                .pattern()
                .order()
                .iter()
                .map(|&v| g.name(v).to_string())
                .collect(),
            rows: a.matrix().rows(),
        }
    }

    /// Accepts the vertices in any order and reindexes them by `≺`.
    pub fn to_matrix(&self, ctx: &Context) -> Result<StabMatrix> {
        let g = ctx.graph();
        let listed = self
            .closed_set
            .iter()
            .map(|s| g.index_of(s))
            .collect::<Result<Vec<_>>>()?;
        let y: VertexSet = listed.iter().copied().collect();
        if y.len() != listed.len() {
            return Err(Error::Parse("closed_set lists a vertex twice".into()));
        }
        let raw = IntMatrix::from_rows(&self.rows)?;
        if raw.dim() != listed.len() {
            return Err(Error::DimensionMismatch {
                expected: listed.len(),
                found: raw.dim(),
            });
        }
        let pattern: Arc<StabPattern> = Arc::clone(ctx.pattern(y)?);
        let pos: Vec<usize> = pattern
            .order()
            .iter()
            .map(|v| listed.iter().position(|u| u == v).expect("same set"))
            .collect();
        StabMatrix::new(pattern, raw.submatrix(&pos))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMoveJson {
    pub class: Vec<String>,
    pub rows: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjJson {
    pub x: String,
    pub component: Vec<String>,
    #[serde(default = "one_i8")]
    pub dir: i8,
}

fn one_i8() -> i8 {
    1
}

fn one_i64() -> i64 {
    1
}

/// One atom of a composite: `{"tr": ["a","b"], "e": 2}`, `{"flip": "b"}`,
/// `{"class_move": {"class": [...], "rows": [...]}}`,
/// `{"conj": {"x": "a", "component": ["c"], "dir": 1}}` or
/// `{"inner": "a b^-1"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomJson {
    Tr {
        tr: [String; 2],
        #[serde(default = "one_i64")]
        e: i64,
    },
    Flip {
        flip: String,
    },
    ClassMove {
        class_move: ClassMoveJson,
    },
    Conj {
        conj: ConjJson,
    },
    Inner {
        inner: String,
    },
}

impl AtomJson {
    pub fn from_atom(ctx: &Context, atom: &GeneratorAtom) -> Self {
        let name = |v: usize| ctx.graph().name(v).to_string();
        match atom {
            GeneratorAtom::SignFlip(x) => AtomJson::Flip { flip: name(*x) },
            GeneratorAtom::ClassMove { class, matrix } => AtomJson::ClassMove {
                class_move: ClassMoveJson {
                    class: class.iter().map(|&v| name(v)).collect(),
                    rows: matrix.rows(),
                },
            },
            GeneratorAtom::Transvection { x, y, exponent } => AtomJson::Tr {
                tr: [name(*x), name(*y)],
                e: *exponent,
            },
        }
    }

    pub fn from_mixed(ctx: &Context, atom: &MixedAtom) -> Self {
        let g = ctx.graph();
        match atom {
            MixedAtom::Stab(a) => Self::from_atom(ctx, a),
            MixedAtom::Conj(s) => AtomJson::Conj {
                conj: ConjJson {
                    x: g.name(s.x).to_string(),
                    component: g.set_names(s.component),
                    dir: s.direction,
                },
            },
            MixedAtom::Inner(w) => AtomJson::Inner {
                inner: w.to_literal(),
            },
        }
    }

    pub fn to_mixed(&self, ctx: &Context) -> Result<MixedAtom> {
        let g = ctx.graph();
        Ok(match self {
            AtomJson::Tr { tr: [x, y], e } => MixedAtom::Stab(GeneratorAtom::Transvection {
                x: g.index_of(x)?,
                y: g.index_of(y)?,
                exponent: *e,
            }),
            AtomJson::Flip { flip } => MixedAtom::Stab(GeneratorAtom::SignFlip(g.index_of(flip)?)),
            AtomJson::ClassMove { class_move } => MixedAtom::Stab(GeneratorAtom::ClassMove {
                class: class_move
                    .class
                    .iter()
                    .map(|s| g.index_of(s))
                    .collect::<Result<_>>()?,
                matrix: IntMatrix::from_rows(&class_move.rows)?,
            }),
            AtomJson::Conj { conj } => {
                let component = conj
                    .component
                    .iter()
                    .map(|s| g.index_of(s))
                    .collect::<Result<VertexSet>>()?;
                MixedAtom::Conj(ElemConjSpec {
                    x: g.index_of(&conj.x)?,
                    component,
                    direction: conj.dir,
                })
            }
            AtomJson::Inner { inner } => MixedAtom::Inner(ctx.word(inner)?),
        })
    }

    pub fn to_atom(&self, ctx: &Context) -> Result<GeneratorAtom> {
        match self.to_mixed(ctx)? {
            MixedAtom::Stab(a) => {
                a.validate(ctx)?;
                Ok(a)
            }
            _ => Err(Error::IllegalAtom(
                "conjugating atoms are not generators of the stabiliser".into(),
            )),
        }
    }
}

pub fn generator_word_to_json(ctx: &Context, w: &GeneratorWord) -> Vec<AtomJson> {
    w.atoms().iter().map(|a| AtomJson::from_atom(ctx, a)).collect()
}

pub fn generator_word_from_json(ctx: &Context, atoms: &[AtomJson]) -> Result<GeneratorWord> {
    atoms
        .iter()
        .map(|a| a.to_atom(ctx))
        .collect::<Result<Vec<_>>>()
        .map(GeneratorWord)
}

pub fn mixed_from_json(ctx: &Context, atoms: &[AtomJson]) -> Result<Vec<MixedAtom>> {
    atoms.iter().map(|a| a.to_mixed(ctx)).collect()
}

pub fn parse_generator_word(ctx: &Context, json: &str) -> Result<GeneratorWord> {
    let atoms: Vec<AtomJson> = serde_json::from_str(json)?;
    generator_word_from_json(ctx, &atoms)
}

pub fn parse_mixed(ctx: &Context, json: &str) -> Result<Vec<MixedAtom>> {
    let atoms: Vec<AtomJson> = serde_json::from_str(json)?;
    mixed_from_json(ctx, &atoms)
}

pub fn parse_matrix(ctx: &Context, json: &str) -> Result<StabMatrix> {
    let m: MatrixJson = serde_json::from_str(json)?;
    m.to_matrix(ctx)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub tau: BTreeMap<String, String>,
    pub phi: Vec<AtomJson>,
    pub check: String,
}

impl FactorJson {
    pub fn new(ctx: &Context, f: &Factorization, passed: bool) -> Self {
        FactorJson {
            tau: f.tau.to_literals().into_iter().collect(),
            phi: generator_word_to_json(ctx, &f.phi_word),
            check: if passed { "pass" } else { "fail" }.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub closed_sets: Vec<Vec<String>>,
    /// Covering pairs as indices into `closed_sets`.
    pub hasse: Vec<[usize; 2]>,
    pub classes: Vec<Vec<String>>,
    pub heights: BTreeMap<String, usize>,
}

impl LatticeJson {
    pub fn new(ctx: &Context) -> Self {
        let g = ctx.graph();
        let lat = ctx.lattice();
        LatticeJson {
            closed_sets: lat.closed_sets().iter().map(|&y| g.set_names(y)).collect(),
            hasse: lat.hasse().into_iter().map(|(a, b)| [a, b]).collect(),
            classes: lat.classes().iter().map(|&c| g.set_names(c)).collect(),
            heights: (0..g.len())
                .map(|v| (g.name(v).to_string(), lat.height(v)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderJson {
    pub order: Vec<String>,
    pub heights: Vec<usize>,
    pub x_min: Vec<String>,
}

impl OrderJson {
    pub fn new(ctx: &Context) -> Self {
        let g = ctx.graph();
        let ord = ctx.order();
        OrderJson {
            order: ord.sequence().iter().map(|&v| g.name(v).to_string()).collect(),
            heights: ord.sequence().iter().map(|&v| ord.height(v)).collect(),
            x_min: ord
                .sorted(ord.x_min(ctx.lattice()))
                .into_iter()
                .map(|v| g.name(v).to_string())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InventoryJson {
    pub flips: Vec<String>,
    pub classes: Vec<Vec<String>>,
    pub transvections: Vec<[String; 2]>,
}

impl InventoryJson {
    pub fn new(ctx: &Context, inv: &GeneratorInventory) -> Self {
        let name = |v: usize| ctx.graph().name(v).to_string();
        InventoryJson {
            flips: inv.flips.iter().map(|&v| name(v)).collect(),
            classes: inv
                .classes
                .iter()
                .map(|c| c.iter().map(|&v| name(v)).collect())
                .collect(),
            transvections: inv
                .transvections
                .iter()
                .map(|&(x, y)| [name(x), name(y)])
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub closed_set: Vec<String>,
    pub blocks: Vec<Vec<String>>,
    /// Allowed positions `(row vertex, column vertex)` outside the blocks.
    pub off_block: Vec<[String; 2]>,
}

impl PatternJson {
    pub fn new(ctx: &Context, p: &StabPattern) -> Self {
        let name = |i: usize| ctx.graph().name(p.order()[i]).to_string();
        PatternJson {
            closed_set: (0..p.dim()).map(name).collect(),
            blocks: p.blocks().iter().map(|b| b.clone().map(name).collect()).collect(),
            off_block: p
                .off_block_positions()
                .into_iter()
                .map(|(i, j)| [name(i), name(j)])
                .collect(),
        }
    }
}
