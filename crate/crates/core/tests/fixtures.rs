//! Small graphs whose lattices, orders and matrix patterns are worked out by
//! hand.

use std::collections::BTreeSet;

use pcstab::graph::named;
use pcstab::{Context, GeneratorInventory, Graph, IntMatrix};

fn sets(ctx: &Context) -> BTreeSet<String> {
    ctx.lattice()
        .closed_sets()
        .iter()
        .map(|&y| ctx.graph().set_names(y).join(""))
        .collect()
}

fn expect(list: &[&str]) -> BTreeSet<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn transvections(ctx: &Context) -> Vec<(String, String)> {
    let g = ctx.graph();
    let mut out: Vec<(String, String)> = GeneratorInventory::new(ctx)
        .transvections
        .iter()
        .map(|&(x, y)| (g.name(x).to_string(), g.name(y).to_string()))
        .collect();
    out.sort();
    out
}

fn allowed_pairs(ctx: &Context) -> BTreeSet<(String, String)> {
    let p = ctx.x_pattern();
    let g = ctx.graph();
    p.off_block_positions()
        .into_iter()
        .map(|(i, j)| (g.name(p.order()[i]).to_string(), g.name(p.order()[j]).to_string()))
        .collect()
}

fn pairs(list: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

#[test]
fn path_on_four_vertices() {
    // a^⊥ = ab, b^⊥ = abc, c^⊥ = bcd, d^⊥ = cd
    let g = Graph::from_named(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
    let ctx = Context::new(g).unwrap();
    assert_eq!(
        sets(&ctx),
        expect(&["", "b", "c", "ab", "bc", "cd", "abc", "bcd", "abcd"])
    );
    assert_eq!(
        transvections(&ctx),
        vec![("a".into(), "b".into()), ("d".into(), "c".into())]
    );
    assert_eq!(allowed_pairs(&ctx), pairs(&[("a", "b"), ("d", "c")]));
    let seq = ctx.order().sequence();
    let pos = |v: &str| seq.iter().position(|&x| x == ctx.vertex(v).unwrap()).unwrap();
    assert!(pos("a") < pos("b") && pos("d") < pos("c"));
}

#[test]
fn four_cycle() {
    // a^⊥ = abd and c^⊥ = bcd, so every subset is an intersection of balls
    let g = Graph::from_named(
        &["a", "b", "c", "d"],
        &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
    )
    .unwrap();
    let ctx = Context::new(g).unwrap();
    assert_eq!(ctx.lattice().closed_sets().len(), 16);
    assert!(transvections(&ctx).is_empty());
    assert_eq!(ctx.lattice().classes().len(), 4);
    let swap = IntMatrix::from_rows(&[
        vec![0, 1, 0, 0],
        vec![1, 0, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
    ])
    .unwrap();
    assert!(!ctx.x_pattern().is_member(&swap).unwrap());
    let flip = IntMatrix::from_rows(&[
        vec![-1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, -1, 0],
        vec![0, 0, 0, 1],
    ])
    .unwrap();
    assert!(ctx.x_pattern().is_member(&flip).unwrap());
}

#[test]
fn pentagon() {
    // every ball is three consecutive vertices and cl(x) = x
    let names = ["a", "b", "c", "d", "e"];
    let edges: Vec<(&str, &str)> = (0..5).map(|i| (names[i], names[(i + 1) % 5])).collect();
    let ctx = Context::new(Graph::from_named(&names, &edges).unwrap()).unwrap();
    assert_eq!(
        sets(&ctx),
        expect(&[
            "", "a", "b", "c", "d", "e", "ab", "bc", "cd", "de", "ae", "abe", "abc", "bcd", "cde", "ade",
            "abcde"
        ])
    );
    assert!(transvections(&ctx).is_empty());
    assert!(allowed_pairs(&ctx).is_empty());
}

#[test]
fn complete_and_edgeless() {
    let k3 = Context::new(named::k3()).unwrap();
    assert_eq!(sets(&k3), expect(&["abc"]));
    assert_eq!(k3.lattice().classes().len(), 1);
    let m = IntMatrix::from_rows(&[vec![2, 1, 0], vec![1, 1, 0], vec![0, 0, -1]]).unwrap();
    assert!(k3.x_pattern().is_member(&m).unwrap());

    let e3 = Context::new(named::edgeless(&["a", "b", "c"])).unwrap();
    assert_eq!(sets(&e3), expect(&["", "a", "b", "c", "abc"]));
    assert!(transvections(&e3).is_empty());
}

#[test]
fn star_with_three_leaves() {
    // the centre commutes with everything; leaves transvect onto it
    let g = Graph::from_named(&["a", "b", "c", "z"], &[("a", "z"), ("b", "z"), ("c", "z")]).unwrap();
    let ctx = Context::new(g).unwrap();
    assert_eq!(sets(&ctx), expect(&["z", "az", "bz", "cz", "abcz"]));
    assert_eq!(
        transvections(&ctx),
        vec![
            ("a".into(), "z".into()),
            ("b".into(), "z".into()),
            ("c".into(), "z".into())
        ]
    );
    assert_eq!(ctx.order().sequence().last(), Some(&ctx.vertex("z").unwrap()));
}
