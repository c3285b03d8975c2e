use super::*;
use crate::ordinal::ExpRank;
use crate::wgraph::catalog;

fn ord(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn g(name: &str) -> WGraph {
    catalog::by_name(name).unwrap()
}

#[test]
fn ray_distance() {
    let r = g("ray0");
    let d = wdist(&r, &r.node("r[2]").unwrap(), &r.node("r[7]").unwrap(), 8).unwrap();
    assert_eq!(d.value, ord("5"));
    assert!(d.certified);
    let x = r.node("r[3]").unwrap();
    assert_eq!(wdist(&r, &x, &x, 4).unwrap().value, Ordinal::zero());
}

#[test]
fn ladder_distances() {
    let l = g("ladder1");
    let m = Metric::new(&l);
    let n = |s: &str| l.node(s).unwrap();
    assert_eq!(m.wdist(&n("b1[0]"), &n("b1[1]"), 4).unwrap().value, ord("w"));
    assert_eq!(m.wdist(&n("b1[0]"), &n("b1[2]"), 4).unwrap().value, ord("w*2"));
    assert_eq!(m.wdist(&n("b1[1]"), &n("r[1,3]"), 4).unwrap().value, ord("w + 3"));
    assert_eq!(m.wdist(&n("r[0,2]"), &n("r[1,2]"), 4).unwrap().value, ord("w + 4"));
    // promotion: r[1,0] sits inside b1[0]
    assert_eq!(
        m.wdist(&n("r[1,0]"), &n("b1[2]"), 4).unwrap().value,
        m.wdist(&n("b1[0]"), &n("b1[2]"), 4).unwrap().value
    );
}

#[test]
fn hub_distance() {
    let h = g("hub1");
    let d = wdist(&h, &h.node("e[0]").unwrap(), &h.node("e[3]").unwrap(), 4).unwrap();
    assert_eq!(d.value, ord("w*2 + 2"));
    assert!(d.certified);
}

#[test]
fn scoped_distance_stays_in_section() {
    let l = g("ladder1");
    let m = Metric::new(&l);
    let n = |s: &str| l.node(s).unwrap();
    let zero = Some(Rank::Finite(0));
    assert_eq!(m.dist_at(&n("r[1,0]"), &n("r[1,3]"), 4, zero).unwrap(), ord("3"));
    assert!(matches!(m.dist_at(&n("r[0,0]"), &n("r[1,0]"), 4, zero), Err(Error::Unreachable(..))));
    assert!(m.dist_at(&n("b1[0]"), &n("r[1,0]"), 4, zero).is_err());
}

#[test]
fn tip_only_model() {
    let l = g("ladder1");
    let m = Metric::with_model(&l, LengthModel::TipOnly);
    let n = |s: &str| l.node(s).unwrap();
    assert_eq!(m.dist_at(&n("b1[1]"), &n("r[1,3]"), 4, None).unwrap(), ord("w"));
    assert_eq!(m.dist_at(&n("r[0,2]"), &n("r[1,2]"), 4, None).unwrap(), ord("w + 2"));
}

#[test]
fn walk_lengths() {
    let l = g("ladder1");
    let m = Metric::new(&l);
    let n = |s: &str| l.node(s).unwrap();
    let w = m.shortest_walk(&n("b1[1]"), &n("r[1,2]"), 4, None).unwrap();
    assert_eq!(walk_length(&w), ord("w + 2"));
    assert_eq!(w.to_string(), "b1[1] =tip t0[1] (rank 0)= r[1,0] - r[1,1] - r[1,2]");
    w.validate(&l.expand(4).unwrap()).unwrap();
    let three = WalkSpec {
        nodes: vec![n("r[0,0]"), n("r[0,1]"), n("r[0,2]"), n("r[0,3]")],
        segments: vec![Segment::Branch; 3],
    };
    assert_eq!(walk_length(&three), ord("3"));
    assert_eq!(walk_length(&WalkSpec::trivial(n("r[0,0]"))), Ordinal::zero());
    let bad = WalkSpec { nodes: vec![n("r[0,0]"), n("r[0,2]")], segments: vec![Segment::Branch] };
    assert!(bad.validate(&l.expand(4).unwrap()).is_err());
}

#[test]
fn reach_walk_through_rung() {
    let l = g("ladder1");
    let m = Metric::new(&l);
    let n = |s: &str| l.node(s).unwrap();
    let secs = l.sections(Rank::Finite(0), 4).unwrap();
    let w = m.reach_walk(&n("b1[0]"), &n("b1[1]"), &secs[1]).unwrap();
    w.validate(&l.expand(4).unwrap()).unwrap();
    assert_eq!(w.start(), &n("b1[0]"));
    assert_eq!(w.end(), &n("b1[1]"));
    assert!(w.nodes[1..w.nodes.len() - 1].iter().all(|x| secs[1].contains(x)));
    assert!(m.reach_walk(&n("b1[0]"), &n("b1[2]"), &secs[1]).is_err());
    assert_eq!(m.reach_walk(&n("b1[1]"), &n("b1[1]"), &secs[1]).unwrap().segments.len(), 0);

    let h = g("hub1");
    let mh = Metric::new(&h);
    let hs = h.sections(Rank::Finite(0), 3).unwrap();
    let w = mh.reach_walk(&h.node("e[0]").unwrap(), &h.node("e[2]").unwrap(), &hs[0]).unwrap();
    assert_eq!(walk_length(&w), ord("w*2 + 2"));
}

#[test]
fn crossing_bounds() {
    let l = g("ladder1");
    let m = Metric::new(&l);
    let n = |s: &str| l.node(s).unwrap();
    assert!(m.boundary_crossing_bound(&n("b1[0]"), &n("b1[2]"), 4).unwrap());
    assert!(m.boundary_crossing_bound(&n("b1[0]"), &n("b1[1]"), 4).unwrap());
    let l2 = g("ladder2");
    let m2 = Metric::new(&l2);
    let (a, b) = (l2.node("b2[0]").unwrap(), l2.node("b2[2]").unwrap());
    assert!(m2.boundary_crossing_bound(&a, &b, 3).unwrap());
    assert!(m2.dist_at(&a, &b, 3, None).unwrap() >= Ordinal::omega_pow(ExpRank::Finite(2)));
}

#[test]
fn unbounded_walks() {
    let l = g("ladder1");
    let m = Metric::new(&l);
    let u = m.unbounded_walk(Rank::Finite(1), &l.node("b1[0]").unwrap(), 3, 5).unwrap();
    assert_eq!(u.subsequence, vec![1, 2, 3]);
    let names: Vec<String> = u.nodes.iter().map(|x| x.to_string()).collect();
    assert_eq!(names, ["b1[0]", "b1[1]", "b1[2]", "b1[3]"]);
    u.walk.validate(&l.expand(5).unwrap()).unwrap();
    assert_eq!(walk_length(&u.walk), ord("w*3"));

    let l2 = g("ladder2");
    let m2 = Metric::new(&l2);
    let u = m2.unbounded_walk(Rank::Finite(2), &l2.node("b2[0]").unwrap(), 2, 3).unwrap();
    assert_eq!(u.distances[u.subsequence[1]], ord("w^2*2"));

    let none = m.unbounded_walk(Rank::Finite(1), &l.node("b1[0]").unwrap(), 0, 5).unwrap();
    assert!(none.subsequence.is_empty());
    assert!(matches!(m.unbounded_walk(Rank::Finite(1), &l.node("b1[0]").unwrap(), 9, 4), Err(Error::Inconclusive(_))));
    let h = g("hub1");
    assert!(matches!(
        Metric::new(&h).unbounded_walk(Rank::Finite(1), &h.node("e[0]").unwrap(), 2, 4),
        Err(Error::Inconclusive(_))
    ));
}
