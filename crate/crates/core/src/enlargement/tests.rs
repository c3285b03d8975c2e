use super::*;
use crate::wgraph::catalog;

fn ord(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn g(name: &str) -> WGraph {
    catalog::by_name(name).unwrap()
}

#[test]
fn hyperdist_to_itself_is_zero() {
    let l = g("ladder1");
    let e = Enlargement::new(&l);
    let x = e.parse("b1[n]").unwrap();
    let p = e.hyperdist(&x, &x, 6).unwrap();
    assert!(p.certified());
    assert!((0..=6).all(|n| p.value(n) == Some(&Ordinal::zero())));
    assert!(e.hypernode_equal(&x, &x, 6).unwrap().is_in());
}

#[test]
fn constant_against_moving_hypernode() {
    let l = g("ladder1");
    let e = Enlargement::new(&l);
    let x = e.parse("const(b1[0])").unwrap();
    let y = e.parse("b1[n]").unwrap();
    let p = e.hyperdist(&x, &y, 6).unwrap();
    assert_eq!(p.value(4), Some(&ord("w*4")));
    let fit = p.fit.as_ref().unwrap();
    assert_eq!(fit.eval(100).unwrap(), ord("w*100"));
    assert!(e.hypernode_equal(&x, &y, 6).unwrap().is_out());
}

#[test]
fn neighbouring_rungs_form_a_hyperbranch() {
    let l = g("ladder1");
    let e = Enlargement::new(&l);
    let x = e.parse("r[0,n]").unwrap();
    let y = e.parse("r[0,n + 1]").unwrap();
    assert!(e.hyperbranch(&x, &y, 6).unwrap().is_in());
    let z = e.parse("r[0,2n]").unwrap();
    assert!(e.hyperbranch(&x, &z, 6).unwrap().is_out());
}

#[test]
fn maximality_of_hypernodes() {
    let l = g("ladder1");
    let e = Enlargement::new(&l);
    assert!(e.maximal_hyper(&e.parse("b1[n]").unwrap(), 6).unwrap().is_in());
    assert!(e.maximal_hyper(&e.parse("r[n,0]").unwrap(), 6).unwrap().is_out());
    assert!(e.exists_hyper(&e.parse("r[n,n]").unwrap(), 6).unwrap().is_in());
}

#[test]
fn triangle_inequality_holds_eventually() {
    let l = g("ladder1");
    let e = Enlargement::new(&l);
    let x = e.parse("const(b1[0])").unwrap();
    let y = e.parse("r[n,1]").unwrap();
    let z = e.parse("b1[2n]").unwrap();
    assert!(e.triangle_hyper(&x, &y, &z, 6).unwrap().is_in());
}

fn ladder1_chain(l: &WGraph) -> (Enlargement<'_>, Arc<Chain>) {
    let e = Enlargement::new(l);
    let base = e.parse("b1[n]").unwrap();
    let chain = Chain::new(base, l.node("b1[0]").unwrap(), Rank::Finite(1), 0).unwrap();
    (e, chain)
}

#[test]
fn stair_schedule_on_ladder() {
    let l = g("ladder1");
    let (e, chain) = ladder1_chain(&l);
    let s1 = Schedule::stage(&chain, StageKind::Stair, None).unwrap();
    let taus: Vec<u64> = (0..10).map(|n| e.tau(&s1, n).unwrap()).collect();
    assert_eq!(taus, [0, 0, 0, 0, 0, 2, 2, 2, 2, 5]);
    assert_eq!(e.link_threshold(&s1, 2).unwrap(), 5);
    assert_eq!(s1.position(), -1);
    let spec = s1.spec();
    assert_eq!(e.indices_at(&spec, 6).unwrap(), vec![2]);
    let s2 = Schedule::stage(&chain, StageKind::Stair, Some(s1.clone())).unwrap();
    assert_eq!(s2.position(), -2);
    assert!(e.sigma(&s2, 30).unwrap() <= e.sigma(&s1, 30).unwrap());
    assert!(Schedule::stage(&chain, StageKind::Leap, Some(s1)).is_err());
}

#[test]
fn leap_schedule_on_ladder() {
    let l = g("ladder1");
    let (e, chain) = ladder1_chain(&l);
    let l1 = Schedule::stage(&chain, StageKind::Leap, None).unwrap();
    let taus: Vec<u64> = (0..6).map(|n| e.tau(&l1, n).unwrap()).collect();
    assert_eq!(taus, [0, 2, 4, 6, 8, 10]);
    let l2 = Schedule::stage(&chain, StageKind::Leap, Some(l1.clone())).unwrap();
    assert_eq!(e.sigma(&l2, 3).unwrap(), e.sigma(&l1, e.tau(&l2, 3).unwrap()).unwrap());
    assert_eq!(l2.to_string(), "leap^2(b1[n] @ b1[0], rho=1)");
}

#[test]
fn chains_cannot_start_from_schedules_or_arrow_rank() {
    let l = g("ladder1");
    let (e, chain) = ladder1_chain(&l);
    let s1 = Schedule::stage(&chain, StageKind::Stair, None).unwrap();
    let anchor = l.node("b1[0]").unwrap();
    assert!(Chain::new(s1.spec(), anchor.clone(), Rank::Finite(1), 0).is_err());
    assert!(Chain::new(e.parse("b1[n]").unwrap(), anchor, Rank::ArrowOmega, 0).is_err());
}
