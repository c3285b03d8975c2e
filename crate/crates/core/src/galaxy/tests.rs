use super::*;
use crate::enlargement::Verdict;
use crate::wgraph::catalog;

fn g(name: &str) -> WGraph {
    catalog::by_name(name).unwrap()
}

fn specs(gal: &Galaxies<'_>, texts: &[&str]) -> Vec<HypernodeSpec> {
    texts.iter().map(|t| gal.parse(t).unwrap()).collect()
}

const W: u64 = 8;

#[test]
fn limited_distance_on_ladder() {
    let l = g("ladder1");
    let gal = Galaxies::new(&l);
    let p = |t: &str| gal.parse(t).unwrap();
    let one = Rank::Finite(1);
    assert!(gal.limitedly_distant(&p("const(b1[0])"), &p("const(b1[0])"), one, W).unwrap().is_in());
    assert!(gal.limitedly_distant(&p("const(b1[0])"), &p("b1[n]"), one, W).unwrap().is_out());
    let shifted = gal.limitedly_distant(&p("b1[n]"), &p("b1[n+3]"), one, W).unwrap();
    assert!(shifted.is_in());
    assert_eq!(shifted.note.as_deref(), Some("mu = 3"));
    // at rank 0 even the shift is out of reach
    assert!(gal.limitedly_distant(&p("b1[n]"), &p("b1[n+3]"), Rank::Finite(0), W).unwrap().is_out());
    assert!(gal.limitedly_distant(&p("b1[n]"), &p("b1[n]"), Rank::ArrowOmega, W).is_err());
}

#[test]
fn bounded_decision_on_synthetic_profiles() {
    let sample = |t: String| Some(crate::enlargement::Sample { value: t.parse().unwrap(), certified: true });
    let profile = |f: &dyn Fn(u64) -> String| {
        let samples: Vec<_> = (0..=W).map(|n| sample(f(n))).collect();
        let fit = crate::enlargement::fit_samples(&samples);
        DistanceProfile { samples, fit }
    };
    let square = profile(&|n| format!("w^2*{} + w*3", n * n));
    assert!(bounded_decision(&square, Rank::Finite(1), W).is_out());
    assert!(bounded_decision(&square, Rank::Finite(2), W).is_out());
    assert!(bounded_decision(&square, Rank::Finite(3), W).is_in());
    assert!(bounded_decision(&square, Rank::ArrowOmega, W).is_in());
    let tall = profile(&|n| format!("w^w*{} + {n}", n + 1));
    assert!(bounded_decision(&tall, Rank::ArrowOmega, W).is_out());
    assert!(bounded_decision(&tall, Rank::Omega, W).is_out());
    let flat = profile(&|n| format!("w^w*2 + w^5*{n}"));
    assert_eq!(bounded_decision(&flat, Rank::Omega, W).note.as_deref(), Some("mu = 3"));
    let wild = DistanceProfile { samples: (0..=W).map(|n| sample(format!("{}", 1u64 << n))).collect(), fit: None };
    assert_eq!(bounded_decision(&wild, Rank::Finite(0), W).verdict, Verdict::Inconclusive);
}

#[test]
fn classification_examples() {
    let l = g("ladder1");
    let gal = Galaxies::new(&l);
    let one = Rank::Finite(1);
    let std = gal.classify(&specs(&gal, &["const(b1[0])", "const(b1[2])"]), one, W).unwrap();
    assert_eq!(std.len(), 1);
    assert!(std.blocks[0].0.principal);
    let mixed = gal.classify(&specs(&gal, &["const(b1[0])", "b1[n]", "b1[n+3]"]), one, W).unwrap();
    assert_eq!(mixed.sizes(), vec![1, 2]);
    assert_eq!(mixed.block_of, vec![0, 1, 1]);
    assert!(!mixed.blocks[1].0.principal);
    assert!(mixed.inconclusive.is_empty());
    assert!(gal.classify(&[], one, W).unwrap().is_empty());
}

#[test]
fn hyperbranch_ends_share_a_galaxy() {
    let l = g("ladder1");
    let gal = Galaxies::new(&l);
    let ends = specs(&gal, &["r[n,n]", "r[n,n+1]"]);
    assert!(gal.enlargement().hyperbranch(&ends[0], &ends[1], W).unwrap().is_in());
    for rho in [Rank::Finite(0), Rank::Finite(1)] {
        assert_eq!(gal.classify(&ends, rho, W).unwrap().len(), 1);
    }
}

#[test]
fn principal_membership_examples() {
    let l = g("ladder1");
    let gal = Galaxies::new(&l);
    let one = Rank::Finite(1);
    assert!(gal.principal_membership(&gal.parse("const(b1[3])").unwrap(), one, W).unwrap().is_in());
    assert!(gal.principal_membership(&gal.parse("b1[n]").unwrap(), one, W).unwrap().is_out());
    let h = g("hub1");
    let hub = Galaxies::new(&h);
    for t in ["h", "e[n]", "r[n,n]", "r[2n,1]", "e[n^2]"] {
        let d = hub.principal_membership(&hub.parse(t).unwrap(), one, W).unwrap();
        assert!(d.is_in(), "{t}: {d}");
    }
}

#[test]
fn refinement_on_ladder2() {
    let l = g("ladder2");
    let gal = Galaxies::new(&l);
    let set = specs(&gal, &["const(b2[0])", "b2[n]", "b1[0,n]", "b1[n,0]", "const(r[0,0,1])", "r[0,0,n]"]);
    for (a, r) in [(0, 1), (0, 2), (1, 2), (1, 1)] {
        let rep = gal.refinement(&set, Rank::Finite(a), Rank::Finite(r), 6).unwrap();
        assert!(rep.holds, "{a} -> {r}");
        assert!(rep.skipped.is_empty());
    }
    let rep = gal.refinement(&set, Rank::Finite(1), Rank::Finite(2), 6).unwrap();
    assert!(rep.alpha.len() > rep.rho.len());
    assert!(gal.refinement(&set, Rank::Finite(2), Rank::Finite(1), 6).is_err());
}

#[test]
fn rung_diagonal_is_principal_one_rank_up() {
    let l = g("ladder2");
    let gal = Galaxies::new(&l);
    let s1 = l.sections(Rank::Finite(1), 4).unwrap();
    let s2 = l.sections(Rank::Finite(2), 4).unwrap();
    let rung = s1.iter().find(|s| s.contains(&l.node("b1[0,0]").unwrap())).unwrap();
    let diag = gal.parse("b1[0,n]").unwrap();
    let standard = HypernodeSpec::constant(&l, rung.representative());
    let low = gal.limitedly_distant_in(&diag, &standard, Rank::Finite(1), 6, Some(Rank::Finite(1))).unwrap();
    assert!(low.is_out());
    let probes = gal.section_probes(rung, 6, 8).unwrap();
    assert!(probes.len() >= 5, "{probes:?}");
    assert!(probes.contains(&diag));
    let rep = gal.section_embedding(rung, &s2[0], &probes, 6).unwrap();
    assert!(rep.holds);
    assert!(rep.outside.is_empty());
    assert!(gal.section_embedding(&s2[0], rung, &probes, 6).is_err());
}

#[test]
fn closeness_examples() {
    let l = g("ladder1");
    let gal = Galaxies::new(&l);
    let p = |t: &str| gal.parse(t).unwrap();
    let x = p("const(b1[0])");
    let one = Rank::Finite(1);
    let c = gal.closer(&p("b1[n]"), &p("b1[2n]"), one, &x, 3, W).unwrap();
    assert_eq!(c.verdict, Closeness::Closer);
    assert_eq!(c.certificates.len(), 3);
    let back = gal.closer(&p("b1[2n]"), &p("b1[n]"), one, &x, 3, W).unwrap();
    assert_eq!(back.verdict, Closeness::NotCloser);
    let shift = gal.closer(&p("b1[n]"), &p("b1[n+3]"), one, &x, 3, W).unwrap();
    assert_eq!(shift.verdict, Closeness::NotCloser);
    assert_eq!(shift.certificates.last().unwrap().0, 4);
    let same = gal.closer(&p("b1[n]"), &p("b1[n]"), one, &x, 3, W).unwrap();
    assert_eq!(same.verdict, Closeness::NotCloser);
    assert!(gal.closer(&p("b1[n]"), &p("b1[2n]"), Rank::ArrowOmega, &x, 3, W).is_err());
}

#[test]
fn closeness_chain_of_polynomial_speeds() {
    let l = g("ladder1");
    let gal = Galaxies::new(&l);
    let set = specs(&gal, &["b1[n^2]", "b1[n]", "b1[2n]"]);
    let rep = gal.partial_order_check(&set, Rank::Finite(1), 6).unwrap();
    assert_eq!(rep.relation[1][2], Closeness::Closer);
    assert_eq!(rep.relation[2][0], Closeness::Closer);
    assert_eq!(rep.relation[1][0], Closeness::Closer);
    assert_eq!(rep.hasse, vec![(1, 2), (2, 0)]);
    assert_eq!(rep.triples_checked, 1);
}

#[test]
fn ladder_of_galaxies() {
    let l = g("ladder1");
    let gal = Galaxies::new(&l);
    let x = gal.parse("const(b1[0])").unwrap();
    let v = gal.parse("b1[n]").unwrap();
    let one = Rank::Finite(1);
    assert_eq!(gal.ladder(&x, &v, one, 0, W).unwrap(), vec![v.clone()]);
    let rungs = gal.ladder(&x, &v, one, 2, W).unwrap();
    assert_eq!(rungs.len(), 5);
    assert_eq!(rungs[2], v);
    let rep = gal.partial_order_check(&rungs, one, W).unwrap();
    for (i, rung) in rungs.iter().enumerate() {
        for j in 0..5 {
            let expected = if i < j { Closeness::Closer } else { Closeness::NotCloser };
            assert_eq!(rep.relation[i][j], expected, "{i} vs {j}");
        }
        assert!(gal.principal_membership(rung, one, W).unwrap().is_out());
    }
    assert_eq!(rep.hasse, vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
    assert_eq!(gal.classify(&rungs, one, W).unwrap().len(), 5);
    assert_eq!(gal.classify(&rungs, one, W).unwrap().blocks.iter().filter(|b| b.0.principal).count(), 0);
    // a standard hypernode cannot seed a ladder
    assert!(matches!(gal.ladder(&x, &x, one, 1, W), Err(Error::Construction(_))));
}

#[test]
fn witnesses_of_non_principal_galaxies() {
    let l = g("ladder1");
    let w = Galaxies::new(&l).non_principal_witness(Rank::Finite(1), 10).unwrap();
    assert_eq!(w.spec.to_string(), "b1[n]");
    assert!(w.membership.is_out());
    let l2 = g("ladder2");
    let w2 = Galaxies::new(&l2).non_principal_witness(Rank::Finite(2), 6).unwrap();
    assert_eq!(w2.spec.family, "b2");
    assert!(w2.membership.is_out());
    let h = g("hub1");
    assert!(matches!(Galaxies::new(&h).non_principal_witness(Rank::Finite(1), 8), Err(Error::Construction(_))));
}

#[test]
fn single_galaxy_propagation() {
    let h = g("hub1");
    let gal = Galaxies::new(&h);
    let probes = specs(&gal, &["h", "e[n]", "r[n,n]"]);
    let rep = gal.single_propagation(&probes, Rank::Finite(0), Rank::Finite(1), W);
    // at rank 0 the hub probes drift apart, so the precondition fails
    assert!(rep.is_err());
    let vac = gal.single_propagation(&probes, Rank::Finite(1), Rank::Finite(2), W).unwrap();
    assert!(vac.vacuous && vac.holds);
    let h2 = g("hub2");
    let gal2 = Galaxies::new(&h2);
    let probes2 = specs(&gal2, &["h", "r[n,0,0]", "r[n,0,1]", "const(r[1,0,0])"]);
    let rep2 = gal2.single_propagation(&probes2, Rank::Finite(1), Rank::Finite(2), W).unwrap();
    assert!(rep2.holds && !rep2.vacuous);
    assert_eq!(rep2.sigma_blocks, Some(1));
}
