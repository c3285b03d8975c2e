use std::collections::HashMap;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{oracle, pick, Check};
use crate::enlargement::{Enlargement, HypernodeSpec};
use crate::error::{Error, Result};
use crate::galaxy::{Closeness, Galaxies};
use crate::ordinal::ExpRank;
use crate::rank::Rank;
use crate::wdistance::{walk_length, Metric};
use crate::wgraph::{catalog, WGraph};
use crate::Ordinal;

fn graph(name: &str) -> Result<WGraph> {
    catalog::by_name(name)
}

/// Collects failures, keeping the first one as the detail.
#[derive(Default)]
struct Tally {
    count: usize,
    failed: usize,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(why());
            }
        }
    }

    fn check(self, name: &str) -> Check {
        let detail = match self.first {
            None => "all hold".to_string(),
            Some(f) => format!("{} failures; first: {f}", self.failed),
        };
        Check::new(name, self.failed == 0, self.count, detail)
    }
}

fn random_ordinal(rng: &mut ChaCha8Rng) -> Ordinal {
    let terms = rng.gen_range(0..4);
    Ordinal::from_terms((0..terms).map(|_| {
        let exp = if rng.gen_ratio(1, 8) { ExpRank::Omega } else { ExpRank::Finite(rng.gen_range(0..4)) };
        (exp, BigUint::from(rng.gen_range(0u32..6)))
    }))
}

pub(super) fn ordinal(rng: &mut ChaCha8Rng, n: usize) -> Vec<Check> {
    let (mut comm, mut assoc, mut order, mut diff) =
        (Tally::default(), Tally::default(), Tally::default(), Tally::default());
    for _ in 0..n {
        let (a, b, c) = (random_ordinal(rng), random_ordinal(rng), random_ordinal(rng));
        comm.record(a.nat_sum(&b) == b.nat_sum(&a), || format!("{a} + {b}"));
        assoc.record(a.nat_sum(&b).nat_sum(&c) == a.nat_sum(&b.nat_sum(&c)), || format!("{a}, {b}, {c}"));
        let trichotomy = [a < b, a == b, a > b].iter().filter(|x| **x).count() == 1;
        let transitive = !(a <= b && b <= c) || a <= c;
        let monotone = a.nat_sum(&c).cmp(&b.nat_sum(&c)) == a.cmp(&b);
        order.record(trichotomy && transitive && monotone, || format!("{a}, {b}, {c}"));
        let s = a.nat_sum(&b);
        let back = s.nat_diff(&b) == Some(a.clone()) && s.nat_diff(&a) == Some(b.clone());
        let partial = match b.nat_diff(&a) {
            Some(d) => a.nat_sum(&d) == b,
            None => a.terms().iter().any(|(e, k)| b.coeff_at(*e) < *k),
        };
        diff.record(back && partial, || format!("{a}, {b}"));
    }
    vec![
        comm.check("natural-sum-commutes"),
        assoc.check("natural-sum-associates"),
        order.check("total-order"),
        diff.check("difference-round-trip"),
    ]
}

pub(super) fn oracle() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, window) in [("ray0", 6), ("ladder1", 6), ("ladder2", 4), ("hub1", 6)] {
        let g = graph(name)?;
        let metric = Metric::new(&g);
        let prepared = metric.prepared(window, None)?;
        let slice = &prepared.slice;
        let (mut dist, mut walks) = (Tally::default(), Tally::default());
        for s in 0..slice.len() {
            let source = slice.node(s);
            let map = metric.single_source(source, window, None)?;
            let reference = oracle::enumerate_distances(slice, s);
            for (t, expected) in reference.iter().enumerate() {
                let target = slice.node(t);
                let got = map.get(target);
                dist.record(got == expected.as_ref(), || {
                    format!("d({source}, {target}) = {got:?}, enumeration gives {expected:?}")
                });
                let promoted = prepared.search.promote(t);
                if let Some(w) = map.walk_to(promoted) {
                    let ok = w.validate(slice).is_ok() && Some(&walk_length(&w)) == got;
                    walks.record(ok, || format!("walk {source} -> {target}"));
                }
            }
        }
        checks.push(dist.check(&format!("{name}-distances")));
        checks.push(walks.check(&format!("{name}-walks")));
    }
    Ok(checks)
}

const METRIC_POOL: &[&str] =
    &["const(b1[0])", "const(r[1,2])", "b1[n]", "b1[n+1]", "b1[2n]", "r[n,0]", "r[n,n]", "r[0,n]", "r[n,1]", "b1[n^2]"];

pub(super) fn metric(rng: &mut ChaCha8Rng, nodes: usize, specs: usize) -> Result<Vec<Check>> {
    let g = graph("ladder1")?;
    let window = 6;
    let metric = Metric::new(&g);
    let slice = &metric.prepared(window, None)?.slice;
    let mut maps = HashMap::new();
    let mut d = |x: usize, y: usize| -> Result<Option<Ordinal>> {
        if let std::collections::hash_map::Entry::Vacant(e) = maps.entry(x) {
            e.insert(metric.single_source(slice.node(x), window, None)?);
        }
        Ok(maps[&x].get(slice.node(y)).cloned())
    };
    let ids: Vec<usize> = (0..slice.len()).collect();
    let (mut ident, mut sym, mut tri) = (Tally::default(), Tally::default(), Tally::default());
    for _ in 0..nodes {
        let (x, y, z) = (*pick(rng, &ids), *pick(rng, &ids), *pick(rng, &ids));
        let (dxy, dyx, dxz, dyz) = (d(x, y)?, d(y, x)?, d(x, z)?, d(y, z)?);
        let same = slice.maximal_of(x) == slice.maximal_of(y);
        ident.record((dxy == Some(Ordinal::zero())) == same, || format!("{} {}", slice.node(x), slice.node(y)));
        sym.record(dxy == dyx, || format!("{} {}", slice.node(x), slice.node(y)));
        let ok = match (dxz, dxy, dyz) {
            (Some(a), Some(b), Some(c)) => a <= b.nat_sum(&c),
            (None, Some(_), Some(_)) => false,
            _ => true,
        };
        tri.record(ok, || format!("{} {} {}", slice.node(x), slice.node(y), slice.node(z)));
    }
    let enl = Enlargement::new(&g);
    let pool: Vec<HypernodeSpec> = METRIC_POOL.iter().map(|t| enl.parse(t)).collect::<Result<_>>()?;
    let mut hyper = Tally::default();
    for _ in 0..specs {
        let (x, y, z) = (pick(rng, &pool), pick(rng, &pool), pick(rng, &pool));
        let r = enl.triangle_hyper(x, y, z, window);
        let ok = matches!(&r, Ok(dec) if dec.is_in());
        hyper.record(ok, || match r {
            Ok(dec) => format!("{x}, {y}, {z}: {dec}"),
            Err(e) => format!("{x}, {y}, {z}: {e}"),
        });
    }
    Ok(vec![ident.check("identity"), sym.check("symmetry"), tri.check("triangle"), hyper.check("hyper-triangle")])
}

pub(super) fn boundary_gap() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, window) in [("ladder1", 6), ("ladder2", 4)] {
        let g = graph(name)?;
        let metric = Metric::new(&g);
        let mut t = Tally::default();
        for rho in (1..).map(Rank::Finite).take_while(|r| *r <= g.nu()) {
            let exp = rho.exp().unwrap();
            let prepared = metric.prepared(window, None)?;
            let slice = &prepared.slice;
            let labels = slice.section_labels(rho.pred().unwrap());
            let boundary = slice.boundary_ids(rho)?;
            let bound = Ordinal::omega_pow(exp);
            for (i, &a) in boundary.iter().enumerate() {
                let here = metric.single_source(slice.node(a), window, None)?;
                let next = metric.single_source(slice.node(a), window + 1, None)?;
                let ia = slice.incident_sections(a, &labels);
                for &b in &boundary[i + 1..] {
                    if !ia.is_disjoint(&slice.incident_sections(b, &labels)) {
                        continue;
                    }
                    let (x, y) = (slice.node(a), slice.node(b));
                    let d = here.get(y);
                    let ok = d.is_some_and(|d| *d >= bound) && next.get(y) == d;
                    t.record(ok, || format!("d({x}, {y}) = {d:?} at rank {rho}"));
                }
            }
        }
        checks.push(t.check(&format!("{name}-non-adjacent")));
    }
    Ok(checks)
}

pub(super) fn unbounded_walk() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, rho, k, window) in [("ladder1", 1, 5, 8), ("ladder2", 1, 3, 5), ("ladder2", 2, 3, 5)] {
        let g = graph(name)?;
        let metric = Metric::new(&g);
        let rho = Rank::Finite(rho);
        let exp = rho.exp().unwrap();
        let label = format!("{name}-rank{rho}");
        let x0 = g.boundary_nodes(rho, window)?.into_iter().next();
        let Some(x0) = x0 else {
            checks.push(Check::new(&label, false, 0, "no boundary wnode"));
            continue;
        };
        let walk = match metric.unbounded_walk(rho, &x0, k, window) {
            Ok(w) => w,
            Err(e) => {
                checks.push(Check::new(&label, false, 0, e.to_string()));
                continue;
            }
        };
        let slice = &metric.prepared(window, None)?.slice;
        let mut t = Tally::default();
        t.record(walk.walk.validate(slice).is_ok(), || "walk does not validate".into());
        t.record(walk.subsequence.len() == k && walk.subsequence.windows(2).all(|w| w[0] < w[1]), || {
            format!("subsequence {:?}", walk.subsequence)
        });
        for (j, &m) in walk.subsequence.iter().enumerate() {
            let bound = Ordinal::omega_pow_scaled(exp, BigUint::from(j as u64 + 1));
            let d = metric.dist_at(&x0, &walk.nodes[m], window, Some(rho))?;
            t.record(d == walk.distances[m] && d >= bound, || format!("d(x0, x_{m}) = {d}"));
        }
        let detail = format!("x0 = {x0}; m = {:?}", walk.subsequence);
        let mut c = t.check(&label);
        if c.passed {
            c.detail = detail;
        }
        checks.push(c);
    }
    Ok(checks)
}

pub(super) fn witness() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, rho, window) in [("ladder1", 1, 10), ("ladder2", 1, 6), ("ladder2", 2, 6)] {
        let g = graph(name)?;
        let label = format!("{name}-rank{rho}");
        let c = match Galaxies::new(&g).non_principal_witness(Rank::Finite(rho), window) {
            Ok(w) => Check::new(&label, w.membership.is_out(), 1, format!("{} {}", w.spec, w.membership)),
            Err(e) => Check::new(&label, false, 1, e.to_string()),
        };
        checks.push(c);
    }
    let h = graph("hub1")?;
    let c = match Galaxies::new(&h).non_principal_witness(Rank::Finite(1), 8) {
        Err(Error::Construction(m)) => Check::new("hub1-refused", true, 1, m),
        Err(e) => Check::new("hub1-refused", false, 1, e.to_string()),
        Ok(w) => Check::new("hub1-refused", false, 1, format!("unexpected witness {}", w.spec)),
    };
    checks.push(c);
    Ok(checks)
}

pub(super) fn embedding() -> Result<Vec<Check>> {
    let g = graph("ladder2")?;
    let gal = Galaxies::new(&g);
    let (section_window, window) = (3, 5);
    let mut checks = Vec::new();
    for alpha in 0..2u32 {
        let lower = g.sections(Rank::Finite(alpha), section_window)?;
        for rho in alpha + 1..=2 {
            let upper = g.sections(Rank::Finite(rho), section_window)?;
            let mut t = Tally::default();
            let mut probes_seen = 0;
            for s in &lower {
                let Some(outer) = upper.iter().find(|u| u.contains(s.representative())) else {
                    t.record(false, || format!("no {rho}-section holds {}", s.representative()));
                    continue;
                };
                let probes = gal.section_probes(s, window, 6)?;
                probes_seen += probes.len();
                t.record(probes.len() >= 5, || format!("only {} probes in {}", probes.len(), s.representative()));
                let rep = gal.section_embedding(s, outer, &probes, window)?;
                for (p, d) in &rep.results {
                    t.record(d.is_in(), || format!("{p} in section of {}: {d}", s.representative()));
                }
            }
            let mut c = t.check(&format!("sections-{alpha}-in-{rho}"));
            c.detail = format!("{} sections, {probes_seen} probes; {}", lower.len(), c.detail);
            checks.push(c);
        }
    }
    Ok(checks)
}

const REFINEMENT_SET: &[&str] = &[
    "const(b2[0])",
    "const(b2[1])",
    "const(b1[0,0])",
    "const(b1[1,2])",
    "const(r[0,0,1])",
    "const(r[2,1,3])",
    "b2[n]",
    "b2[n+1]",
    "b1[0,n]",
    "b1[0,n+1]",
    "b1[n,0]",
    "b1[n,1]",
    "b1[n,n]",
    "b1[1,n]",
    "r[0,0,n]",
    "r[0,0,n+1]",
    "r[0,n,1]",
    "r[n,0,1]",
    "r[n,n,n]",
    "r[1,1,n]",
];

pub(super) fn refinement() -> Result<Vec<Check>> {
    let g = graph("ladder2")?;
    let gal = Galaxies::new(&g);
    let set: Vec<HypernodeSpec> = REFINEMENT_SET.iter().map(|t| gal.parse(t)).collect::<Result<_>>()?;
    let mut checks = Vec::new();
    for rho in 0..=2u32 {
        for alpha in 0..=rho {
            let rep = gal.refinement(&set, Rank::Finite(alpha), Rank::Finite(rho), 6)?;
            let detail = format!(
                "{} blocks refine {} blocks; {} pairs inconclusive",
                rep.alpha.len(),
                rep.rho.len(),
                rep.skipped.len()
            );
            checks.push(Check::new(&format!("rank-{alpha}-refines-{rho}"), rep.holds, set.len(), detail));
        }
    }
    Ok(checks)
}

pub(super) fn ladder(k: usize) -> Result<Vec<Check>> {
    let g = graph("ladder1")?;
    let gal = Galaxies::new(&g);
    let one = Rank::Finite(1);
    let window = 8;
    let x = gal.parse("const(b1[0])")?;
    let v = gal.parse("b1[n]")?;
    let rungs = match gal.ladder(&x, &v, one, k, window) {
        Ok(r) => r,
        Err(e) => return Ok(vec![Check::new("construction", false, 0, e.to_string())]),
    };
    let mut checks = vec![Check::new(
        "construction",
        rungs.len() == 2 * k + 1,
        rungs.len(),
        rungs.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" < "),
    )];
    let rep = gal.partial_order_check(&rungs, one, window)?;
    let mut pairs = Tally::default();
    for i in 0..rungs.len() {
        for j in i + 1..rungs.len() {
            let ok = rep.relation[i][j] == Closeness::Closer && rep.relation[j][i] == Closeness::NotCloser;
            pairs.record(ok, || format!("{} vs {}", rungs[i], rungs[j]));
        }
    }
    checks.push(pairs.check("pairs-ordered"));
    checks.push(Check::new(
        "transitivity",
        rep.triples_skipped == 0,
        rep.triples_checked,
        format!("{} triples skipped", rep.triples_skipped),
    ));
    let mut outside = Tally::default();
    for r in &rungs {
        let d = gal.principal_membership(r, one, window)?;
        outside.record(d.is_out(), || format!("{r}: {d}"));
    }
    checks.push(outside.check("non-principal"));
    Ok(checks)
}

pub(super) fn single_galaxy() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let cases: [(&str, &[&str]); 2] = [
        ("hub1", &["h", "e[n]", "r[n,n]", "r[2n,1]", "const(e[2])", "r[n,0]"]),
        ("hub2", &["h", "r[n,0,0]", "r[n,0,1]", "const(r[1,0,0])", "r[n,0,n]"]),
    ];
    for (name, texts) in cases {
        let g = graph(name)?;
        let gal = Galaxies::new(&g);
        let probes: Vec<HypernodeSpec> = texts.iter().map(|t| gal.parse(t)).collect::<Result<_>>()?;
        let one = Rank::Finite(1);
        let mut principal = Tally::default();
        for p in &probes {
            let d = gal.principal_membership(p, one, 8)?;
            principal.record(d.is_in(), || format!("{p}: {d}"));
        }
        checks.push(principal.check(&format!("{name}-principal")));
        let mut blocks = Tally::default();
        for rho in (1..).map(Rank::Finite).take_while(|r| *r <= g.nu()) {
            let part = gal.classify(&probes, rho, 8)?;
            let ok = part.len() == 1 && part.inconclusive.is_empty();
            blocks.record(ok, || format!("{} blocks at rank {rho}", part.len()));
        }
        checks.push(blocks.check(&format!("{name}-one-block")));
        let c = match gal.single_propagation(&probes, one, Rank::Finite(2), 8) {
            Ok(rep) => Check::new(
                &format!("{name}-propagates"),
                rep.holds,
                probes.len(),
                if rep.vacuous {
                    "vacuous: rank 2 exceeds the graph rank".to_string()
                } else {
                    format!("{} block(s) at rank 2", rep.sigma_blocks.unwrap_or(0))
                },
            ),
            Err(e) => Check::new(&format!("{name}-propagates"), false, probes.len(), e.to_string()),
        };
        checks.push(c);
    }
    Ok(checks)
}
