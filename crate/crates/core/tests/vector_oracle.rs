//! All-pairs distances by Floyd–Warshall over plain coefficient vectors,
//! compared against the library's ordinal Dijkstra.

#![allow(clippy::needless_range_loop)]

use std::cmp::Ordering;

use num_bigint::BigUint;
use wgalaxy::ordinal::ExpRank;
use wgalaxy::wdistance::Metric;
use wgalaxy::wgraph::{catalog, Slice};
use wgalaxy::{Ordinal, Rank};

/// Slots `0..=FINITE` hold the coefficients of `w^0..w^FINITE`; the last
/// slot holds the coefficient of `w^w`.
const FINITE: usize = 6;
const SLOTS: usize = FINITE + 2;

type Vector = [u64; SLOTS];

fn cmp(a: &Vector, b: &Vector) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

fn add(a: &Vector, b: &Vector) -> Vector {
    std::array::from_fn(|i| a[i] + b[i])
}

fn unit(slot: usize) -> Vector {
    let mut v = [0; SLOTS];
    v[slot] = 1;
    v
}

fn to_ordinal(v: &Vector) -> Ordinal {
    Ordinal::from_terms(v.iter().enumerate().filter(|(_, c)| **c > 0).map(|(i, c)| {
        let e = if i == SLOTS - 1 { ExpRank::Omega } else { ExpRank::Finite(i as u64) };
        (e, BigUint::from(*c))
    }))
}

fn all_pairs(slice: &Slice) -> Vec<Vec<Option<Vector>>> {
    let n = slice.len();
    let mut d: Vec<Vec<Option<Vector>>> = vec![vec![None; n]; n];
    let relax = |d: &mut Vec<Vec<Option<Vector>>>, a: usize, b: usize, w: Vector| {
        for (x, y) in [(a, b), (b, a)] {
            if d[x][y].is_none_or(|cur| cmp(&w, &cur).is_lt()) {
                d[x][y] = Some(w);
            }
        }
    };
    for i in 0..n {
        d[i][i] = Some([0; SLOTS]);
    }
    for &[a, b] in slice.branches() {
        relax(&mut d, a, b, unit(0));
    }
    for t in slice.tips() {
        let Some(e) = t.embracer else { continue };
        let slot = match t.rank {
            Rank::Finite(k) => k as usize + 1,
            _ => SLOTS - 1,
        };
        assert!(slot < SLOTS, "tip rank beyond the vector width");
        relax(&mut d, e, t.anchor, unit(slot));
    }
    for x in 0..n {
        if let Some(e) = slice.embracer_of(x) {
            relax(&mut d, e, x, [0; SLOTS]);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                let Some(kj) = d[k][j] else { continue };
                let via = add(&ik, &kj);
                if d[i][j].is_none_or(|cur| cmp(&via, &cur).is_lt()) {
                    d[i][j] = Some(via);
                }
            }
        }
    }
    d
}

fn compare(name: &str, window: u64) {
    let g = catalog::by_name(name).unwrap();
    let metric = Metric::new(&g);
    let slice = metric.prepared(window, None).unwrap().slice.clone();
    let reference = all_pairs(&slice);
    for (i, x) in slice.nodes().iter().enumerate() {
        let map = metric.single_source(x, window, None).unwrap();
        for (j, y) in slice.nodes().iter().enumerate() {
            let expected = reference[i][j].as_ref().map(to_ordinal);
            assert_eq!(map.get(y), expected.as_ref(), "{name}: d({x}, {y})");
        }
    }
}

#[test]
fn ray() {
    compare("ray0", 8);
}

#[test]
fn ladder_depth_one() {
    compare("ladder1", 6);
}

#[test]
fn ladder_depth_two() {
    compare("ladder2", 4);
}

#[test]
fn ladder_depth_three() {
    compare("ladder3", 2);
}

#[test]
fn hubs() {
    compare("hub1", 6);
    compare("hub2", 3);
}
