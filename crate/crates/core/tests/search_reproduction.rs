use std::time::Instant;

use cyclounits::cycpoly::known_identities;
use cyclounits::relsearch::{contains, enumerate_supercyc, search, search_with_checkpoint, SearchConfig};

/// Number of super-cyclotomic polynomials of degree <= d, counted with a
/// generating function over cyclotomic degrees instead of explicit enumeration.
fn count_by_generating_function(d: usize) -> u64 {
    let mut ways = vec![0u64; d + 1];
    ways[0] = 1;
    let mut parts: Vec<usize> = vec![1]; // the X factor
    for m in 1..=(2 * d * d + 2) as u64 {
        let phi = cyclounits::numth::totient(m) as usize;
        if phi <= d {
            parts.push(phi);
        }
    }
    for p in parts {
        for s in p..=d {
            ways[s] += ways[s - p];
        }
    }
    ways.iter().sum()
}

#[test]
fn enumeration_counts_match_generating_function() {
    for d in [1usize, 2, 5, 8] {
        assert_eq!(enumerate_supercyc(d as u64).len() as u64, count_by_generating_function(d));
    }
    assert_eq!(count_by_generating_function(8), 1093);
}

#[test]
fn degree_eight_finds_all_nine_identities() {
    let t = Instant::now();
    let out = search(&SearchConfig {
        max_degree: 8,
        k_max: 10,
        worker_count: 2,
        ..SearchConfig::default()
    })
    .unwrap();
    eprintln!("degree 8 search: {} relations in {:?}", out.relations.len(), t.elapsed());
    assert!(out.all_verified);
    for (f, g, h, k) in known_identities() {
        assert!(contains(&out, &f, &g, &h, k as u64), "{f} - {g} = {k} {h}");
    }
}

#[test]
fn spot_configurations() {
    let out = search(&SearchConfig { max_degree: 6, k_max: 7, ..SearchConfig::default() }).unwrap();
    let id7 = &known_identities()[6];
    assert!(contains(&out, &id7.0, &id7.1, &id7.2, 7));
}

#[test]
fn checkpoint_resume_is_idempotent() {
    let dir = std::env::temp_dir().join(format!("cyclounits-ckpt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("search.jsonl");
    let _ = std::fs::remove_file(&path);
    let cfg = SearchConfig { max_degree: 6, k_max: 8, ..SearchConfig::default() };
    let first = search_with_checkpoint(&cfg, Some(&path)).unwrap();
    let resumed = search_with_checkpoint(&cfg, Some(&path)).unwrap();
    assert_eq!(first.relations, resumed.relations);
    let other = SearchConfig { k_max: 9, ..cfg };
    assert!(search_with_checkpoint(&other, Some(&path)).is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}
