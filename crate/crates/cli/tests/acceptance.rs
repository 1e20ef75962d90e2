//! Acceptance run: one line per criterion, with its runtime limit.
//!
//! Runs without the libtest harness so the table is always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclounits::arithscan::{
    count_lemma_scan, is_inert, module_irreducibility, safe_prime_scan,
};
use cyclounits::curves::{
    build_dn, isogeny_obstruction, legendre_noniso, noniso_certificate, HRoot, NonisoCase,
    RESULTANT_CHECK_MAX_DIM,
};
use cyclounits::cycfield::{valuation_formula, FieldElem};
use cyclounits::cycpoly::{known_identities, verify_ternary};
use cyclounits::numth::is_prime;
use cyclounits::sunit::{
    check_valij, gen_identity_family, gen_q5, gen_q7, gen_unit_equation, identity_min_level,
    identity_route, verify_solution,
};
use cyclounits::unitlattice::{basis_indices, in_zetaVprev, normalize, FormalProduct, UnitWord};
use cyclounits::Error;
use cyclounits_cli::tasks::Task;

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_identities() -> Result<(), String> {
    let ids = known_identities();
    ensure(ids.len() == 9, format!("{} identities", ids.len()))?;
    for (f, g, h, k) in ids {
        let r = verify_ternary(&f, &g, &h, k);
        ensure(r.equality, format!("{f} - {g} != {k} {h}"))?;
        ensure(r.coprime, format!("gcd(F, G, H) != 1 for k = {k}"))?;
    }
    Ok(())
}

fn c2_search() -> Result<(), String> {
    let run = |workers| {
        Task::Search {
            max_degree: 12,
            k_max: 24,
            workers,
            max_factors: u32::MAX,
        }
        .run()
        .map_err(|e| e.to_string())
    };
    let one = run(1)?;
    ensure(one.verdict, format!("search verdict failed: {}", one.results))?;
    let hits = one.results["base_relations"].as_array().cloned().unwrap_or_default();
    ensure(hits.len() == 9, format!("{} base relations in range", hits.len()))?;
    let four = run(4)?;
    ensure(one.results == four.results, "results depend on worker count")
}

fn c3_valuations() -> Result<(), String> {
    for (ell, n) in [(2u64, 3u32), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
        let big_m = ell.pow(n) as i64;
        for s in 1..big_m {
            let direct = FieldElem::one_minus_zeta_pow(ell, n, s)
                .and_then(|x| x.valuation())
                .map_err(|e| e.to_string())?;
            let formula = valuation_formula(ell, n, s).map_err(|e| e.to_string())?;
            ensure(
                direct == formula,
                format!("ell^n = {big_m}, s = {s}: {direct} vs {formula}"),
            )?;
        }
    }
    Ok(())
}

/// Membership in a Z-lattice by Hermite reduction of the generators.
fn in_lattice(gens: &[Vec<i64>], target: &[i64]) -> bool {
    let d = target.len();
    let mut rows: Vec<Vec<i64>> = gens.to_vec();
    let mut echelon: Vec<(usize, Vec<i64>)> = Vec::new();
    for col in 0..d {
        let mut pivot: Option<Vec<i64>> = None;
        let mut rest = Vec::new();
        for mut r in rows.drain(..) {
            if r[col] == 0 {
                rest.push(r);
                continue;
            }
            match pivot.as_mut() {
                None => pivot = Some(r),
                Some(p) => {
                    // Euclid on the column entries, keeping both rows integral
                    while r[col] != 0 {
                        let q = p[col] / r[col];
                        for i in 0..d {
                            p[i] -= q * r[i];
                        }
                        std::mem::swap(p, &mut r);
                    }
                    rest.push(r);
                }
            }
        }
        rows = rest;
        if let Some(p) = pivot {
            echelon.push((col, p));
        }
    }
    let mut t = target.to_vec();
    for (col, p) in &echelon {
        if t[*col] % p[*col] != 0 {
            return false;
        }
        let q = t[*col] / p[*col];
        for i in 0..d {
            t[i] -= q * p[i];
        }
    }
    t.iter().all(|&x| x == 0)
}

fn c4_lattice_oracle() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (ell, n) in [(3u64, 2u32), (5, 2)] {
        let basis = basis_indices(ell, n).map_err(|e| e.to_string())?;
        let as_vec = |w: &UnitWord| basis.iter().map(|&k| w.exponent(k)).collect::<Vec<i64>>();
        let lower = ell.pow(n - 1) as i64;
        let gens: Vec<Vec<i64>> = (1..lower)
            .map(|a| {
                normalize(&FormalProduct::new(ell, n, vec![(ell as i64 * a, 1)]))
                    .map(|w| as_vec(&w))
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?;
        let mut members = 0;
        for trial in 0..200 {
            let exps: Vec<i64> = if trial % 2 == 0 {
                let mut v = vec![0i64; basis.len()];
                for g in &gens {
                    let c = rng.gen_range(-3..=3);
                    for (x, y) in v.iter_mut().zip(g) {
                        *x += c * y;
                    }
                }
                v
            } else {
                (0..basis.len()).map(|_| rng.gen_range(-3..=3)).collect()
            };
            let mut word = UnitWord::from_exps(ell, n, basis.iter().copied().zip(exps.iter().copied()))
                .map_err(|e| e.to_string())?;
            word.zeta_exp = rng.gen_range(0..ell.pow(n));
            let fast = in_zetaVprev(&word).map_err(|e| e.to_string())?.verdict;
            let slow = in_lattice(&gens, &exps);
            members += slow as usize;
            ensure(fast == slow, format!("({ell},{n}) word {exps:?}: scan {fast}, lattice {slow}"))?;
        }
        ensure((100..200).contains(&members), format!("{members} of 200 sampled words are members"))?;
    }
    Ok(())
}

fn c5_families() -> Result<(), String> {
    let check = |s: cyclounits::Result<cyclounits::sunit::SUnitSolution>, label: String| {
        let s = s.map_err(|e| format!("{label}: {e}"))?;
        let c = verify_solution(&s).map_err(|e| format!("{label}: {e}"))?;
        ensure(c.passed(), format!("{label}: {c:?}"))
    };
    for ell in [2u64, 3] {
        for k in [1u64, 2, 3, 4, 5, 6, 7, 8, 10, 12, 24] {
            let (base, _) = identity_route(ell, k).map_err(|e| e.to_string())?;
            let n0 = identity_min_level(ell, base).map_err(|e| e.to_string())?;
            for n in [n0, n0 + 1] {
                check(gen_identity_family(ell, k, n), format!("ell={ell} k={k} n={n}"))?;
            }
        }
    }
    for k in [1u64, 2, 4] {
        for n in [2u32, 3] {
            check(gen_q5(k, n), format!("q5 k={k} n={n}"))?;
        }
    }
    check(gen_q7(2), "q7 n=2".into())
}

fn c6_valij() -> Result<(), String> {
    for ell in [3u64, 5, 7] {
        let m = (ell * ell) as i64;
        let mut count = 0;
        'pairs: for i in 1..m {
            for j in 1..m {
                if i == j || (i + j) % m == 0 || i % m == 0 || j % m == 0 {
                    continue;
                }
                let s = gen_unit_equation(ell, i, j, 2).map_err(|e| e.to_string())?;
                let c = check_valij(&s).map_err(|e| e.to_string())?;
                ensure(c.ok, format!("ell={ell} ({i},{j}): {} vs {}", c.formula, c.direct))?;
                count += 1;
                if count == 20 {
                    break 'pairs;
                }
            }
        }
        ensure(count == 20, format!("ell={ell}: {count} pairs"))?;
    }
    Ok(())
}

fn c7_legendre() -> Result<(), String> {
    let s2 = gen_q5(1, 2).map_err(|e| e.to_string())?;
    let s3 = gen_q5(1, 3).map_err(|e| e.to_string())?;
    let c = legendre_noniso(&s3, &s2).map_err(|e| e.to_string())?;
    ensure(c.passed, format!("{c:?}"))
}

fn c8_hyperelliptic() -> Result<(), String> {
    for (ell, g, n, h) in [
        (11u64, 2u64, 2u32, vec![]),
        (13, 2, 2, vec![]),
        (3, 2, 3, vec![]),
        (7, 3, 2, vec![HRoot::Zero]),
    ] {
        let m = build_dn(ell, g, n, &h).map_err(|e| e.to_string())?;
        let label = format!("({ell},{g},{n})");
        ensure(m.degree() as u64 == m.k * (ell - 1) / 2 + h.len() as u64, format!("{label} degree"))?;
        ensure(m.separable && m.rational, format!("{label} separable/rational"))?;
        ensure(m.disc_complete(), format!("{label} discriminant certificate incomplete"))?;
        if m.roots[0].dim() <= RESULTANT_CHECK_MAX_DIM {
            let r = m.resultant_check.as_ref().ok_or(format!("{label} missing resultant check"))?;
            ensure(
                r.discriminant_equal && r.valuation == m.disc_valuation,
                format!("{label} resultant {r:?} vs {}", m.disc_valuation),
            )?;
        }
        ensure(m.passed(), format!("{label} failed"))?;
    }
    Ok(())
}

fn c9_noniso() -> Result<(), String> {
    for (ell, g, n, case) in [
        (5u64, 2u64, 2u32, NonisoCase::KAtLeastTwo),
        (11, 2, 2, NonisoCase::KOne),
        (3, 2, 3, NonisoCase::EllThree),
    ] {
        let c = noniso_certificate(ell, g, n).map_err(|e| e.to_string())?;
        ensure(c.case == case, format!("({ell},{g},{n}) case {:?}", c.case))?;
        ensure(c.passed, format!("({ell},{g},{n}): {:?}", c.membership))?;
    }
    Ok(())
}

fn c10_isogeny() -> Result<(), String> {
    for ell in [11u64, 23] {
        let c = isogeny_obstruction(ell, 3, 2).map_err(|e| e.to_string())?;
        ensure(!c.membership.verdict && c.passed, format!("ell={ell}: {:?}", c.membership))?;
    }
    Ok(())
}

fn c11_scans() -> Result<(), String> {
    ensure(
        safe_prime_scan(509) == vec![11, 23, 59, 107, 167, 263, 347, 359],
        "safe prime list",
    )?;
    let rows = count_lemma_scan(11, 317).map_err(|e| e.to_string())?;
    let primes = (11..=317).filter(|&p| is_prime(p)).count();
    ensure(rows.len() == primes, "count lemma coverage")?;
    for r in &rows {
        ensure(r.passes(), format!("count lemma at {}: {r:?}", r.ell))?;
    }
    for p in (3..=13).filter(|&p| is_prime(p)) {
        let m = module_irreducibility(p).map_err(|e| e.to_string())?;
        ensure(m.oracle.is_some() && m.agrees(), format!("module at p = {p}"))?;
    }
    for ell in [3, 5, 7, 11] {
        ensure(is_inert(2, ell) == Ok(true), format!("2 not inert for ell = {ell}"))?;
    }
    Ok(())
}

fn c12_negative_control() -> Result<(), String> {
    ensure(
        gen_unit_equation(2, 2, 1, 3) == Err(Error::TwoAdicObstruction),
        "ell = 2 was not refused",
    )?;
    let msg = Error::TwoAdicObstruction.to_string();
    ensure(msg.contains("F_2"), format!("message lacks the residue field: {msg}"))?;
    let code = cyclounits_cli::run(["cyclounits", "unit-eq", "--ell", "2", "--i", "2", "--j", "1", "--level", "3"]);
    ensure(code == cyclounits_cli::EXIT_USAGE, format!("exit code {code}"))
}

fn main() {
    let criteria: [(u32, &str, Check, u64); 12] = [
        (1, "identity suite", c1_identities, 1),
        (2, "search reproduction (degree 12, k 24)", c2_search, 300),
        (3, "valuation cross-check", c3_valuations, 30),
        (4, "unit-lattice oracle equivalence", c4_lattice_oracle, 120),
        (5, "S-unit families", c5_families, 300),
        (6, "valuation of eps - delta", c6_valij, 60),
        (7, "Legendre non-isomorphism", c7_legendre, 60),
        (8, "hyperelliptic models", c8_hyperelliptic, 300),
        (9, "cross-ratio non-isomorphism", c9_noniso, 120),
        (10, "isogeny parity obstruction", c10_isogeny, 120),
        (11, "scans", c11_scans, 60),
        (12, "negative control ell = 2", c12_negative_control, 10),
    ];
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let el = t.elapsed();
        let res = res.and_then(|()| {
            ensure(
                el <= Duration::from_secs(limit),
                format!("took {el:?}, limit {limit} s"),
            )
        });
        match &res {
            Ok(()) => println!("criterion {id:>2} PASS  {name}  [{:.2?} / {limit} s]", el),
            Err(e) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}  [{:.2?} / {limit} s]: {e}", el);
            }
        }
    }
    println!("acceptance: {} of 12 criteria pass", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
