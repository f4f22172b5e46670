//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.
//!
//! Randomized criteria draw from ChaCha8 seeded by `ZS_SEED` (default 20240601).

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zskit::central::CentralSurrogate;
use zskit::config::{build_configuration, verify_certificate, BuildOptions, ConfigCertificate};
use zskit::sets::{parse_set, pws_witness, syndetic_check, thick_witness};
use zskit::zerosum::{
    davenport_constant, egz_solve, find_zero_sum_subset_bruteforce, find_zero_sum_subset_dp,
    partition_zero_sum, verify_witness, Threshold,
};
use zskit::{Budget, Coloring, Error, InputSequence, Modulus};

type Outcome = Result<String, String>;
type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn seed() -> u64 {
    std::env::var("ZS_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20240601)
}

fn modulus(n: u64) -> Modulus {
    Modulus::new(n).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:?}, limit {limit:?}"))
}

/// Every multiset of `size` residues over `[0, n)`, as nondecreasing vectors.
fn residue_multisets(n: u64, size: usize) -> Vec<Vec<u64>> {
    fn rec(n: u64, size: usize, start: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for a in start..n {
            cur.push(a);
            rec(n, size, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, size, 0, &mut Vec::new(), &mut out);
    out
}

fn ac1_egz_exhaustive() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=6u64 {
        let size = (2 * n - 1) as usize;
        for values in residue_multisets(n, size) {
            let w = egz_solve(&values, modulus(n), Budget::DEFAULT)
                .map_err(|e| format!("n={n} {values:?}: {e}"))?;
            verify_witness(&values, &w, modulus(n))
                .map_err(|v| format!("n={n} {values:?}: {v}"))?;
            checked += 1;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{checked} multisets, {:?}", start.elapsed()))
}

fn ac2_oracle_equivalence() -> Outcome {
    let compare = |values: &[u64], n: u64| -> Result<(), String> {
        let brute = find_zero_sum_subset_bruteforce(values, modulus(n), Budget::DEFAULT)
            .map_err(|e| e.to_string())?;
        let dp = find_zero_sum_subset_dp(values, modulus(n), Budget::DEFAULT)
            .map_err(|e| e.to_string())?;
        ensure(brute == dp, || format!("n={n} {values:?}: brute {brute:?} dp {dp:?}"))
    };
    let mut exhaustive = 0;
    for n in 1..=6u64 {
        for values in residue_multisets(n, (2 * n - 1) as usize) {
            compare(&values, n)?;
            exhaustive += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let mut absent = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=8u64);
        let len = rng.gen_range(0..=(2 * n + 3) as usize);
        let spread = if rng.gen_bool(0.5) { n } else { 1000 };
        let values: Vec<u64> = (0..len).map(|_| rng.gen_range(0..spread)).collect();
        compare(&values, n)?;
        if find_zero_sum_subset_dp(&values, modulus(n), Budget::DEFAULT)
            .unwrap()
            .is_none()
        {
            absent += 1;
        }
    }
    Ok(format!(
        "{exhaustive} exhaustive + 10000 random ({absent} absent), 0 mismatches"
    ))
}

fn ac3_tightness() -> Outcome {
    for n in 2..=12u64 {
        let mut values = vec![0u64; (n - 1) as usize];
        values.extend(std::iter::repeat_n(1, (n - 1) as usize));
        let got = find_zero_sum_subset_dp(&values, modulus(n), Budget::DEFAULT)
            .map_err(|e| e.to_string())?;
        ensure(got.is_none(), || format!("n={n}: found {got:?}"))?;
        if n <= 8 {
            let brute = find_zero_sum_subset_bruteforce(&values, modulus(n), Budget::DEFAULT)
                .map_err(|e| e.to_string())?;
            ensure(brute.is_none(), || format!("n={n}: brute force found {brute:?}"))?;
        }
    }
    Ok("n = 2..=12 absent".into())
}

fn ac4_partition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 4);
    let mut runs = 0;
    for n in 1..=4u64 {
        for r in 1..=4usize {
            for threshold in [Threshold::Linear, Threshold::Quadratic] {
                let size = threshold.required(modulus(n), r).unwrap();
                for _ in 0..1000 {
                    let values: Vec<u64> = (0..size).map(|_| rng.gen_range(0..10_000)).collect();
                    let colors = (0..size).map(|_| rng.gen_range(1..=r)).collect();
                    let coloring = Coloring::new(colors, r).unwrap();
                    let got =
                        partition_zero_sum(&values, &coloring, modulus(n), threshold, Budget::DEFAULT)
                            .map_err(|e| format!("n={n} r={r} {threshold:?}: {e}"))?;
                    verify_witness(&values, &got.witness, modulus(n))
                        .map_err(|v| format!("n={n} r={r}: {v}"))?;
                    ensure(
                        got.witness.indices.iter().all(|&p| coloring.color(p) == got.color),
                        || format!("n={n} r={r}: witness leaves color {}", got.color),
                    )?;
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} colored instances"))
}

fn ac5_davenport() -> Outcome {
    let start = Instant::now();
    for n in 1..=8u64 {
        let d = davenport_constant(modulus(n), Budget::DEFAULT).map_err(|e| e.to_string())?;
        ensure(d == n, || format!("D(Z_{n}) = {d}"))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("D(Z_n) = n for n = 1..=8, {:?}", start.elapsed()))
}

fn ac6_set_examples() -> Outcome {
    let ints = |v: std::ops::RangeInclusive<u64>| v.collect::<BTreeSet<u64>>();
    let g12 = BTreeSet::from([1, 2]);
    let evens = parse_set("2N+0").unwrap();
    let odds = parse_set("2N+1").unwrap();
    let blocks = parse_set("I2").unwrap();
    let both = parse_set("2N+0 & I2").unwrap();

    ensure(syndetic_check(&evens, &g12, 10_000).unwrap().is_covered(), || "2N not covered".into())?;
    ensure(syndetic_check(&odds, &g12, 10_000).unwrap().is_covered(), || "2N+1 not covered".into())?;
    let mut xs = Vec::new();
    for s in 1..=10 {
        let w = thick_witness(&blocks, &ints(1..=s), 1_000_000)
            .unwrap()
            .ok_or_else(|| format!("no thick witness for F = 1..={s}"))?;
        ensure(w.recheck(&blocks), || format!("thick witness for s={s} fails recheck"))?;
        xs.push(w.translation.unwrap());
    }
    let w = pws_witness(&both, &g12, &ints(1..=5), 1_000_000)
        .unwrap()
        .ok_or("no pws witness")?;
    ensure(w.recheck(&both), || "pws witness fails recheck".into())?;
    Ok(format!(
        "syndetic 2N, 2N+1; thick x for s=1..10: {xs:?}; pws x = {}",
        w.translation.unwrap()
    ))
}

/// `x_{i,j} = j i + (j - 1)`, `i = 1..=len`.
fn arithmetic_family(m: usize, len: usize) -> Vec<InputSequence> {
    (1..=m)
        .map(|j| {
            let j64 = j as u64;
            InputSequence::new(j, (1..=len as u64).map(|i| j64 * i + (j64 - 1)).collect())
        })
        .collect()
}

struct Built {
    label: String,
    sequences: Vec<InputSequence>,
    cert: ConfigCertificate,
    surrogate: CentralSurrogate,
}

fn build_grid() -> Result<Vec<Built>, String> {
    let mut out = Vec::new();
    for m in 1..=3usize {
        for n in 2..=4u64 {
            for d in 1..=4u64 {
                let label = format!("m={m} n={n} d={d}");
                let surrogate = CentralSurrogate::modulus(d).unwrap();
                let len = 5 * (2 * n as usize - 1) * d as usize;
                let sequences = arithmetic_family(m, len);
                let start = Instant::now();
                let cert = build_configuration(&sequences, modulus(n), &surrogate, 5, BuildOptions::default())
                    .map_err(|e| format!("{label}: build failed: {e}"))?;
                let report = verify_certificate(&sequences, &cert, |x| surrogate.base_contains(x), Budget::DEFAULT)
                    .map_err(|e| format!("{label}: verify failed: {e}"))?;
                let expected = (m as u64 + 1).pow(5) - 1;
                ensure(report.chains_visited == expected, || {
                    format!("{label}: visited {} chains, expected {expected}", report.chains_visited)
                })?;
                ensure(report.is_valid(), || format!("{label}: {:?}", report.violated_clauses()))?;
                within(start, Duration::from_secs(10)).map_err(|e| format!("{label}: {e}"))?;
                out.push(Built { label, sequences, cert, surrogate });
            }
        }
    }
    Ok(out)
}

fn ac7_theorem_desk_scale(grid: &Result<Vec<Built>, String>) -> Outcome {
    let grid = grid.as_ref().map_err(Clone::clone)?;
    Ok(format!("{} configurations, L=5, all chains inside dN", grid.len()))
}

fn ac8_mutation_sensitivity(grid: &Result<Vec<Built>, String>) -> Outcome {
    let grid = grid.as_ref().map_err(Clone::clone)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 8);
    let (mut altering, mut rejected, mut inert) = (0, 0, 0);
    for trial in 0..600 {
        let built = &grid[rng.gen_range(0..grid.len())];
        let mut cert = built.cert.clone();
        let k = rng.gen_range(0..cert.blocks.len());
        let pos = rng.gen_range(0..cert.n.size());
        let field = rng.gen_range(0..3);
        let block = cert.blocks[k].clone();
        let terms = &built.sequences[block.seq - 1].terms;
        let (alters, clause) = match field {
            0 => {
                // n >= 2 in the grid, so +1 always breaks the block congruence.
                cert.blocks[k].values[pos] += 1;
                (true, "zero-sum mod n")
            }
            1 => {
                let new = block.indices[pos] + 1;
                cert.blocks[k].indices[pos] = new;
                let reused = built.cert.blocks.iter().any(|b| {
                    b.seq == block.seq && b.indices.contains(&new)
                });
                let changes = new >= terms.len() || terms[new] != block.values[pos] || reused;
                (changes, if reused { "disjointness" } else { "terms" })
            }
            _ => {
                cert.blocks[k].z += 1;
                let leaves = block.values.iter().any(|v| !built.surrogate.base_contains(v + block.z + 1));
                (leaves, "chain-sum membership")
            }
        };
        let report = verify_certificate(
            &built.sequences,
            &cert,
            |x| built.surrogate.base_contains(x),
            Budget::DEFAULT,
        )
        .map_err(|e| format!("trial {trial} ({}): {e}", built.label))?;
        if alters {
            altering += 1;
            ensure(!report.is_valid(), || {
                format!("trial {trial} ({}): field {field} mutation accepted", built.label)
            })?;
            let clauses = report.violated_clauses();
            ensure(clauses.contains(clause), || {
                format!("trial {trial} ({}): expected clause {clause}, got {clauses:?}", built.label)
            })?;
            rejected += 1;
        } else {
            inert += 1;
            ensure(report.is_valid(), || {
                format!("trial {trial} ({}): inert mutation rejected", built.label)
            })?;
        }
    }
    ensure(altering + inert >= 500, || "fewer than 500 mutations".into())?;
    Ok(format!("{altering} altering mutations, {rejected} rejected with named clause; {inert} inert"))
}

fn ac9_truncation(grid: &Result<Vec<Built>, String>) -> Outcome {
    let grid = grid.as_ref().map_err(Clone::clone)?;
    for built in grid {
        let cut = built.cert.truncated(built.cert.levels - 1);
        let report = verify_certificate(&built.sequences, &cut, |x| built.surrogate.base_contains(x), Budget::DEFAULT)
            .map_err(|e| format!("{}: {e}", built.label))?;
        ensure(report.is_valid(), || format!("{}: truncated certificate fails", built.label))?;
        ensure(report.chains_visited == (built.cert.m as u64 + 1).pow(4) - 1, || {
            format!("{}: wrong chain count after truncation", built.label)
        })?;
    }
    Ok(format!("{} truncated certificates verify", grid.len()))
}

fn ac10_ip_smoke() -> Outcome {
    let generators: Vec<u64> = (0..=20).map(|k| 1u64 << k).collect();
    let surrogate = CentralSurrogate::ip(generators, zskit::central::DEFAULT_IP_SPAN).unwrap();
    let len = 3 * 3 * surrogate.translation_count();
    let sequences = arithmetic_family(1, len);
    match build_configuration(&sequences, modulus(2), &surrogate, 3, BuildOptions::default()) {
        Ok(cert) => {
            let report = verify_certificate(&sequences, &cert, |x| surrogate.base_contains(x), Budget::DEFAULT)
                .map_err(|e| e.to_string())?;
            ensure(report.is_valid(), || format!("invalid IP certificate: {report:?}"))?;
            let zs: Vec<u64> = cert.blocks.iter().map(|b| b.z).collect();
            Ok(format!("built and verified, z = {zs:?}, {} chains", report.chains_visited))
        }
        Err(Error::TranslationNotFound { bound }) => {
            Ok(format!("translation not found within bound {bound} (allowed outcome)"))
        }
        Err(e) => Err(format!("unexpected failure: {e}")),
    }
}

fn main() {
    let grid_start = Instant::now();
    let grid = build_grid();
    let grid_time = grid_start.elapsed();

    let criteria: Vec<(&str, Criterion)> = vec![
        ("AC1 EGZ exhaustive guarantee", Box::new(ac1_egz_exhaustive)),
        ("AC2 DP / brute-force oracle equivalence", Box::new(ac2_oracle_equivalence)),
        ("AC3 tightness of 2n-1", Box::new(ac3_tightness)),
        ("AC4 partition corollary", Box::new(ac4_partition)),
        ("AC5 Davenport constant", Box::new(ac5_davenport)),
        ("AC6 set-structure examples", Box::new(ac6_set_examples)),
        ("AC7 configuration at desk scale", Box::new(|| {
            ac7_theorem_desk_scale(&grid).map(|s| format!("{s}, {grid_time:?}"))
        })),
        ("AC8 mutation sensitivity", Box::new(|| ac8_mutation_sensitivity(&grid))),
        ("AC9 truncation closure", Box::new(|| ac9_truncation(&grid))),
        ("AC10 IP surrogate smoke test", Box::new(ac10_ip_smoke)),
    ];

    let mut failed = 0;
    for (name, run) in &criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
