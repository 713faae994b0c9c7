//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{deficiency_matching_size, from_masks, induced_hall_union, is_hall, left_regular, mask_of};
use hallkit::edge_color::{edge_color_3half_eps_with_stats, fallback_count, split_discrepancy};
use hallkit::fixtures::{
    gen_fig1, gen_lowerbound, gen_random_hypergraph, gen_random_hypergraph_with, gen_simple, HyperGenConfig,
    SimpleKind, Topology,
};
use hallkit::randomized::{ceil_log2, solve_randomized_with};
use hallkit::{
    edge_color_3half, euler_split, find_violator, hall_check_bruteforce, hall_graphs, locality_certify, max_matching,
    peel_to_hall, radius_bound, saturating_matching, solve_hso, solve_hso_local, solve_randomized, verify_coloring,
    verify_hall_graph, verify_hso, verify_matching, verify_weak_split, weak_splitting, Error, LocalAlgorithm,
    RandomizedConfig, Side,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HSO_BUDGET: Duration = Duration::from_secs(60);
const COLOR_BUDGET: Duration = Duration::from_secs(120);
const LOCALITY_SAMPLES: usize = 100;
const EPS: f64 = 0.25;
const EPS_DELTA: usize = 64;
const EPS_PALETTE: u32 = 112;
const MAX_SPLIT_DISCREPANCY: usize = 2;
const MAX_SHATTER_COMPONENT: usize = 10_000;
const BRUTE_INSTANCES: usize = 1000;
const THREAD_COUNTS: [usize; 3] = [1, 2, 4];

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `(n, δ, r, seed)` for the orientation corpus: 200 instances.
fn hso_corpus() -> Vec<(usize, usize, usize, u64)> {
    let mut out = Vec::new();
    for (n, per) in [(100, 20), (1000, 25), (10_000, 5)] {
        for (d, r) in [(3, 2), (4, 2), (6, 3), (8, 3)] {
            for s in 0..per {
                out.push((n, d, r, (n * 1000 + d * 10 + r) as u64 + s));
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let corpus = hso_corpus();
    let mut spent = Duration::ZERO;
    for &(n, d, r, seed) in &corpus {
        let g = gen_random_hypergraph(n, d, r, seed).map_err(|e| e.to_string())?;
        let t = Instant::now();
        let seq = solve_hso(&g).map_err(|e| format!("n={n} ({d},{r}) seed {seed}: {e}"))?;
        let loc = solve_hso_local(&g).map_err(|e| format!("n={n} ({d},{r}) seed {seed}: {e}"))?;
        let rep = verify_hso(&g, &seq);
        spent += t.elapsed();
        check(rep.certified(), || format!("n={n} ({d},{r}) seed {seed}: {rep}"))?;
        check(seq == loc, || format!("n={n} ({d},{r}) seed {seed}: local and sequential differ"))?;
    }
    check(spent < HSO_BUDGET, || format!("solver time {spent:.1?} exceeds {HSO_BUDGET:?}"))?;
    Ok(format!("{} instances identical and certified, solver time {spent:.1?}", corpus.len()))
}

fn criterion_2() -> Outcome {
    let corpus = hso_corpus();
    let mut graphs = 0;
    for &(n, d, r, seed) in &corpus {
        let g = gen_random_hypergraph(n, d, r, seed).map_err(|e| e.to_string())?;
        let p = g.profile();
        let rb = radius_bound(n, p.delta, p.rank).map_err(|e| e.to_string())?;
        for h in hall_graphs(&g).map_err(|e| e.to_string())? {
            let rep = verify_hall_graph(&g, &h, Some(rb + 1));
            check(rep.certified(), || format!("n={n} ({d},{r}) seed {seed}: {rep}"))?;
            graphs += 1;
        }
        let o = solve_hso(&g).map_err(|e| e.to_string())?;
        let rep = locality_certify(&g, LocalAlgorithm::HsoLocal, &o, 2 * (rb + 1), LOCALITY_SAMPLES, seed);
        check(rep.certified() && rep.checked == LOCALITY_SAMPLES.min(n), || {
            format!("n={n} ({d},{r}) seed {seed}: replay at radius {}: {rep}", 2 * (rb + 1))
        })?;
    }
    Ok(format!("{graphs} Hall graphs within radius bound + 1, {} replays certified", corpus.len()))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut hall = 0;
    for i in 0..BRUTE_INSTANCES {
        let n = rng.gen_range(1..=12usize);
        let m = rng.gen_range(0..=16usize);
        let masks: Vec<u32> = (0..m).map(|_| rng.gen_range(1..1u32 << n)).collect();
        let g = from_masks(n, &masks);
        let oracle = is_hall(n, &masks);
        let brute = hall_check_bruteforce(&g).map_err(|e| e.to_string())?;
        check(brute.is_none() == oracle, || format!("instance {i}: brute force disagrees with subset oracle"))?;
        match find_violator(&g) {
            None => check(oracle, || format!("instance {i}: no violator reported on a non-Hall graph"))?,
            Some(v) => {
                let s = mask_of(&v.s);
                let meets = masks.iter().filter(|&&e| e & s != 0).count();
                check(!oracle && meets < v.s.len() && meets == v.incident_count, || {
                    format!("instance {i}: reported set {:?} is not a violator", v.s)
                })?;
            }
        }
        let peeled = peel_to_hall(&g);
        let union = induced_hall_union(n, &masks);
        check(peeled.is_empty() == (union == 0) && mask_of(&peeled.vertices) == union, || {
            format!("instance {i}: peel kept {:?}, oracle union {union:#b}", peeled.vertices)
        })?;
        check(!oracle || peeled.vertices.len() == n, || format!("instance {i}: peel shrank a Hall graph"))?;
        hall += oracle as usize;
    }
    let v = find_violator(&gen_fig1()).ok_or("no violator in the four-vertex example")?;
    check(v.s.len() == 4 && v.incident_count == 3, || format!("example violator {v:?}"))?;
    Ok(format!("{BRUTE_INSTANCES} instances agree ({hall} Hall), example violator has 4 vertices"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut done = 0;
    let mut seed = 0u64;
    let mut small = 0;
    while done < 100 {
        seed += 1;
        let dl = rng.gen_range(3..=6usize);
        let dr = rng.gen_range(2..dl);
        let nl = if done % 4 == 0 { rng.gen_range(4..=14) } else { rng.gen_range(20..=400) };
        let nr = nl * dl / dr + rng.gen_range(1..=8);
        let Some(b) = left_regular(nl, nr, dl, dr, seed) else { continue };
        check(b.min_left_degree() > b.max_right_degree(), || format!("seed {seed}: degree condition"))?;
        let m = saturating_matching(&b).map_err(|e| format!("seed {seed}: {e}"))?;
        let rep = verify_matching(&b, &m, Side::Left);
        check(rep.certified() && m.len() == nl, || format!("seed {seed}: {rep}"))?;
        let oracle = max_matching(&b).len();
        check(oracle == m.len(), || format!("seed {seed}: oracle {oracle}, got {}", m.len()))?;
        if nl <= 16 {
            check(deficiency_matching_size(&b) == m.len(), || format!("seed {seed}: deficiency formula"))?;
            small += 1;
        }
        done += 1;
    }
    Ok(format!("100 instances saturated, oracle cardinality matches ({small} also by deficiency)"))
}

fn criterion_5() -> Outcome {
    let before = fallback_count();
    let t = Instant::now();
    let mut worst = 0usize;
    for i in 0..100u64 {
        let delta = 3 + (i % 6) as usize;
        let n = 200 + 18 * i as usize;
        let g = gen_simple(SimpleKind::RandomDelta { n, delta }, i).map_err(|e| e.to_string())?;
        let d = g.max_degree();
        let c = edge_color_3half(&g).map_err(|e| format!("graph {i}: {e}"))?;
        let bound = 3 * d / 2;
        let rep = verify_coloring(&g, &c, Some(bound as u32));
        check(rep.certified() && c.num_colors() <= bound, || format!("graph {i} (Δ={d}): {rep}"))?;
        worst = worst.max(c.num_colors());
    }
    let spent = t.elapsed();
    let fallbacks = fallback_count() - before;
    check(fallbacks == 0, || format!("{fallbacks} backtracking fallbacks"))?;
    check(spent < COLOR_BUDGET, || format!("took {spent:.1?}, budget {COLOR_BUDGET:?}"))?;
    Ok(format!("100 graphs proper within ⌊3Δ/2⌋, 0 fallbacks, {spent:.1?}"))
}

fn criterion_6() -> Outcome {
    let g = gen_simple(SimpleKind::RandomDelta { n: 2000, delta: EPS_DELTA }, 6).map_err(|e| e.to_string())?;
    let (c, stats) = edge_color_3half_eps_with_stats(&g, EPS).map_err(|e| e.to_string())?;
    let rep = verify_coloring(&g, &c, Some(EPS_PALETTE));
    check(rep.certified(), || format!("{rep}"))?;
    check(stats.max_discrepancy <= MAX_SPLIT_DISCREPANCY, || format!("discrepancy {}", stats.max_discrepancy))?;
    let (red, _) = euler_split(&g);
    let top = split_discrepancy(&g, &red);
    check(top <= MAX_SPLIT_DISCREPANCY, || format!("first split discrepancy {top}"))?;
    Ok(format!("{} colors, {} split rounds, max discrepancy {}", c.num_colors(), stats.h, stats.max_discrepancy))
}

fn criterion_7() -> Outcome {
    let r = 3;
    let delta = RandomizedConfig::default().degree_factor * r * ceil_log2(r);
    let mut worst = 0;
    let mut runs = 0;
    for graph_seed in 0..4u64 {
        let cfg = HyperGenConfig::new(5000, delta, r).topology(Topology::Uniform);
        let g = gen_random_hypergraph_with(&cfg, graph_seed).map_err(|e| e.to_string())?;
        for s in 0..5u64 {
            let seed = graph_seed * 5 + s;
            let (o, rep) = solve_randomized(&g, seed).map_err(|e| format!("seed {seed}: {e}"))?;
            let cert = verify_hso(&g, &o);
            check(cert.certified() && rep.certified, || format!("seed {seed}: {cert}"))?;
            check(rep.post.max_component <= MAX_SHATTER_COMPONENT, || {
                format!("seed {seed}: component of {} vertices", rep.post.max_component)
            })?;
            worst = worst.max(rep.post.max_component);
            runs += 1;
            if s == 0 {
                let (o2, rep2) = solve_randomized(&g, seed).map_err(|e| e.to_string())?;
                let a = serde_json::to_string(&(&o, &rep)).unwrap();
                let b = serde_json::to_string(&(&o2, &rep2)).unwrap();
                check(a == b, || format!("seed {seed}: rerun differs"))?;
            }
        }
    }
    Ok(format!("{runs}/20 certified at δ={delta}, largest residual component {worst}, reruns identical"))
}

fn criterion_8() -> Outcome {
    let mut done = 0;
    for i in 0..50u64 {
        let r = 2 + (i % 3) as usize;
        let d = 2 * (r + 1) + 2 * (i % 2) as usize;
        let nl = 40 + 10 * (i as usize % 7);
        let b = (0..100).find_map(|k| left_regular(nl, 2 * nl * d / r, d, r, i * 100 + k)).ok_or("generator stuck")?;
        let s = weak_splitting(&b).map_err(|e| format!("instance {i}: {e}"))?;
        let rep = verify_weak_split(&b, &s);
        check(rep.certified(), || format!("instance {i} (r={r}, δ={d}): {rep}"))?;
        done += 1;
    }
    Ok(format!("{done} weak splittings certified"))
}

fn criterion_9() -> Outcome {
    for (delta, n) in [(2, 5), (2, 9), (3, 10), (3, 19)] {
        let lb = gen_lowerbound(delta, n).map_err(|e| e.to_string())?;
        let b = &lb.view;
        let regular = b.left_adj.iter().chain(&b.right_adj).all(|a| a.len() == delta);
        check(regular && b.left.len() == n && b.right.len() == n, || format!("({delta},{n}): not {delta}-regular"))?;
        let m = max_matching(b);
        check(verify_matching(b, &m, Side::Left).certified() && m.len() == n, || format!("({delta},{n}): not perfect"))?;
        let pa = m.pairs.iter().find(|p| p.1 == lb.a).ok_or("a unmatched")?.0;
        let pb = m.pairs.iter().find(|p| p.0 == lb.b).ok_or("b unmatched")?.1;
        let (i, _) = lb.gadget_of_left(pa).ok_or("partner of a outside gadgets")?;
        let (i2, _) = lb.gadget_of_right(pb).ok_or("partner of b outside gadgets")?;
        check(i == i2, || format!("({delta},{n}): gadget indices {i} and {i2}"))?;
        let rejected = matches!(solve_hso(&lb.hypergraph()), Err(Error::Precondition(_)));
        check(rejected, || format!("({delta},{n}): solver accepted δ = r"))?;
    }
    check(gen_lowerbound(2, 4).is_err() && gen_lowerbound(3, 9).is_err(), || "sizes below the smallest accepted".into())?;
    Ok("4 instances regular, perfect, index-consistent and rejected".into())
}

fn pipeline() -> Vec<String> {
    let mut out = Vec::new();
    let g = gen_random_hypergraph(1000, 6, 3, 10).unwrap();
    out.push(serde_json::to_string(&solve_hso(&g).unwrap()).unwrap());
    out.push(serde_json::to_string(&solve_hso_local(&g).unwrap()).unwrap());
    let scaled = RandomizedConfig { degree_factor: 8, rank_factor: 2, cap_factor: 4, retries: 16 };
    let cfg = HyperGenConfig::new(64, scaled.target_degree(40), 40).topology(Topology::Uniform);
    let h = gen_random_hypergraph_with(&cfg, 10).unwrap();
    out.push(serde_json::to_string(&solve_randomized_with(&h, 10, &scaled).unwrap()).unwrap());
    let s = gen_simple(SimpleKind::RandomDelta { n: 500, delta: 7 }, 10).unwrap();
    out.push(serde_json::to_string(&edge_color_3half(&s).unwrap()).unwrap());
    let s = gen_simple(SimpleKind::RandomDelta { n: 400, delta: 40 }, 10).unwrap();
    out.push(serde_json::to_string(&edge_color_3half_eps_with_stats(&s, 0.9).unwrap()).unwrap());
    let b = left_regular(60, 240, 8, 3, 10).unwrap();
    out.push(serde_json::to_string(&weak_splitting(&b).unwrap()).unwrap());
    out
}

fn criterion_10() -> Outcome {
    let mut seen = HashSet::new();
    let mut runs = 0;
    for t in THREAD_COUNTS {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| e.to_string())?;
        for _ in 0..2 {
            seen.insert(pool.install(pipeline));
            runs += 1;
        }
    }
    check(seen.len() == 1, || format!("{} distinct outputs over {runs} runs", seen.len()))?;
    Ok(format!("{runs} runs over thread counts {THREAD_COUNTS:?} byte-identical"))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let only: BTreeSet<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, f) in criteria {
        if !only.is_empty() && !only.contains(&i) {
            continue;
        }
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {i}: {msg} [{:.1?}]", t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {i}: {msg} [{:.1?}]", t.elapsed());
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
