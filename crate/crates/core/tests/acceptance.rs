//! Acceptance run: each criterion prints one PASS or FAIL line. Pass criterion numbers as
//! arguments to run a subset.

use cxtv_core::cohomology::{
    euler_power_nonvanishing, gaussian_binomial, poincare_counts, projectivization_nonvanishing, schur_matches_quotient,
};
use cxtv_core::depth::{brute_force_depth_2d, centerpoint_region, tukey_depth};
use cxtv_core::fh_index::{admissible_exponents, key_term_survives, Group};
use cxtv_core::gadgets::{
    below_inradius, make_tight_depth_instance, projection_norm_check, separating_halfspace, simplex_vertex,
};
use cxtv_core::generate::{generate_measures, generate_tverberg, generic_points, rng, Genericity};
use cxtv_core::geometry::MassCloud;
use cxtv_core::scalar::{q, qi};
use cxtv_core::transversal::{
    explore_transversal, search_odd_transversal, search_transversal, verify_transversal, SearchConfig,
};
use cxtv_core::tverberg::{search_tv, verify_tv, TvOutcome, TvVariant};
use cxtv_core::Q;
use rand::Rng;
use std::time::{Duration, Instant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Serialized certificates from the first pass, replayed by the determinism check.
#[derive(Default)]
struct Corpus {
    entries: Vec<(String, Job, String)>,
}

#[derive(Clone)]
enum Job {
    Even(u64),
    Odd(u64),
    Tv(u64, bool),
}

fn even_sizes(seed: u64) -> Vec<usize> {
    vec![12 + (seed % 9) as usize, 12 + ((seed * 5 + 4) % 9) as usize]
}

fn run_job(job: &Job, workers: usize) -> String {
    let cfg = SearchConfig { workers, ..Default::default() };
    match *job {
        Job::Even(seed) => {
            let ms = generate_measures(2, &even_sizes(seed), seed, Genericity::Generic).unwrap();
            serde_json::to_string(&search_transversal(&ms, 1, &cfg).unwrap().certified()).unwrap()
        }
        Job::Odd(seed) => {
            let ms = generate_measures(2, &even_sizes(seed + 1000), seed + 1000, Genericity::Generic).unwrap();
            serde_json::to_string(&search_odd_transversal(&ms, 1, &cfg).unwrap().certified()).unwrap()
        }
        Job::Tv(seed, colorful) => {
            let inst = tv_instance(seed, colorful);
            let cfg = SearchConfig { workers, ..SearchConfig::tverberg() };
            match search_tv(&inst, &cfg).unwrap() {
                TvOutcome::Certified(c) => serde_json::to_string(&c).unwrap(),
                TvOutcome::Exhausted(b) => serde_json::to_string(&b).unwrap(),
            }
        }
    }
}

fn tv_instance(seed: u64, colorful: bool) -> cxtv_core::tverberg::TvInstance {
    let parts = if colorful { vec![3, 3] } else { vec![2, 2] };
    generate_tverberg(2, 1, &parts, TvVariant::Complex, colorful, seed, Genericity::Generic).unwrap()
}

fn depth_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    for i in 0..200 {
        let n = r.random_range(1..=9);
        let pts: Vec<Vec<Q>> =
            (0..n).map(|_| vec![qi(r.random_range(-3..=3)), qi(r.random_range(-3..=3))]).collect();
        let raw: Vec<i64> = (0..n).map(|_| r.random_range(1..=4)).collect();
        let total: i64 = raw.iter().sum();
        let cloud = MassCloud::new(pts.clone(), raw.iter().map(|&w| q(w, total)).collect()).unwrap();
        let point = if r.random_bool(0.5) {
            pts[r.random_range(0..n)].clone()
        } else {
            vec![q(r.random_range(-12..=12), 4), q(r.random_range(-12..=12), 4)]
        };
        let got = tukey_depth(&cloud, &point).unwrap();
        let want = brute_force_depth_2d(&cloud, &point);
        if got.value != want {
            return outcome(false, format!("cloud {i}: depth {} but oracle {want}", got.value));
        }
        if cloud.halfspace_weight(&got.witness_normal, &got.witness_offset) != got.value {
            return outcome(false, format!("cloud {i}: witness weight differs from the depth"));
        }
    }
    let t = start.elapsed();
    outcome(t < Duration::from_secs(5), format!("200 clouds agree with the oracle in {t:.2?} (limit 5s)"))
}

fn centerpoints() -> Outcome {
    let mut r = rng(2);
    for m in 1..=3usize {
        for i in 0..100 {
            let n = r.random_range(1..=10);
            let cloud = MassCloud::uniform(generic_points(&mut r, n, m)).unwrap();
            let region = centerpoint_region(&cloud, &q(1, m as i64 + 1)).unwrap();
            if region.is_empty() {
                return outcome(false, format!("m={m}, cloud {i}: empty region at 1/{}", m + 1));
            }
        }
    }
    outcome(true, "300 regions at t = 1/(m+1) are nonempty for m = 1, 2, 3")
}

fn complex_transversals(corpus: &mut Corpus) -> Outcome {
    let cfg = SearchConfig::default();
    let mut worst = Duration::ZERO;
    let mut failures = Vec::new();
    for seed in 0..50u64 {
        let ms = generate_measures(2, &even_sizes(seed), seed, Genericity::Generic).unwrap();
        let start = Instant::now();
        let found = search_transversal(&ms, 1, &cfg).unwrap().certified();
        let t = start.elapsed();
        worst = worst.max(t);
        match found {
            Some(c) if c.bound == q(1, 3) && verify_transversal(&c, &ms).is_ok() && t < Duration::from_secs(10) => {
                corpus.entries.push((format!("transversal/{seed}"), Job::Even(seed), serde_json::to_string(&Some(c)).unwrap()));
            }
            Some(_) => failures.push(format!("{seed} (slow or invalid, {t:.1?})")),
            None => failures.push(format!("{seed} (not found)")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("{}/50 certified with bound 1/3, slowest {worst:.2?} (limit 10s){}", 50 - failures.len(), list(&failures)),
    )
}

fn odd_transversals(corpus: &mut Corpus) -> Outcome {
    let cfg = SearchConfig::default();
    let mut worst = Duration::ZERO;
    let mut failures = Vec::new();
    for seed in 0..25u64 {
        let s = seed + 1000;
        let ms = generate_measures(2, &even_sizes(s), s, Genericity::Generic).unwrap();
        let start = Instant::now();
        let found = search_odd_transversal(&ms, 1, &cfg).unwrap().certified();
        let t = start.elapsed();
        worst = worst.max(t);
        match found {
            Some(c) if c.bound == q(1, 4) && verify_transversal(&c, &ms).is_ok() && t < Duration::from_secs(30) => {
                corpus.entries.push((format!("odd/{seed}"), Job::Odd(seed), serde_json::to_string(&Some(c)).unwrap()));
            }
            Some(_) => failures.push(format!("{seed} (slow or invalid, {t:.1?})")),
            None => failures.push(format!("{seed} (not found)")),
        }
    }
    outcome(
        failures.is_empty(),
        format!("{}/25 certified with bound 1/4, slowest {worst:.2?} (limit 30s){}", 25 - failures.len(), list(&failures)),
    )
}

fn tverberg(corpus: &mut Corpus) -> Outcome {
    let cfg = SearchConfig::tverberg();
    let mut lines = Vec::new();
    let mut all = true;
    for (colorful, count, limit) in [(false, 25u64, 60u64), (true, 10, 120)] {
        let mut found = 0;
        let mut worst = Duration::ZERO;
        let mut failures = Vec::new();
        for seed in 0..count {
            let inst = tv_instance(seed, colorful);
            let start = Instant::now();
            let out = search_tv(&inst, &cfg).unwrap();
            let t = start.elapsed();
            worst = worst.max(t);
            let text = match &out {
                TvOutcome::Certified(c) => serde_json::to_string(c).unwrap(),
                TvOutcome::Exhausted(b) => serde_json::to_string(b).unwrap(),
            };
            match out {
                TvOutcome::Certified(c) if verify_tv(&c, &inst).is_ok() && t < Duration::from_secs(limit) => {
                    found += 1;
                    corpus.entries.push((format!("tverberg/{colorful}/{seed}"), Job::Tv(seed, colorful), text));
                }
                TvOutcome::Certified(_) => failures.push(format!("{seed} (slow or invalid, {t:.1?})")),
                TvOutcome::Exhausted(b) => {
                    let gap = b.best_margin.map_or("none".into(), |m| format!("{:.2e}", cxtv_core::scalar::to_f64(&m)));
                    failures.push(format!("{seed} (exhausted, best margin {gap})"));
                }
            }
        }
        all &= found == count;
        let name = if colorful { "colorful p=3" } else { "r=(2,2)" };
        lines.push(format!("{name}: {found}/{count}, slowest {worst:.1?} (limit {limit}s){}", list(&failures)));
    }
    outcome(all, lines.join("; "))
}

fn cohomology() -> Outcome {
    let start = Instant::now();
    for d in 2..=6 {
        for n in 1..d {
            for p in [2, 3, 5] {
                if !euler_power_nonvanishing(n, d, (d - n) as u32, p).unwrap().nonzero {
                    return outcome(false, format!("c_{n}^{} vanishes mod {p} on G_{n}(C^{d})", d - n));
                }
            }
        }
    }
    for d in 2..=5 {
        for n in 1..d {
            if !projectivization_nonvanishing(n, d, (d - n) as u32).unwrap() {
                return outcome(false, format!("projectivization power vanishes at n={n}, d={d}"));
            }
        }
    }
    for k in 1..=2 {
        for d in k..=5 {
            if let Err(e) = schur_matches_quotient(k, d).unwrap() {
                return outcome(false, format!("Schur and quotient models differ at k={k}, d={d}: {e}"));
            }
        }
    }
    for d in 1..=6 {
        for k in 0..=d {
            if poincare_counts(k, d) != gaussian_binomial(k, d) {
                return outcome(false, format!("Poincare counts differ at k={k}, d={d}"));
            }
        }
    }
    let t = start.elapsed();
    outcome(t < Duration::from_secs(60), format!("all four sweeps hold, {t:.2?} (limit 60s)"))
}

fn fh_index() -> Outcome {
    let start = Instant::now();
    for d in 1..=8 {
        for n in 1..=d {
            if !key_term_survives(n, d, Group::Circle, None).unwrap().contradiction_established {
                return outcome(false, format!("circle n={n}, d={d} not established"));
            }
        }
    }
    let mut vectors = 0;
    for n in 1..=4 {
        for d in 1..=6 {
            for e in admissible_exponents(n, d) {
                vectors += 1;
                if !key_term_survives(n, d, Group::Z2, Some(&e)).unwrap().contradiction_established {
                    return outcome(false, format!("z2 n={n}, d={d}, a={e:?} not established"));
                }
            }
        }
    }
    let t = start.elapsed();
    outcome(
        t < Duration::from_secs(120),
        format!("36 circle cases and {vectors} z2 exponent vectors established, {t:.2?} (limit 120s)"),
    )
}

fn gadgets() -> Outcome {
    let mut r = rng(8);
    let mut queries = 0;
    for m in 2..=3usize {
        while queries < 500 * (m - 1) {
            let radius = q(r.random_range(1..=40), 100);
            if !below_inradius(m, &radius) {
                continue;
            }
            let x: Vec<Q> = (0..m).map(|_| q(r.random_range(-300..=300), 100)).collect();
            let h = match separating_halfspace(m, &radius, &x) {
                Ok(h) => h,
                Err(e) => return outcome(false, format!("m={m}, query {x:?}: {e}")),
            };
            let ok = h.contains(&x)
                && h.contains(&simplex_vertex(m, h.j))
                && (0..=m).filter(|&l| l != h.j).all(|l| h.ball_misses(&simplex_vertex(m, l), &radius));
            if !ok {
                return outcome(false, format!("m={m}: postconditions fail for {x:?}"));
            }
            queries += 1;
        }
    }
    let g = make_tight_depth_instance(2, 1, &q(1, 16), 8).unwrap();
    let best = explore_transversal(&g.measures, 1, &q(1, 8), 4).unwrap();
    let limit = q(1, 3) + q(1, 50);
    let norms = projection_norm_check(2, 1, &q(1, 100), 100, 0).unwrap();
    outcome(
        best <= limit && norms.passed,
        format!(
            "{queries} separating queries hold; tight gadget best depth {best} (limit 1/3 + 1/50); norm check {}",
            if norms.passed { "passed" } else { "failed" }
        ),
    )
}

fn determinism(corpus: &Corpus) -> Outcome {
    if corpus.entries.is_empty() {
        return outcome(false, "no certificates recorded; run criteria 3-5 first");
    }
    for (name, job, first) in &corpus.entries {
        if &run_job(job, 1) != first {
            return outcome(false, format!("{name}: payload differs on the second run"));
        }
    }
    outcome(true, format!("{} certificate payloads byte-identical on a single-worker rerun", corpus.entries.len()))
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        String::new()
    } else {
        format!("; failed: {}", items.join(", "))
    }
}

fn main() {
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let on = |n: u32| wanted.is_empty() || wanted.contains(&n);
    let mut corpus = Corpus::default();
    let mut failed = 0;
    let mut report = |n: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        if !on(n) {
            return;
        }
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("{verdict} criterion {n} ({name}): {} [{:.1?}]", o.detail, start.elapsed());
    };
    report(1, "depth oracle", &mut depth_oracle);
    report(2, "centerpoint regions", &mut centerpoints);
    report(3, "complex transversals", &mut || complex_transversals(&mut corpus));
    report(4, "odd transversals", &mut || odd_transversals(&mut corpus));
    report(5, "Tverberg partitions", &mut || tverberg(&mut corpus));
    report(6, "cohomology sweeps", &mut cohomology);
    report(7, "index sweeps", &mut fh_index);
    report(8, "gadgets", &mut gadgets);
    report(9, "determinism", &mut || determinism(&corpus));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
