//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails without a recorded explanation.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use common::{
    all_induced, alphas, brute_min_sparsifier, mask_clients, naive_external_sizes,
    random_covered_graph, random_graph, random_small_base, random_subgraph,
};
use lbsparse::commgame::{
    encode, recovery_fraction, run_protocol, sample_hard_instance, GreedyPrune, RandomSample,
    SparsifyStrategy,
};
use lbsparse::contractor::{
    construct, external_neighborhood_bound, feasible_family_size, gen_set_family,
    induced_violation, intersection_bound, to_rs_graph, verify, Construction,
    ContractorCertificate, FamilyMode, MatchingDecomposition, SetFamily,
};
use lbsparse::loadbal::{for_each_assignment, optload, optload_hall};
use lbsparse::lp::{
    count_contracting_pairs, dual_feasible, primal_feasible, reduce_servers, round_dual,
    round_primal, solve_dual, solve_primal, LP_SIZE_CAP,
};
use lbsparse::rng::{derive_seed, rng_from_seed};
use lbsparse::sparsifier::{
    brittleness_witness, is_sparsifier_def, is_sparsifier_operational, violates_operational,
    OPERATIONAL_CAP,
};
use lbsparse::{Assignment, BipartiteGraph, ExtRatio, Matching, OptLoad, Rational};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x1b5a_2024;

fn rng(criterion: u64, j: u64) -> ChaCha8Rng {
    rng_from_seed(derive_seed(SEED, criterion * 1_000_000 + j))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn big(n: usize) -> BigRational {
    BigRational::from_integer(n.into())
}

struct Verdict {
    pass: bool,
    detail: String,
    /// Why a failure is expected; printed under the FAIL line.
    explained: Option<String>,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Verdict {
            pass,
            detail,
            explained: None,
        }
    }
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("optload oracle equivalence", optload_oracles),
        (
            "definition vs operational sparsifier verdicts",
            sparsifier_verdicts,
        ),
        ("LP strong duality", strong_duality),
        ("LP relaxation below smallest sparsifier", relaxation),
        ("primal rounding", primal_rounding),
        ("dual rounding", dual_rounding),
        ("construction exactness", construction),
        ("brittleness", brittleness),
        ("set families", set_families),
        ("protocol bound", protocol),
        ("hard-instance structure", hard_instances),
        ("server reduction", server_reduction),
        ("induced-matching conversion", rs_conversion),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut unexplained = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Verdict::new(false, format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let tag = if verdict.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} [{:>2}] {name}: {} ({secs:.2} s)",
            n + 1,
            verdict.detail
        );
        match (&verdict.explained, verdict.pass) {
            (_, true) => {}
            (Some(why), false) => println!("          expected failure: {why}"),
            (None, false) => unexplained += 1,
        }
    }
    if unexplained > 0 {
        println!("{unexplained} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn optload_oracles() -> Verdict {
    let start = Instant::now();
    let (mut checks, mut mismatches) = (0, 0);
    for j in 0..500 {
        let mut r = rng(1, j);
        let (nl, nr) = (r.random_range(1..=8), r.random_range(1..=8));
        let p = r.random::<f64>();
        let g = random_graph(&mut r, nl, nr, p);
        for mask in 0..1u64 << nl {
            let clients = mask_clients(mask);
            checks += 1;
            if optload(&g, &clients).unwrap() != optload_hall(&g, &clients).unwrap() {
                mismatches += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(
        mismatches == 0 && secs < 10.0,
        format!("500 graphs, {checks} client sets, {mismatches} mismatches, {secs:.2} s of 10 s"),
    )
}

fn sparsifier_verdicts() -> Verdict {
    let (mut disagree, mut unexplained, mut at_integer) = (0, 0, 0);
    let mut example = None;
    for j in 0..300 {
        let mut r = rng(2, j);
        let (nl, nr) = (r.random_range(1..=8), r.random_range(1..=8));
        let (pg, ph) = (r.random::<f64>(), r.random::<f64>());
        let g = random_graph(&mut r, nl, nr, pg);
        let h = random_subgraph(&mut r, &g, ph);
        let alpha = alphas()[r.random_range(0..4)];
        let def = is_sparsifier_def(&g, &h, alpha).unwrap().passes;
        let op = is_sparsifier_operational(&g, &h, alpha).unwrap().passes;
        if def != op {
            disagree += 1;
            if alpha.is_integer() {
                at_integer += 1;
                unexplained += 1;
            } else if is_sparsifier_operational(&g, &h, alpha.floor())
                .unwrap()
                .passes
                != def
            {
                unexplained += 1;
            }
            example.get_or_insert(j);
        }
    }
    let mut v = Verdict::new(
        disagree == 0,
        format!("300 triples, {disagree} disagreements ({at_integer} at integer alpha)"),
    );
    if disagree > 0 && unexplained == 0 {
        v.explained = Some(format!(
            "every disagreement (first at triple {}) has fractional alpha, and there the \
             definition verdict equals the operational verdict at floor(alpha); OPTLOAD is an \
             integer, so the two tests coincide only for integer alpha",
            example.unwrap()
        ));
    }
    v
}

fn strong_duality() -> Verdict {
    let (mut done, mut skipped, mut bad, mut j) = (0, 0, 0, 0);
    let mut max_pairs = 0;
    while done < 200 {
        let mut r = rng(3, j);
        j += 1;
        let (nl, nr) = (r.random_range(1..=6), r.random_range(1..=6));
        let p = r.random::<f64>();
        let g = random_graph(&mut r, nl, nr, p);
        let alpha = int(2 + (done % 2) as i64);
        let pairs = count_contracting_pairs(&g, alpha).unwrap();
        if pairs > LP_SIZE_CAP {
            skipped += 1;
            continue;
        }
        max_pairs = max_pairs.max(pairs);
        done += 1;
        let primal = solve_primal(&g, alpha).unwrap();
        let dual = solve_dual(&g, alpha).unwrap();
        let ok = primal.objective == dual.objective
            && dual.y.iter().all(|y| *y <= BigRational::one())
            && primal_feasible(&g, alpha, &primal.x).unwrap()
            && dual_feasible(&g, alpha, &dual.pairs, &dual.y).unwrap();
        if !ok {
            bad += 1;
        }
    }
    Verdict::new(
        bad == 0,
        format!(
            "{done} graphs (up to {max_pairs} dual variables, {skipped} over cap), {bad} failures"
        ),
    )
}

fn relaxation() -> Verdict {
    let (mut graphs, mut bad) = (0usize, 0usize);
    let mut tight = 0usize;
    for nl in 1..=10usize {
        for nr in 1..=10 / nl {
            let cells = nl * nr;
            for mask in 0u32..1 << cells {
                if mask.count_ones() > 8 {
                    continue;
                }
                let edges = (0..cells)
                    .filter(|&b| mask >> b & 1 == 1)
                    .map(|b| (b / nr, b % nr));
                let g = BipartiteGraph::new(nl, nr, edges).unwrap();
                graphs += 1;
                for alpha in alphas() {
                    let lp = solve_primal(&g, alpha).unwrap().objective;
                    let brute = big(brute_min_sparsifier(&g, alpha));
                    if lp > brute {
                        bad += 1;
                    } else if lp == brute {
                        tight += 1;
                    }
                }
            }
        }
    }
    Verdict::new(
        bad == 0,
        format!("{graphs} graphs x 4 alphas, {bad} violations, {tight} tight"),
    )
}

fn primal_rounding() -> Verdict {
    let (mut weak_graphs, mut good_total, mut whole) = (0, 0, 0);
    for gi in 0..20 {
        let mut r = rng(5, gi);
        let (nl, nr) = (r.random_range(2..=5), r.random_range(2..=5));
        let p = r.random_range(0.3..=1.0);
        let g = random_graph(&mut r, nl, nr, p);
        let alpha = int(2 + (gi % 2) as i64);
        let sol = solve_primal(&g, alpha / 2).unwrap();
        let bound = 20.0 * (nl as f64).ln() * sol.objective.to_f64().unwrap();
        let mut good = 0;
        for s in 0..40 {
            let h = round_primal(&g, alpha, &sol, derive_seed(SEED ^ 5, gi * 40 + s)).unwrap();
            whole += usize::from(h == g);
            if is_sparsifier_operational(&g, &h, alpha).unwrap().passes
                && h.num_edges() as f64 <= bound
            {
                good += 1;
            }
        }
        good_total += good;
        if 2 * good < 40 {
            weak_graphs += 1;
        }
    }
    Verdict::new(
        weak_graphs == 0,
        format!(
            "20 graphs x 40 seeds, {good_total}/800 good, {weak_graphs} graphs below half, \
             {whole}/800 kept every edge"
        ),
    )
}

fn dual_rounding() -> Verdict {
    let alpha = int(2);
    let (mut verified, mut runs, mut weak) = (0, 0, 0);
    let (mut incidences, mut overloaded) = (0usize, 0usize);
    for gi in 0..4 {
        let mut r = rng(6, gi);
        let (nl, nr) = (r.random_range(3..=5), r.random_range(3..=5));
        let p = r.random_range(0.4..=0.9);
        let g = random_graph(&mut r, nl, nr, p);
        let dual = solve_dual(&g, alpha).unwrap();
        let mut max_edges = 0;
        for s in 0..50 {
            let out = round_dual(&g, alpha, &dual, derive_seed(SEED ^ 6, gi * 50 + s)).unwrap();
            runs += 1;
            verified += usize::from(verify(&out.graph, &out.decomposition, alpha).unwrap().0);
            max_edges = max_edges.max(out.graph.num_edges());
            incidences += out.incidences;
            overloaded += out.overloaded_incidences;
        }
        if big(20 * max_edges) < dual.objective {
            weak += 1;
        }
    }
    let rate = overloaded as f64 / incidences.max(1) as f64;
    let limit = 0.1 + 3.0 * (0.09 / incidences.max(1) as f64).sqrt();
    Verdict::new(
        verified == runs && weak == 0 && incidences > 0 && rate <= limit,
        format!(
            "{verified}/{runs} verified, {weak} graphs with max edges below LP/20, \
             overload rate {rate:.4} over {incidences} incidences (limit {limit:.4})"
        ),
    )
}

struct Built {
    k: usize,
    family: SetFamily,
    c: Construction,
    cert: ContractorCertificate,
    seconds: f64,
}

fn constructions() -> &'static [Built] {
    static BUILT: OnceLock<Vec<Built>> = OnceLock::new();
    BUILT.get_or_init(|| {
        [2usize, 4, 6, 8]
            .iter()
            .map(|&k| {
                let t = feasible_family_size(k, 0.3).max(3);
                let family = gen_set_family(
                    k,
                    Rational::new(3, 10),
                    t,
                    derive_seed(SEED, 7000 + k as u64),
                    10_000,
                    FamilyMode::Resample,
                )
                .unwrap()
                .unwrap();
                let start = Instant::now();
                let c = construct(2, k, &family).unwrap();
                let (_, cert) = verify(&c.graph, &c.decomposition, int(1)).unwrap();
                Built {
                    k,
                    family,
                    c,
                    cert,
                    seconds: start.elapsed().as_secs_f64(),
                }
            })
            .collect()
    })
}

fn construction() -> Verdict {
    let mut problems = Vec::new();
    let mut notes = Vec::new();
    for b in constructions() {
        let (k, t) = (b.k, b.family.len());
        let groups = 1usize << k;
        for (idx, &(_, ext)) in b.cert.per_matching.iter().enumerate() {
            if ext as u64 > external_neighborhood_bound(&b.family, 2, idx / groups).unwrap() {
                problems.push(format!("k={k} matching {idx} over bound"));
            }
        }
        if k <= 6 {
            let naive = naive_external_sizes(&b.c.decomposition);
            if naive
                .iter()
                .zip(&b.cert.per_matching)
                .any(|(&n, &(_, e))| n != e)
            {
                problems.push(format!(
                    "k={k} external sizes disagree with the naive count"
                ));
            }
        }
        if b.c.decomposition.labeled_edge_count() != t * groups * groups {
            problems.push(format!("k={k} labeled edge count"));
        }
        let target = Rational::new(
            groups as i64,
            (t << intersection_bound(k, Rational::new(3, 10))) as i64,
        );
        if !b.cert.alpha_achieved.at_least(target) {
            problems.push(format!(
                "k={k} alpha {} below {target}",
                b.cert.alpha_achieved
            ));
        }
        if k == 8 && b.seconds >= 60.0 {
            problems.push(format!("k=8 took {:.1} s", b.seconds));
        }
        notes.push(format!(
            "k={k} t={t} alpha={} {:.2}s",
            b.cert.alpha_achieved, b.seconds
        ));
    }
    Verdict::new(
        problems.is_empty(),
        format!(
            "{}; {}",
            notes.join(", "),
            if problems.is_empty() {
                "no violations".into()
            } else {
                problems.join("; ")
            }
        ),
    )
}

/// A decomposition, its support, and the largest `α` it verifies at.
struct Contractor {
    name: String,
    g: BipartiteGraph,
    d: MatchingDecomposition,
    alpha: ExtRatio,
}

fn hand_base() -> MatchingDecomposition {
    MatchingDecomposition::new(
        7,
        8,
        vec![
            Matching::new([(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap(),
            Matching::new([(0, 4), (4, 5), (5, 6), (6, 7)]).unwrap(),
        ],
    )
    .unwrap()
}

/// Two client-disjoint matchings on shared servers: external neighborhoods are empty.
fn disjoint_base() -> MatchingDecomposition {
    MatchingDecomposition::new(
        8,
        4,
        vec![
            Matching::new([(0, 0), (1, 1), (2, 2), (3, 3)]).unwrap(),
            Matching::new([(4, 0), (5, 1), (6, 2), (7, 3)]).unwrap(),
        ],
    )
    .unwrap()
}

fn small_bases() -> Vec<MatchingDecomposition> {
    let mut r = rng(11, 0);
    let mut bases = vec![hand_base()];
    while bases.len() < 9 {
        let (_, d) = random_small_base(&mut r, 100_000).expect("random 4-contractor");
        if !bases.contains(&d) {
            bases.push(d);
        }
    }
    bases
}

fn contractor(name: String, d: MatchingDecomposition) -> Contractor {
    let g = d.support_graph();
    let alpha = verify(&g, &d, int(1)).unwrap().1.alpha_achieved;
    Contractor { name, g, d, alpha }
}

fn all_contractors() -> Vec<Contractor> {
    let mut out: Vec<Contractor> = constructions()
        .iter()
        .map(|b| Contractor {
            name: format!("construction k={}", b.k),
            g: b.c.graph.clone(),
            d: b.c.decomposition.clone(),
            alpha: b.cert.alpha_achieved,
        })
        .collect();
    for (i, d) in small_bases().into_iter().enumerate() {
        out.push(contractor(format!("base {i}"), d));
    }
    out.push(contractor("disjoint base".into(), disjoint_base()));
    let alpha = int(2);
    for gi in 0..3 {
        let mut r = rng(8, gi);
        let g = random_graph(&mut r, 5, 5, 0.7);
        let dual = solve_dual(&g, alpha).unwrap();
        let best = (0..20)
            .map(|s| round_dual(&g, alpha, &dual, derive_seed(SEED ^ 8, gi * 20 + s)).unwrap())
            .max_by_key(|o| o.graph.num_edges())
            .unwrap();
        if !best.decomposition.is_empty() {
            out.push(contractor(
                format!("dual rounding {gi}"),
                best.decomposition,
            ));
        }
    }
    out
}

fn brittleness() -> Verdict {
    let (mut tested, mut broken, mut skipped) = (0, 0, Vec::new());
    for c in all_contractors() {
        // Verified at 2α means α is at most half the achieved value.
        let alpha = match c.alpha {
            ExtRatio::Finite(a) => a / 2,
            ExtRatio::Infinite => int(1),
        };
        if alpha < int(1) {
            skipped.push(c.name);
            continue;
        }
        for i in 0..c.d.len() {
            if c.d.matchings()[i].is_empty() {
                continue;
            }
            tested += 1;
            let w = brittleness_witness(&c.g, &c.d, alpha, i).unwrap();
            let mut fails = violates_operational(&c.g, &w.sparsified, alpha, &w.clients).unwrap();
            if c.g.n_left() <= OPERATIONAL_CAP {
                fails &= !is_sparsifier_operational(&c.g, &w.sparsified, alpha)
                    .unwrap()
                    .passes;
            }
            broken += usize::from(fails);
        }
    }
    let skipped = if skipped.is_empty() {
        String::new()
    } else {
        format!("; alpha/2 < 1 for {}", skipped.join(", "))
    };
    Verdict::new(
        tested > 0 && broken == tested,
        format!("{broken}/{tested} matchings break the operational test{skipped}"),
    )
}

fn set_families() -> Verdict {
    let delta = Rational::new(3, 10);
    let mut notes = Vec::new();
    let mut ok = true;
    for k in [8usize, 12, 16] {
        let t = feasible_family_size(k, 0.3).max(3);
        let bound = intersection_bound(k, delta);
        match gen_set_family(
            k,
            delta,
            t,
            derive_seed(SEED, 9000 + k as u64),
            10_000,
            FamilyMode::Resample,
        )
        .unwrap()
        {
            Ok(f) => {
                let sets = f.sets();
                let worst = (0..t)
                    .flat_map(|i| (i + 1..t).map(move |j| (i, j)))
                    .map(|(i, j)| sets[i].iter().filter(|e| sets[j].contains(e)).count())
                    .max()
                    .unwrap_or(0);
                let shaped = sets
                    .iter()
                    .all(|s| s.len() == k && s.iter().all(|&e| (1..=2 * k).contains(&e)));
                ok &= worst <= bound && shaped && f.len() == t && bound == 7 * k / 10;
                notes.push(format!("k={k} t={t} max overlap {worst} <= {bound}"));
            }
            Err(failure) => {
                ok = false;
                notes.push(format!("k={k} failed after {} attempts", failure.attempts));
            }
        }
    }
    Verdict::new(ok, notes.join(", "))
}

fn protocol() -> Verdict {
    let (mut runs, mut bad, mut j, mut unverified) = (0, 0, 0, 0);
    let mut worst = Rational::from_integer(0);
    while runs < 100 {
        let mut r = rng(10, j);
        j += 1;
        let (nl, nr) = (r.random_range(2..=6), r.random_range(2..=6));
        let p = r.random_range(0.2..=0.9);
        let g = random_covered_graph(&mut r, nl, nr, p);
        let alpha = alphas()[r.random_range(0..4)];
        let alice: Vec<bool> = (0..g.num_edges()).map(|_| r.random_bool(0.6)).collect();
        let (g_a, g_b) = (
            g.edge_subgraph(|e| alice[e]),
            g.edge_subgraph(|e| !alice[e]),
        );
        let strategy: Box<dyn SparsifyStrategy> = if j % 2 == 0 {
            Box::new(GreedyPrune { alpha })
        } else {
            Box::new(RandomSample {
                p: 0.7,
                seed: r.random(),
            })
        };
        let h = strategy.sparsify(&g_a).unwrap();
        if !is_sparsifier_operational(&g_a, &h, alpha).unwrap().passes {
            unverified += 1;
            continue;
        }
        let out = run_protocol(&g_a, &g_b, strategy.as_ref(), alpha).unwrap();
        runs += 1;
        worst = worst.max(out.ratio - alpha);
        if out.ratio > alpha + 1 || out.alice_is_sparsifier != Some(true) {
            bad += 1;
        }
    }
    Verdict::new(
        bad == 0,
        format!("{runs} verified runs ({unverified} unverified messages skipped), {bad} over alpha + 1, max ratio - alpha = {worst}"),
    )
}

fn hard_instances() -> Verdict {
    let mut bases: Vec<(MatchingDecomposition, Rational)> =
        small_bases().into_iter().map(|d| (d, int(1))).collect();
    bases.push((disjoint_base(), int(2)));
    let (mut encodings, mut reverified) = (0, 0);
    let (mut instances, mut assignments, mut low) = (0, 0u64, 0);
    for (bi, (d0, alpha)) in bases.iter().enumerate() {
        let g0 = d0.support_graph();
        assert!(verify(&g0, d0, *alpha * 4).unwrap().0);
        let mut r = rng(11, 1 + bi as u64);
        for _ in 0..100 {
            let x: Vec<bool> = (0..d0.labeled_edge_count()).map(|_| r.random()).collect();
            let (gx, dx) = encode(&g0, d0, &x).unwrap();
            encodings += 1;
            reverified += usize::from(verify(&gx, &dx, *alpha * 2).unwrap().0);
        }
        for s in 0..10 {
            let inst =
                sample_hard_instance(&g0, d0, *alpha, derive_seed(SEED ^ 11, bi as u64 * 10 + s))
                    .unwrap();
            let combined = inst.combined_graph();
            let clients = combined.all_clients();
            instances += 1;
            if optload(&combined, &clients).unwrap() != OptLoad::Value(1) {
                low += 1;
            }
            let cap = alpha.floor().to_integer() as usize;
            assignments += for_each_assignment(&combined, &clients, cap, |servers| {
                let a = Assignment::new(
                    &combined,
                    clients.iter().copied().zip(servers.iter().copied()),
                )
                .unwrap();
                if recovery_fraction(&inst, &a).unwrap() < Rational::new(1, 2) {
                    low += 1;
                }
            })
            .unwrap();
        }
    }
    Verdict::new(
        reverified == encodings && low == 0,
        format!(
            "{reverified}/{encodings} encodings re-verify at 2 alpha over {} bases; \
             {instances} instances, {assignments} assignments enumerated, {low} with recovery below 1/2",
            bases.len()
        ),
    )
}

/// Matchability of every client subset by Hall's condition.
fn hall_table(g: &BipartiteGraph) -> Vec<bool> {
    let n = g.n_left();
    let nbrs: Vec<Vec<u64>> = (0..n)
        .map(|c| {
            let mut words = vec![0u64; g.n_right().div_ceil(64)];
            for &s in g.neighbors(c) {
                words[s / 64] |= 1 << (s % 64);
            }
            words
        })
        .collect();
    let size = |mask: u64| -> usize {
        let mut words = vec![0u64; g.n_right().div_ceil(64)];
        for c in mask_clients(mask) {
            for (w, x) in words.iter_mut().zip(&nbrs[c]) {
                *w |= x;
            }
        }
        words.iter().map(|w| w.count_ones() as usize).sum()
    };
    let ok: Vec<bool> = (0..1u64 << n)
        .map(|m| size(m) >= m.count_ones() as usize)
        .collect();
    (0..1u64 << n)
        .map(|m| {
            (0..1u64 << n)
                .filter(|u| u & m == *u)
                .all(|u| ok[u as usize])
        })
        .collect()
}

fn server_reduction() -> Verdict {
    let mut bad = 0;
    let mut max_right = 0;
    for j in 0..200 {
        let mut r = rng(12, j);
        let n = r.random_range(1..=6usize);
        let nr = r.random_range(1..=n * n * n);
        let p = r.random::<f64>();
        let g = random_graph(&mut r, n, nr, p);
        max_right = max_right.max(nr);
        let red = reduce_servers(&g);
        let ok = red.graph.n_right() <= n * n
            && (0..n).all(|c| red.graph.degree(c) <= n)
            && red
                .graph
                .edges()
                .iter()
                .all(|&(c, s)| g.has_edge(c, red.kept_servers[s]))
            && hall_table(&red.graph) == hall_table(&g);
        bad += usize::from(!ok);
    }
    Verdict::new(
        bad == 0,
        format!("200 graphs (n_right up to {max_right}), {bad} failures"),
    )
}

fn rs_conversion() -> Verdict {
    let (mut converted, mut bad, mut refused) = (0, 0, 0);
    for c in all_contractors() {
        let alpha = match c.alpha {
            ExtRatio::Finite(a) => a,
            ExtRatio::Infinite => int(1),
        };
        let Ok(rs) = to_rs_graph(&c.g, &c.d, alpha) else {
            refused += 1;
            continue;
        };
        converted += 1;
        let sizes_ok = rs.size.is_power_of_two()
            && rs
                .decomposition
                .matchings()
                .iter()
                .all(|m| m.len() == rs.size);
        let induced = induced_violation(&rs.graph, &rs.decomposition).is_none()
            && (rs.graph.n_left() > 4096 || all_induced(&rs.graph, &rs.decomposition));
        if !(sizes_ok && induced) {
            bad += 1;
        }
    }
    Verdict::new(
        bad == 0 && refused == 0 && converted > 0,
        format!("{converted} conversions, {bad} not induced or unequal, {refused} refused"),
    )
}
