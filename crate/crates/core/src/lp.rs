//! The sparsification LP and its dual, solved exactly, with both randomized
//! roundings and the server-count reduction used before rounding.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::contractor::MatchingDecomposition;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::matching::{clients_to_mask, lex_min_saturating, mask_to_clients, matchable_subsets};
use crate::ratio::{big_to_f64, floor_usize, Rational};
use crate::rng::rng_from_seed;
use crate::simplex::{maximize, LpOutcome};

/// Client cap for pair enumeration.
pub const LP_CLIENT_CAP: usize = 10;
/// Server cap for pair enumeration.
pub const LP_SERVER_CAP: usize = 12;
/// Largest number of primal constraints or dual variables handed to the solver.
pub const LP_SIZE_CAP: usize = 4096;

/// `(X, Y)` with `X` nonempty and matchable and `|Y| ≤ |X| / (2α)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContractingPair {
    pub clients: Vec<usize>,
    pub servers: Vec<usize>,
}

impl ContractingPair {
    /// True iff `client ∈ X` and `server ∉ Y`.
    pub fn deviates(&self, client: usize, server: usize) -> bool {
        self.clients.binary_search(&client).is_ok() && self.servers.binary_search(&server).is_err()
    }
}

fn check_alpha(alpha: Rational) -> Result<()> {
    if alpha < Rational::one() {
        return Err(Error::input(format!(
            "alpha must be at least 1, got {alpha}"
        )));
    }
    Ok(())
}

fn check_caps(g: &BipartiteGraph) -> Result<()> {
    Error::cap("client count", LP_CLIENT_CAP, g.n_left())?;
    Error::cap("server count", LP_SERVER_CAP, g.n_right())
}

/// `⌊|X| / (2α)⌋`, the largest allowed `|Y|`.
fn y_limit(x_size: usize, alpha: Rational) -> usize {
    floor_usize(Rational::from_integer(x_size as i64) / (alpha * 2))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn half(size: usize) -> BigRational {
    BigRational::new(BigInt::from(size), BigInt::from(2))
}

/// Every contracting pair, ordered by client mask and then server mask.
pub fn enumerate_contracting_pairs(
    g: &BipartiteGraph,
    alpha: Rational,
) -> Result<Vec<ContractingPair>> {
    check_alpha(alpha)?;
    check_caps(g)?;
    let table = matchable_subsets(g)?;
    let mut out = Vec::new();
    for x_mask in 1..table.len() as u64 {
        if !table[x_mask as usize] {
            continue;
        }
        let limit = y_limit(x_mask.count_ones() as usize, alpha);
        let clients = mask_to_clients(x_mask);
        for y_mask in 0u64..1 << g.n_right() {
            if y_mask.count_ones() as usize <= limit {
                out.push(ContractingPair {
                    clients: clients.clone(),
                    servers: mask_to_clients(y_mask),
                });
            }
        }
    }
    Ok(out)
}

/// Number of contracting pairs, without listing them.
pub fn count_contracting_pairs(g: &BipartiteGraph, alpha: Rational) -> Result<usize> {
    check_alpha(alpha)?;
    check_caps(g)?;
    let table = matchable_subsets(g)?;
    Ok((1..table.len())
        .filter(|&m| table[m])
        .map(|m| {
            let limit = y_limit(m.count_ones() as usize, alpha);
            (0..=limit).map(|j| binomial(g.n_right(), j)).sum::<usize>()
        })
        .sum())
}

/// Optimal primal values, aligned with `g.edges()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub alpha: Rational,
    pub objective: BigRational,
    pub x: Vec<BigRational>,
}

/// Optimal dual values, aligned with `pairs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSolution {
    pub alpha: Rational,
    pub objective: BigRational,
    pub pairs: Vec<ContractingPair>,
    pub y: Vec<BigRational>,
}

impl DualSolution {
    /// `(pair, y)` for the nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = (&ContractingPair, &BigRational)> {
        self.pairs.iter().zip(&self.y).filter(|(_, y)| !y.is_zero())
    }
}

/// Server weights `w_X(s) = Σ_{c ∈ X} x_{cs}` and their total.
fn server_mass(g: &BipartiteGraph, x_mask: u64, x: &[BigRational]) -> Vec<BigRational> {
    let mut mass = vec![BigRational::zero(); g.n_right()];
    for (e, &(c, s)) in g.edges().iter().enumerate() {
        if x_mask >> c & 1 == 1 {
            mass[s] += &x[e];
        }
    }
    mass
}

/// True iff `x ≥ 0` satisfies every constraint of `LP(G, α)`.
///
/// For each matchable `X` only the worst `Y` matters: the `⌊|X|/(2α)⌋`
/// servers carrying the most mass from `X`.
pub fn primal_feasible(g: &BipartiteGraph, alpha: Rational, x: &[BigRational]) -> Result<bool> {
    check_alpha(alpha)?;
    if x.len() != g.num_edges() {
        return Err(Error::input(format!(
            "solution has {} values for {} edges",
            x.len(),
            g.num_edges()
        )));
    }
    if x.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    let table = matchable_subsets(g)?;
    for x_mask in 1..table.len() as u64 {
        if !table[x_mask as usize] {
            continue;
        }
        let size = x_mask.count_ones() as usize;
        let mut mass = server_mass(g, x_mask, x);
        mass.sort_unstable_by(|a, b| b.cmp(a));
        let kept: BigRational = mass.iter().skip(y_limit(size, alpha)).sum();
        if kept < half(size) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves `LP(G, α)`: minimize `Σ x_e` subject to `Σ_{E(X, R∖Y)} x_e ≥ |X|/2`
/// for every contracting pair.
///
/// Only the strongest constraints are handed to the solver: for each `X`, the
/// sets `Y ⊆ N(X)` of the largest allowed size. Any other `Y` gives a weaker
/// row.
pub fn solve_primal(g: &BipartiteGraph, alpha: Rational) -> Result<LpSolution> {
    check_alpha(alpha)?;
    check_caps(g)?;
    let table = matchable_subsets(g)?;
    let mut rows: Vec<(u64, u64)> = Vec::new();
    for x_mask in 1..table.len() as u64 {
        if !table[x_mask as usize] {
            continue;
        }
        let limit = y_limit(x_mask.count_ones() as usize, alpha);
        let nbrs = g.neighborhood(&mask_to_clients(x_mask));
        if limit >= nbrs.len() {
            return Err(Error::Infeasible(format!(
                "clients {:?} can lose their whole neighborhood to Y",
                mask_to_clients(x_mask)
            )));
        }
        Error::cap(
            "primal constraint count",
            LP_SIZE_CAP,
            rows.len() + binomial(nbrs.len(), limit),
        )?;
        for pick in 0u64..1 << nbrs.len() {
            if pick.count_ones() as usize == limit {
                let y_mask = mask_to_clients(pick)
                    .iter()
                    .fold(0u64, |m, &i| m | 1 << nbrs[i]);
                rows.push((x_mask, y_mask));
            }
        }
    }
    let edges = g.edges();
    let a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|&(xm, ym)| {
            edges
                .iter()
                .map(|&(c, s)| {
                    if xm >> c & 1 == 1 && ym >> s & 1 == 0 {
                        -BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let b: Vec<BigRational> = rows
        .iter()
        .map(|&(xm, _)| -half(xm.count_ones() as usize))
        .collect();
    let c = vec![-BigRational::one(); edges.len()];
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { value, x, .. } => Ok(LpSolution {
            alpha,
            objective: -value,
            x,
        }),
        LpOutcome::Infeasible => Err(Error::Infeasible("primal LP has no feasible point".into())),
        LpOutcome::Unbounded => unreachable!("a minimization over x ≥ 0 of Σ x is bounded"),
    }
}

/// True iff `y ≥ 0` over contracting pairs of `(G, α)` meets every edge
/// constraint `Σ_{pairs e deviates from} y ≤ 1`.
pub fn dual_feasible(
    g: &BipartiteGraph,
    alpha: Rational,
    pairs: &[ContractingPair],
    y: &[BigRational],
) -> Result<bool> {
    check_alpha(alpha)?;
    if pairs.len() != y.len() {
        return Err(Error::input("dual values and pairs differ in length"));
    }
    let table = matchable_subsets(g)?;
    for p in pairs {
        let in_range =
            p.clients.iter().all(|&c| c < g.n_left()) && p.servers.iter().all(|&s| s < g.n_right());
        if !in_range
            || p.clients.is_empty()
            || !table[clients_to_mask(&p.clients) as usize]
            || p.servers.len() > y_limit(p.clients.len(), alpha)
        {
            return Ok(false);
        }
    }
    if y.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    Ok(g.edges().iter().all(|&(c, s)| {
        let load: BigRational = pairs
            .iter()
            .zip(y)
            .filter(|(p, _)| p.deviates(c, s))
            .map(|(_, v)| v)
            .sum();
        load <= BigRational::one()
    }))
}

/// Solves the dual: maximize `½ Σ |X| · y_{X,Y}` subject to, for every edge,
/// `Σ y ≤ 1` over the pairs the edge deviates from.
pub fn solve_dual(g: &BipartiteGraph, alpha: Rational) -> Result<DualSolution> {
    Error::cap(
        "contracting pair count",
        LP_SIZE_CAP,
        count_contracting_pairs(g, alpha)?,
    )?;
    let pairs = enumerate_contracting_pairs(g, alpha)?;
    let a: Vec<Vec<BigRational>> = g
        .edges()
        .iter()
        .map(|&(c, s)| {
            pairs
                .iter()
                .map(|p| {
                    if p.deviates(c, s) {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let b = vec![BigRational::one(); g.num_edges()];
    let c: Vec<BigRational> = pairs.iter().map(|p| half(p.clients.len())).collect();
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { value, x, .. } => Ok(DualSolution {
            alpha,
            objective: value,
            pairs,
            y: x,
        }),
        // Every pair has a deviating matching edge, so each y is capped by 1.
        LpOutcome::Unbounded | LpOutcome::Infeasible => {
            unreachable!("the dual is feasible at 0 and bounded")
        }
    }
}

/// Keeps each edge independently with probability `min(10 · ln(n) · x_e, 1)`,
/// `n = |L|`, where `x` is feasible for `LP(G, α/2)`.
pub fn round_primal(
    g: &BipartiteGraph,
    alpha: Rational,
    sol: &LpSolution,
    seed: u64,
) -> Result<BipartiteGraph> {
    if g.n_left() < 2 {
        return Err(Error::input("primal rounding needs at least two clients"));
    }
    if alpha < Rational::from_integer(2) {
        return Err(Error::input(format!(
            "primal rounding needs alpha >= 2 so that alpha/2 >= 1, got {alpha}"
        )));
    }
    if !primal_feasible(g, alpha / 2, &sol.x)? {
        return Err(Error::precondition(format!(
            "solution is not feasible for LP(G, {})",
            alpha / 2
        )));
    }
    let p = 10.0 * (g.n_left() as f64).ln();
    let mut rng = rng_from_seed(seed);
    let keep: Vec<bool> = sol
        .x
        .iter()
        .map(|x| rng.random_bool((p * big_to_f64(x)).min(1.0)))
        .collect();
    Ok(g.edge_subgraph(|e| keep[e]))
}

/// Output of [`round_dual`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualRounding {
    pub graph: BipartiteGraph,
    /// The good matchings, in pair order.
    pub decomposition: MatchingDecomposition,
    /// Indices into the dual's pair list of the sampled pairs.
    pub sampled: Vec<usize>,
    /// Indices of the sampled pairs whose matching was kept.
    pub good: Vec<usize>,
    /// `(sampled pair, edge of its trimmed matching)` incidences.
    pub incidences: usize,
    /// Incidences whose edge turned out overloaded.
    pub overloaded_incidences: usize,
}

/// Rounds a dual solution into a Matching-Contractor.
///
/// Each pair is sampled with probability `y/10`. A sampled `(X, Y)` takes
/// the fixed matching of `X` (lexicographically smallest saturating one),
/// drops edges into `Y`, drops edges that deviate from two sampled pairs,
/// and is kept if at least `|X|/2` edges survive.
pub fn round_dual(
    g: &BipartiteGraph,
    alpha: Rational,
    sol: &DualSolution,
    seed: u64,
) -> Result<DualRounding> {
    if alpha < Rational::from_integer(2) {
        return Err(Error::input(format!(
            "dual rounding needs alpha >= 2, got {alpha}"
        )));
    }
    if !dual_feasible(g, alpha, &sol.pairs, &sol.y)? {
        return Err(Error::precondition(format!(
            "dual solution is not feasible for (G, {alpha})"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let sampled: Vec<usize> = sol
        .y
        .iter()
        .enumerate()
        .filter_map(|(i, y)| {
            rng.random_bool((big_to_f64(y) / 10.0).min(1.0))
                .then_some(i)
        })
        .collect();

    let mut fixed: HashMap<&[usize], Matching> = HashMap::new();
    let mut trimmed: Vec<Vec<(usize, usize)>> = Vec::with_capacity(sampled.len());
    for &i in &sampled {
        let pair = &sol.pairs[i];
        if !fixed.contains_key(pair.clients.as_slice()) {
            let m = lex_min_saturating(g, &pair.clients)?.expect("contracting pairs are matchable");
            fixed.insert(&pair.clients, m);
        }
        let m = &fixed[pair.clients.as_slice()];
        trimmed.push(
            m.pairs()
                .iter()
                .copied()
                .filter(|(_, s)| pair.servers.binary_search(s).is_err())
                .collect(),
        );
    }
    let overloaded = |c: usize, s: usize| {
        sampled
            .iter()
            .filter(|&&i| sol.pairs[i].deviates(c, s))
            .take(2)
            .count()
            == 2
    };

    let mut incidences = 0;
    let mut overloaded_incidences = 0;
    let mut good = Vec::new();
    let mut matchings = Vec::new();
    for (&i, edges) in sampled.iter().zip(&trimmed) {
        incidences += edges.len();
        let kept: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(c, s)| !overloaded(c, s))
            .collect();
        overloaded_incidences += edges.len() - kept.len();
        if 2 * kept.len() >= sol.pairs[i].clients.len() {
            good.push(i);
            matchings.push(Matching::new(kept)?);
        }
    }
    let decomposition = MatchingDecomposition::new(g.n_left(), g.n_right(), matchings)?;
    Ok(DualRounding {
        graph: decomposition.support_graph(),
        decomposition,
        sampled,
        good,
        incidences,
        overloaded_incidences,
    })
}

/// Output of [`reduce_servers`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerReduction {
    pub graph: BipartiteGraph,
    /// Original index of each remaining server.
    pub kept_servers: Vec<usize>,
}

/// Keeps each client's `n = |L|` lowest-index edges, then deletes servers
/// left without edges and renumbers the rest in order.
pub fn reduce_servers(g: &BipartiteGraph) -> ServerReduction {
    let n = g.n_left();
    let capped: Vec<(usize, usize)> = (0..n)
        .flat_map(|c| g.neighbors(c).iter().take(n).map(move |&s| (c, s)))
        .collect();
    let mut kept_servers: Vec<usize> = capped.iter().map(|&(_, s)| s).collect();
    kept_servers.sort_unstable();
    kept_servers.dedup();
    let graph = BipartiteGraph::new(
        n,
        kept_servers.len(),
        capped
            .iter()
            .map(|&(c, s)| (c, kept_servers.binary_search(&s).expect("kept"))),
    )
    .expect("renumbering keeps edges distinct");
    ServerReduction {
        graph,
        kept_servers,
    }
}
