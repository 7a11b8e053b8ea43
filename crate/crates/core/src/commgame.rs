//! One-way two-party load balancing: the sparsifier protocol, the encoding
//! graphs used for the hard input distribution, and the recovery check.

use num_traits::One;
use rand::Rng;

use crate::contractor::{self, MatchingDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Assignment, BipartiteGraph, Matching};
use crate::loadbal::{optimal_assignment, optload, OptLoad};
use crate::ratio::Rational;
use crate::rng::rng_from_seed;
use crate::sparsifier::{is_sparsifier_operational, OPERATIONAL_CAP};

/// Server index of `v_b` in an encoding graph.
pub fn encoded_server(v: usize, bit: bool) -> usize {
    2 * v + usize::from(bit)
}

fn check_base(g0: &BipartiteGraph, d0: &MatchingDecomposition) -> Result<()> {
    if d0.n_left() != g0.n_left() || d0.n_right() != g0.n_right() || d0.support_graph() != *g0 {
        return Err(Error::input("decomposition does not match the base graph"));
    }
    if !d0.is_duplicate_free() {
        return Err(Error::input(
            "encoding needs each base edge in exactly one matching",
        ));
    }
    Ok(())
}

/// The encoding graph of `x` inside `G₀` and the induced decomposition.
///
/// `x` is indexed by the labeled edges of `D₀` in decomposition order. Base
/// edge `(u, v)` becomes `(u, v_0)` or `(u, v_1)` according to its bit.
pub fn encode(
    g0: &BipartiteGraph,
    d0: &MatchingDecomposition,
    x: &[bool],
) -> Result<(BipartiteGraph, MatchingDecomposition)> {
    check_base(g0, d0)?;
    if x.len() != d0.labeled_edge_count() {
        return Err(Error::input(format!(
            "bit string has length {} but the base has {} edges",
            x.len(),
            d0.labeled_edge_count()
        )));
    }
    let mut bits = x.iter();
    let matchings = d0
        .matchings()
        .iter()
        .map(|m| {
            Matching::new(
                m.pairs()
                    .iter()
                    .map(|&(u, v)| (u, encoded_server(v, *bits.next().expect("length checked")))),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let d = MatchingDecomposition::new(g0.n_left(), 2 * g0.n_right(), matchings)?;
    Ok((d.support_graph(), d))
}

/// One draw from the hard distribution over a fixed base contractor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedInstance {
    pub base_graph: BipartiteGraph,
    pub base_decomposition: MatchingDecomposition,
    pub alpha: Rational,
    /// One bit per labeled base edge, in decomposition order.
    pub x: Vec<bool>,
    /// Index of Bob's matching.
    pub i: usize,
    /// The encoding graph `G_x`, on `2|R₀|` servers.
    pub alice_graph: BipartiteGraph,
    /// The matchings of `G_x` induced by the base decomposition.
    pub decomposition: MatchingDecomposition,
    /// Saturates `L ∖ L(M_i)` using fresh servers `2|R₀|, 2|R₀| + 1, …`.
    pub bob_matching: Matching,
}

impl EncodedInstance {
    /// Servers in the combined game: encoding servers, then fresh ones.
    pub fn n_right(&self) -> usize {
        self.alice_graph.n_right() + self.bob_matching.len()
    }

    /// Alice's edges on the combined server set.
    pub fn alice_view(&self) -> BipartiteGraph {
        self.alice_graph
            .with_servers(self.n_right())
            .expect("fresh servers only add")
    }

    /// Bob's edges on the combined server set.
    pub fn bob_graph(&self) -> BipartiteGraph {
        BipartiteGraph::new(
            self.alice_graph.n_left(),
            self.n_right(),
            self.bob_matching.pairs().iter().copied(),
        )
        .expect("fresh servers are in range")
    }

    pub fn combined_graph(&self) -> BipartiteGraph {
        self.alice_view()
            .union(&self.bob_graph())
            .expect("same shape")
    }

    /// Bob's special matching `M_i` inside `G_x`.
    pub fn special_matching(&self) -> &Matching {
        &self.decomposition.matchings()[self.i]
    }

    /// Offset of `x_i` inside `x`.
    fn special_offset(&self) -> usize {
        self.decomposition.matchings()[..self.i]
            .iter()
            .map(Matching::len)
            .sum()
    }

    /// `(bit position, bit)` for every edge of `M_i` that `a` uses verbatim.
    pub fn recovered_bits(&self, a: &Assignment) -> Result<Vec<(usize, bool)>> {
        if !a.is_valid_on(&self.combined_graph()) {
            return Err(Error::input(
                "assignment is not valid on the combined graph",
            ));
        }
        let offset = self.special_offset();
        Ok(self
            .special_matching()
            .pairs()
            .iter()
            .enumerate()
            .filter(|&(_, &(u, s))| a.server_of(u) == Some(s))
            .map(|(j, &(_, s))| (offset + j, s % 2 == 1))
            .collect())
    }
}

/// Samples `x` and `i` uniformly and builds Bob's matching.
///
/// The base must be duplicate-free, verify as a `4α` contractor, and have all
/// matching sizes in `[r₀, 4/3 · r₀)` for its smallest size `r₀`.
pub fn sample_hard_instance(
    g0: &BipartiteGraph,
    d0: &MatchingDecomposition,
    alpha: Rational,
    seed: u64,
) -> Result<EncodedInstance> {
    check_base(g0, d0)?;
    if d0.is_empty() || d0.matchings().iter().any(Matching::is_empty) {
        return Err(Error::precondition(
            "base needs at least one matching and no empty ones",
        ));
    }
    let r0 = d0
        .matchings()
        .iter()
        .map(Matching::len)
        .min()
        .expect("nonempty");
    if d0.matchings().iter().any(|m| 3 * m.len() >= 4 * r0) {
        return Err(Error::precondition(format!(
            "matching sizes must lie in [{r0}, 4/3 * {r0})"
        )));
    }
    if !contractor::verify(g0, d0, alpha * 4)?.0 {
        return Err(Error::precondition(format!(
            "base does not verify as a contractor at 4 * alpha = {}",
            alpha * 4
        )));
    }
    let mut rng = rng_from_seed(seed);
    let x: Vec<bool> = (0..d0.labeled_edge_count()).map(|_| rng.random()).collect();
    let i = rng.random_range(0..d0.len());
    let (alice_graph, decomposition) = encode(g0, d0, &x)?;
    let special = decomposition.matchings()[i].clone();
    let fresh = 2 * g0.n_right();
    let bob_matching = Matching::new(
        (0..g0.n_left())
            .filter(|&u| special.partner(u).is_none())
            .enumerate()
            .map(|(j, u)| (u, fresh + j)),
    )?;
    Ok(EncodedInstance {
        base_graph: g0.clone(),
        base_decomposition: d0.clone(),
        alpha,
        x,
        i,
        alice_graph,
        decomposition,
        bob_matching,
    })
}

/// Fraction of `M_i`'s edges that `a` uses verbatim.
pub fn recovery_fraction(inst: &EncodedInstance, a: &Assignment) -> Result<Rational> {
    let recovered = inst.recovered_bits(a)?.len();
    let size = inst.special_matching().len();
    Ok(Rational::new(recovered as i64, size as i64))
}

/// How Alice thins her edges before sending them.
pub trait SparsifyStrategy {
    fn name(&self) -> String;
    fn sparsify(&self, g: &BipartiteGraph) -> Result<BipartiteGraph>;
}

/// Sends every edge.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl SparsifyStrategy for Identity {
    fn name(&self) -> String {
        "identity".into()
    }

    fn sparsify(&self, g: &BipartiteGraph) -> Result<BipartiteGraph> {
        Ok(g.clone())
    }
}

/// Keeps each edge independently with probability `p`.
#[derive(Debug, Clone, Copy)]
pub struct RandomSample {
    pub p: f64,
    pub seed: u64,
}

impl SparsifyStrategy for RandomSample {
    fn name(&self) -> String {
        format!("random(p={})", self.p)
    }

    fn sparsify(&self, g: &BipartiteGraph) -> Result<BipartiteGraph> {
        check_probability(self.p)?;
        let mut rng = rng_from_seed(self.seed);
        let keep: Vec<bool> = (0..g.num_edges())
            .map(|_| rng.random_bool(self.p))
            .collect();
        Ok(g.edge_subgraph(|e| keep[e]))
    }
}

/// Drops edges in index order whenever the rest stays an `α`-sparsifier.
#[derive(Debug, Clone, Copy)]
pub struct GreedyPrune {
    pub alpha: Rational,
}

impl SparsifyStrategy for GreedyPrune {
    fn name(&self) -> String {
        format!("greedy(alpha={})", self.alpha)
    }

    fn sparsify(&self, g: &BipartiteGraph) -> Result<BipartiteGraph> {
        Error::cap("client count", OPERATIONAL_CAP, g.n_left())?;
        let mut keep = vec![true; g.num_edges()];
        for e in 0..g.num_edges() {
            keep[e] = false;
            let h = g.edge_subgraph(|f| keep[f]);
            if !is_sparsifier_operational(g, &h, self.alpha)?.passes {
                keep[e] = true;
            }
        }
        Ok(g.edge_subgraph(|e| keep[e]))
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!(
            "probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolOutcome {
    /// Bob's assignment on `H_A ∪ G_B`, valid on `G_A ∪ G_B`.
    pub assignment: Assignment,
    pub message_edges: usize,
    pub message_bits: u64,
    pub max_load: usize,
    pub optload: usize,
    /// Whether `H_A` passed the operational `α`-sparsifier test, when `G_A`
    /// is small enough to check.
    pub alice_is_sparsifier: Option<bool>,
    /// `MAXLOAD / OPTLOAD(G_A ∪ G_B)`.
    pub ratio: Rational,
}

/// `⌈log₂ n⌉`, with 0 for `n ≤ 1`.
fn ceil_log2(n: usize) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

/// Alice sends `H_A = sparsify(G_A)`; Bob assigns every client optimally in
/// `H_A ∪ G_B`. When `H_A` is an `α`-sparsifier of `G_A` the ratio is at most
/// `α + 1`.
pub fn run_protocol(
    g_a: &BipartiteGraph,
    g_b: &BipartiteGraph,
    strategy: &dyn SparsifyStrategy,
    alpha: Rational,
) -> Result<ProtocolOutcome> {
    if !g_a.same_shape(g_b) {
        return Err(Error::input(
            "Alice's and Bob's graphs have different vertex sets",
        ));
    }
    let full = g_a.union(g_b)?;
    let clients = full.all_clients();
    let OptLoad::Value(best) = optload(&full, &clients)? else {
        return Err(Error::Infeasible(
            "some client has no edge in either graph".into(),
        ));
    };
    let h = strategy.sparsify(g_a)?;
    if !h.is_subgraph_of(g_a) {
        return Err(Error::input(format!(
            "strategy {} returned edges Alice does not have",
            strategy.name()
        )));
    }
    let alice_is_sparsifier = if g_a.n_left() <= OPERATIONAL_CAP {
        Some(is_sparsifier_operational(g_a, &h, alpha)?.passes)
    } else {
        None
    };
    let assignment = optimal_assignment(&h.union(g_b)?, &clients)?;
    let max_load = assignment.max_load();
    let bits_per_edge = ceil_log2(g_a.n_left() * g_a.n_right());
    Ok(ProtocolOutcome {
        message_edges: h.num_edges(),
        message_bits: h.num_edges() as u64 * u64::from(bits_per_edge),
        max_load,
        optload: best,
        alice_is_sparsifier,
        ratio: if best == 0 {
            Rational::one()
        } else {
            Rational::new(max_load as i64, best as i64)
        },
        assignment,
    })
}

/// How [`partition_edges`] splits the edges.
#[derive(Debug, Clone, Copy)]
pub enum PartitionMode<'a> {
    /// Each edge goes to Alice with probability `p`, otherwise to Bob.
    Random { p: f64 },
    /// Treat the graph as a base contractor: Alice gets an encoding graph and
    /// Bob the fresh matching, on the combined server set.
    HardInstance {
        decomposition: &'a MatchingDecomposition,
        alpha: Rational,
    },
}

/// Splits edges between the players. Returns `(G_A, G_B)` on common vertex sets.
pub fn partition_edges(
    g: &BipartiteGraph,
    mode: PartitionMode<'_>,
    seed: u64,
) -> Result<(BipartiteGraph, BipartiteGraph)> {
    match mode {
        PartitionMode::Random { p } => {
            check_probability(p)?;
            let mut rng = rng_from_seed(seed);
            let alice: Vec<bool> = (0..g.num_edges()).map(|_| rng.random_bool(p)).collect();
            Ok((
                g.edge_subgraph(|e| alice[e]),
                g.edge_subgraph(|e| !alice[e]),
            ))
        }
        PartitionMode::HardInstance {
            decomposition,
            alpha,
        } => {
            let inst = sample_hard_instance(g, decomposition, alpha, seed)?;
            Ok((inst.alice_view(), inst.bob_graph()))
        }
    }
}
