use lbsparse::commgame::{
    encode, partition_edges, recovery_fraction, run_protocol, sample_hard_instance, GreedyPrune,
    Identity, PartitionMode, RandomSample, SparsifyStrategy,
};
use lbsparse::contractor::{
    construct_with_budget, external_neighborhood_bound, gen_set_family, group_by_size,
    induced_violation, to_rs_graph, verify, FamilyMode, SetFamily, DEFAULT_EDGE_BUDGET,
};
use lbsparse::format::{
    parse_family_sets, parse_graph, parse_witness, serialize_graph, serialize_witness,
};
use lbsparse::loadbal::{for_each_assignment, optimal_assignment, optload, optload_hall, HALL_CAP};
use lbsparse::lp::{
    count_contracting_pairs, reduce_servers, round_dual, round_primal, solve_dual, solve_primal,
};
use lbsparse::rng::derive_seed;
use lbsparse::sparsifier::{
    brittleness_witness, expansion_profile, is_sparsifier_def, is_sparsifier_operational,
    violates_operational, SparsifierReport, OPERATIONAL_CAP,
};
use lbsparse::{
    Assignment, BipartiteGraph, Error, ExtRatio, MatchingDecomposition, OptLoad, Rational,
};
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::report::Report;
use crate::{new_report, write_file, CliError, Command, Inputs, Lens, Mode, Strategy, BUDGET_ENV};

type Outcome = Result<(Report, Option<Error>), CliError>;

pub(crate) fn dispatch(name: &str, command: &Command) -> Outcome {
    match command {
        Command::Optload(a) => optload_cmd(name, a),
        Command::VerifySparsifier(a) => verify_sparsifier(name, a),
        Command::VerifyMc(a) => verify_mc(name, a),
        Command::ConstructMc(a) => construct_mc(name, a),
        Command::GenFamily(a) => gen_family(name, a),
        Command::LpSolve(a) => lp_solve(name, a),
        Command::RoundPrimal(a) => round_primal_cmd(name, a),
        Command::RoundDual(a) => round_dual_cmd(name, a),
        Command::Brittleness(a) => brittleness(name, a),
        Command::HardDist(a) => hard_dist(name, a),
        Command::Protocol(a) => protocol(name, a),
        Command::RsConvert(a) => rs_convert(name, a),
        Command::ReduceServers(a) => reduce(name, a),
    }
}

fn graph(inputs: &mut Inputs, path: &std::path::Path) -> Result<BipartiteGraph, CliError> {
    Ok(parse_graph(&inputs.read(path)?)?)
}

fn witness(inputs: &mut Inputs, path: &std::path::Path) -> Result<MatchingDecomposition, CliError> {
    Ok(parse_witness(&inputs.read(path)?)?)
}

fn list(items: &[usize]) -> Value {
    let parts: Vec<String> = items.iter().map(usize::to_string).collect();
    Value::String(parts.join(" "))
}

fn text(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn optload_value(v: OptLoad) -> Value {
    match v {
        OptLoad::Value(d) => json!(d),
        OptLoad::Infeasible => text("infeasible"),
    }
}

fn optload_cmd(name: &str, a: &crate::OptloadArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let g = graph(&mut inputs, &a.graph)?;
    let clients: Vec<usize> = match &a.clients {
        None => g.all_clients(),
        Some(s) if s.trim().is_empty() => Vec::new(),
        Some(s) => s
            .split(',')
            .map(|c| {
                c.trim()
                    .parse()
                    .map_err(|_| Error::Input(format!("`{c}` is not a client index")))
            })
            .collect::<Result<_, _>>()?,
    };
    let value = optload(&g, &clients)?;
    let hall = if clients.len() <= HALL_CAP {
        optload_value(optload_hall(&g, &clients)?)
    } else {
        Value::Null
    };
    let assigned = match value {
        OptLoad::Value(_) => json!(optimal_assignment(&g, &clients)?.max_load()),
        OptLoad::Infeasible => Value::Null,
    };
    let mut r = new_report(name, None, a, &inputs);
    r.push(vec![
        ("n_left", json!(g.n_left())),
        ("n_right", json!(g.n_right())),
        ("edges", json!(g.num_edges())),
        ("client_count", json!(clients.len())),
        ("optload", optload_value(value)),
        ("optload_hall", hall),
        ("assignment_max_load", assigned),
    ]);
    Ok((r, None))
}

fn sparsifier_row(lens: &str, rep: &SparsifierReport) -> Vec<(&'static str, Value)> {
    vec![
        ("lens", text(lens)),
        ("passes", json!(rep.passes)),
        ("worst_ratio", text(rep.worst_ratio)),
        ("witness", rep.witness.as_deref().map_or(Value::Null, list)),
    ]
}

fn verify_sparsifier(name: &str, a: &crate::VerifySparsifierArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let g = graph(&mut inputs, &a.graph)?;
    let h = graph(&mut inputs, &a.sparsifier)?;
    let mut r = new_report(name, None, a, &inputs);
    let all = a.lens == Lens::All;
    if all || a.lens == Lens::Def {
        r.push(sparsifier_row("def", &is_sparsifier_def(&g, &h, a.alpha)?));
    }
    if all || a.lens == Lens::Operational {
        r.push(sparsifier_row(
            "operational",
            &is_sparsifier_operational(&g, &h, a.alpha)?,
        ));
    }
    if all || a.lens == Lens::Expansion {
        // Sufficient condition: ψ_H(X) ≥ (2/α) · min(ψ_G(X), 1) for every X.
        let profile = expansion_profile(&g, &h)?;
        let factor = Rational::from_integer(2) / a.alpha;
        let worst = profile
            .rows
            .iter()
            .filter(|row| row.psi_g > Rational::from_integer(0))
            .map(|row| (row.psi_h / row.psi_g.min(Rational::one()), row))
            .min_by(|x, y| x.0.cmp(&y.0));
        let violation = profile.lower_bound_violation(factor);
        r.push(vec![
            ("lens", text("expansion")),
            ("passes", json!(violation.is_none())),
            (
                "worst_ratio",
                worst.map_or(Value::Null, |(ratio, _)| text(ratio)),
            ),
            (
                "witness",
                violation.map_or(Value::Null, |row| list(&row.clients)),
            ),
        ]);
    }
    Ok((r, None))
}

fn contractor_fields(
    d: &MatchingDecomposition,
    passes: bool,
    alpha: ExtRatio,
) -> Vec<(&'static str, Value)> {
    vec![
        ("n_left", json!(d.n_left())),
        ("n_right", json!(d.n_right())),
        ("matchings", json!(d.len())),
        ("labeled_edges", json!(d.labeled_edge_count())),
        ("passes", json!(passes)),
        ("alpha_achieved", text(alpha)),
    ]
}

fn verify_mc(name: &str, a: &crate::VerifyMcArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let g = graph(&mut inputs, &a.graph)?;
    let d = witness(&mut inputs, &a.witness)?;
    let (passes, cert) = verify(&g, &d, a.alpha)?;
    let worst = cert
        .per_matching
        .iter()
        .enumerate()
        .filter(|(_, &(size, _))| size > 0)
        .min_by_key(|(_, &(size, ext))| ExtRatio::of(size, ext))
        .map_or(Value::Null, |(i, _)| json!(i));
    let mut r = new_report(name, None, a, &inputs);
    let mut row = contractor_fields(&d, passes, cert.alpha_achieved);
    row.push(("duplicate_free", json!(d.is_duplicate_free())));
    row.push(("worst_matching", worst));
    r.push(row);
    Ok((r, None))
}

fn budget() -> Result<usize, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{BUDGET_ENV} must be a nonnegative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_EDGE_BUDGET),
    }
}

fn construct_mc(name: &str, a: &crate::ConstructMcArgs) -> Outcome {
    let family = match (&a.family, a.delta, a.t, a.seed) {
        (Some(sets), None, None, None) => SetFamily::new(a.k, a.k, &parse_family_sets(sets)?)?,
        (None, Some(delta), Some(t), Some(seed)) => {
            gen_set_family(a.k, delta, t, seed, a.max_attempts, FamilyMode::Resample)?
                .map_err(Error::from)?
        }
        _ => {
            return Err(CliError::Usage(
                "give either --family, or all of --delta, --t and --seed".into(),
            ))
        }
    };
    let c = construct_with_budget(a.w, a.k, &family, budget()?)?;
    let (_, cert) = verify(&c.graph, &c.decomposition, Rational::one())?;
    let max_bound = (0..family.len())
        .map(|i| external_neighborhood_bound(&family, a.w, i))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    if let Some(path) = &a.witness_out {
        write_file(path, &serialize_witness(&c.decomposition))?;
    }
    if let Some(path) = &a.graph_out {
        write_file(path, &serialize_graph(&c.graph))?;
    }
    let mut r = new_report(name, a.seed, a, &Inputs::default());
    let mut row = vec![
        ("family_used", text(&family)),
        ("family_size", json!(family.len())),
    ];
    row.extend(contractor_fields(
        &c.decomposition,
        true,
        cert.alpha_achieved,
    ));
    row.push(("distinct_edges", json!(c.distinct_edges())));
    row.push(("max_external_bound", json!(max_bound)));
    r.push(row);
    Ok((r, None))
}

fn gen_family(name: &str, a: &crate::GenFamilyArgs) -> Outcome {
    let mode = match a.mode {
        Mode::Resample => FamilyMode::Resample,
        Mode::Greedy => FamilyMode::Greedy,
    };
    let result = gen_set_family(a.k, a.delta, a.t, a.seed, a.max_attempts, mode)?;
    let mut r = new_report(name, Some(a.seed), a, &Inputs::default());
    let (family, failure) = match result {
        Ok(f) => (f, None),
        Err(failure) => (failure.best.clone(), Some(Error::from(failure))),
    };
    r.push(vec![
        ("success", json!(failure.is_none())),
        ("bound", json!(family.bound())),
        ("size", json!(family.len())),
        ("max_intersection", json!(family.max_intersection())),
        ("family", text(&family)),
    ]);
    Ok((r, failure))
}

fn lp_solve(name: &str, a: &crate::LpSolveArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let g = graph(&mut inputs, &a.graph)?;
    let primal = solve_primal(&g, a.alpha)?;
    let dual = solve_dual(&g, a.alpha)?;
    let max_y = dual.y.iter().max().cloned();
    let mut r = new_report(name, None, a, &inputs);
    r.push(vec![
        ("edges", json!(g.num_edges())),
        (
            "contracting_pairs",
            json!(count_contracting_pairs(&g, a.alpha)?),
        ),
        ("primal", text(&primal.objective)),
        ("dual", text(&dual.objective)),
        ("gap", text(&primal.objective - &dual.objective)),
        ("max_dual_entry", max_y.map_or(Value::Null, text)),
    ]);
    Ok((r, None))
}

fn round_primal_cmd(name: &str, a: &crate::RoundPrimalArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let g = graph(&mut inputs, &a.graph)?;
    if a.alpha < Rational::from_integer(2) {
        return Err(Error::Precondition(format!(
            "primal rounding needs alpha >= 2, got {}",
            a.alpha
        ))
        .into());
    }
    let sol = solve_primal(&g, a.alpha / 2)?;
    let bound = 20.0 * (g.n_left() as f64).ln() * sol.objective.to_f64().unwrap_or(f64::INFINITY);
    let mut r = new_report(name, Some(a.seed), a, &inputs);
    for j in 0..a.trials {
        let seed = derive_seed(a.seed, j);
        let h = round_primal(&g, a.alpha, &sol, seed)?;
        if j == 0 {
            if let Some(path) = &a.graph_out {
                write_file(path, &serialize_graph(&h))?;
            }
        }
        let passes = if g.n_left() <= OPERATIONAL_CAP {
            json!(is_sparsifier_operational(&g, &h, a.alpha)?.passes)
        } else {
            Value::Null
        };
        r.push(vec![
            ("trial", json!(j)),
            ("trial_seed", json!(seed)),
            ("lp_half_alpha", text(&sol.objective)),
            ("edge_bound", text(format!("{bound:.6}"))),
            ("edges", json!(h.num_edges())),
            ("within_bound", json!(h.num_edges() as f64 <= bound)),
            ("passes_operational", passes),
        ]);
    }
    Ok((r, None))
}

fn round_dual_cmd(name: &str, a: &crate::RoundDualArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let g = graph(&mut inputs, &a.graph)?;
    let dual = solve_dual(&g, a.alpha)?;
    let mut r = new_report(name, Some(a.seed), a, &inputs);
    for j in 0..a.trials {
        let seed = derive_seed(a.seed, j);
        let out = round_dual(&g, a.alpha, &dual, seed)?;
        if j == 0 {
            if let Some(path) = &a.witness_out {
                write_file(path, &serialize_witness(&out.decomposition))?;
            }
        }
        let (verified, _) = verify(&out.graph, &out.decomposition, a.alpha)?;
        r.push(vec![
            ("trial", json!(j)),
            ("trial_seed", json!(seed)),
            ("lp", text(&dual.objective)),
            ("sampled", json!(out.sampled.len())),
            ("good", json!(out.good.len())),
            ("edges", json!(out.graph.num_edges())),
            ("verified", json!(verified)),
            ("incidences", json!(out.incidences)),
            ("overloaded_incidences", json!(out.overloaded_incidences)),
        ]);
    }
    Ok((r, None))
}

fn brittleness(name: &str, a: &crate::BrittlenessArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let g = graph(&mut inputs, &a.graph)?;
    let d = witness(&mut inputs, &a.witness)?;
    let indices: Vec<usize> = match a.index {
        Some(i) => vec![i],
        None => (0..d.len())
            .filter(|&i| !d.matchings()[i].is_empty())
            .collect(),
    };
    let mut r = new_report(name, None, a, &inputs);
    for i in indices {
        let w = brittleness_witness(&g, &d, a.alpha, i)?;
        let full = if g.n_left() <= OPERATIONAL_CAP {
            json!(is_sparsifier_operational(&g, &w.sparsified, a.alpha)?.passes)
        } else {
            Value::Null
        };
        r.push(vec![
            ("index", json!(i)),
            ("matching_size", json!(d.matchings()[i].len())),
            ("removed", json!(w.removed.len())),
            (
                "neighbors_after",
                json!(w.sparsified.neighborhood(&w.clients).len()),
            ),
            (
                "violates",
                json!(violates_operational(
                    &g,
                    &w.sparsified,
                    a.alpha,
                    &w.clients
                )?),
            ),
            ("thinned_passes_operational", full),
        ]);
    }
    Ok((r, None))
}

/// Largest client count for exhaustive recovery checks.
const EXHAUSTIVE_CLIENTS: usize = 10;

fn hard_dist(name: &str, a: &crate::HardDistArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let mut g0 = graph(&mut inputs, &a.graph)?;
    let mut d0 = witness(&mut inputs, &a.witness)?;
    if a.group {
        d0 = group_by_size(&d0)?.1;
        g0 = d0.support_graph();
    }
    if a.exhaustive && g0.n_left() > EXHAUSTIVE_CLIENTS {
        return Err(Error::SizeCap {
            what: "client count",
            cap: EXHAUSTIVE_CLIENTS,
            got: g0.n_left(),
        }
        .into());
    }
    let mut r = new_report(name, Some(a.seed), a, &inputs);
    for j in 0..a.trials {
        let seed = derive_seed(a.seed, j);
        let inst = sample_hard_instance(&g0, &d0, a.alpha, seed)?;
        let (gx, dx) = encode(&g0, &d0, &inst.x)?;
        let reverifies = verify(&gx, &dx, a.alpha * 2)?.0;
        let combined = inst.combined_graph();
        let clients = combined.all_clients();
        let best = optimal_assignment(&combined, &clients)?;
        let (min_recovery, count) = if a.exhaustive {
            let cap = a.alpha.floor().to_integer().max(1) as usize;
            let mut min: Option<Rational> = None;
            let mut failure = None;
            let count = for_each_assignment(&combined, &clients, cap, |servers| {
                let pairs = clients.iter().copied().zip(servers.iter().copied());
                match Assignment::new(&combined, pairs)
                    .and_then(|asg| recovery_fraction(&inst, &asg))
                {
                    Ok(f) => min = Some(min.map_or(f, |m| m.min(f))),
                    Err(e) => failure = Some(e),
                }
            })?;
            if let Some(e) = failure {
                return Err(e.into());
            }
            (min.map_or(Value::Null, text), json!(count))
        } else {
            (Value::Null, Value::Null)
        };
        r.push(vec![
            ("trial", json!(j)),
            ("trial_seed", json!(seed)),
            ("special_index", json!(inst.i)),
            ("special_size", json!(inst.special_matching().len())),
            ("bob_edges", json!(inst.bob_matching.len())),
            ("encoding_reverifies", json!(reverifies)),
            (
                "optload_combined",
                optload_value(optload(&combined, &clients)?),
            ),
            (
                "recovery_of_optimal",
                text(recovery_fraction(&inst, &best)?),
            ),
            ("min_recovery", min_recovery),
            ("assignments", count),
        ]);
    }
    Ok((r, None))
}

fn protocol(name: &str, a: &crate::ProtocolArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let g = graph(&mut inputs, &a.graph)?;
    let mut r = new_report(name, Some(a.seed), a, &inputs);
    for j in 0..a.trials {
        let seed = derive_seed(a.seed, j);
        let (g_a, g_b) =
            partition_edges(&g, PartitionMode::Random { p: a.p }, derive_seed(seed, 0))?;
        let strategy: Box<dyn SparsifyStrategy> = match a.strategy {
            Strategy::Identity => Box::new(Identity),
            Strategy::Greedy => Box::new(GreedyPrune { alpha: a.alpha }),
            Strategy::Sample => Box::new(RandomSample {
                p: a.sample_p,
                seed: derive_seed(seed, 1),
            }),
        };
        let out = run_protocol(&g_a, &g_b, strategy.as_ref(), a.alpha)?;
        r.push(vec![
            ("trial", json!(j)),
            ("trial_seed", json!(seed)),
            ("strategy_name", text(strategy.name())),
            ("alice_edges", json!(g_a.num_edges())),
            ("bob_edges", json!(g_b.num_edges())),
            ("message_edges", json!(out.message_edges)),
            ("message_bits", json!(out.message_bits)),
            ("max_load", json!(out.max_load)),
            ("optload", json!(out.optload)),
            ("ratio", text(out.ratio)),
            (
                "alice_is_sparsifier",
                out.alice_is_sparsifier.map_or(Value::Null, Value::from),
            ),
            ("within_bound", json!(out.ratio <= a.alpha + 1)),
        ]);
    }
    Ok((r, None))
}

fn rs_convert(name: &str, a: &crate::RsConvertArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let g = graph(&mut inputs, &a.graph)?;
    let d = witness(&mut inputs, &a.witness)?;
    let rs = to_rs_graph(&g, &d, a.alpha)?;
    if let Some(path) = &a.witness_out {
        write_file(path, &serialize_witness(&rs.decomposition))?;
    }
    if let Some(path) = &a.graph_out {
        write_file(path, &serialize_graph(&rs.graph))?;
    }
    let mut r = new_report(name, None, a, &inputs);
    r.push(vec![
        ("input_matchings", json!(d.len())),
        ("kept_matchings", json!(rs.decomposition.len())),
        ("size", json!(rs.size)),
        ("edges", json!(rs.graph.num_edges())),
        (
            "induced",
            json!(induced_violation(&rs.graph, &rs.decomposition).is_none()),
        ),
        ("source", list(&rs.source)),
    ]);
    Ok((r, None))
}

fn reduce(name: &str, a: &crate::ReduceServersArgs) -> Outcome {
    let mut inputs = Inputs::default();
    let g = graph(&mut inputs, &a.graph)?;
    let red = reduce_servers(&g);
    if let Some(path) = &a.graph_out {
        write_file(path, &serialize_graph(&red.graph))?;
    }
    let mut r = new_report(name, None, a, &inputs);
    r.push(vec![
        ("n_left", json!(g.n_left())),
        ("n_right_before", json!(g.n_right())),
        ("n_right_after", json!(red.graph.n_right())),
        ("edges_before", json!(g.num_edges())),
        ("edges_after", json!(red.graph.num_edges())),
    ]);
    Ok((r, None))
}
