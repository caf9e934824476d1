//! Acceptance criteria, one line of output each. Run with
//! `cargo test -p conngame-cli --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use conngame::number::{ratio, tolerance};
use conngame::reductions::{self, random, SetCoverInstance, VertexCoverInstance};
use conngame::stability::{self, Imputation};
use conngame::{
    classify, indices, oracle, tree, ApproxParams, Coalition, ConnectivityDomain, Number,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Check, Option<u64>); 9] = [
        (
            "tree closed forms equal exact indices",
            tree_closed_forms,
            Some(60),
        ),
        ("set-cover count identity", setcover_identity, Some(60)),
        (
            "vertex-cover excess identity",
            vertexcover_identity,
            Some(120),
        ),
        ("core characterization", core_characterization, None),
        ("tree stability", tree_stability, None),
        ("axioms", axioms, None),
        ("Monte Carlo calibration", mc_calibration, Some(60)),
        ("worked exact values", worked_values, None),
        ("CLI determinism", cli_determinism, None),
    ];
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(limit)) if elapsed > Duration::from_secs(*limit) => Err(format!(
                "took {:.1} s, limit {limit} s",
                elapsed.as_secs_f64()
            )),
            (o, _) => o,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {}: {status} {name} ({:.2} s) {detail}",
            k + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact(v: &conngame::IndexVector) -> Vec<BigRational> {
    v.exact_values().expect("exact index")
}

fn non_degenerate(domain: &ConnectivityDomain) -> bool {
    !classify(domain).is_degenerate()
}

/// Non-degenerate random trees, resampling degenerate draws.
fn tree_corpus(count: usize, max_agents: usize, first_seed: u64) -> Vec<ConnectivityDomain> {
    (first_seed..)
        .map(|seed| {
            oracle::random_tree_domain(seed, 4 + (seed as usize % (max_agents + 4)), max_agents)
        })
        .filter(non_degenerate)
        .take(count)
        .collect()
}

/// Random general domains with at most 12 agents, plus the small fixtures.
fn general_corpus() -> Vec<ConnectivityDomain> {
    let mut corpus: Vec<ConnectivityDomain> = (0..60)
        .map(|seed| oracle::random_domain(1_000 + seed, 5 + (seed as usize % 10), 12))
        .collect();
    corpus.push(cycle4());
    corpus.push(path4());
    for seed in 0..10 {
        let inst = random::graph(seed, 6);
        corpus.push(reductions::vertexcover_to_ecm(&inst).unwrap().0);
    }
    corpus
}

fn cycle4() -> ConnectivityDomain {
    ConnectivityDomain::builder(4)
        .primary([0, 2])
        .standard([1, 3])
        .edges([(0, 1), (1, 2), (2, 3), (3, 0)])
        .build()
        .unwrap()
}

fn path4() -> ConnectivityDomain {
    ConnectivityDomain::builder(4)
        .primary([0, 3])
        .standard([1, 2])
        .edges([(0, 1), (1, 2), (2, 3)])
        .build()
        .unwrap()
}

fn tree_closed_forms() -> Result<String, String> {
    let trees = tree_corpus(200, 14, 0);
    let mut largest = 0;
    for (k, domain) in trees.iter().enumerate() {
        largest = largest.max(domain.agent_count());
        let tb = exact(&tree::tree_banzhaf(domain).map_err(|e| e.to_string())?);
        let ts = exact(&tree::tree_shapley(domain).map_err(|e| e.to_string())?);
        let eb = exact(&indices::banzhaf_exact(domain).unwrap());
        let es = exact(&indices::shapley_exact(domain).unwrap());
        ensure(tb == eb, || format!("tree {k}: Banzhaf {tb:?} != {eb:?}"))?;
        ensure(ts == es, || format!("tree {k}: Shapley {ts:?} != {es:?}"))?;
    }
    Ok(format!("[{} trees, up to {largest} agents]", trees.len()))
}

/// Set covers counted directly over subsets of sets.
fn covers_by_subsets(inst: &SetCoverInstance) -> u64 {
    let m = inst.sets().len();
    (0u64..1 << m)
        .filter(|mask| {
            (0..inst.universe())
                .all(|item| (0..m).any(|s| mask >> s & 1 == 1 && inst.sets()[s].contains(&item)))
        })
        .count() as u64
}

fn setcover_identity() -> Result<String, String> {
    let mut instances: Vec<SetCoverInstance> =
        (0..100).map(|seed| random::setcover(seed, 9, 8)).collect();
    instances.push(SetCoverInstance::four_set_example());
    let mut nonzero = 0;
    for (k, inst) in instances.iter().enumerate() {
        let (domain, target) = reductions::setcover_to_cg(inst);
        let m = domain.agent_count();
        let beta = exact(&indices::banzhaf_exact(&domain).unwrap())[target].clone();
        let scaled = beta * BigRational::from_integer(BigInt::from(2).pow((m - 1) as u32));
        let counted = covers_by_subsets(inst);
        ensure(
            reductions::count_set_covers(inst).unwrap() == counted,
            || format!("instance {k}: count_set_covers disagrees with direct count {counted}"),
        )?;
        ensure(
            scaled == BigRational::from_integer(BigInt::from(counted)),
            || format!("instance {k}: beta * 2^(m-1) = {scaled}, covers = {counted}"),
        )?;
        nonzero += usize::from(counted > 0);
    }
    let example = covers_by_subsets(&SetCoverInstance::four_set_example());
    ensure(example == 4, || {
        format!("four-set example has {example} covers, expected 4")
    })?;
    Ok(format!(
        "[{} instances, {nonzero} coverable]",
        instances.len()
    ))
}

/// Smallest vertex cover by subset enumeration.
fn tau(inst: &VertexCoverInstance) -> usize {
    (0u32..1 << inst.vertices())
        .filter(|mask| {
            inst.edges()
                .iter()
                .all(|&[u, v]| mask >> u & 1 == 1 || mask >> v & 1 == 1)
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

fn vertexcover_identity() -> Result<String, String> {
    let mut checks = 0;
    for seed in 0..100 {
        let base = random::graph(seed, 8);
        let n = base.vertices();
        let t_min = tau(&base);
        ensure(
            reductions::min_vertex_cover(&base).unwrap() == t_min,
            || format!("graph {seed}: min_vertex_cover disagrees with oracle {t_min}"),
        )?;
        let (domain, p, _) = reductions::vertexcover_to_ecm(&base).map_err(|e| e.to_string())?;
        let excess = stability::max_excess(&domain, &p).unwrap().max_excess;
        let expected = BigRational::one() - ratio(t_min as i64, n as i64);
        ensure(excess == expected, || {
            format!("graph {seed}: max excess {excess}, expected {expected}")
        })?;
        for t in 0..=n {
            let inst = base.clone().with_threshold(t);
            let (domain, p, eps) = reductions::vertexcover_to_ecm(&inst).unwrap();
            let reaches = reductions::excess_reaches(&domain, &p, &eps).unwrap();
            ensure(reaches == (t_min <= t), || {
                format!("graph {seed}, t = {t}: excess reaches epsilon = {reaches}, tau = {t_min}")
            })?;
            let in_core = stability::ecm(&domain, &p, &eps).unwrap();
            ensure(in_core == (t_min >= t), || {
                format!("graph {seed}, t = {t}: ecm = {in_core}, tau = {t_min}")
            })?;
            checks += 1;
        }
    }
    Ok(format!("[100 graphs, {checks} thresholds]"))
}

fn core_characterization() -> Result<String, String> {
    let corpus = general_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut checked, mut in_core) = (0, 0);
    for (k, domain) in corpus.iter().enumerate() {
        let n = domain.agent_count();
        if n == 0 || n > 12 {
            continue;
        }
        let veto = stability::veto_players(domain).veto_agents;
        let by_definition = oracle::veto_by_definition(domain);
        ensure(veto == by_definition, || {
            format!("domain {k}: veto {veto:?} != {by_definition:?}")
        })?;
        if !non_degenerate(domain) {
            continue;
        }
        for _ in 0..50 {
            let payoffs = oracle::random_imputation(&mut rng, n, &veto);
            let fast = stability::is_in_core(domain, &Imputation::new(payoffs.clone())).unwrap();
            let slow = oracle::in_core_by_definition(domain, &payoffs);
            ensure(fast == slow, || {
                format!("domain {k}: is_in_core {fast} != definition {slow} on {payoffs:?}")
            })?;
            checked += 1;
            in_core += usize::from(fast);
        }
    }
    Ok(format!(
        "[{} domains, {checked} imputations, {in_core} in core]",
        corpus.len()
    ))
}

fn tree_stability() -> Result<String, String> {
    let mut trees = tree_corpus(60, 12, 5_000);
    trees.extend(
        tree_corpus(60, 16, 9_000)
            .into_iter()
            .filter(|d| d.agent_count() > 12)
            .take(4),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut float_lp, mut boundary) = (0, 0);
    for (k, domain) in trees.iter().enumerate() {
        let n = domain.agent_count();
        let core = stability::veto_players(domain);
        ensure(!core.is_empty, || format!("tree {k}: core reported empty"))?;
        let lc = stability::least_core_value(domain).map_err(|e| format!("tree {k}: {e}"))?;
        match &lc.value {
            Number::Exact(v) => ensure(v.is_zero(), || format!("tree {k}: least core value {v}"))?,
            Number::Float(v) => {
                float_lp += 1;
                ensure(v.abs() <= 1e-9, || {
                    format!("tree {k}: least core value {v}")
                })?
            }
        }
        let essential = tree::essential_vertices(domain).unwrap();
        for j in 0..50 {
            let p = Imputation::new(oracle::random_imputation(&mut rng, n, &essential.members));
            let eps = if j % 5 == 0 {
                boundary += 1;
                BigRational::one() - p.payment(essential.members.iter().copied())
            } else {
                ratio(j % 9, 8)
            };
            let fast = tree::tree_ecm(domain, &p, &eps).unwrap();
            let general = stability::ecm(domain, &p, &eps).unwrap();
            ensure(fast == general, || {
                format!("tree {k}: tree_ecm {fast} != ecm {general} at epsilon {eps}")
            })?;
            if j % 5 == 0 {
                ensure(fast, || {
                    format!("tree {k}: boundary p(essential) = 1 - epsilon rejected")
                })?;
                let below = &eps - tolerance() * BigRational::from_integer(10.into());
                if below >= BigRational::zero() {
                    let fast = tree::tree_ecm(domain, &p, &below).unwrap();
                    let general = stability::ecm(domain, &p, &below).unwrap();
                    ensure(!fast && !general, || {
                        format!("tree {k}: accepted below the boundary")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "[{} trees, {float_lp} via floating-point LP, {boundary} boundary cases]",
        trees.len()
    ))
}

/// Agents whose vertices have the same neighbours apart from each other;
/// swapping them is an automorphism of the game.
fn twin_pairs(domain: &ConnectivityDomain) -> Vec<(usize, usize)> {
    let n = domain.agent_count();
    let nbrs = |a: usize, other: usize| {
        let (u, w) = (domain.agent_vertex(a), domain.agent_vertex(other));
        let mut s: Vec<usize> = domain
            .neighbors(u)
            .iter()
            .copied()
            .filter(|&x| x != w)
            .collect();
        s.sort_unstable();
        s
    };
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if nbrs(a, b) == nbrs(b, a) {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

fn axioms() -> Result<String, String> {
    let mut corpus = general_corpus();
    corpus.extend(tree_corpus(20, 10, 7_000));
    let (mut nulls, mut twins) = (0, 0);
    for (k, base) in corpus.iter().enumerate() {
        if base.agent_count() > 11 {
            continue;
        }
        let domain = reductions::add_dummy(base);
        let n = domain.agent_count();
        let b = exact(&indices::banzhaf_exact(&domain).unwrap());
        let s = exact(&indices::shapley_exact(&domain).unwrap());
        for a in 0..n {
            if domain.degree(domain.agent_vertex(a)) == 0 {
                ensure(b[a].is_zero() && s[a].is_zero(), || {
                    format!("domain {k}: isolated agent {a} has nonzero index")
                })?;
                nulls += 1;
            }
        }
        let grand = domain.coalition_value(&Coalition::grand(n));
        let empty = domain.coalition_value(&Coalition::empty());
        if empty == 0 {
            let sum: BigRational = s.iter().sum();
            ensure(sum == BigRational::from_integer(grand.into()), || {
                format!("domain {k}: Shapley sum {sum}, v(I) = {grand}")
            })?;
        }
        for (a, c) in twin_pairs(&domain) {
            ensure(b[a] == b[c] && s[a] == s[c], || {
                format!("domain {k}: twins {a}, {c} differ")
            })?;
            twins += 1;
        }
    }
    ensure(twins > 0, || "no automorphic pairs in the corpus".into())?;
    Ok(format!("[{nulls} null players, {twins} automorphic pairs]"))
}

fn mc_calibration() -> Result<String, String> {
    let domain = cycle4();
    let failures = (0..200)
        .filter(|&seed| {
            let params = ApproxParams::new(0.05, 0.05, seed).unwrap();
            let estimate = indices::banzhaf_mc(&domain, 0, &params).unwrap();
            (estimate - 0.5).abs() > 0.05
        })
        .count();
    let rate = failures as f64 / 200.0;
    ensure(rate <= 0.10, || format!("failure rate {rate}"))?;
    Ok(format!(
        "[failure rate {rate}, {} samples per run]",
        ApproxParams::new(0.05, 0.05, 0).unwrap().samples()
    ))
}

fn worked_values() -> Result<String, String> {
    let half = vec![ratio(1, 2), ratio(1, 2)];
    let c4 = cycle4();
    ensure(exact(&indices::banzhaf_exact(&c4).unwrap()) == half, || {
        "4-cycle Banzhaf".into()
    })?;
    ensure(exact(&indices::shapley_exact(&c4).unwrap()) == half, || {
        "4-cycle Shapley".into()
    })?;
    ensure(stability::veto_players(&c4).is_empty, || {
        "4-cycle core not empty".into()
    })?;
    let lc = stability::least_core_value(&c4).unwrap();
    ensure(lc.value.as_exact() == Some(&ratio(1, 2)), || {
        format!("4-cycle least core {}", lc.value)
    })?;

    let p4 = path4();
    ensure(exact(&tree::tree_banzhaf(&p4).unwrap()) == half, || {
        "path Banzhaf".into()
    })?;
    ensure(exact(&indices::shapley_exact(&p4).unwrap()) == half, || {
        "path Shapley".into()
    })?;
    ensure(exact(&indices::banzhaf_exact(&p4).unwrap()) == half, || {
        "path exact Banzhaf".into()
    })?;
    ensure(stability::veto_players(&p4).veto_agents == [0, 1], || {
        "path veto".into()
    })?;
    let lc = stability::least_core_value(&p4).unwrap();
    ensure(lc.value.as_exact().is_some_and(Zero::is_zero), || {
        format!("path least core {}", lc.value)
    })?;
    Ok(String::new())
}

fn run_cli(args: &[&str], dir: &Path) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_conngame"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn cli_determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    std::fs::write(d.join("c4.json"), cycle4().to_json()).unwrap();
    std::fs::write(d.join("p4.json"), path4().to_json()).unwrap();
    let big = (77..)
        .map(|seed| oracle::random_domain(seed, 16, 12))
        .find(|d| non_degenerate(d) && d.agent_count() >= 10)
        .unwrap();
    std::fs::write(d.join("big.json"), big.to_json()).unwrap();
    std::fs::write(
        d.join("half.json"),
        r#"{"payoffs": ["1/2", "1/2"], "epsilon": "1/2"}"#,
    )
    .unwrap();
    let sc = serde_json::to_string(&SetCoverInstance::four_set_example()).unwrap();
    std::fs::write(d.join("sc.json"), sc).unwrap();
    std::fs::write(
        d.join("vc.json"),
        r#"{"vertices": 3, "edges": [[0,1],[1,2],[0,2]], "t": 2}"#,
    )
    .unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec![
            "indices", "c4.json", "--method", "mc", "--seed", "7", "--format", "json",
        ],
        vec![
            "indices", "c4.json", "--method", "mc", "--seed", "7", "--format", "csv",
        ],
        vec!["indices", "big.json", "--format", "json"],
        vec![
            "indices", "big.json", "--method", "mc", "--index", "shapley", "--seed", "3",
        ],
        vec!["indices", "p4.json", "--format", "json"],
        vec!["core", "c4.json", "--format", "json"],
        vec!["core", "p4.json", "--imputation", "half.json"],
        vec!["ecm", "c4.json", "half.json", "--format", "json"],
        vec!["ecm", "p4.json", "half.json"],
        vec!["leastcore", "c4.json", "--format", "json"],
        vec!["leastcore", "big.json", "--format", "csv"],
        vec!["validate", "big.json", "--format", "json"],
        vec![
            "generate",
            "setcover",
            "sc.json",
            "--out",
            "sc_domain.json",
            "--format",
            "json",
        ],
        vec![
            "generate",
            "vertexcover",
            "vc.json",
            "--out",
            "vc_domain.json",
        ],
    ];
    let files = [
        "sc_domain.json",
        "vc_domain.json",
        "vc_domain.imputation.json",
    ];
    let mut runs = Vec::new();
    for threads in ["1", "4"] {
        let mut outputs = Vec::new();
        for cmd in &commands {
            let mut args = cmd.clone();
            args.extend(["--threads", threads]);
            let first = run_cli(&args, d);
            let second = run_cli(&args, d);
            ensure(first.1 == 0, || {
                format!("`{}` exited with {}", cmd.join(" "), first.1)
            })?;
            ensure(first == second, || {
                format!("`{}` output differs between runs", cmd.join(" "))
            })?;
            outputs.push(first.0);
        }
        for f in files {
            outputs.push(std::fs::read(d.join(f)).unwrap());
        }
        runs.push(outputs);
    }
    ensure(runs[0] == runs[1], || {
        "output depends on the thread count".into()
    })?;
    Ok(format!("[{} commands, 1 and 4 threads]", commands.len()))
}
