//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Runs as a plain binary (no libtest harness) so the lines always show.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path as FsPath;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use levelzero::explorer::{bfs, ExploreLimits, WeightWindow};
use levelzero::ls::{enumerate_b_finite, finite_order, generate_b_finite, sl3_dimension, validate_ls, LsPath, FINITE_CAP};
use levelzero::rational::q;
use levelzero::rootsys::fixtures::{a1_affine, a_affine, algebra};
use levelzero::verify::campaign::{run_check, Caps, CheckSpec, RandomWords, StraighteningParams};
use levelzero::verify::{
    check_branching, check_character_branching, check_crystal_axioms, check_minuscule_decomposition, check_norm_bound,
    check_sigma_properties, Report, Shape,
};
use levelzero::{AffineData, Path, RootOperators, Weight};
use tempfile::TempDir;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn limits(depth: usize) -> ExploreLimits {
    ExploreLimits { depth, node_cap: 100_000 }
}

fn fixtures() -> [(&'static str, AffineData); 2] {
    [("A1(1)", algebra(a1_affine())), ("A2(1)", algebra(a_affine(2)))]
}

fn require_verified(what: &str, r: &Report) -> Result<(), String> {
    if r.is_verified() {
        Ok(())
    } else {
        let first = r.certificates.iter().find(|c| c.get("failure").is_some() || c.get("truncation").is_some());
        Err(format!("{what}: {:?} {}", r.verdict, first.map(|c| c.to_string()).unwrap_or_default()))
    }
}

fn crystal_axioms() -> Outcome {
    let mut checked = 0u64;
    for (name, d) in fixtures() {
        let ops = RootOperators::new(&d);
        let mut shapes = vec![d.fundamental_level_zero(1).unwrap()];
        if name == "A1(1)" {
            // A non-minuscule shape, so bent paths are exercised too.
            shapes.push(d.fundamental_level_zero(1).unwrap().scaled(q(2)));
        }
        for lam in shapes {
            let r = check_crystal_axioms(&ops, &lam, 500, 11, limits(8)).map_err(|e| e.to_string())?;
            require_verified(&format!("{name} {lam}"), &r)?;
            checked += r.certificates[0]["paths_checked"].as_u64().unwrap_or(0);
        }
    }
    Ok(format!("{checked} paths checked (all nodes plus 500 seeded draws per crystal)"))
}

fn norm_bound() -> Outcome {
    let mut nodes = 0u64;
    for (name, d) in fixtures() {
        let ops = RootOperators::new(&d);
        for i in d.nonspecial() {
            let r = check_norm_bound(&ops, i, limits(10)).map_err(|e| e.to_string())?;
            require_verified(&format!("{name} i={i}"), &r)?;
            nodes += r.certificates[0]["nodes"].as_u64().unwrap_or(0);
        }
    }
    Ok(format!("{nodes} nodes within the bound"))
}

fn oracle_case(d: &AffineData, lam: &Weight, sub: &[usize], expect: u64) -> Result<(), String> {
    let closure = generate_b_finite(d, lam, sub, FINITE_CAP).map_err(|e| e.to_string())?;
    let listed = enumerate_b_finite(d, lam, sub).map_err(|e| e.to_string())?;
    if closure != listed {
        return Err(format!("{lam}: closure has {} paths, validator lists {}", closure.len(), listed.len()));
    }
    if closure.len() as u64 != expect {
        return Err(format!("{lam}: {} paths, dimension formula gives {expect}", closure.len()));
    }
    let order = finite_order(d, lam, sub, &closure).map_err(|e| e.to_string())?;
    for p in &closure {
        let ok = LsPath::from_path(p, order.window()).is_some_and(|ls| validate_ls(&ls, &order).valid);
        if !ok {
            return Err(format!("{lam}: closure element {p} fails the chain condition"));
        }
    }
    Ok(())
}

fn validator_oracle() -> Outcome {
    let mut cases = 0;
    let a1 = algebra(a1_affine());
    let v = a1.fundamental_level_zero(1).unwrap();
    for k in 0..=4 {
        oracle_case(&a1, &v.scaled(q(k)), &[1], k as u64 + 1)?;
        cases += 1;
    }
    let a2 = algebra(a_affine(2));
    let (v1, v2) = (a2.fundamental_level_zero(1).unwrap(), a2.fundamental_level_zero(2).unwrap());
    for s in 0..=4i64 {
        for p in 0..=s {
            let r = s - p;
            oracle_case(&a2, &(&v1.scaled(q(p)) + &v2.scaled(q(r))), &[1, 2], sl3_dimension(p as u64, r as u64))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} dominant weights, closure = validator = dimension formula"))
}

fn levi_fixtures() -> Vec<(&'static str, AffineData, Vec<usize>)> {
    let mut v = vec![("A1(1)", algebra(a1_affine()), vec![1])];
    for s in [vec![1], vec![2], vec![1, 2]] {
        v.push(("A2(1)", algebra(a_affine(2)), s));
    }
    v
}

fn branching() -> Outcome {
    let mut comps = 0;
    for (name, d, s) in levi_fixtures() {
        let ops = RootOperators::new(&d);
        for i in d.nonspecial() {
            let r = check_branching(&ops, i, &s, limits(6)).map_err(|e| e.to_string())?;
            require_verified(&format!("{name} i={i} S={s:?}"), &r)?;
            comps += r.certificates[0]["components"].as_u64().unwrap_or(0);
        }
    }
    Ok(format!("{comps} closed components isomorphic to their Levi crystals"))
}

fn character_identity() -> Outcome {
    let window = WeightWindow::DeltaRange { min: q(-1), max: q(1) };
    let mut weights = 0;
    for (name, d, s) in levi_fixtures() {
        let ops = RootOperators::new(&d);
        for i in d.nonspecial() {
            let r = check_character_branching(&ops, i, &s, &window, limits(6)).map_err(|e| e.to_string())?;
            require_verified(&format!("{name} i={i} S={s:?}"), &r)?;
            weights += r.certificates[0]["lhs"]["counts"].as_array().map_or(0, Vec::len);
        }
    }
    Ok(format!("multiset equality on {weights} window weights"))
}

fn minuscule_decomposition() -> Outcome {
    let mut seeds = 0;
    for (name, d) in fixtures() {
        let ops = RootOperators::new(&d);
        let r = check_minuscule_decomposition(&ops, &d.fundamental_weight(0), 1, limits(5), 2).map_err(|e| e.to_string())?;
        require_verified(name, &r)?;
        seeds += r.certificates.iter().filter(|c| c.get("component_nodes").is_some()).count();
    }
    Ok(format!("{seeds} dominant seeds, each alone in its component and matching its model"))
}

fn sigma_properties() -> Outcome {
    let mut runs = 0;
    for (name, d) in fixtures() {
        let ops = RootOperators::new(&d);
        let mut shapes = vec![d.fundamental_level_zero(1).unwrap()];
        if name == "A1(1)" {
            shapes.push(d.fundamental_level_zero(1).unwrap().scaled(q(2)));
        }
        for lam in &shapes {
            for m in [2, 3, 4] {
                let r = check_sigma_properties(&ops, lam, m, 200, 5, limits(8)).map_err(|e| e.to_string())?;
                require_verified(&format!("{name} {lam} m={m}"), &r)?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} (shape, m) runs of 200 sampled paths"))
}

fn straightening() -> Outcome {
    let d = algebra(a_affine(2));
    let ops = RootOperators::new(&d);
    let spec = CheckSpec::Straightening(StraighteningParams {
        shape: Shape::Fundamental { fundamental: 1, multiple: 1 },
        words: Vec::new(),
        random: Some(RandomWords { count: 50, max_length: 6, seed: 2024 }),
    });
    let caps = Caps { m_max: 64, ..Caps::default() };
    let r = run_check(&ops, &spec, &caps).map_err(|e| e.to_string())?;
    require_verified("A2(1)", &r)?;
    let ms: Vec<u64> = r.certificates.iter().filter_map(|c| c["m"].as_u64()).collect();
    if ms.len() != 50 {
        return Err(format!("{} witnesses for 50 words", ms.len()));
    }
    if let Some(m) = ms.iter().find(|&&m| m != 1) {
        return Err(format!("minuscule shape needed m = {m}"));
    }
    Ok("50 words, witness m = 1 for every word".into())
}

fn minuscule_straightness() -> Outcome {
    let mut nodes = 0;
    for n in 1..=3 {
        let d = algebra(a_affine(n));
        let ops = RootOperators::new(&d);
        for i in d.nonspecial() {
            let start = Path::straight(d.fundamental_level_zero(i).unwrap());
            let g = bfs(&ops, &start, &d.all_indices(), limits(10)).map_err(|e| e.to_string())?;
            if let Some(p) = g.nodes().iter().find(|p| p.segments().len() != 1) {
                return Err(format!("A{n}(1) i={i}: {p} has {} segments", p.segments().len()));
            }
            nodes += g.len();
        }
    }
    Ok(format!("{nodes} nodes, all straight"))
}

fn payloads(dir: &FsPath) -> BTreeSet<(String, Vec<u8>)> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().is_some_and(|n| n != "timings.json"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

fn determinism() -> Outcome {
    let tmp = TempDir::new().map_err(|e| e.to_string())?;
    let mut seen = Vec::new();
    for run in 0..3 {
        let out = tmp.path().join(format!("run{run}"));
        let status = Command::new(env!("CARGO_BIN_EXE_levelzero"))
            .args(["verify", "--config", "a1-smoke", "--out", out.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        if status.status.code() != Some(0) {
            return Err(format!("run {run} exited with {:?}", status.status.code()));
        }
        seen.push(payloads(&out));
    }
    if seen.windows(2).any(|w| w[0] != w[1]) {
        return Err("report payloads differ between runs".into());
    }
    Ok(format!("3 runs, {} payload files byte-identical", seen[0].len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("crystal axioms on sampled paths", 10, crystal_axioms),
        ("classical norm bound at depth 10", 30, norm_bound),
        ("validator and closure agree with the dimension formula", 30, validator_oracle),
        ("Levi branching components are isomorphic to Levi crystals", 60, branching),
        ("character identity on the window |δ| <= 1", 60, character_identity),
        ("minuscule decomposition of the concatenation crystal", 120, minuscule_decomposition),
        ("scaling and splitting identities", 20, sigma_properties),
        ("straightening witnesses for random words", 60, straightening),
        ("minuscule crystals consist of straight paths", 30, minuscule_straightness),
        ("verification reports are byte-identical across runs", 120, determinism),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let clock = Instant::now();
        let outcome = run();
        let took = clock.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(*limit) => Err(format!("{detail}; took {took:.1?}, limit {limit} s")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({took:.2?}): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({took:.2?}): {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
