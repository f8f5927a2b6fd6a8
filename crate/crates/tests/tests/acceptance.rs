//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#[path = "../../core/tests/oracles/mod.rs"]
mod kinematics;

#[path = "../../agents/tests/oracles/mod.rs"]
mod gradients;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use minatar_agents::AgentKind;
use minatar_core::games::{SeaquestState, SpaceInvadersState};
use minatar_core::{mix, Action, EnvConfig, EnvSession, Game, GameId, Rng};
use minatar_harness::{
    bench_env, load_replay, record_replay, run, run_cell, select_alpha, summarize_final100,
    AlphaSummary, CellKey, CellStatus, CellTiming, Episode, ExperimentSpec, RecordPolicy,
    RunRecord, Seeds,
};

const DIGEST_ENV: &str = "MINATAR_ACCEPTANCE_DIGEST_OUT";

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// Determinism ---------------------------------------------------------------

/// One hash per (game, seed) over the full observation/reward/terminal stream
/// of a 1000-action random trajectory.
fn trajectory_digests() -> Vec<u64> {
    let mut out = Vec::new();
    for game in GameId::ALL {
        for seed in 0..100u64 {
            let mut env = EnvSession::new(EnvConfig::new(game, seed)).unwrap();
            let mut policy = Rng::new(mix(seed ^ 0xacce));
            let mut h = DefaultHasher::new();
            let mut obs = env.observe();
            obs.as_flat().hash(&mut h);
            for _ in 0..1000 {
                if env.is_terminal() {
                    env.reset();
                }
                let t = env.act(Action::ALL[policy.next_below(6) as usize]).unwrap();
                env.observe_into(&mut obs);
                obs.as_flat().hash(&mut h);
                t.reward.to_bits().hash(&mut h);
                t.terminal.hash(&mut h);
            }
            out.push(h.finish());
        }
    }
    out
}

fn digests_from_child() -> Result<Vec<u64>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("digests.txt");
    let exe = std::env::current_exe().map_err(|e| e.to_string())?;
    let status = Command::new(exe)
        .env(DIGEST_ENV, &path)
        .status()
        .map_err(|e| e.to_string())?;
    ensure(status.success(), "digest process failed")?;
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    text.lines()
        .map(|l| u64::from_str_radix(l, 16).map_err(|e| e.to_string()))
        .collect()
}

fn check_determinism() -> Check {
    let first = digests_from_child()?;
    let second = digests_from_child()?;
    ensure(
        first.len() == 500,
        format!("expected 500 trajectories, got {}", first.len()),
    )?;
    let mismatches = first.iter().zip(&second).filter(|(a, b)| a != b).count();
    ensure(
        mismatches == 0,
        format!("{mismatches} of 500 trajectories differ between processes"),
    )?;
    let local = trajectory_digests();
    ensure(
        local == first,
        "in-process run differs from child processes",
    )?;
    Ok("5 games x 100 seeds x 1000 actions bit-identical across 2 processes".into())
}

// Performance ---------------------------------------------------------------

fn check_performance() -> Check {
    let mut parts = Vec::new();
    let mut worst: f64 = 0.0;
    for game in GameId::ALL {
        let s = bench_env(game, 1_000_000, 1);
        worst = worst.max(s.median_ms());
        parts.push(format!("{}={:.5}ms", game.name(), s.median_ms()));
    }
    let detail = format!("median act+observe {} (limit 0.03 ms)", parts.join(" "));
    ensure(worst <= 0.03, detail.clone())?;
    Ok(detail)
}

// Sticky actions ------------------------------------------------------------

fn check_sticky() -> Check {
    let mut env = EnvSession::new(EnvConfig::new(GameId::Breakout, 99)).unwrap();
    let mut rng = Rng::new(5);
    let n = 1_000_000u32;
    let mut repeats = 0u32;
    for _ in 0..n {
        if env.is_terminal() {
            env.reset();
        }
        // Request an action different from the last executed one so that
        // every injected repeat is visible.
        let last = env.last_action();
        let mut wanted = Action::ALL[rng.next_below(6) as usize];
        if wanted == last {
            wanted = Action::ALL[(wanted.index() + 1) % 6];
        }
        if env.act(wanted).unwrap().executed != wanted {
            repeats += 1;
        }
    }
    let rate = f64::from(repeats) / f64::from(n);
    let detail = format!("repeat rate {rate:.4} over 1e6 acts (target 0.100 +/- 0.002)");
    ensure((rate - 0.1).abs() <= 0.002, detail.clone())?;
    Ok(detail)
}

// Reward and termination contracts ------------------------------------------

fn check_contracts() -> Check {
    for game in GameId::ALL {
        let mut env = EnvSession::new(EnvConfig::new(game, 7)).unwrap();
        let mut rng = Rng::new(8);
        let mut episode_frames = 0u64;
        for _ in 0..100_000 {
            if env.is_terminal() {
                env.reset();
                episode_frames = 0;
            }
            let t = env.act(Action::ALL[rng.next_below(6) as usize]).unwrap();
            episode_frames += 1;
            let r = t.reward;
            if game == GameId::Seaquest {
                ensure(
                    r.fract() == 0.0 && (0.0..=10.0).contains(&r),
                    format!("seaquest reward {r}"),
                )?;
            } else {
                ensure(r == 0.0 || r == 1.0, format!("{game} reward {r}"))?;
            }
            if game == GameId::Freeway {
                ensure(
                    t.terminal == (episode_frames == 2500),
                    format!("freeway terminal at frame {episode_frames}"),
                )?;
            }
        }
    }

    let mut s = SpaceInvadersState::reset(&mut Rng::new(3), false);
    s.aliens = [[false; 10]; 10];
    s.aliens[1][5] = true;
    s.cannon_col = 0;
    let mut rng = Rng::new(4);
    let mut last = 15;
    let mut moves = 0;
    for frame in 0..20 {
        ensure(
            s.effective_interval() == 1,
            "single-alien interval is not 1",
        )?;
        let out = s.step(Action::NoOp, &mut rng);
        let pos = (0..100)
            .find(|&i| s.aliens[i / 10][i % 10])
            .ok_or("alien vanished")?;
        // The pre-existing timer may delay the very first move.
        ensure(
            frame == 0 || pos != last,
            format!("alien idle at frame {frame}"),
        )?;
        moves += usize::from(pos != last);
        last = pos;
        if out.terminal {
            break;
        }
    }

    for oxygen in 1..=10u32 {
        let mut sq = SeaquestState::reset(&mut Rng::new(0), true);
        sq.player = (1, 5);
        sq.diver_count = 6;
        sq.oxygen = oxygen;
        let out = sq.step(Action::Up, &mut Rng::new(0));
        ensure(
            out.reward == f64::from(oxygen),
            format!("6-diver surfacing with oxygen {oxygen} paid {}", out.reward),
        )?;
    }
    Ok(format!(
        "1e5 frames/game rewards in range, freeway episodes 2500 frames, single alien moved {moves}/20 frames, surfacing bonus = oxygen for 1..10"
    ))
}

// Kinematics oracles --------------------------------------------------------

fn check_kinematics() -> Check {
    let (b_cases, b_fail) = kinematics::breakout_exhaustive();
    let (i_cases, i_fail) = kinematics::invaders_exhaustive();
    if let Some(first) = b_fail.first() {
        return Err(format!(
            "breakout: {} of {b_cases} disagree, first: {first}",
            b_fail.len()
        ));
    }
    if let Some(first) = i_fail.first() {
        return Err(format!(
            "invaders: {} of {i_cases} disagree, first: {first}",
            i_fail.len()
        ));
    }
    Ok(format!(
        "breakout {b_cases} states and invaders {i_cases} formations agree exactly"
    ))
}

// Gradient checks -----------------------------------------------------------

fn check_gradients() -> Check {
    let q = gradients::q_gradient_error(101, 100);
    let pi = gradients::log_policy_gradient_error(102, 100);
    let v = gradients::critic_gradient_error(103, 100);
    let detail = format!("worst relative error q={q:.2e} actor={pi:.2e} critic={v:.2e} (tol 1e-6, 100 instances each)");
    ensure(q <= 1e-6 && pi <= 1e-6 && v <= 1e-6, detail.clone())?;
    Ok(detail)
}

// Learning sanity and ablation ------------------------------------------------

const LEARN_FRAMES: u64 = 500_000;
const LEARN_SEEDS: u64 = 5;

fn breakout_spec(agent: AgentKind, alpha_exps: Vec<i32>) -> ExperimentSpec {
    ExperimentSpec {
        alpha_exps,
        seeds: Seeds::Count(LEARN_SEEDS),
        ramping: false,
        ..ExperimentSpec::new(GameId::Breakout, agent, LEARN_FRAMES)
    }
}

fn random_baseline() -> Result<f64, String> {
    let spec = ExperimentSpec {
        ramping: false,
        ..ExperimentSpec::new(GameId::Breakout, AgentKind::Random, 100_000)
    };
    let cell = &minatar_harness::cells(&spec).map_err(|e| e.to_string())?[0];
    let record = run_cell(cell);
    ensure(
        record.episodes.len() >= 1000,
        "fewer than 1000 random episodes",
    )?;
    Ok(record.episodes[..1000].iter().map(|e| e.ret).sum::<f64>() / 1000.0)
}

fn summary_row(
    agent: AgentKind,
    alpha_exps: Vec<i32>,
) -> Result<(AlphaSummary, Vec<AlphaSummary>), String> {
    let records = run(&breakout_spec(agent, alpha_exps)).map_err(|e| e.to_string())?;
    let summary = summarize_final100(&records);
    ensure(summary.warnings.is_empty(), summary.warnings.join("; "))?;
    let chosen = select_alpha(&summary.rows).ok_or("empty sweep")?.clone();
    Ok((chosen, summary.rows))
}

struct Learning {
    random: f64,
    ac: AlphaSummary,
    ac_rows: Vec<AlphaSummary>,
    q: AlphaSummary,
    q_noreplay: AlphaSummary,
}

fn learning_runs() -> Result<Learning, String> {
    let random = random_baseline()?;
    let (ac, ac_rows) = summary_row(AgentKind::AcLambda, vec![-10, -9, -8])?;
    let (q, _) = summary_row(AgentKind::QLinear, vec![-8])?;
    let (q_noreplay, _) = summary_row(AgentKind::QLinearNoReplay, vec![-8])?;
    Ok(Learning {
        random,
        ac,
        ac_rows,
        q,
        q_noreplay,
    })
}

fn check_learning(l: &Learning) -> Check {
    let bar = 3.0 * l.random;
    let sweep: Vec<String> = l
        .ac_rows
        .iter()
        .map(|r| format!("2^{}:{:.3}", r.alpha_exp, r.mean))
        .collect();
    let detail = format!(
        "random {:.3} (1000 eps), bar {:.3}; ac-lambda sweep [{}] chose 2^{} -> {:.3}+/-{:.3}; qlin 2^{} -> {:.3}+/-{:.3}",
        l.random, bar, sweep.join(" "), l.ac.alpha_exp, l.ac.mean, l.ac.stderr, l.q.alpha_exp, l.q.mean, l.q.stderr
    );
    ensure(l.ac.mean >= bar && l.q.mean >= bar, detail.clone())?;
    Ok(detail)
}

fn check_ablation(l: &Learning) -> Check {
    let limit = l.q.mean + l.q.stderr;
    let detail = format!(
        "no-replay {:.3} vs replay {:.3} + 1 se = {:.3}",
        l.q_noreplay.mean, l.q.mean, limit
    );
    ensure(l.q_noreplay.mean <= limit, detail.clone())?;
    Ok(detail)
}

// Harness statistics and replays -----------------------------------------------

fn fixture(alpha_exp: i32, seed: u64, returns: &[f64]) -> RunRecord {
    RunRecord {
        key: CellKey {
            game: GameId::Breakout,
            agent: AgentKind::QLinear,
            alpha_exp,
            alpha: 2f64.powi(alpha_exp),
            seed,
        },
        frames: 10 * returns.len() as u64,
        episodes: returns
            .iter()
            .enumerate()
            .map(|(i, &ret)| Episode {
                end_frame: 10 * (i as u64 + 1),
                ret,
            })
            .collect(),
        status: CellStatus::Completed,
        timing: CellTiming::default(),
    }
}

fn row(alpha_exp: i32, mean: f64, stderr: f64) -> AlphaSummary {
    AlphaSummary {
        alpha_exp,
        alpha: 2f64.powi(alpha_exp),
        mean,
        stderr,
        seeds: 5,
    }
}

fn check_statistics() -> Check {
    let one = summarize_final100(&[fixture(-5, 0, &[1.0, 2.0, 3.0])]).rows;
    ensure(
        one.len() == 1 && one[0].mean == 2.0 && one[0].stderr == 0.0,
        format!("[1,2,3] -> {one:?}"),
    )?;

    let same: Vec<RunRecord> = (0..30).map(|s| fixture(-5, s, &[4.0, 1.0, 7.0])).collect();
    let same = summarize_final100(&same).rows;
    ensure(
        same[0].mean == 4.0 && same[0].stderr == 0.0,
        format!("identical seeds -> {same:?}"),
    )?;

    // Per-seed means 0, 2, 0, 2: sample variance 4/3, stderr sqrt(4/3 / 4).
    let alt: Vec<RunRecord> = (0..4)
        .map(|s| fixture(-5, s, &[2.0 * (s % 2) as f64; 7]))
        .collect();
    let alt = summarize_final100(&alt).rows;
    let expected_se = (1.0f64 / 3.0).sqrt();
    ensure(
        alt[0].mean == 1.0 && alt[0].stderr == expected_se,
        format!("alternating -> {alt:?}"),
    )?;

    // Only the final 100 of 150 episodes count.
    let long: Vec<f64> = (0..150).map(|i| if i < 50 { 100.0 } else { 1.0 }).collect();
    let long = summarize_final100(&[fixture(-5, 0, &long)]).rows;
    ensure(long[0].mean == 1.0, format!("final window -> {long:?}"))?;

    let pick = |rows: &[AlphaSummary]| select_alpha(rows).map(|r| r.alpha_exp);
    ensure(pick(&[row(-4, 1.0, 0.0)]) == Some(-4), "single alpha")?;
    ensure(
        pick(&[row(-4, 1.0, 0.1), row(-3, 5.0, 0.1)]) == Some(-3),
        "disjoint intervals",
    )?;
    ensure(
        pick(&[row(-6, 5.0, 0.5), row(-5, 4.8, 0.5), row(-4, 3.0, 0.1)]) == Some(-5),
        "overlap selection",
    )?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for game in GameId::ALL {
        let path = dir.path().join(format!("{game}.jsonl"));
        let rec = record_replay(
            &EnvConfig::new(game, 12),
            RecordPolicy::Random,
            5000,
            Some(&path),
        )
        .map_err(|e| e.to_string())?;
        let back = load_replay(&path).map_err(|e| e.to_string())?;
        ensure(
            back.frames == rec.frames,
            format!("{game} replay changed on round trip"),
        )?;
        let mut tampered = rec.clone();
        let i = tampered.frames.len() / 2;
        tampered.frames[i].reward += 1.0;
        tampered.save(&path).map_err(|e| e.to_string())?;
        ensure(
            load_replay(&path).is_err(),
            format!("{game} tampered replay accepted"),
        )?;
    }
    Ok("summarize/select_alpha fixtures exact; replays round-trip and reject tampering for all games".into())
}

// Driver ------------------------------------------------------------------------

fn report(name: &str, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into());
        Err(msg)
    });
    let secs = start.elapsed().as_secs_f64();
    match &result {
        Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
        Err(detail) => println!("FAIL {name}: {detail} [{secs:.1}s]"),
    }
    result.is_ok()
}

fn main() -> ExitCode {
    if let Some(path) = std::env::var_os(DIGEST_ENV) {
        let text: String = trajectory_digests()
            .iter()
            .map(|d| format!("{d:016x}\n"))
            .collect();
        std::fs::write(path, text).expect("write digests");
        return ExitCode::SUCCESS;
    }

    println!("running acceptance criteria");
    let mut results = vec![
        report("determinism", check_determinism),
        report("performance", check_performance),
        report("sticky-actions", check_sticky),
        report("reward-termination-contracts", check_contracts),
        report("kinematics-oracles", check_kinematics),
        report("gradient-checks", check_gradients),
    ];
    let learning =
        panic::catch_unwind(learning_runs).unwrap_or_else(|_| Err("training panicked".into()));
    match &learning {
        Ok(l) => {
            results.push(report("learning-sanity", || check_learning(l)));
            results.push(report("ablation-direction", || check_ablation(l)));
        }
        Err(e) => {
            results.push(report("learning-sanity", || Err(e.clone())));
            results.push(report("ablation-direction", || Err(e.clone())));
        }
    }
    results.push(report("harness-statistics", check_statistics));

    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
