use minatar_core::{Action, EnvConfig, EnvSession, GameId, Rng};
use proptest::prelude::*;

fn trajectory(game: GameId, seed: u64, actions: &[Action]) -> Vec<(Vec<u8>, f64, bool)> {
    let mut env = EnvSession::new(EnvConfig::new(game, seed)).unwrap();
    let mut out = vec![(env.observe().pack(), 0.0, false)];
    for &a in actions {
        if env.is_terminal() {
            env.reset();
        }
        let t = env.act(a).unwrap();
        out.push((env.observe().pack(), t.reward, t.terminal));
    }
    out
}

fn game_strategy() -> impl Strategy<Value = GameId> {
    prop::sample::select(GameId::ALL.to_vec())
}

fn actions_strategy(len: usize) -> impl Strategy<Value = Vec<Action>> {
    prop::collection::vec(prop::sample::select(Action::ALL.to_vec()), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn same_seed_same_stream(game in game_strategy(), seed in any::<u64>(), actions in actions_strategy(300)) {
        prop_assert_eq!(trajectory(game, seed, &actions), trajectory(game, seed, &actions));
    }
}

#[test]
fn seed_changes_stream() {
    let actions: Vec<Action> = (0..200).map(|i| Action::ALL[i % 6]).collect();
    for game in [GameId::Asterix, GameId::Freeway, GameId::Seaquest] {
        assert_ne!(
            trajectory(game, 1, &actions),
            trajectory(game, 2, &actions),
            "{game}"
        );
    }
}

#[test]
fn reset_streams_match_after_identical_trajectories() {
    for game in GameId::ALL {
        let mut a = EnvSession::new(EnvConfig::new(game, 77)).unwrap();
        let mut b = EnvSession::new(EnvConfig::new(game, 77)).unwrap();
        let mut rng = Rng::new(5);
        for _ in 0..150 {
            let act = Action::ALL[rng.next_below(6) as usize];
            if a.is_terminal() {
                break;
            }
            assert_eq!(a.act(act), b.act(act));
        }
        a.reset();
        b.reset();
        assert_eq!(a.state_hash(), b.state_hash());
        for _ in 0..100 {
            if a.is_terminal() {
                break;
            }
            assert_eq!(a.act(Action::Fire), b.act(Action::Fire));
            assert_eq!(a.observe(), b.observe());
        }
    }
}

#[test]
fn reset_mid_episode_gives_valid_start() {
    for game in GameId::ALL {
        let mut env = EnvSession::new(EnvConfig::new(game, 3)).unwrap();
        for _ in 0..5 {
            let _ = env.act(Action::Down);
        }
        env.reset();
        assert_eq!(env.frame_count(), 0);
        assert!(!env.is_terminal());
        assert_eq!(env.last_action(), Action::NoOp);
        let obs = env.observe();
        assert_eq!(obs.n_channels(), game.n_channels());
        assert!(obs.as_flat().iter().all(|&v| v <= 1));
    }
}

#[test]
fn sticky_rate_is_one_tenth() {
    let mut env = EnvSession::new(EnvConfig::new(GameId::Freeway, 2024)).unwrap();
    let n = 1_000_000;
    let mut repeats = 0u32;
    for _ in 0..n {
        if env.is_terminal() {
            env.reset();
        }
        // Always request something other than the last executed action.
        let wanted = if env.last_action() == Action::Left {
            Action::Right
        } else {
            Action::Left
        };
        let t = env.act(wanted).unwrap();
        if t.executed != wanted {
            repeats += 1;
        }
    }
    let rate = f64::from(repeats) / f64::from(n);
    assert!((rate - 0.1).abs() <= 0.002, "rate {rate}");
}
