//! Session registry and request handling. Everything here is synchronous;
//! the network layer only moves JSON text in and out.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use minatar_core::replay::Replay;
use minatar_core::{
    Action, BinaryObservation, EnvConfig, EnvError, EnvSession, GameId, DEFAULT_STICKY_PROB,
};

use crate::protocol::{
    parse_request, Created, ErrorCode, FrameMessage, Mode, ReplayCursor, ReplayOp, Request,
    Response,
};

pub const DEFAULT_SESSION_TTL: Duration = Duration::from_secs(600);

struct Interactive {
    env: EnvSession,
    score: f64,
}

/// A verified replay, re-simulated once at load time. Index 0 is the
/// initial observation, index k the state after the k-th logged frame.
struct ReplayTrack {
    observations: Vec<BinaryObservation>,
    rewards: Vec<f64>,
    terminals: Vec<bool>,
    scores: Vec<f64>,
    cursor: usize,
    playing: bool,
}

impl ReplayTrack {
    fn total_frames(&self) -> usize {
        self.observations.len() - 1
    }
}

enum Body {
    Interactive(Interactive),
    Replay(ReplayTrack),
}

struct Session {
    body: Body,
    created_at: Instant,
    last_used: Instant,
}

impl Session {
    fn mode(&self) -> Mode {
        match self.body {
            Body::Interactive(_) => Mode::Interactive,
            Body::Replay(_) => Mode::Replay,
        }
    }
}

/// Metadata of a live session.
#[derive(Clone, Debug, PartialEq)]
pub struct SessionInfo {
    pub mode: Mode,
    pub created_at: Instant,
    pub last_used: Instant,
}

pub struct Service {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    ttl: Duration,
}

impl Default for Service {
    fn default() -> Self {
        Self::new(DEFAULT_SESSION_TTL)
    }
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    // A panic while holding a session lock cannot leave the env half-stepped
    // in a way later requests could observe differently, so keep serving.
    m.lock().unwrap_or_else(|e| e.into_inner())
}

fn interactive_frame(id: &str, s: &Interactive, reward: f64) -> FrameMessage {
    FrameMessage {
        session_id: id.to_owned(),
        frame_count: s.env.frame_count(),
        cells: s.env.observe().sparse(),
        reward,
        terminal: s.env.is_terminal(),
        score: s.score,
        replay: None,
    }
}

fn replay_frame(id: &str, t: &ReplayTrack) -> FrameMessage {
    let k = t.cursor;
    FrameMessage {
        session_id: id.to_owned(),
        frame_count: k as u64,
        cells: t.observations[k].sparse(),
        reward: t.rewards[k],
        terminal: t.terminals[k],
        score: t.scores[k],
        replay: Some(ReplayCursor {
            total_frames: t.total_frames() as u64,
            playing: t.playing,
        }),
    }
}

fn wrong_mode(expected: Mode) -> Response {
    let what = match expected {
        Mode::Interactive => "interactive",
        Mode::Replay => "replay",
    };
    Response::error(
        ErrorCode::WrongMode,
        format!("request needs a {what} session"),
    )
}

fn unknown_session(id: &str) -> Response {
    Response::error(ErrorCode::UnknownSession, format!("no session {id:?}"))
}

impl Service {
    pub fn new(ttl: Duration) -> Self {
        Self {
            sessions: Mutex::new(HashMap::new()),
            ttl,
        }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    /// Parses one JSON request and returns the JSON reply.
    pub fn handle_text(&self, text: &str) -> String {
        match parse_request(text) {
            Ok(req) => self.handle(req),
            Err(e) => Response::Error(e),
        }
        .to_json()
    }

    pub fn handle(&self, req: Request) -> Response {
        match req {
            Request::Create {
                game,
                seed,
                sticky,
                ramping,
            } => self.create(&game, seed, sticky, ramping),
            Request::Act {
                session_id,
                action_code,
            } => self.act(&session_id, action_code),
            Request::Reset { session_id } => self.reset(&session_id),
            Request::ReplayLoad { replay } => self.load_replay(&replay),
            Request::ReplayCtl { session_id, op } => self.replay_ctl(&session_id, op),
        }
    }

    fn insert(&self, body: Body) -> String {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let now = Instant::now();
        let session = Session {
            body,
            created_at: now,
            last_used: now,
        };
        lock(&self.sessions).insert(id.clone(), Arc::new(Mutex::new(session)));
        id
    }

    /// Runs `f` on a live session; `None` if the id is unknown.
    fn with_session<R>(&self, id: &str, f: impl FnOnce(&mut Session) -> R) -> Option<R> {
        // Clone the handle so the registry lock is not held while acting.
        let entry = lock(&self.sessions).get(id).cloned()?;
        let mut s = lock(&entry);
        s.last_used = Instant::now();
        Some(f(&mut s))
    }

    fn create(
        &self,
        game: &str,
        seed: Option<u64>,
        sticky: Option<f64>,
        ramping: Option<bool>,
    ) -> Response {
        let game: GameId = match game.parse() {
            Ok(g) => g,
            Err(e) => return Response::error(ErrorCode::UnknownGame, e.to_string()),
        };
        let seed = seed.unwrap_or_else(rand::random);
        let config = EnvConfig::new(game, seed)
            .with_sticky(sticky.unwrap_or(DEFAULT_STICKY_PROB))
            .with_ramping(ramping.unwrap_or(true));
        let env = match EnvSession::new(config.clone()) {
            Ok(env) => env,
            Err(e) => return Response::error(ErrorCode::BadRequest, e.to_string()),
        };
        let body = Interactive { env, score: 0.0 };
        let frame = interactive_frame("", &body, 0.0);
        let session_id = self.insert(Body::Interactive(body));
        Response::Created(Created {
            frame: FrameMessage {
                session_id: session_id.clone(),
                ..frame
            },
            session_id,
            mode: Mode::Interactive,
            game: game.name().to_owned(),
            seed,
            sticky: config.sticky_prob,
            ramping: config.ramping,
            channel_names: game.channel_names().iter().map(|s| s.to_string()).collect(),
        })
    }

    fn act(&self, id: &str, code: i64) -> Response {
        let action = match u8::try_from(code).ok().and_then(Action::from_code) {
            Some(a) => a,
            None => {
                return Response::error(
                    ErrorCode::InvalidAction,
                    format!("action_code {code} is outside 0..=5"),
                )
            }
        };
        self.with_session(id, |s| {
            let Body::Interactive(ref mut i) = s.body else {
                return wrong_mode(Mode::Interactive);
            };
            match i.env.act(action) {
                Ok(t) => {
                    i.score += t.reward;
                    Response::Frame(interactive_frame(id, i, t.reward))
                }
                Err(EnvError::EpisodeOver) => Response::error(
                    ErrorCode::EpisodeOver,
                    "episode is over; send reset to start a new one",
                ),
                Err(e) => Response::error(ErrorCode::BadRequest, e.to_string()),
            }
        })
        .unwrap_or_else(|| unknown_session(id))
    }

    /// Interactive sessions start a new episode; replay sessions rewind.
    fn reset(&self, id: &str) -> Response {
        self.with_session(id, |s| match s.body {
            Body::Interactive(ref mut i) => {
                i.env.reset();
                i.score = 0.0;
                Response::Frame(interactive_frame(id, i, 0.0))
            }
            Body::Replay(ref mut t) => {
                t.cursor = 0;
                t.playing = false;
                Response::Frame(replay_frame(id, t))
            }
        })
        .unwrap_or_else(|| unknown_session(id))
    }

    fn load_replay(&self, text: &str) -> Response {
        let corrupt =
            |e: &dyn std::fmt::Display| Response::error(ErrorCode::CorruptReplay, e.to_string());
        let replay = match Replay::from_jsonl(text) {
            Ok(r) => r,
            Err(e) => return corrupt(&e),
        };
        if let Err(e) = replay.verify() {
            return corrupt(&e);
        }
        let frames = match replay.resimulate() {
            Ok(f) => f,
            Err(e) => return corrupt(&e),
        };
        let config = replay.header.config();
        let initial = match EnvSession::new(config.clone()) {
            Ok(env) => env.observe(),
            Err(e) => return corrupt(&e),
        };
        let mut track = ReplayTrack {
            observations: vec![initial],
            rewards: vec![0.0],
            terminals: vec![false],
            scores: vec![0.0],
            cursor: 0,
            playing: false,
        };
        let mut score = 0.0;
        for f in frames {
            score += f.transition.reward;
            track.observations.push(f.observation);
            track.rewards.push(f.transition.reward);
            track.terminals.push(f.transition.terminal);
            track.scores.push(score);
        }
        let frame = replay_frame("", &track);
        let session_id = self.insert(Body::Replay(track));
        Response::Created(Created {
            frame: FrameMessage {
                session_id: session_id.clone(),
                ..frame
            },
            session_id,
            mode: Mode::Replay,
            game: config.game.name().to_owned(),
            seed: config.seed,
            sticky: config.sticky_prob,
            ramping: config.ramping,
            channel_names: config
                .game
                .channel_names()
                .iter()
                .map(|s| s.to_string())
                .collect(),
        })
    }

    fn replay_ctl(&self, id: &str, op: ReplayOp) -> Response {
        self.with_session(id, |s| {
            let Body::Replay(ref mut t) = s.body else {
                return wrong_mode(Mode::Replay);
            };
            match op {
                ReplayOp::Step => {
                    if t.cursor == t.total_frames() {
                        t.playing = false;
                        return Response::error(
                            ErrorCode::EpisodeOver,
                            "replay is at its last frame",
                        );
                    }
                    t.cursor += 1;
                    if t.cursor == t.total_frames() {
                        t.playing = false;
                    }
                }
                ReplayOp::Seek { frame } => {
                    if frame > t.total_frames() as u64 {
                        return Response::error(
                            ErrorCode::BadRequest,
                            format!("seek to {frame} beyond last frame {}", t.total_frames()),
                        );
                    }
                    t.cursor = frame as usize;
                }
                ReplayOp::Play { fps } => {
                    if !(fps.is_finite() && fps > 0.0) {
                        return Response::error(ErrorCode::BadRequest, "fps must be positive");
                    }
                    t.playing = t.cursor < t.total_frames();
                }
                ReplayOp::Pause => t.playing = false,
            }
            Response::Frame(replay_frame(id, t))
        })
        .unwrap_or_else(|| unknown_session(id))
    }

    /// Whether a replay session is currently in play mode.
    pub fn is_playing(&self, id: &str) -> bool {
        self.with_session(id, |s| matches!(&s.body, Body::Replay(t) if t.playing))
            .unwrap_or(false)
    }

    pub fn session_info(&self, id: &str) -> Option<SessionInfo> {
        self.with_session(id, |s| SessionInfo {
            mode: s.mode(),
            created_at: s.created_at,
            last_used: s.last_used,
        })
    }

    pub fn len(&self) -> usize {
        lock(&self.sessions).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Runs `f` on an interactive session's environment. For tooling and
    /// tests that need to place a game in a specific state.
    pub fn with_env<R>(&self, id: &str, f: impl FnOnce(&mut EnvSession) -> R) -> Option<R> {
        self.with_session(id, |s| match s.body {
            Body::Interactive(ref mut i) => Some(f(&mut i.env)),
            Body::Replay(_) => None,
        })
        .flatten()
    }

    /// Drops sessions idle for longer than the TTL; returns how many.
    pub fn reap(&self, now: Instant) -> usize {
        let mut sessions = lock(&self.sessions);
        let before = sessions.len();
        sessions.retain(|_, s| now.saturating_duration_since(lock(s).last_used) <= self.ttl);
        before - sessions.len()
    }

    pub fn close(&self, id: &str) -> bool {
        lock(&self.sessions).remove(id).is_some()
    }
}
