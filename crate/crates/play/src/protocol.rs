//! JSON message schema. Every message carries `v` (protocol version) and a
//! `type` tag.

use minatar_core::ActiveCell;
use serde::{Deserialize, Serialize};

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Request {
    Create {
        game: String,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default)]
        sticky: Option<f64>,
        #[serde(default)]
        ramping: Option<bool>,
    },
    Act {
        session_id: String,
        action_code: i64,
    },
    Reset {
        session_id: String,
    },
    ReplayLoad {
        /// Replay file contents (JSONL).
        replay: String,
    },
    ReplayCtl {
        session_id: String,
        #[serde(flatten)]
        op: ReplayOp,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ReplayOp {
    Step,
    Seek {
        frame: u64,
    },
    /// Server pushes frames at `fps` until paused or the end is reached.
    Play {
        #[serde(default = "default_fps")]
        fps: f64,
    },
    Pause,
}

fn default_fps() -> f64 {
    10.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub v: u32,
    #[serde(flatten)]
    pub body: T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Interactive,
    Replay,
}

/// Position of a replay session's cursor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayCursor {
    pub total_frames: u64,
    pub playing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameMessage {
    pub session_id: String,
    pub frame_count: u64,
    /// Active cells as `[channel, row, col]`.
    pub cells: Vec<ActiveCell>,
    /// Reward of the act that produced this frame (0 for an initial frame).
    pub reward: f64,
    pub terminal: bool,
    /// Sum of rewards since the episode started.
    pub score: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay: Option<ReplayCursor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Created {
    pub session_id: String,
    pub mode: Mode,
    pub game: String,
    pub seed: u64,
    pub sticky: f64,
    pub ramping: bool,
    pub channel_names: Vec<String>,
    pub frame: FrameMessage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadRequest,
    UnknownGame,
    UnknownSession,
    InvalidAction,
    EpisodeOver,
    CorruptReplay,
    WrongMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorMessage {
    pub code: ErrorCode,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Response {
    Created(Created),
    Frame(FrameMessage),
    Error(ErrorMessage),
}

impl Response {
    pub fn error(code: ErrorCode, message: impl Into<String>) -> Self {
        Response::Error(ErrorMessage {
            code,
            message: message.into(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&Envelope {
            v: PROTOCOL_VERSION,
            body: self,
        })
        .expect("responses serialize")
    }

    pub fn error_code(&self) -> Option<ErrorCode> {
        match self {
            Response::Error(e) => Some(e.code),
            _ => None,
        }
    }

    pub fn frame(&self) -> Option<&FrameMessage> {
        match self {
            Response::Frame(f) => Some(f),
            Response::Created(c) => Some(&c.frame),
            Response::Error(_) => None,
        }
    }
}

/// Parses a request, checking the version field.
pub fn parse_request(text: &str) -> Result<Request, ErrorMessage> {
    let bad = |message: String| ErrorMessage {
        code: ErrorCode::BadRequest,
        message,
    };
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    match value.get("v").and_then(|v| v.as_u64()) {
        Some(v) if v == u64::from(PROTOCOL_VERSION) => {}
        Some(v) => return Err(bad(format!("unsupported protocol version {v}"))),
        None => return Err(bad("missing protocol version `v`".into())),
    }
    let env: Envelope<Request> = serde_json::from_value(value).map_err(|e| bad(e.to_string()))?;
    Ok(env.body)
}
