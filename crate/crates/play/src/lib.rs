//! Session server for MinAtar environments.
//!
//! Clients open a WebSocket at `/ws` and exchange JSON text messages, each
//! tagged with `v` and `type`. A `create` starts an interactive session and
//! answers `created` with the channel names and the first frame; each `act`
//! advances exactly one frame. `replay_load` turns a replay file into a
//! session driven by `replay_ctl` (step, seek, play, pause).
//!
//! ```
//! use minatar_play::Service;
//!
//! let service = Service::default();
//! let reply = service.handle_text(r#"{"v":1,"type":"create","game":"breakout","seed":3}"#);
//! assert!(reply.contains(r#""type":"created""#));
//! ```

pub mod protocol;
pub mod server;
pub mod service;

pub use protocol::{
    parse_request, Created, ErrorCode, ErrorMessage, FrameMessage, Mode, ReplayCursor, ReplayOp,
    Request, Response, PROTOCOL_VERSION,
};
pub use service::{Service, SessionInfo, DEFAULT_SESSION_TTL};
