//! HTTP/WebSocket front end. `/ws` speaks the JSON protocol; `/health`
//! answers "ok"; anything else is served from the optional static dir.

use std::net::SocketAddr;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response as HttpResponse;
use axum::routing::get;
use axum::Router;
use tokio::net::TcpListener;
use tokio::time::{interval, Interval, MissedTickBehavior};
use tower_http::services::ServeDir;

use crate::protocol::{parse_request, ReplayOp, Request, Response};
use crate::service::Service;

pub fn router(service: Arc<Service>, static_dir: Option<std::path::PathBuf>) -> Router {
    let app = Router::new()
        .route("/ws", get(upgrade))
        .route("/health", get(|| async { "ok" }))
        .with_state(service);
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app,
    }
}

async fn upgrade(ws: WebSocketUpgrade, State(service): State<Arc<Service>>) -> HttpResponse {
    ws.on_upgrade(move |socket| connection(socket, service))
}

/// One task per connection. Requests are answered in order; a replay in
/// play mode additionally emits a frame on every tick.
async fn connection(mut socket: WebSocket, service: Arc<Service>) {
    let mut playing: Option<(String, Interval)> = None;
    loop {
        let tick = async {
            match playing.as_mut() {
                Some((_, timer)) => {
                    timer.tick().await;
                }
                None => std::future::pending().await,
            }
        };
        let reply = tokio::select! {
            msg = socket.recv() => {
                let text = match msg {
                    Some(Ok(Message::Text(t))) => t,
                    Some(Ok(Message::Close(_))) | None | Some(Err(_)) => break,
                    Some(Ok(_)) => continue,
                };
                let (reply, change) = dispatch(&service, text.as_str());
                match change {
                    Playback::Start(id, fps) => {
                        let mut timer = interval(Duration::from_secs_f64(1.0 / fps));
                        timer.set_missed_tick_behavior(MissedTickBehavior::Delay);
                        // The first tick fires immediately; skip it so the
                        // reply frame is not followed by an instant step.
                        timer.tick().await;
                        playing = Some((id, timer));
                    }
                    Playback::Stop(id) => {
                        if playing.as_ref().is_some_and(|(p, _)| *p == id) {
                            playing = None;
                        }
                    }
                    Playback::Keep => {}
                }
                reply
            }
            _ = tick => {
                let id = playing.as_ref().map(|(id, _)| id.clone()).unwrap_or_default();
                let reply = service.handle(Request::ReplayCtl { session_id: id.clone(), op: ReplayOp::Step });
                if !service.is_playing(&id) {
                    playing = None;
                }
                reply.to_json()
            }
        };
        if socket.send(Message::Text(reply.into())).await.is_err() {
            break;
        }
    }
}

enum Playback {
    Start(String, f64),
    Stop(String),
    Keep,
}

fn dispatch(service: &Service, text: &str) -> (String, Playback) {
    let req = match parse_request(text) {
        Ok(r) => r,
        Err(e) => return (Response::Error(e).to_json(), Playback::Keep),
    };
    let change = match &req {
        Request::ReplayCtl {
            session_id,
            op: ReplayOp::Play { fps },
        } => Playback::Start(session_id.clone(), *fps),
        Request::ReplayCtl { session_id, .. } | Request::Reset { session_id } => {
            Playback::Stop(session_id.clone())
        }
        _ => Playback::Keep,
    };
    let reply = service.handle(req);
    let change = match change {
        Playback::Start(id, fps) if service.is_playing(&id) => Playback::Start(id, fps),
        Playback::Start(id, _) => Playback::Stop(id),
        other => other,
    };
    // Step and seek leave play mode on only if the session still plays.
    let change = match change {
        Playback::Stop(id) if service.is_playing(&id) => Playback::Keep,
        other => other,
    };
    (reply.to_json(), change)
}

/// Periodically drops idle sessions.
pub fn spawn_reaper(service: Arc<Service>) -> tokio::task::JoinHandle<()> {
    let period = (service.ttl() / 4).max(Duration::from_millis(100));
    tokio::spawn(async move {
        let mut timer = interval(period);
        loop {
            timer.tick().await;
            service.reap(std::time::Instant::now());
        }
    })
}

/// Binds `addr` and serves until the future is dropped. Returns the bound
/// address (useful with port 0) and the server future.
pub async fn bind(
    addr: SocketAddr,
    service: Arc<Service>,
    static_dir: Option<std::path::PathBuf>,
) -> std::io::Result<(
    SocketAddr,
    impl std::future::Future<Output = std::io::Result<()>>,
)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    let app = router(service, static_dir);
    Ok((local, async move { axum::serve(listener, app).await }))
}
