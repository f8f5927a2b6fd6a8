use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use clap::Parser;
use minatar_play::{server, Service};

/// Serve MinAtar sessions over WebSocket.
#[derive(Parser)]
#[command(name = "minatar-play", version)]
struct Args {
    /// Address to listen on.
    #[arg(long, default_value = "127.0.0.1:8765")]
    listen: SocketAddr,
    /// Idle seconds before a session is dropped.
    #[arg(long, default_value_t = 600)]
    session_ttl: u64,
    /// Directory of static assets (e.g. the browser UI) served at `/`.
    #[arg(long)]
    static_dir: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let service = Arc::new(Service::new(Duration::from_secs(args.session_ttl)));
    server::spawn_reaper(service.clone());
    let (addr, serve) = server::bind(args.listen, service, args.static_dir).await?;
    eprintln!("listening on ws://{addr}/ws");
    tokio::select! {
        r = serve => r?,
        _ = tokio::signal::ctrl_c() => eprintln!("shutting down"),
    }
    Ok(())
}
