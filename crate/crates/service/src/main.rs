use std::net::SocketAddr;
use std::path::PathBuf;

use anyhow::Context;
use clap::Parser;
use glyphometrics::io::load_corpus;
use glyphometrics_service::{router, AppState};

/// Serve a corpus document for annotation over HTTP.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Corpus JSON file; POST /save writes back to it.
    corpus: PathBuf,
    #[arg(long, default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    #[arg(long, default_value_t = 8080)]
    port: u16,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let doc = load_corpus(&args.corpus).with_context(|| format!("loading {}", args.corpus.display()))?;
    let addr = SocketAddr::new(args.host, args.port);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .with_context(|| format!("binding {addr}"))?;
    eprintln!("serving {} on http://{addr}", args.corpus.display());
    let state = AppState::new(doc, &args.corpus)?;
    axum::serve(listener, router(state)).await?;
    Ok(())
}
