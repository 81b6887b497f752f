use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tracing_subscriber::EnvFilter;

use reuse_core::engines::Tunables;
use reuse_core::Repository;

/// Repository service: stores reusable software assets and answers the six
/// retrieval methods over HTTP/JSON.
#[derive(Debug, Parser)]
#[command(name = "reuse-server", version)]
struct Args {
    /// Repository directory (created when missing).
    #[arg(long, env = "REUSE_REPO")]
    repo: PathBuf,

    /// Listen address.
    #[arg(long, default_value = "127.0.0.1:7878")]
    bind: SocketAddr,

    /// Acceptance threshold for the search-or-register workflow.
    #[arg(long, default_value_t = Tunables::default().acceptance_threshold)]
    threshold: f64,

    /// Reciprocal-rank fusion constant.
    #[arg(long, default_value_t = Tunables::default().fusion_constant)]
    fusion_constant: f64,

    /// Evaluation step budget for executing candidate programs.
    #[arg(long, default_value_t = Tunables::default().step_budget)]
    step_budget: u64,

    /// Default result-list size.
    #[arg(long, default_value_t = Tunables::default().default_k)]
    k: usize,
}

fn tunables_from(args: &Args) -> Tunables {
    Tunables {
        step_budget: args.step_budget,
        fusion_constant: args.fusion_constant,
        acceptance_threshold: args.threshold,
        default_k: args.k,
        ..Tunables::default()
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .init();

    let args = Args::parse();
    let tunables = tunables_from(&args);

    let repo = match Repository::open(&args.repo, true) {
        Ok(repo) => repo,
        Err(e) => {
            tracing::error!("cannot open repository at {}: {e}", args.repo.display());
            return ExitCode::FAILURE;
        }
    };
    tracing::info!(
        "repository {} with {} records",
        args.repo.display(),
        repo.record_count()
    );
    tracing::debug!("{}", reuse_server::describe(&tunables));

    let app = reuse_server::app(repo, tunables);
    let listener = match tokio::net::TcpListener::bind(args.bind).await {
        Ok(listener) => listener,
        Err(e) => {
            tracing::error!("cannot bind {}: {e}", args.bind);
            return ExitCode::FAILURE;
        }
    };
    tracing::info!("listening on {}", args.bind);

    let served = axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
            tracing::info!("shutting down");
        })
        .await;
    match served {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            tracing::error!("server error: {e}");
            ExitCode::FAILURE
        }
    }
}
