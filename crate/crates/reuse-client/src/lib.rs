//! Typed HTTP client for the reuse repository service.
//!
//! [`wire`] holds the request/response bodies shared with the server; the
//! blocking [`ApiClient`] is a thin, synchronous veneer over them so
//! command-line callers need no runtime of their own.

use reuse_core::store::ListFilter;
use reuse_core::{AssetFields, AssetId, AssetRecord, PipelineOutcome, Query, RankedHit};
use url::Url;

pub mod wire {
    //! Bodies that cross the HTTP boundary. Everything domain-shaped
    //! (records, queries, hits, reports) serializes with its own schema;
    //! these types only add the envelopes around them.

    use std::collections::BTreeMap;

    use serde::{Deserialize, Serialize};

    use reuse_core::engines::Tunables;
    use reuse_core::store::IndexStats;
    use reuse_core::{AssetFields, AssetId, CorpusSpec, EvalOptions, Query, RankedHit};

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    pub struct Health {
        pub status: String,
        pub record_count: usize,
    }

    /// Effective server-side configuration, reported for diagnostics.
    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    pub struct ServerInfo {
        pub repository: String,
        pub tunables: Tunables,
    }

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    pub struct AddAsset {
        pub fields: AssetFields,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub id: Option<AssetId>,
    }

    #[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
    pub struct Added {
        pub id: AssetId,
    }

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    pub struct Hits {
        pub hits: Vec<RankedHit>,
    }

    /// Search-or-register request: exactly one of `query` (typed) or `raw`
    /// (text spread across the text engines) must be present.
    #[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
    pub struct WorkflowSearch {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub query: Option<Query>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub raw: Option<String>,
        /// Result-list size for `raw`; typed queries carry their own k.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub k: Option<usize>,
        /// Overrides the server's acceptance threshold for this call.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub threshold: Option<f64>,
    }

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    pub struct Instantiate {
        pub id: AssetId,
        /// Hole name -> expression source; parsed and type-checked server-side.
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        pub bindings: BTreeMap<String, String>,
    }

    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    pub struct Instantiated {
        pub program: String,
    }

    #[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
    pub struct EvalRequest {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub spec: Option<CorpusSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pub options: Option<EvalOptions>,
    }

    #[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
    pub struct Rebuilt {
        pub stats: IndexStats,
    }

    /// Uniform error body for every non-2xx response.
    #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
    pub struct ErrorBody {
        pub kind: String,
        pub message: String,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    /// The server answered with a structured error body.
    #[error("{kind}: {message}")]
    Api {
        status: u16,
        kind: String,
        message: String,
    },

    /// Connection, timeout, or body-decoding failure.
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),

    #[error("invalid base url: {0}")]
    BadUrl(String),
}

impl ClientError {
    pub fn status(&self) -> Option<u16> {
        match self {
            ClientError::Api { status, .. } => Some(*status),
            _ => None,
        }
    }

    /// True when the failure means "no such asset" rather than a fault.
    pub fn is_not_found(&self) -> bool {
        self.status() == Some(404)
    }
}

pub struct ApiClient {
    base: Url,
    http: reqwest::blocking::Client,
}

impl ApiClient {
    pub fn new(base: &str) -> Result<ApiClient, ClientError> {
        // a trailing slash makes Url::join treat the last segment as a dir
        let normalized = if base.ends_with('/') {
            base.to_string()
        } else {
            format!("{base}/")
        };
        let base = Url::parse(&normalized).map_err(|e| ClientError::BadUrl(e.to_string()))?;
        Ok(ApiClient {
            base,
            http: reqwest::blocking::Client::new(),
        })
    }

    pub fn base_url(&self) -> &Url {
        &self.base
    }

    fn url(&self, path: &str) -> Result<Url, ClientError> {
        self.base
            .join(path)
            .map_err(|e| ClientError::BadUrl(e.to_string()))
    }

    /// Decode a 2xx body, or surface the server's error envelope.
    fn accept<T: serde::de::DeserializeOwned>(
        response: reqwest::blocking::Response,
    ) -> Result<T, ClientError> {
        let status = response.status();
        if status.is_success() {
            return Ok(response.json()?);
        }
        let message = response.text().unwrap_or_default();
        match serde_json::from_str::<wire::ErrorBody>(&message) {
            Ok(body) => Err(ClientError::Api {
                status: status.as_u16(),
                kind: body.kind,
                message: body.message,
            }),
            Err(_) => Err(ClientError::Api {
                status: status.as_u16(),
                kind: "http".to_string(),
                message: if message.is_empty() {
                    status.to_string()
                } else {
                    message
                },
            }),
        }
    }

    pub fn health(&self) -> Result<wire::Health, ClientError> {
        Self::accept(self.http.get(self.url("health")?).send()?)
    }

    pub fn server_info(&self) -> Result<wire::ServerInfo, ClientError> {
        Self::accept(self.http.get(self.url("config")?).send()?)
    }

    pub fn add_asset(
        &self,
        fields: AssetFields,
        id: Option<AssetId>,
    ) -> Result<AssetId, ClientError> {
        let body = wire::AddAsset { fields, id };
        let added: wire::Added =
            Self::accept(self.http.post(self.url("assets")?).json(&body).send()?)?;
        Ok(added.id)
    }

    pub fn get_asset(&self, id: AssetId) -> Result<AssetRecord, ClientError> {
        Self::accept(
            self.http
                .get(self.url(&format!("assets/{}", id.render()))?)
                .send()?,
        )
    }

    pub fn remove_asset(&self, id: AssetId) -> Result<AssetRecord, ClientError> {
        Self::accept(
            self.http
                .delete(self.url(&format!("assets/{}", id.render()))?)
                .send()?,
        )
    }

    pub fn list_assets(&self, filter: &ListFilter) -> Result<Vec<AssetRecord>, ClientError> {
        Self::accept(
            self.http
                .get(self.url("assets")?)
                .query(filter)
                .send()?,
        )
    }

    /// Single-engine ranking for a typed query; no threshold semantics.
    pub fn search(&self, query: &Query) -> Result<Vec<RankedHit>, ClientError> {
        let hits: wire::Hits =
            Self::accept(self.http.post(self.url("search")?).json(query).send()?)?;
        Ok(hits.hits)
    }

    /// Full search-or-register workflow; answers found or not-found+stub.
    pub fn search_workflow(
        &self,
        request: &wire::WorkflowSearch,
    ) -> Result<PipelineOutcome, ClientError> {
        Self::accept(
            self.http
                .post(self.url("search/auto")?)
                .json(request)
                .send()?,
        )
    }

    pub fn instantiate(&self, request: &wire::Instantiate) -> Result<String, ClientError> {
        let done: wire::Instantiated = Self::accept(
            self.http
                .post(self.url("instantiate")?)
                .json(request)
                .send()?,
        )?;
        Ok(done.program)
    }

    pub fn run_eval(
        &self,
        request: &wire::EvalRequest,
    ) -> Result<reuse_core::EvaluationReport, ClientError> {
        Self::accept(self.http.post(self.url("eval")?).json(request).send()?)
    }

    pub fn rebuild_indexes(&self) -> Result<reuse_core::store::IndexStats, ClientError> {
        let rebuilt: wire::Rebuilt = Self::accept(
            self.http
                .post(self.url("admin/rebuild-indexes")?)
                .send()?,
        )?;
        Ok(rebuilt.stats)
    }
}
