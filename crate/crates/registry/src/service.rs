//! Registry wire protocol (JSON over HTTP):
//!
//!   GET  /registry/{id}/root               -> {root, version, depth}
//!   GET  /registry/{id}/deltas?since=v     -> ordered deltas v+1..
//!   GET  /registry/{id}/nodes?maxLevel=k   -> upper-tree nodes for hybrid sync
//!   POST /registry/{id}/status             -> issuer-signed change set
//!
//! A single writer mutates each registry; readers always observe a
//! consistent (root, version) snapshot through the lock.

use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::sync::RwLock;

use zkcred_arith::{eddsa_sign, eddsa_verify, CurvePoint, FieldElement, Signature, SigningKeyPair};
use zkcred_core::canonical_json_bytes;

use crate::bitmap::{RevocationRegistry, Status};
use crate::delta::{StatusChange, StatusDelta};
use crate::store::RegistryStore;
use crate::RegistryError;

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct RootResponse {
    pub root: FieldElement,
    pub version: u64,
    pub depth: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct DeltasResponse {
    pub deltas: Vec<StatusDelta>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct NodeEntry {
    pub index: u64,
    pub value: FieldElement,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct NodesResponse {
    pub depth: u32,
    pub nodes: Vec<NodeEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StatusUpdateRequest {
    /// Version the change set was built against; rejected when stale.
    pub base_version: u64,
    pub changes: Vec<StatusChange>,
    pub signature: Signature,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct StatusUpdateResponse {
    pub delta: StatusDelta,
    pub root: FieldElement,
}

/// Message the issuer signs to authorize a change set: the compressed
/// canonical serialization of (registry id, base version, changes).
pub fn status_update_message(
    registry_id: &str,
    base_version: u64,
    changes: &[StatusChange],
) -> FieldElement {
    #[derive(Serialize)]
    struct Payload<'a> {
        registry: &'a str,
        base_version: u64,
        changes: &'a [StatusChange],
    }
    let bytes = canonical_json_bytes(&Payload {
        registry: registry_id,
        base_version,
        changes,
    })
    .expect("serializable payload");
    zkcred_core::encode_long_string(&bytes)
}

/// Convenience for issuers: build a signed update request.
pub fn sign_status_update(
    issuer: &SigningKeyPair,
    registry_id: &str,
    base_version: u64,
    changes: Vec<StatusChange>,
) -> StatusUpdateRequest {
    let msg = status_update_message(registry_id, base_version, &changes);
    StatusUpdateRequest {
        base_version,
        changes,
        signature: eddsa_sign(issuer, msg),
    }
}

pub struct RegistryEntry {
    pub registry: RwLock<RevocationRegistry>,
    pub issuer_pk: CurvePoint,
    pub store: Option<RegistryStore>,
}

#[derive(Default)]
pub struct ServiceState {
    registries: HashMap<String, Arc<RegistryEntry>>,
}

impl ServiceState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        id: impl Into<String>,
        registry: RevocationRegistry,
        issuer_pk: CurvePoint,
        store: Option<RegistryStore>,
    ) {
        self.registries.insert(
            id.into(),
            Arc::new(RegistryEntry {
                registry: RwLock::new(registry),
                issuer_pk,
                store,
            }),
        );
    }

    fn entry(&self, id: &str) -> Result<Arc<RegistryEntry>, RegistryError> {
        self.registries
            .get(id)
            .cloned()
            .ok_or_else(|| RegistryError::UnknownRegistry(id.to_string()))
    }
}

type AppState = Arc<ServiceState>;

fn error_response(e: RegistryError) -> (StatusCode, Json<serde_json::Value>) {
    let code = match &e {
        RegistryError::UnknownRegistry(_) => StatusCode::NOT_FOUND,
        RegistryError::BadAuthorization => StatusCode::FORBIDDEN,
        RegistryError::IdOutOfRange { .. } | RegistryError::VersionGap { .. } => {
            StatusCode::BAD_REQUEST
        }
        _ => StatusCode::INTERNAL_SERVER_ERROR,
    };
    (code, Json(serde_json::json!({ "error": e.to_string() })))
}

async fn get_root(
    State(st): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<RootResponse>, (StatusCode, Json<serde_json::Value>)> {
    let entry = st.entry(&id).map_err(error_response)?;
    let reg = entry.registry.read().await;
    Ok(Json(RootResponse {
        root: reg.root(),
        version: reg.version(),
        depth: reg.depth(),
    }))
}

#[derive(Deserialize)]
struct SinceQuery {
    #[serde(default)]
    since: u64,
}

async fn get_deltas(
    State(st): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<SinceQuery>,
) -> Result<Json<DeltasResponse>, (StatusCode, Json<serde_json::Value>)> {
    let entry = st.entry(&id).map_err(error_response)?;
    let reg = entry.registry.read().await;
    let deltas = reg
        .delta_log()
        .iter()
        .filter(|d| d.version > q.since)
        .cloned()
        .collect();
    Ok(Json(DeltasResponse { deltas }))
}

#[derive(Deserialize)]
struct MaxLevelQuery {
    #[serde(rename = "maxLevel", default)]
    max_level: u32,
}

async fn get_nodes(
    State(st): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<MaxLevelQuery>,
) -> Result<Json<NodesResponse>, (StatusCode, Json<serde_json::Value>)> {
    let entry = st.entry(&id).map_err(error_response)?;
    let reg = entry.registry.read().await;
    let nodes = reg
        .nodes_up_to_level(q.max_level)
        .into_iter()
        .map(|(index, value)| NodeEntry { index, value })
        .collect();
    Ok(Json(NodesResponse {
        depth: reg.depth(),
        nodes,
    }))
}

async fn post_status(
    State(st): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<StatusUpdateRequest>,
) -> Result<Json<StatusUpdateResponse>, (StatusCode, Json<serde_json::Value>)> {
    let entry = st.entry(&id).map_err(error_response)?;
    let msg = status_update_message(&id, req.base_version, &req.changes);
    let authorized = eddsa_verify(&entry.issuer_pk, msg, &req.signature)
        .map_err(|e| error_response(e.into()))?;
    if !authorized {
        return Err(error_response(RegistryError::BadAuthorization));
    }
    let mut reg = entry.registry.write().await;
    if req.base_version != reg.version() {
        return Err(error_response(RegistryError::VersionGap {
            local: reg.version(),
            got: req.base_version,
        }));
    }
    let changes: Vec<(u64, Status)> = req.changes.iter().map(|c| (c.id, c.status)).collect();
    let delta = reg.apply_changes(&changes).map_err(error_response)?;
    if let Some(store) = &entry.store {
        store
            .append_delta(&delta)
            .and_then(|_| store.maybe_snapshot(&reg))
            .map_err(error_response)?;
    }
    Ok(Json(StatusUpdateResponse {
        delta,
        root: reg.root(),
    }))
}

/// Build the axum router for a set of registries.
pub fn registry_service(state: ServiceState) -> Router {
    Router::new()
        .route("/registry/:id/root", get(get_root))
        .route("/registry/:id/deltas", get(get_deltas))
        .route("/registry/:id/nodes", get(get_nodes))
        .route("/registry/:id/status", post(post_status))
        .with_state(Arc::new(state))
}
