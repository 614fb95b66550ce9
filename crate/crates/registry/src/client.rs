//! Wallet-side registry state: either a full local mirror kept current by
//! replaying witness deltas, or (see `hybrid`) a bottom subtree plus the
//! upper node levels.

use serde::{Deserialize, Serialize};

use zkcred_arith::FieldElement;

use crate::bitmap::{NonRevocationWitness, RevocationRegistry, Status};
use crate::delta::StatusDelta;
use crate::service::{DeltasResponse, NodesResponse, RootResponse};
use crate::RegistryError;

/// Full-mirror client state. Internally a registry without a delta log of
/// its own: deltas arrive from the service.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClientRegistryState {
    registry: RevocationRegistry,
}

impl ClientRegistryState {
    pub fn new(depth: u32) -> Result<Self, RegistryError> {
        Ok(ClientRegistryState {
            registry: RevocationRegistry::new(depth)?,
        })
    }

    pub fn version(&self) -> u64 {
        self.registry.version()
    }

    pub fn root(&self) -> FieldElement {
        self.registry.root()
    }

    /// Apply a contiguous run of deltas. A gap or a replayed version is a
    /// sync error; the state is untouched on error.
    pub fn apply_deltas(&mut self, deltas: &[StatusDelta]) -> Result<(), RegistryError> {
        for (i, d) in deltas.iter().enumerate() {
            if d.version != self.registry.version() + 1 + i as u64 {
                return Err(RegistryError::VersionGap {
                    local: self.registry.version() + i as u64,
                    got: d.version,
                });
            }
        }
        for d in deltas {
            let changes: Vec<(u64, Status)> = d.changes.iter().map(|c| (c.id, c.status)).collect();
            self.registry.apply_changes(&changes)?;
        }
        Ok(())
    }

    pub fn witness(&self, id: u64) -> Result<NonRevocationWitness, RegistryError> {
        self.registry.witness(id)
    }

    pub fn status(&self, id: u64) -> Result<Status, RegistryError> {
        self.registry.status(id)
    }
}

/// Thin HTTP client for the registry wire protocol.
pub struct RegistryClient {
    base: String,
    registry_id: String,
    http: reqwest::Client,
}

impl RegistryClient {
    pub fn new(base: impl Into<String>, registry_id: impl Into<String>) -> Self {
        RegistryClient {
            base: base.into(),
            registry_id: registry_id.into(),
            http: reqwest::Client::new(),
        }
    }

    fn url(&self, tail: &str) -> String {
        format!("{}/registry/{}/{}", self.base, self.registry_id, tail)
    }

    pub async fn fetch_root(&self) -> Result<RootResponse, RegistryError> {
        self.get_json(self.url("root")).await
    }

    pub async fn fetch_deltas(&self, since: u64) -> Result<Vec<StatusDelta>, RegistryError> {
        let r: DeltasResponse = self.get_json(format!("{}?since={since}", self.url("deltas"))).await?;
        Ok(r.deltas)
    }

    pub async fn fetch_nodes(&self, max_level: u32) -> Result<NodesResponse, RegistryError> {
        self.get_json(format!("{}?maxLevel={max_level}", self.url("nodes")))
            .await
    }

    async fn get_json<T: serde::de::DeserializeOwned>(&self, url: String) -> Result<T, RegistryError> {
        let resp = self
            .http
            .get(&url)
            .send()
            .await
            .map_err(|e| RegistryError::Transport(e.to_string()))?;
        if !resp.status().is_success() {
            return Err(RegistryError::Transport(format!(
                "{} -> {}",
                url,
                resp.status()
            )));
        }
        resp.json::<T>()
            .await
            .map_err(|e| RegistryError::Transport(e.to_string()))
    }

    /// Pull and apply any deltas newer than the local version.
    pub async fn sync(&self, state: &mut ClientRegistryState) -> Result<u64, RegistryError> {
        let deltas = self.fetch_deltas(state.version()).await?;
        let n = deltas.len() as u64;
        state.apply_deltas(&deltas)?;
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_delta_list_is_identity() {
        let mut st = ClientRegistryState::new(3).unwrap();
        let root = st.root();
        st.apply_deltas(&[]).unwrap();
        assert_eq!(st.root(), root);
        assert_eq!(st.version(), 0);
    }

    #[test]
    fn out_of_order_deltas_rejected() {
        let mut st = ClientRegistryState::new(3).unwrap();
        let d2 = StatusDelta {
            version: 2,
            changes: vec![],
        };
        assert!(matches!(
            st.apply_deltas(&[d2]),
            Err(RegistryError::VersionGap { .. })
        ));
    }
}
