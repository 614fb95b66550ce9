//! Holder-side state: credentials with their schemas, registry mirrors
//! kept current by deltas, the binding key pair and cached proving keys.
//! The private binding key never serializes into presentations or logs.

use std::collections::BTreeMap;

use zkcred_arith::{eddsa_sign, FieldElement, SigningKeyPair};
use zkcred_backend::ProvingKey;
use zkcred_circuits::CredentialEvidence;
use zkcred_core::{Credential, Schema};
use zkcred_registry::{ClientRegistryState, Status};

use crate::ProtocolError;

#[derive(Clone, Debug)]
pub struct StoredCredential {
    pub credential: Credential,
    pub schema: Schema,
    /// Registry the credential's ref points to.
    pub registry_id: String,
}

pub struct Wallet {
    binding_key: SigningKeyPair,
    pub credentials: Vec<StoredCredential>,
    /// Local registry mirrors by registry id.
    pub registries: BTreeMap<String, ClientRegistryState>,
    /// Proving keys by circuit digest (hex).
    pub proving_keys: BTreeMap<String, ProvingKey>,
}

impl Wallet {
    pub fn new(binding_key: SigningKeyPair) -> Self {
        Wallet {
            binding_key,
            credentials: Vec::new(),
            registries: BTreeMap::new(),
            proving_keys: BTreeMap::new(),
        }
    }

    pub fn binding_public(&self) -> zkcred_arith::CurvePoint {
        self.binding_key.public
    }

    /// Sign with the binding key; the signature only ever enters circuit
    /// witnesses.
    pub(crate) fn sign_binding(&self, msg: FieldElement) -> zkcred_arith::Signature {
        eddsa_sign(&self.binding_key, msg)
    }

    pub fn store_credential(&mut self, credential: Credential, schema: Schema, registry_id: &str) {
        self.credentials.push(StoredCredential {
            credential,
            schema,
            registry_id: registry_id.to_string(),
        });
    }

    pub fn install_proving_key(&mut self, key: ProvingKey) {
        self.proving_keys
            .insert(key.circuit_digest.to_hex(), key);
    }

    pub fn proving_key(&self, digest: &FieldElement) -> Result<&ProvingKey, ProtocolError> {
        self.proving_keys
            .get(&digest.to_hex())
            .ok_or_else(|| ProtocolError::MissingProvingKey(digest.to_hex()))
    }

    /// Find a stored credential matching schema, trusted issuers and
    /// expiry/revocation status.
    pub fn find_matching(
        &self,
        schema_hash: FieldElement,
        registry_ref: FieldElement,
        trusted_issuers: &[zkcred_arith::CurvePoint],
        timestamp: u64,
    ) -> Result<usize, ProtocolError> {
        for (i, stored) in self.credentials.iter().enumerate() {
            let c = &stored.credential;
            if c.meta[zkcred_core::META_SCHEMA_HASH] != schema_hash {
                continue;
            }
            if c.meta[zkcred_core::META_REGISTRY_REF] != registry_ref {
                continue;
            }
            if !trusted_issuers.is_empty() && !trusted_issuers.contains(&c.issuer_pk) {
                continue;
            }
            return match self.credential_usable(i, timestamp) {
                Ok(()) => Ok(i),
                Err(e) => Err(e),
            };
        }
        Err(ProtocolError::NoMatchingCredential)
    }

    fn credential_usable(&self, index: usize, timestamp: u64) -> Result<(), ProtocolError> {
        let stored = &self.credentials[index];
        let c = &stored.credential;
        match c.expiration_ts() {
            Some(exp) if exp > timestamp => {}
            _ => return Err(ProtocolError::Expired),
        }
        let reg = self
            .registries
            .get(&stored.registry_id)
            .ok_or(ProtocolError::StaleRegistry)?;
        let id = c.revocation_id().ok_or(ProtocolError::NoMatchingCredential)?;
        if reg.status(id)? == Status::Revoked {
            return Err(ProtocolError::Revoked);
        }
        Ok(())
    }

    /// Evidence bundle for one credential: leaves, signatures and a fresh
    /// non-revocation witness from the local mirror.
    pub(crate) fn evidence(
        &self,
        index: usize,
        binding_msg: Option<FieldElement>,
    ) -> Result<CredentialEvidence, ProtocolError> {
        let stored = &self.credentials[index];
        let c = &stored.credential;
        let reg = self
            .registries
            .get(&stored.registry_id)
            .ok_or(ProtocolError::StaleRegistry)?;
        let id = c.revocation_id().ok_or(ProtocolError::NoMatchingCredential)?;
        let witness = reg.witness(id).map_err(|e| match e {
            zkcred_registry::RegistryError::Revoked(_) => ProtocolError::Revoked,
            other => ProtocolError::Registry(other),
        })?;
        let holder_sig = binding_msg.map(|m| {
            let sig = self.sign_binding(m);
            CredentialEvidence::sig_tuple(&sig)
        });
        Ok(CredentialEvidence {
            meta: c.meta.to_vec(),
            content: c.content.clone(),
            issuer_pk: (c.issuer_pk.x, c.issuer_pk.y),
            issuer_sig: CredentialEvidence::sig_tuple(&c.signature),
            holder_sig,
            registry_leaf: witness.leaf_value,
            registry_siblings: witness.path.siblings,
            registry_root: witness.root,
        })
    }
}
