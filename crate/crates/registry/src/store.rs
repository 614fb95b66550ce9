//! Append-only delta log plus periodic full snapshots; recovery replays
//! the log over the newest snapshot.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use crate::bitmap::RevocationRegistry;
use crate::delta::StatusDelta;
use crate::RegistryError;

pub struct RegistryStore {
    dir: PathBuf,
    snapshot_every: u64,
}

impl RegistryStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, RegistryError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(RegistryStore {
            dir,
            snapshot_every: 64,
        })
    }

    fn snapshot_path(&self) -> PathBuf {
        self.dir.join("snapshot.json")
    }

    fn log_path(&self) -> PathBuf {
        self.dir.join("deltas.jsonl")
    }

    pub fn save_snapshot(&self, reg: &RevocationRegistry) -> Result<(), RegistryError> {
        let tmp = self.dir.join("snapshot.json.tmp");
        fs::write(&tmp, serde_json::to_vec(reg)?)?;
        fs::rename(tmp, self.snapshot_path())?;
        Ok(())
    }

    pub fn append_delta(&self, delta: &StatusDelta) -> Result<(), RegistryError> {
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.log_path())?;
        let mut line = serde_json::to_vec(delta)?;
        line.push(b'\n');
        f.write_all(&line)?;
        Ok(())
    }

    /// Snapshot when the version crosses the snapshot interval.
    pub fn maybe_snapshot(&self, reg: &RevocationRegistry) -> Result<(), RegistryError> {
        if reg.version() % self.snapshot_every == 0 {
            self.save_snapshot(reg)?;
        }
        Ok(())
    }

    /// Recover: newest snapshot if present (else a fresh registry of the
    /// given depth), then replay logged deltas past its version.
    pub fn load(&self, depth: u32) -> Result<RevocationRegistry, RegistryError> {
        let mut reg = if self.snapshot_path().exists() {
            serde_json::from_slice(&fs::read(self.snapshot_path())?)?
        } else {
            RevocationRegistry::new(depth)?
        };
        if self.log_path().exists() {
            let raw = fs::read_to_string(self.log_path())?;
            for line in raw.lines() {
                if line.trim().is_empty() {
                    continue;
                }
                let delta: StatusDelta = serde_json::from_str(line)?;
                if delta.version <= reg.version() {
                    continue;
                }
                if delta.version != reg.version() + 1 {
                    return Err(RegistryError::VersionGap {
                        local: reg.version(),
                        got: delta.version,
                    });
                }
                let changes: Vec<_> = delta.changes.iter().map(|c| (c.id, c.status)).collect();
                reg.apply_changes(&changes)?;
            }
        }
        Ok(reg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitmap::Status;

    #[test]
    fn recovery_replays_log_over_snapshot() {
        let dir = tempfile::tempdir().unwrap();
        let store = RegistryStore::open(dir.path()).unwrap();
        let mut reg = RevocationRegistry::new(4).unwrap();
        let d1 = reg.set_status(3, Status::Revoked).unwrap();
        store.append_delta(&d1).unwrap();
        store.save_snapshot(&reg).unwrap();
        let d2 = reg.set_status(900, Status::Revoked).unwrap();
        store.append_delta(&d2).unwrap();
        let d3 = reg.set_status(3, Status::Valid).unwrap();
        store.append_delta(&d3).unwrap();

        let recovered = store.load(4).unwrap();
        assert_eq!(recovered.root(), reg.root());
        assert_eq!(recovered.version(), 3);
    }
}
