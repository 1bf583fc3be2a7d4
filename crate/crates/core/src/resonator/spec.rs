use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{build_groups, PrimeGroups, ResonatorParams, ResonatorSet, Scales};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Serializable summary of a built resonator. The digest covers every other
/// field and keys experiment caches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonatorSpec {
    pub q: u32,
    pub params: ResonatorParams,
    pub scales: Scales,
    #[serde(with = "crate::real::string")]
    pub offset: f64,
    #[serde(with = "crate::real::string")]
    pub psi_scale: f64,
    pub window_degrees: Option<(usize, usize)>,
    pub group_degrees: Vec<Option<(usize, usize)>>,
    pub group_sizes: Vec<usize>,
    pub caps: Vec<u64>,
    pub set_size: u128,
    pub caps_binding: bool,
    pub degenerate: bool,
    pub digest: String,
}

impl ResonatorSpec {
    pub fn from_groups(groups: &PrimeGroups) -> ResonatorSpec {
        let mut spec = ResonatorSpec {
            q: groups.field().q(),
            params: groups.params().clone(),
            scales: groups.scales(),
            offset: groups.offset(),
            psi_scale: groups.psi_scale(),
            window_degrees: groups.window_degrees(),
            group_degrees: groups.groups().iter().map(|g| g.degrees).collect(),
            group_sizes: groups.group_sizes(),
            caps: groups.caps(),
            set_size: ResonatorSet::count(groups),
            caps_binding: groups.caps_binding(),
            degenerate: groups.is_degenerate(),
            digest: String::new(),
        };
        spec.digest = spec.compute_digest();
        spec
    }

    fn compute_digest(&self) -> String {
        let mut body = self.clone();
        body.digest.clear();
        let bytes = serde_json::to_vec(&body).expect("spec serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn digest_is_valid(&self) -> bool {
        self.digest == self.compute_digest()
    }

    /// Rebuilds the groups this spec describes.
    pub fn rebuild(&self) -> Result<PrimeGroups> {
        let groups = build_groups(&self.params, FieldSpec::new(self.q as u64)?)?;
        let again = ResonatorSpec::from_groups(&groups);
        if again.digest != self.digest {
            return Err(Error::InvalidParams(format!(
                "resonator spec digest {} does not match rebuilt {}",
                self.digest, again.digest
            )));
        }
        Ok(groups)
    }
}
