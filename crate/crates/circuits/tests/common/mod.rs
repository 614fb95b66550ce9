//! Honest end-to-end evidence construction shared by the scenario tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use zkcred_arith::{eddsa_keygen, eddsa_sign, FieldElement, SigningKeyPair};
use zkcred_circuits::{CredentialEvidence, ScenarioSpec, VpInputs};
use zkcred_core::{encode, AttributeValue};
use zkcred_registry::{capacity, RevocationRegistry, Status};

pub struct TestWorld {
    pub inputs: VpInputs,
    /// Signing keys per chain level; index 0 signs the leaf credential.
    pub issuers: Vec<SigningKeyPair>,
    pub holder: SigningKeyPair,
    pub registries: Vec<RevocationRegistry>,
}

pub fn default_content() -> Vec<FieldElement> {
    let values = [
        AttributeValue::ShortString("Alice".into()),
        AttributeValue::ShortString("Example".into()),
        AttributeValue::ShortString("X".into()),
        AttributeValue::Date(631_152_000),
        AttributeValue::ShortString("green".into()),
        AttributeValue::Float(1.78),
        AttributeValue::Coordinate(11.5820),
        AttributeValue::Coordinate(48.1351),
    ];
    values.iter().map(|v| encode(v).unwrap().leaf).collect()
}

/// Build a fully honest witness world for a scenario.
pub fn honest_world(spec: &ScenarioSpec, seed: u64) -> TestWorld {
    honest_world_with_content(spec, seed, &default_content())
}

pub fn honest_world_with_content(
    spec: &ScenarioSpec,
    seed: u64,
    content: &[FieldElement],
) -> TestWorld {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let challenge = FieldElement::random(&mut rng);
    let timestamp: u64 = 1_700_000_000;
    let hb_msg = spec.binding_message(challenge, timestamp);

    let holder = eddsa_keygen(rng.gen());
    let n = spec.credentials.len();
    let issuers: Vec<SigningKeyPair> = (0..n).map(|_| eddsa_keygen(rng.gen())).collect();

    let mut credentials = Vec::new();
    let mut registries = Vec::new();
    for (c, slot) in spec.credentials.iter().enumerate() {
        let mut registry = RevocationRegistry::new(slot.registry_depth).unwrap();
        // visit a few unrelated revocations so roots are not the fresh value
        for _ in 0..3 {
            let other = rng.gen_range(0..capacity(slot.registry_depth));
            let _ = registry.set_status(other, Status::Revoked);
        }
        let mut revocation_id = rng.gen_range(0..capacity(slot.registry_depth));
        while registry.status(revocation_id).unwrap() == Status::Revoked {
            revocation_id = rng.gen_range(0..capacity(slot.registry_depth));
        }
        let witness = registry.witness(revocation_id).unwrap();

        let binding_pk = if spec.chained && c > 0 {
            issuers[c - 1].public
        } else {
            holder.public
        };
        let delegatable = spec.chained && c > 0;
        let mut meta = [FieldElement::ZERO; 8];
        meta[0] = FieldElement::from_u64(revocation_id);
        meta[1] = FieldElement::random(&mut rng); // schema hash
        meta[2] = binding_pk.x;
        meta[3] = binding_pk.y;
        meta[4] = FieldElement::random(&mut rng); // registry ref
        meta[5] = FieldElement::from_u64(timestamp + 86_400 * 365);
        meta[6] = if delegatable {
            FieldElement::ONE
        } else {
            FieldElement::ZERO
        };
        meta[7] = FieldElement::ZERO;

        let content: Vec<FieldElement> = content.to_vec();
        assert_eq!(content.len(), slot.content_width);

        let meta_root = zkcred_core::merkle_root(&meta).unwrap();
        let content_root = zkcred_core::merkle_root(&content).unwrap();
        let root = zkcred_arith::poseidon::hash2(meta_root, content_root);
        let issuer_sig = eddsa_sign(&issuers[c], root);

        let needs_binding = !spec.chained || c == 0;
        let holder_sig = if needs_binding {
            let signer = if spec.chained && c > 0 {
                &issuers[c - 1]
            } else {
                &holder
            };
            Some(CredentialEvidence::sig_tuple(&eddsa_sign(signer, hb_msg)))
        } else {
            None
        };

        credentials.push(CredentialEvidence {
            meta: meta.to_vec(),
            content,
            issuer_pk: (issuers[c].public.x, issuers[c].public.y),
            issuer_sig: CredentialEvidence::sig_tuple(&issuer_sig),
            holder_sig,
            registry_leaf: witness.leaf_value,
            registry_siblings: witness.path.siblings.clone(),
            registry_root: registry.root(),
        });
        registries.push(registry);
    }

    TestWorld {
        inputs: VpInputs {
            challenge,
            timestamp,
            credentials,
            predicates: Default::default(),
            verifier_pk: None,
            verifier_sig: None,
        },
        issuers,
        holder,
        registries,
    }
}
