//! Pairing-based backend over the 254-bit curve whose scalar field
//! carries all circuit arithmetic. Proofs are three group elements,
//! constant size regardless of the circuit.

use ark_bn254::{Bn254, Fr};
use ark_groth16::{Groth16, Proof as ArkProof, ProvingKey as ArkPk, VerifyingKey as ArkVk};
use ark_relations::r1cs::{
    ConstraintSynthesizer, ConstraintSystemRef, LinearCombination, SynthesisError, Variable,
};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use ark_snark::SNARK;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use zkcred_arith::FieldElement;
use zkcred_circuits::{ConstraintSystem, Lc, WitnessAssignment};

use crate::{BackendError, Proof, ProofBackend, ProvingKey, VerificationKey};

pub struct Groth16Backend;

struct Synthesizer<'a> {
    cs: &'a ConstraintSystem,
    /// Full assignment when proving; setup runs without one.
    assignment: Option<&'a WitnessAssignment>,
}

impl Synthesizer<'_> {
    fn value_of(&self, wire: usize) -> Result<Fr, SynthesisError> {
        match self.assignment {
            Some(a) => Ok(a.values[wire].into()),
            None => Err(SynthesisError::AssignmentMissing),
        }
    }
}

fn to_ark_lc(lc: &Lc, vars: &[Variable]) -> LinearCombination<Fr> {
    let mut out = LinearCombination::zero();
    if !lc.constant.is_zero() {
        out += (lc.constant.into(), Variable::One);
    }
    for &(w, c) in &lc.terms {
        out += (c.into(), vars[w]);
    }
    out
}

impl ConstraintSynthesizer<Fr> for Synthesizer<'_> {
    fn generate_constraints(self, ark: ConstraintSystemRef<Fr>) -> Result<(), SynthesisError> {
        let n = self.cs.num_wires();
        let mut vars = vec![Variable::One; n];
        for &w in &self.cs.public_wires {
            vars[w] = ark.new_input_variable(|| self.value_of(w))?;
        }
        let is_public = {
            let mut v = vec![false; n];
            v[0] = true;
            for &w in &self.cs.public_wires {
                v[w] = true;
            }
            v
        };
        for w in 1..n {
            if !is_public[w] {
                vars[w] = ark.new_witness_variable(|| self.value_of(w))?;
            }
        }
        for c in &self.cs.constraints {
            ark.enforce_constraint(
                to_ark_lc(&c.a, &vars),
                to_ark_lc(&c.b, &vars),
                to_ark_lc(&c.c, &vars),
            )?;
        }
        let one = LinearCombination::from((Fr::from(1u64), Variable::One));
        for (lc, _) in &self.cs.linear_constraints {
            ark.enforce_constraint(to_ark_lc(lc, &vars), one.clone(), LinearCombination::zero())?;
        }
        Ok(())
    }
}

impl ProofBackend for Groth16Backend {
    fn id(&self) -> &'static str {
        "groth16"
    }

    fn setup(
        &self,
        cs: &ConstraintSystem,
        seed: [u8; 32],
    ) -> Result<(ProvingKey, VerificationKey), BackendError> {
        let mut rng = ChaCha20Rng::from_seed(seed);
        let circuit = Synthesizer {
            cs,
            assignment: None,
        };
        let (pk, vk) = Groth16::<Bn254>::circuit_specific_setup(circuit, &mut rng)
            .map_err(|e| BackendError::Proving(e.to_string()))?;
        let digest = cs.digest();
        let mut pk_bytes = Vec::new();
        pk.serialize_compressed(&mut pk_bytes)
            .map_err(|e| BackendError::Serialization(e.to_string()))?;
        let mut vk_bytes = Vec::new();
        vk.serialize_compressed(&mut vk_bytes)
            .map_err(|e| BackendError::Serialization(e.to_string()))?;
        Ok((
            ProvingKey {
                backend: self.id().into(),
                circuit_digest: digest,
                bytes: pk_bytes,
            },
            VerificationKey {
                backend: self.id().into(),
                circuit_digest: digest,
                bytes: vk_bytes,
            },
        ))
    }

    fn prove(
        &self,
        pk: &ProvingKey,
        cs: &ConstraintSystem,
        publics: &[FieldElement],
        privates: &[FieldElement],
    ) -> Result<Proof, BackendError> {
        if pk.backend != self.id() {
            return Err(BackendError::BackendMismatch {
                expected: self.id().into(),
                got: pk.backend.clone(),
            });
        }
        if pk.circuit_digest != cs.digest() {
            return Err(BackendError::DigestMismatch);
        }
        // the witness must satisfy the system before any proving happens
        let assignment = cs
            .evaluate(publics, privates)
            .map_err(|e| BackendError::UnsatisfiedWitness(e.to_string()))?;
        let ark_pk = ArkPk::<Bn254>::deserialize_compressed_unchecked(pk.bytes.as_slice())
            .map_err(|e| BackendError::Serialization(e.to_string()))?;
        // proof randomness derives from the witness and key so proving is
        // reproducible given fixed inputs
        let mut seed_material = pk.circuit_digest.to_bytes_le().to_vec();
        for v in publics {
            seed_material.extend_from_slice(&v.to_bytes_le());
        }
        for v in privates {
            seed_material.extend_from_slice(&v.to_bytes_le());
        }
        let seed_fe = zkcred_core::encode_long_string(&seed_material);
        let mut rng = ChaCha20Rng::from_seed(seed_fe.to_bytes_le());
        let circuit = Synthesizer {
            cs,
            assignment: Some(&assignment),
        };
        let proof = Groth16::<Bn254>::prove(&ark_pk, circuit, &mut rng)
            .map_err(|e| BackendError::Proving(e.to_string()))?;
        let mut bytes = Vec::new();
        proof
            .serialize_compressed(&mut bytes)
            .map_err(|e| BackendError::Serialization(e.to_string()))?;
        Ok(Proof {
            backend: self.id().into(),
            bytes,
            public_inputs: publics.to_vec(),
        })
    }

    fn verify(
        &self,
        vk: &VerificationKey,
        proof: &Proof,
        publics: &[FieldElement],
    ) -> Result<bool, BackendError> {
        if vk.backend != self.id() || proof.backend != self.id() {
            return Ok(false);
        }
        let ark_vk = match ArkVk::<Bn254>::deserialize_compressed(vk.bytes.as_slice()) {
            Ok(v) => v,
            Err(_) => return Ok(false),
        };
        let ark_proof = match ArkProof::<Bn254>::deserialize_compressed(proof.bytes.as_slice()) {
            Ok(p) => p,
            Err(_) => return Ok(false),
        };
        let inputs: Vec<Fr> = publics.iter().map(|&f| f.into()).collect();
        Ok(Groth16::<Bn254>::verify(&ark_vk, &inputs, &ark_proof).unwrap_or(false))
    }
}
