//! In-person attestation protocol with a deterministic adversarial simulation.
//!
//! The system binds a social-media handle to three facts established at a
//! point-of-sale terminal inside a chain store: a live human was present
//! (sentience), they were at the store's registered location (location), and
//! their biometric record rate-limits how many accounts they can attest
//! (uniqueness). The terminal signs the handle with a blind signature under a
//! key shared by its store group, so the published token reveals the group
//! but neither the exact store nor, to the signer, the handle.
//!
//! Everything here is deterministic: all randomness flows from a single run
//! seed, split per actor by stable labels. The crate is `no_std`-compatible
//! (`alloc` required); file formats, CLI, and IO live in the companion
//! `ghostpos-cli` crate.
//!
//! Module map:
//!
//! - [`crypto`] — keyed signatures, the blind signature over the group key,
//!   salted biometric hashing.
//! - [`wire`] — canonical byte encodings for every message that gets signed,
//!   plus the published token string format.
//! - [`registry`] — the backend datastore: device directory, address caps,
//!   biometric dedup, per-platform account caps, attestation overwrite.
//! - [`protocol`] — the four actor state machines (user app, POS terminal,
//!   mail-signing backend, registry owner).
//! - [`simnet`] — seeded discrete-event world: clock, mail/NFC/net channels,
//!   fault injection, the append-only run ledger.
//! - [`adversary`] — attack plans executed inside the world and the
//!   closed-form attack cost model.
//! - [`verifier`] — the consumer side: token verification and feed filtering
//!   by attestation age.
//! - [`trilemma`] — a decentralized verification quorum showing how one
//!   equivocating participant prevents finite-time agreement unless a trusted
//!   anchor decides.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod adversary;
pub mod crypto;
pub mod protocol;
pub mod registry;
pub mod rng;
pub mod simnet;
pub mod trilemma;
pub mod verifier;
pub mod wire;

pub use crypto::{BiometricId, BlindingFactor, KeyRole, Keypair, PublicKey, SecretKey, Signature};
pub use protocol::AttestationToken;
pub use simnet::{run_scenario, Metrics, RunLedger, ScenarioConfig};
