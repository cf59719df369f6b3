//! Signature primitives for the attestation protocol.
//!
//! Three things live here: deterministic keyed signatures used by the user
//! app, the mail-signing backend, and each POS terminal; a blind signature
//! over the key shared by every terminal in a store group; and salted
//! biometric hashing for the uniqueness registry.
//!
//! The signature scheme is hash-then-exponentiate over a trapdoor
//! permutation: `sign(m) = H(m)^d mod n`, `verify` checks `s^e = H(m) mod n`.
//! Blinding is multiplicative: the requester sends `H(m) * r^e mod n`, the
//! signer exponentiates blind, and the requester divides out `r`. The signer
//! therefore never sees any function of the message other than the blinded
//! value.
//!
//! Parameters are sized for simulation speed (64-bit primes), not for real
//! security; a toy-modulus constructor exists so tests can enumerate the
//! whole residue group. Every operation is a deterministic function of its
//! inputs and the caller-supplied RNG — there is no ambient randomness.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand_core::RngCore;
use sha2::{Digest, Sha256};

const SIG_DOMAIN: &[u8] = b"ghostpos.sig.v1";
const BIO_DOMAIN: &[u8] = b"ghostpos.bio.v1";
const KEYGEN_DOMAIN: &[u8] = b"ghostpos.keygen.v1";
const DEFAULT_PUBLIC_EXPONENT: u64 = 65537;

/// Which actor a key belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KeyRole {
    /// `A` — the key a user's device registers with the backend.
    UserApp,
    /// `U` — the backend key that signs mailed address proofs.
    MailServer,
    /// `P` — an individual POS terminal's key.
    PosDevice,
    /// `G` — the blind-signing key shared by every terminal in a group.
    PosGroup,
}

impl KeyRole {
    pub fn label(self) -> &'static str {
        match self {
            KeyRole::UserApp => "user_app",
            KeyRole::MailServer => "mail_server",
            KeyRole::PosDevice => "pos_device",
            KeyRole::PosGroup => "pos_group",
        }
    }

    fn tag(self) -> u8 {
        match self {
            KeyRole::UserApp => 0,
            KeyRole::MailServer => 1,
            KeyRole::PosDevice => 2,
            KeyRole::PosGroup => 3,
        }
    }

    fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(KeyRole::UserApp),
            1 => Some(KeyRole::MailServer),
            2 => Some(KeyRole::PosDevice),
            3 => Some(KeyRole::PosGroup),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CryptoError {
    #[error("message must not be empty")]
    EmptyMessage,
    #[error("biometric features must not be empty")]
    EmptyFeatures,
    #[error("operation requires a {expected} key, got {actual}")]
    RoleMismatch {
        expected: &'static str,
        actual: &'static str,
    },
    #[error("invalid key parameters: {0}")]
    BadKeyParams(&'static str),
    #[error("malformed key blob")]
    MalformedKey,
}

/// Verification half of a keypair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    role: KeyRole,
    modulus: BigUint,
    exponent: BigUint,
}

/// Signing half of a keypair. Contains everything the public key does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    role: KeyRole,
    modulus: BigUint,
    exponent: BigUint,
    trapdoor: BigUint,
}

/// A role-tagged signing/verification pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Keypair {
    pub secret: SecretKey,
    pub public: PublicKey,
}

/// A signature value, stored as minimal big-endian bytes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(Vec<u8>);

/// A message hidden from the signer: `H(m) * r^e mod n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlindedMessage(Vec<u8>);

/// The signer's output on a blinded message, still blinded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlindSignature(Vec<u8>);

/// The per-request secret `r` that hides the message. Never leaves the
/// requester; carries the inverse needed to strip the blinding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlindingFactor {
    factor: BigUint,
    inverse: BigUint,
    modulus: BigUint,
}

/// What kind of uniqueness mark a record is keyed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BiometricKind {
    FingerprintHash,
    InkId,
}

impl BiometricKind {
    pub fn label(self) -> &'static str {
        match self {
            BiometricKind::FingerprintHash => "fingerprint_hash",
            BiometricKind::InkId => "ink_id",
        }
    }
}

/// Registry key for one human: a salted fingerprint digest or a
/// registry-issued ink mark id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiometricId {
    pub kind: BiometricKind,
    pub value: Vec<u8>,
    pub salt: Vec<u8>,
}

impl BiometricId {
    /// Identifier handed out with an ink stamp; `serial` is registry-unique.
    pub fn ink(serial: u64) -> Self {
        Self {
            kind: BiometricKind::InkId,
            value: serial.to_be_bytes().to_vec(),
            salt: Vec::new(),
        }
    }

    pub fn value_hex(&self) -> String {
        hex::encode(&self.value)
    }
}

impl serde::Serialize for BiometricId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("BiometricId", 3)?;
        s.serialize_field("kind", self.kind.label())?;
        s.serialize_field("value", &hex::encode(&self.value))?;
        s.serialize_field("salt", &hex::encode(&self.salt))?;
        s.end()
    }
}

impl Signature {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Lowercase hex, the interchange form used in token strings and logs.
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        hex::decode(s).ok().map(Self)
    }

    fn to_uint(&self) -> BigUint {
        BigUint::from_bytes_be(&self.0)
    }
}

impl BlindedMessage {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    fn to_uint(&self) -> BigUint {
        BigUint::from_bytes_be(&self.0)
    }
}

impl BlindSignature {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl PublicKey {
    pub fn role(&self) -> KeyRole {
        self.role
    }

    /// Opaque blob form, used for key files and scenario configs
    /// (base64url-wrapped by the IO layer).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.push(1u8); // format version
        out.push(self.role.tag());
        push_field(&mut out, &self.modulus.to_bytes_be());
        push_field(&mut out, &self.exponent.to_bytes_be());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CryptoError> {
        let mut cursor = bytes;
        let version = take_byte(&mut cursor).ok_or(CryptoError::MalformedKey)?;
        if version != 1 {
            return Err(CryptoError::MalformedKey);
        }
        let role_tag = take_byte(&mut cursor).ok_or(CryptoError::MalformedKey)?;
        let role = KeyRole::from_tag(role_tag).ok_or(CryptoError::MalformedKey)?;
        let modulus = take_field(&mut cursor).ok_or(CryptoError::MalformedKey)?;
        let exponent = take_field(&mut cursor).ok_or(CryptoError::MalformedKey)?;
        if !cursor.is_empty() {
            return Err(CryptoError::MalformedKey);
        }
        Ok(Self {
            role,
            modulus: BigUint::from_bytes_be(&modulus),
            exponent: BigUint::from_bytes_be(&exponent),
        })
    }
}

impl SecretKey {
    pub fn role(&self) -> KeyRole {
        self.role
    }

    /// The verification key is a pure function of the secret material.
    pub fn public(&self) -> PublicKey {
        PublicKey {
            role: self.role,
            modulus: self.modulus.clone(),
            exponent: self.exponent.clone(),
        }
    }
}

impl Keypair {
    /// Deterministic key generation from `(role, seed)`.
    pub fn generate(role: KeyRole, seed: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(KEYGEN_DOMAIN);
        hasher.update([role.tag()]);
        hasher.update(seed.to_be_bytes());
        let digest = hasher.finalize();
        let mut key = [0u8; 32];
        key.copy_from_slice(&digest);
        let mut rng = <rand_chacha::ChaCha8Rng as rand_core::SeedableRng>::from_seed(key);

        let e = DEFAULT_PUBLIC_EXPONENT;
        let p = gen_prime(&mut rng, e);
        let q = loop {
            let q = gen_prime(&mut rng, e);
            if q != p {
                break q;
            }
        };
        Self::from_primes(role, p, q, e).expect("generated primes always yield a valid key")
    }

    /// Build a keypair from explicit primes. Intended for tiny moduli where
    /// tests enumerate the whole residue group; `generate` is the normal path.
    pub fn from_primes(role: KeyRole, p: u64, q: u64, e: u64) -> Result<Self, CryptoError> {
        if p < 3 || q < 3 {
            return Err(CryptoError::BadKeyParams("primes must be at least 3"));
        }
        if p == q {
            return Err(CryptoError::BadKeyParams("primes must be distinct"));
        }
        if !is_prime_u64(p) || !is_prime_u64(q) {
            return Err(CryptoError::BadKeyParams("factors must be prime"));
        }
        let p_big = BigUint::from(p);
        let q_big = BigUint::from(q);
        let modulus = &p_big * &q_big;
        let carmichael = (&p_big - 1u32).lcm(&(&q_big - 1u32));
        let exponent = BigUint::from(e);
        if exponent.gcd(&carmichael) != BigUint::one() {
            return Err(CryptoError::BadKeyParams(
                "public exponent not invertible modulo the key order",
            ));
        }
        let trapdoor = exponent
            .modinv(&carmichael)
            .ok_or(CryptoError::BadKeyParams("no trapdoor exponent"))?;
        let secret = SecretKey {
            role,
            modulus,
            exponent,
            trapdoor,
        };
        let public = secret.public();
        Ok(Self { secret, public })
    }
}

/// Deterministic keypair for `(role, seed)`.
pub fn keygen(role: KeyRole, seed: u64) -> Keypair {
    Keypair::generate(role, seed)
}

/// Full-domain hash of `message` into the key's residue ring.
fn fdh(message: &[u8], modulus: &BigUint) -> BigUint {
    let mut hasher = Sha256::new();
    hasher.update(SIG_DOMAIN);
    hasher.update((message.len() as u64).to_be_bytes());
    hasher.update(message);
    BigUint::from_bytes_be(&hasher.finalize()) % modulus
}

/// Sign `message` under `secret`. Rejects empty messages.
pub fn sign(secret: &SecretKey, message: &[u8]) -> Result<Signature, CryptoError> {
    if message.is_empty() {
        return Err(CryptoError::EmptyMessage);
    }
    let h = fdh(message, &secret.modulus);
    let s = h.modpow(&secret.trapdoor, &secret.modulus);
    Ok(Signature(s.to_bytes_be()))
}

/// Check `sig` over `message` under `public`. Any bit flip in either fails.
pub fn verify(public: &PublicKey, message: &[u8], sig: &Signature) -> bool {
    if message.is_empty() {
        return false;
    }
    let s = sig.to_uint();
    if s >= public.modulus {
        return false;
    }
    let h = fdh(message, &public.modulus);
    s.modpow(&public.exponent, &public.modulus) == h
}

/// Blind `message` for signing under the group key. Returns the value to
/// hand to the signer and the factor kept by the requester. The factor is
/// redrawn internally until invertible, so callers never see a degenerate
/// draw.
pub fn blind(
    message: &[u8],
    group_public: &PublicKey,
    rng: &mut impl RngCore,
) -> Result<(BlindedMessage, BlindingFactor), CryptoError> {
    if message.is_empty() {
        return Err(CryptoError::EmptyMessage);
    }
    require_group(group_public.role)?;
    let n = &group_public.modulus;
    let r = loop {
        let candidate = random_below(rng, n);
        if candidate > BigUint::one() && candidate.gcd(n) == BigUint::one() {
            break candidate;
        }
    };
    Ok(blind_with_factor_inner(message, group_public, r))
}

/// Deterministic variant of [`blind`] with the factor supplied by the
/// caller. Used by tests that enumerate every factor at a toy modulus.
pub fn blind_with_factor(
    message: &[u8],
    group_public: &PublicKey,
    factor: &BigUint,
) -> Result<(BlindedMessage, BlindingFactor), CryptoError> {
    if message.is_empty() {
        return Err(CryptoError::EmptyMessage);
    }
    require_group(group_public.role)?;
    if factor.is_zero() || factor.gcd(&group_public.modulus) != BigUint::one() {
        return Err(CryptoError::BadKeyParams("blinding factor not invertible"));
    }
    Ok(blind_with_factor_inner(message, group_public, factor.clone()))
}

fn blind_with_factor_inner(
    message: &[u8],
    group_public: &PublicKey,
    r: BigUint,
) -> (BlindedMessage, BlindingFactor) {
    let n = &group_public.modulus;
    let h = fdh(message, n);
    let mask = r.modpow(&group_public.exponent, n);
    let blinded = (h * mask) % n;
    let inverse = r.modinv(n).expect("factor checked invertible");
    (
        BlindedMessage(blinded.to_bytes_be()),
        BlindingFactor {
            factor: r,
            inverse,
            modulus: n.clone(),
        },
    )
}

/// Signer side: exponentiate the blinded value. The signer observes only
/// `blinded`, never the message.
pub fn sign_blinded(
    group_secret: &SecretKey,
    blinded: &BlindedMessage,
) -> Result<BlindSignature, CryptoError> {
    require_group(group_secret.role)?;
    let b = blinded.to_uint() % &group_secret.modulus;
    let s = b.modpow(&group_secret.trapdoor, &group_secret.modulus);
    Ok(BlindSignature(s.to_bytes_be()))
}

/// Requester side: strip the blinding, yielding an ordinary signature on
/// the original message.
pub fn unblind(blind_sig: &BlindSignature, factor: &BlindingFactor) -> Signature {
    let s = BigUint::from_bytes_be(&blind_sig.0);
    let unblinded = (s * &factor.inverse) % &factor.modulus;
    Signature(unblinded.to_bytes_be())
}

/// Salted digest of fingerprint feature data.
pub fn hash_biometric(features: &[u8], salt: &[u8]) -> Result<BiometricId, CryptoError> {
    if features.is_empty() {
        return Err(CryptoError::EmptyFeatures);
    }
    let mut hasher = Sha256::new();
    hasher.update(BIO_DOMAIN);
    hasher.update((salt.len() as u64).to_be_bytes());
    hasher.update(salt);
    hasher.update(features);
    Ok(BiometricId {
        kind: BiometricKind::FingerprintHash,
        value: hasher.finalize().to_vec(),
        salt: salt.to_vec(),
    })
}

fn require_group(role: KeyRole) -> Result<(), CryptoError> {
    if role != KeyRole::PosGroup {
        return Err(CryptoError::RoleMismatch {
            expected: KeyRole::PosGroup.label(),
            actual: role.label(),
        });
    }
    Ok(())
}

fn push_field(out: &mut Vec<u8>, bytes: &[u8]) {
    out.extend_from_slice(&(bytes.len() as u32).to_be_bytes());
    out.extend_from_slice(bytes);
}

fn take_byte(cursor: &mut &[u8]) -> Option<u8> {
    let (&first, rest) = cursor.split_first()?;
    *cursor = rest;
    Some(first)
}

fn take_field(cursor: &mut &[u8]) -> Option<Vec<u8>> {
    if cursor.len() < 4 {
        return None;
    }
    let (len_bytes, rest) = cursor.split_at(4);
    let len = u32::from_be_bytes([len_bytes[0], len_bytes[1], len_bytes[2], len_bytes[3]]) as usize;
    if rest.len() < len {
        return None;
    }
    let (field, rest) = rest.split_at(len);
    *cursor = rest;
    Some(field.to_vec())
}

/// Uniform draw below `bound` by rejection sampling on whole byte strings.
fn random_below(rng: &mut impl RngCore, bound: &BigUint) -> BigUint {
    let byte_len = (bound.bits() as usize).div_ceil(8);
    loop {
        let mut buf = alloc::vec![0u8; byte_len];
        rng.fill_bytes(&mut buf);
        let candidate = BigUint::from_bytes_be(&buf);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// 64-bit prime with the top bit set, filtered so `e` stays invertible.
fn gen_prime(rng: &mut impl RngCore, e: u64) -> u64 {
    loop {
        let candidate = rng.next_u64() | (1 << 63) | 1;
        if candidate % e == 1 {
            continue;
        }
        if is_prime_u64(candidate) {
            return candidate;
        }
    }
}

/// Deterministic Miller-Rabin. The fixed base set is exact for all inputs
/// below 3.3e24, which covers every u64.
fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n == b {
            return true;
        }
        if n % b == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for &b in &BASES {
        let mut x = pow_mod_u64(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use rand_core::SeedableRng;

    fn test_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn keygen_is_deterministic() {
        let a = keygen(KeyRole::UserApp, 7);
        let b = keygen(KeyRole::UserApp, 7);
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_seeds_distinct_keys() {
        let a = keygen(KeyRole::UserApp, 7);
        let b = keygen(KeyRole::UserApp, 8);
        assert_ne!(a.public, b.public);
    }

    #[test]
    fn distinct_roles_distinct_keys() {
        let a = keygen(KeyRole::UserApp, 7);
        let b = keygen(KeyRole::MailServer, 7);
        assert_ne!(a.public, b.public);
    }

    #[test]
    fn public_derives_from_secret() {
        let pair = keygen(KeyRole::PosDevice, 42);
        assert_eq!(pair.secret.public(), pair.public);
    }

    #[test]
    fn sign_verify_roundtrip() {
        let pair = keygen(KeyRole::MailServer, 1);
        let sig = sign(&pair.secret, b"attest this").unwrap();
        assert!(verify(&pair.public, b"attest this", &sig));
    }

    #[test]
    fn tampered_message_fails() {
        let pair = keygen(KeyRole::MailServer, 1);
        let sig = sign(&pair.secret, b"attest this").unwrap();
        assert!(!verify(&pair.public, b"attest thiS", &sig));
    }

    #[test]
    fn tampered_signature_fails() {
        let pair = keygen(KeyRole::MailServer, 1);
        let sig = sign(&pair.secret, b"attest this").unwrap();
        let mut bytes = sig.as_bytes().to_vec();
        bytes[0] ^= 0x01;
        assert!(!verify(&pair.public, b"attest this", &Signature::from_bytes(bytes)));
    }

    #[test]
    fn wrong_key_fails() {
        let signer = keygen(KeyRole::MailServer, 1);
        let other = keygen(KeyRole::PosDevice, 1);
        let sig = sign(&signer.secret, b"attest this").unwrap();
        assert!(!verify(&other.public, b"attest this", &sig));
    }

    #[test]
    fn empty_message_rejected() {
        let pair = keygen(KeyRole::UserApp, 1);
        assert_eq!(sign(&pair.secret, b""), Err(CryptoError::EmptyMessage));
        let sig = sign(&pair.secret, b"x").unwrap();
        assert!(!verify(&pair.public, b"", &sig));
    }

    #[test]
    fn blind_sign_unblind_verify() {
        let group = keygen(KeyRole::PosGroup, 99);
        let mut rng = test_rng(5);
        let message = b"platform|handle|label|ts";
        let (blinded, factor) = blind(message, &group.public, &mut rng).unwrap();
        let blind_sig = sign_blinded(&group.secret, &blinded).unwrap();
        let sig = unblind(&blind_sig, &factor);
        assert!(verify(&group.public, message, &sig));
    }

    #[test]
    fn wrong_blinding_factor_fails() {
        let group = keygen(KeyRole::PosGroup, 99);
        let mut rng = test_rng(5);
        let message = b"platform|handle|label|ts";
        let (blinded, _factor) = blind(message, &group.public, &mut rng).unwrap();
        let (_other_blinded, other_factor) = blind(message, &group.public, &mut rng).unwrap();
        let blind_sig = sign_blinded(&group.secret, &blinded).unwrap();
        let sig = unblind(&blind_sig, &other_factor);
        assert!(!verify(&group.public, message, &sig));
    }

    #[test]
    fn blinded_message_differs_from_hash() {
        // A factor of 1 leaves the domain hash unmasked; the sampling path
        // never draws it, so real blinded values differ from the bare hash.
        let group = keygen(KeyRole::PosGroup, 99);
        let mut rng = test_rng(5);
        let message = b"platform|handle|label|ts";
        let (bare, _) = blind_with_factor(message, &group.public, &BigUint::one()).unwrap();
        let (blinded, _) = blind(message, &group.public, &mut rng).unwrap();
        assert_ne!(blinded, bare);
    }

    #[test]
    fn blind_requires_group_key() {
        let not_group = keygen(KeyRole::PosDevice, 1);
        let mut rng = test_rng(5);
        let err = blind(b"m", &not_group.public, &mut rng).unwrap_err();
        assert!(matches!(err, CryptoError::RoleMismatch { .. }));
    }

    /// At a toy modulus the blinding map is a bijection on the unit group:
    /// enumerating every invertible factor must hit every unit exactly once.
    #[test]
    fn toy_modulus_blinding_is_uniform() {
        let p = 61u64;
        let q = 53u64;
        let n = p * q;
        let group = Keypair::from_primes(KeyRole::PosGroup, p, q, 17).unwrap();

        // Pick a message whose domain hash lands on a unit of the ring.
        let n_big = BigUint::from(n);
        let mut message = alloc::vec![b'm', 0];
        loop {
            let h = fdh(&message, &n_big);
            if !h.is_zero() && h.gcd(&n_big) == BigUint::one() {
                break;
            }
            message[1] += 1;
        }

        let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
        let mut units = 0u32;
        for r in 1..n {
            if gcd_u64(r, n) != 1 {
                continue;
            }
            units += 1;
            let (blinded, factor) =
                blind_with_factor(&message, &group.public, &BigUint::from(r)).unwrap();
            // Roundtrip must hold for every factor, not just random ones.
            let sig = unblind(&sign_blinded(&group.secret, &blinded).unwrap(), &factor);
            assert!(verify(&group.public, &message, &sig));
            let b: u64 = blinded.to_uint().try_into().unwrap();
            *counts.entry(b).or_insert(0) += 1;
        }

        assert_eq!(units, (p - 1) as u32 * (q - 1) as u32);
        assert_eq!(counts.len() as u32, units, "image must cover every unit");
        assert!(counts.values().all(|&c| c == 1), "each unit hit exactly once");
        for &b in counts.keys() {
            assert_eq!(gcd_u64(b, n), 1, "blinded values stay in the unit group");
        }
    }

    #[test]
    fn degenerate_factor_rejected_in_explicit_path() {
        let group = Keypair::from_primes(KeyRole::PosGroup, 61, 53, 17).unwrap();
        // 61 shares a factor with the modulus.
        let err = blind_with_factor(b"m", &group.public, &BigUint::from(61u64)).unwrap_err();
        assert!(matches!(err, CryptoError::BadKeyParams(_)));
    }

    #[test]
    fn toy_blind_redraws_until_invertible() {
        // With a 3233-element ring around 5.5% of draws are non-units; a
        // seeded rng exercises the internal redraw loop.
        let group = Keypair::from_primes(KeyRole::PosGroup, 61, 53, 17).unwrap();
        let mut rng = test_rng(11);
        for _ in 0..256 {
            let (blinded, factor) = blind(b"msg", &group.public, &mut rng).unwrap();
            let sig = unblind(&sign_blinded(&group.secret, &blinded).unwrap(), &factor);
            assert!(verify(&group.public, b"msg", &sig));
        }
    }

    #[test]
    fn biometric_hash_is_deterministic() {
        let a = hash_biometric(b"ridge pattern 1", b"salt").unwrap();
        let b = hash_biometric(b"ridge pattern 1", b"salt").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn biometric_salt_separates() {
        let a = hash_biometric(b"ridge pattern 1", b"salt-a").unwrap();
        let b = hash_biometric(b"ridge pattern 1", b"salt-b").unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn biometric_distinct_features_distinct_ids() {
        // Collision scan over a corpus the size of a large scenario.
        let mut seen = alloc::collections::BTreeSet::new();
        for i in 0..10_000u32 {
            let features = alloc::format!("features-{i}");
            let id = hash_biometric(features.as_bytes(), b"deployment-salt").unwrap();
            assert!(seen.insert(id.value), "collision at {i}");
        }
    }

    #[test]
    fn empty_features_rejected() {
        assert_eq!(
            hash_biometric(b"", b"salt"),
            Err(CryptoError::EmptyFeatures)
        );
    }

    #[test]
    fn public_key_blob_roundtrip() {
        let pair = keygen(KeyRole::PosGroup, 123);
        let blob = pair.public.to_bytes();
        let back = PublicKey::from_bytes(&blob).unwrap();
        assert_eq!(back, pair.public);
        assert!(PublicKey::from_bytes(&blob[..blob.len() - 1]).is_err());
    }

    fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
}
