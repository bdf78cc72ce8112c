"""Symmetric, hashing, commitment, and signature primitives.

Thin, opinionated wrappers: SHA-256 for hashing and hash-only commitments,
AES-256-GCM for authenticated encryption, RSA-3072 with PSS padding for the
key-request handshake signatures. Key material travels as PEM bytes so it can
live in plain key-store files.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import padding, rsa
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .errors import IntegrityFailure, MalformedKeyMaterial

AEAD_KEY_LEN = 32
AEAD_NONCE_LEN = 12
RSA_KEY_BITS = 3072


def hash256(data: bytes) -> bytes:
    """32-byte SHA-256 digest."""
    return hashlib.sha256(data).digest()


@dataclass(frozen=True)
class Commitment:
    """Hash-only commitment to a uniformly random opening."""

    digest: bytes

    def __post_init__(self):
        if len(self.digest) != 32:
            raise ValueError("commitment digest must be 32 bytes")


def commit(opening: bytes) -> Commitment:
    return Commitment(hash256(opening))


def open_commitment(commitment: Commitment, opening: bytes) -> bool:
    return hash256(opening) == commitment.digest


# ------------------------------------------------------------------- AEAD ---

def aead_encrypt(key: bytes, nonce: bytes, plaintext: bytes, associated_data: bytes) -> bytes:
    if len(key) != AEAD_KEY_LEN:
        raise ValueError("AEAD key must be 32 bytes")
    if len(nonce) != AEAD_NONCE_LEN:
        raise ValueError("AEAD nonce must be 12 bytes")
    return AESGCM(key).encrypt(nonce, plaintext, associated_data)


def aead_decrypt(key: bytes, nonce: bytes, ciphertext: bytes, associated_data: bytes) -> bytes:
    if len(key) != AEAD_KEY_LEN:
        raise ValueError("AEAD key must be 32 bytes")
    if len(nonce) != AEAD_NONCE_LEN:
        raise ValueError("AEAD nonce must be 12 bytes")
    try:
        return AESGCM(key).decrypt(nonce, ciphertext, associated_data)
    except Exception as exc:
        raise IntegrityFailure("authenticated decryption failed") from exc


# ------------------------------------------------------------- signatures ---

def generate_signing_keypair(key_bits: int = RSA_KEY_BITS) -> tuple[bytes, bytes]:
    """Fresh (signing_key_pem, verify_key_pem) pair."""
    key = rsa.generate_private_key(public_exponent=65537, key_size=key_bits)
    signing_pem = key.private_bytes(
        serialization.Encoding.PEM,
        serialization.PrivateFormat.PKCS8,
        serialization.NoEncryption(),
    )
    verify_pem = key.public_key().public_bytes(
        serialization.Encoding.PEM,
        serialization.PublicFormat.SubjectPublicKeyInfo,
    )
    return signing_pem, verify_pem


def _load_signing_key(pem: bytes):
    try:
        key = serialization.load_pem_private_key(pem, password=None)
    except Exception as exc:
        raise MalformedKeyMaterial("cannot parse signing key") from exc
    if not isinstance(key, rsa.RSAPrivateKey):
        raise MalformedKeyMaterial("signing key is not an RSA key")
    return key


def _load_verify_key(pem: bytes):
    try:
        key = serialization.load_pem_public_key(pem)
    except Exception as exc:
        raise MalformedKeyMaterial("cannot parse verify key") from exc
    if not isinstance(key, rsa.RSAPublicKey):
        raise MalformedKeyMaterial("verify key is not an RSA key")
    return key


_PSS = padding.PSS(mgf=padding.MGF1(hashes.SHA256()), salt_length=32)


def sign_challenge(signing_key_pem: bytes, challenge: bytes) -> bytes:
    """Sign a 32-byte challenge."""
    if len(challenge) != 32:
        raise ValueError("challenge must be 32 bytes")
    key = _load_signing_key(signing_key_pem)
    return key.sign(challenge, _PSS, hashes.SHA256())


def verify_challenge(verify_key_pem: bytes, challenge: bytes, signature: bytes) -> bool:
    if len(challenge) != 32:
        raise ValueError("challenge must be 32 bytes")
    key = _load_verify_key(verify_key_pem)
    try:
        key.verify(signature, challenge, _PSS, hashes.SHA256())
        return True
    except InvalidSignature:
        return False
