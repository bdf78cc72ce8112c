"""Exception hierarchy shared by all martsia modules.

Every domain failure derives from :class:`MartsiaError` so callers (and the
CLI) can distinguish protocol-level errors from programming errors.
"""

from __future__ import annotations


class MartsiaError(Exception):
    """Base class for every domain error raised by this package."""


# ---------------------------------------------------------------- crypto ---

class NamespaceMismatch(MartsiaError):
    """Attribute's authority suffix does not match the issuing authority."""


class GidMismatch(MartsiaError):
    """Key shares for different reader GIDs cannot be merged."""


class MissingAuthorityKey(MartsiaError):
    """Policy references an authority with no known public key."""


class PolicyNotSatisfied(MartsiaError):
    """Decryption key does not satisfy the ciphertext policy."""

    def __init__(self, policy_text: str, message: str | None = None):
        super().__init__(message or f"policy not satisfied: {policy_text}")
        self.policy_text = policy_text


class MalformedCiphertext(MartsiaError):
    """Ciphertext bytes or structure failed validation."""


class MalformedKeyMaterial(MartsiaError):
    """Signature or ABE key material could not be parsed or verified."""


# ---------------------------------------------------------------- policy ---

class PolicySyntaxError(MartsiaError):
    """Policy text does not match the grammar; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EmptyPolicy(MartsiaError):
    """Policy text is empty or whitespace only."""


class ThresholdExceedsAuthorities(MartsiaError):
    """`n+` threshold larger than the number of known authorities."""


# ------------------------------------------------------------- datastore ---

class EmptyContent(MartsiaError):
    """Refusing to store an empty object."""


class StorageFailure(MartsiaError):
    """Backend could not persist or read an object."""


class NotFound(MartsiaError):
    """Requested object or ledger entry does not exist."""


class IntegrityFailure(MartsiaError):
    """Stored or transmitted bytes failed an integrity check."""


# ---------------------------------------------------------------- ledger ---

class UnresolvableRloc(MartsiaError):
    """Resource locator does not resolve in the datastore."""


class BadMessageId(MartsiaError):
    """Message id is not an 8-digit decimal string."""


class DuplicateMessageId(MartsiaError):
    """Message id already announced on the ledger."""


class UnknownAuthority(MartsiaError):
    """Authority id has no metadata record on the ledger."""


class DuplicateCommitment(MartsiaError):
    """Authority already posted its ceremony commitment."""


class OpeningBeforeAllCommitments(MartsiaError):
    """Ceremony opening posted while commitments are still missing."""


# -------------------------------------------------------------- ceremony ---

class WrongPhase(MartsiaError):
    """Operation not allowed in the ceremony's current phase."""


class IncompleteOpenings(MartsiaError):
    """Finalize called before every authority opened."""


class CommitmentMismatch(MartsiaError):
    """An opening does not hash to the posted commitment."""

    def __init__(self, authority_id: str):
        super().__init__(f"opening by {authority_id!r} does not match its commitment")
        self.authority_id = authority_id


# ------------------------------------------------------------- authority ---

class ServerNotReady(MartsiaError):
    """Authority server asked to operate before ceremony artifacts exist."""


class UnknownSession(MartsiaError):
    """No live key-request session with that id."""


class SignatureInvalid(MartsiaError):
    """Challenge signature failed verification."""


class NoAttestations(MartsiaError):
    """Reader has no certified attributes on the ledger."""


class ReplayDetected(MartsiaError):
    """Key-request session was already consumed."""


class BindFailure(MartsiaError):
    """Server endpoint could not be bound."""


class ProtocolError(MartsiaError):
    """Malformed or unexpected wire-protocol frame."""


# -------------------------------------------------------------- envelope ---

class EmptyFields(MartsiaError):
    """Slice sealed over an empty field map."""


class PolicyError(MartsiaError):
    """Slice policy failed to parse or compile."""


# ---------------------------------------------------------------- client ---

class ConsistencyCheckFailed(MartsiaError):
    """Authorities published diverging ceremony artifacts."""


class MissingArtifacts(MartsiaError):
    """Ledger lacks the ceremony artifacts needed for verification."""


class NoSharesObtained(MartsiaError):
    """Every authority failed to issue key shares."""


class SignatureRejected(MartsiaError):
    """An authority rejected the reader's challenge signature."""
