"""Decentralized ciphertext-policy multi-authority ABE.

Scheme layout (asymmetric pairing e: G1 x G2 -> GT, subgroup order r):

  global params   g1, g2 derived from the ceremony seed by hash-to-group,
                  egg = e(g1, g2); H: gid -> G2 and F: attr -> G2 are fixed
                  domain-separated hash-to-group maps.
  authority       alpha, y random in Zr; public key (egg^alpha, g1^y).
  key share       K  = g2^alpha * H(gid)^y * F(attr)^t,  KP = g1^t.
  ciphertext      policy compiled to an LSSS over Zr; secret s blinds the
                  payload via egg^s; per row x with attribute u:
                  C1 = egg^lambda_x * egg^(alpha_u t_x),  C2 = g1^(-t_x),
                  C3 = g1^(y_u t_x + omega_x),            C4 = F(u)^t_x,
                  where lambda shares s and omega shares 0.
  decryption      with reconstruction coefficients c_x:
                  prod_x (C1 e(C2,K) e(C3,H(gid)) e(KP,C4))^c_x = egg^s.

The 32-byte payload is XOR-blinded with a hash of egg^s; a hash check value
makes failed reconstructions (unsatisfied policies, spliced multi-gid keys)
detectable instead of yielding garbage.

Every type carries a canonical binary encoding (see `encoding`): group
elements in compressed form, scalars as 32-byte little-endian integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import bls12381 as curve
from .bls12381 import Fp12, G1Point, G2Point, GTPrecomp
from .encoding import Reader, Writer
from .errors import (
    GidMismatch,
    MalformedCiphertext,
    MalformedKeyMaterial,
    MissingAuthorityKey,
    NamespaceMismatch,
    PolicyNotSatisfied,
)
from .policy import (
    AccessStructure,
    PolicyAst,
    compile_lsss,
    expand_thresholds,
    parse_policy,
    pretty_policy,
    policy_leaves,
    referenced_authorities,
    reconstruction_coefficients,
    share_secrets,
    split_scheme_attribute,
)
from .primitives import hash256

GROUP_ID = "bls12-381"
SEED_LEN = 32

_GID_TAG = b"martsia/h-gid"
_ATTR_TAG = b"martsia/f-attr"
_KEK_TAG = b"martsia/abe/kek:"
_CHECK_TAG = b"martsia/abe/check:"

_hash_cache: dict = {}


def _hash_g2(tag: bytes, data: bytes) -> G2Point:
    key = (tag, data)
    pt = _hash_cache.get(key)
    if pt is None:
        pt = G2Point.hash_to_point(data, tag)
        if len(_hash_cache) > 4096:
            _hash_cache.clear()
        _hash_cache[key] = pt
    return pt


def hash_gid(gid: str) -> G2Point:
    return _hash_g2(_GID_TAG, gid.encode("utf-8"))


def hash_attribute(namespaced_attribute: str) -> G2Point:
    return _hash_g2(_ATTR_TAG, namespaced_attribute.encode("utf-8"))


def _xor32(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


def _scalar_bytes(v: int) -> bytes:
    return int(v).to_bytes(32, "little")


def _scalar_read(r: Reader) -> int:
    v = int.from_bytes(r.raw(32), "little")
    if v >= curve.ORDER:
        raise ValueError("scalar out of range")
    return v


# ------------------------------------------------------------------ types ---

@dataclass(frozen=True)
class GroupDescription:
    group_id: str
    order: int
    generator: bytes  # canonical compressed encoding of the G1 generator

    @staticmethod
    def default() -> "GroupDescription":
        return GroupDescription(
            GROUP_ID, int(curve.ORDER), G1Point.generator().to_bytes()
        )


@dataclass(eq=False)
class PublicParameters:
    """Ceremony-derived global parameters for the scheme."""

    group: GroupDescription
    g1: G1Point
    g2: G2Point
    egg: Fp12
    _egg_pre: GTPrecomp | None = field(default=None, repr=False, compare=False)

    @property
    def shared_element(self) -> G1Point:
        return self.g1

    def egg_exp(self, e: int) -> Fp12:
        if self._egg_pre is None:
            self._egg_pre = GTPrecomp(self.egg)
        return self._egg_pre.exp(e)

    def to_bytes(self) -> bytes:
        w = Writer()
        w.str(self.group.group_id)
        w.bytes(_scalar_bytes(self.group.order % (1 << 256)))
        w.bytes(self.group.generator)
        w.bytes(self.g1.to_bytes())
        w.bytes(self.g2.to_bytes())
        w.bytes(self.egg.to_bytes())
        return w.getvalue()

    @property
    def params_digest(self) -> bytes:
        return hash256(self.to_bytes())

    @staticmethod
    def from_bytes(data: bytes) -> "PublicParameters":
        try:
            r = Reader(data)
            group_id = r.str()
            order = int.from_bytes(r.bytes(), "little")
            generator = r.bytes()
            g1 = G1Point.from_bytes(r.bytes())
            g2 = G2Point.from_bytes(r.bytes())
            egg = Fp12.from_bytes(r.bytes())
            r.expect_end()
        except ValueError as exc:
            raise MalformedKeyMaterial(f"bad public parameters: {exc}") from exc
        if group_id != GROUP_ID or order != int(curve.ORDER):
            raise MalformedKeyMaterial("unsupported group description")
        return PublicParameters(
            GroupDescription(group_id, order, generator), g1, g2, egg
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, PublicParameters) and self.to_bytes() == other.to_bytes()


@dataclass(eq=False)
class AuthorityPublicKey:
    authority_id: str
    egga: Fp12  # egg^alpha
    gy: G1Point  # g1^y
    _egga_pre: GTPrecomp | None = field(default=None, repr=False, compare=False)

    def egga_exp(self, e: int) -> Fp12:
        if self._egga_pre is None:
            self._egga_pre = GTPrecomp(self.egga)
        return self._egga_pre.exp(e)

    def to_bytes(self) -> bytes:
        w = Writer()
        w.str(self.authority_id)
        w.bytes(self.egga.to_bytes())
        w.bytes(self.gy.to_bytes())
        return w.getvalue()

    @staticmethod
    def from_bytes(data: bytes) -> "AuthorityPublicKey":
        try:
            r = Reader(data)
            authority_id = r.str()
            egga = Fp12.from_bytes(r.bytes())
            gy = G1Point.from_bytes(r.bytes())
            r.expect_end()
        except ValueError as exc:
            raise MalformedKeyMaterial(f"bad authority public key: {exc}") from exc
        return AuthorityPublicKey(authority_id, egga, gy)

    def __eq__(self, other) -> bool:
        return isinstance(other, AuthorityPublicKey) and self.to_bytes() == other.to_bytes()


@dataclass(frozen=True)
class AuthorityKeypair:
    authority_id: str
    alpha: int
    y: int
    public_key: AuthorityPublicKey

    def secret_to_bytes(self) -> bytes:
        w = Writer()
        w.str(self.authority_id)
        w.raw(_scalar_bytes(self.alpha))
        w.raw(_scalar_bytes(self.y))
        return w.getvalue()

    @staticmethod
    def secret_from_bytes(params: PublicParameters, data: bytes) -> "AuthorityKeypair":
        try:
            r = Reader(data)
            authority_id = r.str()
            alpha = _scalar_read(r)
            y = _scalar_read(r)
            r.expect_end()
        except ValueError as exc:
            raise MalformedKeyMaterial(f"bad authority secret key: {exc}") from exc
        return _assemble_keypair(params, authority_id, alpha, y)


@dataclass(frozen=True)
class KeyShare:
    """Per-authority decryption-key share binding a gid to one attribute."""

    gid: str
    authority_id: str
    attribute: str  # namespaced ATTR@AUTHORITY
    k: G2Point
    kp: G1Point

    def to_bytes(self) -> bytes:
        w = Writer()
        w.str(self.gid)
        w.str(self.authority_id)
        w.str(self.attribute)
        w.bytes(self.k.to_bytes())
        w.bytes(self.kp.to_bytes())
        return w.getvalue()

    @staticmethod
    def from_bytes(data: bytes) -> "KeyShare":
        try:
            r = Reader(data)
            gid = r.str()
            authority_id = r.str()
            attribute = r.str()
            k = G2Point.from_bytes(r.bytes())
            kp = G1Point.from_bytes(r.bytes())
            r.expect_end()
        except ValueError as exc:
            raise MalformedKeyMaterial(f"bad key share: {exc}") from exc
        return KeyShare(gid, authority_id, attribute, k, kp)


@dataclass(frozen=True)
class FullDecryptionKey:
    """Client-side merge of key shares for a single gid."""

    gid: str
    shares: dict  # namespaced attribute -> KeyShare

    def attributes(self) -> set:
        return set(self.shares)

    def to_bytes(self) -> bytes:
        w = Writer()
        w.str(self.gid)
        w.u32(len(self.shares))
        for attr in sorted(self.shares):
            w.bytes(self.shares[attr].to_bytes())
        return w.getvalue()

    @staticmethod
    def from_bytes(data: bytes) -> "FullDecryptionKey":
        try:
            r = Reader(data)
            gid = r.str()
            count = r.u32()
            shares = [KeyShare.from_bytes(r.bytes()) for _ in range(count)]
            r.expect_end()
        except ValueError as exc:
            raise MalformedKeyMaterial(f"bad decryption key: {exc}") from exc
        return merge_shares(shares) if shares else FullDecryptionKey(gid, {})


@dataclass(frozen=True)
class CipherRow:
    attribute: str
    c1: Fp12
    c2: G1Point
    c3: G1Point
    c4: G2Point


@dataclass(frozen=True)
class AbeCiphertext:
    """MA-ABE wrapping of a 32-byte value under a policy.

    The policy text and the ordered authority list it was expanded over are
    stored in clear so any holder can recompile the exact access structure.
    """

    policy_text: str
    authorities: tuple
    rows: tuple  # of CipherRow
    wrapped_value: bytes
    value_check: bytes

    def to_bytes(self) -> bytes:
        w = Writer()
        w.u8(1)
        w.str(self.policy_text)
        w.u32(len(self.authorities))
        for a in self.authorities:
            w.str(a)
        w.raw(self.wrapped_value)
        w.raw(self.value_check)
        w.u32(len(self.rows))
        for row in self.rows:
            w.str(row.attribute)
            w.bytes(row.c1.to_bytes())
            w.bytes(row.c2.to_bytes())
            w.bytes(row.c3.to_bytes())
            w.bytes(row.c4.to_bytes())
        return w.getvalue()

    @staticmethod
    def from_bytes(data: bytes) -> "AbeCiphertext":
        try:
            r = Reader(data)
            if r.u8() != 1:
                raise ValueError("unsupported ciphertext version")
            policy_text = r.str()
            authorities = tuple(r.str() for _ in range(r.u32()))
            wrapped = r.raw(32)
            check = r.raw(32)
            rows = []
            for _ in range(r.u32()):
                attribute = r.str()
                c1 = Fp12.from_bytes(r.bytes())
                c2 = G1Point.from_bytes(r.bytes())
                c3 = G1Point.from_bytes(r.bytes())
                c4 = G2Point.from_bytes(r.bytes())
                rows.append(CipherRow(attribute, c1, c2, c3, c4))
            r.expect_end()
        except ValueError as exc:
            raise MalformedCiphertext(f"bad ciphertext encoding: {exc}") from exc
        ct = AbeCiphertext(policy_text, authorities, tuple(rows), wrapped, check)
        structure = ct.access_structure()
        if len(structure.rows) != len(rows) or any(
            structure.rows[i][0] != rows[i].attribute for i in range(len(rows))
        ):
            raise MalformedCiphertext("rows do not match the compiled policy")
        return ct

    def access_structure(self) -> AccessStructure:
        try:
            ast = parse_policy(self.policy_text)
            expanded = expand_thresholds(ast, self.authorities)
            return compile_lsss(expanded, int(curve.ORDER))
        except Exception as exc:
            raise MalformedCiphertext(f"cannot recompile policy: {exc}") from exc


# ------------------------------------------------------------- operations ---

def global_setup(seed: bytes) -> PublicParameters:
    """Deterministically derive public parameters from the ceremony seed."""
    if len(seed) != SEED_LEN:
        raise ValueError("seed must be exactly 32 bytes")
    g1 = G1Point.hash_to_point(seed, b"martsia/params/g1")
    g2 = G2Point.hash_to_point(seed, b"martsia/params/g2")
    egg = curve.pairing(g1, g2)
    return PublicParameters(GroupDescription.default(), g1, g2, egg)


def _assemble_keypair(
    params: PublicParameters, authority_id: str, alpha: int, y: int
) -> AuthorityKeypair:
    pk = AuthorityPublicKey(authority_id, params.egg_exp(alpha), params.g1.mul(y))
    return AuthorityKeypair(authority_id, alpha, y, pk)


def auth_setup(params: PublicParameters, authority_id: str, rng) -> AuthorityKeypair:
    """Generate an authority's MA-ABE keypair."""
    alpha = curve.random_scalar(rng)
    y = curve.random_scalar(rng)
    return _assemble_keypair(params, authority_id, alpha, y)


def verify_keypair(params: PublicParameters, keypair: AuthorityKeypair) -> bool:
    """Check that the public key matches the secret exponents."""
    pk = keypair.public_key
    return pk.egga == params.egg_exp(keypair.alpha) and pk.gy == params.g1.mul(
        keypair.y
    )


def keygen(
    params: PublicParameters,
    authority: AuthorityKeypair,
    gid: str,
    attribute: str,
    rng,
) -> KeyShare:
    """Issue a decryption-key share for one attested, namespaced attribute."""
    try:
        _, auth = split_scheme_attribute(attribute)
    except ValueError as exc:
        raise NamespaceMismatch(str(exc)) from exc
    if auth != authority.authority_id:
        raise NamespaceMismatch(
            f"attribute {attribute!r} is not in authority {authority.authority_id!r}'s namespace"
        )
    t = curve.random_scalar(rng)
    k = (
        params.g2.mul(authority.alpha)
        .add(hash_gid(gid).mul(authority.y))
        .add(hash_attribute(attribute).mul(t))
    )
    return KeyShare(gid, authority.authority_id, attribute, k, params.g1.mul(t))


def verify_share(
    params: PublicParameters, pk: AuthorityPublicKey, share: KeyShare
) -> bool:
    """Pairing check: e(g1, K) = egg^alpha e(g1^y, H(gid)) e(KP, F(attr))."""
    if share.authority_id != pk.authority_id:
        return False
    lhs = curve.pairing_product(
        [
            (params.g1.neg(), share.k),
            (pk.gy, hash_gid(share.gid)),
            (share.kp, hash_attribute(share.attribute)),
        ]
    )
    return (lhs * pk.egga).is_one()


def merge_shares(shares) -> FullDecryptionKey:
    """Merge per-authority shares into a full decryption key.

    Duplicate (authority, attribute) pairs collapse to a single share; shares
    for different gids are rejected outright.
    """
    shares = list(shares)
    if not shares:
        raise ValueError("cannot merge an empty share set")
    gid = shares[0].gid
    merged: dict = {}
    for share in shares:
        if share.gid != gid:
            raise GidMismatch(
                f"share for gid {share.gid!r} cannot join a key for {gid!r}"
            )
        merged.setdefault(share.attribute, share)
    return FullDecryptionKey(gid, merged)


def abe_encrypt(
    params: PublicParameters,
    authority_pks: dict,
    policy,
    value: bytes,
    rng,
) -> AbeCiphertext:
    """Wrap a 32-byte value so only satisfying attribute sets can recover it.

    `policy` may be policy text or a parsed AST; thresholds are expanded over
    the sorted ids of `authority_pks`.
    """
    if len(value) != 32:
        raise ValueError("value must be exactly 32 bytes")
    ast: PolicyAst = parse_policy(policy) if isinstance(policy, str) else policy
    policy_text = pretty_policy(ast)
    authorities = tuple(sorted(authority_pks))
    expanded = expand_thresholds(ast, authorities)
    missing = referenced_authorities(expanded) - set(authorities)
    if missing:
        raise MissingAuthorityKey(f"no public key for {sorted(missing)}")
    structure = compile_lsss(expanded, int(curve.ORDER))

    s = curve.random_scalar(rng)
    lam = share_secrets(
        structure, s, [curve.random_scalar(rng) for _ in range(structure.width - 1)]
    )
    omega = share_secrets(
        structure, 0, [curve.random_scalar(rng) for _ in range(structure.width - 1)]
    )
    blind = params.egg_exp(s)
    blind_bytes = blind.to_bytes()
    wrapped = _xor32(value, hash256(_KEK_TAG + blind_bytes))
    check = hash256(_CHECK_TAG + blind_bytes)

    rows = []
    for (attr, _), lam_x, om_x in zip(structure.rows, lam, omega):
        _, auth = split_scheme_attribute(attr)
        pk: AuthorityPublicKey = authority_pks[auth]
        t = curve.random_scalar(rng)
        c1 = params.egg_exp(lam_x) * pk.egga_exp(t)
        c2 = params.g1.mul(t).neg()
        c3 = pk.gy.mul(t).add(params.g1.mul(om_x))
        c4 = hash_attribute(attr).mul(t)
        rows.append(CipherRow(attr, c1, c2, c3, c4))
    return AbeCiphertext(policy_text, authorities, tuple(rows), wrapped, check)


def abe_decrypt(
    params: PublicParameters, ct: AbeCiphertext, fdk: FullDecryptionKey
) -> bytes:
    """Recover the wrapped value; fails unless the key satisfies the policy."""
    structure = ct.access_structure()
    if len(structure.rows) != len(ct.rows):
        raise MalformedCiphertext("row count does not match the policy")
    coeffs = reconstruction_coefficients(structure, fdk.attributes())
    if coeffs is None:
        raise PolicyNotSatisfied(ct.policy_text)

    hgid = hash_gid(fdk.gid)
    gt_terms = []
    pairs = []
    c3_acc = G1Point.identity()
    for idx, c in coeffs.items():
        row = ct.rows[idx]
        share = fdk.shares[row.attribute]
        gt_terms.append((row.c1, c))
        pairs.append((row.c2.mul(c), share.k))
        pairs.append((share.kp.mul(c), row.c4))
        c3_acc = c3_acc.add(row.c3.mul(c))
    pairs.append((c3_acc, hgid))
    blind = curve.gt_multi_exp(gt_terms) * curve.pairing_product(pairs)
    blind_bytes = blind.to_bytes()
    if hash256(_CHECK_TAG + blind_bytes) != ct.value_check:
        raise PolicyNotSatisfied(
            ct.policy_text,
            "decryption check failed: shares do not form a valid key for this policy",
        )
    return _xor32(ct.wrapped_value, hash256(_KEK_TAG + blind_bytes))
