"""Access-policy language: parsing, threshold expansion, LSSS compilation.

Grammar (keywords case-insensitive, attribute names case-sensitive)::

    policy   := or_expr
    or_expr  := and_expr ( "or" and_expr )*
    and_expr := primary ( "and" primary )*
    primary  := LEAF | "(" policy ")"
    LEAF     := ATTR "@" ( AUTHID | INT "+" )
    ATTR     := [A-Za-z0-9_-]+        AUTHID := [A-Za-z0-9_-]+

``and`` binds tighter than ``or``. A leaf ``T@A`` demands attribute ``T``
attested by authority ``A``; ``T@n+`` demands attestations of ``T`` from at
least n distinct authorities.

Compilation maps a policy (after threshold expansion over a concrete,
ordered authority list) to a monotone linear secret-sharing structure: one
matrix row per leaf, labelled with the namespaced attribute ``T@A``. A set
of rows reconstructs the secret exactly when the corresponding leaves
satisfy the formula; thresholds compile to Vandermonde-style gadget columns
rather than an exponential or-of-ands.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

try:
    from gmpy2 import invert as _invert
except ImportError:  # pragma: no cover
    def _invert(a, m):
        return pow(a, m - 2, m)

from .errors import EmptyPolicy, PolicySyntaxError, ThresholdExceedsAuthorities

_WORD_RE = re.compile(r"[A-Za-z0-9_-]+")


# ------------------------------------------------------------------- AST ---

@dataclass(frozen=True)
class Named:
    authority_id: str

    def __str__(self):
        return self.authority_id


@dataclass(frozen=True)
class Threshold:
    n: int

    def __str__(self):
        return f"{self.n}+"


AuthSpec = Union[Named, Threshold]


@dataclass(frozen=True)
class Leaf:
    attribute: str
    authority: AuthSpec


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class ThresholdGate:
    """n-of-len(children) gate; produced by expand_thresholds, not the parser."""

    n: int
    children: tuple


PolicyAst = Union[Leaf, And, Or, ThresholdGate]


def scheme_attribute(attribute: str, authority_id: str) -> str:
    """Namespaced attribute string ``ATTR@AUTHORITY``."""
    return f"{attribute}@{authority_id}"


def split_scheme_attribute(namespaced: str) -> tuple[str, str]:
    attr, sep, auth = namespaced.rpartition("@")
    if not sep or not attr or not auth:
        raise ValueError(f"not a namespaced attribute: {namespaced!r}")
    return attr, auth


# ---------------------------------------------------------------- parsing ---

class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> Optional[str]:
        self.skip_ws()
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def word(self) -> Optional[str]:
        self.skip_ws()
        m = _WORD_RE.match(self.text, self.pos)
        if not m:
            return None
        self.pos = m.end()
        return m.group()

    def expect_char(self, ch: str):
        got = self.peek()
        if got != ch:
            raise PolicySyntaxError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def error(self, message: str):
        raise PolicySyntaxError(message, self.pos)


class _Parser:
    def __init__(self, text: str):
        self.tok = _Tokenizer(text)

    def parse(self) -> PolicyAst:
        node = self._or_expr()
        self.tok.skip_ws()
        if self.tok.pos != len(self.tok.text):
            self.tok.error("unexpected trailing input")
        return node

    def _or_expr(self) -> PolicyAst:
        children = [self._and_expr()]
        while self._keyword("or"):
            children.append(self._and_expr())
        return children[0] if len(children) == 1 else Or(tuple(children))

    def _and_expr(self) -> PolicyAst:
        children = [self._primary()]
        while self._keyword("and"):
            children.append(self._primary())
        return children[0] if len(children) == 1 else And(tuple(children))

    def _keyword(self, kw: str) -> bool:
        save = self.tok.pos
        word = self.tok.word()
        if word is not None and word.lower() == kw:
            return True
        self.tok.pos = save
        return False

    def _primary(self) -> PolicyAst:
        ch = self.tok.peek()
        if ch == "(":
            self.tok.expect_char("(")
            node = self._or_expr()
            self.tok.expect_char(")")
            return node
        return self._leaf()

    def _leaf(self) -> Leaf:
        word = self.tok.word()
        if word is None:
            self.tok.error("expected an attribute")
        if word.lower() in ("and", "or"):
            self.tok.error("keyword in place of an attribute")
        self.tok.skip_ws()
        if self.tok.peek() != "@":
            self.tok.error(f"expected '@' after attribute {word!r}")
        self.tok.pos += 1
        spec = self.tok.word()
        if spec is None:
            self.tok.error("expected an authority id or threshold after '@'")
        if self.tok.pos < len(self.tok.text) and self.tok.text[self.tok.pos] == "+":
            self.tok.pos += 1
            if not spec.isdigit():
                self.tok.error("threshold must be an integer before '+'")
            n = int(spec)
            if n < 1:
                self.tok.error("threshold must be at least 1")
            return Leaf(word, Threshold(n))
        return Leaf(word, Named(spec))


def parse_policy(text: str) -> PolicyAst:
    """Parse policy text into an AST of Or/And/Leaf nodes."""
    if not text or not text.strip():
        raise EmptyPolicy("policy text is empty")
    return _Parser(text).parse()


def pretty_policy(node: PolicyAst, _parent: str = "or") -> str:
    """Canonical text form; parse(pretty_policy(ast)) == ast."""
    if isinstance(node, Leaf):
        return f"{node.attribute}@{node.authority}"
    if isinstance(node, And):
        body = " and ".join(pretty_policy(c, "and") for c in node.children)
        return body
    if isinstance(node, Or):
        body = " or ".join(pretty_policy(c, "or") for c in node.children)
        return f"({body})" if _parent == "and" else body
    raise ValueError("threshold gates have no textual form")


# ---------------------------------------------------- threshold expansion ---

def expand_thresholds(node: PolicyAst, authorities: Sequence[str]) -> PolicyAst:
    """Replace every ``T@n+`` leaf with an n-of-N gate over the authorities."""
    if isinstance(node, Leaf):
        if isinstance(node.authority, Named):
            return node
        n = node.authority.n
        if n > len(authorities):
            raise ThresholdExceedsAuthorities(
                f"{node.attribute}@{n}+ needs {n} authorities, only "
                f"{len(authorities)} known"
            )
        leaves = tuple(Leaf(node.attribute, Named(a)) for a in authorities)
        if len(leaves) == 1:
            return leaves[0]
        return ThresholdGate(n, leaves)
    if isinstance(node, And):
        return And(tuple(expand_thresholds(c, authorities) for c in node.children))
    if isinstance(node, Or):
        return Or(tuple(expand_thresholds(c, authorities) for c in node.children))
    if isinstance(node, ThresholdGate):
        return ThresholdGate(
            node.n, tuple(expand_thresholds(c, authorities) for c in node.children)
        )
    raise TypeError(f"not a policy node: {node!r}")


# ------------------------------------------------------- LSSS compilation ---

@dataclass(frozen=True)
class AccessStructure:
    """Monotone span program: one row per leaf, share vectors of equal width."""

    rows: tuple  # of (namespaced_attribute, tuple[int, ...])
    width: int
    modulus: int

    def attributes(self) -> set:
        return {attr for attr, _ in self.rows}


def compile_lsss(node: PolicyAst, modulus: int) -> AccessStructure:
    """Compile an expanded policy (Named leaves only) to an LSSS matrix.

    Every gate treats its children as an m-of-n threshold (Or: m=1, And:
    m=n). Child i extends the parent vector with (i, i^2, ..., i^(m-1)) in
    m-1 fresh columns; a child subset spans the parent vector exactly when
    it has size >= m.
    """
    rows: list = []
    state = {"width": 1}

    def visit(n: PolicyAst, vector: dict):
        if isinstance(n, Leaf):
            if not isinstance(n.authority, Named):
                raise ValueError("expand_thresholds must run before compile_lsss")
            rows.append(
                (scheme_attribute(n.attribute, n.authority.authority_id), dict(vector))
            )
            return
        if isinstance(n, Or):
            m = 1
        elif isinstance(n, And):
            m = len(n.children)
        elif isinstance(n, ThresholdGate):
            m = n.n
        else:
            raise TypeError(f"not a policy node: {n!r}")
        if m == 1:
            for child in n.children:
                visit(child, vector)
            return
        first_col = state["width"]
        state["width"] += m - 1
        for i, child in enumerate(n.children, start=1):
            v = dict(vector)
            point = 1
            for j in range(m - 1):
                point = point * i % modulus
                v[first_col + j] = point
            visit(child, v)

    visit(node, {0: 1})
    width = state["width"]
    packed = tuple(
        (attr, tuple(vec.get(col, 0) % modulus for col in range(width)))
        for attr, vec in rows
    )
    return AccessStructure(rows=packed, width=width, modulus=modulus)


def share_secrets(structure: AccessStructure, secret: int, randoms: Sequence[int]) -> list:
    """Per-row shares A_x . (secret, randoms...) mod the structure modulus."""
    if len(randoms) != structure.width - 1:
        raise ValueError("need width-1 random coefficients")
    z = (secret, *randoms)
    m = structure.modulus
    return [sum(a * b for a, b in zip(vec, z)) % m for _, vec in structure.rows]


def reconstruction_coefficients(
    structure: AccessStructure, available: Iterable[str]
) -> Optional[dict]:
    """Coefficients c with sum(c_x * A_x) = (1, 0, ..) over the given rows.

    Returns {row_index: coefficient} with zero entries dropped, or None when
    the available attributes do not satisfy the structure.
    """
    have = set(available)
    usable = [i for i, (attr, _) in enumerate(structure.rows) if attr in have]
    if not usable:
        return None
    m = structure.modulus
    width = structure.width
    # Augmented system: width equations, one unknown per usable row.
    mat = [
        [structure.rows[i][1][eq] for i in usable] + [1 if eq == 0 else 0]
        for eq in range(width)
    ]
    ncols = len(usable)
    pivot_of_col: dict = {}
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, width) if mat[r][col] % m), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = int(_invert(mat[rank][col] % m, m))
        mat[rank] = [v * inv % m for v in mat[rank]]
        for r in range(width):
            if r != rank and mat[r][col] % m:
                factor = mat[r][col] % m
                mat[r] = [(a - factor * b) % m for a, b in zip(mat[r], mat[rank])]
        pivot_of_col[col] = rank
        rank += 1
    for r in range(rank, width):
        if mat[r][ncols] % m:
            return None  # inconsistent: e1 not in the row span
    coeffs = {}
    for col, row in pivot_of_col.items():
        value = mat[row][ncols] % m
        if value:
            coeffs[usable[col]] = value
    # Verify (cheap) and guard against free-variable inconsistencies.
    total = [0] * width
    for idx, c in coeffs.items():
        vec = structure.rows[idx][1]
        total = [(t + c * v) % m for t, v in zip(total, vec)]
    if total != [1] + [0] * (width - 1):
        return None
    return coeffs


# ------------------------------------------------------------------ oracle ---

@dataclass(frozen=True)
class AttestationSet:
    """Set of (attribute, authority_id) attestations a reader holds."""

    entries: frozenset

    @staticmethod
    def of(pairs: Iterable[tuple]) -> "AttestationSet":
        return AttestationSet(frozenset((a, b) for a, b in pairs))

    def scheme_attributes(self) -> set:
        return {scheme_attribute(a, b) for a, b in self.entries}


def satisfies_oracle(
    node: PolicyAst, attestations: AttestationSet, authorities: Sequence[str]
) -> bool:
    """Reference truth-table semantics for policies, thresholds included."""
    entries = attestations.entries

    def ev(n: PolicyAst) -> bool:
        if isinstance(n, Leaf):
            if isinstance(n.authority, Named):
                return (n.attribute, n.authority.authority_id) in entries
            count = sum(1 for a in authorities if (n.attribute, a) in entries)
            return count >= n.authority.n
        if isinstance(n, And):
            return all(ev(c) for c in n.children)
        if isinstance(n, Or):
            return any(ev(c) for c in n.children)
        if isinstance(n, ThresholdGate):
            return sum(1 for c in n.children if ev(c)) >= n.n
        raise TypeError(f"not a policy node: {n!r}")

    return ev(node)


def policy_leaves(node: PolicyAst) -> list:
    """All leaves in document order."""
    if isinstance(node, Leaf):
        return [node]
    out = []
    for child in node.children:
        out.extend(policy_leaves(child))
    return out


def referenced_authorities(node: PolicyAst) -> set:
    """Authority ids appearing in Named leaves."""
    return {
        leaf.authority.authority_id
        for leaf in policy_leaves(node)
        if isinstance(leaf.authority, Named)
    }


def has_thresholds(node: PolicyAst) -> bool:
    return any(isinstance(leaf.authority, Threshold) for leaf in policy_leaves(node))
