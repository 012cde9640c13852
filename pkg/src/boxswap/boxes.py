"""Dense joint probability tables for n-party boxes with binary inputs/outputs.

A box is the table P(outputs | inputs) for n parties, each holding one input
bit and one output bit.  Words pack party bits little-endian: party 1 is the
least significant bit, so for word strings (serialization, CLI) the rightmost
character belongs to party 1.  The table is a flat tuple of ``4**n`` Scalars
indexed by ``(input_word << n) | output_word``.

Entries may be negative only for tables explicitly flagged ``quasi`` — those
show up as intermediate objects around couplers, never as physical boxes.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import ArityError, PartyCapError, SpecFileError, ValidationError, SignalingError
from .scalar import ONE, ZERO, Scalar

PARTY_CAP = 10
WORD_ORDER = "party1-lsb"


def word_to_str(word: int, n: int) -> str:
    return format(word, f"0{n}b")


def str_to_word(text: str, n: int) -> int:
    if not isinstance(text, str) or len(text) != n or set(text) - {"0", "1"}:
        raise SpecFileError(f"expected a binary word of length {n}, got {text!r}")
    return int(text, 2)


class BoxTable:
    """Immutable dense table; see the module docstring for the layout."""

    __slots__ = ("n", "probs", "quasi")

    def __init__(self, n: int, probs: Sequence[Scalar], quasi: bool = False):
        if n < 1:
            raise ArityError(f"a box needs at least one party, got n={n}")
        probs = tuple(probs)
        if len(probs) != 4**n:
            raise ArityError(f"table for n={n} needs {4**n} entries, got {len(probs)}")
        self.n = n
        self.probs = probs
        self.quasi = quasi

    def prob(self, input_word: int, output_word: int) -> Scalar:
        return self.probs[(input_word << self.n) | output_word]

    def entries(self):
        """Yield (input_word, output_word, value) for every cell."""
        n = self.n
        for x in range(2**n):
            base = x << n
            for a in range(2**n):
                yield x, a, self.probs[base | a]

    def __eq__(self, other):
        if not isinstance(other, BoxTable):
            return NotImplemented
        return self.n == other.n and self.probs == other.probs

    __hash__ = None

    def __repr__(self):
        return f"BoxTable(n={self.n}{', quasi' if self.quasi else ''})"

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        doc = {
            "n": self.n,
            "order": WORD_ORDER,
            "probs": [
                [word_to_str(x, self.n), word_to_str(a, self.n), p.to_json()]
                for x, a, p in self.entries()
                if p
            ],
        }
        if self.quasi:
            doc["quasi"] = True
        return doc

    @classmethod
    def from_json(cls, data) -> "BoxTable":
        if not isinstance(data, dict):
            raise SpecFileError("box document must be a JSON object")
        extra = set(data) - {"n", "order", "probs", "quasi"}
        if extra:
            raise SpecFileError(f"box document has unknown keys {sorted(extra)}")
        n = data.get("n")
        if not isinstance(n, int) or n < 1:
            raise SpecFileError(f"box document needs a positive integer 'n', got {n!r}")
        if data.get("order") != WORD_ORDER:
            raise SpecFileError(f"box document must declare order {WORD_ORDER!r}")
        probs = [ZERO] * 4**n
        seen = set()
        for item in data.get("probs", []):
            if not isinstance(item, (list, tuple)) or len(item) != 3:
                raise SpecFileError(f"box entry must be [inputs, outputs, scalar]: {item!r}")
            x = str_to_word(item[0], n)
            a = str_to_word(item[1], n)
            if (x, a) in seen:
                raise SpecFileError(f"duplicate box entry for inputs={item[0]} outputs={item[1]}")
            seen.add((x, a))
            probs[(x << n) | a] = Scalar.from_json(item[2])
        return cls(n, probs, quasi=bool(data.get("quasi", False)))


# -- named constructors ----------------------------------------------------


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise PartyCapError(
            f"n={n} parties means 4**{n} = {4**n} exact entries; the cap is {cap}. "
            "Marginalize earlier or pass a larger cap if you really mean it."
        )


@lru_cache(maxsize=None)
def gsb(n: int, cap: int = PARTY_CAP) -> BoxTable:
    """Generalized Svetlichny box: outputs XOR to the pairwise-product parity
    of the inputs, uniformly over the 2**(n-1) output words that comply.

    Tables are immutable, so the named constructors cache and share them."""
    if n < 2:
        raise ArityError("gsb needs n >= 2")
    _check_cap(n, cap)
    weight = Scalar.rational(1, 2 ** (n - 1))
    probs = [ZERO] * 4**n
    for x in range(2**n):
        k = x.bit_count()
        # XOR over unordered pairs j<k of input bits: C(k, 2) mod 2 of the set bits.
        parity = (k * (k - 1) // 2) & 1
        base = x << n
        for a in range(2**n):
            if a.bit_count() & 1 == parity:
                probs[base | a] = weight
    return BoxTable(n, probs)


def pr() -> BoxTable:
    return gsb(2)


def sb() -> BoxTable:
    return gsb(3)


@lru_cache(maxsize=None)
def anti_pr() -> BoxTable:
    half = Scalar.rational(1, 2)
    probs = [ZERO] * 16
    for x in range(4):
        x1, x2 = x & 1, (x >> 1) & 1
        for a in range(4):
            if (a & 1) ^ (a >> 1) == (x1 & x2) ^ 1:
                probs[(x << 2) | a] = half
    return BoxTable(2, probs)


@lru_cache(maxsize=None)
def mixed(n: int, cap: int = PARTY_CAP) -> BoxTable:
    if n < 2:
        raise ArityError("mixed needs n >= 2")
    _check_cap(n, cap)
    weight = Scalar.rational(1, 2**n)
    return BoxTable(n, [weight] * 4**n)


def isotropic(n: int, xi) -> BoxTable:
    """Convex-affine slide between gsb(n) (xi=1) and the fully mixed box (xi=0)."""
    xi = xi if isinstance(xi, Scalar) else Scalar(xi)
    if not (-ONE <= xi <= ONE):
        raise ValidationError(f"isotropic weight must lie in [-1, 1], got {xi}")
    return mix([(xi, gsb(n)), (ONE - xi, mixed(n))])


@lru_cache(maxsize=None)
def failure(n: int) -> BoxTable:
    """The box left behind by an unsuccessful swap: (3*mixed - gsb)/2."""
    return mix([(Scalar(Fraction(3, 2)), mixed(n)), (Scalar(Fraction(-1, 2)), gsb(n))])


def deterministic_local(assignments: Sequence[tuple]) -> BoxTable:
    """Deterministic local box: party i outputs ``c ^ (m & x_i)`` for its
    assignment pair ``(c, m)``.  The 4**n such boxes for fixed n are the
    vertices of the local deterministic polytope with binary strategies."""
    assignments = [(c & 1, m & 1) for c, m in assignments]
    n = len(assignments)
    if n < 1:
        raise ArityError("deterministic_local needs at least one party")
    _check_cap(n, PARTY_CAP)
    probs = [ZERO] * 4**n
    for x in range(2**n):
        a = 0
        for i, (c, m) in enumerate(assignments):
            bit = c ^ (m & (x >> i))
            a |= (bit & 1) << i
        probs[(x << n) | a] = ONE
    return BoxTable(n, probs)


_NAMED = {
    "pr": (pr, False),
    "anti_pr": (anti_pr, False),
    "sb": (sb, False),
    "mixed": (mixed, True),
    "gsb": (gsb, True),
    "failure": (failure, True),
}


def named_box(kind: str, n: int | None = None, xi=None) -> BoxTable:
    """Build one of the named families: pr, anti_pr, sb, mixed, gsb, failure,
    isotropic.  ``n`` is required for the sized families, ``xi`` only for
    isotropic."""
    if kind == "isotropic":
        if n is None or xi is None:
            raise ArityError("isotropic needs both n and xi")
        return isotropic(n, xi)
    if kind not in _NAMED:
        raise ArityError(f"unknown box kind {kind!r}; expected one of "
                         f"{sorted(_NAMED) + ['isotropic']}")
    if xi is not None:
        raise ArityError(f"box kind {kind!r} takes no xi")
    fn, sized = _NAMED[kind]
    fixed = {"pr": 2, "anti_pr": 2, "sb": 3}.get(kind)
    if sized:
        if n is None:
            raise ArityError(f"box kind {kind!r} needs n")
        return fn(n)
    if n is not None and n != fixed:
        raise ArityError(f"box kind {kind!r} is fixed at n={fixed}, got n={n}")
    return fn()


# -- operations -------------------------------------------------------------


def mix(terms: Iterable[tuple], quasi: bool = False) -> BoxTable:
    """Affine combination of same-arity tables.

    Weights must sum to one exactly.  Negative weights are fine as long as
    the result stays nonnegative; pass ``quasi=True`` to keep a table that
    does not (it will carry the flag).
    """
    terms = [(w if isinstance(w, Scalar) else Scalar(w), box) for w, box in terms]
    if not terms:
        raise ValidationError("mix of nothing")
    n = terms[0][1].n
    if any(box.n != n for _, box in terms):
        raise ArityError("mix needs tables over the same parties")
    total = ZERO
    for w, _ in terms:
        total = total + w
    if total != ONE:
        raise ValidationError(f"mix weights must sum to 1, got {total}")
    out = [ZERO] * 4**n
    for w, box in terms:
        if not w:
            continue
        for i, p in enumerate(box.probs):
            if p:
                out[i] = out[i] + w * p
    if not quasi:
        for i, p in enumerate(out):
            if p.sign() < 0:
                raise ValidationError(
                    f"mix produced a negative entry at index {i}; "
                    "pass quasi=True if that is intended"
                )
    return BoxTable(n, out, quasi=quasi)


def tensor(a: BoxTable, b: BoxTable, cap: int = PARTY_CAP) -> BoxTable:
    """Independent side-by-side composition; ``a`` keeps the low party slots."""
    n = a.n + b.n
    _check_cap(n, cap)
    out = [ZERO] * 4**n
    na = a.n
    for xa, aa, pa in a.entries():
        if not pa:
            continue
        for xb, ab, pb in b.entries():
            if not pb:
                continue
            out[((xa | (xb << na)) << n) | (aa | (ab << na))] = pa * pb
    return BoxTable(n, out, quasi=a.quasi or b.quasi)


def _scatter(bits: int, slots: Sequence[int]) -> int:
    word = 0
    for i, party in enumerate(slots):
        word |= ((bits >> i) & 1) << (party - 1)
    return word


def marginalize(
    box: BoxTable,
    keep: Sequence[int],
    fixed_inputs: Mapping[int, int] | None = None,
) -> BoxTable:
    """Trace out every party not in ``keep`` (result party k is keep[k-1],
    so this doubles as a permutation when ``keep`` lists all parties).

    For a nonsignaling table the discarded parties' inputs cannot matter;
    that is checked exactly, and a violation raises SignalingError naming a
    party whose input shifts the marginal.  ``fixed_inputs`` selects which
    input assignment the discarded parties are read at (cosmetic for valid
    boxes, given the check).
    """
    keep = list(keep)
    if not keep or len(set(keep)) != len(keep):
        raise ArityError(f"keep must list distinct parties, got {keep}")
    if any(p < 1 or p > box.n for p in keep):
        raise ArityError(f"keep={keep} out of range for n={box.n}")
    dropped = [p for p in range(1, box.n + 1) if p not in keep]
    if fixed_inputs is not None:
        if set(fixed_inputs) != set(dropped):
            raise ArityError(
                f"fixed_inputs must cover exactly the discarded parties {dropped}"
            )
        if any(bit not in (0, 1) for bit in fixed_inputs.values()):
            raise ArityError("fixed_inputs values must be bits")
    m = len(keep)
    d = len(dropped)
    # word -> kept-subword, computed once; shared by inputs and outputs
    extract = [0] * 2**box.n
    for w in range(2**box.n):
        sub = 0
        for i, party in enumerate(keep):
            sub |= ((w >> (party - 1)) & 1) << i
        extract[w] = sub

    def table_at(assign: int) -> tuple:
        xd = _scatter(assign, dropped)
        out = [ZERO] * 4**m
        for xk in range(2**m):
            x = _scatter(xk, keep) | xd
            base = x << box.n
            for a in range(2**box.n):
                p = box.probs[base | a]
                if not p:
                    continue
                idx = (xk << m) | extract[a]
                out[idx] = out[idx] + p
        return tuple(out)

    tables = [table_at(assign) for assign in range(2**d)]
    for assign in range(2**d):
        for i, party in enumerate(dropped):
            other = assign ^ (1 << i)
            if tables[assign] != tables[other]:
                raise SignalingError(party)
    chosen = 0
    if fixed_inputs is not None:
        for i, party in enumerate(dropped):
            chosen |= fixed_inputs[party] << i
    return BoxTable(m, tables[chosen], quasi=box.quasi)


def permute_parties(box: BoxTable, order: Sequence[int]) -> BoxTable:
    """Reorder parties; result party k is original party order[k-1]."""
    if sorted(order) != list(range(1, box.n + 1)):
        raise ArityError(f"order must be a permutation of 1..{box.n}, got {list(order)}")
    return marginalize(box, order)


def merge_parties(box: BoxTable, i: int, j: int) -> BoxTable:
    """Wire parties i and j into one user: the merged party feeds its input
    bit to both slots and announces the XOR of the two output bits.  The
    merged party sits at min(i, j)'s slot; parties after max(i, j) shift
    down by one."""
    if i == j or not (1 <= i <= box.n and 1 <= j <= box.n):
        raise ArityError(f"merge needs two distinct parties in range, got {i}, {j}")
    if box.n < 2:
        raise ArityError("merge needs at least two parties")
    lo, hi = min(i, j), max(i, j)
    n, m = box.n, box.n - 1
    # result slot -> original party, with lo's slot standing for the pair
    slot_of = [p for p in range(1, n + 1) if p != hi]
    lo_slot = slot_of.index(lo)
    out = [ZERO] * 4**m
    for xr in range(2**m):
        x = _scatter(xr, slot_of)
        x |= ((xr >> lo_slot) & 1) << (hi - 1)  # common input
        base = x << n
        for ar in range(2**m):
            merged_bit = (ar >> lo_slot) & 1
            acc = ZERO
            for t in (0, 1):
                a = 0
                for s, party in enumerate(slot_of):
                    bit = (ar >> s) & 1
                    if party == lo:
                        bit = t
                    a |= bit << (party - 1)
                a |= (t ^ merged_bit) << (hi - 1)
                p = box.probs[base | a]
                if p:
                    acc = acc + p
            out[(xr << m) | ar] = acc
    return BoxTable(m, out, quasi=box.quasi)


# -- validation -------------------------------------------------------------


class ValidationReport:
    """Outcome of the exact distribution / nonsignaling checks."""

    __slots__ = ("normalized", "nonnegative", "nonsignaling")

    def __init__(self, normalized: bool, nonnegative: bool, nonsignaling: dict):
        self.normalized = normalized
        self.nonnegative = nonnegative
        self.nonsignaling = nonsignaling  # party -> bool

    @property
    def all_ok(self) -> bool:
        return self.normalized and self.nonnegative and all(self.nonsignaling.values())

    def to_json(self) -> dict:
        return {
            "normalized": self.normalized,
            "nonnegative": self.nonnegative,
            "nonsignaling": {str(p): ok for p, ok in sorted(self.nonsignaling.items())},
            "all_ok": self.all_ok,
        }

    def __repr__(self):
        return (
            f"ValidationReport(normalized={self.normalized}, "
            f"nonnegative={self.nonnegative}, nonsignaling={self.nonsignaling})"
        )


def validate(box: BoxTable) -> ValidationReport:
    n = box.n
    normalized = True
    nonnegative = True
    for x in range(2**n):
        base = x << n
        row = ZERO
        for a in range(2**n):
            p = box.probs[base | a]
            if p.sign() < 0:
                nonnegative = False
            row = row + p
        if row != ONE:
            normalized = False
    nonsignaling = {}
    for party in range(1, n + 1):
        xbit = 1 << (party - 1)
        ok = True
        for x in range(2**n):
            if x & xbit:
                continue
            lo, hi = x << n, (x | xbit) << n
            # marginal over this party's output must match at both inputs
            for a in range(2**n):
                if a & xbit:
                    continue
                p0 = box.probs[lo | a] + box.probs[lo | a | xbit]
                p1 = box.probs[hi | a] + box.probs[hi | a | xbit]
                if p0 != p1:
                    ok = False
                    break
            if not ok:
                break
        nonsignaling[party] = ok
    return ValidationReport(normalized, nonnegative, nonsignaling)
