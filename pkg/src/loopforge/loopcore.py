"""
Finite loops as Latin squares. The identity is always element 0 and ``table[i, j] = i∘j``.

Identity checks are vectorized with numpy over all index tuples; the first witness reported
is always the lexicographically smallest violating tuple.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import FormatError, NoIdentity, NoTwoSidedInverse, NotBol, NotLatin, NotNormal, SizeLimit
from . import permcore

logger = logging.getLogger(__name__)

LATTICE_LIMIT = 32


class Loop:
    """An order-n loop on {0, ..., n-1} with identity 0. The table is read-only"""

    def __init__(self, table: np.ndarray):
        self.table = np.array(table, dtype=np.int64)
        self.table.flags.writeable = False

    @property
    def n(self) -> int:
        return self.table.shape[0]

    def __call__(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def __eq__(self, other) -> bool:
        return isinstance(other, Loop) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def __repr__(self) -> str:
        return f"Loop(n={self.n})"

    @functools.cached_property
    def inverses(self) -> np.ndarray:
        """Right inverses: table[x, inverses[x]] = 0"""
        return self.table.argmin(axis=1)

    @functools.cached_property
    def right_division(self) -> np.ndarray:
        """rdiv[z, y] is the unique x with x∘y = z"""
        n = self.n
        rdiv = np.empty_like(self.table)
        rdiv[self.table, np.arange(n)[None, :]] = np.arange(n)[:, None]
        return rdiv

    def tolist(self) -> List[List[int]]:
        return self.table.tolist()


@dataclass
class Verdict:
    """Outcome of an identity or structural check. witness is None when the check holds"""
    name: str
    holds: bool
    witness: Optional[Dict] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class Subloop:
    """A subset containing 0 and closed under ∘"""
    elements: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.elements


def validate_loop(table) -> Loop:
    """Checks the Latin property and the identity at 0; nothing is relabeled"""
    try:
        array = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise FormatError(f"Loop table is not an integer matrix: {e}") from e
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
        raise FormatError(f"Loop table must be a nonempty square matrix, got shape {array.shape}")
    n = array.shape[0]
    if array.min() < 0 or array.max() >= n:
        raise FormatError(f"Loop table entries must lie in 0..{n - 1}")

    expected = np.arange(n)
    for axis, label in ((1, "row"), (0, "column")):
        ordered = np.sort(array, axis=axis)
        ordered = ordered if axis == 1 else ordered.T
        bad = np.argwhere(ordered != expected)
        if len(bad):
            line = int(bad[0][0])
            values = array[line] if axis == 1 else array[:, line]
            counts = np.bincount(values, minlength=n)
            raise NotLatin(f"{label} {line} repeats an entry",
                           {label: line, "duplicate": int(np.argmax(counts > 1))})

    if not (np.array_equal(array[0], expected) and np.array_equal(array[:, 0], expected)):
        raise NoIdentity("Element 0 is not a two-sided identity")
    return Loop(array)


def cayley_table(G: permcore.PermGroup) -> Loop:
    """The group table of G on its sorted elements; the identity sorts first"""
    index = {g: i for i, g in enumerate(G.elements)}
    return Loop([[index[a * b] for b in G.elements] for a in G.elements])


# ~~~ Identity locator ~~~

class IdentityLocator:
    """
    Locates violations of the loop identities. Each handler yields arrays of witness tuples,
    slice by slice, in lexicographic order
    """

    def __init__(self):
        self.identity_handlers: Dict[str, Callable[[Loop], Iterator[np.ndarray]]] = {
            "bol": self._locate_bol,
            "aip": self._locate_aip,
            "ar": self._locate_ar,
            "associative": self._locate_associative,
            "commutative": self._locate_commutative,
        }
        self.witness_fields = {
            "bol": ("x", "y", "z"),
            "aip": ("x", "y"),
            "ar": ("x", "y", "u", "v"),
            "associative": ("x", "y", "z"),
            "commutative": ("x", "y"),
        }

    def _handler(self, identity: str):
        if identity not in self.identity_handlers:
            raise KeyError(f"Unknown identity '{identity}'")
        return self.identity_handlers[identity]

    def locate(self, L: Loop, identity: str) -> List[Tuple[int, ...]]:
        return [tuple(int(i) for i in row) for chunk in self._handler(identity)(L) for row in chunk]

    def first(self, L: Loop, identity: str) -> Optional[Dict[str, int]]:
        for chunk in self._handler(identity)(L):
            if len(chunk):
                return dict(zip(self.witness_fields[identity], (int(i) for i in chunk[0])))
        return None

    def _locate_bol(self, L: Loop) -> Iterator[np.ndarray]:
        """((x∘y)∘z)∘y = x∘((y∘z)∘y)"""
        T = L.table
        X, Y, Z = np.indices((L.n,) * 3)
        yield np.argwhere(T[T[T[X, Y], Z], Y] != T[X, T[T[Y, Z], Y]])

    def _locate_associative(self, L: Loop) -> Iterator[np.ndarray]:
        T = L.table
        X, Y, Z = np.indices((L.n,) * 3)
        yield np.argwhere(T[T[X, Y], Z] != T[X, T[Y, Z]])

    def _locate_commutative(self, L: Loop) -> Iterator[np.ndarray]:
        yield np.argwhere(L.table != L.table.T)

    def _locate_aip(self, L: Loop) -> Iterator[np.ndarray]:
        """(x∘y)^-1 = x^-1∘y^-1"""
        T, inv = L.table, L.inverses
        yield np.argwhere(inv[T] != T[inv[:, None], inv[None, :]])

    def _locate_ar(self, L: Loop) -> Iterator[np.ndarray]:
        """Every h_{x,y} = ρx ρy ρ_{x∘y}^-1 respects ∘; one slice per x"""
        T, rdiv = L.table, L.right_division
        n = L.n
        for x in range(n):
            h = rdiv[T[T[:, x][None, :], np.arange(n)[:, None]], T[x, :][:, None]]
            bad = np.argwhere(h[:, T] != T[h[:, :, None], h[:, None, :]])
            if len(bad):
                yield np.column_stack([np.full(len(bad), x), bad])


identity_locator = IdentityLocator()

def find_violations(L: Loop, identity: str) -> List[Tuple[int, ...]]:
    """All violating tuples of a named identity (bol, aip, ar, associative, commutative)"""
    return identity_locator.locate(L, identity)

def _identity_verdict(L: Loop, identity: str) -> Verdict:
    witness = identity_locator.first(L, identity)
    return Verdict(identity, witness is None, witness)


# ~~~ Identity checks ~~~

def check_bol(L: Loop) -> Verdict:
    return _identity_verdict(L, "bol")

def is_group(L: Loop) -> Verdict:
    return _identity_verdict(L, "associative")

def check_two_sided_inverses(L: Loop) -> None:
    bad = np.flatnonzero(L.table[L.inverses, np.arange(L.n)] != 0)
    if len(bad):
        x = int(bad[0])
        raise NoTwoSidedInverse(f"Right inverse of {x} is not a left inverse", {"x": x, "right_inverse": int(L.inverses[x])})

def check_aip(L: Loop) -> Verdict:
    check_two_sided_inverses(L)
    return _identity_verdict(L, "aip")

def is_bruck(L: Loop) -> Verdict:
    bol = check_bol(L)
    if not bol:
        return Verdict("bruck", False, {"failed": "bol", **bol.witness})
    aip = check_aip(L)
    if not aip:
        return Verdict("bruck", False, {"failed": "aip", **aip.witness})
    return Verdict("bruck", True)

def check_ar(L: Loop) -> Verdict:
    return _identity_verdict(L, "ar")

def _require_bol(L: Loop) -> None:
    verdict = check_bol(L)
    if not verdict:
        raise NotBol("Element orders are only defined here for Bol loops", verdict.witness)

def powers(L: Loop, x: int) -> List[int]:
    """x, x∘x, (x∘x)∘x, ... up to and including the identity"""
    result = [x]
    while result[-1] != 0:
        result.append(int(L.table[result[-1], x]))
        if len(result) > L.n:
            raise NotBol(f"Powers of {x} never return to the identity", {"x": x})
    return result

def element_order(L: Loop, x: int, checked: bool = False) -> int:
    if not checked:
        _require_bol(L)
    return 1 if x == 0 else len(powers(L, x))

def exponent(L: Loop) -> int:
    _require_bol(L)
    return math.lcm(*(element_order(L, x, checked=True) for x in range(L.n)))


# ~~~ Subloops ~~~

def _closure(T: np.ndarray, elements: Iterable[int]) -> FrozenSet[int]:
    current = {0, *(int(e) for e in elements)}
    while True:
        idx = np.fromiter(sorted(current), dtype=np.int64)
        products = set(T[np.ix_(idx, idx)].ravel().tolist())
        if products <= current:
            return frozenset(current)
        current |= products

def subloop_generated(L: Loop, S: Iterable[int]) -> Subloop:
    return Subloop(tuple(sorted(_closure(L.table, S))))

def restrict(L: Loop, S: Subloop) -> Tuple[Loop, Tuple[int, ...]]:
    """The subloop table relabeled to 0..|S|-1 (identity first), plus the label of each new index"""
    labels = tuple(sorted(S.elements))
    index = {x: i for i, x in enumerate(labels)}
    idx = np.array(labels)
    sub = np.vectorize(index.__getitem__, otypes=[np.int64])(L.table[np.ix_(idx, idx)])
    return Loop(sub), labels

def subloop_lattice(L: Loop) -> List[Subloop]:
    """All subloops, ordered by (size, elements)"""
    if L.n > LATTICE_LIMIT:
        raise SizeLimit(f"Subloop lattice search is limited to order {LATTICE_LIMIT}", {"n": L.n})
    T = L.table
    cyclic = {_closure(T, [x]) for x in range(L.n)}
    found = set(cyclic)
    queue = list(found)
    while queue:
        S = queue.pop()
        for C in cyclic:
            if C <= S:
                continue
            J = _closure(T, S | C)
            if J not in found:
                found.add(J)
                queue.append(J)
    logger.debug("subloop lattice of order-%d loop has %d members", L.n, len(found))
    return sorted((Subloop(tuple(sorted(S))) for S in found), key=lambda S: (len(S), S.elements))


# ~~~ Normal subloops and quotients ~~~

def _coset_blocks(T: np.ndarray, N: Sequence[int], within: Sequence[int]) -> Tuple[Optional[List[Tuple[int, ...]]], Optional[Dict]]:
    """Cosets N∘x for x in `within`; None plus a witness if they do not partition it"""
    within_set = set(within)
    members = np.array(sorted(N))
    block_of: Dict[int, int] = {}
    blocks: List[Tuple[int, ...]] = []
    for x in sorted(within):
        if x in block_of:
            continue
        block = set(T[members, x].tolist())
        clash = [b for b in block if b in block_of]
        if clash or not block <= within_set:
            return None, {"element": x, "overlaps_block": block_of.get(clash[0]) if clash else None}
        for b in block:
            block_of[b] = len(blocks)
        blocks.append(tuple(sorted(block)))
    return blocks, None

def _block_products(T: np.ndarray, blocks: List[Tuple[int, ...]]) -> Tuple[Optional[np.ndarray], Optional[Dict]]:
    """Block multiplication table, or None plus the first pair of blocks whose product straddles blocks"""
    block_of = {x: i for i, b in enumerate(blocks) for x in b}
    lookup = np.vectorize(block_of.__getitem__, otypes=[np.int64])
    k = len(blocks)
    table = np.zeros((k, k), dtype=np.int64)
    for i, j in itertools.product(range(k), repeat=2):
        landed = np.unique(lookup(T[np.ix_(blocks[i], blocks[j])]))
        if len(landed) != 1:
            return None, {"blocks": [i, j], "landed_in": landed.tolist()}
        table[i, j] = landed[0]
    return table, None

def is_normal_subloop(L: Loop, N: Iterable[int]) -> Verdict:
    """Block criterion: the cosets N∘x partition L and block products land in single blocks"""
    N = sorted(set(N))
    if N != sorted(_closure(L.table, N)):
        return Verdict("normal", False, {"reason": "not a subloop"})
    blocks, witness = _coset_blocks(L.table, N, range(L.n))
    if blocks is None:
        return Verdict("normal", False, witness)
    _, witness = _block_products(L.table, blocks)
    return Verdict("normal", witness is None, witness)

def quotient_loop(L: Loop, N: Iterable[int]) -> Loop:
    N = sorted(set(N))
    verdict = is_normal_subloop(L, N)
    if not verdict:
        raise NotNormal("Subloop is not normal", verdict.witness)
    blocks, _ = _coset_blocks(L.table, N, range(L.n))
    table, _ = _block_products(L.table, blocks)
    return Loop(table)


# ~~~ Solubility ~~~

@dataclass
class SolubilityVerdict:
    holds: bool
    series: List[Subloop] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds

def _abelian_group_table(table: np.ndarray) -> bool:
    X, Y, Z = np.indices(table.shape + (table.shape[0],))
    return bool(np.array_equal(table, table.T) and np.array_equal(table[table[X, Y], Z], table[X, table[Y, Z]]))

def _group_series(L: Loop) -> SolubilityVerdict:
    """Derived series of the right regular representation, read back as element sets"""
    rows = [permcore.Perm(tuple(int(v) for v in L.table[:, x])) for x in range(L.n)]
    G = permcore.PermGroup.from_elements(L.n, rows)
    series = permcore.derived_series(G)
    if not series[-1].is_trivial():
        return SolubilityVerdict(False)
    return SolubilityVerdict(True, [Subloop(tuple(sorted(p.images[0] for p in S.elements))) for S in reversed(series)])

def is_soluble_loop(L: Loop) -> SolubilityVerdict:
    """Searches for 1 = X0 <= ... <= Xn = L with each X_i normal in X_{i+1} and abelian-group factors"""
    if L.n > LATTICE_LIMIT:
        raise SizeLimit(f"Solubility search is limited to order {LATTICE_LIMIT}", {"n": L.n})
    if is_group(L):
        return _group_series(L)
    T = L.table
    lattice = subloop_lattice(L)
    by_size = sorted(lattice, key=lambda S: (-len(S), S.elements))

    @functools.lru_cache(maxsize=None)
    def series_below(Y: Tuple[int, ...]) -> Optional[Tuple[Tuple[int, ...], ...]]:
        if len(Y) == 1:
            return (Y,)
        Y_set = set(Y)
        for N in by_size:
            if len(N) >= len(Y) or len(Y) % len(N) or not set(N.elements) <= Y_set:
                continue
            blocks, _ = _coset_blocks(T, N.elements, Y)
            if blocks is None:
                continue
            table, _ = _block_products(T, blocks)
            if table is None or not _abelian_group_table(table):
                continue
            below = series_below(N.elements)
            if below is not None:
                return below + (Y,)
        return None

    found = series_below(tuple(range(L.n)))
    if found is None:
        return SolubilityVerdict(False)
    return SolubilityVerdict(True, [Subloop(S) for S in found])


# ~~~ Isomorphism ~~~

def _cycle_type(perm: np.ndarray) -> Tuple[int, ...]:
    return tuple(sorted(len(c) for c in permcore.Perm(tuple(int(v) for v in perm)).cycles()))

def _element_invariants(L: Loop) -> List[Tuple]:
    return [(_cycle_type(L.table[x]), _cycle_type(L.table[:, x])) for x in range(L.n)]

def _generating_sequence(L: Loop) -> List[int]:
    gens: List[int] = []
    span = frozenset([0])
    while len(span) < L.n:
        x = min(set(range(L.n)) - span)
        gens.append(x)
        span = _closure(L.table, span | {x})
    return gens

def loops_isomorphic(L1: Loop, L2: Loop) -> Optional[np.ndarray]:
    """An identity-fixing relabeling phi with phi[x∘y] = phi[x]∘phi[y], or None"""
    if L1.n != L2.n:
        return None
    inv1, inv2 = _element_invariants(L1), _element_invariants(L2)
    if sorted(inv1) != sorted(inv2):
        return None
    T1, T2 = L1.table, L2.table
    gens = _generating_sequence(L1)

    def propagate(phi: Dict[int, int]) -> Optional[Dict[int, int]]:
        phi = dict(phi)
        used = {v: k for k, v in phi.items()}
        changed = True
        while changed:
            changed = False
            for a, b in itertools.product(list(phi), repeat=2):
                c, image = int(T1[a, b]), int(T2[phi[a], phi[b]])
                if c in phi:
                    if phi[c] != image:
                        return None
                elif image in used or inv1[c] != inv2[image]:
                    return None
                else:
                    phi[c] = image
                    used[image] = c
                    changed = True
        return phi

    def search(i: int, phi: Dict[int, int]) -> Optional[Dict[int, int]]:
        if i == len(gens):
            return phi
        x = gens[i]
        if x in phi:
            return search(i + 1, phi)
        used = set(phi.values())
        for y in range(L2.n):
            if y in used or inv2[y] != inv1[x]:
                continue
            extended = propagate({**phi, x: y})
            if extended is not None:
                found = search(i + 1, extended)
                if found is not None:
                    return found
        return None

    phi = search(0, {0: 0})
    if phi is None or len(phi) != L1.n:
        return None
    mapping = np.array([phi[x] for x in range(L1.n)])
    if not np.array_equal(mapping[T1], T2[mapping[:, None], mapping[None, :]]):
        return None
    return mapping
