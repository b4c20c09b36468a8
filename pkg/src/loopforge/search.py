"""
Exhaustive generators of small instances: loops by Latin-square backtracking, folders
satisfying Hypothesis (A), and general transversal folders inside a given group.
"""

from __future__ import annotations

import functools
import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd

from .baer import Folder, check_folder_axiom, verify_folder
from .bx2p import classify_folder
from .errors import InputError, NotTransversal, NotTwisted, SizeLimit
from .loopcore import Loop, check_ar, check_bol, check_aip, exponent, is_group, loops_isomorphic
from .permcore import Perm, PermGroup, conjugacy_classes, cosets, is_power_of, subgroup_class_representatives

logger = logging.getLogger(__name__)

DEFAULT_WORKERS = int(os.environ.get("LOOPFORGE_WORKERS", 1))

CONSTRAINTS = ("bol", "aip", "exponent2", "ar")
FULL_ENUMERATION_LIMIT = 8
PRUNED_ENUMERATION_LIMIT = 10
CANONICAL_FORM_LIMIT = 7
INCREMENTAL_BOL_FROM = 7
HYPOTHESIS_A_LIMIT = 10_000
FOLDER_SEARCH_INDEX_LIMIT = 24


# ~~~ Loop enumeration ~~~

@dataclass(frozen=True)
class EnumSpec:
    order: int
    constraints: FrozenSet[str] = field(default_factory=frozenset)
    canonicalize: bool = True
    reverse: bool = False

    def __post_init__(self):
        object.__setattr__(self, "constraints", frozenset(self.constraints))

def _check_spec(spec: EnumSpec) -> None:
    unknown = sorted(spec.constraints - set(CONSTRAINTS))
    if unknown:
        raise InputError(f"Unknown constraint '{unknown[0]}'", {"known": list(CONSTRAINTS)})
    if spec.order < 1:
        raise InputError("Loop order must be positive", {"order": spec.order})
    limit = PRUNED_ENUMERATION_LIMIT if {"bol", "exponent2"} <= spec.constraints else FULL_ENUMERATION_LIMIT
    if spec.order > limit:
        raise SizeLimit(f"Enumeration is limited to order {limit} for these constraints", {"order": spec.order})

def _relabelings(n: int) -> np.ndarray:
    """All permutations of 0..n-1 fixing 0, one per row"""
    rest = list(itertools.permutations(range(1, n)))
    return np.array([(0,) + p for p in rest], dtype=np.int64).reshape(len(rest), n)

def canonical_form(table: np.ndarray, relabelings: Optional[np.ndarray] = None) -> Tuple[int, ...]:
    """Lexicographically least flattened table over identity-fixing relabelings"""
    n = table.shape[0]
    P = _relabelings(n) if relabelings is None else relabelings
    Q = np.argsort(P, axis=1)
    S = table[Q[:, :, None], Q[:, None, :]].reshape(len(P), -1)
    R = np.take_along_axis(P, S, axis=1)
    best = np.lexsort(R.T[::-1])[0]
    return tuple(int(v) for v in R[best])


class _LatinFiller:
    """
    Fills the loop table row by row with row and column bitmasks. Row 0 and column 0 hold the
    identity; the sentinel value n marks cells that are still empty
    """

    def __init__(self, spec: EnumSpec):
        self.spec = spec
        n = self.n = spec.order
        self.cells = [(i, j) for i in range(1, n) for j in range(1, n)]
        self.symbols = list(range(n))[::-1] if spec.reverse else list(range(n))
        self.incremental_bol = "bol" in spec.constraints and n >= INCREMENTAL_BOL_FROM
        self.relabelings = _relabelings(n) if spec.canonicalize and n < CANONICAL_FORM_LIMIT else None
        self.indices = np.indices((n, n, n))
        self._reset()

    def _reset(self) -> None:
        n = self.n
        self.table = np.full((n + 1, n + 1), n, dtype=np.int64)
        self.table[0, :n] = np.arange(n)
        self.table[:n, 0] = np.arange(n)
        self.row_used = [1 << i for i in range(n)]
        self.col_used = [1 << j for j in range(n)]
        self.row_used[0] = self.col_used[0] = (1 << n) - 1

    def _place(self, i: int, j: int, s: int) -> None:
        self.table[i, j] = s
        self.row_used[i] |= 1 << s
        self.col_used[j] |= 1 << s

    def _unplace(self, i: int, j: int, s: int) -> None:
        self.table[i, j] = self.n
        self.row_used[i] &= ~(1 << s)
        self.col_used[j] &= ~(1 << s)

    def _partial_bol_ok(self) -> bool:
        """((x∘y)∘z)∘y = x∘((y∘z)∘y) wherever both sides are already defined"""
        E, n = self.table, self.n
        X, Y, Z = self.indices
        left = E[E[E[X, Y], Z], Y]
        right = E[X, E[E[Y, Z], Y]]
        return not np.any((left != n) & (right != n) & (left != right))

    def _candidates(self, i: int, j: int) -> List[int]:
        used = self.row_used[i] | self.col_used[j]
        if "exponent2" in self.spec.constraints:
            if i == j:
                return [] if used & 1 else [0]
            used |= 1
        return [s for s in self.symbols if not used >> s & 1]

    def _walk(self, pos: int, stop: int, emit) -> None:
        if pos == stop:
            emit()
            return
        i, j = self.cells[pos]
        for s in self._candidates(i, j):
            self._place(i, j, s)
            if not self.incremental_bol or self._partial_bol_ok():
                self._walk(pos + 1, stop, emit)
            self._unplace(i, j, s)

    def prefixes(self) -> List[Tuple[int, ...]]:
        """All valid fillings of row 1; the units of parallel work"""
        stop = min(self.n - 1, len(self.cells))
        found: List[Tuple[int, ...]] = []
        self._reset()
        self._walk(0, stop, lambda: found.append(tuple(int(self.table[i, j]) for i, j in self.cells[:stop])))
        return found

    def _accepts(self, L: Loop) -> bool:
        constraints = self.spec.constraints
        if "bol" in constraints and not check_bol(L):
            return False
        if "aip" in constraints:
            if not bool(np.all(L.table[L.inverses, np.arange(L.n)] == 0)) or not check_aip(L):
                return False
        if "ar" in constraints and not check_ar(L):
            return False
        return True

    def complete(self, prefix: Tuple[int, ...]) -> List[Tuple[int, ...]]:
        """Completions of a prefix passing every constraint, as flat tables or canonical forms"""
        self._reset()
        for (i, j), s in zip(self.cells, prefix):
            self._place(i, j, s)
        n = self.n
        keys = set()

        def emit():
            L = Loop(self.table[:n, :n].copy())
            if self._accepts(L):
                if self.relabelings is not None:
                    keys.add(canonical_form(L.table, self.relabelings))
                else:
                    keys.add(tuple(int(v) for v in L.table.ravel()))

        self._walk(len(prefix), len(self.cells), emit)
        return sorted(keys)

def _complete_prefix(spec: EnumSpec, prefix: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    return _LatinFiller(spec).complete(prefix)

def _isomorphism_representatives(loops: List[Loop]) -> List[Loop]:
    reps: List[Loop] = []
    for L in loops:
        if not any(loops_isomorphic(R, L) is not None for R in reps):
            reps.append(L)
    return reps

def enumerate_loops(spec: EnumSpec, workers: Optional[int] = None) -> List[Loop]:
    """
    Every loop of the given order with identity 0 satisfying the constraints, or one per
    isomorphism class when canonicalize is set. The result is sorted by flattened table and
    does not depend on the worker count or the branching order
    """
    _check_spec(spec)
    workers = DEFAULT_WORKERS if workers is None else workers
    prefixes = _LatinFiller(spec).prefixes()
    logger.debug("enumerating order %d over %d prefixes with %d workers", spec.order, len(prefixes), workers)
    if workers > 1 and len(prefixes) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(functools.partial(_complete_prefix, spec), prefixes))
    else:
        parts = [_complete_prefix(spec, p) for p in prefixes]
    n = spec.order
    keys = sorted({key for part in parts for key in part})
    loops = [Loop(np.array(key, dtype=np.int64).reshape(n, n)) for key in keys]
    if spec.canonicalize and n >= CANONICAL_FORM_LIMIT:
        loops = _isomorphism_representatives(loops)
    return loops

def enumeration_frame(loops: List[Loop]) -> pd.DataFrame:
    """One row per loop with its basic identities"""
    rows = []
    for L in loops:
        bol = check_bol(L).holds
        rows.append({"order": L.n, "group": is_group(L).holds, "bol": bol,
                     "exponent": exponent(L) if bol else None})
    return pd.DataFrame(rows, columns=["order", "group", "bol", "exponent"])


# ~~~ Folder searches ~~~

def _involution_classes(G: PermGroup) -> List[Tuple[Perm, ...]]:
    return [cls for cls in conjugacy_classes(G) if cls[0].order == 2]

def search_hypothesis_a(G: PermGroup) -> Iterator[Folder]:
    """
    Folders (G, H, K) with K = 1 ∪ (a union of classes of involutions), H running over subgroup
    class representatives. Such folders are Bruck folders of exponent 2, which is re-checked
    on every hit
    """
    if G.order > HYPOTHESIS_A_LIMIT:
        raise SizeLimit(f"Hypothesis (A) search is limited to order {HYPOTHESIS_A_LIMIT}", {"order": G.order})
    classes = _involution_classes(G)
    for H in subgroup_class_representatives(G):
        need = G.order // H.order - 1
        for r in range(len(classes) + 1):
            for chosen in itertools.combinations(classes, r):
                if sum(len(c) for c in chosen) != need:
                    continue
                K = (G.identity,) + tuple(sorted(x for c in chosen for x in c))
                F = Folder(G, H, K)
                if not check_folder_axiom(F):
                    continue
                fclass = classify_folder(F)
                if not fclass["bruck"]:
                    raise NotTwisted("Hypothesis (A) folder is not a Bruck folder", {"H_order": H.order, **fclass.to_dict()["bruck"]})
                logger.debug("hypothesis (A) hit: |H| = %d, %d classes", H.order, r)
                yield F

def _consistent(chosen: Dict[int, Perm], coset_of: Dict[Perm, int], H: PermGroup) -> bool:
    """Chosen elements are closed under xyx and H-conjugation as far as their cosets are chosen"""
    picked = list(chosen.values())
    for x in picked:
        for y in picked:
            z = x * y * x
            c = coset_of[z]
            if c in chosen and chosen[c] != z:
                return False
        for h in H.generators:
            z = x.conjugate(h)
            c = coset_of[z]
            if c in chosen and chosen[c] != z:
                return False
    return True

def search_folders(G: PermGroup, H: PermGroup, bx2p: bool = False) -> Iterator[Folder]:
    """
    Loop folders (G, H, K) by choosing one element per right coset of H. With bx2p set, only
    BX2P folders are emitted and partial choices are pruned by the twisted and H-action closures
    """
    index = G.order // H.order
    if index > FOLDER_SEARCH_INDEX_LIMIT:
        raise SizeLimit(f"Folder search is limited to index {FOLDER_SEARCH_INDEX_LIMIT}", {"index": index})
    right = cosets(G, H)
    members: List[List[Perm]] = [[] for _ in range(index)]
    for g in G.elements:
        members[right.index_of[g]].append(g)
    forbidden = {h.conjugate(g) for h in H.elements for g in right.representatives} - {G.identity}
    chosen: Dict[int, Perm] = {0: G.identity}

    def walk(pos: int) -> Iterator[Folder]:
        if pos == index:
            F = Folder(G, H, tuple(chosen[i] for i in range(index)))
            if not verify_folder(F)["folder"]:
                raise NotTransversal("Search produced an invalid folder", {"K": [str(k) for k in F.K]})
            if bx2p and not classify_folder(F)["bx2p"]:
                return
            yield F
            return
        for k in members[pos]:
            if any(k * c.inverse() in forbidden for c in chosen.values()):
                continue
            if bx2p and not is_power_of(k.order, 2):
                continue
            chosen[pos] = k
            if not bx2p or _consistent(chosen, right.index_of, H):
                yield from walk(pos + 1)
            del chosen[pos]

    yield from walk(1)
