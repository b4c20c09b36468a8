"""
Loop folders (G, H, K) and the correspondence with loops.

K is kept as an ordered tuple whose i-th entry is the element carrying loop label i, so
kappa(K[i]) = i and K[0] is always the identity. Elements of K and elements of the loop are
separate things: a Perm is never used as a loop label or vice versa.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError, NotInH, NotTransversal
from .loopcore import Loop, Verdict, loops_isomorphic, validate_loop
from .permcore import Perm, PermGroup, Quotient, core, cosets, fingerprint, generated_subgroup, quotient

logger = logging.getLogger(__name__)

FLAG_ORDER = ("folder", "faithful", "envelope", "bol", "ar", "bruck", "bx2p")


@dataclass
class Folder:
    """
    A triple (G, H, K). labels[i] is the loop label the folder assigns to K[i]; it defaults
    to i and differs only for subfolders, which remember their parent's labels
    """
    G: PermGroup
    H: PermGroup
    K: Tuple[Perm, ...]
    labels: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        self.K = tuple(self.K)
        if self.labels is None:
            self.labels = tuple(range(len(self.K)))

    @property
    def kappa(self) -> Dict[Perm, int]:
        return {k: i for i, k in enumerate(self.K)}

    @property
    def K_set(self) -> frozenset:
        return frozenset(self.K)

    def __len__(self) -> int:
        return len(self.K)

    def __repr__(self) -> str:
        return f"Folder(|G|={self.G.order}, |H|={self.H.order}, |K|={len(self.K)})"


@dataclass
class FolderClass:
    """Classification flags, each a Verdict carrying its witness on failure"""
    flags: Dict[str, Verdict] = field(default_factory=dict)

    def __getitem__(self, name: str) -> bool:
        return self.flags[name].holds

    def __contains__(self, name: str) -> bool:
        return name in self.flags

    def witness(self, name: str) -> Optional[Dict]:
        return self.flags[name].witness

    def set(self, verdict: Verdict) -> None:
        self.flags[verdict.name] = verdict

    def to_dict(self) -> Dict[str, Dict]:
        return {name: {"holds": self.flags[name].holds, "witness": self.flags[name].witness}
                for name in FLAG_ORDER if name in self.flags}


def make_folder(G: PermGroup, H: PermGroup, K: Sequence[Perm], labels: Optional[Sequence[int]] = None) -> Folder:
    """Checks the structural preconditions shared by every folder (1 first in K, K ⊆ G, H <= G)"""
    K = tuple(K)
    if not K or not K[0].is_identity():
        raise InputError("The first element of K must be the identity")
    if len(set(K)) != len(K):
        raise InputError("K lists an element twice")
    outside = [str(k) for k in K if k not in G]
    if outside:
        raise InputError("K is not contained in G", {"element": outside[0]})
    if not H.issubgroup(G):
        raise InputError("H is not a subgroup of G")
    return Folder(G, H, K, tuple(labels) if labels is not None else None)

def group_folder(G: PermGroup) -> Folder:
    """(G, 1, G): the folder of G viewed as a loop"""
    return Folder(G, PermGroup.trivial(G.degree), G.elements)

def right_coset_ids(G: PermGroup, H: PermGroup) -> Dict[Perm, int]:
    """Index of the right coset Hg containing each g in G"""
    return cosets(G, H, side="right").index_of


# ~~~ Envelope and loop ~~~

def baer_envelope(L: Loop) -> Folder:
    """(RMult(L), Stab(0), {ρx}) with κ(ρx) = x, acting on the loop elements directly"""
    rho = [Perm(tuple(int(v) for v in L.table[:, x])) for x in range(L.n)]
    G = PermGroup(L.n, rho)
    G = PermGroup.from_elements(L.n, G.materialize())
    H = PermGroup.from_elements(L.n, (g for g in G.elements if g.images[0] == 0))
    logger.debug("envelope of order-%d loop: |G| = %d, |H| = %d", L.n, G.order, H.order)
    return Folder(G, H, tuple(rho))

def folder_to_loop(F: Folder) -> Loop:
    """κ(k1)∘κ(k2) = κ(k12) with {k12} = K ∩ Hk1k2"""
    coset_of = right_coset_ids(F.G, F.H)
    members: Dict[int, List[int]] = defaultdict(list)
    for i, k in enumerate(F.K):
        members[coset_of[k]].append(i)
    n = len(F.K)
    table = np.zeros((n, n), dtype=np.int64)
    for i, k1 in enumerate(F.K):
        for j, k2 in enumerate(F.K):
            hits = members.get(coset_of[k1 * k2], [])
            if len(hits) != 1:
                raise NotTransversal("K ∩ Hk1k2 is not a single element", {"k1": i, "k2": j, "hits": hits})
            table[i, j] = hits[0]
    return validate_loop(table)


# ~~~ Axioms ~~~

def _differences(K: Sequence[Perm]) -> set:
    """KK^-1 without the identity"""
    inverses = [k.inverse() for k in K]
    return {a * b for a in K for b in inverses if not (a * b).is_identity()}

def check_folder_axiom(F: Folder) -> Verdict:
    """|K| = |G:H| and H^g ∩ KK^-1 = 1 for all g"""
    index = F.G.order // F.H.order
    if len(F.K) != index or not F.K or not F.K[0].is_identity():
        return Verdict("folder", False, {"K_size": len(F.K), "index": index})
    differences = _differences(F.K)
    for g in cosets(F.G, F.H).representatives:
        g_inv = g.inverse()
        for d in sorted(differences):
            if g * d * g_inv in F.H:
                return Verdict("folder", False, {"conjugator": str(g), "element": str(d)})
    return Verdict("folder", True)

def is_transversal_to_conjugates(F: Folder) -> Verdict:
    """K meets every right coset of every conjugate H^g exactly once"""
    index = F.G.order // F.H.order
    for g in cosets(F.G, F.H).representatives:
        Hg = PermGroup(F.G.degree, [h.conjugate(g) for h in F.H.generators])
        coset_of = right_coset_ids(F.G, Hg)
        hit = [coset_of[k] for k in F.K]
        if len(set(hit)) != len(hit) or len(hit) != index:
            return Verdict("transversal", False, {"conjugator": str(g)})
    return Verdict("transversal", True)

def check_faithful(F: Folder) -> Verdict:
    C = core(F.G, F.H)
    if C.is_trivial():
        return Verdict("faithful", True)
    return Verdict("faithful", False, {"core_element": str(C.elements[1]), "core_order": C.order})

def check_envelope(F: Folder) -> Verdict:
    generated = generated_subgroup(F.G.degree, F.K)
    if generated.order == F.G.order:
        return Verdict("envelope", True)
    return Verdict("envelope", False, {"generated_order": generated.order, "group_order": F.G.order})

def verify_folder(F: Folder) -> FolderClass:
    result = FolderClass()
    result.set(check_folder_axiom(F))
    result.set(check_faithful(F))
    result.set(check_envelope(F))
    return result


# ~~~ h_{x,y} ~~~

def h_xy(F: Folder, x: int, y: int, L: Optional[Loop] = None) -> Perm:
    """k_x k_y k_{x∘y}^-1, which lies in H for any folder"""
    L = folder_to_loop(F) if L is None else L
    h = F.K[x] * F.K[y] * F.K[L(x, y)].inverse()
    if h not in F.H:
        raise NotInH("h_{x,y} is not in H", {"x": x, "y": y, "h": str(h)})
    return h

def verify_h_generation(F: Folder) -> Verdict:
    L = folder_to_loop(F)
    hs = {h_xy(F, x, y, L) for x in range(L.n) for y in range(L.n)}
    generated = generated_subgroup(F.G.degree, hs)
    if generated.order == F.H.order:
        return Verdict("h_generation", True)
    return Verdict("h_generation", False, {"generated_order": generated.order, "H_order": F.H.order})


# ~~~ Subfolders and quotients ~~~

def detect_subfolder(F: Folder, U: PermGroup) -> Optional[Folder]:
    """(U, U∩H, U∩K) when U = (U∩H)(U∩K), else None"""
    if not U.issubgroup(F.G):
        raise InputError("U is not a subgroup of G")
    UH = PermGroup.from_elements(F.G.degree, (h for h in F.H.elements if h in U))
    positions = [i for i, k in enumerate(F.K) if k in U]
    UK = [F.K[i] for i in positions]
    if UH.order * len(UK) != U.order:
        return None
    if {h * k for h in UH.elements for k in UK} != U.element_set:
        return None
    return Folder(U, UH, tuple(UK), tuple(F.labels[i] for i in positions))

@dataclass
class QuotientFolder:
    folder: Folder
    quotient: Quotient
    certificate: np.ndarray

def quotient_folder(F: Folder, N: PermGroup) -> QuotientFolder:
    """(G/N, H/N, K̄) for N normal in G and N <= H; the loop is unchanged"""
    if not N.issubgroup(F.H):
        outside = next(n for n in N.elements if n not in F.H)
        raise NotInH("N is not contained in H", {"element": str(outside)})
    Q = quotient(F.G, N)
    result = Folder(Q.group, Q.image(F.H), tuple(Q.project(k) for k in F.K), F.labels)
    certificate = loops_isomorphic(folder_to_loop(F), folder_to_loop(result))
    if certificate is None:
        raise NotTransversal("Quotient folder describes a different loop")
    return QuotientFolder(result, Q, certificate)

def faithful_reduction(F: Folder) -> QuotientFolder:
    """Quotient by core_G(H), the faithful folder to the same loop"""
    return quotient_folder(F, core(F.G, F.H))

def folder_fingerprint(F: Folder) -> Tuple:
    """Isomorphism invariants of a folder: group fingerprint, |H| and the loop's row profile"""
    L = folder_to_loop(F)
    rows = sorted(tuple(sorted(len(c) for c in Perm(tuple(int(v) for v in L.table[:, x])).cycles())) for x in range(L.n))
    return fingerprint(F.G), F.H.order, tuple(rows)
