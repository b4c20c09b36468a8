"""
Desk-scale permutation groups. Groups are materialized in full (up to a cap) and every
algorithm works on explicit element sets; element order is lexicographic on image tuples
so every result, witness and report is reproducible.

Products act on the right: ``a * b`` first applies ``a``, then ``b``. Conjugation is
``x^g = g^-1 x g`` and commutators are ``[a, b] = a^-1 b^-1 a b``.
"""

from __future__ import annotations

import logging
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import primefactors

from .errors import CapExceeded, NotNormal

logger = logging.getLogger(__name__)

DEFAULT_CAP = int(os.environ.get("LOOPFORGE_CAP", 200_000))
ISOMORPHISM_SEARCH_LIMIT = 2000


@dataclass(frozen=True, order=True)
class Perm:
    """A bijection of {0, ..., degree-1}, stored as its image tuple"""
    images: Tuple[int, ...]

    @classmethod
    def from_images(cls, images: Sequence[int]) -> Perm:
        """Validating constructor for external input"""
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"Image list {list(images)} is not a permutation")
        return cls(images)

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Perm:
        images = list(range(degree))
        for cycle in cycles:
            for i, point in enumerate(cycle):
                images[point] = cycle[(i + 1) % len(cycle)]
        return cls.from_images(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: Perm) -> Perm:
        return Perm(tuple(map(other.images.__getitem__, self.images)))

    def __pow__(self, exponent: int) -> Perm:
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = Perm.identity(self.degree)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def conjugate(self, g: Perm) -> Perm:
        """Returns self^g = g^-1 self g"""
        return g.inverse() * self * g

    def commutator(self, other: Perm) -> Perm:
        return self.inverse() * other.inverse() * self * other

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point"""
        seen = set()
        result = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            point = self.images[start]
            while point != start:
                cycle.append(point)
                seen.add(point)
                point = self.images[point]
            result.append(tuple(cycle))
        return result

    @property
    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def _closure(degree: int, generators: Sequence[Perm], cap: int, start: Iterable[Perm] = ()) -> set:
    """Breadth-first closure of start ∪ {1} under right multiplication by the generators"""
    seen = {Perm.identity(degree), *start}
    frontier = list(seen)
    while frontier:
        new = []
        for x in frontier:
            for g in generators:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        if len(seen) > cap:
            raise CapExceeded(f"Group closure exceeded the cap of {cap} elements",
                              {"cap": cap, "reached": len(seen)})
        frontier = new
    return seen


class PermGroup:
    """
    A finite permutation group given by generators. The element set is materialized on first
    use and never changes afterwards; groups compare equal when their element sets agree
    """

    def __init__(self, degree: int, generators: Iterable[Perm] = (), elements: Optional[Iterable[Perm]] = None):
        generators = tuple(generators)
        for g in generators:
            if g.degree != degree:
                raise ValueError(f"Generator {g} has degree {g.degree}, expected {degree}")
        self.degree = degree
        self.generators = tuple(g for g in generators if not g.is_identity())
        self._elements: Optional[Tuple[Perm, ...]] = tuple(sorted(elements)) if elements is not None else None
        self._element_set: Optional[FrozenSet[Perm]] = None

    @classmethod
    def from_elements(cls, degree: int, elements: Iterable[Perm]) -> PermGroup:
        """Builds a group from a known closed element set, choosing a small generating set"""
        elements = set(elements)
        return cls(degree, _generators_for(degree, elements), elements)

    @classmethod
    def trivial(cls, degree: int) -> PermGroup:
        return cls(degree, (), [Perm.identity(degree)])

    def materialize(self, cap: Optional[int] = None) -> Tuple[Perm, ...]:
        if self._elements is None:
            cap = DEFAULT_CAP if cap is None else cap
            self._elements = tuple(sorted(_closure(self.degree, self.generators, cap)))
            logger.debug("materialized group of degree %d: %d elements", self.degree, len(self._elements))
        return self._elements

    @property
    def elements(self) -> Tuple[Perm, ...]:
        return self.materialize()

    @property
    def element_set(self) -> FrozenSet[Perm]:
        if self._element_set is None:
            self._element_set = frozenset(self.elements)
        return self._element_set

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def __contains__(self, g: Perm) -> bool:
        return g in self.element_set

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.elements)

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other) -> bool:
        return isinstance(other, PermGroup) and self.degree == other.degree and self.element_set == other.element_set

    def __hash__(self) -> int:
        return hash((self.degree, self.element_set))

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order}, generators=[{', '.join(map(str, self.generators))}])"

    def is_trivial(self) -> bool:
        return self.order == 1

    def issubgroup(self, other: PermGroup) -> bool:
        return self.element_set <= other.element_set

    def is_p_group(self, p: int) -> bool:
        return is_power_of(self.order, p)

    def subgroup(self, generators: Iterable[Perm]) -> PermGroup:
        return PermGroup(self.degree, generators)


def materialize(group: PermGroup, cap: int = DEFAULT_CAP) -> Tuple[Perm, ...]:
    """Closure of the generators under composition, lexicographically ordered"""
    return group.materialize(cap)


# ~~~ Small helpers ~~~

def is_power_of(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1

def p_part(n: int, p: int) -> int:
    part = 1
    while n % p == 0:
        n //= p
        part *= p
    return part

def _generators_for(degree: int, elements: set) -> List[Perm]:
    """Greedy generating set, preferring elements of large order"""
    ordered = sorted(elements, key=lambda g: (-g.order, g))
    gens: List[Perm] = []
    span = {Perm.identity(degree)}
    for g in ordered:
        if len(span) == len(elements):
            break
        if g not in span:
            gens.append(g)
            span = _closure(degree, gens, cap=len(elements))
    return gens

def generated_subgroup(degree: int, elements: Iterable[Perm]) -> PermGroup:
    """The subgroup generated by an arbitrary set, with a reduced generating set"""
    gens: List[Perm] = []
    span = {Perm.identity(degree)}
    for g in sorted(set(elements)):
        if g not in span:
            gens.append(g)
            span = _closure(degree, gens, DEFAULT_CAP)
    return PermGroup(degree, gens, span)

def is_normal(G: PermGroup, N: PermGroup) -> bool:
    return find_normality_witness(G, N) is None

def find_normality_witness(G: PermGroup, N: PermGroup) -> Optional[Tuple[Perm, Perm]]:
    """First (n, g) with n^g outside N, or None when N is normal in G"""
    for n in N.generators:
        for g in G.generators:
            if n.conjugate(g) not in N:
                return n, g
    return None


# ~~~ Cosets ~~~

@dataclass
class Cosets:
    """Coset partition of a group by a subgroup. Representatives are lexicographic minima"""
    subgroup: PermGroup
    side: str
    representatives: List[Perm]
    index_of: Dict[Perm, int]

    def __len__(self) -> int:
        return len(self.representatives)

def cosets(G: PermGroup, H: PermGroup, side: str = "right") -> Cosets:
    """Right cosets Hg (side='right') or left cosets gH (side='left')"""
    if side not in ("right", "left"):
        raise ValueError(f"Unknown coset side '{side}'")
    index_of: Dict[Perm, int] = {}
    reps: List[Perm] = []
    for g in G.elements:
        if g in index_of:
            continue
        idx = len(reps)
        reps.append(g)
        for h in H.elements:
            index_of[h * g if side == "right" else g * h] = idx
    return Cosets(H, side, reps, index_of)


# ~~~ Conjugacy ~~~

def conjugacy_classes(G: PermGroup) -> List[Tuple[Perm, ...]]:
    """Classes ordered by their smallest element, each class sorted"""
    assigned = set()
    classes = []
    for x in G.elements:
        if x in assigned:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            new = []
            for y in frontier:
                for g in G.generators:
                    z = y.conjugate(g)
                    if z not in orbit:
                        orbit.add(z)
                        new.append(z)
            frontier = new
        assigned |= orbit
        classes.append(tuple(sorted(orbit)))
    return classes

def class_sizes(G: PermGroup) -> Dict[Perm, int]:
    return {x: len(c) for c in conjugacy_classes(G) for x in c}

def _as_perms(S: Union[Perm, PermGroup, Iterable[Perm]]) -> List[Perm]:
    if isinstance(S, Perm):
        return [S]
    if isinstance(S, PermGroup):
        return list(S.generators)
    return list(S)

def centralizer(G: PermGroup, S: Union[Perm, PermGroup, Iterable[Perm]]) -> PermGroup:
    """C_G(S) for an element, a subgroup or an element set"""
    targets = _as_perms(S)
    return PermGroup.from_elements(G.degree, (g for g in G.elements if all(g * s == s * g for s in targets)))

def normalizer(G: PermGroup, U: PermGroup) -> PermGroup:
    return PermGroup.from_elements(G.degree, (g for g in G.elements if all(u.conjugate(g) in U for u in U.generators)))

def normal_closure(G: PermGroup, S: Iterable[Perm]) -> PermGroup:
    gens = [s for s in S if not s.is_identity()]
    N = PermGroup(G.degree, gens)
    changed = True
    while changed:
        changed = False
        for n in N.generators:
            for g in G.generators:
                c = n.conjugate(g)
                if c not in N:
                    gens.append(c)
                    N = PermGroup(G.degree, gens)
                    changed = True
                    break
            if changed:
                break
    return N

def core(G: PermGroup, H: PermGroup) -> PermGroup:
    """core_G(H), the intersection of all conjugates of H: the G-classes lying inside H"""
    current = set(H.elements)
    changed = True
    while changed:
        changed = False
        for h in sorted(current):
            if any(h.conjugate(g) not in current for g in G.generators):
                current.discard(h)
                changed = True
    return PermGroup.from_elements(G.degree, current)


# ~~~ Series and characteristic subgroups ~~~

def derived_subgroup(G: PermGroup) -> PermGroup:
    commutators = [a.commutator(b) for a in G.generators for b in G.generators]
    return normal_closure(G, commutators)

def derived_series(G: PermGroup) -> List[PermGroup]:
    """G = G^(0) >= G^(1) >= ... down to the perfect term G^(∞)"""
    series = [G]
    while True:
        nxt = derived_subgroup(series[-1])
        if nxt.order == series[-1].order:
            return series
        series.append(nxt)

def is_soluble(G: PermGroup) -> bool:
    return derived_series(G)[-1].is_trivial()

def sylow(G: PermGroup, p: int) -> PermGroup:
    """One Sylow p-subgroup, grown from 1 by normalizer extension"""
    target = p_part(G.order, p)
    P = PermGroup.trivial(G.degree)
    while P.order < target:
        N = normalizer(G, P)
        for g in N.elements:
            if g not in P and g ** p in P:
                P = PermGroup(G.degree, P.generators + (g,))
                break
        else:
            raise RuntimeError(f"No p-element extends a {p}-subgroup of order {P.order} in its normalizer")
    return P

def sylow2(G: PermGroup) -> PermGroup:
    return sylow(G, 2)

def o_p_subgroup(G: PermGroup, p: int) -> PermGroup:
    """O_p(G), the core of a Sylow p-subgroup"""
    return core(G, sylow(G, p))

def o2_subgroup(G: PermGroup) -> PermGroup:
    return o_p_subgroup(G, 2)

def fitting_subgroup(G: PermGroup) -> PermGroup:
    elements = [g for p in primefactors(G.order) for g in o_p_subgroup(G, p).generators]
    return generated_subgroup(G.degree, elements)

def o2prime_subgroup(G: PermGroup) -> PermGroup:
    """O_{2'}(G), the largest normal subgroup of odd order"""
    collected: List[Perm] = []
    for cls in conjugacy_classes(G):
        rep = cls[0]
        if rep.order % 2 == 0 or rep.is_identity():
            continue
        closure = normal_closure(G, [rep])
        if closure.order % 2 == 1:
            collected.extend(closure.generators)
    return generated_subgroup(G.degree, collected)

def o_upper2(G: PermGroup) -> PermGroup:
    """O^2(G), generated by the elements of odd order"""
    return generated_subgroup(G.degree, (g for g in G.elements if g.order % 2 == 1))

def commutators_inside(A: PermGroup, B: PermGroup, target: PermGroup) -> bool:
    """True iff [A, B] <= target"""
    return all(a.commutator(b) in target for a in A.elements for b in B.elements)

def product_order(A: PermGroup, B: PermGroup) -> int:
    """|AB| = |A||B|/|A ∩ B|"""
    return A.order * B.order // len(A.element_set & B.element_set)


# ~~~ Quotients ~~~

@dataclass
class Quotient:
    """G/N acting on right cosets of N, with the element-level projection"""
    group: PermGroup
    kernel: PermGroup
    projection: Dict[Perm, Perm]
    cosets: Cosets = field(repr=False)

    def project(self, g: Perm) -> Perm:
        return self.projection[g]

    def image(self, S: Union[PermGroup, Iterable[Perm]]) -> PermGroup:
        elements = S.elements if isinstance(S, PermGroup) else S
        return PermGroup.from_elements(self.group.degree, {self.projection[g] for g in elements})

    def preimage(self, S: Union[PermGroup, Iterable[Perm]]) -> PermGroup:
        targets = S.element_set if isinstance(S, PermGroup) else set(S)
        return PermGroup.from_elements(self.kernel.degree, (g for g, x in self.projection.items() if x in targets))

def quotient(G: PermGroup, N: PermGroup) -> Quotient:
    witness = find_normality_witness(G, N)
    if witness is not None or not N.issubgroup(G):
        n, g = witness if witness else (None, None)
        raise NotNormal("Subgroup is not normal in G",
                        {"element": str(n), "conjugator": str(g)} if witness else {"reason": "not a subgroup"})
    right = cosets(G, N, side="right")
    reps = right.representatives

    def act(x: Perm) -> Perm:
        return Perm(tuple(right.index_of[r * x] for r in reps))

    projection = {g: act(g) for g in G.elements}
    group = PermGroup(len(reps), [act(g) for g in G.generators], set(projection.values()))
    return Quotient(group, N, projection, right)


# ~~~ Subgroup lattices ~~~

def _join(A: PermGroup, B: PermGroup) -> PermGroup:
    return PermGroup(A.degree, A.generators + B.generators)

def _cyclic_subgroups(G: PermGroup) -> List[PermGroup]:
    found: Dict[FrozenSet[Perm], PermGroup] = {}
    for g in G.elements:
        C = PermGroup(G.degree, [g])
        found.setdefault(C.element_set, C)
    return list(found.values())

def _lattice_key(S: PermGroup) -> Tuple:
    return (S.order, S.elements)

def subgroups(G: PermGroup, limit: int = 20_000) -> List[PermGroup]:
    """All subgroups, as joins of cyclic subgroups, ordered by (order, elements)"""
    cyclic = _cyclic_subgroups(G)
    found: Dict[FrozenSet[Perm], PermGroup] = {C.element_set: C for C in cyclic}
    queue = list(found.values())
    while queue:
        S = queue.pop()
        for C in cyclic:
            if C.element_set <= S.element_set:
                continue
            J = _join(S, C)
            if J.element_set not in found:
                found[J.element_set] = J
                queue.append(J)
                if len(found) > limit:
                    raise CapExceeded(f"Subgroup lattice exceeded {limit} members", {"limit": limit})
    return sorted(found.values(), key=_lattice_key)

def overgroups(G: PermGroup, H: PermGroup) -> List[PermGroup]:
    """All subgroups U with H <= U <= G"""
    found: Dict[FrozenSet[Perm], PermGroup] = {H.element_set: H}
    queue = [H]
    while queue:
        U = queue.pop()
        covered = set(U.element_set)
        for g in G.elements:
            if g in covered:
                continue
            covered |= {u * g * v for u in U.elements for v in U.elements}
            J = PermGroup(G.degree, U.generators + (g,))
            if J.element_set not in found:
                found[J.element_set] = J
                queue.append(J)
    return sorted(found.values(), key=_lattice_key)

def normal_subgroups(G: PermGroup) -> List[PermGroup]:
    """All normal subgroups, as joins of normal closures of conjugacy classes"""
    closures: Dict[FrozenSet[Perm], PermGroup] = {}
    for cls in conjugacy_classes(G):
        N = normal_closure(G, [cls[0]])
        closures.setdefault(N.element_set, N)
    found = dict(closures)
    queue = list(found.values())
    while queue:
        A = queue.pop()
        for B in list(closures.values()):
            if B.element_set <= A.element_set:
                continue
            J = _join(A, B)
            if J.element_set not in found:
                found[J.element_set] = J
                queue.append(J)
    return sorted(found.values(), key=_lattice_key)

def conjugate_subgroup(U: PermGroup, g: Perm) -> PermGroup:
    return PermGroup(U.degree, [u.conjugate(g) for u in U.generators], [u.conjugate(g) for u in U.elements])

def subgroup_class_representatives(G: PermGroup, candidates: Optional[Iterable[PermGroup]] = None) -> List[PermGroup]:
    """One subgroup per G-conjugacy class (the (order, elements)-minimal member)"""
    candidates = subgroups(G) if candidates is None else sorted(candidates, key=_lattice_key)
    seen = set()
    reps = []
    for S in candidates:
        if S.element_set in seen:
            continue
        reps.append(S)
        orbit = {S.element_set}
        frontier = [S]
        while frontier:
            new = []
            for T in frontier:
                for g in G.generators:
                    C = conjugate_subgroup(T, g)
                    if C.element_set not in orbit:
                        orbit.add(C.element_set)
                        new.append(C)
            frontier = new
        seen |= orbit
    return reps


# ~~~ Isomorphism ~~~

def fingerprint(G: PermGroup) -> Tuple:
    """(order, class sizes, element-order profile, derived-series orders)"""
    orders = Counter(g.order for g in G.elements)
    return (
        G.order,
        tuple(sorted(len(c) for c in conjugacy_classes(G))),
        tuple(sorted(orders.items())),
        tuple(S.order for S in derived_series(G)),
    )

def extend_homomorphism(degree: int, gens: Sequence[Perm], images: Sequence[Perm], target_degree: int) -> Optional[Dict[Perm, Perm]]:
    """Extends gens -> images along words; None if ill-defined or not injective"""
    phi = {Perm.identity(degree): Perm.identity(target_degree)}
    frontier = list(phi)
    while frontier:
        new = []
        for x in frontier:
            for g, y in zip(gens, images):
                xg = x * g
                image = phi[x] * y
                known = phi.get(xg)
                if known is None:
                    phi[xg] = image
                    new.append(xg)
                elif known != image:
                    return None
        frontier = new
    if len(set(phi.values())) != len(phi):
        return None
    return phi

def find_isomorphism(G1: PermGroup, G2: PermGroup) -> Optional[Dict[Perm, Perm]]:
    """Explicit isomorphism G1 -> G2 by generator-image search, or None"""
    if fingerprint(G1) != fingerprint(G2):
        return None
    gens = _generators_for(G1.degree, set(G1.elements))
    sizes1, sizes2 = class_sizes(G1), class_sizes(G2)
    candidates = [[y for y in G2.elements if y.order == g.order and sizes2[y] == sizes1[g]] for g in gens]

    def search(images: List[Perm]) -> Optional[Dict[Perm, Perm]]:
        i = len(images)
        if i == len(gens):
            return extend_homomorphism(G1.degree, gens, images, G2.degree)
        for y in candidates[i]:
            if any((gens[j] * gens[i]).order != (images[j] * y).order for j in range(i)):
                continue
            trial = images + [y]
            if extend_homomorphism(G1.degree, gens[:i + 1], trial, G2.degree) is None:
                continue
            found = search(trial)
            if found is not None:
                return found
        return None

    return search([])

def fingerprint_isomorphic(G1: PermGroup, G2: PermGroup) -> str:
    """'yes' / 'no' when decided, 'unknown' when fingerprints match but the search is skipped"""
    if fingerprint(G1) != fingerprint(G2):
        return "no"
    if G1.order > ISOMORPHISM_SEARCH_LIMIT:
        return "unknown"
    return "yes" if find_isomorphism(G1, G2) is not None else "no"


# ~~~ Named groups ~~~

def symmetric_group(n: int) -> PermGroup:
    if n < 2:
        return PermGroup.trivial(max(n, 1))
    return PermGroup(n, [Perm.from_cycles(n, (0, 1)), Perm.from_cycles(n, tuple(range(n)))])

def cyclic_group(n: int) -> PermGroup:
    return PermGroup(n, [Perm.from_cycles(n, tuple(range(n)))] if n > 1 else [])

def dihedral_group(n: int) -> PermGroup:
    """Symmetries of the n-gon on points 0..n-1, order 2n"""
    rotation = Perm(tuple((i + 1) % n for i in range(n)))
    reflection = Perm(tuple((-i) % n for i in range(n)))
    return PermGroup(n, [rotation, reflection])

def direct_product(A: PermGroup, B: PermGroup) -> PermGroup:
    """A x B acting on the disjoint union of the two point sets"""
    degree = A.degree + B.degree
    left = [Perm(a.images + tuple(A.degree + i for i in range(B.degree))) for a in A.generators]
    right = [Perm(tuple(range(A.degree)) + tuple(A.degree + i for i in b.images)) for b in B.generators]
    return PermGroup(degree, left + right)

def regular_representation(G: PermGroup) -> PermGroup:
    """Right regular representation of G on its own (sorted) elements"""
    index = {g: i for i, g in enumerate(G.elements)}
    gens = [Perm(tuple(index[x * g] for x in G.elements)) for g in G.generators]
    return PermGroup(G.order, gens)
