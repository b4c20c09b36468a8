"""
Twisted subgroups and the involutory automorphism tau.

A twisted subgroup K of G contains 1 and xyx for all x, y in K. When G = <K> the relation
generated by (kx, k^-1 y) yields the normal subgroups Xi (g ≡ 1) and Psi (gK = K), and when
Xi = 1 an automorphism tau inverting K. The extended group G+ = G<tau> is kept as pairs
(g, e) with (g, e)(h, d) = (g tau^e(h), e xor d).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .baer import Folder, detect_subfolder, folder_to_loop
from .errors import NotBruckFolder, NotGenerated, NotTwisted
from .loopcore import Loop, Verdict, cayley_table, is_group, is_normal_subloop, loops_isomorphic, restrict, Subloop
from .permcore import (Perm, PermGroup, extend_homomorphism, generated_subgroup, is_normal, quotient)

logger = logging.getLogger(__name__)

COSET_FAMILY_LIMIT = 5000

Pair = Tuple[Perm, int]


@dataclass
class TwistedVerdict:
    is_twisted: bool
    witness: Optional[Tuple[Perm, Perm]] = None

    def __bool__(self) -> bool:
        return self.is_twisted

    def to_dict(self) -> Optional[Dict[str, str]]:
        if self.witness is None:
            return None
        x, y = self.witness
        return {"x": str(x), "y": str(y)}


@dataclass
class Automorphism:
    """An automorphism of a permutation group, stored element by element"""
    group: PermGroup
    mapping: Dict[Perm, Perm]

    def __call__(self, g: Perm) -> Perm:
        return self.mapping[g]

    def is_identity(self) -> bool:
        return all(g == h for g, h in self.mapping.items())

    def squared_is_identity(self) -> bool:
        return all(self.mapping[h] == g for g, h in self.mapping.items())

    def agrees_on(self, elements: Iterable[Perm], other: "Automorphism") -> bool:
        return all(self.mapping[g] == other.mapping[g] for g in elements)


@dataclass
class XiPsi:
    xi: PermGroup
    psi: PermGroup
    relation: FrozenSet[Tuple[Perm, Perm]] = field(repr=False)
    claims: Dict[str, Verdict] = field(default_factory=dict)


# ~~~ Twisted subgroups ~~~

def is_twisted_subgroup(G: PermGroup, K: Iterable[Perm]) -> TwistedVerdict:
    """1 ∈ K and xyx ∈ K for all x, y ∈ K; also confirms <k> ⊆ K"""
    K_set = frozenset(K)
    identity = G.identity
    if identity not in K_set:
        return TwistedVerdict(False, (identity, identity))
    ordered = sorted(K_set)
    for x in ordered:
        for y in ordered:
            if x * y * x not in K_set:
                return TwistedVerdict(False, (x, y))
    for k in ordered:
        power = k
        while not power.is_identity():
            if power not in K_set:
                return TwistedVerdict(False, (k, power))
            power = power * k
    return TwistedVerdict(True)

def associate(G: PermGroup, K: Sequence[Perm], k: Perm) -> Tuple[Perm, ...]:
    """kK, again a twisted subgroup"""
    result = tuple(sorted(k * x for x in K))
    verdict = is_twisted_subgroup(G, result)
    if not verdict or not result[0].is_identity():
        raise NotTwisted("Associate kK is not a twisted subgroup", {"k": str(k), **(verdict.to_dict() or {})})
    return result


# ~~~ The relation ≡, Xi and Psi ~~~

def _require_generated(G: PermGroup, K: Iterable[Perm]) -> None:
    generated = generated_subgroup(G.degree, K)
    if generated.order != G.order:
        raise NotGenerated("<K> is a proper subgroup of G", {"generated_order": generated.order, "group_order": G.order})

def equivalence_relation(G: PermGroup, K: Sequence[Perm]) -> FrozenSet[Tuple[Perm, Perm]]:
    """R∞, the closure of {(1, 1)} under (x, y) -> (kx, k^-1 y)"""
    moves = [(k, k.inverse()) for k in sorted(set(K))]
    start = (G.identity, G.identity)
    relation = {start}
    frontier = [start]
    while frontier:
        new = []
        for x, y in frontier:
            for k, k_inv in moves:
                pair = (k * x, k_inv * y)
                if pair not in relation:
                    relation.add(pair)
                    new.append(pair)
        frontier = new
    logger.debug("relation closure has %d pairs", len(relation))
    return frozenset(relation)

def _twisted_claims(G: PermGroup, K_set: FrozenSet[Perm], relation, xi: PermGroup, psi: PermGroup) -> Dict[str, Verdict]:
    claims: Dict[str, Verdict] = {}

    mismatched = next(((g, h) for g, h in sorted(relation)
                       if {g * k for k in K_set} != {k * h for k in K_set}), None)
    claims["gK_equals_Kh"] = Verdict("gK_equals_Kh", mismatched is None,
                                     None if mismatched is None else {"g": str(mismatched[0]), "h": str(mismatched[1])})

    if G.order > COSET_FAMILY_LIMIT:
        claims["coset_families"] = Verdict("coset_families", True, {"skipped": True, "group_order": G.order})
    else:
        left = {frozenset(g * k for k in K_set) for g in G.elements}
        right = {frozenset(k * g for k in K_set) for g in G.elements}
        claims["coset_families"] = Verdict("coset_families", left == right)

    claims["xi_normal"] = Verdict("xi_normal", is_normal(G, xi))
    claims["psi_normal"] = Verdict("psi_normal", is_normal(G, psi) and xi.issubgroup(psi))
    inside = psi.element_set <= K_set
    absorbs = {p * k for p in psi.elements for k in K_set} == K_set == {k * p for p in psi.elements for k in K_set}
    claims["psi_in_K"] = Verdict("psi_in_K", inside and absorbs)
    section = quotient(psi, xi).group
    abelian = all(a * b == b * a for a in section.generators for b in section.generators)
    claims["psi_over_xi_abelian"] = Verdict("psi_over_xi_abelian", abelian)
    return claims

def xi_psi(G: PermGroup, K: Sequence[Perm]) -> XiPsi:
    """Xi_K(G) = {g ≡ 1} and Psi_K(G) = {g : gK = K}, with the decidable claims about them"""
    _require_generated(G, K)
    K_set = frozenset(K)
    relation = equivalence_relation(G, K)
    xi = PermGroup.from_elements(G.degree, (g for g, h in relation if h.is_identity()))
    psi = PermGroup.from_elements(G.degree, (g for g in G.elements if {g * k for k in K_set} == K_set))
    return XiPsi(xi, psi, relation, _twisted_claims(G, K_set, relation, xi, psi))

def is_multiplicative(relation: FrozenSet[Tuple[Perm, Perm]]) -> bool:
    """g1 ≡ h1 and g2 ≡ h2 imply g1 g2 ≡ h1 h2"""
    pairs = sorted(relation)
    return all((g1 * g2, h1 * h2) in relation for g1, h1 in pairs for g2, h2 in pairs)


# ~~~ tau ~~~

def _tau_invariants(G: PermGroup, tau: Automorphism, K: Sequence[Perm]) -> None:
    if not tau.squared_is_identity():
        raise NotTwisted("tau is not an involution")
    wrong = next((k for k in K if tau(k) != k.inverse()), None)
    if wrong is not None:
        raise NotTwisted("tau does not invert K", {"k": str(wrong)})
    if not lambda_invariant(G, tau, K):
        raise NotTwisted("tau K is not G-invariant")

def tau_from_extension(G: PermGroup, K: Sequence[Perm]) -> Optional[Automorphism]:
    """Extends k -> k^-1 along K-words; None when that is not a well-defined bijection"""
    gens = [k for k in sorted(set(K)) if not k.is_identity()]
    mapping = extend_homomorphism(G.degree, gens, [k.inverse() for k in gens], G.degree)
    if mapping is None or len(mapping) != G.order:
        return None
    return Automorphism(G, mapping)

def tau_from_relation(G: PermGroup, relation: FrozenSet[Tuple[Perm, Perm]]) -> Optional[Automorphism]:
    """g -> the unique h with g ≡ h; None if some g has several partners"""
    mapping: Dict[Perm, Perm] = {}
    for g, h in relation:
        if mapping.setdefault(g, h) != h:
            return None
    if len(mapping) != G.order:
        return None
    return Automorphism(G, mapping)

def tau_automorphism(G: PermGroup, K: Sequence[Perm]) -> Optional[Automorphism]:
    """The automorphism with g ≡ tau(g), present exactly when Xi_K(G) = 1"""
    data = xi_psi(G, K)
    if not data.xi.is_trivial():
        return None
    tau = tau_from_extension(G, K)
    if tau is None:
        raise NotTwisted("Xi is trivial but k -> k^-1 does not extend to an automorphism")
    _tau_invariants(G, tau, K)
    return tau

def lambda_invariant(G: PermGroup, tau: Automorphism, K: Iterable[Perm]) -> bool:
    """Λ = tau K is G-invariant: g^-1 k tau(g) ∈ K for all g, k"""
    K_set = frozenset(K)
    return all(g.inverse() * k * tau(g) in K_set for g in G.generators for k in K_set)

def check_twisted_characterize(G: PermGroup, tau: Automorphism, K: Sequence[Perm]) -> Verdict:
    """K twisted iff 1 ∈ K and Λ is G-invariant, for an involutory tau inverting a generating K"""
    left = bool(is_twisted_subgroup(G, K))
    right = G.identity in set(K) and lambda_invariant(G, tau, K)
    return Verdict("twisted_characterize", left == right, None if left == right else {"twisted": left, "lambda_invariant": right})

def _h_action_witness(F: Folder) -> Optional[Dict[str, str]]:
    K_set = F.K_set
    for h in F.H.generators:
        for k in F.K:
            if k.conjugate(h) not in K_set:
                return {"h": str(h), "k": str(k)}
    return None

def extend_tau_bruck(F: Folder) -> Automorphism:
    """The unique tau with [H, tau] = 1 and k^tau = k^-1, defined by tau(hk) = h k^-1"""
    verdict = is_twisted_subgroup(F.G, F.K)
    if not verdict:
        raise NotBruckFolder("K is not a twisted subgroup", {"failed": "twisted", **verdict.to_dict()})
    witness = _h_action_witness(F)
    if witness is not None:
        raise NotBruckFolder("H does not act on K by conjugation", {"failed": "H_action", **witness})
    mapping = {h * k: h * k.inverse() for h in F.H.elements for k in F.K}
    if len(mapping) != F.G.order or len(set(mapping.values())) != F.G.order:
        raise NotBruckFolder("tau(hk) = hk^-1 is not a bijection of G", {"failed": "bijective"})
    for a in F.G.elements:
        for g in F.G.generators:
            if mapping[a * g] != mapping[a] * mapping[g]:
                raise NotBruckFolder("tau(hk) = hk^-1 is not a homomorphism", {"failed": "automorphism", "a": str(a), "g": str(g)})
    return Automorphism(F.G, mapping)


# ~~~ G+ ~~~

@dataclass
class ExtGroup:
    """G+ = G<tau> as pairs (g, e), with Λ = {(k, 1) : k ∈ K} = tau K"""
    base: PermGroup
    tau: Automorphism
    K: Tuple[Perm, ...]

    @property
    def tau_element(self) -> Pair:
        return (self.base.identity, 1)

    @property
    def elements(self) -> List[Pair]:
        return [(g, e) for e in (0, 1) for g in self.base.elements]

    @property
    def generators(self) -> List[Pair]:
        return [(g, 0) for g in self.base.generators] + [self.tau_element]

    @property
    def lambda_set(self) -> FrozenSet[Pair]:
        return frozenset((k, 1) for k in self.K)

    @property
    def order(self) -> int:
        return 2 * self.base.order

    def mul(self, a: Pair, b: Pair) -> Pair:
        (g, e), (h, d) = a, b
        return (g * (self.tau(h) if e else h), e ^ d)

    def inverse(self, a: Pair) -> Pair:
        g, e = a
        return (g.inverse(), 0) if e == 0 else (self.tau(g).inverse(), 1)

    def conjugate(self, a: Pair, b: Pair) -> Pair:
        return self.mul(self.mul(self.inverse(b), a), b)

    def is_associative(self) -> bool:
        elements = self.elements
        return all(self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                   for a in elements for b in elements for c in elements)

    def as_perm_group(self) -> Tuple[PermGroup, Dict[Pair, Perm]]:
        """Right regular representation of G+ on its pairs, with the pair -> permutation map"""
        elements = self.elements
        index = {a: i for i, a in enumerate(elements)}

        def regular(b: Pair) -> Perm:
            return Perm(tuple(index[self.mul(a, b)] for a in elements))

        image = {a: regular(a) for a in elements}
        group = PermGroup(len(elements), [image[b] for b in self.generators], image.values())
        return group, image

def build_gplus(F: Folder, tau: Optional[Automorphism] = None) -> ExtGroup:
    """G+ with Λ = tau K, after checking Λ consists of involutions and is G+-invariant"""
    tau = extend_tau_bruck(F) if tau is None else tau
    ext = ExtGroup(F.G, tau, F.K)
    lam = ext.lambda_set
    identity = (F.G.identity, 0)
    square = next((x for x in sorted(lam) if ext.mul(x, x) != identity), None)
    if square is not None:
        raise NotTwisted("An element of Λ is not an involution", {"k": str(square[0])})
    for x in sorted(lam):
        for b in ext.generators:
            if ext.conjugate(x, b) not in lam:
                raise NotTwisted("Λ is not G+-invariant", {"k": str(x[0]), "conjugator": str(b[0]), "tau_part": b[1]})
    return ext


# ~~~ Xi as a subfolder ~~~

def xi_subfolder_check(F: Folder) -> Verdict:
    """(Xi, 1, Xi) is a subfolder whose loop is a normal subloop isomorphic to the group Xi"""
    xi = xi_psi(F.G, F.K).xi
    sub = detect_subfolder(F, xi)
    if sub is None or not sub.H.is_trivial() or set(sub.K) != set(xi.elements):
        return Verdict("normal_xi", False, {"reason": "not a subfolder", "xi_order": xi.order})
    L = folder_to_loop(F)
    labels = sorted(sub.labels)
    normal = is_normal_subloop(L, labels)
    if not normal:
        return Verdict("normal_xi", False, {"reason": "not normal", **normal.witness})
    sub_loop, _ = restrict(L, Subloop(tuple(labels)))
    if not is_group(sub_loop) or loops_isomorphic(sub_loop, cayley_table(xi)) is None:
        return Verdict("normal_xi", False, {"reason": "not isomorphic to Xi", "xi_order": xi.order})
    return Verdict("normal_xi", True, {"xi_order": xi.order})
