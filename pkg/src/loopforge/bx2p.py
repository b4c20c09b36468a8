"""
Bruck and BX2P folders: classification, the tau-in-O_2(G+) criterion, the Heiss counting
decomposition, the admissible field sizes q, the structure checker for BX2P envelopes and
the descent to 2M subloops.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import factorint, isprime

from .baer import Folder, FolderClass, detect_subfolder, folder_to_loop, verify_folder
from .errors import BadN, NotBruckFolder, NotBX2PFolder, NotFound, SizeLimit, Undecided, UnsupportedField
from .loopcore import (LATTICE_LIMIT, Loop, Subloop, Verdict, _closure, exponent, is_bruck, is_soluble_loop, restrict,
                       subloop_lattice)
from .permcore import (Perm, PermGroup, centralizer, conjugacy_classes, conjugate_subgroup, derived_series,
                       derived_subgroup, find_isomorphism, fingerprint_isomorphic, generated_subgroup,
                       is_normal, is_power_of, normal_subgroups, o2_subgroup, product_order, quotient)
from .pgl2 import make_pgl2
from .twisted import Automorphism, build_gplus, extend_tau_bruck, is_twisted_subgroup

logger = logging.getLogger(__name__)

DECOMPOSITION_LIMIT = 10_000


@dataclass
class LemmaReport:
    """One audited statement. passed is None when the hypotheses do not hold"""
    lemma: str
    applicable: bool
    passed: Optional[bool]
    witness: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {"lemma": self.lemma, "applicable": self.applicable, "pass": self.passed, "witness": self.witness}


# ~~~ Classification ~~~

def check_ar_folder(F: Folder) -> Verdict:
    """H acts on K by conjugation"""
    K_set = F.K_set
    for h in F.H.generators:
        for k in F.K:
            if k.conjugate(h) not in K_set:
                return Verdict("ar", False, {"h": str(h), "k": str(k)})
    return Verdict("ar", True)

def check_bol_folder(F: Folder) -> Verdict:
    verdict = is_twisted_subgroup(F.G, F.K)
    return Verdict("bol", verdict.is_twisted, verdict.to_dict())

def classify_folder(F: Folder) -> FolderClass:
    """folder/faithful/envelope, then bol (K twisted), ar (H acts on K), bruck and bx2p"""
    result = verify_folder(F)
    if not result["folder"]:
        for name in ("bol", "ar", "bruck"):
            result.set(Verdict(name, False, {"failed": "folder"}))
        result.set(Verdict("bx2p", False, {"failed": "bruck"}))
        return result
    bol, ar = check_bol_folder(F), check_ar_folder(F)
    result.set(bol)
    result.set(ar)
    if bol and ar:
        result.set(Verdict("bruck", True))
    else:
        result.set(Verdict("bruck", False, {"failed": "bol" if not bol else "ar"}))
    if not result["bruck"]:
        result.set(Verdict("bx2p", False, {"failed": "bruck"}))
    else:
        odd = next((k for k in F.K if not is_power_of(k.order, 2)), None)
        result.set(Verdict("bx2p", odd is None, None if odd is None else {"k": str(odd), "order": odd.order}))
    return result


# ~~~ tau and O_2 ~~~

def check_bx2p_tau(F: Folder, tau: Optional[Automorphism] = None) -> LemmaReport:
    """tau ∈ O_2(G+) iff every element of K has 2-power order"""
    try:
        tau = extend_tau_bruck(F) if tau is None else tau
    except NotBruckFolder as e:
        return LemmaReport("BX2P_tau", False, None, {"reason": str(e)})
    ext = build_gplus(F, tau)
    group, image = ext.as_perm_group()
    tau_in_o2 = image[ext.tau_element] in o2_subgroup(group)
    all_2_power = all(is_power_of(k.order, 2) for k in F.K)
    return LemmaReport("BX2P_tau", True, tau_in_o2 == all_2_power,
                       {"tau_in_O2": tau_in_o2, "all_K_2_power": all_2_power})

def kbar_check(F: Folder, fclass: Optional[FolderClass] = None) -> LemmaReport:
    """k^2 ∈ O_2(G), and K̄ - {1} is a union of classes of involutions of G/O_2(G)"""
    fclass = classify_folder(F) if fclass is None else fclass
    if not fclass["bx2p"]:
        return LemmaReport("overlineK", False, None, {"reason": "not a BX2P folder"})
    O2 = o2_subgroup(F.G)
    bad_square = next((k for k in F.K if k * k not in O2), None)
    if bad_square is not None:
        return LemmaReport("overlineK", True, False, {"k": str(bad_square)})
    Q = quotient(F.G, O2)
    Kbar = {Q.project(k) for k in F.K}
    for cls in conjugacy_classes(Q.group):
        if cls[0].is_identity() or not Kbar & set(cls):
            continue
        if cls[0].order != 2 or not set(cls) <= Kbar:
            return LemmaReport("overlineK", True, False, {"class_representative": str(cls[0]), "order": cls[0].order})
    return LemmaReport("overlineK", True, True, {"Kbar_size": len(Kbar)})


# ~~~ Heiss decomposition ~~~

@dataclass
class HeissOrbit:
    representative: Perm
    m: int
    n: int

@dataclass
class HeissData:
    n0: int
    orbits: List[HeissOrbit]
    total: int

    @property
    def holds(self) -> bool:
        return self.total == self.n0 + sum(o.n * o.m for o in self.orbits)

    def to_dict(self) -> Dict:
        return {"n0": self.n0, "orbits": [{"representative": str(o.representative), "m": o.m, "n": o.n} for o in self.orbits],
                "total": self.total, "holds": self.holds}

def class_fibres(G: PermGroup, K: Sequence[Perm], N: PermGroup) -> Tuple[int, List[HeissOrbit]]:
    """
    Counts K over G/N: n0 elements land in N, and every other class of G/N met by K̄ gives an
    orbit with m = class size and n = fibre size over its lexicographically least member
    """
    Q = quotient(G, N)
    fibres: Dict[Perm, int] = {}
    for k in K:
        x = Q.project(k)
        fibres[x] = fibres.get(x, 0) + 1
    n0 = fibres.pop(Q.group.identity, 0)
    orbits = []
    remaining = set(fibres)
    for cls in conjugacy_classes(Q.group):
        met = remaining & set(cls)
        if not met:
            continue
        rep = min(met)
        orbits.append(HeissOrbit(rep, len(cls), fibres[rep]))
        remaining -= set(cls)
    return n0, sorted(orbits, key=lambda o: o.representative)

def heiss_decomposition(F: Folder, N: Optional[PermGroup] = None, fclass: Optional[FolderClass] = None) -> HeissData:
    """
    |K| = n0 + Σ n_i m_i over the orbits of G/N on the nonidentity part of K̄. tau acts trivially
    on G/N, so Λ and K have the same image and orbits are conjugacy classes of G/N
    """
    fclass = classify_folder(F) if fclass is None else fclass
    if not fclass["bx2p"]:
        raise NotBX2PFolder("Heiss decomposition needs a BX2P folder", fclass.witness("bx2p"))
    O2 = o2_subgroup(F.G)
    N = O2 if N is None else N
    if not N.issubgroup(F.G) or not is_normal(F.G, N):
        raise BadN("N is not a normal subgroup of G")
    if not O2.issubgroup(N):
        raise BadN("N does not contain O_2(G)", {"O2_order": O2.order, "N_order": N.order})
    n0, orbits = class_fibres(F.G, F.K, N)
    return HeissData(n0, orbits, len(F.K))


# ~~~ Field sizes ~~~

READINGS = ("literal", "prime_power")

@dataclass
class QClass:
    """verdict is two, nine, fermat_prime or excluded; in_hypothesis follows the chosen reading"""
    q: int
    verdict: str
    reason: Optional[str]
    reading: str
    in_hypothesis: bool

    @property
    def admitted(self) -> bool:
        return self.in_hypothesis and self.verdict != "excluded"

    def to_dict(self) -> Dict:
        return {"q": self.q, "verdict": self.verdict, "reason": self.reason, "reading": self.reading,
                "in_hypothesis": self.in_hypothesis}

def _is_prime_power(q: int) -> bool:
    return q > 1 and len(factorint(q)) == 1

def classify_q(q: int, reading: str = "prime_power") -> QClass:
    if reading not in READINGS:
        raise ValueError(f"Unknown reading '{reading}'")
    if q <= 1:
        raise ValueError("q must exceed 1")
    two_power = is_power_of(q - 1, 2)
    if reading == "literal":
        in_hypothesis = two_power
    else:
        in_hypothesis = _is_prime_power(q) and q - 1 >= 4 and two_power

    if q == 2:
        return QClass(q, "two", None, reading, in_hypothesis)
    if q == 9:
        return QClass(q, "nine", None, reading, in_hypothesis)
    if not two_power:
        reason = "q_minus_1_not_2_power"
    elif q == 3:
        reason = "q_equals_3"
    elif isprime(q):
        return QClass(q, "fermat_prime", None, reading, in_hypothesis)
    elif _is_prime_power(q):
        reason = "composite_prime_power"
    else:
        reason = "not_prime_power"
    return QClass(q, "excluded", reason, reading, in_hypothesis)

def sieve_q(max_q: int, reading: str = "prime_power") -> List[QClass]:
    """Classifies every q = 2^k + 1 <= max_q; callers filter on admitted"""
    result = []
    k = 0
    while 2 ** k + 1 <= max_q:
        result.append(classify_q(2 ** k + 1, reading))
        k += 1
    return result

def amt_loop_size(q: int, n0: int) -> int:
    """|X| = (q+1) n0"""
    return (q + 1) * n0

def amt_consistent(q: int, n0: int, n1: int) -> bool:
    """For q = 2^k + 1: n0 a 2-power, n0 = n1 2^(k-1) and (q+1) n0 = n1 2^k (2^(k-1)+1)"""
    if not is_power_of(q - 1, 2) or q < 5:
        return False
    k = (q - 1).bit_length() - 1
    return (is_power_of(n0, 2) and n0 == n1 * 2 ** (k - 1)
            and amt_loop_size(q, n0) == n1 * 2 ** k * (2 ** (k - 1) + 1))

def field_size_for_order(order: int) -> Optional[int]:
    """The q with q(q-1)(q+1) = order, if any"""
    q = 2
    while q * (q - 1) * (q + 1) < order:
        q += 1
    return q if q * (q - 1) * (q + 1) == order else None


# ~~~ Structure of BX2P envelopes ~~~

def direct_factors(G: PermGroup) -> List[PermGroup]:
    """Directly indecomposable factors, found by pairing complementary normal subgroups"""
    if G.order > DECOMPOSITION_LIMIT:
        raise Undecided(f"Direct decomposition is limited to order {DECOMPOSITION_LIMIT}", {"order": G.order})
    if G.is_trivial():
        return []
    normals = [N for N in normal_subgroups(G) if 1 < N.order < G.order]
    for A in normals:
        for B in normals:
            if A.order * B.order == G.order and len(A.element_set & B.element_set) == 1:
                return direct_factors(A) + direct_factors(B)
    return [G]

def _pgl2_match(D: PermGroup) -> Dict:
    """
    Matches D against PGL_2(q) for the q its order allows; the isomorphism transports the Borel
    subgroup. admissible records whether q itself passes classify_q
    """
    q = field_size_for_order(D.order)
    match = {"q": q, "admissible": q is not None and classify_q(q).admitted, "isomorphic": False}
    if q is None:
        return match
    try:
        model = make_pgl2(q)
    except UnsupportedField as e:
        raise Undecided(f"Cannot decide whether a factor of order {D.order} is PGL_2({q})", {"q": q}) from e
    verdict = fingerprint_isomorphic(model.group, D)
    if verdict == "unknown":
        raise Undecided(f"Cannot decide whether a factor of order {D.order} is PGL_2({q})", {"q": q})
    match["isomorphic"] = verdict == "yes"
    match["model"] = model
    return match

def _is_conjugate_subgroup(D: PermGroup, A: PermGroup, B: PermGroup) -> bool:
    return A.order == B.order and any(conjugate_subgroup(A, g) == B for g in D.elements)

def theorem1_shape(G: PermGroup, H: PermGroup) -> Dict:
    """
    Decomposes G/O_2(G) into direct factors and reports, per factor, its PGL_2 match and
    whether Hbar meets it in a conjugate of the Borel subgroup
    """
    O2 = o2_subgroup(G)
    Q = quotient(G, O2)
    Hbar = Q.image(H)
    factors = direct_factors(Q.group)
    factor_reports = []
    for D in factors:
        match = _pgl2_match(D)
        entry = {"order": D.order, "q": match["q"], "admissible": match["admissible"],
                 "isomorphic": match["isomorphic"], "borel": False}
        if match["isomorphic"]:
            phi = find_isomorphism(match["model"].group, D)
            borel = PermGroup.from_elements(D.degree, (phi[b] for b in match["model"].borel.elements))
            meet = PermGroup.from_elements(D.degree, D.element_set & Hbar.element_set)
            entry["borel"] = _is_conjugate_subgroup(D, borel, meet)
        factor_reports.append(entry)
    product = math.prod(D.order for D in factors)
    conclusions = {
        "1": product == Q.group.order and all(f["isomorphic"] for f in factor_reports),
        "2": all(f["isomorphic"] and f["admissible"] for f in factor_reports),
        "3": all(f["borel"] for f in factor_reports),
        "4": centralizer(G, O2).issubgroup(O2),
    }
    return {"e": len(factors), "conclusions": conclusions, "factors": factor_reports}

def check_theorem1_shape(F: Folder, fclass: Optional[FolderClass] = None) -> LemmaReport:
    """
    For a BX2P envelope: G/O_2(G) is a direct product of PGL_2(q_i) with admissible q_i,
    Hbar meets each factor in a Borel subgroup, and C_G(O_2(G)) <= O_2(G)
    """
    fclass = classify_folder(F) if fclass is None else fclass
    if not (fclass["bx2p"] and fclass["envelope"]):
        return LemmaReport("theorem1", False, None, {"reason": "not a BX2P envelope"})
    shape = theorem1_shape(F.G, F.H)
    return LemmaReport("theorem1", True, all(shape["conclusions"].values()), shape)


# ~~~ 2M loops ~~~

def is_2m_loop(L: Loop) -> Verdict:
    """A nonsoluble Bruck loop of 2-power exponent all of whose proper subloops are soluble"""
    if L.n > LATTICE_LIMIT:
        raise SizeLimit(f"2M detection is limited to order {LATTICE_LIMIT}", {"n": L.n})
    bruck = is_bruck(L)
    if not bruck:
        return Verdict("2m", False, {"reason": "not bruck"})
    if not is_power_of(exponent(L), 2):
        return Verdict("2m", False, {"reason": "exponent not a 2-power"})
    if is_soluble_loop(L):
        return Verdict("2m", False, {"reason": "soluble"})
    for S in subloop_lattice(L):
        if len(S) < L.n and not is_soluble_loop(_restricted(L, S.elements)):
            return Verdict("2m", False, {"reason": "nonsoluble proper subloop", "subloop": list(S.elements)})
    return Verdict("2m", True)

def _restricted(L: Loop, elements) -> Loop:
    return restrict(L, Subloop(tuple(elements)))[0]

@dataclass
class TwoMResult:
    folder: Folder
    subloop: Tuple[int, ...]
    q: Optional[int]
    checks: Dict[str, bool]

    @property
    def holds(self) -> bool:
        return all(self.checks.values())

def _label_group(F: Folder, labels) -> PermGroup:
    position = {label: i for i, label in enumerate(F.labels)}
    return generated_subgroup(F.G.degree, (F.K[position[x]] for x in labels))

def find_2m_subfolder(F: Folder, tau: Optional[Automorphism] = None) -> Optional[TwoMResult]:
    """
    Descends through nonsoluble subloops to a 2M subloop Y and returns the subfolder on
    U = <K_Y>. A subloop is soluble iff its K-part generates a 2-group, and a nonsoluble
    subloop always contains a nonsoluble subloop on two generators. None when G = O_2(G)H
    """
    O2 = o2_subgroup(F.G)
    if product_order(O2, F.H) == F.G.order:
        return None
    L = folder_to_loop(F)
    labels = {x: i for i, x in enumerate(F.labels)}

    def soluble(Y) -> bool:
        return _label_group(F, Y).is_p_group(2)

    current = tuple(F.labels)
    if soluble(current):
        raise NotFound("G != O_2(G)H but <K> is a 2-group")
    while True:
        candidates = set()
        for i, x in enumerate(current):
            for y in current[i + 1:]:
                S = _closure(L.table, {labels[x], labels[y]})
                if len(S) < len(current):
                    candidates.add(tuple(sorted(F.labels[s] for s in S)))
        smaller = next((Y for Y in sorted(candidates, key=lambda Y: (len(Y), Y)) if not soluble(Y)), None)
        if smaller is None:
            break
        current = smaller
    logger.debug("2M descent stopped at a subloop of order %d", len(current))

    U = _label_group(F, current)
    sub = detect_subfolder(F, U)
    if sub is None:
        raise NotFound("<K_Y> does not give a subfolder", {"subloop": list(current)})
    return TwoMResult(sub, current, *_two_m_checks(F, sub, U, tau))

def _two_m_checks(F: Folder, sub: Folder, U: PermGroup, tau: Optional[Automorphism]) -> Tuple[Optional[int], Dict[str, bool]]:
    checks: Dict[str, bool] = {}
    checks["generated_by_K"] = generated_subgroup(U.degree, sub.K).order == U.order
    O2U = o2_subgroup(U)
    checks["F_star_is_O2"] = centralizer(U, O2U).issubgroup(O2U)
    Q = quotient(U, O2U)
    match = _pgl2_match(Q.group) if Q.group.order <= DECOMPOSITION_LIMIT else {"q": None, "isomorphic": False}
    q = match["q"]
    checks["pgl2_quotient"] = match["isomorphic"] and match.get("admissible", False)
    if not checks["pgl2_quotient"]:
        return q, checks
    checks["index_q_plus_1"] = U.order // product_order(O2U, sub.H) == q + 1

    derived = derived_subgroup(Q.group)
    outside = {x for x in Q.group.elements if x.order == 2 and x not in derived}
    checks["Kbar_involutions"] = {Q.project(k) for k in sub.K} == outside | {Q.group.identity}

    tau = extend_tau_bruck(F) if tau is None else tau
    target = (q + 1) // 2
    inverted = False
    for y in U.elements:
        if y.order != target:
            continue
        y_inv = y.inverse()
        if any(k * tau(y) * k.inverse() == y_inv for k in sub.K):
            inverted = True
            break
    checks["inverted_element"] = inverted

    perfect = derived_series(F.G)[-1]
    wanted = 3 if q == 9 else q
    checks["H_element_in_perfect_core"] = any(h.order == wanted and h in perfect for h in sub.H.elements)
    return q, checks
