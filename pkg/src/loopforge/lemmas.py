"""
Executable audits of the structural lemmas about loop folders. Every check is registered under
its lemma id; a check first decides whether its hypotheses hold for the folder (applicable)
and only then computes both sides of the statement.
"""

from __future__ import annotations

import functools
import logging
from typing import Callable, Dict, List, Optional

from sympy import isprime, primefactors

from .baer import Folder, FolderClass, baer_envelope, detect_subfolder, folder_to_loop, quotient_folder, verify_h_generation
from .bx2p import (LemmaReport, check_bx2p_tau, check_theorem1_shape, classify_folder, find_2m_subfolder,
                   heiss_decomposition, kbar_check)
from .errors import CapacityError, LoopforgeError, NotBruckFolder
from .loopcore import LATTICE_LIMIT, Loop, Subloop, check_ar, check_bol, exponent, is_bruck, is_soluble_loop, restrict
from .permcore import (PermGroup, centralizer, commutators_inside, conjugacy_classes, core,
                       fingerprint_isomorphic, fitting_subgroup, generated_subgroup, is_power_of, is_soluble,
                       normal_subgroups, normalizer, o2_subgroup, o2prime_subgroup, o_upper2, overgroups,
                       product_order, quotient, subgroups)
from .twisted import (Automorphism, build_gplus, check_twisted_characterize, extend_tau_bruck, is_twisted_subgroup,
                      lambda_invariant, tau_automorphism, tau_from_extension, tau_from_relation, xi_psi,
                      xi_subfolder_check)

logger = logging.getLogger(__name__)

SUBGROUP_SCAN_LIMIT = 512
RELATION_CROSSCHECK_LIMIT = 200


class FolderContext:
    """Shared, lazily computed data about one folder. Checks only read from it"""

    def __init__(self, folder: Folder):
        self.folder = folder

    @functools.cached_property
    def fclass(self) -> FolderClass:
        return classify_folder(self.folder)

    @functools.cached_property
    def loop(self) -> Loop:
        return folder_to_loop(self.folder)

    @functools.cached_property
    def O2(self) -> PermGroup:
        return o2_subgroup(self.folder.G)

    @functools.cached_property
    def bar(self):
        """G/O_2(G)"""
        return quotient(self.folder.G, self.O2)

    @functools.cached_property
    def K_group(self) -> PermGroup:
        return generated_subgroup(self.folder.G.degree, self.folder.K)

    @functools.cached_property
    def tau(self) -> Optional[Automorphism]:
        if not self.fclass["bruck"]:
            return None
        return extend_tau_bruck(self.folder)

    @functools.cached_property
    def O2H(self) -> frozenset:
        return frozenset(a * h for a in self.O2.elements for h in self.folder.H.elements)

    @property
    def bx2p(self) -> bool:
        return self.fclass["bx2p"]

    @property
    def small(self) -> bool:
        return self.folder.G.order <= SUBGROUP_SCAN_LIMIT


REGISTERED_LEMMAS: Dict[str, "LemmaCheck"] = {}

class LemmaCheck:
    """
    Wraps a lemma check. The wrapped function returns a LemmaReport; capacity errors raised
    while checking turn into an inapplicable report with a 'skipped' witness
    """

    def __init__(self, func: Callable[[FolderContext], LemmaReport], name: str, section: str):
        self.func = func
        self.name = name
        self.section = section

    def __call__(self, ctx: FolderContext) -> LemmaReport:
        try:
            report = self.func(ctx)
        except CapacityError as e:
            logger.warning("lemma %s skipped: %s", self.name, e)
            return LemmaReport(self.name, False, None, {"skipped": str(e)})
        report.lemma = self.name
        return report

    @classmethod
    def register(cls, name: str, section: str = "section3"):
        """Registers the decorated function under a lemma id in REGISTERED_LEMMAS"""
        def decorator(func):
            check = cls(func, name, section)
            REGISTERED_LEMMAS[name] = check
            return check
        return decorator


def _skip(reason: str) -> LemmaReport:
    return LemmaReport("", False, None, {"reason": reason})

def _result(passed: bool, witness: Optional[Dict] = None) -> LemmaReport:
    return LemmaReport("", True, bool(passed), witness or {})

def _not_bx2p() -> LemmaReport:
    return _skip("not a BX2P folder")


# ~~~ Folders, subfolders and the Baer envelope ~~~

@LemmaCheck.register("HKsuper", section="section2")
def hk_super(ctx: FolderContext) -> LemmaReport:
    F = ctx.folder
    if not ctx.fclass["folder"]:
        return _skip("not a loop folder")
    if not ctx.small:
        return _skip("group too large for an overgroup scan")
    for base in (F.H, ctx.K_group):
        for U in overgroups(F.G, base):
            if detect_subfolder(F, U) is None:
                return _result(False, {"U_order": U.order, "contains": "H" if base is F.H else "K"})
    return _result(True)

@LemmaCheck.register("Hnormal", section="section2")
def h_normal(ctx: FolderContext) -> LemmaReport:
    F = ctx.folder
    if not ctx.fclass["folder"]:
        return _skip("not a loop folder")
    N = core(F.G, F.H)
    try:
        quotient_folder(F, N)
    except LoopforgeError as e:
        return _result(False, {"core_order": N.order, "error": str(e)})
    return _result(True, {"core_order": N.order})

@LemmaCheck.register("Hgeneration", section="section2")
def h_generation(ctx: FolderContext) -> LemmaReport:
    if not (ctx.fclass["folder"] and ctx.fclass["faithful"] and ctx.fclass["envelope"]):
        return _skip("not a faithful envelope")
    verdict = verify_h_generation(ctx.folder)
    return _result(verdict.holds, verdict.witness)

@LemmaCheck.register("Bol_twisted", section="section2")
def bol_twisted(ctx: FolderContext) -> LemmaReport:
    if not (ctx.fclass["folder"] and ctx.fclass["faithful"]):
        return _skip("not a faithful folder")
    if not check_bol(ctx.loop):
        return _skip("loop is not Bol")
    verdict = is_twisted_subgroup(ctx.folder.G, ctx.folder.K)
    return _result(verdict.is_twisted, verdict.to_dict())

@LemmaCheck.register("twisted", section="section2")
def twisted_claims(ctx: FolderContext) -> LemmaReport:
    F = ctx.folder
    if not (ctx.fclass["bol"] and ctx.fclass["envelope"]):
        return _skip("K is not a twisted subgroup generating G")
    data = xi_psi(F.G, F.K)
    witness = {name: verdict.holds for name, verdict in data.claims.items()}
    passed = all(witness.values())
    if data.xi.is_trivial() and F.G.order <= RELATION_CROSSCHECK_LIMIT:
        from_relation = tau_from_relation(F.G, data.relation)
        from_extension = tau_from_extension(F.G, F.K)
        agree = (from_relation is not None and from_extension is not None
                 and from_relation.agrees_on(F.G.elements, from_extension))
        witness["tau_constructions_agree"] = agree
        passed = passed and agree
    witness.update(xi_order=data.xi.order, psi_order=data.psi.order)
    return _result(passed, witness)

@LemmaCheck.register("twisted_characterize", section="section2")
def twisted_characterize(ctx: FolderContext) -> LemmaReport:
    F = ctx.folder
    if not ctx.fclass["envelope"]:
        return _skip("K does not generate G")
    tau = tau_from_extension(F.G, F.K)
    if tau is None:
        return _skip("k -> k^-1 does not extend to an automorphism")
    verdict = check_twisted_characterize(F.G, tau, F.K)
    return _result(verdict.holds, verdict.witness)

@LemmaCheck.register("bruck_baer_envelope", section="section2")
def bruck_baer_envelope(ctx: FolderContext) -> LemmaReport:
    if not ctx.fclass["folder"] or not is_bruck(ctx.loop):
        return _skip("loop is not Bruck")
    L = ctx.loop
    E = baer_envelope(L)
    checks: Dict[str, bool] = {}
    checks["radical_free"] = xi_psi(E.G, E.K).xi.is_trivial()
    tau = tau_automorphism(E.G, E.K) if checks["radical_free"] else None
    inverses = L.inverses
    checks["inversion_induces_tau"] = tau is not None and all(tau(E.K[x]) == E.K[int(inverses[x])] for x in range(L.n))
    if tau is None:
        return _result(False, checks)
    checks["lambda_invariant"] = lambda_invariant(E.G, tau, E.K)
    checks["H_centralizes_tau"] = all(tau(h) == h for h in E.H.generators)
    checks["ar_loop"] = check_ar(L).holds
    C = PermGroup.from_elements(E.G.degree, (g for g in E.G.elements if tau(g) == g))
    fixed = detect_subfolder(E, C)
    involutions = {x for x in range(L.n) if int(inverses[x]) == x}
    if fixed is None or set(fixed.labels) != involutions:
        checks["fixed_points_subfolder"] = False
    else:
        sub, _ = restrict(L, Subloop(tuple(sorted(involutions))))
        checks["fixed_points_subfolder"] = bool(check_bol(sub)) and exponent(sub) <= 2
    return _result(all(checks.values()), checks)

@LemmaCheck.register("BruckFolder", section="section2")
def bruck_folder(ctx: FolderContext) -> LemmaReport:
    F = ctx.folder
    if not ctx.fclass["bruck"]:
        return _skip("not a Bruck folder")
    checks: Dict[str, bool] = {}
    D = ctx.K_group
    DH = PermGroup.from_elements(D.degree, D.element_set & F.H.element_set)
    Z = core(D, DH)
    checks["Z_central"] = all(z * d == d * z for z in Z.generators for d in D.generators)
    verdict = fingerprint_isomorphic(quotient(D, Z).group, baer_envelope(ctx.loop).G)
    checks["K_group_mod_Z_is_rmult"] = verdict != "no"
    try:
        tau = ctx.tau
        checks["tau_exists"] = True
    except NotBruckFolder:
        checks["tau_exists"] = False
        return _result(False, checks)
    checks["lambda_invariant"] = lambda_invariant(F.G, tau, F.K)
    sub = detect_subfolder(F, D)
    checks["K_subfolder_bruck"] = sub is not None and classify_folder(sub)["bruck"]
    image = quotient_folder(F, core(F.G, F.H)).folder
    checks["image_bruck"] = classify_folder(image)["bruck"]
    return _result(all(checks.values()), {**checks, "Z_order": Z.order, "fingerprint": verdict})

@LemmaCheck.register("BX2P_tau", section="section2")
def bx2p_tau(ctx: FolderContext) -> LemmaReport:
    if not ctx.fclass["bruck"]:
        return _skip("not a Bruck folder")
    return check_bx2p_tau(ctx.folder, ctx.tau)

@LemmaCheck.register("overlineK", section="section2")
def overline_k(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    return kbar_check(ctx.folder, ctx.fclass)

@LemmaCheck.register("normal_xi", section="section2")
def normal_xi(ctx: FolderContext) -> LemmaReport:
    if not (ctx.fclass["bol"] and ctx.fclass["envelope"] and ctx.fclass["faithful"]):
        return _skip("not the envelope of a Bol loop")
    verdict = xi_subfolder_check(ctx.folder)
    return _result(verdict.holds, verdict.witness)


# ~~~ BX2P folders ~~~

@LemmaCheck.register("evensize")
def even_size(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    size = len(ctx.folder.K)
    return _result(size == 1 or size % 2 == 0, {"K_size": size})

@LemmaCheck.register("noHinvert")
def no_h_invert(ctx: FolderContext) -> LemmaReport:
    """An element of a conjugate of H inverted by some λ ∈ Λ is an involution"""
    if not ctx.bx2p:
        return _not_bx2p()
    F = ctx.folder
    ext = build_gplus(F, ctx.tau)
    conjugates = sorted({h.conjugate(g) for h in F.H.elements for g in F.G.elements})
    for x in conjugates:
        if (x * x).is_identity():
            continue
        x_inv = x.inverse()
        for k in F.K:
            if ext.conjugate((x, 0), (k, 1)) == (x_inv, 0):
                return _result(False, {"h": str(x), "k": str(k)})
    return _result(True)

@LemmaCheck.register("O2prime")
def o2prime(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    F = ctx.folder
    O = o2prime_subgroup(F.G)
    checks = {"in_C_H_K": O.issubgroup(F.H) and all(o * k == k * o for o in O.generators for k in F.K)}
    if ctx.fclass["faithful"]:
        checks["trivial_when_faithful"] = O.is_trivial()
    if ctx.fclass["envelope"]:
        checks["central_when_envelope"] = all(o * g == g * o for o in O.generators for g in F.G.generators)
    return _result(all(checks.values()), {**checks, "order": O.order})

@LemmaCheck.register("even_index")
def even_index(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    if not ctx.small:
        return _skip("group too large for an overgroup scan")
    F = ctx.folder
    for U in overgroups(F.G, F.H):
        index = F.G.order // U.order
        if index != 1 and index % 2:
            return _result(False, {"U_order": U.order, "index": index})
    return _result(True)

@LemmaCheck.register("2Himplies2G")
def two_h_implies_two_g(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    F = ctx.folder
    h2, g2 = F.H.is_p_group(2), F.G.is_p_group(2)
    return _result(h2 == g2, {"H_2_group": h2, "G_2_group": g2})

@LemmaCheck.register("O22prime")
def o22prime(ctx: FolderContext) -> LemmaReport:
    """O_{2,2'}(G)H = O_2(G)H; the left side always contains the right one"""
    if not ctx.bx2p:
        return _not_bx2p()
    F = ctx.folder
    O = ctx.bar.preimage(o2prime_subgroup(ctx.bar.group))
    left, right = product_order(O, F.H), len(ctx.O2H)
    return _result(left == right, {"O22prime_H": left, "O2_H": right})

@LemmaCheck.register("2powerorder")
def two_power_order(ctx: FolderContext) -> LemmaReport:
    F = ctx.folder
    if not (ctx.bx2p and ctx.fclass["envelope"]):
        return _skip("not a BX2P envelope")
    if not is_power_of(len(F.K), 2):
        return _skip("|G:H| is not a 2-power")
    return _result(F.G.is_p_group(2), {"G_order": F.G.order})

@LemmaCheck.register("solubleloop")
def soluble_loop(ctx: FolderContext) -> LemmaReport:
    F = ctx.folder
    if not (ctx.bx2p and ctx.fclass["envelope"]):
        return _skip("not a BX2P envelope")
    if len(ctx.O2H) != F.G.order:
        return _skip("G != O_2(G)H")
    if ctx.loop.n > LATTICE_LIMIT:
        return _skip("loop too large for a solubility search")
    return _result(is_soluble_loop(ctx.loop).holds)

@LemmaCheck.register("solublegroups")
def soluble_groups(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    if not is_soluble(ctx.folder.G):
        return _skip("G is not soluble")
    return _result(ctx.K_group.issubgroup(ctx.O2), {"K_group_order": ctx.K_group.order, "O2_order": ctx.O2.order})

@LemmaCheck.register("Characsoluble")
def charac_soluble(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    if ctx.loop.n > LATTICE_LIMIT:
        return _skip("loop too large for a solubility search")
    soluble = is_soluble_loop(ctx.loop).holds
    two_group = ctx.K_group.is_p_group(2)
    return _result(soluble == two_group, {"loop_soluble": soluble, "K_group_2_group": two_group})

@LemmaCheck.register("oddnormal")
def odd_normal(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    N = o2prime_subgroup(ctx.folder.G)
    try:
        quotient_folder(ctx.folder, N)
    except LoopforgeError as e:
        return _result(False, {"O2prime_order": N.order, "error": str(e)})
    return _result(True, {"O2prime_order": N.order})

@LemmaCheck.register("subloops")
def subloops(ctx: FolderContext) -> LemmaReport:
    """Part (1) over the cyclic subgroups of H, part (2) over every subgroup of a small G"""
    if not ctx.bx2p:
        return _not_bx2p()
    F = ctx.folder
    for h in F.H.elements:
        L = PermGroup(F.G.degree, [h])
        C_K = {k for k in F.K if all(k * l == l * k for l in L.generators)}
        found = []
        for U in (normalizer(F.G, L), centralizer(F.G, L)):
            sub = detect_subfolder(F, U)
            if sub is None or set(sub.K) != C_K or not classify_folder(sub)["bx2p"]:
                return _result(False, {"part": 1, "h": str(h), "U_order": U.order})
            found.append(set(sub.labels))
        if found[0] != found[1]:
            return _result(False, {"part": 1, "h": str(h), "reason": "different subloops"})
    if ctx.small:
        for U in subgroups(F.G):
            UH = len(U.element_set & F.H.element_set)
            UK = sum(1 for k in F.K if k in U)
            if U.order > UH * UK:
                continue
            sub = detect_subfolder(F, U)
            if sub is None or not classify_folder(sub)["bx2p"]:
                return _result(False, {"part": 2, "U_order": U.order})
    return _result(True, {"part2_scanned": ctx.small})

def _inverted_odd_elements(ctx: FolderContext):
    """Pairs (k, ȳ) with k ∈ K, ȳ of odd order > 1 in G/O_2(G) and ȳ^k̄ = ȳ^-1"""
    Q = ctx.bar
    odd = [y for y in Q.group.elements if y.order % 2 == 1 and not y.is_identity()]
    seen = set()
    for k in ctx.folder.K:
        x = Q.project(k)
        if x in seen:
            continue
        seen.add(x)
        for y in odd:
            if y.conjugate(x) == y.inverse():
                yield k, y

@LemmaCheck.register("inv_invert")
def inv_invert(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    G = ctx.folder.G
    checked = set()
    for k, y in _inverted_odd_elements(ctx):
        p = y.order
        if (k, p) in checked or not isprime(p):
            continue
        checked.add((k, p))
        if not any(g.order == p and g.conjugate(k) == g.inverse() for g in G.elements):
            return _result(False, {"k": str(k), "p": p})
    return _result(True, {"pairs_checked": len(checked)})

@LemmaCheck.register("noHoverlineinvert")
def no_h_overline_invert(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    Q = ctx.bar
    Hbar = Q.image(ctx.folder.H).element_set
    class_of = {x: cls for cls in conjugacy_classes(Q.group) for x in cls}
    for k, y in _inverted_odd_elements(ctx):
        hit = next((z for z in class_of[y] if z in Hbar), None)
        if hit is not None:
            return _result(False, {"k": str(k), "y": str(y), "conjugate_in_H": str(hit)})
    return _result(True)

@LemmaCheck.register("HeissPrime")
def heiss_prime(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    Q = ctx.bar
    if not o2_subgroup(Q.image(ctx.folder.H)).is_trivial():
        return _skip("O_2(Hbar) != 1")
    data = heiss_decomposition(ctx.folder, fclass=ctx.fclass)
    tested = []
    for p in primefactors(Q.group.order):
        if p == 2 or any(o.m % p for o in data.orbits):
            continue
        tested.append(p)
        if len(ctx.folder.K) % p == 0:
            return _result(False, {"p": p, "K_size": len(ctx.folder.K)})
    if not tested:
        return _skip("no odd prime divides every orbit length")
    return _result(True, {"primes": tested})

@LemmaCheck.register("ZeroComponentCase")
def zero_component_case(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    Q = ctx.bar
    F = fitting_subgroup(Q.group)
    if not centralizer(Q.group, F).issubgroup(F):
        return _skip("F*(Gbar) != F(Gbar)")
    Hbar = Q.image(ctx.folder.H)
    return _result(Hbar.order == Q.group.order, {"Gbar_order": Q.group.order, "Hbar_order": Hbar.order})

@LemmaCheck.register("O_upper_2_criterion")
def o_upper_2_criterion(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    if not ctx.small:
        return _skip("group too large for a subgroup scan")
    F = ctx.folder
    applied = 0
    for U in subgroups(F.G):
        sub = detect_subfolder(F, U)
        if sub is None:
            continue
        O2U, OU = o2_subgroup(U), o_upper2(U)
        if not commutators_inside(O2U, OU, ctx.O2):
            continue
        if not generated_subgroup(U.degree, sub.K).issubgroup(O2U):
            continue
        applied += 1
        outside = next((g for g in OU.elements if g not in ctx.O2H), None)
        if outside is not None:
            return _result(False, {"U_order": U.order, "element": str(outside)})
    if not applied:
        return _skip("no subgroup satisfies the hypotheses")
    return _result(True, {"subgroups_checked": applied})

@LemmaCheck.register("passive_centralizing_components")
def passive_centralizing_components(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    Q = ctx.bar
    C = centralizer(Q.group, Q.image(ctx.K_group))
    O = o_upper2(C)
    Hbar = Q.image(ctx.folder.H)
    return _result(O.issubgroup(Hbar), {"O_upper_2_order": O.order})

@LemmaCheck.register("ArFolders(5)")
def ar_folders_fusion(ctx: FolderContext) -> LemmaReport:
    """H controls G-fusion in H"""
    if not (ctx.fclass["folder"] and ctx.fclass["ar"]):
        return _skip("not an A_r-folder")
    F = ctx.folder
    H_class = {x: i for i, cls in enumerate(conjugacy_classes(F.H)) for x in cls}
    for cls in conjugacy_classes(F.G):
        fused = {H_class[x] for x in cls if x in F.H}
        if len(fused) > 1:
            return _result(False, {"class_representative": str(cls[0]), "H_classes": len(fused)})
    return _result(True)

@LemmaCheck.register("ArFolders(6)")
def ar_folders_core(ctx: FolderContext) -> LemmaReport:
    if not (ctx.fclass["folder"] and ctx.fclass["ar"]):
        return _skip("not an A_r-folder")
    F = ctx.folder
    C = core(F.G, F.H)
    passed = commutators_inside(ctx.K_group, C, PermGroup.trivial(F.G.degree))
    return _result(passed, {"core_order": C.order})


# ~~~ Counting and structure ~~~

@LemmaCheck.register("HeissEquation", section="section2")
def heiss_equation(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    F = ctx.folder
    if ctx.small:
        admissible = [N for N in normal_subgroups(F.G) if ctx.O2.issubgroup(N)]
    else:
        admissible = [ctx.O2, F.G]
    failures = []
    for N in admissible:
        data = heiss_decomposition(F, N, ctx.fclass)
        if not data.holds:
            failures.append({"N_order": N.order, **data.to_dict()})
    return _result(not failures, {"N_orders": [N.order for N in admissible], "failures": failures})

@LemmaCheck.register("2NloopEmbedding", section="section2")
def two_n_loop_embedding(ctx: FolderContext) -> LemmaReport:
    if not ctx.bx2p:
        return _not_bx2p()
    if len(ctx.O2H) == ctx.folder.G.order:
        return _skip("G = O_2(G)H")
    result = find_2m_subfolder(ctx.folder, ctx.tau)
    return _result(result.holds, {"q": result.q, "subloop": list(result.subloop), **result.checks})

@LemmaCheck.register("theorem1", section="section2")
def theorem1(ctx: FolderContext) -> LemmaReport:
    return check_theorem1_shape(ctx.folder, ctx.fclass)


# ~~~ Suites ~~~

SUITES = ("section3", "all")

def get_activated_lemmas(config: Optional[Dict[str, int]] = None, suite: str = "section3") -> List[LemmaCheck]:
    """Activated checks in registry order. Falls back to every check of the suite if no config is given"""
    if suite not in SUITES:
        raise ValueError(f"Unknown suite '{suite}'")
    if config is None:
        config = {name: 1 for name, check in REGISTERED_LEMMAS.items() if suite == "all" or check.section == suite}
    unknown = [name for name in config if name not in REGISTERED_LEMMAS]
    if unknown:
        raise KeyError(f"Requested lemma '{unknown[0]}' not found")
    return [check for name, check in REGISTERED_LEMMAS.items() if config.get(name) == 1]

def lemma_suite(F: Folder, suite: str = "section3", config: Optional[Dict[str, int]] = None) -> List[LemmaReport]:
    """Runs the activated checks on one folder; reports come in registry order"""
    ctx = FolderContext(F)
    reports = []
    for check in get_activated_lemmas(config, suite):
        report = check(ctx)
        logger.debug("lemma %s: applicable=%s pass=%s", report.lemma, report.applicable, report.passed)
        reports.append(report)
    return reports

def failed(reports: List[LemmaReport]) -> List[LemmaReport]:
    return [r for r in reports if r.applicable and not r.passed]
