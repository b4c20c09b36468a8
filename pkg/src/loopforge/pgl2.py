"""
PGL_2(q) and PSL_2(q) as Möbius maps on the q+1 points of the projective line.

Points 0..q-1 are field elements and point q is ∞. Prime fields use arithmetic mod p;
GF(9) is GF(3)[x]/(x^2+1) with a + bx encoded as a + 3b.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from sympy import isprime

from .errors import UnsupportedField
from .permcore import Perm, PermGroup

logger = logging.getLogger(__name__)


@dataclass
class FiniteField:
    q: int
    add: np.ndarray
    mul: np.ndarray

    @classmethod
    def of_order(cls, q: int) -> FiniteField:
        if isprime(q):
            a = np.arange(q)
            return cls(q, (a[:, None] + a[None, :]) % q, (a[:, None] * a[None, :]) % q)
        if q == 9:
            return cls._gf9()
        raise UnsupportedField(f"No field construction for q = {q}; supported are primes and 9", {"q": q})

    @classmethod
    def _gf9(cls) -> FiniteField:
        a, b = np.divmod(np.arange(9), 3)[::-1]
        add = ((a[:, None] + a[None, :]) % 3) + 3 * ((b[:, None] + b[None, :]) % 3)
        # (a + bx)(c + dx) = (ac - bd) + (ad + bc)x since x^2 = -1
        real = (a[:, None] * a[None, :] - b[:, None] * b[None, :]) % 3
        imag = (a[:, None] * b[None, :] + b[:, None] * a[None, :]) % 3
        return cls(9, add, real + 3 * imag)

    @property
    def neg(self) -> np.ndarray:
        return np.argmin(self.add, axis=1)

    @property
    def inv(self) -> np.ndarray:
        """Multiplicative inverses; inv[0] is 0 by convention"""
        result = np.zeros(self.q, dtype=np.int64)
        rows, cols = np.nonzero(self.mul == 1)
        result[rows] = cols
        return result

    def primitive_element(self) -> int:
        for w in range(2, self.q) if self.q > 2 else [1]:
            seen, x = set(), 1
            for _ in range(self.q - 1):
                x = int(self.mul[x, w])
                seen.add(x)
            if len(seen) == self.q - 1:
                return w
        return 1


def mobius(field: FiniteField, a: int, b: int, c: int, d: int) -> Perm:
    """z -> (az + b)/(cz + d) on the projective line; point q is ∞"""
    q = field.q
    inf = q
    inv = field.inv
    images = []
    for z in range(q + 1):
        if z == inf:
            images.append(inf if c == 0 else int(field.mul[a, inv[c]]))
            continue
        numerator = int(field.add[field.mul[a, z], b])
        denominator = int(field.add[field.mul[c, z], d])
        images.append(inf if denominator == 0 else int(field.mul[numerator, inv[denominator]]))
    return Perm.from_images(images)


@dataclass
class PGL2:
    q: int
    group: PermGroup
    psl: PermGroup
    borel: PermGroup

    @property
    def infinity(self) -> int:
        return self.q

    def involutions_outside_psl(self) -> List[Perm]:
        return [g for g in self.group.elements if g.order == 2 and g not in self.psl]


def make_pgl2(q: int) -> PGL2:
    """PGL_2(q) with PSL_2(q) and the Borel subgroup fixing ∞"""
    field = FiniteField.of_order(q)
    w = field.primitive_element()
    one = 1
    translations = [mobius(field, one, one, 0, one)]
    if q == 9:
        translations.append(mobius(field, one, 3, 0, one))
    flip = mobius(field, 0, one, one, 0)
    scale = mobius(field, w, 0, 0, one)
    group = PermGroup(q + 1, translations + [scale, flip])

    minus_one = int(field.neg[1])
    square = mobius(field, int(field.mul[w, w]), 0, 0, one)
    psl = PermGroup(q + 1, translations + [square, mobius(field, 0, minus_one, one, 0)])

    borel = PermGroup.from_elements(q + 1, (g for g in group.elements if g.images[q] == q))
    logger.debug("PGL_2(%d): order %d, PSL order %d, Borel order %d", q, group.order, psl.order, borel.order)
    return PGL2(q, group, psl, borel)
