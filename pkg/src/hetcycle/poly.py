"""Sparse multivariate polynomials with exact differentiation.

Germs in the chart are polynomial, so every derivative the construction
needs (gradients, Hessians, parameter velocities) comes from exact
symbolic differentiation of the monomial list.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np


def _canon(terms: Mapping[tuple[int, ...], float]) -> tuple[tuple[tuple[int, ...], float], ...]:
    return tuple(sorted((e, float(c)) for e, c in terms.items() if c != 0.0))


@dataclass(frozen=True)
class MPoly:
    """Polynomial in ``nvars`` real variables stored as ``{exponents: coeff}``."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], float], ...] = ()

    @classmethod
    def from_terms(cls, nvars: int, terms: Iterable[tuple[Sequence[int], float]]) -> "MPoly":
        acc: dict[tuple[int, ...], float] = {}
        for exps, coeff in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"monomial {exps} does not have {nvars} exponents")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in monomial {exps}")
            acc[exps] = acc.get(exps, 0.0) + float(coeff)
        return cls(nvars, _canon(acc))

    @classmethod
    def const(cls, nvars: int, value: float) -> "MPoly":
        return cls.from_terms(nvars, [((0,) * nvars, value)])

    @classmethod
    def var(cls, nvars: int, index: int, coeff: float = 1.0) -> "MPoly":
        exps = [0] * nvars
        exps[index] = 1
        return cls.from_terms(nvars, [(exps, coeff)])

    @classmethod
    def affine(cls, const: float, *slopes: float) -> "MPoly":
        """``const + sum(slopes[i] * var_i)``."""
        n = len(slopes)
        terms = [((0,) * n, const)]
        for i, s in enumerate(slopes):
            e = [0] * n
            e[i] = 1
            terms.append((e, s))
        return cls.from_terms(n, terms)

    # -- structure -----------------------------------------------------

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e, _ in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    # -- evaluation ----------------------------------------------------

    def __call__(self, *values: float) -> float:
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} arguments, got {len(values)}")
        total = 0.0
        for exps, coeff in self.terms:
            term = coeff
            for v, e in zip(values, exps):
                if e:
                    term *= v**e
            total += term
        return total

    def deriv(self, index: int, order: int = 1) -> "MPoly":
        if order == 0:
            return self
        acc: dict[tuple[int, ...], float] = {}
        for exps, coeff in self.terms:
            k = exps[index]
            if k < order:
                continue
            factor = 1
            for j in range(order):
                factor *= k - j
            new = list(exps)
            new[index] = k - order
            acc[tuple(new)] = acc.get(tuple(new), 0.0) + coeff * factor
        return MPoly(self.nvars, _canon(acc))

    def partial(self, *indices: int) -> "MPoly":
        p = self
        for i in indices:
            p = p.deriv(i)
        return p

    # -- algebra -------------------------------------------------------

    def _check(self, other: "MPoly") -> None:
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different variable counts")

    def __add__(self, other):
        if not isinstance(other, MPoly):
            other = MPoly.const(self.nvars, other)
        self._check(other)
        acc = self.as_dict()
        for e, c in other.terms:
            acc[e] = acc.get(e, 0.0) + c
        return MPoly(self.nvars, _canon(acc))

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other if isinstance(other, MPoly) else -float(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            other = float(other)
            return MPoly(self.nvars, _canon({e: c * other for e, c in self.terms}))
        self._check(other)
        acc: dict[tuple[int, ...], float] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0.0) + c1 * c2
        return MPoly(self.nvars, _canon(acc))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        out = MPoly.const(self.nvars, 1.0)
        for _ in range(k):
            out = out * self
        return out

    def substitute(self, index: int, replacement: "MPoly") -> "MPoly":
        """Replace variable ``index`` by ``replacement`` (same variable set)."""
        self._check(replacement)
        kmax = self.degree_in(index)
        powers = [MPoly.const(self.nvars, 1.0)]
        for _ in range(kmax):
            powers.append(powers[-1] * replacement)
        out = MPoly(self.nvars)
        for exps, coeff in self.terms:
            rest = list(exps)
            k = rest[index]
            rest[index] = 0
            out = out + MPoly.from_terms(self.nvars, [(rest, coeff)]) * powers[k]
        return out

    def restrict(self, index: int, value: float) -> "MPoly":
        """Fix variable ``index`` at ``value``; the variable count is kept."""
        acc: dict[tuple[int, ...], float] = {}
        for exps, coeff in self.terms:
            new = list(exps)
            k = new[index]
            new[index] = 0
            acc[tuple(new)] = acc.get(tuple(new), 0.0) + coeff * value**k
        return MPoly(self.nvars, _canon(acc))

    def univariate(self, index: int, fixed: Sequence[float]) -> np.polynomial.Polynomial:
        """Power-basis polynomial in variable ``index`` with the others fixed.

        ``fixed`` holds values for every variable; the entry at ``index`` is ignored.
        """
        coeffs = np.zeros(self.degree_in(index) + 1)
        for exps, coeff in self.terms:
            term = coeff
            for j, (v, e) in enumerate(zip(fixed, exps)):
                if j != index and e:
                    term *= v**e
            coeffs[exps[index]] += term
        return np.polynomial.Polynomial(coeffs)

    def to_list(self) -> list[list]:
        return [[list(e), c] for e, c in self.terms]

    @classmethod
    def from_list(cls, nvars: int, items: Iterable) -> "MPoly":
        return cls.from_terms(nvars, [(e, c) for e, c in items])


def shifted_monomial_grid(coeffs: Mapping[tuple[int, int], float], u: float, v: float) -> np.ndarray:
    """Expand ``sum c_ij (x-u)^i (y-v)^j`` into a power-basis 2D coefficient array."""
    if not coeffs:
        return np.zeros((1, 1))
    imax = max(i for i, _ in coeffs)
    jmax = max(j for _, j in coeffs)
    out = np.zeros((imax + 1, jmax + 1))
    for (i, j), c in coeffs.items():
        for k in range(i + 1):
            cx = comb(i, k) * (-u) ** (i - k)
            for l in range(j + 1):
                out[k, l] += c * cx * comb(j, l) * (-v) ** (j - l)
    return out
