"""Betti numbers of a smooth degree-d hypersurface in P^(n+1)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import InputError
from .singularity import SingularityGerm


@dataclass(frozen=True)
class HypersurfaceFamily:
    """Degree-``d`` hypersurfaces in ``P^(n+1)`` degenerating to one with a
    single singular point of local type ``germ``."""

    n: int
    d: int
    germ: SingularityGerm

    def __post_init__(self):
        if self.n < 3:
            raise InputError(f"n must be >= 3 (got n = {self.n})")
        if self.d < 1:
            raise InputError(f"degree must be >= 1 (got {self.d})")
        if self.germ.n != self.n:
            raise InputError(
                f"expected {self.n + 1} variables in the germ for n = {self.n}, "
                f"got {self.germ.nvars}"
            )

    def as_dict(self) -> dict:
        return {"n": self.n, "degree": self.d, "singularity": self.germ.as_dict()}


def smooth_betti(n: int, d: int) -> list[int]:
    if n < 1 or d < 1:
        raise InputError(f"need n >= 1 and d >= 1, got n = {n}, d = {d}")
    b = [1 if i % 2 == 0 else 0 for i in range(2 * n + 1)]
    primitive, rem = divmod((d - 1) ** (n + 2) + (-1) ** n * (d - 1), d)
    assert rem == 0
    b[n] = primitive + (1 if n % 2 == 0 else 0)
    return b


def euler_characteristic_oracle(n: int, d: int) -> int:
    """``d * [h^n] (1 + h)^(n+2) / (1 + d h)``, by truncated series division."""
    if n < 1 or d < 1:
        raise InputError(f"need n >= 1 and d >= 1, got n = {n}, d = {d}")
    num = [Fraction(comb(n + 2, k)) for k in range(n + 1)]
    den = [Fraction(1), Fraction(d)]
    quot = []
    for k in range(n + 1):
        c = num[k] - (den[1] * quot[k - 1] if k else 0)
        quot.append(c / den[0])
    chi = d * quot[n]
    assert chi.denominator == 1
    return int(chi)
