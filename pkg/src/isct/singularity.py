"""
Local invariants of an isolated weighted-homogeneous hypersurface germ.

For a Brieskorn-Pham germ ``x_0^a_0 + ... + x_n^a_n`` the Jacobian algebra is
monomial, the monodromy eigenvalues are ``exp(2 pi i sum j_k / a_k)`` with
``1 <= j_k <= a_k - 1``, and the monodromy is semisimple. The characteristic
polynomial is therefore a product of cyclotomic polynomials, and a block
diagonal matrix of companion blocks is a rational model for ``T_x``.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InputError, ResourceGuardError, TheoremViolation
from .exactq import RationalMatrix, rank

BRIESKORN_PHAM = "brieskorn_pham"
WEIGHTED_HOMOGENEOUS = "weighted_homogeneous"

DEFAULT_GUARD = 10**6
GUARD_ENV = "ISCT_GUARD_TUPLES"


def tuple_guard() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_GUARD
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputError(f"{GUARD_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InputError(f"{GUARD_ENV} must be positive, got {value}")
    return value


def _check_guard(count: int, guard: int | None) -> None:
    limit = tuple_guard() if guard is None else guard
    if count > limit:
        raise ResourceGuardError(
            f"enumeration of {count} tuples exceeds the guard of {limit} "
            f"(set {GUARD_ENV} to raise it)"
        )


@dataclass(frozen=True)
class SingularityGerm:
    kind: str
    exponents: tuple[int, ...] = ()
    weights: tuple[int, ...] = ()
    wdegree: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(self.exponents))
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.kind == BRIESKORN_PHAM:
            if not self.exponents:
                raise InputError("brieskorn_pham germ needs exponents")
            if any(a < 2 for a in self.exponents):
                raise InputError(f"exponents must all be >= 2, got {list(self.exponents)}")
        elif self.kind == WEIGHTED_HOMOGENEOUS:
            if not self.weights or self.wdegree is None:
                raise InputError("weighted_homogeneous germ needs weights and wdegree")
            if self.wdegree < 1:
                raise InputError(f"wdegree must be positive, got {self.wdegree}")
            for w in self.weights:
                if not 0 < w < self.wdegree:
                    raise InputError(f"weights must satisfy 0 < w < wdegree, got {w}")
        else:
            raise InputError(f"unknown singularity kind {self.kind!r}")
        if self.n < 3:
            raise InputError(f"n must be >= 3 (got n = {self.n})")

    @classmethod
    def brieskorn_pham(cls, exponents: Sequence[int]) -> "SingularityGerm":
        return cls(BRIESKORN_PHAM, exponents=tuple(exponents))

    @classmethod
    def weighted_homogeneous(cls, weights: Sequence[int], wdegree: int) -> "SingularityGerm":
        return cls(WEIGHTED_HOMOGENEOUS, weights=tuple(weights), wdegree=wdegree)

    @property
    def nvars(self) -> int:
        return len(self.exponents) if self.kind == BRIESKORN_PHAM else len(self.weights)

    @property
    def n(self) -> int:
        return self.nvars - 1

    def as_dict(self) -> dict:
        if self.kind == BRIESKORN_PHAM:
            return {"kind": self.kind, "exponents": list(self.exponents)}
        return {"kind": self.kind, "weights": list(self.weights), "wdegree": self.wdegree}


# -- Milnor number ----------------------------------------------------------


def milnor_number_wh(germ: SingularityGerm) -> int:
    """``prod (d - w_i) / w_i``; for Brieskorn-Pham, ``prod (a_i - 1)``."""
    if germ.kind == BRIESKORN_PHAM:
        return math.prod(a - 1 for a in germ.exponents)
    d = germ.wdegree
    mu = math.prod(Fraction(d - w, w) for w in germ.weights)
    if mu.denominator != 1:
        raise InputError(
            f"not a valid weighted-homogeneous isolated singularity "
            f"(weights {list(germ.weights)}, degree {d} give mu = {mu})"
        )
    return int(mu)


def milnor_number_bp_oracle(exponents: Sequence[int], guard: int | None = None) -> int:
    """Count monomials outside the Jacobian ideal ``(x_i^(a_i - 1))`` one by one."""
    exponents = list(exponents)
    _check_guard(math.prod(a - 1 for a in exponents), guard)
    count = 0
    for _ in itertools.product(*(range(a - 1) for a in exponents)):
        count += 1
    return count


# -- eigenvalues ------------------------------------------------------------


def bp_eigenvalue_residues(exponents: Sequence[int], guard: int | None = None) -> Counter:
    """Multiset ``{frac(sum j_i / a_i)}`` over ``1 <= j_i <= a_i - 1``.

    Residue ``r`` stands for the eigenvalue ``exp(2 pi i r)``. Computed as an
    iterated convolution over ``Z / lcm(a)``.
    """
    exponents = list(exponents)
    if any(a < 2 for a in exponents):
        raise InputError(f"exponents must all be >= 2, got {exponents}")
    _check_guard(math.prod(a - 1 for a in exponents), guard)
    L = math.lcm(*exponents) if exponents else 1
    counts = Counter({0: 1})
    for a in exponents:
        step = L // a
        nxt: Counter = Counter()
        for k, c in counts.items():
            for j in range(1, a):
                nxt[(k + j * step) % L] += c
        counts = nxt
    return Counter({Fraction(k, L): c for k, c in sorted(counts.items())})


def euler_phi(m: int) -> int:
    result = m
    p, k = 2, m
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            result -= result // p
        p += 1
    if k > 1:
        result -= result // k
    return result


def cyclotomic_factorization(residues: Mapping[Fraction, int]) -> dict[int, int]:
    """Group residues into Galois orbits ``{k/m : gcd(k, m) = 1}``.

    Returns ``{m: e_m}`` with ``char(T) = prod Phi_m^e_m``; raises if some orbit
    is unevenly populated (the multiset would not be defined over Q).
    """
    by_den: dict[int, Counter] = {}
    for r, c in residues.items():
        r = Fraction(r)
        if not 0 <= r < 1:
            raise InputError(f"residue {r} outside [0, 1)")
        if c <= 0:
            continue
        by_den.setdefault(r.denominator, Counter())[r.numerator] += c
    out: dict[int, int] = {}
    for m in sorted(by_den):
        orbit = [k for k in range(m) if math.gcd(k, m) == 1]
        mults = {by_den[m].get(k, 0) for k in orbit}
        if len(mults) != 1:
            raise InputError(
                f"eigenvalue multiset not defined over Q "
                f"(denominator {m}: multiplicities {dict(sorted(by_den[m].items()))})"
            )
        out[m] = mults.pop()
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of ``Phi_m``, lowest degree first."""
    if m < 1:
        raise InputError(f"cyclotomic index must be positive, got {m}")
    num = [-1] + [0] * (m - 1) + [1]  # t^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _exact_divide(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(q) - 1, -1, -1):
        c, rem = divmod(num[i + len(den) - 1], lead)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        q[i] = c
        for k, dk in enumerate(den):
            num[i + k] -= c * dk
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return q


def companion_matrix(coeffs: Sequence[int]) -> RationalMatrix:
    """Companion matrix of the monic polynomial with ``coeffs`` (low to high).

    Ones on the subdiagonal and ``-c_0 .. -c_(k-1)`` in the last column, so the
    characteristic polynomial is the input polynomial.
    """
    k = len(coeffs) - 1
    if k < 1 or coeffs[-1] != 1:
        raise InputError("companion matrix needs a monic polynomial of degree >= 1")
    rows = [[0] * k for _ in range(k)]
    for i in range(1, k):
        rows[i][i - 1] = 1
    for i in range(k):
        rows[i][k - 1] = -coeffs[i]
    return RationalMatrix(rows)


def monodromy_model(cyclotomic: Mapping[int, int]) -> RationalMatrix:
    """Block diagonal: ``e_m`` companion blocks of ``Phi_m``, ``m`` ascending."""
    blocks = []
    for m in sorted(cyclotomic):
        e = cyclotomic[m]
        if e < 0:
            raise InputError(f"negative multiplicity for Phi_{m}")
        if e:
            block = companion_matrix(cyclotomic_polynomial(m))
            blocks.extend([block] * e)
    return RationalMatrix.block_diagonal(blocks)


@dataclass(frozen=True)
class MonodromyData:
    mu: int
    residues: Counter = field(compare=False)
    cyclotomic: dict[int, int]
    mult_one: int
    rank_T_minus_1: int
    model: RationalMatrix = field(compare=False, repr=False)

    def validate(self) -> None:
        if sum(self.residues.values()) != self.mu:
            raise TheoremViolation(f"|residues| = {sum(self.residues.values())} != mu = {self.mu}")
        total = sum(e * euler_phi(m) for m, e in self.cyclotomic.items())
        if total != self.mu:
            raise TheoremViolation(f"sum e_m phi(m) = {total} != mu = {self.mu}")
        if self.mult_one != self.cyclotomic.get(1, 0):
            raise TheoremViolation("mult_one differs from e_1")
        if self.mult_one != self.residues.get(Fraction(0), 0):
            raise TheoremViolation("mult_one differs from the multiplicity of residue 0")
        if self.model.shape != (self.mu, self.mu):
            raise TheoremViolation(f"model has shape {self.model.shape}, expected mu x mu")
        r = rank(self.model - RationalMatrix.identity(self.mu))
        if r != self.mu - self.mult_one or r != self.rank_T_minus_1:
            raise TheoremViolation(f"rank(T - 1) = {r} but mu - e_1 = {self.mu - self.mult_one}")
        if rank(self.model) != self.mu:
            raise TheoremViolation("monodromy model is singular")


def _assemble(mu: int, residues: Counter, cyclotomic: dict[int, int]) -> MonodromyData:
    e1 = cyclotomic.get(1, 0)
    md = MonodromyData(
        mu=mu,
        residues=residues,
        cyclotomic=cyclotomic,
        mult_one=e1,
        rank_T_minus_1=mu - e1,
        model=monodromy_model(cyclotomic),
    )
    md.validate()
    return md


def monodromy_data(germ: SingularityGerm, guard: int | None = None) -> MonodromyData:
    if germ.kind != BRIESKORN_PHAM:
        raise InputError(
            "eigenvalue data needs a brieskorn_pham germ; weighted_homogeneous "
            "input supports the Milnor number only"
        )
    residues = bp_eigenvalue_residues(germ.exponents, guard)
    return _assemble(milnor_number_wh(germ), residues, cyclotomic_factorization(residues))


def monodromy_from_cyclotomic(cyclotomic: Mapping[int, int]) -> MonodromyData:
    """Monodromy data for a prescribed characteristic polynomial ``prod Phi_m^e_m``."""
    cyc = {m: e for m, e in sorted(cyclotomic.items()) if e}
    residues: Counter = Counter()
    for m, e in cyc.items():
        for k in range(m):
            if math.gcd(k, m) == 1:
                residues[Fraction(k, m)] += e
    mu = sum(e * euler_phi(m) for m, e in cyc.items())
    return _assemble(mu, residues, cyc)
