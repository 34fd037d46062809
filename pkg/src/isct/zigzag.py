"""
Zig-zags: finite presentations of perverse sheaves on a space with one
isolated singular point ``x``.

A zig-zag is a local system of rank ``loc_rank`` on the smooth part together
with an exact sequence

    V-  --alpha-->  A  --beta-->  B  --gamma-->  V+

where ``V-`` and ``V+`` are the degree -1 and 0 boundary cohomology of the
local system near ``x``, ``A`` is the costalk and ``B`` the stalk at ``x``.
Maps act on column vectors, so ``alpha`` is ``dim A x dim V-``.

Morphisms carry a scalar for the rank-1 local system (acting as
``scalar * id`` on ``V-`` and ``V+``) and matrices ``pA``, ``pB``.

The geometric objects built here model the nearby-cycle sheaf of a
degeneration with local monodromy ``T``: ``A = B = Q^mu`` with
``beta = T - 1``; the vanishing-image object ``C = Image(T - 1)``; and the
intersection-space object, the cokernel of ``C -> nearby``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InputError, TheoremViolation
from .exactq import (
    RationalMatrix,
    _kernel_from_rref,
    _rref,
    contains_span,
    extend_to_basis,
    format_rational,
    parse_rational,
    quotient_projection,
    rank,
    rank_profile,
    same_span,
    solve_matrix,
)
from .singularity import MonodromyData

Matrix = RationalMatrix


@dataclass(frozen=True)
class ZigZag:
    loc_rank: int
    dim_v_minus: int
    dim_a: int
    dim_b: int
    dim_v_plus: int
    alpha: Matrix
    beta: Matrix
    gamma: Matrix

    def __post_init__(self):
        if self.loc_rank < 0:
            raise InputError(f"loc_rank must be >= 0, got {self.loc_rank}")
        expected = {
            "alpha": (self.dim_a, self.dim_v_minus),
            "beta": (self.dim_b, self.dim_a),
            "gamma": (self.dim_v_plus, self.dim_b),
        }
        for name, shape in expected.items():
            got = getattr(self, name).shape
            if got != shape:
                raise InputError(f"shape mismatch: {name} is {got[0]}x{got[1]}, expected {shape[0]}x{shape[1]}")

    @classmethod
    def from_maps(cls, loc_rank: int, alpha: Matrix, beta: Matrix, gamma: Matrix) -> "ZigZag":
        return cls(loc_rank, alpha.cols, alpha.rows, beta.rows, gamma.rows, alpha, beta, gamma)

    @classmethod
    def zero(cls, loc_rank: int = 0) -> "ZigZag":
        z = Matrix.zeros(0, 0)
        return cls(loc_rank, 0, 0, 0, 0, z, z, z)

    @property
    def signature(self) -> tuple[int, int, int, int]:
        return (self.dim_v_minus, self.dim_a, self.dim_b, self.dim_v_plus)

    def to_dict(self) -> dict:
        return {
            "loc_rank": self.loc_rank,
            "dims": list(self.signature),
            "alpha": self.alpha.to_strings(),
            "beta": self.beta.to_strings(),
            "gamma": self.gamma.to_strings(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ZigZag":
        try:
            vm, a, b, vp = (int(x) for x in data["dims"])
            return cls(
                int(data["loc_rank"]), vm, a, b, vp,
                Matrix(data["alpha"], ncols=vm),
                Matrix(data["beta"], ncols=a),
                Matrix(data["gamma"], ncols=b),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"malformed zig-zag record: {exc}") from exc


@dataclass(frozen=True)
class ZigZagMorphism:
    scalar: Fraction
    pA: Matrix
    pB: Matrix

    def __post_init__(self):
        object.__setattr__(self, "scalar", Fraction(self.scalar))

    def to_dict(self) -> dict:
        return {
            "scalar": format_rational(self.scalar),
            "pA_shape": list(self.pA.shape),
            "pA": self.pA.to_strings(),
            "pB_shape": list(self.pB.shape),
            "pB": self.pB.to_strings(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ZigZagMorphism":
        return cls(
            parse_rational(data["scalar"]),
            Matrix(data["pA"], ncols=int(data["pA_shape"][1])),
            Matrix(data["pB"], ncols=int(data["pB_shape"][1])),
        )

    def is_zero(self) -> bool:
        return not self.scalar and self.pA.is_zero() and self.pB.is_zero()


@dataclass
class Verdict:
    ok: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def detail(self) -> str:
        return "; ".join(self.failures) if self.failures else "ok"


# -- validation ---------------------------------------------------------------


def _exact_at(incoming: Matrix, outgoing: Matrix) -> str | None:
    """Check ``ker(outgoing) = im(incoming)``; return a reason on failure."""
    if not (outgoing @ incoming).is_zero():
        return "image not contained in kernel"
    kernel = rank_profile(outgoing).kernel_basis
    if not contains_span(incoming, kernel):
        return (f"kernel (dim {kernel.cols}) larger than image "
                f"(dim {rank(incoming)})")
    return None


def validate(Z: ZigZag) -> Verdict:
    failures = []
    if Z.loc_rank == 0 and (Z.dim_v_minus or Z.dim_v_plus):
        failures.append("local-system: boundary cohomology without a local system")
    reason = _exact_at(Z.alpha, Z.beta)
    if reason:
        failures.append(f"exact-at-A: {reason}")
    reason = _exact_at(Z.beta, Z.gamma)
    if reason:
        failures.append(f"exact-at-B: {reason}")
    return Verdict(not failures, failures)


def _require_valid(Z: ZigZag, what: str) -> ZigZag:
    v = validate(Z)
    if not v:
        raise TheoremViolation(f"{what} zig-zag is not exact: {v.detail}")
    return Z


# -- morphisms ----------------------------------------------------------------


def _has_scalar(Z1: ZigZag, Z2: ZigZag) -> bool:
    if Z1.loc_rank and Z2.loc_rank:
        if (Z1.dim_v_minus, Z1.dim_v_plus) != (Z2.dim_v_minus, Z2.dim_v_plus):
            raise InputError(
                "boundary cohomology dimensions differ between the two local systems: "
                f"{Z1.signature} vs {Z2.signature}"
            )
        return True
    return False


def _outer_maps(Z1: ZigZag, Z2: ZigZag, scalar) -> tuple[Matrix, Matrix]:
    if _has_scalar(Z1, Z2):
        return Matrix.scalar(Z1.dim_v_minus, scalar), Matrix.scalar(Z1.dim_v_plus, scalar)
    return Matrix.zeros(Z2.dim_v_minus, Z1.dim_v_minus), Matrix.zeros(Z2.dim_v_plus, Z1.dim_v_plus)


def is_morphism(f: ZigZagMorphism, Z1: ZigZag, Z2: ZigZag) -> bool:
    if f.pA.shape != (Z2.dim_a, Z1.dim_a) or f.pB.shape != (Z2.dim_b, Z1.dim_b):
        return False
    if f.scalar and not _has_scalar(Z1, Z2):
        return False
    pm, pp = _outer_maps(Z1, Z2, f.scalar)
    return (
        f.pA @ Z1.alpha == Z2.alpha @ pm
        and f.pB @ Z1.beta == Z2.beta @ f.pA
        and pp @ Z1.gamma == Z2.gamma @ f.pB
    )


def identity_morphism(Z: ZigZag) -> ZigZagMorphism:
    return ZigZagMorphism(1 if Z.loc_rank else 0, Matrix.identity(Z.dim_a), Matrix.identity(Z.dim_b))


def compose(g: ZigZagMorphism, f: ZigZagMorphism) -> ZigZagMorphism:
    """``g o f``."""
    return ZigZagMorphism(g.scalar * f.scalar, g.pA @ f.pA, g.pB @ f.pB)


def is_isomorphism(f: ZigZagMorphism, Z1: ZigZag, Z2: ZigZag) -> bool:
    if Z1.loc_rank != Z2.loc_rank or Z1.signature != Z2.signature:
        return False
    if not is_morphism(f, Z1, Z2):
        return False
    if Z1.loc_rank and not f.scalar:
        return False
    return rank(f.pA) == Z1.dim_a and rank(f.pB) == Z1.dim_b


# -- Hom spaces ---------------------------------------------------------------


def _hom_system(Z1: ZigZag, Z2: ZigZag):
    """Sparse equations of the three commuting squares.

    Unknowns, in order: the scalar (only when both sides carry a local
    system), ``pA`` row-major, ``pB`` row-major.
    """
    with_s = _has_scalar(Z1, Z2)
    off_a = 1 if with_s else 0
    off_b = off_a + Z2.dim_a * Z1.dim_a
    nvars = off_b + Z2.dim_b * Z1.dim_b

    def va(i, k):
        return off_a + i * Z1.dim_a + k

    def vb(i, k):
        return off_b + i * Z1.dim_b + k

    a1T = Z1.alpha.T._data
    b1T = Z1.beta.T._data
    g1 = Z1.gamma._data
    a2 = Z2.alpha._data
    b2 = Z2.beta._data
    g2 = Z2.gamma._data

    rows = []

    def emit(eq):
        eq = {k: v for k, v in eq.items() if v}
        if eq:
            rows.append(eq)

    # pA alpha1 = alpha2 (s I)
    for i in range(Z2.dim_a):
        for j in range(Z1.dim_v_minus):
            eq = {va(i, k): x for k, x in a1T[j].items()}
            if with_s and j in a2[i]:
                eq[0] = eq.get(0, 0) - a2[i][j]
            emit(eq)
    # pB beta1 = beta2 pA
    for i in range(Z2.dim_b):
        for j in range(Z1.dim_a):
            eq = {vb(i, k): x for k, x in b1T[j].items()}
            for k, x in b2[i].items():
                key = va(k, j)
                eq[key] = eq.get(key, 0) - x
            emit(eq)
    # (s I) gamma1 = gamma2 pB
    for i in range(Z2.dim_v_plus):
        for j in range(Z1.dim_b):
            eq = {}
            if with_s and j in g1[i]:
                eq[0] = g1[i][j]
            for k, x in g2[i].items():
                key = vb(k, j)
                eq[key] = eq.get(key, 0) - x
            emit(eq)
    return rows, nvars, with_s, off_a, off_b


def hom_dimension(Z1: ZigZag, Z2: ZigZag) -> int:
    rows, nvars, *_ = _hom_system(Z1, Z2)
    return nvars - len(_rref(rows, nvars))


def hom_space(Z1: ZigZag, Z2: ZigZag) -> list[ZigZagMorphism]:
    """Basis of ``Hom(Z1, Z2)`` (RREF kernel basis of the square equations)."""
    rows, nvars, with_s, off_a, off_b = _hom_system(Z1, Z2)
    if nvars == 0:
        return []
    K = _kernel_from_rref(_rref(rows, nvars), nvars)
    out = []
    for col in K.columns():
        scalar = col[0] if with_s else Fraction(0)
        pA = Matrix.from_entries(Z2.dim_a, Z1.dim_a, col[off_a:off_b])
        pB = Matrix.from_entries(Z2.dim_b, Z1.dim_b, col[off_b:])
        out.append(ZigZagMorphism(scalar, pA, pB))
    return out


def _combine(coeffs: Sequence[int], basis: Sequence[ZigZagMorphism]) -> ZigZagMorphism:
    s = Fraction(0)
    pA = Matrix.zeros(*basis[0].pA.shape)
    pB = Matrix.zeros(*basis[0].pB.shape)
    for c, f in zip(coeffs, basis):
        if c:
            s += c * f.scalar
            pA = pA + f.pA.scale(c)
            pB = pB + f.pB.scale(c)
    return ZigZagMorphism(s, pA, pB)


def _invertible_parts(f: ZigZagMorphism, loc_rank: int) -> bool:
    if loc_rank and not f.scalar:
        return False
    if not (f.pA.is_square() and f.pB.is_square()):
        return False
    return rank(f.pA) == f.pA.rows and rank(f.pB) == f.pB.rows


MAX_ISO_CANDIDATES = 20_000


def find_isomorphism(Z1: ZigZag, Z2: ZigZag, max_candidates: int = MAX_ISO_CANDIDATES) -> ZigZagMorphism | None:
    """First invertible morphism among the Hom basis, then small integer
    combinations (coefficients -2..2, lexicographic); ``None`` if none found."""
    if Z1.loc_rank != Z2.loc_rank or Z1.signature != Z2.signature:
        return None
    basis = hom_space(Z1, Z2)
    if not basis:
        # only the zero object is isomorphic to anything through an empty Hom
        if Z1.dim_a == Z1.dim_b == 0 and not Z1.loc_rank:
            return identity_morphism(Z1)
        return None
    for f in basis:
        if _invertible_parts(f, Z1.loc_rank):
            return f
    tried = 0
    for coeffs in itertools.product(range(-2, 3), repeat=len(basis)):
        if sum(1 for c in coeffs if c) < 2:
            continue
        tried += 1
        if tried > max_candidates:
            break
        f = _combine(coeffs, basis)
        if _invertible_parts(f, Z1.loc_rank):
            return f
    return None


def perverse_hom_dimension(Z1: ZigZag, Z2: ZigZag) -> int:
    """``dim Hom_Perv(K1, K2) = dim Hom_Z + dim coker(beta1) * dim ker(beta2)``."""
    coker1 = Z1.dim_b - rank(Z1.beta)
    ker2 = Z2.dim_a - rank(Z2.beta)
    return hom_dimension(Z1, Z2) + coker1 * ker2


# -- duality ------------------------------------------------------------------


def dual_zigzag(Z: ZigZag) -> ZigZag:
    D = ZigZag(
        Z.loc_rank, Z.dim_v_plus, Z.dim_b, Z.dim_a, Z.dim_v_minus,
        Z.gamma.T, Z.beta.T, Z.alpha.T,
    )
    return _require_valid(D, "dual")


# -- geometric objects ----------------------------------------------------------


def nearby_zigzag(md: MonodromyData) -> ZigZag:
    """``H^(n-1)(L) -> H^n(F, L) -> H^n(F) -> H^n(L)`` modelled with
    ``beta = T - 1`` on ``Q^mu``."""
    mu = md.mu
    beta = md.model - Matrix.identity(mu)
    prof = rank_profile(beta)
    alpha = prof.kernel_basis
    gamma = quotient_projection(mu, prof.image_basis).proj
    Z = ZigZag(1, alpha.cols, mu, mu, gamma.rows, alpha, beta, gamma)
    _require_valid(Z, "nearby")
    if alpha.cols != md.mult_one or gamma.rows != md.mult_one:
        raise TheoremViolation(
            f"boundary dimensions {alpha.cols}, {gamma.rows} differ from mult_one = {md.mult_one}"
        )
    return Z


def vanishing_image_zigzag(md: MonodromyData, nearby: ZigZag | None = None) -> tuple[ZigZag, ZigZagMorphism]:
    """The object ``C = (0, A, B)`` with ``A = B = Image(T - 1)`` and its
    inclusion into the nearby object."""
    N = nearby if nearby is not None else nearby_zigzag(md)
    basis = rank_profile(N.beta).image_basis
    r = basis.cols
    beta_c = solve_matrix(basis, N.beta @ basis)
    if beta_c is None:
        raise TheoremViolation("T - 1 does not preserve its own image")
    C = ZigZag(0, 0, r, r, 0, Matrix.zeros(r, 0), beta_c, Matrix.zeros(0, r))
    _require_valid(C, "vanishing-image")
    if rank(beta_c) != r:
        raise TheoremViolation("induced map on Image(T - 1) is not an isomorphism")
    iota = ZigZagMorphism(0, basis, basis)
    if not is_morphism(iota, C, N):
        raise TheoremViolation("inclusion of Image(T - 1) does not commute with beta")
    if rank(basis) != r:
        raise TheoremViolation("inclusion of Image(T - 1) is not injective")
    return C, iota


def cokernel_zigzag(nearby: ZigZag, iota: ZigZagMorphism) -> tuple[ZigZag, ZigZagMorphism]:
    """Cokernel of ``iota: C -> nearby``; returns the object and the quotient morphism.

    The induced ``beta`` must vanish and the induced ``alpha``, ``gamma``
    must be isomorphisms; anything else raises :class:`TheoremViolation`.
    """
    N = nearby
    r_a, r_b = iota.pA.cols, iota.pB.cols
    if rank(iota.pA) != r_a or rank(iota.pB) != r_b:
        raise InputError("iota must be injective on both slots")
    qa = quotient_projection(N.dim_a, iota.pA)
    qb = quotient_projection(N.dim_b, iota.pB)

    alpha_bar = qa.proj @ N.alpha
    beta_bar = qb.proj @ N.beta @ qa.complement_basis
    gamma_bar = N.gamma @ qb.complement_basis
    if beta_bar @ qa.proj != qb.proj @ N.beta:
        raise TheoremViolation("beta does not descend to the quotient")
    if gamma_bar @ qb.proj != N.gamma:
        raise TheoremViolation("gamma does not vanish on the image of iota")

    IS = ZigZag(N.loc_rank, N.dim_v_minus, qa.proj.rows, qb.proj.rows, N.dim_v_plus,
                alpha_bar, beta_bar, gamma_bar)
    _require_valid(IS, "intersection-space")
    if not beta_bar.is_zero():
        raise TheoremViolation("induced beta on the cokernel is not zero")
    for name, m in (("alpha", alpha_bar), ("gamma", gamma_bar)):
        if not m.is_square() or rank(m) != m.rows:
            raise TheoremViolation(f"induced {name} on the cokernel is not an isomorphism")

    proj = ZigZagMorphism(1 if N.loc_rank else 0, qa.proj, qb.proj)
    if not is_morphism(proj, N, IS):
        raise TheoremViolation("quotient map is not a zig-zag morphism")
    # column exactness of 0 -> C -> N -> IS -> 0 in the A and B slots
    for slot, inc, q, total in (("A", iota.pA, qa.proj, N.dim_a), ("B", iota.pB, qb.proj, N.dim_b)):
        if not (q @ inc).is_zero() or inc.cols + q.rows != total or rank(q) != q.rows:
            raise TheoremViolation(f"column {slot} of the cokernel diagram is not exact")
    return IS, proj


def _right_divide(target: Matrix, basis: Matrix) -> Matrix:
    """``target @ basis^-1`` for an invertible square ``basis``."""
    X = solve_matrix(basis.T, target.T)
    if X is None or rank(basis) != basis.rows:
        raise TheoremViolation("chosen vectors do not form a basis")
    return X.T


def construct_splitting(nearby: ZigZag, vanishing: ZigZag, iota: ZigZagMorphism) -> ZigZagMorphism:
    """A retraction ``sigma: nearby -> C`` of ``iota`` built from explicit bases.

    ``sigma_a`` kills a basis of ``ker(beta)`` and a chosen complement, and
    inverts ``iota_a`` on its image. ``sigma_b`` sends ``iota_b beta'(a_j)``
    to ``beta'(a_j)`` and kills ``beta`` of the complement plus standard
    vectors filling out a basis.
    """
    N, C = nearby, vanishing
    mu_a, mu_b, r = N.dim_a, N.dim_b, C.dim_a
    iota_a, iota_b, beta_c = iota.pA, iota.pB, C.beta

    ker = rank_profile(N.beta).kernel_basis
    m = ker.cols
    if rank(ker.hstack(iota_a)) != m + r:
        raise TheoremViolation("ker(beta) meets the image of iota_a")
    q = quotient_projection(mu_a, ker)
    # extend q(iota_a(a_j)) to a basis of Q^mu / ker(beta)
    _, extra = extend_to_basis(q.proj @ iota_a)
    lifts = q.complement_basis @ Matrix.identity(q.proj.rows).select_columns(extra)
    basis_a = ker.hstack(iota_a, lifts)
    if not basis_a.is_square() or rank(basis_a) != mu_a:
        raise TheoremViolation("basis of the A slot is incomplete")
    target_a = Matrix.zeros(r, m).hstack(Matrix.identity(r), Matrix.zeros(r, lifts.cols))
    sigma_a = _right_divide(target_a, basis_a)

    images = N.beta @ iota_a  # = iota_b beta'
    if images != iota_b @ beta_c:
        raise TheoremViolation("iota does not commute with beta")
    partial = images.hstack(N.beta @ lifts)
    basis_b, extra_b = extend_to_basis(partial)
    target_b = beta_c.hstack(Matrix.zeros(r, lifts.cols + len(extra_b)))
    sigma_b = _right_divide(target_b, basis_b)

    sigma = ZigZagMorphism(0, sigma_a, sigma_b)
    if not (sigma_a @ iota_a).is_identity() or not (sigma_b @ iota_b).is_identity():
        raise TheoremViolation("sigma o iota is not the identity")
    if sigma_b @ N.beta != beta_c @ sigma_a:
        raise TheoremViolation("sigma does not commute with beta")
    if not is_morphism(sigma, N, C):
        raise TheoremViolation("sigma is not a zig-zag morphism")
    return sigma


def image_of_iota_b_equals_image_of_beta(nearby: ZigZag, iota: ZigZagMorphism) -> bool:
    return same_span(iota.pB, rank_profile(nearby.beta).image_basis)


@dataclass(frozen=True)
class ZigZagModel:
    """Every zig-zag attached to one monodromy operator."""

    nearby: ZigZag
    vanishing: ZigZag
    iota: ZigZagMorphism
    intersection_space: ZigZag
    proj: ZigZagMorphism

    @classmethod
    def build(cls, md: MonodromyData) -> "ZigZagModel":
        N = nearby_zigzag(md)
        C, iota = vanishing_image_zigzag(md, N)
        IS, proj = cokernel_zigzag(N, iota)
        return cls(N, C, iota, IS, proj)

    def objects(self) -> dict[str, ZigZag]:
        return {
            "nearby": self.nearby,
            "vanishing": self.vanishing,
            "is": self.intersection_space,
            "dual-is": dual_zigzag(self.intersection_space),
        }
