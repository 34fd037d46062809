"""
Global invariants of the singular hypersurface and the report that collects
them together with every structural check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError, IsctError, TheoremViolation
from .exactq import RationalMatrix, rank
from .hypersurface import HypersurfaceFamily, euler_characteristic_oracle, smooth_betti
from .singularity import (
    BRIESKORN_PHAM,
    MonodromyData,
    bp_eigenvalue_residues,
    milnor_number_bp_oracle,
    milnor_number_wh,
    monodromy_data,
)
from .zigzag import (
    ZigZagModel,
    construct_splitting,
    dual_zigzag,
    find_isomorphism,
    image_of_iota_b_equals_image_of_beta,
    is_isomorphism,
    validate,
)

PASS = "pass"
FAIL = "fail"

CHECK_GROUPS = ("exactness", "splitting", "self-duality", "poincare", "oracles")


def _monodromy(family: HypersurfaceFamily, md: MonodromyData | None) -> MonodromyData:
    return md if md is not None else monodromy_data(family.germ)


def hi_betti(family: HypersurfaceFamily, md: MonodromyData | None = None) -> list[int]:
    """Betti numbers of the intersection space: smooth Betti numbers with
    ``rk(T - 1)`` removed in the middle degree and nothing in the top degree."""
    md = _monodromy(family, md)
    b = smooth_betti(family.n, family.d)
    middle = b[family.n] - md.rank_T_minus_1
    if middle < 0:
        raise InputError(
            f"singularity incompatible with smooth Betti numbers "
            f"(b_{family.n} = {b[family.n]} < rk(T - 1) = {md.rank_T_minus_1})"
        )
    b[family.n] = middle
    b[2 * family.n] = 0
    return b


def is_hypercohomology(family: HypersurfaceFamily, md: MonodromyData | None = None) -> list[int]:
    """Dimensions of ``H^i(X; IS_X[-n])``: as :func:`hi_betti`, but ``Q`` in degree ``2n``."""
    b = hi_betti(family, md)
    b[2 * family.n] = 1
    return b


def link_middle_betti(md: MonodromyData) -> tuple[int, int]:
    k = md.mu - md.rank_T_minus_1
    return (k, k)


def fiber_betti(md: MonodromyData, n: int) -> list[int]:
    b = [0] * (n + 1)
    b[0] = 1
    b[n] += md.mu
    return b


@dataclass(frozen=True)
class StalkTable:
    singular: dict[int, int]
    smooth: dict[int, int]

    def as_dict(self) -> dict:
        return {
            "singular": {str(r): d for r, d in self.singular.items()},
            "smooth": {str(r): d for r, d in self.smooth.items()},
        }


def stalk_table(md: MonodromyData, n: int) -> StalkTable:
    return StalkTable(singular={-n: 1, 0: md.mu - md.rank_T_minus_1}, smooth={-n: 1})


def is_palindromic(v: list[int]) -> bool:
    return v == v[::-1]


@dataclass
class Check:
    name: str
    verdict: str
    detail: str

    @property
    def group(self) -> str:
        return self.name.split(".", 1)[0]

    def as_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "detail": self.detail}


@dataclass
class InvariantReport:
    family: HypersurfaceFamily
    mu: int
    mult_one: int
    rank_T_minus_1: int
    cyclotomic: dict[int, int]
    smooth_betti: list[int]
    hi_betti: list[int]
    is_hyper: list[int]
    link_betti: tuple[int, int]
    fiber_betti: list[int]
    stalks: StalkTable
    checks: list[Check] = field(default_factory=list)
    model: ZigZagModel | None = None

    @property
    def ok(self) -> bool:
        return all(c.verdict == PASS for c in self.checks)

    def checks_in(self, groups) -> list[Check]:
        groups = set(groups)
        return [c for c in self.checks if c.group in groups]

    def as_dict(self, zigzags: dict | None = None, groups=CHECK_GROUPS) -> dict:
        out = {
            "family": self.family.as_dict(),
            "monodromy": {
                "mu": self.mu,
                "mult_one": self.mult_one,
                "rank_T_minus_1": self.rank_T_minus_1,
                "cyclotomic": {str(m): e for m, e in sorted(self.cyclotomic.items())},
            },
            "betti": {
                "smooth": self.smooth_betti,
                "hi": self.hi_betti,
                "is_hyper": self.is_hyper,
                "link": list(self.link_betti),
                "fiber": self.fiber_betti,
            },
            "stalks": self.stalks.as_dict(),
        }
        if zigzags is not None:
            out["zigzags"] = zigzags
        out["checks"] = [c.as_dict() for c in self.checks_in(groups)]
        return out


class _Checks:
    def __init__(self):
        self.items: list[Check] = []

    def add(self, name: str, ok: bool, detail: str) -> bool:
        self.items.append(Check(name, PASS if ok else FAIL, detail))
        return ok

    def run(self, name: str, fn) -> None:
        """Record ``fn() -> (ok, detail)``; a raised error becomes a failure."""
        try:
            ok, detail = fn()
        except IsctError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        self.add(name, ok, detail)


def oracle_checks(family: HypersurfaceFamily, md: MonodromyData | None = None) -> list[Check]:
    """Brute-force cross-checks; independent of the zig-zag layer."""
    c = _Checks()
    n, d = family.n, family.d

    def euler():
        b = smooth_betti(n, d)
        alt = sum((-1) ** i * x for i, x in enumerate(b))
        chi = euler_characteristic_oracle(n, d)
        return alt == chi, f"alternating Betti sum {alt}, Chern-series oracle {chi}"

    c.run("oracles.euler", euler)
    if family.germ.kind != BRIESKORN_PHAM:
        return c.items

    def milnor():
        formula = milnor_number_wh(family.germ)
        counted = milnor_number_bp_oracle(family.germ.exponents)
        return formula == counted, f"product formula {formula}, monomial count {counted}"

    def residues():
        got = sum(bp_eigenvalue_residues(family.germ.exponents).values())
        mu = milnor_number_wh(family.germ)
        return got == mu, f"{got} eigenvalue residues for mu = {mu}"

    c.run("oracles.milnor", milnor)
    c.run("oracles.residue-count", residues)
    if md is not None:
        def rank_oracle():
            r = rank(md.model - RationalMatrix.identity(md.mu))
            return (r == md.mu - md.mult_one,
                    f"rank(T - 1) = {r}, mu - e_1 = {md.mu - md.mult_one}")

        c.run("oracles.monodromy-rank", rank_oracle)
    return c.items


def assemble_report(family: HypersurfaceFamily) -> InvariantReport:
    """Compute every invariant and run every check.

    Input and resource errors propagate; mathematical failures are recorded
    as failed checks instead of being raised.
    """
    md = monodromy_data(family.germ)
    n = family.n
    smooth = smooth_betti(n, family.d)
    hi = hi_betti(family, md)
    is_h = is_hypercohomology(family, md)
    link = link_middle_betti(md)
    report = InvariantReport(
        family=family,
        mu=md.mu,
        mult_one=md.mult_one,
        rank_T_minus_1=md.rank_T_minus_1,
        cyclotomic=dict(md.cyclotomic),
        smooth_betti=smooth,
        hi_betti=hi,
        is_hyper=is_h,
        link_betti=link,
        fiber_betti=fiber_betti(md, n),
        stalks=stalk_table(md, n),
    )
    c = _Checks()

    try:
        model = ZigZagModel.build(md)
    except IsctError as exc:
        c.add("exactness.construction", False, f"{type(exc).__name__}: {exc}")
        model = None
    report.model = model

    if model is not None:
        N, C, IS = model.nearby, model.vanishing, model.intersection_space

        def exact(name, Z):
            def fn():
                v = validate(Z)
                return v.ok, f"dims {list(Z.signature)}: {v.detail}"
            c.run(f"exactness.{name}", fn)

        exact("nearby", N)
        exact("vanishing", C)
        exact("is", IS)
        c.run("exactness.dual-nearby", lambda: (validate(dual_zigzag(N)).ok, "dual of nearby"))
        c.run("exactness.dual-is", lambda: (validate(dual_zigzag(IS)).ok, "dual of intersection-space"))
        c.add("exactness.nearby-ends",
              rank(N.alpha) == N.dim_v_minus and rank(N.gamma) == N.dim_v_plus,
              "alpha injective, gamma surjective")
        c.add("exactness.is-shape",
              IS.beta.is_zero() and rank(IS.alpha) == IS.dim_a == IS.dim_v_minus
              and rank(IS.gamma) == IS.dim_b == IS.dim_v_plus,
              f"beta = 0, alpha and gamma invertible; dims {list(IS.signature)}")
        c.add("exactness.image-iota-b",
              image_of_iota_b_equals_image_of_beta(N, model.iota),
              "Image(iota_b) = Image(beta)")

        def splitting():
            sigma = construct_splitting(N, C, model.iota)
            ok = (sigma.pA @ model.iota.pA).is_identity() and (sigma.pB @ model.iota.pB).is_identity()
            return ok, f"sigma o iota = id on Q^{C.dim_a}"

        c.run("splitting.sigma-iota", splitting)
        c.add("splitting.dimensions", C.dim_a + IS.dim_a == md.mu,
              f"{C.dim_a} + {IS.dim_a} = {C.dim_a + IS.dim_a}, mu = {md.mu}")
        c.add("splitting.trivial-monodromy",
              md.rank_T_minus_1 != 0 or (C.dim_a == C.dim_b == 0 and hi[:-1] == smooth[:-1]),
              "trivial local monodromy gives C = 0 and unchanged Betti numbers"
              if md.rank_T_minus_1 == 0 else "not applicable (T != 1)")

        def self_dual():
            D = dual_zigzag(IS)
            f = find_isomorphism(IS, D)
            if f is None:
                return False, "no isomorphism Z(IS) -> D(Z(IS)) found"
            return is_isomorphism(f, IS, D), f"isomorphism found, scalar {f.scalar}"

        c.run("self-duality.is", self_dual)
        c.add("self-duality.stalks",
              IS.dim_a == md.mult_one == report.stalks.singular[0] == link[0],
              f"A-slot {IS.dim_a}, mult_one {md.mult_one}, stalk {report.stalks.singular[0]}, "
              f"link {link[0]}")

    c.add("poincare.is-hyper", is_palindromic(is_h), f"{is_h}")
    c.add("poincare.smooth", is_palindromic(smooth), f"{smooth}")
    c.add("poincare.hi-vs-is",
          hi[:-1] == is_h[:-1] and hi[-1] == 0 and is_h[-1] == 1,
          "HI and IS hypercohomology agree below degree 2n")
    c.add("poincare.middle-degree",
          hi[n] + md.rank_T_minus_1 == smooth[n],
          f"{hi[n]} + {md.rank_T_minus_1} = {smooth[n]}")
    c.items.extend(oracle_checks(family, md))
    report.checks = c.items
    return report


def assert_report(report: InvariantReport) -> None:
    bad = [ch for ch in report.checks if ch.verdict != PASS]
    if bad:
        raise TheoremViolation("; ".join(f"{ch.name}: {ch.detail}" for ch in bad))
