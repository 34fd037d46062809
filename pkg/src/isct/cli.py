"""
Command-line front end.

Problem files are line oriented ``key = value`` with ``#`` comments::

    n = 3
    degree = 5
    singularity = brieskorn_pham
    exponents = 2,2,2,2

Exit codes: 0 success, 1 a mathematical check failed, 2 input error,
3 enumeration guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import InputError, IsctError, ResourceGuardError
from .hypersurface import HypersurfaceFamily
from .invariants import (
    CHECK_GROUPS,
    PASS,
    InvariantReport,
    assemble_report,
    oracle_checks,
)
from .singularity import (
    BRIESKORN_PHAM,
    WEIGHTED_HOMOGENEOUS,
    SingularityGerm,
    milnor_number_wh,
)
from .zigzag import ZigZagModel

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3

_REQUIRED = {"n", "degree", "singularity"}
_PER_KIND = {
    BRIESKORN_PHAM: {"exponents"},
    WEIGHTED_HOMOGENEOUS: {"weights", "wdegree"},
}
_KNOWN = _REQUIRED | {"exponents", "weights", "wdegree"}


class ProblemFileError(InputError):
    pass


def _parse_int(text: str, where: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ProblemFileError(f"{where}: expected an integer, got {text.strip()!r}") from None


def _parse_int_list(text: str, where: str) -> list[int]:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise ProblemFileError(f"{where}: malformed integer list {text.strip()!r}")
    return [_parse_int(p, where) for p in parts]


def parse_problem(text: str, source: str = "<input>") -> HypersurfaceFamily:
    values: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ProblemFileError(f"{where}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KNOWN:
            raise ProblemFileError(f"{where}: unknown key {key!r}")
        if key in values:
            raise ProblemFileError(f"{where}: duplicate key {key!r} (first set on line {values[key][1]})")
        values[key] = (value, lineno)

    missing = sorted(_REQUIRED - values.keys())
    if missing:
        raise ProblemFileError(f"{source}: missing required key(s): {', '.join(missing)}")

    def at(key):
        return f"{source}:{values[key][1]}"

    kind = values["singularity"][0]
    if kind not in _PER_KIND:
        raise ProblemFileError(f"{at('singularity')}: unknown singularity {kind!r}")
    needed = _PER_KIND[kind]
    missing = sorted(needed - values.keys())
    if missing:
        raise ProblemFileError(f"{source}: {kind} needs key(s): {', '.join(missing)}")
    for key in sorted(values.keys() - _REQUIRED - needed):
        raise ProblemFileError(f"{at(key)}: key {key!r} does not apply to {kind}")

    n = _parse_int(values["n"][0], at("n"))
    if n < 3:
        raise ProblemFileError(f"{at('n')}: n must be >= 3")
    d = _parse_int(values["degree"][0], at("degree"))
    if d < 1:
        raise ProblemFileError(f"{at('degree')}: degree must be >= 1")

    try:
        if kind == BRIESKORN_PHAM:
            exps = _parse_int_list(values["exponents"][0], at("exponents"))
            if len(exps) != n + 1:
                raise ProblemFileError(f"{at('exponents')}: expected {n + 1} exponents, got {len(exps)}")
            if any(a < 2 for a in exps):
                raise ProblemFileError(f"{at('exponents')}: exponents must all be >= 2")
            germ = SingularityGerm.brieskorn_pham(exps)
        else:
            weights = _parse_int_list(values["weights"][0], at("weights"))
            if len(weights) != n + 1:
                raise ProblemFileError(f"{at('weights')}: expected {n + 1} weights, got {len(weights)}")
            germ = SingularityGerm.weighted_homogeneous(weights, _parse_int(values["wdegree"][0], at("wdegree")))
            milnor_number_wh(germ)
        return HypersurfaceFamily(n, d, germ)
    except ProblemFileError:
        raise
    except InputError as exc:
        raise ProblemFileError(f"{source}: {exc}") from exc


def parse_input(path) -> HypersurfaceFamily:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"{path}: cannot read ({exc.strerror})") from exc
    return parse_problem(text, str(path))


# -- rendering ------------------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _render_text(report: InvariantReport, groups) -> str:
    f = report.family
    lines = [
        f"family: n={f.n} degree={f.d} {f.germ.kind} {list(f.germ.exponents or f.germ.weights)}",
        f"mu={report.mu} mult_one={report.mult_one} rank(T-1)={report.rank_T_minus_1} "
        f"cyclotomic={ {m: e for m, e in sorted(report.cyclotomic.items())} }",
        f"smooth betti:   {report.smooth_betti}",
        f"HI betti:       {report.hi_betti}",
        f"IS hypercohom:  {report.is_hyper}",
        f"link (n-1, n):  {list(report.link_betti)}",
        f"milnor fiber:   {report.fiber_betti}",
        f"stalks at x:    {report.stalks.singular}  smooth: {report.stalks.smooth}",
    ]
    lines += _render_checks(report.checks_in(groups))
    return "\n".join(lines) + "\n"


def _render_checks(checks) -> list[str]:
    return [f"{c.verdict.upper():4}  {c.name}: {c.detail}" for c in checks]


# -- commands ---------------------------------------------------------------------


def _selected_groups(args) -> tuple[str, ...]:
    if args.all:
        return CHECK_GROUPS
    chosen = tuple(g for g in CHECK_GROUPS if getattr(args, g.replace("-", "_")))
    return chosen or CHECK_GROUPS


def _cmd_invariants(family, args):
    report = assemble_report(family)
    zz = None
    if args.zigzags and report.model is not None:
        zz = {k: v.to_dict() for k, v in report.model.objects().items()}
    code = EXIT_OK if report.ok else EXIT_CHECK
    if args.json:
        return report.as_dict(zigzags=zz), code
    return _render_text(report, CHECK_GROUPS), code


def _cmd_check(family, args):
    groups = _selected_groups(args)
    report = assemble_report(family)
    checks = report.checks_in(groups)
    code = EXIT_OK if all(c.verdict == PASS for c in checks) else EXIT_CHECK
    if args.json:
        return report.as_dict(groups=groups), code
    return "\n".join(_render_checks(checks)) + "\n", code


def _cmd_zigzag(family, args):
    from .singularity import monodromy_data

    model = ZigZagModel.build(monodromy_data(family.germ))
    obj = model.objects()[args.object]
    payload = {"family": family.as_dict(), "object": args.object, "zigzag": obj.to_dict()}
    return payload, EXIT_OK


def _cmd_oracle(family, args):
    from .singularity import monodromy_data

    md = monodromy_data(family.germ) if family.germ.kind == BRIESKORN_PHAM else None
    checks = oracle_checks(family, md)
    code = EXIT_OK if all(c.verdict == PASS for c in checks) else EXIT_CHECK
    if args.json:
        return {
            "family": family.as_dict(),
            "mu": milnor_number_wh(family.germ),
            "checks": [c.as_dict() for c in checks],
        }, code
    lines = [f"mu={milnor_number_wh(family.germ)}"] + _render_checks(checks)
    return "\n".join(lines) + "\n", code


_COMMANDS = {
    "invariants": _cmd_invariants,
    "check": _cmd_check,
    "zigzag": _cmd_zigzag,
    "oracle": _cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isct",
        description="Intersection-space invariants and zig-zag checks for "
        "projective hypersurfaces with one isolated singularity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("problems", nargs="+", metavar="FILE", help="problem file(s)")
        p.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
        return p

    p = common(sub.add_parser("invariants", help="compute all invariants"))
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.add_argument("--zigzags", action="store_true", help="include serialized zig-zags (with --json)")

    p = common(sub.add_parser("check", help="run verification suites"))
    p.add_argument("--json", action="store_true")
    p.add_argument("--all", action="store_true", help="every suite (default)")
    for g in CHECK_GROUPS:
        p.add_argument(f"--{g}", action="store_true")

    p = common(sub.add_parser("zigzag", help="serialize one zig-zag object as JSON"))
    p.add_argument("--object", choices=("nearby", "vanishing", "is", "dual-is"), default="is")

    p = common(sub.add_parser("oracle", help="run only the brute-force oracles"))
    p.add_argument("--json", action="store_true")
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = _COMMANDS[args.command]
    outputs = []
    code = EXIT_OK
    for path in args.problems:
        try:
            family = parse_input(path)
            out, c = handler(family, args)
        except ResourceGuardError as exc:
            print(f"isct: {exc}", file=sys.stderr)
            code = max(code, EXIT_GUARD)
            continue
        except InputError as exc:
            print(f"isct: {exc}", file=sys.stderr)
            code = max(code, EXIT_INPUT)
            continue
        except IsctError as exc:
            print(f"isct: {exc}", file=sys.stderr)
            code = max(code, EXIT_CHECK)
            continue
        outputs.append(out)
        code = max(code, c)

    if outputs:
        if isinstance(outputs[0], str):
            text = "\n".join(outputs)
        else:
            text = _dump(outputs[0] if len(args.problems) == 1 else outputs)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
