"""Command-line front end.

Scene files are JSON documents validated against the shipped schema; every
subcommand emits either the JSON contract (default) or an aligned text
rendering.  Exit codes: 0 success, 2 unparseable input, 3 domain error,
4 failed self-check.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from logsod.complexes import (
    SimplicialChart,
    SncComplex,
    canonical_root_pair,
    nc_from_json,
    snc_from_divisors,
    strictify,
)
from logsod.decompose import (
    InvariantAssignment,
    decompose_finite,
    decompose_nc,
    decompose_simplicial_complexified,
    etale_filter,
)
from logsod.errors import LogsodError, ParseError
from logsod.monoids import (
    ToricMonoid,
    canonical_kummer_extension,
    extremal_rays,
    face_strata,
    indecomposables,
    is_saturated,
    is_simplicial,
)
from logsod.psod import psod_infinite, psod_nc, psod_simplicial, psod_snc
from logsod.selfcheck import run_selfcheck

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_SELFCHECK = 4

_EPILOG = (
    "Scene files are validated against schemas/scene.schema.json (also shipped "
    "under docs/schemas/). Pass '-' to read the scene from stdin. "
    "LOGSOD_SEEDLESS=1 (the default) forbids nondeterministic iteration order; "
    "this implementation is unconditionally deterministic, so the variable is "
    "accepted and has no further effect."
)

_schema_cache: dict | None = None


def _scene_schema() -> dict:
    global _schema_cache
    if _schema_cache is None:
        text = (
            resources.files("logsod")
            .joinpath("schemas/scene.schema.json")
            .read_text(encoding="utf-8")
        )
        _schema_cache = json.loads(text)
    return _schema_cache


def load_scene(path: str) -> dict:
    """Read and schema-validate a scene file ('-' reads stdin)."""
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read scene file: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"scene is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(data, _scene_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "top level"
        raise ParseError(f"scene fails schema validation at {where}: {exc.message}") from exc
    return data


def _build_monoid(data: dict) -> ToricMonoid:
    return ToricMonoid(data["rank"], tuple(tuple(g) for g in data["generators"]))


def _build_snc(data: dict) -> SncComplex:
    return snc_from_divisors(
        data["components"], data["nonempty"], data.get("empty", ())
    )


def _build_chart(data: dict) -> SimplicialChart:
    return SimplicialChart(tuple(_build_monoid(c) for c in data["charts"]))


def _scene_assignment(data: dict) -> InvariantAssignment:
    if "assignment" not in data:
        raise ParseError("scene carries no invariant assignment")
    return InvariantAssignment.from_json(data["assignment"])


def _check_assignment_keys(v: InvariantAssignment, cx: SncComplex) -> None:
    known = {"X"} | {cx.stratum_name(s) for s in cx.strata(proper=True)}
    unknown = sorted(set(v.values) - known)
    if unknown:
        raise ParseError(
            f"assignment references unknown strata: {', '.join(unknown)}"
        )


def _parse_level(raw) -> int | tuple[int, ...]:
    if raw is None:
        return None
    if isinstance(raw, int):
        return raw
    if isinstance(raw, (list, tuple)):
        return tuple(int(x) for x in raw)
    try:
        parts = [p for p in str(raw).split(",") if p.strip()]
        values = [int(p) for p in parts]
    except ValueError as exc:
        raise ParseError(f"bad level {raw!r}: {exc}") from exc
    if not values:
        raise ParseError(f"bad level {raw!r}")
    return values[0] if len(values) == 1 else tuple(values)


def _option(args, data: dict, name: str):
    flag = getattr(args, name, None)
    if flag is not None:
        return flag
    return data.get("options", {}).get(name)


def _emit(args, payload: dict, text: str) -> None:
    body = (
        json.dumps(payload, indent=2, ensure_ascii=False)
        if args.format == "json"
        else text
    )
    body += "\n"
    if args.output:
        Path(args.output).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)


def _frac(x: Fraction) -> str:
    return str(x)


def _vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def cmd_monoid(args) -> int:
    data = load_scene(args.scene)
    if data["kind"] != "monoid":
        raise ParseError("monoid command needs a monoid scene")
    m = _build_monoid(data)
    rays = extremal_rays(m)
    simplicial = is_simplicial(m)
    faces = face_strata(m)
    payload = {
        "rank": m.ambient_rank,
        "generators": [list(g) for g in m.generators],
        "rays": [list(r) for r in rays],
        "simplicial": simplicial,
        "saturated": is_saturated(m),
        "indecomposables": [list(q) for q in indecomposables(m)],
        "faces": [[list(r) for r in f] for f in faces.elements],
    }
    lines = [
        f"rank: {m.ambient_rank}",
        "generators: " + "; ".join(_vec(g) for g in m.generators),
        "rays: " + "; ".join(_vec(r) for r in rays),
        f"simplicial: {str(simplicial).lower()}",
        f"saturated: {str(payload['saturated']).lower()}",
        "indecomposables: " + "; ".join(_vec(q) for q in payload["indecomposables"]),
        f"faces: {len(faces.elements)}",
    ]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_kummer(args) -> int:
    data = load_scene(args.scene)
    if data["kind"] != "monoid":
        raise ParseError("kummer command needs a monoid scene")
    ext = canonical_kummer_extension(_build_monoid(data))
    payload = ext.to_json()
    lines = [
        "basis: "
        + "; ".join(
            "(" + ", ".join(_frac(x) for x in v) + ")" for v in ext.target_basis
        ),
        "root orders: " + _vec(ext.root_orders),
        "quotient invariant factors: " + _vec(ext.quotient_invariant_factors),
        f"group order: {ext.group_order()}",
    ]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _psod_descriptor(data: dict, level, order: str):
    kind = data["kind"]
    if kind == "snc":
        cx = _build_snc(data)
        if order == "standard":
            if isinstance(level, int):
                level = (level,) * len(cx.components)
            return psod_snc(cx, level, order="standard")
        if isinstance(level, int):
            return psod_infinite(cx, level)
        return psod_snc(cx, level, order="factorial")
    if kind == "nc":
        if not isinstance(level, int):
            raise ParseError("nc scenes take a single truncation stage as level")
        return psod_nc(nc_from_json(data), level)
    if kind == "chart":
        if not isinstance(level, int):
            raise ParseError("chart scenes take a single truncation stage as level")
        return psod_simplicial(_build_chart(data), level)
    raise ParseError("psod command needs an snc, nc, or chart scene")


def cmd_psod(args) -> int:
    data = load_scene(args.scene)
    level = _parse_level(_option(args, data, "level"))
    if level is None:
        raise ParseError("a level is required (--level or scene options)")
    order = _option(args, data, "order") or "factorial"
    desc = _psod_descriptor(data, level, order)
    lines = [
        f"order: {desc.order}; level: {_vec(desc.level)}"
        + (f"; truncation: {desc.truncation}" if desc.truncation else "")
    ]
    for i, lab in enumerate(desc.labels):
        chars = "(" + ", ".join(_frac(c.value) for c in lab.character) + ")"
        stratum = "X" if not lab.stratum else "{" + ",".join(
            str(x) for x in sorted(lab.stratum, key=str)) + "}"
        extra = ""
        if lab.zero:
            extra += "  [zero]"
        if lab.first_level is not None:
            extra += f"  [level {lab.first_level}]"
        lines.append(f"{i + 1:>4}. {chars}  on {stratum}{extra}")
    _emit(args, desc.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_decompose(args) -> int:
    data = load_scene(args.scene)
    v = _scene_assignment(data)
    level = _parse_level(_option(args, data, "level"))
    if level is None:
        raise ParseError("a level is required (--level or scene options)")
    prime = _option(args, data, "prime_to")
    kind = data["kind"]
    if kind == "snc":
        cx = _build_snc(data)
        _check_assignment_keys(v, cx)
        if isinstance(level, int):
            level = (level,) * len(cx.components)
        if prime is not None:
            report = etale_filter(cx, v, int(prime), level=level)
        else:
            report = decompose_finite(cx, level, v)
    elif kind == "nc":
        if prime is not None:
            raise ParseError("the prime filter applies only to snc scenes")
        if not isinstance(level, int):
            raise ParseError("nc scenes take a single truncation stage as level")
        report = decompose_nc(nc_from_json(data), v, level)
    elif kind == "chart":
        if prime is not None:
            raise ParseError("the prime filter applies only to snc scenes")
        if not isinstance(level, int):
            raise ParseError("chart scenes take a single cyclic order as level")
        chart = _build_chart(data)
        snc, fixed = canonical_root_pair(chart)
        _check_assignment_keys(v, snc)
        report = decompose_simplicial_complexified(chart, fixed, v, level)
    else:
        raise ParseError("decompose command needs an snc, nc, or chart scene")
    _emit(args, report.to_json(), report.to_text())
    return EXIT_OK


def cmd_strictify(args) -> int:
    data = load_scene(args.scene)
    if data["kind"] != "nc":
        raise ParseError("strictify command needs an nc scene")
    snc, log = strictify(nc_from_json(data))
    payload = {"complex": snc.to_json(), "log": log.to_json()}
    lines = []
    for i, step in enumerate(log.steps, start=1):
        lines.append(
            f"step {i}: blow up {step.stratum} (codim {step.codim}) "
            f"-> {step.exceptional}"
        )
    if not log.steps:
        lines.append("already simple; no blow-ups")
    lines.append("components: " + ", ".join(str(c) for c in snc.components))
    lines.append(f"strata: {len(snc.strata(proper=True))}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    report = run_selfcheck(args.exhaustive_level)
    _emit(args, report.to_json(), report.to_text())
    return EXIT_OK if report.passed else EXIT_SELFCHECK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logsod",
        description="Exact index combinatorics of root stacks of log pairs.",
        epilog=_EPILOG,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scene=True):
        if scene:
            p.add_argument("scene", help="scene file path, or - for stdin")
        p.add_argument(
            "--format", choices=("json", "text"), default="json",
            help="output format (json is the contract; text is for reading)",
        )
        p.add_argument("--output", metavar="PATH", help="write output to a file")

    p = sub.add_parser("monoid", help="analyze a toric monoid")
    common(p)
    p.set_defaults(func=cmd_monoid)

    p = sub.add_parser("kummer", help="canonical minimal Kummer extension")
    common(p)
    p.set_defaults(func=cmd_kummer)

    p = sub.add_parser("psod", help="ordered factor listing for a complex")
    common(p)
    p.add_argument("--level", help="truncation stage, or comma-separated orders")
    p.add_argument("--order", choices=("standard", "factorial"))
    p.set_defaults(func=cmd_psod)

    p = sub.add_parser("decompose", help="additive-invariant decomposition")
    common(p)
    p.add_argument("--level", help="cyclic order(s) or truncation stage")
    p.add_argument("--prime-to", dest="prime_to", type=int, metavar="P",
                   help="keep only characters of order prime to P")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("strictify", help="resolve an nc complex to a simple one")
    common(p)
    p.set_defaults(func=cmd_strictify)

    p = sub.add_parser("selfcheck", help="run the built-in oracle suite")
    common(p, scene=False)
    p.add_argument("--exhaustive-level", type=int, default=4, metavar="N",
                   help="depth of the exhaustive searches (default 4)")
    p.set_defaults(func=cmd_selfcheck)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (LogsodError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
