"""Command-line interface.

Exit codes: 0 success, 1 check failure, 2 input error (including
truncation warnings under ``--strict``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from . import fixtures
from .dgalg import NotConnectedError, TruncationError, bar_cobar_complex, cobar, cobar_complex
from .dgmod import DgModule, FreeCobarModule, ModuleError, twisted_complex, validate_module
from .linalg import Field, complex_from_operator, homology_ranks
from .necklace import LambdaError, lambda_hom
from .oracle import SingularMonodromy, group_homology_oracle_Z
from .serialize import SchemaViolation, canonical_dumps, emit_module, emit_simplicial, load
from .simplicial import SimplicialError, SimplicialSet, normalized_chains
from .verify import DEFAULT_SEED, Report, SuiteConfig, run_suite

__all__ = ["RunConfig", "ConfigError", "InputError", "TruncationWarning", "run", "main"]

COMMANDS = (
    "describe",
    "homology",
    "cobar-homology",
    "bar-homology",
    "twisted-homology",
    "colimit",
    "lambda-hom",
    "verify",
    "export",
)


class ConfigError(ValueError):
    pass


class InputError(ValueError):
    pass


class TruncationWarning(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    field: Field
    max_degree: int = 6
    word_cap: int = 8
    fixture: str | None = None
    file: str | None = None
    module: str | None = None
    module_file: str | None = None
    monodromy: str | None = None
    source: str | None = None
    target: str | None = None
    format: str = "table"
    strict: bool = False
    seed: int = DEFAULT_SEED
    select: tuple[str, ...] = ()

    def __post_init__(self):
        if self.max_degree < 1:
            raise ConfigError("--max-degree must be at least 1")
        if self.word_cap < 1:
            raise ConfigError("--word-cap must be at least 1")
        if self.format not in ("table", "json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.fixture and self.file:
            raise ConfigError("give either --fixture or --file, not both")


# ---------------------------------------------------------------------------
# inputs


def _space(cfg: RunConfig, default: str | None = None) -> SimplicialSet:
    if cfg.file:
        obj = load(cfg.file)
        if not isinstance(obj, SimplicialSet):
            raise InputError(f"{cfg.file} does not describe a simplicial set")
        return obj
    name = cfg.fixture or default
    if name is None:
        raise InputError("a --fixture or --file is required")
    return fixtures.space(name)


def parse_monodromy(text: str | None):
    """``2``, ``[[1,1],[0,1]]``, ``{"edge": 2}`` or ``edge=2,edge2=3``."""
    if text is None:
        return None
    try:
        val = json.loads(text)
    except json.JSONDecodeError:
        val = None
        if "=" in text:
            val = {}
            for part in text.split(","):
                k, _, v = part.partition("=")
                val[k.strip()] = json.loads(v)
        if val is None:
            raise InputError(f"cannot parse monodromy {text!r}") from None
    return val


def _check_invertible(u, f: Field) -> None:
    mats = u.values() if isinstance(u, dict) else [u]
    for x in mats:
        group_homology_oracle_Z(x, f)


def _module(cfg: RunConfig, k: SimplicialSet):
    if len(k.vertices()) != 1:
        raise NotConnectedError(f"{k.name} has {len(k.vertices())} vertices; a single base vertex is required")
    if cfg.module_file:
        m = load(cfg.module_file)
        if not isinstance(m, DgModule):
            raise InputError(f"{cfg.module_file} does not describe a module")
        if m.over is not None and m.over != k.name:
            raise InputError(f"module is over {m.over!r}, not {k.name!r}")
        m.over = k.name
    else:
        name = cfg.module or ("monodromy" if cfg.monodromy is not None else "trivial")
        u = parse_monodromy(cfg.monodromy)
        if name == "monodromy" and u is not None:
            _check_invertible(u, cfg.field)
        m = fixtures.module(name, k, u, cfg.max_degree, cfg.word_cap)
    if isinstance(m, DgModule):
        validate_module(m, cobar(normalized_chains(k), cfg.max_degree, cfg.word_cap), cfg.field)
    return m


# ---------------------------------------------------------------------------
# output


def _table_rows(rows) -> list[dict]:
    return [{"degree": d, "rank": r, "reliable": ok} for d, r, ok in rows]


def _warn_truncation(cfg: RunConfig, rows, what: str) -> list[str]:
    bad = [d for d, _, ok in rows if not ok]
    if not bad:
        return []
    msg = f"{what}: degrees {bad} depend on the truncation (raise --max-degree or --word-cap)"
    if cfg.strict:
        raise TruncationWarning(msg)
    return [msg]


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return canonical_dumps(report.to_dict())
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if report.checks:
            w.writerow(["check", "target", "status", "witness"])
            for c in report.checks:
                w.writerow([c.name, c.target, c.status, c.witness or ""])
        for t in report.tables:
            if "rows" in t:
                w.writerow(["table", "degree", "rank", "reliable"])
                for r in t["rows"]:
                    w.writerow([t["name"], r["degree"], r["rank"], r["reliable"]])
            else:
                w.writerow(["table", "key", "value"])
                for k, v in t.get("values", {}).items():
                    w.writerow([t["name"], k, json.dumps(v, sort_keys=True)])
        return buf.getvalue()
    lines = []
    for t in report.tables:
        lines.append(f"# {t['name']}")
        if "rows" in t:
            lines.append(f"{'degree':>6}  {'rank':>5}  reliable")
            for r in t["rows"]:
                lines.append(f"{r['degree']:>6}  {r['rank']:>5}  {'yes' if r['reliable'] else 'no'}")
        for k, v in t.get("values", {}).items():
            lines.append(f"{k}: {v}")
    if report.checks:
        width = max(len(c.name) for c in report.checks)
        for c in report.checks:
            line = f"{c.status.upper():<4}  {c.name:<{width}}  {c.target}"
            if c.witness:
                line += f"  -- {c.witness}"
            lines.append(line)
        n_fail = len(report.failures)
        n_pass = sum(c.status == "pass" for c in report.checks)
        n_skip = sum(c.status == "skip" for c in report.checks)
        lines.append(f"{n_pass} passed, {n_fail} failed, {n_skip} skipped (seed {report.seed}, field {report.field})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def _report(command: str, cfg: RunConfig) -> Report:
    return Report(command, cfg.field.name, cfg.seed, cfg.max_degree, cfg.word_cap)


def cmd_describe(cfg: RunConfig, rep: Report) -> int:
    k = _space(cfg)
    k.validate()
    c = normalized_chains(k)
    rep.tables.append(
        {
            "name": k.name,
            "values": {
                "counts": k.counts(),
                "vertices": k.vertices(),
                "one_vertex": len(k.vertices()) == 1,
                "generators": {str(n): k.generators(n) for n in range(k.max_dim + 1)},
                "euler_characteristic": sum((-1) ** n * x for n, x in enumerate(k.counts())),
                "connected_coalgebra": c.connected,
            },
        }
    )
    return 0


def cmd_homology(cfg: RunConfig, rep: Report) -> int:
    k = _space(cfg)
    c = normalized_chains(k)
    basis = {n: c.basis(n) for n in range(0, c.max_degree + 1)}
    cx, _ = complex_from_operator(basis, c.d, cfg.field)
    rows = homology_ranks(cx, range(0, min(c.max_degree, cfg.max_degree) + 1))
    rep.tables.append({"name": f"H_*({k.name}; {cfg.field.name})", "rows": _table_rows(rows)})
    return 0


def cmd_cobar(cfg: RunConfig, rep: Report, warnings: list) -> int:
    k = _space(cfg)
    _, cx = cobar_complex(normalized_chains(k), cfg.field, cfg.max_degree, cfg.word_cap)
    rows = homology_ranks(cx, range(cfg.max_degree + 1))
    rep.tables.append({"name": f"H_*(Omega C({k.name}))", "rows": _table_rows(rows)})
    warnings += _warn_truncation(cfg, rows, "cobar-homology")
    return 0


def cmd_bar(cfg: RunConfig, rep: Report, warnings: list) -> int:
    k = _space(cfg)
    _, cx = bar_cobar_complex(normalized_chains(k), cfg.field, cfg.max_degree, cfg.word_cap)
    rows = homology_ranks(cx, range(cfg.max_degree + 1))
    rep.tables.append({"name": f"H_*(B Omega C({k.name}))", "rows": _table_rows(rows)})
    warnings += _warn_truncation(cfg, rows, "bar-homology")
    return 0


def _twisted_rows(cfg: RunConfig, k: SimplicialSet, m):
    if len(k.vertices()) != 1:
        raise NotConnectedError(f"{k.name} has {len(k.vertices())} vertices; a single base vertex is required")
    tc = twisted_complex(m, normalized_chains(k), cfg.field, cfg.max_degree)
    degs = [d for d in tc.complex.degrees if d >= 0 and d <= cfg.max_degree]
    return homology_ranks(tc.complex, degs)


def cmd_twisted(cfg: RunConfig, rep: Report, warnings: list) -> int:
    k = _space(cfg)
    m = _module(cfg, k)
    rows = _twisted_rows(cfg, k, m)
    rep.tables.append({"name": f"H_*({getattr(m, 'name', 'module')} (x)_tau C({k.name}))", "rows": _table_rows(rows)})
    warnings += _warn_truncation(cfg, rows, "twisted-homology")
    return 0


def _oracle_input(cfg: RunConfig, k: SimplicialSet):
    """The monodromy matrix when the input is a circle local system, else ``None``."""
    if k.name != "circle" or cfg.module_file:
        return None
    name = cfg.module or ("monodromy" if cfg.monodromy is not None else "trivial")
    if name == "trivial":
        return 1
    if name != "monodromy":
        return None
    u = parse_monodromy(cfg.monodromy)
    if u is None:
        return 1
    if isinstance(u, dict):
        (u,) = u.values()
    return u


def cmd_colimit(cfg: RunConfig, rep: Report, warnings: list) -> int:
    k = _space(cfg)
    m = _module(cfg, k)
    rows = _twisted_rows(cfg, k, m)
    rep.tables.append({"name": f"colim over {k.name}", "rows": _table_rows(rows)})
    warnings += _warn_truncation(cfg, rows, "colimit")
    u = _oracle_input(cfg, k)
    if u is None:
        return 0
    want = group_homology_oracle_Z(u, cfg.field)
    got = [r for d, r, _ in rows if d in (0, 1)]
    status = "pass" if got == want else "fail"
    from .verify import CheckResult

    rep.checks.append(
        CheckResult("oracle", k.name, status, None if status == "pass" else f"twisted {got} vs oracle {want}", {"oracle": want})
    )
    rep.tables.append({"name": "group homology oracle", "values": {"H_0": want[0], "H_1": want[1]}})
    return 0 if status == "pass" else 1


def cmd_lambda(cfg: RunConfig, rep: Report, warnings: list) -> int:
    k = _space(cfg)
    vs = k.vertices()
    x = cfg.source or vs[0]
    y = cfg.target or (vs[-1] if cfg.source is None else x)
    lh = lambda_hom(k, x, y, cfg.max_degree, cfg.word_cap, cfg.field)
    rows = lh.homology(range(cfg.max_degree + 1))
    ranks = [lh.complex.dim(d) for d in range(cfg.max_degree + 1)]
    rep.tables.append({"name": f"Lambda({k.name})({x},{y})", "rows": _table_rows(rows)})
    rep.tables.append({"name": "chain ranks", "values": {"ranks": ranks}})
    warnings += _warn_truncation(cfg, rows, "lambda-hom")
    return 0


def cmd_verify(cfg: RunConfig, rep: Report) -> Report:
    sc = SuiteConfig(field=cfg.field, max_degree=cfg.max_degree, word_cap=cfg.word_cap, seed=cfg.seed)
    return run_suite(sc, cfg.select or None)


def cmd_export(cfg: RunConfig) -> str:
    k = _space(cfg)
    if cfg.module or cfg.module_file or cfg.monodromy is not None:
        m = _module(cfg, k)
        if isinstance(m, FreeCobarModule):
            raise InputError("the free module has no finite JSON form")
        return emit_module(m)
    return emit_simplicial(k)


def run(command: str, cfg: RunConfig) -> tuple[Report | str, int, list[str]]:
    """Execute ``command``; returns ``(report or text, exit status, warnings)``."""
    warnings: list[str] = []
    if command == "export":
        return cmd_export(cfg), 0, warnings
    rep = _report(command, cfg)
    if command == "describe":
        code = cmd_describe(cfg, rep)
    elif command == "homology":
        code = cmd_homology(cfg, rep)
    elif command == "cobar-homology":
        code = cmd_cobar(cfg, rep, warnings)
    elif command == "bar-homology":
        code = cmd_bar(cfg, rep, warnings)
    elif command == "twisted-homology":
        code = cmd_twisted(cfg, rep, warnings)
    elif command == "colimit":
        code = cmd_colimit(cfg, rep, warnings)
    elif command == "lambda-hom":
        code = cmd_lambda(cfg, rep, warnings)
    elif command == "verify":
        rep = cmd_verify(cfg, rep)
        code = 0 if rep.ok else 1
    else:
        raise ConfigError(f"unknown command {command!r}")
    return rep, code, warnings


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="localsys", description="Colimits of local systems via twisted tensor products.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--field", default="rat", help="rat or fp:<p> (default rat)")
    p.add_argument("--max-degree", type=int, default=6)
    p.add_argument("--word-cap", type=int, default=8)
    p.add_argument("--format", default="table", choices=("table", "json", "csv"))
    p.add_argument("--strict", action="store_true", help="treat truncation warnings as errors")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--fixture", help=f"registry fixture: {', '.join(fixtures.SPACES)}")
    p.add_argument("--file", help="simplicial set JSON file")
    p.add_argument("--module", choices=sorted(fixtures.MODULES))
    p.add_argument("--module-file", help="module JSON file")
    p.add_argument("--monodromy", help="scalar, matrix or edge=value list")
    p.add_argument("--source", help="source vertex for lambda-hom")
    p.add_argument("--target", help="target vertex for lambda-hom")
    p.add_argument("--select", action="append", default=[], help="verify: only checks with this name prefix")
    p.add_argument("--output", "-o", help="export: write to this file instead of stdout")
    return p


INPUT_ERRORS = (
    ConfigError,
    InputError,
    TruncationWarning,
    TruncationError,
    SchemaViolation,
    SimplicialError,
    ModuleError,
    NotConnectedError,
    LambdaError,
    SingularMonodromy,
    fixtures.FixtureError,
    FileNotFoundError,
)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        try:
            field = Field.parse(args.field)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        cfg = RunConfig(
            field=field,
            max_degree=args.max_degree,
            word_cap=args.word_cap,
            fixture=args.fixture,
            file=args.file,
            module=args.module,
            module_file=args.module_file,
            monodromy=args.monodromy,
            source=args.source,
            target=args.target,
            format=args.format,
            strict=args.strict,
            seed=args.seed,
            select=tuple(args.select),
        )
        out, code, warnings = run(args.command, cfg)
    except INPUT_ERRORS as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        print(f"error: {msg}", file=sys.stderr)
        return 2
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    text = out if isinstance(out, str) else render(out, cfg.format)
    if args.command == "export" and args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
