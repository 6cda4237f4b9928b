"""Command-line interface.

Exit codes: 0 success, 1 usage problem, 2 knowledge-base validation errors,
3 runtime failure (e.g. impossible evidence). Errors print one
``ERROR code: message`` line to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .compiler import NodeId, compile_bn, export_bn, node_label
from .errors import InvalidKnowledgeBase, ParseError, SignalKgError
from .inference import SamplerConfig, evidence_from_observations, exact_enumeration, likelihood_weighting
from .kgmodel import KnowledgeBase, format_diagnostic, parse_kb, validate
from .observations import export_observations, parse_observations
from .simulator import forced_scenario

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID_KB = 2
EXIT_RUNTIME = 3


class _UsageError(Exception):
    pass


def _fail(code: str, message: str) -> None:
    print(f"ERROR {code}: {message}", file=sys.stderr)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load_valid_kb(path: str) -> KnowledgeBase:
    kb = parse_kb(_read_text(path))
    errors = [d for d in validate(kb) if d.severity == "error"]
    if errors:
        for d in errors:
            print(format_diagnostic(d), file=sys.stderr)
        raise InvalidKnowledgeBase(f"{path} has {len(errors)} validation error(s)")
    return kb


def _write_out(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _parse_force(items: list[str]) -> dict[NodeId, bool]:
    forced: dict[NodeId, bool] = {}
    for item in items:
        name, sep, value = item.rpartition("=")
        if not sep or value.lower() not in ("true", "false"):
            raise _UsageError(f"--force expects node=true|false, got {item!r}")
        try:
            forced[NodeId.parse(name)] = value.lower() == "true"
        except ValueError as exc:
            raise _UsageError(str(exc)) from exc
    return forced


def _cmd_validate(args) -> int:
    kb = parse_kb(_read_text(args.kb))
    diags = validate(kb)
    for d in diags:
        print(format_diagnostic(d))
    return EXIT_INVALID_KB if any(d.severity == "error" for d in diags) else EXIT_OK


def _cmd_compile(args) -> int:
    kb = _load_valid_kb(args.kb)
    _write_out(export_bn(compile_bn(kb)), args.out)
    return EXIT_OK


def _cmd_infer(args) -> int:
    kb = _load_valid_kb(args.kb)
    try:
        records = parse_observations(_read_text(args.evidence))
    except ValueError as exc:
        raise _UsageError(f"bad evidence file: {exc}") from exc
    pairs = sorted({(r.sensor, r.observed_class) for r in records})
    bn = compile_bn(kb, evidence_classes=pairs)
    evidence = evidence_from_observations(records, bn, kb)
    if args.exact:
        posterior = exact_enumeration(bn, evidence)
    else:
        config = SamplerConfig(n_samples=args.samples, seed=args.seed, workers=args.workers)
        posterior = likelihood_weighting(bn, evidence, config)
        print(
            f"n_samples={posterior.n_samples} "
            f"ess={posterior.effective_sample_size:.1f} seed={posterior.seed}",
            file=sys.stderr,
        )
    for nid, p in posterior.p_true.items():
        print(f"{node_label(nid)} {p:.6f}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    kb = _load_valid_kb(args.kb)
    bn = compile_bn(kb)
    scenario, records = forced_scenario(bn, kb, _parse_force(args.force), args.seed)
    true_nodes = [node_label(n) for n, v in scenario.assignment.items() if v]
    print(f"seed={args.seed} true nodes: {', '.join(true_nodes) or '(none)'}", file=sys.stderr)
    _write_out(export_observations(records), args.out)
    return EXIT_OK


def _cmd_serve(args) -> int:
    kb_path = args.kb or os.environ.get("SIGNALKG_KB")
    if not kb_path:
        raise _UsageError("no knowledge base: pass --kb or set SIGNALKG_KB")
    # resolve KB problems before binding the port
    _load_valid_kb(kb_path)

    import uvicorn

    from .server import ServiceConfig, create_app

    config = ServiceConfig(
        port=args.port,
        kb_path=kb_path,
        default_samples=args.samples,
        cors_allowed=not args.no_cors,
        static_dir=args.static,
    )
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=config.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signalkg",
        description="Reason about the causes of sensor observations via a compiled Bayesian network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a knowledge base and print diagnostics")
    p.add_argument("kb")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("compile", help="compile a knowledge base to interchange JSON")
    p.add_argument("kb")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("infer", help="posterior probabilities given observations")
    p.add_argument("kb")
    p.add_argument("--evidence", required=True, help="observation JSON or JSON-LD file")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exact", action="store_true", help="exact enumeration instead of sampling")
    p.set_defaults(func=_cmd_infer)

    p = sub.add_parser("simulate", help="forward-sample a scenario and its observations")
    p.add_argument("kb")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--force",
        action="append",
        default=[],
        metavar="NODE=BOOL",
        help="clamp a node, e.g. 'entity(attacker)=true' (repeatable)",
    )
    p.add_argument("--out", help="output JSON-LD file (default: stdout)")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--kb", help="knowledge base path (or env SIGNALKG_KB)")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--samples", type=int, default=20000, help="default sample count for /api/infer")
    p.add_argument("--no-cors", action="store_true")
    p.add_argument("--static", help="directory of UI assets to serve at /")
    p.set_defaults(func=_cmd_serve)

    return parser


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _UsageError as exc:
        _fail("usage", str(exc))
        return EXIT_USAGE
    except ParseError as exc:
        _fail(exc.code, str(exc))
        return EXIT_INVALID_KB
    except InvalidKnowledgeBase as exc:
        _fail(exc.code, str(exc))
        return EXIT_INVALID_KB
    except SignalKgError as exc:
        _fail(exc.code, str(exc))
        return EXIT_RUNTIME


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
