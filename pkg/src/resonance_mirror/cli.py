"""Command-line front end: ``point``, ``sweep``, ``figure <name>`` and ``selftest``.

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 IO error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .checks import oracle_equivalence
from .core import GeometryError, NumericalFailure, ResonanceError
from .sweep import (
    CONFIGURATIONS,
    EVALUATORS,
    PRESETS,
    SCALES,
    ConfigError,
    SweepConfig,
    SweepPointError,
    figure_preset,
    rows_to_csv,
    run_figure,
    run_point,
    run_sweep,
    sidecar,
    write_csv,
    write_sidecar,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def _add_global(p: argparse.ArgumentParser, suppress: bool) -> None:
    # the same flags live on the top-level and verb parsers so they can come
    # before or after the verb; the verb copies must not clobber earlier values
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--evaluator", choices=EVALUATORS, default=default,
                   help="evaluation route (default closed_form)")
    p.add_argument("--output", default=default,
                   help="CSV path (point/sweep) or output directory (figure)")
    p.add_argument("--json", action="store_true",
                   default=argparse.SUPPRESS if suppress else False,
                   help="print a machine-readable result envelope on stdout")


def _add_config(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config file; flags below override it")
    p.add_argument("--configuration", choices=CONFIGURATIONS)
    p.add_argument("--omega0", type=float, help="transition frequency (eV)")
    p.add_argument("--dipole-a", type=float, nargs=3, metavar=("X", "Y", "Z"))
    p.add_argument("--dipole-b", type=float, nargs=3, metavar=("X", "Y", "Z"))
    p.add_argument("--parity", help="symmetric or antisymmetric")
    p.add_argument("--L", type=float, dest="L", help="interatomic distance along the normal (eV^-1)")
    p.add_argument("--D", type=float, dest="D", help="in-plane interatomic distance (eV^-1)")
    p.add_argument("--z", type=float, help="atom-mirror distance (eV^-1)")
    p.add_argument("--direction", type=float, nargs=3, metavar=("X", "Y", "Z"),
                   help="A->B direction for the general configuration")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="resonance-mirror",
                     description="Resonance interaction of two correlated atoms near a mirror.")
    parser.add_argument("--version", action="version", version=__version__)
    _add_global(parser, suppress=False)
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("point", help="evaluate a single configuration")
    _add_config(p)
    _add_global(p, suppress=True)

    p = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    _add_config(p)
    p.add_argument("--sweep", nargs=4, metavar=("VAR", "START", "STOP", "POINTS"))
    p.add_argument("--scale", choices=SCALES)
    p.add_argument("--workers", type=int, default=1)
    _add_global(p, suppress=True)

    p = sub.add_parser("figure", help="regenerate one figure's data")
    p.add_argument("name", choices=PRESETS)
    p.add_argument("--workers", type=int, default=1)
    _add_global(p, suppress=True)

    p = sub.add_parser("selftest", help="run the randomized oracle-equivalence check")
    p.add_argument("--draws", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_global(p, suppress=True)
    return parser


def load_config_file(path: Path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def resolve_config(args: argparse.Namespace) -> SweepConfig:
    """Merge the config file (if any) with command-line overrides."""
    data = load_config_file(args.config) if args.config else {}
    data.setdefault("configuration", "perpendicular")
    data.setdefault("dipole_a", (0.0, 0.0, 1.0))
    data.setdefault("dipole_b", (0.0, 0.0, 1.0))
    fixed = dict(data.get("fixed", {}))
    for flag, key in (("configuration", "configuration"), ("omega0", "omega0"),
                      ("dipole_a", "dipole_a"), ("dipole_b", "dipole_b"),
                      ("parity", "parity"), ("direction", "direction"),
                      ("evaluator", "evaluator"), ("output", "output")):
        value = getattr(args, flag, None)
        if value is not None:
            data[key] = value
    for key in ("L", "D", "z"):
        value = getattr(args, key, None)
        if value is not None:
            fixed[key] = value
    sweep = getattr(args, "sweep", None)
    if sweep is not None:
        var, start, stop, points = sweep
        try:
            data["sweep"] = {"variable": var, "start": float(start), "stop": float(stop),
                             "points": int(points)}
        except ValueError:
            raise ConfigError(f"malformed --sweep {' '.join(sweep)}") from None
    if getattr(args, "scale", None) is not None:
        if not data.get("sweep"):
            raise ConfigError("--scale given without a sweep")
        data["sweep"] = {**data["sweep"], "scale": args.scale}
    if data.get("sweep") and data["sweep"].get("variable") in fixed:
        # an explicit sweep on the command line wins over a fixed value from the file
        if sweep is not None:
            fixed.pop(data["sweep"]["variable"])
    data["fixed"] = fixed
    if "omega0" not in data:
        raise ConfigError("omega0 is required")
    return SweepConfig.from_dict(data)


def _row_dict(row) -> dict:
    return {k: getattr(row, k) for k in row.__dataclass_fields__}


def _cmd_point(args) -> tuple[dict, str]:
    config = resolve_config(args)
    row = run_point(config)
    if config.output:
        write_csv(config.output, [row])
    return {"config": config.to_dict(), "row": _row_dict(row)}, rows_to_csv([row])


def _cmd_sweep(args) -> tuple[dict, str]:
    config = resolve_config(args).validate(need_sweep=True)
    rows = run_sweep(config, workers=args.workers)
    if config.output:
        write_sidecar(Path(config.output).with_suffix(".json"), sidecar(config))
    return {"config": config.to_dict(), "rows": [_row_dict(r) for r in rows],
            "output": config.output}, rows_to_csv(rows)


def _cmd_figure(args) -> tuple[dict, str]:
    evaluator = args.evaluator or "closed_form"
    results = run_figure(args.name, outdir=args.output, evaluator=evaluator,
                         workers=args.workers)
    summary = {label: len(rows) for label, rows in results.items()}
    text = "\n".join(f"{args.name} {label}: {n} rows" for label, n in summary.items()) + "\n"
    if args.output:
        text += f"written to {args.output}\n"
    return {"preset": args.name, "curves": summary, "output": args.output,
            "configs": [c.to_dict() for c in figure_preset(args.name)]}, text


def _cmd_selftest(args) -> tuple[dict, str]:
    t0 = time.perf_counter()
    report = oracle_equivalence(args.draws, args.seed)
    elapsed = time.perf_counter() - t0
    ok = report.passed()
    result = {"draws": report.draws, "passed": ok, "seconds": elapsed,
              "boundary_worst": report.boundary_worst, "free_worst": report.free_worst}
    text = (f"oracle equivalence over {report.draws} draws: "
            f"boundary {report.boundary_worst:.2e} (tol 1e-12), "
            f"free space {report.free_worst:.2e} (tol 1e-14) "
            f"in {elapsed:.2f} s -> {'PASS' if ok else 'FAIL'}\n")
    if not ok:
        raise _SelftestFailed(result, text)
    return result, text


class _SelftestFailed(NumericalFailure):
    def __init__(self, result, text):
        super().__init__(text.strip())
        self.result = result


_COMMANDS = {"point": _cmd_point, "sweep": _cmd_sweep, "figure": _cmd_figure,
             "selftest": _cmd_selftest}


def _classify(exc: BaseException) -> int:
    if isinstance(exc, SweepPointError):
        return _classify(exc.cause)
    if isinstance(exc, NumericalFailure):
        return EXIT_NUMERICAL
    if isinstance(exc, (ConfigError, GeometryError, _ArgumentError, ValueError)):
        return EXIT_CONFIG
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, ResonanceError):
        return EXIT_NUMERICAL
    raise exc


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    want_json = "--json" in argv
    verb = None
    try:
        args = build_parser().parse_args(argv)
        verb, want_json = args.verb, args.json
        result, text = _COMMANDS[verb](args)
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes below
        code = _classify(exc)
        if want_json:
            envelope = {"status": "error", "command": verb, "exit_code": code,
                        "error": {"type": type(exc).__name__, "message": str(exc)}}
            if isinstance(exc, _SelftestFailed):
                envelope["result"] = exc.result
            print(json.dumps(envelope, sort_keys=True))
        else:
            print(f"resonance-mirror: error: {exc}", file=sys.stderr)
        return code
    if want_json:
        print(json.dumps({"status": "ok", "command": verb, "exit_code": EXIT_OK,
                          "version": __version__, "result": result}, sort_keys=True))
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
