"""Command-line front end.

Subcommands
-----------
``rate``
    One key-rate evaluation (mutual information, Eve's information, rate).
``chi``
    Eve's information alone, under the selected attack model.
``sweep {fig2,fig4,fig5,fig6}``
    The figure datasets, as CSV or JSON tables.
``validate``
    The built-in oracle suites; exits 0 only if every suite passes.

Tables are emitted as CSV with ``#``-prefixed metadata lines or as a JSON
object ``{metadata, columns, rows}`` (schema shipped in
``minleak/data/result_schema.json``).  Numbers are written with 17
significant digits, locale-independent.  Exit codes: 0 success, 1
numerical or runtime failure, 2 usage or validation error.

A ``--config FILE`` option reads flat ``key = value`` lines mirroring the
flag names (without the leading dashes); explicit flags override the file.
"""

from __future__ import annotations

import argparse
import json
import sys

from ._version import __version__
from . import backend, selfcheck, sweeps
from .params import EbParams, PmParams
from .protocols import ProtocolKind, eb_to_pm, pm_to_eb
from .security import (
    AttackModel,
    chi_asym_equal_noise,
    chi_asym_general_bound,
    chi_asym_symmetric,
    key_rate_asym,
    key_rate_comparison,
    key_rate_heralding,
)

_FLOAT_FMT = ".17g"


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, _FLOAT_FMT)
    if isinstance(value, int):
        return str(value)
    return str(value)


def _emit_csv(doc: dict, stream):
    for key, value in doc["metadata"].items():
        stream.write(f"# {key} = {json.dumps(value)}\n")
    stream.write(",".join(doc["columns"]) + "\n")
    for row in doc["rows"]:
        stream.write(",".join(_fmt_cell(v) for v in row) + "\n")


def _emit_json(doc: dict, stream):
    json.dump(doc, stream, indent=2)
    stream.write("\n")


def emit(doc: dict, fmt: str, out: str | None):
    writer = _emit_csv if fmt == "csv" else _emit_json
    if out is None or out == "-":
        writer(doc, sys.stdout)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            writer(doc, fh)


def _base_metadata(args, command: str) -> dict:
    return {
        "tool": "minleak",
        "version": __version__,
        "backend": backend.BACKEND,
        "command": command,
    }


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def _add_point_args(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--protocol",
        required=True,
        choices=[k.value for k in ProtocolKind],
        help="protocol family to evaluate",
    )
    parser.add_argument("--v-sig", type=float, help="modulation variance (SNU)")
    parser.add_argument("--v-sqz", type=float, help="squeezed-quadrature variance (SNU)")
    parser.add_argument(
        "--sqz-db", type=float, help="squeezing in dB; v_sqz = 10^(-dB/10)"
    )
    parser.add_argument("--mu", type=float, help="EPR variance (EB parameterization)")
    parser.add_argument("--r", type=float, help="auxiliary squeezing (EB parameterization)")
    parser.add_argument("--T", type=float, help="channel transmittance (symmetric)")
    parser.add_argument("--T-x", type=float, help="x-quadrature transmittance")
    parser.add_argument("--T-p", type=float, help="p-quadrature transmittance")
    parser.add_argument("--xi", type=float, help="excess noise (symmetric, SNU)")
    parser.add_argument("--xi-x", type=float, help="x-quadrature excess noise")
    parser.add_argument("--xi-p", type=float, help="p-quadrature excess noise")
    parser.add_argument("--beta", type=float, default=0.95, help="reconciliation efficiency")
    parser.add_argument(
        "--attack",
        choices=[a.value for a in AttackModel],
        default="symmetric",
        help="eavesdropper model for the asymmetric protocol",
    )
    parser.add_argument("--tol", type=float, default=1e-9, help="physicality tolerance")


def _add_output_args(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--out", help="output path (default: stdout)")


def _resolve_channel(args, need_symmetric: bool):
    t_x = args.T_x if args.T_x is not None else args.T
    t_p = args.T_p if args.T_p is not None else args.T
    xi_x = args.xi_x if args.xi_x is not None else args.xi
    xi_p = args.xi_p if args.xi_p is not None else args.xi
    if xi_x is None:
        xi_x = 0.0
    if xi_p is None:
        xi_p = 0.0
    if t_x is None:
        raise ValueError("missing channel transmittance: give --T (or --T-x)")
    if need_symmetric:
        if t_p is not None and (t_p != t_x or xi_p != xi_x):
            raise ValueError(
                "this computation needs a symmetric channel; give --T and --xi only"
            )
        return t_x, xi_x
    return t_x, xi_x


def _resolve_pm(args) -> PmParams:
    has_pm = args.v_sig is not None or args.v_sqz is not None or args.sqz_db is not None
    has_eb = args.mu is not None or args.r is not None
    if has_pm and has_eb:
        raise ValueError("give either PM parameters (--v-sig/--v-sqz) or EB (--mu/--r), not both")
    if has_eb:
        if args.mu is None or args.r is None:
            raise ValueError("EB parameterization needs both --mu and --r")
        return eb_to_pm(EbParams(mu=args.mu, r=args.r))
    if args.v_sqz is not None and args.sqz_db is not None:
        raise ValueError("--v-sqz and --sqz-db are mutually exclusive")
    v_sqz = args.v_sqz
    if args.sqz_db is not None:
        v_sqz = 10.0 ** (-args.sqz_db / 10.0)
    if args.v_sig is None or v_sqz is None:
        raise ValueError("missing preparation: give --v-sig with --v-sqz (or --sqz-db)")
    return PmParams(v_sig=args.v_sig, v_sqz=v_sqz)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_rate(args) -> int:
    kind = ProtocolKind(args.protocol)
    sifting = args.sifting if args.sifting is not None else 1.0
    if not 0.0 <= sifting <= 1.0:
        raise ValueError(f"--sifting must lie in [0, 1], got {sifting!r}")
    t, xi = _resolve_channel(args, need_symmetric=True)
    if kind in (ProtocolKind.SQUEEZED_HOMODYNE, ProtocolKind.COHERENT_HETERODYNE):
        if args.mu is None:
            raise ValueError(f"protocol {kind.value!r} needs --mu (the EPR variance)")
        result = key_rate_comparison(kind, args.mu, t, xi, args.beta)
        pm_cols = (args.mu, None, None)
    else:
        pm = _resolve_pm(args)
        if kind is ProtocolKind.ASYMMETRIC:
            result = key_rate_asym(pm, t, xi, args.beta, AttackModel(args.attack))
        else:
            result = key_rate_heralding(pm, t, xi, args.beta)
        eb = pm_to_eb(pm)
        pm_cols = (eb.mu, pm.v_sig, pm.v_sqz)
    metadata = _base_metadata(args, "rate")
    metadata.update(
        attack=args.attack if kind is ProtocolKind.ASYMMETRIC else None,
        sifting=sifting,
        diagnostics=result.diagnostics,
    )
    doc = {
        "metadata": metadata,
        "columns": [
            "protocol", "mu", "v_sig", "v_sqz", "t", "xi", "beta",
            "i_ab", "chi_eb", "key_rate",
        ],
        "rows": [
            [
                kind.value, pm_cols[0], pm_cols[1], pm_cols[2], t, xi, args.beta,
                result.i_ab, result.chi_eb, result.key_rate * sifting,
            ]
        ],
    }
    emit(doc, args.format, args.out)
    return 0


def cmd_chi(args) -> int:
    kind = ProtocolKind(args.protocol)
    diagnostics: dict = {}
    if kind is ProtocolKind.ASYMMETRIC:
        attack = AttackModel(args.attack)
        pm = _resolve_pm(args)
        if attack is AttackModel.SYMMETRIC:
            t, xi = _resolve_channel(args, need_symmetric=True)
            chi = chi_asym_symmetric(pm, t, xi)
        else:
            t, xi = _resolve_channel(args, need_symmetric=False)
            if attack is AttackModel.GENERAL:
                chi, c_p = chi_asym_general_bound(pm, t, xi, tol=args.tol)
                diagnostics["c_p"] = c_p
            else:
                chi, t_p = chi_asym_equal_noise(pm, t, xi)
                diagnostics["t_p"] = t_p
    elif kind is ProtocolKind.HERALDING:
        pm = _resolve_pm(args)
        t, xi = _resolve_channel(args, need_symmetric=True)
        chi = key_rate_heralding(pm, t, xi, 1.0).chi_eb
    else:
        if args.mu is None:
            raise ValueError(f"protocol {kind.value!r} needs --mu (the EPR variance)")
        t, xi = _resolve_channel(args, need_symmetric=True)
        chi = key_rate_comparison(kind, args.mu, t, xi, 1.0).chi_eb
    metadata = _base_metadata(args, "chi")
    metadata.update(attack=args.attack, diagnostics=diagnostics)
    doc = {
        "metadata": metadata,
        "columns": ["protocol", "attack", "t_x", "xi_x", "chi_eb"],
        "rows": [[kind.value, args.attack, t, xi, chi]],
    }
    emit(doc, args.format, args.out)
    return 0


def cmd_sweep(args) -> int:
    jobs = max(1, args.jobs)
    sifting = args.sifting if args.sifting is not None else 1.0
    if args.figure == "fig2":
        result = sweeps.run_fig2(points=args.points, jobs=jobs)
    elif args.figure == "fig4":
        xi = args.xi if args.xi is not None else 0.0
        result = sweeps.run_fig4(xi=xi, grid=(args.points, args.points), jobs=jobs)
    elif args.figure == "fig5":
        result = sweeps.run_fig5(grid=(args.points, args.points), jobs=jobs)
    else:
        xi = args.xi if args.xi is not None else 0.05
        result = sweeps.run_fig6(
            d_max_km=args.d_max,
            points=args.points,
            xi=xi,
            beta=args.beta,
            loss_db_per_km=args.loss_db_per_km,
            sifting=sifting,
            jobs=jobs,
        )
    metadata = _base_metadata(args, f"sweep {args.figure}")
    metadata.update(result.metadata)
    doc = {
        "metadata": metadata,
        "columns": list(result.columns),
        "rows": [list(row) for row in result.rows],
    }
    emit(doc, args.format, args.out)
    return 0


def cmd_validate(args) -> int:
    results = selfcheck.run_all()
    for suite in results:
        flag = "PASS" if suite.passed else "FAIL"
        print(f"{flag}  {suite.name}  max_deviation={suite.max_deviation:.3e}  ({suite.detail})")
    return 0 if all(s.passed for s in results) else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minleak",
        description="Key rates and eavesdropper bounds for minimum-leakage CV QKD.",
    )
    parser.add_argument("--version", action="version", version=f"minleak {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rate = sub.add_parser("rate", help="evaluate one key-rate working point")
    _add_point_args(p_rate)
    p_rate.add_argument(
        "--sifting", type=float, help="sifting probability multiplying the rate"
    )
    _add_output_args(p_rate)
    p_rate.set_defaults(func=cmd_rate)

    p_chi = sub.add_parser("chi", help="evaluate Eve's information at one point")
    _add_point_args(p_chi)
    _add_output_args(p_chi)
    p_chi.set_defaults(func=cmd_chi)

    p_sweep = sub.add_parser("sweep", help="produce a figure dataset")
    p_sweep.add_argument("figure", choices=["fig2", "fig4", "fig5", "fig6"])
    p_sweep.add_argument("--points", type=int, default=101, help="grid points per axis")
    p_sweep.add_argument(
        "--xi", type=float, help="excess noise (default: 0 for fig4, 0.05 for fig6)"
    )
    p_sweep.add_argument("--beta", type=float, default=0.95)
    p_sweep.add_argument("--d-max", type=float, default=200.0, help="maximum distance, km")
    p_sweep.add_argument("--loss-db-per-km", type=float, default=0.2)
    p_sweep.add_argument("--sifting", type=float, help="sifting probability multiplying rates")
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel row evaluation")
    _add_output_args(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="run the built-in oracle suites")
    p_val.set_defaults(func=cmd_validate)

    return parser


def _inject_config(argv: list[str]) -> list[str]:
    """Expand ``--config FILE`` into flags placed before the explicit ones."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValueError("--config needs a file path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2 :]
    tokens: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            tokens += [f"--{key}", value]
    # keep the leading positional words (subcommand, figure id) in front
    j = 0
    while j < len(rest) and not rest[j].startswith("-"):
        j += 1
    return rest[:j] + tokens + rest[j:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _inject_config(argv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
