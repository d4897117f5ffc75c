"""Command-line front end.

Subcommands: ``tradeoff`` (error trade-off curves), ``bounds`` (relative
entropy bounds over an epsilon grid), ``asymptotics`` (expansion reports over
a blocklength list) and ``selftest`` (invariant suite).

Output is CSV (default) or JSON with 17-significant-digit decimal floats,
"inf" for infinities, LF line endings and a fixed column order, so identical
configurations produce byte-identical bytes. All logarithms are base 2; the
``log_base`` config field records that convention and is fixed.

Exit codes: 0 success, 2 configuration/parse error, 3 numeric-domain error,
4 self-test failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import bounds as bounds_mod
from . import tradeoff as tradeoff_mod
from .asymptotics import expansion_sweep_multi
from .bounds import BOUND_NAMES
from .errors import ConfigError, NumericDomainError, QHTError, StateFileError
from .hermitian import DensityOperator
from .selftest import run_selftest
from .states import PRESETS, load_state, preset_pair

LOG_BASE = "2"


def fmt_value(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    v = float(x)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def render_rows(columns: list[str], rows: list[list], output_format: str) -> str:
    if output_format == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(fmt_value(v) for v in row) for row in rows)
        return "\n".join(lines) + "\n"
    if output_format == "json":
        payload = {"columns": columns,
                   "rows": [[fmt_value(v) if isinstance(v, float)
                             and math.isinf(v) else v for v in row]
                            for row in rows]}
        return json.dumps(payload, indent=None, separators=(",", ":"),
                          default=float) + "\n"
    raise ConfigError(f"unknown output format {output_format!r}")


@dataclass
class RunConfig:
    rho_path: str | None = None
    sigma_path: str | None = None
    preset: str | None = None
    copies: int | None = None
    epsilon_grid: tuple[float, float, int] | None = None
    s_grid_size: int | None = None
    bounds: tuple[str, ...] = BOUND_NAMES
    output_path: str | None = None
    output_format: str = "csv"
    log_base: str = LOG_BASE
    seed: int = 0
    n_list: list[int] | None = None
    epsilon: float | None = None
    moderate_power: float | None = None

    def resolve_states(self) -> tuple[DensityOperator, DensityOperator, int,
                                      tuple[float, float, int]]:
        if self.preset is not None:
            pair = preset_pair(self.preset, seed=self.seed)
            rho, sigma = pair.rho, pair.sigma
            copies = self.copies if self.copies is not None else pair.copies
            grid = self.epsilon_grid if self.epsilon_grid is not None \
                else pair.epsilon_grid
            return rho, sigma, copies, grid
        if self.rho_path is None or self.sigma_path is None:
            raise ConfigError("either --preset or both --rho and --sigma "
                              "are required")
        _, rho = load_state(self.rho_path)
        _, sigma = load_state(self.sigma_path)
        copies = self.copies if self.copies is not None else 1
        grid = self.epsilon_grid if self.epsilon_grid is not None \
            else (0.05, 0.95, 19)
        return rho, sigma, copies, grid


def parse_epsilons(spec: str) -> tuple[float, float, int]:
    try:
        start_s, stop_s, count_s = spec.split(":")
        start, stop, count = float(start_s), float(stop_s), int(count_s)
    except ValueError as exc:
        raise ConfigError(f"--epsilons expects START:STOP:COUNT, got {spec!r}"
                          ) from exc
    if not (0.0 < start < stop < 1.0):
        raise ConfigError(f"epsilon grid requires 0 < start < stop < 1, got "
                          f"{start}:{stop}")
    if count < 2:
        raise ConfigError("epsilon grid requires count >= 2")
    return start, stop, count


def parse_n_list(spec: str) -> list[int]:
    try:
        if ".." in spec:
            lo_s, hi_s = spec.split("..")
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ValueError("empty range")
            return list(range(lo, hi + 1))
        return [int(tok) for tok in spec.split(",") if tok]
    except ValueError as exc:
        raise ConfigError(f"--n-list expects N1,N2,... or LO..HI, got {spec!r}"
                          ) from exc


def grid_values(grid: tuple[float, float, int]) -> np.ndarray:
    # Rounding to 12 decimals pins decimal grids (0.05, 0.10, ...) to their
    # exact binary representatives, so range boundaries like eps = 1/2 are
    # hit exactly instead of one ulp off.
    start, stop, count = grid
    return np.round(np.linspace(start, stop, count), 12)


def tradeoff_s_values(k: int) -> list[float]:
    return [i / (k + 1) for i in range(1, k + 1)]


def tradeoff_rows(rho: DensityOperator, sigma: DensityOperator, copies: int,
                  alphas, s_values) -> tuple[list[str], list[list]]:
    rho_n = rho.tensor_power(copies)
    sigma_n = sigma.tensor_power(copies)
    session = tradeoff_mod.TradeoffSession(rho_n, sigma_n)
    atoms = bounds_mod.product_atoms(rho, sigma, copies)
    columns = ["alpha", "beta_exact"]
    columns.extend(f"beta_theorem1_s={s!r}" for s in s_values)
    curve = tradeoff_mod.TradeoffCurve(
        [session.beta_alpha(float(a)) for a in alphas]).sort()
    assert curve.check_monotone(), "exact trade-off must be non-increasing"
    rows = []
    for point in curve.points:
        row = [point.alpha, point.beta]
        for s in s_values:
            if point.alpha > 1.0 - s:
                row.append(0.0)
            else:
                row.append(bounds_mod.theorem1_beta_bound(
                    rho, sigma, copies, point.alpha, s, atoms=atoms))
        rows.append(row)
    return columns, rows


def bounds_rows(rho: DensityOperator, sigma: DensityOperator, copies: int,
                epsilons, s_grid_size: int, which: tuple[str, ...],
                ) -> tuple[list[str], list[list]]:
    session = tradeoff_mod.TradeoffSession(rho.tensor_power(copies),
                                           sigma.tensor_power(copies))
    atoms = None
    if "theorem1_envelope" in which or "ns_symmetric" in which:
        atoms = bounds_mod.product_atoms(rho, sigma, copies)
    ds_eval = None
    if "info_spectrum" in which:
        ds_eval = tradeoff_mod.InfoSpectrumEvaluator(rho, sigma, copies)
    columns = ["epsilon", "dh_exact/n"]
    if "theorem1_envelope" in which:
        columns += ["theorem1_envelope/n", "s_star"]
    for name in ("ns_symmetric", "fidelity", "info_spectrum"):
        if name in which:
            columns.append(f"{name}/n")
    rows = []
    for eps in epsilons:
        points = bounds_mod.bound_points(rho, sigma, copies, float(eps),
                                         which=which, session=session,
                                         atoms=atoms, ds_eval=ds_eval,
                                         s_grid=s_grid_size)
        by_name = {p.bound_name: p for p in points}
        row = [float(eps), by_name["exact"].dh_upper / copies]
        if "theorem1_envelope" in which:
            env = by_name["theorem1_envelope"]
            row += [env.dh_upper / copies, env.witness["s"]]
        for name in ("ns_symmetric", "fidelity", "info_spectrum"):
            if name in which:
                row.append(by_name[name].dh_upper / copies)
        rows.append(row)
    return columns, rows


def asymptotics_rows(rho: DensityOperator, sigma: DensityOperator,
                     epsilons, n_list: list[int],
                     moderate_power: float | None,
                     ) -> tuple[list[str], list[list]]:
    columns = ["n", "epsilon", "dh_exact", "source", "second_order", "residual"]
    if moderate_power is not None:
        columns += ["moderate", "eps_n"]
    sweeps = expansion_sweep_multi(rho, sigma, [float(e) for e in epsilons],
                                   n_list, moderate_power=moderate_power)
    rows = []
    for eps in epsilons:
        for rep in sweeps[float(eps)]:
            row = [rep.n, rep.epsilon, rep.dh_exact, rep.source,
                   rep.second_order, rep.residual]
            if moderate_power is not None:
                row += [rep.moderate, rep.eps_n]
            rows.append(row)
    return columns, rows


def preset_fig1_csv() -> str:
    pair = preset_pair("fig1")
    cols, rows = tradeoff_rows(pair.rho, pair.sigma, pair.copies,
                               grid_values(pair.epsilon_grid),
                               tradeoff_s_values(9))
    return render_rows(cols, rows, "csv")


def preset_fig2_csv() -> str:
    pair = preset_pair("fig2")
    cols, rows = bounds_rows(pair.rho, pair.sigma, pair.copies,
                             grid_values(pair.epsilon_grid), 101, BOUND_NAMES)
    return render_rows(cols, rows, "csv")


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rho", dest="rho_path", help="path to a JSON state file")
    parser.add_argument("--sigma", dest="sigma_path", help="path to a JSON state file")
    parser.add_argument("--preset", choices=PRESETS)
    parser.add_argument("--copies", type=int, default=None, metavar="N")
    parser.add_argument("--epsilons", default=None, metavar="START:STOP:COUNT")
    parser.add_argument("--s-grid", dest="s_grid", type=int, default=None,
                        metavar="K")
    parser.add_argument("--bounds", default=None, metavar="LIST",
                        help=f"comma list from {','.join(BOUND_NAMES)}")
    parser.add_argument("--out", dest="output_path", default=None, metavar="PATH")
    parser.add_argument("--format", dest="output_format", default="csv",
                        choices=("csv", "json"))
    parser.add_argument("--seed", type=int, default=0, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qht",
        description="Quantum hypothesis-testing trade-off and converse-bound "
                    "calculator (all logs base 2)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_trade = sub.add_parser("tradeoff", help="exact trade-off curve with "
                             "weighted classical lower bounds")
    _add_common(p_trade)

    p_bounds = sub.add_parser("bounds", help="relative-entropy bounds over an "
                              "epsilon grid")
    _add_common(p_bounds)

    p_asym = sub.add_parser("asymptotics", help="expansion reports over a "
                            "blocklength list")
    _add_common(p_asym)
    p_asym.add_argument("--n-list", default="1..8", metavar="N1,N2|LO..HI")
    p_asym.add_argument("--epsilon", type=float, default=None,
                        help="single type-I level (else the epsilon grid)")
    p_asym.add_argument("--moderate-power", type=float, default=None,
                        metavar="P", help="adds the moderate column with "
                        "a_n = n^-P")

    p_self = sub.add_parser("selftest", help="run the invariant suite")
    p_self.add_argument("--filter", default=None, metavar="MODULE")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        rho_path=args.rho_path,
        sigma_path=args.sigma_path,
        preset=args.preset,
        copies=args.copies,
        output_path=args.output_path,
        output_format=args.output_format,
        seed=args.seed,
    )
    if args.epsilons is not None:
        cfg.epsilon_grid = parse_epsilons(args.epsilons)
    if args.s_grid is not None:
        if args.s_grid < 1:
            raise ConfigError("--s-grid must be positive")
        cfg.s_grid_size = args.s_grid
    if args.bounds is not None:
        names = tuple(tok for tok in args.bounds.split(",") if tok)
        unknown = [n for n in names if n not in BOUND_NAMES]
        if unknown:
            raise ConfigError(f"unknown bounds {unknown}; choose from "
                              f"{BOUND_NAMES}")
        cfg.bounds = names
    if getattr(args, "n_list", None) is not None:
        cfg.n_list = parse_n_list(args.n_list)
    if getattr(args, "epsilon", None) is not None:
        if not (0.0 < args.epsilon < 1.0):
            raise ConfigError("--epsilon must lie in (0, 1)")
        cfg.epsilon = args.epsilon
    if getattr(args, "moderate_power", None) is not None:
        if args.moderate_power <= 0.0:
            raise ConfigError("--moderate-power must be positive")
        cfg.moderate_power = args.moderate_power
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "selftest":
        return run_selftest(args.filter)
    try:
        cfg = config_from_args(args)
        rho, sigma, copies, grid = cfg.resolve_states()
        if args.command == "tradeoff":
            s_values = tradeoff_s_values(cfg.s_grid_size or 9)
            cols, rows = tradeoff_rows(rho, sigma, copies, grid_values(grid),
                                       s_values)
        elif args.command == "bounds":
            cols, rows = bounds_rows(rho, sigma, copies, grid_values(grid),
                                     cfg.s_grid_size or 101, cfg.bounds)
        elif args.command == "asymptotics":
            eps_list = [cfg.epsilon] if cfg.epsilon is not None \
                else list(grid_values(grid))
            cols, rows = asymptotics_rows(rho, sigma, eps_list,
                                          cfg.n_list or list(range(1, 9)),
                                          cfg.moderate_power)
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError(f"unknown command {args.command!r}")
        _write_output(render_rows(cols, rows, cfg.output_format),
                      cfg.output_path)
        return 0
    except (ConfigError, StateFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericDomainError as exc:
        print(f"numeric-domain error: {exc}", file=sys.stderr)
        return 3
    except QHTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
