"""Command-line front end.

    gaussnm scan --channel qbm_exact --x 0.1 --x 0.3 --theta 100 --out scan.csv
    gaussnm summarize scan.csv
    gaussnm table --x 0.1 --out coeffs.csv

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 I/O failure (including unreadable or malformed CSV input).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .bath import QuadratureError, SpectralDensity
from .coeffs import ChannelParams, ConfigurationError, build_table
from .gchannel import (
    GaussianState,
    ValidationError,
    hermitian_eigenvalues,
    pd_z_firstorder_from,
    rwa_z_firstorder_from,
    z_firstorder_from,
)
from .nonmark import Channel, distance_witness, np_asymptotic, punctual_values, standard_pairs

log = logging.getLogger("gaussnm")

SCAN_HEADER = ("channel", "x", "tau", "gamma", "Delta", "Pi", "lambda_plus", "lambda_minus", "N_p")
WITNESS_HEADER = ("x", "tau", "min_derivative", "witness")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class CSVParseError(ValueError):
    def __init__(self, path, line: int, msg: str):
        super().__init__(f"{path}:{line}: {msg}")
        self.line = line


@dataclass
class ScanConfig:
    channels: list[str]
    x_values: list[float]
    theta: float = 100.0
    alpha: float = 0.1
    s: float = 1.0
    tau_max: float = 50.0
    n_grid: int | None = None
    out: Path = Path("scan.csv")
    witness_pairs: str | None = None
    jobs: int = 1
    params: list[ChannelParams] = field(init=False, repr=False)

    def __post_init__(self):
        if not self.channels:
            raise ConfigurationError("at least one --channel is required")
        if not self.x_values:
            raise ConfigurationError("at least one --x value is required")
        for ch in self.channels:
            try:
                Channel(ch)
            except ValueError:
                raise ConfigurationError(f"unknown channel {ch!r}") from None
        self.channels = sorted(set(self.channels))
        self.x_values = sorted(set(float(v) for v in self.x_values))
        try:
            sd = SpectralDensity(self.s)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        self.params = [
            ChannelParams(x=x, theta=self.theta, alpha=self.alpha, sd=sd, tau_max=self.tau_max, n_grid=self.n_grid)
            for x in self.x_values
        ]


def _spectrum(channel: Channel, g: float, d: float, p: float) -> tuple[float, float]:
    if channel is Channel.QBM_EXACT:
        z = z_firstorder_from(g, d, p)
    elif channel is Channel.QBM_RWA:
        z = rwa_z_firstorder_from(g, d)
    else:
        z = pd_z_firstorder_from(g)
    return hermitian_eigenvalues(z.value)


def _fmt(v: float) -> str:
    return repr(float(v))


def scan_cell(params: ChannelParams, channels: Sequence[str]) -> list[list[str]]:
    """All rows of one x value, channel-major."""
    table = build_table(params)
    rows = []
    for ch in channels:
        channel = Channel(ch)
        values = punctual_values(table, channel)
        for tau, g, d, p, n in zip(table.tau, table.gamma, table.Delta, table.Pi, values):
            lp, lm = _spectrum(channel, g, d, p)
            rows.append([channel.value, _fmt(params.x), _fmt(tau), _fmt(g), _fmt(d), _fmt(p), _fmt(lp), _fmt(lm), _fmt(n)])
    return rows


def load_pairs(source: str) -> list[tuple[GaussianState, GaussianState]]:
    """``standard`` or a JSON file: [{"a": {"mean": [..], "cov": [[..]]}, "b": {...}}, ...]."""
    if source == "standard":
        return standard_pairs()
    try:
        raw = json.loads(Path(source).read_text())
    except OSError:
        raise
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"witness pair file {source} is not valid JSON: {exc}") from None
    pairs = []
    try:
        for item in raw:
            a = GaussianState(item["a"]["mean"], item["a"]["cov"]).validate()
            b = GaussianState(item["b"]["mean"], item["b"]["cov"]).validate()
            pairs.append((a, b))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad witness pair entry in {source}: {exc}") from None
    if not pairs:
        raise ConfigurationError("witness pair family is empty")
    return pairs


def witness_rows(params: ChannelParams, pairs) -> list[list[str]]:
    table = build_table(params)
    res = distance_witness(table, pairs)
    mind = res.derivative.min(axis=0)
    return [[_fmt(params.x), _fmt(t), _fmt(m), _fmt(w)] for t, m, w in zip(res.tau, mind, res.witness)]


def _map_cells(fn, args_list, jobs: int):
    if jobs > 1 and len(args_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, *zip(*args_list)))
    return [fn(*args) for args in args_list]


def run_scan(cfg: ScanConfig) -> Path:
    """Write the scan CSV (and the witness CSV when requested); return the scan path."""
    cells = _map_cells(scan_cell, [(p, cfg.channels) for p in cfg.params], cfg.jobs)
    rows = [row for cell in cells for row in cell]
    # x cells are already ascending; order channel-major across cells
    order = {ch: i for i, ch in enumerate(cfg.channels)}
    rows.sort(key=lambda r: order[r[0]])  # stable: keeps (x, tau) order

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_HEADER)
    writer.writerows(rows)
    cfg.out.write_text(buf.getvalue())

    if cfg.witness_pairs:
        pairs = load_pairs(cfg.witness_pairs)
        wcells = _map_cells(witness_rows, [(p, pairs) for p in cfg.params], cfg.jobs)
        wbuf = io.StringIO()
        writer = csv.writer(wbuf, lineterminator="\n")
        writer.writerow(WITNESS_HEADER)
        for cell in wcells:
            writer.writerows(cell)
        witness_path(cfg.out).write_text(wbuf.getvalue())
    return cfg.out


def witness_path(out: Path) -> Path:
    return out.with_name(out.stem + ".witness.csv")


def read_scan(path) -> dict[tuple[str, float], dict[str, np.ndarray]]:
    """Parse a scan CSV into per-(channel, x) column arrays."""
    path = Path(path)
    text = path.read_text()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CSVParseError(path, 1, "empty file") from None
    if tuple(header) != SCAN_HEADER:
        raise CSVParseError(path, 1, f"unexpected header {','.join(header)}")
    groups: dict[tuple[str, float], list[list[float]]] = {}
    for lineno, row in enumerate(reader, start=2):
        if len(row) != len(SCAN_HEADER):
            raise CSVParseError(path, lineno, f"expected {len(SCAN_HEADER)} fields, got {len(row)}")
        try:
            Channel(row[0])
            nums = [float(v) for v in row[1:]]
        except ValueError as exc:
            raise CSVParseError(path, lineno, str(exc)) from None
        groups.setdefault((row[0], nums[0]), []).append(nums[1:])
    if not groups:
        raise CSVParseError(path, 2, "no data rows")
    out = {}
    for key, rows in groups.items():
        arr = np.array(rows)
        out[key] = {name: arr[:, i] for i, name in enumerate(SCAN_HEADER[2:])}
    return out


def summarize(path, theta: float = 100.0, stream=None) -> list[dict]:
    """Per-(channel, x) statistics of N_p; printed as a table and returned."""
    stream = sys.stdout if stream is None else stream
    data = read_scan(path)
    stats = []
    for (channel, x), cols in sorted(data.items()):
        tau, n = cols["tau"], cols["N_p"]
        positive = tau > 0
        last = tau >= tau[0] + 0.75 * (tau[-1] - tau[0])
        try:
            asym = np_asymptotic(x, theta)
        except (OverflowError, ValueError):
            asym = math.nan
        stats.append(
            dict(
                channel=channel,
                x=x,
                min=float(n.min()),
                max=float(n.max()),
                frac_positive=float(np.mean(n[positive] > 0)) if positive.any() else 0.0,
                last_quartile_mean=float(n[last].mean()),
                N_asymp=asym,
            )
        )
    print(f"{'channel':<10} {'x':>8} {'min N_p':>12} {'max N_p':>12} {'frac>0':>8} {'lastQ mean':>12} {'N_asymp':>12}", file=stream)
    for s in stats:
        print(
            f"{s['channel']:<10} {s['x']:>8.4g} {s['min']:>12.6g} {s['max']:>12.6g} "
            f"{s['frac_positive']:>8.4f} {s['last_quartile_mean']:>12.6g} {s['N_asymp']:>12.6g}",
            file=stream,
        )
    return stats


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussnm", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--x", type=float, action="append", default=[], help="non-Markovianity parameter (repeatable)")
        p.add_argument("--theta", type=float, default=100.0, help="k_B T / (hbar omega_c)")
        p.add_argument("--alpha", type=float, default=0.1, help="coupling constant")
        p.add_argument("--s", type=float, default=1.0, help="Ohmicity exponent")
        p.add_argument("--tau-max", type=float, default=50.0)
        p.add_argument("--grid", type=int, default=None, help="grid points (default: 40 per period 2 pi x)")
        p.add_argument("--out", type=Path, required=True)

    scan = sub.add_parser("scan", help="punctual non-Markovianity over tau for each (channel, x)")
    common(scan)
    scan.add_argument("--channel", action="append", default=[], choices=[c.value for c in Channel])
    scan.add_argument("--witness-pairs", default=None, help="'standard' or a JSON file of state pairs")
    scan.add_argument("--jobs", type=int, default=1, help="worker processes for scan cells")

    summ = sub.add_parser("summarize", help="summary statistics of a scan CSV")
    summ.add_argument("csv", type=Path)
    summ.add_argument("--theta", type=float, default=100.0, help="temperature used for the N_asymp column")

    tab = sub.add_parser("table", help="dump the coefficient table tau,gamma,Delta,Pi,Gamma")
    common(tab)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "scan":
            cfg = ScanConfig(
                channels=args.channel,
                x_values=args.x,
                theta=args.theta,
                alpha=args.alpha,
                s=args.s,
                tau_max=args.tau_max,
                n_grid=args.grid,
                out=args.out,
                witness_pairs=args.witness_pairs,
                jobs=args.jobs,
            )
            if cfg.witness_pairs:
                load_pairs(cfg.witness_pairs)  # fail fast, before the scan
            run_scan(cfg)
        elif args.command == "summarize":
            summarize(args.csv, theta=args.theta)
        else:
            if len(args.x) != 1:
                raise ConfigurationError("table needs exactly one --x")
            sd = SpectralDensity(args.s)
            params = ChannelParams(x=args.x[0], theta=args.theta, alpha=args.alpha, sd=sd, tau_max=args.tau_max, n_grid=args.grid)
            build_table(params).to_csv(args.out)
    except (CSVParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigurationError, ValidationError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, OverflowError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
