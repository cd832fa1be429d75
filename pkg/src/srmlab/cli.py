"""Command-line front end.

Every ``fig*`` subcommand reproduces one published-style dataset as CSV or
JSON with a fixed row order and fixed 12-significant-digit float
formatting, so repeated runs are byte identical. ``check`` reads a Gram
description file and reports the measurement performance together with
the optimality verdicts; ``sweep`` evaluates any named scheme over an
energy grid through the generic pipeline.

Exit codes: 0 on success, 2 for configuration or input-file errors, 3 for
numerical failures such as a singular Gram matrix.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import re
import sys

import numpy as np

from . import analysis
from .constellations import Constellation, make_double_bpsk, weighted_gram
from .errors import (
    ConvergenceFailure,
    DomainError,
    GramFileError,
    GramSingular,
    InvalidFactorization,
    InvalidPrior,
    NoRoot,
    NotBlockDiagonal,
    NotHermitian,
    NotPSD,
    ReducibleBlock,
    SingularFactor,
)
from .gus import fast_srm
from .linalg import TOL_PSD, TOL_RECON
from .srm import TOL_COND, check_theorem2, check_theorem3, srm, verify_theorem1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

DEFAULT_GRID = "0.1:10:100"
DEFAULT_DELTAS = "0,pi/8,pi/4,3pi/8,pi/2"
DEFAULT_MS = "2,16"

_ANGLE_RE = re.compile(r"^\s*([0-9.]*)\s*pi\s*(?:/\s*([0-9.]+))?\s*$")


def fmt(value) -> str:
    """Deterministic 12-significant-digit rendering for dataset cells."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return "nan"
    return format(v, ".12g")


def parse_grid(text: str) -> np.ndarray:
    """Parse a ``start:stop:count`` grid of mean photon numbers."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like start:stop:count, got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise ValueError(f"bad grid {text!r}: {exc}") from None
    if count < 1:
        raise ValueError(f"grid count must be at least 1, got {count}")
    if start < 0 or stop < 0:
        raise ValueError("mean photon numbers must be nonnegative")
    if count == 1:
        return np.array([start])
    return np.linspace(start, stop, count)


def parse_angle(token: str) -> float:
    """Parse one angle: a plain float or a multiple of pi like ``3pi/8``."""
    match = _ANGLE_RE.match(token)
    if match:
        coef = float(match.group(1)) if match.group(1) else 1.0
        div = float(match.group(2)) if match.group(2) else 1.0
        if div == 0:
            raise ValueError(f"bad angle {token!r}: division by zero")
        return coef * math.pi / div
    try:
        return float(token)
    except ValueError:
        raise ValueError(f"bad angle {token!r}") from None


def parse_angle_list(text: str) -> list[float]:
    tokens = [tok for tok in text.split(",") if tok.strip()]
    if not tokens:
        raise ValueError("empty angle list")
    return [parse_angle(tok) for tok in tokens]


def parse_int_list(text: str) -> list[int]:
    tokens = [tok for tok in text.split(",") if tok.strip()]
    if not tokens:
        raise ValueError("empty integer list")
    try:
        return [int(tok) for tok in tokens]
    except ValueError as exc:
        raise ValueError(f"bad integer list {text!r}: {exc}") from None


def render_csv(columns: list[str], rows: list[dict]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(row[col]) for col in columns))
    return "\n".join(lines) + "\n"


def _jsonable(value):
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    v = float(value)
    if math.isnan(v):
        return None
    return float(format(v, ".12g"))


def render_json(columns: list[str], rows: list[dict]) -> str:
    records = [{col: _jsonable(row[col]) for col in columns} for row in rows]
    return json.dumps(records, indent=2) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def write_dataset(columns: list[str], rows: list[dict], args) -> int:
    renderer = render_json if args.format == "json" else render_csv
    emit(renderer(columns, rows), args.out)
    return EXIT_OK


def rows_fig1(grid, deltas, tol_psd: float) -> list[dict]:
    rows = []
    degenerate = False
    for photon_number in grid:
        alpha = math.sqrt(photon_number)
        for delta in deltas:
            pc = analysis.pc_double_bpsk_equal_amp(alpha, delta)
            if delta > 0.0:
                beta = alpha * cmath.exp(1j * delta)
                result, _ = fast_srm(make_double_bpsk(alpha, beta, 0.25), tol_psd=tol_psd)
                if abs(result.pc - pc) > TOL_RECON:
                    raise ArithmeticError(
                        f"closed form and pipeline disagree at |alpha|^2={photon_number}, "
                        f"delta={delta}: {pc!r} vs {result.pc!r}"
                    )
            else:
                degenerate = True
            rows.append(
                {"alpha_sq": photon_number, "delta": delta, "pc": pc, "pe": 1.0 - pc}
            )
    if degenerate:
        print(
            "note: delta=0 rows describe coincident constellations (singular ensemble); "
            "values come from the closed form only",
            file=sys.stderr,
        )
    return rows


def rows_fig23(grid, tol_psd: float) -> list[dict]:
    rows = []
    for photon_number in grid:
        alpha = math.sqrt(photon_number)
        try:
            p_star = analysis.optimize_prior_4pam(alpha)
        except NoRoot as exc:
            print(f"note: |alpha|^2={photon_number}: {exc}", file=sys.stderr)
            rows.append(
                {
                    "alpha_sq": photon_number,
                    "p_star": float("nan"),
                    "pc": float("nan"),
                    "pe": float("nan"),
                }
            )
            continue
        result, _ = fast_srm(make_double_bpsk(alpha, 3.0 * alpha, p_star), tol_psd=tol_psd)
        rows.append(
            {
                "alpha_sq": photon_number,
                "p_star": p_star,
                "pc": result.pc,
                "pe": 1.0 - result.pc,
            }
        )
    return rows


def rows_fig45(grid, ms) -> list[dict]:
    rows = []
    for photon_number in grid:
        alpha = math.sqrt(photon_number)
        for m in ms:
            single = analysis.ppm_closed_form(m, alpha)
            rows.append(
                {
                    "alpha_sq": photon_number,
                    "m": m,
                    "scheme": "ppm",
                    "pe": 1.0 - single.pc,
                    "mutual_info_bits": analysis.mutual_info_ppm(m, alpha),
                }
            )
            double = analysis.double_ppm_closed_form(m, alpha)
            rows.append(
                {
                    "alpha_sq": photon_number,
                    "m": m,
                    "scheme": "double_ppm",
                    "pe": 1.0 - double.pc,
                    "mutual_info_bits": analysis.mutual_info_double_ppm(m, alpha),
                }
            )
    return rows


def cmd_fig1(args) -> int:
    grid = parse_grid(args.grid)
    deltas = parse_angle_list(args.delta)
    rows = rows_fig1(grid, deltas, args.tol_psd)
    return write_dataset(["alpha_sq", "delta", "pc", "pe"], rows, args)


def cmd_fig23(args) -> int:
    grid = parse_grid(args.grid)
    rows = rows_fig23(grid, args.tol_psd)
    return write_dataset(["alpha_sq", "p_star", "pc", "pe"], rows, args)


def cmd_fig45(args) -> int:
    grid = parse_grid(args.grid)
    ms = parse_int_list(args.m)
    rows = rows_fig45(grid, ms)
    return write_dataset(["alpha_sq", "m", "scheme", "pe", "mutual_info_bits"], rows, args)


def cmd_sweep(args) -> int:
    grid = parse_grid(args.grid)
    columns = ["alpha_sq", "scheme"]
    rows = []
    if args.scheme in ("psk", "ppm", "double_ppm"):
        columns += ["m", "pc", "pe", "mutual_info_bits"]
        ms = parse_int_list(args.m)
        for photon_number in grid:
            for m in ms:
                point = analysis.evaluate_scheme(
                    args.scheme, photon_number, m=m, tol_psd=args.tol_psd
                )
                rows.append(
                    {
                        "alpha_sq": photon_number,
                        "scheme": args.scheme,
                        "m": m,
                        "pc": point.pc,
                        "pe": point.pe,
                        "mutual_info_bits": point.mutual_info,
                    }
                )
    else:
        columns += ["delta", "prior", "pc", "pe", "mutual_info_bits"]
        deltas = parse_angle_list(args.delta)
        for photon_number in grid:
            for delta in deltas:
                point = analysis.evaluate_scheme(
                    args.scheme,
                    photon_number,
                    delta=delta,
                    prior=args.p,
                    tol_psd=args.tol_psd,
                )
                rows.append(
                    {
                        "alpha_sq": photon_number,
                        "scheme": args.scheme,
                        "delta": delta,
                        "prior": point.prior,
                        "pc": point.pc,
                        "pe": point.pe,
                        "mutual_info_bits": point.mutual_info,
                    }
                )
    return write_dataset(columns, rows, args)


def load_gram_file(path: str) -> tuple[Constellation, list[tuple[int, ...]] | None]:
    """Parse a Gram description file into a constellation and optional blocks.

    Line-oriented format: ``n <count>``, ``priors <q0> ... <q_{n-1}>``,
    then one ``inner i j re im`` per pair with i < j (unlisted pairs are
    orthogonal; diagonal and conjugates are implied). An optional
    ``blocks`` line lists comma-joined index groups separated by spaces.
    Blank lines and ``#`` comments are ignored.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw_lines = handle.readlines()
    except OSError as exc:
        raise GramFileError(f"{path}: cannot read file: {exc}") from exc

    n = None
    priors = None
    entries: list[tuple[int, int, complex, int]] = []
    blocks = None
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0]
        where = f"{path}:{lineno}"
        if key == "n":
            if len(parts) != 2:
                raise GramFileError(f"{where}: expected 'n <count>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise GramFileError(f"{where}: state count must be an integer") from None
            if n < 1:
                raise GramFileError(f"{where}: state count must be positive")
        elif key == "priors":
            if n is None:
                raise GramFileError(f"{where}: 'n' must come before 'priors'")
            if len(parts) != n + 1:
                raise GramFileError(f"{where}: expected {n} priors, got {len(parts) - 1}")
            try:
                priors = [float(tok) for tok in parts[1:]]
            except ValueError:
                raise GramFileError(f"{where}: priors must be numbers") from None
        elif key == "inner":
            if n is None:
                raise GramFileError(f"{where}: 'n' must come before 'inner'")
            if len(parts) != 5:
                raise GramFileError(f"{where}: expected 'inner i j re im'")
            try:
                i, j = int(parts[1]), int(parts[2])
                value = complex(float(parts[3]), float(parts[4]))
            except ValueError:
                raise GramFileError(f"{where}: bad 'inner' line") from None
            if not (0 <= i < j < n):
                raise GramFileError(
                    f"{where}: need 0 <= i < j < {n}, got i={i}, j={j}"
                )
            entries.append((i, j, value, lineno))
        elif key == "blocks":
            if len(parts) < 2:
                raise GramFileError(f"{where}: expected at least one index group")
            try:
                blocks = [
                    tuple(int(tok) for tok in group.split(",") if tok)
                    for group in parts[1:]
                ]
            except ValueError:
                raise GramFileError(f"{where}: block indices must be integers") from None
        else:
            raise GramFileError(f"{where}: unknown directive {key!r}")

    if n is None:
        raise GramFileError(f"{path}: missing 'n' line")
    if priors is None:
        raise GramFileError(f"{path}: missing 'priors' line")

    overlaps = np.eye(n, dtype=complex)
    seen = {}
    for i, j, value, lineno in entries:
        if (i, j) in seen:
            raise GramFileError(
                f"{path}:{lineno}: duplicate inner product for pair ({i}, {j}), "
                f"first given on line {seen[(i, j)]}"
            )
        seen[(i, j)] = lineno
        overlaps[i, j] = value
        overlaps[j, i] = value.conjugate()

    try:
        constellation = Constellation(priors=np.array(priors), overlaps=overlaps)
    except (InvalidPrior, ValueError) as exc:
        raise GramFileError(f"{path}: invalid constellation: {exc}") from exc
    return constellation, blocks


def _verdict_line(name: str, verdict) -> str:
    word = "optimal" if verdict.optimal else "suboptimal"
    if verdict.witness:
        return f"{name} {word} ({verdict.witness})"
    return f"{name} {word}"


def cmd_check(args) -> int:
    constellation, blocks = load_gram_file(args.gramfile)
    gram = weighted_gram(constellation)
    result = srm(gram, tol_psd=args.tol_psd)

    lines = [f"states {constellation.n}", f"pc {fmt(result.pc)}", f"pe {fmt(1.0 - result.pc)}"]
    for i, label in enumerate(constellation.labels):
        lines.append(f"correct {i} {label} {fmt(result.per_state_correct[i])}")
    if blocks is not None:
        try:
            verdict3 = check_theorem3(
                gram, blocks, tol_cond=args.tol_cond, tol_psd=args.tol_psd
            )
            lines.append(_verdict_line("theorem3", verdict3))
        except (NotBlockDiagonal, ReducibleBlock, ValueError) as exc:
            lines.append(f"theorem3 error ({exc})")
    lines.append(
        _verdict_line(
            "theorem2",
            check_theorem2(result.factor, tol_cond=args.tol_cond, tol_psd=args.tol_psd),
        )
    )
    lines.append(
        _verdict_line(
            "theorem1_oracle",
            verify_theorem1(
                gram, result.factor, tol_cond=args.tol_cond, tol_psd=args.tol_psd
            ),
        )
    )
    emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srmlab",
        description=(
            "Square-root-measurement discrimination of pure-state ensembles: "
            "figure datasets, scheme sweeps, and optimality checks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--tol-psd", dest="tol_psd", type=float, default=TOL_PSD)
        p.add_argument("--tol-cond", dest="tol_cond", type=float, default=TOL_COND)

    def add_grid(p):
        p.add_argument(
            "--grid",
            default=DEFAULT_GRID,
            help="mean photon number grid start:stop:count "
            f"(default {DEFAULT_GRID})",
        )

    p1 = sub.add_parser(
        "fig1", help="two equal-amplitude binary pairs: pc over energy and phase offset"
    )
    add_grid(p1)
    p1.add_argument("--delta", default=DEFAULT_DELTAS, help="comma list of phase offsets")
    add_output(p1)
    p1.set_defaults(func=cmd_fig1)

    for name, help_text in (
        ("fig2", "4-level amplitude keying: optimized prior over energy"),
        ("fig3", "4-level amplitude keying: error probability at the optimized prior"),
    ):
        p = sub.add_parser(name, help=help_text)
        add_grid(p)
        add_output(p)
        p.set_defaults(func=cmd_fig23)

    for name, help_text in (
        ("fig4", "pulse position keying, plain and phase-doubled: error probability"),
        ("fig5", "pulse position keying, plain and phase-doubled: mutual information"),
    ):
        p = sub.add_parser(name, help=help_text)
        add_grid(p)
        p.add_argument("--m", default=DEFAULT_MS, help="comma list of slot counts")
        add_output(p)
        p.set_defaults(func=cmd_fig45)

    ps = sub.add_parser("sweep", help="evaluate one scheme over an energy grid")
    ps.add_argument("--scheme", required=True, choices=analysis.SCHEMES)
    add_grid(ps)
    ps.add_argument("--m", default=DEFAULT_MS, help="comma list of sizes (psk/ppm schemes)")
    ps.add_argument(
        "--delta", default="pi/2", help="comma list of phase offsets (double_bpsk)"
    )
    ps.add_argument(
        "--p", type=float, default=None, help="per-state prior of the first pair (double_bpsk)"
    )
    add_output(ps)
    ps.set_defaults(func=cmd_sweep)

    pc = sub.add_parser("check", help="report measurement performance for a Gram file")
    pc.add_argument("gramfile", help="path to a Gram description file")
    pc.add_argument("--out", help="output path (default: stdout)")
    pc.add_argument("--tol-psd", dest="tol_psd", type=float, default=TOL_PSD)
    pc.add_argument("--tol-cond", dest="tol_cond", type=float, default=TOL_COND)
    pc.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol_psd", TOL_PSD) <= 0 or getattr(args, "tol_cond", TOL_COND) <= 0:
        print("error: tolerance overrides must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except GramFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, InvalidPrior, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (
        GramSingular,
        NoRoot,
        ConvergenceFailure,
        NotPSD,
        NotHermitian,
        SingularFactor,
        InvalidFactorization,
        NotBlockDiagonal,
        ReducibleBlock,
        ArithmeticError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
