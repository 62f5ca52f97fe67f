"""Command-line interface: ``spintomo <command> ...``.

Exit codes: 0 success, 2 bad input (arguments or files), 3 validation
failure (the input parsed but is not a valid state, or the grid cannot
resolve it).
"""

from __future__ import annotations

import argparse
import csv
import re
import sys
from pathlib import Path

import numpy as np

from .angular import EulerAngles
from .errors import DomainError, ValidationError
from .fileio import (
    FileFormatError,
    dumps_document,
    read_state,
    read_tomogram,
    write_state,
    write_tomogram,
)
from .quadrature import QuadratureGrid, build_grid, grid_from_sizes
from .shots import empirical_tomogram, sample_grid
from .states import DensityMatrix, fidelity
from .tomogram import SpinTomogram, forward_point, forward_tomogram, project_to_physical, reconstruct
from .top import (
    TopDensityMatrix,
    TopParameters,
    TopTomogram,
    top_energy,
    top_forward_tomogram,
    top_reconstruct,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3

_SIZES = re.compile(r"^(\d+)x(\d+)x(\d+)$")


class InputError(Exception):
    """Bad command-line input; maps to exit code 2."""


def parse_grid(spec: str, twice_j: int) -> QuadratureGrid:
    """``"auto"`` or ``"TxPxS"`` (theta, phi, psi point counts)."""
    if spec == "auto":
        return build_grid(twice_j)
    m = _SIZES.match(spec)
    if not m:
        raise InputError(f"grid must be 'auto' or 'TxPxS', got {spec!r}")
    nt, npsi_phi, ns = (int(g) for g in m.groups())
    try:
        return grid_from_sizes(nt, npsi_phi, ns)
    except (ValidationError, DomainError) as exc:
        raise InputError(f"bad grid {spec!r}: {exc}") from exc


def _parse_resolution(spec: str) -> tuple[int, int]:
    m = re.match(r"^(\d+)x(\d+)$", spec)
    if not m or int(m.group(1)) < 2 or int(m.group(2)) < 1:
        raise InputError(f"resolution must be NTxNP with NT >= 2, NP >= 1, got {spec!r}")
    return int(m.group(1)), int(m.group(2))


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def _spin_state(path) -> DensityMatrix:
    rho = read_state(path)
    if not isinstance(rho, DensityMatrix):
        raise InputError(f"{path}: expected a spin state, found a top state")
    return rho


def _top_state(path) -> TopDensityMatrix:
    rho = read_state(path)
    if not isinstance(rho, TopDensityMatrix):
        raise InputError(f"{path}: expected a top state, found a spin state")
    return rho


def _report_raw(raw: np.ndarray) -> np.ndarray:
    """Print residuals of a raw reconstruction and return its Hermitian part."""
    n = int(round(np.sqrt(raw.size)))
    m = raw.reshape(n, n)
    herm = float(np.max(np.abs(m - m.conj().T)))
    trace = abs(complex(np.trace(m)) - 1.0)
    print(f"hermiticity residual: {herm:.3e}")
    print(f"trace residual: {trace:.3e}")
    return 0.5 * (m + m.conj().T)


def cmd_forward(args) -> int:
    rho = _spin_state(args.state)
    tomo = forward_tomogram(rho, parse_grid(args.grid, rho.twice_j))
    write_tomogram(tomo, args.out)
    print(f"max normalization residual: {tomo.normalization_residual():.3e}")
    return EXIT_OK


def cmd_top_forward(args) -> int:
    rho = _top_state(args.state)
    grid = parse_grid(args.grid, rho.twice_j)
    tomo = top_forward_tomogram(rho, grid, grid)
    write_tomogram(tomo, args.out)
    print(f"max normalization residual: {tomo.normalization_residual():.3e}")
    return EXIT_OK


def _reconstruct_any(tomo, project: bool):
    if isinstance(tomo, TopTomogram):
        raw = top_reconstruct(tomo)
        n = (tomo.twice_j + 1) ** 2
        m = _report_raw(raw.reshape(n, n))
        if project:
            return TopDensityMatrix(tomo.twice_j, project_to_physical(m).entries)
        return TopDensityMatrix(tomo.twice_j, m)
    m = _report_raw(reconstruct(tomo))
    return project_to_physical(m) if project else DensityMatrix(tomo.twice_j, m)


def cmd_reconstruct(args) -> int:
    rho = _reconstruct_any(read_tomogram(args.tomogram), args.project)
    write_state(rho, args.out)
    return EXIT_OK


def cmd_top_reconstruct(args) -> int:
    tomo = read_tomogram(args.tomogram)
    if not isinstance(tomo, TopTomogram):
        raise InputError(f"{args.tomogram}: expected a top tomogram")
    write_state(_reconstruct_any(tomo, args.project), args.out)
    return EXIT_OK


def surface_rows(rho: DensityMatrix, twice_i: int, n_theta: int, n_phi: int):
    """``(theta, phi, w)`` rows, theta outer, at psi = 0.

    theta runs over ``[0, pi]`` inclusive, phi over ``[0, 2 pi)``.
    """
    if abs(twice_i) > rho.twice_j or (rho.twice_j - twice_i) % 2:
        raise DomainError(f"outcome twice_i={twice_i} is not valid for twice_j={rho.twice_j}")
    row = (rho.twice_j - twice_i) // 2
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    for th in thetas:
        for ph in phis:
            yield float(th), float(ph), float(forward_point(rho, EulerAngles(ph, th, 0.0))[row])


def cmd_surface(args) -> int:
    rho = _spin_state(args.state)
    nt, np_ = _parse_resolution(args.resolution)
    try:
        rows = list(surface_rows(rho, args.twice_i, nt, np_))
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["theta", "phi", "w"])
        for th, ph, w in rows:
            writer.writerow([format(th, ".17g"), format(ph, ".17g"), format(w, ".17g")])
    return EXIT_OK


def cmd_spectrum(args) -> int:
    if args.twice_j < 0:
        raise InputError("twice_j must be non-negative")
    try:
        p = TopParameters(args.inertia_a, args.inertia_c, args.hbar)
    except ValidationError as exc:
        raise InputError(str(exc)) from exc
    print("k\tE")
    for tk in range(-args.twice_j, args.twice_j + 1, 2):
        k = f"{tk // 2}" if tk % 2 == 0 else f"{tk}/2"
        print(f"{k}\t{top_energy(args.twice_j, tk, p, args.convention):.17g}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.shots < 1:
        raise InputError(f"shots must be >= 1, got {args.shots}")
    rho = _spin_state(args.state)
    grid = parse_grid(args.grid, rho.twice_j)
    records = sample_grid(rho, grid, args.shots, args.seed)
    tomo = empirical_tomogram(records, grid, rho.twice_j)
    est = reconstruct(tomo, project=True)
    f = fidelity(rho, est)
    write_tomogram(tomo, args.out)
    report = {
        "schema_version": 1,
        "shots_per_axis": args.shots,
        "axes": len(records),
        "seed": args.seed,
        "fidelity": f,
    }
    Path(_report_path(args.out)).write_text(dumps_document(report))
    print(f"fidelity: {f:.6f}")
    return EXIT_OK


def _report_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".report.json")


def cmd_fidelity(args) -> int:
    a, b = _spin_state(args.a), _spin_state(args.b)
    print(f"{fidelity(a, b):.17g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spintomo", description="Spin and symmetric-top tomography.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forward", help="state file -> tomogram file")
    p.add_argument("state")
    p.add_argument("--grid", default="auto", help="'auto' or TxPxS point counts")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("reconstruct", help="tomogram file -> state file")
    p.add_argument("tomogram")
    p.add_argument("--project", action=argparse.BooleanOptionalAction, default=False,
                   help="map the estimate to the nearest physical state")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("top-forward", help="top state file -> top tomogram file")
    p.add_argument("state")
    p.add_argument("--grid", default="auto")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_top_forward)

    p = sub.add_parser("top-reconstruct", help="top tomogram file -> top state file")
    p.add_argument("tomogram")
    p.add_argument("--project", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_top_reconstruct)

    p = sub.add_parser("surface", help="CSV of w(i; theta, phi) at psi = 0")
    p.add_argument("state")
    p.add_argument("--twice-i", type=int, required=True, help="outcome, doubled (1 for +1/2)")
    p.add_argument("--resolution", default="64x64", help="NTxNP")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("spectrum", help="rotational energies of a symmetric top")
    p.add_argument("--twice-j", type=int, required=True)
    p.add_argument("--inertia-a", type=float, required=True)
    p.add_argument("--inertia-c", type=float, required=True)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--convention", choices=("paper", "standard"), default="paper")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("simulate", help="finite-shot tomogram and fidelity report")
    p.add_argument("state")
    p.add_argument("--shots", type=int, required=True, help="shots per measurement axis")
    p.add_argument("--grid", default="auto", help="measurement axes are the (theta, phi) pairs of this grid")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fidelity", help="fidelity between two spin state files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_fidelity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, FileFormatError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
