"""Command-line frontend.

Subcommands: shadow, range, moments, dynamics, validate, catalog. Every
file-producing run writes a manifest JSON recording the command, the full
parameter set, the master seed, the library version and the output files;
re-running with the same parameters reproduces the CSV outputs byte for
byte.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, catalog, dynamics, engine, moments, ranges, sampling, validate
from .linalg import as_matrix


def resolve_matrix(ref: str) -> np.ndarray:
    """Catalog key first, then I<dim> identity shorthand, then a JSON file path."""
    if ref in catalog.names():
        if Path(ref).exists():
            print(f"warning: {ref!r} is both a catalog key and a file; using the catalog",
                  file=sys.stderr)
        return catalog.get(ref).matrix
    m = re.fullmatch(r"[Ii](\d+)", ref)
    if m:
        return np.eye(int(m.group(1)), dtype=complex)
    path = Path(ref)
    if path.exists():
        return catalog.matrix_from_json(path.read_text())
    raise ValueError(f"cannot resolve matrix reference {ref!r} "
                     "(not a catalog key, I<dim>, or JSON file)")


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9.]+", "-", text).strip("-")


def _write_manifest(out_dir: Path, stem: str, command: str, params: dict,
                    seed: int, outputs: list[str], t0: float) -> Path:
    manifest = {
        "command": command,
        "params": params,
        "seed": seed,
        "version": __version__,
        "outputs": outputs,
        "duration_s": time.time() - t0,
    }
    path = out_dir / f"{stem}_manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _preprocess(matrix: np.ndarray, traceless: bool, scale: float) -> np.ndarray:
    m = as_matrix(matrix)
    if traceless:
        m = m - np.trace(m) / m.shape[0] * np.eye(m.shape[0])
    if scale != 1.0:
        m = m * scale
    return m


def cmd_shadow(args) -> int:
    t0 = time.time()
    matrix = _preprocess(resolve_matrix(args.matrix), args.translate_traceless, args.scale)
    restriction = sampling.parse_restriction(args.restriction)
    if args.window is not None:
        re_min, re_max, im_min, im_max = (float(v) for v in args.window.split(","))
        grid = engine.GridSpec(re_min, re_max, im_min, im_max, args.nx, args.ny)
    else:
        grid = engine.auto_grid(matrix, args.nx, args.ny)
    hist = engine.estimate_shadow(matrix, restriction, args.n, grid,
                                  rng=sampling.RngStream(args.seed), threads=args.threads)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = args.out or f"shadow_{_slug(args.matrix)}_{_slug(args.restriction)}"
    outputs = []
    csv_path = out_dir / f"{stem}.csv"
    engine.histogram_to_csv(hist, csv_path)
    outputs.append(str(csv_path))
    if args.pgm:
        pgm_path = out_dir / f"{stem}.pgm"
        engine.histogram_to_pgm(hist, pgm_path)
        outputs.append(str(pgm_path))
    _write_manifest(out_dir, stem, "shadow", _params(args), args.seed, outputs, t0)
    print(f"wrote {', '.join(outputs)} (n_outside={hist.n_outside})")
    return 0


def cmd_range(args) -> int:
    t0 = time.time()
    matrix = resolve_matrix(args.matrix)
    poly = ranges.numerical_range_boundary(matrix, args.n_angles)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = args.out or f"range_{_slug(args.matrix)}"
    csv_path = out_dir / f"{stem}.csv"
    ranges.polygon_to_csv(poly, csv_path)
    _write_manifest(out_dir, stem, "range", _params(args), args.seed, [str(csv_path)], t0)
    print(f"wrote {csv_path}")
    return 0


def _moment_records(matrix, restriction, n, seed, threads):
    est = engine.estimate_moments(matrix, restriction, n,
                                  rng=sampling.RngStream(seed), threads=threads)
    d = matrix.shape[0]
    records = []
    mean = complex(np.trace(matrix)) / d
    records.append(validate._stat_check(
        "shadow-mean", {"restriction": str(restriction), "n": n},
        abs(mean), abs(est.mean), max(est.std_error_mean, 1e-300)))
    analytic_var = None
    if restriction.kind == "product" and len(restriction.dims) == 2 \
            and restriction.dims[0] == restriction.dims[1] and restriction.field == "complex":
        analytic_var = moments.separable_moments(matrix, restriction.dims[0]).variance
        formula = "separable-variance"
    elif restriction.kind == "maxent" and restriction.field == "complex":
        analytic_var = moments.entangled_moments(matrix, restriction.dims[0]).variance
        formula = "entangled-variance"
    elif restriction.kind == "schmidt":
        lam = np.array(restriction.schmidt)
        second = moments.schmidt_second_moment(matrix, lam.size, lam)
        analytic_var = second - abs(mean) ** 2
        formula = "schmidt-variance"
    elif restriction.kind in ("complex", "real") and np.allclose(
            matrix @ matrix.conj().T, matrix.conj().T @ matrix, atol=1e-12):
        from scipy.linalg import schur

        t, zmat = schur(np.asarray(matrix, dtype=complex), output="complex")
        lam = np.diag(t)
        if restriction.kind == "complex":
            analytic_var = moments.complex_shadow_variance(lam)
            formula = "complex-variance"
        else:
            analytic_var = moments.real_shadow_variance(lam, zmat)
            formula = "real-variance-general"
    if analytic_var is not None:
        records.append(validate._stat_check(
            formula, {"restriction": str(restriction), "n": n},
            analytic_var, est.variance, max(est.std_error_var, 1e-300)))
    else:
        records.append(validate.CheckRecord(
            "shadow-variance", {"restriction": str(restriction), "n": n},
            None, est.variance, est.std_error_var, None, True,
            "no closed form for this restriction"))
    return records


def cmd_moments(args) -> int:
    matrix = resolve_matrix(args.matrix)
    restriction = sampling.parse_restriction(args.restriction)
    records = _moment_records(matrix, restriction, args.n, args.seed, args.threads)
    report = {"matrix": args.matrix, "restriction": args.restriction,
              "checks": [r.to_json() for r in records],
              "passed": all(r.passed for r in records)}
    print(json.dumps(report, indent=2))
    return 0 if report["passed"] else 1


def cmd_dynamics(args) -> int:
    t0 = time.time()
    observable = resolve_matrix(args.observable)
    cfg = dynamics.DynamicsConfig(alpha=args.alpha, beta=args.beta,
                                  steps=args.steps, observable=observable)
    points = dynamics.trajectory(cfg)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = args.out or f"dynamics_{_slug(args.observable)}"
    traj_path = out_dir / f"{stem}_trajectory.csv"
    dynamics.trajectory_to_csv(points, traj_path)
    outputs = [str(traj_path)]
    if args.background_n > 0:
        hist = engine.estimate_shadow(observable, sampling.product((2, 2)),
                                      args.background_n,
                                      rng=sampling.RngStream(args.seed),
                                      threads=args.threads)
        bg_path = out_dir / f"{stem}_background.csv"
        engine.histogram_to_csv(hist, bg_path)
        outputs.append(str(bg_path))
    _write_manifest(out_dir, stem, "dynamics", _params(args), args.seed, outputs, t0)
    n_trans = dynamics.count_transitions(points)
    print(f"wrote {', '.join(outputs)} (separability transitions: {n_trans})")
    return 0


def cmd_validate(args) -> int:
    records, passed = validate.run_suite(args.suite, seed=args.seed, n=args.n,
                                         threads=args.threads)
    report = {"suite": args.suite, "n": args.n, "seed": args.seed,
              "checks": [r.to_json() for r in records], "passed": passed}
    print(json.dumps(report, indent=2))
    if not passed:
        failing = [r.formula_id for r in records if not r.passed]
        print(f"FAILED: {', '.join(failing)}", file=sys.stderr)
        return 1
    return 0


def cmd_catalog(args) -> int:
    if args.name:
        entry = catalog.get(args.name)
        print(catalog.matrix_to_json(entry.matrix))
    else:
        for name in catalog.names():
            entry = catalog.get(name)
            extra = f" bipartition={entry.bipartition}" if entry.bipartition else ""
            print(f"{name}: dim={entry.matrix.shape[0]}{extra}")
    return 0


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func" and not callable(v)}


def _add_globals(p, suppress: bool) -> None:
    # on the root parser with real defaults, on subparsers with SUPPRESS so
    # the flags are accepted on either side of the subcommand
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--seed", type=int, help="master random seed",
                   **(kw or {"default": 0}))
    p.add_argument("--threads", type=int, help="sampling worker threads",
                   **(kw or {"default": 1}))
    p.add_argument("--out-dir", help="directory for output files",
                   **(kw or {"default": "."}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="numshadow",
        description="Numerical ranges and restricted numerical shadows of complex matrices",
    )
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shadow", help="estimate a restricted shadow histogram")
    p.add_argument("--matrix", required=True, help="catalog key, I<dim>, or JSON file")
    p.add_argument("--restriction", required=True,
                   help="e.g. complex:4, real:3, product:2x2:complex, maxent:2:real, "
                        "ghz, w, schmidt:0.75,0.25")
    p.add_argument("--n", type=int, default=engine.DEFAULT_SAMPLES)
    p.add_argument("--nx", type=int, default=256)
    p.add_argument("--ny", type=int, default=256)
    p.add_argument("--window", default=None, help="re_min,re_max,im_min,im_max (default: auto)")
    p.add_argument("--pgm", action="store_true", help="also write a grayscale PGM")
    p.add_argument("--translate-traceless", action="store_true",
                   help="subtract tr(A)/D before sampling")
    p.add_argument("--scale", type=float, default=1.0, help="multiply the matrix by this factor")
    p.add_argument("--out", default=None, help="output file stem")
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_shadow)

    p = sub.add_parser("range", help="numerical range boundary polygon")
    p.add_argument("--matrix", required=True)
    p.add_argument("--n-angles", type=int, default=720)
    p.add_argument("--out", default=None)
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_range)

    p = sub.add_parser("moments", help="analytic vs Monte Carlo moments (JSON report)")
    p.add_argument("--matrix", required=True)
    p.add_argument("--restriction", required=True)
    p.add_argument("--n", type=int, default=engine.DEFAULT_SAMPLES)
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("dynamics", help="two-qubit noisy dynamics trajectory")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.03)
    p.add_argument("--steps", type=int, default=300)
    p.add_argument("--observable", default="X1")
    p.add_argument("--background-n", type=int, default=engine.DEFAULT_SAMPLES,
                   help="samples for the background separable shadow (0 to skip)")
    p.add_argument("--out", default=None)
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("validate", help="run an analytic-vs-MC validation suite")
    p.add_argument("--suite", default="all",
                   help=f"one of: {', '.join(sorted(validate.SUITES))}, all")
    p.add_argument("--n", type=int, default=engine.DEFAULT_SAMPLES)
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("catalog", help="list built-in matrices or print one as JSON")
    p.add_argument("name", nargs="?", default=None)
    _add_globals(p, suppress=True)
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
