"""``lindblad`` command line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from ..stability import region_scan, scan_values
from ..unravel import deterministic_power, kraus_decompose, monte_carlo_density
from .experiments import (
    AUDIT_HEADER, CONVERGENCE_HEADER, DECAY_HEADER, SIMULATE_HEADER, bound_audit,
    convergence_experiment, observable_decay_experiment, simulate,
)
from .io import ExperimentConfig, load_config, write_csv
from .zoo import MODEL_KINDS, build_model, parse_matrix

log = logging.getLogger("lindblad_sp")

STABILITY_HEADER = ("re_z", "im_z", "alpha", "beta", "rho_sq", "verdict")
STABILITY_EMPIRICAL_HEADER = STABILITY_HEADER + ("empirical",)
SLOPE_HEADER = ("scheme", "slope", "intercept", "n_lo", "n_hi", "n_points")
UNRAVEL_HEADER = ("row", "col", "re", "im", "se_re", "se_im", "ref_re", "ref_im")


def _output(cfg: ExperimentConfig, override: str | None):
    return override if override is not None else cfg.output


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    write_csv(_output(cfg, args.output), SIMULATE_HEADER, simulate(cfg))
    return 0


def _cmd_converge(args) -> int:
    cfg = load_config(args.config)
    result = convergence_experiment(cfg)
    out = _output(cfg, args.output)
    write_csv(out, CONVERGENCE_HEADER, result.rows)
    slope_rows = [(name, fit.slope, fit.intercept, fit.n_lo, fit.n_hi, fit.n_points)
                  for name, fit in result.slopes.items()]
    if out is None or out == "-":
        write_csv(None, SLOPE_HEADER, slope_rows)
    else:
        path = Path(out)
        write_csv(path.with_name(path.stem + "_slopes.csv"), SLOPE_HEADER, slope_rows)
    return 0


def _cmd_audit(args) -> int:
    cfg = load_config(args.config)
    rows = bound_audit(cfg, strict=False)
    write_csv(_output(cfg, args.output), AUDIT_HEADER, rows)
    bad = [r for r in rows if r[5] and r[2] > r[3]]
    for r in bad:
        log.error("bound violated: %s N=%d error=%.3e bound=%.3e", r[0], r[1], r[2], r[3])
    return 1 if bad else 0


def _cmd_decay(args) -> int:
    cfg = load_config(args.config)
    dt = float(cfg.extra.get("dt", cfg.T / cfg.N_values[0]))
    n_steps = int(cfg.extra.get("n_steps", cfg.N_values[0]))
    rows = observable_decay_experiment(build_model(cfg.model), cfg.schemes, dt, n_steps)
    write_csv(_output(cfg, args.output), DECAY_HEADER, rows)
    return 0


def _cmd_stability(args) -> int:
    re_values = scan_values(args.re)
    dropped = int(np.sum(re_values <= 0))
    if dropped:
        log.warning("skipping %d grid columns with Re(z) <= 0", dropped)
    re_values = re_values[re_values > 0]
    points = region_scan(args.scheme, re_values, scan_values(args.im),
                         empirical=args.empirical, n_iter=args.n_iter)
    rows = [(p.z.real, p.z.imag, p.alpha, p.beta, p.spectral_radius_sq, p.verdict)
            + ((p.empirical,) if args.empirical else ()) for p in points]
    write_csv(args.output, STABILITY_EMPIRICAL_HEADER if args.empirical else STABILITY_HEADER, rows)
    return 0


def _cmd_unravel(args) -> int:
    cfg = load_config(args.config)
    model = build_model(cfg.model)
    extra = cfg.extra
    n_steps = int(extra.get("n_steps", cfg.N_values[0]))
    dt = float(extra.get("dt", cfg.T / n_steps))
    n_traj = int(extra.get("n_traj", 10_000))
    if "psi0" in extra:
        psi0 = parse_matrix([extra["psi0"]])[0]
    else:
        psi0 = np.zeros(model.dim, dtype=complex)
        psi0[0] = 1.0
    dec = kraus_decompose(cfg.schemes[0], model, dt)
    est = monte_carlo_density(dec, psi0, n_steps, n_traj, cfg.seed)
    ref = deterministic_power(dec, psi0, n_steps)
    d = model.dim
    rows = [(r, c, est.mean[r, c].real, est.mean[r, c].imag, est.stderr[r, c].real,
             est.stderr[r, c].imag, ref[r, c].real, ref[r, c].imag)
            for r in range(d) for c in range(d)]
    write_csv(_output(cfg, args.output), UNRAVEL_HEADER, rows)
    return 0


def _cmd_models(args) -> int:
    for kind, (defaults, text) in MODEL_KINDS.items():
        params = ", ".join(f"{k}={v}" for k, v in defaults.items())
        print(f"{kind}: {text}" + (f" [{params}]" if params else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lindblad", description="Positivity-preserving Lindblad integrators and benchmarks.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(name, func, text):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="experiment JSON file")
        p.add_argument("--output", default=None, help="CSV path (default: config 'output' or stdout)")
        p.set_defaults(func=func)
        return p

    with_config("simulate", _cmd_simulate, "per-step diagnostics of single runs")
    with_config("converge", _cmd_converge, "terminal error versus N and fitted orders")
    with_config("audit", _cmd_audit, "compare terminal errors with the a priori bound")
    with_config("decay", _cmd_decay, "|<sx>| and |<sy>| along fixed-step runs")
    with_config("unravel", _cmd_unravel, "quantum-jump estimate of the propagated state")

    p = sub.add_parser("stability", help="absolute-stability scan of the dephasing problem")
    p.add_argument("--scheme", required=True)
    p.add_argument("--re", required=True, help="lo:hi:step for Re(z)")
    p.add_argument("--im", required=True, help="lo:hi:step for Im(z)")
    p.add_argument("--empirical", action="store_true", help="also iterate the scheme and report decay")
    p.add_argument("--n-iter", type=int, default=1000)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_stability)

    p = sub.add_parser("models", help="model catalogue")
    p.add_argument("action", choices=["list"])
    p.set_defaults(func=_cmd_models)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError) as err:
        print(f"lindblad: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
