"""Command-line interface.

Subcommands::

    privquant design CONFIG [--out DIR] [--seed N]
    privquant sweep CONFIG --epsilon E [--epsilon E ...] [--out DIR]
    privquant baselines CONFIG [--out DIR]
    privquant repro [--out DIR] [--seed N]

Exit codes: 0 success, 1 solver failure, 2 configuration error,
3 infeasible distortion budget, 4 benchmark mismatch.
"""

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import scenarios
from .baselines import discrete_laplace_noise, smallest_level_noise, uniform_noise
from .config import ConfigError, load_config
from .exceptions import InfeasibleDistortion, NotConverged
from .info_theory import entropy, mi_objective, sum_pmf
from .multi_obs import simulate_stream
from .quantizer import quantized_pmf
from .solver import DesignProblem, SolverOptions, solve

log = logging.getLogger("privquant")

EXIT_OK, EXIT_SOLVER, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_MISMATCH = 0, 1, 2, 3, 4
REPRO_RTOL = 0.02


def fmt(x):
    """12 significant digits; ``inf`` for an absent budget."""
    if x is None:
        return "inf"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(fmt(v) if not isinstance(v, str) else v for v in r) for r in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def write_report(path, items):
    Path(path).write_text("".join(f"{k}={v if isinstance(v, str) else fmt(v)}\n" for k, v in items))


def write_design_files(out, stem, pY, design):
    write_csv(out / f"{stem}_pmf.csv", ["level", "p_y", "p_z"],
              zip(pY.support, pY.probs, design.pZ.probs))
    pv = sum_pmf(pY, design.pZ)
    write_csv(out / f"{stem}_pv.csv", ["v", "p_v"], zip(pv.support, pv.probs))


def _design_items(name, pY, epsilon, design):
    return [
        ("sensor", name),
        ("epsilon", fmt(epsilon)),
        ("mi_bits", design.mi_bits),
        ("distortion", design.distortion),
        ("lambda", design.lam),
        ("kkt_residual", design.kkt_residual),
        ("iterations", design.iterations),
        ("converged", design.converged),
        ("h_y_bits", entropy(pY)),
    ]


def _output_dir(args, cfg):
    out = Path(args.out if args.out else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _check_budgets(cfg):
    for s in cfg.sensors:
        if s.epsilon is not None and s.epsilon < s.spec.min_square_level:
            raise InfeasibleDistortion(s.epsilon, s.spec.min_square_level, sensor=s.name)


def cmd_design(args):
    cfg = load_config(args.config)
    _check_budgets(cfg)
    out = _output_dir(args, cfg)
    seed = cfg.seed if args.seed is None else args.seed
    for s in cfg.sensors:
        pY = quantized_pmf(s.model, s.spec)
        design = solve(DesignProblem(pY, s.spec, s.epsilon), cfg.solver)
        write_design_files(out, s.name, pY, design)
        items = _design_items(s.name, pY, s.epsilon, design)
        if cfg.stream_steps:
            rng = np.random.default_rng(seed)
            items.append(("stream_steps", cfg.stream_steps))
            items.append(("stream_mi_bits", simulate_stream(s.model, s.spec, design, cfg.stream_steps, rng)))
        write_report(out / f"{s.name}_report.txt", items)
        log.info("%s: mi=%.6g bits, E[Z^2]=%.6g", s.name, design.mi_bits, design.distortion)
    return EXIT_OK


def parse_epsilon(text):
    if text.strip().lower() in ("inf", "none", "unconstrained"):
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid epsilon {text!r}")
    if math.isnan(value) or value < 0:
        raise argparse.ArgumentTypeError(f"epsilon must be >= 0, got {text!r}")
    return None if math.isinf(value) else value


def _eps_key(e):
    return math.inf if e is None else e


def cmd_sweep(args):
    cfg = load_config(args.config)
    out = _output_dir(args, cfg)
    epsilons = sorted(args.epsilon, key=_eps_key)
    for s in cfg.sensors:
        pY = quantized_pmf(s.model, s.spec)
        rows = []
        for e in epsilons:
            try:
                d = solve(DesignProblem(pY, s.spec, e), cfg.solver)
                rows.append([fmt(e), d.mi_bits, d.distortion, "ok"])
            except InfeasibleDistortion:
                rows.append([fmt(e), "", "", "infeasible"])
            except NotConverged as exc:
                d = exc.design
                rows.append([fmt(e), d.mi_bits, d.distortion, "not_converged"])
        write_csv(out / f"{s.name}_sweep.csv", ["epsilon", "mi_bits", "distortion", "status"], rows)
    return EXIT_OK


def baseline_rows(pY, spec, epsilon, design):
    """``(name, mi_bits, distortion, feasible)`` for the optimum and each baseline."""
    candidates = [
        ("optimal", design.pZ),
        ("uniform", uniform_noise(spec)),
        ("discrete_laplace", discrete_laplace_noise(spec, design.distortion)),
        ("smallest_level", smallest_level_noise(spec)),
    ]
    rows = []
    for name, pz in candidates:
        d = pz.second_moment()
        feasible = epsilon is None or d <= epsilon + 1e-9 * max(1.0, epsilon)
        rows.append((name, mi_objective(pY, pz), d, feasible))
    return rows


def cmd_baselines(args):
    cfg = load_config(args.config)
    _check_budgets(cfg)
    out = _output_dir(args, cfg)
    for s in cfg.sensors:
        pY = quantized_pmf(s.model, s.spec)
        design = solve(DesignProblem(pY, s.spec, s.epsilon), cfg.solver)
        rows = baseline_rows(pY, s.spec, s.epsilon, design)
        write_csv(out / f"{s.name}_baselines.csv", ["baseline", "mi_bits", "distortion", "feasible"], rows)
        opt = rows[0][1]
        beaten = [r[0] for r in rows[1:] if r[3] and r[1] < opt - 1e-9]
        if beaten:
            log.error("%s: baselines %s beat the solver", s.name, beaten)
            return EXIT_SOLVER
    return EXIT_OK


def run_benchmark(out, opts=None):
    """Solve every benchmark run, write its CSVs and return the summary items
    plus a list of ``(sensor, computed, reported)`` mismatches."""
    opts = opts or SolverOptions()
    items, mismatches = [], []
    for b in scenarios.benchmark_sensors():
        pY = quantized_pmf(b.model, b.spec)
        for e in (None,) + tuple(b.epsilons):
            d = solve(DesignProblem(pY, b.spec, e), opts)
            tag = "unconstrained" if e is None else f"eps{fmt(e)}"
            write_design_files(out, f"{b.name}_{tag}", pY, d)
            items += [
                (f"{b.name}_{tag}_mi_bits", d.mi_bits),
                (f"{b.name}_{tag}_distortion", d.distortion),
                (f"{b.name}_{tag}_lambda", d.lam),
                (f"{b.name}_{tag}_kkt_residual", d.kkt_residual),
            ]
            if e is None:
                rel = abs(d.distortion - b.reported_distortion) / b.reported_distortion
                items += [
                    (f"{b.name}_reported_distortion", b.reported_distortion),
                    (f"{b.name}_relative_error", rel),
                ]
                if rel > REPRO_RTOL:
                    mismatches.append((b.name, d.distortion, b.reported_distortion))
    literal = scenarios.sensor1(literal_step=True)
    d = solve(DesignProblem(quantized_pmf(literal.model, literal.spec), literal.spec), opts)
    items.append(("sensor1_literal_step_unconstrained_distortion", d.distortion))
    items.append(("match", not mismatches))
    return items, mismatches


def cmd_repro(args):
    out = Path(args.out or "repro_out")
    out.mkdir(parents=True, exist_ok=True)
    items, mismatches = run_benchmark(out)
    write_report(out / "summary.txt", items)
    for name, got, want in mismatches:
        print(f"{name}: unconstrained E[Z^2] = {got:.6g}, expected {want:.6g}", file=sys.stderr)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="privquant", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("config", help="scenario TOML file")
        p.add_argument("--out", help="output directory (overrides the config)")
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("design", help="solve each sensor's noise design")
    common(p)
    p.set_defaults(func=cmd_design)
    p = sub.add_parser("sweep", help="privacy-distortion tradeoff over budgets")
    common(p)
    p.add_argument("--epsilon", type=parse_epsilon, action="append", required=True,
                   help="distortion budget; repeatable; 'inf' for unconstrained")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("baselines", help="compare the optimum with simple noise PMFs")
    common(p)
    p.set_defaults(func=cmd_baselines)
    p = sub.add_parser("repro", help="run the built-in two-sensor benchmark")
    common(p, config=False)
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleDistortion as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NotConverged as exc:
        print(f"solver did not converge: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
