#!/usr/bin/env python3
"""
Ultradiff command line
Every subcommand reads one run configuration and writes CSV files into --out
"""

import argparse
import math
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from . import __version__
from .analysis.asymptotics import (brute_series, center_value_model, default_residue_limit, geometric_series_model,
                                   residue_tail_limit, survival_model)
from .analysis.fitting import fit_power_exponent, log_periodicity_deviation
from .core.conditions import validate
from .core.errors import ConfigError, HypothesisViolation, UltradiffError
from .core.scenarios import RunConfig, ScenarioManager, load_run_config
from .oracle.gillespie import gillespie
from .oracle.rate_matrix import build_rate_matrix, evolve, project_to_spheres
from .reporting import write_csv
from .solvers.diffusion import center_value, solve_point_source
from .solvers.laplace import talbot_invert
from .solvers.sink import delta_sequence, sink_spectrum, survival, survival_transform
from .solvers.spectrum import Spectrum, compute_spectrum, finite_spectrum

DEFAULT_CONFIG = "configs/scenarios/padic_default.yaml"
DEFAULT_OUT = "results"
EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2
TALBOT_RTOL = 1e-6
EXPONENT_RTOL = 0.02
# late-time |t^beta y / modulation - 1| per law, checked from RATIO_FROM on
RATIO_TOLERANCE = {2: 1e-4, 3: 1e-3, 4: 2e-3}
RATIO_FROM = 1e6


class Run:
    """One CLI invocation: configuration, output directory and console verbosity"""

    def __init__(self, args: argparse.Namespace, config: RunConfig):
        self.args = args
        self.config = config
        self.out = Path(args.out)
        self.quiet = args.quiet
        self.command = args.command
        scenario = config.scenario
        self.hierarchy = scenario.build_hierarchy()
        self.kernel = scenario.build_kernel()
        self.manager = ScenarioManager(Path(args.config).parent)

    def say(self, message: str):
        if not self.quiet:
            print(message)

    def tol(self, default: float) -> float:
        return self.args.tol if self.args.tol is not None else default

    def spectrum(self) -> Spectrum:
        if self.config.scenario.is_finite:
            return finite_spectrum(self.hierarchy, self.kernel, self.hierarchy.max_level)
        return compute_spectrum(self.hierarchy, self.kernel)

    def write(self, suffix: str, columns: List[str], rows: List[Dict], **extra) -> Path:
        path = self.out / f"{self.config.scenario.name}_{suffix}.csv"
        write_csv(path, columns, rows, command=self.command,
                  config_hash=self.config.config_hash(), seed=self.config.seed, extra=extra)
        self.say(f"💾 Wrote {path}")
        return path


def cmd_validate(run: Run) -> int:
    report = validate(run.hierarchy, run.kernel, run.args.probe_depth)
    for line in report.summary_lines():
        run.say(line)
    problems = run.manager.validate(run.config)
    for problem in problems:
        run.say(f"❌ {problem}")
    finite = run.config.scenario.is_finite
    ok = report.certified(run.args.require_limit) or (finite and not run.args.require_limit)
    ok = ok and not problems
    if finite:
        run.say("⚠️  finite tree: every series is a finite sum")
    run.say(f"{'✅' if ok else '❌'} {'limit' if run.args.require_limit else 'bounded'} scenario "
            f"{'certified' if ok else 'not certified'}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_spectrum(run: Run) -> int:
    spec = run.spectrum()
    run.write("spectrum", ["i", "lambda", "tail_bound", "c_i"], spec.to_rows())
    run.say(f"📊 {spec.levels} modes, lambda_1 = {spec.lam[0]:.12g}")
    return EXIT_OK


def cmd_solve(run: Run) -> int:
    spec = run.spectrum()
    K = min(run.config.spheres, spec.depth) if spec.is_finite else run.config.spheres
    rows, worst_mass, lowest = [], 0.0, 0.0
    for t in run.config.t_grid.points():
        profile = solve_point_source(spec, float(t), K, run.tol(run.config.tolerances.series))
        rows += profile.to_rows()
        if spec.is_finite:
            full = solve_point_source(spec, float(t), spec.depth)
            worst_mass = max(worst_mass, abs(full.total_mass - 1.0))
        lowest = min(lowest, float(np.min(profile.values)))
    run.write("solve", ["t", "k", "f_point", "f_sphere_mass", "terms_used", "residual_bound"], rows)
    run.say(f"📊 {len(rows)} rows, lowest value {lowest:.3e}")
    if spec.is_finite:
        run.say(f"📊 worst mass defect {worst_mass:.3e}")
    return EXIT_OK if lowest >= -1e-12 and worst_mass <= 1e-10 else EXIT_CHECK_FAILED


def cmd_sink(run: Run) -> int:
    spec = run.spectrum()
    k = run.config.sink_rate
    if not k > 0:
        raise ConfigError("the sink subcommand needs sink_rate > 0")
    count = run.config.poles if not spec.is_finite else None
    sink = sink_spectrum(spec, k, count, run.tol(run.config.tolerances.poles))
    run.write("poles", ["i", "lambda_i", "nu_i", "delta_i", "b_i", "residual"], sink.to_rows())

    rows, worst = [], 0.0
    for t in run.config.oracle_times:
        by_poles = survival(sink, t, run.config.tolerances.survival)
        by_talbot = talbot_invert(lambda s: survival_transform(spec, k, s), t)
        diff = abs(by_poles - by_talbot)
        worst = max(worst, diff / abs(by_poles))
        rows.append({'t': t, 'S_polesum': by_poles, 'S_talbot': by_talbot, 'abs_diff': diff})
    run.write("survival", ["t", "S_polesum", "S_talbot", "abs_diff"], rows)

    mass = abs(k * float(np.sum(sink.decay_weight)) - 1.0)
    run.say(f"📊 {sink.count} poles, |k sum b/nu - 1| = {mass:.3e}, worst relative gap {worst:.3e}")
    ok = worst <= TALBOT_RTOL and mass <= run.config.tolerances.survival
    run.say(f"{'✅' if ok else '❌'} pole sum vs contour inversion")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _asymptotic_target(run: Run, theorem: int):
    """Curve y(t) and the model predicting it"""
    if theorem == 2:
        a, b = run.args.a, run.args.b
        model = geometric_series_model(a, b)
        return (lambda t: brute_series(lambda m: a ** -m, lambda m: b ** -m, t, decay=a)), model

    h = run.hierarchy
    if run.config.scenario.is_finite or h.asym is None:
        raise HypothesisViolation("asymptotic laws need an infinite hierarchy with asymptotic parameters")
    spec = run.spectrum()
    alpha = run.kernel.alpha
    if theorem == 3:
        model = center_value_model(h.asym, alpha)
        return (lambda t: center_value(spec, t, run.tol(run.config.tolerances.series))), model

    # the hypothesis is checked before any pole is computed
    survival_model(h.asym, alpha, max(run.config.sink_rate, 1e-300), 1.0, residue_limit=1.0)
    sink = sink_spectrum(spec, run.config.sink_rate, run.config.poles)
    _, delta, _ = delta_sequence(sink)
    model = survival_model(h.asym, alpha, run.config.sink_rate, delta)
    run.say(f"📊 residue limit {default_residue_limit(h.asym, alpha, run.config.sink_rate, delta):.12g}, "
            f"pole tail estimate {residue_tail_limit(sink, h.asym, alpha):.12g}")
    return (lambda t: survival(sink, t, run.config.tolerances.survival)), model


def cmd_asym(run: Run) -> int:
    theorem = run.args.theorem
    try:
        curve, model = _asymptotic_target(run, theorem)
    except HypothesisViolation as e:
        print(f"❌ hypothesis violation: {e}")
        return EXIT_CHECK_FAILED

    t = run.config.asym_grid.points()
    y = np.array([curve(float(x)) for x in t])
    beta_hat, stderr = fit_power_exponent(t, y, log_period=model.log_period,
                                          min_decades=min(3.0, math.log10(t[-1] / t[0])))
    u = y * t ** model.beta
    formula = model.modulation(t)
    rows = [{'t': t[j], 'y': y[j], 'beta_hat': beta_hat, 'u=y*t^beta': u[j],
             'modulation_formula': formula[j], 'ratio': u[j] / formula[j]} for j in range(len(t))]
    run.write(f"asym{theorem}", ["t", "y", "beta_hat", "u=y*t^beta", "modulation_formula", "ratio"], rows,
              beta=model.beta, log_period=model.log_period)

    run.say(f"📊 beta = {model.beta:.12g}, fitted {beta_hat:.12g} +/- {stderr:.2e}")
    run.say(f"📊 last ratio {rows[-1]['ratio']:.12g}")
    if math.log(t[-1] / t[0]) >= 2 * model.log_period:
        run.say(f"📊 log-periodicity deviation {log_periodicity_deviation(t, u, model.kappa):.3e}")
    exponent_ok = abs(beta_hat - model.beta) <= EXPONENT_RTOL * model.beta
    run.say(f"{'✅' if exponent_ok else '❌'} fitted exponent within {EXPONENT_RTOL:.0%}")

    late = t >= RATIO_FROM
    ratio_ok = True
    if np.any(late):
        gap = float(np.max(np.abs(u[late] / formula[late] - 1.0)))
        ratio_ok = gap <= RATIO_TOLERANCE[theorem]
        run.say(f"{'✅' if ratio_ok else '❌'} ratio gap {gap:.3e} for t >= {RATIO_FROM:g} "
                f"(limit {RATIO_TOLERANCE[theorem]:g})")
    else:
        run.say(f"⚠️  grid ends before t = {RATIO_FROM:g}, ratio not checked")
    return EXIT_OK if exponent_ok and ratio_ok else EXIT_CHECK_FAILED


def _oracle_tree(run: Run):
    scenario = run.config.scenario
    if run.args.depth is not None and not scenario.is_finite:
        scenario = scenario.model_copy(update={'depth': run.args.depth})
    tree = scenario.build_tree()
    return tree, finite_spectrum(tree.induced_hierarchy(0), run.kernel, tree.levels)


def cmd_oracle_check(run: Run) -> int:
    tree, spec = _oracle_tree(run)
    run.say(f"🎯 dense oracle on {tree.n_leaves} points, depth {tree.levels}")
    matrix = build_rate_matrix(tree, run.kernel)
    f0 = matrix.point_source()
    rows, worst = [], 0.0
    for t in run.config.oracle_times:
        exact = project_to_spheres(tree, evolve(matrix, f0, t))
        analytic = solve_point_source(spec, t, tree.levels).masses
        for k in range(tree.levels + 1):
            diff = abs(analytic[k] - exact[k])
            worst = max(worst, diff)
            rows.append({'t': t, 'k': k, 'analytic': analytic[k], 'oracle': exact[k], 'abs_diff': diff})
    run.write("oracle", ["t", "k", "analytic", "oracle", "abs_diff"], rows, depth=tree.levels)

    k_rate = run.config.sink_rate
    if k_rate > 0:
        sink = sink_spectrum(spec, k_rate)
        sink_matrix = build_rate_matrix(tree, run.kernel, k_rate)
        sink_rows = []
        for t in run.config.oracle_times:
            exact = float(np.sum(evolve(sink_matrix, f0, t)))
            by_poles = survival(sink, t, run.config.tolerances.survival)
            worst = max(worst, abs(exact - by_poles))
            sink_rows.append({'t': t, 'S_polesum': by_poles, 'S_oracle': exact,
                              'abs_diff': abs(exact - by_poles)})
        run.write("oracle_sink", ["t", "S_polesum", "S_oracle", "abs_diff"], sink_rows, depth=tree.levels)

    limit = run.tol(run.config.tolerances.oracle)
    ok = worst <= limit
    run.say(f"{'✅' if ok else '❌'} max abs diff {worst:.3e} (limit {limit:g})")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _mc_pass(run: Run, tree, spec, seed: int):
    config = run.config
    free = gillespie(tree, run.kernel, 0.0, config.walkers, config.mc_times, seed)
    analytic = np.array([solve_point_source(spec, t, tree.levels).masses for t in free.times])
    ok = free.consistent(analytic)

    survival_rows = []
    if config.sink_rate > 0:
        absorbed = gillespie(tree, run.kernel, config.sink_rate, config.walkers, config.mc_times, seed + 1)
        sink = sink_spectrum(spec, config.sink_rate)
        expected = [survival(sink, t, config.tolerances.survival) for t in absorbed.times]
        ok = ok and absorbed.survival_consistent(expected)
        survival_rows = absorbed.survival_rows(expected)
    return ok, free.to_rows(analytic), survival_rows


def cmd_mc(run: Run) -> int:
    tree, spec = _oracle_tree(run)
    seed = run.args.seed if run.args.seed is not None else run.config.seed
    run.say(f"🎯 {run.config.walkers} walkers on {tree.n_leaves} points, seed {seed}")
    ok, rows, survival_rows = _mc_pass(run, tree, spec, seed)
    if not ok:
        run.say("⚠️  outside 3 standard errors, one retry with a fresh seed")
        seed = seed + 2
        ok, rows, survival_rows = _mc_pass(run, tree, spec, seed)

    run.write("mc", ["t", "k", "empirical", "analytic", "stderr", "z"], rows, used_seed=seed)
    if survival_rows:
        run.write("mc_survival", ["t", "empirical", "analytic", "stderr", "z"], survival_rows, used_seed=seed)
    run.say(f"{'✅' if ok else '❌'} Monte Carlo within 3 standard errors")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_report(run: Run) -> int:
    report = validate(run.hierarchy, run.kernel, run.args.probe_depth)
    run.quiet = False
    run.say(f"🎯 Scenario {run.config.scenario.name} ({run.config.scenario.type}), alpha = {run.kernel.alpha:.12g}")
    run.say(f"📁 {run.manager.scenarios_dir}: " + ", ".join(run.manager.list()))
    for line in report.summary_lines():
        run.say(line)
    spec = run.spectrum()
    shown = min(5, spec.levels)
    run.say("📊 eigenvalues: " + ", ".join(f"{x:.10g}" for x in spec.lam[:shown]))
    if run.config.sink_rate > 0:
        sink = sink_spectrum(spec, run.config.sink_rate, shown)
        run.say(f"📊 poles (k = {run.config.sink_rate:g}): " + ", ".join(f"{x:.10g}" for x in sink.nu))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[Run], int]] = {
    'validate': cmd_validate,
    'spectrum': cmd_spectrum,
    'solve': cmd_solve,
    'sink': cmd_sink,
    'asym': cmd_asym,
    'oracle-check': cmd_oracle_check,
    'mc': cmd_mc,
    'report': cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=DEFAULT_CONFIG, help=f"scenario file (default: {DEFAULT_CONFIG})")
    common.add_argument("--out", default=DEFAULT_OUT, help=f"output directory (default: {DEFAULT_OUT})")
    common.add_argument("--seed", type=int, default=None, help="override the configured seed")
    common.add_argument("--tol", type=float, default=None, help="override the subcommand tolerance")
    common.add_argument("--quiet", action="store_true", help="no progress output")

    parser = argparse.ArgumentParser(prog="ultradiff", description="Diffusion on ultrametric hierarchies")
    parser.add_argument("--version", action="version", version=f"ultradiff {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("validate", "report"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--probe-depth", type=int, default=32)
        if name == "validate":
            p.add_argument("--require-limit", action="store_true", help="also require the limit scenario")
    for name in ("spectrum", "solve", "sink"):
        sub.add_parser(name, parents=[common])
    asym = sub.add_parser("asym", parents=[common])
    asym.add_argument("--theorem", type=int, choices=[2, 3, 4], required=True)
    asym.add_argument("--a", type=float, default=2.0, help="weight ratio of the geometric series")
    asym.add_argument("--b", type=float, default=2.0, help="rate ratio of the geometric series")
    for name in ("oracle-check", "mc"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--depth", type=int, default=None, help="finite depth of the oracle tree")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_run_config(args.config)
        if args.seed is not None:
            config = config.model_copy(update={'seed': args.seed})
        run = Run(args, config)
    except UltradiffError as e:
        print(f"❌ {e}")
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](run)
    except ConfigError as e:
        print(f"❌ {e}")
        return EXIT_USAGE
    except UltradiffError as e:
        print(f"❌ {type(e).__name__}: {e}")
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
