"""Command-line front end.

Subcommands wrap the library one to one: dist and oracle write
probability tables, transition evaluates a single sector probability,
simulate estimates a law by Monte Carlo, compare joins all three with
deltas and z-scores, verify runs the algebraic identity suite.  Exit
codes triage failures: 0 success, 1 numerical alarm, 2 usage error.

All output is deterministic for a fixed configuration and seed, so
rerunning a command reproduces its file byte for byte.
"""

import argparse
import json
import re
import sys
import warnings
from dataclasses import asdict, dataclass
from itertools import permutations

import numpy as np

from .algebra import (ModelParams, all_reduced_words, amplitude,
                      component_amplitude_N3, reduced_word,
                      sector_amplitudes, vanishes)
from .dist import (EnvelopeWarning, proposition41_check_N3,
                   second_class_table, transition_probability)
from .quadrature import Contour, default_contour
from .oracle import evolve, second_class_marginal
from .qcomb import _random_circle_points, verify_identities
from .sim import estimate_pmf


@dataclass(frozen=True)
class RunConfig:
    """Parsed and validated invocation, serialized into JSON output so
    a result file records how it was produced."""

    subcommand: str
    p: float
    t: float
    y: tuple
    x_range: tuple
    radius: float
    nodes: int
    replicas: int
    seed: int
    epsilon: float
    format: str
    output: str

    @classmethod
    def from_args(cls, args):
        p = float(args.p)
        if not 0.0 < p < 1.0:
            raise ValueError("p must lie strictly between 0 and 1")
        t = float(args.t)
        if t < 0.0:
            raise ValueError("t must be nonnegative")
        y = _parse_positions(args.y)
        x_range = _parse_range(getattr(args, "x_range", None))
        return cls(
            subcommand=args.subcommand,
            p=p,
            t=t,
            y=y,
            x_range=x_range,
            radius=getattr(args, "radius", None),
            nodes=getattr(args, "nodes", None),
            replicas=getattr(args, "replicas", None),
            seed=getattr(args, "seed", None),
            epsilon=float(getattr(args, "epsilon", 1e-10)),
            format=getattr(args, "format", "csv"),
            output=getattr(args, "output", None),
        )

    def params(self):
        return ModelParams(p=self.p)

    def contour(self, k):
        if self.radius is None and self.nodes is None:
            return None
        base = default_contour(self.params(), k)
        return Contour(radius=self.radius or base.radius,
                       nodes=self.nodes or base.nodes)

    def to_dict(self):
        d = asdict(self)
        d["y"] = list(self.y)
        d["x_range"] = list(self.x_range) if self.x_range else None
        return d


def _parse_positions(text):
    try:
        values = tuple(int(v) for v in str(text).split(","))
    except ValueError:
        raise ValueError(f"cannot parse positions from {text!r}")
    if not values:
        raise ValueError("need at least one position")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("positions must be strictly increasing")
    return values

def _parse_range(text):
    if text is None:
        return None
    lo, sep, hi = str(text).partition(":")
    if not sep:
        raise ValueError("x-range must look like lo:hi")
    try:
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise ValueError(f"cannot parse x-range from {text!r}")
    if hi < lo:
        raise ValueError("x-range upper end below lower end")
    return (lo, hi)


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _emit(config, header, rows, diagnostics):
    """Write the result in the configured format, to the output path or
    stdout.  CSV numbers carry 17 significant digits; JSON keeps raw
    floats so a reparse reproduces them bitwise."""
    if config.format == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "config": config.to_dict(),
            "rows": [dict(zip(header, [None if v is None else
                                       (int(v) if isinstance(v, (int, np.integer))
                                        else float(v))
                                       for v in row])) for row in rows],
            "diagnostics": diagnostics,
        }
        text = json.dumps(payload, indent=2) + "\n"
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _alarmed(caught):
    alarms = [w for w in caught
              if issubclass(w.category, EnvelopeWarning)]
    for w in alarms:
        print(f"numerical alarm: {w.message}", file=sys.stderr)
    return bool(alarms)


def cmd_dist(args):
    config = RunConfig.from_args(args)
    params = config.params()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        table = second_class_table(params, config.y, config.t,
                                   contour=config.contour(len(config.y)),
                                   window=config.x_range,
                                   eps=config.epsilon)
    rows = list(zip(table.xs.tolist(), table.probabilities,
                    table.error_estimates, table.imag_residuals))
    diagnostics = {
        "total_mass": float(table.probabilities.sum()),
        "max_quad_error": float(table.error_estimates.max()),
        "max_imag_residual": table.max_imag_residual,
        "window": list(table.window),
    }
    _emit(config, ["x", "probability", "quad_error", "imag_residual"],
          rows, diagnostics)
    return 1 if _alarmed(caught) else 0


def cmd_transition(args):
    config = RunConfig.from_args(args)
    params = config.params()
    xs = _parse_positions(args.x)
    n = int(args.sector)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = transition_probability(params, config.y, xs, n, config.t,
                                     contour=config.contour(len(config.y)))
    rows = [(res.value.real, res.error_estimate, abs(res.value.imag))]
    diagnostics = {"nodes_used": res.nodes_used, "sector": n,
                   "x": list(xs)}
    _emit(config, ["probability", "quad_error", "imag_residual"],
          rows, diagnostics)
    return 1 if _alarmed(caught) else 0


def cmd_simulate(args):
    config = RunConfig.from_args(args)
    params = config.params()
    track = "rightmost" if args.single_species else "second_class"
    est = estimate_pmf(params, config.y, config.t, config.replicas,
                       config.seed, track=track)
    rows = [(int(x), m, s, config.replicas)
            for x, m, s in zip(est.xs, est.means, est.stderrs)]
    diagnostics = {"replicas": config.replicas, "seed": config.seed,
                   "track": track}
    _emit(config, ["x", "estimate", "stderr", "replicas"],
          rows, diagnostics)
    return 0


def cmd_oracle(args):
    config = RunConfig.from_args(args)
    params = config.params()
    vec = evolve(params, config.y, config.t, epsilon=config.epsilon,
                 window=config.x_range)
    table = second_class_marginal(vec)
    rows = list(zip(table.xs.tolist(), table.probabilities,
                    table.error_estimates, table.imag_residuals))
    diagnostics = {
        "total_mass": float(table.probabilities.sum()),
        "alarm_mass": vec.alarm_mass,
        "truncation_order": vec.truncation_order,
        "window": list(table.window),
    }
    _emit(config, ["x", "probability", "quad_error", "imag_residual"],
          rows, diagnostics)
    return 0


def cmd_compare(args):
    config = RunConfig.from_args(args)
    params = config.params()
    n = len(config.y)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        table = second_class_table(params, config.y, config.t,
                                   contour=config.contour(n),
                                   window=config.x_range,
                                   eps=config.epsilon)
    oracle_table = None
    if n <= 3:
        vec = evolve(params, config.y, config.t, epsilon=config.epsilon)
        oracle_table = second_class_marginal(vec)
    est = estimate_pmf(params, config.y, config.t, config.replicas,
                       config.seed)

    rows = []
    worst_delta = 0.0
    worst_z = 0.0
    for x, formula in zip(table.xs.tolist(), table.probabilities):
        formula = float(formula)
        if oracle_table is not None:
            try:
                oracle_value = oracle_table.probability(x)
            except KeyError:
                oracle_value = 0.0
            delta = formula - oracle_value
            worst_delta = max(worst_delta, abs(delta))
        else:
            oracle_value = None
            delta = None
        mc = est.mean_of(x)
        variance = max(mc * (1.0 - mc), formula * (1.0 - formula))
        se = np.sqrt(variance / config.replicas)
        z = (mc - formula) / se if se > 0.0 else 0.0
        worst_z = max(worst_z, abs(z))
        rows.append((x, formula, oracle_value, mc, delta, z))

    alarm = (not rows
             or args.max_delta <= 0.0
             or args.max_z <= 0.0
             or (oracle_table is not None and worst_delta > args.max_delta)
             or worst_z > args.max_z)
    diagnostics = {
        "max_abs_delta_oracle": worst_delta if oracle_table else None,
        "max_abs_z": worst_z,
        "replicas": config.replicas,
        "seed": config.seed,
        "thresholds": {"max_delta": args.max_delta, "max_z": args.max_z},
    }
    _emit(config, ["x", "formula", "oracle", "mc", "delta_oracle", "z_mc"],
          rows, diagnostics)
    if alarm:
        print(f"comparison outside thresholds: max |delta| = {worst_delta:g},"
              f" max |z| = {worst_z:g}", file=sys.stderr)
        return 1
    return 1 if _alarmed(caught) else 0


def _verify_braid(params, rng):
    """Every reduced word of the same permutation must produce the same
    sector amplitudes."""
    worst = 0.0
    for n in range(2, 5):
        xi = _random_circle_points(rng, n, params.p / 2)
        for sigma in permutations(range(1, n + 1)):
            words = all_reduced_words(sigma)
            base = np.asarray(sector_amplitudes(params, words[0], xi).amps)
            scale = max(float(np.abs(base).max()), 1e-30)
            for word in words[1:]:
                other = np.asarray(
                    sector_amplitudes(params, word, xi).amps)
                worst = max(worst,
                            float(np.abs(other - base).max()) / scale)
    return worst


def _verify_split(params, rng):
    """At N = 3 every sector amplitude equals the sum of its plus and
    minus components, and amplitudes vanish when the rule says so."""
    worst = 0.0
    xi = _random_circle_points(rng, 3, params.p / 2)
    for sigma in permutations((1, 2, 3)):
        word = reduced_word(sigma)
        for n in (1, 2, 3):
            full = amplitude(params, word, xi, n)
            if vanishes(sigma, n):
                worst = max(worst, abs(full))
                continue
            split = (component_amplitude_N3(params, sigma, xi, n, "+")
                     + component_amplitude_N3(params, sigma, xi, n, "-"))
            worst = max(worst, abs(full - split) / max(abs(full), 1e-30))
    return worst


def cmd_verify(args):
    config = RunConfig.from_args(args)
    params = config.params()
    seed = config.seed if config.seed is not None else 0
    rng = np.random.default_rng(seed)

    checks = verify_identities(params, n_max=args.n_max,
                               trials=args.trials, seed=seed)
    checks.append({"name": "braid word invariance",
                   "max_rel_err": _verify_braid(params, rng),
                   "tol": 1e-11, "passed": None})
    checks.append({"name": "plus/minus component split",
                   "max_rel_err": _verify_split(params, rng),
                   "tol": 1e-11, "passed": None})
    for n in (1, 2, 3):
        report = proposition41_check_N3(params, (-2, -1, 0), config.t,
                                        0, n)
        checks.append({"name": f"slot recursion, n = {n}",
                       "max_rel_err": report["abs_difference"],
                       "tol": 1e-6, "passed": None})
    failures = 0
    for check in checks:
        ok = check["max_rel_err"] < check["tol"]
        failures += 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'}  {check['name']}"
              f"  (err {check['max_rel_err']:.3e}, tol {check['tol']:g})")
    print(f"{len(checks) - failures}/{len(checks)} checks passed")
    return 1 if failures else 0


def _add_common(sp):
    sp.add_argument("--config", help="key=value file pre-populating "
                    "flags; explicit flags win")
    sp.add_argument("--p", type=float, default=0.5,
                    help="right-jump probability, in (0, 1)")
    sp.add_argument("--t", type=float, default=1.0, help="time")
    sp.add_argument("--y", default="0",
                    help="comma-separated strictly increasing start "
                    "positions")
    sp.add_argument("--epsilon", type=float, default=1e-10,
                    help="tail-mass budget for windows and truncations")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--output", help="output path (default stdout)")


def _add_contour(sp):
    sp.add_argument("--x-range", dest="x_range",
                    help="window override lo:hi")
    sp.add_argument("--radius", type=float, help="contour radius")
    sp.add_argument("--nodes", type=int, help="quadrature nodes (even)")


def _allow_negative_tokens(parser):
    """Let values like -1,0 or -5:5 through argparse's option sniffing.
    Every real option here starts with a letter, so any token opening
    with a minus and a digit is data, not a flag."""
    parser._negative_number_matcher = re.compile(r"^-\d")
    return parser


def build_parser():
    parser = _allow_negative_tokens(argparse.ArgumentParser(
        prog="asep2",
        description="Exact and simulated laws of the two-species "
        "exclusion process started from step initial data."))
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("dist", help="table of the second-class "
                        "particle's law")
    _add_common(sp)
    _add_contour(sp)
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("transition", help="one sector transition "
                        "probability")
    _add_common(sp)
    _add_contour(sp)
    sp.add_argument("--x", required=True,
                    help="comma-separated target positions")
    sp.add_argument("--sector", type=int, required=True,
                    help="rank of the second-class particle in the "
                    "target ordering")
    sp.set_defaults(func=cmd_transition)

    sp = sub.add_parser("simulate", help="Monte Carlo estimate of the "
                        "law")
    _add_common(sp)
    sp.add_argument("--replicas", type=int, default=100000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--single-species", action="store_true",
                    help="drop the second-class particle and track the "
                    "rightmost one")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("oracle", help="exact master-equation table")
    _add_common(sp)
    sp.add_argument("--x-range", dest="x_range",
                    help="window override lo:hi")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("compare", help="formula vs oracle vs Monte "
                        "Carlo")
    _add_common(sp)
    _add_contour(sp)
    sp.add_argument("--replicas", type=int, default=100000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--max-delta", type=float, default=1e-6,
                    help="largest tolerated |formula - oracle|")
    sp.add_argument("--max-z", type=float, default=4.0,
                    help="largest tolerated Monte Carlo z-score")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("verify", help="algebraic identity suite")
    _add_common(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--n-max", dest="n_max", type=int, default=6)
    sp.set_defaults(func=cmd_verify)

    for child in sub.choices.values():
        _allow_negative_tokens(child)
    return parser


def _inject_config_file(argv):
    """Expand --config FILE into flags placed right after the
    subcommand, so flags given on the command line override them."""
    path = None
    rest = list(argv)
    for i, token in enumerate(rest):
        if token == "--config" and i + 1 < len(rest):
            path = rest[i + 1]
            del rest[i:i + 2]
            break
        if token.startswith("--config="):
            path = token.split("=", 1)[1]
            del rest[i]
            break
    if path is None:
        return rest
    injected = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"config line without '=': {line!r}")
            flag = "--" + key.strip().replace("_", "-")
            injected += [flag, value.strip()]
    return rest[:1] + injected + rest[1:]


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        argv = _inject_config_file(argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numerical alarm: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
