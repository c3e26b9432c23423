"""Command-line front end: ``dmim {dmim,curve,plan,ks,simulate}``.

Every command writes one table to stdout, as CSV (header first) or JSON.
Exit codes: 0 success, 2 usage or parameter error, 3 numerical failure,
4 file or parse error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import gof, measures, montecarlo
from .distributions import Exponential, Normal, Uniform
from .errors import DmimError, InvalidParams

SCHEMA_VERSION = "1"

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


class InputError(Exception):
    """Unreadable or malformed input file."""


@dataclass
class OutputRecord:
    command: str
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def add(self, *row):
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} cells, header has {len(self.columns)}")
        self.rows.append(tuple(row))

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(_csv_cell(v) for v in row) + "\n")
        return out.getvalue()

    def to_json(self) -> str:
        doc = {
            "schema_version": self.schema_version,
            "command": self.command,
            "params": {k: _json_cell(v) for k, v in self.params.items()},
            "columns": self.columns,
            "rows": [[_json_cell(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc) + "\n"


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return int(bool(v))
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(format(float(v), ".17g"))
    return v


# --- argument handling ------------------------------------------------------

def _family_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--uniform", dest="family", action="store_const", const="uniform")
    g.add_argument("--normal", dest="family", action="store_const", const="normal")
    g.add_argument("--exponential", dest="family", action="store_const", const="exponential")
    p.add_argument("--a", type=float, help="uniform lower endpoint")
    p.add_argument("--b", type=float, help="uniform upper endpoint")
    p.add_argument("--mu", type=float, default=0.0, help="normal/uniform mean (default 0)")
    p.add_argument("--sigma", type=float,
                   help="standard deviation; for uniform/exponential picks the matched member")
    p.add_argument("--lambda", dest="lam", type=float, help="exponential rate")


def _spec(args):
    if args.family == "uniform":
        if args.a is not None and args.b is not None:
            return Uniform(args.a, args.b)
        if args.sigma is not None:
            return Uniform.from_std(args.sigma, args.mu)
        raise InvalidParams("--uniform needs --a and --b, or --sigma")
    if args.family == "normal":
        return Normal(args.mu, 1.0 if args.sigma is None else args.sigma)
    if args.lam is not None:
        return Exponential(args.lam)
    if args.sigma is not None:
        return Exponential.from_std(args.sigma)
    raise InvalidParams("--exponential needs --lambda or --sigma")


def _spec_params(spec) -> dict:
    params = {"family": spec.name}
    if isinstance(spec, Uniform):
        params.update(a=spec.a, b=spec.b)
    elif isinstance(spec, Normal):
        params.update(mu=spec.mu, sigma=spec.sigma)
    else:
        params.update(**{"lambda": spec.lam})
    return params


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


# --- commands ---------------------------------------------------------------

DMIM_METHODS = ("auto", "closed", "series", "approx-exp", "approx-linear", "quadrature", "renyi")


def cmd_dmim(args) -> OutputRecord:
    spec = _spec(args)
    rec = OutputRecord("dmim", ["method", "value", "error_bound", "terms"])
    rec.params.update(_spec_params(spec))
    method = args.method
    if method == "auto":
        method = {"uniform": "closed", "exponential": "closed", "normal": "series"}[spec.name]
    normal_only = ("series", "approx-exp", "approx-linear")
    if method in normal_only and not isinstance(spec, Normal):
        raise InvalidParams(f"--method {method} is only defined for --normal")
    if method == "closed":
        if isinstance(spec, Normal):
            raise InvalidParams("the normal DMIM has no closed form; use --method series")
        rec.add(method, measures.dmim(spec), 0.0, None)
    elif method == "series":
        r = measures.dmim_normal_series(spec.sigma)
        rec.add(method, r.value, r.truncation_bound, r.terms_used)
    elif method == "approx-exp":
        rec.add(method, measures.dmim_normal_approx_exp(spec.sigma), None, None)
    elif method == "approx-linear":
        rec.add(method, measures.dmim_normal_approx_linear(spec.sigma), None, None)
    elif method == "quadrature":
        q = measures.dmim_quadrature(spec, full_output=True)
        rec.add(method, q.value, q.error_estimate, q.subdivisions)
    else:
        r = measures.dmim_via_renyi_series(spec, args.terms)
        rec.add(method, r.value, r.truncation_bound, r.terms_used)
    return rec


def fig1_rows(sigmas):
    """(sigma, rel_err_exp, rel_err_linear) against the exact DMIM."""
    for s in sigmas:
        exact = measures.dmim(Normal(0.0, s))
        yield (
            s,
            abs(measures.dmim_normal_approx_exp(s) - exact) / exact,
            abs(measures.dmim_normal_approx_linear(s) - exact) / exact,
        )


def fig2_rows(variances):
    """(variance, l_uniform, l_normal, l_exponential) at matched variance."""
    for v in variances:
        s = math.sqrt(v)
        yield (
            v,
            measures.dmim(Uniform.from_std(s)),
            measures.dmim(Normal(0.0, s)),
            measures.dmim(Exponential.from_std(s)),
        )


def cmd_curve(args) -> OutputRecord:
    lo, hi, points = args.min, args.max, args.points
    if args.figure == "fig1":
        lo, hi = (0.1 if lo is None else lo), (10.0 if hi is None else hi)
        points = 100 if points is None else points
        columns, rows = ["sigma", "rel_err_exp", "rel_err_linear"], fig1_rows
    else:
        lo, hi = (0.1 if lo is None else lo), (100.0 if hi is None else hi)
        points = 30 if points is None else points
        columns, rows = ["variance", "l_uniform", "l_normal", "l_exponential"], fig2_rows
    if not (0 < lo < hi) or points < 2:
        raise InvalidParams("need 0 < --min < --max and --points >= 2")
    rec = OutputRecord("curve", columns)
    rec.params.update(figure=args.figure, min=lo, max=hi, points=points)
    for row in rows(float(x) for x in np.geomspace(lo, hi, points)):
        rec.add(*row)
    return rec


def cmd_plan(args) -> OutputRecord:
    spec = _spec(args)
    plan = gof.make_plan(spec, args.epsilon, args.beta)
    rec = OutputRecord(
        "plan", ["epsilon", "beta", "sigma", "d", "n", "n_sharp", "tail_bound", "achievable"]
    )
    rec.params.update(_spec_params(spec))
    rec.add(plan.epsilon, plan.beta, plan.sigma, plan.d, plan.n, plan.n_sharp,
            plan.tail_bound, plan.achievable)
    return rec


def read_samples(path: str) -> list[float]:
    """One float per line; blank lines and ``#`` comments are skipped."""
    values = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                text = line.split("#", 1)[0].strip()
                if not text:
                    continue
                try:
                    values.append(float(text))
                except ValueError:
                    raise InputError(f"{path}:{lineno}: not a number: {text!r}") from None
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    if not values:
        raise InputError(f"{path}: no samples")
    return values


def cmd_ks(args) -> OutputRecord:
    spec = _spec(args)
    ecdf = gof.empirical_cdf(read_samples(args.samples))
    stat = gof.ks_statistic(ecdf, spec.cdf)
    rec = OutputRecord("ks", ["n", "D_n", "p_value", "upper_bound"])
    rec.params.update(_spec_params(spec), samples=args.samples)
    rec.add(ecdf.n, stat, gof.ks_tail_series(ecdf.n, stat), gof.ks_tail_upper_bound(ecdf.n, stat))
    return rec


def cmd_simulate(args) -> OutputRecord:
    spec = _spec(args)
    d, beta = args.d, args.beta
    if d is None and beta is None:
        d = 0.01
    config = montecarlo.SimConfig(
        spec,
        montecarlo.default_epsilon_grid(args.points, args.eps_min, args.eps_max),
        d=d,
        beta=beta,
        trials=args.trials,
        master_seed=args.seed,
        n_rule=args.n_rule,
    )
    reports = montecarlo.estimate_exceedance(config)
    rec = OutputRecord(
        "simulate", ["epsilon", "n", "d", "exceedance", "std_error", "trials", "seed"]
    )
    rec.params.update(_spec_params(spec), seed=args.seed, trials=args.trials,
                      n_rule=config.n_rule.value, d=d, beta=beta)
    for r in reports:
        rec.add(r.epsilon, r.n, r.d, r.exceedance_estimate, r.std_error, r.trials, r.seed)
    return rec


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(
        prog="dmim", description="Differential message importance measure toolkit."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dmim", parents=[fmt], help="DMIM of a distribution")
    _family_args(p)
    p.add_argument("--method", choices=DMIM_METHODS, default="auto")
    p.add_argument("--terms", type=int, default=10, help="partial-sum length for --method renyi")
    p.set_defaults(func=cmd_dmim)

    p = sub.add_parser("curve", parents=[fmt], help="data for the error and variance curves")
    p.add_argument("figure", choices=("fig1", "fig2"))
    p.add_argument("--min", type=float)
    p.add_argument("--max", type=float)
    p.add_argument("--points", type=int)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("plan", parents=[fmt], help="sample size and KS guarantee")
    _family_args(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("ks", parents=[fmt], help="KS statistic of a sample file")
    _family_args(p)
    p.add_argument("--samples", required=True, help="file with one value per line")
    p.set_defaults(func=cmd_ks)

    p = sub.add_parser("simulate", parents=[fmt], help="Monte Carlo P{D_n > d} sweep")
    _family_args(p)
    p.add_argument("--trials", type=int, default=montecarlo.DEFAULT_TRIALS)
    p.add_argument("--seed", type=_seed, default=montecarlo.DEFAULT_SEED)
    dg = p.add_mutually_exclusive_group()
    dg.add_argument("--d", type=float, help="KS deviation (default 0.01)")
    dg.add_argument("--beta", type=float, help="derive d per epsilon at this confidence")
    p.add_argument("--eps-min", type=float, default=1e-3)
    p.add_argument("--eps-max", type=float, default=1e-1)
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--n-rule", choices=[r.value for r in montecarlo.NRule],
                   default=montecarlo.NRule.DISTRIBUTION_FREE.value)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        record = args.func(args)
    except InputError as exc:
        print(f"dmim: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvalidParams as exc:
        print(f"dmim: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DmimError, ArithmeticError) as exc:
        print(f"dmim: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = record.to_json() if args.format == "json" else record.to_csv()
    sys.stdout.write(text)
    return EXIT_OK
