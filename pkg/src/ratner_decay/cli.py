"""Command line interface for the decay-bound verification workflows.

Six subcommands expose the library: `envelope` and `lattice-envelope`
evaluate the closed-form constants and envelopes, `coeff` computes matrix
coefficients by quadrature and/or the governing ODE, `verify-lemma` and
`verify-theorem1` sweep the bound checks, and `mix` runs the Monte Carlo
correlation verification on the modular surface.

Output conventions: grids are CSV, reports are JSON; every artifact
starts with a reproducibility header (version, subcommand, full parameter
echo, seed where applicable) and never contains timestamps, so identical
configurations produce byte-identical output. All numbers carry 17
significant digits. Exit status is 0 on success, 2 when a verification
check fails, and 1 on usage or numeric errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from ratner_decay import __version__, bounds, constants, fourier, ode
from ratner_decay.mixing import builtin_observable, verify_corollary
from ratner_decay.models import parse_model_spec

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFICATION_FAILED = 2


def _num(x):
    """17-significant-digit rendering shared by CSV and JSON."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _json_text(obj, indent=0):
    """Deterministic JSON with 17-significant-digit numbers.

    The standard encoder pins floats to repr; this emitter exists so CSV
    and JSON artifacts quote identical digit strings. Keys keep their
    construction order, which is fixed per subcommand.
    """
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, np.bool_, int, np.integer, float, np.floating)):
        return _num(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(f"{pad}  {_json_text(v, indent + 1)}" for v in obj)
        return f"[\n{inner}\n{pad}]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(k)}: {_json_text(v, indent + 1)}" for k, v in obj.items()
        )
        return f"{{\n{inner}\n{pad}}}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _echo(params):
    return " ".join(f"{key}={_num(value) if not isinstance(value, str) else value}"
                    for key, value in sorted(params.items()))


def _csv_text(subcommand, params, header, rows):
    lines = [
        f"# ratner-decay {__version__}",
        f"# subcommand: {subcommand}",
        f"# parameters: {_echo(params)}",
        header,
    ]
    lines.extend(",".join(_num(cell) if not isinstance(cell, str) else cell for cell in row)
                 for row in rows)
    return "\n".join(lines) + "\n"


def _report_text(subcommand, params, payload):
    document = {"version": __version__, "subcommand": subcommand, "parameters": params}
    document.update(payload)
    return _json_text(document) + "\n"


def _write(text, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w") as handle:
            handle.write(text)


def _time_grid(t_min, t_max, step):
    if not (math.isfinite(t_min) and math.isfinite(t_max) and math.isfinite(step)):
        raise ValueError("time grid parameters must be finite")
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {_num(step)}")
    if t_max < t_min:
        raise ValueError(f"t-max ({_num(t_max)}) must not precede t-min ({_num(t_min)})")
    count = int(math.floor((t_max - t_min) / step + 1e-9)) + 1
    return [t_min + k * step for k in range(count)]


def _bound_rows(report, with_weights):
    rows = []
    for row in report.grid:
        cells = [row.t]
        if with_weights:
            cells.extend([row.n, row.m])
        cells.extend([row.observed, row.bound, row.ratio])
        rows.append(cells)
    return rows


def _bound_payload(report, with_weights):
    worst = report.worst()
    record = {"t": worst.t}
    if with_weights:
        record.update({"n": worst.n, "m": worst.m})
    record.update({"observed": worst.observed, "bound": worst.bound, "ratio": worst.ratio})
    return {
        "passed": bool(report.passed),
        "max_ratio": report.max_ratio,
        "slack": report.slack,
        "checks": len(report.grid),
        "worst": record,
    }


def cmd_envelope(args):
    envelope = constants.decay_envelope(args.lam)
    grid = _time_grid(args.t_min, args.t_max, args.step)
    params = {"lambda": args.lam, "t_min": args.t_min, "t_max": args.t_max, "step": args.step}
    rows = []
    for t in grid:
        b = envelope.b(t)
        rows.append([t, b, envelope.kbar, envelope.ktilde, envelope.ktilde * b])
    _write(_csv_text("envelope", params, "t,b,kbar,ktilde,bound_scale", rows), args.output)
    return EXIT_OK


def cmd_lattice_envelope(args):
    envelope = constants.lattice_envelope(args.lambda1)
    params = {"lambda1": args.lambda1}
    payload = {
        "lambda1": envelope.lambda1,
        "case": envelope.case.value,
        "ktilde_gamma": envelope.ktilde_gamma,
    }
    if envelope.sigma is not None:
        payload["sigma"] = envelope.sigma
    payload["kmax_check"] = bool(envelope.ktilde_gamma < 10.9822)
    _write(_report_text("lattice-envelope", params, payload), args.output)
    return EXIT_OK


def cmd_coeff(args):
    model = parse_model_spec(args.model)
    grid = np.array(_time_grid(args.t_min, args.t_max, args.step))
    params = {
        "model": args.model, "n": args.n, "m": args.m, "method": args.method,
        "t_min": args.t_min, "t_max": args.t_max, "step": args.step, "tol": args.tol,
    }

    quad = ode_series = None
    if args.method in ("quadrature", "both"):
        quad = ode.quadrature_series(model, args.n, args.m, grid, tol=args.tol)
    if args.method in ("ode", "both"):
        problem = ode.ode_problem_from_model(model, args.n, args.m)
        ode_series = ode.integrate_coefficient(problem, grid, tol=args.tol)

    base = quad if quad is not None else ode_series
    header = "t,re,im,abs,err_estimate"
    rows = []
    for i, t in enumerate(grid):
        value = base.values[i]
        row = [float(t), value.real, value.imag, abs(value), base.error]
        if args.method == "both":
            discrepancy = abs(ode_series.values[i] - quad.values[i])
            row.extend([abs(ode_series.values[i]), abs(quad.values[i]), discrepancy])
        rows.append(row)
    if args.method == "both":
        header += ",abs_ode,abs_quad,discrepancy"
    _write(_csv_text("coeff", params, header, rows), args.output)
    return EXIT_OK


def cmd_verify_lemma(args):
    model = parse_model_spec(args.model)
    weights = [n for n in range(-args.n_max, args.n_max + 1) if model.supports(n)]
    grid = _time_grid(args.t_min, args.t_max, args.step)
    params = {
        "model": args.model, "n_max": args.n_max,
        "t_min": args.t_min, "t_max": args.t_max, "step": args.step, "slack": args.slack,
    }
    report = bounds.check_lemma22(model, weights, weights, grid, slack=args.slack)
    if args.format == "json":
        text = _report_text("verify-lemma", params, _bound_payload(report, with_weights=True))
    else:
        text = _csv_text("verify-lemma", params, "t,n,m,observed,bound,ratio",
                         _bound_rows(report, with_weights=True))
    _write(text, args.output)
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_verify_theorem1(args):
    model = parse_model_spec(args.model)
    paths = [p for p in args.vectors.split(",") if p]
    if len(paths) != 2:
        raise ValueError(
            f"--vectors expects two comma-separated JSON paths, got {args.vectors!r}"
        )
    v = fourier.load_vector(paths[0])
    w = fourier.load_vector(paths[1])
    grid = _time_grid(args.t_min, args.t_max, args.step)
    params = {
        "model": args.model, "vectors": args.vectors,
        "t_min": args.t_min, "t_max": args.t_max, "step": args.step, "slack": args.slack,
    }
    report = bounds.verify_theorem1(model, v, w, grid, slack=args.slack)
    if args.format == "json":
        text = _report_text("verify-theorem1", params, _bound_payload(report, with_weights=False))
    else:
        text = _csv_text("verify-theorem1", params, "t,observed,bound,ratio",
                         _bound_rows(report, with_weights=False))
    _write(text, args.output)
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def _parse_observables(spec):
    names = [part for part in spec.split(",") if part]
    if not 1 <= len(names) <= 2:
        raise ValueError(f"--observables expects one or two specs, got {spec!r}")
    pair = []
    for name in names:
        if not name.startswith("builtin:"):
            raise ValueError(
                f"unknown observable spec {name!r}; expected builtin:<name>"
            )
        pair.append(builtin_observable(name[len("builtin:"):]))
    if len(pair) == 1:
        pair.append(pair[0])
    return pair


def cmd_mix(args):
    v, w = _parse_observables(args.observables)
    grid = _time_grid(args.t_min, args.t_max, args.step)
    params = {
        "observables": args.observables, "lambda1": args.lambda1,
        "samples": args.samples, "seed": args.seed,
        "t_min": args.t_min, "t_max": args.t_max, "step": args.step,
    }
    report = verify_corollary(
        v, w, grid, args.samples, args.seed, args.lambda1, threads=args.threads
    )
    if args.format == "json":
        payload = {
            "all_passed": report.all_passed,
            "samples": report.samples,
            "seed": report.seed,
            "rows": [
                {"t": row.t, "estimate": row.estimate, "stderr": row.stderr,
                 "bound": row.bound, "pass": bool(row.passed)}
                for row in report.rows
            ],
        }
        text = _report_text("mix", params, payload)
    else:
        rows = [[row.t, row.estimate, row.stderr, row.bound, bool(row.passed)]
                for row in report.rows]
        text = _csv_text("mix", params, "t,estimate,stderr,bound,pass", rows)
    _write(text, args.output)
    return EXIT_OK if report.all_passed else EXIT_VERIFICATION_FAILED


class _Parser(argparse.ArgumentParser):
    """argparse flags usage problems with exit status 2; this tool
    reserves 2 for verification failures, so remap usage errors to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_ERROR)


def _add_common_output(sub, formats=("csv",), default=None):
    sub.add_argument("--output", help="write the artifact to this path instead of stdout")
    if len(formats) > 1:
        sub.add_argument("--format", choices=formats, default=default or formats[0],
                         help="artifact shape (default: %(default)s)")


def _add_time_grid(sub, t_max_default, step_default):
    sub.add_argument("--t-min", type=float, default=1.0)
    sub.add_argument("--t-max", type=float, default=t_max_default)
    sub.add_argument("--step", type=float, default=step_default)


def build_parser():
    parser = _Parser(prog="ratner-decay", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ratner-decay {__version__}")
    commands = parser.add_subparsers(dest="subcommand", required=True)

    env = commands.add_parser("envelope", parents=[], help="tabulate a decay envelope")
    env.add_argument("--lambda", dest="lam", type=float, required=True,
                     help="Casimir eigenvalue")
    _add_time_grid(env, t_max_default=10.0, step_default=0.1)
    _add_common_output(env)
    env.set_defaults(func=cmd_envelope)

    lat = commands.add_parser("lattice-envelope",
                              help="lattice decay record for a base eigenvalue")
    lat.add_argument("--lambda1", type=float, required=True,
                     help="base Laplacian eigenvalue (negative)")
    _add_common_output(lat)
    lat.set_defaults(func=cmd_lattice_envelope)

    coeff = commands.add_parser("coeff", help="matrix coefficient along the flow")
    coeff.add_argument("--model", required=True,
                       help="principal:NU | complementary:U | discrete:K")
    coeff.add_argument("--n", type=int, required=True, help="left weight")
    coeff.add_argument("--m", type=int, required=True, help="right weight")
    coeff.add_argument("--method", choices=("quadrature", "ode", "both"),
                       default="quadrature")
    coeff.add_argument("--tol", type=float, default=1e-10)
    _add_time_grid(coeff, t_max_default=8.0, step_default=0.25)
    _add_common_output(coeff)
    coeff.set_defaults(func=cmd_coeff)

    lemma = commands.add_parser("verify-lemma",
                                help="sweep the coefficient bound over weights and times")
    lemma.add_argument("--model", required=True)
    lemma.add_argument("--n-max", type=int, default=6)
    lemma.add_argument("--slack", type=float, default=1e-6)
    _add_time_grid(lemma, t_max_default=8.0, step_default=0.25)
    _add_common_output(lemma, formats=("json", "csv"))
    lemma.set_defaults(func=cmd_verify_lemma)

    thm = commands.add_parser("verify-theorem1",
                              help="check the assembled bound for a vector pair")
    thm.add_argument("--model", required=True)
    thm.add_argument("--vectors", required=True,
                     help="two comma-separated JSON vector files")
    thm.add_argument("--slack", type=float, default=1e-6)
    _add_time_grid(thm, t_max_default=8.0, step_default=0.25)
    _add_common_output(thm, formats=("json", "csv"))
    thm.set_defaults(func=cmd_verify_theorem1)

    mix = commands.add_parser("mix", help="Monte Carlo mixing verification")
    mix.add_argument("--samples", type=int, required=True)
    mix.add_argument("--seed", type=int, required=True)
    mix.add_argument("--observables", default="builtin:sinx-bump",
                     help="one or two comma-separated observable specs")
    mix.add_argument("--lambda1", type=float, required=True)
    mix.add_argument("--threads", type=int, default=None,
                     help="worker threads (default: RATNER_THREADS or cpu count)")
    _add_time_grid(mix, t_max_default=3.0, step_default=0.5)
    _add_common_output(mix, formats=("csv", "json"))
    mix.set_defaults(func=cmd_mix)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
