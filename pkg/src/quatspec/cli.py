"""Command-line interface: ``quatspec <command> [flags]``.

Exit codes: 0 success, 1 a verification found residuals above ``--tol``,
2 bad input, 3 numerical breakdown or non-convergence.
"""

import argparse
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import json
import math
import sys

from .errors import EmptyWindowError, NotConvergedError
from .invariants import fredholm_poly, standard_eigenvalues, verify_identities
from .opmodel.growth import coefficient_decay_check, det_coefficients, order_bound, order_estimate
from .opmodel.models import (
    DEFAULT_N_MAX,
    ENUMERATIONS,
    KernelModel,
    compose_schatten_bound,
    composition_exponent,
    composition_norms,
    fredholm_det_limit,
    model_from_json,
)
from .opmodel.svd import schatten_norm, singular_values, trace_norm_submultiplicative, weyl_check
from .qmatrix import QMatrix
from .sampling import random_qmatrix, trial_rng

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

VERIFY_MAX_N = 16
WEYL_EXPONENTS = (1.0, 1.5, 2.0)
COMMANDS = ("invariants", "eigs", "detpoly", "svd", "verify", "converge", "growth", "compose")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str = None
    seed: int = 0
    tol: float = 1e-10
    trials: int = 100
    n: int = 4
    output: str = "-"
    format: str = "json"
    workers: int = 1
    z: float = 1.0
    n_max: int = DEFAULT_N_MAX
    sign: str = "minus_zA"
    truncation: int = 32
    enumeration: str = "natural"


def _clean(obj):
    """Make a payload JSON-safe: non-finite floats become strings."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    return obj


def dump_json(obj):
    return json.dumps(_clean(obj), indent=2) + "\n"


def _read_input(spec):
    if spec is None:
        raise InputError("this command needs --input (a path, '-' for stdin, or inline JSON)")
    if spec == "-":
        text = sys.stdin.read()
    elif spec.lstrip().startswith("{"):
        text = spec
    else:
        try:
            with open(spec, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {spec}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def _matrix(config):
    return QMatrix.from_json(_read_input(config.input))


def _model(config):
    return model_from_json(_read_input(config.input))


def _pairs(values):
    return [[float(c.real), float(c.imag)] for c in values]


# ---------------------------------------------------------------------------
# commands; each returns (text, exit code)


def cmd_invariants(config):
    report = verify_identities(_matrix(config), config.tol)
    return dump_json(report.to_json()), EXIT_OK if report.ok else EXIT_FAILED_CHECK


def cmd_eigs(config):
    return dump_json({"eigenvalues": _pairs(standard_eigenvalues(_matrix(config)))}), EXIT_OK


def cmd_detpoly(config):
    poly = fredholm_poly(_matrix(config), sign=config.sign)
    return dump_json({"sign": config.sign, "det_poly": poly.to_json()}), EXIT_OK


def cmd_svd(config):
    A = _matrix(config)
    sv = singular_values(A)
    norms = {"1": schatten_norm(A, 1), "2": schatten_norm(A, 2), "inf": schatten_norm(A, math.inf)}
    return dump_json({"singular_values": [float(s) for s in sv], "schatten": norms}), EXIT_OK


def verify_trial(seed, trial, n, tol):
    """Residuals of one seeded trial; ``A`` and ``B`` come from stream ``(seed, trial)``."""
    rng = trial_rng(seed, trial)
    A = random_qmatrix(rng, n)
    B = random_qmatrix(rng, n)
    res = dict(verify_identities(A, tol).residuals)
    scale = max(1.0, A.frobenius())
    weyl_ok = True
    weyl = 0.0
    for p in WEYL_EXPONENTS:
        w = weyl_check(A, p)
        weyl = max(weyl, max(0.0, w.lhs - w.rhs) / scale)
        weyl_ok = weyl_ok and w.ok
    sub = trace_norm_submultiplicative(A, B)
    res["weyl"] = weyl
    res["submult"] = max(0.0, sub.lhs - sub.rhs) / max(1.0, sub.rhs)
    failed = any(res[k] >= tol for k in ("r1", "r2", "r3", "r4")) or not weyl_ok or not sub.ok
    return res, failed


def cmd_verify(config):
    if not 1 <= config.n <= VERIFY_MAX_N:
        raise InputError(f"verify supports 1 <= n <= {VERIFY_MAX_N}, got {config.n}")

    def run(t):
        return verify_trial(config.seed, t, config.n, config.tol)

    if config.workers == 1:
        results = [run(t) for t in range(config.trials)]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(run, range(config.trials)))
    keys = ("r1", "r2", "r3", "r4", "weyl", "submult")
    summary = {
        "trials": config.trials,
        "n": config.n,
        "seed": config.seed,
        "tol": config.tol,
        "max_residuals": {k: max(r[k] for r, _ in results) for k in keys},
        "failures": [t for t, (_, failed) in enumerate(results) if failed],
    }
    return dump_json(summary), EXIT_FAILED_CHECK if summary["failures"] else EXIT_OK


def _table_text(table, fmt):
    return table.to_csv() if fmt == "csv" else dump_json(table.to_json())


def cmd_converge(config):
    model = _model(config)
    try:
        limit = fredholm_det_limit(model, config.z, config.tol, config.n_max, config.enumeration)
    except NotConvergedError as exc:
        print(f"quatspec: {exc}", file=sys.stderr)
        return _table_text(exc.table, config.format), EXIT_NUMERICAL
    return _table_text(limit.table, config.format), EXIT_OK


def cmd_growth(config):
    model = _model(config)
    N = config.truncation
    coeffs = det_coefficients(model, N)
    p = model.p
    order = order_estimate(coeffs)
    checks = []
    for q in (1.1 * p, 1.5 * p, 2.0 * p):
        try:
            checks.append({"q": q, "passes": coefficient_decay_check(coeffs, p, q)})
        except EmptyWindowError:
            # too few nonzero coefficients (a polynomial): nothing can blow up
            checks.append({"q": q, "passes": None})
    report = {
        "truncation": N,
        "degree": 2 * N,
        "p": p,
        "order_estimate": order,
        "order_envelope": order_estimate(coeffs, method="envelope"),
        "order_bound": order_bound(model),
        "decay_checks": checks,
    }
    return dump_json(report), EXIT_OK


def _kernel_pair(obj):
    if isinstance(obj, dict) and "first" in obj:
        first, second = model_from_json(obj["first"]), model_from_json(obj.get("second", obj["first"]))
    else:
        first = second = model_from_json(obj)
    if not (isinstance(first, KernelModel) and isinstance(second, KernelModel)):
        raise InputError("compose needs kernel models")
    return first, second


def cmd_compose(config):
    first, second = _kernel_pair(_read_input(config.input))
    N = config.truncation
    bounds = []
    for m in (first, second):
        b = compose_schatten_bound(m, 2 * N, m.p, m.q)
        bounds.append({"norm_r": b.norm_r, "bound": b.bound, "bound_without_m": b.bound_without_m, "r": b.r,
                       "holds": bool(b.norm_r <= b.bound * (1.0 + 1e-12))})
    # exponent of the composed eigenvalue sequence: 1/r = 1/p + 1/q - 1
    r = composition_exponent(first.p, second.p, 1.0)
    small = composition_norms(first, second, N, r)
    large = composition_norms(first, second, 2 * N, r)
    report = {
        "bounds": bounds,
        "composition": {"r": r, "N": [N, 2 * N], "eigen_lr_norm": [small, large],
                        "ratio": large / small if small > 0 else 1.0},
    }
    return dump_json(report), EXIT_OK


HANDLERS = {
    "invariants": cmd_invariants,
    "eigs": cmd_eigs,
    "detpoly": cmd_detpoly,
    "svd": cmd_svd,
    "verify": cmd_verify,
    "converge": cmd_converge,
    "growth": cmd_growth,
    "compose": cmd_compose,
}


# ---------------------------------------------------------------------------
# argument parsing


def _u64(text):
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be a positive finite number")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _number(text):
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real or complex number: {text!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="QMatrix or model JSON: a path, '-' for stdin, or inline JSON")
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--tol", type=_positive_float, default=1e-10)
    common.add_argument("--trials", type=_positive_int, default=100)
    common.add_argument("--n", type=_positive_int, default=4, help="matrix size for verify")
    common.add_argument("--output", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--workers", type=_positive_int, default=1, help="threads for verify")
    common.add_argument("--z", type=_number, default=1.0, help="determinant argument for converge")
    common.add_argument("--n-max", type=_positive_int, default=DEFAULT_N_MAX)
    common.add_argument("--sign", choices=("minus_zA", "plus_zA"), default="minus_zA")
    common.add_argument("--truncation", type=_positive_int, default=32, help="model truncation for growth/compose")
    common.add_argument("--enumeration", choices=ENUMERATIONS, default="natural")

    parser = argparse.ArgumentParser(prog="quatspec", description="Quaternionic spectral invariants.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "invariants": "traces, determinant polynomial, eigenvalues and identity residuals",
        "eigs": "standard eigenvalues",
        "detpoly": "quaternionic Fredholm determinant polynomial",
        "svd": "singular values and Schatten norms",
        "verify": "seeded sweep of identity checks",
        "converge": "truncation limit of a model determinant (CSV table)",
        "growth": "order of the truncated model determinant",
        "compose": "Schatten bounds and composition eigenvalue norms of kernel models",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _config(args):
    fmt = args.format or ("csv" if args.command == "converge" else "json")
    if fmt == "csv" and args.command != "converge":
        raise InputError("--format csv is only available for converge")
    return RunConfig(
        command=args.command,
        input=args.input,
        seed=args.seed,
        tol=args.tol,
        trials=args.trials,
        n=args.n,
        output=args.output,
        format=fmt,
        workers=args.workers,
        z=args.z,
        n_max=args.n_max,
        sign=args.sign,
        truncation=args.truncation,
        enumeration=args.enumeration,
    )


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def run(config):
    """Run one command; returns ``(text, exit_code)``."""
    return HANDLERS[config.command](config)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        config = _config(args)
        text, code = run(config)
    except ArithmeticError as exc:  # NumericalError and float overflow
        print(f"quatspec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError) as exc:
        print(f"quatspec: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        _emit(text, config.output)
    except OSError as exc:
        print(f"quatspec: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
