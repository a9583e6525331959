"""Command-line front end.

Input files are JSON documents::

    {"modes": [2, 2], "gamma": [[...], ...], "constraints": [[[...]], ...]}

``constraints`` is optional. Exit codes: 0 ran (verdict in the report),
2 input error, 3 solver failure.
"""

import argparse
import hashlib
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__, states
from .product import decompose_xp, product_value
from .symplectic import ModePartition, p_measure, pinch_xp
from .witness import (
    BOUNDARY,
    ENTANGLED,
    SEPARABLE,
    InfeasibleConstraintsError,
    WitnessError,
    fully_wit,
    multi_wit,
    validate_multipartite_witness,
    validate_witness,
)

SCHEMA = "cvwitness.report/1"
EXIT_OK, EXIT_INPUT, EXIT_SOLVER = 0, 2, 3


class InputError(ValueError):
    """Bad input file or flags; ``code`` names the failure kind."""

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _matrix(obj, what):
    try:
        M = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError("malformed", f"{what} is not a numeric matrix: {exc}") from None
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise InputError("malformed", f"{what} must be a 2n x 2n matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("malformed", f"{what} has non-finite entries")
    if np.max(np.abs(M - M.T)) > 1e-10 * max(1.0, np.max(np.abs(M))):
        raise InputError("asymmetric", f"{what} is not symmetric")
    return 0.5 * (M + M.T)


def _partition(sizes, n):
    try:
        part = ModePartition(sizes)
    except (TypeError, ValueError) as exc:
        raise InputError("partition_mismatch", f"bad partition {sizes!r}: {exc}") from None
    if part.modes != n:
        raise InputError("partition_mismatch", f"partition {list(part.sizes)} covers {part.modes} modes, matrix has {n}")
    return part


def parse_partition(text):
    try:
        return [int(s) for s in text.replace(" ", "").split(",") if s]
    except ValueError:
        raise InputError("partition_mismatch", f"cannot parse partition {text!r}") from None


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError("io", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError("malformed", f"{path} is not valid JSON: {exc}") from None


def parse_input(path, partition=None):
    """Read ``(gamma, partition, constraints)`` from a JSON input file.

    ``partition`` overrides the file's ``modes`` field.
    """
    doc = _load_json(path)
    if not isinstance(doc, dict) or "gamma" not in doc:
        raise InputError("malformed", f"{path}: expected an object with a 'gamma' field")
    gamma = _matrix(doc["gamma"], "gamma")
    n = gamma.shape[0] // 2
    sizes = partition if partition is not None else doc.get("modes", [1] * n)
    part = _partition(sizes, n)
    constraints = []
    raw = doc.get("constraints") or []
    if not isinstance(raw, list):
        raise InputError("malformed", "'constraints' must be a list of matrices")
    for i, A in enumerate(raw):
        A = _matrix(A, f"constraint {i}")
        if A.shape != gamma.shape:
            raise InputError("malformed", f"constraint {i} has shape {A.shape}, expected {gamma.shape}")
        constraints.append(A)
    return gamma, part, constraints


def _tolist(M):
    return None if M is None else np.asarray(M, dtype=float).tolist()


def _digest(gamma, part, constraints):
    payload = json.dumps(
        {"gamma": _tolist(gamma), "modes": list(part.sizes), "constraints": [_tolist(A) for A in constraints]},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _clean(obj):
    """Make floats JSON-safe (NaN/inf become null) and numpy scalars plain."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    return obj


def _conditions(report):
    return {
        "psd": report.psd,
        "min_eigenvalue": report.min_eigenvalue,
        "block_str_sum": report.block_str_sum,
        "total_str": report.total_str,
        "cond_i": report.cond_i,
        "cond_ii": report.cond_ii,
        "cond_iii": report.cond_iii,
        "is_witness": report.is_witness,
        "split_str_sums": report.split_str_sums,
    }


def _verdict(x_e, tol):
    if abs(x_e) < 10 * tol:
        return BOUNDARY
    return ENTANGLED if x_e < 0 else SEPARABLE


def witness_report(task, gamma, part, constraints, tol=1e-8, include_witness=True):
    """Run ``fullywit`` or ``multiwit`` and build the report dict."""
    solver = fully_wit if task == "fullywit" else multi_wit
    base = {
        "schema": SCHEMA,
        "tool": "cvwitness",
        "version": __version__,
        "task": task,
        "input_digest": _digest(gamma, part, constraints),
        "modes": list(part.sizes),
        "tolerance": tol,
    }
    try:
        res = solver(gamma, part, constraints, tol=tol)
    except InfeasibleConstraintsError as exc:
        sol = exc.solution
        base.update(
            status="no_witness",
            message=str(exc),
            c=None,
            x_e=None,
            entangled=False,
            verdict="undetermined",
            p_measure=None,
            witness=None,
            conditions=None,
            product_value_pinched=None,
            solver={"status": sol.status, "iterations": sol.iterations, "gap": None},
        )
        return _clean(base)
    verdict = _verdict(res.x_e, tol)
    Zpinch = pinch_xp(res.Z)
    base.update(
        status=res.status,
        c=res.c,
        x_e=res.x_e,
        entangled=verdict == ENTANGLED,
        verdict=verdict,
        p_measure=p_measure(res.x_e) if res.x_e > -1 else None,
        witness=_tolist(res.Z) if include_witness else None,
        conditions=_conditions(res.conditions),
        product_value_pinched=product_value(decompose_xp(Zpinch), gamma),
        solver={"status": res.status, "iterations": res.iterations, "gap": res.gap},
    )
    return _clean(base)


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _emit(doc, output):
    text = dumps(doc)
    if output in (None, "-"):
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cvwitness-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cmd_witness(args):
    part = parse_partition(args.partition) if args.partition else None
    gamma, part, constraints = parse_input(args.input, part)
    return witness_report(args.command, gamma, part, constraints, args.tol, not args.no_witness)


def _load_witness(path):
    doc = _load_json(path)
    if isinstance(doc, dict):
        for key in ("witness", "Z"):
            if doc.get(key) is not None:
                return _matrix(doc[key], "witness"), doc
        raise InputError("malformed", f"{path}: no 'witness' or 'Z' field")
    return _matrix(doc, "witness"), {}


def _cmd_validate(args):
    Z, doc = _load_witness(args.witness)
    sizes = parse_partition(args.partition) if args.partition else doc.get("modes", [1] * (Z.shape[0] // 2))
    part = _partition(sizes, Z.shape[0] // 2)
    if args.multipartite:
        if part.parties < 2:
            raise InputError("partition_mismatch", "multipartite validation needs at least two parties")
        report = validate_multipartite_witness(Z, part)
    else:
        report = validate_witness(Z, part)
    return _clean(
        {
            "schema": SCHEMA,
            "tool": "cvwitness",
            "version": __version__,
            "task": "validate",
            "modes": list(part.sizes),
            "multipartite": bool(args.multipartite),
            "conditions": _conditions(report),
        }
    )


def _cmd_product(args):
    Z, _ = _load_witness(args.witness)
    part = parse_partition(args.partition) if args.partition else None
    gamma, part, _ = parse_input(args.input, part)
    if Z.shape != gamma.shape:
        raise InputError("malformed", f"witness shape {Z.shape} does not match covariance {gamma.shape}")
    pw = decompose_xp(Z)
    report = (validate_multipartite_witness if args.multipartite else validate_witness)(Z, part)
    value = product_value(pw, gamma)
    return _clean(
        {
            "schema": SCHEMA,
            "tool": "cvwitness",
            "version": __version__,
            "task": "product",
            "modes": list(part.sizes),
            "linear_value": float(np.sum(Z * gamma)),
            "product_value": value,
            "threshold": 0.25,
            "witness_valid": report.is_witness,
            "entangled": bool(report.is_witness and value < 0.25 - args.tol),
        }
    )


def _cmd_state(args):
    try:
        if args.name == "ghz":
            cov = states.ghz_covariance(args.parties, args.r1, args.r2)
        elif args.name == "ww":
            cov = states.ww_state()
        elif args.name == "swap":
            cov = states.swap_state(args.r, args.alpha)
        elif args.name == "tms":
            cov = states.two_mode_squeezed(args.r)
        else:
            cov = states.random_covariance(args.modes, args.mix, args.seed)
    except ValueError as exc:
        raise InputError("bad_parameter", str(exc)) from None
    return {"modes": list(cov.partition.sizes), "gamma": _tolist(cov.entries)}


def build_parser():
    parser = argparse.ArgumentParser(prog="cvwitness", description="Optimal second-moment entanglement witnesses.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=1e-8, help="solver tolerance (default 1e-8)")
        p.add_argument("--output", "-o", default=None, help="report file (default stdout)")
        p.add_argument("--partition", default=None, help="modes per party, e.g. 2,2 (overrides the file)")

    for name, text in (("fullywit", "witness against full separability"), ("multiwit", "witness against bi-separability")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--input", "-i", required=True)
        p.add_argument("--no-witness", action="store_true", help="omit the witness matrix from the report")
        common(p)

    p = sub.add_parser("validate", help="check the witness conditions for a matrix")
    p.add_argument("--witness", "-w", required=True)
    p.add_argument("--multipartite", action="store_true", help="check against bi-separability")
    common(p)

    p = sub.add_parser("product", help="evaluate the product criterion of a witness on a covariance")
    p.add_argument("--witness", "-w", required=True)
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--multipartite", action="store_true")
    common(p)

    p = sub.add_parser("state", help="emit an example covariance matrix as an input file")
    p.add_argument("name", choices=["ghz", "ww", "swap", "tms", "random"])
    p.add_argument("--parties", type=int, default=3)
    p.add_argument("--r1", type=float, default=np.log(2) / 2)
    p.add_argument("--r2", type=float, default=np.log(2) / 2)
    p.add_argument("--r", type=float, default=2 * np.log(2) / 3)
    p.add_argument("--alpha", type=float, default=5.0)
    p.add_argument("--modes", type=int, default=2)
    p.add_argument("--mix", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", default=None)
    return parser


COMMANDS = {
    "fullywit": _cmd_witness,
    "multiwit": _cmd_witness,
    "validate": _cmd_validate,
    "product": _cmd_product,
    "state": _cmd_state,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        doc = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except WitnessError as exc:
        print(f"error[solver]: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    _emit(doc, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
