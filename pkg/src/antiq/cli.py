"""Command-line front end: ``antiq <command> [options]``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
or input errors. Reports are JSON on stdout (compact, or indented with
``--human``).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

import numpy as np

from . import jsonio
from ._linalg import hermiticity_violation
from .antilinear import AntilinearSuperOp, channel_report
from .bloch import (BlochVector, _membership_from_matrix, from_bloch, is_bloch_body,
                    to_bloch)
from .distribution import distribution_report
from .errors import AntiqError
from .geometry import (GeometricTransform, apply_transform, lorentz_metric, lorentz_norm,
                       random_lorentz, random_rotation, verify_eq_R)
from .hs_basis import ggm_basis, product_basis, verify_hs_basis
from .sampling import haar_state, random_antilinear_channel, rng_from
from .theta import (ThetaSignature, all_plus, full_parity, theta_concurrence, theta_fidelity)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive_int(lo: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v
    return parse


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def resolve_tol(cli_value: float | None, default: float) -> float:
    """``--tol`` wins, then ``ANTIQ_TOL``, then the command default."""
    if cli_value is not None:
        return cli_value
    env = os.environ.get("ANTIQ_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"ANTIQ_TOL is not a number: {env!r}")
    return default


def read_json(path: str) -> Any:
    text = sys.stdin.read() if path == "-" else _read_file(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"parse error in {path}: line {exc.lineno} column {exc.colno}: {exc.msg}")


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _load_state(data: Any) -> np.ndarray:
    """A density matrix from ``{"matrix": ...}``, ``{"psi": ...}`` or ``{"x": ..., "d": ...}``."""
    try:
        return _decode_state(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, AntiqError):
            raise
        raise UsageError(f"malformed state: {exc}")


def _decode_state(data: Any) -> np.ndarray:
    if isinstance(data, list):
        return jsonio.decode_matrix(data)
    if not isinstance(data, dict):
        raise UsageError("state JSON must be an object or a matrix")
    if "matrix" in data:
        return jsonio.decode_matrix(data["matrix"])
    if "psi" in data:
        psi = jsonio.decode_matrix([data["psi"]])[0]
        return np.outer(psi, psi.conj())
    if "x" in data:
        d = int(data["d"])
        n = int(data.get("n", 1))
        b = product_basis(ggm_basis(d), n) if n > 1 else ggm_basis(d)
        return from_bloch(np.asarray(data["x"], dtype=float).reshape(-1), b)
    raise UsageError("state JSON needs one of 'matrix', 'psi', 'x'")


def _signature(text: str, d: int) -> ThetaSignature:
    if text == "full":
        return full_parity(d)
    if text == "plus":
        return all_plus(d)
    try:
        signs = [int(s) for s in text.split(",")]
    except ValueError:
        raise UsageError(f"signature must be 'full', 'plus' or comma-separated signs, got {text!r}")
    return ThetaSignature(d, tuple(signs))


# ---------------------------------------------------------------------------
# commands

def cmd_basis(args) -> tuple[dict, int]:
    if args.d < 2:
        raise UsageError(f"--d must be at least 2, got {args.d}")
    b = ggm_basis(args.d)
    rep = verify_hs_basis(b, resolve_tol(args.tol, 1e-12))
    out = {"d": b.d, "tag": b.tag, "count": len(b.elements), "labels": list(b.labels),
           "elements": b.to_json()["elements"], "report": rep.to_json()}
    return out, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_check_state(args) -> tuple[dict, int]:
    tol = resolve_tol(args.tol, DEFAULT_TOL)
    rho = _load_state(read_json(args.input))
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise UsageError(f"state must be square, got shape {rho.shape}")
    d = rho.shape[0]
    herm = hermiticity_violation(rho)
    h = (rho + rho.conj().T) / 2
    tr = float(np.trace(h).real)
    mem = _membership_from_matrix(h, tol)
    purity = float(np.real(np.trace(h @ h)))
    out = {
        "d": d,
        "hermitian": herm <= tol, "hermiticity_violation": herm,
        "trace": tr, "trace_one": abs(tr - 1.0) <= tol,
        "char_poly_coeffs": mem.coeffs.a.tolist(),
        "member": mem.member and herm <= tol and abs(tr - 1.0) <= tol,
        "worst_coefficient": {"index": mem.worst_index, "value": mem.worst_value},
        "purity": purity,
    }
    if d >= 2 and abs(tr) > 0:
        x = to_bloch(h / tr, ggm_basis(d))
        out["spatial_norm_sq"] = x.norm_sq
        out["pure_norm_sq"] = d - 1
    return out, EXIT_OK if out["member"] else EXIT_FAIL


def cmd_check_channel(args) -> tuple[dict, int]:
    tol = resolve_tol(args.tol, DEFAULT_TOL)
    data = read_json(args.input)
    try:
        M = AntilinearSuperOp.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed superoperator: {exc}")
    rep = channel_report(M, tol)
    return rep, EXIT_OK if rep["channel"] else EXIT_FAIL


def cmd_theta(args) -> tuple[dict, int]:
    rho = _load_state(read_json(args.input))
    d, n = args.d, args.n
    if rho.shape != (d**n, d**n):
        raise UsageError(f"state of shape {rho.shape} is not on {n} qudits of d={d}")
    b = ggm_basis(d)
    sig = _signature(args.signature, d)
    sigs = [sig] * n
    out = {"d": d, "n": n, "signature": list(sig.s), "p": args.p,
           "lorentz_norm": lorentz_norm(rho, sigs, b),
           "theta_fidelity": theta_fidelity(rho, None, sigs, args.p, b, not args.no_shrink),
           "theta_concurrence": theta_concurrence(rho, sigs, args.p, b,
                                                  shrink=not args.no_shrink)}
    return out, EXIT_OK


def cmd_verify_eqR(args) -> tuple[dict, int]:
    tol = resolve_tol(args.tol, 1e-10)
    rng = rng_from(args.seed)
    b = ggm_basis(args.d)
    res = [verify_eq_R(haar_state(args.d**args.n, rng), args.n, args.d, b=b).residual
           for _ in range(args.samples)]
    out = {"n": args.n, "d": args.d, "samples": args.samples, "seed": args.seed,
           "residuals": res, "max_residual": max(res), "tol": tol}
    out["passed"] = out["max_residual"] < tol
    return out, EXIT_OK if out["passed"] else EXIT_FAIL


def cmd_verify_distribution(args) -> tuple[dict, int]:
    tol = resolve_tol(args.tol, 1e-9)
    out = distribution_report(args.n, args.d, args.samples, rng_from(args.seed), tol)
    out["seed"] = args.seed
    return out, EXIT_OK if out["passed"] else EXIT_FAIL


def cmd_sample(args) -> tuple[dict, int]:
    rng = rng_from(args.seed)
    if args.kind == "state":
        psi = haar_state(args.d**args.n, rng)
        out = {"kind": "state", "d": args.d, "n": args.n, "seed": args.seed,
               "psi": jsonio.encode_matrix(psi[None, :])[0],
               "matrix": jsonio.encode_matrix(np.outer(psi, psi.conj()))}
    else:
        d_out = args.d if args.d_out is None else args.d_out
        M = random_antilinear_channel(args.d, d_out, rng, rank=args.rank)
        out = {"kind": "channel", "seed": args.seed, **M.to_json()}
    return out, EXIT_OK


def cmd_transform(args) -> tuple[dict, int]:
    tol = resolve_tol(args.tol, 1e-10)
    data = read_json(args.input)
    rho = _load_state(data)
    d = rho.shape[0]
    b = ggm_basis(d)
    x = to_bloch(rho, b).x
    if args.transform is not None:
        try:
            T = GeometricTransform.from_json(read_json(args.transform))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed transform: {exc}")
    else:
        rng = rng_from(args.seed)
        if args.random == "rotation":
            T = random_rotation(d**2, rng)
        else:
            T = random_lorentz(lorentz_metric(d**2), rng)
    res = apply_transform(T, x, basis=b, physical=args.physical, tol=tol)
    out = {"transform": T.to_json(), "x": x.tolist(), "x_out": res.x.tolist(),
           "rescaled": res.rescaled, "reshrunk": res.reshrunk}
    if args.physical:
        out["member"] = bool(is_bloch_body(BlochVector(d, res.x, b.tag), b))
        out["matrix"] = jsonio.encode_matrix(from_bloch(res.x, b))
    return out, EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="tolerance override (default: ANTIQ_TOL or per-command)")
    common.add_argument("--human", action="store_true", help="indented JSON output")

    p = _Parser(prog="antiq", description="Qudit Bloch geometry and antilinear channel toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("basis", parents=[common], help="dump and verify the GGM basis")
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("check-state", parents=[common], help="Bloch-body membership report")
    s.add_argument("input", help="JSON file ('-' for stdin)")
    s.set_defaults(func=cmd_check_state)

    s = sub.add_parser("check-channel", parents=[common], help="CP/TP/unital/antiunitary report")
    s.add_argument("input")
    s.set_defaults(func=cmd_check_channel)

    s = sub.add_parser("theta", parents=[common], help="Theta fidelity, concurrence and norm")
    s.add_argument("input")
    s.add_argument("--d", type=_positive_int(2), required=True)
    s.add_argument("--n", type=_positive_int(1), default=1)
    s.add_argument("--signature", default="full", help="'full', 'plus' or signs like 1,-1,-1,-1")
    s.add_argument("--p", type=float, default=1.0)
    s.add_argument("--no-shrink", action="store_true")
    s.set_defaults(func=cmd_theta)

    for name, func, desc in (("verify-eqR", cmd_verify_eqR, "Lorentzian norm identity"),
                             ("verify-distribution", cmd_verify_distribution,
                              "entanglement distribution equality")):
        s = sub.add_parser(name, parents=[common], help=f"batch check of the {desc}")
        s.add_argument("--n", type=_positive_int(2), required=True)
        s.add_argument("--d", type=_positive_int(2), required=True)
        s.add_argument("--samples", type=_positive_int(1), default=100)
        s.add_argument("--seed", type=_seed, default=0)
        s.set_defaults(func=func)

    s = sub.add_parser("sample", parents=[common], help="seeded random state or channel")
    s.add_argument("kind", choices=["state", "channel"])
    s.add_argument("--d", type=_positive_int(1), required=True)
    s.add_argument("--n", type=_positive_int(1), default=1)
    s.add_argument("--d-out", type=_positive_int(1), default=None)
    s.add_argument("--rank", type=_positive_int(1), default=None)
    s.add_argument("--seed", type=_seed, default=0)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("transform", parents=[common], help="apply an orthogonal or Lorentz map")
    s.add_argument("input", help="state JSON")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--transform", help="transform JSON file")
    g.add_argument("--random", choices=["rotation", "lorentz"])
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--physical", action="store_true", help="rescale and shrink into the body")
    s.set_defaults(func=cmd_transform)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out, code = args.func(args)
    except UsageError as exc:
        print(f"antiq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AntiqError as exc:
        print(f"antiq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(jsonio.dumps(out, human=args.human) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
