"""spectra-diag command line.

Exit codes: 0 ok, 2 majorization violated, 3 trace mismatch,
4 verification failed, 64 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path
from types import SimpleNamespace

import numpy as np

from .errors import (
    DimensionMismatch,
    MajorizationViolated,
    NotCorrelationSpectrum,
    TraceMismatch,
)
from .gen import GenConfig, corr_preset, random_majorized_diag, random_spectrum, trace_matched_pair
from .horn import hermitian_of, horn_construct, orthostochastic_of
from .mirsky import GROWTH_WARN, mirsky_construct
from .seqkit import DEFAULT_TOL, ComplexSeq, RealSeq, check_majorization, trace_gap, trace_match
from .verify import TolProfile, verify_horn, verify_mirsky

EXIT_OK = 0
EXIT_MAJORIZATION = 2
EXIT_TRACE = 3
EXIT_VERIFY = 4
EXIT_USAGE = 64

TOL_ENV = "SPECTRA_DIAG_TOL"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- reading


def _reject_constant(name):
    raise ValueError(f"non-finite number {name}")


def _load_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    if not isinstance(obj, dict):
        raise UsageError(f"{path}: top level must be a JSON object")
    return obj


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _scalar(x, where: str) -> complex:
    if _is_num(x):
        return complex(float(x), 0.0)
    if isinstance(x, list) and len(x) == 2 and all(_is_num(v) for v in x):
        return complex(float(x[0]), float(x[1]))
    raise UsageError(f"field {where}: expected a finite number or [re, im] pair")


def _vector(obj: dict, key: str) -> list[complex]:
    if key not in obj:
        raise UsageError(f"missing field {key!r}")
    val = obj[key]
    if not isinstance(val, list) or not val:
        raise UsageError(f"field {key}: expected a non-empty array")
    return [_scalar(v, f"{key}[{i}]") for i, v in enumerate(val)]


def _matrix(obj: dict, key: str, n: int) -> np.ndarray:
    if key not in obj:
        raise UsageError(f"missing field {key!r}")
    rows = obj[key]
    if not isinstance(rows, list) or len(rows) != n:
        raise UsageError(f"field {key}: expected {n} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise UsageError(f"field {key}[{i}]: expected {n} entries")
        out.append([_scalar(v, f"{key}[{i}][{j}]") for j, v in enumerate(row)])
    arr = np.array(out, dtype=complex)
    return arr.real.copy() if np.all(arr.imag == 0) else arr


def _real(values: list[complex], key: str) -> list[float]:
    if any(v.imag != 0 for v in values):
        raise UsageError(f"field {key}: complex values not allowed here")
    return [v.real for v in values]


def _problem(obj: dict, need_d: bool = True):
    lam = _vector(obj, "lambda")
    d = _vector(obj, "d") if need_d or "d" in obj else None
    if d is not None and len(d) != len(lam):
        raise UsageError(f"fields lambda and d differ in length ({len(lam)} != {len(d)})")
    tol = obj.get("tol")
    if tol is not None and not (_is_num(tol) and tol >= 0):
        raise UsageError("field tol: expected a nonnegative number")
    return lam, d, tol


def _resolve_tol(flag, file_tol) -> float:
    if flag is not None:
        return flag
    if file_tol is not None:
        return float(file_tol)
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            val = float(env)
        except ValueError:
            raise UsageError(f"{TOL_ENV}={env!r} is not a number") from None
        if not (math.isfinite(val) and val >= 0):
            raise UsageError(f"{TOL_ENV} must be a nonnegative number")
        return val
    return DEFAULT_TOL


# ---------------------------------------------------------------- writing


def _num(z):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _mat_json(m: np.ndarray, real: bool):
    if real:
        return [[float(x) for x in row] for row in np.real(m)]
    return [[_num(x) for x in row] for row in m]


def _dump(obj) -> str:
    return json.dumps(obj, allow_nan=False) + "\n"


def _csv(m: np.ndarray) -> str:
    return "".join(",".join(repr(float(x)) for x in row) + "\n" for row in np.real(m))


def _emit_csv(mats: dict, out: str | None):
    if out is None:
        if len(mats) != 1:
            raise UsageError("--format csv with several matrices needs --out DIR")
        sys.stdout.write(next(iter(mats.values())))
        return
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, text in mats.items():
        (outdir / f"{name}.csv").write_text(text)


def _profile(args) -> TolProfile:
    kw = {}
    for field in ("diag", "orth", "eig", "schur", "mirsky_diag", "similarity", "charpoly"):
        val = getattr(args, f"{field}_tol", None)
        if val is not None:
            kw[field] = val
    return TolProfile(**kw)


# ---------------------------------------------------------------- commands


def cmd_check(args) -> int:
    lam, d, file_tol = _problem(_load_json(args.input))
    tol = _resolve_tol(args.tol, file_tol)
    if args.mode == "majorize":
        rep = check_majorization(_real(lam, "lambda"), _real(d, "d"), tol)
        sys.stdout.write(_dump({"mode": "majorize", **rep.to_dict()}))
        return EXIT_OK if rep.holds else EXIT_MAJORIZATION
    holds = trace_match(lam, d, tol)
    gap = trace_gap(lam, d)
    sys.stdout.write(_dump({"mode": "trace", "holds": holds, "trace_gap": _num(gap), "tol": tol}))
    return EXIT_OK if holds else EXIT_TRACE


def cmd_horn(args) -> int:
    obj = _load_json(args.input)
    lam, d, file_tol = _problem(obj, need_d=args.preset is None)
    tol = _resolve_tol(args.tol, file_tol)
    lam = _real(lam, "lambda")
    if args.preset == "corr":
        try:
            lam_s, d_s = corr_preset(lam, tol)
        except NotCorrelationSpectrum as exc:
            print(f"spectra-diag: {exc}", file=sys.stderr)
            return EXIT_MAJORIZATION
        lam, d = list(lam_s), list(d_s)
    else:
        d = _real(d, "d")
    try:
        cert = horn_construct(lam, d, tol)
    except MajorizationViolated as exc:
        print(f"spectra-diag: majorization violated at prefix index {exc.index}", file=sys.stderr)
        return EXIT_MAJORIZATION
    report = verify_horn(cert, _profile(args))

    q = cert.q.entries
    mats = {}
    if args.emit in ("q", "all"):
        mats["q"] = q
    if args.emit in ("a", "all"):
        mats["a"] = hermitian_of(cert.q, cert.lam)
    if args.emit in ("s", "all"):
        mats["s"] = orthostochastic_of(cert.q).entries
    if args.format == "csv":
        _emit_csv({k: _csv(v) for k, v in mats.items()}, args.out)
    else:
        out = {"kind": "horn", "n": cert.q.n, "tol": tol,
               "lambda": list(cert.lam), "d": list(cert.d)}
        for k, v in mats.items():
            out[k] = _mat_json(v, True)
        out["steps"] = [
            {"k": s.k, "rows": list(s.rows), "u": s.kernel.u, "v": s.kernel.v,
             "lambda_k": s.lambda_k, "lambda_k1": s.lambda_k1, "d_k": s.d_k,
             "lambda_k1_new": s.lambda_k1_new}
            for s in cert.steps
        ]
        out["residuals"] = {"diag": cert.diag_residual, "orth": cert.orth_residual}
        out["verify"] = report.to_dict()
        _write_json(out, args.out, "horn.json")
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_mirsky(args) -> int:
    lam, d, file_tol = _problem(_load_json(args.input))
    tol = _resolve_tol(args.tol, file_tol)
    try:
        cert = mirsky_construct(lam, d, tol)
    except TraceMismatch as exc:
        print(f"spectra-diag: {exc}", file=sys.stderr)
        return EXIT_TRACE
    report = verify_mirsky(cert, _profile(args))
    if cert.growth > GROWTH_WARN:
        print(f"spectra-diag: warning: growth(L) = {cert.growth:.3e} exceeds {GROWTH_WARN:.0e}",
              file=sys.stderr)
    tols = report.tolerances
    if (report.similarity_err > tols["similarity_err"]
            and report.similarity_rel_err <= tols["similarity_rel_err"]):
        print(f"spectra-diag: note: max|A| = {float(np.max(np.abs(cert.a))):.3e}; the similarity "
              "residual is at roundoff of A (entrywise backward residual "
              f"{report.similarity_rel_err:.1e}) but above the absolute bound", file=sys.stderr)

    mats = {}
    if args.emit in ("l", "all"):
        mats["l"] = cert.l.entries
    if args.emit in ("a", "all"):
        mats["a"] = cert.a
    if args.format == "csv":
        if not cert.is_real:
            raise UsageError("--format csv cannot represent complex output")
        _emit_csv({k: _csv(v) for k, v in mats.items()}, args.out)
    else:
        real = cert.is_real
        out = {"kind": "mirsky", "n": len(cert.lam), "tol": tol, "is_real": real,
               "lambda": [_num(v) for v in cert.lam], "d": [_num(v) for v in cert.d]}
        for k, v in mats.items():
            out[k] = _mat_json(v, real)
        out["c"] = [_num(c) for c in cert.c_values]
        out["growth"] = cert.growth
        out["residuals"] = {"diag": cert.diag_residual, "similarity": cert.similarity_residual}
        out["verify"] = report.to_dict()
        _write_json(out, args.out, "mirsky.json")
    return EXIT_OK if report.passed else EXIT_VERIFY


def _write_json(obj, out: str | None, name: str):
    text = _dump(obj)
    if out is None:
        sys.stdout.write(text)
    else:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / name).write_text(text)


def cmd_gen(args) -> int:
    if args.preset == "corr":
        rng = (args.lo if args.lo is not None else 0.0, args.hi if args.hi is not None else 1.0)
    else:
        rng = (args.lo if args.lo is not None else -10.0, args.hi if args.hi is not None else 10.0)
    try:
        cfg = GenConfig(seed=args.seed, n=args.n, value_range=rng, mix_count=args.mix)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    meta = {"seed": args.seed, "n": args.n, "mix": args.mix, "range": list(rng), "kind": args.kind}
    if args.kind == "mirsky":
        lam, d = trace_matched_pair(cfg, args.complex)
        out = {"lambda": [_num(v) for v in lam], "d": [_num(v) for v in d]}
    elif args.preset == "corr":
        try:
            lam, d = corr_preset(random_spectrum(cfg))
        except NotCorrelationSpectrum as exc:
            raise UsageError(str(exc)) from None
        meta["preset"] = "corr"
        out = {"lambda": list(lam), "d": list(d)}
    else:
        lam = random_spectrum(cfg)
        out = {"lambda": list(lam), "d": list(random_majorized_diag(lam, cfg))}
    out["generator"] = meta
    sys.stdout.write(_dump(out))
    return EXIT_OK


def cmd_verify(args) -> int:
    obj = _load_json(args.input)
    kind = obj.get("kind")
    lam = _vector(obj, "lambda")
    d = _vector(obj, "d")
    n = len(lam)
    if len(d) != n:
        raise UsageError("fields lambda and d differ in length")
    if kind == "horn":
        q = _matrix(obj, "q", n)
        if np.iscomplexobj(q):
            raise UsageError("field q: complex values not allowed")
        cert = SimpleNamespace(q=q, lam=RealSeq(_real(lam, "lambda")), d=RealSeq(_real(d, "d")))
        report = verify_horn(cert, _profile(args))
    elif kind == "mirsky":
        cert = SimpleNamespace(
            lam=ComplexSeq(tuple(lam)), d=ComplexSeq(tuple(d)),
            l=_matrix(obj, "l", n), a=_matrix(obj, "a", n),
        )
        report = verify_mirsky(cert, _profile(args))
    else:
        raise UsageError("field kind: expected 'horn' or 'mirsky'")
    sys.stdout.write(_dump(report.to_dict()))
    return EXIT_OK if report.passed else EXIT_VERIFY


# ---------------------------------------------------------------- parser


def _nonneg_float(text):
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(val) and val >= 0):
        raise argparse.ArgumentTypeError("must be a nonnegative number")
    return val


def _u64(text):
    try:
        val = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= val < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spectra-diag", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    tol = _Parser(add_help=False)
    tol.add_argument("--tol", type=_nonneg_float, default=None,
                     help=f"relative tolerance (default: ${TOL_ENV} or {DEFAULT_TOL})")

    prof = _Parser(add_help=False)
    for field, what in (("diag", "Horn diagonal"), ("orth", "orthogonality"), ("eig", "eigenvalue"),
                        ("schur", "Schur relation"), ("mirsky-diag", "Mirsky diagonal"),
                        ("similarity", "similarity residual"), ("charpoly", "char. polynomial")):
        prof.add_argument(f"--{field}-tol", type=_nonneg_float, default=None,
                          dest=f"{field.replace('-', '_')}_tol",
                          help=f"{what} threshold multiplier")

    p = sub.add_parser("check", parents=[tol], help="check majorization or trace equality")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--mode", choices=("majorize", "trace"), default="majorize")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("horn", parents=[tol, prof], help="orthogonal Q with diag(Q L Q^T) = d")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--emit", choices=("q", "a", "s", "all"), default="all")
    p.add_argument("--preset", choices=("corr",), default=None)
    p.add_argument("--out", default=None, help="directory for output files (default: stdout)")
    p.set_defaults(func=cmd_horn)

    p = sub.add_parser("mirsky", parents=[tol, prof], help="unit lower triangular similarity")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--emit", choices=("l", "a", "all"), default="all")
    p.add_argument("--out", default=None, help="directory for output files (default: stdout)")
    p.set_defaults(func=cmd_mirsky)

    p = sub.add_parser("gen", help="seeded problem generator")
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--mix", type=int, default=8)
    p.add_argument("--kind", choices=("horn", "mirsky"), default="horn")
    p.add_argument("--complex", action="store_true")
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)
    p.add_argument("--preset", choices=("corr",), default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", parents=[prof], help="re-check an emitted JSON certificate")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"spectra-diag: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DimensionMismatch as exc:
        print(f"spectra-diag: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
