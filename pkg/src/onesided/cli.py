"""Command-line front end.

Usage: ``onesided COMMAND PROBLEM.json [--threads N] [--trace-steps] [--timing]``

The report is JSON on stdout.  Exit codes: 0 success / property holds,
3 property fails (FailsB, Perforated, NotRefinable, invalid certificate),
4 witness search budget exhausted, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import (
    BudgetExhausted,
    ConvexityNotEstablished,
    InputError,
    NoWitnessExists,
    NotPure,
    OneSidedError,
    PreconditionNotMet,
)
from .face_geometry import TracePoint, ZEmpty, PositivityCertificate, smallest_face, z_set_empty
from .jsonio import InputProblem, context_from, dumps, matrix_in, scalar_in, validate_problem, vector_in
from .kronecker_density import SubgroupSpec, classify_line_group, property_a
from .ordered_group_layer import (
    NotRefinable,
    OrderedGroupSpec,
    Perforated,
    SubgroupInG,
    check_convex_sufficient,
    check_pure,
    critical_refinable,
    unperforation_verdict,
    verify_perforation,
)
from .property_b_engine import FailureCertificate, decide, verify_failure_certificate
from .simplex_farkas import FarkasResult, GordanResult, farkas, gordan, pivot_trace
from .witness_lab import Witness, construct_witness, transport_witness, verify_witness

EXIT_OK, EXIT_INPUT, EXIT_FAILS, EXIT_BUDGET = 0, 2, 3, 4

COMMANDS = ("decide", "witness", "face", "density", "property-a", "gordan", "farkas",
            "unperforated", "refinable", "verify-cert")


# -- problem parsing ----------------------------------------------------------------

def _require(doc, key):
    if key not in doc:
        raise InputProblem("/" + key, "required for this command")
    return doc[key]


def _ambient(doc, key):
    rows = doc.get(key) or []
    if "ambient_n" in doc:
        return doc["ambient_n"]
    if rows:
        return len(rows[0])
    raise InputProblem("/ambient_n", "ambient dimension needed when there are no generators")


def _subgroup(doc, ctx, key="generators_H"):
    if key not in doc and key == "generators_H" and "generators_G" in doc and "H_in_G" in doc:
        return SubgroupInG.of(doc["H_in_G"]).spec(_ordered(doc, ctx))
    rows = _require(doc, key)
    n = _ambient(doc, key)
    return SubgroupSpec(n, tuple(tuple(r) for r in matrix_in(ctx, rows, "/" + key, n)), ctx)


def _unit(doc, ctx, n):
    if "unit" not in doc:
        return None
    return vector_in(ctx, doc["unit"], "/unit", n)


def _ordered(doc, ctx):
    G = _subgroup(doc, ctx, "generators_G")
    try:
        return OrderedGroupSpec(G, doc.get("ordering", "strict"), _unit(doc, ctx, G.n))
    except InputError as exc:
        raise InputProblem("/generators_G", str(exc), type(exc).__name__) from exc


def _h_in_g(doc, G):
    rows = _require(doc, "H_in_G")
    for i, r in enumerate(rows):
        if len(r) != G.G.s:
            raise InputProblem(f"/H_in_G/{i}", f"expected {G.G.s} coefficients")
    return SubgroupInG.of(rows)


def _epsilon(doc):
    try:
        eps = Fraction(_require(doc, "epsilon"))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputProblem("/epsilon", "bad rational literal") from exc
    if eps <= 0:
        raise InputProblem("/epsilon", "must be positive")
    return eps


# -- result encoding ----------------------------------------------------------------

def _failure(c: FailureCertificate):
    return {"type": "failure", "h": list(c.h), "h_vector": c.h_vector, "tau1": c.tau1.coords,
            "tau2": c.tau2.coords, "lambda": c.lam, "delta": c.delta, "eps0": c.eps0, "unit": c.tau1.unit}


def _positivity(p: PositivityCertificate):
    return {"type": "positivity", "x": list(p.x), "v": p.v, "margin": p.margin}


def _witness(w: Witness):
    return {"type": "witness", "coeffs": list(w.coeffs), "m": w.m, "epsilon": w.eps, "h": list(w.h),
            "slack": w.slack}


def _decision(out):
    rep = {
        "verdict": out.verdict,
        "route_ii": {"holds": out.route_ii.holds,
                     "witness_m": list(out.route_ii.witness) if out.route_ii.witness else None},
        "route_iii": {"holds": out.route_iii, "coordinates": [i + 1 for i in out.route_iii_coords]},
        "face_support": [i + 1 for i in out.support],
        "certificate": None,
    }
    if out.positivity is not None:
        rep["certificate"] = _positivity(out.positivity)
    if out.certificate is not None:
        rep["certificate"] = _failure(out.certificate)
    if out.notes:
        rep["notes"] = list(out.notes)
    return rep


# -- commands -----------------------------------------------------------------------

def cmd_decide(doc, ctx, args):
    H = _subgroup(doc, ctx)
    out = decide(H, _unit(doc, ctx, H.n), threads=args.threads)
    return (EXIT_OK if out.holds else EXIT_FAILS), _decision(out)


def cmd_witness(doc, ctx, args):
    H = _subgroup(doc, ctx)
    h = _require(doc, "h")
    if len(h) != H.s:
        raise InputProblem("/h", f"expected {H.s} integer coefficients")
    m = _require(doc, "m")
    eps = _epsilon(doc)
    budget = doc.get("budget", 64)
    try:
        if "n_target" in doc:
            w = transport_witness(H, h, m, doc["n_target"], eps, budget=budget)
        else:
            w = construct_witness(H, h, m, eps, budget=budget, threads=args.threads)
    except NoWitnessExists as exc:
        return EXIT_FAILS, {"verdict": "FailsB", "certificate": _failure(exc.certificate)}
    except BudgetExhausted as exc:
        return EXIT_BUDGET, {"verdict": "BudgetExhausted", "budget": exc.budget}
    return EXIT_OK, {"verdict": "Witness", "certificate": _witness(w)}


def cmd_face(doc, ctx, args):
    H = _subgroup(doc, ctx)
    u = _unit(doc, ctx, H.n)
    em = z_set_empty(H, u)
    face = smallest_face(H, u, threads=args.threads)
    rep = {"face_support": [i + 1 for i in face.support], "z_empty": isinstance(em, ZEmpty)}
    if isinstance(em, ZEmpty):
        rep["certificate"] = _positivity(em.certificate)
    else:
        rep["z_point"] = em.point.coords
        rep["nu"] = face.nu.coords
    return EXIT_OK, rep


def cmd_density(doc, ctx, args):
    if "values" in doc:
        values = vector_in(ctx, doc["values"], "/values")
    else:
        H = _subgroup(doc, ctx)
        tau = vector_in(ctx, _require(doc, "trace"), "/trace", H.n)
        values = [sum((a * x for a, x in zip(tau, g)), start=ctx.zero) for g in H.generators]
    cls = classify_line_group(values)
    rep = {"kind": cls.kind, "values": list(values)}
    if cls.kind == "Discrete":
        rep.update(delta=ctx(cls.delta), multiples=list(cls.multiples), bezout=list(cls.bezout))
    return EXIT_OK, rep


def cmd_property_a(doc, ctx, args):
    H = _subgroup(doc, ctx)
    res = property_a(H)
    rep = {"verdict": "Holds" if res.holds else "Fails"}
    if not res.holds:
        rep["witness_m"] = list(res.witness)
        rep["functional"] = list(res.functional)
    return (EXIT_OK if res.holds else EXIT_FAILS), rep


def _gordan_rep(r: GordanResult):
    return {"type": "gordan", "alternative": r.alternative,
            "y": list(r.y) if r.y is not None else None, "x": list(r.x) if r.x is not None else None}


def _farkas_rep(r: FarkasResult):
    return {"type": "farkas", "alternative": r.alternative,
            "y": list(r.y) if r.y is not None else None, "x": list(r.x) if r.x is not None else None}


def _matrix(doc, ctx):
    rows = _require(doc, "matrix")
    n = doc.get("ambient_n", len(rows[0]) if rows else 0)
    return matrix_in(ctx, rows, "/matrix", n), n


def cmd_gordan(doc, ctx, args):
    A, n = _matrix(doc, ctx)
    return EXIT_OK, {"certificate": _gordan_rep(gordan(A, n))}


def cmd_farkas(doc, ctx, args):
    A, n = _matrix(doc, ctx)
    b = vector_in(ctx, _require(doc, "b"), "/b", n)
    return EXIT_OK, {"certificate": _farkas_rep(farkas(A, b))}


def cmd_unperforated(doc, ctx, args):
    G = _ordered(doc, ctx)
    H = _h_in_g(doc, G)
    pure = check_pure(G, H)
    rep = {"purity": type(pure).__name__}
    if type(pure).__name__ == "Torsion":
        rep["torsion"] = {"k": pure.k, "coeffs": list(pure.coeffs), "g": pure.g}
        raise InputProblem("/H_in_G", f"G/H has torsion of order {pure.k}", "NotPure")
    rep["convexity"] = type(check_convex_sufficient(G, H)).__name__
    try:
        v = unperforation_verdict(G, H, assume_convex=doc.get("assume_convex", False), threads=args.threads)
    except ConvexityNotEstablished as exc:
        raise InputProblem("/assume_convex", str(exc), "ConvexityNotEstablished") from exc
    rep["verdict"] = type(v).__name__
    rep["convexity_basis"] = v.convexity
    if isinstance(v, Perforated):
        rep["certificate"] = _failure(v.certificate)
        if v.instance is not None:
            i = v.instance
            rep["perforation"] = {"g_coeffs": list(i.g_coeffs), "g": i.g, "m": i.m,
                                  "h_coeffs": list(i.h_coeffs), "m_g_plus_h": i.positive}
        return EXIT_FAILS, rep
    return EXIT_OK, rep


def cmd_refinable(doc, ctx, args):
    G = _ordered(doc, ctx)
    tau = vector_in(ctx, _require(doc, "trace"), "/trace", G.G.n)
    try:
        res = critical_refinable(G, tau)
    except InputError as exc:
        raise InputProblem("/trace" if "trace" in str(exc) else "/generators_G", str(exc), type(exc).__name__) from exc
    rep = {"verdict": type(res).__name__, "trace": res.trace.coords}
    if isinstance(res, NotRefinable):
        rep["kernel_coeffs"] = list(res.coeffs)
        rep["kernel_element"] = res.element
        return EXIT_FAILS, rep
    return EXIT_OK, rep


def _cert_vec(ctx, doc, key, n=None):
    return vector_in(ctx, _require(doc, key), f"/certificate/{key}", n)


def _cert_scalar(ctx, doc, key):
    return scalar_in(ctx, _require(doc, key), f"/certificate/{key}")


def cmd_verify_cert(doc, ctx, args):
    cert = _require(doc, "certificate")
    kind = cert["type"]
    ok, reason = False, None
    if kind in ("gordan", "farkas"):
        A, n = _matrix(doc, ctx)
        y = _cert_vec(ctx, cert, "y") if cert.get("y") is not None else None
        x = cert.get("x")
        if x is not None:
            x = tuple(int(v) for v in x) if kind == "gordan" else _cert_vec(ctx, cert, "x")
        if kind == "gordan":
            ok = GordanResult(cert.get("alternative"), y, x).verify(A, n)
        else:
            b = vector_in(ctx, _require(doc, "b"), "/b", n)
            ok = FarkasResult(cert.get("alternative"), y, x).verify(A, b)
    else:
        H = _subgroup(doc, ctx)
        if kind == "positivity":
            p = PositivityCertificate(tuple(int(v) for v in _require(cert, "x")),
                                      _cert_vec(ctx, cert, "v", H.n), _cert_scalar(ctx, cert, "margin"))
            ok = len(p.x) == H.s and p.verify(H)
        elif kind == "witness":
            res = verify_witness(H, _require(cert, "h"), _require(cert, "m"), Fraction(_require(cert, "epsilon")),
                                 _require(cert, "coeffs"))
            ok = isinstance(res, Witness)
            if ok:
                ok = tuple(res.slack) == _cert_vec(ctx, cert, "slack", H.n)
            else:
                reason = f"coordinate {res.coordinate + 1} has slack {res.slack.decimal(12)}"
        elif kind == "failure":
            u = _cert_vec(ctx, cert, "unit", H.n) if "unit" in cert else _unit(doc, ctx, H.n)
            try:
                c = FailureCertificate(
                    tuple(int(v) for v in _require(cert, "h")),
                    _cert_vec(ctx, cert, "h_vector", H.n),
                    TracePoint(_cert_vec(ctx, cert, "tau1", H.n), u or tuple([ctx.one] * H.n)),
                    TracePoint(_cert_vec(ctx, cert, "tau2", H.n), u or tuple([ctx.one] * H.n)),
                    _cert_scalar(ctx, cert, "lambda"), _cert_scalar(ctx, cert, "delta"),
                    _cert_scalar(ctx, cert, "eps0"))
            except InputError as exc:
                return EXIT_FAILS, {"valid": False, "reason": str(exc)}
            cands = [vector_in(ctx, r, f"/candidates/{i}", H.n) for i, r in enumerate(doc.get("candidates", []))]
            res = verify_failure_certificate(H, u, c, candidates=cands, modulus=doc.get("modulus", 2))
            ok = res.ok
            reason = getattr(res, "reason", None)
        else:
            raise InputProblem("/certificate/type", f"unknown certificate type {kind!r}")
    rep = {"valid": bool(ok), "type": kind}
    if not ok and reason:
        rep["reason"] = reason
    return (EXIT_OK if ok else EXIT_FAILS), rep


HANDLERS = {
    "decide": cmd_decide,
    "witness": cmd_witness,
    "face": cmd_face,
    "density": cmd_density,
    "property-a": cmd_property_a,
    "gordan": cmd_gordan,
    "farkas": cmd_farkas,
    "unperforated": cmd_unperforated,
    "refinable": cmd_refinable,
    "verify-cert": cmd_verify_cert,
}


def build_parser():
    p = argparse.ArgumentParser(prog="onesided", description="Exact decisions and certificates for "
                                "one-sided approximation in finitely generated subgroups of R^n.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("problem", help="problem JSON file ('-' for stdin)")
    p.add_argument("--certificate", help="report JSON whose 'certificate' is checked (verify-cert)")
    p.add_argument("-o", "--output", help="write the report here instead of stdout")
    p.add_argument("--threads", type=int, default=1, help="internal parallelism (default 1)")
    p.add_argument("--trace-steps", action="store_true", help="include LP pivot sequences in the report")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte-identity)")
    return p


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputProblem("/", f"invalid JSON: {exc.msg} (line {exc.lineno})", "JSONDecodeError") from exc
    except OSError as exc:
        raise InputProblem("/", f"cannot read {path}: {exc.strerror}", "IOError") from exc


def run(command, doc, threads=1, trace_steps=False, timing=False):
    """Execute one command on a parsed problem; returns ``(exit_code, report)``."""
    args = argparse.Namespace(threads=threads)
    report = {"command": command}
    start = time.perf_counter()
    steps = [] if trace_steps else None
    token = pivot_trace.set(steps)
    try:
        if not isinstance(doc, dict):
            raise InputProblem("/", "problem must be a JSON object")
        validate_problem(doc)
        ctx = context_from(doc)
        code, body = HANDLERS[command](doc, ctx, args)
        report["field"] = ctx
        report.update(body)
    except InputProblem as exc:
        code = EXIT_INPUT
        report["error"] = {"kind": exc.kind, "pointer": exc.pointer, "message": exc.detail}
    except (InputError, PreconditionNotMet, NotPure) as exc:
        code = EXIT_INPUT
        report["error"] = {"kind": type(exc).__name__, "pointer": "/", "message": str(exc)}
    finally:
        pivot_trace.reset(token)
    report["exit_code"] = code
    if trace_steps:
        report["trace_steps"] = [list(s) for s in steps]
    if timing:
        report["timing_seconds"] = f"{time.perf_counter() - start:.6f}"
    return code, report


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        doc = _read_json(args.problem)
        if args.certificate:
            rep = _read_json(args.certificate)
            if not isinstance(rep, dict) or "certificate" not in rep:
                raise InputProblem("/certificate", "report has no certificate")
            doc = dict(doc, certificate=rep["certificate"])
    except InputProblem as exc:
        code = EXIT_INPUT
        report = {"command": args.command, "exit_code": code,
                  "error": {"kind": exc.kind, "pointer": exc.pointer, "message": exc.detail}}
    else:
        code, report = run(args.command, doc, args.threads, args.trace_steps, args.timing)
    text = dumps(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
