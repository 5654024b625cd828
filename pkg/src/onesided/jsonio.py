"""JSON encoding of scalars, vectors and results.

Rationals travel as strings (``"3/7"``).  A Scalar is written as
``{"coeffs": [...], "decimal": "..."}`` where ``coeffs`` are the rational
coefficients of ``1, theta, theta^2, ...`` and ``decimal`` is a 30-digit
rendering for humans; on input the decimal part is ignored.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

import jsonschema

from .errors import InputError
from .scalar_field import FieldContext, Scalar, make_context, rational_context

__all__ = [
    "InputProblem",
    "load_schema",
    "validate_problem",
    "context_from",
    "scalar_in",
    "vector_in",
    "matrix_in",
    "enc",
    "dumps",
]


class InputProblem(InputError):
    """Input error carrying a JSON-pointer to the offending value."""

    def __init__(self, pointer, message, kind="InputError"):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.detail = message
        self.kind = kind


def load_schema(name="problem"):
    text = resources.files("onesided.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def _pointer(path):
    return "/" + "/".join(str(p) for p in path) if path else "/"


def validate_problem(doc):
    validator = jsonschema.Draft202012Validator(load_schema("problem"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise InputProblem(_pointer(e.absolute_path), e.message, "SchemaError")


def context_from(doc) -> FieldContext:
    spec = doc.get("field")
    if spec is None:
        return rational_context()
    try:
        poly = [Fraction(x) for x in spec["min_poly"]]
        lo, hi = (Fraction(x) for x in spec["interval"])
    except (ValueError, ZeroDivisionError) as exc:
        raise InputProblem("/field", f"bad rational literal: {exc}") from exc
    try:
        return make_context(poly, (lo, hi))
    except InputError as exc:
        raise InputProblem("/field/min_poly", str(exc), type(exc).__name__) from exc


def scalar_in(ctx, value, pointer):
    try:
        if isinstance(value, dict):
            value = value["coeffs"]
        if isinstance(value, list):
            coeffs = [Fraction(x) for x in value]
            if len(coeffs) > ctx.degree:
                raise InputProblem(pointer, f"more than {ctx.degree} coefficients")
            return Scalar(ctx, coeffs + [Fraction(0)] * (ctx.degree - len(coeffs)))
        if isinstance(value, bool):
            raise InputProblem(pointer, "booleans are not numbers")
        if isinstance(value, float):
            raise InputProblem(pointer, "floating-point literals are not accepted; use a rational string")
        return ctx(Fraction(value))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputProblem(pointer, f"bad scalar literal {value!r}") from exc


def vector_in(ctx, values, pointer, n=None):
    if n is not None and len(values) != n:
        raise InputProblem(pointer, f"expected {n} entries, got {len(values)}")
    return tuple(scalar_in(ctx, v, f"{pointer}/{i}") for i, v in enumerate(values))


def matrix_in(ctx, rows, pointer, n=None):
    return [list(vector_in(ctx, r, f"{pointer}/{i}", n)) for i, r in enumerate(rows)]


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def enc(x):
    """Encode results into JSON-ready values (deterministically)."""
    if isinstance(x, Scalar):
        return {"coeffs": [_frac(c) for c in x.coeffs], "decimal": x.decimal(30)}
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return _frac(x)
    if isinstance(x, FieldContext):
        return {"min_poly": [_frac(c) for c in x.min_poly], "interval": [_frac(c) for c in x.interval]}
    if isinstance(x, dict):
        return {str(k): enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [enc(v) for v in x]
    if hasattr(x, "__int__") and type(x).__name__.startswith("int"):
        return int(x)
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(report) -> str:
    return json.dumps(enc(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
