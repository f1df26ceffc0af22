"""JSON system descriptors shared by the CLI and scripted pipelines.

Twists travel as decimal strings so row-operation-inflated values survive
interchange; complex numbers travel as [re, im] pairs.  Validation errors
carry the offending field path (e.g. "A[1]").
"""

from __future__ import annotations

import json
import re

from .arith import character_table, is_prime
from .coefficients import (CharacterFamily, CoefficientFamily, HeckeGL2Family,
                           TableFamily, TauFamily, TrivialFamily, trivial_tuple)
from .errors import DescriptorError
from .system import LaurentMonomialSystem

_PRIME_POWER_KEY = re.compile(r"^(\d+)\^(\d+)$")


def _complex_from(value, path):
    if isinstance(value, (int, float)):
        return complex(value)
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(x, (int, float)) for x in value)):
        return complex(value[0], value[1])
    raise DescriptorError(path, f"expected a number or [re, im] pair, got {value!r}")


def _int_from(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise DescriptorError(path, f"expected an integer, got {value!r}")
    return value


def _twist_from(value, path):
    if isinstance(value, str):
        if not value.isdigit():
            raise DescriptorError(path, f"expected a decimal string, got {value!r}")
        return int(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    raise DescriptorError(path, f"expected a decimal string, got {value!r}")


def family_from_record(rec, path) -> CoefficientFamily:
    if not isinstance(rec, dict) or "type" not in rec:
        raise DescriptorError(path, "expected a tagged record with a 'type' field")
    kind = rec["type"]
    if kind == "trivial":
        return TrivialFamily()
    if kind == "character":
        q = _int_from(rec.get("q"), f"{path}.q")
        k = _int_from(rec.get("k"), f"{path}.k")
        if q < 3 or q % 2 == 0 or not is_prime(q):
            raise DescriptorError(f"{path}.q", f"modulus must be an odd prime, got {q}")
        return CharacterFamily(character_table(q), k)
    if kind == "hecke_gl2":
        lam = rec.get("lambda")
        if not isinstance(lam, dict):
            raise DescriptorError(f"{path}.lambda", "expected a prime -> value map")
        out = {}
        for key, val in lam.items():
            if not str(key).isdigit():
                raise DescriptorError(f"{path}.lambda.{key}", "keys must be primes")
            out[int(key)] = _complex_from(val, f"{path}.lambda.{key}")
        return HeckeGL2Family(out)
    if kind == "tau":
        bound = rec.get("bound", TauFamily.DEFAULT_BOUND)
        return TauFamily(_int_from(bound, f"{path}.bound"))
    if kind == "table":
        values = rec.get("values")
        if not isinstance(values, dict):
            raise DescriptorError(f"{path}.values", "expected a prime-power -> value map")
        out = {}
        for key, val in values.items():
            match = _PRIME_POWER_KEY.match(str(key))
            if not match:
                raise DescriptorError(f"{path}.values.{key}",
                                      "keys look like 'p^e', e.g. '2^1'")
            p, e = int(match.group(1)), int(match.group(2))
            out[(p, e)] = _complex_from(val, f"{path}.values.{key}")
        return TableFamily(out)
    raise DescriptorError(f"{path}.type", f"unknown coefficient kind {kind!r}")


def record_from_family(f: CoefficientFamily) -> dict:
    if isinstance(f, TrivialFamily):
        return {"type": "trivial"}
    if isinstance(f, CharacterFamily):
        return {"type": "character", "q": f.table.q, "k": f.k}
    if isinstance(f, HeckeGL2Family):
        return {"type": "hecke_gl2",
                "lambda": {str(p): _complex_out(v) for p, v in sorted(f.lambda_p.items())}}
    if isinstance(f, TauFamily):
        return {"type": "tau", "bound": f.bound}
    if isinstance(f, TableFamily):
        return {"type": "table",
                "values": {f"{p}^{e}": _complex_out(v)
                           for (p, e), v in sorted(f.values.items())}}
    raise TypeError(f"cannot serialize {type(f).__name__}")


def _complex_out(z: complex):
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


def parse_descriptor(doc: dict):
    """Validate a descriptor and build (system, families, s).

    `coefficients` defaults to all-trivial; `s` may be absent (None) for
    commands that do not evaluate the series.
    """
    if not isinstance(doc, dict):
        raise DescriptorError("$", "descriptor must be a JSON object")
    t = _int_from(doc.get("t"), "t")
    m = _int_from(doc.get("m"), "m")
    if t < 0 or m < 0:
        raise DescriptorError("t", "t and m must be nonnegative")
    A = doc.get("A")
    if not isinstance(A, list) or len(A) != m:
        raise DescriptorError("A", f"expected {m} rows")
    rows = []
    for i, row in enumerate(A):
        if not isinstance(row, list) or len(row) != t:
            raise DescriptorError(f"A[{i}]", f"expected {t} integer entries")
        rows.append(tuple(_int_from(x, f"A[{i}][{j}]") for j, x in enumerate(row)))
    omega, omega_prime = [], []
    for name, dest in (("omega", omega), ("omega_prime", omega_prime)):
        vals = doc.get(name)
        if not isinstance(vals, list) or len(vals) != m:
            raise DescriptorError(name, f"expected {m} entries")
        for i, v in enumerate(vals):
            w = _twist_from(v, f"{name}[{i}]")
            if w < 1:
                raise DescriptorError(f"{name}[{i}]", "twists are positive integers")
            dest.append(w)
    try:
        system = LaurentMonomialSystem(t=t, m=m, A=tuple(rows),
                                       omega=tuple(omega), omega_prime=tuple(omega_prime))
    except ValueError as exc:
        raise DescriptorError("$", str(exc)) from None
    recs = doc.get("coefficients")
    if recs is None:
        families = trivial_tuple(t)
    else:
        if not isinstance(recs, list) or len(recs) != t:
            raise DescriptorError("coefficients", f"expected {t} family records")
        families = tuple(family_from_record(rec, f"coefficients[{i}]")
                         for i, rec in enumerate(recs))
    s_doc = doc.get("s")
    if s_doc is None:
        s = None
    else:
        if not isinstance(s_doc, list) or len(s_doc) != t:
            raise DescriptorError("s", f"expected {t} [re, im] pairs")
        s = tuple(_complex_from(v, f"s[{i}]") for i, v in enumerate(s_doc))
    known = {"t", "m", "A", "omega", "omega_prime", "coefficients", "s"}
    extras = sorted(set(doc) - known)
    return system, families, s, extras


def serialize_descriptor(system: LaurentMonomialSystem, families=None, s=None) -> dict:
    doc = {
        "t": system.t,
        "m": system.m,
        "A": [list(row) for row in system.A],
        "omega": [str(w) for w in system.omega],
        "omega_prime": [str(w) for w in system.omega_prime],
    }
    if families is not None:
        doc["coefficients"] = [record_from_family(f) for f in families]
    if s is not None:
        doc["s"] = [[complex(z).real, complex(z).imag] for z in s]
    return doc


def load_descriptor(path: str):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DescriptorError(path, f"cannot read descriptor: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DescriptorError(path, f"invalid JSON: {exc}") from None
    return parse_descriptor(doc)
