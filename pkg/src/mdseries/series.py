"""Evaluate the restricted series as a truncated direct sum and as a
truncated Euler product, and compare the two.

The direct sum truncates by the box [1,N]^t; the Euler product truncates
by a prime bound P and a per-prime exponent bound B.  The two truncations
never select the same finite term set, so comparisons are tolerance-based
and both sides carry Richardson-style tail estimates.
"""

from __future__ import annotations

import cmath
import math
import time
import warnings as _warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .arith import primes_up_to
from .coefficients import all_trivial, eval_product_coefficient
from .errors import ConvergenceError
from .system import LaurentMonomialSystem
from .variety import enumerate_box, local_solutions


@dataclass(frozen=True)
class EvalParams:
    """Truncation controls: box bound N, prime bound P, local exponent
    bound B (None picks the default from min Re s), tail-estimate flag."""

    N: int
    P: int
    B: Optional[int] = None
    tail_estimates: bool = True

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.P < 2:
            raise ValueError("P must be >= 2")
        if self.B is not None and not 1 <= self.B <= 64:
            raise ValueError("B must be in 1..64")


@dataclass(frozen=True)
class EvalReport:
    direct: complex
    euler: complex
    abs_diff: float
    direct_tail: Optional[float]
    euler_tail: Optional[float]
    wall_time: float
    params: EvalParams
    warnings: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "direct": [self.direct.real, self.direct.imag],
            "euler": [self.euler.real, self.euler.imag],
            "abs_diff": self.abs_diff,
            "direct_tail": self.direct_tail,
            "euler_tail": self.euler_tail,
            "wall_time": self.wall_time,
            "params": {"N": self.params.N, "P": self.params.P, "B": self.params.B},
            "warnings": list(self.warnings),
        }


class _CompensatedSum:
    """Neumaier-compensated accumulation, separately on Re and Im."""

    __slots__ = ("re", "im", "cre", "cim")

    def __init__(self):
        self.re = self.im = self.cre = self.cim = 0.0

    def add(self, z: complex):
        x = z.real
        t = self.re + x
        if abs(self.re) >= abs(x):
            self.cre += (self.re - t) + x
        else:
            self.cre += (x - t) + self.re
        self.re = t
        y = z.imag
        t = self.im + y
        if abs(self.im) >= abs(y):
            self.cim += (self.im - t) + y
        else:
            self.cim += (y - t) + self.im
        self.im = t

    def total(self) -> complex:
        return complex(self.re + self.cre, self.im + self.cim)


def check_series_point(s: Sequence[complex], t: int, override: bool) -> tuple:
    """Validate s against the variable count; Re s_j <= 1 needs the override.

    Returns a warning tuple (nonempty only for overridden requests, which
    are formal truncations rather than approximations of a limit).
    """
    if len(s) != t:
        raise ValueError(f"series point has {len(s)} entries, system has t={t}")
    sigma = min((z.real for z in s), default=2.0)
    if sigma <= 1.0:
        if not override:
            raise ConvergenceError(
                f"min Re s = {sigma} <= 1; pass override_convergence to evaluate "
                "a formal truncation")
        msg = f"formal truncation only: min Re s = {sigma} <= 1"
        _warnings.warn(msg, RuntimeWarning, stacklevel=3)
        return (msg,)
    return ()


def default_exponent_bound(s: Sequence[complex]) -> int:
    """Smallest B with 2^(-B * min Re s) < 1e-15, capped at 64."""
    sigma = min((z.real for z in s), default=2.0)
    if sigma <= 0:
        return 64
    return min(64, math.ceil(15 / (sigma * math.log10(2.0))) + 1)


def direct_sum(S: LaurentMonomialSystem, c, s, N: int,
               *, override_convergence: bool = False, work_cap=None) -> complex:
    """Sum a(n) / prod n_j^{s_j} over the box solutions, in lexicographic
    point order with compensated accumulation."""
    s = tuple(complex(z) for z in s)
    check_series_point(s, S.t, override_convergence)
    if len(c) != S.t:
        raise ValueError(f"coefficient tuple has {len(c)} families, t={S.t}")
    trivial = all_trivial(c)
    acc = _CompensatedSum()
    for pt in enumerate_box(S, N, work_cap=work_cap):
        expo = 0j
        for z, n in zip(s, pt.coords):
            if n != 1:
                expo += z * math.log(n)
        term = cmath.exp(-expo)
        if not trivial:
            term *= eval_product_coefficient(c, pt.coords)
        acc.add(term)
    return acc.total()


def local_factor(S: LaurentMonomialSystem, c, p: int, s, B: int,
                 *, _solutions=None) -> complex:
    """The Euler factor at p: sum over admissible exponent tuples alpha of
    a(p^alpha) * p^(-sum_j s_j alpha_j)."""
    s = tuple(complex(z) for z in s)
    sols = _solutions if _solutions is not None else local_solutions(S, p, B).solutions
    # power tables p^(-s_j * e) for e = 0..B
    tables = []
    for z in s:
        x = cmath.exp(-z * math.log(p))
        row = [1 + 0j] * (B + 1)
        for e in range(1, B + 1):
            row[e] = row[e - 1] * x
        tables.append(row)
    trivial = all_trivial(c)
    acc = _CompensatedSum()
    for alpha in sols:
        term = 1 + 0j
        for j, e in enumerate(alpha):
            if e:
                term *= tables[j][e]
        if not trivial:
            for fam, e in zip(c, alpha):
                if e:
                    term *= fam.prime_power(p, e)
        acc.add(term)
    return acc.total()


def _euler_chunk(args):
    S, c, s, B, primes, sols_by_rhs_key = args
    out = []
    for p, key in primes:
        out.append(local_factor(S, c, p, s, B, _solutions=sols_by_rhs_key[key]))
    return out


def euler_product(S: LaurentMonomialSystem, c, s, P: int, B: Optional[int] = None,
                  *, override_convergence: bool = False, threads: int = 1) -> complex:
    """Product of local factors over primes p <= P, in ascending prime order.

    Every prime dividing a twist must be <= P.  The local solution sets are
    shared across all primes with the same twist-valuation right-hand side,
    so the generic prime costs one cached enumeration.
    """
    from .variety import monomial_rhs_at

    s = tuple(complex(z) for z in s)
    check_series_point(s, S.t, override_convergence)
    if len(c) != S.t:
        raise ValueError(f"coefficient tuple has {len(c)} families, t={S.t}")
    if B is None:
        B = default_exponent_bound(s)
    for tp in S.twist_primes():
        if tp > P:
            raise ValueError(f"twist prime {tp} exceeds the prime bound P={P}")
    primes = primes_up_to(P)
    sols_by_rhs = {}
    keyed = []
    for p in primes:
        key = monomial_rhs_at(S, p)
        if key not in sols_by_rhs:
            sols_by_rhs[key] = local_solutions(S, p, B).solutions
        keyed.append((p, key))
    if threads > 1 and len(keyed) >= 64:
        nchunks = min(threads * 4, len(keyed))
        chunks = [keyed[i::nchunks] for i in range(nchunks)]
        # interleaved chunks are re-sorted below; factors multiply ascending
        factors = {}
        with ProcessPoolExecutor(max_workers=threads) as ex:
            for chunk, vals in zip(
                chunks,
                ex.map(_euler_chunk, [(S, c, s, B, ch, sols_by_rhs) for ch in chunks]),
            ):
                for (p, _), v in zip(chunk, vals):
                    factors[p] = v
        ordered = [factors[p] for p in primes]
    else:
        ordered = [local_factor(S, c, p, s, B, _solutions=sols_by_rhs[key])
                   for p, key in keyed]
    out = 1 + 0j
    for v in ordered:
        out *= v
    return out


def compare(S: LaurentMonomialSystem, c, s, params: EvalParams,
            *, override_convergence: bool = False, threads: int = 1) -> EvalReport:
    """Run both evaluators and report values, gap, and tail estimates
    |v(N) - v(N/2)| and |v(P) - v(P/2)|."""
    s = tuple(complex(z) for z in s)
    warnings = list(check_series_point(s, S.t, override_convergence))
    if S.empty_variety_flag:
        warnings.append("empty variety: a zero row has omega != omega'")
    B = params.B if params.B is not None else default_exponent_bound(s)
    t0 = time.perf_counter()
    direct = direct_sum(S, c, s, params.N, override_convergence=override_convergence)
    euler = euler_product(S, c, s, params.P, B,
                          override_convergence=override_convergence, threads=threads)
    direct_tail = euler_tail = None
    if params.tail_estimates:
        half_N = max(1, params.N // 2)
        direct_half = direct_sum(S, c, s, half_N,
                                 override_convergence=override_convergence)
        direct_tail = abs(direct - direct_half)
        half_P = params.P // 2
        if half_P >= 2 and all(tp <= half_P for tp in S.twist_primes()):
            euler_half = euler_product(S, c, s, half_P, B,
                                       override_convergence=override_convergence,
                                       threads=threads)
            euler_tail = abs(euler - euler_half)
        else:
            warnings.append("euler tail estimate skipped: P/2 below a twist prime")
    wall = time.perf_counter() - t0
    return EvalReport(
        direct=direct,
        euler=euler,
        abs_diff=abs(direct - euler),
        direct_tail=direct_tail,
        euler_tail=euler_tail,
        wall_time=wall,
        params=EvalParams(N=params.N, P=params.P, B=B,
                          tail_estimates=params.tail_estimates),
        warnings=tuple(warnings),
    )
