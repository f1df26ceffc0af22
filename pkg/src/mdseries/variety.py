"""General polynomial varieties and integer-point machinery.

Covers the constraint-expression parser, box enumeration of positive
integer points (with valuation pruning for Laurent monomial systems),
per-prime recombination and the Property (S) checker, the local solution
sets underlying the Euler product, and the prime-by-prime Cartesian
decomposition test.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .arith import factorize, primes_up_to, valuation
from .errors import ConstraintSyntaxError, WorkCapExceeded
from .limits import work_cap as _work_cap
from .system import LaurentMonomialSystem

_EXPONENT_CAP = 10**6

# Box scans revisit the same small coordinates constantly.
_fact_cached = lru_cache(maxsize=1 << 17)(factorize)


# ---------------------------------------------------------------------------
# constraint expression language
#
#   expr        := term (('+'|'-') term)*
#   term        := factor ('*' factor)*
#   factor      := atom ('^' uint)?
#   atom        := int | 'x' uint | '(' expr ')'
#   constraints := expr (';' expr)*

@dataclass(frozen=True)
class Const:
    value: int

    def evaluate(self, point):
        return self.value


@dataclass(frozen=True)
class Var:
    index: int  # 0-based

    def evaluate(self, point):
        return point[self.index]


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: object
    right: object

    def evaluate(self, point):
        a = self.left.evaluate(point)
        b = self.right.evaluate(point)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        return a * b


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int

    def evaluate(self, point):
        return self.base.evaluate(point) ** self.exponent


class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens = []
        self._scan()

    def _error(self, msg, line=None, col=None):
        raise ConstraintSyntaxError(msg, line or self.line, col or self.col)

    def _scan(self):
        text = self.text
        i = 0
        line, col = 1, 1
        n = len(text)
        while i < n:
            ch = text[i]
            if ch == "\n":
                i += 1
                line += 1
                col = 1
                continue
            if ch.isspace():
                i += 1
                col += 1
                continue
            start_col = col
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.tokens.append(("int", int(text[i:j]), line, start_col))
                col += j - i
                i = j
                continue
            if ch == "x":
                j = i + 1
                while j < n and text[j].isdigit():
                    j += 1
                if j == i + 1:
                    raise ConstraintSyntaxError("expected digits after 'x'", line, col)
                self.tokens.append(("var", int(text[i + 1 : j]), line, start_col))
                col += j - i
                i = j
                continue
            if ch in "+-*^();":
                self.tokens.append((ch, None, line, start_col))
                i += 1
                col += 1
                continue
            raise ConstraintSyntaxError(f"unexpected character {ch!r}", line, col)
        self.tokens.append(("end", None, line, col))


class _Parser:
    def __init__(self, text, t):
        self.toks = _Tokenizer(text).tokens
        self.pos = 0
        self.t = t

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ConstraintSyntaxError(f"expected {kind!r}, found {tok[0]!r}", tok[2], tok[3])
        return tok

    def parse_constraints(self):
        out = [self.parse_expr()]
        while self.peek()[0] == ";":
            self.next()
            out.append(self.parse_expr())
        tok = self.peek()
        if tok[0] != "end":
            raise ConstraintSyntaxError(f"unexpected {tok[0]!r}", tok[2], tok[3])
        return out

    def parse_expr(self):
        node = self.parse_term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.peek()[0] == "*":
            self.next()
            node = BinOp("*", node, self.parse_factor())
        return node

    def parse_factor(self):
        node = self.parse_atom()
        if self.peek()[0] == "^":
            self.next()
            tok = self.expect("int")
            if tok[1] > _EXPONENT_CAP:
                raise ConstraintSyntaxError(f"exponent {tok[1]} too large", tok[2], tok[3])
            node = Pow(node, tok[1])
        return node

    def parse_atom(self):
        tok = self.next()
        if tok[0] == "int":
            return Const(tok[1])
        if tok[0] == "var":
            if not 1 <= tok[1] <= self.t:
                raise ConstraintSyntaxError(
                    f"variable x{tok[1]} out of range 1..{self.t}", tok[2], tok[3])
            return Var(tok[1] - 1)
        if tok[0] == "(":
            node = self.parse_expr()
            self.expect(")")
            return node
        raise ConstraintSyntaxError(f"unexpected {tok[0]!r}", tok[2], tok[3])


@dataclass(frozen=True)
class PolynomialVariety:
    """Integer-coefficient constraints f_1 = ... = f_m = 0 in t variables."""

    t: int
    constraints: tuple

    def evaluate(self, point) -> tuple:
        return tuple(f.evaluate(point) for f in self.constraints)

    def is_solution(self, point) -> bool:
        return all(f.evaluate(point) == 0 for f in self.constraints)


def parse_constraints(text: str, t: int) -> PolynomialVariety:
    """Parse ';'-separated constraint expressions over x1..xt."""
    if t < 1:
        raise ValueError("t must be >= 1")
    exprs = _Parser(text, t).parse_constraints()
    return PolynomialVariety(t=t, constraints=tuple(exprs))


# ---------------------------------------------------------------------------
# integer points

class IntegerPoint:
    """A positive-integer point with per-coordinate factorizations."""

    __slots__ = ("coords", "_facts")

    def __init__(self, coords):
        self.coords = tuple(int(c) for c in coords)
        if any(c < 1 for c in self.coords):
            raise ValueError("coordinates must be positive integers")
        self._facts = None

    @property
    def factorizations(self) -> tuple:
        if self._facts is None:
            self._facts = tuple(_fact_cached(c) for c in self.coords)
        return self._facts

    def support_primes(self) -> tuple:
        ps = set()
        for fact in self.factorizations:
            for p, _ in fact:
                ps.add(p)
        return tuple(sorted(ps))

    def exponent_column(self, p: int) -> tuple:
        """(v_p(n_1), ..., v_p(n_t))."""
        out = []
        for fact in self.factorizations:
            e = 0
            for q, k in fact:
                if q == p:
                    e = k
                    break
            out.append(e)
        return tuple(out)

    def __eq__(self, other):
        return isinstance(other, IntegerPoint) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __lt__(self, other):
        return self.coords < other.coords

    def __repr__(self):
        return f"IntegerPoint{self.coords}"


# ---------------------------------------------------------------------------
# membership tests for monomial systems

@lru_cache(maxsize=256)
def _twist_data(S: LaurentMonomialSystem):
    """Per-prime right-hand sides v_p(omega'_i) - v_p(omega_i)."""
    primes = S.twist_primes()
    rhs = {}
    for p in primes:
        rhs[p] = tuple(valuation(p, wp) - valuation(p, w)
                       for w, wp in zip(S.omega, S.omega_prime))
    return primes, rhs


def monomial_rhs_at(S: LaurentMonomialSystem, p: int) -> tuple:
    """(v_p(omega'_i) - v_p(omega_i))_i, zero when p divides no twist."""
    primes, rhs = _twist_data(S)
    return rhs.get(p, (0,) * S.m)


def on_monomial_variety(S: LaurentMonomialSystem, coords) -> bool:
    """Membership via the valuation identity at every relevant prime:
    sum_j a_ij * v_p(n_j) = v_p(omega'_i) - v_p(omega_i)."""
    point = coords if isinstance(coords, IntegerPoint) else IntegerPoint(coords)
    primes = set(point.support_primes())
    primes.update(_twist_data(S)[0])
    for p in sorted(primes):
        col = point.exponent_column(p)
        rhs = monomial_rhs_at(S, p)
        for i in range(S.m):
            if sum(a * e for a, e in zip(S.A[i], col)) != rhs[i]:
                return False
    return True


def on_monomial_variety_rational(S: LaurentMonomialSystem, coords) -> bool:
    """Membership by exact rational evaluation of omega_i * prod n_j^a_ij."""
    cs = coords.coords if isinstance(coords, IntegerPoint) else tuple(coords)
    for i in range(S.m):
        num, den = S.omega[i], 1
        for a, n in zip(S.A[i], cs):
            if a > 0:
                num *= n**a
            elif a < 0:
                den *= n ** (-a)
        if num != S.omega_prime[i] * den:
            return False
    return True


# ---------------------------------------------------------------------------
# box enumeration

_LOG_SLACK = 1e-6  # relative widening of pruning intervals


def _enumerate_monomial(S: LaurentMonomialSystem, N: int, cap: int):
    """DFS over coordinates with log-space interval pruning.

    Each level intersects the ranges every constraint still allows for the
    next coordinate.  The intervals are computed in floating logs and
    rounded outward, so they can only over-admit, never exclude a solution;
    full tuples are accepted or rejected by the exact valuation test.
    """
    t, m = S.t, S.m
    if t == 0:
        return [IntegerPoint(())] if all(w == wp for w, wp in zip(S.omega, S.omega_prime)) else []
    A = S.A
    target_log = [math.log(wp) - math.log(w)
                  for w, wp in zip(S.omega, S.omega_prime)]
    lnN = math.log(N) if N > 1 else 0.0
    # rest of constraint i over variables >= j spans [-neg_suf, pos_suf] in logs
    pos_suf = [[0] * (t + 1) for _ in range(m)]
    neg_suf = [[0] * (t + 1) for _ in range(m)]
    for i in range(m):
        for j in range(t - 1, -1, -1):
            a = A[i][j]
            pos_suf[i][j] = pos_suf[i][j + 1] + (a if a > 0 else 0)
            neg_suf[i][j] = neg_suf[i][j + 1] + (-a if a < 0 else 0)

    def floor_from_log(L):
        if L >= lnN:
            return N
        if L < -_LOG_SLACK:
            return 0
        return int(math.exp(L) * (1 + _LOG_SLACK) + _LOG_SLACK)

    def ceil_from_log(L):
        if L <= 0:
            return 1
        if L > lnN + _LOG_SLACK:
            return N + 1
        v = math.exp(L) * (1 - _LOG_SLACK) - _LOG_SLACK
        f = int(v)
        return f if f >= v else f + 1

    sols = []
    nodes = 0
    coords = [0] * t

    def rec(j, partial_log):
        nonlocal nodes
        lo, hi = 1, N
        for i in range(m):
            a = A[i][j]
            ratio = target_log[i] - partial_log[i]
            lo_log = ratio - pos_suf[i][j + 1] * lnN
            hi_log = ratio + neg_suf[i][j + 1] * lnN
            if a == 0:
                if lo_log > _LOG_SLACK or hi_log < -_LOG_SLACK:
                    return
                continue
            if a > 0:
                xl, xh = lo_log / a, hi_log / a
            else:
                xl, xh = hi_log / a, lo_log / a
            lo = max(lo, ceil_from_log(xl))
            hi = min(hi, floor_from_log(xh))
            if lo > hi:
                return
        last = j == t - 1
        for x in range(lo, hi + 1):
            nodes += 1
            if nodes > cap:
                raise WorkCapExceeded(nodes, cap, "monomial box enumeration")
            coords[j] = x
            if last:
                if m == 0 or on_monomial_variety(S, tuple(coords)):
                    sols.append(IntegerPoint(tuple(coords)))
            else:
                lnx = math.log(x)
                rec(j + 1, [pl + A[i][j] * lnx if A[i][j] else pl
                            for i, pl in enumerate(partial_log)])

    rec(0, [0.0] * m)
    return sols


def _enumerate_polynomial(V: PolynomialVariety, N: int, cap: int):
    total = N**V.t
    if total > cap:
        raise WorkCapExceeded(total, cap, "polynomial box enumeration")
    out = []
    for point in itertools.product(range(1, N + 1), repeat=V.t):
        if V.is_solution(point):
            out.append(IntegerPoint(point))
    return out


def enumerate_box(V, N: int, *, work_cap=None) -> list:
    """All points of [1,N]^t on the variety, in lexicographic order."""
    if N < 1:
        raise ValueError("box bound N must be >= 1")
    cap = _work_cap(work_cap)
    if isinstance(V, LaurentMonomialSystem):
        return _enumerate_monomial(V, N, cap)
    if isinstance(V, PolynomialVariety):
        return _enumerate_polynomial(V, N, cap)
    raise TypeError(f"cannot enumerate {type(V).__name__}")


# ---------------------------------------------------------------------------
# Property (S)

def recombine(x: IntegerPoint, y: IntegerPoint, choice: dict) -> IntegerPoint:
    """Per-prime recombination: at each prime take the whole exponent column
    from x or from y as directed by choice[p] in {'x','y'}."""
    primes = sorted(set(x.support_primes()) | set(y.support_primes()))
    missing = [p for p in primes if p not in choice]
    if missing:
        raise ValueError(f"choice does not cover primes {missing}")
    t = len(x.coords)
    coords = [1] * t
    for p in primes:
        side = choice[p]
        if side == "x":
            col = x.exponent_column(p)
        elif side == "y":
            col = y.exponent_column(p)
        else:
            raise ValueError(f"choice[{p}] must be 'x' or 'y', got {side!r}")
        for j in range(t):
            if col[j]:
                coords[j] *= p ** col[j]
    return IntegerPoint(coords)


@dataclass(frozen=True)
class Witness:
    """A Property (S) violation: recombining x and y by `choice` leaves the
    variety at `point`."""
    x: IntegerPoint
    y: IntegerPoint
    choice: tuple      # ((prime, 'x'|'y'), ...) sorted by prime
    point: IntegerPoint


def _on_variety(V, point: IntegerPoint) -> bool:
    if isinstance(V, LaurentMonomialSystem):
        return on_monomial_variety(V, point)
    return V.is_solution(point.coords)


def check_property_S(V, N: int, *, work_cap=None) -> Optional[Witness]:
    """Exhaustive pairwise recombination scan over the box solutions.

    Returns the first violating witness in deterministic order, or None.
    Recombined points may leave the box; they are tested by direct
    constraint evaluation, never by box membership.
    """
    cap = _work_cap(work_cap)
    sols = enumerate_box(V, N, work_cap=cap)
    spent = 0
    for ix in range(len(sols)):
        for iy in range(ix + 1, len(sols)):
            x, y = sols[ix], sols[iy]
            primes = sorted(set(x.support_primes()) | set(y.support_primes()))
            k = len(primes)
            spent += 1 << k
            if spent > cap:
                raise WorkCapExceeded(spent, cap, "Property (S) recombination scan")
            for mask in range(1, (1 << k) - 1):  # skip all-x and all-y
                choice = {p: ("y" if mask >> idx & 1 else "x")
                          for idx, p in enumerate(primes)}
                point = recombine(x, y, choice)
                if not _on_variety(V, point):
                    return Witness(
                        x=x, y=y,
                        choice=tuple(sorted(choice.items())),
                        point=point,
                    )
    return None


# ---------------------------------------------------------------------------
# local solution sets and the Cartesian decomposition

@dataclass(frozen=True)
class LocalSolutionSet:
    """Nonnegative exponent tuples alpha with max entry <= bound solving
    sum_j a_ij alpha_j = v_p(omega'_i) - v_p(omega_i) for every i."""
    p: int
    bound: int
    solutions: tuple   # sorted tuples


def _local_solutions_for_rhs(A, t, m, rhs, B):
    smin = [[0] * (t + 1) for _ in range(m)]
    smax = [[0] * (t + 1) for _ in range(m)]
    for i in range(m):
        for j in range(t - 1, -1, -1):
            a = A[i][j]
            smin[i][j] = smin[i][j + 1] + (a * B if a < 0 else 0)
            smax[i][j] = smax[i][j + 1] + (a * B if a > 0 else 0)
    out = []
    alpha = [0] * t

    def rec(j, partial):
        if j == t:
            if all(partial[i] == rhs[i] for i in range(m)):
                out.append(tuple(alpha))
            return
        lo, hi = 0, B
        for i in range(m):
            a = A[i][j]
            need_lo = rhs[i] - partial[i] - smax[i][j + 1]
            need_hi = rhs[i] - partial[i] - smin[i][j + 1]
            if a == 0:
                if need_lo > 0 or need_hi < 0:
                    return
                continue
            if a > 0:
                lo = max(lo, -((-need_lo) // a))   # ceil(need_lo / a)
                hi = min(hi, need_hi // a)
            else:
                lo = max(lo, -((-need_hi) // a))   # ceil(need_hi / a)
                hi = min(hi, need_lo // a)
            if lo > hi:
                return
        for x in range(lo, hi + 1):
            alpha[j] = x
            rec(j + 1, [partial[i] + A[i][j] * x for i in range(m)])
        alpha[j] = 0

    rec(0, [0] * m)
    return tuple(out)


def local_solutions(S: LaurentMonomialSystem, p: int, B: int) -> LocalSolutionSet:
    """Admissible exponent tuples at the prime p, by pruned enumeration."""
    if not 0 <= B <= 64:
        raise ValueError("exponent bound B must be in 0..64")
    rhs = monomial_rhs_at(S, p)
    sols = _local_solutions_for_rhs(S.A, S.t, S.m, rhs, B)
    return LocalSolutionSet(p=p, bound=B, solutions=sols)


@dataclass(frozen=True)
class CartesianCheck:
    equal: bool
    point: Optional[tuple] = None   # first differing coordinate tuple
    side: Optional[str] = None      # 'box-only' or 'recombined-only'


def cartesian_check(S: LaurentMonomialSystem, N: int, P: int, B: int,
                    *, work_cap=None) -> CartesianCheck:
    """Verify that P-smooth box solutions with exponents <= B coincide with
    the in-box recombinations of the per-prime local solution sets."""
    cap = _work_cap(work_cap)
    for p in S.twist_primes():
        if p > P:
            raise ValueError(f"twist prime {p} exceeds the prime bound P={P}")
    lhs = set()
    for pt in enumerate_box(S, N, work_cap=cap):
        ok = True
        for fact in pt.factorizations:
            for p, e in fact:
                if p > P or e > B:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            lhs.add(pt.coords)

    # Primes in (N, P] cannot contribute a factor inside the box; they only
    # matter through whether their local set admits the zero vector.
    rhs_points = set()
    feasible = all(not any(monomial_rhs_at(S, p)) for p in primes_up_to(P) if p > N)
    if feasible:
        mandatory = []
        optional = []
        for p in primes_up_to(min(P, N)):
            local = local_solutions(S, p, B).solutions
            has_zero = any(not any(a) for a in local)
            if not has_zero:
                mandatory.append((p, list(local)))
            else:
                nz = [a for a in local if any(a)]
                if nz:
                    optional.append((p, nz))

        def grow(coords, p, alpha):
            new = list(coords)
            for j, e in enumerate(alpha):
                if e:
                    new[j] *= p**e
                    if new[j] > N:
                        return None
            return tuple(new)

        spent = 0
        seeds = [(1,) * S.t]
        for p, opts in mandatory:
            nxt = []
            for coords in seeds:
                for alpha in opts:
                    got = grow(coords, p, alpha)
                    if got is not None:
                        nxt.append(got)
                        spent += 1
                        if spent > cap:
                            raise WorkCapExceeded(spent, cap, "Cartesian recombination")
            seeds = nxt
        stack = [(coords, 0) for coords in seeds]
        while stack:
            coords, idx = stack.pop()
            rhs_points.add(coords)
            spent += 1
            if spent > cap:
                raise WorkCapExceeded(spent, cap, "Cartesian recombination")
            for k in range(idx, len(optional)):
                p, opts = optional[k]
                for alpha in opts:
                    got = grow(coords, p, alpha)
                    if got is not None:
                        stack.append((got, k + 1))

    if lhs == rhs_points:
        return CartesianCheck(equal=True)
    only_box = sorted(lhs - rhs_points)
    only_rec = sorted(rhs_points - lhs)
    if only_box and (not only_rec or only_box[0] <= only_rec[0]):
        return CartesianCheck(equal=False, point=only_box[0], side="box-only")
    return CartesianCheck(equal=False, point=only_rec[0], side="recombined-only")
