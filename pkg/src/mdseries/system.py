"""Laurent monomial systems and the value-preserving row operations.

A system is m constraints omega_i * prod_j n_j^{a_ij} = omega'_i over t
positive-integer variables.  Three row operations preserve the solution
set (and hence every restricted series built on it): swapping rows,
negating a row while exchanging its twists, and adding an integer multiple
of one row to another with multiplicative twist updates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from .arith import factorize
from .errors import TwistOverflowError, WorkCapExceeded
from .limits import SUPPORT_COMBO_CAP, TWIST_LIMIT


@dataclass(frozen=True)
class LaurentMonomialSystem:
    t: int
    m: int
    A: tuple                # m rows of t integers each
    omega: tuple            # m positive integers
    omega_prime: tuple      # m positive integers

    def __post_init__(self):
        if self.t < 0 or self.m < 0:
            raise ValueError("t and m must be nonnegative")
        if len(self.A) != self.m:
            raise ValueError(f"A has {len(self.A)} rows, expected m={self.m}")
        for i, row in enumerate(self.A):
            if len(row) != self.t:
                raise ValueError(f"A[{i}] has {len(row)} entries, expected t={self.t}")
        for name, tw in (("omega", self.omega), ("omega_prime", self.omega_prime)):
            if len(tw) != self.m:
                raise ValueError(f"{name} has {len(tw)} entries, expected m={self.m}")
            for i, w in enumerate(tw):
                if w < 1:
                    raise ValueError(f"{name}[{i}] must be a positive integer, got {w}")
                if w > TWIST_LIMIT:
                    raise TwistOverflowError(f"{name}[{i}] exceeds the twist cap")

    @property
    def empty_variety_flag(self) -> bool:
        """A zero row with omega != omega' admits no solutions at all."""
        return any(
            all(a == 0 for a in row) and w != wp
            for row, w, wp in zip(self.A, self.omega, self.omega_prime)
        )

    def twist_primes(self) -> tuple:
        """Sorted primes dividing any omega_i or omega'_i."""
        ps = set()
        for w in itertools.chain(self.omega, self.omega_prime):
            for p, _ in factorize(w):
                ps.add(p)
        return tuple(sorted(ps))


def make_system(A, omega=None, omega_prime=None, t=None) -> LaurentMonomialSystem:
    """Convenience constructor; twists default to all ones."""
    rows = tuple(tuple(int(a) for a in row) for row in A)
    m = len(rows)
    if t is None:
        if m == 0:
            raise ValueError("t must be given for a system with no constraints")
        t = len(rows[0])
    omega = tuple(int(w) for w in (omega if omega is not None else [1] * m))
    omega_prime = tuple(int(w) for w in (omega_prime if omega_prime is not None else [1] * m))
    return LaurentMonomialSystem(t=t, m=m, A=rows, omega=omega, omega_prime=omega_prime)


@dataclass(frozen=True)
class Swap:
    i: int
    j: int


@dataclass(frozen=True)
class Negate:
    i: int


@dataclass(frozen=True)
class AddMultiple:
    """row_i += b * row_j with the matching multiplicative twist update."""
    i: int
    j: int
    b: int


RowOperation = Union[Swap, Negate, AddMultiple]


def _checked_twist(v: int) -> int:
    if v > TWIST_LIMIT:
        raise TwistOverflowError(f"twist value {v} exceeds 2^63-1")
    return v


def apply_row_op(S: LaurentMonomialSystem, op: RowOperation) -> LaurentMonomialSystem:
    """Apply one row operation; indices are 0-based.

    AddMultiple with b >= 0 maps (omega_i, omega'_i) to
    (omega_i * omega_j^b, omega'_i * omega'_j^b); with b < 0 the roles of
    omega_j and omega'_j swap, which is the composite of |b| additions of
    the negated row j and keeps all twists integral.
    """
    A = [list(row) for row in S.A]
    w = list(S.omega)
    wp = list(S.omega_prime)
    if isinstance(op, Swap):
        i, j = op.i, op.j
        if i == j:
            raise ValueError("Swap needs distinct rows")
        A[i], A[j] = A[j], A[i]
        w[i], w[j] = w[j], w[i]
        wp[i], wp[j] = wp[j], wp[i]
    elif isinstance(op, Negate):
        i = op.i
        A[i] = [-a for a in A[i]]
        w[i], wp[i] = wp[i], w[i]
    elif isinstance(op, AddMultiple):
        i, j, b = op.i, op.j, op.b
        if i == j:
            raise ValueError("AddMultiple needs distinct rows")
        A[i] = [x + b * y for x, y in zip(A[i], A[j])]
        if b >= 0:
            w[i] = _checked_twist(w[i] * w[j] ** b)
            wp[i] = _checked_twist(wp[i] * wp[j] ** b)
        else:
            w[i] = _checked_twist(w[i] * wp[j] ** (-b))
            wp[i] = _checked_twist(wp[i] * w[j] ** (-b))
    else:
        raise TypeError(f"unknown row operation {op!r}")
    return LaurentMonomialSystem(
        t=S.t, m=S.m, A=tuple(tuple(r) for r in A), omega=tuple(w), omega_prime=tuple(wp)
    )


def negate_system(S: LaurentMonomialSystem) -> LaurentMonomialSystem:
    """The identity D_A(s; w, w') = D_{-A}(s; w', w): negate A, swap twists."""
    return LaurentMonomialSystem(
        t=S.t,
        m=S.m,
        A=tuple(tuple(-a for a in row) for row in S.A),
        omega=S.omega_prime,
        omega_prime=S.omega,
    )


def block_compose(S1: LaurentMonomialSystem, S2: LaurentMonomialSystem) -> LaurentMonomialSystem:
    """Block-diagonal composition: the product of the two series."""
    rows = [tuple(row) + (0,) * S2.t for row in S1.A]
    rows += [(0,) * S1.t + tuple(row) for row in S2.A]
    return LaurentMonomialSystem(
        t=S1.t + S2.t,
        m=S1.m + S2.m,
        A=tuple(rows),
        omega=S1.omega + S2.omega,
        omega_prime=S1.omega_prime + S2.omega_prime,
    )


def permute_columns(S: LaurentMonomialSystem, perm) -> LaurentMonomialSystem:
    """Relabel variables: column j of the result is column perm[j] of S.

    Not one of the three row operations; callers must permute s the same way.
    """
    if sorted(perm) != list(range(S.t)):
        raise ValueError("perm must be a permutation of 0..t-1")
    return LaurentMonomialSystem(
        t=S.t,
        m=S.m,
        A=tuple(tuple(row[perm[j]] for j in range(S.t)) for row in S.A),
        omega=S.omega,
        omega_prime=S.omega_prime,
    )


def normalize(S: LaurentMonomialSystem):
    """Hermite-style canonical form reached purely by the three row operations.

    Pivots are chosen leftmost with minimal absolute value and made positive
    by Negate; entries above each pivot are reduced into [0, pivot).  Rows
    that become zero with omega == omega' are dropped (they read 1 = 1);
    a zero row with omega != omega' stays and flags the empty variety.
    Returns (canonical system, op log); op indices refer to the m-row system.
    """
    cur = S
    ops = []

    def do(op):
        nonlocal cur
        cur = apply_row_op(cur, op)
        ops.append(op)

    r = 0
    for c in range(cur.t):
        # Euclid in column c over rows >= r until one nonzero entry remains.
        while True:
            live = [i for i in range(r, cur.m) if cur.A[i][c] != 0]
            if len(live) <= 1:
                break
            piv = min(live, key=lambda i: (abs(cur.A[i][c]), i))
            for i in live:
                if i == piv:
                    continue
                q = cur.A[i][c] // cur.A[piv][c]
                if q != 0:
                    do(AddMultiple(i, piv, -q))
        live = [i for i in range(r, cur.m) if cur.A[i][c] != 0]
        if not live:
            continue
        piv = live[0]
        if piv != r:
            do(Swap(r, piv))
        if cur.A[r][c] < 0:
            do(Negate(r))
        for i in range(r):
            q = cur.A[i][c] // cur.A[r][c]
            if q != 0:
                do(AddMultiple(i, r, -q))
        r += 1
    # r..m-1 are zero rows now; keep only the conflicting ones.
    keep = list(range(r))
    for i in range(r, cur.m):
        if cur.omega[i] != cur.omega_prime[i]:
            keep.append(i)
    out = LaurentMonomialSystem(
        t=cur.t,
        m=len(keep),
        A=tuple(cur.A[i] for i in keep),
        omega=tuple(cur.omega[i] for i in keep),
        omega_prime=tuple(cur.omega_prime[i] for i in keep),
    )
    return out, ops


# ---------------------------------------------------------------------------
# integer row lattices (no twists): HNF, membership, support search

def hnf_rows(rows) -> list:
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Zero rows are dropped; pivots are positive; entries above a pivot are
    reduced into [0, pivot).  The result is a canonical basis.
    """
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return []
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        while True:
            live = [i for i in range(r, len(mat)) if mat[i][c] != 0]
            if len(live) <= 1:
                break
            piv = min(live, key=lambda i: (abs(mat[i][c]), i))
            for i in live:
                if i == piv:
                    continue
                q = mat[i][c] // mat[piv][c]
                if q:
                    mat[i] = [x - q * y for x, y in zip(mat[i], mat[piv])]
        live = [i for i in range(r, len(mat)) if mat[i][c] != 0]
        if not live:
            continue
        piv = live[0]
        mat[r], mat[piv] = mat[piv], mat[r]
        if mat[r][c] < 0:
            mat[r] = [-x for x in mat[r]]
        for i in range(r):
            q = mat[i][c] // mat[r][c]
            if q:
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
        r += 1
    return [row for row in mat[:r]]


def lattice_contains(hnf, vec) -> bool:
    """Membership of vec in the lattice with HNF basis `hnf` (exact)."""
    v = list(vec)
    pivots = []
    for row in hnf:
        c = next(i for i, x in enumerate(row) if x)
        pivots.append((c, row))
    for c, row in pivots:
        if v[c] % row[c] != 0:
            return False
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def express_in_rows(target, rows) -> Optional[list]:
    """Integer coefficients x with x . rows == target, or None.

    Runs HNF on `rows` while tracking the unimodular transform, then solves
    by back-substitution against the pivots.
    """
    mat = [list(r) for r in rows]
    n = len(mat)
    if n == 0:
        return None if any(target) else []
    ncols = len(mat[0])
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    r = 0
    for c in range(ncols):
        while True:
            live = [i for i in range(r, n) if mat[i][c] != 0]
            if len(live) <= 1:
                break
            piv = min(live, key=lambda i: (abs(mat[i][c]), i))
            for i in live:
                if i == piv:
                    continue
                q = mat[i][c] // mat[piv][c]
                if q:
                    mat[i] = [x - q * y for x, y in zip(mat[i], mat[piv])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[piv])]
        live = [i for i in range(r, n) if mat[i][c] != 0]
        if not live:
            continue
        piv = live[0]
        mat[r], mat[piv] = mat[piv], mat[r]
        U[r], U[piv] = U[piv], U[r]
        if mat[r][c] < 0:
            mat[r] = [-x for x in mat[r]]
            U[r] = [-x for x in U[r]]
        r += 1
    v = list(target)
    coeffs = [0] * n
    for i in range(r):
        c = next(k for k, x in enumerate(mat[i]) if x)
        if v[c] % mat[i][c] != 0:
            return None
        q = v[c] // mat[i][c]
        if q:
            v = [x - q * y for x, y in zip(v, mat[i])]
            coeffs = [x + q * y for x, y in zip(coeffs, U[i])]
    if any(v):
        return None
    return coeffs


@dataclass(frozen=True)
class SupportSearch:
    """Outcome of the bounded small-support basis search."""
    reducible: bool
    basis: Optional[tuple]   # rows, each with at most 2 nonzero entries
    coeff_bound: int


def support_reducible(A, coeff_bound: int) -> SupportSearch:
    """Search the row lattice of A for a generating set of vectors with at
    most two nonzero entries each.

    Candidates are all integer row combinations with coefficients bounded by
    coeff_bound in absolute value; a positive certificate is a subset of
    them generating the full row lattice.  A negative answer only means no
    such set exists within the bound.
    """
    if not 1 <= coeff_bound <= 20:
        raise ValueError("coeff_bound must be in 1..20")
    rows = [tuple(int(x) for x in row) for row in A]
    rows = [r for r in rows if any(r)]
    if not rows:
        return SupportSearch(reducible=True, basis=(), coeff_bound=coeff_bound)
    m = len(rows)
    total = (2 * coeff_bound + 1) ** m
    if total > SUPPORT_COMBO_CAP:
        raise WorkCapExceeded(total, SUPPORT_COMBO_CAP, "support-reduction search")
    target_hnf = hnf_rows(rows)
    ncols = len(rows[0])
    candidates = set()
    for combo in itertools.product(range(-coeff_bound, coeff_bound + 1), repeat=m):
        if not any(combo):
            continue
        vec = tuple(sum(c * row[j] for c, row in zip(combo, rows)) for j in range(ncols))
        if any(vec) and sum(1 for x in vec if x) <= 2:
            lead = next(x for x in vec if x)
            if lead < 0:
                vec = tuple(-x for x in vec)
            candidates.add(vec)
    chosen = []
    span = []
    for vec in sorted(candidates, key=lambda v: (max(abs(x) for x in v), v)):
        if chosen and lattice_contains(span, vec):
            continue
        chosen.append(vec)
        span = hnf_rows(chosen)
        if span == target_hnf:
            return SupportSearch(reducible=True, basis=tuple(chosen), coeff_bound=coeff_bound)
    return SupportSearch(reducible=False, basis=None, coeff_bound=coeff_bound)
