"""Exact integer linear algebra: Smith normal form and finitely generated
abelian groups.

Everything here works on plain Python ints (arbitrary precision) and
list-of-list matrices.  Entries of intermediate matrices can grow far beyond
machine words on harmless-looking inputs, so no floats and no fixed-width
arrays appear anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import zip_longest
from math import prod


Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("matrix shape mismatch in product")
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        for k in range(inner):
            x = row[k]
            if x:
                brow = b[k]
                orow = out[i]
                for j in range(cols):
                    orow[j] += x * brow[j]
    return out


def mat_vec(a: Matrix, v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def copy_matrix(a: Matrix) -> Matrix:
    return [row[:] for row in a]


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def determinant(a: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    m = copy_matrix(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SNFResult:
    """Smith normal form U*A*V = D with unimodular U, V.

    The diagonal of D is non-negative and satisfies d1 | d2 | ... ; off
    diagonal entries are zero.
    """

    U: Matrix
    D: Matrix
    V: Matrix

    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)


def _xgcd(a: int, b: int):
    """g = gcd(a, b) >= 0 together with x, y such that x*a + y*b = g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def smith_normal_form(a: Matrix) -> SNFResult:
    """Diagonalize an integer matrix by unimodular row and column operations.

    Pivot entries are cleared with 2x2 extended-gcd blocks (determinant one),
    which keeps intermediate entries from exploding; the pivot is the entry of
    minimal nonzero absolute value with (row, col) tie-breaking, so the result
    is deterministic.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d = copy_matrix(a)
    if rows and any(len(row) != cols for row in d):
        raise ValueError("ragged matrix")
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in d:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def clear_in_column(k, i):
        """Make d[i][k] = 0 using rows k and i (gcd lands at d[k][k])."""
        b = d[i][k]
        if b == 0:
            return
        p = d[k][k]
        if p == 0:
            swap_rows(k, i)
            return
        if b % p == 0:
            q = b // p
            for m in (d, u):
                rk, ri = m[k], m[i]
                for t in range(len(ri)):
                    ri[t] -= q * rk[t]
            return
        g, x, y = _xgcd(p, b)
        pg, bg = p // g, b // g
        for m in (d, u):
            rk, ri = m[k], m[i]
            for t in range(len(rk)):
                rkt, rit = rk[t], ri[t]
                rk[t] = x * rkt + y * rit
                ri[t] = -bg * rkt + pg * rit

    def clear_in_row(k, j):
        """Make d[k][j] = 0 using columns k and j."""
        b = d[k][j]
        if b == 0:
            return
        p = d[k][k]
        if p == 0:
            swap_cols(k, j)
            return
        if b % p == 0:
            q = b // p
            for m in (d, v):
                for row in m:
                    row[j] -= q * row[k]
            return
        g, x, y = _xgcd(p, b)
        pg, bg = p // g, b // g
        for m in (d, v):
            for row in m:
                rk, rj = row[k], row[j]
                row[k] = x * rk + y * rj
                row[j] = -bg * rk + pg * rj

    def find_pivot(k):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                x = d[i][j]
                if x != 0 and (best is None or abs(x) < abs(d[best[0]][best[1]])):
                    best = (i, j)
                    if abs(x) == 1:
                        return best
        return best

    k = 0
    limit = min(rows, cols)
    while k < limit:
        piv = find_pivot(k)
        if piv is None:
            break
        swap_rows(k, piv[0])
        swap_cols(k, piv[1])
        while True:
            for i in range(k + 1, rows):
                clear_in_column(k, i)
            for j in range(k + 1, cols):
                clear_in_row(k, j)
            # a gcd step in the row pass may have refilled the column
            if all(d[i][k] == 0 for i in range(k + 1, rows)) and all(
                d[k][j] == 0 for j in range(k + 1, cols)
            ):
                break
        # Enforce divisibility of the remaining block by the pivot.
        offender = None
        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                if d[i][j] % d[k][k] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for m in (d, u):
                rk, ri = m[k], m[offender]
                for t in range(len(rk)):
                    rk[t] += ri[t]
            continue
        if d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
        k += 1
    return SNFResult(U=u, D=d, V=v)


def kernel_basis(a: Matrix, cols: int | None = None) -> list[list[int]]:
    """Basis (as column vectors) of the integer kernel of ``a``.

    ``cols`` must be supplied when ``a`` has zero rows, since the width cannot
    be recovered from an empty list.
    """
    rows = len(a)
    if cols is None:
        if rows == 0:
            raise ValueError("kernel of a 0-row matrix needs an explicit column count")
        cols = len(a[0]) if a else 0
    if rows == 0:
        return [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]
    snf = smith_normal_form(a)
    diag = snf.diagonal()
    basis = []
    for j in range(cols):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            basis.append([snf.V[i][j] for i in range(cols)])
    return basis


def solve(a: Matrix, b: list[int], cols: int | None = None,
          snf: SNFResult | None = None) -> list[int] | None:
    """One integer solution x of a*x = b, or None when there is none.

    Pass a precomputed ``snf`` of ``a`` when solving against the same matrix
    repeatedly."""
    rows = len(a)
    if cols is None:
        cols = len(a[0]) if rows else 0
    if rows == 0:
        return [0] * cols
    if snf is None:
        snf = smith_normal_form(a)
    c = mat_vec(snf.U, b)
    diag = snf.diagonal()
    y = [0] * cols
    for i in range(rows):
        d = diag[i] if i < len(diag) else 0
        if i < cols and d != 0:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
        elif c[i] != 0:
            return None
    return mat_vec(snf.V, y)


def _merge_invariant_factors(orders: list[int]) -> list[int]:
    """Rewrite a list of cyclic orders (each >= 2) as a divisibility chain."""
    primes: dict[int, list[int]] = {}
    for n in orders:
        m = n
        p = 2
        while p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                primes.setdefault(p, []).append(e)
            p += 1
        if m > 1:
            primes.setdefault(m, []).append(1)
    for exps in primes.values():
        exps.sort(reverse=True)
    chains = zip_longest(*primes.values(), fillvalue=0)
    factors = [
        prod(p ** e for p, e in zip(primes.keys(), exps))
        for exps in chains
    ]
    factors = [f for f in factors if f > 1]
    factors.sort()
    return factors


@dataclass(frozen=True)
class FGAbelianGroup:
    """A finitely generated abelian group in invariant-factor normal form.

    ``torsion`` is the chain d1 | d2 | ... with every di >= 2; the
    representation is unique, so equality is structural.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion orders must be >= 2")

    @classmethod
    def from_orders(cls, free_rank: int, orders: list[int]) -> "FGAbelianGroup":
        return cls(free_rank, tuple(_merge_invariant_factors([n for n in orders if n > 1])))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        return prod(self.torsion) if self.torsion else 1

    def direct_sum(self, other: "FGAbelianGroup") -> "FGAbelianGroup":
        return FGAbelianGroup.from_orders(
            self.free_rank + other.free_rank, list(self.torsion) + list(other.torsion)
        )

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " (+) ".join(parts) if parts else "0"


def cokernel_group(a: Matrix, ambient_rank: int) -> FGAbelianGroup:
    """Z^ambient_rank modulo the column span of ``a``."""
    if not a or not a[0]:
        return FGAbelianGroup(ambient_rank)
    diag = smith_normal_form(a).diagonal()
    nonzero = [d for d in diag if d != 0]
    return FGAbelianGroup.from_orders(ambient_rank - len(nonzero), nonzero)


def columns_to_matrix(cols: list[list[int]], height: int) -> Matrix:
    out = zeros(height, len(cols))
    for j, col in enumerate(cols):
        for i, x in enumerate(col):
            out[i][j] = x
    return out


def _relation_matrix(n: int, relations: dict[int, int]) -> Matrix:
    """Columns m_i * e_i for each annotated index i (modulus m_i >= 2)."""
    cols = []
    for idx in sorted(relations):
        col = [0] * n
        col[idx] = relations[idx]
        cols.append(col)
    return columns_to_matrix(cols, n)


def presented_homology(
    boundary_out: Matrix,
    boundary_in: Matrix,
    n_mid: int,
    n_target: int,
    relations_mid: dict[int, int] | None = None,
    relations_target: dict[int, int] | None = None,
) -> FGAbelianGroup:
    """Homology ker/image at the middle of  Z^k -> Z^n_mid -> Z^n_target,
    where generators may carry cyclic annotations (index -> modulus).

    An annotated generator e_i with modulus m contributes the relation
    m*e_i = 0, so the chain groups are Z^n modulo those relations and the
    boundary maps must be compatible with them (columns out of an annotated
    generator must vanish on plain rows and be divisible appropriately on
    annotated rows).  Raises ValueError when the data is not a complex.
    """
    relations_mid = relations_mid or {}
    relations_target = relations_target or {}
    a = boundary_out  # n_target x n_mid
    b = boundary_in  # n_mid x k
    k = len(b[0]) if b else 0

    def in_relation_span(col: list[int]) -> bool:
        for i, x in enumerate(col):
            m = relations_target.get(i)
            if m is None:
                if x != 0:
                    return False
            elif x % m != 0:
                return False
        return True

    # Compatibility of the boundary with the middle relations.
    for idx, m in relations_mid.items():
        col = [m * (a[i][idx] if a else 0) for i in range(n_target)]
        if not in_relation_span(col):
            raise ValueError(
                f"boundary is incompatible with the order-{m} generator {idx}"
            )
    # d^2 = 0 modulo the target relations.
    if a and b:
        comp = mat_mul(a, b)
        for j in range(k):
            if not in_relation_span([comp[i][j] for i in range(n_target)]):
                raise ValueError("boundary maps do not compose to zero")

    rel_t = _relation_matrix(n_target, relations_target)
    rel_m = _relation_matrix(n_mid, relations_mid)

    # Cycles: x with a*x lying in the target relation span.
    if n_target == 0 or not a:
        cycle_basis = [[1 if i == j else 0 for i in range(n_mid)] for j in range(n_mid)]
    else:
        width_rel = len(rel_t[0]) if rel_t and rel_t[0] else 0
        block = [a[i][:] + [-rel_t[i][j] for j in range(width_rel)] for i in range(n_target)]
        raw = kernel_basis(block, cols=n_mid + width_rel)
        cycle_basis = [vec[:n_mid] for vec in raw]
    p = columns_to_matrix(cycle_basis, n_mid)
    dim_cycles = len(cycle_basis)

    # Boundaries plus middle relations, in cycle coordinates.
    image_cols = []
    if b:
        for j in range(k):
            image_cols.append([b[i][j] for i in range(n_mid)])
    if rel_m and rel_m[0]:
        for j in range(len(rel_m[0])):
            image_cols.append([rel_m[i][j] for i in range(n_mid)])
    coords = []
    snf_p = smith_normal_form(p) if image_cols else None
    for col in image_cols:
        c = solve(p, col, cols=dim_cycles, snf=snf_p)
        if c is None:
            raise ValueError("an image or relation vector is not a cycle")
        coords.append(c)
    return cokernel_group(columns_to_matrix(coords, dim_cycles), dim_cycles)
