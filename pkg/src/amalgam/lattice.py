"""Exact integer lattice algebra: Hermite and Smith normal forms, sublattice
membership, finite-index direct-factor splits, and abelianization.

Everything here works on arbitrary-precision Python ints. No floating point
enters at any stage, so all outputs are exactly reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod

from .errors import IncompatibleAmalgam, InvalidGroup, NotTorsionFree


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, entries stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidGroup("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise InvalidGroup(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        if not all(isinstance(e, int) for e in self.entries):
            raise InvalidGroup("matrix entries must be ints")

    @classmethod
    def from_rows(cls, rows) -> IntMatrix:
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        if any(len(r) != nc for r in rows):
            raise InvalidGroup("ragged rows")
        return cls(nr, nc, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, cols, rows: int | None = None) -> IntMatrix:
        cols = [list(c) for c in cols]
        if rows is None:
            if not cols:
                raise InvalidGroup("cannot infer row count of an empty column list")
            rows = len(cols[0])
        if any(len(c) != rows for c in cols):
            raise InvalidGroup("ragged columns")
        return cls.from_rows([[c[i] for c in cols] for i in range(rows)])

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j :: self.cols][: self.rows] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [[self.entry(i, j) for i in range(self.rows)] for j in range(self.cols)]
        )

    def mul(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise InvalidGroup(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            out.append(
                [sum(ri[k] * other.entry(k, j) for k in range(self.cols)) for j in range(other.cols)]
            )
        return IntMatrix.from_rows(out) if out else IntMatrix.zeros(0, other.cols)

    def matvec(self, v) -> tuple[int, ...]:
        v = list(v)
        if len(v) != self.cols:
            raise InvalidGroup(f"vector length {len(v)} does not match {self.cols} columns")
        return tuple(sum(self.row(i)[k] * v[k] for k in range(self.cols)) for i in range(self.rows))


def int_det(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise InvalidGroup("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix (adjugate over det = +-1)."""
    if M.rows != M.cols:
        raise InvalidGroup("inverse of a non-square matrix")
    n = M.rows
    d = int_det(M)
    if d not in (1, -1):
        raise InvalidGroup(f"matrix is not unimodular (det {d})")
    if n == 0:
        return M
    rows = M.to_rows()
    inv = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i
            ]
            cof = int_det(IntMatrix.from_rows(minor)) if n > 1 else 1
            if (i + j) % 2:
                cof = -cof
            inv[j][i] = cof * d
    return IntMatrix.from_rows(inv)


def hnf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite normal form.

    Returns (H, U) with H = M * U, U unimodular. H is in lower-triangular
    column echelon form: pivots are positive, strictly descend the rows as
    columns advance, entries left of a pivot in its row lie in [0, pivot),
    and zero columns are pushed to the right. The column lattice of H equals
    that of M, so H is a canonical basis for it.
    """
    r, n = M.rows, M.cols
    h = M.to_rows()
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap(j0, j1):
        if j0 == j1:
            return
        for i in range(r):
            h[i][j0], h[i][j1] = h[i][j1], h[i][j0]
        for i in range(n):
            u[i][j0], u[i][j1] = u[i][j1], u[i][j0]

    def addmul(dst, src, q):
        # column_dst += q * column_src
        if q == 0:
            return
        for i in range(r):
            h[i][dst] += q * h[i][src]
        for i in range(n):
            u[i][dst] += q * u[i][src]

    def negate(j):
        for i in range(r):
            h[i][j] = -h[i][j]
        for i in range(n):
            u[i][j] = -u[i][j]

    pivots: list[tuple[int, int]] = []
    col = 0
    for row in range(r):
        if col >= n:
            break
        while True:
            best = -1
            for j in range(col, n):
                if h[row][j] != 0 and (best == -1 or abs(h[row][j]) < abs(h[row][best])):
                    best = j
            if best == -1:
                break
            swap(col, best)
            others = [j for j in range(col + 1, n) if h[row][j] != 0]
            if not others:
                break
            for j in others:
                addmul(j, col, -(h[row][j] // h[row][col]))
        if h[row][col] == 0:
            continue
        if h[row][col] < 0:
            negate(col)
        for j in range(col):
            addmul(j, col, -(h[row][j] // h[row][col]))
        pivots.append((row, col))
        col += 1
    return IntMatrix.from_rows(h) if r else IntMatrix.zeros(0, n), IntMatrix.from_rows(u)


def _hnf_pivots(H: IntMatrix) -> list[tuple[int, int]]:
    """Pivot positions (row, col) of a matrix already in column HNF."""
    out = []
    col = 0
    for i in range(H.rows):
        if col < H.cols and H.entry(i, col) != 0:
            out.append((i, col))
            col += 1
    return out


@dataclass(frozen=True)
class SNFDecomposition:
    """Smith normal form data: U * M * V = D with U, V unimodular."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    invariant_factors: tuple[int, ...]


def snf(M: IntMatrix) -> SNFDecomposition:
    """Smith normal form over Z with both transforms.

    The diagonal of D is nonnegative and forms a divisibility chain
    d_1 | d_2 | ... with zeros last. invariant_factors is the full diagonal,
    units and zeros included.
    """
    r, n = M.rows, M.cols
    a = M.to_rows()
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_swap(i0, i1):
        if i0 != i1:
            a[i0], a[i1] = a[i1], a[i0]
            u[i0], u[i1] = u[i1], u[i0]

    def col_swap(j0, j1):
        if j0 == j1:
            return
        for i in range(r):
            a[i][j0], a[i][j1] = a[i][j1], a[i][j0]
        for i in range(n):
            v[i][j0], v[i][j1] = v[i][j1], v[i][j0]

    def row_addmul(dst, src, q):
        if q == 0:
            return
        for j in range(n):
            a[dst][j] += q * a[src][j]
        for j in range(r):
            u[dst][j] += q * u[src][j]

    def col_addmul(dst, src, q):
        if q == 0:
            return
        for i in range(r):
            a[i][dst] += q * a[i][src]
        for i in range(n):
            v[i][dst] += q * v[i][src]

    def row_negate(i):
        for j in range(n):
            a[i][j] = -a[i][j]
        for j in range(r):
            u[i][j] = -u[i][j]

    m = min(r, n)
    t = 0
    while t < m:
        # deterministic pivot: smallest nonzero |entry| in the trailing block,
        # row-major scan breaking ties toward the top-left
        pi = pj = -1
        for i in range(t, r):
            for j in range(t, n):
                if a[i][j] != 0 and (pi == -1 or abs(a[i][j]) < abs(a[pi][pj])):
                    pi, pj = i, j
        if pi == -1:
            break
        row_swap(t, pi)
        col_swap(t, pj)
        while True:
            # clear column t below the pivot
            moved = False
            for i in range(t + 1, r):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    row_addmul(i, t, -q)
                    if a[i][t] != 0:
                        row_swap(t, i)
                        moved = True
            if moved:
                continue
            for j in range(t + 1, n):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    col_addmul(j, t, -q)
                    if a[t][j] != 0:
                        col_swap(t, j)
                        moved = True
            if moved:
                continue
            break
        # divisibility fix: pivot must divide the whole trailing block
        fixed = True
        for i in range(t + 1, r):
            if any(a[i][j] % a[t][t] for j in range(t + 1, n)):
                row_addmul(t, i, 1)
                fixed = False
                break
        if not fixed:
            continue
        if a[t][t] < 0:
            row_negate(t)
        t += 1
    diag = tuple(a[i][i] for i in range(m))
    return SNFDecomposition(
        U=IntMatrix.from_rows(u) if r else IntMatrix.zeros(0, 0),
        D=IntMatrix.from_rows(a) if r else IntMatrix.zeros(0, n),
        V=IntMatrix.from_rows(v) if n else IntMatrix.zeros(n, n),
        invariant_factors=diag,
    )


def lattice_kernel(M: IntMatrix) -> IntMatrix:
    """Columns spanning the integer kernel of M (may have zero columns)."""
    H, U = hnf(M)
    zero_cols = [
        j
        for j in range(H.cols)
        if all(H.entry(i, j) == 0 for i in range(H.rows))
    ]
    return IntMatrix.from_columns(
        [U.column(j) for j in zero_cols], rows=M.cols
    ) if zero_cols else IntMatrix.zeros(M.cols, 0)


class LatticeSubgroup:
    """A sublattice of Z^r given by generating columns.

    Keeps the generators as supplied plus a canonical HNF basis, and supports
    membership, canonical coset representatives, and expressing members as
    integer combinations of the original generators.
    """

    def __init__(self, ambient_rank: int, gens: IntMatrix):
        if gens.rows != ambient_rank:
            raise IncompatibleAmalgam(
                f"generators live in Z^{gens.rows}, expected Z^{ambient_rank}"
            )
        self.ambient_rank = ambient_rank
        self.gens = gens
        H, U = hnf(gens)
        self._H = H
        self._U = U
        self._pivots = _hnf_pivots(H)
        nonzero = [H.column(j) for (_, j) in self._pivots]
        self.basis = (
            IntMatrix.from_columns(nonzero, rows=ambient_rank)
            if nonzero
            else IntMatrix.zeros(ambient_rank, 0)
        )

    @classmethod
    def from_vectors(cls, ambient_rank: int, vectors) -> LatticeSubgroup:
        vectors = [tuple(int(x) for x in v) for v in vectors]
        if not vectors:
            return cls(ambient_rank, IntMatrix.zeros(ambient_rank, 0))
        return cls(ambient_rank, IntMatrix.from_columns(vectors, rows=ambient_rank))

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _forward(self, v) -> tuple[tuple[int, ...], list[int]]:
        w = list(int(x) for x in v)
        if len(w) != self.ambient_rank:
            raise IncompatibleAmalgam(
                f"vector length {len(w)} in Z^{self.ambient_rank}"
            )
        coeffs = [0] * self._H.cols
        for (ri, ci) in self._pivots:
            q = w[ri] // self._H.entry(ri, ci)
            if q:
                col = self._H.column(ci)
                for i in range(self.ambient_rank):
                    w[i] -= q * col[i]
            coeffs[ci] = q
        return tuple(w), coeffs

    def reduce(self, v) -> tuple[int, ...]:
        """Canonical representative of v modulo this lattice."""
        rep, _ = self._forward(v)
        return rep

    def contains(self, v) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def solve(self, v):
        """Integer coefficients over the original generators, or None."""
        rep, y = self._forward(v)
        if any(rep):
            return None
        return self._U.matvec(y)

    def __eq__(self, other):
        return (
            isinstance(other, LatticeSubgroup)
            and self.ambient_rank == other.ambient_rank
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_rank, self.basis))

    def __repr__(self):
        return f"LatticeSubgroup(rank {self.rank} in Z^{self.ambient_rank})"


@dataclass(frozen=True)
class FGAbelian:
    """A finitely generated abelian group Z^free_rank x prod Z/d_i.

    torsion is the invariant-factor list: every entry > 1 and each divides
    the next. Element coordinates put the torsion components first, then the
    free ones.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise InvalidGroup("negative free rank")
        for d in self.torsion:
            if d <= 1:
                raise InvalidGroup(f"torsion entry {d} must exceed 1")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise InvalidGroup(
                    f"torsion {list(self.torsion)} is not a divisibility chain"
                )

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        return prod(self.torsion) if self.is_finite else None

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def canon(self, v) -> tuple[int, ...]:
        v = [int(x) for x in v]
        if len(v) != self.ngens:
            raise IncompatibleAmalgam(f"element length {len(v)}, expected {self.ngens}")
        for i, d in enumerate(self.torsion):
            v[i] %= d
        return tuple(v)

    def add(self, a, b) -> tuple[int, ...]:
        return self.canon([x + y for x, y in zip(a, b, strict=True)])

    def neg(self, a) -> tuple[int, ...]:
        return self.canon([-x for x in a])

    def scale(self, a, k: int) -> tuple[int, ...]:
        return self.canon([k * x for x in a])

    def relation_columns(self) -> list[tuple[int, ...]]:
        """Columns of Z^ngens that are identified with zero (the torsion)."""
        cols = []
        for i, d in enumerate(self.torsion):
            col = [0] * self.ngens
            col[i] = d
            cols.append(tuple(col))
        return cols

    def element_label(self, v) -> str:
        return "(" + ",".join(str(x) for x in self.canon(v)) + ")"


@dataclass(frozen=True)
class IndexSplit:
    """A direct-factor split C (+) H of finite index inside Z^r.

    basis_change columns form an adapted basis of Z^r; scaling its first
    rank(C) columns by `divisors` gives c_basis (a basis of C), and the
    remaining columns are h_basis. coset_reps enumerates Z^r / (C (+) H) as
    mixed-radix digit vectors mapped back through basis_change, in
    lexicographic digit order, so the zero vector comes first.
    """

    ambient_rank: int
    index: int
    divisors: tuple[int, ...]
    basis_change: IntMatrix
    inverse_change: IntMatrix
    c_basis: IntMatrix
    h_basis: IntMatrix
    coset_reps: tuple[tuple[int, ...], ...]

    def digits(self, v) -> tuple[int, ...]:
        y = self.inverse_change.matvec(v)
        return tuple(y[i] % d for i, d in enumerate(self.divisors))

    def coset_index(self, v) -> int:
        idx = 0
        for digit, d in zip(self.digits(v), self.divisors):
            idx = idx * d + digit
        return idx

    def canonical_rep(self, v) -> tuple[int, ...]:
        digits = self.digits(v)
        y = list(digits) + [0] * (self.ambient_rank - len(digits))
        return self.basis_change.matvec(y)

    def contains(self, v) -> bool:
        """Membership in the finite-index subgroup C (+) H."""
        return all(d == 0 for d in self.digits(v))


def finite_index_split(ambient_rank: int, C: LatticeSubgroup) -> IndexSplit:
    """Split C off as a direct factor of a finite-index subgroup of Z^r.

    Diagonalizing a basis of C as U * B * V = D yields an adapted basis
    W = U^-1 of Z^r in which C is spanned by d_i * W_i; padding with the
    remaining columns of W gives A_1 = C (+) H of index prod d_i.
    """
    if C.ambient_rank != ambient_rank:
        raise IncompatibleAmalgam(
            f"sublattice of Z^{C.ambient_rank} passed with ambient rank {ambient_rank}"
        )
    k = C.rank
    if k == 0:
        # C trivial: A_1 = Z^r itself, index 1
        W = IntMatrix.identity(ambient_rank)
        return IndexSplit(
            ambient_rank=ambient_rank,
            index=1,
            divisors=(),
            basis_change=W,
            inverse_change=W,
            c_basis=IntMatrix.zeros(ambient_rank, 0),
            h_basis=W,
            coset_reps=((0,) * ambient_rank,),
        )
    dec = snf(C.basis)
    divisors = dec.invariant_factors
    if any(d == 0 for d in divisors):
        raise InvalidGroup("independent basis columns produced a zero invariant")
    W = unimodular_inverse(dec.U)
    c_cols = [
        tuple(divisors[i] * x for x in W.column(i)) for i in range(k)
    ]
    h_cols = [W.column(i) for i in range(k, ambient_rank)]
    index = prod(divisors)
    reps = []
    for digits in itertools.product(*(range(d) for d in divisors)):
        y = list(digits) + [0] * (ambient_rank - k)
        reps.append(W.matvec(y))
    return IndexSplit(
        ambient_rank=ambient_rank,
        index=index,
        divisors=divisors,
        basis_change=W,
        inverse_change=dec.U,
        c_basis=IntMatrix.from_columns(c_cols, rows=ambient_rank),
        h_basis=(
            IntMatrix.from_columns(h_cols, rows=ambient_rank)
            if h_cols
            else IntMatrix.zeros(ambient_rank, 0)
        ),
        coset_reps=tuple(reps),
    )


def _row_basis(rows: list, width: int) -> list[list[int]]:
    """Echelon basis of the lattice spanned by the given integer rows."""
    pivots: dict[int, list[int]] = {}
    for row in rows:
        row = [int(x) for x in row]
        if len(row) != width:
            raise InvalidGroup(f"relator width {len(row)}, expected {width}")
        while True:
            lead = next((i for i, x in enumerate(row) if x), None)
            if lead is None:
                break
            if lead not in pivots:
                if row[lead] < 0:
                    row = [-x for x in row]
                pivots[lead] = row
                break
            piv = pivots[lead]
            a, b = piv[lead], row[lead]
            if b % a == 0:
                q = b // a
                row = [x - q * y for x, y in zip(row, piv)]
                continue
            g, x, y = _xgcd(a, b)
            combined = [x * p + y * r for p, r in zip(piv, row)]
            row = [(a // g) * r - (b // g) * p for p, r in zip(piv, row)]
            pivots[lead] = combined
    return [pivots[k] for k in sorted(pivots)]


def abelianization_from_presentation(ngens: int, relators) -> FGAbelian:
    """Cokernel Z^ngens / (row lattice of relators) in invariant-factor form."""
    if ngens < 0:
        raise InvalidGroup("negative generator count")
    basis = _row_basis([list(r) for r in relators], ngens)
    if not basis:
        return FGAbelian(free_rank=ngens)
    dec = snf(IntMatrix.from_rows(basis))
    nonzero = [d for d in dec.invariant_factors if d != 0]
    free = ngens - len(nonzero)
    torsion = tuple(d for d in nonzero if d > 1)
    return FGAbelian(free_rank=free, torsion=torsion)


def smith_minor_gcds(M: IntMatrix) -> list[int]:
    """Independent route to invariant factors: gcds of k x k minors.

    Returns the list d_1..d_m (m = min(rows, cols)) where d_k =
    gcd(k-minors) / gcd((k-1)-minors), with the convention that a vanishing
    minor gcd makes that and all later factors zero. Shares no code with
    snf(); meant as an oracle for it.
    """
    m = min(M.rows, M.cols)
    out = []
    prev = 1
    for k in range(1, m + 1):
        g = 0
        for rows_sel in itertools.combinations(range(M.rows), k):
            for cols_sel in itertools.combinations(range(M.cols), k):
                sub = IntMatrix.from_rows(
                    [[M.entry(i, j) for j in cols_sel] for i in rows_sel]
                )
                g = gcd(g, int_det(sub))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            out.extend([0] * (m - len(out)))
            break
        out.append(g // prev)
        prev = g
    return out
