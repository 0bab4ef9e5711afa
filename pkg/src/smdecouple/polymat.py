"""Polynomial-matrix algebra: determinants, unimodularity, Smith form,
and the Smith-McMillan decomposition of a square rational transfer matrix.

Everything here is exact.  The Smith form is computed by elementary
row/column operations over Q[s]: bring a minimal-degree entry to the pivot,
reduce its row and column by division with remainder, make the pivot divide
the trailing submatrix, recurse.  Accumulating the same operations on
identity matrices yields the unimodular certificates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polyrat import Poly, RatFunc, poly_lcm


class RankDeficiencyError(ValueError):
    """The transfer matrix does not have full normal rank."""


class NotUnimodularError(ValueError):
    pass


def _as_poly_grid(entries):
    grid = []
    for row in entries:
        grid.append(tuple(e if isinstance(e, Poly) else Poly((e,)) for e in row))
    if not grid or not grid[0]:
        raise ValueError("matrix needs at least one row and column")
    width = len(grid[0])
    if any(len(r) != width for r in grid):
        raise ValueError("ragged rows in matrix literal")
    return tuple(grid)


class PolyMatrix:
    """Immutable grid of exact polynomials."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries: tuple[tuple[Poly, ...], ...] = _as_poly_grid(entries)

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls([[Poly.one() if i == j else Poly.zero() for j in range(n)]
                    for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "PolyMatrix":
        return cls([[Poly.zero()] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, polys) -> "PolyMatrix":
        polys = [p if isinstance(p, Poly) else Poly((p,)) for p in polys]
        n = len(polys)
        return cls([[polys[i] if i == j else Poly.zero() for j in range(n)]
                    for i in range(n)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise ValueError(
                    f"dimension mismatch: {self.rows}x{self.cols} times "
                    f"{other.rows}x{other.cols}")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = Poly.zero()
                    for k in range(self.cols):
                        acc = acc + self.entries[i][k] * other.entries[k][j]
                    row.append(acc)
                out.append(row)
            return PolyMatrix(out)
        if isinstance(other, (Poly, int, Fraction)):
            p = other if isinstance(other, Poly) else Poly((other,))
            return PolyMatrix([[e * p for e in row] for row in self.entries])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Poly, int, Fraction)):
            return self * other
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in matrix addition")
        return PolyMatrix([[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self + PolyMatrix([[-e for e in row] for row in other.entries])

    def __neg__(self):
        return PolyMatrix([[-e for e in row] for row in self.entries])

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for i in range(self.rows)]
                           for j in range(self.cols)])

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"PolyMatrix[{body}]"

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[e.to_strings() for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj) -> "PolyMatrix":
        m = cls([[Poly.from_strings(e) for e in row] for row in obj["entries"]])
        if (m.rows, m.cols) != (obj["rows"], obj["cols"]):
            raise ValueError("matrix JSON dimensions do not match entries")
        return m


def determinant(a: PolyMatrix) -> Poly:
    """Exact determinant by minor expansion with memoization on column sets."""
    if not a.is_square:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    cache: dict[tuple[int, int], Poly] = {}

    def minor(row: int, colmask: int) -> Poly:
        if row == n:
            return Poly.one()
        key = (row, colmask)
        hit = cache.get(key)
        if hit is not None:
            return hit
        acc = Poly.zero()
        sign = 1
        for j in range(n):
            bit = 1 << j
            if colmask & bit:
                continue
            e = a.entries[row][j]
            if not e.is_zero:
                sub = minor(row + 1, colmask | bit)
                term = e * sub
                acc = acc + (term if sign > 0 else -term)
            sign = -sign
        cache[key] = acc
        return acc

    return minor(0, 0)


def is_unimodular(a: PolyMatrix) -> bool:
    """True iff det(a) is a nonzero constant."""
    if not a.is_square:
        raise ValueError("unimodularity is defined for square matrices")
    d = determinant(a)
    return (not d.is_zero) and d.degree == 0


def unimodular_inverse(a: PolyMatrix) -> PolyMatrix:
    """Exact polynomial inverse: adjugate divided by the constant determinant."""
    d = determinant(a)
    if d.is_zero or d.degree != 0:
        raise NotUnimodularError(f"determinant {d} is not a nonzero constant")
    inv = 1 / d.coeffs[0]
    n = a.rows
    if n == 1:
        return PolyMatrix([[Poly((inv,))]])
    out = [[Poly.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = PolyMatrix([[a.entries[r][c] for c in range(n) if c != j]
                              for r in range(n) if r != i])
            cof = determinant(sub)
            if (i + j) % 2:
                cof = -cof
            out[j][i] = cof * inv  # adjugate transposes the cofactors
    return PolyMatrix(out)


# ---------------------------------------------------------------------------
# Smith form


def _deg(p: Poly) -> int:
    return -1 if p.is_zero else p.degree


class _Worker:
    """Mutable elimination state: S = U * N * V at every step."""

    def __init__(self, n_matrix: PolyMatrix):
        self.s = [list(row) for row in n_matrix.entries]
        self.rows = n_matrix.rows
        self.cols = n_matrix.cols
        self.u = [list(row) for row in PolyMatrix.identity(self.rows).entries]
        self.v = [list(row) for row in PolyMatrix.identity(self.cols).entries]

    def swap_rows(self, i, k):
        if i != k:
            self.s[i], self.s[k] = self.s[k], self.s[i]
            self.u[i], self.u[k] = self.u[k], self.u[i]

    def swap_cols(self, j, k):
        if j != k:
            for row in self.s:
                row[j], row[k] = row[k], row[j]
            for row in self.v:
                row[j], row[k] = row[k], row[j]

    def add_row_multiple(self, target, source, q: Poly):
        if q.is_zero:
            return
        for j in range(self.cols):
            self.s[target][j] = self.s[target][j] + q * self.s[source][j]
        for j in range(self.rows):
            self.u[target][j] = self.u[target][j] + q * self.u[source][j]

    def add_col_multiple(self, target, source, q: Poly):
        if q.is_zero:
            return
        for row in self.s:
            row[target] = row[target] + q * row[source]
        for row in self.v:
            row[target] = row[target] + q * row[source]

    def scale_row(self, i, c: Fraction):
        if c == 1:
            return
        self.s[i] = [e * c for e in self.s[i]]
        self.u[i] = [e * c for e in self.u[i]]

    def find_pivot(self, k):
        """Minimal-degree nonzero entry in the trailing submatrix.

        Ties break on the smallest row index, then column index, which keeps
        the produced factors deterministic run to run.
        """
        best = None
        best_deg = None
        for i in range(k, self.rows):
            for j in range(k, self.cols):
                e = self.s[i][j]
                if e.is_zero:
                    continue
                d = e.degree
                if best_deg is None or d < best_deg:
                    best, best_deg = (i, j), d
        return best


def smith_form(n_matrix: PolyMatrix):
    """Diagonalize over Q[s]: returns (U, S, V) with U*N*V = S exactly.

    S is diagonal with monic entries d_1 | d_2 | ... (zeros, if any, come
    last); U and V are unimodular products of elementary operations.
    """
    if all(e.is_zero for row in n_matrix.entries for e in row):
        raise ValueError("Smith form of the zero matrix is not defined here")
    w = _Worker(n_matrix)
    limit = min(w.rows, w.cols)
    k = 0
    while k < limit:
        piv = w.find_pivot(k)
        if piv is None:
            break  # trailing submatrix is zero
        w.swap_rows(k, piv[0])
        w.swap_cols(k, piv[1])
        while True:
            # Clear the pivot column; a nonzero remainder becomes the new
            # (strictly lower-degree) pivot and we start over.
            restart = False
            for i in range(k + 1, w.rows):
                if w.s[i][k].is_zero:
                    continue
                q, r = w.s[i][k].divrem(w.s[k][k])
                w.add_row_multiple(i, k, -q)
                if not r.is_zero:
                    w.swap_rows(k, i)
                    restart = True
                    break
            if restart:
                continue
            # Clear the pivot row.  Rows below k already have a zero in
            # column k, so these column operations cannot dirty the column.
            for j in range(k + 1, w.cols):
                if w.s[k][j].is_zero:
                    continue
                q, r = w.s[k][j].divrem(w.s[k][k])
                w.add_col_multiple(j, k, -q)
                if not r.is_zero:
                    w.swap_cols(k, j)
                    restart = True
                    break
            if restart:
                continue
            # The pivot must divide the whole trailing submatrix; pulling an
            # offending row up makes the next sweep reduce the pivot degree.
            offender = None
            for i in range(k + 1, w.rows):
                for j in range(k + 1, w.cols):
                    if not (w.s[i][j] % w.s[k][k]).is_zero:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            w.add_row_multiple(k, offender, Poly.one())
        w.scale_row(k, 1 / w.s[k][k].lead)
        k += 1
    s = PolyMatrix(w.s)
    u = PolyMatrix(w.u)
    v = PolyMatrix(w.v)
    _check_smith_result(n_matrix, u, s, v)
    return u, s, v


def _check_smith_result(n_matrix, u, s, v):
    if u * n_matrix * v != s:
        raise AssertionError("internal error: U*N*V != S after elimination")
    limit = min(s.rows, s.cols)
    for i in range(s.rows):
        for j in range(s.cols):
            if i != j and not s.entries[i][j].is_zero:
                raise AssertionError("internal error: S is not diagonal")
    for i in range(limit - 1):
        a, b = s.entries[i][i], s.entries[i + 1][i + 1]
        if a.is_zero:
            if not b.is_zero:
                raise AssertionError("internal error: zero before nonzero in S")
        elif not b.is_zero and not (b % a).is_zero:
            raise AssertionError("internal error: divisibility chain broken")
    if not (is_unimodular(u) and is_unimodular(v)):
        raise AssertionError("internal error: transformation not unimodular")


# ---------------------------------------------------------------------------
# Smith-McMillan decomposition


@dataclass(frozen=True)
class SmDecomposition:
    """Unimodular pair (U, V) and diagonal entries with U*P*V = diag.

    The diagonal entries eps_i/psi_i are reduced with monic psi_i and satisfy
    eps_i | eps_{i+1} and psi_{i+1} | psi_i, so psi_1 carries the largest
    denominator, matching the convention diag = (1/d, ..., 1).
    """

    u: PolyMatrix
    v: PolyMatrix
    diag: tuple[RatFunc, ...]
    plant_dim: int

    def numerators(self) -> tuple[Poly, ...]:
        return tuple(f.num for f in self.diag)

    def denominators(self) -> tuple[Poly, ...]:
        return tuple(f.den for f in self.diag)

    def diagonal_matrix(self):
        from .tfm import TransferMatrix
        return TransferMatrix.diagonal(self.diag)

    def reconstruct_plant(self):
        """U^-1 * diag * V^-1, which must equal the original plant exactly."""
        from .tfm import TransferMatrix
        ui = TransferMatrix.from_polymatrix(unimodular_inverse(self.u))
        vi = TransferMatrix.from_polymatrix(unimodular_inverse(self.v))
        return ui * self.diagonal_matrix() * vi

    def certifies(self, plant) -> bool:
        """Exact check of the defining relation U*P*V = diag against plant."""
        from .tfm import TransferMatrix
        u = TransferMatrix.from_polymatrix(self.u)
        v = TransferMatrix.from_polymatrix(self.v)
        return u * plant * v == self.diagonal_matrix()

    def to_json(self) -> dict:
        return {
            "plant_dim": self.plant_dim,
            "u": self.u.to_json(),
            "v": self.v.to_json(),
            "diag": [f.to_json() for f in self.diag],
        }


def smith_mcmillan(plant) -> SmDecomposition:
    """Smith-McMillan decomposition of a square full-normal-rank plant.

    Clears the common monic denominator d, takes the Smith form of the
    resulting polynomial matrix and divides the invariant factors by d.
    """
    if plant.rows != plant.cols:
        raise ValueError("Smith-McMillan form requires a square plant")
    n = plant.rows
    det = plant.det()
    if det.is_zero:
        raise RankDeficiencyError(
            "plant is rank deficient (determinant vanishes identically)")
    d = Poly.one()
    for i in range(n):
        for j in range(n):
            entry = plant.entry(i, j)
            if not entry.is_zero:
                d = poly_lcm(d, entry.den)
    cleared = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = plant.entry(i, j)
            if entry.is_zero:
                row.append(Poly.zero())
            else:
                q, r = d.divrem(entry.den)
                if not r.is_zero:
                    raise AssertionError("internal error: lcm not a multiple")
                row.append(entry.num * q)
        cleared.append(row)
    u, s, v = smith_form(PolyMatrix(cleared))
    diag = tuple(RatFunc(s.entries[i][i], d) for i in range(n))
    for i in range(n - 1):
        if not (diag[i + 1].num % diag[i].num).is_zero:
            raise AssertionError("internal error: numerator chain broken")
        if not (diag[i].den % diag[i + 1].den).is_zero:
            raise AssertionError("internal error: denominator chain broken")
    dec = SmDecomposition(u=u, v=v, diag=diag, plant_dim=n)
    if not dec.certifies(plant):
        raise AssertionError("internal error: defining relation violated")
    return dec
