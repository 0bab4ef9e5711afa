"""Transfer-matrix algebra and the domain back-mapping machinery.

A TransferMatrix is a grid of reduced exact rational functions.  Matrix
products, sums and inverses stay exact, which is what makes the
transformation identities and stability arguments verifiable as equalities
rather than approximations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polymat import PolyMatrix, SmDecomposition
from .polyrat import Poly, RatFunc, RootSet, poly_roots


class SingularMatrixError(ValueError):
    pass


def _as_ratfunc_grid(entries):
    grid = []
    for row in entries:
        out = []
        for e in row:
            if isinstance(e, RatFunc):
                out.append(e)
            elif isinstance(e, (Poly, int, Fraction)):
                out.append(RatFunc(e))
            else:
                raise TypeError(f"cannot use {type(e).__name__} as an entry")
        grid.append(tuple(out))
    if not grid or not grid[0]:
        raise ValueError("matrix needs at least one row and column")
    width = len(grid[0])
    if any(len(r) != width for r in grid):
        raise ValueError("ragged rows in matrix literal")
    return tuple(grid)


class TransferMatrix:
    """Immutable matrix of exact rational functions."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries: tuple[tuple[RatFunc, ...], ...] = _as_ratfunc_grid(entries)

    @classmethod
    def identity(cls, n: int) -> "TransferMatrix":
        return cls([[RatFunc.one() if i == j else RatFunc.zero()
                     for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "TransferMatrix":
        return cls([[RatFunc.zero()] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, funcs) -> "TransferMatrix":
        funcs = [f if isinstance(f, RatFunc) else RatFunc(f) for f in funcs]
        n = len(funcs)
        return cls([[funcs[i] if i == j else RatFunc.zero() for j in range(n)]
                    for i in range(n)])

    @classmethod
    def from_polymatrix(cls, m: PolyMatrix) -> "TransferMatrix":
        return cls([[RatFunc(e) for e in row] for row in m.entries])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int) -> RatFunc:
        return self.entries[i][j]

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, TransferMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other):
        if not isinstance(other, TransferMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in matrix addition")
        return TransferMatrix([[a + b for a, b in zip(ra, rb)]
                               for ra, rb in zip(self.entries, other.entries)])

    def __sub__(self, other):
        if not isinstance(other, TransferMatrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return TransferMatrix([[-e for e in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, TransferMatrix):
            if self.cols != other.rows:
                raise ValueError(
                    f"dimension mismatch: {self.rows}x{self.cols} times "
                    f"{other.rows}x{other.cols}")
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = RatFunc.zero()
                    for k in range(self.cols):
                        a = self.entries[i][k]
                        b = other.entries[k][j]
                        if a.is_zero or b.is_zero:
                            continue
                        acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return TransferMatrix(out)
        if isinstance(other, (RatFunc, Poly, int, Fraction)):
            f = other if isinstance(other, RatFunc) else RatFunc(other)
            return TransferMatrix([[e * f for e in row] for row in self.entries])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RatFunc, Poly, int, Fraction)):
            return self * other
        return NotImplemented

    def det(self) -> RatFunc:
        """Exact determinant by minor expansion with memoization."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        cache: dict[tuple[int, int], RatFunc] = {}

        def minor(row: int, colmask: int) -> RatFunc:
            if row == n:
                return RatFunc.one()
            key = (row, colmask)
            hit = cache.get(key)
            if hit is not None:
                return hit
            acc = RatFunc.zero()
            sign = 1
            for j in range(n):
                bit = 1 << j
                if colmask & bit:
                    continue
                e = self.entries[row][j]
                if not e.is_zero:
                    term = e * minor(row + 1, colmask | bit)
                    acc = acc + (term if sign > 0 else -term)
                sign = -sign
            cache[key] = acc
            return acc

        return minor(0, 0)

    def inverse(self) -> "TransferMatrix":
        """Adjugate over determinant, every entry reduced."""
        d = self.det()
        if d.is_zero:
            raise SingularMatrixError("matrix is singular as a rational matrix")
        n = self.rows
        if n == 1:
            return TransferMatrix([[RatFunc.one() / self.entries[0][0]]])
        out = [[RatFunc.zero()] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                sub = TransferMatrix(
                    [[self.entries[r][c] for c in range(n) if c != j]
                     for r in range(n) if r != i])
                cof = sub.det()
                if (i + j) % 2:
                    cof = -cof
                out[j][i] = cof / d
        return TransferMatrix(out)

    def transpose(self) -> "TransferMatrix":
        return TransferMatrix([[self.entries[i][j] for i in range(self.rows)]
                               for j in range(self.cols)])

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j].is_zero
                   for i in range(self.rows) for j in range(self.cols) if i != j)

    def all_proper(self) -> bool:
        return all(e.is_proper for row in self.entries for e in row)

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"TransferMatrix[{body}]"

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[e.to_json() for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, obj) -> "TransferMatrix":
        m = cls([[RatFunc.from_json(e) for e in row] for row in obj["entries"]])
        if (m.rows, m.cols) != (obj["rows"], obj["cols"]):
            raise ValueError("matrix JSON dimensions do not match entries")
        return m


def controller_backmap(csm: TransferMatrix, u: PolyMatrix,
                       v: PolyMatrix) -> TransferMatrix:
    """Map a diagonal-domain controller to the original domain: C = V*Csm*U."""
    n = csm.rows
    if csm.cols != n or u.rows != n or u.cols != n or v.rows != n or v.cols != n:
        raise ValueError("controller and transformation matrices must all be n x n")
    return (TransferMatrix.from_polymatrix(v) * csm
            * TransferMatrix.from_polymatrix(u))


def properness_min_reldeg(u: PolyMatrix, v: PolyMatrix) -> list[int]:
    """Per-channel relative degree that keeps V*diag(C)*U proper.

    Channel k of a diagonal controller enters entry (i, j) of the mapped
    controller multiplied by V[i,k]*U[k,j]; demanding a relative degree of at
    least deg(V[i,k]) + deg(U[k,j]) for every nonzero product makes each term
    proper.  This is sufficient, not necessary: fortuitous cross-channel
    cancellations are ignored.
    """
    n = u.rows
    if u.cols != n or v.rows != n or v.cols != n:
        raise ValueError("transformation matrices must be square of equal size")
    out = []
    for k in range(n):
        worst = 0
        for i in range(n):
            vik = v.entries[i][k]
            if vik.is_zero:
                continue
            for j in range(n):
                ukj = u.entries[k][j]
                if ukj.is_zero:
                    continue
                worst = max(worst, vik.degree + ukj.degree)
        out.append(worst)
    return out


@dataclass(frozen=True)
class PoleZeroStructure:
    """Transmission poles and zeros of a matrix as a system.

    Derived only from a Smith-McMillan decomposition; poles and zeros of the
    individual entries are deliberately not consulted.
    """

    transmission_poles: RootSet
    transmission_zeros: RootSet


def transmission_structure(dec: SmDecomposition,
                           tol: float = 1e-10) -> PoleZeroStructure:
    """Poles = roots of prod(psi_i), zeros = roots of prod(eps_i)."""
    psi = Poly.one()
    eps = Poly.one()
    for f in dec.diag:
        psi = psi * f.den
        eps = eps * f.num
    poles = (poly_roots(psi, tol) if psi.degree and psi.degree >= 1
             else RootSet((), (), 0.0))
    zeros = (poly_roots(eps, tol) if eps.degree and eps.degree >= 1
             else RootSet((), (), 0.0))
    return PoleZeroStructure(transmission_poles=poles, transmission_zeros=zeros)
