"""Exact arithmetic over F2[U] and sparse matrices of it.

F2[U] is a Euclidean domain, so every matrix over it can be brought to a
diagonal form by invertible row and column operations.  For matrices coming
from graded complexes all entries stay monomials U^k throughout, which is
what makes the homology computations downstream exact.

Polynomials are stored as int bitmasks: bit k is the coefficient of U^k.
Addition is XOR, multiplication is shift-and-xor.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

# U-exponents are bounded; anything past the cap is a bug in the caller,
# never silent wraparound.  Complexes in scope stay far below this.
EXPONENT_CAP = 1 << 16


class ExponentCapError(OverflowError):
    """A U-exponent exceeded the configured cap."""


class UPoly:
    """Polynomial in U over the field with two elements, always canonical."""

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0, cap: int = EXPONENT_CAP):
        if bits < 0:
            raise ValueError("UPoly bitmask must be non-negative")
        if bits >> cap:
            raise ExponentCapError(f"U-exponent above cap {cap}")
        self.bits = bits

    @classmethod
    def zero(cls) -> UPoly:
        return _ZERO

    @classmethod
    def one(cls) -> UPoly:
        return _ONE

    @classmethod
    def monomial(cls, k: int, cap: int = EXPONENT_CAP) -> UPoly:
        if k < 0:
            raise ValueError("U-exponents must be non-negative")
        if k >= cap:
            raise ExponentCapError(f"U-exponent {k} above cap {cap}")
        return cls(1 << k)

    @classmethod
    def from_exponents(cls, exps) -> UPoly:
        bits = 0
        for k in exps:
            bits ^= 1 << k
        return cls(bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, UPoly) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(("UPoly", self.bits))

    def __add__(self, other: UPoly) -> UPoly:
        return UPoly(self.bits ^ other.bits)

    def __mul__(self, other: UPoly) -> UPoly:
        a, b = self.bits, other.bits
        if a == 0 or b == 0:
            return _ZERO
        out = 0
        while a:
            low = a & -a
            out ^= b << (low.bit_length() - 1)
            a ^= low
        return UPoly(out)

    def shift(self, k: int) -> UPoly:
        """Multiply by U^k."""
        if self.bits == 0:
            return _ZERO
        return UPoly(self.bits << k)

    @property
    def degree(self) -> int:
        """Largest exponent; -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    @property
    def order(self) -> int:
        """Smallest exponent; -1 for the zero polynomial."""
        if self.bits == 0:
            return -1
        return (self.bits & -self.bits).bit_length() - 1

    def is_monomial(self) -> bool:
        return self.bits != 0 and self.bits & (self.bits - 1) == 0

    def coeff(self, k: int) -> int:
        return (self.bits >> k) & 1

    def exponents(self) -> list[int]:
        out, bits = [], self.bits
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return out

    def divmod(self, divisor: UPoly) -> tuple[UPoly, UPoly]:
        """Euclidean division: self = q*divisor + r with deg r < deg divisor."""
        if not divisor:
            raise ZeroDivisionError("division by zero UPoly")
        d = divisor.degree
        rem = self.bits
        q = 0
        while rem.bit_length() - 1 >= d:
            shiftby = rem.bit_length() - 1 - d
            q ^= 1 << shiftby
            rem ^= divisor.bits << shiftby
        return UPoly(q), UPoly(rem)

    def __repr__(self) -> str:
        if not self.bits:
            return "0"
        terms = []
        for k in sorted(self.exponents(), reverse=True):
            if k == 0:
                terms.append("1")
            elif k == 1:
                terms.append("U")
            else:
                terms.append(f"U^{k}")
        return "+".join(terms)


_ZERO = UPoly(0)
_ONE = UPoly(1)


class UMatrix:
    """Sparse matrix over F2[U] with arbitrary hashable row/column labels.

    Absent entries are zero; stored entries are nonzero.  Instances are
    treated as immutable once built.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        if len(set(self.rows)) != len(self.rows) or len(set(self.cols)) != len(self.cols):
            raise ValueError("duplicate row or column labels")
        clean: dict[tuple, UPoly] = {}
        rowset, colset = set(self.rows), set(self.cols)
        for (r, c), val in (entries or {}).items():
            if not isinstance(val, UPoly):
                val = UPoly.monomial(val) if isinstance(val, int) else val
            if r not in rowset or c not in colset:
                raise KeyError(f"entry ({r!r}, {c!r}) outside the index sets")
            if val:
                clean[(r, c)] = val
        self.entries = clean

    def entry(self, r, c) -> UPoly:
        return self.entries.get((r, c), _ZERO)

    @classmethod
    def identity(cls, labels) -> UMatrix:
        labels = tuple(labels)
        return cls(labels, labels, {(l, l): _ONE for l in labels})

    def matmul(self, other: UMatrix) -> UMatrix:
        if self.cols != other.rows:
            raise ValueError("inner label mismatch in matrix product")
        by_row: dict = {}
        for (r, k), val in self.entries.items():
            by_row.setdefault(r, []).append((k, val))
        by_col: dict = {}
        for (k, c), val in other.entries.items():
            by_col.setdefault(k, []).append((c, val))
        acc: dict[tuple, UPoly] = {}
        for r, left in by_row.items():
            for k, lval in left:
                for c, rval in by_col.get(k, ()):
                    key = (r, c)
                    acc[key] = acc.get(key, _ZERO) + lval * rval
        return UMatrix(self.rows, other.cols, {k: v for k, v in acc.items() if v})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"UMatrix({len(self.rows)}x{len(self.cols)}, {len(self.entries)} entries)"


@dataclass(frozen=True)
class SmithPivot:
    row: object
    col: object
    exponent: int | None  # None when the diagonal entry is not a monomial
    value: UPoly


@dataclass(frozen=True)
class SmithResult:
    pivots: tuple[SmithPivot, ...]
    row_ops: UMatrix      # R with R * m * S diagonal
    col_ops: UMatrix      # S
    row_ops_inv: UMatrix
    col_ops_inv: UMatrix
    diagonal: UMatrix


def smith_reduce(m: UMatrix) -> SmithResult:
    """Diagonalize m over F2[U] by invertible row/column operations.

    Returns the pivots (unit pivots first), the transforms R and S with
    R*m*S equal to the diagonal matrix, and their inverses.  Pivot selection
    always takes a minimal-degree entry, tie-broken by (row, col) position,
    so the output is deterministic.  For matrices whose entries are all
    monomials (every graded differential is), the diagonal entries are
    monomials U^k as well.
    """
    rows, cols = m.rows, m.cols
    rpos = {r: i for i, r in enumerate(rows)}
    cpos = {c: j for j, c in enumerate(cols)}

    # Working copy: row -> {col: UPoly}, plus a column index.
    rowdata: dict = {r: {} for r in rows}
    colindex: dict = {c: set() for c in cols}
    for (r, c), val in m.entries.items():
        rowdata[r][c] = val
        colindex[c].add(r)

    # Transform accumulators.  R row-wise, Rinv column-wise, S column-wise,
    # Sinv row-wise: that is the orientation each kind of update touches.
    R = {r: {r: _ONE} for r in rows}
    Rinv_cols = {r: {r: _ONE} for r in rows}
    S_cols = {c: {c: _ONE} for c in cols}
    Sinv_rows = {c: {c: _ONE} for c in cols}

    def set_entry(r, c, val):
        if val:
            rowdata[r][c] = val
            colindex[c].add(r)
            heapq.heappush(heap, (val.degree, rpos[r], cpos[c]))
        else:
            if c in rowdata[r]:
                del rowdata[r][c]
                colindex[c].discard(r)

    def sparse_axpy(target: dict, source: dict, q: UPoly):
        for k, v in source.items():
            nv = target.get(k, _ZERO) + q * v
            if nv:
                target[k] = nv
            elif k in target:
                del target[k]

    def row_op(t, s, q):
        # row_t += q * row_s on the working matrix and on R / Rinv.
        for c, v in list(rowdata[s].items()):
            set_entry(t, c, rowdata[t].get(c, _ZERO) + q * v)
        sparse_axpy(R[t], R[s], q)
        sparse_axpy(Rinv_cols[s], Rinv_cols[t], q)

    def col_op(t, s, q):
        # col_t += q * col_s on the working matrix and on S / Sinv.
        for r in list(colindex[s]):
            set_entry(r, t, rowdata[r].get(t, _ZERO) + q * rowdata[r][s])
        sparse_axpy(S_cols[t], S_cols[s], q)
        sparse_axpy(Sinv_rows[s], Sinv_rows[t], q)

    heap: list[tuple[int, int, int]] = []
    for (r, c), val in m.entries.items():
        heapq.heappush(heap, (val.degree, rpos[r], cpos[c]))

    pivots: list[SmithPivot] = []
    done_rows: set = set()
    done_cols: set = set()

    while heap:
        deg, ri, ci = heapq.heappop(heap)
        r, c = rows[ri], cols[ci]
        if r in done_rows or c in done_cols:
            continue
        val = rowdata[r].get(c)
        if val is None or val.degree != deg:
            continue  # stale heap record
        # Clear the pivot column, then the pivot row.  Division remainders
        # have strictly smaller degree and re-enter the heap, so the loop
        # terminates; monomial matrices never produce remainders.
        restart = False
        for r2 in list(colindex[c]):
            if r2 == r or r2 in done_rows:
                continue
            q, rem = rowdata[r2][c].divmod(val)
            if q:
                row_op(r2, r, q)
            if rem:
                restart = True
        if restart:
            heapq.heappush(heap, (val.degree, ri, ci))
            continue
        for c2 in list(rowdata[r].keys()):
            if c2 == c or c2 in done_cols:
                continue
            q, rem = rowdata[r][c2].divmod(val)
            if q:
                col_op(c2, c, q)
            if rem:
                restart = True
        if restart:
            heapq.heappush(heap, (val.degree, ri, ci))
            continue
        pivots.append(
            SmithPivot(r, c, val.degree if val.is_monomial() else None, val)
        )
        done_rows.add(r)
        done_cols.add(c)

    pivots.sort(key=lambda p: (p.exponent != 0, rpos[p.row], cpos[p.col]))

    def pack_rows(data, labels):
        return UMatrix(labels, labels, {(r, c): v for r, row in data.items() for c, v in row.items()})

    def pack_cols(data, labels):
        return UMatrix(labels, labels, {(r, c): v for c, col in data.items() for r, v in col.items()})

    diagonal = UMatrix(rows, cols, {(p.row, p.col): p.value for p in pivots})
    return SmithResult(
        pivots=tuple(pivots),
        row_ops=pack_rows(R, rows),
        col_ops=pack_cols(S_cols, cols),
        row_ops_inv=pack_cols(Rinv_cols, rows),
        col_ops_inv=pack_rows(Sinv_rows, cols),
        diagonal=diagonal,
    )
