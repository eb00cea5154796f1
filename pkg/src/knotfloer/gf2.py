"""GF(2) linear algebra on int bitsets."""

from __future__ import annotations


class Echelon:
    """A row space over GF(2) kept in echelon form, vectors as int bitmasks.

    Rows are keyed by their leading (most significant) bit, so reducing a
    vector greedily yields the coset representative with the smallest
    possible leading bit.
    """

    __slots__ = ("rows",)

    def __init__(self):
        self.rows: dict[int, int] = {}

    def reduce(self, vec: int) -> int:
        rows = self.rows
        while vec:
            lead = vec.bit_length() - 1
            row = rows.get(lead)
            if row is None:
                return vec
            vec ^= row
        return 0

    def add(self, vec: int) -> bool:
        """Insert vec; returns True if it enlarged the span."""
        vec = self.reduce(vec)
        if vec:
            self.rows[vec.bit_length() - 1] = vec
            return True
        return False

    def contains(self, vec: int) -> bool:
        return self.reduce(vec) == 0

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(vectors) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def kernel_basis(columns: list[int]) -> list[int]:
    """Kernel of the matrix whose j-th column bitmask is columns[j].

    Returns bitmasks over column indices: bit j set means column j occurs
    in the kernel vector.
    """
    ech_rows: dict[int, tuple[int, int]] = {}
    out = []
    for j, col in enumerate(columns):
        vec, combo = col, 1 << j
        while vec:
            lead = vec.bit_length() - 1
            if lead not in ech_rows:
                break
            rv, rc = ech_rows[lead]
            vec ^= rv
            combo ^= rc
        if vec:
            ech_rows[vec.bit_length() - 1] = (vec, combo)
        else:
            out.append(combo)
    return out
