"""Filtered F2 homology on level complexes.

Everything an invariant needs from a reduced complex happens here: the
U-tower class in Maslov grading zero, its filtration profile under the
transported U-action, membership of classes in Alexander sublevels, and
the mapping cone of U that stands in for the hat complex.

Vectors are int bitmasks over a grading slice, ordered so that the most
significant bit is the element of highest Alexander grading.  Coset
reduction against an echelon basis then minimizes the filtration level of
a homology class, and the result is trustworthy exactly when it lands
above the stable window: inexact rows near the truncation floor can only
touch lower bits.
"""

from __future__ import annotations

from collections import Counter

from .gf2 import Echelon, kernel_basis


class WindowError(RuntimeError):
    """Truncation window too shallow for the requested computation."""


def _slice_order(lc, ids):
    """Order ids so the highest (alexander, -id) sits at the top bit."""
    order = sorted(ids, key=lambda i: (lc.alex[i], -i))
    pos = {i: p for p, i in enumerate(order)}
    return order, pos


def _vec(ids, pos) -> int:
    v = 0
    for i in ids:
        if i in pos:
            v |= 1 << pos[i]
    return v


def _ids(vec: int, order) -> set[int]:
    out = set()
    while vec:
        low = vec & -vec
        out.add(order[low.bit_length() - 1])
        vec ^= low
    return out


def _by_maslov(lc) -> dict[int, list[int]]:
    by_m: dict[int, list[int]] = {}
    for i, m in enumerate(lc.maslov):
        by_m.setdefault(m, []).append(i)
    return by_m


def graded_ranks(lc, floor: int | None = None) -> dict[tuple[int, int], int]:
    """Element counts per (alexander, maslov) above the stable window."""
    if floor is None:
        floor = lc.stable_window
    counts: Counter = Counter()
    for i in range(lc.n):
        if lc.alex[i] > floor:
            counts[(lc.alex[i], lc.maslov[i])] += 1
    return dict(counts)


def _require_above_window(lc, ids, what: str):
    for i in ids:
        if lc.alex[i] <= lc.stable_window:
            raise WindowError(
                f"{what} touches element {lc.keys[i]} at A={lc.alex[i]} "
                f"inside the unstable zone (window > {lc.stable_window})"
            )


def homology_class(lc, m: int, boundary_map=None) -> set[int]:
    """The unique nonzero homology class in Maslov grading m, as a cycle.

    Raises WindowError if the slice is not one-dimensional or dips below
    the stable window.
    """
    if boundary_map is None:
        boundary_map = lc.boundary
    by_m = _by_maslov(lc)
    ids0 = by_m.get(m, [])
    ids_down = by_m.get(m - 1, [])
    ids_up = by_m.get(m + 1, [])
    _require_above_window(lc, ids0 + ids_down + ids_up, f"homology in grading {m}")
    order_down, pos_down = _slice_order(lc, ids_down)
    columns = [_vec(boundary_map[i], pos_down) for i in ids0]
    cycles = kernel_basis(columns)  # bitmasks over positions in ids0
    order0, pos0 = _slice_order(lc, ids0)
    # classes = cycles that enlarge the span of the boundaries
    combined = Echelon()
    for i in ids_up:
        combined.add(_vec(boundary_map[i], pos0))
    classes = []
    for combo in cycles:
        z = 0
        for p in range(len(ids0)):
            if (combo >> p) & 1:
                z |= 1 << pos0[ids0[p]]
        if combined.add(z):
            classes.append(z)
    if len(classes) != 1:
        raise WindowError(
            f"homology in Maslov grading {m} is {len(classes)}-dimensional, expected 1"
        )
    return _ids(classes[0], order0)


def u_image(lc, ids: set[int], floor: int | None = None) -> set[int]:
    """Apply the transported U map to a sum of elements, as sets over F2.

    Terms at or below `floor` are dropped (quotient semantics); asking for
    the image of an element with no recorded U-value above the floor is a
    window failure.
    """
    if floor is None:
        floor = lc.stable_window
    out: set[int] = set()
    for i in ids:
        if lc.alex[i] <= floor:
            continue
        img = lc.umap[i]
        if img is None:
            raise WindowError(f"umap undefined at {lc.keys[i]} above the floor")
        out.symmetric_difference_update(img)
    return {i for i in out if lc.alex[i] > floor}


def class_vanishes_in_sublevel_quotient(lc, ids: set[int], t: int, m: int) -> bool:
    """Does the class of the grading-m cycle die in the quotient by A <= t?

    Equivalently: does the cycle admit a representative supported in the
    sublevel A <= t?  Uses only data of elements with A > t.
    """
    by_m = _by_maslov(lc)
    above = [i for i in by_m.get(m, []) if lc.alex[i] > t]
    order0, pos0 = _slice_order(lc, above)
    z = _vec((i for i in ids if lc.alex[i] > t), pos0)
    if z == 0:
        return True
    span = Echelon()
    for w in by_m.get(m + 1, []):
        if lc.alex[w] > t:
            span.add(_vec((j for j in lc.boundary[w] if lc.alex[j] > t), pos0))
    return span.contains(z)


def min_filtration_of_class(lc, ids: set[int], m: int, boundary_map=None) -> tuple[int, set[int]]:
    """Minimal Alexander level of a representative of the class of `ids`.

    Returns (level, canonical representative).  The level is reliable only
    when it lands above the stable window; callers must check.
    """
    if boundary_map is None:
        boundary_map = lc.boundary
    by_m = _by_maslov(lc)
    ids0 = by_m.get(m, [])
    order0, pos0 = _slice_order(lc, ids0)
    span = Echelon()
    for w in by_m.get(m + 1, []):
        span.add(_vec(boundary_map[w], pos0))
    z = span.reduce(_vec(ids, pos0))
    if z == 0:
        raise ValueError("class is trivial; it has no filtration level")
    lead = order0[z.bit_length() - 1]
    return lc.alex[lead], _ids(z, order0)


def d1_of_reduced(lc) -> int:
    """d-invariant of +1-surgery read from a reduced complex.

    Marches the U-tower class downward until it admits a representative in
    the A <= 0 sublevel; only data at A > 0 is ever consulted, which a
    valid stable window always covers.
    """
    if lc.stable_window >= 0:
        raise WindowError("stable window must reach below A=0 to compute d1")
    z = homology_class(lc, 0)
    zpos = {i for i in z if lc.alex[i] > 0}
    top = max(lc.alex, default=0)
    k = 0
    while True:
        if class_vanishes_in_sublevel_quotient(lc, zpos, 0, -2 * k):
            return -2 * k
        zpos = u_image(lc, zpos, floor=0)
        k += 1
        if k > top + 2:
            raise WindowError("U-tower march failed to enter the A<=0 sublevel")


def class_profile(lc, steps: int | None = None) -> list[tuple[int, int]]:
    """(A, M) filtration profile of the U-tower class, marching by U.

    Stops after `steps` entries, or when the next level could no longer be
    certified above the stable window.
    """
    z = homology_class(lc, 0)
    out: list[tuple[int, int]] = []
    k = 0
    while True:
        if not z:
            break  # the class fell through the floor: window exhausted
        try:
            level, rep = min_filtration_of_class(lc, z, -2 * k)
        except ValueError:
            break
        if level <= lc.stable_window:
            break
        out.append((level, -2 * k))
        if steps is not None and len(out) >= steps:
            break
        z = u_image(lc, rep)
        k += 1
    if steps is not None and len(out) < steps:
        raise WindowError(f"profile exhausted the window after {len(out)} of {steps} steps")
    return out


# ---------------------------------------------------------------------------
# hat-side computations: tau


def tau_of_hat(lc) -> int:
    """tau from an exact hat complex: minimal filtration of the generator."""
    z = homology_class(lc, 0)
    level, _ = min_filtration_of_class(lc, z, 0)
    return level


def tau_of_reduced(lc) -> int:
    """tau from a reduced complex via the mapping cone of the U-action.

    The cone of U on the reduced complex is filtered homotopy equivalent to
    the hat complex; a left copy of x sits at (A-1, M-1), a right copy at
    (A, M), and the cone differential sends left x to left dx + right Ux.
    """
    cone = _ConeOfU(lc)
    z = homology_class(cone, 0)
    level, _ = min_filtration_of_class(cone, z, 0)
    if level <= cone.stable_window:
        raise WindowError("tau representative fell inside the unstable zone")
    return level


class _ConeOfU:
    """Mapping cone of the U-action, restricted to the gradings tau needs."""

    def __init__(self, lc, gradings=(2, 1, 0, -1)):
        self.keys = []
        self.alex = []
        self.maslov = []
        pieces = []  # (side, original id)
        for i in range(lc.n):
            m = lc.maslov[i]
            if m - 1 in gradings:  # left copy lives in cone grading m-1
                pieces.append(("L", i))
            if m in gradings:
                pieces.append(("R", i))
        idx = {}
        for side, i in pieces:
            idx[(side, i)] = len(self.keys)
            self.keys.append((f"{side}:{lc.keys[i][0]}", lc.keys[i][1]))
            if side == "L":
                self.alex.append(lc.alex[i] - 1)
                self.maslov.append(lc.maslov[i] - 1)
            else:
                self.alex.append(lc.alex[i])
                self.maslov.append(lc.maslov[i])
        self.boundary: list[set[int]] = [set() for _ in self.keys]
        for side, i in pieces:
            targets = set()
            if side == "L":
                for j in lc.boundary[i]:
                    if ("L", j) in idx:
                        targets.add(idx[("L", j)])
                img = lc.umap[i]
                if img is None:
                    if lc.alex[i] > lc.stable_window:
                        raise WindowError(f"umap undefined at {lc.keys[i]} in the cone")
                    img = set()
                for j in img:
                    if ("R", j) in idx:
                        targets.add(idx[("R", j)])
            else:
                for j in lc.boundary[i]:
                    if ("R", j) in idx:
                        targets.add(idx[("R", j)])
            self.boundary[idx[(side, i)]] = targets
        self.umap = [set() for _ in self.keys]
        self.stable_window = lc.stable_window
        self.n = len(self.keys)
