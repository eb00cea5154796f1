"""Cancellation of horizontal arrows and transported U-maps.

Canceling a boundary arrow b -> ch between two elements of equal Alexander
grading removes the pair and rewires the complex through the inverse h of
the canceled arrow (h: ch -> b, zero elsewhere):

    d'(x) = d(x) + d(b)        whenever ch lies in d(x),
    U'    = f U g   with   f = pi (I + d h),  g = (I + h d) i.

Both f and g are chain maps, so U' commutes with d' exactly, and the
result is a filtered chain deformation retract of the input.  Repeating
until no horizontal arrows remain inside the stable window produces the
reduced complex.
"""

from __future__ import annotations

import heapq

from .complexes import FLevelComplex, FreeUComplex, truncate
from . import flhomology
from .flhomology import WindowError


class StabilityError(RuntimeError):
    """Doubling the truncation depth changed an invariant: depth too small."""


class TowerProfileError(ValueError):
    """The complex does not expose a single Maslov-grading-0 tower element."""


class ReducedComplex(FLevelComplex):
    """A level complex with no horizontal arrows inside the stable window."""

    __slots__ = ("provenance", "reduced")

    def __init__(self, keys, alex, maslov, boundary, umap, depth, stable_window, provenance=()):
        super().__init__(keys, alex, maslov, boundary, umap, depth, stable_window)
        self.provenance = tuple(provenance)
        self.reduced = True


def default_depth(c: FreeUComplex) -> int:
    """Truncation depth policy: four times the top Alexander grading plus 8.

    Tensor products add top gradings, so this is automatically the summed
    figure for product inputs.
    """
    return 4 * max(0, c.top_alexander()) + 8


class _Reducer:
    """Mutable cancellation workspace; takes ownership of the given complex."""

    def __init__(self, lc: FLevelComplex):
        self.lc = lc
        n = lc.n
        self.alive = bytearray(b"\x01" * n)
        self.bdry_in: list[set[int]] = [set() for _ in range(n)]
        for i, targets in enumerate(lc.boundary):
            for j in targets:
                self.bdry_in[j].add(i)
        self.u_in: list[set[int]] = [set() for _ in range(n)]
        for i, img in enumerate(lc.umap):
            if img:
                for j in img:
                    self.u_in[j].add(i)
        self.provenance: list[tuple] = []

    # -- low-level F2 updates keeping the transposes consistent

    def _bxor(self, v: int, targets: set[int]):
        row = self.lc.boundary[v]
        for t in targets:
            if t in row:
                row.discard(t)
                self.bdry_in[t].discard(v)
            else:
                row.add(t)
                self.bdry_in[t].add(v)

    def _uxor(self, v: int, targets: set[int]):
        row = self.lc.umap[v]
        for t in targets:
            if t in row:
                row.discard(t)
                self.u_in[t].discard(v)
            else:
                row.add(t)
                self.u_in[t].add(v)

    def horizontal_arrows(self) -> list[tuple[int, int]]:
        lc = self.lc
        out = []
        for b in range(lc.n):
            if not self.alive[b]:
                continue
            for ch in lc.boundary[b]:
                if lc.alex[ch] == lc.alex[b]:
                    out.append((b, ch))
        return out

    def cancel(self, b: int, ch: int):
        """Cancel the horizontal arrow b -> ch; caller checked validity."""
        lc = self.lc
        old_db = frozenset(lc.boundary[b])
        old_ub = None if lc.umap[b] is None else frozenset(lc.umap[b])
        u_in_ch = [v for v in self.u_in[ch] if v != b and v != ch and self.alive[v]]
        d_in_ch = [v for v in self.bdry_in[ch] if v != b and self.alive[v]]

        # U' = pi (U + dhU + Uhd + dhUhd) i, with h inverting b -> ch.
        for v in u_in_ch:
            if lc.umap[v] is not None:
                self._uxor(v, old_db)
        # When U(b) was cut off by the truncation, b sits strictly below the
        # stable window, so the skipped corrections lie below it too.
        ch_in_ub = old_ub is not None and ch in old_ub
        if old_ub is not None:
            for v in d_in_ch:
                if lc.umap[v] is None:
                    continue
                self._uxor(v, old_ub)
                if ch_in_ub:
                    self._uxor(v, old_db)

        # d'(v) = d(v) + d(b) wherever ch in d(v); record fresh horizontals.
        new_horizontals = []
        for v in d_in_ch:
            self._bxor(v, old_db)
            av = lc.alex[v]
            row = lc.boundary[v]
            for t in old_db:
                if t in row and lc.alex[t] == av and t != ch:
                    new_horizontals.append((v, t))

        # projection: drop the canceled pair everywhere, then retire it.
        for v in list(self.bdry_in[b]):
            if v != b and v != ch:
                lc.boundary[v].discard(b)
        for v in list(self.u_in[b]):
            if v != b and v != ch and lc.umap[v] is not None:
                lc.umap[v].discard(b)
        for v in list(self.u_in[ch]):
            if v != b and v != ch and lc.umap[v] is not None:
                lc.umap[v].discard(ch)
        for dead in (b, ch):
            for t in lc.boundary[dead]:
                self.bdry_in[t].discard(dead)
            lc.boundary[dead] = set()
            if lc.umap[dead]:
                for t in lc.umap[dead]:
                    self.u_in[t].discard(dead)
            lc.umap[dead] = set()
            self.bdry_in[dead] = set()
            self.u_in[dead] = set()
            self.alive[dead] = 0
        self.provenance.append((lc.keys[b], lc.keys[ch]))
        return new_horizontals

    def run(self):
        """Cancel every horizontal arrow, by decreasing Alexander grading."""
        lc = self.lc
        heap: list[tuple[int, int, int]] = []
        for b, ch in self.horizontal_arrows():
            heap.append((-lc.alex[b], b, ch))
        heapq.heapify(heap)
        while heap:
            _, b, ch = heapq.heappop(heap)
            if not (self.alive[b] and self.alive[ch] and ch in lc.boundary[b]):
                continue
            for nb, nch in self.cancel(b, ch):
                heapq.heappush(heap, (-lc.alex[nb], nb, nch))

    def run_random(self, rng):
        """Cancel in a random order; used by order-independence tests."""
        while True:
            arrows = self.horizontal_arrows()
            if not arrows:
                return
            b, ch = arrows[rng.randrange(len(arrows))]
            self.cancel(b, ch)

    def finish(self, as_reduced: bool):
        lc = self.lc
        live = [i for i in range(lc.n) if self.alive[i]]
        remap = {i: p for p, i in enumerate(live)}
        keys = [lc.keys[i] for i in live]
        alex = [lc.alex[i] for i in live]
        maslov = [lc.maslov[i] for i in live]
        boundary = [{remap[j] for j in lc.boundary[i]} for i in live]
        umap = [None if lc.umap[i] is None else {remap[j] for j in lc.umap[i]} for i in live]
        if as_reduced:
            return ReducedComplex(
                keys, alex, maslov, boundary, umap, lc.depth, lc.stable_window,
                provenance=self.provenance,
            )
        return FLevelComplex(keys, alex, maslov, boundary, umap, lc.depth, lc.stable_window)


def cancel_arrow(c: FLevelComplex, b_key, ch_key) -> FLevelComplex:
    """Cancel one horizontal arrow, returning the deformation retract."""
    if b_key not in c.index or ch_key not in c.index:
        raise KeyError(f"elements {b_key} or {ch_key} absent from the complex")
    b, ch = c.index[b_key], c.index[ch_key]
    if ch not in c.boundary[b]:
        raise ValueError(f"no boundary arrow {b_key} -> {ch_key}")
    if c.alex[b] != c.alex[ch]:
        raise ValueError(f"arrow {b_key} -> {ch_key} is not horizontal")
    red = _Reducer(c.copy())
    red.cancel(b, ch)
    out = red.finish(as_reduced=False)
    return out


def _reduce_level(lc: FLevelComplex) -> ReducedComplex:
    red = _Reducer(lc)
    red.run()
    return red.finish(as_reduced=True)


def _invariant_snapshot(r: ReducedComplex):
    """d1, tau and the tower profile, or the failure kind when undefined."""
    try:
        d1 = flhomology.d1_of_reduced(r)
        tau = flhomology.tau_of_reduced(r)
        profile = flhomology.class_profile(r)
    except WindowError:
        return None
    return d1, tau, profile


def _compare_reductions(r1: ReducedComplex, r2: ReducedComplex):
    floor = r1.stable_window
    ranks1 = flhomology.graded_ranks(r1, floor)
    ranks2 = {k: v for k, v in flhomology.graded_ranks(r2, floor).items() if k[0] > floor}
    if ranks1 != ranks2:
        raise StabilityError("graded ranks differ between depth N and 2N")
    snap1 = _invariant_snapshot(r1)
    snap2 = _invariant_snapshot(r2)
    if snap1 is None or snap2 is None:
        if (snap1 is None) != (snap2 is None):
            raise StabilityError("invariants computable at one depth only")
        return
    d1a, taua, prof1 = snap1
    d1b, taub, prof2 = snap2
    if d1a != d1b:
        raise StabilityError(f"d1 differs between depths: {d1a} vs {d1b}")
    if taua != taub:
        raise StabilityError(f"tau differs between depths: {taua} vs {taub}")
    if prof2[: len(prof1)] != prof1:
        raise StabilityError("tower profile differs between depths")


def reduce(c, depth: int | None = None, verify: bool | None = None) -> ReducedComplex:
    """Reduce a complex: truncate (free inputs), then cancel horizontals.

    For a free complex the default depth comes from default_depth, and the
    whole reduction is re-run at twice the depth to assert that nothing
    inside the stable window depended on the truncation.  Already-level
    inputs are canceled as they stand; their stability is the caller's
    pipeline responsibility (see tensor.sum_knot).
    """
    if isinstance(c, FLevelComplex):
        if depth is not None:
            raise ValueError("depth applies only to free complexes")
        return _reduce_level(c.copy())
    if not isinstance(c, FreeUComplex):
        raise TypeError(f"cannot reduce {type(c).__name__}")
    n = depth if depth is not None else default_depth(c)
    r1 = _reduce_level(truncate(c, n))
    if verify is None or verify:
        r2 = _reduce_level(truncate(c, 2 * n))
        _compare_reductions(r1, r2)
    return r1


def tower_profile(r: ReducedComplex) -> list[tuple[int, int]]:
    """(A, M) along the U-orbit of the tower class, from Maslov grading 0.

    The profile follows homology classes, so it agrees with following the
    single chain of elements on a staircase reduction and stays correct
    when the transported U-map hits sums.
    """
    window = r.stable_window
    m0 = [i for i in range(r.n) if r.maslov[i] == 0 and r.alex[i] > window]
    if len(m0) != 1:
        raise TowerProfileError(
            f"expected one Maslov-grading-0 element in the window, found {len(m0)}"
        )
    return flhomology.class_profile(r)
