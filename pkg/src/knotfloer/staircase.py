"""Staircase models of L-space knots and the concordance comparison.

A staircase is the list of horizontal step lengths of the complex of an
L-space knot, read left to right; by symmetry it is also the list of
vertical lengths bottom to top.  The staircase, the complex and the
Alexander polynomial all carry the same information, and the step list is
the canonical identity used here.  Torus knots and admissible cables are
constructors for staircases, not separate types.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .complexes import FLevelComplex, FreeUComplex, Generator, mirror
from .laurent import LaurentPoly
from . import flhomology
from .reduction import ReducedComplex, tower_profile
from .tensor import sum_knot


class StaircaseError(ValueError):
    """Input does not describe (or reduce to) an L-space staircase."""


@dataclass(frozen=True)
class Staircase:
    steps: tuple[int, ...]

    def __post_init__(self):
        if any(s <= 0 for s in self.steps):
            raise StaircaseError(f"step lengths must be positive: {self.steps}")
        object.__setattr__(self, "steps", tuple(int(s) for s in self.steps))

    @property
    def genus(self) -> int:
        return sum(self.steps)

    def gaps_from_top(self) -> list[int]:
        """Alexander gaps below the top grading: horizontal and vertical
        step lengths interleave, [a_1, a_n, a_2, a_{n-1}, ...]."""
        n = len(self.steps)
        return [self.steps[j // 2] if j % 2 == 0 else self.steps[n - 1 - j // 2] for j in range(n)]

    def alexander_gradings(self) -> list[int]:
        """The 2n+1 gradings n_i, increasing, symmetric about 0."""
        top_half = [self.genus]
        for s in self.gaps_from_top():
            top_half.append(top_half[-1] - s)
        assert top_half[-1] == 0
        return sorted(set(top_half) | {-a for a in top_half})

    def alexander_polynomial(self) -> LaurentPoly:
        """Alternating +-1 coefficients on the gradings n_i."""
        coeffs = {}
        grades = self.alexander_gradings()
        for idx, e in enumerate(reversed(grades)):  # from the top down
            coeffs[e] = 1 if idx % 2 == 0 else -1
        return LaurentPoly(coeffs)

    def to_json_obj(self) -> dict:
        return {"steps": list(self.steps)}

    @classmethod
    def from_json_obj(cls, obj: dict) -> Staircase:
        return cls(tuple(int(s) for s in obj["steps"]))

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def __repr__(self) -> str:
        return f"Staircase({list(self.steps)})"


# ---------------------------------------------------------------------------
# Alexander polynomials of torus knots and cables


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials, ascending coefficients."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % den[-1]:
            raise ArithmeticError("inexact polynomial division")
        q = c // den[-1]
        out[i] = q
        if q:
            for j, dj in enumerate(den):
                num[i + j] -= q * dj
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


def _torus_alexander_any(p: int, q: int) -> LaurentPoly:
    if p > q:
        p, q = q, p
    if p == 1:
        return LaurentPoly.one()
    # (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1)), then symmetrized.
    num = [0] * (p * q + 2)
    num[0], num[1], num[p * q], num[p * q + 1] = 1, -1, -1, 1
    den_p = [-1] + [0] * (p - 1) + [1]
    quot = _poly_div_exact(num, den_p)
    den_q = [-1] + [0] * (q - 1) + [1]
    quot = _poly_div_exact(quot, den_q)
    shift = (p - 1) * (q - 1) // 2
    return LaurentPoly({e - shift: c for e, c in enumerate(quot) if c})


def torus_knot_alexander(p: int, q: int) -> LaurentPoly:
    """Symmetrized Alexander polynomial of the (p, q) torus knot."""
    if not (2 <= p < q):
        raise StaircaseError(f"torus knot needs 2 <= p < q, got ({p}, {q})")
    if math.gcd(p, q) != 1:
        raise StaircaseError(f"torus knot parameters must be coprime: ({p}, {q})")
    return _torus_alexander_any(p, q)


def cable_alexander(d: LaurentPoly, p: int, q: int) -> LaurentPoly:
    """Alexander polynomial of the (p, q)-cable: d(T^p) * torus(p, q).

    Only admissible cables are allowed: q/p >= 2g - 1 for g the degree of
    d, which is exactly when the cable of an L-space knot is again an
    L-space knot.
    """
    if p < 2:
        raise StaircaseError(f"cable winding p must be >= 2, got {p}")
    if q < 1:
        raise StaircaseError(f"cable parameter q must be >= 1, got {q}")
    if math.gcd(p, q) != 1:
        raise StaircaseError(f"cable parameters must be coprime: ({p}, {q})")
    g = d.degree
    if q < p * (2 * g - 1):
        raise StaircaseError(
            f"inadmissible cable: q/p = {q}/{p} < 2g-1 = {2 * g - 1}; "
            "the staircase model does not apply"
        )
    out = d.substitute_power(p) * _torus_alexander_any(p, q)
    if not out.is_symmetric() or out.eval_at_one() != 1:
        raise StaircaseError("cable Alexander polynomial failed normalization")
    return out


def staircase_from_alexander(d: LaurentPoly) -> Staircase:
    """Step lengths from an L-space-knot Alexander polynomial.

    The nonzero coefficients must alternate +1, -1 from the top exponent
    down and be symmetric.  The gaps between consecutive exponents in the
    top half alternate between horizontal and vertical step lengths, so
    de-interleaving them recovers the horizontal list [a_1, ..., a_n].
    """
    if not d:
        raise StaircaseError("zero polynomial is not an Alexander polynomial")
    if not d.is_symmetric():
        raise StaircaseError(f"polynomial is not symmetric: {d}")
    exps = d.exponents_desc()
    if len(exps) % 2 == 0:
        raise StaircaseError("an L-space Alexander polynomial has an odd number of terms")
    for idx, e in enumerate(exps):
        want = 1 if idx % 2 == 0 else -1
        if d.coeff(e) != want:
            raise StaircaseError(
                f"coefficients do not alternate +1,-1 from the top: T^{e} has {d.coeff(e)}"
            )
    half = exps[: len(exps) // 2 + 1]
    if half[-1] != 0:
        raise StaircaseError("middle exponent must be 0")
    gaps = [half[i] - half[i + 1] for i in range(len(half) - 1)]
    # undo the horizontal/vertical interleave to recover the step list
    n = len(gaps)
    steps = [0] * n
    for j, g in enumerate(gaps):
        if j % 2 == 0:
            steps[j // 2] = g
        else:
            steps[n - 1 - j // 2] = g
    return Staircase(tuple(steps))


def torus_staircase(p: int, q: int) -> Staircase:
    return staircase_from_alexander(torus_knot_alexander(p, q))


# ---------------------------------------------------------------------------
# staircase complexes


def staircase_complex(s: Staircase | tuple | list, mirrored: bool = False) -> FreeUComplex:
    """The model complex of an L-space knot with the given staircase.

    Generators x_{-n}..x_n sit at the gradings n_i; for i of the opposite
    parity to n the differential is d(x_i) = x_{i-1} + U^{n_{i+1}-n_i}
    x_{i+1}, and the top generator carries Maslov grading 0.
    """
    if not isinstance(s, Staircase):
        s = Staircase(tuple(s))
    n = len(s.steps)
    if n == 0:
        c = FreeUComplex([Generator("x0", 0, 0)], {})
        return mirror(c) if mirrored else c
    grades = s.alexander_gradings()  # index i+n holds n_i
    maslov = {n: 0}
    for i in range(n - 1, -n - 1, -1):
        r_next = grades[i + 1 + n] - grades[i + n]
        if (i - n) % 2 != 0:
            # d(x_i) != 0 and contains U^{r} x_{i+1}
            maslov[i] = maslov[i + 1] + 1 - 2 * r_next
        else:
            # x_i appears in d(x_{i+1})
            maslov[i] = maslov[i + 1] - 1
    gens = [Generator(f"x{i}", grades[i + n], maslov[i]) for i in range(-n, n + 1)]
    entries = {}
    for i in range(-n, n + 1):
        if (i - (n + 1)) % 2 == 0:
            entries[(f"x{i - 1}", f"x{i}")] = 0
            entries[(f"x{i + 1}", f"x{i}")] = grades[i + 1 + n] - grades[i + n]
    c = FreeUComplex(gens, entries)
    return mirror(c) if mirrored else c


# ---------------------------------------------------------------------------
# recognizing staircases after reduction


def is_lspace_form(r: ReducedComplex) -> bool:
    """Inside the stable window: one element per Maslov grading -2i, no odd
    gradings, and the U-map chaining consecutive even gradings."""
    w = r.stable_window
    inside = [i for i in range(r.n) if r.alex[i] > w]
    count_by_m: dict[int, int] = {}
    for i in inside:
        m = r.maslov[i]
        if m > 0 or m % 2 != 0:
            return False
        count_by_m[m] = count_by_m.get(m, 0) + 1
    if count_by_m.get(0, 0) != 1:
        return False
    e = next(i for i in inside if r.maslov[i] == 0)
    while True:
        img = r.umap[e]
        if img is None:
            return True  # truncation edge reached without a violation
        # below-window terms are truncation artifacts; judge only the rest
        img_inside = {t for t in img if r.alex[t] > w}
        if not img_inside:
            return True
        if len(img_inside) != 1:
            return False
        (t,) = img_inside
        if r.maslov[t] != r.maslov[e] - 2:
            return False
        if count_by_m.get(r.maslov[t], 0) != 1:
            return False
        e = t


def representative_staircase(r: ReducedComplex) -> Staircase:
    """Read the staircase carrying the d-invariant data of a reduced sum.

    Follows the U-tower profile and converts the Alexander jumps back into
    step lengths; the bends determine the steps twice over (positions and
    jump sizes), and both readings must agree.
    """
    profile = tower_profile(r)
    levels = [a for a, _m in profile]
    genus = levels[0]
    if genus < 0:
        raise StaircaseError("tower starts below Alexander grading 0; not a sum of unmirrored staircases")
    if len(levels) < genus + 2:
        raise flhomology.WindowError(
            f"profile has {len(levels)} steps; need {genus + 2} to certify the staircase"
        )
    gaps = [levels[m - 1] - levels[m] for m in range(1, len(levels))]
    if any(g1 < 1 for g1 in gaps):
        raise StaircaseError("tower profile is not strictly decreasing")
    if genus == 0:
        if any(g1 != 1 for g1 in gaps):
            raise StaircaseError("trivial staircase must have unit U-jumps")
        return Staircase(())
    positions = [m for m, g1 in enumerate(gaps, start=1) if g1 > 1]
    values = [gaps[m - 1] - 1 for m in positions]
    if not positions or positions[-1] != genus:
        raise StaircaseError(
            f"tower profile inconsistent with a staircase: bends at {positions}, genus {genus}"
        )
    if any(m > genus for m in positions):
        raise StaircaseError("bend beyond the staircase genus")
    steps = [positions[0]] + [positions[i] - positions[i - 1] for i in range(1, len(positions))]
    if steps != list(reversed(values)):
        raise StaircaseError(
            f"step lengths {steps} disagree with U-jump sizes {list(reversed(values))}"
        )
    return Staircase(tuple(steps))


def concordance_verdict(s1: Staircase, s2: Staircase, depth: int | None = None, verify: bool = True) -> dict:
    """d1 of both sums K1 # -K2 and -K1 # K2, plus staircase equality.

    Both d1 values vanish exactly when the staircases coincide; that
    implication is asserted, not just reported.
    """
    if not isinstance(s1, Staircase):
        s1 = Staircase(tuple(s1))
    if not isinstance(s2, Staircase):
        s2 = Staircase(tuple(s2))
    c1, c2 = staircase_complex(s1), staircase_complex(s2)
    c1m, c2m = staircase_complex(s1, mirrored=True), staircase_complex(s2, mirrored=True)
    r_pos = sum_knot([c1, c2m], depth=depth, verify=verify)
    r_neg = sum_knot([c1m, c2], depth=depth, verify=verify)
    d1_pos = flhomology.d1_of_reduced(r_pos)
    d1_neg = flhomology.d1_of_reduced(r_neg)
    equal = s1 == s2
    if d1_pos == 0 and d1_neg == 0 and not equal:
        raise StaircaseError(
            f"both d1 values vanish for distinct staircases {s1} and {s2}; "
            "this contradicts the concordance theorem"
        )
    return {"d1_pos": d1_pos, "d1_neg": d1_neg, "alexander_equal": equal}
