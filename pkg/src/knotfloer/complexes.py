"""Free F2[U] knot complexes and their F2-level truncations.

A free complex carries one Alexander and one Maslov grading per generator
and a differential matrix over F2[U].  The grading laws are: an entry U^k
from y to x forces M(x) - 2k = M(y) - 1, and the Alexander filtration
demands A(x) - k <= A(y).  Multiplication by U drops A by exactly 1 and M
by exactly 2.

The F2-level view expands each generator x into elements (x, n) = U^n x up
to a truncation depth.  Truncation is a quotient by the subcomplex of
deeper elements, so the level boundary squares to zero exactly; the
stable_window records the Alexander level above which nothing was lost.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .algebra import UMatrix, UPoly
from .gf2 import Echelon


class ValidationError(ValueError):
    """Raised when an operation requires a valid complex and got issues."""


@dataclass(frozen=True)
class Generator:
    name: str
    alexander: int
    maslov: int


class FreeUComplex:
    """Finitely generated free F2[U]-complex with graded generators."""

    __slots__ = ("generators", "differential", "by_name")

    def __init__(self, generators, differential):
        self.generators = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValidationError("generator names must be unique")
        if isinstance(differential, UMatrix):
            if set(differential.rows) != set(names) or set(differential.cols) != set(names):
                raise ValidationError("differential labels do not match generators")
            self.differential = UMatrix(names, names, differential.entries)
        else:
            # dict {(target, source): UPoly or exponent int}
            self.differential = UMatrix(names, names, differential or {})
        self.by_name = {g.name: g for g in self.generators}

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def entry(self, target: str, source: str) -> UPoly:
        """The U-power from source to target: del(source) contains it * target."""
        return self.differential.entry(target, source)

    def boundary_terms(self, source: str) -> list[tuple[str, int]]:
        """[(target, exponent)] terms of del(source); entries must be monomials."""
        out = []
        for (t, s), val in self.differential.entries.items():
            if s == source:
                for k in val.exponents():
                    out.append((t, k))
        out.sort(key=lambda tk: (tk[0], tk[1]))
        return out

    def top_alexander(self) -> int:
        return max(g.alexander for g in self.generators)

    def max_entry_exponent(self) -> int:
        return max((v.degree for v in self.differential.entries.values()), default=0)

    def __repr__(self) -> str:
        return f"FreeUComplex({len(self.generators)} generators, {len(self.differential.entries)} arrows)"


UNKNOT_GENERATOR = "u0"


def unknot_complex() -> FreeUComplex:
    return FreeUComplex([Generator(UNKNOT_GENERATOR, 0, 0)], {})


class FLevelComplex:
    """F2-level complex on elements (generator name, u_depth).

    boundary and umap map element ids to sets of element ids; umap entries
    are None where the truncation cut off the U-image.  Everything with
    Alexander grading above stable_window is truncation-independent.
    """

    __slots__ = ("keys", "alex", "maslov", "boundary", "umap", "depth", "stable_window", "index")

    def __init__(self, keys, alex, maslov, boundary, umap, depth, stable_window):
        self.keys: list[tuple[str, int]] = list(keys)
        self.alex: list[int] = list(alex)
        self.maslov: list[int] = list(maslov)
        self.boundary: list[set[int]] = boundary
        self.umap: list[set[int] | None] = umap
        self.depth = depth
        self.stable_window = stable_window
        self.index = {k: i for i, k in enumerate(self.keys)}
        if len(self.index) != len(self.keys):
            raise ValidationError("element keys must be unique")

    @classmethod
    def from_data(cls, elements, boundary=None, umap=None, depth=0, stable_window=None):
        """Build from explicit data, mainly for fixtures.

        elements: iterable of (name, u_depth, alexander, maslov).
        boundary/umap: {key: iterable of keys}; umap keys absent mean undefined.
        """
        keys = [(name, d) for name, d, _, _ in elements]
        alex = [a for _, _, a, _ in elements]
        maslov = [m for _, _, _, m in elements]
        index = {k: i for i, k in enumerate(keys)}
        bnd = [set() for _ in keys]
        for key, targets in (boundary or {}).items():
            bnd[index[key]] = {index[t] for t in targets}
        umaps: list[set[int] | None] = [None] * len(keys)
        for key, targets in (umap or {}).items():
            umaps[index[key]] = {index[t] for t in targets}
        if stable_window is None:
            stable_window = min(alex, default=0) - 1
        return cls(keys, alex, maslov, bnd, umaps, depth, stable_window)

    @property
    def n(self) -> int:
        return len(self.keys)

    def element_keys(self) -> list[tuple[str, int]]:
        return list(self.keys)

    def alexander_of(self, key) -> int:
        return self.alex[self.index[key]]

    def maslov_of(self, key) -> int:
        return self.maslov[self.index[key]]

    def boundary_of(self, key) -> frozenset:
        return frozenset(self.keys[i] for i in self.boundary[self.index[key]])

    def umap_of(self, key) -> frozenset | None:
        img = self.umap[self.index[key]]
        if img is None:
            return None
        return frozenset(self.keys[i] for i in img)

    def copy(self) -> FLevelComplex:
        return FLevelComplex(
            self.keys,
            self.alex,
            self.maslov,
            [set(s) for s in self.boundary],
            [None if s is None else set(s) for s in self.umap],
            self.depth,
            self.stable_window,
        )

    def element_label(self, key) -> str:
        name, d = key
        return name if d == 0 else f"U^{d}*{name}"

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.n} elements, window>{self.stable_window})"


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    issues: list[str]

    @property
    def ok(self) -> bool:
        return not self.issues

    def raise_if_failed(self):
        if self.issues:
            raise ValidationError("; ".join(self.issues))


def _hat_homology_dims(c: FreeUComplex) -> dict[int, int]:
    """F2 homology dimensions of the hat complex, keyed by Maslov grading."""
    by_m: dict[int, list[str]] = {}
    for g in c.generators:
        by_m.setdefault(g.maslov, []).append(g.name)
    pos = {}
    for m, names in by_m.items():
        for i, nm in enumerate(names):
            pos[nm] = i
    # rank of the hat boundary restricted to each grading step m -> m-1
    ranks: dict[int, int] = {}
    for m, names in by_m.items():
        ech = Echelon()
        for nm in names:
            vec = 0
            for (t, s), val in c.differential.entries.items():
                if s == nm and val.coeff(0):
                    vec |= 1 << pos[t]
            ech.add(vec)
        ranks[m] = ech.rank
    dims = {}
    for m, names in by_m.items():
        dims[m] = len(names) - ranks.get(m, 0) - ranks.get(m + 1, 0)
    return {m: d for m, d in dims.items() if d}


def validate(c, require_hat_normalized: bool = True) -> ValidationReport:
    """Check every type invariant; failures are report entries, not errors."""
    if isinstance(c, FreeUComplex):
        return _validate_free(c, require_hat_normalized)
    if isinstance(c, FLevelComplex):
        return _validate_level(c)
    raise TypeError(f"cannot validate {type(c).__name__}")


def _validate_free(c: FreeUComplex, require_hat_normalized: bool) -> ValidationReport:
    issues: list[str] = []
    for (t, s), val in sorted(c.differential.entries.items()):
        gt, gs = c.by_name[t], c.by_name[s]
        if not val.is_monomial():
            issues.append(f"entry {s}->{t} is not a monomial: {val}")
            continue
        k = val.degree
        if gt.alexander - k > gs.alexander:
            issues.append(
                f"filtration law violated on U^{k} entry {s}->{t}: "
                f"A({t})-{k} > A({s})"
            )
        if gt.maslov - 2 * k != gs.maslov - 1:
            issues.append(
                f"grading law violated on U^{k} entry {s}->{t}: "
                f"M({t})-2*{k} != M({s})-1"
            )
    square = c.differential.matmul(c.differential)
    for (t, s), val in sorted(square.entries.items()):
        issues.append(f"boundary squared has entry {s}->{t}: {val}")
    if require_hat_normalized and not issues:
        dims = _hat_homology_dims(c)
        if dims != {0: 1}:
            issues.append(f"hat homology is not one F2 class in Maslov grading 0: {dims}")
    return ValidationReport(issues)


def _validate_level(c: FLevelComplex) -> ValidationReport:
    issues: list[str] = []
    for i, targets in enumerate(c.boundary):
        for j in targets:
            if c.alex[j] > c.alex[i]:
                issues.append(f"boundary raises filtration: {c.keys[i]} -> {c.keys[j]}")
            if c.maslov[j] != c.maslov[i] - 1:
                issues.append(f"boundary does not drop Maslov by 1: {c.keys[i]} -> {c.keys[j]}")
        # quotient construction: boundary squared vanishes identically
        acc: set[int] = set()
        for j in targets:
            acc.symmetric_difference_update(c.boundary[j])
        if acc:
            issues.append(f"boundary squared nonzero at {c.keys[i]}")
    for i, img in enumerate(c.umap):
        if img is None:
            continue
        for j in img:
            if c.alex[j] > c.alex[i] - 1:
                issues.append(f"umap drops filtration by less than 1: {c.keys[i]} -> {c.keys[j]}")
            if c.maslov[j] != c.maslov[i] - 2:
                issues.append(f"umap does not drop Maslov by 2: {c.keys[i]} -> {c.keys[j]}")
    return ValidationReport(issues)


# ---------------------------------------------------------------------------
# constructions on free complexes


def _mirror_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else name + "*"


def mirror(c: FreeUComplex) -> FreeUComplex:
    """Dualize: negate both gradings and transpose the differential."""
    validate(c).raise_if_failed()
    gens = [Generator(_mirror_name(g.name), -g.alexander, -g.maslov) for g in c.generators]
    entries = {}
    for (t, s), val in c.differential.entries.items():
        entries[(_mirror_name(s), _mirror_name(t))] = val
    return FreeUComplex(gens, entries)


def truncate(c: FreeUComplex, depth: int) -> FLevelComplex:
    """Quotient F2-level expansion: elements (x, n) for 0 <= n <= depth."""
    if depth < 0:
        raise ValueError("truncation depth must be >= 0")
    keys, alex, maslov = [], [], []
    index = {}
    for g in c.generators:
        for n in range(depth + 1):
            index[(g.name, n)] = len(keys)
            keys.append((g.name, n))
            alex.append(g.alexander - n)
            maslov.append(g.maslov - 2 * n)
    terms_by_source: dict[str, list[tuple[str, int]]] = {g.name: [] for g in c.generators}
    for (t, s), val in c.differential.entries.items():
        for k in val.exponents():
            terms_by_source[s].append((t, k))
    boundary: list[set[int]] = [set() for _ in keys]
    umap: list[set[int] | None] = [None] * len(keys)
    polluted_levels: list[int] = []
    for g in c.generators:
        for n in range(depth + 1):
            i = index[(g.name, n)]
            img = set()
            dropped = False
            for t, k in terms_by_source[g.name]:
                if n + k <= depth:
                    img.add(index[(t, n + k)])
                else:
                    dropped = True
            boundary[i] = img
            if n < depth:
                umap[i] = {index[(g.name, n + 1)]}
            else:
                dropped = True
            if dropped:
                polluted_levels.append(alex[i])
    floor = min(alex, default=0) - 1
    stable_window = max(polluted_levels) + 1 if polluted_levels else floor
    return FLevelComplex(keys, alex, maslov, boundary, umap, depth, stable_window)


def hat_complex(c: FreeUComplex) -> FLevelComplex:
    """The U=0 quotient: one element per generator, only U^0 arrows survive.

    This is an exact complex (not an approximation), so its stable window
    sits below every element.
    """
    validate(c).raise_if_failed()
    keys = [(g.name, 0) for g in c.generators]
    alex = [g.alexander for g in c.generators]
    maslov = [g.maslov for g in c.generators]
    index = {k[0]: i for i, k in enumerate(keys)}
    boundary: list[set[int]] = [set() for _ in keys]
    for (t, s), val in c.differential.entries.items():
        if val.coeff(0):
            boundary[index[s]].add(index[t])
    umap: list[set[int] | None] = [set() for _ in keys]
    return FLevelComplex(keys, alex, maslov, boundary, umap, 0, min(alex) - 1)


def a0_minus(c: FreeUComplex) -> FreeUComplex:
    """The subcomplex spanned by U^max(0, A(x)) * x: everything at A <= 0.

    This is the i<=0, j<=0 corner of the knot complex; its homology carries
    the d-invariant of +1-surgery.
    """
    validate(c).raise_if_failed()
    shift = {g.name: max(0, g.alexander) for g in c.generators}
    gens = [
        Generator(g.name, g.alexander - shift[g.name], g.maslov - 2 * shift[g.name])
        for g in c.generators
    ]
    entries = {}
    for (t, s), val in c.differential.entries.items():
        for k in val.exponents():
            k2 = k + shift[s] - shift[t]
            if k2 < 0:
                raise ValidationError(
                    f"entry {s}->{t} would get negative exponent {k2}: "
                    "input violates the filtration law"
                )
            prev = entries.get((t, s), UPoly.zero())
            entries[(t, s)] = prev + UPoly.monomial(k2)
    return FreeUComplex(gens, entries)


# ---------------------------------------------------------------------------
# JSON interchange


def _sorted_generators(gens) -> list[Generator]:
    return sorted(gens, key=lambda g: (-g.maslov, -g.alexander, g.name))


def complex_to_json_obj(c: FreeUComplex) -> dict:
    gens = [
        {"name": g.name, "alexander": g.alexander, "maslov": g.maslov}
        for g in _sorted_generators(c.generators)
    ]
    diff = []
    for (t, s), val in c.differential.entries.items():
        for k in sorted(val.exponents()):
            diff.append({"from": s, "to": t, "upower": k})
    diff.sort(key=lambda e: (e["from"], e["to"], e["upower"]))
    return {"generators": gens, "differential": diff}


def complex_from_json_obj(obj: dict) -> FreeUComplex:
    gens = [Generator(g["name"], int(g["alexander"]), int(g["maslov"])) for g in obj["generators"]]
    entries: dict[tuple[str, str], UPoly] = {}
    for e in obj.get("differential", []):
        key = (e["to"], e["from"])
        entries[key] = entries.get(key, UPoly.zero()) + UPoly.monomial(int(e["upower"]))
    return FreeUComplex(gens, entries)


def complex_to_json(c: FreeUComplex) -> str:
    return json.dumps(complex_to_json_obj(c), indent=2)


def complex_from_json(text: str) -> FreeUComplex:
    return complex_from_json_obj(json.loads(text))


def flevel_to_json_obj(c: FLevelComplex) -> dict:
    order = sorted(
        range(c.n),
        key=lambda i: (-c.maslov[i], -c.alex[i], c.element_label(c.keys[i])),
    )
    gens = [
        {"name": c.element_label(c.keys[i]), "alexander": c.alex[i], "maslov": c.maslov[i]}
        for i in order
    ]
    diff = []
    for i in range(c.n):
        for j in c.boundary[i]:
            diff.append({"from": c.element_label(c.keys[i]), "to": c.element_label(c.keys[j]), "upower": 0})
    diff.sort(key=lambda e: (e["from"], e["to"]))
    umap = []
    for i in range(c.n):
        if c.umap[i]:
            for j in c.umap[i]:
                umap.append({"from": c.element_label(c.keys[i]), "to": c.element_label(c.keys[j])})
    umap.sort(key=lambda e: (e["from"], e["to"]))
    return {
        "generators": gens,
        "differential": diff,
        "umap": umap,
        "stable_window": c.stable_window,
    }


def flevel_to_json(c: FLevelComplex) -> str:
    return json.dumps(flevel_to_json_obj(c), indent=2)
