"""Connected sums as tensor products over F2[U].

Free (x) free is the Leibniz-rule tensor product.  Reduced (x) free routes
every U-power through the reduced factor, whose U-map is the one that may
drop the filtration by more than 1; the free factor's generators stay
U-free.  That normal form is what makes the product filtration
well-defined and keeps the result a deformation retract of the full sum.
"""

from __future__ import annotations

from .complexes import FLevelComplex, FreeUComplex, Generator, validate
from .flhomology import WindowError
from .reduction import ReducedComplex, _compare_reductions, reduce


def tensor_name(x: str, y: str) -> str:
    return f"{x}~{y}"


def tensor_free(c1: FreeUComplex, c2: FreeUComplex) -> FreeUComplex:
    """Tensor product of two free complexes (connected sum of knots)."""
    validate(c1).raise_if_failed()
    validate(c2).raise_if_failed()
    gens = []
    for g1 in c1.generators:
        for g2 in c2.generators:
            gens.append(
                Generator(tensor_name(g1.name, g2.name), g1.alexander + g2.alexander, g1.maslov + g2.maslov)
            )
    entries = {}
    for (t, s), val in c1.differential.entries.items():
        for g2 in c2.generators:
            entries[(tensor_name(t, g2.name), tensor_name(s, g2.name))] = val
    for (t, s), val in c2.differential.entries.items():
        for g1 in c1.generators:
            entries[(tensor_name(g1.name, t), tensor_name(g1.name, s))] = val
    return FreeUComplex(gens, entries)


def tensor_reduced_free(r: FLevelComplex, c2: FreeUComplex) -> FLevelComplex:
    """Reduced (x) free product with U applied on the first component."""
    if not getattr(r, "reduced", False):
        raise TypeError("first factor must be a reduced complex")
    validate(c2).raise_if_failed()
    max_exp = c2.max_entry_exponent()
    top_r = max(r.alex, default=0)
    if top_r - max_exp <= r.stable_window:
        raise WindowError(
            "stable window of the reduced factor cannot absorb "
            f"U^{max_exp} arrows of the free factor"
        )

    gens2 = list(c2.generators)
    terms2: dict[str, list[tuple[str, int]]] = {g.name: [] for g in gens2}
    for (t, s), val in c2.differential.entries.items():
        for k in val.exponents():
            terms2[s].append((t, k))
    g2pos = {g.name: j for j, g in enumerate(gens2)}
    width = len(gens2)

    keys, alex, maslov = [], [], []
    for e in range(r.n):
        name_e, depth_e = r.keys[e]
        for g2 in gens2:
            keys.append((tensor_name(name_e, g2.name), depth_e))
            alex.append(r.alex[e] + g2.alexander)
            maslov.append(r.maslov[e] + g2.maslov)

    # U-orbit prefixes of each reduced element, with sub-window terms dropped.
    chains: list[list[set[int]]] = [[{e}] for e in range(r.n)]

    def u_power(e: int, k: int) -> set[int]:
        chain = chains[e]
        while len(chain) <= k:
            nxt: set[int] = set()
            for t in chain[-1]:
                img = r.umap[t]
                if img is None:
                    continue  # below the window; the product window covers it
                nxt.symmetric_difference_update(img)
            chain.append(nxt)
        return chain[k]

    boundary: list[set[int]] = []
    umap: list[set[int] | None] = []
    for e in range(r.n):
        base = e * width
        img_e = r.umap[e]
        for g2 in gens2:
            row: set[int] = set()
            for t in r.boundary[e]:
                row.symmetric_difference_update({t * width + g2pos[g2.name]})
            for t2, k in terms2[g2.name]:
                for t in u_power(e, k):
                    j = t * width + g2pos[t2]
                    if j in row:
                        row.discard(j)
                    else:
                        row.add(j)
            boundary.append(row)
            umap.append(None if img_e is None else {t * width + g2pos[g2.name] for t in img_e})

    stable_window = r.stable_window + max(g.alexander for g in gens2)
    return FLevelComplex(keys, alex, maslov, boundary, umap, r.depth, stable_window)


def _fold(complexes, depth: int) -> ReducedComplex:
    acc = reduce(complexes[0], depth=depth, verify=False)
    for c in complexes[1:]:
        acc = reduce(tensor_reduced_free(acc, c))
    return acc


def sum_knot(complexes, depth: int | None = None, verify: bool = True) -> ReducedComplex:
    """Reduce a connected sum by folding: reduce, tensor, reduce again.

    With verify on, the whole fold is re-run at twice the truncation depth
    and the reduced invariants are compared inside the stable window.
    """
    complexes = list(complexes)
    if not complexes:
        raise ValueError("sum_knot needs at least one complex")
    for c in complexes:
        validate(c).raise_if_failed()
    n = depth if depth is not None else 4 * sum(max(0, c.top_alexander()) for c in complexes) + 8
    r1 = _fold(complexes, n)
    if verify:
        r2 = _fold(complexes, 2 * n)
        _compare_reductions(r1, r2)
    return r1
