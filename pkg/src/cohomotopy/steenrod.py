"""Cup and cup-i products, Steenrod squares, Wu and Stiefel-Whitney classes.

Cochains with Z/2 coefficients are int bitsets over the simplex lists of
the relevant skeleton, exactly as in the chain layer.  All products use
the global vertex order of the complex, so results are deterministic.

The cup-i evaluation on an n-simplex sums over choices of i+1 junction
indices 0 <= a_0 < ... < a_i <= n.  The junctions cut [0..n] into i+2
consecutive closed blocks overlapping in single vertices; the first factor
is evaluated on the union of the even-numbered blocks, the second on the
union of the odd-numbered blocks, and a choice contributes only when the
two unions have the arities of the factors.  With a single junction this
is the Alexander-Whitney front/back product.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .chains import Mod2CohomologyBasis, coboundary_mod2, mod2_apply
from .complexes import FacetComplex
from .linalg import Mod2Matrix


@dataclass(frozen=True)
class CocycleClass:
    """A Z/2 cocycle representative on a fixed complex."""

    complex: FacetComplex
    degree: int
    bits: int

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"degree {self.degree} out of range")
        if self.bits >> len(self.complex.skeleton(self.degree)):
            raise ValueError("representative has bits beyond the skeleton")
        if mod2_apply(coboundary_mod2(self.complex, self.degree), self.bits):
            raise ValueError("representative is not a cocycle")

    def is_zero_cochain(self) -> bool:
        return self.bits == 0


class Mod2Context:
    """Per-complex cache of mod-2 cohomology bases and the top class."""

    def __init__(self, K: FacetComplex):
        self.complex = K
        self._bases: dict[int, Mod2CohomologyBasis] = {}
        self._wu: tuple[CocycleClass, CocycleClass] | None = None

    def basis(self, k: int) -> Mod2CohomologyBasis:
        if k not in self._bases:
            self._bases[k] = Mod2CohomologyBasis(self.complex, k)
        return self._bases[k]

    def fundamental_pairing(self, top_bits: int) -> int:
        """Evaluate a top cochain on the sum of all facets."""
        return top_bits.bit_count() & 1


def _context(K) -> Mod2Context:
    return K if isinstance(K, Mod2Context) else Mod2Context(K)


# ------------------------------------------------------------
# products
# ------------------------------------------------------------

def cup(K: FacetComplex, p: int, q: int, x: int, y: int,
        threads: int = 1) -> int:
    """Alexander-Whitney product of a p- and a q-cochain."""
    n = p + q
    if p < 0 or q < 0 or n > K.dim:
        return 0
    skel_p = K.skeleton(p)
    skel_q = K.skeleton(q)
    simplices = K.skeleton(n).simplices
    ppos = skel_p.position
    qpos = skel_q.position

    def run(lo: int, hi: int) -> int:
        out = 0
        for col in range(lo, hi):
            s = simplices[col]
            if (x >> ppos(s[:p + 1])) & 1 and (y >> qpos(s[p:])) & 1:
                out |= 1 << col
        return out

    return _map_ranges(run, len(simplices), threads)


@lru_cache(maxsize=None)
def _block_patterns(n: int, i: int, p: int) -> tuple:
    """Position patterns (even-union, odd-union) for junction choices.

    Cached per (simplex degree, i, first-factor degree); each entry lists
    the positions within an (n+1)-vertex simplex carrying each factor.
    """
    q = n - p + i
    pats = []
    for junctions in combinations(range(n + 1), i + 1):
        edges = (0,) + junctions + (n,)
        even: set[int] = set()
        odd: set[int] = set()
        for j in range(i + 2):
            block = range(edges[j], edges[j + 1] + 1)
            (even if j % 2 == 0 else odd).update(block)
        if len(even) == p + 1 and len(odd) == q + 1:
            pats.append((tuple(sorted(even)), tuple(sorted(odd))))
    return tuple(pats)


def cup_i(K: FacetComplex, i: int, p: int, q: int, x: int, y: int,
          threads: int = 1) -> int:
    """Steenrod cup-i product; cup_i with i = 0 is the cup product."""
    if i < 0:
        raise ValueError("cup-i index must be nonnegative")
    if i == 0:
        return cup(K, p, q, x, y, threads)
    n = p + q - i
    if p < 0 or q < 0 or n < 0 or n > K.dim:
        return 0
    pats = _block_patterns(n, i, p)
    if not pats:
        return 0
    simplices = K.skeleton(n).simplices
    ppos = K.skeleton(p).position
    qpos = K.skeleton(q).position

    def run(lo: int, hi: int) -> int:
        out = 0
        for col in range(lo, hi):
            s = simplices[col]
            acc = 0
            for ev, od in pats:
                if (x >> ppos(tuple(s[t] for t in ev))) & 1:
                    acc ^= (y >> qpos(tuple(s[t] for t in od))) & 1
            if acc:
                out |= 1 << col
        return out

    return _map_ranges(run, len(simplices), threads)


def _map_ranges(run, total: int, threads: int) -> int:
    """Evaluate run over [0, total) in chunks; or-combine partial bitsets.

    Chunks are disjoint bit ranges, so the combined result does not depend
    on scheduling order.
    """
    if threads <= 1 or total < 2048:
        return run(0, total)
    step = -(-total // threads)
    bounds = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda b: run(*b), bounds))
    out = 0
    for part in parts:
        out |= part
    return out


# ------------------------------------------------------------
# Steenrod squares
# ------------------------------------------------------------

def sq_bits(K: FacetComplex, k: int, p: int, x: int, threads: int = 1) -> int:
    """Sq^k on a degree-p cochain bitset: x cup_{p-k} x (zero for k > p)."""
    if k < 0:
        raise ValueError("negative Steenrod square")
    if k > p:
        return 0
    return cup_i(K, p - k, p, p, x, x, threads)


def sq(k: int, x: CocycleClass, threads: int = 1) -> CocycleClass:
    """Steenrod square on a cocycle class representative."""
    out = sq_bits(x.complex, k, x.degree, x.bits, threads)
    # the CocycleClass constructor verifies the result is again a cocycle
    return CocycleClass(x.complex, x.degree + k, out)


# ------------------------------------------------------------
# Wu and Stiefel-Whitney classes
# ------------------------------------------------------------

def _wu_class(ctx: Mod2Context, k: int) -> int:
    """Solve <v cup x, [X]> = <Sq^k x, [X]> over a basis of H^{d-k}."""
    K = ctx.complex
    d = K.dim
    dual = ctx.basis(d - k)
    own = ctx.basis(k)
    m = own.dim()
    if dual.dim() != m:
        raise ValueError(
            "mod-2 duality pairing is degenerate: "
            f"dim H^{k} = {m} but dim H^{d - k} = {dual.dim()}")
    if m == 0:
        return 0
    rows = []
    rhs = 0
    for j, xj in enumerate(dual.representatives):
        row = 0
        for l, bl in enumerate(own.representatives):
            if cup(K, k, d - k, bl, xj).bit_count() & 1:
                row |= 1 << l
        rows.append(row)
        if sq_bits(K, k, d - k, xj).bit_count() & 1:
            rhs |= 1 << j
    M = Mod2Matrix(m, m, rows)
    if M.rank() < m:
        raise ValueError("mod-2 duality pairing is degenerate: "
                         "input is not a closed manifold")
    lam = M.solve(rhs)
    assert lam is not None, "full-rank square system must be solvable"
    v = 0
    for l in range(m):
        if (lam >> l) & 1:
            v ^= own.representatives[l]
    return v


def wu_classes(K) -> tuple[CocycleClass, CocycleClass]:
    """The Wu classes v_1 and v_2 of a closed triangulated manifold."""
    ctx = _context(K)
    if ctx._wu is not None:
        return ctx._wu
    if ctx.complex.dim < 2:
        raise ValueError("Wu classes need dimension at least 2")
    v1 = _wu_class(ctx, 1)
    v2 = _wu_class(ctx, 2)
    ctx._wu = (CocycleClass(ctx.complex, 1, v1),
               CocycleClass(ctx.complex, 2, v2))
    return ctx._wu


def stiefel_whitney(K) -> tuple[CocycleClass, CocycleClass]:
    """w_1 and w_2 from the Wu classes: w_1 = v_1, w_2 = v_1^2 + v_2."""
    ctx = _context(K)
    v1, v2 = wu_classes(ctx)
    w2 = cup(ctx.complex, 1, 1, v1.bits, v1.bits) ^ v2.bits
    return (v1, CocycleClass(ctx.complex, 2, w2))


@dataclass(frozen=True)
class PinMinusObstruction:
    """w_1^2 + w_2 with its zero-test and, when zero, a coboundary witness."""

    representative: CocycleClass
    is_zero: bool
    witness: int | None  # 1-cochain with coboundary = representative

    def __post_init__(self):
        assert self.is_zero == (self.witness is not None)


def pin_minus_obstruction(K) -> PinMinusObstruction:
    """The degree-2 obstruction w_1^2 + w_2, tested by coboundary solving."""
    ctx = _context(K)
    w1, w2 = stiefel_whitney(ctx)
    rep = cup(ctx.complex, 1, 1, w1.bits, w1.bits) ^ w2.bits
    witness = coboundary_mod2(ctx.complex, 1).solve(rep)
    return PinMinusObstruction(
        representative=CocycleClass(ctx.complex, 2, rep),
        is_zero=witness is not None,
        witness=witness)
