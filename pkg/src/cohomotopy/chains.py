"""Chain and cochain complexes of a facet complex.

Three coefficient systems: integers, integers mod 2, and integers twisted
by an orientation double cover.  The twist is a mod-2 edge cocycle z; the
twisted boundary flips the sign of the leading face:

    d~[v0...vk] = (-1)^(z(v0 v1)) [v1...vk]
                + sum_{i>=1} (-1)^i [v0...v_i-hat...vk]

which equals the ordinary boundary when z = 0, and satisfies d~ d~ = 0
exactly when z is a cocycle.

Integer chains and cochains are sparse dicts {simplex position: value};
mod-2 chains and cochains are int bitsets over the positions of the
relevant skeleton.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .complexes import FacetComplex
from .linalg import (
    AbelianQuotient,
    Mod2Echelon,
    Mod2Matrix,
    PresentedGroup,
    SparseIntMatrix,
    invariant_factors,
    kernel_lattice,
    rank_int,
)


# ------------------------------------------------------------
# orientation systems
# ------------------------------------------------------------

class OrientationSystem:
    """A mod-2 edge cocycle twisting integer coefficients.

    The constructor checks the cocycle condition (vanishing mod-2
    coboundary on every 2-simplex); it does not check that the cocycle is
    the orientation class - use twisted_fundamental_class for that.
    """

    __slots__ = ("complex", "edge_bits")

    def __init__(self, K: FacetComplex, edge_bits: int):
        self.complex = K
        self.edge_bits = edge_bits
        edges = K.skeleton(1)
        if edge_bits >> len(edges):
            raise ValueError("twist has bits beyond the edge count")
        if K.dim >= 2:
            pos = edges.position
            for a, b, c in K.skeleton(2):
                val = ((edge_bits >> pos((a, b)))
                       ^ (edge_bits >> pos((a, c)))
                       ^ (edge_bits >> pos((b, c)))) & 1
                if val:
                    raise ValueError(
                        f"twist is not a cocycle: fails on 2-simplex "
                        f"{(a, b, c)}")

    @classmethod
    def trivial(cls, K: FacetComplex) -> "OrientationSystem":
        return cls(K, 0)

    def is_trivial(self) -> bool:
        return self.edge_bits == 0

    def edge_value(self, u: int, v: int) -> int:
        """z on the edge {u, v}, in {0, 1}."""
        e = (u, v) if u < v else (v, u)
        return (self.edge_bits >> self.complex.skeleton(1).position(e)) & 1


# ------------------------------------------------------------
# boundary operators
# ------------------------------------------------------------

def boundary_matrix(K: FacetComplex, k: int,
                    twist: Optional[OrientationSystem] = None) -> SparseIntMatrix:
    """Integer boundary C_k -> C_{k-1}; twisted when a twist is given.

    Rows are (k-1)-simplices, columns are k-simplices, both in skeleton
    order.
    """
    if twist is not None and twist.complex is not K:
        raise ValueError("twist belongs to a different complex")
    low = K.skeleton(k - 1)
    high = K.skeleton(k)
    M = SparseIntMatrix(len(low), len(high))
    if k < 1 or k > K.dim:
        return M
    pos = low.position
    edge_pos = K.skeleton(1).position if (twist is not None and k >= 1) else None
    zbits = twist.edge_bits if twist is not None else 0
    rows = M.rows
    for c, simplex in enumerate(high.simplices):
        for i in range(k + 1):
            face = simplex[:i] + simplex[i + 1:]
            sign = -1 if i & 1 else 1
            if i == 0 and twist is not None and k >= 1:
                e = (simplex[0], simplex[1])
                if (zbits >> edge_pos(e)) & 1:
                    sign = -sign
            rows[pos(face)][c] = sign
    return M


def boundary_mod2(K: FacetComplex, k: int) -> Mod2Matrix:
    """Mod-2 boundary C_k -> C_{k-1}: rows = faces, columns = k-simplices."""
    low = K.skeleton(k - 1)
    high = K.skeleton(k)
    M = Mod2Matrix(len(low), len(high))
    if k < 1 or k > K.dim:
        return M
    pos = low.position
    rows = M.rows
    for c, simplex in enumerate(high.simplices):
        bit = 1 << c
        for i in range(k + 1):
            rows[pos(simplex[:i] + simplex[i + 1:])] |= bit
    return M


def coboundary_mod2(K: FacetComplex, k: int) -> Mod2Matrix:
    """Mod-2 coboundary C^k -> C^(k+1): rows = (k+1)-simplices."""
    low = K.skeleton(k)
    high = K.skeleton(k + 1)
    M = Mod2Matrix(len(high), len(low))
    if k < 0 or k >= K.dim:
        return M
    pos = low.position
    rows = M.rows
    for r, simplex in enumerate(high.simplices):
        x = 0
        for i in range(k + 2):
            x |= 1 << pos(simplex[:i] + simplex[i + 1:])
        rows[r] = x
    return M


def mod2_apply(M: Mod2Matrix, x: int) -> int:
    """Matrix-vector product over GF(2); x is a bitset over columns."""
    out = 0
    for r, row in enumerate(M.rows):
        if (row & x).bit_count() & 1:
            out |= 1 << r
    return out


def apply_int_matrix(M: SparseIntMatrix, x: dict[int, int]) -> dict[int, int]:
    """Sparse matrix-vector product M x over Z."""
    out: dict[int, int] = {}
    for r, row in enumerate(M.rows):
        acc = 0
        for c, v in row.items():
            xc = x.get(c)
            if xc:
                acc += v * xc
        if acc:
            out[r] = acc
    return out


# ------------------------------------------------------------
# homology and cohomology (invariant factors; generators on demand)
# ------------------------------------------------------------

def homology(K: FacetComplex, k: int,
             twist: Optional[OrientationSystem] = None) -> PresentedGroup:
    """H_k as an abstract group (no generator representatives).

    free rank = dim C_k - rank d_k - rank d_{k+1}; torsion = nontrivial
    invariant factors of d_{k+1}.
    """
    if k < 0 or k > K.dim:
        return PresentedGroup(0)
    n_k = len(K.skeleton(k))
    dk = boundary_matrix(K, k, twist)
    dk1 = boundary_matrix(K, k + 1, twist)
    free = n_k - rank_int(dk) - rank_int(dk1)
    torsion = tuple(invariant_factors(dk1))
    return PresentedGroup(free_rank=free, torsion=torsion)


def cohomology(K: FacetComplex, k: int) -> PresentedGroup:
    """H^k with integer coefficients (untwisted).

    Torsion of H^k equals the torsion of the transposed boundary d_k
    (= coboundary out of degree k-1); invariant factors are transpose
    invariant, so d_k itself is used.
    """
    if k < 0 or k > K.dim:
        return PresentedGroup(0)
    n_k = len(K.skeleton(k))
    dk = boundary_matrix(K, k)
    dk1 = boundary_matrix(K, k + 1)
    free = n_k - rank_int(dk) - rank_int(dk1)
    torsion = tuple(invariant_factors(dk))
    return PresentedGroup(free_rank=free, torsion=torsion)


def homology_with_generators(K: FacetComplex, k: int,
                             twist: Optional[OrientationSystem] = None
                             ) -> AbelianQuotient:
    """H_k with generator representatives and class-coordinate mapping."""
    if k < 0 or k > K.dim:
        raise ValueError(f"degree {k} out of range for dim {K.dim}")
    n_k = len(K.skeleton(k))
    zbasis = kernel_lattice(boundary_matrix(K, k, twist))
    bcols = [col for col in boundary_matrix(K, k + 1, twist).columns()]
    return AbelianQuotient(n_k, zbasis, bcols)


def cohomology_with_generators(K: FacetComplex, k: int) -> AbelianQuotient:
    """Integral H^k with representative cocycles.

    Cochain groups are identified with chain groups through the simplex
    basis, so the coboundary C^k -> C^{k+1} is the transpose of the
    degree-(k+1) boundary matrix.
    """
    if k < 0 or k > K.dim:
        raise ValueError(f"degree {k} out of range for dim {K.dim}")
    n_k = len(K.skeleton(k))
    zbasis = kernel_lattice(boundary_matrix(K, k + 1).transpose())
    bcols = [col for col in boundary_matrix(K, k).transpose().columns()]
    return AbelianQuotient(n_k, zbasis, bcols)


def mod2_betti(K: FacetComplex, k: int) -> int:
    if k < 0 or k > K.dim:
        return 0
    n_k = len(K.skeleton(k))
    return n_k - boundary_mod2(K, k).rank() - boundary_mod2(K, k + 1).rank()


class Mod2CohomologyBasis:
    """A basis of H^k(K; Z/2) with cocycle representatives.

    Representatives are cocycle bitsets over the k-skeleton; class
    coordinates of arbitrary cocycles come from reduction first modulo
    coboundaries, then against the tracked representative echelon.
    """

    def __init__(self, K: FacetComplex, k: int):
        self.complex = K
        self.k = k
        self.n_cochains = len(K.skeleton(k))
        delta = coboundary_mod2(K, k)
        self._coboundaries = Mod2Echelon()
        if k >= 1:
            # columns of the lower coboundary are the images of the basis
            # (k-1)-cochains; the transpose lists them as rows
            for img in coboundary_mod2(K, k - 1).transpose().rows:
                self._coboundaries.insert(img)
        self._delta = delta
        # first pass finds which kernel vectors survive modulo coboundaries;
        # the tracked echelon then sees only survivors, so combination bits
        # align with representative indices
        reps = []
        reduced = []
        probe = Mod2Echelon()
        for z in delta.kernel_basis():
            zred, _ = self._coboundaries.reduce(z)
            if zred and probe.insert(zred)[0]:
                reps.append(z)
                reduced.append(zred)
        tracked = Mod2Echelon(track=True)
        for zred in reduced:
            added, _ = tracked.insert(zred)
            assert added
        self.representatives: list[int] = reps
        self._tracked = tracked

    def dim(self) -> int:
        return len(self.representatives)

    def is_cocycle(self, x: int) -> bool:
        return mod2_apply(self._delta, x) == 0

    def is_coboundary(self, x: int) -> bool:
        return self.is_cocycle(x) and self._coboundaries.contains(x)

    def class_coordinates(self, x: int) -> tuple[int, ...]:
        """Coordinates of [x] over the representative basis."""
        if not self.is_cocycle(x):
            raise ValueError("not a cocycle")
        xred, _ = self._coboundaries.reduce(x)
        res, combo = self._tracked.reduce(xred)
        if res:
            raise ValueError("cocycle not in the computed span (bug trap)")
        return tuple((combo >> i) & 1 for i in range(len(self.representatives)))

    def from_coordinates(self, coords) -> int:
        x = 0
        for i, c in enumerate(coords):
            if c & 1:
                x ^= self.representatives[i]
        return x


# ------------------------------------------------------------
# fundamental classes
# ------------------------------------------------------------

def fundamental_class_mod2(K: FacetComplex) -> int:
    """Sum of all facets; checks it is a cycle (closedness certificate)."""
    n = len(K.facets)
    cls = (1 << n) - 1
    if mod2_apply(boundary_mod2(K, K.dim), cls):
        raise ValueError("facet sum is not a mod-2 cycle: complex not closed")
    return cls


def twisted_fundamental_class(K: FacetComplex,
                              twist: OrientationSystem) -> dict[int, int]:
    """The +-1 facet cycle generating H_d(K; twisted Z).

    Signs propagate across shared ridges; existence certifies that the
    twist is the orientation cocycle.  Raises ValueError if no consistent
    assignment exists (wrong twist or non-orientable situation).
    """
    d = K.dim
    ridge_pairs: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for c, simplex in enumerate(K.facets):
        for i in range(d + 1):
            face = simplex[:i] + simplex[i + 1:]
            sign = -1 if i & 1 else 1
            if i == 0:
                if twist.edge_value(simplex[0], simplex[1]):
                    sign = -sign
            ridge_pairs.setdefault(face, []).append((c, sign))
    signs: dict[int, int] = {0: 1}
    stack = [0]
    adjacency: dict[int, list[tuple[int, int]]] = {}
    for face, incident in ridge_pairs.items():
        if len(incident) != 2:
            raise ValueError("complex is not closed (ridge degree != 2)")
        (c1, s1), (c2, s2) = incident
        # s1 x1 + s2 x2 = 0  =>  x2 = -s1 s2 x1
        rel = -s1 * s2
        adjacency.setdefault(c1, []).append((c2, rel))
        adjacency.setdefault(c2, []).append((c1, rel))
    while stack:
        c = stack.pop()
        for c2, rel in adjacency.get(c, ()):  # rel: x2 = rel * x1
            want = rel * signs[c]
            have = signs.get(c2)
            if have is None:
                signs[c2] = want
                stack.append(c2)
            elif have != want:
                raise ValueError(
                    "no twisted fundamental class: the twist is not the "
                    "orientation cocycle of this manifold")
    if len(signs) != len(K.facets):
        raise ValueError("facet graph is not connected")
    # exact certificate
    residual = apply_int_matrix(boundary_matrix(K, d, twist), signs)
    if residual:
        raise AssertionError("propagated signs are not a twisted cycle")
    return signs


def is_orientable(K: FacetComplex) -> bool:
    try:
        twisted_fundamental_class(K, OrientationSystem.trivial(K))
        return True
    except ValueError:
        return False


# ------------------------------------------------------------
# Bockstein maps (cochain and twisted-chain level)
# ------------------------------------------------------------

def bockstein_sq1(K: FacetComplex, k: int, cocycle_bits: int) -> int:
    """Integral Bockstein composed with mod-2 reduction on a k-cocycle.

    Lift the cocycle to a 0/1 integer cochain, take the integer coboundary
    (necessarily even), halve, reduce mod 2.  Result is a (k+1)-cocycle
    bitset representing Sq^1 of the class.
    """
    high = K.skeleton(k + 1)
    out = 0
    for r, simplex in enumerate(high.simplices):
        pos = K.skeleton(k).position
        val = 0
        for i in range(k + 2):
            if (cocycle_bits >> pos(simplex[:i] + simplex[i + 1:])) & 1:
                val += -1 if i & 1 else 1
        if val & 1:
            raise ValueError("input is not a mod-2 cocycle")
        if (val >> 1) & 1:
            out |= 1 << r
    return out


def twisted_bockstein_chain(K: FacetComplex, twist: OrientationSystem,
                            k: int, cycle_bits: int,
                            matrix: Optional[SparseIntMatrix] = None
                            ) -> dict[int, int]:
    """Half the twisted boundary of the 0/1 lift of a mod-2 k-cycle.

    The result is an exact twisted (k-1)-cycle; on classes this computes
    the twisted Bockstein H_k(Z/2) -> H_{k-1}(twisted Z).  Callers looping
    over many cycles may pass the twisted degree-k boundary matrix.
    """
    if matrix is None:
        matrix = boundary_matrix(K, k, twist)
    lift = {i: 1 for i in range(len(K.skeleton(k)))
            if (cycle_bits >> i) & 1}
    bnd = apply_int_matrix(matrix, lift)
    out: dict[int, int] = {}
    for r, v in bnd.items():
        if v & 1:
            raise ValueError("input is not a mod-2 cycle")
        h = v >> 1
        if h:
            out[r] = h
    return out


# ------------------------------------------------------------
# pairings
# ------------------------------------------------------------

def pair_mod2(cochain_bits: int, chain_bits: int) -> int:
    """Kronecker pairing of mod-2 cochain and chain bitsets."""
    return (cochain_bits & chain_bits).bit_count() & 1


def chain_to_bits(chain: dict[int, int]) -> int:
    """Reduce an integer chain mod 2."""
    out = 0
    for i, v in chain.items():
        if v & 1:
            out |= 1 << i
    return out
