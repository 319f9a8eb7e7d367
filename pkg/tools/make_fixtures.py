#!/usr/bin/env python3
"""Build the bundled fixture triangulations.

Two sources:

* cp2_9: the 9-vertex complex projective plane, recovered by exhaustive
  search over facet orbits of the Z_3 x Z_3 translation action on the
  vertex grid.  All 5-subsets of the 9 vertices fall into 14 orbits of
  size 9; a union of 4 orbits gives 36 facets, and exactly one choice (up
  to relabeling) passes the battery of manifold and cohomology checks.

* rp4 / rp5 / rp6: small triangulations of real projective spaces,
  obtained from the barycentric antipodal quotients by repeated edge
  contraction.  An edge ab is contracted only when lk(a) n lk(b) =
  lk(ab) as full simplicial complexes, which preserves the PL
  homeomorphism type on combinatorial manifolds, so the results are
  genuine triangulations of the same spaces with far fewer simplices.

Each fixture is certified against independently known invariants before
it is written.  Run from the repository root:

    python3 tools/make_fixtures.py [cp2_9 rp4 rp5 rp6]
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from collections import defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from cohomotopy.chains import homology, mod2_betti
from cohomotopy.complexes import (
    FacetComplex,
    save_complex,
    validate_closed_pseudomanifold,
)
from cohomotopy.factory import antipodal_quotient
from cohomotopy.linalg import PresentedGroup

_Z = PresentedGroup(1, ())
_0 = PresentedGroup(0, ())

FIXTURE_DIR = Path(__file__).resolve().parent.parent / \
    "src" / "cohomotopy" / "fixtures"


# ------------------------------------------------------------
# edge contraction
# ------------------------------------------------------------

class EdgeContractor:
    """Mutable facet set supporting link-checked edge contractions."""

    def __init__(self, K: FacetComplex):
        self.dim = K.dim
        self.facets: set[tuple[int, ...]] = set(K.facets)
        self.v2f: dict[int, set[tuple[int, ...]]] = defaultdict(set)
        for f in self.facets:
            for v in f:
                self.v2f[v].add(f)

    def n_vertices(self) -> int:
        return len(self.v2f)

    def edges(self) -> list[tuple[int, int]]:
        seen = set()
        for f in self.facets:
            seen.update(itertools.combinations(f, 2))
        return sorted(seen)

    def _link_faces(self, star, drop: tuple[int, ...],
                    index: dict[int, int]) -> set[int]:
        """All faces of the link as local bitmasks (empty face included)."""
        out: set[int] = set()
        dropset = set(drop)
        for f in star:
            m = 0
            for v in f:
                if v not in dropset:
                    m |= 1 << index[v]
            # submask walk enumerates every face of this link facet
            s = m
            while True:
                out.add(s)
                if s == 0:
                    break
                s = (s - 1) & m
        return out

    def contractible(self, a: int, b: int) -> bool:
        """Link condition: lk(a) n lk(b) == lk(ab), as full complexes."""
        star_a = self.v2f.get(a)
        star_b = self.v2f.get(b)
        if not star_a or not star_b:
            return False
        star_ab = star_a & star_b
        if not star_ab:
            return False
        index: dict[int, int] = {}
        for f in itertools.chain(star_a, star_b):
            for v in f:
                if v not in index:
                    index[v] = len(index)
        A = self._link_faces(star_a, (a,), index)
        B = self._link_faces(star_b, (b,), index)
        C = self._link_faces(star_ab, (a, b), index)
        return (A & B) == C

    def contract(self, a: int, b: int) -> None:
        """Replace b by a everywhere; facets containing both collapse."""
        for f in list(self.v2f[b]):
            for v in f:
                self.v2f[v].discard(f)
            self.facets.discard(f)
            if a in f:
                continue
            g = tuple(sorted(a if v == b else v for v in f))
            assert g not in self.facets, "contraction produced a duplicate"
            self.facets.add(g)
            for v in g:
                self.v2f[v].add(g)
        del self.v2f[b]

    def reduce(self, seed: int = 7, log=None) -> int:
        """Greedily contract until no edge passes the link condition."""
        rng = random.Random(seed)
        total = 0
        while True:
            deg = {v: len(fs) for v, fs in self.v2f.items()}
            edges = self.edges()
            rng.shuffle(edges)
            edges.sort(key=lambda e: deg[e[0]] + deg[e[1]])
            done_any = False
            for a, b in edges:
                if a not in self.v2f or b not in self.v2f:
                    continue
                # keep the lower label; purely cosmetic
                if deg.get(b, 0) < deg.get(a, 0):
                    a, b = b, a
                if self.contractible(a, b):
                    self.contract(a, b)
                    total += 1
                    done_any = True
                    if log and total % 50 == 0:
                        log(f"  {total} contractions, "
                            f"{len(self.facets)} facets, "
                            f"{self.n_vertices()} vertices")
            if not done_any:
                return total

    def complex(self) -> FacetComplex:
        return FacetComplex.from_labeled(sorted(self.facets))


def contracted_projective_space(d: int, seed: int = 7,
                                log=print) -> FacetComplex:
    t0 = time.perf_counter()
    K = antipodal_quotient(d)
    log(f"rp{d}: quotient complex has {len(K.facets)} facets, "
        f"{K.n_vertices} vertices ({time.perf_counter() - t0:.1f}s)")
    ec = EdgeContractor(K)
    n = ec.reduce(seed=seed, log=log)
    out = ec.complex()
    log(f"rp{d}: {n} contractions -> {len(out.facets)} facets, "
        f"{out.n_vertices} vertices ({time.perf_counter() - t0:.1f}s)")
    return out


# ------------------------------------------------------------
# the 9-vertex complex projective plane
# ------------------------------------------------------------

def _grid_orbits() -> list[list[tuple[int, ...]]]:
    """Orbits of 5-subsets of Z_3 x Z_3 under translation."""
    def shift(s, dr, dc):
        return tuple(sorted(3 * ((v // 3 + dr) % 3) + (v % 3 + dc) % 3
                            for v in s))

    orbits = []
    seen = set()
    for s in itertools.combinations(range(9), 5):
        if s in seen:
            continue
        orbit = {shift(s, dr, dc) for dr in range(3) for dc in range(3)}
        assert len(orbit) == 9
        seen.update(orbit)
        orbits.append(sorted(orbit))
    assert len(orbits) == 14
    return orbits


def _is_homology_3_sphere(link: list[tuple[int, ...]]) -> bool:
    if not link or any(len(f) != 4 for f in link):
        return False
    L = FacetComplex.from_labeled(link)
    rep = validate_closed_pseudomanifold(L)
    if not rep.is_valid:
        return False
    groups = [homology(L, k) for k in range(4)]
    return all(g.same_type(h) for g, h in
               zip(groups, [_Z, _0, _0, _Z]))


def find_cp2_candidates(log=print) -> list[FacetComplex]:
    """All Z_3 x Z_3 symmetric 36-facet complexes passing the CP^2 tests."""
    orbits = _grid_orbits()
    found = []
    for pick in itertools.combinations(range(14), 4):
        facets = [f for i in pick for f in orbits[i]]
        # ridge degree first: cheap and kills nearly everything
        ridge: dict[tuple[int, ...], int] = defaultdict(int)
        ok = True
        for f in facets:
            for r in itertools.combinations(f, 4):
                ridge[r] += 1
                if ridge[r] > 2:
                    ok = False
                    break
            if not ok:
                break
        if not ok or any(c != 2 for c in ridge.values()):
            continue
        K = FacetComplex(facets)
        if K.euler_characteristic() != 3:
            continue
        if not validate_closed_pseudomanifold(K).is_valid:
            continue
        if [mod2_betti(K, k) for k in range(5)] != [1, 0, 1, 0, 1]:
            continue
        groups = [homology(K, k) for k in range(5)]
        if not all(g.same_type(h) for g, h in
                   zip(groups, [_Z, _0, _Z, _0, _Z])):
            continue
        if not all(_is_homology_3_sphere(K.link_facets((v,)))
                   for v in range(9)):
            continue
        found.append(K)
        log(f"  orbits {pick}: all homology and link tests pass")
    return found


def build_cp2(log=print) -> FacetComplex:
    from cohomotopy.steenrod import Mod2Context, sq_bits
    from cohomotopy.chains import pair_mod2, fundamental_class_mod2

    log("cp2_9: searching 1001 orbit unions for the projective plane")
    candidates = find_cp2_candidates(log)
    winners = []
    for K in candidates:
        # the intersection form is odd: some degree-2 class squares to
        # the top class, detected through Steenrod squares
        ctx = Mod2Context(K)
        top = fundamental_class_mod2(K)
        basis = ctx.basis(2)
        if any(pair_mod2(sq_bits(K, 2, 2, x), top) == 1
               for x in basis.representatives):
            winners.append(K)
    log(f"cp2_9: {len(candidates)} homology candidates, "
        f"{len(winners)} with odd intersection form")
    assert winners, "no candidate complex has the right Steenrod action"
    # candidates are generated in lexicographic orbit order; take the first
    return winners[0]


# ------------------------------------------------------------
# certification and output
# ------------------------------------------------------------

def certify_fixture(K: FacetComplex, name: str,
                    expect_homology: list, log=print) -> None:
    """Validate the complex and compare homology with the expected table."""
    rep = validate_closed_pseudomanifold(K)
    assert rep.is_valid, f"{name}: not a closed connected pseudomanifold"
    groups = [homology(K, k) for k in range(K.dim + 1)]
    got = [g.rendered() for g in groups]
    assert got == expect_homology, \
        f"{name}: homology {got} != expected {expect_homology}"
    for v in range(min(K.n_vertices, 400)):
        link = K.link_facets((v,))
        L = FacetComplex.from_labeled(link)
        lrep = validate_closed_pseudomanifold(L)
        assert lrep.is_valid, f"{name}: link of vertex {v} is not closed"
        betti = [mod2_betti(L, k) for k in range(L.dim + 1)]
        want = [1] + [0] * (K.dim - 2) + [1]
        assert betti == want, \
            f"{name}: link of vertex {v} has mod-2 betti {betti}"
    log(f"{name}: certified ({len(K.facets)} facets, "
        f"{K.n_vertices} vertices, homology {got})")


EXPECTED = {
    "cp2_9": ["Z", "0", "Z", "0", "Z"],
    "rp4": ["Z", "Z_2", "0", "Z_2", "0"],
    "rp5": ["Z", "Z_2", "0", "Z_2", "0", "Z"],
    "rp6": ["Z", "Z_2", "0", "Z_2", "0", "Z_2", "0"],
}

SEEDS = {"rp4": 7, "rp5": 7, "rp6": 7}


def build(name: str, log=print) -> FacetComplex:
    if name == "cp2_9":
        return build_cp2(log)
    d = int(name[2:])
    return contracted_projective_space(d, seed=SEEDS[name], log=log)


def main(argv: list[str]) -> int:
    # rp6 stays opt-in: its 322560-facet quotient makes the first
    # contraction pass a days-scale job on one core
    targets = argv or ["cp2_9", "rp4", "rp5"]
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    for name in targets:
        if name not in EXPECTED:
            print(f"unknown fixture {name!r}; choose from {sorted(EXPECTED)}")
            return 2
        t0 = time.perf_counter()
        K = build(name)
        certify_fixture(K, name, EXPECTED[name])
        path = FIXTURE_DIR / f"{name}.facets"
        save_complex(K, path)
        print(f"{name}: wrote {path} ({time.perf_counter() - t0:.1f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
