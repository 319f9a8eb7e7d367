"""Finite simplicial complexes presented by their facets.

A complex is stored canonically: vertices are relabeled 0..V-1 preserving
the order of the original labels, each facet is an ascending vertex tuple,
and the facet list is sorted.  Two complexes built from the same facet sets
are therefore equal object-wise and emit byte-identical text.

The text format: UTF-8, '#' starts a comment running to end of line, each
non-blank line is one facet as whitespace-separated non-negative integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence


class ComplexFormatError(ValueError):
    """Raised for malformed facet input (bad tokens, ragged facets, ...)."""


@dataclass(frozen=True)
class SimplexIndex:
    """All k-simplices of a complex in sorted order, with position lookup."""

    k: int
    simplices: tuple[tuple[int, ...], ...]
    index: dict[tuple[int, ...], int] = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def position(self, simplex: Sequence[int]) -> int:
        return self.index[tuple(simplex)]

    def __contains__(self, simplex) -> bool:
        return tuple(simplex) in self.index


class FacetComplex:
    """A pure simplicial complex given by its maximal simplices."""

    __slots__ = ("facets", "n_vertices", "dim", "_skeletons")

    def __init__(self, facets: Sequence[Sequence[int]]):
        cleaned = []
        for f in facets:
            t = tuple(sorted(f))
            if len(set(t)) != len(t):
                raise ComplexFormatError(f"facet {tuple(f)} repeats a vertex")
            if not t:
                raise ComplexFormatError("empty facet")
            cleaned.append(t)
        if not cleaned:
            raise ComplexFormatError("complex has no facets")
        dims = {len(t) for t in cleaned}
        if len(dims) != 1:
            raise ComplexFormatError(
                f"not pure: facet sizes {sorted(dims)} differ")
        if len(set(cleaned)) != len(cleaned):
            seen = set()
            for t in cleaned:
                if t in seen:
                    raise ComplexFormatError(f"duplicate facet {t}")
                seen.add(t)
        labels = sorted({v for t in cleaned for v in t})
        relabel = {v: i for i, v in enumerate(labels)}
        self.facets = tuple(sorted(tuple(relabel[v] for v in t)
                                   for t in cleaned))
        self.n_vertices = len(labels)
        self.dim = len(self.facets[0]) - 1
        self._skeletons: dict[int, SimplexIndex] = {}

    @classmethod
    def from_labeled(cls, facets: Iterable[Sequence]) -> "FacetComplex":
        """Build from facets over arbitrary sortable hashable labels."""
        facets = [tuple(f) for f in facets]
        labels = sorted({v for f in facets for v in f})
        relabel = {v: i for i, v in enumerate(labels)}
        return cls([[relabel[v] for v in f] for f in facets])

    # ---- structure ----

    def skeleton(self, k: int) -> SimplexIndex:
        """All k-simplices, sorted.  Cached per degree."""
        if k in self._skeletons:
            return self._skeletons[k]
        if k < 0 or k > self.dim:
            simplices: tuple[tuple[int, ...], ...] = ()
        elif k == self.dim:
            simplices = self.facets
        elif k == 0:
            simplices = tuple((v,) for v in range(self.n_vertices))
        else:
            seen = set()
            for f in self.facets:
                seen.update(itertools.combinations(f, k + 1))
            simplices = tuple(sorted(seen))
        idx = SimplexIndex(k=k, simplices=simplices,
                           index={s: i for i, s in enumerate(simplices)})
        self._skeletons[k] = idx
        return idx

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.skeleton(k)) for k in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def link_facets(self, face: Sequence[int]) -> list[tuple[int, ...]]:
        """Maximal simplices of the link of `face`, in original labels."""
        fs = set(face)
        out = []
        for f in self.facets:
            if fs.issubset(f):
                out.append(tuple(v for v in f if v not in fs))
        return out

    def contains_simplex(self, simplex: Sequence[int]) -> bool:
        s = set(simplex)
        return any(s.issubset(f) for f in self.facets)

    # ---- canonical text form ----

    def to_text(self) -> str:
        return "".join(" ".join(map(str, f)) + "\n" for f in self.facets)

    def __eq__(self, other) -> bool:
        return isinstance(other, FacetComplex) and self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    def __repr__(self) -> str:
        return (f"FacetComplex(dim={self.dim}, vertices={self.n_vertices}, "
                f"facets={len(self.facets)})")


def parse_facets(text: str) -> FacetComplex:
    """Parse the facet text format (see module docstring)."""
    facets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        verts = []
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise ComplexFormatError(
                    f"line {lineno}: non-integer token {tok!r}") from None
            if v < 0:
                raise ComplexFormatError(
                    f"line {lineno}: negative vertex {v}")
            verts.append(v)
        if len(set(verts)) != len(verts):
            raise ComplexFormatError(
                f"line {lineno}: facet repeats a vertex: {line!r}")
        facets.append(verts)
    if not facets:
        raise ComplexFormatError("no facets found in input")
    sizes = {len(f) for f in facets}
    if len(sizes) != 1:
        raise ComplexFormatError(
            f"not pure: facet sizes {sorted(sizes)} differ")
    canon = [tuple(sorted(f)) for f in facets]
    seen: set[tuple[int, ...]] = set()
    for f in canon:
        if f in seen:
            raise ComplexFormatError(f"duplicate facet {f}")
        seen.add(f)
    return FacetComplex(facets)


def load_complex(path: str | Path) -> FacetComplex:
    """Load a facet file from disk."""
    return parse_facets(Path(path).read_text(encoding="utf-8"))


def save_complex(K: FacetComplex, path: str | Path) -> None:
    Path(path).write_text(K.to_text(), encoding="utf-8")


# ------------------------------------------------------------
# closed-pseudomanifold validation
# ------------------------------------------------------------

@dataclass
class ValidationReport:
    """Outcome of the closed-pseudomanifold checks.

    is_valid means: pure (guaranteed by construction), every ridge lies in
    exactly two facets, and the facet adjacency graph is connected.
    """

    dim: int
    n_vertices: int
    n_facets: int
    ridge_ok: bool
    connected: bool
    n_components: int
    bad_ridges: list[tuple[tuple[int, ...], int]]
    messages: list[str]

    @property
    def is_valid(self) -> bool:
        return self.ridge_ok and self.connected


def validate_closed_pseudomanifold(K: FacetComplex,
                                   max_reported: int = 5) -> ValidationReport:
    """Check that K is a closed connected pseudomanifold.

    Every (dim-1)-face must lie in exactly two facets, and any facet must be
    reachable from any other through shared ridges.
    """
    ridge_to_facets: dict[tuple[int, ...], list[int]] = {}
    for i, f in enumerate(K.facets):
        for ridge in itertools.combinations(f, K.dim):
            ridge_to_facets.setdefault(ridge, []).append(i)
    bad = [(r, len(fs)) for r, fs in ridge_to_facets.items() if len(fs) != 2]
    bad.sort()
    messages = []
    ridge_ok = not bad
    if bad:
        shown = ", ".join(f"{r} in {c} facet(s)" for r, c in bad[:max_reported])
        extra = f" (+{len(bad) - max_reported} more)" if len(bad) > max_reported else ""
        messages.append(f"{len(bad)} ridge(s) not shared by exactly 2 facets: "
                        f"{shown}{extra}")
    # connectivity of the facet graph through ridges shared by exactly 2
    n = len(K.facets)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for fs in ridge_to_facets.values():
        if len(fs) == 2:
            a, b = find(fs[0]), find(fs[1])
            if a != b:
                parent[a] = b
    components = len({find(i) for i in range(n)})
    connected = components == 1
    if not connected:
        messages.append(f"facet adjacency graph has {components} components")
    return ValidationReport(
        dim=K.dim, n_vertices=K.n_vertices, n_facets=len(K.facets),
        ridge_ok=ridge_ok, connected=connected, n_components=components,
        bad_ridges=bad[:max_reported], messages=messages)
