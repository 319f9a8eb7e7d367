"""Standard triangulation generators and bundled fixture access.

Families:

* ``sphere d``       -- boundary of the (d+1)-simplex.
* ``circle m``       -- the m-gon.
* ``rp d``           -- real projective d-space: boundary of the
  (d+1)-cross-polytope, one barycentric subdivision (making the antipodal
  map simplicial and free), then vertex-orbit identification.
* ``product(a, b)``  -- staircase triangulation of a product.
* ``subdivide(a)``   -- barycentric subdivision.

All generators are deterministic: the same spec always yields the same
FacetComplex and hence byte-identical facet files.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from pathlib import Path

from .complexes import FacetComplex


def sphere(d: int) -> FacetComplex:
    """Boundary of the (d+1)-simplex: a triangulated d-sphere."""
    if d < 1:
        raise ValueError("sphere dimension must be >= 1")
    return FacetComplex(list(itertools.combinations(range(d + 2), d + 1)))


def circle(m: int) -> FacetComplex:
    """The m-gon."""
    if m < 3:
        raise ValueError("circle needs at least 3 vertices")
    return FacetComplex([(i, (i + 1) % m) for i in range(m)])


def barycentric_subdivision(K: FacetComplex) -> FacetComplex:
    """Flag complex of the face poset: one vertex per nonempty face."""
    facets = []
    for f in K.facets:
        for perm in itertools.permutations(f):
            facets.append(tuple(tuple(sorted(perm[:k + 1]))
                                for k in range(len(f))))
    return FacetComplex.from_labeled(facets)


def cross_polytope_sphere(d: int) -> FacetComplex:
    """Boundary of the (d+1)-dimensional cross-polytope.

    Vertices are (axis, sign) pairs; facets pick one sign per axis.  This is
    the centrally symmetric model of S^d.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    axes = range(d + 1)
    facets = []
    for signs in itertools.product((0, 1), repeat=d + 1):
        facets.append(tuple((i, signs[i]) for i in axes))
    return FacetComplex.from_labeled(facets)


def _cross_polytope_subdivision_flags(d: int):
    """Maximal flags of the (d+1)-cross-polytope boundary, as face chains.

    A face is a sorted tuple of (axis, sign) pairs with distinct axes; a
    maximal flag is a strictly increasing chain of faces, one per dimension.
    """
    for signs in itertools.product((0, 1), repeat=d + 1):
        verts = tuple((i, signs[i]) for i in range(d + 1))
        for perm in itertools.permutations(verts):
            yield tuple(tuple(sorted(perm[:k + 1])) for k in range(d + 1))


def _antipode(face: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((i, 1 - s) for i, s in face))


def antipodal_quotient(d: int) -> FacetComplex:
    """Triangulated real projective d-space.

    The antipodal map of the cross-polytope sphere is simplicial on its
    barycentric subdivision and acts freely there, so identifying each
    face-vertex with its antipode triangulates RP^d.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    seen: set[tuple] = set()
    facets = []
    for flag in _cross_polytope_subdivision_flags(d):
        orbit_facet = tuple(sorted(min(face, _antipode(face))
                                   for face in flag))
        if orbit_facet not in seen:
            seen.add(orbit_facet)
            facets.append(orbit_facet)
    return FacetComplex.from_labeled(facets)


def product(K: FacetComplex, L: FacetComplex) -> FacetComplex:
    """Staircase triangulation of |K| x |L|.

    For each facet pair, the monotone lattice paths through the vertex grid
    give C(dim K + dim L, dim K) product facets.
    """
    p, q = K.dim, L.dim
    facets = []
    # a path is a shuffle: which of the p+q steps advance in K
    for step_mask in itertools.combinations(range(p + q), p):
        advance_k = set(step_mask)
        for fk in K.facets:
            for fl in L.facets:
                chain = [(fk[0], fl[0])]
                a = b = 0
                for step in range(p + q):
                    if step in advance_k:
                        a += 1
                    else:
                        b += 1
                    chain.append((fk[a], fl[b]))
                facets.append(tuple(chain))
    return FacetComplex.from_labeled(facets)


# ------------------------------------------------------------
# generator specs
# ------------------------------------------------------------

_FAMILIES = ("sphere", "rp", "circle", "product", "subdivide")


@dataclass(frozen=True)
class GeneratorSpec:
    """A parsed generator expression, e.g. product(sphere:3, circle:3)."""

    family: str
    param: int | None = None
    factors: tuple["GeneratorSpec", ...] = ()

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; "
                             f"expected one of {', '.join(_FAMILIES)}")
        if self.family in ("sphere", "rp"):
            if self.param is None or self.param < 1 or self.factors:
                raise ValueError(f"{self.family} takes one dimension >= 1")
        elif self.family == "circle":
            if self.param is None or self.param < 3 or self.factors:
                raise ValueError("circle takes one vertex count >= 3")
        elif self.family == "product":
            if self.param is not None or len(self.factors) != 2:
                raise ValueError("product takes exactly two sub-specs")
        elif self.family == "subdivide":
            if self.param is not None or len(self.factors) != 1:
                raise ValueError("subdivide takes exactly one sub-spec")

    def build(self) -> FacetComplex:
        if self.family == "sphere":
            return sphere(self.param)  # type: ignore[arg-type]
        if self.family == "rp":
            return antipodal_quotient(self.param)  # type: ignore[arg-type]
        if self.family == "circle":
            return circle(self.param)  # type: ignore[arg-type]
        if self.family == "product":
            return product(self.factors[0].build(), self.factors[1].build())
        return barycentric_subdivision(self.factors[0].build())

    def spec_string(self) -> str:
        if self.param is not None:
            return f"{self.family}:{self.param}"
        inner = ",".join(f.spec_string() for f in self.factors)
        return f"{self.family}({inner})"

    @classmethod
    def parse(cls, text: str) -> "GeneratorSpec":
        """Parse a single spec expression.

        Accepts NAME:INT, NAME(SPEC[,SPEC]) and bare NAME INT via
        parse_args.  Whitespace inside expressions is ignored.
        """
        spec, rest = cls._parse_expr(text.replace(" ", ""), 0)
        if rest != len(text.replace(" ", "")):
            raise ValueError(f"trailing junk in spec {text!r}")
        return spec

    @classmethod
    def _parse_expr(cls, s: str, i: int) -> tuple["GeneratorSpec", int]:
        j = i
        while j < len(s) and (s[j].isalnum() or s[j] == "_"):
            j += 1
        name = s[i:j]
        if not name:
            raise ValueError(f"expected a family name at {s[i:]!r}")
        if j < len(s) and s[j] == ":":
            k = j + 1
            while k < len(s) and (s[k].isdigit() or s[k] == "-"):
                k += 1
            try:
                value = int(s[j + 1:k])
            except ValueError:
                raise ValueError(f"bad integer parameter in {s!r}") from None
            return cls(family=name, param=value), k
        if j < len(s) and s[j] == "(":
            factors = []
            k = j + 1
            while True:
                sub, k = cls._parse_expr(s, k)
                factors.append(sub)
                if k >= len(s):
                    raise ValueError(f"unclosed parenthesis in {s!r}")
                if s[k] == ",":
                    k += 1
                    continue
                if s[k] == ")":
                    return cls(family=name, factors=tuple(factors)), k + 1
                raise ValueError(f"unexpected character {s[k]!r} in spec")
        raise ValueError(f"family {name!r} needs a parameter "
                         f"(NAME:INT) or sub-specs (NAME(...))")

    @classmethod
    def parse_args(cls, tokens: list[str]) -> "GeneratorSpec":
        """Parse CLI-style tokens: ['rp', '4'] or ['product', 'sphere:3',
        'circle:3'] or a single expression token."""
        if not tokens:
            raise ValueError("empty generator spec")
        if len(tokens) == 1:
            return cls.parse(tokens[0])
        head = tokens[0]
        if head in ("sphere", "rp", "circle") and len(tokens) == 2:
            try:
                return cls(family=head, param=int(tokens[1]))
            except ValueError as e:
                raise ValueError(str(e)) from None
        if head == "product" and len(tokens) == 3:
            return cls(family=head,
                       factors=(cls.parse(tokens[1]), cls.parse(tokens[2])))
        if head == "subdivide" and len(tokens) == 2:
            return cls(family=head, factors=(cls.parse(tokens[1]),))
        raise ValueError(f"cannot parse generator spec from {tokens!r}")


# ------------------------------------------------------------
# bundled fixtures
# ------------------------------------------------------------

FIXTURE_ENV = "COHOMOTOPY_FIXTURES"


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture facet file (name without extension ok)."""
    base = fixture_dir()
    p = base / name
    if p.suffix != ".facets":
        p = base / f"{name}.facets"
    if not p.exists():
        raise FileNotFoundError(
            f"no fixture {name!r} in {base} "
            f"(set ${FIXTURE_ENV} to override the fixture directory)")
    return p


def available_fixtures() -> list[str]:
    base = fixture_dir()
    if not base.is_dir():
        return []
    return sorted(p.stem for p in base.glob("*.facets"))


def load_fixture(name: str) -> FacetComplex:
    from .complexes import load_complex
    return load_complex(fixture_path(name))
