"""Classification and assembly of the degree-one framed bordism group F1.

For a closed connected triangulated manifold X of dimension d >= 4 the
group F1(X), isomorphic to the cohomotopy group pi^{d-1}(X), is built from
twisted first homology plus one Z/2 extension datum:

  * type I: the degree-2 obstruction class w1^2 + w2 pairs nontrivially
    with the mod-2 reduction of some twisted 2-cycle; then F1 is
    isomorphic to H_1(X; o_X).
  * type II: the pairing vanishes on all twisted 2-cycles; then F1 is an
    extension of H_1(X; o_X) by Z/2.  It splits when the obstruction
    class is zero (IIa); otherwise (IIb) the extension is pinned down by
    a functional on the order-2 elements of H_1(X; o_X), evaluated
    through twisted-Bockstein preimages.

An independent cross-check recomputes the same dichotomy from the other
end: the cokernel of Sq^2 composed with mod-2 reduction out of integral
(d-2)-cohomology, which must be trivial exactly in type I, plus duality
and cardinality constraints tying H^{d-1}(X; Z) to the computed group.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional

from . import linalg
from .chains import (
    OrientationSystem,
    boundary_matrix,
    boundary_mod2,
    chain_to_bits,
    cohomology_with_generators,
    homology_with_generators,
    pair_mod2,
    twisted_bockstein_chain,
    twisted_fundamental_class,
)
from .complexes import FacetComplex, ValidationReport, \
    validate_closed_pseudomanifold
from .linalg import (
    AbelianQuotient,
    IntEchelonLattice,
    PresentedGroup,
    SparseIntMatrix,
    group_from_presentation,
    image_lattice,
    kernel_lattice,
    smith_normal_form,
)
from .steenrod import (
    CocycleClass,
    Mod2Context,
    PinMinusObstruction,
    pin_minus_obstruction,
    sq_bits,
    stiefel_whitney,
)


class InvalidComplexError(ValueError):
    """Input fails closed-pseudomanifold validation; carries the report."""

    def __init__(self, validation: ValidationReport):
        super().__init__("; ".join(validation.messages) or
                         "complex failed validation")
        self.validation = validation


def _context(K) -> Mod2Context:
    return K if isinstance(K, Mod2Context) else Mod2Context(K)


# ------------------------------------------------------------
# orientation data
# ------------------------------------------------------------

def orientation_system(K) -> OrientationSystem:
    """Coefficient twist by the orientation character.

    The twist cocycle is the computed w1 representative, normalized to
    the zero cocycle when w1 is a coboundary (orientable case).
    """
    ctx = _context(K)
    w1, _ = stiefel_whitney(ctx)
    if ctx.basis(1).is_coboundary(w1.bits):
        return OrientationSystem.trivial(ctx.complex)
    return OrientationSystem(ctx.complex, w1.bits)


# ------------------------------------------------------------
# type classification
# ------------------------------------------------------------

@dataclass(frozen=True)
class TypeClassification:
    """Trichotomy I / IIa / IIb with a per-branch certificate.

    type I:  twisted_cycle_witness is an integral twisted 2-cycle whose
             mod-2 reduction pairs to 1 with the obstruction class.
    type IIa: coboundary_witness is a 1-cochain whose coboundary is the
             obstruction representative (so the class vanishes).
    type IIb: dual_cycle_witness is a mod-2 2-cycle pairing to 1 with the
             obstruction representative (so the class is nonzero), while
             all twisted cycles pair to 0.
    """

    kind: str
    obstruction: CocycleClass
    twisted_cycle_witness: Optional[dict[int, int]] = None
    coboundary_witness: Optional[int] = None
    dual_cycle_witness: Optional[int] = None

    def __post_init__(self):
        expected = {
            "I": self.twisted_cycle_witness is not None
                 and self.coboundary_witness is None
                 and self.dual_cycle_witness is None,
            "IIa": self.twisted_cycle_witness is None
                 and self.coboundary_witness is not None
                 and self.dual_cycle_witness is None,
            "IIb": self.twisted_cycle_witness is None
                 and self.coboundary_witness is None
                 and self.dual_cycle_witness is not None,
        }
        if self.kind not in expected:
            raise ValueError(f"unknown classification kind {self.kind!r}")
        if not expected[self.kind]:
            raise ValueError(f"witness inconsistent with type {self.kind}")

    @property
    def is_type_one(self) -> bool:
        return self.kind == "I"


def classify_type(K, twist: Optional[OrientationSystem] = None,
                  pin: Optional[PinMinusObstruction] = None,
                  cycles: Optional[list[dict[int, int]]] = None
                  ) -> TypeClassification:
    """Decide type I / IIa / IIb from the obstruction pairing.

    Evaluates <w1^2 + w2, .> on the mod-2 reduction of an integral basis
    of twisted 2-cycles; boundaries pair to zero, so hitting 1 anywhere
    certifies type I on the level of twisted homology classes.  A
    precomputed twisted 2-cycle basis may be passed in.
    """
    ctx = _context(K)
    Kc = ctx.complex
    if pin is None:
        pin = pin_minus_obstruction(ctx)
    if twist is None:
        twist = orientation_system(ctx)
    if cycles is None:
        cycles = kernel_lattice(boundary_matrix(Kc, 2, twist))
    rep = pin.representative.bits
    for z in cycles:
        if pair_mod2(rep, chain_to_bits(z)):
            return TypeClassification("I", pin.representative,
                                      twisted_cycle_witness=dict(z))
    if pin.is_zero:
        return TypeClassification("IIa", pin.representative,
                                  coboundary_witness=pin.witness)
    for c in boundary_mod2(Kc, 2).kernel_basis():
        if pair_mod2(rep, c):
            return TypeClassification("IIb", pin.representative,
                                      dual_cycle_witness=c)
    raise AssertionError(
        "a class that is not a coboundary must pair with some mod-2 cycle")


# ------------------------------------------------------------
# the extension functional
# ------------------------------------------------------------

@dataclass(frozen=True)
class EpsilonFunctional:
    """Z/2 values on the order-2 elements of the twisted H_1 torsion.

    Entry i belongs to the invariant factor d_i: for even d_i it is the
    value on the order-2 element (d_i/2) * x_i, for odd d_i there is no
    order-2 element and the entry is None.  preimage_cycles records the
    mod-2 2-cycle used for each evaluated entry.
    """

    torsion_orders: tuple[int, ...]
    values: tuple[Optional[int], ...]
    preimage_cycles: tuple[Optional[int], ...]

    def __post_init__(self):
        if not (len(self.torsion_orders) == len(self.values)
                == len(self.preimage_cycles)):
            raise ValueError("misaligned functional data")
        for d, v in zip(self.torsion_orders, self.values):
            if (v is None) != (d % 2 == 1):
                raise ValueError("values must exist exactly at even factors")
            if v not in (None, 0, 1):
                raise ValueError(f"functional value {v!r} is not a bit")

    def is_zero(self) -> bool:
        return all(not v for v in self.values)


def epsilon_functional(K, h1: Optional[AbelianQuotient] = None,
                       twist: Optional[OrientationSystem] = None,
                       pin: Optional[PinMinusObstruction] = None,
                       image: Optional[IntEchelonLattice] = None
                       ) -> EpsilonFunctional:
    """Evaluate the extension functional on twisted H_1 torsion.

    The order-2 element of factor i is (d_i/2) x_i.  Writing d_i x_i as a
    twisted boundary of an integer 2-chain W and reducing W mod 2 yields a
    mod-2 2-cycle whose twisted Bockstein class is exactly that element;
    the functional is the obstruction pairing against this cycle.  The
    value does not depend on the choice of W: two choices differ by an
    integral twisted 2-cycle, whose reduction has trivial Bockstein class
    and pairs to zero with the obstruction in type II.

    `image` may carry a preimage-tracked column echelon of the twisted
    degree-2 boundary matrix to reuse across calls.
    """
    ctx = _context(K)
    Kc = ctx.complex
    if pin is None:
        pin = pin_minus_obstruction(ctx)
    if twist is None:
        twist = orientation_system(ctx)
    if h1 is None:
        h1 = homology_with_generators(Kc, 1, twist)
    orders = h1.group.torsion
    even = [i for i, d in enumerate(orders) if d % 2 == 0]
    values: list[Optional[int]] = [None] * len(orders)
    preimages: list[Optional[int]] = [None] * len(orders)
    if not even:
        return EpsilonFunctional(orders, tuple(values), tuple(preimages))

    bmat = boundary_matrix(Kc, 2, twist)
    if image is None:
        image = image_lattice(bmat, track_preimages=True)
    gens = h1.group.generators
    assert gens is not None, "functional needs generator representatives"
    rep = pin.representative.bits
    for i in even:
        d = orders[i]
        target = {j: d * v for j, v in enumerate(gens[i]) if v}
        combo = image.express(target)
        if combo is None:
            raise RuntimeError(
                "no twisted-Bockstein preimage for an order-2 class; "
                "the input is not a closed manifold")
        cyc = 0
        for j, v in combo.items():
            if v & 1:
                cyc |= 1 << j
        # an even W would force the order-2 element to vanish
        assert cyc, "order-2 class has no nonzero mod-2 preimage"
        val = pair_mod2(rep, cyc)
        if linalg.VERIFY:
            chain = twisted_bockstein_chain(Kc, twist, 2, cyc, matrix=bmat)
            tors, free = h1.class_coordinates(chain)
            want = tuple(d // 2 if k == i else 0
                         for k, d in enumerate(orders))
            assert tors == want and not any(free), \
                "preimage cycle has the wrong Bockstein class"
            if image.kernel:
                # a second preimage differs by an integral cycle reduction
                alt = cyc ^ chain_to_bits(image.kernel[0])
                assert pair_mod2(rep, alt) == val, \
                    "functional value depends on the Bockstein preimage"
        values[i] = val
        preimages[i] = cyc
    return EpsilonFunctional(orders, tuple(values), tuple(preimages))


def assemble_extension(H: PresentedGroup,
                       eps: EpsilonFunctional) -> PresentedGroup:
    """The group extending H by a central order-2 element u.

    Presented by the generators x_1..x_m of H plus u, with relations
    2u = 0 and d_i x_i = eps_i u (eps_i = 0 at odd factors).  With eps
    identically zero this is H + Z/2.
    """
    if eps.torsion_orders != H.torsion:
        raise ValueError("functional domain does not match the group")
    t = len(H.torsion)
    g = t + H.free_rank + 1
    u = g - 1
    entries = [(0, u, 2)]
    for i, d in enumerate(H.torsion):
        entries.append((i + 1, i, d))
        if d % 2 == 0:
            v = eps.values[i]
            if v is None:
                raise ValueError("functional undefined on an even factor")
            if v:
                entries.append((i + 1, u, -1))
    M = SparseIntMatrix.from_entries(t + 1, g, entries)
    return group_from_presentation(M, with_generators=False)


# ------------------------------------------------------------
# report assembly
# ------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    """One named cross-check: passed is None when skipped."""

    name: str
    passed: Optional[bool]
    detail: str

    @property
    def failed(self) -> bool:
        return self.passed is False


@dataclass(frozen=True)
class CohomotopyReport:
    """Everything the pipeline established about one input complex."""

    dim: int
    f_vector: tuple[int, ...]
    validation: ValidationReport
    orientable: bool
    homology: tuple[PresentedGroup, ...]
    cohomology: tuple[PresentedGroup, ...]
    twisted_homology: tuple[PresentedGroup, ...]
    w1: CocycleClass
    w2: CocycleClass
    w1_coordinates: tuple[int, ...]
    w2_coordinates: tuple[int, ...]
    classification: TypeClassification
    h1_twisted: PresentedGroup
    epsilon: Optional[EpsilonFunctional]
    f1: PresentedGroup
    crosschecks: tuple[CheckResult, ...]
    timings: tuple[tuple[str, float], ...]

    def all_checks_pass(self) -> bool:
        return not any(c.failed for c in self.crosschecks)


class _Stages:
    def __init__(self):
        self.entries: list[tuple[str, float]] = []

    @contextmanager
    def stage(self, name: str):
        t0 = time.perf_counter()
        yield
        self.entries.append((name, time.perf_counter() - t0))


def _group_tables(K: FacetComplex, twist: Optional[OrientationSystem],
                  kmax: int):
    """Homology groups per degree from one Smith pass per boundary map."""
    d = K.dim
    decs = {k: smith_normal_form(boundary_matrix(K, k, twist),
                                 need_u=False, need_v=False)
            for k in range(1, d + 1)}

    def rank(k: int) -> int:
        return decs[k].rank() if 1 <= k <= d else 0

    groups = []
    for k in range(kmax + 1):
        free = len(K.skeleton(k)) - rank(k) - rank(k + 1)
        tors = tuple(decs[k + 1].invariant_factors()) if k + 1 <= d else ()
        groups.append(PresentedGroup(free, tors))
    return tuple(groups), decs


def compute_F1(K: FacetComplex, *, threads: int = 1,
               skip_crosscheck: bool = False,
               max_degree: Optional[int] = None) -> CohomotopyReport:
    """Run the full pipeline on a validated closed manifold complex."""
    stages = _Stages()
    with stages.stage("validate"):
        validation = validate_closed_pseudomanifold(K)
        if not validation.is_valid:
            raise InvalidComplexError(validation)
        if K.dim < 4:
            raise InvalidComplexError(ValidationReport(
                dim=K.dim, n_vertices=K.n_vertices, n_facets=len(K.facets),
                ridge_ok=validation.ridge_ok, connected=validation.connected,
                n_components=validation.n_components,
                bad_ridges=validation.bad_ridges,
                messages=validation.messages + [
                    f"pipeline needs dimension >= 4, got {K.dim}"]))
    ctx = Mod2Context(K)
    d = K.dim
    with stages.stage("characteristic_classes"):
        w1, w2 = stiefel_whitney(ctx)
        pin = pin_minus_obstruction(ctx)
        w1_coords = ctx.basis(1).class_coordinates(w1.bits)
        w2_coords = ctx.basis(2).class_coordinates(w2.bits)
    with stages.stage("orientation"):
        twist = orientation_system(ctx)
        # existence of the twisted fundamental class certifies the twist
        twisted_fundamental_class(K, twist)
    with stages.stage("twisted_h1"):
        h1 = homology_with_generators(K, 1, twist)
    with stages.stage("classify"):
        # one tracked echelon serves both the cycle basis and the
        # Bockstein-preimage solves of the extension stage
        lat = image_lattice(boundary_matrix(K, 2, twist),
                            track_preimages=True)
        cls = classify_type(ctx, twist=twist, pin=pin, cycles=lat.kernel)
    with stages.stage("extension"):
        if cls.is_type_one:
            eps = None
            f1 = PresentedGroup(h1.group.free_rank, h1.group.torsion)
        else:
            eps = epsilon_functional(ctx, h1=h1, twist=twist, pin=pin,
                                     image=lat)
            f1 = assemble_extension(
                PresentedGroup(h1.group.free_rank, h1.group.torsion), eps)
    with stages.stage("tables"):
        kmax = d if max_degree is None else max(0, min(d, max_degree))
        homology, plain_decs = _group_tables(K, None, kmax)
        twisted_homology, _ = _group_tables(K, twist, kmax)
        cohomology = []
        for k in range(kmax + 1):
            tors = tuple(plain_decs[k].invariant_factors()) if k >= 1 else ()
            cohomology.append(PresentedGroup(homology[k].free_rank, tors))
    with stages.stage("crosschecks"):
        checks = _structural_checks(cls, h1.group, f1, eps)
        if skip_crosscheck:
            checks.append(CheckResult(
                "steenrod_cokernel", None, "skipped on request"))
        else:
            checks.extend(_steenrod_checks(ctx, cls, h1.group, f1, threads,
                                           decs=plain_decs))
    return CohomotopyReport(
        dim=d,
        f_vector=K.f_vector(),
        validation=validation,
        orientable=twist.is_trivial(),
        homology=homology,
        cohomology=tuple(cohomology),
        twisted_homology=twisted_homology,
        w1=w1,
        w2=w2,
        w1_coordinates=w1_coords,
        w2_coordinates=w2_coords,
        classification=cls,
        h1_twisted=h1.group,
        epsilon=eps,
        f1=f1,
        crosschecks=tuple(checks),
        timings=tuple(stages.entries),
    )


# ------------------------------------------------------------
# cross-checks
# ------------------------------------------------------------

def _structural_checks(cls: TypeClassification, h1: PresentedGroup,
                       f1: PresentedGroup,
                       eps: Optional[EpsilonFunctional]) -> list[CheckResult]:
    checks = []
    ok = f1.free_rank == h1.free_rank
    detail = f"free ranks {f1.free_rank} vs {h1.free_rank}"
    fo, ho = f1.order(), h1.order()
    if ok and (fo is None) != (ho is None):
        ok = False
        detail += "; one side finite, the other not"
    elif ok and fo is not None and ho is not None:
        factor = 2 if cls.kind != "I" else 1
        ok = fo == factor * ho
        detail += f"; orders {fo} = {factor} * {ho}" if ok else \
            f"; orders {fo} vs {factor} * {ho}"
    checks.append(CheckResult("cardinality_law", ok, detail))

    if cls.is_type_one:
        checks.append(CheckResult(
            "extension_quotient", True,
            "type I: F1 equals twisted H1 by construction"))
    else:
        assert eps is not None
        t = len(h1.torsion)
        g = t + h1.free_rank + 1
        entries = [(0, g - 1, 2), (1, g - 1, 1)]
        for i, dd in enumerate(h1.torsion):
            entries.append((i + 2, i, dd))
            if dd % 2 == 0 and eps.values[i]:
                entries.append((i + 2, g - 1, -1))
        quotient = group_from_presentation(
            SparseIntMatrix.from_entries(t + 2, g, entries),
            with_generators=False)
        ok = quotient.same_type(h1)
        checks.append(CheckResult(
            "extension_quotient", ok,
            f"F1 modulo the central generator is {quotient}, "
            f"twisted H1 is {h1}"))
    return checks


def _steenrod_checks(ctx: Mod2Context, cls: TypeClassification,
                     h1: PresentedGroup, f1: PresentedGroup,
                     threads: int, decs: Optional[dict] = None
                     ) -> list[CheckResult]:
    K = ctx.complex
    d = K.dim
    checks = []

    # cokernel of Sq^2 o reduction : H^{d-2}(Z) -> H^d(Z/2)
    hd2 = cohomology_with_generators(K, d - 2)
    hits = 0
    gens = hd2.group.generators or ()
    for vec in gens:
        bits = 0
        for i, v in enumerate(vec):
            if v & 1:
                bits |= 1 << i
        # reductions of integral cocycles are mod-2 cocycles
        CocycleClass(K, d - 2, bits)
        if sq_bits(K, 2, d - 2, bits, threads).bit_count() & 1:
            hits += 1
    q_trivial = hits > 0
    q_order = 1 if q_trivial else 2
    ok = q_trivial == cls.is_type_one
    checks.append(CheckResult(
        "type_vs_steenrod_cokernel", ok,
        f"cokernel order {q_order} ({hits} of {len(gens)} integral "
        f"generators square onto the top class), type {cls.kind}"))

    # H^{d-1}(Z) must carry the invariant factors of twisted H_1
    nk = len(K.skeleton(d - 1))
    if decs is None:
        decs = {k: smith_normal_form(boundary_matrix(K, k),
                                     need_u=False, need_v=False)
                for k in (d - 1, d)}
    hn = PresentedGroup(nk - decs[d].rank() - decs[d - 1].rank(),
                        tuple(decs[d - 1].invariant_factors()))
    ok = hn.same_type(h1)
    checks.append(CheckResult(
        "degree_n_cohomology_duality", ok,
        f"H^{d - 1}(Z) = {hn}, twisted H_1 = {h1}"))

    fo, ho = f1.order(), hn.order()
    if fo is None or ho is None:
        checks.append(CheckResult(
            "cardinality_product", True,
            "infinite groups: order comparison void"))
    else:
        ok = fo == q_order * ho
        checks.append(CheckResult(
            "cardinality_product", ok,
            f"|F1| = {fo}, cokernel order {q_order}, |H^{d - 1}| = {ho}"))
    return checks


def steenrod_ses_crosscheck(K, *, threads: int = 1) -> list[CheckResult]:
    """Standalone entry for the Steenrod-based consistency gate."""
    ctx = _context(K)
    Kc = ctx.complex
    pin = pin_minus_obstruction(ctx)
    twist = orientation_system(ctx)
    h1 = homology_with_generators(Kc, 1, twist)
    cls = classify_type(ctx, twist=twist, pin=pin)
    if cls.is_type_one:
        f1 = PresentedGroup(h1.group.free_rank, h1.group.torsion)
    else:
        eps = epsilon_functional(ctx, h1=h1, twist=twist, pin=pin)
        f1 = assemble_extension(
            PresentedGroup(h1.group.free_rank, h1.group.torsion), eps)
    return _steenrod_checks(ctx, cls, h1.group, f1, threads)
