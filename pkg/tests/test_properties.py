"""Property-based tests for the exact linear algebra core."""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from cohomotopy.linalg import (
    IntEchelonLattice,
    PresentedGroup,
    SparseIntMatrix,
    group_from_presentation,
    image_lattice,
    smith_normal_form,
)

entries = st.integers(min_value=-9, max_value=9)


@st.composite
def int_matrices(draw, max_dim=5):
    nr = draw(st.integers(1, max_dim))
    nc = draw(st.integers(1, max_dim))
    rows = draw(st.lists(
        st.lists(entries, min_size=nc, max_size=nc),
        min_size=nr, max_size=nr))
    return rows


def from_rows(rows) -> SparseIntMatrix:
    nr, nc = len(rows), len(rows[0])
    return SparseIntMatrix.from_entries(
        nr, nc, [(r, c, rows[r][c])
                 for r in range(nr) for c in range(nc) if rows[r][c]])


def det(rows) -> int:
    """Exact determinant by fraction-free elimination."""
    n = len(rows)
    m = [list(r) for r in rows]
    sign, prev = 1, 1
    for i in range(n - 1):
        if m[i][i] == 0:
            for r in range(i + 1, n):
                if m[r][i]:
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // prev
            m[r][i] = 0
        prev = m[i][i]
    return sign * m[-1][-1]


# ------------------------------------------------------------
# Smith normal form
# ------------------------------------------------------------

@given(int_matrices())
def test_snf_diagonal_is_divisibility_chain(rows):
    diag = smith_normal_form(from_rows(rows)).diagonal()
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0


@given(int_matrices())
def test_snf_rank_counts_nonzero_diagonal(rows):
    dec = smith_normal_form(from_rows(rows))
    assert dec.rank() == sum(1 for d in dec.diagonal() if d)


@given(int_matrices(max_dim=4))
def test_snf_square_determinant_is_diagonal_product(rows):
    if len(rows) != len(rows[0]):
        rows = [r[:min(len(rows), len(rows[0]))]
                for r in rows[:min(len(rows), len(rows[0]))]]
    diag = smith_normal_form(from_rows(rows)).diagonal()
    assert math.prod(abs(d) for d in diag) == abs(det(rows))


@given(int_matrices(), st.randoms(use_true_random=False))
def test_snf_invariant_under_permutations(rows, rng):
    base = smith_normal_form(from_rows(rows)).diagonal()
    shuffled = [list(r) for r in rows]
    rng.shuffle(shuffled)
    cols = list(range(len(rows[0])))
    rng.shuffle(cols)
    permuted = [[r[c] for c in cols] for r in shuffled]
    assert smith_normal_form(from_rows(permuted)).diagonal() == base


# ------------------------------------------------------------
# presented groups
# ------------------------------------------------------------

@given(int_matrices(), st.randoms(use_true_random=False))
def test_presentation_invariant_under_relation_shuffle(rows, rng):
    g1 = group_from_presentation(from_rows(rows), with_generators=False)
    shuffled = [list(r) for r in rows]
    rng.shuffle(shuffled)
    g2 = group_from_presentation(from_rows(shuffled), with_generators=False)
    assert g1.same_type(g2)


@given(int_matrices())
def test_presentation_order_is_torsion_product(rows):
    g = group_from_presentation(from_rows(rows), with_generators=False)
    if g.free_rank:
        assert g.order() is None
    else:
        assert g.order() == math.prod(g.torsion)


@given(st.lists(st.integers(2, 6), max_size=4))
def test_diagonal_presentation_recovers_cyclic_factors(factors):
    n = len(factors)
    if n == 0:
        return
    M = SparseIntMatrix.from_entries(
        n, n, [(i, i, factors[i]) for i in range(n)])
    g = group_from_presentation(M, with_generators=False)
    assert g.free_rank == 0
    assert math.prod(g.torsion) == math.prod(factors)


# ------------------------------------------------------------
# integer echelon lattices
# ------------------------------------------------------------

@given(int_matrices())
def test_image_lattice_kernel_maps_to_zero(rows):
    M = from_rows(rows)
    lat = image_lattice(M, track_preimages=True)
    cols = M.columns()
    for combo in lat.kernel:
        acc: dict = {}
        for j, c in combo.items():
            for r, v in cols[j].items():
                acc[r] = acc.get(r, 0) + c * v
        assert all(v == 0 for v in acc.values())


@given(int_matrices())
def test_image_lattice_expresses_its_own_columns(rows):
    M = from_rows(rows)
    lat = image_lattice(M, track_preimages=True)
    cols = M.columns()
    for j, col in enumerate(cols):
        combo = lat.express(col)
        assert combo is not None
        acc: dict = {}
        for i, c in combo.items():
            for r, v in cols[i].items():
                acc[r] = acc.get(r, 0) + c * v
        assert {r: v for r, v in acc.items() if v} == col


@given(int_matrices(max_dim=4), st.lists(entries, min_size=4, max_size=4))
def test_lattice_reduce_residual_is_stable(rows, vec):
    lat = IntEchelonLattice(len(rows[0]))
    for r in rows:
        lat.insert({i: v for i, v in enumerate(r) if v})
    target = {i: v for i, v in enumerate(vec[:len(rows[0])]) if v}
    residual, _ = lat.reduce(target)
    again, _ = lat.reduce(residual)
    assert again == residual


# ------------------------------------------------------------
# rendered form
# ------------------------------------------------------------

@given(st.integers(0, 3), st.lists(st.integers(2, 9), max_size=3))
def test_rendered_group_mentions_every_factor(free, torsion):
    torsion = sorted(torsion)
    chain = []
    for d in torsion:
        chain.append(chain[-1] * d if chain else d)
    g = PresentedGroup(free, tuple(chain))
    text = g.rendered()
    if free == 0 and not chain:
        assert text == "0"
    for d in chain:
        assert f"Z_{d}" in text
