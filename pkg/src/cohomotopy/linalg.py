"""Exact linear algebra over Z and GF(2).

Everything here is arbitrary-precision: integer matrices are sparse dicts of
Python ints, GF(2) vectors are int bitsets.  No floating point anywhere.

The three workhorses:

* :func:`smith_normal_form` -- Smith decomposition U*M*V = D with unimodular
  transforms, deterministic pivoting.
* :class:`Mod2Matrix` -- GF(2) elimination on packed bit rows.
* :class:`IntEchelonLattice` / :func:`quotient_presentation` -- column-echelon
  lattice bases supporting exact membership tests and finitely generated
  abelian quotient groups with generator representatives.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

# Set by the test suite: when True every smith_normal_form call re-multiplies
# U*M*V and compares against D exactly.
VERIFY = False


# ============================================================
# sparse integer matrices
# ============================================================

class SparseIntMatrix:
    """Sparse integer matrix stored as one dict {col: value} per row."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int,
                 rows: Optional[list[dict[int, int]]] = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix dimensions")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [dict() for _ in range(nrows)]

    @classmethod
    def from_entries(cls, nrows: int, ncols: int,
                     entries: Iterable[tuple[int, int, int]]) -> "SparseIntMatrix":
        m = cls(nrows, ncols)
        for r, c, v in entries:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry ({r}, {c}) out of bounds")
            if v:
                m.rows[r][c] = m.rows[r].get(c, 0) + v
                if m.rows[r][c] == 0:
                    del m.rows[r][c]
        return m

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]],
                   ncols: Optional[int] = None) -> "SparseIntMatrix":
        nrows = len(dense)
        if ncols is None:
            ncols = len(dense[0]) if nrows else 0
        m = cls(nrows, ncols)
        for r, row in enumerate(dense):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            for c, v in enumerate(row):
                if v:
                    m.rows[r][c] = v
        return m

    @classmethod
    def identity(cls, n: int) -> "SparseIntMatrix":
        m = cls(n, n)
        for i in range(n):
            m.rows[i][i] = 1
        return m

    def entry(self, r: int, c: int) -> int:
        return self.rows[r].get(c, 0)

    def entries(self) -> Iterator[tuple[int, int, int]]:
        for r, row in enumerate(self.rows):
            for c in sorted(row):
                yield r, c, row[c]

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows)

    def copy(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.nrows, self.ncols,
                               [dict(row) for row in self.rows])

    def transpose(self) -> "SparseIntMatrix":
        t = SparseIntMatrix(self.ncols, self.nrows)
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                t.rows[c][r] = v
        return t

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matmul")
        out = SparseIntMatrix(self.nrows, other.ncols)
        for r, row in enumerate(self.rows):
            acc: dict[int, int] = {}
            for k, v in row.items():
                for c, w in other.rows[k].items():
                    acc[c] = acc.get(c, 0) + v * w
            out.rows[r] = {c: v for c, v in acc.items() if v}
        return out

    def column(self, c: int) -> dict[int, int]:
        return {r: row[c] for r, row in enumerate(self.rows) if c in row}

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [dict() for _ in range(self.ncols)]
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def to_dense(self) -> list[list[int]]:
        return [[self.rows[r].get(c, 0) for c in range(self.ncols)]
                for r in range(self.nrows)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and all(
            a == b for a, b in zip(self.rows, other.rows))

    def __repr__(self) -> str:
        return f"SparseIntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


# ============================================================
# Smith normal form
# ============================================================

@dataclass
class SmithDecomposition:
    """U * M * V = D with U, V unimodular and D diagonal, d_i | d_{i+1} >= 0."""

    U: Optional[SparseIntMatrix]
    D: SparseIntMatrix
    V: Optional[SparseIntMatrix]
    u_inv: Optional[SparseIntMatrix] = None
    v_inv: Optional[SparseIntMatrix] = None

    def diagonal(self) -> list[int]:
        n = min(self.D.nrows, self.D.ncols)
        return [self.D.entry(i, i) for i in range(n)]

    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)

    def invariant_factors(self) -> list[int]:
        """Nontrivial invariant factors (those >= 2)."""
        return [d for d in self.diagonal() if d > 1]


class _SmithEngine:
    """Sparse Smith reduction with optional transform tracking.

    Pivot rule: smallest |value|, then smallest Markowitz fill estimate,
    then lowest (row, col).  Selection runs on a lazy heap; stale entries are
    re-keyed on pop, which keeps the whole procedure deterministic.
    """

    def __init__(self, M: SparseIntMatrix, need_u: bool, need_v: bool,
                 need_uinv: bool, need_vinv: bool):
        self.nrows = M.nrows
        self.ncols = M.ncols
        self.rows: list[dict[int, int]] = [dict(row) for row in M.rows]
        self.colrows: list[set[int]] = [set() for _ in range(self.ncols)]
        for r, row in enumerate(self.rows):
            for c in row:
                self.colrows[c].add(r)
        ident_rows = lambda n: [{i: 1} for i in range(n)]
        self.u = ident_rows(self.nrows) if need_u else None        # row-major
        self.uinv = ident_rows(self.nrows) if need_uinv else None  # col-major
        self.v = ident_rows(self.ncols) if need_v else None        # col-major
        self.vinv = ident_rows(self.ncols) if need_vinv else None  # row-major
        self.heap: list[tuple[int, int, int, int]] = []
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                self.heap.append((abs(v), self._cost(r, c), r, c))
        heapq.heapify(self.heap)
        self.done_rows: set[int] = set()
        self.done_cols: set[int] = set()
        self.pivots: list[tuple[int, int]] = []

    # ---- elementary operations (matrix + transforms in lockstep) ----

    def _cost(self, r: int, c: int) -> int:
        return (len(self.rows[r]) - 1) * (len(self.colrows[c]) - 1)

    def _set(self, r: int, c: int, v: int) -> None:
        row = self.rows[r]
        if v:
            if c not in row:
                self.colrows[c].add(r)
            row[c] = v
        elif c in row:
            del row[c]
            self.colrows[c].discard(r)

    def row_op(self, a: int, b: int, q: int) -> None:
        """row_a += q * row_b"""
        if q == 0:
            return
        rows = self.rows
        ra = rows[a]
        for c, v in rows[b].items():
            self._set(a, c, ra.get(c, 0) + q * v)
        if a not in self.done_rows:
            for c in rows[a]:
                heapq.heappush(self.heap,
                               (abs(rows[a][c]), self._cost(a, c), a, c))
        if self.u is not None:
            ua = self.u[a]
            for c, v in self.u[b].items():
                nv = ua.get(c, 0) + q * v
                if nv:
                    ua[c] = nv
                elif c in ua:
                    del ua[c]
        if self.uinv is not None:
            colb = self.uinv[b]
            for rr, v in self.uinv[a].items():
                nv = colb.get(rr, 0) - q * v
                if nv:
                    colb[rr] = nv
                elif rr in colb:
                    del colb[rr]

    def _col_op(self, a: int, b: int, q: int) -> None:
        """col_a += q * col_b"""
        if q == 0:
            return
        rows = self.rows
        for r in list(self.colrows[b]):
            v = rows[r].get(a, 0) + q * rows[r][b]
            self._set(r, a, v)
            if r not in self.done_rows and v:
                heapq.heappush(self.heap, (abs(v), self._cost(r, a), r, a))
        if self.v is not None:
            cola = self.v[a]
            for rr, v in self.v[b].items():
                nv = cola.get(rr, 0) + q * v
                if nv:
                    cola[rr] = nv
                elif rr in cola:
                    del cola[rr]
        if self.vinv is not None:
            rowb = self.vinv[b]
            for cc, v in self.vinv[a].items():
                nv = rowb.get(cc, 0) - q * v
                if nv:
                    rowb[cc] = nv
                elif cc in rowb:
                    del rowb[cc]

    def swap_rows(self, a: int, b: int) -> None:
        if a == b:
            return
        cols_a = set(self.rows[a])
        cols_b = set(self.rows[b])
        self.rows[a], self.rows[b] = self.rows[b], self.rows[a]
        for c in cols_a | cols_b:
            self.colrows[c].discard(a)
            self.colrows[c].discard(b)
            if c in self.rows[a]:
                self.colrows[c].add(a)
            if c in self.rows[b]:
                self.colrows[c].add(b)
        if self.u is not None:
            self.u[a], self.u[b] = self.u[b], self.u[a]
        if self.uinv is not None:
            self.uinv[a], self.uinv[b] = self.uinv[b], self.uinv[a]

    def swap_cols(self, a: int, b: int) -> None:
        if a == b:
            return
        for r in list(self.colrows[a] | self.colrows[b]):
            row = self.rows[r]
            va, vb = row.get(a, 0), row.get(b, 0)
            self._set(r, a, vb)
            self._set(r, b, va)
        if self.v is not None:
            self.v[a], self.v[b] = self.v[b], self.v[a]
        if self.vinv is not None:
            self.vinv[a], self.vinv[b] = self.vinv[b], self.vinv[a]

    def negate_row(self, a: int) -> None:
        row = self.rows[a]
        for c in row:
            row[c] = -row[c]
        if self.u is not None:
            self.u[a] = {c: -v for c, v in self.u[a].items()}
        if self.uinv is not None:
            self.uinv[a] = {r: -v for r, v in self.uinv[a].items()}

    # ---- pivoting ----

    def _select_pivot(self) -> Optional[tuple[int, int]]:
        while self.heap:
            absv, cost, r, c = heapq.heappop(self.heap)
            if r in self.done_rows or c in self.done_cols:
                continue
            v = self.rows[r].get(c, 0)
            if v == 0:
                continue
            key = (abs(v), self._cost(r, c))
            if key != (absv, cost):
                heapq.heappush(self.heap, (key[0], key[1], r, c))
                continue
            return r, c
        return None

    @staticmethod
    def _balanced_divmod(a: int, v: int) -> tuple[int, int]:
        """q, rem with a = q*v + rem and |rem| <= |v| / 2."""
        q, rem = divmod(a, v)
        if rem and 2 * abs(rem) > abs(v):
            q += 1
            rem -= v
        return q, rem

    def _isolate(self, r: int, c: int) -> tuple[int, int]:
        """Clear row r and column c except the pivot; pivot may migrate."""
        while True:
            v = self.rows[r][c]
            moved = False
            for r2 in sorted(self.colrows[c]):
                if r2 == r:
                    continue
                q, rem = self._balanced_divmod(self.rows[r2][c], v)
                self.row_op(r2, r, -q)
                if rem:
                    # strictly smaller entry becomes the new pivot
                    r, c = r2, c
                    moved = True
                    break
            if moved:
                continue
            v = self.rows[r][c]
            for c2 in sorted(self.rows[r]):
                if c2 == c:
                    continue
                q, rem = self._balanced_divmod(self.rows[r][c2], v)
                self._col_op(c2, c, -q)
                if rem:
                    r, c = r, c2
                    moved = True
                    break
            if moved:
                continue
            if len(self.rows[r]) == 1 and len(self.colrows[c]) == 1:
                return r, c

    def run(self) -> None:
        while True:
            pos = self._select_pivot()
            if pos is None:
                break
            r, c = self._isolate(*pos)
            self.pivots.append((r, c))
            self.done_rows.add(r)
            self.done_cols.add(c)

    # ---- postprocessing: permute pivots onto the diagonal, fix signs,
    #      enforce the divisibility chain ----

    def finalize(self) -> None:
        for k, (r, c) in enumerate(self.pivots):
            if r != k:
                self.swap_rows(k, r)
                for j in range(k + 1, len(self.pivots)):
                    pr, pc = self.pivots[j]
                    if pr == k:
                        self.pivots[j] = (r, pc)
            if c != k:
                self.swap_cols(k, c)
                for j in range(k + 1, len(self.pivots)):
                    pr, pc = self.pivots[j]
                    if pc == k:
                        self.pivots[j] = (pr, c)
            self.pivots[k] = (k, k)
            if self.rows[k].get(k, 0) < 0:
                self.negate_row(k)
        n = len(self.pivots)
        # bubble divisibility: after each merge d_k <- gcd, d_{k+1} <- lcm
        changed = True
        while changed:
            changed = False
            for k in range(n - 1):
                a = self.rows[k][k]
                b = self.rows[k + 1][k + 1]
                if b % a == 0:
                    continue
                changed = True
                self._col_op(k, k + 1, 1)
                self.done_rows.discard(k)
                self.done_rows.discard(k + 1)
                self.done_cols.discard(k)
                self.done_cols.discard(k + 1)
                # all fill stays inside the 2x2 block {k, k+1}
                r, c = self._isolate(k, k)
                if r != k:
                    self.swap_rows(k, r)
                if c != k:
                    self.swap_cols(k, c)
                # determinant is preserved up to sign, so the complementary
                # entry (the lcm) now sits at (k+1, k+1)
                if self.rows[k].get(k, 0) < 0:
                    self.negate_row(k)
                if self.rows[k + 1].get(k + 1, 0) < 0:
                    self.negate_row(k + 1)
                if len(self.rows[k + 1]) != 1 or k + 1 not in self.rows[k + 1]:
                    raise AssertionError("divisibility merge lost diagonal form")
                self.done_rows.update((k, k + 1))
                self.done_cols.update((k, k + 1))

    def result(self, M: SparseIntMatrix) -> SmithDecomposition:
        D = SparseIntMatrix(self.nrows, self.ncols)
        for r, row in enumerate(self.rows):
            for c, v in row.items():
                if v:
                    D.rows[r][c] = v
        U = uinv = V = vinv = None
        if self.u is not None:
            U = SparseIntMatrix(self.nrows, self.nrows, [dict(r) for r in self.u])
        if self.uinv is not None:
            uinv = SparseIntMatrix(self.nrows, self.nrows)
            for c, col in enumerate(self.uinv):
                for r, v in col.items():
                    uinv.rows[r][c] = v
        if self.v is not None:
            V = SparseIntMatrix(self.ncols, self.ncols)
            for c, col in enumerate(self.v):
                for r, v in col.items():
                    V.rows[r][c] = v
        if self.vinv is not None:
            vinv = SparseIntMatrix(self.ncols, self.ncols, [dict(r) for r in self.vinv])
        return SmithDecomposition(U=U, D=D, V=V, u_inv=uinv, v_inv=vinv)


def smith_normal_form(M: SparseIntMatrix, *, need_u: bool = True,
                      need_v: bool = True, need_uinv: bool = False,
                      need_vinv: bool = False) -> SmithDecomposition:
    """Smith decomposition of an integer matrix.

    Returns U, D, V with U*M*V = D, U and V unimodular, D diagonal with
    nonnegative entries satisfying d_1 | d_2 | ... .  Transform matrices that
    are not requested come back as None (cheaper on large inputs).
    """
    track = (need_u, need_v, need_uinv, need_vinv)
    if VERIFY:
        track = (True, True, True, True)
    eng = _SmithEngine(M, *track)
    eng.run()
    eng.finalize()
    dec = eng.result(M)
    if VERIFY:
        assert dec.U is not None and dec.V is not None
        if dec.U.matmul(M).matmul(dec.V) != dec.D:
            raise AssertionError("smith verification failed: U*M*V != D")
        if dec.U.matmul(dec.u_inv) != SparseIntMatrix.identity(M.nrows):
            raise AssertionError("smith verification failed: U*u_inv != I")
        if dec.V.matmul(dec.v_inv) != SparseIntMatrix.identity(M.ncols):
            raise AssertionError("smith verification failed: V*v_inv != I")
        if not need_u:
            dec.U = None
        if not need_v:
            dec.V = None
        if not need_uinv:
            dec.u_inv = None
        if not need_vinv:
            dec.v_inv = None
    d = dec.diagonal()
    for i, di in enumerate(d):
        if di < 0:
            raise AssertionError(f"negative diagonal entry in {d}")
        if i and d[i - 1] == 0 and di != 0:
            raise AssertionError(f"zero before nonzero in diagonal {d}")
        if i and d[i - 1] > 0 and di % d[i - 1]:
            raise AssertionError(f"invariant factor chain broken: {d}")
    return dec


def invariant_factors(M: SparseIntMatrix) -> list[int]:
    """Nontrivial invariant factors of M (no transforms computed)."""
    return smith_normal_form(M, need_u=False, need_v=False).invariant_factors()


def rank_int(M: SparseIntMatrix) -> int:
    return smith_normal_form(M, need_u=False, need_v=False).rank()


# ============================================================
# GF(2): packed bit rows
# ============================================================

def bits_from_iterable(cols: Iterable[int]) -> int:
    x = 0
    for c in cols:
        x ^= 1 << c
    return x


def bit_indices(x: int) -> list[int]:
    out = []
    while x:
        lsb = x & -x
        out.append(lsb.bit_length() - 1)
        x ^= lsb
    return out


def bits_to_tuple(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(n))


class Mod2Matrix:
    """GF(2) matrix; row i is an int whose bit j is the (i, j) entry."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Optional[list[int]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [0] * nrows

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]],
                   ncols: Optional[int] = None) -> "Mod2Matrix":
        nrows = len(dense)
        if ncols is None:
            ncols = len(dense[0]) if nrows else 0
        rows = []
        for row in dense:
            x = 0
            for c, v in enumerate(row):
                if v & 1:
                    x |= 1 << c
            rows.append(x)
        return cls(nrows, ncols, rows)

    @classmethod
    def from_int_matrix(cls, M: SparseIntMatrix) -> "Mod2Matrix":
        rows = []
        for row in M.rows:
            x = 0
            for c, v in row.items():
                if v & 1:
                    x |= 1 << c
            rows.append(x)
        return cls(M.nrows, M.ncols, rows)

    def copy(self) -> "Mod2Matrix":
        return Mod2Matrix(self.nrows, self.ncols, list(self.rows))

    def transpose(self) -> "Mod2Matrix":
        out = [0] * self.ncols
        for r, x in enumerate(self.rows):
            bit = 1 << r
            while x:
                lsb = x & -x
                out[lsb.bit_length() - 1] |= bit
                x ^= lsb
        return Mod2Matrix(self.ncols, self.nrows, out)

    def _rref(self) -> dict[int, int]:
        """Pivot col -> reduced row.  Invariant: every stored row contains
        exactly one pivot column (its own), the rest are free columns."""
        pivots: dict[int, int] = {}
        for x in self.rows:
            while x:
                p = (x & -x).bit_length() - 1
                if p in pivots:
                    x ^= pivots[p]
                else:
                    break
            if not x:
                continue
            p = (x & -x).bit_length() - 1
            rem = x ^ (1 << p)
            while rem:
                q = (rem & -rem).bit_length() - 1
                rem &= rem - 1
                if q in pivots:
                    # stored rows hold no foreign pivot bits, so this xor
                    # only clears q and toggles free bits
                    x ^= pivots[q]
            for q in list(pivots):
                if (pivots[q] >> p) & 1:
                    pivots[q] ^= x
            pivots[p] = x
        return pivots

    def rank(self) -> int:
        pivots: dict[int, int] = {}
        for x in self.rows:
            while x:
                p = (x & -x).bit_length() - 1
                if p in pivots:
                    x ^= pivots[p]
                else:
                    pivots[p] = x
                    break
        return len(pivots)

    def kernel_basis(self) -> list[int]:
        """Basis of {x : M x = 0}, one bitset of width ncols per vector."""
        pivots = self._rref()
        pivot_cols = set(pivots)
        basis = []
        for f in range(self.ncols):
            if f in pivot_cols:
                continue
            v = 1 << f
            for p, row in pivots.items():
                if (row >> f) & 1:
                    v |= 1 << p
            basis.append(v)
        return basis

    def solve(self, b: int) -> Optional[int]:
        """One x with M x = b (bits of b indexed by rows), or None."""
        width = self.ncols
        mask = (1 << width) - 1
        pivots: dict[int, int] = {}  # pivot col -> augmented row
        for r, x in enumerate(self.rows):
            aug = x | (((b >> r) & 1) << width)
            while aug & mask:
                p = (aug & -aug).bit_length() - 1
                if p in pivots:
                    aug ^= pivots[p]
                else:
                    pivots[p] = aug
                    break
            else:
                if aug:  # row reduced to 0 = 1
                    return None
        x = 0
        # stored rows have lsb = pivot, so every other variable in a row is
        # either a higher pivot (already assigned) or a free var (set to 0)
        for p in sorted(pivots, reverse=True):
            row = pivots[p]
            val = (row >> width) & 1
            val ^= (row & mask & x).bit_count() & 1
            if val:
                x |= 1 << p
        return x


class Mod2Echelon:
    """Incremental GF(2) span with optional combination tracking."""

    __slots__ = ("pivots", "combos", "count")

    def __init__(self, track: bool = False):
        self.pivots: dict[int, int] = {}
        self.combos: Optional[dict[int, int]] = {} if track else None
        self.count = 0

    def reduce(self, x: int) -> tuple[int, int]:
        """Fully reduce x against the span; returns (residual, combination).

        The residual carries no pivot bits at all, making it the unique
        canonical representative of x modulo the span; in particular the
        map x -> residual is linear over GF(2).
        """
        combo = 0
        out = 0
        while x:
            low = x & -x
            row = self.pivots.get(low.bit_length() - 1)
            if row is None:
                # settled: stored rows only touch bits >= their own pivot
                out |= low
                x ^= low
            else:
                x ^= row
                if self.combos is not None:
                    combo ^= self.combos[low.bit_length() - 1]
        return out, combo

    def insert(self, x: int) -> tuple[bool, int]:
        """Add x to the span.  Returns (was_new, combination).

        When tracking, the combination bitset is over insertion indices and
        includes this vector's own index; if was_new is False it flags a
        zero-sum relation among the inserted vectors.
        """
        idx = self.count
        self.count += 1
        combo = (1 << idx) if self.combos is not None else 0
        while x:
            p = (x & -x).bit_length() - 1
            if p not in self.pivots:
                self.pivots[p] = x
                if self.combos is not None:
                    self.combos[p] = combo
                return True, combo
            x ^= self.pivots[p]
            if self.combos is not None:
                combo ^= self.combos[p]
        return False, combo

    def contains(self, x: int) -> bool:
        return self.reduce(x)[0] == 0

    def rank(self) -> int:
        return len(self.pivots)


def rank_mod2(M) -> int:
    """GF(2) rank.  Accepts SparseIntMatrix, Mod2Matrix or dense rows."""
    return _as_mod2(M).rank()


def kernel_mod2(M) -> list[tuple[int, ...]]:
    """GF(2) kernel basis as 0/1 tuples."""
    m = _as_mod2(M)
    return [bits_to_tuple(v, m.ncols) for v in m.kernel_basis()]


def solve_mod2(M, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """One GF(2) solution of M x = b, or None if inconsistent."""
    m = _as_mod2(M)
    bb = 0
    for i, v in enumerate(b):
        if v & 1:
            bb |= 1 << i
    x = m.solve(bb)
    return None if x is None else bits_to_tuple(x, m.ncols)


def _as_mod2(M) -> Mod2Matrix:
    if isinstance(M, Mod2Matrix):
        return M
    if isinstance(M, SparseIntMatrix):
        return Mod2Matrix.from_int_matrix(M)
    return Mod2Matrix.from_dense(M)


# ============================================================
# integer column-echelon lattices
# ============================================================

def _vec_axpy(dst: dict[int, int], src: dict[int, int], q: int) -> None:
    if q == 0:
        return
    for i, v in src.items():
        nv = dst.get(i, 0) + q * v
        if nv:
            dst[i] = nv
        elif i in dst:
            del dst[i]


class IntEchelonLattice:
    """Lattice basis in column echelon form (pivot = first nonzero index).

    Supports exact membership tests and coordinate extraction.  Insertion
    uses unimodular two-column gcd merges, so the stored columns always form
    a basis of the lattice generated by everything inserted so far.
    """

    def __init__(self, ambient_dim: int, track_preimages: bool = False):
        self.ambient_dim = ambient_dim
        self.columns: dict[int, dict[int, int]] = {}  # pivot row -> column
        self.preimages: Optional[dict[int, dict[int, int]]] = \
            {} if track_preimages else None
        self.n_inserted = 0
        self.kernel: list[dict[int, int]] = []  # preimage combos that map to 0

    def rank(self) -> int:
        return len(self.columns)

    def insert(self, vec: dict[int, int]) -> bool:
        """Insert a vector; returns True if the rank grew."""
        w = dict(vec)
        pre: Optional[dict[int, int]] = None
        if self.preimages is not None:
            pre = {self.n_inserted: 1}
        self.n_inserted += 1
        while w:
            r = min(w)
            a = w[r]
            col = self.columns.get(r)
            if col is None:
                if a < 0:
                    w = {i: -v for i, v in w.items()}
                    if pre is not None:
                        pre = {i: -v for i, v in pre.items()}
                self.columns[r] = w
                if self.preimages is not None:
                    self.preimages[r] = pre  # type: ignore[assignment]
                return True
            p = col[r]
            if a % p == 0:
                q = a // p
                _vec_axpy(w, col, -q)
                if pre is not None:
                    _vec_axpy(pre, self.preimages[r], -q)  # type: ignore[index]
                continue
            g = gcd(p, a)
            # extended gcd: s*p + t*a = g
            s, t = _bezout(p, a)
            newcol: dict[int, int] = {}
            _vec_axpy(newcol, col, s)
            _vec_axpy(newcol, w, t)
            neww: dict[int, int] = {}
            _vec_axpy(neww, w, p // g)
            _vec_axpy(neww, col, -(a // g))
            if self.preimages is not None:
                oldpre = self.preimages[r]
                newpre: dict[int, int] = {}
                _vec_axpy(newpre, oldpre, s)
                _vec_axpy(newpre, pre, t)  # type: ignore[arg-type]
                prew: dict[int, int] = {}
                _vec_axpy(prew, pre, p // g)  # type: ignore[arg-type]
                _vec_axpy(prew, oldpre, -(a // g))
                self.preimages[r] = newpre
                pre = prew
            self.columns[r] = newcol
            w = neww
        if pre is not None:
            self.kernel.append(pre)
        return False

    def reduce(self, vec: dict[int, int]):
        """Return (residual, coords) where vec - sum coords_r * col_r = residual.

        coords maps pivot rows to integer coefficients; residual == {} iff
        vec lies in the lattice.
        """
        w = dict(vec)
        coords: dict[int, int] = {}
        while w:
            r = min(w)
            col = self.columns.get(r)
            if col is None:
                return w, coords
            a = w[r]
            p = col[r]
            if a % p:
                return w, coords
            q = a // p
            coords[r] = q
            _vec_axpy(w, col, -q)
        return {}, coords

    def contains(self, vec: dict[int, int]) -> bool:
        res, _ = self.reduce(vec)
        return not res

    def express(self, vec: dict[int, int]) -> Optional[dict[int, int]]:
        """Combination over the *inserted* vectors producing vec, or None.

        Requires track_preimages=True at construction.
        """
        if self.preimages is None:
            raise ValueError("lattice built without preimage tracking")
        res, coords = self.reduce(vec)
        if res:
            return None
        combo: dict[int, int] = {}
        for r, q in coords.items():
            _vec_axpy(combo, self.preimages[r], q)
        return combo

    def sorted_pivots(self) -> list[int]:
        return sorted(self.columns)

    def basis_columns(self) -> list[dict[int, int]]:
        return [self.columns[r] for r in self.sorted_pivots()]


def _bezout(a: int, b: int) -> tuple[int, int]:
    """s, t with s*a + t*b = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def image_lattice(M: SparseIntMatrix, track_preimages: bool = False) -> IntEchelonLattice:
    """Column span of M as an echelon lattice (insertion order = column order)."""
    lat = IntEchelonLattice(M.nrows, track_preimages=track_preimages)
    for col in M.columns():
        lat.insert(col)
    return lat


def kernel_lattice(M: SparseIntMatrix) -> list[dict[int, int]]:
    """A lattice basis of ker(M) (columns), via tracked column reduction."""
    lat = IntEchelonLattice(M.nrows, track_preimages=True)
    for col in M.columns():
        lat.insert(col)
    return lat.kernel


# ============================================================
# finitely generated abelian groups
# ============================================================

@dataclass(frozen=True)
class PresentedGroup:
    """A finitely generated abelian group in invariant-factor form.

    torsion lists the invariant factors d_1 | d_2 | ... (each >= 2);
    generators, when present, are representative vectors in the ambient
    basis, torsion generators first (aligned with torsion) and then
    free generators (free_rank of them).
    """

    free_rank: int
    torsion: tuple[int, ...] = ()
    generators: Optional[tuple[tuple[int, ...], ...]] = None

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        prev = None
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if prev is not None and d % prev:
                raise ValueError(f"broken divisibility chain {self.torsion}")
            prev = d
        if self.generators is not None and \
                len(self.generators) != len(self.torsion) + self.free_rank:
            raise ValueError("generator count mismatch")

    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def same_type(self, other: "PresentedGroup") -> bool:
        return (self.free_rank, self.torsion) == (other.free_rank, other.torsion)

    def rendered(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z_{d}" for d in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.rendered()


def group_from_presentation(relations: SparseIntMatrix,
                            with_generators: bool = True) -> PresentedGroup:
    """Cokernel of a relation matrix: Z^g / (row span), g = relations.ncols.

    Generator representatives are expressed in the original generator basis.
    """
    g = relations.ncols
    A = relations.transpose()  # columns of A span the relation lattice in Z^g
    dec = smith_normal_form(A, need_u=False, need_v=False,
                            need_uinv=with_generators)
    d = dec.diagonal()
    r = sum(1 for x in d if x)
    torsion = tuple(x for x in d if x > 1)
    free_rank = g - r
    gens = None
    if with_generators:
        uinv = dec.u_inv
        assert uinv is not None
        cols = uinv.columns()
        keep = [i for i in range(r) if d[i] > 1] + list(range(r, g))
        gens = tuple(
            tuple(cols[i].get(j, 0) for j in range(g)) for i in keep)
    return PresentedGroup(free_rank=free_rank, torsion=torsion, generators=gens)


class AbelianQuotient:
    """span(zbasis) / span(bcols) inside Z^n, with class coordinates.

    zbasis must be a lattice basis of a saturated sublattice Z containing
    the lattice B spanned by bcols (the homology situation).  Exposes the
    quotient group with generator representatives and maps arbitrary
    elements of Z to their class coordinates.
    """

    def __init__(self, ambient_dim: int, zbasis: list[dict[int, int]],
                 bcols: list[dict[int, int]]):
        self.ambient_dim = ambient_dim
        self._zech = IntEchelonLattice(ambient_dim)
        for v in zbasis:
            if not self._zech.insert(dict(v)):
                raise ValueError("zbasis is not linearly independent")
        self._zpivots = self._zech.sorted_pivots()
        zindex = {r: i for i, r in enumerate(self._zpivots)}
        s = len(self._zpivots)
        X = SparseIntMatrix(s, len(bcols))
        for j, b in enumerate(bcols):
            res, coords = self._zech.reduce(b)
            if res:
                raise ValueError("relation vector outside the cycle lattice")
            for r, q in coords.items():
                if q:
                    X.rows[zindex[r]][j] = q
        dec = smith_normal_form(X, need_u=True, need_v=False, need_uinv=True)
        d = dec.diagonal()
        self._rank = sum(1 for x in d if x)
        self._dvals = d
        self._U = dec.U
        uinv = dec.u_inv
        assert uinv is not None and self._U is not None
        self._s = s
        self.torsion = tuple(x for x in d[:self._rank] if x > 1)
        self.free_rank = s - self._rank
        # generator representatives in the ambient space
        cols = uinv.columns()
        zcols = [self._zech.columns[r] for r in self._zpivots]
        keep = [i for i in range(self._rank) if d[i] > 1] + \
               list(range(self._rank, s))
        self._factor_rows = keep
        gens = []
        for i in keep:
            amb: dict[int, int] = {}
            for zrow, coef in cols[i].items():
                _vec_axpy(amb, zcols[zrow], coef)
            gens.append(tuple(amb.get(j, 0) for j in range(ambient_dim)))
        self.group = PresentedGroup(free_rank=self.free_rank,
                                    torsion=self.torsion,
                                    generators=tuple(gens))

    def class_coordinates(self, vec: dict[int, int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(torsion coords mod d_i, free coords) of [vec] in the quotient.

        vec must lie in the cycle lattice Z.
        """
        res, coords = self._zech.reduce(vec)
        if res:
            raise ValueError("vector outside the cycle lattice")
        x = [0] * self._s
        zindex = {r: i for i, r in enumerate(self._zpivots)}
        for r, q in coords.items():
            x[zindex[r]] = q
        assert self._U is not None
        u = [0] * self._s
        for i, row in enumerate(self._U.rows):
            acc = 0
            for j, v in row.items():
                acc += v * x[j]
            u[i] = acc
        tors = []
        free = []
        for i in self._factor_rows:
            if i < self._rank:
                d = self._dvals[i]
                if d > 1:
                    tors.append(u[i] % d)
            else:
                free.append(u[i])
        return tuple(tors), tuple(free)

    def is_zero_class(self, vec: dict[int, int]) -> bool:
        tors, free = self.class_coordinates(vec)
        return not any(tors) and not any(free)
