"""Smith normal form ground truth, plus the SNF-form rho-AT-model.

Everything here is independent of the lambda-AT-model machinery and is meant
for cross-checking it on desk-sized inputs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Mapping, Sequence

from .core import INTEGERS, Chain, ChainComplex, GradedMap, axpy, prime_factors, verify_complex

DEFAULT_CELL_CAP = 2000


class OracleScopeError(ValueError):
    """The complex is larger than the configured oracle cell cap."""


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]]) -> IntegerMatrix:
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {(i, j): int(v) for i, row in enumerate(data) for j, v in enumerate(row) if v}
        return cls(rows, cols, entries)

    @classmethod
    def boundary(cls, cc: ChainComplex, q: int) -> IntegerMatrix:
        """Matrix of d_q: rows are dim q-1 generators, columns dim q generators."""
        entries = {}
        for j, col in enumerate(cc.boundary_raw(q)):
            for i, v in col.items():
                entries[(i, j)] = v
        return cls(cc.size(q - 1), cc.size(q), entries)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, dict[int, int]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, {})[j] = v
        out: dict[tuple[int, int], int] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, {}).items():
                out[(i, j)] = out.get((i, j), 0) + a * b
        return IntegerMatrix(self.rows, other.cols, {k: v for k, v in out.items() if v})

    def permuted(self, row_perm: Sequence[int] | None = None, col_perm: Sequence[int] | None = None) -> IntegerMatrix:
        """Entry (i, j) moves to (row_perm[i], col_perm[j])."""
        rp = row_perm or range(self.rows)
        cp = col_perm or range(self.cols)
        return IntegerMatrix(self.rows, self.cols, {(rp[i], cp[j]): v for (i, j), v in self.entries.items()})


@dataclass
class SNFResult:
    """Invariant factors d1 | d2 | ... of a matrix, padded with zeros to min(rows, cols).

    When transforms were requested, ``U @ M @ V`` is the diagonal matrix and
    ``U_inv`` is the inverse of ``U``.
    """

    diagonal: list[int]
    rank: int
    U: IntegerMatrix | None = None
    V: IntegerMatrix | None = None
    U_inv: IntegerMatrix | None = None

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d > 1]


class _Eliminator:
    """Sparse integer elimination with minimal-absolute-value pivoting."""

    def __init__(self, m: IntegerMatrix, track: bool):
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}
        for (i, j), v in m.entries.items():
            if v:
                self.rows.setdefault(i, {})[j] = v
                self.cols.setdefault(j, set()).add(i)
        self.heap = [(abs(v), i, j) for i, r in self.rows.items() for j, v in r.items()]
        heapq.heapify(self.heap)
        self.track = track
        if track:
            self.U = {i: {i: 1} for i in range(m.rows)}  # rows of U
            self.Uinv = {i: {i: 1} for i in range(m.rows)}  # columns of U^-1
            self.V = {j: {j: 1} for j in range(m.cols)}  # columns of V

    def _set(self, i: int, j: int, v: int) -> None:
        row = self.rows.setdefault(i, {})
        if v:
            row[j] = v
            self.cols.setdefault(j, set()).add(i)
            heapq.heappush(self.heap, (abs(v), i, j))
        else:
            row.pop(j, None)
            s = self.cols.get(j)
            if s is not None:
                s.discard(i)

    def row_add(self, k: int, i: int, c: int) -> None:
        """row_k += c * row_i."""
        rk = self.rows.setdefault(k, {})
        for j, v in list(self.rows[i].items()):
            self._set(k, j, rk.get(j, 0) + c * v)
        if self.track:
            axpy(self.U[k], c, self.U[i])
            axpy(self.Uinv[i], -c, self.Uinv[k])

    def col_add(self, k: int, j: int, c: int) -> None:
        """col_k += c * col_j."""
        for i in list(self.cols.get(j, ())):
            v = self.rows[i][j]
            self._set(i, k, self.rows[i].get(k, 0) + c * v)
        if self.track:
            axpy(self.V[k], c, self.V[j])

    def negate_row(self, i: int) -> None:
        row = self.rows[i]
        for j in row:
            row[j] = -row[j]
        if self.track:
            self.U[i] = {k: -v for k, v in self.U[i].items()}
            self.Uinv[i] = {k: -v for k, v in self.Uinv[i].items()}

    def next_pivot(self) -> tuple[int, int] | None:
        while self.heap:
            a, i, j = heapq.heappop(self.heap)
            v = self.rows.get(i, {}).get(j, 0)
            if v and abs(v) == a:
                return i, j
        return None

    def isolate(self, i: int, j: int) -> tuple[int, int, int]:
        """Clear a row and column except the pivot.

        The pivot may move to a smaller remainder on the way; returns the
        final (value, row, column).
        """
        while True:
            a = self.rows[i][j]
            for k in sorted(self.cols[j] - {i}):
                q = self.rows[k][j] // a
                if q:
                    self.row_add(k, i, -q)
            for l in sorted(set(self.rows[i]) - {j}):
                q = self.rows[i][l] // a
                if q:
                    self.col_add(l, j, -q)
            rest = [(abs(self.rows[k][j]), k, j) for k in self.cols[j] if k != i]
            rest += [(abs(v), i, l) for l, v in self.rows[i].items() if l != j]
            if not rest:
                break
            _, i, j = min(rest)
        if self.rows[i][j] < 0:
            self.negate_row(i)
        a = self.rows[i][j]
        del self.rows[i]
        del self.cols[j]
        return a, i, j


def smith_normal_form(m: IntegerMatrix, transforms: bool = False) -> SNFResult:
    """Smith normal form by sparse row/column elimination.

    Pivots are taken at a smallest nonzero absolute entry and fully
    eliminated; the resulting diagonal is then brought into divisibility form
    with 2x2 gcd/lcm moves.
    """
    el = _Eliminator(m, transforms)
    pivots: list[tuple[int, int, int]] = []
    while (pos := el.next_pivot()) is not None:
        pivots.append(el.isolate(*pos))
    # units first, keeping discovery order otherwise
    order = sorted(range(len(pivots)), key=lambda k: (pivots[k][0] != 1, k))
    pivots = [pivots[k] for k in order]
    diag = [p[0] for p in pivots]
    r = len(diag)

    if transforms:
        row_perm = _completion([p[1] for p in pivots], m.rows)
        col_perm = _completion([p[2] for p in pivots], m.cols)
        U = {row_perm[i]: el.U[i] for i in range(m.rows)}  # new position -> row
        Uinv = {row_perm[i]: el.Uinv[i] for i in range(m.rows)}  # new position -> column
        V = {col_perm[j]: el.V[j] for j in range(m.cols)}
    for a in range(r):
        if diag[a] == 1:
            continue
        for b in range(a + 1, r):
            da, db = diag[a], diag[b]
            if db % da == 0:
                continue
            g = gcd(da, db)
            s, t = _bezout(da, db)
            diag[a], diag[b] = g, lcm(da, db)
            if transforms:
                ua, ub = U[a], U[b]
                U[a] = _lin(s, ua, t, ub)
                U[b] = _lin(-(db // g), ua, da // g, ub)
                ia, ib = Uinv[a], Uinv[b]
                Uinv[a] = _lin(da // g, ia, db // g, ib)
                Uinv[b] = _lin(-t, ia, s, ib)
                va, vb = V[a], V[b]
                V[a] = _lin(1, va, 1, vb)
                V[b] = _lin(-(t * db // g), va, s * da // g, vb)
    diagonal = diag + [0] * (min(m.rows, m.cols) - r)
    if not transforms:
        return SNFResult(diagonal, r)
    U_m = IntegerMatrix(m.rows, m.rows, {(pos, c): v for pos, row in U.items() for c, v in row.items()})
    Uinv_m = IntegerMatrix(m.rows, m.rows, {(rw, pos): v for pos, col in Uinv.items() for rw, v in col.items()})
    V_m = IntegerMatrix(m.cols, m.cols, {(rw, pos): v for pos, col in V.items() for rw, v in col.items()})
    return SNFResult(diagonal, r, U_m, V_m, Uinv_m)


def _completion(first: list[int], n: int) -> list[int]:
    """Permutation sending first[k] -> k and the remaining indices after them."""
    perm = [0] * n
    seen = set(first)
    for pos, idx in enumerate(first):
        perm[idx] = pos
    pos = len(first)
    for idx in range(n):
        if idx not in seen:
            perm[idx] = pos
            pos += 1
    return perm


def _bezout(a: int, b: int) -> tuple[int, int]:
    """s, t with s*a + t*b = gcd(a, b) for positive a, b."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


def _lin(a: int, x: Mapping, b: int, y: Mapping) -> dict:
    out: dict = {}
    axpy(out, a, x)
    axpy(out, b, y)
    return out


def prime_power_split(n: int) -> list[int]:
    out = []
    for p in prime_factors(n):
        q = p
        while n % (q * p) == 0:
            q *= p
        out.append(q)
    return out


@dataclass
class SNFHomology:
    """Integer homology per dimension from Smith normal forms.

    ``factors[q]`` lists the prime-power invariant factors p^t of H_q, sorted;
    ``invariant_factors[q]`` the SNF diagonal entries > 1 they came from.
    """

    betti: list[int]
    factors: list[list[int]]
    invariant_factors: list[list[int]]

    def torsion_primes(self) -> list[int]:
        return sorted({prime_factors(f)[0] for fs in self.factors for f in fs})

    def torsion_count(self, q: int, p: int) -> int:
        """Number of invariant factors of H_q that are powers of p."""
        return sum(1 for f in self.factors[q] if f % p == 0)


def _check_scope(cc: ChainComplex, cap: int | None) -> None:
    if cc.coeffs != INTEGERS:
        raise ValueError("the SNF oracle works over the integers only")
    if cap is not None and cc.num_cells > cap:
        raise OracleScopeError(f"complex has {cc.num_cells} cells, oracle cap is {cap}")


def homology_via_snf(cc: ChainComplex, cap: int | None = DEFAULT_CELL_CAP) -> SNFHomology:
    _check_scope(cc, cap)
    n = cc.dimension
    snfs = [smith_normal_form(IntegerMatrix.boundary(cc, q)) for q in range(n + 2)]
    ranks = [s.rank for s in snfs]
    betti = [cc.size(q) - ranks[q] - ranks[q + 1] for q in range(n + 1)]
    inv = [snfs[q + 1].invariant_factors for q in range(n + 1)]
    factors = [sorted(f for d in fs for f in prime_power_split(d)) for fs in inv]
    return SNFHomology(betti, factors, inv)


@dataclass
class TorsionWitness:
    """d(b) = mu * a with a a cycle and mu minimal."""

    a: Chain
    b: Chain
    mu: int


def torsion_witnesses(cc: ChainComplex, cap: int | None = DEFAULT_CELL_CAP) -> list[TorsionWitness]:
    _check_scope(cc, cap)
    out = []
    for q in range(cc.dimension):
        res = smith_normal_form(IntegerMatrix.boundary(cc, q + 1), transforms=True)
        a_cols: dict[int, dict[int, int]] = {}
        for (i, k), v in res.U_inv.entries.items():
            a_cols.setdefault(k, {})[i] = v
        b_cols: dict[int, dict[int, int]] = {}
        for (j, k), v in res.V.entries.items():
            b_cols.setdefault(k, {})[j] = v
        for k, mu in enumerate(res.diagonal):
            if mu > 1:
                out.append(TorsionWitness(Chain(q, a_cols.get(k, {})), Chain(q + 1, b_cols.get(k, {})), mu))
    return out


def rho_at_model(cc: ChainComplex):
    """The rho-AT-model of a complex whose differentials are already in SNF form.

    SNF form is accepted up to a permutation of generators: every boundary is
    zero or ``mu * y`` with ``mu > 0``, and no ``y`` is hit twice.
    """
    from .atmodel import LambdaATModel

    if cc.coeffs != INTEGERS or not verify_complex(cc):
        raise ValueError("expected a valid integer chain complex")
    hit: dict[tuple[int, int], tuple[int, int]] = {}  # y -> (x index, mu)
    rho = 1
    for q in range(1, cc.dimension + 1):
        for x, col in enumerate(cc.boundary_raw(q)):
            if not col:
                continue
            if len(col) != 1:
                raise ValueError(f"d of generator ({q}, {x}) is not a single multiple of a generator")
            (y, mu), = col.items()
            if mu <= 0:
                raise ValueError(f"d of generator ({q}, {x}) has non-positive entry {mu}")
            if (q - 1, y) in hit:
                raise ValueError(f"generator ({q - 1}, {y}) is hit twice")
            hit[(q - 1, y)] = (x, mu)
            rho = lcm(rho, mu)
    f: dict[int, dict] = {}
    g: dict[int, dict] = {}
    phi: dict[int, dict] = {}
    H: list[list[int]] = []
    for q in range(cc.dimension + 1):
        Hq = []
        for x, col in enumerate(cc.boundary_raw(q)):
            if (q, x) in hit:
                src, mu = hit[(q, x)]
                phi.setdefault(q, {})[x] = {src: rho // mu}
            elif not col:
                Hq.append(x)
                f.setdefault(q, {})[x] = {x: 1}
                g.setdefault(q, {})[x] = {x: rho}
        H.append(Hq)
    return LambdaATModel(
        complex=cc,
        H=H,
        f=GradedMap._from_raw(0, f, INTEGERS),
        g=GradedMap._from_raw(0, g, INTEGERS, partial=True),
        phi=GradedMap._from_raw(1, phi, INTEGERS),
        lam=rho,
    )
