"""lambda-AT-models: integer chain contractions onto a null-differential complex.

A lambda-AT-model of (C, d) is (H, f, g, phi, lam) with H a subset of the
generators, f: C -> span(H), g: span(H) -> C and phi: C -> C of degree +1
such that

    f g = lam * id,   lam * id - g f = phi d + d phi,   f d = 0,
    d g = 0,          f phi = 0.

``compute_lambda_at_model`` builds one by incremental elimination without
ever computing a Smith normal form.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .core import (
    INTEGERS,
    RATIONALS,
    Chain,
    ChainComplex,
    CoefficientSpec,
    GeneratorId,
    GradedMap,
    apply_raw,
    axpy,
    prime_factors,
    reduce_mod_p,
    scaled,
    verify_complex,
)


@dataclass
class LambdaATModel:
    complex: ChainComplex
    H: list[list[int]]
    f: GradedMap
    g: GradedMap
    phi: GradedMap
    lam: int
    # pivot values x in the order they were taken (diagnostics only)
    pivots: list[int] = field(default_factory=list)

    @property
    def coeffs(self) -> CoefficientSpec:
        return self.complex.coeffs

    @property
    def betti(self) -> list[int]:
        return [len(h) for h in self.H]

    def h_generators(self) -> list[GeneratorId]:
        return [self.complex.generator(q, i) for q, hq in enumerate(self.H) for i in hq]


class _PivotQueue:
    """Lazy min-heap over the nonzero entries of a sparse matrix.

    Entries are ordered by (|value|, row, column); stale heap items are
    discarded when popped.
    """

    def __init__(self, p: int | None):
        self.p = p
        self.heap: list = []

    def key(self, v):
        return abs(v) if self.p is None else v

    def push(self, h: int, c: int, v) -> None:
        heapq.heappush(self.heap, (self.key(v), h, c, v))

    def rebuild(self, M: dict[int, dict]) -> None:
        self.heap = [(self.key(v), h, c, v) for c, col in M.items() for h, v in col.items()]
        heapq.heapify(self.heap)

    def pop(self, M: dict[int, dict]):
        while self.heap:
            _, h, c, v = heapq.heappop(self.heap)
            col = M.get(c)
            if col is not None and col.get(h) == v:
                return h, c, v
        return None


def _empty_maps(n: int) -> list[dict]:
    return [dict() for _ in range(n + 1)]


def compute_lambda_at_model(cc: ChainComplex) -> LambdaATModel:
    """Incremental lambda-AT-model of ``cc`` over Z or Z/p.

    Dimension by dimension, the matrix M = f_{q-1} d_q (rows: surviving
    homology generators of dim q-1, columns: unprocessed q-cells) is reduced
    by pivoting on an entry of minimal absolute value; ties go to the
    smallest (row, column) index pair.  Each pivot x rescales every f and phi
    image by x, which is why lam is the product of the pivots.  Over Z the
    sign of lam is kept positive as it goes; over Z/p the result is divided
    by lam at the end so that lam = 1.
    """
    if cc.coeffs.rational:
        raise ValueError("lambda-AT-models are computed over Z or Z/p")
    if not verify_complex(cc):
        raise ValueError("input is not a chain complex (d d != 0)")
    p = cc.coeffs.p
    n = cc.dimension
    f = _empty_maps(n)
    g = _empty_maps(n)
    phi = _empty_maps(n)
    # fcol[q][h] = generators b of dim q whose f(b) involves h
    fcol: list[dict[int, set]] = _empty_maps(n)
    H: list[dict[int, None]] = _empty_maps(n)
    lam = 1
    pivots: list[int] = []

    if n >= 0:
        for b in range(cc.size(0)):
            f[0][b] = {b: 1}
            g[0][b] = {b: 1}
            fcol[0][b] = {b}
            H[0][b] = None

    for q in range(1, n + 1):
        bd = cc.boundary_raw(q)
        fl, phil, fcoll, Hl = f[q - 1], phi[q - 1], fcol[q - 1], H[q - 1]
        M: dict[int, dict] = {}
        Mrow: dict[int, set] = {}
        for c, col in enumerate(bd):
            m = apply_raw(fl, col, p)
            if m:
                M[c] = m
                for h in m:
                    Mrow.setdefault(h, set()).add(c)
        queue = _PivotQueue(p)
        queue.rebuild(M)
        done: set[int] = set()

        while (pick := queue.pop(M)) is not None:
            alpha, beta, x = pick
            gamma = M.pop(beta)
            for h in gamma:
                Mrow[h].discard(beta)
            done.add(beta)
            # gamma' = lam * beta - phi(d beta)
            gp = scaled(apply_raw(phil, bd[beta], p), -1, p)
            axpy(gp, lam, {beta: 1}, p)
            del Hl[alpha]
            g[q - 1].pop(alpha, None)

            if p is None:
                sign, factor = (1 if x > 0 else -1), abs(x)
            else:
                sign, factor = 1, x
            f_coef = {b: fl[b][alpha] for b in fcoll.pop(alpha, ())}
            m_coef = {c: M[c][alpha] for c in Mrow.pop(alpha, ())}

            if factor != 1:
                for r in range(q):
                    for maps in (f[r], phi[r]):
                        for b, t in maps.items():
                            maps[b] = scaled(t, factor, p)
                for c in M:
                    M[c] = scaled(M[c], factor, p)

            for b, cb in f_coef.items():
                fb = fl[b]
                axpy(fb, -sign * cb, gamma, p)
                for h in gamma:
                    if h in fb:
                        fcoll.setdefault(h, set()).add(b)
                    elif h in fcoll:
                        fcoll[h].discard(b)
                if not fb:
                    del fl[b]
                pb = phil.setdefault(b, {})
                axpy(pb, sign * cb, gp, p)
                if not pb:
                    del phil[b]

            for c, cm in m_coef.items():
                mc = M[c]
                axpy(mc, -sign * cm, gamma, p)
                for h in gamma:
                    if h in mc:
                        Mrow.setdefault(h, set()).add(c)
                        if factor == 1:
                            queue.push(h, c, mc[h])
                    elif h in Mrow:
                        Mrow[h].discard(c)
                if not mc:
                    del M[c]
            if factor != 1:
                queue.rebuild(M)

            lam = factor * lam if p is None else (x * lam) % p
            pivots.append(x)

        for a, col in enumerate(bd):
            if a in done:
                continue
            H[q][a] = None
            f[q][a] = {a: 1}
            fcol[q][a] = {a}
            ga = scaled(apply_raw(phil, col, p), -1, p)
            axpy(ga, lam, {a: 1}, p)
            g[q][a] = ga

    if p is not None and lam != 1:
        inv = pow(lam, -1, p)
        for maps in f + phi:
            for b, t in maps.items():
                maps[b] = scaled(t, inv, p)
        lam = 1

    return LambdaATModel(
        complex=cc,
        H=[sorted(h) for h in H],
        f=GradedMap._from_raw(0, dict(enumerate(f)), cc.coeffs),
        g=GradedMap._from_raw(0, dict(enumerate(g)), cc.coeffs, partial=True),
        phi=GradedMap._from_raw(1, dict(enumerate(phi)), cc.coeffs),
        lam=lam,
        pivots=pivots,
    )


def normalize_sign(m: LambdaATModel) -> LambdaATModel:
    """(H, -f, g, -phi, -lam) when lam < 0; the model itself otherwise."""
    if m.lam == 0:
        raise ValueError("lambda must be nonzero")
    if m.lam > 0 or m.coeffs.p is not None:
        return m
    return replace(m, f=m.f.scaled(-1), phi=m.phi.scaled(-1), lam=-m.lam)


def verify_model(m: LambdaATModel) -> list[str]:
    """Check the five model identities generator by generator.

    Returns human-readable violations; an empty list means the model is valid.
    """
    cc = m.complex
    p = cc.coeffs.p
    lam = cc.coeffs.normalize(m.lam)
    out: list[str] = []
    if not lam:
        return [f"lambda {m.lam} is zero in {cc.coeffs}"]
    n = cc.dimension
    dmaps = [dict(enumerate(cc.boundary_raw(q))) for q in range(n + 2)]
    fr = [m.f.raw(q) for q in range(n + 2)]
    gr = [m.g.raw(q) for q in range(n + 1)]
    pr = [m.phi.raw(q) for q in range(-1, n + 1)]  # shifted: pr[q + 1] = phi_q
    Hs = [set(h) for h in m.H] + [set()]
    if len(m.H) != n + 1:
        out.append(f"H has {len(m.H)} dimensions, complex has {n + 1}")
        return out

    def name(q, i):
        return f"({q}, {i}) '{cc.label(q, i)}'"

    for q in range(n + 1):
        for h in m.H[q]:
            if h not in gr[q]:
                out.append(f"g undefined on H generator {name(q, h)}")
        for a in range(cc.size(q)):
            fa = fr[q].get(a, {})
            stray = [h for h in fa if h not in Hs[q]]
            if stray:
                out.append(f"f{name(q, a)} leaves span(H): {stray}")
                continue
            col = dmaps[q][a]
            if q > 0 and apply_raw(fr[q - 1], col, p):
                out.append(f"f d != 0 on {name(q, a)}")
            lhs = {a: lam}
            axpy(lhs, -1, apply_raw(gr[q], fa, p), p)
            rhs = apply_raw(pr[q], col, p) if q > 0 else {}
            phia = pr[q + 1].get(a, {})
            axpy(rhs, 1, apply_raw(dmaps[q + 1], phia, p), p)
            if lhs != rhs:
                out.append(f"lam*id - g f != phi d + d phi on {name(q, a)}")
            if apply_raw(fr[q + 1], phia, p):
                out.append(f"f phi != 0 on {name(q, a)}")
        for h in m.H[q]:
            gh = gr[q].get(h)
            if gh is None:
                continue
            if q > 0 and apply_raw(dmaps[q], gh, p):
                out.append(f"d g != 0 on H generator {name(q, h)}")
            if apply_raw(fr[q], gh, p) != {h: lam}:
                out.append(f"f g != lam on H generator {name(q, h)}")
    return out


def representative_cycles(m: LambdaATModel) -> list[Chain]:
    """The cycles g(h), h in H, ordered by (dim, index)."""
    return [m.g.image(q, h) for q, hq in enumerate(m.H) for h in hq]


def to_rational_at_model(m: LambdaATModel) -> LambdaATModel:
    """(f / lam, g, phi / lam) over Q; returned as a model with lam = 1."""
    if m.coeffs != INTEGERS:
        raise ValueError("expected an integer model")
    inv = Fraction(1, m.lam)
    return LambdaATModel(
        complex=m.complex.with_coeffs(RATIONALS),
        H=[list(h) for h in m.H],
        f=GradedMap._from_raw(0, _map_raw(m.f, lambda t: {k: v * inv for k, v in t.items()}), RATIONALS),
        g=GradedMap._from_raw(0, _map_raw(m.g, lambda t: {k: Fraction(v) for k, v in t.items()}), RATIONALS,
                              partial=True),
        phi=GradedMap._from_raw(1, _map_raw(m.phi, lambda t: {k: v * inv for k, v in t.items()}), RATIONALS),
        lam=1,
        pivots=list(m.pivots),
    )


def to_at_model_mod_p(m: LambdaATModel, p: int) -> LambdaATModel:
    """(lam^-1 f, g, lam^-1 phi) mod p for a prime p not dividing lam."""
    if m.coeffs != INTEGERS:
        raise ValueError("expected an integer model")
    cc = reduce_mod_p(m.complex, p)
    if m.lam % p == 0:
        raise ValueError(f"{p} divides lambda = {m.lam}; no inverse mod {p}")
    inv = pow(m.lam, -1, p)
    return LambdaATModel(
        complex=cc,
        H=[list(h) for h in m.H],
        f=GradedMap._from_raw(0, _map_raw(m.f, lambda t: scaled(t, inv, p)), cc.coeffs),
        g=GradedMap._from_raw(0, _map_raw(m.g, lambda t: scaled(t, 1, p)), cc.coeffs, partial=True),
        phi=GradedMap._from_raw(1, _map_raw(m.phi, lambda t: scaled(t, inv, p)), cc.coeffs),
        lam=1,
        pivots=list(m.pivots),
    )


def _map_raw(gm: GradedMap, fn) -> dict[int, dict]:
    out = {}
    for q in gm.dims() if not gm.partial else sorted(gm._images):
        out[q] = {i: fn(t) for i, t in gm.raw(q).items()}
        if not gm.partial:
            out[q] = {i: t for i, t in out[q].items() if t}
    return out


def torsion_prime_candidates(m: LambdaATModel | int) -> list[int]:
    """Primes dividing lambda: a superset of the primes in any invariant factor."""
    lam = m.lam if isinstance(m, LambdaATModel) else m
    if lam <= 0:
        raise ValueError("lambda must be positive")
    return prime_factors(lam)
