"""Unit-pivot reduction of a chain complex and composition of contractions."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .atmodel import LambdaATModel
from .core import (
    INTEGERS,
    ChainComplex,
    GradedMap,
    apply_raw,
    axpy,
    reduce_mod_p,
    scaled,
    verify_complex,
)


@dataclass
class ChainContraction:
    """(f, g, phi, lam) from ``source`` to ``target``.

    ``f g = lam id`` on the target and ``lam id - g f = phi d + d phi`` on the
    source.  When the target's generators are a subset of the source's,
    ``embedding[q][i]`` is the source index of target generator (q, i).
    """

    source: ChainComplex
    target: ChainComplex
    f: GradedMap
    g: GradedMap
    phi: GradedMap
    lam: int = 1
    embedding: list[list[int]] | None = None

    @classmethod
    def identity(cls, cc: ChainComplex) -> ChainContraction:
        ident = {q: {i: {i: 1} for i in range(cc.size(q))} for q in range(cc.dimension + 1)}
        return cls(
            source=cc,
            target=cc,
            f=GradedMap._from_raw(0, ident, cc.coeffs),
            g=GradedMap._from_raw(0, {q: {i: dict(t) for i, t in m.items()} for q, m in ident.items()},
                                  cc.coeffs, partial=True),
            phi=GradedMap._from_raw(1, {}, cc.coeffs),
            lam=1,
            embedding=[list(range(cc.size(q))) for q in range(cc.dimension + 1)],
        )


def preprocess(cc: ChainComplex) -> ChainContraction:
    """Contract away every pair joined by a +-1 entry of f d.

    Same sweep as the lambda-AT-model construction, but only unit pivots are
    eliminated, so no rescaling happens and the result is an honest chain
    contraction (lam = 1) onto a smaller complex with d' = f d.
    """
    if cc.coeffs != INTEGERS:
        raise ValueError("preprocessing runs over the integers")
    if not verify_complex(cc):
        raise ValueError("input is not a chain complex (d d != 0)")
    n = cc.dimension
    f = [dict() for _ in range(n + 1)]
    g = [dict() for _ in range(n + 1)]
    phi = [dict() for _ in range(n + 1)]
    dprime = [dict() for _ in range(n + 1)]
    fcol: list[dict[int, set]] = [dict() for _ in range(n + 1)]
    alive: list[set[int]] = [set() for _ in range(n + 1)]
    if n >= 0:
        for b in range(cc.size(0)):
            f[0][b] = {b: 1}
            g[0][b] = {b: 1}
            fcol[0][b] = {b}
            dprime[0][b] = {}
            alive[0].add(b)

    for q in range(1, n + 1):
        bd = cc.boundary_raw(q)
        fl, phil, fcoll = f[q - 1], phi[q - 1], fcol[q - 1]
        M: dict[int, dict] = {}
        Mrow: dict[int, set] = {}
        heap = []
        for c, col in enumerate(bd):
            m = apply_raw(fl, col)
            if m:
                M[c] = m
                for h, v in m.items():
                    Mrow.setdefault(h, set()).add(c)
                    if v in (1, -1):
                        heap.append((h, c))
        heapq.heapify(heap)
        done: set[int] = set()
        while heap:
            alpha, beta = heapq.heappop(heap)
            col = M.get(beta)
            if col is None or col.get(alpha) not in (1, -1):
                continue
            x = col[alpha]
            gamma = M.pop(beta)
            for h in gamma:
                Mrow[h].discard(beta)
            done.add(beta)
            gp = scaled(apply_raw(phil, bd[beta]), -1)
            gp[beta] = gp.get(beta, 0) + 1
            if not gp[beta]:
                del gp[beta]
            alive[q - 1].discard(alpha)
            g[q - 1].pop(alpha, None)
            dprime[q - 1].pop(alpha, None)

            for b in fcoll.pop(alpha, ()):
                fb = fl[b]
                cb = x * fb[alpha]
                axpy(fb, -cb, gamma)
                for h in gamma:
                    if h in fb:
                        fcoll.setdefault(h, set()).add(b)
                    elif h in fcoll:
                        fcoll[h].discard(b)
                if not fb:
                    del fl[b]
                pb = phil.setdefault(b, {})
                axpy(pb, cb, gp)
                if not pb:
                    del phil[b]
            for c in Mrow.pop(alpha, ()):
                mc = M[c]
                axpy(mc, -x * mc[alpha], gamma)
                for h in gamma:
                    if h in mc:
                        Mrow.setdefault(h, set()).add(c)
                        if mc[h] in (1, -1):
                            heapq.heappush(heap, (h, c))
                    elif h in Mrow:
                        Mrow[h].discard(c)
                if not mc:
                    del M[c]

        for a, col in enumerate(bd):
            if a in done:
                continue
            alive[q].add(a)
            dprime[q][a] = dict(M.get(a, {}))
            f[q][a] = {a: 1}
            fcol[q][a] = {a}
            ga = scaled(apply_raw(phil, col), -1)
            axpy(ga, 1, {a: 1})
            g[q][a] = ga

    embedding = [sorted(s) for s in alive]
    new_index = [{old: new for new, old in enumerate(emb)} for emb in embedding]
    boundaries = []
    for q, emb in enumerate(embedding):
        lower = new_index[q - 1] if q > 0 else {}
        boundaries.append([{lower[j]: v for j, v in dprime[q][a].items()} for a in emb])
    labels = [[cc.label(q, a) for a in emb] for q, emb in enumerate(embedding)]
    target = ChainComplex(boundaries, labels, cc.coeffs)
    if not verify_complex(target):
        raise RuntimeError("reduced complex fails d d = 0")

    f_t = {q: {b: {new_index[q][h]: v for h, v in t.items()} for b, t in f[q].items()} for q in range(n + 1)}
    g_t = {q: {new_index[q][a]: t for a, t in g[q].items()} for q in range(n + 1)}
    return ChainContraction(
        source=cc,
        target=target,
        f=GradedMap._from_raw(0, f_t, cc.coeffs),
        g=GradedMap._from_raw(0, g_t, cc.coeffs, partial=True),
        phi=GradedMap._from_raw(1, dict(enumerate(phi)), cc.coeffs),
        lam=1,
        embedding=embedding[: target.dimension + 1],
    )


def verify_contraction(c: ChainContraction) -> list[str]:
    """Chain-map, homotopy and side-condition checks, generator by generator."""
    src, tgt = c.source, c.target
    p = src.coeffs.p
    lam = src.coeffs.normalize(c.lam)
    out: list[str] = []
    n = max(src.dimension, tgt.dimension)
    sd = [dict(enumerate(src.boundary_raw(q))) for q in range(n + 2)]
    td = [dict(enumerate(tgt.boundary_raw(q))) for q in range(n + 2)]
    fr = [c.f.raw(q) for q in range(n + 2)]
    gr = [c.g.raw(q) for q in range(n + 2)]
    pr = [c.phi.raw(q) for q in range(-1, n + 2)]

    for q in range(src.dimension + 1):
        for a in range(src.size(q)):
            fa = fr[q].get(a, {})
            col = sd[q][a]
            if apply_raw(td[q], fa, p) != (apply_raw(fr[q - 1], col, p) if q > 0 else {}):
                out.append(f"d' f != f d on source ({q}, {a})")
            missing = [h for h in fa if h not in gr[q]]
            if missing:
                out.append(f"f({q}, {a}) hits target generators without g: {missing}")
                continue
            lhs = {a: lam}
            axpy(lhs, -1, apply_raw(gr[q], fa, p), p)
            phia = pr[q + 1].get(a, {})
            rhs = apply_raw(pr[q], col, p) if q > 0 else {}
            axpy(rhs, 1, apply_raw(sd[q + 1], phia, p), p)
            if lhs != rhs:
                out.append(f"lam id - g f != phi d + d phi on source ({q}, {a})")
            if apply_raw(fr[q + 1], phia, p):
                out.append(f"f phi != 0 on source ({q}, {a})")
    for q in range(tgt.dimension + 1):
        for a in range(tgt.size(q)):
            ga = gr[q].get(a)
            if ga is None:
                out.append(f"g undefined on target ({q}, {a})")
                continue
            col = td[q][a]
            if apply_raw(sd[q], ga, p) != (apply_raw(gr[q - 1], col, p) if q > 0 else {}):
                out.append(f"d g != g d' on target ({q}, {a})")
            if apply_raw(fr[q], ga, p) != {a: lam}:
                out.append(f"f g != lam id on target ({q}, {a})")
    return out


def contraction_mod_p(c: ChainContraction, p: int) -> ChainContraction:
    """Reduce a contraction mod p, dividing f and phi by lam as for models."""
    if c.lam % p == 0:
        raise ValueError(f"{p} divides lambda = {c.lam}")
    inv = pow(c.lam, -1, p)
    src = reduce_mod_p(c.source, p)
    tgt = reduce_mod_p(c.target, p)

    def red(gm: GradedMap, k: int) -> GradedMap:
        raw = {q: {i: scaled(t, k, p) for i, t in gm.raw(q).items()} for q in gm._images}
        return GradedMap._from_raw(gm.degree, raw, src.coeffs, gm.partial)

    return ChainContraction(src, tgt, red(c.f, inv), red(c.g, 1), red(c.phi, inv), 1, c.embedding)


def compose(outer, inner: ChainContraction):
    """Compose inner: C -> C' (lam) with outer: C' -> C'' (lam').

    Returns (f' f, g g', lam' phi + g phi' f, lam lam').  If ``outer`` is a
    LambdaATModel of C', the result is a LambdaATModel of C whose H is carried
    back to source generators through ``inner.embedding``; a model can only
    be the outer map, so the two arguments may be given in either order then.
    """
    if isinstance(inner, LambdaATModel) and isinstance(outer, ChainContraction):
        outer, inner = inner, outer
    is_model = isinstance(outer, LambdaATModel)
    mid = outer.complex if is_model else outer.source
    if not inner.target.same_shape(mid):
        raise ValueError("outer contraction does not start where the inner one ends")
    src = inner.source
    p = src.coeffs.p
    lam_o = outer.lam
    n = src.dimension
    f_new: dict[int, dict] = {}
    phi_new: dict[int, dict] = {}
    g_new: dict[int, dict] = {}
    for q in range(n + 1):
        fi, fo = inner.f.raw(q), outer.f.raw(q)
        fq = {}
        for a, t in fi.items():
            img = apply_raw(fo, t, p)
            if img:
                fq[a] = img
        f_new[q] = fq
        g_up, phi_o = inner.g.raw(q + 1), outer.phi.raw(q)
        pq = {}
        for a in range(src.size(q)):
            img = scaled(inner.phi.raw(q).get(a, {}), lam_o, p)
            fa = fi.get(a)
            if fa:
                axpy(img, 1, apply_raw(g_up, apply_raw(phi_o, fa, p), p), p)
            if img:
                pq[a] = img
        phi_new[q] = pq
        gi = inner.g.raw(q)
        g_new[q] = {h: apply_raw(gi, t, p) for h, t in outer.g.raw(q).items()}
    lam = inner.lam * lam_o
    if p is not None:
        lam %= p

    if not is_model:
        emb = None
        if inner.embedding is not None and outer.embedding is not None:
            emb = [[inner.embedding[q][i] for i in outer.embedding[q]] for q in range(len(outer.embedding))]
        return ChainContraction(
            source=src,
            target=outer.target,
            f=GradedMap._from_raw(0, f_new, src.coeffs),
            g=GradedMap._from_raw(0, g_new, src.coeffs, partial=True),
            phi=GradedMap._from_raw(1, phi_new, src.coeffs),
            lam=lam,
            embedding=emb,
        )

    if inner.embedding is None:
        raise ValueError("composing a model needs a contraction whose target embeds in its source")
    emb = inner.embedding
    H = [[emb[q][h] for h in hq] for q, hq in enumerate(outer.H)]
    H += [[] for _ in range(n + 1 - len(H))]
    f_src = {q: {a: {emb[q][h]: v for h, v in t.items()} for a, t in fq.items()} for q, fq in f_new.items()}
    g_src = {q: {emb[q][h]: t for h, t in gq.items()} for q, gq in g_new.items()}
    return LambdaATModel(
        complex=src,
        H=H,
        f=GradedMap._from_raw(0, f_src, src.coeffs),
        g=GradedMap._from_raw(0, g_src, src.coeffs, partial=True),
        phi=GradedMap._from_raw(1, phi_new, src.coeffs),
        lam=lam,
        pivots=list(outer.pivots),
    )
