"""Property tests over random complexes with known homology."""

from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from lambda_at import (
    Chain,
    ChainComplex,
    CoefficientSpec,
    GradedMap,
    add_scaled,
    apply,
    complex_from_facets,
    compose,
    compute_integer_homology,
    compute_lambda_at_model,
    contraction_mod_p,
    euler_characteristic,
    homology_via_snf,
    preprocess,
    reduce_mod_p,
    representative_cycles,
    rho_at_model,
    to_at_model_mod_p,
    to_rational_at_model,
    torsion_witnesses,
    verify_complex,
    verify_contraction,
    verify_model,
)
from lambda_at.core import prime_factors
from lambda_at.oracle import prime_power_split

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

# ---------------------------------------------------------------------------
# strategies


@st.composite
def snf_pieces(draw, top=3):
    """Elementary summands: ('free', q) or ('pair', q, mu) meaning d(x_q) = mu * y_(q-1)."""
    pieces = draw(st.lists(
        st.one_of(
            st.tuples(st.just("free"), st.integers(0, top)),
            st.tuples(st.just("pair"), st.integers(1, top), st.sampled_from([1, 1, 2, 3, 4, 5, 6, 7, 9, 10, 12])),
        ),
        min_size=1, max_size=9,
    ))
    return pieces


def _assemble(pieces):
    top = max(p[1] for p in pieces)
    sizes = [0] * (top + 1)
    cols: list[list[dict]] = [[] for _ in range(top + 1)]
    pending = []
    for piece in pieces:
        if piece[0] == "free":
            q = piece[1]
            cols[q].append({})
            sizes[q] += 1
        else:
            _, q, mu = piece
            y = sizes[q - 1]
            cols[q - 1].append({})
            sizes[q - 1] += 1
            pending.append((q, len(cols[q]), y, mu))
            cols[q].append(None)
            sizes[q] += 1
    for q, x, y, mu in pending:
        cols[q][x] = {y: mu}
    return cols


def expected_homology(pieces):
    top = max(p[1] for p in pieces)
    betti = [0] * (top + 1)
    factors = [[] for _ in range(top + 1)]
    for piece in pieces:
        if piece[0] == "free":
            betti[piece[1]] += 1
        elif piece[2] > 1:
            factors[piece[1] - 1].extend(prime_power_split(piece[2]))
    return betti, [sorted(f) for f in factors]


@st.composite
def scrambled_complex(draw):
    """An SNF-form complex after random unimodular changes of basis."""
    pieces = draw(snf_pieces())
    cols = _assemble(pieces)
    n = len(cols) - 1
    # dense d_q: rows = C_(q-1), cols = C_q
    mats = [None] + [[[cols[q][j].get(i, 0) for j in range(len(cols[q]))] for i in range(len(cols[q - 1]))]
                     for q in range(1, n + 1)]
    for k in range(n + 1):
        size = len(cols[k])
        if size < 2:
            continue
        for _ in range(draw(st.integers(0, 4))):
            i, j = draw(st.sampled_from([(a, b) for a in range(size) for b in range(size) if a != b]))
            c = draw(st.sampled_from([-2, -1, 1, 2]))
            # new basis of C_k: d_k gets col_i += c col_j, d_(k+1) gets row_j -= c row_i
            if k >= 1:
                for row in mats[k]:
                    row[i] += c * row[j]
            if k + 1 <= n:
                m = mats[k + 1]
                m[j] = [a - c * b for a, b in zip(m[j], m[i])]
    boundaries = [[{} for _ in cols[0]]]
    for q in range(1, n + 1):
        m = mats[q]
        boundaries.append([{i: m[i][j] for i in range(len(m)) if m[i][j]} for j in range(len(cols[q]))])
    return ChainComplex(boundaries), pieces


facet_lists = st.lists(
    st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True),
    min_size=1, max_size=8,
)


def sparse_chain(dim, size):
    if size == 0:
        return st.just(Chain.zero(dim))
    return st.dictionaries(st.integers(0, size - 1), st.integers(-5, 5), max_size=size).map(
        lambda d: Chain(dim, d))


def _rank_q(vectors):
    rows = [dict(v) for v in vectors]
    rank = 0
    pivots: dict = {}
    for r in rows:
        r = {k: Fraction(v) for k, v in r.items()}
        for col, (prow) in pivots.items():
            if col in r and r[col]:
                c = r[col] / prow[col]
                for k, v in prow.items():
                    r[k] = r.get(k, 0) - c * v
        r = {k: v for k, v in r.items() if v}
        if r:
            pivots[min(r)] = r
            rank += 1
    return rank


# ---------------------------------------------------------------------------
# core


@SETTINGS
@given(st.data())
def test_apply_is_linear(data):
    cc = complex_from_facets([[0, 1, 2, 3], [2, 3, 4]])
    q = data.draw(st.integers(1, cc.dimension))
    a = data.draw(sparse_chain(q, cc.size(q)))
    b = data.draw(sparse_chain(q, cc.size(q)))
    c = data.draw(st.integers(-4, 4))
    d = cc.differential
    assert apply(d, add_scaled(a, c, b)) == add_scaled(apply(d, a), c, apply(d, b))


@SETTINGS
@given(st.data(), st.sampled_from([2, 3, 5, 7]))
def test_reduce_mod_p_commutes_with_apply(data, p):
    cc, _ = data.draw(scrambled_complex())
    if cc.dimension < 1:
        return
    q = data.draw(st.integers(1, cc.dimension))
    b = data.draw(sparse_chain(q, cc.size(q)))
    zp = CoefficientSpec.prime_field(p)
    lhs = apply(reduce_mod_p(cc, p).differential, b.with_coeffs(zp))
    assert lhs == apply(cc.differential, b).with_coeffs(zp)
    assert all(0 < v < p for _, v in lhs.items())


@SETTINGS
@given(st.dictionaries(st.integers(0, 5), st.integers(-3, 3)), st.integers(-3, 3),
       st.dictionaries(st.integers(0, 5), st.integers(-3, 3)))
def test_canonical_sparsity(a, c, b):
    out = add_scaled(Chain(0, a), c, Chain(0, b))
    assert all(v != 0 for _, v in out.items())
    g = GradedMap(0, {0: {0: a}})
    assert all(v for t in g.raw(0).values() for v in t.values())


# ---------------------------------------------------------------------------
# scrambled complexes: every identity, exact homology


@SETTINGS
@given(scrambled_complex())
def test_scrambled_oracle_matches_construction(arg):
    cc, pieces = arg
    assert verify_complex(cc)
    betti, factors = expected_homology(pieces)
    res = homology_via_snf(cc, cap=None)
    assert res.betti == betti and res.factors == factors


@SETTINGS
@given(scrambled_complex())
def test_scrambled_model_identities(arg):
    cc, pieces = arg
    betti, factors = expected_homology(pieces)
    m = compute_lambda_at_model(cc)
    assert m.lam > 0
    assert verify_model(m) == []
    assert m.betti == betti
    for fs in factors:
        for f in fs:
            assert m.lam % prime_factors(f)[0] == 0


@SETTINGS
@given(scrambled_complex())
def test_scrambled_report(arg):
    cc, pieces = arg
    betti, factors = expected_homology(pieces)
    for pre in (True, False):
        r = compute_integer_homology(cc, use_preprocess=pre)
        assert r.betti == betti
        for p, t in r.torsion.items():
            assert t.T == [sum(1 for f in fs if f % p == 0) for fs in factors]
            assert euler_characteristic(t.beta_p) == euler_characteristic(betti)
        primes = {prime_factors(f)[0] for fs in factors for f in fs}
        assert primes <= set(r.torsion)


@SETTINGS
@given(scrambled_complex())
def test_scrambled_preprocess_and_compose(arg):
    cc, _ = arg
    c = preprocess(cc)
    assert verify_contraction(c) == []
    assert c.target.num_cells <= cc.num_cells
    m = compose(compute_lambda_at_model(c.target), c)
    assert verify_model(m) == []
    assert m.betti == compute_lambda_at_model(cc).betti
    for p in (2, 3):
        cp = contraction_mod_p(c, p)
        assert verify_contraction(cp) == []


@SETTINGS
@given(scrambled_complex(), st.sampled_from([2, 3, 5, 7]))
def test_scrambled_derived_models(arg, p):
    cc, _ = arg
    m = compute_lambda_at_model(cc)
    assert verify_model(to_rational_at_model(m)) == []
    if m.lam % p:
        mp = to_at_model_mod_p(m, p)
        assert mp.betti == m.betti and verify_model(mp) == []
    direct = compute_lambda_at_model(reduce_mod_p(cc, p))
    assert direct.lam == 1 and verify_model(direct) == []


@SETTINGS
@given(scrambled_complex())
def test_scrambled_cycles_independent(arg):
    cc, _ = arg
    m = compute_lambda_at_model(cc)
    zs = representative_cycles(m)
    for q in range(cc.dimension + 1):
        layer = [z.terms for z in zs if z.dim == q]
        assert _rank_q(layer) == len(layer)
    assert all(cc.d(z) == 0 for z in zs)


@SETTINGS
@given(scrambled_complex())
def test_scrambled_torsion_witnesses(arg):
    cc, _ = arg
    m = compute_lambda_at_model(cc)
    for w in torsion_witnesses(cc, cap=None):
        assert cc.d(w.b) == w.a * w.mu
        assert m.f(w.a) == 0
        assert m.lam % w.mu == 0


@SETTINGS
@given(snf_pieces())
def test_rho_model(pieces):
    cc = ChainComplex(_assemble(pieces))
    m = rho_at_model(cc)
    assert verify_model(m) == []
    betti, factors = expected_homology(pieces)
    assert m.betti == betti
    assert set(prime_factors(m.lam)) == {prime_factors(f)[0] for fs in factors for f in fs}


# ---------------------------------------------------------------------------
# simplicial complexes


@SETTINGS
@given(facet_lists)
def test_simplicial_against_oracle(facets):
    cc = complex_from_facets(facets)
    assert verify_complex(cc)
    snf = homology_via_snf(cc)
    r = compute_integer_homology(cc)
    assert r.betti == snf.betti
    assert euler_characteristic(cc) == r.euler
    for p, t in r.torsion.items():
        assert t.T == [snf.torsion_count(q, p) for q in range(len(r.betti))]
    m = r.model
    assert verify_model(m) == []
    assert all(m.lam % p == 0 for p in snf.torsion_primes())


@SETTINGS
@given(facet_lists)
def test_closure_and_orientation(facets):
    from lambda_at import simplicial_from_facets

    sc = simplicial_from_facets(facets)
    stored = {s for layer in sc.simplices for s in layer}
    for s in stored:
        assert list(s) == sorted(set(s))
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            assert not face or face in stored


@SETTINGS
@given(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)), max_size=14))
def test_voxels_against_oracle(black):
    from lambda_at import complex_from_voxels

    cc = complex_from_voxels((3, 3, 3), black)
    assert verify_complex(cc)
    r = compute_integer_homology(cc)
    assert r.betti == homology_via_snf(cc).betti
    assert r.torsion == {} or all(not any(t.T) for t in r.torsion.values())
