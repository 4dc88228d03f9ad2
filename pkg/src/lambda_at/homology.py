"""Integer homological information from lambda-AT-models."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .atmodel import LambdaATModel, compute_lambda_at_model, representative_cycles, torsion_prime_candidates
from .core import Chain, ChainComplex, reduce_mod_p
from .reduce import ChainContraction, compose, contraction_mod_p, preprocess


class HomologyConsistencyError(ArithmeticError):
    """Mod-p ranks and Betti numbers contradict the universal coefficient theorem."""


@dataclass
class PrimeTorsion:
    beta_p: list[int]
    T: list[int]


@dataclass
class HomologyReport:
    betti: list[int]
    lam: int
    torsion: dict[int, PrimeTorsion]
    cycles_Z: list[Chain]
    cycles_mod_p: dict[int, list[Chain]]
    # the models behind the numbers; kept for inspection, never serialized
    model: LambdaATModel | None = field(default=None, repr=False)
    models_mod_p: dict[int, LambdaATModel] = field(default_factory=dict, repr=False)

    @property
    def euler(self) -> int:
        return euler_characteristic(self.betti)

    def torsion_groups(self) -> list[dict[int, int]]:
        """Per dimension, prime -> number of Z/p^t summands."""
        n = len(self.betti)
        return [{p: t.T[q] for p, t in self.torsion.items() if t.T[q]} for q in range(n)]


def torsion_recurrence(beta: Sequence[int], beta_p: Sequence[int]) -> list[int]:
    """T_0 = b_(0,p) - b_0 and T_q = b_(q,p) - b_q - T_(q-1)."""
    if len(beta) != len(beta_p):
        raise ValueError(f"length mismatch: {len(beta)} Betti numbers vs {len(beta_p)} mod-p ranks")
    out = []
    prev = 0
    for q, (b, bp) in enumerate(zip(beta, beta_p)):
        t = bp - b - prev
        if t < 0:
            raise HomologyConsistencyError(
                f"negative torsion count T_{q} = {t} from beta={list(beta)}, beta_p={list(beta_p)}")
        out.append(t)
        prev = t
    return out


def euler_characteristic(obj) -> int:
    """Alternating sum of cell counts (complex) or Betti numbers (report/sequence)."""
    if isinstance(obj, ChainComplex):
        counts = obj.sizes
    elif isinstance(obj, HomologyReport):
        counts = obj.betti
    else:
        counts = list(obj)
    return sum(c if q % 2 == 0 else -c for q, c in enumerate(counts))


def _padded(betti: list[int], n: int) -> list[int]:
    return betti + [0] * (n + 1 - len(betti))


def compute_integer_homology(cc: ChainComplex, use_preprocess: bool = True) -> HomologyReport:
    """Betti numbers, torsion-prime table and representative cycles of ``cc``.

    One lambda-AT-model over Z gives the Betti numbers and the candidate
    primes (those dividing lambda); one AT-model over Z/p per candidate gives
    the mod-p ranks, from which the number of p-power invariant factors
    follows.  With ``use_preprocess`` every run works on the unit-pivot
    reduction of ``cc`` and is composed back.
    """
    n = cc.dimension
    contraction: ChainContraction | None = None
    if use_preprocess:
        contraction = preprocess(cc)
        model = compose(compute_lambda_at_model(contraction.target), contraction)
    else:
        model = compute_lambda_at_model(cc)
    betti = _padded(model.betti, n)

    torsion: dict[int, PrimeTorsion] = {}
    cycles_mod_p: dict[int, list[Chain]] = {}
    models_mod_p: dict[int, LambdaATModel] = {}
    for p in torsion_prime_candidates(model.lam):
        if contraction is not None:
            inner = contraction_mod_p(contraction, p)
            mp = compose(compute_lambda_at_model(inner.target), inner)
        else:
            mp = compute_lambda_at_model(reduce_mod_p(cc, p))
        beta_p = _padded(mp.betti, n)
        torsion[p] = PrimeTorsion(beta_p, torsion_recurrence(betti, beta_p))
        cycles_mod_p[p] = representative_cycles(mp)
        models_mod_p[p] = mp

    return HomologyReport(
        betti=betti,
        lam=model.lam,
        torsion=torsion,
        cycles_Z=representative_cycles(model),
        cycles_mod_p=cycles_mod_p,
        model=model,
        models_mod_p=models_mod_p,
    )
