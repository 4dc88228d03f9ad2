"""Exact sparse chains, graded maps and finite chain complexes.

Chains are stored as ``{index: coefficient}`` dictionaries keyed by the
position of a generator inside its dimension.  The public classes wrap those
dictionaries; the algorithm modules work on the raw dictionaries directly
through the ``axpy``/``apply_raw`` helpers below.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping, Sequence

Terms = dict  # index -> nonzero coefficient


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``|n|`` by trial division, ascending."""
    n = abs(n)
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1 if k == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class CoefficientSpec:
    """Ground ring: the integers, a prime field Z/p, or the rationals.

    The rationals only appear as the target of ``to_rational_at_model``.
    """

    p: int | None = None
    rational: bool = False

    def __post_init__(self):
        if self.p is not None:
            if self.rational:
                raise ValueError("a coefficient ring cannot be both Q and Z/p")
            if not is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")

    @classmethod
    def integers(cls) -> CoefficientSpec:
        return cls()

    @classmethod
    def prime_field(cls, p: int) -> CoefficientSpec:
        return cls(p=p)

    @classmethod
    def rationals(cls) -> CoefficientSpec:
        return cls(rational=True)

    @property
    def is_field(self) -> bool:
        return self.p is not None or self.rational

    def normalize(self, c):
        if self.p is not None:
            return c % self.p
        if self.rational:
            return Fraction(c)
        return c

    def inverse(self, c):
        if self.p is not None:
            return pow(c % self.p, -1, self.p)
        if self.rational:
            return 1 / Fraction(c)
        if c in (1, -1):
            return c
        raise ZeroDivisionError(f"{c} is not a unit in Z")

    def __str__(self) -> str:
        if self.p is not None:
            return f"Z/{self.p}"
        return "Q" if self.rational else "Z"


INTEGERS = CoefficientSpec()
RATIONALS = CoefficientSpec.rationals()


# -- raw sparse helpers -----------------------------------------------------

def axpy(dst: dict, c, src: Mapping, p: int | None = None) -> dict:
    """In place ``dst += c * src``; zero coefficients are removed."""
    if not c:
        return dst
    get = dst.get
    if p is None:
        for k, v in src.items():
            nv = get(k, 0) + c * v
            if nv:
                dst[k] = nv
            else:
                dst.pop(k, None)
    else:
        for k, v in src.items():
            nv = (get(k, 0) + c * v) % p
            if nv:
                dst[k] = nv
            else:
                dst.pop(k, None)
    return dst


def scaled(src: Mapping, c, p: int | None = None) -> dict:
    if p is None:
        return {k: c * v for k, v in src.items()} if c else {}
    out = {}
    for k, v in src.items():
        nv = (c * v) % p
        if nv:
            out[k] = nv
    return out


def apply_raw(images: Mapping[int, Mapping], terms: Mapping, p: int | None = None) -> dict:
    """Linear extension of ``images`` (index -> terms) evaluated on ``terms``."""
    out: dict = {}
    for k, c in terms.items():
        img = images.get(k)
        if img:
            axpy(out, c, img, p)
    return out


def _canonical(terms: Mapping, coeffs: CoefficientSpec) -> dict:
    out = {}
    for k in sorted(terms):
        v = coeffs.normalize(terms[k])
        if v:
            out[k] = v
    return out


# -- generators and chains --------------------------------------------------

@dataclass(frozen=True, order=True)
class GeneratorId:
    dim: int
    index: int
    label: str = field(default="", compare=False)

    def __str__(self) -> str:
        return self.label or f"c{self.dim}_{self.index}"


def _key_index(key, dim: int) -> int:
    if isinstance(key, GeneratorId):
        if key.dim != dim:
            raise ValueError(f"generator {key} has dim {key.dim}, chain has dim {dim}")
        return key.index
    return int(key)


class Chain:
    """A ``dim``-chain: a finite linear combination of dim-``dim`` generators.

    ``terms`` may be keyed by generator index or by :class:`GeneratorId`.
    Stored coefficients are never zero and are reduced mod p over Z/p.
    """

    __slots__ = ("dim", "coeffs", "_terms")

    def __init__(self, dim: int, terms: Mapping | None = None, coeffs: CoefficientSpec = INTEGERS):
        if dim < -1:
            raise ValueError("chain dimension must be >= -1")
        self.dim = dim
        self.coeffs = coeffs
        raw = {}
        for k, v in (terms or {}).items():
            i = _key_index(k, dim)
            raw[i] = raw.get(i, 0) + v
        self._terms = _canonical(raw, coeffs)
        if dim == -1 and self._terms:
            raise ValueError("only the zero chain lives in dimension -1")

    @classmethod
    def _wrap(cls, dim: int, terms: dict, coeffs: CoefficientSpec) -> Chain:
        # trusted path: terms already canonical apart from ordering
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.coeffs = coeffs
        obj._terms = {k: terms[k] for k in sorted(terms)}
        return obj

    @classmethod
    def zero(cls, dim: int, coeffs: CoefficientSpec = INTEGERS) -> Chain:
        return cls._wrap(dim, {}, coeffs)

    @classmethod
    def generator(cls, gen: GeneratorId, coeffs: CoefficientSpec = INTEGERS) -> Chain:
        return cls(gen.dim, {gen.index: 1}, coeffs)

    @property
    def terms(self) -> Mapping[int, int]:
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, Chain):
            return self.dim == other.dim and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        if not self._terms:
            return f"Chain({self.dim}, 0)"
        body = " + ".join(f"{c}*[{i}]" for i, c in self._terms.items())
        return f"Chain({self.dim}, {body})"

    def _check(self, other: Chain) -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.coeffs != other.coeffs:
            raise ValueError(f"coefficient mismatch: {self.coeffs} vs {other.coeffs}")

    def __add__(self, other: Chain) -> Chain:
        return add_scaled(self, 1, other)

    def __sub__(self, other: Chain) -> Chain:
        return add_scaled(self, -1, other)

    def __neg__(self) -> Chain:
        return self * -1

    def __mul__(self, c) -> Chain:
        return Chain._wrap(self.dim, scaled(self._terms, self.coeffs.normalize(c), self.coeffs.p), self.coeffs)

    __rmul__ = __mul__

    def with_coeffs(self, coeffs: CoefficientSpec) -> Chain:
        return Chain(self.dim, self._terms, coeffs)


def coefficient_of(b: Chain, a: GeneratorId):
    """Coefficient of generator ``a`` in ``b``; zero across dimensions."""
    if a.dim != b.dim:
        return 0
    return b._terms.get(a.index, 0)


def add_scaled(a: Chain, c, b: Chain) -> Chain:
    """Return ``a + c*b`` in canonical sparse form."""
    a._check(b)
    out = dict(a._terms)
    axpy(out, a.coeffs.normalize(c), b._terms, a.coeffs.p)
    return Chain._wrap(a.dim, out, a.coeffs)


# -- graded maps ------------------------------------------------------------

class GradedMap:
    """A graded homomorphism stored as its nonzero images on generators.

    ``images[dim][index]`` is the raw terms of the image of generator
    ``(dim, index)``, a chain of dimension ``dim + degree``; ``images`` may
    also map :class:`GeneratorId` keys straight to chains.  A missing entry is
    the zero chain unless the map is ``partial``, in which case evaluating it
    there raises ``KeyError`` (used for maps defined only on a subset, like g).
    """

    def __init__(self, degree: int, images: Mapping[int, Mapping[int, Mapping]] | None = None,
                 coeffs: CoefficientSpec = INTEGERS, partial: bool = False):
        self.degree = degree
        self.coeffs = coeffs
        self.partial = partial
        self._images: dict[int, dict[int, dict]] = {}
        for key, value in (images or {}).items():
            if isinstance(key, GeneratorId):
                self.set_image(key.dim, key.index, value)
                continue
            for idx, terms in value.items():
                self.set_image(key, idx, terms)

    @classmethod
    def _from_raw(cls, degree: int, images: dict[int, dict[int, dict]], coeffs: CoefficientSpec,
                  partial: bool = False) -> GradedMap:
        obj = cls(degree, None, coeffs, partial)
        obj._images = images
        return obj

    def set_image(self, dim: int, index: int, value) -> None:
        if isinstance(value, Chain):
            if value.dim != dim + self.degree:
                raise ValueError(f"image of a dim-{dim} generator must have dim {dim + self.degree}")
            terms = dict(value._terms)
        else:
            terms = _canonical(value, self.coeffs)
        bucket = self._images.setdefault(dim, {})
        if terms or self.partial:
            bucket[index] = terms
        else:
            bucket.pop(index, None)

    def raw(self, dim: int) -> dict[int, dict]:
        return self._images.get(dim, {})

    def dims(self) -> list[int]:
        return sorted(d for d, imgs in self._images.items() if imgs)

    def defined_on(self, dim: int, index: int) -> bool:
        return index in self._images.get(dim, {})

    def image(self, gen, index: int | None = None) -> Chain:
        if index is None:
            dim, index = gen.dim, gen.index
        else:
            dim = gen
        imgs = self._images.get(dim, {})
        if index not in imgs:
            if self.partial:
                raise KeyError(f"map undefined on generator ({dim}, {index})")
            return Chain.zero(dim + self.degree, self.coeffs)
        return Chain._wrap(dim + self.degree, imgs[index], self.coeffs)

    def __call__(self, chain: Chain) -> Chain:
        return apply(self, chain)

    def items(self) -> Iterator[tuple[GeneratorId, Chain]]:
        for dim in sorted(self._images):
            imgs = self._images[dim]
            for idx in sorted(imgs):
                yield GeneratorId(dim, idx), Chain._wrap(dim + self.degree, imgs[idx], self.coeffs)

    def map_images(self, fn, coeffs: CoefficientSpec | None = None) -> GradedMap:
        """New map whose raw images are ``fn(terms)``; used for scaling/reduction."""
        coeffs = coeffs or self.coeffs
        out = {}
        for dim, imgs in self._images.items():
            out[dim] = {}
            for idx, terms in imgs.items():
                new = fn(terms)
                if new or self.partial:
                    out[dim][idx] = new
        return GradedMap._from_raw(self.degree, out, coeffs, self.partial)

    def scaled(self, c) -> GradedMap:
        p = self.coeffs.p
        c = self.coeffs.normalize(c)
        return self.map_images(lambda t: scaled(t, c, p))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        if self.degree != other.degree or self.coeffs != other.coeffs:
            return False
        dims = set(self._images) | set(other._images)
        return all(self._nonzero(d) == other._nonzero(d) for d in dims)

    __hash__ = None

    def _nonzero(self, dim: int) -> dict:
        imgs = self._images.get(dim, {})
        if self.partial:
            return imgs
        return {k: v for k, v in imgs.items() if v}


def apply(m: GradedMap, b: Chain) -> Chain:
    """Linear extension of ``m`` evaluated on the chain ``b``."""
    imgs = m.raw(b.dim)
    if m.partial:
        missing = [i for i in b._terms if i not in imgs]
        if missing:
            raise KeyError(f"map undefined on generators {missing} of dim {b.dim}")
    out = apply_raw(imgs, b._terms, m.coeffs.p)
    return Chain._wrap(b.dim + m.degree, out, m.coeffs)


# -- chain complexes ----------------------------------------------------------

class ChainComplex:
    """A finite chain complex given by per-dimension boundary columns.

    ``boundaries[q][i]`` maps indices of dim ``q-1`` generators to the
    coefficients of the differential of generator ``(q, i)``; every entry of
    ``boundaries[0]`` must be empty.  Instances are treated as immutable.
    """

    def __init__(self, boundaries: Sequence[Sequence[Mapping[int, int]]],
                 labels: Sequence[Sequence[str]] | None = None,
                 coeffs: CoefficientSpec = INTEGERS):
        self.coeffs = coeffs
        self._bd: list[list[dict]] = []
        for q, cols in enumerate(boundaries):
            lower = len(boundaries[q - 1]) if q > 0 else 0
            dim_cols = []
            for i, col in enumerate(cols):
                col = _canonical(col, coeffs)
                for j in col:
                    if not 0 <= j < lower:
                        raise ValueError(f"boundary of ({q}, {i}) refers to missing generator ({q - 1}, {j})")
                dim_cols.append(col)
            self._bd.append(dim_cols)
        # drop empty top dimensions so `dimension` is meaningful
        while self._bd and not self._bd[-1]:
            self._bd.pop()
        if labels is None:
            labels = [[f"c{q}_{i}" for i in range(len(cols))] for q, cols in enumerate(self._bd)]
        self.generators: list[list[GeneratorId]] = [
            [GeneratorId(q, i, str(labels[q][i])) for i in range(len(cols))]
            for q, cols in enumerate(self._bd)
        ]
        self._differential: GradedMap | None = None

    @property
    def dimension(self) -> int:
        """Top dimension n; -1 for the empty complex."""
        return len(self._bd) - 1

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self._bd]

    @property
    def num_cells(self) -> int:
        return sum(self.sizes)

    def size(self, q: int) -> int:
        return len(self._bd[q]) if 0 <= q < len(self._bd) else 0

    def boundary_raw(self, q: int) -> list[dict]:
        """Raw boundary columns of dimension ``q`` (empty list out of range)."""
        return self._bd[q] if 0 <= q < len(self._bd) else []

    def label(self, dim: int, index: int) -> str:
        return self.generators[dim][index].label

    def generator(self, dim: int, index: int) -> GeneratorId:
        return self.generators[dim][index]

    def all_generators(self) -> Iterator[GeneratorId]:
        for gens in self.generators:
            yield from gens

    @property
    def differential(self) -> GradedMap:
        if self._differential is None:
            images = {q: {i: col for i, col in enumerate(cols) if col} for q, cols in enumerate(self._bd)}
            self._differential = GradedMap._from_raw(-1, images, self.coeffs)
        return self._differential

    def d(self, chain: Chain) -> Chain:
        return apply(self.differential, chain)

    def with_coeffs(self, coeffs: CoefficientSpec) -> ChainComplex:
        labels = [[g.label for g in gens] for gens in self.generators]
        return ChainComplex(self._bd, labels, coeffs)

    def same_shape(self, other: ChainComplex) -> bool:
        """True when both complexes have identical generators and differential."""
        return self.coeffs == other.coeffs and self._bd == other._bd

    def __repr__(self) -> str:
        return f"ChainComplex(sizes={self.sizes}, coeffs={self.coeffs})"


def verify_complex(cc: ChainComplex) -> bool:
    """True iff ``d_0 = 0`` and ``d_q d_{q+1} = 0`` on every generator."""
    if any(cc.boundary_raw(0)):
        return False
    p = cc.coeffs.p
    for q in range(2, cc.dimension + 1):
        lower = cc.boundary_raw(q - 1)
        lower_map = dict(enumerate(lower))
        for col in cc.boundary_raw(q):
            if apply_raw(lower_map, col, p):
                return False
    return True


def reduce_mod_p(cc: ChainComplex, p: int) -> ChainComplex:
    """The same complex with every differential coefficient taken mod ``p``."""
    if cc.coeffs != INTEGERS:
        raise ValueError(f"expected an integer complex, got coefficients {cc.coeffs}")
    return cc.with_coeffs(CoefficientSpec.prime_field(p))
