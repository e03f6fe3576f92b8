"""Buchberger engine for ideals and submodules of free modules.

One reduction engine serves both cases: an element of a free module A^r is
flattened to a dict mapping (position, exponent-tuple) -> coefficient, and the
term order is position-over-term (lower position wins, then the ring's
monomial order).  Ideals are the r = 1 case.

Everything here is exact and deterministic: pair selection uses the normal
strategy with a fixed tie-break, reduced bases are canonical (monic,
auto-reduced, sorted by leading term), and results are cached by the canonical
form of the generators.
"""

from __future__ import annotations

import math
from itertools import combinations
from typing import Optional, Sequence

from .arith import Poly, RingMismatchError, RingSpec

__all__ = [
    "IdealBasis",
    "SubmoduleBasis",
    "groebner_basis",
    "normal_form",
    "ideal_membership",
    "ideal_quotient",
    "ideal_intersection",
    "module_quotient",
    "radical_membership",
    "ideal_dimension",
    "grade",
    "syzygies",
]


# ---------------------------------------------------------------------------
# flattened vector-polynomial helpers
# ---------------------------------------------------------------------------

def _vp_from_vector(vec: Sequence[Poly]) -> dict:
    vp = {}
    for pos, p in enumerate(vec):
        for e, c in p.terms.items():
            vp[(pos, e)] = c
    return vp


def _vector_from_vp(vp: dict, ring: RingSpec, rank: int) -> tuple:
    polys = [dict() for _ in range(rank)]
    for (pos, e), c in vp.items():
        polys[pos][e] = c
    return tuple(Poly(ring, t) for t in polys)


def _term_key(ring: RingSpec):
    mono = ring.mono_key
    # leading term = max; positions compared by index, lower index larger
    return lambda t: (-t[0], mono(t[1]))


def _divides(ea: tuple, eb: tuple) -> bool:
    return all(a <= b for a, b in zip(ea, eb))


def _add_scaled(target: dict, vp: dict, exp: tuple, coeff, field) -> None:
    """target += vp * (coeff * x^exp), in place."""
    for (pos, e), c in vp.items():
        key = (pos, tuple(a + b for a, b in zip(e, exp)))
        s = field.add(target.get(key, field.zero), field.mul(c, coeff))
        if s == field.zero:
            target.pop(key, None)
        else:
            target[key] = s


def _vp_canonical(vp: dict) -> tuple:
    return tuple(sorted(vp.items()))


class _Element:
    """A basis element with precomputed leading data."""

    __slots__ = ("vp", "lt", "lc", "lt_pos", "lt_exp")

    def __init__(self, vp: dict, tkey):
        self.vp = vp
        self.lt = max(vp, key=tkey)
        self.lc = vp[self.lt]
        self.lt_pos, self.lt_exp = self.lt


def _nf_vp(vp: dict, basis: Sequence[_Element], ring: RingSpec, want_cert: bool = False):
    """Full normal form of vp against basis; optionally with division certificate.

    Returns (remainder_vp, cert) where cert[i] is the dict-form polynomial q_i
    with  input = sum_i q_i * basis[i] + remainder  exactly.
    """
    field = ring.field
    tkey = _term_key(ring)
    work = dict(vp)
    rem: dict = {}
    cert = [dict() for _ in basis] if want_cert else None
    while work:
        t = max(work, key=tkey)
        pos, e = t
        c = work[t]
        for i, b in enumerate(basis):
            if b.lt_pos == pos and _divides(b.lt_exp, e):
                qexp = tuple(a - x for a, x in zip(e, b.lt_exp))
                qc = field.mul(c, field.inv(b.lc))
                if want_cert:
                    s = field.add(cert[i].get(qexp, field.zero), qc)
                    if s == field.zero:
                        cert[i].pop(qexp, None)
                    else:
                        cert[i][qexp] = s
                _add_scaled(work, b.vp, qexp, field.neg(qc), field)
                break
        else:
            rem[t] = c
            del work[t]
    return rem, cert


def _buchberger(inputs: Sequence[dict], ring: RingSpec, rank: int) -> list:
    """Reduced module Groebner basis of the flattened generators.

    Normal pair-selection strategy (smallest lcm in the order, ties by index),
    chain criterion always, product criterion only for rank 1 — it is unsound
    for module positions.
    """
    field = ring.field
    tkey = _term_key(ring)
    mono = ring.mono_key

    G: list = []
    pairs: dict = {}  # (i, j) -> lcm exponent tuple, i < j, same lead position

    def monic_elem(vp: dict) -> _Element:
        e = _Element(vp, tkey)
        if e.lc != field.one:
            inv = field.inv(e.lc)
            e.vp = {t: field.mul(c, inv) for t, c in vp.items()}
            e.lc = field.one
        return e

    def add_elem(vp: dict):
        g = monic_elem(vp)
        gi = len(G)
        for i, h in enumerate(G):
            if h is not None and h.lt_pos == g.lt_pos:
                lcm = tuple(max(a, b) for a, b in zip(h.lt_exp, g.lt_exp))
                pairs[(i, gi)] = lcm
        G.append(g)

    for vp in inputs:
        if not vp:
            continue
        rem, _ = _nf_vp(vp, [h for h in G if h is not None], ring)
        if rem:
            add_elem(rem)

    while pairs:
        (i, j) = min(pairs, key=lambda ij: (mono(pairs[ij]), ij))
        lcm = pairs.pop((i, j))
        gi, gj = G[i], G[j]
        if gi is None or gj is None:
            continue
        # product criterion (ideals only): coprime leading monomials
        if rank == 1 and all(a + b == l for a, b, l in zip(gi.lt_exp, gj.lt_exp, lcm)):
            continue
        # chain criterion: some g_k divides the lcm and both companion pairs
        # are already handled
        skip = False
        for k, gk in enumerate(G):
            if gk is None or k == i or k == j or gk.lt_pos != gi.lt_pos:
                continue
            if _divides(gk.lt_exp, lcm):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik not in pairs and pjk not in pairs:
                    skip = True
                    break
        if skip:
            continue
        # S-vector
        s: dict = {}
        _add_scaled(s, gi.vp, tuple(a - b for a, b in zip(lcm, gi.lt_exp)), field.one, field)
        _add_scaled(s, gj.vp, tuple(a - b for a, b in zip(lcm, gj.lt_exp)), field.neg(field.one), field)
        rem, _ = _nf_vp(s, [h for h in G if h is not None], ring)
        if rem:
            add_elem(rem)

    # minimalize: drop elements whose leading term is divisible by another's
    live = [g for g in G if g is not None]
    live.sort(key=lambda g: tkey(g.lt))
    minimal: list = []
    for g in live:
        if any(h.lt_pos == g.lt_pos and _divides(h.lt_exp, g.lt_exp) for h in minimal):
            continue
        minimal.append(g)
    # tail-reduce each against the others
    reduced = []
    for idx, g in enumerate(minimal):
        others = [h for k, h in enumerate(minimal) if k != idx]
        rem, _ = _nf_vp(g.vp, others, ring)
        if rem:
            reduced.append(monic_elem(rem))
    reduced.sort(key=lambda g: tkey(g.lt))
    return reduced


# global cache of reduced bases, keyed by the canonical generator set
_GB_CACHE: dict = {}


def _compute_gb(ring: RingSpec, rank: int, vps: Sequence[dict]) -> list:
    key = (ring.key(), rank, tuple(sorted(_vp_canonical(vp) for vp in vps)))
    hit = _GB_CACHE.get(key)
    if hit is None:
        hit = _buchberger(list(vps), ring, rank)
        _GB_CACHE[key] = hit
    return hit


# ---------------------------------------------------------------------------
# public basis types
# ---------------------------------------------------------------------------

class IdealBasis:
    """An ideal with a lazily computed canonical reduced Groebner basis."""

    __slots__ = ("ring", "generators", "_gb")

    def __init__(self, ring: RingSpec, generators: Sequence[Poly]):
        for g in generators:
            if g.ring != ring:
                raise ValueError("generator ring mismatch")
        self.ring = ring
        self.generators = tuple(generators)
        self._gb: Optional[list] = None

    def _gb_elements(self) -> list:
        if self._gb is None:
            vps = [_vp_from_vector((g,)) for g in self.generators if not g.is_zero()]
            self._gb = _compute_gb(self.ring, 1, vps)
        return self._gb

    @property
    def reduced_gb(self) -> tuple:
        return tuple(_vector_from_vp(e.vp, self.ring, 1)[0] for e in self._gb_elements())

    def nf(self, f: Poly, want_cert: bool = False):
        if f.ring != self.ring:
            raise RingMismatchError("polynomial ring does not match the ideal's ring")
        rem, cert = _nf_vp(_vp_from_vector((f,)), self._gb_elements(), self.ring, want_cert)
        rpoly = _vector_from_vp(rem, self.ring, 1)[0]
        if not want_cert:
            return rpoly, None
        return rpoly, [Poly(self.ring, c) for c in cert]

    def contains(self, f: Poly) -> bool:
        return self.nf(f)[0].is_zero()

    def is_zero_ideal(self) -> bool:
        return not self._gb_elements()

    def contains_one(self) -> bool:
        gb = self._gb_elements()
        return any(e.lt_pos == 0 and all(x == 0 for x in e.lt_exp) for e in gb)

    def __eq__(self, other):
        if not isinstance(other, IdealBasis) or self.ring != other.ring:
            return False
        return sorted(_vp_canonical(e.vp) for e in self._gb_elements()) == sorted(
            _vp_canonical(e.vp) for e in other._gb_elements()
        )

    def __hash__(self):
        return hash((self.ring, tuple(sorted(_vp_canonical(e.vp) for e in self._gb_elements()))))

    def __repr__(self):
        return f"IdealBasis({[str(g) for g in self.generators]})"


class SubmoduleBasis:
    """A submodule of A^rank given by generating vectors (tuples of Poly)."""

    __slots__ = ("ring", "ambient_rank", "generators", "_gb")

    def __init__(self, ring: RingSpec, ambient_rank: int, generators: Sequence[Sequence[Poly]]):
        gens = []
        for v in generators:
            v = tuple(v)
            if len(v) != ambient_rank:
                raise ValueError(f"generator length {len(v)} != ambient rank {ambient_rank}")
            for p in v:
                if p.ring != ring:
                    raise ValueError("generator ring mismatch")
            gens.append(v)
        self.ring = ring
        self.ambient_rank = ambient_rank
        self.generators = tuple(gens)
        self._gb: Optional[list] = None

    def _gb_elements(self) -> list:
        if self._gb is None:
            vps = [_vp_from_vector(v) for v in self.generators]
            vps = [vp for vp in vps if vp]
            self._gb = _compute_gb(self.ring, self.ambient_rank, vps)
        return self._gb

    @property
    def reduced_gb(self) -> tuple:
        return tuple(_vector_from_vp(e.vp, self.ring, self.ambient_rank) for e in self._gb_elements())

    def nf_vector(self, vec: Sequence[Poly], want_cert: bool = False):
        vec = tuple(vec)
        if len(vec) != self.ambient_rank:
            raise ValueError(f"vector length {len(vec)} != ambient rank {self.ambient_rank}")
        if any(p.ring != self.ring for p in vec):
            raise RingMismatchError("vector ring does not match the submodule's ring")
        rem, cert = _nf_vp(_vp_from_vector(vec), self._gb_elements(), self.ring, want_cert)
        rvec = _vector_from_vp(rem, self.ring, self.ambient_rank)
        if not want_cert:
            return rvec, None
        return rvec, [Poly(self.ring, c) for c in cert]

    def contains_vector(self, vec: Sequence[Poly]) -> bool:
        rem, _ = self.nf_vector(vec)
        return all(p.is_zero() for p in rem)

    def is_zero_submodule(self) -> bool:
        return not self._gb_elements()

    def plus(self, other: "SubmoduleBasis") -> "SubmoduleBasis":
        if other.ambient_rank != self.ambient_rank or other.ring != self.ring:
            raise ValueError("ambient mismatch")
        return SubmoduleBasis(self.ring, self.ambient_rank, self.generators + other.generators)

    def __eq__(self, other):
        if not isinstance(other, SubmoduleBasis):
            return False
        if self.ring != other.ring or self.ambient_rank != other.ambient_rank:
            return False
        return sorted(_vp_canonical(e.vp) for e in self._gb_elements()) == sorted(
            _vp_canonical(e.vp) for e in other._gb_elements()
        )

    def __hash__(self):
        return hash(
            (self.ring, self.ambient_rank, tuple(sorted(_vp_canonical(e.vp) for e in self._gb_elements())))
        )

    def __repr__(self):
        return f"SubmoduleBasis(rank={self.ambient_rank}, gens={len(self.generators)})"


# ---------------------------------------------------------------------------
# spec'd operations
# ---------------------------------------------------------------------------

def groebner_basis(gens):
    """Populate (and return) the reduced Groebner basis cache of a basis object."""
    gens._gb_elements()
    return gens


def normal_form(f, basis):
    """Remainder + division certificate of f against the basis's reduced GB.

    For an IdealBasis, f is a Poly and the certificate is a list of Poly
    multipliers aligned with `basis.reduced_gb`; for a SubmoduleBasis, f is a
    vector (sequence of Poly) and the certificate has the same shape.
    The identity  f = sum_i cert_i * gb_i + remainder  holds exactly.
    """
    if isinstance(basis, IdealBasis):
        return basis.nf(f, want_cert=True)
    if isinstance(basis, SubmoduleBasis):
        return basis.nf_vector(f, want_cert=True)
    raise TypeError(f"unsupported basis type {type(basis).__name__}")


def ideal_membership(f: Poly, I: IdealBasis):
    """(True, certificate) when f is in I, else (False, None)."""
    rem, cert = I.nf(f, want_cert=True)
    if rem.is_zero():
        return True, cert
    return False, None


def syzygies(rows: Sequence[Sequence[Poly]], ring: Optional[RingSpec] = None,
             source_rank: Optional[int] = None) -> list:
    """Generators for the kernel of the free-module map given by `rows`.

    `rows` is the matrix row-major (length = target rank); columns are vectors
    in A^(target rank).  Returns a list of columns (tuples of Poly, length =
    source rank) generating the syzygy module.

    Computed by elimination: columns are augmented with unit vectors in extra
    positions below the ambient block; basis elements supported entirely in
    the extra block are exactly the syzygies.
    """
    target_rank = len(rows)
    if ring is None:
        if not rows or not rows[0]:
            raise ValueError("ring required for an empty matrix")
        ring = rows[0][0].ring
    if source_rank is None:
        if target_rank == 0:
            raise ValueError("source rank required for a 0-row matrix")
        source_rank = len(rows[0])
    for r in rows:
        if len(r) != source_rank:
            raise ValueError("ragged matrix")
    if source_rank == 0:
        return []
    augmented = []
    for j in range(source_rank):
        vec = [rows[i][j] for i in range(target_rank)]
        unit = [ring.zero()] * source_rank
        unit[j] = ring.one()
        augmented.append(tuple(vec) + tuple(unit))
    vps = [_vp_from_vector(v) for v in augmented]
    gb = _compute_gb(ring, target_rank + source_rank, vps)
    out = []
    for e in gb:
        if e.lt_pos >= target_rank:
            # position-over-term: a leading term in the extra block forces
            # every term into the extra block
            vec = _vector_from_vp(e.vp, ring, target_rank + source_rank)
            out.append(tuple(vec[target_rank:]))
    return out


def submodule_from_reduced_gb(ring: RingSpec, rank: int, vectors: Sequence[Sequence[Poly]]) -> SubmoduleBasis:
    """Wrap vectors already known to be a reduced module GB, skipping Buchberger.

    Used where the generators come out of an elimination computation that
    returns reduced bases (e.g. syzygies); normal forms against the result are
    then certified directly in these generators.
    """
    tkey = _term_key(ring)
    sb = SubmoduleBasis(ring, rank, vectors)
    sb._gb = [_Element(_vp_from_vector(v), tkey) for v in sb.generators]
    return sb


def ideal_quotient(I: IdealBasis, f: Poly) -> IdealBasis:
    """(I : f) = {a : a*f in I}, via syzygies of the row (f | gens I)."""
    ring = I.ring
    row = [f] + [g for g in I.generators if not g.is_zero()]
    syz = syzygies([row], ring)
    gens = []
    seen = set()
    for col in syz:
        a = col[0]
        if a.is_zero():
            continue
        key = _vp_canonical(_vp_from_vector((a.monic(),)))
        if key not in seen:
            seen.add(key)
            gens.append(a)
    return IdealBasis(ring, gens)


def module_quotient(rel: SubmoduleBasis, vec: Sequence[Poly]) -> IdealBasis:
    """(rel : vec) = {a : a*vec in rel} as an ideal."""
    ring = rel.ring
    rank = rel.ambient_rank
    vec = tuple(vec)
    cols = [vec] + list(rel.generators)
    rows = [[c[i] for c in cols] for i in range(rank)]
    syz = syzygies(rows, ring, source_rank=len(cols))
    gens = []
    seen = set()
    for col in syz:
        a = col[0]
        if a.is_zero():
            continue
        key = _vp_canonical(_vp_from_vector((a.monic(),)))
        if key not in seen:
            seen.add(key)
            gens.append(a)
    return IdealBasis(ring, gens)


def ideal_intersection(I: IdealBasis, J: IdealBasis) -> IdealBasis:
    """I ∩ J by elimination in A^2 on generators (g, g) and (h, 0)."""
    ring = I.ring
    gens2 = [(g, g) for g in I.generators if not g.is_zero()]
    gens2 += [(h, ring.zero()) for h in J.generators if not h.is_zero()]
    vps = [_vp_from_vector(v) for v in gens2]
    gb = _compute_gb(ring, 2, vps)
    out = []
    for e in gb:
        if e.lt_pos == 1:
            out.append(_vector_from_vp(e.vp, ring, 2)[1])
    return IdealBasis(ring, out)


def radical_membership(f: Poly, I: IdealBasis) -> bool:
    """True iff f lies in the radical of I (Rabinowitsch trick).

    Tests 1 in I + (1 - t*f) in the ring extended by a fresh variable t.
    """
    ring = I.ring
    if f.is_zero():
        return True
    name = "t"
    k = 0
    while name in ring.variables:
        name = f"t{k}"
        k += 1
    ext = ring.extended(name)
    lift = lambda p: Poly(ext, {e + (0,): c for e, c in p.terms.items()})
    t = ext.var(name)
    gens = [lift(g) for g in I.generators if not g.is_zero()]
    gens.append(ext.one() - t * lift(f))
    return IdealBasis(ext, gens).contains_one()


def ideal_dimension(I: IdealBasis) -> int:
    """Krull dimension of A/I from the leading-term staircase.

    The dimension equals the largest size of a variable subset U such that no
    leading monomial of the reduced GB is supported inside U.  Errors on the
    unit ideal.
    """
    if I.contains_one():
        raise ValueError("unit ideal has no staircase dimension")
    n = I.ring.nvars
    supports = {frozenset(i for i, x in enumerate(e.lt_exp) if x > 0) for e in I._gb_elements()}
    for size in range(n, -1, -1):
        for U in combinations(range(n), size):
            Uset = frozenset(U)
            if not any(s <= Uset for s in supports):
                return size
    return 0  # unreachable: the empty subset is independent for proper ideals


def grade(I: IdealBasis):
    """Depth of I: 0 for the zero ideal, math.inf for the unit ideal,
    otherwise nvars - dim(A/I) (the ring is Cohen-Macaulay)."""
    if I.is_zero_ideal():
        return 0
    if I.contains_one():
        return math.inf
    return I.ring.nvars - ideal_dimension(I)
