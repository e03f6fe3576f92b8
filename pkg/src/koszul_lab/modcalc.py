"""Finitely presented modules over a polynomial ring.

Modules are cokernels: an FPModule is a free ambient A^rank together with a
submodule of relations, and every operation below reduces to Groebner
computations on the relations or on free-map matrices — kernels and cokernels,
annihilators, Fitting ideals, homology of bounded complexes, and lifting
through surjections.

Presentations are never minimized; downstream properties are all phrased as
zero-tests or submodule equalities, which the engine decides exactly.
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional, Sequence

from .arith import Poly, RingSpec
from .groebner import (
    IdealBasis,
    SubmoduleBasis,
    ideal_intersection,
    module_quotient,
    submodule_from_reduced_gb,
    syzygies,
)

__all__ = [
    "FreeMap",
    "FPModule",
    "Complex",
    "CapExceededError",
    "LiftError",
    "is_injective",
    "cokernel",
    "annihilator",
    "submodule_equal",
    "fitting_ideal",
    "homology",
    "is_zero_module",
    "zero_spherical",
    "lift_through_surjection",
    "min_annihilating_power",
]


class CapExceededError(RuntimeError):
    """A bounded search (annihilating power, determinant exponent) ran out of cap."""


class LiftError(ValueError):
    """Projective lifting failed: the map is not surjective, or no preimage exists."""


class FreeMap:
    """A map of free modules A^source_rank -> A^target_rank, matrix row-major."""

    __slots__ = ("ring", "target_rank", "source_rank", "entries")

    def __init__(self, ring: RingSpec, entries: Sequence[Sequence[Poly]],
                 target_rank: Optional[int] = None, source_rank: Optional[int] = None):
        rows = [tuple(r) for r in entries]
        if target_rank is None:
            target_rank = len(rows)
        if len(rows) != target_rank:
            raise ValueError(f"expected {target_rank} rows, got {len(rows)}")
        if source_rank is None:
            if not rows:
                raise ValueError("source rank required for a 0-row matrix")
            source_rank = len(rows[0])
        for r in rows:
            if len(r) != source_rank:
                raise ValueError("ragged matrix")
            for p in r:
                if p.ring != ring:
                    raise ValueError("entry ring mismatch")
        self.ring = ring
        self.target_rank = target_rank
        self.source_rank = source_rank
        self.entries = tuple(rows)

    # -- constructors --------------------------------------------------------

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> "FreeMap":
        one, zero = ring.one(), ring.zero()
        return cls(ring, [[one if i == j else zero for j in range(n)] for i in range(n)],
                   target_rank=n, source_rank=n)

    @classmethod
    def zero(cls, ring: RingSpec, target_rank: int, source_rank: int) -> "FreeMap":
        z = ring.zero()
        return cls(ring, [[z] * source_rank for _ in range(target_rank)],
                   target_rank=target_rank, source_rank=source_rank)

    @classmethod
    def from_columns(cls, ring: RingSpec, target_rank: int, cols: Sequence[Sequence[Poly]]) -> "FreeMap":
        cols = [tuple(c) for c in cols]
        for c in cols:
            if len(c) != target_rank:
                raise ValueError("column length mismatch")
        return cls(ring, [[c[i] for c in cols] for i in range(target_rank)],
                   target_rank=target_rank, source_rank=len(cols))

    @classmethod
    def scalar(cls, ring: RingSpec, g: Poly, n: int) -> "FreeMap":
        """g times the identity on A^n."""
        z = ring.zero()
        return cls(ring, [[g if i == j else z for j in range(n)] for i in range(n)],
                   target_rank=n, source_rank=n)

    # -- block structure ------------------------------------------------------

    @classmethod
    def block_diag(cls, a: "FreeMap", b: "FreeMap") -> "FreeMap":
        z = a.ring.zero()
        rows = []
        for r in a.entries:
            rows.append(list(r) + [z] * b.source_rank)
        for r in b.entries:
            rows.append([z] * a.source_rank + list(r))
        return cls(a.ring, rows, target_rank=a.target_rank + b.target_rank,
                   source_rank=a.source_rank + b.source_rank)

    @classmethod
    def hstack(cls, a: "FreeMap", b: "FreeMap") -> "FreeMap":
        """[a | b]: same target, concatenated sources."""
        if a.target_rank != b.target_rank:
            raise ValueError("hstack needs equal target ranks")
        rows = [list(ra) + list(rb) for ra, rb in zip(a.entries, b.entries)]
        return cls(a.ring, rows, target_rank=a.target_rank,
                   source_rank=a.source_rank + b.source_rank)

    @classmethod
    def vstack(cls, a: "FreeMap", b: "FreeMap") -> "FreeMap":
        """[a ; b]: same source, concatenated targets."""
        if a.source_rank != b.source_rank:
            raise ValueError("vstack needs equal source ranks")
        return cls(a.ring, list(a.entries) + list(b.entries),
                   target_rank=a.target_rank + b.target_rank, source_rank=a.source_rank)

    # -- data access -----------------------------------------------------------

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.target_rank))

    def columns(self) -> list:
        return [self.column(j) for j in range(self.source_rank)]

    def apply(self, vec: Sequence[Poly]) -> tuple:
        vec = tuple(vec)
        if len(vec) != self.source_rank:
            raise ValueError("vector length mismatch")
        out = []
        for i in range(self.target_rank):
            acc = self.ring.zero()
            for j in range(self.source_rank):
                acc = acc + self.entries[i][j] * vec[j]
            out.append(acc)
        return tuple(out)

    # -- arithmetic -------------------------------------------------------------

    def compose(self, other: "FreeMap") -> "FreeMap":
        """self ∘ other."""
        if self.source_rank != other.target_rank:
            raise ValueError("rank mismatch in composition")
        z = self.ring.zero()
        rows = []
        for i in range(self.target_rank):
            row = []
            for j in range(other.source_rank):
                acc = z
                for k in range(self.source_rank):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return FreeMap(self.ring, rows, target_rank=self.target_rank, source_rank=other.source_rank)

    def __matmul__(self, other: "FreeMap") -> "FreeMap":
        return self.compose(other)

    def __add__(self, other: "FreeMap") -> "FreeMap":
        if (self.target_rank, self.source_rank) != (other.target_rank, other.source_rank):
            raise ValueError("shape mismatch")
        rows = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        return FreeMap(self.ring, rows, target_rank=self.target_rank, source_rank=self.source_rank)

    def __sub__(self, other: "FreeMap") -> "FreeMap":
        if (self.target_rank, self.source_rank) != (other.target_rank, other.source_rank):
            raise ValueError("shape mismatch")
        rows = [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        return FreeMap(self.ring, rows, target_rank=self.target_rank, source_rank=self.source_rank)

    def __neg__(self) -> "FreeMap":
        return FreeMap(self.ring, [[-p for p in r] for r in self.entries],
                       target_rank=self.target_rank, source_rank=self.source_rank)

    def scaled(self, g: Poly) -> "FreeMap":
        return FreeMap(self.ring, [[g * p for p in r] for r in self.entries],
                       target_rank=self.target_rank, source_rank=self.source_rank)

    def is_zero_map(self) -> bool:
        return all(p.is_zero() for r in self.entries for p in r)

    def __eq__(self, other):
        return (isinstance(other, FreeMap) and self.ring == other.ring
                and self.target_rank == other.target_rank
                and self.source_rank == other.source_rank
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring, self.target_rank, self.source_rank, self.entries))

    def __repr__(self):
        return f"FreeMap({self.target_rank}x{self.source_rank})"


class FPModule:
    """Cokernel presentation: A^rank modulo the relations submodule."""

    __slots__ = ("ring", "rank", "relations")

    def __init__(self, ring: RingSpec, rank: int, relations: SubmoduleBasis):
        if relations.ambient_rank != rank:
            raise ValueError(f"relations ambient rank {relations.ambient_rank} != module rank {rank}")
        if relations.ring != ring:
            raise ValueError("relations ring mismatch")
        self.ring = ring
        self.rank = rank
        self.relations = relations

    @classmethod
    def free(cls, ring: RingSpec, rank: int) -> "FPModule":
        return cls(ring, rank, SubmoduleBasis(ring, rank, []))

    @classmethod
    def cyclic(cls, ring: RingSpec, annihilators: Sequence[Poly]) -> "FPModule":
        """A/(annihilators) as a rank-1 presentation."""
        return cls(ring, 1, SubmoduleBasis(ring, 1, [(a,) for a in annihilators]))

    def basis_vector(self, i: int) -> tuple:
        z = self.ring.zero()
        return tuple(self.ring.one() if j == i else z for j in range(self.rank))

    def __eq__(self, other):
        return (isinstance(other, FPModule) and self.ring == other.ring
                and self.rank == other.rank and self.relations == other.relations)

    def __hash__(self):
        return hash((self.ring, self.rank, self.relations))

    def __repr__(self):
        return f"FPModule(rank={self.rank}, relations={len(self.relations.generators)})"


class Complex:
    """Bounded complex of free modules F_0 <- F_1 <- ... <- F_s.

    ranks[k] is the rank of F_k; differentials[k-1] is d_k : F_k -> F_{k-1}.
    d ∘ d = 0 is validated at construction.
    """

    __slots__ = ("ring", "ranks", "differentials")

    def __init__(self, ring: RingSpec, ranks: Sequence[int], differentials: Sequence[FreeMap]):
        ranks = tuple(ranks)
        differentials = tuple(differentials)
        if not ranks:
            raise ValueError("a complex needs at least one term")
        if len(differentials) != len(ranks) - 1:
            raise ValueError(f"expected {len(ranks) - 1} differentials, got {len(differentials)}")
        for k, d in enumerate(differentials, start=1):
            if d.ring != ring:
                raise ValueError("differential ring mismatch")
            if d.source_rank != ranks[k] or d.target_rank != ranks[k - 1]:
                raise ValueError(f"d_{k} has shape {d.target_rank}x{d.source_rank}, "
                                 f"expected {ranks[k - 1]}x{ranks[k]}")
        for k in range(1, len(differentials)):
            if not differentials[k - 1].compose(differentials[k]).is_zero_map():
                raise ValueError(f"not a complex: d_{k} ∘ d_{k + 1} != 0")
        self.ring = ring
        self.ranks = ranks
        self.differentials = differentials

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def differential(self, k: int) -> FreeMap:
        """d_k : F_k -> F_{k-1}, for 1 <= k <= length."""
        if not 1 <= k <= self.length:
            raise IndexError(f"no differential d_{k} in a length-{self.length} complex")
        return self.differentials[k - 1]

    def __repr__(self):
        return f"Complex(ranks={list(self.ranks)})"


# ---------------------------------------------------------------------------
# kernels / cokernels
# ---------------------------------------------------------------------------

def kernel_generators(m: FreeMap) -> list:
    """Reduced generating set for ker(m) — the columns returned by syzygies."""
    return syzygies(m.entries, m.ring, source_rank=m.source_rank)


def is_injective(m: FreeMap) -> bool:
    return not kernel_generators(m)


def cokernel(m: FreeMap) -> FPModule:
    rels = SubmoduleBasis(m.ring, m.target_rank, m.columns())
    return FPModule(m.ring, m.target_rank, rels)


def annihilator(M: FPModule) -> IdealBasis:
    """ann(M) = ∩_i (relations : e_i); each generator re-verified against M."""
    ring = M.ring
    if M.rank == 0:
        return IdealBasis(ring, [ring.one()])
    acc = None
    for i in range(M.rank):
        quot = module_quotient(M.relations, M.basis_vector(i))
        acc = quot if acc is None else ideal_intersection(acc, quot)
    for a in acc.generators:
        for i in range(M.rank):
            if not M.relations.contains_vector(tuple(a * c for c in M.basis_vector(i))):
                raise RuntimeError("annihilator generator failed re-verification")
    return acc


def submodule_equal(a: SubmoduleBasis, b: SubmoduleBasis) -> bool:
    if a.ring != b.ring or a.ambient_rank != b.ambient_rank:
        raise ValueError("ambient mismatch")
    return a == b


def is_zero_module(M: FPModule) -> bool:
    return all(M.relations.contains_vector(M.basis_vector(i)) for i in range(M.rank))


# ---------------------------------------------------------------------------
# Fitting ideals
# ---------------------------------------------------------------------------

def matrix_minor_det(entries: Sequence[Sequence[Poly]], rows: tuple, cols: tuple,
                     ring: RingSpec, memo: Optional[dict] = None) -> Poly:
    """Determinant of the square submatrix entries[rows][cols], division-free
    Laplace expansion along the first row, memoized on (rows, cols)."""
    if len(rows) != len(cols):
        raise ValueError("minor must be square")
    if memo is None:
        memo = {}
    return _minor(entries, rows, cols, ring, memo)


def _minor(entries, rows: tuple, cols: tuple, ring: RingSpec, memo: dict) -> Poly:
    if not rows:
        return ring.one()
    key = (rows, cols)
    hit = memo.get(key)
    if hit is not None:
        return hit
    r0 = rows[0]
    rest = rows[1:]
    acc = ring.zero()
    for j, c in enumerate(cols):
        e = entries[r0][c]
        if e.is_zero():
            continue
        sub = _minor(entries, rest, cols[:j] + cols[j + 1:], ring, memo)
        term = e * sub
        acc = acc + term if j % 2 == 0 else acc - term
    memo[key] = acc
    return acc


def determinant_of_square(m: FreeMap) -> Poly:
    if m.target_rank != m.source_rank:
        raise ValueError("determinant of a non-square map")
    n = m.target_rank
    return matrix_minor_det(m.entries, tuple(range(n)), tuple(range(n)), m.ring)


def fitting_ideal(m: FreeMap, t: int) -> IdealBasis:
    """Ideal of t×t minors of the matrix of m."""
    if t < 1 or t > min(m.source_rank, m.target_rank):
        raise ValueError(f"minor size {t} out of range for a "
                         f"{m.target_rank}x{m.source_rank} matrix")
    memo: dict = {}
    gens = []
    seen = set()
    for rows in combinations(range(m.target_rank), t):
        for cols in combinations(range(m.source_rank), t):
            d = matrix_minor_det(m.entries, rows, cols, m.ring, memo)
            if d.is_zero():
                continue
            mine = d.monic()
            key = tuple(sorted(mine.terms.items()))
            if key not in seen:
                seen.add(key)
                gens.append(d)
    return IdealBasis(m.ring, gens)


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------

def homology(c: Complex, k: int) -> FPModule:
    """H_k(c) presented on the kernel generators of d_k.

    Generators: the reduced syzygy basis of d_k (the full ambient basis at
    k = 0).  Relations: each column of d_{k+1}, rewritten in those kernel
    coordinates via an exact division certificate.
    """
    if not 0 <= k <= c.length:
        raise IndexError(f"homology index {k} out of range 0..{c.length}")
    ring = c.ring
    if k == 0:
        if c.length == 0:
            return FPModule.free(ring, c.ranks[0])
        return cokernel(c.differential(1))
    gens = kernel_generators(c.differential(k))
    ker_basis = submodule_from_reduced_gb(ring, c.ranks[k], gens)
    rel_vectors = []
    if k < c.length:
        for col in c.differential(k + 1).columns():
            rem, cert = ker_basis.nf_vector(col, want_cert=True)
            if any(not p.is_zero() for p in rem):
                raise RuntimeError("image column escaped the kernel — broken complex")
            rel_vectors.append(tuple(cert))
    rels = SubmoduleBasis(ring, len(gens), rel_vectors)
    return FPModule(ring, len(gens), rels)


def zero_spherical(c: Complex) -> bool:
    """True iff H_k(c) = 0 for every k >= 1."""
    for k in range(1, c.length + 1):
        gens = kernel_generators(c.differential(k))
        if not gens:
            continue
        if k == c.length:
            return False  # nonzero kernel at the top has no image to kill it
        image = SubmoduleBasis(c.ring, c.ranks[k], c.differential(k + 1).columns())
        if not all(image.contains_vector(g) for g in gens):
            return False
    return True


# ---------------------------------------------------------------------------
# lifting
# ---------------------------------------------------------------------------

def _graph_coordinates(vec: Sequence[Poly], cols: Sequence[Sequence[Poly]],
                       rels: SubmoduleBasis, ring: RingSpec, rank: int):
    """Coordinates of vec in terms of cols, modulo rels; None if not in the span.

    Works on the graph module generated by (col_j ⊕ e_j) and (rel ⊕ 0): the
    normal form of (vec ⊕ 0) has zero head iff vec lies in the span, and its
    tail is then the negated coordinate vector.
    """
    n = len(cols)
    z = ring.zero()
    gens = []
    for j, col in enumerate(cols):
        tail = [z] * n
        tail[j] = ring.one()
        gens.append(tuple(col) + tuple(tail))
    for r in rels.generators:
        gens.append(tuple(r) + (z,) * n)
    graph = SubmoduleBasis(ring, rank + n, gens)
    rem, _ = graph.nf_vector(tuple(vec) + (z,) * n)
    if any(not p.is_zero() for p in rem[:rank]):
        return None
    return [-p for p in rem[rank:]]


def lift_through_surjection(f: FreeMap, p: FreeMap, module: FPModule) -> FreeMap:
    """g with p∘g = f as maps into the module presented on the shared target.

    Both f and p land in module's ambient A^rank; equality holds modulo the
    module's relations and is re-verified before returning.
    """
    if f.target_rank != module.rank or p.target_rank != module.rank:
        raise ValueError("maps must share the module's ambient rank")
    ring = module.ring
    cols = p.columns()
    for i in range(module.rank):
        if _graph_coordinates(module.basis_vector(i), cols, module.relations, ring, module.rank) is None:
            raise LiftError("map is not surjective onto the module")
    g_cols = []
    for col in f.columns():
        u = _graph_coordinates(col, cols, module.relations, ring, module.rank)
        if u is None:
            raise LiftError("lift infeasible: column has no preimage")
        g_cols.append(tuple(u))
    g = FreeMap.from_columns(ring, p.source_rank, g_cols)
    check = p.compose(g)
    for j in range(f.source_rank):
        diff = tuple(a - b for a, b in zip(check.column(j), f.column(j)))
        if not module.relations.contains_vector(diff):
            raise RuntimeError("lift failed re-verification")
    return g


def min_annihilating_power(f: Poly, M: FPModule, cap: int) -> int:
    """Least m <= cap with f^m · M = 0; CapExceededError when none exists."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    power = M.ring.one()
    for m in range(1, cap + 1):
        power = power * f
        if all(M.relations.contains_vector(tuple(power * c for c in M.basis_vector(i)))
               for i in range(M.rank)):
            return m
    raise CapExceededError(f"no power of the element up to {cap} annihilates the module")
