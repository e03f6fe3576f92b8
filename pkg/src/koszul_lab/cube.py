"""Cubes of free (and finitely presented) modules indexed by subsets of S.

A cube assigns a module to every subset T of a finite label set S and a
boundary map d^k_T : x_T -> x_{T\\{k}} to every k in T, subject to the
commuting-square law d^l ∘ d^k = d^k ∘ d^l.  This module provides validation,
restriction to faces, degeneracy detection, the total complex (with the usual
alternating signs), directional homology H_0^k / H_1^k, iterated H_0, and
three equivalent admissibility checkers that are cross-checked in the tests.

Free-valued cubes (`Cube`) are the primary input type; homology produces
`ModCube`s whose vertices are cokernel presentations on the same ambient
ranks, so boundary matrices are reused unchanged and order-independence
statements become literal submodule equalities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

from .arith import Poly, RingSpec, is_unit
from .groebner import SubmoduleBasis, syzygies
from .modcalc import (
    Complex,
    FPModule,
    FreeMap,
    cokernel,
    determinant_of_square,
    homology,
    is_injective,
    is_zero_module,
    submodule_equal,
    zero_spherical,
)

__all__ = [
    "Cube",
    "ModCube",
    "CubeOrdering",
    "Report",
    "subset_key",
    "validate_cube",
    "restrict",
    "degenerate_directions",
    "nondegenerate_part",
    "total_complex",
    "directional_homology",
    "iterated_h0",
    "is_admissible",
    "ADMISSIBILITY_STRATEGIES",
]


def subset_key(subset: Iterable[str]) -> str:
    """Canonical serialization of a label subset: sorted, comma-joined."""
    return ",".join(sorted(subset))


def _normalize_subset(subset: Iterable[str], labels: Sequence[str]) -> FrozenSet[str]:
    s = frozenset(subset)
    unknown = s - set(labels)
    if unknown:
        raise ValueError(f"labels {sorted(unknown)} not in cube labels {list(labels)}")
    return s


@dataclass(frozen=True)
class Report:
    """Pass/fail verdict with human-readable failure strings."""

    ok: bool
    failures: Tuple[str, ...] = ()
    info: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


class CubeOrdering:
    """Bijection from cube labels to positions 1..n (the sign convention input)."""

    __slots__ = ("sequence", "_pos")

    def __init__(self, sequence: Sequence[str]):
        sequence = tuple(sequence)
        if len(set(sequence)) != len(sequence):
            raise ValueError("ordering must be a bijection (repeated label)")
        self.sequence = sequence
        self._pos = {lab: i + 1 for i, lab in enumerate(sequence)}

    def position(self, label: str) -> int:
        return self._pos[label]

    def __repr__(self):
        return f"CubeOrdering({list(self.sequence)})"


class _CubeBase:
    """Shared subset/boundary bookkeeping for free and module-valued cubes."""

    labels: tuple
    ring: RingSpec
    boundary: dict

    def subsets(self) -> list:
        """All 2^n subsets, ordered by (size, serialized key)."""
        out = [frozenset()]
        for lab in self.labels:
            out += [s | {lab} for s in out]
        return sorted(out, key=lambda s: (len(s), subset_key(s)))

    def subsets_of_size(self, k: int) -> list:
        return [s for s in self.subsets() if len(s) == k]

    def d(self, T: Iterable[str], k: str) -> FreeMap:
        T = _normalize_subset(T, self.labels)
        if k not in T:
            raise ValueError(f"direction {k!r} not in subset {subset_key(T) or '{}'}")
        return self.boundary[(T, k)]

    def _check_boundary_keys(self, vertex_keys: set):
        needed = {(T, k) for T in vertex_keys for k in T}
        have = set(self.boundary)
        if needed != have:
            missing = {(subset_key(T), k) for (T, k) in needed - have}
            extra = {(subset_key(T), k) for (T, k) in have - needed}
            raise ValueError(f"boundary keys mismatch: missing {sorted(missing)}, extra {sorted(extra)}")


class Cube(_CubeBase):
    """A cube of free modules: ranks per subset, FreeMap per (subset, direction).

    Construction checks shapes and key completeness only; the commuting-square
    law is checked by validate_cube so that invalid cubes can be constructed
    and reported on.
    """

    __slots__ = ("labels", "ring", "vertex_rank", "boundary")

    def __init__(self, ring: RingSpec, labels: Sequence[str],
                 vertex_rank: Dict[FrozenSet[str], int],
                 boundary: Dict[Tuple[FrozenSet[str], str], FreeMap]):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("cube labels must be distinct")
        self.labels = labels
        self.ring = ring
        vertex_rank = {frozenset(T): r for T, r in vertex_rank.items()}
        boundary = {(frozenset(T), k): m for (T, k), m in boundary.items()}
        all_subsets = [frozenset()]
        for lab in labels:
            all_subsets += [s | {lab} for s in all_subsets]
        if set(vertex_rank) != set(all_subsets):
            raise ValueError("vertex_rank must cover exactly the subsets of the labels")
        for r in vertex_rank.values():
            if r < 0:
                raise ValueError("vertex rank must be non-negative")
        self.vertex_rank = vertex_rank
        self.boundary = boundary
        self._check_boundary_keys(set(all_subsets))
        for (T, k), m in boundary.items():
            if m.ring != ring:
                raise ValueError("boundary ring mismatch")
            src, tgt = vertex_rank[T], vertex_rank[T - {k}]
            if (m.source_rank, m.target_rank) != (src, tgt):
                raise ValueError(
                    f"boundary d^{k}_{{{subset_key(T)}}} has shape {m.target_rank}x{m.source_rank},"
                    f" expected {tgt}x{src}")

    def rank(self, T: Iterable[str]) -> int:
        return self.vertex_rank[_normalize_subset(T, self.labels)]

    def as_modcube(self) -> "ModCube":
        verts = {T: FPModule.free(self.ring, self.vertex_rank[T]) for T in self.vertex_rank}
        return ModCube(self.ring, self.labels, verts, dict(self.boundary))

    def __repr__(self):
        return f"Cube(labels={list(self.labels)})"


class ModCube(_CubeBase):
    """A cube of finitely presented modules sharing boundary matrices on ambients."""

    __slots__ = ("labels", "ring", "vertices", "boundary")

    def __init__(self, ring: RingSpec, labels: Sequence[str],
                 vertices: Dict[FrozenSet[str], FPModule],
                 boundary: Dict[Tuple[FrozenSet[str], str], FreeMap]):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("cube labels must be distinct")
        self.labels = labels
        self.ring = ring
        vertices = {frozenset(T): M for T, M in vertices.items()}
        boundary = {(frozenset(T), k): m for (T, k), m in boundary.items()}
        all_subsets = [frozenset()]
        for lab in labels:
            all_subsets += [s | {lab} for s in all_subsets]
        if set(vertices) != set(all_subsets):
            raise ValueError("vertices must cover exactly the subsets of the labels")
        self.vertices = vertices
        self.boundary = boundary
        self._check_boundary_keys(set(all_subsets))
        for (T, k), m in boundary.items():
            src, tgt = vertices[T].rank, vertices[T - {k}].rank
            if (m.source_rank, m.target_rank) != (src, tgt):
                raise ValueError(
                    f"boundary d^{k}_{{{subset_key(T)}}} has shape {m.target_rank}x{m.source_rank},"
                    f" expected {tgt}x{src}")

    def vertex(self, T: Iterable[str]) -> FPModule:
        return self.vertices[_normalize_subset(T, self.labels)]

    def validate(self) -> Report:
        """Well-definedness (relations map into relations) plus squares mod relations."""
        failures = []
        for (T, k), m in sorted(self.boundary.items(), key=lambda item: (subset_key(item[0][0]), item[0][1])):
            tgt = self.vertices[T - {k}]
            for rel in self.vertices[T].relations.generators:
                if not tgt.relations.contains_vector(m.apply(rel)):
                    failures.append(
                        f"boundary d^{k}_{{{subset_key(T)}}} does not preserve relations")
                    break
        for T in self.subsets():
            for k in sorted(T):
                for l in sorted(T):
                    if l <= k:
                        continue
                    lhs = self.d(T - {k}, l).compose(self.d(T, k))
                    rhs = self.d(T - {l}, k).compose(self.d(T, l))
                    diff = lhs - rhs
                    tgt = self.vertices[T - {k, l}]
                    if not all(tgt.relations.contains_vector(diff.column(j))
                               for j in range(diff.source_rank)):
                        failures.append(
                            f"square at {{{subset_key(T)}}} in directions {k},{l} does not commute")
        return Report(not failures, tuple(failures))

    def __repr__(self):
        return f"ModCube(labels={list(self.labels)})"


# ---------------------------------------------------------------------------
# validation / restriction / degeneracy
# ---------------------------------------------------------------------------

def validate_cube(x: Cube) -> Report:
    """Check every commuting square d^l ∘ d^k = d^k ∘ d^l; list all violations."""
    failures = []
    for T in x.subsets():
        for k in sorted(T):
            for l in sorted(T):
                if l <= k:
                    continue
                lhs = x.d(T - {k}, l).compose(x.d(T, k))
                rhs = x.d(T - {l}, k).compose(x.d(T, l))
                if lhs != rhs:
                    failures.append(
                        f"square at {{{subset_key(T)}}} in directions {k},{l} does not commute")
    return Report(not failures, tuple(failures))


def restrict(x, U: Iterable[str], V: Iterable[str]):
    """x|_U^V: the cube over U whose vertex at A is x's vertex at A ∪ V.

    U and V must be disjoint subsets of the labels.  Works for both free and
    module-valued cubes; the label order of U is inherited from x.
    """
    U = _normalize_subset(U, x.labels)
    V = _normalize_subset(V, x.labels)
    if U & V:
        raise ValueError(f"restriction subsets overlap: {sorted(U & V)}")
    labels = tuple(lab for lab in x.labels if lab in U)
    sub = [frozenset()]
    for lab in labels:
        sub += [s | {lab} for s in sub]
    boundary = {(A, k): x.d(A | V, k) for A in sub for k in A}
    if isinstance(x, Cube):
        ranks = {A: x.vertex_rank[A | V] for A in sub}
        return Cube(x.ring, labels, ranks, boundary)
    verts = {A: x.vertices[A | V] for A in sub}
    return ModCube(x.ring, labels, verts, boundary)


def _is_invertible(m: FreeMap) -> bool:
    if m.source_rank != m.target_rank:
        return False
    return is_unit(determinant_of_square(m))


def degenerate_directions(x: Cube, koszul_shortcut: bool = False) -> frozenset:
    """Labels k along which the cube is degenerate (all d^k invertible).

    With koszul_shortcut=True only d^k_S is examined — valid exactly when the
    cube is a verified Koszul cube, where invertibility of the top boundary
    forces invertibility of all parallel ones.  Callers are responsible for
    that verification (see the koszul module's wrapper).
    """
    S = frozenset(x.labels)
    out = set()
    for k in x.labels:
        if koszul_shortcut:
            if _is_invertible(x.d(S, k)):
                out.add(k)
            continue
        parallel = [T | {k} for T in restrict(x, S - {k}, frozenset()).subsets()]
        if all(_is_invertible(x.d(T, k)) for T in parallel):
            out.add(k)
    return frozenset(out)


def nondegenerate_part(x: Cube, koszul_shortcut: bool = False) -> Cube:
    """restrict(x, S ∖ degenerate directions, ∅)."""
    deg = degenerate_directions(x, koszul_shortcut=koszul_shortcut)
    return restrict(x, frozenset(x.labels) - deg, frozenset())


# ---------------------------------------------------------------------------
# total complex
# ---------------------------------------------------------------------------

def total_complex(x: Cube, ordering: Optional[CubeOrdering] = None) -> Complex:
    """Tot(x): degree k is ⊕_{|T|=k} x_T, components ordered by serialized subset.

    The component of the differential from summand T to T∖{j} is
    (−1)^{#{t ∈ T : α(t) > α(j)}} · d^j_T, where α is the ordering (labels in
    their declared order by default).  The Complex constructor re-asserts
    d ∘ d = 0.
    """
    report = validate_cube(x)
    if not report.ok:
        raise ValueError("invalid cube: " + "; ".join(report.failures))
    if ordering is None:
        ordering = CubeOrdering(x.labels)
    if sorted(ordering.sequence) != sorted(x.labels):
        raise ValueError("ordering is not a bijection on the cube's labels")
    n = len(x.labels)
    ring = x.ring
    layers = []  # per degree: list of subsets in canonical order
    offsets = []  # per degree: subset -> starting row/column
    ranks = []
    for k in range(n + 1):
        subs = sorted((s for s in x.subsets() if len(s) == k), key=subset_key)
        layers.append(subs)
        off = {}
        total = 0
        for s in subs:
            off[s] = total
            total += x.vertex_rank[s]
        offsets.append(off)
        ranks.append(total)
    z = ring.zero()
    diffs = []
    for k in range(1, n + 1):
        rows = [[z] * ranks[k] for _ in range(ranks[k - 1])]
        for T in layers[k]:
            col0 = offsets[k][T]
            for j in sorted(T):
                sign = sum(1 for t in T if ordering.position(t) > ordering.position(j)) % 2
                m = x.d(T, j)
                row0 = offsets[k - 1][T - {j}]
                for i in range(m.target_rank):
                    for jj in range(m.source_rank):
                        entry = m.entries[i][jj]
                        rows[row0 + i][col0 + jj] = -entry if sign else entry
        diffs.append(FreeMap(ring, rows, target_rank=ranks[k - 1], source_rank=ranks[k]))
    return Complex(ring, ranks, diffs)


# ---------------------------------------------------------------------------
# directional homology
# ---------------------------------------------------------------------------

def _h0_modcube(x: ModCube, k: str) -> ModCube:
    """H_0^k of a module cube: same ambient ranks, relations enlarged by im d^k."""
    if k not in x.labels:
        raise ValueError(f"direction {k!r} not a label")
    labels = tuple(lab for lab in x.labels if lab != k)
    sub = [frozenset()]
    for lab in labels:
        sub += [s | {lab} for s in sub]
    verts = {}
    for T in sub:
        amb = x.vertices[T]
        dk = x.d(T | {k}, k)
        rels = amb.relations.plus(SubmoduleBasis(x.ring, amb.rank, dk.columns()))
        verts[T] = FPModule(x.ring, amb.rank, rels)
    boundary = {(T, l): x.d(T, l) for T in sub for l in T}
    return ModCube(x.ring, labels, verts, boundary)


def directional_homology(x: Cube, k: str, p: int) -> ModCube:
    """H_p^k(x) as a module cube over S∖{k}; p must be 0 or 1.

    p = 0: vertex at T is coker(d^k_{T∪{k}}), presented on x's ambient at T
    with the boundary matrices unchanged (functoriality makes them
    well-defined; the result re-validates).

    p = 1: vertex at T presents ker(d^k_{T∪{k}}) on its reduced syzygy
    generators; induced boundaries are d^l in kernel coordinates.
    """
    report = validate_cube(x)
    if not report.ok:
        raise ValueError("invalid cube: " + "; ".join(report.failures))
    if p == 0:
        out = _h0_modcube(x.as_modcube(), k)
        check = out.validate()
        if not check.ok:
            raise RuntimeError("induced H_0 cube failed validation: " + "; ".join(check.failures))
        return out
    if p != 1:
        raise ValueError("homological degree must be 0 or 1")
    from .modcalc import _graph_coordinates
    labels = tuple(lab for lab in x.labels if lab != k)
    sub = [frozenset()]
    for lab in labels:
        sub += [s | {lab} for s in sub]
    gens_at: dict = {}
    verts = {}
    for T in sub:
        gens = syzygies(x.d(T | {k}, k).entries, x.ring, source_rank=x.vertex_rank[T | {k}])
        gens_at[T] = gens
        if gens:
            rels = SubmoduleBasis(x.ring, len(gens),
                                  syzygies([[g[i] for g in gens] for i in range(x.vertex_rank[T | {k}])],
                                           x.ring, source_rank=len(gens)))
        else:
            rels = SubmoduleBasis(x.ring, 0, [])
        verts[T] = FPModule(x.ring, len(gens), rels)
    boundary = {}
    empty_rels_cache: dict = {}
    for T in sub:
        for l in T:
            src_gens = gens_at[T]
            tgt_gens = gens_at[T - {l}]
            tgt_amb = x.vertex_rank[(T - {l}) | {k}]
            if tgt_amb not in empty_rels_cache:
                empty_rels_cache[tgt_amb] = SubmoduleBasis(x.ring, tgt_amb, [])
            dl = x.d(T | {k}, l)
            cols = []
            for g in src_gens:
                img = dl.apply(g)
                coords = _graph_coordinates(img, tgt_gens, empty_rels_cache[tgt_amb], x.ring, tgt_amb)
                if coords is None:
                    raise RuntimeError("kernel image escaped the target kernel — broken cube")
                cols.append(tuple(coords))
            boundary[(T, l)] = FreeMap.from_columns(x.ring, len(tgt_gens), cols)
    return ModCube(x.ring, labels, verts, boundary)


def iterated_h0(x: Cube, T: Iterable[str], orders: Optional[Sequence[Sequence[str]]] = None):
    """Iterate H_0 over the directions in T; returns (ModCube over S∖T, verdict).

    The first order drives the returned cube; the verdict records whether the
    denominator submodule at every vertex agrees across all requested orders
    (default: the label order on T plus its reverse).  Requires admissibility
    of x when |T| ≥ 2, per the iterated-homology hypothesis.
    """
    T = _normalize_subset(T, x.labels)
    if orders is None:
        base = [lab for lab in x.labels if lab in T]
        orders = [base] if len(T) < 2 else [base, list(reversed(base))]
    norm_orders = []
    for o in orders:
        o = list(o)
        if sorted(o) != sorted(T):
            raise ValueError(f"order {o} is not a permutation of {sorted(T)}")
        norm_orders.append(o)
    if len(T) >= 2:
        verdict = is_admissible(x, strategy="definition")
        if not verdict.ok:
            raise ValueError("iterated H_0 requires an admissible cube: "
                             + "; ".join(verdict.failures[:3]))
    results = []
    for o in norm_orders:
        mc = x.as_modcube()
        for k in o:
            mc = _h0_modcube(mc, k)
        results.append(mc)
    first = results[0]
    agree = True
    for other in results[1:]:
        for W in first.subsets():
            if not submodule_equal(first.vertex(W).relations, other.vertex(W).relations):
                agree = False
    return first, agree


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

def _mod_injective(m: FreeMap, src: FPModule, tgt: FPModule) -> bool:
    """Is the induced map A^a/rel_src -> A^b/rel_tgt injective?

    The preimage of rel_tgt under m is spanned by the first-block parts of the
    syzygies of [m | rel_tgt]; injectivity says that span lies in rel_src.
    """
    cols = m.columns() + list(tgt.relations.generators)
    rows = [[c[i] for c in cols] for i in range(tgt.rank)]
    syz = syzygies(rows, m.ring, source_rank=len(cols))
    for col in syz:
        u = col[:m.source_rank]
        if not src.relations.contains_vector(u):
            return False
    return True


def _free_cube_boundaries_injective(x: Cube, failures: list, prefix: str) -> bool:
    ok = True
    for T in x.subsets():
        for k in sorted(T):
            if not is_injective(x.d(T, k)):
                failures.append(f"{prefix}boundary d^{k}_{{{subset_key(T)}}} is not injective")
                ok = False
    return ok


def _admissible_definition(mc: ModCube, failures: list, prefix: str) -> bool:
    if not mc.labels:
        return True
    ok = True
    for T in mc.subsets():
        for k in sorted(T):
            if not _mod_injective(mc.d(T, k), mc.vertex(T), mc.vertex(T - {k})):
                failures.append(f"{prefix}boundary d^{k}_{{{subset_key(T)}}} is not injective")
                ok = False
    if not ok:
        return False
    for k in mc.labels:
        sub = _h0_modcube(mc, k)
        if not _admissible_definition(sub, failures, f"{prefix}H0^{k}·"):
            ok = False
    return ok


def _admissible_spherical(x: Cube, failures: list, prefix: str) -> bool:
    if not x.labels:
        return True
    ok = True
    tot = total_complex(x)
    bad = [k for k in range(1, tot.length + 1) if not is_zero_module(homology(tot, k))]
    if bad:
        failures.append(f"{prefix}Tot is not 0-spherical: H_{bad[0]} is nonzero")
        ok = False
    S = frozenset(x.labels)
    for k in x.labels:
        for V, tag in ((frozenset(), "front"), (frozenset({k}), "back")):
            face = restrict(x, S - {k}, V)
            if not _admissible_spherical(face, failures, f"{prefix}{tag}^{k}·"):
                ok = False
    return ok


def _admissible_inductive(mc: ModCube, failures: list, prefix: str) -> bool:
    if not mc.labels:
        return True
    s = mc.labels[0]
    rest = frozenset(mc.labels) - {s}
    ok = True
    for V, tag in ((frozenset(), "front"), (frozenset({s}), "back")):
        face = restrict(mc, rest, V)
        if not _admissible_inductive(face, failures, f"{prefix}{tag}^{s}·"):
            ok = False
    for T in restrict(mc, rest, frozenset()).subsets():
        m = mc.d(T | {s}, s)
        if not _mod_injective(m, mc.vertex(T | {s}), mc.vertex(T)):
            failures.append(f"{prefix}boundary d^{s}_{{{subset_key(T | {s})}}} is not injective")
            ok = False
    if ok:
        sub = _h0_modcube(mc, s)
        if not _admissible_inductive(sub, failures, f"{prefix}H0^{s}·"):
            ok = False
    return ok


ADMISSIBILITY_STRATEGIES = ("definition", "spherical_faces", "inductive")


def is_admissible(x: Cube, strategy: str = "definition") -> Report:
    """Admissibility verdict under one of three equivalent strategies.

    definition: all boundaries are injective and every H_0^k cube is
    recursively admissible.  spherical_faces: Tot(x) is 0-spherical and all
    front/back faces are recursively admissible.  inductive: the two faces in
    the first label's direction are admissible, that direction's boundaries
    are injective, and H_0 in that direction is admissible.
    """
    report = validate_cube(x)
    if not report.ok:
        raise ValueError("invalid cube: " + "; ".join(report.failures))
    failures: list = []
    if strategy == "definition":
        ok = _admissible_definition(x.as_modcube(), failures, "")
    elif strategy == "spherical_faces":
        ok = _admissible_spherical(x, failures, "")
    elif strategy == "inductive":
        ok = _admissible_inductive(x.as_modcube(), failures, "")
    else:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {ADMISSIBILITY_STRATEGIES}")
    return Report(ok, tuple(failures), {"strategy": strategy})
