"""Constructive resolution of module cubes by sums of typical cubes.

Given a V-cube z of finitely presented modules — boundaries injective modulo
relations, vertices killed by powers of f_u (u ∈ U), directional cokernels
supported on V(f_v) — this builds a direct sum y of typical cubes over
B = A/(g_U), g_s = f_s^{m_s}, together with vertex-wise surjections y → z.

The induction peels the first V-direction: resolve the front face, divide
the resulting epi through by g_v to land in the back face (solvable exactly
because g_v kills H_0 in that direction), resolve the back face to cover
the cokernel, and assemble with d^y = diag(g_v·1, 1).

Chains z(0) → z(1) are handled by resolving both targets and lifting the
composite w ∘ q(0) through q(1).  The lift recurses the same way: lift on
H_0 along the first direction, re-lift through the projection, push the
front-level solution into the back level through the injective boundary,
absorb the remaining defect by a homotopy through d^z, and bottom out in
module-level lifting.

B = A/(g_U) is represented by carrying g_U·(ambient basis) as extra
relations on A-presentations throughout; one Groebner engine suffices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Mapping, Optional, Sequence, Tuple, Union

from .arith import Poly, RingSpec
from .cube import ModCube, Report, _h0_modcube, _mod_injective, restrict, subset_key
from .groebner import SubmoduleBasis, radical_membership
from .koszul import is_A_sequence
from .modcalc import (
    FPModule,
    FreeMap,
    LiftError,
    _graph_coordinates,
    annihilator,
    lift_through_surjection,
    min_annihilating_power,
    submodule_equal,
)

__all__ = [
    "ResolutionInput",
    "ResolutionStage",
    "ResolutionOutput",
    "find_exponents",
    "koszul_resolve",
    "check_resolution",
]

VertexMaps = Dict[FrozenSet[str], FreeMap]


class ResolutionInput:
    """A target (or a two-term chain) to resolve, with its sequence data.

    fs maps every label in U ∪ V to its sequence entry.  targets holds one or
    two V-cubes of finitely presented modules; a bare FPModule is accepted as
    the V = () case.  connecting holds the chain maps z(i) → z(i+1) as
    vertex-keyed ambient matrices.  Structural checks (labels, shapes, rings)
    happen here; the mathematical hypotheses are re-verified by verify().
    """

    __slots__ = ("ring", "fs", "U", "V", "targets", "connecting")

    def __init__(self, fs: Mapping[str, Poly], U: Sequence[str], V: Sequence[str],
                 targets: Sequence[Union[ModCube, FPModule]],
                 connecting: Sequence[VertexMaps] = ()):
        self.U = tuple(U)
        self.V = tuple(V)
        if len(set(self.U)) != len(self.U) or len(set(self.V)) != len(self.V):
            raise ValueError("repeated labels")
        if set(self.U) & set(self.V):
            raise ValueError("U and V must be disjoint")
        targets = tuple(targets)
        if not 1 <= len(targets) <= 2:
            raise ValueError("provide one target or a chain of two")
        wrapped = []
        for z in targets:
            if isinstance(z, FPModule):
                if self.V:
                    raise ValueError("a bare module target needs V = ()")
                z = ModCube(z.ring, (), {frozenset(): z}, {})
            if tuple(z.labels) != self.V:
                raise ValueError(f"target labels {list(z.labels)} must equal V {list(self.V)}")
            wrapped.append(z)
        self.targets: Tuple[ModCube, ...] = tuple(wrapped)
        self.ring: RingSpec = self.targets[0].ring
        if any(z.ring != self.ring for z in self.targets):
            raise ValueError("targets must share one ring")
        fs = dict(fs)
        missing = (set(self.U) | set(self.V)) - set(fs)
        if missing:
            raise ValueError(f"sequence entries missing for labels {sorted(missing)}")
        for f in fs.values():
            if f.ring != self.ring:
                raise ValueError("sequence ring mismatch")
        self.fs = fs
        connecting = tuple(connecting)
        if len(connecting) != len(self.targets) - 1:
            raise ValueError("need exactly one connecting map per consecutive pair of targets")
        normalized = []
        for i, w in enumerate(connecting):
            w = {frozenset(T): m for T, m in w.items()}
            src, tgt = self.targets[i], self.targets[i + 1]
            if set(w) != set(src.subsets()):
                raise ValueError("connecting map must cover every vertex")
            for T, mat in w.items():
                if (mat.target_rank, mat.source_rank) != (tgt.vertex(T).rank, src.vertex(T).rank):
                    raise ValueError(f"connecting map shape mismatch at {{{subset_key(T)}}}")
            normalized.append(w)
        self.connecting: Tuple[VertexMaps, ...] = tuple(normalized)

    def verify(self) -> Report:
        """Re-verify the hypotheses the construction leans on.

        The sequence over U ∪ V is an A-sequence; every target is a valid
        module cube with boundaries injective modulo relations (also one
        level down, on H_0 along the first direction, when |V| = 2); every
        vertex is supported on V(f_u) for u ∈ U and every directional
        cokernel on V(f_v); connecting maps are cube morphisms.
        """
        failures = []
        seq = [self.fs[s] for s in self.U + self.V]
        if seq and not is_A_sequence(seq).a_sequence:
            failures.append("the sequence over U ∪ V is not an A-sequence")
        for j, z in enumerate(self.targets):
            rep = z.validate()
            if not rep.ok:
                failures.append(f"target {j} is not a valid module cube: {rep.failures[0]}")
                continue
            for T in z.subsets():
                for k in sorted(T):
                    if not _mod_injective(z.d(T, k), z.vertex(T), z.vertex(T - {k})):
                        failures.append(
                            f"target {j}: boundary d^{k} at {{{subset_key(T)}}} is not injective")
            if len(self.V) >= 2:
                H = _h0_modcube(z, self.V[0])
                for T in H.subsets():
                    for k in sorted(T):
                        if not _mod_injective(H.d(T, k), H.vertex(T), H.vertex(T - {k})):
                            failures.append(
                                f"target {j}: H_0^{self.V[0]} boundary d^{k} at "
                                f"{{{subset_key(T)}}} is not injective")
            for u in self.U:
                for T in z.subsets():
                    if not radical_membership(self.fs[u], annihilator(z.vertex(T))):
                        failures.append(
                            f"target {j}: vertex {{{subset_key(T)}}} is not supported on V(f_{u})")
            for v in self.V:
                rest = [lab for lab in self.V if lab != v]
                pieces = [frozenset()]
                for lab in rest:
                    pieces += [s | {lab} for s in pieces]
                for T in pieces:
                    amb = z.vertex(T)
                    rels = amb.relations.plus(SubmoduleBasis(
                        self.ring, amb.rank, z.d(T | {v}, v).columns()))
                    piece = FPModule(self.ring, amb.rank, rels)
                    if not radical_membership(self.fs[v], annihilator(piece)):
                        failures.append(
                            f"target {j}: H_0^{v} at {{{subset_key(T)}}} is not supported on V(f_{v})")
        for i, w in enumerate(self.connecting):
            src, tgt = self.targets[i], self.targets[i + 1]
            for T in src.subsets():
                if not all(tgt.vertex(T).relations.contains_vector(w[T].apply(r))
                           for r in src.vertex(T).relations.generators):
                    failures.append(
                        f"connecting map does not preserve relations at {{{subset_key(T)}}}")
                for k in sorted(T):
                    diff = w[T - {k}].compose(src.d(T, k)) - tgt.d(T, k).compose(w[T])
                    rel = tgt.vertex(T - {k}).relations
                    if not all(rel.contains_vector(diff.column(jj))
                               for jj in range(diff.source_rank)):
                        failures.append(
                            f"connecting square at {{{subset_key(T)}}} direction {k} fails")
        return Report(not failures, tuple(failures))


@dataclass(frozen=True)
class ResolutionStage:
    """One resolved target: the covering cube, its epi, and summand counts."""

    y: ModCube
    epi: VertexMaps
    multiplicities: Dict[FrozenSet[str], int]


@dataclass(frozen=True)
class ResolutionOutput:
    """Exponents, moduli g_s = f_s^{m_s}, per-target stages, and lifted chain maps."""

    exponents: Dict[str, int]
    g: Dict[str, Poly]
    stages: Tuple[ResolutionStage, ...]
    connecting: Tuple[VertexMaps, ...]


# ---------------------------------------------------------------------------
# exponents
# ---------------------------------------------------------------------------

def _h0_tot_module(z: ModCube) -> FPModule:
    """H_0(Tot z): the corner modulo its relations and all arrival images."""
    amb = z.vertex(frozenset())
    rels = amb.relations
    for v in z.labels:
        rels = rels.plus(SubmoduleBasis(z.ring, amb.rank, z.d(frozenset({v}), v).columns()))
    return FPModule(z.ring, amb.rank, rels)


def find_exponents(inp: ResolutionInput, cap: int = 64) -> Dict[str, int]:
    """Least m_s ≤ cap per label: f_u^{m_u} kills every vertex of every target;
    f_v^{m_v} kills H_0(Tot) of every target.  Raises CapExceededError when a
    power runs past the cap and ValueError when the input hypotheses fail."""
    rep = inp.verify()
    if not rep.ok:
        raise ValueError("input hypotheses violated: " + "; ".join(rep.failures[:3]))
    out: Dict[str, int] = {}
    for u in inp.U:
        out[u] = max(min_annihilating_power(inp.fs[u], z.vertex(T), cap)
                     for z in inp.targets for T in z.subsets())
    for v in inp.V:
        out[v] = max(min_annihilating_power(inp.fs[v], _h0_tot_module(z), cap)
                     for z in inp.targets)
    return out


# ---------------------------------------------------------------------------
# the induction
# ---------------------------------------------------------------------------

def _gU_relations(ring: RingSpec, rank: int, gU: Sequence[Poly]) -> SubmoduleBasis:
    z = ring.zero()
    gens = []
    for gu in gU:
        for i in range(rank):
            vec = [z] * rank
            vec[i] = gu
            gens.append(tuple(vec))
    return SubmoduleBasis(ring, rank, gens)


def _resolve_cube(z: ModCube, gU: Sequence[Poly], g: Dict[str, Poly]):
    """(y, epi, multiplicities) covering the module cube z, by induction on |V|."""
    ring = z.ring
    if not z.labels:
        M = z.vertex(frozenset())
        r = M.rank
        for gu in gU:
            for i in range(r):
                if not M.relations.contains_vector(tuple(gu * c for c in M.basis_vector(i))):
                    raise LiftError("the modulus does not annihilate the target module")
        y = ModCube(ring, (), {frozenset(): FPModule(ring, r, _gU_relations(ring, r, gU))}, {})
        return y, {frozenset(): FreeMap.identity(ring, r)}, {frozenset(): r}
    v = z.labels[0]
    rest = tuple(lab for lab in z.labels if lab != v)
    z0 = restrict(z, rest, frozenset())
    y0, p0, l0 = _resolve_cube(z0, gU, g)
    gv = g[v]
    # divide the front epi through by g_v: d^z ∘ s ≡ g_v · p0, solvable iff
    # g_v kills H_0 in direction v at each vertex
    s: VertexMaps = {}
    for A in z0.subsets():
        dz = z.d(A | {v}, v)
        rel0 = z0.vertex(A).relations
        cols = dz.columns()
        s_cols = []
        for j in range(p0[A].source_rank):
            vec = tuple(gv * c for c in p0[A].column(j))
            coords = _graph_coordinates(vec, cols, rel0, ring, dz.target_rank)
            if coords is None:
                raise LiftError(
                    f"lifting infeasible: g_{v} times generator {j} at vertex "
                    f"{{{subset_key(A)}}} has no preimage under the {v}-boundary "
                    "(the modulus fails to kill H_0 in that direction)")
            s_cols.append(tuple(coords))
        s[A] = FreeMap.from_columns(ring, dz.source_rank, s_cols)
    z1 = restrict(z, rest, frozenset({v}))
    y1, p1, l1 = _resolve_cube(z1, gU, g)
    L0 = y0.vertex(frozenset()).rank
    L1 = y1.vertex(frozenset()).rank
    L = L0 + L1
    subs = [frozenset()]
    for lab in z.labels:
        subs += [t | {lab} for t in subs]
    verts = {T: FPModule(ring, L, _gU_relations(ring, L, gU)) for T in subs}
    boundary = {}
    for T in subs:
        for k in T:
            if k == v:
                boundary[(T, k)] = FreeMap.block_diag(
                    FreeMap.scalar(ring, gv, L0), FreeMap.identity(ring, L1))
            else:
                boundary[(T, k)] = FreeMap.block_diag(
                    y0.d(T - {v}, k), y1.d(T - {v}, k))
    epi: VertexMaps = {}
    for T in subs:
        A = T - {v}
        if v in T:
            epi[T] = FreeMap.hstack(s[A], p1[A])
        else:
            epi[T] = FreeMap.hstack(p0[A], z.d(A | {v}, v).compose(p1[A]))
    mult = {Tp | {v}: c for Tp, c in l0.items()}
    mult.update({W: c for W, c in l1.items()})
    return ModCube(ring, z.labels, verts, boundary), epi, mult


def _summand_order(labels: Sequence[str]):
    """Subsets of the labels in assembly order: first label's block first."""
    subs = [frozenset()]
    for lab in labels:
        subs += [s | {lab} for s in subs]
    return sorted(subs, key=lambda T: tuple(0 if lab in T else 1 for lab in labels))


def _typical_sum_cube(ring: RingSpec, labels: Sequence[str], g: Dict[str, Poly],
                      mult: Dict[FrozenSet[str], int], gU: Sequence[Poly]) -> ModCube:
    """The declared shape: ⊕_T Typ_B(g^T)^{mult[T]} with g^T_v = g_v or 1."""
    blocks = []
    for T in _summand_order(labels):
        blocks.extend([T] * mult.get(T, 0))
    L = len(blocks)
    subs = [frozenset()]
    for lab in labels:
        subs += [s | {lab} for s in subs]
    verts = {A: FPModule(ring, L, _gU_relations(ring, L, gU)) for A in subs}
    z = ring.zero()
    one = ring.one()
    boundary = {}
    for A in subs:
        for k in A:
            rows = [[(g[k] if k in blocks[i] else one) if i == j else z
                     for j in range(L)] for i in range(L)]
            boundary[(A, k)] = FreeMap(ring, rows, target_rank=L, source_rank=L)
    return ModCube(ring, tuple(labels), verts, boundary)


# ---------------------------------------------------------------------------
# lifting a cube morphism through an epi of resolution cubes
# ---------------------------------------------------------------------------

def _lift_cube(f: VertexMaps, x: ModCube, q: VertexMaps, y: ModCube, z: ModCube) -> VertexMaps:
    """t: x → y with q∘t ≡ f modulo z's vertex relations, a cube morphism mod y's.

    x and y are resolution cubes (free ambients modulo g_U), z the target the
    epi q lands in.  Recursion on the first direction v: lift on H_0^v, then
    through the projection onto H_0^v(y), push to the back level through the
    injective d^y, absorb the front defect f − q∘s′ by a homotopy through
    d^z, lift that homotopy through the back epi, and assemble
    t₁ = s′₁ + u∘d^x, t₀ = s′₀ + d^y∘u.  Soundness needs d^z injective
    modulo relations, which ResolutionInput.verify() establishes.
    """
    ring = x.ring
    if not x.labels:
        key = frozenset()
        return {key: lift_through_surjection(f[key], q[key], z.vertex(key))}
    v = x.labels[0]
    rest = tuple(lab for lab in x.labels if lab != v)
    x0 = restrict(x, rest, frozenset())
    y0 = restrict(y, rest, frozenset())
    y1 = restrict(y, rest, frozenset({v}))
    z0 = restrict(z, rest, frozenset())
    z1 = restrict(z, rest, frozenset({v}))
    Hx = _h0_modcube(x, v)
    Hy = _h0_modcube(y, v)
    Hz = _h0_modcube(z, v)
    sub_rest = x0.subsets()
    f0 = {A: f[A] for A in sub_rest}
    q0 = {A: q[A] for A in sub_rest}
    q1 = {A: q[A | {v}] for A in sub_rest}
    sigma = _lift_cube(f0, Hx, q0, Hy, Hz)
    idmaps = {A: FreeMap.identity(ring, y0.vertex(A).rank) for A in sub_rest}
    s0p = _lift_cube(sigma, x0, idmaps, y0, Hy)
    s1p: VertexMaps = {}
    for A in sub_rest:
        dy = y.d(A | {v}, v)
        dx = x.d(A | {v}, v)
        rhs = s0p[A].compose(dx)
        cols = dy.columns()
        rel = y0.vertex(A).relations
        out_cols = []
        for j in range(rhs.source_rank):
            coords = _graph_coordinates(rhs.column(j), cols, rel, ring, dy.target_rank)
            if coords is None:
                raise LiftError(
                    f"lift failed: front solution does not factor through the "
                    f"{v}-boundary at {{{subset_key(A)}}}")
            out_cols.append(tuple(coords))
        s1p[A] = FreeMap.from_columns(ring, dy.source_rank, out_cols)
    h: VertexMaps = {}
    for A in sub_rest:
        defect = f[A] - q[A].compose(s0p[A])
        dz = z.d(A | {v}, v)
        rel = z0.vertex(A).relations
        cols = dz.columns()
        out_cols = []
        for j in range(defect.source_rank):
            coords = _graph_coordinates(defect.column(j), cols, rel, ring, dz.target_rank)
            if coords is None:
                raise LiftError(
                    f"lift failed: homotopy defect escapes the {v}-boundary image "
                    f"at {{{subset_key(A)}}}")
            out_cols.append(tuple(coords))
        h[A] = FreeMap.from_columns(ring, dz.source_rank, out_cols)
    u = _lift_cube(h, x0, q1, y1, z1)
    t: VertexMaps = {}
    for A in sub_rest:
        dx = x.d(A | {v}, v)
        dy = y.d(A | {v}, v)
        t[A] = s0p[A] + dy.compose(u[A])
        t[A | {v}] = s1p[A] + u[A].compose(dx)
    return t


# ---------------------------------------------------------------------------
# driver and verification
# ---------------------------------------------------------------------------

def koszul_resolve(inp: ResolutionInput, cap: int = 64) -> ResolutionOutput:
    """Resolve every target and lift the chain maps; verified before returning.

    The verification failure path raises RuntimeError — the construction is
    theorem-backed, so a failed check means a bug, not bad input (bad input
    is rejected earlier by verify()/find_exponents, or surfaces as LiftError
    with the offending generator).
    """
    if len(inp.V) > 2:
        raise ValueError("at most two V-directions are supported")
    m = find_exponents(inp, cap)
    g = {s: inp.fs[s] ** e for s, e in m.items()}
    gU = [g[u] for u in inp.U]
    stages = []
    for z in inp.targets:
        y, epi, mult = _resolve_cube(z, gU, g)
        stages.append(ResolutionStage(y, epi, mult))
    connecting = []
    for i, w in enumerate(inp.connecting):
        f = {A: w[A].compose(stages[i].epi[A]) for A in stages[i].y.subsets()}
        t = _lift_cube(f, stages[i].y, stages[i + 1].epi, stages[i + 1].y, inp.targets[i + 1])
        connecting.append(t)
    out = ResolutionOutput(m, g, tuple(stages), tuple(connecting))
    rep = check_resolution(out, inp)
    if not rep.ok:
        raise RuntimeError("constructed resolution failed verification: "
                           + "; ".join(rep.failures[:3]))
    return out


def check_resolution(out: ResolutionOutput, inp: ResolutionInput) -> Report:
    """Independent re-verification of a resolution.

    (a) every vertex map is surjective onto its target module;
    (b) every stage cube equals the shape declared by its multiplicities
        (diagonal g-power boundaries, g_U relations);
    (c) the induced map on H_0(Tot) is surjective;
    (d) all squares commute modulo the target presentations — within each
        stage, and around the connecting maps for chains.
    """
    failures = []
    ring = inp.ring
    gU = [out.g[u] for u in inp.U]
    for idx, (stage, z) in enumerate(zip(out.stages, inp.targets)):
        y, epi, mult = stage.y, stage.epi, stage.multiplicities
        tag = f"stage {idx}"
        for T in z.subsets():
            M = z.vertex(T)
            cols = epi[T].columns()
            for i in range(M.rank):
                if _graph_coordinates(M.basis_vector(i), cols, M.relations, ring, M.rank) is None:
                    failures.append(
                        f"(a) {tag}: epi at {{{subset_key(T)}}} misses basis vector {i}")
                    break
        expected = _typical_sum_cube(ring, z.labels, out.g, mult, gU)
        shapes_ok = True
        for T in y.subsets():
            if y.vertex(T).rank != expected.vertex(T).rank:
                failures.append(f"(b) {tag}: rank mismatch at {{{subset_key(T)}}}")
                shapes_ok = False
            elif not submodule_equal(y.vertex(T).relations, expected.vertex(T).relations):
                failures.append(
                    f"(b) {tag}: relations at {{{subset_key(T)}}} differ from the declared modulus")
        if shapes_ok:
            for T in y.subsets():
                for k in sorted(T):
                    if y.d(T, k) != expected.d(T, k):
                        failures.append(
                            f"(b) {tag}: boundary d^{k} at {{{subset_key(T)}}} is not the "
                            "declared diagonal")
        H = _h0_tot_module(z)
        cols = epi[frozenset()].columns()
        for i in range(H.rank):
            if _graph_coordinates(H.basis_vector(i), cols, H.relations, ring, H.rank) is None:
                failures.append(f"(c) {tag}: induced map on H_0(Tot) is not surjective")
                break
        for T in z.subsets():
            for k in sorted(T):
                diff = epi[T - {k}].compose(y.d(T, k)) - z.d(T, k).compose(epi[T])
                rel = z.vertex(T - {k}).relations
                if not all(rel.contains_vector(diff.column(j))
                           for j in range(diff.source_rank)):
                    failures.append(
                        f"(d) {tag}: square at {{{subset_key(T)}}} direction {k} fails")
    for i, t in enumerate(out.connecting):
        w = inp.connecting[i]
        y_src = out.stages[i].y
        y_tgt = out.stages[i + 1].y
        epi_src = out.stages[i].epi
        epi_tgt = out.stages[i + 1].epi
        z_tgt = inp.targets[i + 1]
        for T in y_src.subsets():
            diff = epi_tgt[T].compose(t[T]) - w[T].compose(epi_src[T])
            rel = z_tgt.vertex(T).relations
            if not all(rel.contains_vector(diff.column(j)) for j in range(diff.source_rank)):
                failures.append(
                    f"(d) connecting square at {{{subset_key(T)}}} fails (stage {i}→{i + 1})")
            for k in sorted(T):
                diff = t[T - {k}].compose(y_src.d(T, k)) - y_tgt.d(T, k).compose(t[T])
                rel = y_tgt.vertex(T - {k}).relations
                if not all(rel.contains_vector(diff.column(j))
                           for j in range(diff.source_rank)):
                    failures.append(
                        f"(d) connecting map is not a cube morphism at {{{subset_key(T)}}} "
                        f"direction {k}")
    return Report(not failures, tuple(failures))
