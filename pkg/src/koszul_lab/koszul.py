"""Koszul cubes over a polynomial ring.

A cube is Koszul with respect to a sequence (f_s) when every boundary in
direction k is injective with cokernel supported on V(f_k).  This module
checks that, plus the satellite notions that make the class useful:
regular/A-sequences with failure witnesses, typical cubes Typ(f), the
reduced variant (f_k kills the cokernel on the nose), per-direction
determinants and their unit-coherence, the Buchsbaum–Eisenbud acyclicity
criterion, the weight decomposition data, the presentation of H_0(Tot) by
arrival boundaries, and a seeded generator of base-changed sums of typical
cubes for the test corpus.

Everything theorem-shaped (determinants form an A-sequence, Koszul implies
admissible, BE agrees with homology) is exposed as a checkable verdict so
the suite can use the theorems as live oracles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .arith import Poly, RingSpec, exact_division, is_unit
from .cube import (
    Cube,
    Report,
    degenerate_directions,
    nondegenerate_part,
    restrict,
    subset_key,
    total_complex,
    validate_cube,
)
from .groebner import (
    IdealBasis,
    SubmoduleBasis,
    grade,
    ideal_quotient,
    radical_membership,
)
from .modcalc import (
    CapExceededError,
    Complex,
    FPModule,
    FreeMap,
    annihilator,
    cokernel,
    determinant_of_square,
    fitting_ideal,
    is_injective,
    submodule_equal,
    zero_spherical,
)

__all__ = [
    "SequenceReport",
    "KoszulVerdict",
    "is_regular_sequence",
    "is_A_sequence",
    "factor_sequence_check",
    "typical_cube",
    "is_koszul_cube",
    "is_reduced_koszul",
    "koszul_nondegenerate_part",
    "determinant",
    "det_is_a_sequence",
    "be_acyclicity",
    "verify_weight_decomposition",
    "generators_presentation",
    "random_koszul",
]


@dataclass(frozen=True)
class SequenceReport:
    """Verdict of a regular/A-sequence check.

    On failure, failing_index is the 1-based position i in the failing order
    and witness w satisfies w·f_i ∈ (f_1..f_{i-1}) but w ∉ (f_1..f_{i-1}).
    A unit entry fails with witness None (there is no quotient to mine).
    For is_A_sequence, failing_permutation is the first order (in
    itertools.permutations order) that breaks, and index/witness refer to it.
    """

    sequence: Tuple[Poly, ...]
    regular: bool
    a_sequence: Optional[bool] = None
    failing_permutation: Optional[Tuple[Poly, ...]] = None
    failing_index: Optional[int] = None
    witness: Optional[Poly] = None


@dataclass(frozen=True)
class KoszulVerdict:
    """Per-boundary diagnostics of the Koszul condition.

    diagnostics maps "T|k" (serialized subset, direction) to injectivity and
    support flags.  The projective-dimension bound on each cokernel needs no
    computation — an injection of free modules presents its cokernel with
    pd ≤ 1 — and is recorded as a note.  The optional fields are filled by
    the dedicated entry points (is_reduced_koszul, determinant,
    det_is_a_sequence); this keeps the basic check cheap.
    """

    is_koszul: bool
    diagnostics: Dict[str, dict]
    pd_note: str = "pd(coker) <= 1 by construction: cokernel of an injection of free modules"
    is_reduced: Optional[bool] = None
    determinant: Optional[Dict[str, Poly]] = None
    det_is_a_sequence: Optional[bool] = None


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------

def _regular_check(seq: Sequence[Poly]):
    """(ok, failing index 1-based, witness) for one fixed order."""
    if not seq:
        return True, None, None
    ring = seq[0].ring
    for i, f in enumerate(seq, start=1):
        if is_unit(f):
            return False, i, None
        prefix = IdealBasis(ring, list(seq[:i - 1]))
        quot = ideal_quotient(prefix, f)
        if quot != prefix:
            witness = next(g for g in quot.reduced_gb if not prefix.contains(g))
            return False, i, witness
    return True, None, None


def is_regular_sequence(fs: Sequence[Poly]) -> SequenceReport:
    """Is each f_i a nonunit and a nonzerodivisor modulo its predecessors?

    The quotient test ((f_1..f_{i-1}) : f_i) = (f_1..f_{i-1}) decides this
    exactly; a failure yields a witness straight from the quotient's reduced
    Groebner basis.
    """
    fs = tuple(fs)
    ok, idx, wit = _regular_check(fs)
    return SequenceReport(fs, ok, failing_index=idx, witness=wit)


def is_A_sequence(fs: Sequence[Poly], perm_cap: int = 6) -> SequenceReport:
    """Regular under every permutation (the order-free strengthening).

    All len(fs)! orders are checked, so the length is capped (default 6).
    Prefix ideals repeat heavily across permutations and hit the Groebner
    cache, which keeps this affordable.
    """
    fs = tuple(fs)
    if len(fs) > perm_cap:
        raise CapExceededError(
            f"A-sequence check on {len(fs)} elements exceeds the permutation cap {perm_cap}")
    reg_ok, reg_idx, reg_wit = _regular_check(fs)
    if not reg_ok:
        return SequenceReport(fs, False, a_sequence=False, failing_permutation=fs,
                              failing_index=reg_idx, witness=reg_wit)
    for perm in permutations(range(len(fs))):
        order = tuple(fs[i] for i in perm)
        ok, idx, wit = _regular_check(order)
        if not ok:
            return SequenceReport(fs, True, a_sequence=False, failing_permutation=order,
                                  failing_index=idx, witness=wit)
    return SequenceReport(fs, True, a_sequence=True)


def factor_sequence_check(fs: Sequence[Poly], gs: Sequence[Poly], perm_cap: int = 6) -> Report:
    """Live check of the factor lemma: (f_i·g_i) an A-sequence ⇒ (f_i) one too.

    Both verdicts are computed and reported; the report fails only in the
    forbidden quadrant (hypothesis holds, conclusion fails), which would be a
    genuine bug-detection event rather than bad input.
    """
    fs = tuple(fs)
    gs = tuple(gs)
    if len(fs) != len(gs):
        raise ValueError(f"sequence length mismatch: {len(fs)} vs {len(gs)}")
    for f in fs:
        if is_unit(f):
            raise ValueError("the factor lemma requires nonunit entries in the first sequence")
    hs = tuple(f * g for f, g in zip(fs, gs))
    hyp = is_A_sequence(hs, perm_cap=perm_cap)
    conc = is_A_sequence(fs, perm_cap=perm_cap)
    applicable = bool(hyp.a_sequence)
    violated = applicable and not conc.a_sequence
    failures = ()
    if violated:
        failures = ("products form an A-sequence but the factors do not",)
    return Report(not violated, failures, info={
        "hypothesis_a_sequence": bool(hyp.a_sequence),
        "conclusion_a_sequence": bool(conc.a_sequence),
        "applicable": applicable,
    })


# ---------------------------------------------------------------------------
# typical cubes and the Koszul condition
# ---------------------------------------------------------------------------

def typical_cube(fs: Sequence[Poly], labels: Optional[Sequence[str]] = None,
                 ring: Optional[RingSpec] = None) -> Cube:
    """Typ(f): every vertex A, boundary in direction t is multiplication by f_t.

    Labels default to "1".."n".  Its total complex is the classical Koszul
    complex of the sequence.  Koszulness of the result requires fs to be an
    A-sequence, which is deliberately not enforced here so that failing
    inputs can be built and diagnosed.
    """
    fs = tuple(fs)
    if ring is None:
        if not fs:
            raise ValueError("ring required for the empty typical cube")
        ring = fs[0].ring
    if labels is None:
        labels = tuple(str(i + 1) for i in range(len(fs)))
    labels = tuple(labels)
    if len(labels) != len(fs):
        raise ValueError("one label per sequence entry")
    by_label = dict(zip(labels, fs))
    subs = [frozenset()]
    for lab in labels:
        subs += [s | {lab} for s in subs]
    ranks = {T: 1 for T in subs}
    boundary = {(T, k): FreeMap(ring, [[by_label[k]]]) for T in subs for k in T}
    return Cube(ring, labels, ranks, boundary)


def _sequence_by_label(x: Cube, fs) -> Dict[str, Poly]:
    if isinstance(fs, Mapping):
        out = dict(fs)
        if set(out) != set(x.labels):
            raise ValueError("sequence labels do not match the cube's labels")
        return out
    fs = tuple(fs)
    if len(fs) != len(x.labels):
        raise ValueError(
            f"sequence length {len(fs)} does not match {len(x.labels)} cube directions")
    return dict(zip(x.labels, fs))


def is_koszul_cube(x: Cube, fs) -> KoszulVerdict:
    """Every boundary d^k_T injective with cokernel supported on V(f_k).

    Support is the radical-membership test of f_k against the cokernel's
    annihilator.  Diagnostics cover every (T,k) pair even after a failure,
    so a bad cube reports all of its defects at once.
    """
    report = validate_cube(x)
    if not report.ok:
        raise ValueError("invalid cube: " + "; ".join(report.failures))
    seq = _sequence_by_label(x, fs)
    diagnostics: Dict[str, dict] = {}
    ok = True
    for T in x.subsets():
        for k in sorted(T):
            m = x.d(T, k)
            inj = is_injective(m)
            supp = radical_membership(seq[k], annihilator(cokernel(m)))
            diagnostics[f"{subset_key(T)}|{k}"] = {"injective": inj, "support": supp}
            ok = ok and inj and supp
    return KoszulVerdict(ok, diagnostics)


def is_reduced_koszul(x: Cube, fs) -> bool:
    """Does f_k annihilate coker d^k_T on the nose (not just up to radical)?

    Precondition: the cube is Koszul for fs; violated preconditions raise.
    """
    verdict = is_koszul_cube(x, fs)
    if not verdict.is_koszul:
        raise ValueError("not a Koszul cube with respect to the given sequence")
    seq = _sequence_by_label(x, fs)
    z = x.ring.zero()
    for T in x.subsets():
        for k in sorted(T):
            m = x.d(T, k)
            colmod = SubmoduleBasis(x.ring, m.target_rank, m.columns())
            f = seq[k]
            for i in range(m.target_rank):
                e = [z] * m.target_rank
                e[i] = f
                if not colmod.contains_vector(tuple(e)):
                    return False
    return True


def koszul_nondegenerate_part(x: Cube, fs) -> Cube:
    """nondegenerate_part via the cheap top-boundary shortcut.

    On a Koszul cube, invertibility of d^k at the top subset forces
    invertibility of every parallel boundary, so only one determinant per
    direction is needed.  The Koszul precondition is verified here; asking
    for the shortcut on an unverified cube raises.
    """
    verdict = is_koszul_cube(x, fs)
    if not verdict.is_koszul:
        raise ValueError("shortcut degeneracy detection requires a verified Koszul cube")
    return nondegenerate_part(x, koszul_shortcut=True)


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------

def determinant(x: Cube) -> Tuple[Dict[str, Poly], Report]:
    """Per-direction determinants det d^k at the top subset, plus coherence.

    Coherence: all vertices share one rank and, for every (T,k), the ratio
    det d^k_T / det d^k_S is a nonzero constant — decided by exact division.
    Incoherence on a cube that passed is_koszul_cube means a bug, so the
    verdict is returned rather than assumed.
    """
    report = validate_cube(x)
    if not report.ok:
        raise ValueError("invalid cube: " + "; ".join(report.failures))
    ranks = {x.vertex_rank[T] for T in x.subsets()}
    if len(ranks) > 1:
        return {}, Report(False, (f"vertices do not share a rank: {sorted(ranks)}",))
    S = frozenset(x.labels)
    dets = {k: determinant_of_square(x.d(S, k)) for k in x.labels}
    failures = []
    for T in x.subsets():
        for k in sorted(T):
            dT = determinant_of_square(x.d(T, k))
            q = exact_division(dT, dets[k])
            if q is None or not is_unit(q):
                failures.append(
                    f"det d^{k} at {{{subset_key(T)}}} is not a unit multiple of the top determinant")
    return dets, Report(not failures, tuple(failures))


def det_is_a_sequence(x: Cube, perm_cap: int = 6) -> bool:
    """A-sequence verdict for the determinant sequence of a non-degenerate cube.

    The theorem says this is always true for non-degenerate free Koszul
    cubes; the suite treats a False here as a bug-detection event.
    """
    deg = degenerate_directions(x)
    if deg:
        raise ValueError(
            f"degenerate directions {sorted(deg)}: their determinants are units, "
            "take the nondegenerate part first")
    dets, coherence = determinant(x)
    if not coherence.ok:
        raise ValueError("determinant incoherence: " + "; ".join(coherence.failures))
    return bool(is_A_sequence([dets[k] for k in x.labels], perm_cap=perm_cap).a_sequence)


# ---------------------------------------------------------------------------
# acyclicity by expected ranks
# ---------------------------------------------------------------------------

def be_acyclicity(c: Complex) -> Report:
    """Exactness in positive degrees via expected ranks and minor-ideal grades.

    r_i = Σ_{j≥i} (−1)^{j−i} rank F_j; the verdict is true iff
    grade I_{r_i}(d_i) ≥ i for every i.  Degenerate expected ranks (r_i ≤ 0
    or larger than the matrix) are rejected loudly — the criterion has
    nothing to say about such complexes.
    """
    s = c.length
    r = {i: sum((-1) ** (j - i) * c.ranks[j] for j in range(i, s + 1))
         for i in range(1, s + 1)}
    for i in range(1, s + 1):
        d = c.differential(i)
        if r[i] <= 0 or r[i] > min(d.target_rank, d.source_rank):
            raise ValueError(
                f"expected rank r_{i} = {r[i]} is out of range for the "
                f"{d.target_rank}x{d.source_rank} differential d_{i}")
    failures = []
    grades: Dict[int, object] = {}
    fittings: Dict[int, IdealBasis] = {}
    for i in range(1, s + 1):
        ideal = fitting_ideal(c.differential(i), r[i])
        g = grade(ideal)
        grades[i] = g
        fittings[i] = ideal
        if not g >= i:
            failures.append(f"grade of the r_{i}-minor ideal of d_{i} is {g}, needs >= {i}")
    return Report(not failures, tuple(failures),
                  info={"r": r, "grades": grades, "fitting": fittings})


# ---------------------------------------------------------------------------
# weight decomposition and generators
# ---------------------------------------------------------------------------

def verify_weight_decomposition(x: Cube, fs) -> Report:
    """Support and sphericity data behind the weight decomposition.

    For every disjoint pair (T, U) of label subsets: each f_t (t ∈ T) passes
    the radical test against the annihilator of the iterated-H_0 vertex at U
    (presented by the T-arrival columns), and Tot(x|_T^U) is 0-spherical —
    the resolution witness for the projective-dimension bound.
    """
    verdict = is_koszul_cube(x, fs)
    if not verdict.is_koszul:
        raise ValueError("weight decomposition requires a verified Koszul cube")
    seq = _sequence_by_label(x, fs)
    ring = x.ring
    failures = []
    pairs = 0
    for T in x.subsets():
        rest = [lab for lab in x.labels if lab not in T]
        rest_subsets = [frozenset()]
        for lab in rest:
            rest_subsets += [s | {lab} for s in rest_subsets]
        for U in rest_subsets:
            pairs += 1
            rank = x.vertex_rank[U]
            cols = []
            for t in sorted(T):
                cols.extend(x.d(U | {t}, t).columns())
            piece = FPModule(ring, rank, SubmoduleBasis(ring, rank, cols))
            ann = annihilator(piece)
            for t in sorted(T):
                if not radical_membership(seq[t], ann):
                    failures.append(
                        f"support: f_{t} fails the radical test for weight {{{subset_key(T)}}} "
                        f"at {{{subset_key(U) or '{}'}}}")
            if not zero_spherical(total_complex(restrict(x, T, U))):
                failures.append(
                    f"Tot of the restriction to {{{subset_key(T)}}} over "
                    f"{{{subset_key(U) or '{}'}}} is not 0-spherical")
    return Report(not failures, tuple(failures), info={"pairs_checked": pairs})


def generators_presentation(x: Cube, perm_cap: int = 6):
    """(H_0(Tot x) presented by arrival boundaries, determinant A-sequence report).

    The module is x_∅ modulo the images of the p maps d^k_{{k}}; that span is
    asserted equal to the degree-1 image of the total complex before
    returning.  Requires a non-degenerate cube with coherent determinants.
    """
    deg = degenerate_directions(x)
    if deg:
        raise ValueError(
            f"degenerate directions {sorted(deg)} — take the nondegenerate part first")
    dets, coherence = determinant(x)
    if not coherence.ok:
        raise ValueError("determinant incoherence: " + "; ".join(coherence.failures))
    ring = x.ring
    rank0 = x.vertex_rank[frozenset()]
    cols = []
    for k in x.labels:
        cols.extend(x.d(frozenset({k}), k).columns())
    rels = SubmoduleBasis(ring, rank0, cols)
    tot = total_complex(x)
    if tot.length:
        denom = SubmoduleBasis(ring, rank0, tot.differential(1).columns())
        if not submodule_equal(rels, denom):
            raise RuntimeError("arrival-boundary span disagrees with the Tot degree-1 image")
    seq_report = is_A_sequence([dets[k] for k in x.labels], perm_cap=perm_cap)
    return FPModule(ring, rank0, rels), seq_report


# ---------------------------------------------------------------------------
# randomized corpus generator
# ---------------------------------------------------------------------------

def _random_constant(rng: random.Random, ring: RingSpec) -> Poly:
    p = ring.field.char
    if p:
        return ring.const(rng.randrange(1, p))
    return ring.const(rng.randint(1, 5))


def _elementary_product(ring: RingSpec, n: int, factors) -> FreeMap:
    out = FreeMap.identity(ring, n)
    for (i, j, c) in factors:
        rows = [list(r) for r in FreeMap.identity(ring, n).entries]
        rows[i][j] = rows[i][j] + c
        out = out.compose(FreeMap(ring, rows, target_rank=n, source_rank=n))
    return out


def random_koszul(fs: Sequence[Poly], summands: int, basechange_steps: int, seed: int,
                  labels: Optional[Sequence[str]] = None) -> Cube:
    """Seeded Koszul cube: base-changed direct sum of power-tweaked typical cubes.

    Summand 0 uses the sequence as given; extra summands may square entries.
    Each vertex gets an invertible base change built from elementary matrices
    (unit diagonal), and boundaries are conjugated d ↦ P_{T∖{k}} d P_T^{-1},
    which preserves commutativity and Koszulness by construction.  Inverses
    are exact (reversed factors with negated off-diagonal entries).

    Off-diagonal entries are constants, except that when no entry was squared
    at most one linear entry may appear per vertex, and only at vertices of
    even subset size — so boundary entries never exceed degree
    1 + max degree of a squared sequence entry (degree 2 for variable
    sequences, which is what the generated suites use).

    The result is asserted to pass validate_cube and is_koszul_cube; a
    failure raises rather than returning a bad cube.
    """
    fs = tuple(fs)
    if not fs:
        raise ValueError("need a nonempty sequence")
    if len(fs) > 4:
        raise ValueError("at most 4 directions")
    if not 1 <= summands <= 4:
        raise ValueError("summands must be between 1 and 4")
    if not 0 <= basechange_steps <= 12:
        raise ValueError("basechange_steps must be between 0 and 12")
    cert = is_A_sequence(fs)
    if not cert.a_sequence:
        raise ValueError("the sequence must be an A-sequence")
    ring = fs[0].ring
    if labels is None:
        labels = tuple(str(i + 1) for i in range(len(fs)))
    labels = tuple(labels)
    if len(labels) != len(fs):
        raise ValueError("one label per sequence entry")
    rng = random.Random(seed)
    expo = [[1] * len(fs)]
    for _ in range(summands - 1):
        expo.append([rng.choice((1, 2)) for _ in fs])
    any_power = any(e == 2 for row in expo for e in row)
    powered = [[fs[j] ** row[j] for j in range(len(fs))] for row in expo]
    by_label = {lab: j for j, lab in enumerate(labels)}
    subs = [frozenset()]
    for lab in labels:
        subs += [s | {lab} for s in subs]
    z = ring.zero()
    diag = {}
    for k in labels:
        j = by_label[k]
        rows = [[powered[i][j] if i == i2 else z for i2 in range(summands)]
                for i in range(summands)]
        diag[k] = FreeMap(ring, rows, target_rank=summands, source_rank=summands)
    if summands == 1 or basechange_steps == 0:
        boundary = {(T, k): diag[k] for T in subs for k in T}
    else:
        P = {}
        Pinv = {}
        for T in sorted(subs, key=lambda s: (len(s), subset_key(s))):
            factors = []
            linear_used = False
            for _ in range(basechange_steps):
                i, jj = rng.sample(range(summands), 2)
                coeff = _random_constant(rng, ring)
                if (not any_power and not linear_used and len(T) % 2 == 0
                        and rng.random() < 0.5):
                    coeff = coeff * ring.var(rng.choice(ring.variables))
                    linear_used = True
                factors.append((i, jj, coeff))
            P[T] = _elementary_product(ring, summands, factors)
            Pinv[T] = _elementary_product(
                ring, summands, [(i, jj, -c) for (i, jj, c) in reversed(factors)])
        boundary = {(T, k): P[T - {k}].compose(diag[k]).compose(Pinv[T])
                    for T in subs for k in T}
    out = Cube(ring, labels, {T: summands for T in subs}, boundary)
    check = validate_cube(out)
    if not check.ok:
        raise RuntimeError("generated cube failed validation: " + "; ".join(check.failures))
    verdict = is_koszul_cube(out, {lab: fs[by_label[lab]] for lab in labels})
    if not verdict.is_koszul:
        raise RuntimeError("generated cube failed the Koszul check")
    return out
