"""Koszul cubes, sequence conditions, determinants, acyclicity, generators."""

import pytest

from koszul_lab.arith import RingSpec, parse_poly
from koszul_lab.cube import Cube, subset_key, total_complex, validate_cube
from koszul_lab.groebner import IdealBasis, SubmoduleBasis
from koszul_lab.koszul import (
    be_acyclicity,
    det_is_a_sequence,
    determinant,
    factor_sequence_check,
    generators_presentation,
    is_A_sequence,
    is_koszul_cube,
    is_reduced_koszul,
    is_regular_sequence,
    koszul_nondegenerate_part,
    random_koszul,
    typical_cube,
    verify_weight_decomposition,
)
from koszul_lab.modcalc import (
    CapExceededError,
    Complex,
    FreeMap,
    submodule_equal,
    zero_spherical,
)

Q2 = RingSpec("Q", ("x", "y"))
Q3 = RingSpec("Q", ("x", "y", "z"))
F101 = RingSpec(101, ("x", "y"))
X, Y = Q2.gens()

E = frozenset()
S1 = frozenset({"1"})
S2 = frozenset({"2"})
S12 = frozenset({"1", "2"})


def P(s, ring=Q2):
    return parse_poly(s, ring)


def rank1_square(a, b, c, d, ring=Q2):
    """d^1 = a at {1}, b at {1,2}; d^2 = c at {2}, d at {1,2} (needs a*d = c*b)."""
    return Cube(ring, ("1", "2"), {E: 1, S1: 1, S2: 1, S12: 1},
                {(S1, "1"): FreeMap(ring, [[P(a, ring)]]),
                 (S2, "2"): FreeMap(ring, [[P(c, ring)]]),
                 (S12, "1"): FreeMap(ring, [[P(b, ring)]]),
                 (S12, "2"): FreeMap(ring, [[P(d, ring)]])})


# --------------------------------------------------------------------------
# regular / A-sequences
# --------------------------------------------------------------------------

def test_regular_sequence_basic():
    assert is_regular_sequence([X, Y]).regular
    rep = is_regular_sequence([X, X])
    assert not rep.regular and rep.failing_index == 2 and str(rep.witness) == "1"
    unit = is_regular_sequence([Q2.const(2)])
    assert not unit.regular and unit.failing_index == 1 and unit.witness is None
    assert is_regular_sequence([]).regular


def test_regular_but_not_a_sequence():
    # the classic discriminating example: x, y(1-x), z(1-x)
    x, y, z = Q3.gens()
    fs = [x, y * (Q3.one() - x), z * (Q3.one() - x)]
    assert is_regular_sequence(fs).regular
    rep = is_A_sequence(fs)
    assert rep.regular and rep.a_sequence is False
    assert rep.failing_index == 2
    assert str(rep.witness) == "y"
    # re-verify the witness against the failing permutation
    perm = rep.failing_permutation
    prefix = IdealBasis(Q3, list(perm[:rep.failing_index - 1]))
    assert prefix.contains(rep.witness * perm[rep.failing_index - 1])
    assert not prefix.contains(rep.witness)


def test_powers_still_a_sequence():
    assert is_A_sequence([X ** 2, Y ** 3]).a_sequence


def test_a_sequence_perm_cap():
    x, y, z = Q3.gens()
    with pytest.raises(CapExceededError):
        is_A_sequence([x, y, z], perm_cap=2)


def test_factor_sequence_check():
    rep = factor_sequence_check([X ** 2, Y ** 3], [X, Y])
    assert rep.ok
    assert rep.info["applicable"] and rep.info["conclusion_a_sequence"]
    # hypothesis fails -> vacuously fine, still ok
    rep2 = factor_sequence_check([X, X], [Y, Y])
    assert rep2.ok and not rep2.info["applicable"]
    with pytest.raises(ValueError):
        factor_sequence_check([X], [X, Y])
    with pytest.raises(ValueError):
        factor_sequence_check([Q2.one()], [X])


# --------------------------------------------------------------------------
# typical cubes and the Koszul condition
# --------------------------------------------------------------------------

def test_typical_cube_shape():
    t = typical_cube([X, Y])
    assert t.labels == ("1", "2")
    assert all(t.vertex_rank[T] == 1 for T in t.subsets())
    assert t.d(S12, "1") == FreeMap(Q2, [[X]])
    assert t.d(S2, "2") == FreeMap(Q2, [[Y]])
    named = typical_cube([X], labels=["a"])
    assert named.labels == ("a",)
    empty = typical_cube([], ring=Q2)
    assert empty.labels == () and empty.vertex_rank[E] == 1
    with pytest.raises(ValueError):
        typical_cube([])


def test_typical_is_koszul_and_reduced():
    t = typical_cube([X, Y])
    v = is_koszul_cube(t, [X, Y])
    assert v.is_koszul
    assert set(v.diagnostics) == {"1|1", "1,2|1", "2|2", "1,2|2"}
    assert all(d["injective"] and d["support"] for d in v.diagnostics.values())
    assert "pd" in v.pd_note
    assert is_reduced_koszul(t, [X, Y])


def test_koszul_rejects_wrong_support():
    # boundaries multiply by y in direction 1, but direction 1 claims f = x
    t = typical_cube([Y, Y])
    v = is_koszul_cube(t, [X, Y])
    assert not v.is_koszul
    assert not v.diagnostics["1|1"]["support"]
    assert v.diagnostics["1|1"]["injective"]


def test_koszul_rejects_noninjective():
    z = Cube(Q2, ("1",), {E: 1, S1: 1}, {(S1, "1"): FreeMap.zero(Q2, 1, 1)})
    v = is_koszul_cube(z, [X])
    assert not v.is_koszul and not v.diagnostics["1|1"]["injective"]


def test_koszul_power_boundary_not_reduced():
    t = typical_cube([X ** 2])
    assert is_koszul_cube(t, [X]).is_koszul   # supported on V(x), injective
    assert not is_reduced_koszul(t, [X])      # but x itself does not kill coker
    assert is_reduced_koszul(t, [X ** 2])
    with pytest.raises(ValueError):
        is_reduced_koszul(typical_cube([Y, Y]), [X, Y])  # not Koszul at all


def test_sequence_by_mapping():
    t = typical_cube([X, Y], labels=["a", "b"])
    assert is_koszul_cube(t, {"a": X, "b": Y}).is_koszul


def test_koszul_nondegenerate_part():
    # direction 1 is an isomorphism: still Koszul (coker = 0), but degenerate
    c = rank1_square("1", "1", "y", "y")
    assert is_koszul_cube(c, [X, Y]).is_koszul
    nd = koszul_nondegenerate_part(c, [X, Y])
    assert nd.labels == ("2",)
    assert nd.d(S2, "2") == FreeMap(Q2, [[Y]])


# --------------------------------------------------------------------------
# determinants
# --------------------------------------------------------------------------

def test_determinant_typical():
    dets, rep = determinant(typical_cube([X, Y]))
    assert rep.ok
    assert dets == {"1": X, "2": Y}


def test_determinant_incoherent():
    # commuting (x*xy^2 = y^2*x^2) but det ratio x^2/x is not a unit
    c = rank1_square("x", "x^2", "y^2", "x*y^2")
    dets, rep = determinant(c)
    assert not rep.ok
    with pytest.raises(ValueError):
        det_is_a_sequence(c)


def test_det_is_a_sequence():
    assert det_is_a_sequence(typical_cube([X, Y])) is True
    with pytest.raises(ValueError):
        det_is_a_sequence(rank1_square("1", "1", "y", "y"))  # degenerate direction


def test_determinant_rank_mismatch():
    c = Cube(Q2, ("1",), {E: 2, S1: 1},
             {(S1, "1"): FreeMap(Q2, [[X], [Y]])})
    dets, rep = determinant(c)
    assert not rep.ok


# --------------------------------------------------------------------------
# Buchsbaum–Eisenbud
# --------------------------------------------------------------------------

def test_be_acyclicity_on_koszul_complex():
    rep = be_acyclicity(total_complex(typical_cube([X, Y])))
    assert rep.ok
    assert rep.info["r"] == {1: 1, 2: 1}
    assert rep.info["grades"][1] >= 1 and rep.info["grades"][2] >= 2


def test_be_acyclicity_rejects_corrupted():
    c = total_complex(typical_cube([X, Y]))
    zeroed = Complex(Q2, c.ranks,
                     (FreeMap.zero(Q2, c.ranks[0], c.ranks[1]), c.differential(2)))
    rep = be_acyclicity(zeroed)
    assert not rep.ok
    assert not zero_spherical(zeroed)


def test_be_acyclicity_edge_ranks():
    with pytest.raises(ValueError):
        be_acyclicity(Complex(Q2, (1, 2), (FreeMap(Q2, [[X, Y]]),)))
    d2 = FreeMap.zero(Q2, 1, 2)
    d1 = FreeMap(Q2, [[X], [Y]])
    with pytest.raises(ValueError):
        be_acyclicity(Complex(Q2, (2, 1, 2), (d1, d2)))


def test_be_matches_sphericity_simple():
    good = Complex(Q2, (1, 1), (FreeMap(Q2, [[X]]),))
    assert be_acyclicity(good).ok == zero_spherical(good)
    bad = Complex(Q2, (1, 1), (FreeMap.zero(Q2, 1, 1),))
    assert be_acyclicity(bad).ok == zero_spherical(bad)


# --------------------------------------------------------------------------
# weight decomposition / generators
# --------------------------------------------------------------------------

def test_weight_decomposition_typical():
    rep = verify_weight_decomposition(typical_cube([X, Y]), [X, Y])
    assert rep.ok
    assert rep.info["pairs_checked"] == 9  # 3^2 disjoint (T, U) pairs


def test_generators_presentation():
    M, cert = generators_presentation(typical_cube([X, Y]))
    assert M.rank == 1
    assert submodule_equal(M.relations, SubmoduleBasis(Q2, 1, [(X,), (Y,)]))
    assert cert.a_sequence
    with pytest.raises(ValueError):
        generators_presentation(rank1_square("1", "1", "y", "y"))


# --------------------------------------------------------------------------
# random generation
# --------------------------------------------------------------------------

def test_random_koszul_deterministic():
    fs = list(F101.gens())
    a = random_koszul(fs, 2, 3, seed=11)
    b = random_koszul(fs, 2, 3, seed=11)
    assert a.labels == b.labels and a.vertex_rank == b.vertex_rank
    for T in a.subsets():
        for k in sorted(T):
            assert a.d(T, k) == b.d(T, k)


def test_random_koszul_seed_changes_output():
    fs = list(F101.gens())
    outs = {
        tuple(str(p) for T in c.subsets() for k in sorted(T) for row in c.d(T, k).entries
              for p in row)
        for c in (random_koszul(fs, 2, 4, seed=s) for s in range(6))
    }
    assert len(outs) > 1


def test_random_koszul_is_koszul_and_bounded():
    fs = list(F101.gens())
    for seed in range(4):
        c = random_koszul(fs, 3, 5, seed=seed)
        assert validate_cube(c).ok
        assert is_koszul_cube(c, fs).is_koszul
        assert all(c.vertex_rank[T] == 3 for T in c.subsets())
        for T in c.subsets():
            for k in sorted(T):
                for row in c.d(T, k).entries:
                    for p in row:
                        assert p.total_degree() <= 2


def test_random_koszul_trivial_cases():
    fs = [F101.var("x")]
    c = random_koszul(fs, 1, 0, seed=0)
    t = typical_cube(fs)
    assert c.vertex_rank == t.vertex_rank
    assert c.d(S1, "1") == t.d(S1, "1")


def test_random_koszul_input_caps():
    x, y = F101.gens()
    with pytest.raises(ValueError):
        random_koszul([x, x], 2, 2, seed=0)            # not an A-sequence
    with pytest.raises(ValueError):
        random_koszul([x], 5, 2, seed=0)               # too many summands
    with pytest.raises(ValueError):
        random_koszul([x], 2, 13, seed=0)              # too many steps
    r5 = RingSpec(101, ("a", "b", "c", "d", "e"))
    with pytest.raises(ValueError):
        random_koszul(list(r5.gens()), 1, 0, seed=0)   # too many directions
