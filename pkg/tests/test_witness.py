"""Theorem engines and the separation dispatcher."""

import pytest

from amalgam.certs import NotSeparatedAtLevelOne, WitnessResult
from amalgam.errors import (
    EmbeddingTypeMismatch,
    IdentityElement,
    IdentityWord,
    IncompatibleAmalgam,
    NotCentral,
    NotIsomorphism,
    NotProperSubgroup,
    NotSolvable,
    NotTorsionFree,
    OrderMismatch,
)
from amalgam.groups import (
    GroupHom,
    alternating_group,
    cyclic_group,
    dihedral_group,
    hom_from_generator_images,
    identity_hom,
    is_solvable,
    quaternion_group,
    subgroup,
    symmetric_group,
    whole_group,
)
from amalgam.lattice import FGAbelian, LatticeSubgroup
from amalgam.witness import (
    abelian_factor_quotient,
    central_amalgam_quotient,
    cyclic_amalgam_quotient,
    derived_depth,
    double_retraction,
    not_perfect_certificate,
    separate_element,
)
from amalgam.words import AmalgamSpec, induce_hom, reduce


def by_label(G, s):
    return G.labels.index(s)


S3 = symmetric_group(3)
Q8 = quaternion_group()
T12 = by_label(S3, "(1 2)")
T13 = by_label(S3, "(1 3)")
T123 = by_label(S3, "(1 2 3)")
MINUS_ONE = by_label(Q8, "-1")


def a3_subgroup():
    return subgroup(S3, [0, T123, S3.inv(T123)])


def s3_amalgam():
    C3 = cyclic_group(3)
    e = hom_from_generator_images(C3, S3, {1: T123})
    return AmalgamSpec([S3, S3], C3, [e, e])


def q8_amalgam():
    C2 = cyclic_group(2)
    e = hom_from_generator_images(C2, Q8, {1: MINUS_ONE})
    return AmalgamSpec([Q8, Q8], C2, [e, e])


def z2_z_amalgam(b_col):
    """Z^2 and Z glued over Z, embedded as (2,0) on the left."""
    from amalgam.lattice import IntMatrix

    Z2 = FGAbelian(2, ())
    Z1 = FGAbelian(1, ())
    C = FGAbelian(1, ())
    eA = IntMatrix.from_columns([(2, 0)], rows=2)
    eB = IntMatrix.from_columns([b_col], rows=1)
    return AmalgamSpec([Z2, Z1], C, [eA, eB])


# ------------------------------------------------------------ derived_depth


def test_depth_of_transposition_is_one():
    assert derived_depth(S3, T12) == 1


def test_depth_of_three_cycle_is_two():
    assert derived_depth(S3, T123) == 2


def test_depth_of_minus_one_is_two():
    assert derived_depth(Q8, MINUS_ONE) == 2


def test_depth_rejects_identity():
    with pytest.raises(IdentityElement):
        derived_depth(S3, 0)


def test_depth_requires_solvable_group():
    A5 = alternating_group(5)
    with pytest.raises(NotSolvable):
        derived_depth(A5, 1)


def test_depth_law_membership():
    """Depth m means membership in term m-1 and not in term m."""
    from amalgam.groups import series

    for G, g in [(S3, T12), (S3, T123), (Q8, MINUS_ONE), (Q8, by_label(Q8, "i"))]:
        m = derived_depth(G, g)
        terms = series(G, "derived").terms
        assert terms[m - 1].contains(g)
        assert not terms[m].contains(g)


# ----------------------------------------------------- not_perfect engine


def test_not_perfect_s3_pair_over_a3():
    A3 = a3_subgroup()
    cert = not_perfect_certificate(S3, S3, A3, A3, {x: x for x in A3.elements})
    assert cert.kind == "not_perfect"
    assert cert.status == "ok"
    assert cert.quotient_description["order"] == 4
    assert cert.quotient_description["abelian_invariants"] == [2, 2]
    assert cert.check("D_nontrivial").passed


def test_not_perfect_c4_pair_over_squares():
    C4 = cyclic_group(4)
    sq = subgroup(C4, [0, 2])
    cert = not_perfect_certificate(C4, C4, sq, sq, {0: 0, 2: 2})
    assert cert.quotient_description["abelian_invariants"] == [2, 2]
    assert cert.status == "ok"
    # C4 is nilpotent, so the subgroup-plus-commutators properness check runs
    frat = cert.check("frattini_argument")
    assert frat.passed
    assert "Frattini" in frat.evidence


def test_not_perfect_quaternion_against_symmetric():
    center = subgroup(Q8, [0, MINUS_ONE])
    refl = subgroup(S3, [0, T12])
    iso = {0: 0, MINUS_ONE: T12}
    cert = not_perfect_certificate(Q8, S3, center, refl, iso)
    assert cert.quotient_description["abelian_invariants"] == [2, 2]
    # only the quaternion side survives abelianization
    assert cert.quotient_description["left_quotient_order"] == 4
    assert cert.quotient_description["right_quotient_order"] == 1
    assert cert.check("frattini_argument").passed


def test_not_perfect_has_no_nilpotency_check_for_s3():
    A3 = a3_subgroup()
    cert = not_perfect_certificate(S3, S3, A3, A3, {x: x for x in A3.elements})
    with pytest.raises(KeyError):
        cert.check("frattini_argument")


def test_not_perfect_rejects_whole_group():
    A3 = a3_subgroup()
    with pytest.raises(NotProperSubgroup):
        not_perfect_certificate(S3, S3, whole_group(S3), A3, {})


def test_not_perfect_rejects_order_mismatch():
    center = subgroup(Q8, [0, MINUS_ONE])
    A3 = a3_subgroup()
    with pytest.raises(IncompatibleAmalgam):
        not_perfect_certificate(Q8, S3, center, A3, {})


def test_not_perfect_rejects_non_isomorphism():
    center = subgroup(Q8, [0, MINUS_ONE])
    refl = subgroup(S3, [0, T12])
    with pytest.raises(NotIsomorphism):
        not_perfect_certificate(Q8, S3, center, refl, {0: T12, MINUS_ONE: 0})
    with pytest.raises(NotIsomorphism):
        not_perfect_certificate(Q8, S3, center, refl, {0: 0})


def test_not_perfect_claims_do_not_affect_status():
    A3 = a3_subgroup()
    cert = not_perfect_certificate(S3, S3, A3, A3, {x: x for x in A3.elements})
    cert.claims.append("an arbitrary unverified remark")
    assert cert.status == "ok"


# ------------------------------------------------------------ cyclic engine


def test_cyclic_quaternion_separates():
    cert = cyclic_amalgam_quotient(Q8, Q8, MINUS_ONE, MINUS_ONE)
    assert cert.kind == "cyclic_amalgam"
    assert cert.status == "ok"
    assert cert.quotient_description["order"] == 32
    assert cert.quotient_description["left_depth"] == 2
    assert cert.check("separates_C").passed


def test_cyclic_symmetric_fails_to_separate():
    """The identified quotient of two S3 copies kills the amalgam itself."""
    cert = cyclic_amalgam_quotient(S3, S3, T123, T123)
    assert cert.status == "checks-failed"
    assert cert.quotient_description["order"] == 4
    assert not cert.check("separates_C").passed
    assert "power 1" in cert.check("separates_C").evidence


def test_cyclic_c6_squares_separate():
    C6 = cyclic_group(6)
    g2 = C6.power(1, 2)
    cert = cyclic_amalgam_quotient(C6, C6, g2, g2)
    assert cert.status == "ok"
    assert cert.quotient_description["order"] == 12
    assert cert.quotient_description["left_depth"] == 1
    assert cert.quotient_description["right_depth"] == 1


def test_cyclic_rejects_order_mismatch():
    with pytest.raises(OrderMismatch):
        cyclic_amalgam_quotient(Q8, S3, MINUS_ONE, T123)


def test_cyclic_rejects_identity_generators():
    with pytest.raises(IdentityElement):
        cyclic_amalgam_quotient(Q8, Q8, 0, MINUS_ONE)


def test_cyclic_rejects_unsolvable_factor():
    A5 = alternating_group(5)
    x = next(a for a in A5.elements() if A5.element_order(a) == 2)
    C2 = cyclic_group(2)
    with pytest.raises(NotSolvable):
        cyclic_amalgam_quotient(A5, C2, x, 1)


# ----------------------------------------------------------- central engine


def central_embedding(G, c):
    C2 = cyclic_group(2)
    return C2, hom_from_generator_images(C2, G, {1: c})


def test_central_two_quaternions():
    C2, e = central_embedding(Q8, MINUS_ONE)
    cert = central_amalgam_quotient([Q8, Q8], C2, [e, e])
    assert cert.kind == "central_amalgam"
    assert cert.status == "ok"
    assert cert.quotient_description["order"] == 32
    assert cert.check("mu_injective_on_factors").passed
    assert cert.check("S_solvable").passed
    assert cert.check("order_count").passed


def test_central_dihedral_with_quaternion():
    D4 = dihedral_group(4)
    r2 = by_label(D4, "r2")
    C2 = cyclic_group(2)
    eD = hom_from_generator_images(C2, D4, {1: r2})
    eQ = hom_from_generator_images(C2, Q8, {1: MINUS_ONE})
    cert = central_amalgam_quotient([D4, Q8], C2, [eD, eQ])
    assert cert.status == "ok"
    assert cert.quotient_description["order"] == 32


def test_central_single_factor_is_the_factor_itself():
    C2, e = central_embedding(Q8, MINUS_ONE)
    cert = central_amalgam_quotient([Q8], C2, [e])
    assert cert.status == "ok"
    assert cert.quotient_description["order"] == 8


def test_central_triple_quaternion_order():
    """Three factors of order 8 over order-2 centers: 8^3 / 2^2 = 128."""
    C2, e = central_embedding(Q8, MINUS_ONE)
    cert = central_amalgam_quotient([Q8, Q8, Q8], C2, [e, e, e])
    assert cert.status == "ok"
    assert cert.quotient_description["order"] == 128
    assert cert.check("order_count").passed


def test_central_rejects_noncentral_image():
    C2 = cyclic_group(2)
    e = hom_from_generator_images(C2, S3, {1: T12})
    with pytest.raises(NotCentral) as exc:
        central_amalgam_quotient([S3, S3], C2, [e, e])
    assert exc.value.details["factor"] == 0


# ------------------------------------------------------------ double engine


def test_double_s3_over_a3_all_checks_pass():
    cert = double_retraction([S3, S3], [identity_hom(S3), identity_hom(S3)], a3_subgroup())
    assert cert.kind == "double"
    assert cert.status == "ok"
    assert cert.quotient_description["order"] == 6
    assert cert.check("retraction").passed
    assert cert.check("injective_on_each_factor").passed
    assert cert.check("kernel_generators").passed
    # three transposition words survive reduction on the second copy
    assert "3 of them" in cert.check("kernel_generators").evidence


def test_double_kernel_word_dies_but_is_not_trivial():
    spec = s3_amalgam()
    psi = induce_hom(spec, S3, [identity_hom(S3), identity_hom(S3)])
    w = [(0, T12), (1, T12)]
    assert psi.apply_word(w) == 0
    assert not reduce(spec, w).is_identity()


def test_double_full_amalgamation_degenerates():
    cert = double_retraction(
        [S3, S3], [identity_hom(S3), identity_hom(S3)], whole_group(S3)
    )
    assert cert.status == "ok"
    assert "0 of them" in cert.check("kernel_generators").evidence


def test_double_triple_quaternion():
    isos = [identity_hom(Q8)] * 3
    cert = double_retraction([Q8, Q8, Q8], isos, subgroup(Q8, [0, MINUS_ONE]))
    assert cert.status == "ok"
    assert cert.quotient_description["copies"] == 3


def test_double_rejects_non_isomorphism():
    collapse = GroupHom(S3, S3, (0,) * 6)
    with pytest.raises(NotIsomorphism) as exc:
        double_retraction([S3, S3], [identity_hom(S3), collapse], a3_subgroup())
    assert exc.value.details["factor"] == 1


# ---------------------------------------------------- abelian-factor engine


def test_abelian_index_two_quotient():
    Z2 = FGAbelian(2, ())
    cert = abelian_factor_quotient(Z2, LatticeSubgroup.from_vectors(2, [(2, 0)]))
    assert cert.kind == "abelian_factor"
    assert cert.status == "ok"
    assert cert.quotient_description["order"] == 2
    assert cert.quotient_description["abelian_invariants"] == [2]
    assert cert.check("kills_C").passed
    assert cert.check("image_order").passed
    assert cert.check("epimorphism").passed


def test_abelian_full_sublattice_is_vacuous():
    Z2 = FGAbelian(2, ())
    cert = abelian_factor_quotient(Z2, LatticeSubgroup.from_vectors(2, [(1, 0), (0, 1)]))
    assert cert.status == "ok"
    assert cert.quotient_description["order"] == 1
    assert cert.claims[0] == "vacuous quotient"


def test_abelian_rank_one_index_three():
    Z1 = FGAbelian(1, ())
    cert = abelian_factor_quotient(Z1, LatticeSubgroup.from_vectors(1, [(3,)]))
    assert cert.quotient_description["order"] == 3
    assert cert.quotient_description["abelian_invariants"] == [3]


def test_abelian_accepts_raw_vectors():
    Z2 = FGAbelian(2, ())
    cert = abelian_factor_quotient(Z2, [(2, 0), (0, 2)])
    assert cert.quotient_description["order"] == 4
    assert cert.quotient_description["abelian_invariants"] == [2, 2]


def test_abelian_rejects_torsion():
    with pytest.raises(NotTorsionFree):
        abelian_factor_quotient(FGAbelian(1, (2,)), [(1, 0)])


def test_abelian_rejects_group_passed_as_sublattice():
    Z2 = FGAbelian(2, ())
    with pytest.raises(EmbeddingTypeMismatch):
        abelian_factor_quotient(Z2, FGAbelian(1, ()))


def test_abelian_rejects_rank_mismatch():
    Z2 = FGAbelian(2, ())
    with pytest.raises(EmbeddingTypeMismatch):
        abelian_factor_quotient(Z2, LatticeSubgroup.from_vectors(3, [(1, 0, 0)]))


# ----------------------------------------------------------------- dispatch


def test_dispatch_identical_copies_resolve_as_double():
    spec = q8_amalgam()
    res = separate_element(spec, [(0, by_label(Q8, "i"))])
    assert isinstance(res, WitnessResult)
    assert res.separated
    assert res.engine == "double"
    assert res.target_description["order"] == 8
    assert res.image_label == "i"


def test_dispatch_central_engine_when_requested():
    spec = q8_amalgam()
    res = separate_element(spec, [(0, by_label(Q8, "i"))], engines=("central",))
    assert res.engine == "central_amalgam"
    assert res.target_description["order"] == 32
    assert res.certificate.check("mu_injective_on_factors").passed


def test_dispatch_retraction_separates_first_copy():
    spec = s3_amalgam()
    res = separate_element(spec, [(0, T12)])
    assert res.engine == "double"
    assert res.image_label == "(1 2)"
    assert res.target_description["order"] == 6


def test_dispatch_kernel_word_falls_through_to_oracle():
    """Killed by the retraction and by the abelianized identification, but
    caught by the catalog search."""
    spec = s3_amalgam()
    w = [(0, T12), (1, T12), (0, T13), (1, T13)]
    res = separate_element(spec, w)
    assert isinstance(res, WitnessResult)
    assert res.engine == "oracle_witness"
    assert res.target_description == {"order": 6, "name": "D3", "derived_length": 2}
    assert res.image_label == "r1"


def test_dispatch_without_oracle_reports_not_separated():
    spec = s3_amalgam()
    w = [(0, T12), (1, T12), (0, T13), (1, T13)]
    res = separate_element(spec, w, engines=("double", "central", "cyclic"))
    assert isinstance(res, NotSeparatedAtLevelOne)
    assert not res.separated
    assert len(res.certificates) == 2
    kinds = [c.kind for c in res.certificates]
    assert kinds == ["double", "cyclic_amalgam"]
    assert "retraction" in res.reason


def test_dispatch_mixed_amalgam_separates_lattice_side():
    spec = z2_z_amalgam((1,))
    res = separate_element(spec, [(0, (1, 0))])
    assert isinstance(res, WitnessResult)
    assert res.engine == "abelian_factor"
    assert res.target_description["order"] == 2
    assert res.target_derived_length == 1


def test_dispatch_mixed_amalgam_cannot_separate_opaque_side():
    spec = z2_z_amalgam((1,))
    res = separate_element(spec, [(1, (1,))])
    assert isinstance(res, NotSeparatedAtLevelOne)
    assert "not separated at level 1" in res.reason


def test_dispatch_rejects_identity_words():
    spec = s3_amalgam()
    with pytest.raises(IdentityWord):
        separate_element(spec, [])
    with pytest.raises(IdentityWord):
        separate_element(spec, [(0, T123), (1, S3.inv(T123))])


def test_dispatch_rejects_unknown_engine_names():
    with pytest.raises(ValueError):
        separate_element(s3_amalgam(), [(0, T12)], engines=("double", "sieve"))


def test_dispatch_witness_invariants_hold():
    """Image nonidentity and solvable target, for a spread of words."""
    import random

    spec = s3_amalgam()
    rng = random.Random(5)
    separated = 0
    for _ in range(40):
        w = [(rng.randrange(2), rng.randrange(6)) for _ in range(rng.randrange(1, 6))]
        if reduce(spec, w).is_identity():
            continue
        res = separate_element(spec, w)
        if isinstance(res, WitnessResult):
            separated += 1
            assert res.image_label != "e"
            assert res.target_derived_length >= 1
            assert res.certificate.kind in {
                "double",
                "central_amalgam",
                "cyclic_amalgam",
                "abelian_factor",
                "oracle_witness",
            }
    assert separated > 0


def test_dispatch_serializes_to_plain_data():
    import json

    spec = q8_amalgam()
    res = separate_element(spec, [(0, by_label(Q8, "i"))])
    blob = json.dumps(res.to_dict(), sort_keys=True)
    assert '"separated": true' in blob
