"""Koszul complexes, the wedge pairing, and the trace-map certificates.

The sign scheme is pinned twice over: small matrices (d = 1, 2) are frozen
literally, and the structural checks (pairing = adjoint of multiplication,
pairing of a split = tensor of pairings) rebuild both sides through
disjoint code paths, so a sign drift anywhere breaks a matrix equality
rather than sliding through.  Sections need not be regular for any of the
algebra; regularity only enters the graded exactness certificates.
"""

import random
from math import comb

import pytest

from wittforge import linalg
from wittforge.complexes import (
    ChainMap,
    cone,
    duality_interchange,
    graded_homology_dims,
    single,
    tensor_layout,
    unit_complex,
)
from wittforge.errors import NotAChainMap, NotRegularSequence
from wittforge.fields import FieldSpec
from wittforge.koszul import (
    KoszulDatum,
    SymmetricSpace,
    delta_associative,
    delta_map,
    delta_unital,
    koszul_complex,
    koszul_form,
    pushforward_unit_form,
    sigma_map,
    split_datum,
    split_factorization,
    split_iso,
    theta_multiplicative,
    trace_diagram,
    x_map,
)
from wittforge.polynomials import PolyRing

Q = FieldSpec.Q()
F5 = FieldSpec.Fp(5)

RINGS = {d: PolyRing(Q, tuple("xyzw"[:d])) for d in (1, 2, 3, 4)}


def coordinates(d, ring=None):
    ring = ring or RINGS[d]
    return KoszulDatum(ring, [ring.variable(v) for v in ring.vars[:d]])


# ---------------------------------------------------------------------------
# datum validation
# ---------------------------------------------------------------------------


def test_empty_section_rejected():
    with pytest.raises(ValueError):
        KoszulDatum(RINGS[1], [])


def test_zero_entry_rejected():
    ring = RINGS[2]
    with pytest.raises(ValueError):
        KoszulDatum(ring, [ring.variable("x"), ring.zero()])


def test_nonunit_twist_rejected():
    ring = RINGS[1]
    with pytest.raises(ValueError):
        KoszulDatum(ring, [ring.variable("x")], twist=ring.variable("x"))


def test_twist_defaults_to_one():
    k = coordinates(2)
    assert k.twist == RINGS[2].one()
    assert k.duality().degree == 2


def test_datum_json_roundtrip():
    ring = RINGS[2]
    x, y = ring.variable("x"), ring.variable("y")
    k = KoszulDatum(ring, [x + y, x * y - y], twist=ring.constant(Q.element(3)))
    back = KoszulDatum.from_json(k.to_json())
    assert back.ring == ring
    assert back.section == k.section
    assert back.twist == k.twist


# ---------------------------------------------------------------------------
# the complex
# ---------------------------------------------------------------------------


def test_length_one_is_the_section_arrow():
    ring = RINGS[1]
    kos = koszul_complex(coordinates(1))
    assert kos.degrees() == [0, 1]
    assert kos.diff(1) == [[ring.variable("x")]]


def test_length_two_ranks_and_frozen_differentials():
    ring = RINGS[2]
    x, y = ring.variable("x"), ring.variable("y")
    kos = koszul_complex(coordinates(2))
    assert [kos.rank(i) for i in (0, 1, 2)] == [1, 2, 1]
    assert kos.diff(1) == [[x, y]]
    assert kos.diff(2) == [[-y], [x]]


def test_length_three_builds():
    # the constructor certifies d . d = 0 entry-exactly
    kos = koszul_complex(coordinates(3))
    assert [kos.rank(i) for i in range(4)] == [1, 3, 3, 1]


def test_binomial_ranks_length_four():
    kos = koszul_complex(coordinates(4))
    assert [kos.rank(i) for i in range(5)] == [comb(4, i) for i in range(5)]


def test_nonregular_sections_still_build():
    ring = RINGS[2]
    x = ring.variable("x")
    kos = koszul_complex(KoszulDatum(ring, [x, x]))
    assert [kos.rank(i) for i in (0, 1, 2)] == [1, 2, 1]


# ---------------------------------------------------------------------------
# the pairing
# ---------------------------------------------------------------------------


def test_pairing_length_one_components():
    # the dual of [R ->s R] carries +s under the ambient Hom signs, so the
    # two components of the pairing must be equal; the unit normalization
    # makes them both +1
    ring = RINGS[1]
    space = koszul_form(coordinates(1))
    one = ring.one()
    assert space.form.component(0) == [[one]]
    assert space.form.component(1) == [[one]]
    assert space.symmetry_sign == 1


def test_pairing_length_two_frozen():
    ring = RINGS[2]
    space = koszul_form(coordinates(2))
    one, minus = ring.one(), -ring.one()
    zero = ring.zero()
    assert space.form.component(0) == [[one]]
    assert space.form.component(1) == [[zero, minus], [one, zero]]
    assert space.form.component(2) == [[one]]


def test_pairing_is_chain_map_up_to_length_four():
    for d in (1, 2, 3, 4):
        space = koszul_form(coordinates(d))  # constructor certifies commutation
        assert space.form.source is space.carrier


def test_symmetry_sign_constant_across_sections():
    ring = RINGS[2]
    x, y = ring.variable("x"), ring.variable("y")
    sections = [[x, y], [x + y, x - y], [x * x, y * y + x], [y, x]]
    signs = {koszul_form(KoszulDatum(ring, s)).symmetry_sign for s in sections}
    assert signs == {1}


def test_symmetry_sign_plus_one_up_to_length_four():
    for d in (1, 2, 3, 4):
        assert koszul_form(coordinates(d)).symmetry_sign == 1


def test_symmetric_space_rejects_wrong_target():
    # for length one the complex happens to be literally self-dual, so use
    # length two, where the dual differential is the signed transpose
    k = coordinates(2)
    kos = koszul_complex(k)
    not_a_form = ChainMap.identity(kos)
    with pytest.raises(NotAChainMap):
        SymmetricSpace(kos, k.duality(), not_a_form)


# ---------------------------------------------------------------------------
# multiplication, projection, and the adjoint comparison
# ---------------------------------------------------------------------------


def test_delta_degree_one_block_frozen():
    ring = RINGS[2]
    one, minus, zero = ring.one(), -ring.one(), ring.zero()
    delta = delta_map(coordinates(2))
    # columns at total degree 2: 1(x)e12 | e1(x)e1 e1(x)e2 e2(x)e1 e2(x)e2 | e12(x)1
    assert delta.component(2) == [[one, zero, one, minus, zero, one]]
    assert delta.component(1) == [[one, zero, one, zero], [zero, one, zero, one]]


def test_delta_unital():
    for d in (1, 2, 3):
        assert delta_unital(coordinates(d))


def test_delta_associative():
    for d in (1, 2, 3):
        assert delta_associative(coordinates(d))


def test_sigma_is_top_projection():
    for d in (1, 2, 3):
        k = coordinates(d)
        sigma = sigma_map(k)
        assert sigma.component(d) == [[RINGS[d].one()]]
        for n in range(d):
            assert linalg.is_zero_matrix(sigma.component(n))


def test_sigma_delta_top_pairing_matches_form():
    # in the top degree, multiply-then-project reads off the same signed
    # complement pairing the form is built from
    for d in (2, 3):
        k = coordinates(d)
        kos = koszul_complex(k)
        space = koszul_form(k, kos=kos)
        top = sigma_map(k, kos=kos).compose(delta_map(k, kos=kos)).component(d)
        for i, j, ra, rb, off in tensor_layout(kos, kos, d):
            theta = space.form.component(i)
            for p in range(ra):
                column = [theta[v][p] for v in range(rb)]
                for q in range(rb):
                    assert top[0][off + p * rb + q] == column[q]


def test_adjoint_of_multiplication_equals_form():
    for d in (1, 2, 3):
        k = coordinates(d)
        assert x_map(k) == koszul_form(k).form


def test_adjoint_comparison_survives_other_sections():
    ring = RINGS[2]
    x, y = ring.variable("x"), ring.variable("y")
    rng = random.Random(11)
    pool = [x, y, x + y, x - y, x * y, x * x + y, y * y]
    for _ in range(6):
        section = [rng.choice(pool), rng.choice(pool)]
        k = KoszulDatum(ring, section)
        assert x_map(k) == koszul_form(k).form


# ---------------------------------------------------------------------------
# splitting
# ---------------------------------------------------------------------------


def test_split_iso_is_permutation():
    k = coordinates(3)
    iso = split_iso(k, 2)
    for n in iso.components:
        mat = iso.component(n)
        for col in range(len(mat[0])):
            entries = [mat[row][col] for row in range(len(mat))]
            assert sum(0 if e.is_zero() else 1 for e in entries) == 1


def test_split_keeps_twist_on_head():
    ring = RINGS[2]
    k = KoszulDatum(ring, [ring.variable("x"), ring.variable("y")],
                    twist=ring.constant(Q.element(2)))
    head, tail = split_datum(k, 1)
    assert head.twist == k.twist
    assert tail.twist == ring.one()


def test_pairing_multiplicative_for_all_splits():
    for d in (2, 3, 4):
        k = coordinates(d)
        for head in range(1, d):
            assert theta_multiplicative(k, head)


def test_interchange_is_signed_permutation():
    k1 = coordinates(1)
    ring = RINGS[1]
    kos = koszul_complex(k1)
    datum = k1.duality()
    lam = duality_interchange(kos, kos, datum, datum)
    for n in lam.components:
        mat = lam.component(n)
        for col in range(len(mat[0])):
            entries = [e for row in mat for e in [row[col]] if not e.is_zero()]
            assert len(entries) == 1
            assert entries[0] in (ring.one(), -ring.one())


def test_split_factorization_length_one_is_a_cone():
    ring = RINGS[1]
    cert = split_factorization(coordinates(1))
    assert cert
    assert cert.split == (1,)
    assert cert.cone_matches and cert.witt_trivial_factor
    line = single(ring, 0, 1)
    expected = cone(ChainMap(line, line, {0: [[ring.variable("x")]]}))
    assert cert.cone_factor == expected


def test_split_factorization_length_two():
    cert = split_factorization(coordinates(2))
    assert cert
    assert cert.split == (1, 1)
    assert cert.iso_invertible and cert.form_factorizes


def test_split_factorization_length_three():
    cert = split_factorization(coordinates(3))
    assert cert
    assert cert.split == (2, 1)
    assert cert.to_json()["witt_trivial_factor"] is True


def test_split_factorization_ignores_regularity():
    # the factorization is pure sign algebra; (x, x) splits fine even
    # though its section is not regular
    ring = RINGS[2]
    x = ring.variable("x")
    cert = split_factorization(KoszulDatum(ring, [x, x]))
    assert cert.form_factorizes and cert.cone_matches


def test_split_certificate_inverse_composes_to_identity():
    cert = split_factorization(coordinates(3))
    assert cert.iso_inverse.compose(cert.iso).is_identity()
    assert cert.iso.compose(cert.iso_inverse).is_identity()


# ---------------------------------------------------------------------------
# the trace diagram and regularity certificates
# ---------------------------------------------------------------------------


def test_trace_length_one():
    ring = RINGS[1]
    diagram = trace_diagram(coordinates(1))
    assert diagram.middle.degrees() == [-1, 0]
    assert diagram.middle.diff(0) == [[ring.variable("x")]]
    assert diagram.certificate["socle_dims"] == {-1: 1}
    assert diagram.down.component(-1) == [[ring.one()]]
    assert diagram.up.component(0) == [[ring.variable("x")]]


def test_trace_length_two_passes():
    diagram = trace_diagram(coordinates(2), bound=6)
    assert diagram.certificate["socle_degree"] == -2
    assert diagram.certificate["socle_dims"] == {-2: 1}
    assert [diagram.middle.rank(-i) for i in range(3)] == [1, 2, 1]


def test_trace_up_map_is_the_section():
    ring = RINGS[3]
    diagram = trace_diagram(coordinates(3))
    assert diagram.up.source == unit_complex(ring)
    assert diagram.up.component(0) == [[ring.variable(v)] for v in ("x", "y", "z")]


def test_trace_rejects_repeated_coordinate():
    ring = RINGS[2]
    x = ring.variable("x")
    with pytest.raises(NotRegularSequence) as err:
        trace_diagram(KoszulDatum(ring, [x, x]))
    witness = err.value.witness
    assert witness and all(n == -1 for n, _ in witness)
    assert all(dim > 0 for dim in witness.values())


def test_trace_socle_matches_closed_count():
    # over m variables, killing the d coordinates leaves a polynomial ring
    # in m - d variables; the socle piece at internal degree t therefore
    # has dimension C(t + m - 1, m - d - 1)
    for m, d in ((2, 1), (3, 2), (4, 2), (4, 3)):
        ring = RINGS[m]
        k = KoszulDatum(ring, [ring.variable(v) for v in ring.vars[:d]])
        socle = trace_diagram(k, bound=5).certificate["socle_dims"]
        for t, dim in socle.items():
            assert dim == comb(t + m - 1, m - d - 1)


def test_trace_socle_full_cut_is_one_point():
    for d in (1, 2, 3):
        socle = trace_diagram(coordinates(d)).certificate["socle_dims"]
        assert socle == {-d: 1}


def test_augmented_complex_exact_over_prime_field():
    ring = PolyRing(F5, ("x", "y"))
    k = KoszulDatum(ring, [ring.variable("x"), ring.variable("y")])
    socle = trace_diagram(k, bound=4).certificate["socle_dims"]
    assert socle == {-2: 1}


# ---------------------------------------------------------------------------
# the push-forward space
# ---------------------------------------------------------------------------


def test_pushforward_length_one():
    space = pushforward_unit_form(coordinates(1))
    assert space.symmetry_sign == 1
    assert space.metadata["form_graded_quasi_iso"] is True
    assert space.metadata["regularity_bound"] == 6


def test_pushforward_length_two_certificate():
    space = pushforward_unit_form(coordinates(2), bound=5)
    assert [space.carrier.rank(i) for i in (0, 1, 2)] == [1, 2, 1]
    assert space.metadata["socle_dims"] == {-2: 1}
    assert space.metadata["form_graded_quasi_iso"] is True


def test_pushforward_requires_regularity():
    ring = RINGS[2]
    x = ring.variable("x")
    with pytest.raises(NotRegularSequence):
        pushforward_unit_form(KoszulDatum(ring, [x, x]))


def test_pushforward_form_cone_checked_gradedwise():
    space = pushforward_unit_form(coordinates(2))
    assert graded_homology_dims(cone(space.form), 4) == {}
