"""Quadratic forms and Witt-group arithmetic.

The heavy lifting here is oracle comparison: Hilbert symbols against
brute-force local solubility (primitive solutions of ax^2 + by^2 = z^2
modulo p^k, with k chosen so Hensel lifting is exact), finite-field
isotropy against exhaustive vector enumeration, and rational ternary
isotropy against a height-bounded search that is complete by Holzer's
bound for small pairwise-coprime squarefree coefficients.
"""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from wittforge import linalg
from wittforge.errors import DegenerateForm, FieldMismatch, UnsupportedField
from wittforge.fields import FieldSpec, find_irreducible, is_square
from wittforge.quadforms import (
    Place,
    QuadraticForm,
    WittClass,
    diagonalize,
    hilbert_symbol,
    hyperbolic_plane,
    is_isotropic,
    relevant_places,
    signature,
    signed_discriminant,
    witt_add,
    witt_decompose,
    witt_equal,
    witt_mul,
    witt_neg,
    witt_zero,
)

Q = FieldSpec.Q()
F3 = FieldSpec.Fp(3)
F5 = FieldSpec.Fp(5)
F7 = FieldSpec.Fp(7)
F9 = FieldSpec.extension(F3, find_irreducible(F3, 2))


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def hilbert_oracle(a, b, p):
    """(a,b)_p by brute force.

    z^2 = a x^2 + b y^2 has a nontrivial p-adic solution iff it has a
    primitive solution modulo p^k, where k = 3 for odd p and k = 5 for
    p = 2 suffices for squarefree-ish small a, b (the relevant partial
    derivative has valuation <= 1, resp. <= 2, so Hensel lifts).
    """
    k = 5 if p == 2 else 3
    m = p**k
    sq = np.zeros(m, dtype=bool)
    unit_sq = np.zeros(m, dtype=bool)
    for z in range(m):
        c = (z * z) % m
        sq[c] = True
        if z % p:
            unit_sq[c] = True
    xs = np.arange(m, dtype=np.int64)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    C = (a * X * X + b * Y * Y) % m
    prim_xy = (X % p != 0) | (Y % p != 0)
    solvable = sq[C] & (prim_xy | unit_sq[C])
    return 1 if solvable.any() else -1


def exhaustive_isotropic_vectors(form):
    """All nonzero isotropic vectors of a form over a small finite field."""
    out = []
    for vec in itertools.product(form.field.elements(), repeat=form.dim):
        if all(x.is_zero() for x in vec):
            continue
        if form.evaluate(vec).is_zero():
            out.append(vec)
    return out


def ternary_search_oracle(a, b, c, height=8):
    """Complete isotropy oracle for <a,b,c> with small squarefree
    pairwise-coprime entries: Holzer's bound caps minimal solutions at
    sqrt of the products, all < 7 here."""
    rng = range(-height, height + 1)
    for x, y, z in itertools.product(rng, repeat=3):
        if (x, y, z) == (0, 0, 0):
            continue
        if a * x * x + b * y * y + c * z * z == 0:
            return True
    return False


def assert_certificate(form, wc):
    """P^T G P must be hyperbolic planes followed by the anisotropic Gram."""
    field = form.field
    p = wc.certificate
    g = form.gram_rows()
    ptgp = linalg.mat_mul(field, linalg.mat_mul(field, linalg.transpose(p), g), p)
    k = wc.hyperbolic
    blocks = [hyperbolic_plane(field).gram_rows() for _ in range(k)]
    if wc.anisotropic.dim:
        blocks.append(wc.anisotropic.gram_rows())
    expected = linalg.block_diag(field, blocks)
    assert linalg.mat_eq(ptgp, expected)
    assert linalg.inverse(field, p) is not None


# ---------------------------------------------------------------------------
# Hilbert symbols
# ---------------------------------------------------------------------------


def test_hilbert_frozen_values():
    assert hilbert_symbol(2, 3, Place.finite(3)) == -1
    assert hilbert_symbol(-1, -1, Place.infinity()) == -1
    assert hilbert_symbol(-1, -1, Place.finite(2)) == -1
    assert hilbert_symbol(2, -1, Place.finite(2)) == 1  # 1^2*(-1) + 2^2*... : 3^2 = 1 + 2*4
    assert hilbert_symbol(3, 3, Place.finite(3)) == -1
    assert hilbert_symbol(5, 7, Place.finite(11)) == 1  # both units at a good odd prime


def test_hilbert_real_place():
    for a in (-7, -2, -1, 1, 2, 7):
        for b in (-5, -1, 1, 5):
            expected = -1 if (a < 0 and b < 0) else 1
            assert hilbert_symbol(a, b, Place.infinity()) == expected


@pytest.mark.parametrize(
    "p,reps",
    [
        (3, [1, 2, 3, 6, -1, -2, -3, -6]),
        (5, [1, 2, 5, 10, -1, -2, -5, -10]),
        (7, [1, 3, 7, 21, -1, -3, -7, -21]),
        (2, [1, 3, 5, 7, 2, 6, 10, 14, -1, -2, -5]),
    ],
)
def test_hilbert_matches_local_solubility(p, reps):
    # reps cover every square class of Q_p (and then some)
    for a in reps:
        for b in reps:
            assert hilbert_symbol(a, b, Place.finite(p)) == hilbert_oracle(a, b, p), (
                a,
                b,
                p,
            )


def test_hilbert_bimultiplicative():
    vals = [1, 2, 3, 5, -1, -2, -15]
    places = [Place.infinity(), Place.finite(2), Place.finite(3), Place.finite(5)]
    for v in places:
        for a, a2, b in itertools.product(vals, repeat=3):
            lhs = hilbert_symbol(a * a2, b, v)
            rhs = hilbert_symbol(a, b, v) * hilbert_symbol(a2, b, v)
            assert lhs == rhs


def test_hilbert_symmetric_and_square_invariant():
    vals = [1, 2, 3, 5, 7, -1, -2, -3, -30]
    places = [Place.infinity(), Place.finite(2), Place.finite(3), Place.finite(7)]
    for v in places:
        for a, b in itertools.product(vals, repeat=2):
            assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
            assert hilbert_symbol(a * 9, b * 4, v) == hilbert_symbol(a, b, v)


def test_hilbert_product_formula():
    rng = random.Random(424)
    for _ in range(40):
        a = rng.choice([s for s in range(-30, 31) if s not in (0,)])
        b = rng.choice([s for s in range(-30, 31) if s not in (0,)])
        prod = 1
        for v in relevant_places([a, b]):
            prod *= hilbert_symbol(a, b, v)
        assert prod == 1, (a, b)


def test_place_parse_and_json():
    assert Place.parse("inf").is_infinite
    assert Place.parse("oo") == Place.infinity()
    assert Place.parse("7") == Place.finite(7)
    assert Place.finite(3).to_json() == 3
    assert Place.infinity().to_json() == "inf"
    with pytest.raises(ValueError):
        Place.finite(6)


# ---------------------------------------------------------------------------
# diagonalization
# ---------------------------------------------------------------------------


def test_diagonalize_f3_example():
    entries, basis = diagonalize(QuadraticForm(F3, [[1, 1], [1, 2]]))
    assert [e.to_json() for e in entries] == [1, 1]
    assert linalg.inverse(F3, basis) is not None


def sample_forms(field, rng, count, max_dim=4, allow_degenerate=False):
    for _ in range(count):
        n = rng.randint(1, max_dim)
        while True:
            g = [[field.random_element(rng) for _ in range(n)] for _ in range(n)]
            for i in range(n):
                for j in range(i):
                    g[i][j] = g[j][i]
            form = QuadraticForm(field, g)
            if allow_degenerate:
                break
            ent, _ = diagonalize(form)
            if all(not e.is_zero() for e in ent):
                break
        yield form


@pytest.mark.parametrize("field", [F3, F5, F9, Q], ids=str)
def test_diagonalize_is_a_congruence(field):
    rng = random.Random(802)
    for form in sample_forms(field, rng, 12, allow_degenerate=True):
        entries, basis = diagonalize(form)
        d = [
            [entries[i] if i == j else field.zero() for j in range(form.dim)]
            for i in range(form.dim)
        ]
        bt = linalg.transpose(basis)
        lhs = linalg.mat_mul(field, linalg.mat_mul(field, bt, form.gram_rows()), basis)
        assert linalg.mat_eq(lhs, d)
        assert linalg.inverse(field, basis) is not None


def test_degenerate_form_rejected():
    q = QuadraticForm(F3, [[1, 1], [1, 1]])
    with pytest.raises(DegenerateForm):
        witt_decompose(q)
    with pytest.raises(DegenerateForm):
        witt_equal(q, QuadraticForm.diagonal(F3, [1]))


def test_asymmetric_gram_rejected():
    with pytest.raises(ValueError):
        QuadraticForm(F3, [[1, 1], [2, 1]])


# ---------------------------------------------------------------------------
# isotropy and Witt decomposition: finite fields
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("field", [F3, F5, F9], ids=str)
def test_isotropy_matches_exhaustive_search(field):
    rng = random.Random(31)
    for form in sample_forms(field, rng, 10, max_dim=3):
        found = exhaustive_isotropic_vectors(form)
        assert is_isotropic(form) == bool(found)
        wc = witt_decompose(form)
        assert (wc.hyperbolic > 0) == bool(found)


def test_witt_decompose_four_ones_over_f5():
    wc = witt_decompose(QuadraticForm.diagonal(F5, [1, 1, 1, 1]))
    assert wc.anisotropic.dim == 0
    assert wc.hyperbolic == 2
    assert_certificate(QuadraticForm.diagonal(F5, [1, 1, 1, 1]), wc)


def test_witt_decompose_three_ones_over_f3():
    form = QuadraticForm.diagonal(F3, [1, 1, 1])
    wc = witt_decompose(form)
    assert wc.hyperbolic == 1
    assert wc.anisotropic.dim == 1
    # the residual class is the one of <2> = <-1>
    entry = wc.anisotropic.gram[0][0]
    assert is_square(entry / F3.from_int(2))
    assert not is_square(entry)
    assert_certificate(form, wc)


@pytest.mark.parametrize("field", [F3, F5, F7, F9], ids=str)
def test_witt_decompose_certificates_finite(field):
    rng = random.Random(99)
    for form in sample_forms(field, rng, 8, max_dim=4):
        wc = witt_decompose(form)
        assert wc.anisotropic.dim + 2 * wc.hyperbolic == form.dim
        assert wc.anisotropic.dim <= 2  # anisotropic finite forms are small
        assert_certificate(form, wc)
        again = witt_decompose(wc.anisotropic)
        assert again.hyperbolic == 0
        assert again.anisotropic.dim == wc.anisotropic.dim


def test_hyperbolic_plane_is_trivial():
    for field in (F3, F5, F9):
        wc = witt_decompose(hyperbolic_plane(field))
        assert wc.is_zero() and wc.hyperbolic == 1
        assert witt_equal(hyperbolic_plane(field), witt_zero(field))


# ---------------------------------------------------------------------------
# isotropy and Witt decomposition: rationals
# ---------------------------------------------------------------------------


def coprime_squarefree_triples():
    base = [1, 2, 3, 5, 6, 7]
    for a, b, c in itertools.combinations(base, 3):
        if math.gcd(a, b) != 1 or math.gcd(a, c) != 1 or math.gcd(b, c) != 1:
            continue
        for signs in itertools.product((1, -1), repeat=3):
            if signs[0] == signs[1] == signs[2]:
                continue  # definite: trivially anisotropic
            yield (signs[0] * a, signs[1] * b, signs[2] * c)


def test_rational_ternary_isotropy_matches_bounded_search():
    tested = 0
    for a, b, c in coprime_squarefree_triples():
        form = QuadraticForm.diagonal(Q, [a, b, c])
        assert is_isotropic(form) == ternary_search_oracle(a, b, c), (a, b, c)
        tested += 1
    assert tested >= 50


def test_witt_decompose_rational_frozen_cases():
    cases = [
        ([1, -1], 0, 1),
        ([1, 1, -2], 1, 1),
        ([1, 1, -3], 3, 0),  # x^2 + y^2 = 3 z^2 is insoluble
        ([2, 3, -5], 1, 1),
        ([1, 1, 1, 1, -7], 3, 1),  # four squares represent 7
    ]
    for entries, aniso_dim, hyper in cases:
        form = QuadraticForm.diagonal(Q, entries)
        wc = witt_decompose(form)
        assert (wc.anisotropic.dim, wc.hyperbolic) == (aniso_dim, hyper), entries
        assert_certificate(form, wc)


def test_witt_decompose_rational_random():
    rng = random.Random(515)
    pool = [1, 2, 3, 5, 6, 7, 10, -1, -2, -3, -5, -6, -7, -10]
    for _ in range(18):
        n = rng.randint(1, 4)
        entries = [
            Fraction(rng.choice(pool), rng.choice([1, 1, 1, 2, 3])) for _ in range(n)
        ]
        form = QuadraticForm.diagonal(Q, entries)
        wc = witt_decompose(form)
        assert wc.anisotropic.dim + 2 * wc.hyperbolic == n
        assert_certificate(form, wc)
        # signature is blind to hyperbolic planes
        assert signature(form) [0] - signature(form)[1] == (
            signature(wc.anisotropic)[0] - signature(wc.anisotropic)[1]
        )
        again = witt_decompose(wc.anisotropic)
        assert again.hyperbolic == 0


def test_rational_dense_gram_decomposes():
    form = QuadraticForm(
        Q,
        [
            [0, 1, 2],
            [1, 1, Fraction(1, 2)],
            [2, Fraction(1, 2), -3],
        ],
    )
    wc = witt_decompose(form)
    assert_certificate(form, wc)
    assert wc.hyperbolic >= 1  # isotropic: the (0,0) entry vanishes


def test_definite_forms_are_anisotropic():
    for entries in ([1, 1], [2, 3, 5], [1, 1, 1, 1], [-1, -2, -7]):
        wc = witt_decompose(QuadraticForm.diagonal(Q, entries))
        assert wc.hyperbolic == 0
        assert not is_isotropic(QuadraticForm.diagonal(Q, entries))


# ---------------------------------------------------------------------------
# Witt equality and group structure
# ---------------------------------------------------------------------------


def test_witt_equal_frozen_finite():
    assert witt_equal(
        QuadraticForm.diagonal(F5, [1, 1]), QuadraticForm.diagonal(F5, [2, 2])
    )
    assert witt_equal(
        QuadraticForm.diagonal(F3, [1, 1, 1]), QuadraticForm.diagonal(F3, [2])
    )
    assert not witt_equal(
        QuadraticForm.diagonal(F3, [1, 1, 1]), QuadraticForm.diagonal(F3, [1])
    )
    assert not witt_equal(
        QuadraticForm.diagonal(F5, [1]), QuadraticForm.diagonal(F5, [1, 1])
    )


def test_witt_equal_frozen_rational():
    d = QuadraticForm.diagonal
    assert witt_equal(d(Q, [3, 5]), d(Q, [2, 30]))
    assert witt_equal(d(Q, [1, 1]), d(Q, [2, 2]))
    assert not witt_equal(d(Q, [1, 1]), d(Q, [1, -1]))
    assert not witt_equal(d(Q, [1, 1, -3]), d(Q, [1, -1, 1]))
    assert witt_equal(d(Q, [1, -1, 7, -7]), witt_zero(Q))


def test_witt_equal_respects_decomposition():
    rng = random.Random(77)
    for field in (F3, F5, F9):
        for form in sample_forms(field, rng, 6, max_dim=4):
            wc = witt_decompose(form)
            assert witt_equal(form, wc)
            assert witt_equal(wc.anisotropic, wc)


def test_witt_equal_field_mismatch():
    with pytest.raises(FieldMismatch):
        witt_equal(QuadraticForm.diagonal(F3, [1]), QuadraticForm.diagonal(F5, [1]))


def test_witt_ops_unsupported_field():
    E = FieldSpec.extension(Q, [-2, 0, 1])
    with pytest.raises(UnsupportedField):
        witt_decompose(QuadraticForm.diagonal(E, [1, 1, 1]))
    with pytest.raises(UnsupportedField):
        witt_equal(QuadraticForm.diagonal(E, [1]), QuadraticForm.diagonal(E, [2]))


@pytest.mark.parametrize("field", [F3, F5, F7, F9], ids=str)
def test_witt_ring_axioms(field):
    rng = random.Random(640)
    one = QuadraticForm.diagonal(field, [1])
    zero = witt_zero(field)
    forms = list(sample_forms(field, rng, 5, max_dim=2))
    for a, b, c in zip(forms, forms[1:], forms[2:]):
        assert witt_equal(witt_add(a, b), witt_add(b, a))
        assert witt_equal(witt_add(witt_add(a, b), c), witt_add(a, witt_add(b, c)))
        assert witt_equal(witt_add(a, zero), a)
        assert witt_add(a, witt_neg(a)).is_zero()
        assert witt_equal(witt_mul(a, b), witt_mul(b, a))
        assert witt_equal(witt_mul(witt_mul(a, b), c), witt_mul(a, witt_mul(b, c)))
        assert witt_equal(witt_mul(one, a), a)
        lhs = witt_mul(a, witt_add(b, c))
        rhs = witt_add(witt_mul(a, b), witt_mul(a, c))
        assert witt_equal(lhs, rhs)


def test_witt_ring_axioms_rational_smoke():
    d = QuadraticForm.diagonal
    a, b = d(Q, [2, -3]), d(Q, [5])
    assert witt_equal(witt_add(a, b), witt_add(b, a))
    assert witt_add(a, witt_neg(a)).is_zero()
    assert witt_equal(witt_mul(a, d(Q, [1])), a)


def test_signed_discriminant():
    assert signed_discriminant(QuadraticForm.diagonal(F3, [1, 1])) == F3.from_int(-1)
    assert signed_discriminant(QuadraticForm.diagonal(Q, [2, 3])).payload == Fraction(-6)
    # stable under adding a hyperbolic plane
    form = QuadraticForm.diagonal(F5, [1, 2])
    bigger = form.perp(hyperbolic_plane(F5))
    assert is_square(signed_discriminant(form) * signed_discriminant(bigger))


def test_signature():
    assert signature(QuadraticForm.diagonal(Q, [1, 1, 1, 1, -7])) == (4, 1)
    with pytest.raises(UnsupportedField):
        signature(QuadraticForm.diagonal(F3, [1]))


# ---------------------------------------------------------------------------
# serialization round trips
# ---------------------------------------------------------------------------


def test_form_json_roundtrip():
    form = QuadraticForm(Q, [[1, Fraction(1, 2)], [Fraction(1, 2), -3]])
    again = QuadraticForm.from_json(form.to_json())
    assert again == form
    form9 = QuadraticForm.diagonal(F9, [F9.generator(), F9.one()])
    assert QuadraticForm.from_json(form9.to_json()) == form9


def test_witt_class_json_roundtrip():
    wc = witt_decompose(QuadraticForm.diagonal(F3, [1, 1, 1]))
    again = WittClass.from_json(wc.to_json())
    assert again.hyperbolic == wc.hyperbolic
    assert again.anisotropic == wc.anisotropic


def test_evaluate_and_bilinear():
    form = QuadraticForm(Q, [[1, 2], [2, -1]])
    assert form.evaluate([1, 1]).payload == Fraction(4)  # 1 + 2*2 - 1
    assert form.bilinear([1, 0], [0, 1]).payload == Fraction(2)
    assert form.tensor(form).dim == 4
    assert form.perp(form).dim == 4
