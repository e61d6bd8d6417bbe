"""Koszul complexes of sections, the duality pairing, and the trace map.

The exterior algebra on d letters is indexed by subsets of {1..d} in
lexicographic order, and every sign in this module comes from one rule:
the sign of merging two disjoint subsets is the parity of their
inversions.  Contraction, wedge multiplication, the duality pairing and
the splitting isomorphisms are all instances of that rule, so the tests
pin the small cases once and the rest cannot drift independently.

The normalization of the pairing is the one forced by the ambient sign
conventions of ``complexes``: under those, the dual of [R -> R] by s
carries +s again, so the length-one pairing is (+1, +1) and everything
longer is its tensor power.  Presentations that negate the dual
differential write the same space with components (-1, 1); the two differ
by a unit change of basis, not in substance.  The flagship check below
(``x_map`` against ``koszul_form``) is convention-independent either way:
both sides are built from the same frozen rules through disjoint code
paths.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb

from . import linalg
from .complexes import (
    ChainComplex,
    ChainMap,
    DualityDatum,
    adjunction_unit,
    associator,
    bidual_map,
    combine_duality,
    cone,
    dualize,
    dualize_map,
    duality_interchange,
    element_from_ring_json,
    graded_homology_dims,
    hom_complex,
    hom_post,
    left_unitor,
    ring_from_json,
    scale_map,
    single,
    tensor,
    tensor_layout,
    tensor_map,
    unit_complex,
)
from .errors import NotAChainMap, NotRegularSequence

#: default internal-degree bound for graded exactness certificates
DEFAULT_BOUND = 6


class KoszulDatum:
    """A free module of rank d with a section (s_1, .., s_d) and a twist.

    The twist is a unit of the ring standing in for the determinant line;
    it never enters a matrix, only the duality bookkeeping.
    """

    __slots__ = ("ring", "rank", "section", "twist")

    def __init__(self, ring, section, twist=None):
        section = tuple(ring.element(s) for s in section)
        if not section:
            raise ValueError("a Koszul datum needs a section of rank >= 1")
        if any(s.is_zero() for s in section):
            raise ValueError("section entries must be nonzero")
        twist = ring.one() if twist is None else ring.element(twist)
        self.ring = ring
        self.rank = len(section)
        self.section = section
        self.twist = twist
        self.duality()  # rejects non-unit twists

    def duality(self):
        """Duality against the inverse determinant line, shifted by the rank."""
        return DualityDatum(self.ring, twist=_unit_inverse(self.ring, self.twist), degree=self.rank)

    def __repr__(self):
        return f"KoszulDatum(rank={self.rank}, section={list(self.section)!r})"

    def to_json(self):
        return {
            "ring": self.ring.to_json(),
            "section": [s.to_json() for s in self.section],
            "twist": self.twist.to_json(),
        }

    @classmethod
    def from_json(cls, obj):
        ring = ring_from_json(obj["ring"])
        section = [element_from_ring_json(ring, s) for s in obj["section"]]
        twist = (
            element_from_ring_json(ring, obj["twist"]) if "twist" in obj else None
        )
        return cls(ring, section, twist=twist)


def _unit_inverse(ring, x):
    if getattr(ring, "is_field", False):
        return x.inverse()
    return ring.constant(x.constant_value().inverse())


@lru_cache(maxsize=None)
def _subsets(d, k):
    return tuple(itertools.combinations(range(1, d + 1), k))


@lru_cache(maxsize=None)
def _subset_index(d, k):
    return {s: i for i, s in enumerate(_subsets(d, k))}


def _shuffle_sign(s, t):
    """Sign of sorting s ++ t into one subset; 0 when they overlap."""
    if set(s) & set(t):
        return 0
    inversions = sum(1 for a in s for b in t if a > b)
    return -1 if inversions % 2 else 1


def koszul_complex(k):
    """Contraction with the section; the term in degree i has rank C(d, i)."""
    ring, d = k.ring, k.rank
    terms = {i: comb(d, i) for i in range(d + 1)}
    diffs = {}
    for i in range(1, d + 1):
        rows = _subset_index(d, i - 1)
        mat = linalg.zeros(ring, comb(d, i - 1), comb(d, i))
        for c, subset in enumerate(_subsets(d, i)):
            for pos, j in enumerate(subset):
                rest = subset[:pos] + subset[pos + 1 :]
                entry = k.section[j - 1]
                mat[rows[rest]][c] = entry if pos % 2 == 0 else -entry
        diffs[i] = mat
    return ChainComplex(ring, terms, diffs)


class SymmetricSpace:
    """A complex with a chain-map form into its twisted dual.

    The symmetry sign is measured, never asserted: the constructor
    computes dualize(form) . bidual and records whether that is +form or
    -form, refusing anything else.
    """

    __slots__ = ("carrier", "duality", "form", "symmetry_sign", "metadata")

    def __init__(self, carrier, duality, form, metadata=None):
        if form.source != carrier or form.target != dualize(carrier, duality):
            raise NotAChainMap("the form must map the carrier to its dual")
        transposed = dualize_map(form, duality).compose(bidual_map(carrier, duality))
        if transposed == form:
            sign = 1
        elif transposed == scale_map(form, carrier.ring.from_int(-1)):
            sign = -1
        else:
            raise ValueError("the form is neither symmetric nor antisymmetric")
        self.carrier = carrier
        self.duality = duality
        self.form = form
        self.symmetry_sign = sign
        self.metadata = dict(metadata or {})

    def __repr__(self):
        ranks = ", ".join(f"{n}:{r}" for n, r in sorted(self.carrier.terms.items()))
        return f"SymmetricSpace([{ranks}], sign={self.symmetry_sign:+d})"

    def to_json(self):
        return {
            "ranks": {str(n): r for n, r in sorted(self.carrier.terms.items())},
            "duality": self.duality.to_json(),
            "symmetry_sign": self.symmetry_sign,
            "metadata": self.metadata,
        }


def koszul_form(k, kos=None):
    """The pairing Kos -> Hom(Kos, twist[d]): wedge onto the top power.

    Component i sends the basis vector of a subset S to the functional
    picking out the complementary subset, weighted by the merge sign.
    """
    ring, d = k.ring, k.rank
    if kos is None:
        kos = koszul_complex(k)
    datum = k.duality()
    everything = set(range(1, d + 1))
    comps = {}
    for i in range(d + 1):
        rows = _subset_index(d, d - i)
        mat = linalg.zeros(ring, comb(d, d - i), comb(d, i))
        for u, subset in enumerate(_subsets(d, i)):
            other = tuple(sorted(everything - set(subset)))
            mat[rows[other]][u] = ring.from_int(_shuffle_sign(subset, other))
        comps[i] = mat
    form = ChainMap(kos, dualize(kos, datum), comps)
    return SymmetricSpace(kos, datum, form)


def delta_map(k, kos=None, t=None):
    """Exterior multiplication Kos (x) Kos -> Kos with merge signs."""
    ring, d = k.ring, k.rank
    if kos is None:
        kos = koszul_complex(k)
    if t is None:
        t = tensor(kos, kos)
    comps = {}
    for n in kos.terms:
        mat = linalg.zeros(ring, kos.rank(n), t.rank(n))
        rows = _subset_index(d, n)
        for i, j, _, rb, off in tensor_layout(kos, kos, n):
            for p, left in enumerate(_subsets(d, i)):
                for q, right in enumerate(_subsets(d, j)):
                    sign = _shuffle_sign(left, right)
                    if sign:
                        merged = tuple(sorted(left + right))
                        mat[rows[merged]][off + p * rb + q] = ring.from_int(sign)
        comps[n] = mat
    return ChainMap(t, kos, comps)


def sigma_map(k, kos=None):
    """Projection onto the top exterior power: the identity in degree d."""
    if kos is None:
        kos = koszul_complex(k)
    return ChainMap(kos, single(k.ring, k.rank, 1), {k.rank: [[k.ring.one()]]})


def unit_inclusion(k, kos=None):
    """The ring into degree 0 of the Koszul complex; the unit for delta."""
    if kos is None:
        kos = koszul_complex(k)
    return ChainMap(unit_complex(k.ring), kos, {0: [[k.ring.one()]]})


def delta_unital(k):
    """delta . (unit (x) id) agrees with the left unitor, matrix-exactly."""
    kos = koszul_complex(k)
    inc = unit_inclusion(k, kos=kos)
    via_delta = delta_map(k, kos=kos).compose(tensor_map(inc, ChainMap.identity(kos)))
    return via_delta == left_unitor(kos)


def delta_associative(k):
    """delta . (delta (x) id) = delta . (id (x) delta) . associator."""
    kos = koszul_complex(k)
    delta = delta_map(k, kos=kos)
    one = ChainMap.identity(kos)
    lhs = delta.compose(tensor_map(delta, one))
    rhs = delta.compose(tensor_map(one, delta)).compose(associator(kos, kos, kos))
    return lhs == rhs


def x_map(k, kos=None):
    """The adjoint of (top-power projection) . (wedge multiplication).

    Built entirely from the tensor-hom adjunction: the unit sends a to the
    map b -> a (x) b, post-composition by delta then sigma lands in the
    twisted dual.  Shares no code with ``koszul_form``, which is the point:
    the two are compared matrix-exactly.
    """
    if kos is None:
        kos = koszul_complex(k)
    t = tensor(kos, kos)
    h = hom_complex(kos, t)
    unit = adjunction_unit(kos, kos, t=t, h=h)
    collapse = sigma_map(k, kos=kos).compose(delta_map(k, kos=kos, t=t))
    dual = dualize(kos, k.duality())
    return hom_post(kos, collapse, src=h, dst=dual).compose(unit)


def split_datum(k, head):
    """Split the section after position ``head``; the head keeps the twist."""
    if not 1 <= head < k.rank:
        raise ValueError(f"split position must satisfy 1 <= head < {k.rank}")
    first = KoszulDatum(k.ring, k.section[:head], twist=k.twist)
    second = KoszulDatum(k.ring, k.section[head:])
    return first, second


def split_iso(k, head, kos=None):
    """Kos_F -> Kos_head (x) Kos_tail: split each subset at ``head``.

    The plain subset split is already a chain map: elements of the head
    block precede the tail block, so no inversions appear.
    """
    first, second = split_datum(k, head)
    ring, d = k.ring, k.rank
    if kos is None:
        kos = koszul_complex(k)
    a = koszul_complex(first)
    b = koszul_complex(second)
    t = tensor(a, b)
    comps = {}
    for n in kos.terms:
        mat = linalg.zeros(ring, t.rank(n), comb(d, n))
        offs = {(i, j): (off, rb) for i, j, _, rb, off in tensor_layout(a, b, n)}
        for u, subset in enumerate(_subsets(d, n)):
            low = tuple(x for x in subset if x <= head)
            high = tuple(x - head for x in subset if x > head)
            off, rb = offs[(len(low), len(high))]
            p = _subset_index(head, len(low))[low]
            q = _subset_index(d - head, len(high))[high]
            mat[off + p * rb + q][u] = ring.one()
        comps[n] = mat
    return ChainMap(kos, t, comps)


def theta_multiplicative(k, head):
    """Whether the pairing of F corresponds to the tensor pairing of a split."""
    first, second = split_datum(k, head)
    s1, s2 = koszul_form(first), koszul_form(second)
    c = split_iso(k, head)
    lam = duality_interchange(s1.carrier, s2.carrier, s1.duality, s2.duality)
    rhs = (
        dualize_map(c, combine_duality(s1.duality, s2.duality))
        .compose(lam)
        .compose(tensor_map(s1.form, s2.form))
        .compose(c)
    )
    return koszul_form(k).form == rhs


# ---------------------------------------------------------------------------
# the trace diagram and the push-forward form
# ---------------------------------------------------------------------------


def _wedge_matrix(k, i):
    """Wedging with the section, from the i-th to the (i+1)-st power."""
    ring, d = k.ring, k.rank
    rows = _subset_index(d, i + 1)
    mat = linalg.zeros(ring, comb(d, i + 1), comb(d, i))
    for c, subset in enumerate(_subsets(d, i)):
        for j in range(1, d + 1):
            if j in subset:
                continue
            merged = tuple(sorted(subset + (j,)))
            below = sum(1 for x in subset if x < j)
            entry = k.section[j - 1]
            mat[rows[merged]][c] = entry if below % 2 == 0 else -entry
    return mat


class TraceDiagram:
    """The three maps around the twisted augmented Koszul complex."""

    __slots__ = ("middle", "up", "down", "certificate")

    def __init__(self, middle, up, down, certificate):
        self.middle = middle
        self.up = up
        self.down = down
        self.certificate = certificate

    def __repr__(self):
        return f"TraceDiagram(socle={self.certificate['socle_dims']!r})"


def trace_diagram(k, bound=DEFAULT_BOUND):
    """The augmented Koszul complex, its two displayed maps, and exactness.

    The middle row has the i-th exterior power in degree -i with the
    wedge-by-the-section differential.  ``up`` is the section viewed as a
    map from the ring into the rank-d term; ``down`` includes the rank-one
    socle in degree -d.  The certificate records the graded homology
    through the internal-degree bound, which must be concentrated in
    degree -d; anything else raises with the offending dimensions.
    """
    ring, d = k.ring, k.rank
    middle = ChainComplex(
        ring,
        {-i: comb(d, i) for i in range(d + 1)},
        {-i: _wedge_matrix(k, i) for i in range(d)},
    )
    truncated = ChainComplex(
        ring,
        {-i: comb(d, i + 1) for i in range(d)},
        {-i: _wedge_matrix(k, i + 1) for i in range(d - 1)},
    )
    up = ChainMap(unit_complex(ring), truncated, {0: [[s] for s in k.section]})
    down = ChainMap(single(ring, -d, 1), middle, {-d: [[ring.one()]]})
    homology = graded_homology_dims(middle, bound)
    stray = {key: v for key, v in homology.items() if key[0] != -d}
    if stray:
        raise NotRegularSequence(
            f"graded homology away from degree {-d}: {sorted(stray.items())}",
            witness=stray,
        )
    certificate = {
        "bound": bound,
        "socle_degree": -d,
        "socle_dims": {t: v for (_, t), v in sorted(homology.items())},
    }
    return TraceDiagram(middle, up, down, certificate)


def pushforward_unit_form(k, bound=DEFAULT_BOUND):
    """The Koszul space as the push-forward of the unit form on the zero locus.

    Requires the regularity certificate from the trace diagram; attaches
    it, together with the measured graded quasi-isomorphism property of
    the pairing, as metadata on the returned space.
    """
    diagram = trace_diagram(k, bound=bound)
    space = koszul_form(k)
    acyclic = not graded_homology_dims(cone(space.form), bound)
    space.metadata.update(
        {
            "pushforward_of": "unit form on the zero locus",
            "regularity_bound": bound,
            "socle_dims": diagram.certificate["socle_dims"],
            "form_graded_quasi_iso": acyclic,
        }
    )
    return space


class SplitCertificate:
    """Certified splitting of a Koszul space along its last section entry."""

    __slots__ = (
        "rank",
        "split",
        "iso",
        "iso_inverse",
        "iso_invertible",
        "form_factorizes",
        "cone_factor",
        "cone_matches",
        "witt_trivial_factor",
    )

    def __init__(
        self,
        rank,
        split,
        iso,
        iso_inverse,
        iso_invertible,
        form_factorizes,
        cone_factor,
        cone_matches,
    ):
        self.rank = rank
        self.split = split
        self.iso = iso
        self.iso_inverse = iso_inverse
        self.iso_invertible = iso_invertible
        self.form_factorizes = form_factorizes
        self.cone_factor = cone_factor
        self.cone_matches = cone_matches
        # a factor exhibited as the cone of a map of line complexes is
        # hyperbolic up to homotopy, hence trivial in the Witt group
        self.witt_trivial_factor = cone_matches

    def __bool__(self):
        return self.iso_invertible and self.form_factorizes and self.cone_matches

    def __repr__(self):
        status = "ok" if self else "FAILED"
        return f"SplitCertificate(rank={self.rank}, split={self.split}, {status})"

    def to_json(self):
        return {
            "rank": self.rank,
            "split": list(self.split),
            "iso_invertible": self.iso_invertible,
            "form_factorizes": self.form_factorizes,
            "cone_matches": self.cone_matches,
            "witt_trivial_factor": self.witt_trivial_factor,
        }


def split_factorization(k):
    """Split off the last section entry and certify the factorization.

    Certifies three matrix-exact facts: the subset-splitting map is an
    isomorphism, the pairing corresponds to the tensor of the two smaller
    pairings, and the length-one factor is the cone of multiplication by
    its entry on the twist line.  For rank one the splitting is trivial
    and only the cone identification is in play.
    """
    ring, d = k.ring, k.rank
    kos = koszul_complex(k)
    line = single(ring, 0, 1)
    cone_factor = cone(ChainMap(line, line, {0: [[k.section[-1]]]}))
    if d == 1:
        iso = ChainMap.identity(kos)
        inverse = iso
        form_factorizes = True
        cone_matches = cone_factor == kos
        split = (1,)
    else:
        iso = split_iso(k, d - 1, kos=kos)
        inverse = ChainMap(
            iso.target,
            iso.source,
            {n: linalg.transpose(iso.component(n)) for n in iso.components},
        )
        form_factorizes = theta_multiplicative(k, d - 1)
        _, tail = split_datum(k, d - 1)
        cone_matches = cone_factor == koszul_complex(tail)
        split = (d - 1, 1)
    invertible = (
        inverse.compose(iso).is_identity() and iso.compose(inverse).is_identity()
    )
    return SplitCertificate(
        rank=d,
        split=split,
        iso=iso,
        iso_inverse=inverse,
        iso_invertible=invertible,
        form_factorizes=form_factorizes,
        cone_factor=cone_factor,
        cone_matches=cone_matches,
    )
