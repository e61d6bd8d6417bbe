"""Batch verification suites behind ``wittforge verify``.

Each suite runs a list of named cases.  A case records the law it checks
in plain language, the inputs it ran on, a status, and — whenever the
status is not ``pass`` — a witness a reader can replay.  All randomized
sweeps draw from a caller-supplied seed, and case ids are stable, so a
report is reproducible byte for byte in JSON mode.
"""

import random
import time

from . import linalg
from .complexes import ChainComplex, DualityDatum, bidual_involution_check
from .errors import Inconclusive, NotRegularSequence, ParityError
from .fields import FieldSpec, find_irreducible
from .koszul import (
    DEFAULT_BOUND,
    KoszulDatum,
    koszul_form,
    split_factorization,
    theta_multiplicative,
    trace_diagram,
    x_map,
)
from .polynomials import PolyRing
from .projspace import ProjLineBundleQuery, closed_formula_dims, cohomology, pushforward_phi_r
from .quadforms import (
    QuadraticForm,
    diagonalize,
    hilbert_symbol,
    relevant_places,
    witt_add,
    witt_decompose,
    witt_equal,
    witt_mul,
    witt_neg,
    witt_zero,
)
from .transfer import (
    ExtensionDatum,
    base_change_check,
    cartan_isomorphism,
    projection_formula_check,
    scharlau_transfer,
    trace_form,
    transfer_compose_check,
    triangle_identities_check,
)

Q = FieldSpec.Q()
PRIMES = (3, 5, 7)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


class VerificationReport:
    """Outcome of one suite: named cases plus summary counts.

    ``wall_time`` is measured but deliberately left out of :meth:`to_json`
    so that two runs with the same seed serialize identically.
    """

    __slots__ = ("suite", "cases", "wall_time")

    def __init__(self, suite, cases, wall_time=0.0):
        self.suite = suite
        self.cases = sorted(cases, key=lambda c: c["id"])
        self.wall_time = wall_time
        for case in self.cases:
            if case["status"] != "pass" and case.get("witness") is None:
                raise ValueError(f"case {case['id']} did not pass but has no witness")

    def summary(self):
        counts = {"pass": 0, "fail": 0, "inconclusive": 0}
        for case in self.cases:
            counts[case["status"]] += 1
        counts["total"] = len(self.cases)
        return counts

    @property
    def passed(self):
        return all(case["status"] == "pass" for case in self.cases)

    def failures(self):
        return [case for case in self.cases if case["status"] != "pass"]

    def to_json(self):
        return {
            "suite": self.suite,
            "summary": self.summary(),
            "cases": [
                {k: case[k] for k in ("id", "law", "inputs", "status", "witness") if k in case}
                for case in self.cases
            ],
        }

    def __repr__(self):
        s = self.summary()
        return f"VerificationReport({self.suite}: {s['pass']}/{s['total']} pass)"


def _case(cid, law, inputs, ok, witness=None):
    if ok:
        return {"id": cid, "law": law, "inputs": inputs, "status": "pass"}
    return {
        "id": cid,
        "law": law,
        "inputs": inputs,
        "status": "fail",
        "witness": witness if witness is not None else {"detail": "claimed equality fails"},
    }


def _inconclusive(cid, law, inputs, witness):
    return {"id": cid, "law": law, "inputs": inputs, "status": "inconclusive", "witness": witness}


def _report_case(cid, law, inputs, report):
    """Adapt a CheckReport-style object (truthy, with to_json) to a case."""
    ok = bool(report)
    return _case(cid, law, inputs, ok, witness=None if ok else report.to_json())


# ---------------------------------------------------------------------------
# shared generators
# ---------------------------------------------------------------------------


def field_label(field):
    if field.kind == "Q":
        return "Q"
    if field.is_finite:
        return f"F{field.order()}"
    return repr(field)


_EXT_CACHE = {}


def extension_of(base, degree):
    """A deterministic degree-``degree`` extension of ``base`` (cached)."""
    key = (base, degree)
    if key not in _EXT_CACHE:
        _EXT_CACHE[key] = (
            base if degree == 1 else FieldSpec.extension(base, find_irreducible(base, degree))
        )
    return _EXT_CACHE[key]


def qsqrt(n):
    return FieldSpec.extension(Q, [-n, 0, 1])


def random_nondegenerate(field, rng, dim):
    """A random symmetric Gram matrix with no radical."""
    while True:
        g = [[field.random_element(rng) for _ in range(dim)] for _ in range(dim)]
        for i in range(dim):
            for j in range(i):
                g[i][j] = g[j][i]
        form = QuadraticForm(field, g)
        entries, _ = diagonalize(form)
        if all(not e.is_zero() for e in entries):
            return form


def random_invertible(field, rng, n):
    if n == 0:
        return []
    while True:
        m = [[field.from_int(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if linalg.inverse(field, m) is not None:
            return m


def random_complex(field, rng, lo=-1, hi=2, max_h=2, max_e=2):
    """A random bounded complex of free modules over a field.

    Built as a direct sum of zero-differential homology blocks and
    contractible identity pairs, then conjugated degreewise by random
    invertible matrices, so it is free, bounded, and never degenerate by
    construction.
    """
    h = {n: rng.randint(0, max_h) for n in range(lo, hi + 1)}
    force = rng.randint(lo, hi)
    h[force] = max(1, h[force])
    e = {n: rng.randint(0, max_e) for n in range(lo + 1, hi + 1)}
    terms = {n: h[n] + e.get(n, 0) + e.get(n + 1, 0) for n in range(lo, hi + 1)}
    basis = {n: random_invertible(field, rng, r) for n, r in terms.items()}
    diffs = {}
    for n in range(lo + 1, hi + 1):
        if not (terms[n - 1] and terms[n] and e.get(n)):
            continue
        mat = linalg.zeros(field, terms[n - 1], terms[n])
        for k in range(e[n]):
            mat[h[n - 1] + e.get(n - 1, 0) + k][h[n] + k] = field.one()
        inv = linalg.inverse(field, basis[n])
        diffs[n] = linalg.mat_mul(field, linalg.mat_mul(field, basis[n - 1], mat), inv)
    return ChainComplex(field, terms, diffs)


def coordinate_datum(d):
    ring = PolyRing(Q, tuple("xyzw")[:d])
    return KoszulDatum(ring, [ring.variable(i) for i in range(d)])


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def verify_scharlau(seed=0, size=None, bound=None):
    cases = []
    F3 = FieldSpec.Fp(3)
    F9 = extension_of(F3, 2)
    ext = ExtensionDatum(F9, F3)

    pushed = scharlau_transfer(ext, QuadraticForm.diagonal(F9, [1]))
    expected = QuadraticForm(F3, [[2, 0], [0, 1]])
    cases.append(
        _case(
            "scharlau/unit-is-trace-form",
            "the transfer of the unit form along F9/F3 is the trace form, matrix-exactly",
            {"ext": "F9/F3", "form": "<1>"},
            pushed == expected and pushed == trace_form(ext),
            witness=None if pushed == expected else pushed.to_json(),
        )
    )

    alpha = F9.generator()
    pushed = scharlau_transfer(ext, QuadraticForm.diagonal(F9, [alpha]))
    wc = witt_decompose(pushed)
    cases.append(
        _case(
            "scharlau/generator-is-hyperbolic",
            "the transfer of the generator form along F9/F3 is hyperbolic",
            {"ext": "F9/F3", "form": "<alpha>"},
            wc.is_zero() and wc.hyperbolic == 1,
            witness=None if wc.is_zero() else wc.to_json(),
        )
    )
    return cases


def verify_adjunction(seed=0, size=None, bound=None):
    """Triangle identities and comparison-map invertibility, degree by degree."""
    cases = []
    bottoms = [(FieldSpec.Fp(p), range(1, 10)) for p in PRIMES]
    bottoms += [(Q, ())]
    exts = []
    for bottom, degrees in bottoms:
        for d in degrees:
            exts.append(ExtensionDatum(extension_of(bottom, d), bottom))
    exts.append(ExtensionDatum(qsqrt(2), Q))
    exts.append(ExtensionDatum(qsqrt(5), Q))

    for ext in exts:
        label = f"{field_label(ext.top)}/{field_label(ext.bottom)}"
        report = triangle_identities_check(ext, 1, 1)
        cases.append(
            _report_case(
                f"adjunction/triangles/{label}",
                "restriction and transfer satisfy both triangle identities",
                {"ext": label, "dims": [1, 1]},
                report,
            )
        )
        cartan = cartan_isomorphism(ext, 1)
        invertible = linalg.inverse(ext.bottom, cartan.matrix) is not None
        cases.append(
            _case(
                f"adjunction/cartan/{label}",
                "the comparison map between the two internal-hom descriptions is invertible",
                {"ext": label, "dim": 1},
                invertible,
                witness=None if invertible else {"matrix": [[x.to_json() for x in r] for r in cartan.matrix]},
            )
        )
    return cases


def verify_towers(seed=0, size=50, bound=None):
    """Transfer along a two-step tower against the composite of the steps."""
    rng = random.Random(seed)
    cases = []
    law = "transfer along a tower equals the composite of the stepwise transfers"
    for k in range(size):
        p = rng.choice(PRIMES)
        base = FieldSpec.Fp(p)
        d1, d2 = rng.randint(1, 3), rng.randint(1, 3)
        mid = extension_of(base, d1)
        top = extension_of(mid, d2)
        inner = ExtensionDatum(top, mid)
        outer = ExtensionDatum(mid, base)
        q = random_nondegenerate(top, rng, rng.randint(1, 2))
        label = f"{field_label(top)}/{field_label(mid)}/{field_label(base)}"
        report = transfer_compose_check(outer, inner, q)
        cases.append(
            _report_case(
                f"towers/{k:03d}",
                law,
                {"tower": label, "dim": q.dim},
                report,
            )
        )
    # two rational towers with a trivial step each, for the char-0 path
    r2 = qsqrt(2)
    for k, (outer, inner, q) in enumerate(
        [
            (ExtensionDatum(Q, Q), ExtensionDatum(r2, Q), QuadraticForm.diagonal(r2, [r2.generator()])),
            (ExtensionDatum(r2, Q), ExtensionDatum(r2, r2), QuadraticForm.diagonal(r2, [1, r2.generator()])),
        ]
    ):
        label = f"{field_label(inner.top)}/{field_label(inner.bottom)}/{field_label(outer.bottom)}"
        cases.append(
            _report_case(
                f"towers/rational-{k}",
                law,
                {"tower": label, "dim": q.dim},
                transfer_compose_check(outer, inner, q),
            )
        )
    return cases


def verify_base_change(seed=0, size=50, bound=None):
    """Transfer commutes with extending scalars, split algebra and all."""
    rng = random.Random(seed)
    cases = []
    law = "transferring then extending scalars matches extending then transferring"
    for k in range(size):
        if k % 10 == 9:
            ext = ExtensionDatum(qsqrt(rng.choice([2, 5])), Q)
            other = Q
        else:
            base = FieldSpec.Fp(rng.choice(PRIMES))
            ext = ExtensionDatum(extension_of(base, rng.randint(2, 3)), base)
            other = extension_of(base, rng.randint(1, 3))
        q = random_nondegenerate(ext.top, rng, rng.randint(1, 2))
        label = f"{field_label(ext.top)}/{field_label(ext.bottom)}"
        report = base_change_check(ext, other, q)
        cases.append(
            _report_case(
                f"base-change/{k:03d}",
                law,
                {"ext": label, "scalars": field_label(other), "dim": q.dim},
                report,
            )
        )
    return cases


def verify_projection(seed=0, size=50, bound=None):
    """The projection formula in the Witt ring."""
    rng = random.Random(seed)
    cases = []
    law = "transfer(x . restricted y) equals transfer(x) . y up to Witt equivalence"
    for k in range(size):
        if k % 10 == 9:
            ext = ExtensionDatum(qsqrt(rng.choice([2, 5])), Q)
        else:
            base = FieldSpec.Fp(rng.choice(PRIMES))
            ext = ExtensionDatum(extension_of(base, rng.randint(2, 3)), base)
        x = random_nondegenerate(ext.top, rng, rng.randint(1, 2))
        y = random_nondegenerate(ext.bottom, rng, rng.randint(1, 2))
        label = f"{field_label(ext.top)}/{field_label(ext.bottom)}"
        report = projection_formula_check(ext, x, y)
        cases.append(
            _report_case(
                f"projection/{k:03d}",
                law,
                {"ext": label, "dims": [x.dim, y.dim]},
                report,
            )
        )
    return cases


def verify_theta(seed=0, size=None, bound=None):
    """The unit adjunct of the Koszul multiplication against the pairing."""
    cases = []
    for d in range(1, 5):
        k = coordinate_datum(d)
        ok = x_map(k) == koszul_form(k).form
        cases.append(
            _case(
                f"theta/xmap-d{d}",
                "the adjunct of multiplication into the shifted line equals the duality pairing",
                {"rank": d, "section": "coordinates"},
                ok,
            )
        )
    for d in range(2, 5):
        k = coordinate_datum(d)
        for head in range(1, d):
            cases.append(
                _case(
                    f"theta/split-d{d}h{head}",
                    "the pairing of a split section is the tensor product of the factor pairings",
                    {"rank": d, "head": head},
                    theta_multiplicative(k, head),
                )
            )
    return cases


def verify_trace(seed=0, size=None, bound=DEFAULT_BOUND):
    """Exactness of the augmented Koszul complex, and rejection without it."""
    cases = []
    for d in range(1, 5):
        k = coordinate_datum(d)
        try:
            diagram = trace_diagram(k, bound=bound)
            ok = diagram.certificate["socle_degree"] == -d
            witness = None if ok else diagram.certificate
        except NotRegularSequence as err:
            ok, witness = False, {"error": str(err), "homology": _jsonable(err.witness)}
        cases.append(
            _case(
                f"trace/exact-d{d}",
                "the augmented Koszul complex of a coordinate section has homology "
                "only in the socle degree",
                {"rank": d, "section": "coordinates", "bound": bound},
                ok,
                witness=witness,
            )
        )

    ring = PolyRing(Q, ("x", "y"))
    x = ring.variable("x")
    try:
        trace_diagram(KoszulDatum(ring, [x, x]), bound=bound)
        ok, witness = False, {"detail": "a dependent section was accepted"}
    except NotRegularSequence as err:
        stray = err.witness or {}
        ok = any(v for v in stray.values())
        witness = None if ok else {"detail": "rejection carried no homology witness"}
    cases.append(
        _case(
            "trace/reject-dependent",
            "a linearly dependent section is rejected with a nonzero-homology witness",
            {"rank": 2, "section": "x,x", "bound": bound},
            ok,
            witness=witness,
        )
    )
    return cases


def verify_split(seed=0, size=None, bound=None):
    cases = []
    for d in range(1, 4):
        cert = split_factorization(coordinate_datum(d))
        cases.append(
            _case(
                f"split/d{d}",
                "splitting off the last section entry factors the pairing, "
                "with the split-off factor a cone (hence trivial in the Witt group)",
                {"rank": d},
                bool(cert) and cert.witt_trivial_factor,
                witness=None if cert else cert.to_json(),
            )
        )
    return cases


def verify_cohomology(seed=0, size=None, bound=None):
    """Line bundles on projective space: decomposition vs closed formulas."""
    cases = []
    F7 = FieldSpec.Fp(7)
    for r in range(1, 5):
        window_zero = True
        witness = None
        for m in range(-r, 0):
            for field in (Q, F7):
                report = cohomology(ProjLineBundleQuery(r, m, field))
                formula = closed_formula_dims(r, m)
                if not report.is_zero() or any(formula):
                    window_zero = False
                    witness = {"r": r, "m": m, "dims": list(report.dims), "formula": list(formula)}
        cases.append(
            _case(
                f"cohomology/window-r{r}",
                "every twist in the window -r..-1 has vanishing cohomology, by "
                "monomial decomposition and by the closed formulas",
                {"r": r, "window": [-r, -1]},
                window_zero,
                witness=witness,
            )
        )
        agree = True
        witness = None
        for m in range(-r - 3, 4):
            report = cohomology(ProjLineBundleQuery(r, m, Q))
            formula = closed_formula_dims(r, m)
            if list(report.dims) != list(formula):
                agree = False
                witness = {"r": r, "m": m, "dims": list(report.dims), "formula": list(formula)}
        cases.append(
            _case(
                f"cohomology/sweep-r{r}",
                "monomial-decomposition dimensions match the closed formulas across the sweep",
                {"r": r, "m_range": [-r - 3, 3]},
                agree,
                witness=witness,
            )
        )
    return cases


def verify_phi(seed=0, size=None, bound=None):
    cases = []
    for r in (1, 3):
        report = pushforward_phi_r(r, Q)
        cases.append(
            _case(
                f"phi/odd-r{r}",
                "the half-canonical form pushes forward to zero: its target twist "
                "has no cohomology at all",
                {"r": r, "twist": -(r + 1) // 2},
                report.is_zero(),
                witness=None if report.is_zero() else report.to_json(),
            )
        )
    try:
        pushforward_phi_r(2, Q)
        ok, witness = False, {"detail": "even fiber dimension was accepted"}
    except ParityError as err:
        ok, witness = True, None
    cases.append(
        _case(
            "phi/even-r2",
            "even fiber dimension admits no half-canonical twist and is rejected",
            {"r": 2},
            ok,
            witness=witness,
        )
    )
    return cases


_WITT_LAWS = (
    ("add-commutes", lambda F, a, b, c, one, zero: witt_equal(witt_add(a, b), witt_add(b, a))),
    (
        "add-associates",
        lambda F, a, b, c, one, zero: witt_equal(witt_add(witt_add(a, b), c), witt_add(a, witt_add(b, c))),
    ),
    ("add-unit", lambda F, a, b, c, one, zero: witt_equal(witt_add(a, zero), a)),
    ("add-inverse", lambda F, a, b, c, one, zero: witt_add(a, witt_neg(a)).is_zero()),
    ("mul-commutes", lambda F, a, b, c, one, zero: witt_equal(witt_mul(a, b), witt_mul(b, a))),
    (
        "mul-associates",
        lambda F, a, b, c, one, zero: witt_equal(witt_mul(witt_mul(a, b), c), witt_mul(a, witt_mul(b, c))),
    ),
    ("mul-unit", lambda F, a, b, c, one, zero: witt_equal(witt_mul(one, a), a)),
    (
        "distributes",
        lambda F, a, b, c, one, zero: witt_equal(
            witt_mul(a, witt_add(b, c)), witt_add(witt_mul(a, b), witt_mul(a, c))
        ),
    ),
)


def verify_witt(seed=0, size=6, bound=None):
    """Ring axioms on random Witt classes, plus the split of <1,1,1,1>."""
    rng = random.Random(seed)
    cases = []
    for p in PRIMES:
        field = FieldSpec.Fp(p)
        one = QuadraticForm.diagonal(field, [1])
        zero = witt_zero(field)
        for k in range(size):
            a, b, c = (random_nondegenerate(field, rng, rng.randint(1, 2)) for _ in range(3))
            failed = [name for name, law in _WITT_LAWS if not law(field, a, b, c, one, zero)]
            cases.append(
                _case(
                    f"witt/axioms-F{p}-{k}",
                    "Witt classes form a commutative ring",
                    {"field": f"F{p}", "dims": [a.dim, b.dim, c.dim]},
                    not failed,
                    witness=None
                    if not failed
                    else {"laws": failed, "forms": [f.to_json() for f in (a, b, c)]},
                )
            )
    for p in (3, 5):
        field = FieldSpec.Fp(p)
        wc = witt_decompose(QuadraticForm.diagonal(field, [1, 1, 1, 1]))
        ok = wc.is_zero() and wc.hyperbolic == 2
        cases.append(
            _case(
                f"witt/four-units-F{p}",
                "the four-fold unit form splits into two hyperbolic planes",
                {"field": f"F{p}", "form": "<1,1,1,1>"},
                ok,
                witness=None if ok else wc.to_json(),
            )
        )
    return cases


def verify_hilbert(seed=0, size=200, bound=None):
    """The product formula for Hilbert symbols over the rationals."""
    rng = random.Random(seed)
    nonzero = [s for s in range(-30, 31) if s != 0]
    cases = []
    for k in range(size):
        a, b = rng.choice(nonzero), rng.choice(nonzero)
        prod = 1
        locals_seen = {}
        for v in relevant_places([a, b]):
            sym = hilbert_symbol(a, b, v)
            locals_seen[str(v)] = sym
            prod *= sym
        cases.append(
            _case(
                f"hilbert/{k:03d}",
                "the product of local Hilbert symbols over all relevant places is 1",
                {"a": a, "b": b},
                prod == 1,
                witness=None if prod == 1 else {"locals": locals_seen, "product": prod},
            )
        )
    return cases


def verify_bidual(seed=0, size=100, bound=None):
    """The dual of the bidual map inverts the bidual map of the dual."""
    rng = random.Random(seed)
    F5 = FieldSpec.Fp(5)
    cases = []
    for k in range(size):
        field = (F5, Q)[k % 2]
        datum = DualityDatum(
            field, twist=field.from_int(rng.choice([1, 2, 3])), degree=rng.randint(-1, 2)
        )
        cx = random_complex(field, rng)
        ok = bidual_involution_check(cx, datum)
        cases.append(
            _case(
                f"bidual/{k:03d}",
                "dualizing the bidual map gives a matrix-exact inverse of the "
                "bidual map of the dual",
                {
                    "field": field_label(field),
                    "degree": datum.degree,
                    "ranks": {str(n): r for n, r in sorted(cx.terms.items())},
                },
                ok,
                witness=None if ok else {"detail": "composite is not the identity"},
            )
        )
    return cases


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

SUITES = {
    "scharlau": verify_scharlau,
    "adjunction": verify_adjunction,
    "towers": verify_towers,
    "base-change": verify_base_change,
    "projection": verify_projection,
    "theta": verify_theta,
    "trace": verify_trace,
    "split": verify_split,
    "cohomology": verify_cohomology,
    "phi": verify_phi,
    "witt": verify_witt,
    "hilbert": verify_hilbert,
    "bidual": verify_bidual,
}


def run_suite(name, seed=0, size=None, bound=None):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn = SUITES[name]
    kwargs = {"seed": seed}
    if size is not None:
        kwargs["size"] = size
    if bound is not None:
        kwargs["bound"] = bound
    start = time.perf_counter()
    try:
        cases = fn(**kwargs)
    except Inconclusive as err:
        cases = [
            _inconclusive(
                f"{name}/inconclusive",
                "the suite could not decide within its bounds",
                {"suite": name},
                {"error": str(err)},
            )
        ]
    return VerificationReport(name, cases, wall_time=time.perf_counter() - start)


def run_all(seed=0, size=None, bound=None):
    return [run_suite(name, seed=seed, size=size, bound=bound) for name in SUITES]
