"""Built-in fixtures and the check suites run on them.

Fixtures are stored as structure-definition files under ``fixtures/``; each
carries an ``expect.<check>`` table with the committed verdicts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .expr import ExprError
from .geometries import (AlmostContactMetric, NotContactError, almost_contact_pi,
                         check_almost_contact_pi, check_contact_algebroid, check_contact_metric,
                         check_half_kenmotsu_equivalence, check_lcs, check_lcs_algebroid,
                         check_lcs_jacobi_equivalence, check_omega_pi_xi, check_reeb,
                         conformal_checks, contact_from, kenmotsu_check, lck_check, lcs_from,
                         validate_almost_contact)
from .geometries.contact import HALF
from .jacobi_algebroid import (JacobiData, check_anchor_identity, check_leibniz,
                               check_poisson_identities, is_jacobi, verify)
from .manifold import (EndoField, Form, GeometryError, MetricField, Multivector, OneForm,
                       VectorField, random_one_form)
from .metric_connection import (build_package, check_D_pi_formula, check_D_properties,
                                check_levi_civita_metric, check_prop_LC, compatibility_check)
from .report import CheckContext
from .structfile import StructureDef, StructureError, load_path, parse_text

SUITES = ("jacobi", "algebroid", "contact", "lcs", "connection", "compatibility", "kenmotsu",
          "lck")


class FixtureError(GeometryError):
    """A fixture failed its own defining identities."""


class UnknownFixture(KeyError):
    pass


@dataclass(eq=False)
class Fixture:
    definition: StructureDef
    chart: object
    pi: Multivector | None = None
    xi: VectorField | None = None
    g: MetricField | None = None
    eta: OneForm | None = None
    phi: EndoField | None = None
    omega: Form | None = None
    theta: OneForm | None = None
    f: object = None
    lam_explicit: OneForm | None = None
    contact: object = None
    acm: AlmostContactMetric | None = None
    lcs: object = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def name(self):
        return self.definition.name

    @property
    def kind(self):
        return self.definition.kind

    @property
    def expect(self):
        return self.definition.expect

    @property
    def lam_choice(self):
        d = self.definition.lam
        if d:
            return d
        if self.g is not None:
            return "metric"
        if self.eta is not None:
            return "eta"
        if self.theta is not None:
            return "theta"
        return "zero"

    def lam(self, ctx=None):
        choice = self.lam_choice
        if choice == "metric":
            if self.g is None:
                raise GeometryError("lambda = metric needs a metric")
            return self.package(ctx).lam
        if choice == "eta":
            return self._need(self.eta, "eta")
        if choice == "theta":
            return self._need(self.theta, "theta")
        if choice == "explicit":
            return self.lam_explicit
        return OneForm.zero(self.chart)

    def _need(self, obj, what):
        if obj is None:
            raise GeometryError(f"fixture {self.name!r} has no {what}")
        return obj

    def jacobi(self, ctx=None) -> JacobiData:
        """The (pi, xi) pair with lambda resolved and the verified tag set."""
        key = ("jacobi", id(ctx) if ctx else None)
        if key not in self._cache:
            j = JacobiData(self.chart, self.pi, self.xi, None)
            j, rep = verify(j, ctx or CheckContext(self.chart))
            self._cache[key] = (j, rep)
        j, _ = self._cache[key]
        return j.with_lambda(self.lam(ctx))

    def package(self, ctx=None):
        if self.g is None:
            raise GeometryError(f"fixture {self.name!r} has no metric")
        if "package" not in self._cache:
            j = JacobiData(self.chart, self.pi, self.xi, None)
            j, _ = verify(j, ctx or CheckContext(self.chart))
            self._cache["package"] = build_package(j, self.g, ctx=ctx)
        return self._cache["package"]


def build(defn: StructureDef, validate=True, ctx=None) -> Fixture:
    try:
        chart = defn.chart()
    except (GeometryError, ExprError) as exc:
        raise StructureError(str(exc), None, defn.name) from None
    n = chart.dim

    def expr_dict(prefix):
        return {idx: chart.parse(t) for idx, t in defn.get(prefix).items()}

    def vec(prefix, cls):
        d = expr_dict(prefix)
        return cls(chart, [d.get((i,), 0) for i in range(n)]) if d or defn.has(prefix) else None

    fx = Fixture(defn, chart)
    kind = defn.kind
    if defn.has("g"):
        fx.g = MetricField.from_dict(chart, expr_dict("g"), defn.signature)
    if defn.has("phi"):
        fx.phi = EndoField.from_dict(chart, expr_dict("phi"))
    if defn.has("lambda"):
        fx.lam_explicit = vec("lambda", OneForm)
    if kind in ("poisson", "jacobi"):
        fx.pi = Multivector(chart, 2, expr_dict("pi"))
        fx.xi = vec("xi", VectorField) or VectorField.zero(chart)
    elif kind == "contact":
        fx.eta = vec("eta", OneForm)
        if fx.eta is None:
            raise StructureError("a contact structure needs eta components", None, defn.name)
        try:
            fx.contact = contact_from(fx.eta)
        except NotContactError as exc:
            raise FixtureError(f"{defn.name}: {exc}") from None
        fx.pi, fx.xi = fx.contact.pi, fx.contact.xi
        if fx.g is not None and fx.phi is not None:
            fx.acm = AlmostContactMetric(fx.phi, fx.xi, fx.eta, fx.g)
    elif kind == "almost-contact-metric":
        fx.eta = vec("eta", OneForm)
        fx.xi = vec("xi", VectorField)
        if None in (fx.eta, fx.xi, fx.phi, fx.g):
            raise StructureError("an almost contact metric structure needs phi, xi, eta and g",
                                 None, defn.name)
        fx.acm = AlmostContactMetric(fx.phi, fx.xi, fx.eta, fx.g)
        fx.pi = almost_contact_pi(fx.acm).pi
    else:
        fx.omega = Form(chart, 2, expr_dict("omega"))
        fx.theta = vec("theta", OneForm) or OneForm.zero(chart)
        fx.f = chart.parse(defn.get("f")[()]) if defn.has("f") else None
        fx.lcs = lcs_from(fx.omega, fx.theta, fx.f, ctx)
        fx.pi, fx.xi = fx.lcs.pi, fx.lcs.xi
    if validate:
        self_validate(fx, ctx)
    return fx


def self_validate(fx: Fixture, ctx=None):
    """Check the defining identities of the fixture's kind (inverted for counterexamples)."""
    ctx = ctx or CheckContext(fx.chart)
    kind = fx.kind
    reports = []
    if kind in ("poisson", "jacobi"):
        reports.append(is_jacobi(fx.pi, fx.xi, ctx))
        if kind == "poisson" and not fx.xi.is_zero():
            raise FixtureError(f"{fx.name}: a Poisson fixture must have xi = 0")
    if kind == "contact":
        reports.append(check_reeb(fx.contact, ctx))
    if fx.acm is not None:
        reports.append(validate_almost_contact(fx.acm, ctx))
        if kind == "contact":
            reports.append(check_contact_metric(fx.acm, ctx))
    if fx.lcs is not None:
        reports.append(check_lcs(fx.lcs, ctx))
    ok = all(r.passed for r in reports)
    if fx.definition.counterexample:
        if ok:
            raise FixtureError(f"{fx.name}: marked as a counterexample but its defining "
                               "identities hold")
    elif not ok:
        bad = ", ".join(f"{r.name} ({r.residual:.3e})" for r in reports if not r.passed)
        raise FixtureError(f"{fx.name}: defining identities fail: {bad}")
    return reports


# -- suites ---------------------------------------------------------------------------

def _suite_jacobi(fx, ctx):
    return [is_jacobi(fx.pi, fx.xi, ctx)]


def _suite_algebroid(fx, ctx):
    out = []
    if fx.kind == "poisson":
        out.append(check_poisson_identities(fx.pi, ctx))
    if fx.eta is not None and fx.kind == "contact":
        out.append(check_contact_algebroid(fx.eta, ctx))
    if fx.lcs is not None:
        out.append(check_lcs_algebroid(fx.lcs, ctx))
    j = fx.jacobi(ctx)
    named = [("zero", OneForm.zero(fx.chart))]
    if fx.eta is not None:
        named.append(("eta", fx.eta))
    if fx.theta is not None:
        named.append(("theta", fx.theta))
    named.append(("random", random_one_form(fx.chart, ctx.rng, degree=1)))
    for label, lam in named:
        r = check_anchor_identity(j, lam, ctx)
        r.name = f"anchor-identity[{label}]"
        out.append(r)
    r = check_leibniz(j, named[-1][1], ctx)
    out.append(r)
    return out


def _suite_contact(fx, ctx):
    out = []
    if fx.contact is not None:
        out.append(check_reeb(fx.contact, ctx))
    if fx.acm is not None:
        out.append(validate_almost_contact(fx.acm, ctx))
        if fx.kind == "contact":
            out.append(check_contact_metric(fx.acm, ctx))
        out.append(check_almost_contact_pi(fx.acm, ctx))
    return out


def _suite_lcs(fx, ctx):
    if fx.lcs is None:
        return []
    return [check_lcs(fx.lcs, ctx), check_omega_pi_xi(fx.lcs, ctx),
            check_lcs_jacobi_equivalence(fx.lcs, ctx)]


def _suite_connection(fx, ctx):
    if fx.g is None:
        return []
    pkg = fx.package(ctx)
    out = [check_levi_civita_metric(pkg, ctx), check_D_properties(pkg, ctx)]
    triplet = check_prop_LC(pkg, ctx)
    out.append(triplet)
    if fx.omega is not None:
        # the D pi corollary inherits the triplet's hypotheses
        formula = check_D_pi_formula(pkg, fx.omega, ctx)
        if triplet.verdict == "preconditions-failed":
            formula = ctx.preconditions_failed(formula.name, formula.anchor,
                                               triplet.note, [formula])
        out.append(formula)
    return out


def _suite_compatibility(fx, ctx):
    if fx.g is None:
        return []
    return [compatibility_check(fx.package(ctx), ctx)]


def _suite_kenmotsu(fx, ctx):
    if fx.acm is None:
        return []
    pkg = fx.package(ctx)
    return [kenmotsu_check(fx.acm, HALF, ctx, pkg), kenmotsu_check(fx.acm, 1, ctx, pkg),
            check_half_kenmotsu_equivalence(fx.acm, ctx)]


def _suite_lck(fx, ctx):
    if fx.lcs is None or fx.g is None:
        return []
    out = [lck_check(fx.lcs, fx.g, ctx)]
    if fx.f is not None:
        out += conformal_checks(fx.lcs, fx.package(ctx), ctx)
    return out


_SUITE_FUNCS = {
    "jacobi": _suite_jacobi, "algebroid": _suite_algebroid, "contact": _suite_contact,
    "lcs": _suite_lcs, "connection": _suite_connection, "compatibility": _suite_compatibility,
    "kenmotsu": _suite_kenmotsu, "lck": _suite_lck,
}


def run_suite(fx: Fixture, suite="all", ctx=None):
    if suite != "all" and suite not in _SUITE_FUNCS:
        raise ValueError(f"unknown suite {suite!r}")
    ctx = ctx or CheckContext(fx.chart)
    names = SUITES if suite == "all" else (suite,)
    out = []
    for s in names:
        out.extend(_SUITE_FUNCS[s](fx, ctx))
    return out


# -- built-in catalog --------------------------------------------------------------------

def _fixture_dir():
    return resources.files("jacobigeo") / "fixtures"


def fixture_text(name):
    path = _fixture_dir() / f"{name}.struct"
    if not path.is_file():
        raise UnknownFixture(name)
    return path.read_text(encoding="utf-8")


def names():
    return sorted(p.name[:-len(".struct")] for p in _fixture_dir().iterdir()
                  if p.name.endswith(".struct"))


def definition(name) -> StructureDef:
    return parse_text(fixture_text(name), f"{name}.struct")


_LOADED: dict = {}


def load(name, validate=True) -> Fixture:
    if name not in names():
        raise UnknownFixture(f"unknown fixture {name!r}; available: {', '.join(names())}")
    key = (name, validate)
    if key not in _LOADED:
        _LOADED[key] = build(definition(name), validate)
    return _LOADED[key]


def load_any(spec) -> Fixture:
    """Fixture name or path to a structure file."""
    if spec in names():
        return load(spec)
    return build(load_path(spec))


def listing():
    """``[(name, kind, expect-table)]`` for every fixture."""
    out = []
    for n in names():
        d = definition(n)
        out.append((n, d.kind, dict(d.expect)))
    return out


# public alias matching the catalog vocabulary
list_fixtures = listing

__all__ = ["Fixture", "FixtureError", "SUITES", "UnknownFixture", "build", "definition",
           "fixture_text", "list_fixtures", "listing", "load", "load_any", "names", "run_suite",
           "self_validate"]
