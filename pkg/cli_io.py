"""Text grammars, command dispatch and report emission.

Series text: signed rational coefficients ``p/q`` or ``p`` times monomials
``T^k`` (k may be negative), joined by ``+``/``-``; ``*`` is optional and
whitespace is ignored, e.g. ``-1/2*T^-1 + 3*T^2``. Maps are written
``lambda = <series>; a2 = <series>; ...`` and polynomials for the Newton
polygon command ``c0 = <series>; c1 = <series>; ...``.
"""
import io
import json
import logging
from dataclasses import asdict, dataclass, field
from datetime import datetime
from fractions import Fraction

import yaml
from pyparsing import (Literal, Optional, ParseException, Regex, StringEnd, Suppress, ZeroOrMore,
                       one_of)
from rich.console import Console
from rich.table import Table

import config
import disc
import maps
import newton
import schroder
from errors import FALSIFIED, ParseError, UltradiscError, UsageError
from laurent_core import format_series, format_valuation, from_terms

logger = logging.getLogger(__name__)

COMMANDS = ("estimate-disc", "solve-conjugacy", "check-bounds", "distance-profile",
            "newton-polygon", "witness")
METHODS = ("composition", "partition", "both")
FORMATS = ("json", "text")

# Samples used by check-bounds for the pointwise conjugacy and isometry checks
SAMPLE_POINTS = 6


def _coefficient_action(s, loc, tokens):
    value = tokens[0]
    if "/" in value and int(value.split("/")[1]) == 0:
        raise ParseException(s, loc, "nonzero denominator")
    return [Fraction(value)]


def _term_action(tokens):
    coeff, exponent = Fraction(1), 0
    for token in tokens:
        if isinstance(token, Fraction):
            coeff = token
        else:
            exponent = token
    return [(coeff, exponent)]


def _series_action(tokens):
    terms = {}
    for sign, (coeff, exponent) in zip(tokens[0::2], tokens[1::2]):
        terms[exponent] = terms.get(exponent, 0) + (coeff if sign == "+" else -coeff)
    return [from_terms(terms)]


_COEFF = Regex(r"\d+(?:/\d+)?").set_parse_action(_coefficient_action)
_EXPONENT = Regex(r"[+-]?\d+").set_parse_action(lambda tokens: [int(tokens[0])])
_MONOMIAL = Suppress(Literal("T")) + Optional(Suppress("^") + _EXPONENT)
_MONOMIAL.set_parse_action(lambda tokens: [tokens[0] if tokens else 1])
_TERM = (_COEFF + Optional(Optional(Suppress("*")) + _MONOMIAL)) | _MONOMIAL
_TERM.set_parse_action(_term_action)
_SERIES = Optional(one_of("+ -"), default="+") + _TERM + ZeroOrMore(one_of("+ -") + _TERM)
_SERIES.set_parse_action(_series_action)

_NAME = Regex(r"lambda|[ac]\d+")
_ASSIGNMENT = _NAME + Suppress("=") + _SERIES
_ASSIGNMENT.set_parse_action(lambda tokens: [(tokens[0], tokens[1])])
_ASSIGNMENTS = _ASSIGNMENT + ZeroOrMore(Suppress(";") + _ASSIGNMENT) + Optional(Suppress(";"))

SERIES_GRAMMAR = _SERIES + StringEnd()
ASSIGNMENTS_GRAMMAR = _ASSIGNMENTS + StringEnd()


def _parse(grammar, text):
    try:
        return grammar.parse_string(text, parse_all=True)
    except ParseException as e:
        raise ParseError(e.msg, column=e.col, text=text)


def parse_series(text):
    """Exact element of Q((T)) from series text"""
    return _parse(SERIES_GRAMMAR, text)[0]


def _assignments(text):
    values = {}
    for name, value in _parse(ASSIGNMENTS_GRAMMAR, text):
        if name in values:
            raise ParseError(f"{name} assigned twice", text=text)
        values[name] = value
    return values


def _build_map(multiplier, coeffs, n_check):
    if multiplier is None:
        raise UsageError("map needs a lambda coefficient")
    return maps.make_map(multiplier, coeffs, n_check=n_check)


def parse_map(text, n_check=None):
    """AnalyticMap from ``lambda = ...; a<i> = ...``"""
    values = _assignments(text)
    coeffs = {}
    for name, value in values.items():
        if name.startswith("c"):
            raise ParseError(f"unexpected name {name} in a map, use a<i>", text=text)
        if name != "lambda":
            coeffs[int(name[1:])] = value
    return _build_map(values.get("lambda"), coeffs, n_check)


def parse_map_document(document, n_check=None):
    """AnalyticMap from ``{"lambda": "...", "coeffs": {"2": "...", ...}}``"""
    if not isinstance(document, dict) or "lambda" not in document:
        raise UsageError("map document needs a 'lambda' entry")
    coeffs = {int(k): parse_series(str(v)) for k, v in (document.get("coeffs") or {}).items()}
    return _build_map(parse_series(str(document["lambda"])), coeffs, n_check)


def load_map_file(path, n_check=None):
    """Read a JSON or YAML map document"""
    try:
        with open(path) as f:
            document = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise UsageError(f"cannot read map file {path}: {e}")
    return parse_map_document(document, n_check)


def parse_polynomial(text):
    """[(index, coefficient)] from ``c0 = ...; c1 = ...``"""
    pairs = []
    for name, value in _assignments(text).items():
        if not name.startswith("c"):
            raise ParseError(f"unexpected name {name} in a polynomial, use c<i>", text=text)
        pairs.append((int(name[1:]), value))
    return sorted(pairs, key=lambda pair: pair[0])


def format_map(f):
    parts = [f"lambda={format_series(f.multiplier)}"]
    parts += [f"a{degree}={format_series(c)}" for degree, c in f.higher]
    return "; ".join(parts)


@dataclass(frozen=True)
class Command:
    name: str
    map_text: str = None
    map_path: str = None
    lambda_text: str = None
    poly_text: str = None
    N: int = config.DEFAULT_N
    K: int = config.DEFAULT_K
    t_precision: int = None
    method: str = "composition"
    display_epsilon: Fraction = config.DEFAULT_DISPLAY_EPSILON
    output_format: str = "json"
    out_path: str = None


@dataclass
class Outcome:
    inputs: dict
    results: dict
    certifications: dict = field(default_factory=dict)
    falsified: bool = False


def validate_command(command):
    """Reject bad options before any computation"""
    if command.name not in COMMANDS:
        raise UsageError(f"unknown command {command.name!r}")
    if command.N < 1:
        raise UsageError(f"N must be >= 1, got {command.N}")
    if command.K < 2:
        raise UsageError(f"K must be >= 2, got {command.K}")
    if command.t_precision is not None and command.t_precision < 1:
        raise UsageError(f"t_precision must be >= 1, got {command.t_precision}")
    if command.method not in METHODS:
        raise UsageError(f"method must be one of {', '.join(METHODS)}")
    if not 0 < Fraction(command.display_epsilon) < 1:
        raise UsageError(f"display epsilon must lie in (0, 1), got {command.display_epsilon}")
    if command.output_format not in FORMATS:
        raise UsageError(f"format must be one of {', '.join(FORMATS)}")
    if command.name == "newton-polygon":
        if not command.poly_text:
            raise UsageError("newton-polygon needs --poly")
    elif command.name == "distance-profile":
        if not (command.lambda_text or command.map_text or command.map_path):
            raise UsageError("distance-profile needs --lambda or a map")
    elif not (command.map_text or command.map_path):
        raise UsageError(f"{command.name} needs --map or --map-file")
    if command.map_text and command.map_path:
        raise UsageError("give either --map or --map-file, not both")


def _t_precision(command):
    return command.t_precision or config.default_t_precision()


def _load_map(command):
    if command.map_path:
        return load_map_file(command.map_path, n_check=command.N)
    return parse_map(command.map_text, n_check=command.N)


def _exact(v):
    return None if v is None else format_valuation(v)


def _disc_dict(d):
    return {
        "exponent": _exact(d.exponent),
        "open": d.boundary is maps.Boundary.OPEN,
        "rational": d.is_rational,
        "whole_field": d.is_whole_field,
    }


def _display_radii(epsilon, **discs):
    """The only floats in a report: eps^s for each named disc"""
    radii = {"epsilon": str(Fraction(epsilon))}
    for name, d in discs.items():
        radii[name] = None if d.is_whole_field else d.radius(epsilon)
    return radii


def _witness_dict(w):
    return {
        "kind": w.kind,
        "description": w.description,
        "valuation": _exact(w.valuation),
        "sphere_exponent": _exact(w.sphere_exponent),
        "period": _exact(w.period),
        "multiplicity": _exact(w.multiplicity),
        "point": None if w.point is None else format_series(w.point),
        "verified": w.verified,
    }


def _estimate_dict(estimate, epsilon):
    return {
        "case": estimate.case.value,
        "w": _exact(estimate.w),
        "m": _exact(estimate.m),
        "v_m": _exact(estimate.v_m),
        "lower": _disc_dict(estimate.lower),
        "upper": _disc_dict(estimate.upper),
        "exact": estimate.exact,
        "supremum": estimate.kind.value,
        "display_radii": _display_radii(epsilon, lower=estimate.lower, upper=estimate.upper),
    }


def _map_certifications(f):
    return {
        "root_of_unity": f"lambda^n != 1 checked exactly for n <= {f.certified_to}; asserted beyond",
        "supremum": "attained (finitely supported map)",
    }


def _distance_profile(command):
    lam = parse_series(command.lambda_text) if command.lambda_text else _load_map(command).multiplier
    profile = disc.distance_profile(lam, command.N)
    case, order = disc.classify_case(lam)
    return Outcome(
        inputs={"lambda": format_series(lam), "N": _exact(command.N)},
        results={
            "vals": [_exact(v) for v in profile.vals],
            "m": _exact(profile.m),
            "v_m": _exact(profile.v_m),
            "case": case.value,
            "residue_order": _exact(order),
        },
        certifications={
            "root_of_unity": f"lambda^n != 1 checked exactly for n <= {command.N}",
            "lemma_pattern": "verified",
        },
    )


def _estimate_disc(command):
    f = _load_map(command)
    estimate = disc.estimate_disc(f, command.N)
    found = disc.witnesses(f, estimate, _t_precision(command))
    results = _estimate_dict(estimate, command.display_epsilon)
    results["radius_of_convergence"] = _disc_dict(maps.radius_of_convergence(f))
    # degree of f on the closed disc bounding M; None when M is the whole field
    results["boundary_degree"] = None
    if not estimate.upper.is_whole_field:
        results["boundary_degree"] = _exact(maps.closed_disc_degree(f, estimate.upper.exponent))
    results["witnesses"] = [_witness_dict(w) for w in found]
    certifications = _map_certifications(f)
    if any(w.sphere_exponent == estimate.lower.exponent for w in found):
        certifications["sharpness"] = "lower bound is attained by this input family"
    return Outcome({"map": format_map(f), "N": _exact(command.N)}, results, certifications)


def _witness(command):
    f = _load_map(command)
    estimate = disc.estimate_disc(f, command.N)
    found = disc.witnesses(f, estimate, _t_precision(command))
    results = {
        "case": estimate.case.value,
        "lower": _disc_dict(estimate.lower),
        "display_radii": _display_radii(command.display_epsilon, lower=estimate.lower),
        "witnesses": [_witness_dict(w) for w in found],
    }
    return Outcome({"map": format_map(f), "N": _exact(command.N)}, results, _map_certifications(f))


def _coefficient_table(c, profile, w):
    checks = {check.k: check for check in schroder.check_bk_bound(c, profile, w)}
    rows = []
    for k in range(1, c.K + 1):
        b_k = c.b(k)
        check = checks.get(k)
        rows.append({
            "k": _exact(k),
            "b_k": format_series(b_k),
            "valuation": _exact(check.valuation) if check else "0",
            "valuation_exact": check.exact_valuation if check else True,
            "certified_precision": _exact(b_k.precision),
            "bound": _exact(check.bound) if check else None,
            "slack": _exact(check.slack) if check else None,
            "holds": check.holds if check else True,
        })
    return rows


def _solve_conjugacy(command):
    f = _load_map(command)
    t_precision = _t_precision(command)
    methods = ["composition", "partition"] if command.method == "both" else [command.method]
    profile = disc.distance_profile(f.multiplier, max(command.N, command.K - 1))
    w, _ = maps.growth_exponent(f)
    solutions = {name: schroder.solve(f, command.K, t_precision, schroder.Method(name)) for name in methods}
    results = {"K": _exact(command.K), "t_precision": _exact(t_precision), "methods": {}}
    falsified = False
    for name, c in solutions.items():
        table = _coefficient_table(c, profile, w)
        residual = schroder.residual(f, c)
        results["methods"][name] = {"coefficients": table, "residual_vanishes": residual.vanishes}
        falsified |= not residual.vanishes or not all(row["holds"] for row in table)
    if len(solutions) == 2:
        mismatches = schroder.cross_check(solutions["composition"], solutions["partition"])
        results["methods_agree"] = not mismatches
        results["mismatched_degrees"] = [_exact(k) for k in mismatches]
        falsified |= bool(mismatches)
    inputs = {"map": format_map(f), "K": _exact(command.K), "t_precision": _exact(t_precision),
              "method": command.method}
    return Outcome(inputs, results, _map_certifications(f), falsified)


def _check_bounds(command):
    f = _load_map(command)
    t_precision = _t_precision(command)
    estimate = disc.estimate_disc(f, max(command.N, command.K - 1))
    profile = disc.distance_profile(f.multiplier, max(command.N, command.K - 1))
    c = schroder.solve_by_composition(f, command.K, t_precision)
    w = estimate.w
    bound_checks = schroder.check_bk_bound(c, profile, w)
    geometric = disc.geometric_bound_check(c, estimate)
    injective = disc.conjugacy_injective(c, estimate)
    samples = disc.sample_points(estimate.lower, SAMPLE_POINTS)
    conjugacy = [disc.check_conjugacy_at(f, c, x, estimate) for x in samples]
    results = {
        "lower": _disc_dict(estimate.lower),
        "display_radii": _display_radii(command.display_epsilon, lower=estimate.lower),
        "coefficient_bound": [
            {"k": _exact(b.k), "valuation": _exact(b.valuation), "bound": _exact(b.bound),
             "slack": _exact(b.slack), "holds": b.holds}
            for b in bound_checks
        ],
        "geometric_bound_holds": all(ok for _, ok in geometric),
        "conjugacy_injective_on_lower_disc": injective,
        "samples": [
            {"x": format_series(s.x), "g_x": format_series(s.g_x),
             "conjugacy_holds": s.conjugacy_holds, "isometric": s.isometric}
            for s in conjugacy
        ],
    }
    falsified = not (all(b.holds for b in bound_checks) and results["geometric_bound_holds"] and injective
                     and all(s.conjugacy_holds and s.isometric for s in conjugacy))
    inputs = {"map": format_map(f), "N": _exact(command.N), "K": _exact(command.K),
              "t_precision": _exact(t_precision)}
    return Outcome(inputs, results, _map_certifications(f), falsified)


def _newton_polygon(command):
    pairs = parse_polynomial(command.poly_text)
    polygon = newton.build_polygon(pairs)
    results = {
        "points": [[_exact(i), _exact(v)] for i, v in polygon.points],
        "vertices": [[_exact(i), _exact(v)] for i, v in polygon.vertices],
        "segments": [{"slope": _exact(s.slope), "length": _exact(s.length)} for s in polygon.segments],
        "root_valuations": [
            {"valuation": _exact(v), "multiplicity": _exact(count)}
            for v, count in newton.root_valuations(polygon)
        ],
    }
    inputs = {"polynomial": "; ".join(f"c{i}={format_series(c)}" for i, c in pairs)}
    return Outcome(inputs, results, {"coefficients": "exact"})


HANDLERS = {
    "estimate-disc": _estimate_disc,
    "solve-conjugacy": _solve_conjugacy,
    "check-bounds": _check_bounds,
    "distance-profile": _distance_profile,
    "newton-polygon": _newton_polygon,
    "witness": _witness,
}


def _options_echo(command):
    options = asdict(command)
    for key in ("N", "K", "t_precision"):
        options[key] = _exact(options[key])
    options["display_epsilon"] = str(Fraction(command.display_epsilon))
    return options


def run(command):
    """Execute one command; returns (report, exit code)"""
    report = {"schema_version": config.SCHEMA_VERSION, "command": _options_echo(command)}
    exit_code = 0
    try:
        validate_command(command)
        outcome = HANDLERS[command.name](command)
        report["inputs"] = outcome.inputs
        report["results"] = outcome.results
        report["certifications"] = outcome.certifications
        if outcome.falsified:
            logger.error(f"❌ {command.name}: a theorem check failed")
            exit_code = FALSIFIED
        else:
            logger.info(f"✅ {command.name} finished")
    except UltradiscError as e:
        logger.error(f"❌ {command.name} failed: {e}")
        report["error"] = e.to_dict()
        exit_code = e.exit_code
    except Exception as e:
        logger.exception(f"❌ Unexpected error in {command.name}")
        report["error"] = {"code": "internal_error", "message": str(e)}
        exit_code = 1
    report["generated_at"] = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    return report, exit_code


def usage_report(name, message):
    """Report for options rejected before a Command could be built"""
    return {
        "schema_version": config.SCHEMA_VERSION,
        "command": {"name": name},
        "error": UsageError(message).to_dict(),
        "generated_at": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
    }


def _render_text(report):
    buffer = io.StringIO()
    console = Console(file=buffer, width=110, color_system=None)
    table = Table(title=f"ultradisc {report['command']['name']}", show_lines=True)
    table.add_column("section")
    table.add_column("key")
    table.add_column("value", overflow="fold")
    for section in ("inputs", "results", "certifications", "error"):
        for key, value in (report.get(section) or {}).items():
            shown = value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)
            table.add_row(section, key, shown)
    console.print(table)
    return buffer.getvalue()


def render_report(report, output_format="json"):
    if output_format == "text":
        return _render_text(report)
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def write_report(report, output_format="json", out_path=None):
    """Write to out_path, or return the text for stdout"""
    text = render_report(report, output_format)
    if out_path:
        with open(out_path, "w") as f:
            f.write(text)
        logger.info(f"✅ Report written to {out_path}")
        return None
    return text
