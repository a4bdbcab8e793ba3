"""Max Support as a 0-1 integer program, exported in LP file format.

The model has one binary variable ``x_k`` per issue and ``y_j`` per voter::

    maximize    sum_j y_j
    subject to  sum_k A[i, j, k] x_k + (1 - y_j) * alpha >= 0   for every rival i, voter j
                sum_k x_k >= 1
                x, y binary

where ``A`` is the margin tensor and ``alpha = sum |A|`` is a big-M constant:
no subset sum of ``A[i, j, :]`` is below ``-alpha``, so ``y_j = 0`` always
relaxes the constraint.  Each constraint is multiplied by the least common
denominator of its coefficients so the file holds integers only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from issue_control.election import Election, TieRule, check_norm, margin_tensor
from issue_control.errors import InstanceParseError
from issue_control.exact import DEFAULT_MAX_ISSUES, check_capacity, solve_maxsupport_exhaustive

_TERMS_PER_LINE = 8


def big_m(election: Election, p: int) -> Fraction:
    a = margin_tensor(election, p)
    return Fraction(sum(abs(x) for x in a.ravel()))


def _format_expr(terms):
    """Render ``[(coef, name), ...]`` as LP text, wrapping long expressions."""
    pieces = []
    for coef, name in terms:
        if coef == 0:
            continue
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = name if mag == 1 else f"{mag} {name}"
        pieces.append(f"{sign} {body}")
    if not pieces:
        # LP readers need at least one term
        name = terms[0][1] if terms else "x1"
        pieces = [f"+ 0 {name}"]
    if pieces[0].startswith("+ "):
        pieces[0] = pieces[0][2:]
    lines = [" ".join(pieces[i : i + _TERMS_PER_LINE]) for i in range(0, len(pieces), _TERMS_PER_LINE)]
    return "\n   ".join(lines)


def export_ilp(election: Election, p: int) -> str:
    """LP-format text of the Max Support integer program for ``election``."""
    p = check_norm(p)
    a = margin_tensor(election, p)
    num_rivals, n, l = a.shape
    alpha = Fraction(sum(abs(x) for x in a.ravel()))
    xs = [f"x{k + 1}" for k in range(l)]
    ys = [f"y{j + 1}" for j in range(n)]

    out = [
        "\\ Max Support: x_k = 1 iff issue k is highlighted, y_j = 1 iff voter j picks candidate 1",
        f"\\ candidates {election.num_candidates}, voters {n}, issues {l}, p = {p}, alpha = {alpha}",
        "Maximize",
        " obj: " + _format_expr([(1, y) for y in ys]),
        "Subject To",
    ]
    for i in range(num_rivals):
        for j in range(n):
            row = [Fraction(x) for x in a[i, j]]
            scale = lcm(alpha.denominator, *(x.denominator for x in row))
            terms = [(int(x * scale), xs[k]) for k, x in enumerate(row)]
            terms.append((-int(alpha * scale), ys[j]))
            rhs = -int(alpha * scale)
            out.append(f" beat_c{i + 2}_v{j + 1}: {_format_expr(terms)} >= {rhs}")
    out.append(" nonempty: " + _format_expr([(1, x) for x in xs]) + " >= 1")
    out.append("Bounds")
    out.extend(f" 0 <= {name} <= 1" for name in xs + ys)
    out.append("Binary")
    names = xs + ys
    for i in range(0, len(names), _TERMS_PER_LINE * 2):
        out.append(" " + " ".join(names[i : i + _TERMS_PER_LINE * 2]))
    out.append("End")
    return "\n".join(out) + "\n"


@dataclass
class LpModel:
    """Parsed contents of an LP file (the subset of the format emitted here)."""

    sense: str = "maximize"
    objective: dict = field(default_factory=dict)
    constraints: list = field(default_factory=list)  # (name, {var: coef}, op, rhs)
    bounds: dict = field(default_factory=dict)  # var -> (lo, hi)
    binaries: list = field(default_factory=list)


_SECTION = {
    "maximize": "max",
    "maximise": "max",
    "maximum": "max",
    "max": "max",
    "minimize": "min",
    "minimise": "min",
    "minimum": "min",
    "min": "min",
    "subject to": "st",
    "such that": "st",
    "st": "st",
    "s.t.": "st",
    "bounds": "bounds",
    "bound": "bounds",
    "binary": "bin",
    "binaries": "bin",
    "bin": "bin",
    "general": "gen",
    "generals": "gen",
    "end": "end",
}
_TOKEN = re.compile(
    r"\s*(?:(?P<label>[A-Za-z_][\w.\[\]]*)\s*:|(?P<op><=|>=|=<|=>|<|>|=)|(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<sign>[+-])|(?P<name>[A-Za-z_][\w.\[\]]*))"
)


def _tokens(text):
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise InstanceParseError(f"cannot tokenize LP text near {text[pos:pos + 20]!r}")
        pos = m.end()
        kind = m.lastgroup
        yield kind, m.group(kind)


def _number(text):
    value = Fraction(text)
    return value.numerator if value.denominator == 1 else value


def _linear(tokens, start, stop_at_op):
    """Parse ``[sign] [coef] name ...`` starting at ``tokens[start]``."""
    coeffs = {}
    i = start
    sign, coef = 1, None
    while i < len(tokens):
        kind, val = tokens[i]
        if kind == "op":
            if stop_at_op:
                break
            raise InstanceParseError(f"unexpected operator {val!r}")
        if kind == "label":
            break
        if kind == "sign":
            sign = -1 if val == "-" else 1
        elif kind == "num":
            coef = _number(val)
        elif kind == "name":
            c = sign * (1 if coef is None else coef)
            coeffs[val] = coeffs.get(val, 0) + c
            sign, coef = 1, None
        i += 1
    return coeffs, i


def _signed_number(tokens, i):
    sign = 1
    if i < len(tokens) and tokens[i][0] == "sign":
        sign = -1 if tokens[i][1] == "-" else 1
        i += 1
    if i >= len(tokens) or tokens[i][0] != "num":
        raise InstanceParseError("expected a number on the right-hand side")
    return sign * _number(tokens[i][1]), i + 1


def parse_lp(text: str) -> LpModel:
    """Parse LP-format text with Maximize/Minimize, Subject To, Bounds, Binary, End."""
    model = LpModel()
    sections = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = line.lower()
        if key in _SECTION:
            current = _SECTION[key]
            if current == "end":
                break
            sections.setdefault(current, [])
            if current in ("max", "min"):
                model.sense = "maximize" if current == "max" else "minimize"
            continue
        if current is None:
            raise InstanceParseError(f"LP text outside of any section: {raw!r}")
        sections[current].append(line)
    else:
        raise InstanceParseError("LP text has no End section")

    obj = sections.get("max", sections.get("min"))
    if obj is None:
        raise InstanceParseError("LP text has no objective section")
    toks = list(_tokens(" ".join(obj)))
    if toks and toks[0][0] == "label":
        toks = toks[1:]
    model.objective, _ = _linear(toks, 0, stop_at_op=False)

    toks = list(_tokens(" ".join(sections.get("st", []))))
    i, count = 0, 0
    while i < len(toks):
        name = None
        if toks[i][0] == "label":
            name = toks[i][1]
            i += 1
        coeffs, i = _linear(toks, i, stop_at_op=True)
        if i >= len(toks) or toks[i][0] != "op":
            raise InstanceParseError(f"constraint {name or count + 1} has no comparison operator")
        op = {"=<": "<=", "<": "<=", "=>": ">=", ">": ">="}.get(toks[i][1], toks[i][1])
        rhs, i = _signed_number(toks, i + 1)
        count += 1
        model.constraints.append((name or f"c{count}", coeffs, op, rhs))

    for line in sections.get("bounds", []):
        parts = re.fullmatch(r"\s*(-?[\d.eE+-]+)\s*<=\s*(\S+)\s*<=\s*(-?[\d.eE+-]+)\s*", line)
        if not parts:
            raise InstanceParseError(f"unsupported bound line {line!r}")
        model.bounds[parts.group(2)] = (Fraction(parts.group(1)), Fraction(parts.group(3)))
    for line in sections.get("bin", []):
        model.binaries.extend(line.split())
    return model


def lp_optimum_by_enumeration(model: LpModel, issue_vars, voter_vars) -> int:
    """Optimum of a parsed Max Support model, enumerating every 0-1 issue vector.

    For a fixed issue vector each constraint involves at most one voter
    variable, so ``y_j`` is set to 1 exactly when every constraint mentioning
    it holds with ``y_j = 1``.  Issue vectors for which some constraint fails
    even with all voter variables at 0 are infeasible.
    """
    l = len(issue_vars)
    col = {name: k for k, name in enumerate(issue_vars)}
    yidx = {name: j for j, name in enumerate(voter_vars)}
    rows, y_of, y_coef, rhs, sense = [], [], [], [], []
    for name, coeffs, op, r in model.constraints:
        ys = [v for v in coeffs if v in yidx]
        if len(ys) > 1 or any(v not in col and v not in yidx for v in coeffs):
            raise InstanceParseError(f"constraint {name} is not of the Max Support form")
        rows.append([coeffs.get(v, 0) for v in issue_vars])
        y_of.append(yidx[ys[0]] if ys else -1)
        y_coef.append(coeffs[ys[0]] if ys else 0)
        rhs.append(r)
        sense.append(op)
    obj = [model.objective.get(v, 0) for v in voter_vars]
    if any(v not in yidx for v in model.objective):
        raise InstanceParseError("objective mentions variables other than voter variables")

    coef = np.empty((l, len(rows)), dtype=object)
    for c, row in enumerate(rows):
        for k in range(l):
            coef[k, c] = row[k]

    def holds(lhs, target):
        out = np.ones(lhs.shape, dtype=bool)
        for c, op in enumerate(sense):
            if op == ">=":
                out[:, c] = lhs[:, c] >= target[c]
            elif op == "<=":
                out[:, c] = lhs[:, c] <= target[c]
            else:
                out[:, c] = lhs[:, c] == target[c]
        return out

    rhs_arr = np.array(rhs, dtype=object)
    ycoef_arr = np.array(y_coef, dtype=object)
    groups = [[c for c in range(len(rows)) if y_of[c] == j] for j in range(len(obj))]
    # voter variables with nonpositive weight stay at 0 in an optimum
    weights = np.array([max(w, 0) for w in obj], dtype=object)
    best = None
    chunk = 1024
    for start in range(0, 2**l, chunk):
        masks = np.arange(start, min(start + chunk, 2**l))
        bits = ((masks[:, None] >> np.arange(l)[None, :]) & 1).astype(object)
        lhs = bits.dot(coef) if l else np.zeros((len(masks), len(rows)), dtype=object)
        ok0 = holds(lhs, rhs_arr)
        ok1 = holds(lhs + ycoef_arr[None, :], rhs_arr)
        feasible = ok0.all(axis=1)
        if not feasible.any():
            continue
        y_on = np.zeros((len(masks), len(obj)), dtype=bool)
        for j, cons in enumerate(groups):
            y_on[:, j] = ok1[:, cons].all(axis=1)
        values = (y_on * weights[None, :]).sum(axis=1)
        top = max(values[feasible])
        if best is None or top > best:
            best = top
    if best is None:
        raise InstanceParseError("LP model is infeasible")
    return int(best)


def check_ilp_consistency(
    election: Election, p: int, max_issues: int = DEFAULT_MAX_ISSUES
) -> bool:
    """Compare the exported model's optimum with the exhaustive best-case optimum.

    The model is rendered to LP text, parsed back, and optimized by
    enumerating issue vectors, so the check covers the file contents.
    """
    p = check_norm(p)
    check_capacity(election.num_issues, max_issues)
    model = parse_lp(export_ilp(election, p))
    xs = [f"x{k + 1}" for k in range(election.num_issues)]
    ys = [f"y{j + 1}" for j in range(election.num_voters)]
    lp_opt = lp_optimum_by_enumeration(model, xs, ys)
    exact = solve_maxsupport_exhaustive(election, p, TieRule.BEST_CASE, max_issues)
    return lp_opt == exact.target_support
