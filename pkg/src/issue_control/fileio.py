"""Reading and writing instance files.

Election files are JSON objects::

    {"domain": "real" | "binary", "p": 2,
     "candidates": [[...], ...],   # row 1 is the target
     "voters": [[...], ...]}

Positions are JSON numbers or strings; both are parsed to exact rationals
(``"0.1"`` is exactly 1/10, ``"1/3"`` is one third).  Margin files carry
``"kind": "margin"`` with ``entries``, ``satisfaction`` and ``win_rule``.
Source instances for the reductions are JSON (ILP, X3C, hitting set) or
DIMACS edge format (graphs).
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from issue_control.election import Domain, Election
from issue_control.errors import InstanceParseError, UsageError
from issue_control.exact import MarginInstance
from issue_control.reductions import Graph, HittingSetInstance, X3cInstance, ZeroOneIlp


def format_rational(x) -> int | str:
    """JSON-friendly exact form: an int, a terminating decimal string, or ``"p/q"``."""
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    scaled = abs(x.numerator) * 10**places // x.denominator
    digits = str(scaled).rjust(places + 1, "0")
    sign = "-" if x < 0 else ""
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceParseError(f"cannot read {path}: {exc}") from None
    return loads_json(text, str(path))


def loads_json(text: str, where: str = "<string>") -> dict:
    try:
        data = json.loads(text, parse_float=Fraction)
    except (json.JSONDecodeError, ValueError) as exc:
        raise InstanceParseError(f"{where}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise InstanceParseError(f"{where}: expected a JSON object")
    return data


def election_from_dict(data: dict) -> tuple:
    """Parse an election document; returns ``(election, p)``."""
    try:
        domain = Domain(str(data.get("domain", "real")).lower())
        p = data.get("p", 2)
        if isinstance(p, bool) or not isinstance(p, int) or p < 1:
            raise InstanceParseError(f"'p' must be an integer >= 1, got {p!r}")
        candidates = data["candidates"]
        voters = data["voters"]
        if not isinstance(candidates, list) or not isinstance(voters, list):
            raise InstanceParseError("'candidates' and 'voters' must be arrays")
        return Election(candidates, voters, domain), p
    except KeyError as exc:
        raise InstanceParseError(f"missing field {exc}") from None
    except (UsageError, TypeError, ValueError) as exc:
        if isinstance(exc, InstanceParseError):
            raise
        raise InstanceParseError(str(exc)) from None


def election_to_dict(election: Election, p: int) -> dict:
    return {
        "domain": election.domain.value,
        "p": p,
        "candidates": [[format_rational(x) for x in row] for row in election.candidates],
        "voters": [[format_rational(x) for x in row] for row in election.voters],
    }


def load_election(path) -> tuple:
    data = _load_json(path)
    if data.get("kind") == "margin":
        raise InstanceParseError(f"{path}: is a margin instance, not an election")
    try:
        return election_from_dict(data)
    except InstanceParseError as exc:
        raise InstanceParseError(f"{path}: {exc}") from None


def save_election(path, election: Election, p: int) -> None:
    Path(path).write_text(json.dumps(election_to_dict(election, p), indent=1) + "\n")


def margin_to_dict(mi: MarginInstance) -> dict:
    return {
        "kind": "margin",
        "satisfaction": mi.satisfaction.value,
        "win_rule": mi.win_rule.value,
        "entries": [[format_rational(x) for x in row] for row in mi.entries],
    }


def margin_from_dict(data: dict) -> MarginInstance:
    try:
        return MarginInstance(
            data["entries"], data.get("satisfaction", "weak"), data.get("win_rule", "all_rows")
        )
    except KeyError as exc:
        raise InstanceParseError(f"missing field {exc}") from None
    except (UsageError, TypeError, ValueError) as exc:
        raise InstanceParseError(str(exc)) from None


def load_margin(path) -> MarginInstance:
    return margin_from_dict(_load_json(path))


def save_margin(path, mi: MarginInstance) -> None:
    Path(path).write_text(json.dumps(margin_to_dict(mi)) + "\n")


def _source(builder, data, fields, where):
    try:
        return builder(*(data[f] for f in fields))
    except KeyError as exc:
        raise InstanceParseError(f"{where}: missing field {exc}") from None
    except (UsageError, TypeError, ValueError) as exc:
        raise InstanceParseError(f"{where}: {exc}") from None


def load_ilp(path) -> ZeroOneIlp:
    return _source(ZeroOneIlp, _load_json(path), ("A", "b"), path)


def load_x3c(path) -> X3cInstance:
    return _source(X3cInstance, _load_json(path), ("t", "sets"), path)


def load_hitting_set(path) -> HittingSetInstance:
    return _source(HittingSetInstance, _load_json(path), ("num_elements", "sets", "k"), path)


def parse_dimacs(text: str) -> Graph:
    """Graph from DIMACS edge format (``p edge V E`` then ``e u v`` lines, 1-based)."""
    num_vertices, edges = None, []
    for number, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if parts[0] == "p":
                num_vertices = int(parts[2])
            elif parts[0] == "e":
                edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
            else:
                raise InstanceParseError(f"line {number}: unknown record {parts[0]!r}")
        except (IndexError, ValueError):
            raise InstanceParseError(f"line {number}: malformed DIMACS record {raw!r}") from None
    if num_vertices is None:
        raise InstanceParseError("DIMACS text has no 'p edge' line")
    try:
        return Graph(num_vertices, edges)
    except UsageError as exc:
        raise InstanceParseError(str(exc)) from None


def format_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.num_vertices} {len(g.edges)}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def load_graph(path) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceParseError(f"cannot read {path}: {exc}") from None
    return parse_dimacs(text)
