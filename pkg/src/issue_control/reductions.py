"""Hardness constructions as executable reductions, with brute-force source oracles.

Each reduction maps a combinatorial source instance to either a margin
instance (rows whose column-subset sums encode who wins) or a concrete
election.  Realization routines turn margin instances into elections whose
margin tensor reproduces the matrix.  The source oracles are plain
enumeration and exist to verify round trips on small instances.

Element labels of set systems (X3C, hitting set) are 1-based, matching the
source file formats; graph vertices and issue indices are 0-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from issue_control.election import Domain, Election, check_norm, margin_tensor
from issue_control.errors import RealizationError, UsageError
from issue_control.exact import MarginInstance, Satisfaction, WinRule

EPSILON = Fraction(1, 2)


@dataclass(frozen=True)
class ZeroOneIlp:
    """Does some ``x`` in {0,1}^l satisfy ``A x >= b`` componentwise?"""

    A: tuple
    b: tuple

    def __post_init__(self):
        A = tuple(tuple(_integer(x) for x in row) for row in self.A)
        b = tuple(_integer(x) for x in self.b)
        if not A or not A[0]:
            raise UsageError("ILP matrix needs at least one row and one column")
        if any(len(row) != len(A[0]) for row in A):
            raise UsageError("ILP matrix rows must have equal length")
        if len(b) != len(A):
            raise UsageError("ILP right-hand side must have one entry per row")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def num_rows(self) -> int:
        return len(self.A)

    @property
    def num_vars(self) -> int:
        return len(self.A[0])


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0 .. num_vertices - 1``."""

    num_vertices: int
    edges: tuple = ()

    def __post_init__(self):
        if self.num_vertices < 1:
            raise UsageError("graph needs at least one vertex")
        edges = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise UsageError(f"self-loop at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise UsageError(f"edge ({u}, {v}) has an endpoint out of range")
            edges.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(edges)))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in set(self.edges)


@dataclass(frozen=True)
class X3cInstance:
    """Exact cover by 3-sets over elements ``1 .. t``."""

    t: int
    sets: tuple

    def __post_init__(self):
        if self.t < 3 or self.t % 3:
            raise UsageError("X3C element count must be a positive multiple of 3")
        sets = []
        for triple in self.sets:
            triple = tuple(int(e) for e in triple)
            if len(triple) != 3 or len(set(triple)) != 3:
                raise UsageError(f"X3C set {triple} must have exactly 3 distinct elements")
            if any(not 1 <= e <= self.t for e in triple):
                raise UsageError(f"X3C set {triple} has an element outside 1..{self.t}")
            sets.append(tuple(sorted(triple)))
        object.__setattr__(self, "sets", tuple(sets))

    @property
    def s(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class HittingSetInstance:
    """Is there a set of at most ``k`` elements meeting every given set?"""

    num_elements: int
    sets: tuple
    k: int

    def __post_init__(self):
        if self.num_elements < 1:
            raise UsageError("hitting set instance needs at least one element")
        if self.k < 1:
            raise UsageError("hitting set size bound k must be at least 1")
        sets = []
        for members in self.sets:
            members = tuple(sorted(set(int(e) for e in members)))
            if not members:
                raise UsageError("hitting set instance contains an empty set")
            if any(not 1 <= e <= self.num_elements for e in members):
                raise UsageError(f"set {members} has an element outside 1..{self.num_elements}")
            sets.append(members)
        object.__setattr__(self, "sets", tuple(sets))


@dataclass(frozen=True)
class ReductionBundle:
    """Output of a reduction together with its provenance."""

    construction: str
    source: object
    margin: MarginInstance | None = None
    election: Election | None = None
    notes: dict = field(default_factory=dict)


def _integer(x):
    if isinstance(x, bool) or int(x) != x:
        raise UsageError(f"expected an integer, got {x!r}")
    return int(x)


def integral_rescale(mi: MarginInstance) -> tuple:
    """Scale a margin matrix by the LCD of its entries; returns (instance, factor)."""
    factor = lcm(*(Fraction(x).denominator for row in mi.entries for x in row))
    rows = [[x * factor for x in row] for row in mi.entries]
    return MarginInstance(rows, mi.satisfaction, mi.win_rule), factor


# ---------------------------------------------------------------------------
# 0-1 ILP -> single voter, best case


def ilp_to_svis(src: ZeroOneIlp) -> ReductionBundle:
    """Margin matrix of a single-voter election controllable iff ``A x >= b`` is feasible.

    Rows are rivals.  Row ``i`` carries ``A[i]`` and ``-b[i]`` in an extra
    column; a final row penalizes every original column by ``1/(l+1)`` and
    rewards the extra column by 1, which forces the extra column into any
    winning set while allowing any choice of the others.
    """
    l = src.num_vars
    rows = [list(src.A[i]) + [-src.b[i]] for i in range(src.num_rows)]
    rows.append([Fraction(-1, l + 1)] * l + [1])
    mi = MarginInstance(rows, Satisfaction.WEAK, WinRule.ALL_ROWS)
    return ReductionBundle("ilp->svis", src, margin=mi, notes={"shape": [src.num_rows + 1, l + 1]})


def _exact_root(q: Fraction, p: int):
    """The p-th root of a nonnegative rational: exact when it is rational, else a float."""
    q = Fraction(q)
    if p == 1 or q == 0:
        return q
    num, den = q.numerator, q.denominator
    rn, rd = _int_root(num, p), _int_root(den, p)
    if rn is not None and rd is not None:
        return Fraction(rn, rd)
    return Fraction(float(q) ** (1.0 / p))


def _int_root(n: int, p: int):
    r = round(n ** (1.0 / p)) if n < 2**1000 else None
    if r is None:
        return None
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**p == n:
            return c
    return None


def margin_residual(mi: MarginInstance, election: Election, p: int, voters_are_rows: bool) -> float:
    """Largest entrywise gap between ``mi`` and the margin tensor of ``election``."""
    a = margin_tensor(election, p)
    worst = Fraction(0)
    for r, row in enumerate(mi.entries):
        for k, want in enumerate(row):
            got = a[0, r, k] if voters_are_rows else a[r, 0, k]
            worst = max(worst, abs(got - want))
    return float(worst)


def realize_single_voter(mi: MarginInstance, p: int, tol: float = 1e-9) -> Election:
    """One voter at the origin and candidates whose margins reproduce ``mi``.

    Row ``i`` of ``mi`` becomes rival ``i + 1``.  Per issue the target sits
    at the p-th root of the most negative entry's magnitude and each rival at
    the p-th root of its entry plus the target's p-th power, so every
    margin is exactly the rival's p-th power minus the target's.
    """
    p = check_norm(p)
    target, rivals = [], [[] for _ in range(mi.rows)]
    for k in range(mi.cols):
        column = [Fraction(row[k]) for row in mi.entries]
        base = abs(min(column))
        target.append(_exact_root(base, p))
        for i, entry in enumerate(column):
            value = entry + base
            if value < 0:
                raise RealizationError("negative radicand in single-voter realization")
            rivals[i].append(_exact_root(value, p))
    election = Election([target] + rivals, [[0] * mi.cols], Domain.REAL)
    residual = margin_residual(mi, election, p, voters_are_rows=False)
    if residual > tol:
        raise RealizationError(f"single-voter realization residual {residual:.3g} exceeds {tol:g}")
    return election


def _solve_margin_position(c2: Fraction, target: Fraction, p: int, tol: float = 1e-12) -> Fraction:
    """Position ``z`` in ``[0, c2]`` with ``(c2 - z)^p - z^p = target``."""
    if p == 1:
        return (c2 - target) / 2
    if p == 2:
        return (c2 * c2 - target) / (2 * c2)
    hi_end, goal = float(c2), float(target)

    def f(z):
        return (hi_end - z) ** p - z**p

    lo, hi = 0.0, hi_end
    mid = (lo + hi) / 2
    for _ in range(200):
        mid = (lo + hi) / 2
        value = f(mid)
        if abs(value - goal) <= tol:
            break
        if value > goal:
            lo = mid
        else:
            hi = mid
    return Fraction(mid)


def realize_two_candidate(mi: MarginInstance, p: int, tol: float = 1e-9) -> Election:
    """Two candidates and one voter per row of ``mi`` reproducing its margins.

    Per issue the target sits at 0 and the rival at the p-th root of the
    column's largest magnitude; each voter sits between them where the
    rival-minus-target term equals its entry (closed form for p = 1, 2,
    bisection otherwise).
    """
    p = check_norm(p)
    target, rival = [], []
    voters = [[] for _ in range(mi.rows)]
    for k in range(mi.cols):
        column = [Fraction(row[k]) for row in mi.entries]
        top = max(abs(x) for x in column)
        if top == 0:
            target.append(0)
            rival.append(0)
            for v in voters:
                v.append(0)
            continue
        c2 = _exact_root(top, p)
        target.append(0)
        rival.append(c2)
        for j, entry in enumerate(column):
            voters[j].append(_solve_margin_position(c2, entry, p))
    election = Election([target, rival], voters, Domain.REAL)
    residual = margin_residual(mi, election, p, voters_are_rows=True)
    if residual > tol:
        raise RealizationError(f"two-candidate realization residual {residual:.3g} exceeds {tol:g}")
    return election


def lift_svis_to_worstcase(mi: MarginInstance) -> ReductionBundle:
    """Worst-case single-voter instance equivalent to best-case ``mi``.

    Adds a column worth ``eps/2`` to every original row and to a new row
    that is zero elsewhere (so the column is forced), plus a row worth
    ``eps`` on every original column and ``-eps/2`` on the new one (so some
    original column is forced).  On integral rows ``sum >= 0`` becomes
    ``sum + eps/2 > 0``.
    """
    base, factor = integral_rescale(mi)
    eps = EPSILON
    l = base.cols
    rows = [list(row) + [eps / 2] for row in base.entries]
    rows.append([0] * l + [eps / 2])
    rows.append([eps] * l + [-eps / 2])
    lifted = MarginInstance(rows, Satisfaction.STRICT, WinRule.ALL_ROWS)
    return ReductionBundle(
        "svis-lift",
        mi,
        margin=lifted,
        notes={"epsilon": str(eps), "rescale_factor": factor, "shape": [base.rows + 2, l + 1]},
    )


# ---------------------------------------------------------------------------
# two candidates


def ilp_to_tcis(src: ZeroOneIlp) -> ReductionBundle:
    """Two-candidate margin matrix (rows are voters) controllable iff ``A x >= b``.

    ``n`` constraint rows, ``n`` dummy rows that never favour the target,
    and one row satisfied exactly when the extra column is chosen.  The
    target needs ``n + 1`` of the ``2n + 1`` voters, i.e. every constraint
    row together with the extra column.
    """
    n, l = src.num_rows, src.num_vars
    rows = [list(src.A[j]) + [-src.b[j]] for j in range(n)]
    rows += [[-1] * l + [-1] for _ in range(n)]
    rows.append([-1] * l + [l + 1])
    mi = MarginInstance(rows, Satisfaction.WEAK, WinRule.COUNT_ROWS)
    return ReductionBundle("ilp->tcis", src, margin=mi, notes={"shape": [2 * n + 1, l + 1]})


def mis_to_tcms(g: Graph) -> ReductionBundle:
    """Margin matrix whose best satisfied-row count is the graph's independence number.

    Diagonal ``|V| - 1``; off-diagonal ``-|V|`` for edges and ``-1``
    otherwise.  Row ``u`` is satisfied by a column set ``S`` exactly when
    ``u`` is in ``S`` and has no neighbour in ``S``.
    """
    size = g.num_vertices
    adjacent = set(g.edges)
    rows = []
    for u in range(size):
        row = []
        for v in range(size):
            if u == v:
                row.append(size - 1)
            elif (min(u, v), max(u, v)) in adjacent:
                row.append(-size)
            else:
                row.append(-1)
        rows.append(row)
    mi = MarginInstance(rows, Satisfaction.WEAK, WinRule.COUNT_ROWS)
    return ReductionBundle("mis->tcms", g, margin=mi, notes={"shape": [size, size]})


def lift_tcis_to_worstcase(mi: MarginInstance) -> ReductionBundle:
    """Worst-case two-candidate instance equivalent to best-case ``mi``.

    Keeps the ``n`` original rows (plus ``eps/2`` on a new column) and adds
    ``n`` rows of ``+x`` and ``n`` rows of ``-x`` (both ``-eps/2`` on the new
    column), ``x`` being the largest magnitude in ``mi``.  The padding rows
    split evenly, so the original rows decide; for even ``n`` one ``-x`` row
    is turned into a ``+x`` row so that the strict majority of the lifted
    election matches the weak majority of the original.
    """
    base, factor = integral_rescale(mi)
    eps = EPSILON
    n, l = base.rows, base.cols
    x = max(1, max(abs(v) for row in base.entries for v in row))
    ups = n + 1 if n % 2 == 0 else n
    downs = 3 * n - n - ups
    rows = [list(row) + [eps / 2] for row in base.entries]
    rows += [[x] * l + [-eps / 2] for _ in range(ups)]
    rows += [[-x] * l + [-eps / 2] for _ in range(downs)]
    lifted = MarginInstance(rows, Satisfaction.STRICT, WinRule.COUNT_ROWS)
    return ReductionBundle(
        "tcis-lift",
        mi,
        margin=lifted,
        notes={
            "epsilon": str(eps),
            "rescale_factor": factor,
            "x": x,
            "shape": [3 * n, l + 1],
            "parity_adjusted": n % 2 == 0,
        },
    )


# ---------------------------------------------------------------------------
# binary issues


def x3c_to_3voter_bisc(src: X3cInstance) -> ReductionBundle:
    """Binary three-voter election the target can win (best case) iff an exact cover exists.

    Issues: one per set, one per element, and two balancing issues.
    Candidates: the target (all ones), one per element, ``x``, ``y`` and an
    all-zero reference candidate.  Voters ``v1``, ``v2`` and an all-zero
    ``v3``.
    """
    t, s = src.t, src.s
    r = s + t + 2
    target = [1] * r
    element_cands = []
    for e in range(1, t + 1):
        row = [1 if e in src.sets[k] else 0 for k in range(s)] + [0] * t + [0, 1]
        element_cands.append(row)
    y = [1] * (s + t) + [0, 0]
    x = [1 - b for b in y]
    zero = [0] * r
    v1 = [1] * s + [0] * t + [1, 0]
    v2 = [0] * s + [1] * t + [0, 1]
    v3 = [0] * r
    election = Election([target] + element_cands + [x, y, zero], [v1, v2, v3], Domain.BINARY)
    return ReductionBundle(
        "x3c->3voter-bisc",
        src,
        election=election,
        notes={"issues": r, "candidates": t + 4, "candidate_order": "w, c_1..c_t, x, y, c"},
    )


def x3c_certificate_issues(src: X3cInstance, cover) -> tuple:
    """Issue set making the target win, built from an exact cover (set indices, 0-based)."""
    q = src.t // 3
    s, t = src.s, src.t
    return tuple(sorted(cover)) + tuple(range(s, s + q)) + (s + t, s + t + 1)


def x3c_cover_from_issues(src: X3cInstance, issues) -> tuple:
    """Set indices selected by a winning issue set; a valid exact cover by construction."""
    return tuple(k for k in sorted(issues) if k < src.s)


def hitting_set_to_bisc(src: HittingSetInstance) -> ReductionBundle:
    """Two-candidate binary election the target can win (best case) iff a hitting set of size <= k exists.

    ``p + k`` issues (element issues then ``k`` selector issues) and
    ``2ks + 4`` voters in three blocks: two balancing voters, ``k`` copies of
    the set-incidence voters each blind to one selector issue, and ``ks + 2``
    all-zero voters.
    """
    p, k, s = src.num_elements, src.k, len(src.sets)
    l = p + k
    voters = [[0] * p + [1] * k, [1] * p + [0] * k]
    for f in range(k):
        selector = [1] * k
        selector[f] = 0
        for members in src.sets:
            voters.append([1 if e in members else 0 for e in range(1, p + 1)] + selector)
    voters += [[0] * l for _ in range(k * s + 2)]
    election = Election([[1] * l, [0] * l], voters, Domain.BINARY)
    return ReductionBundle(
        "hittingset->bisc", src, election=election, notes={"issues": l, "voters": 2 * k * s + 4}
    )


# ---------------------------------------------------------------------------
# brute-force oracles for the source problems


def ilp_feasible(src: ZeroOneIlp) -> bool:
    for x in itertools.product((0, 1), repeat=src.num_vars):
        if all(sum(a * xi for a, xi in zip(row, x)) >= b for row, b in zip(src.A, src.b)):
            return True
    return False


def max_independent_set(g: Graph) -> int:
    adjacent = set(g.edges)
    for size in range(g.num_vertices, 0, -1):
        for subset in itertools.combinations(range(g.num_vertices), size):
            if all((u, v) not in adjacent for u, v in itertools.combinations(subset, 2)):
                return size
    return 0


def x3c_solvable(src: X3cInstance) -> bool:
    q = src.t // 3
    universe = set(range(1, src.t + 1))
    for chosen in itertools.combinations(range(src.s), q):
        covered = [e for k in chosen for e in src.sets[k]]
        if len(covered) == src.t and set(covered) == universe:
            return True
    return False


def hitting_set_exists(src: HittingSetInstance) -> bool:
    limit = min(src.k, src.num_elements)
    for size in range(0, limit + 1):
        for chosen in itertools.combinations(range(1, src.num_elements + 1), size):
            picked = set(chosen)
            if all(picked.intersection(members) for members in src.sets):
                return True
    return False


def all_graphs(num_vertices: int):
    """Every labelled simple graph on ``num_vertices`` vertices."""
    pairs = list(itertools.combinations(range(num_vertices), 2))
    for mask in range(2 ** len(pairs)):
        yield Graph(num_vertices, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])

