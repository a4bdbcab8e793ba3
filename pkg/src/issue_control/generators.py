"""Seeded synthetic elections: correlated Gaussian positions and tree-walk binary positions."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from issue_control.election import Domain, Election
from issue_control.errors import UsageError

MAX_TREE_ISSUES = 24


class GenKind(enum.Enum):
    GAUSSIAN = "gaussian"
    TREE_BINARY = "tree"


@dataclass(frozen=True)
class GenConfig:
    num_candidates: int = 3
    num_voters: int = 100
    num_issues: int = 10
    seed: int = 0
    kind: GenKind = GenKind.GAUSSIAN

    def __post_init__(self):
        object.__setattr__(self, "kind", GenKind(self.kind))
        if self.num_candidates < 2 or self.num_voters < 1 or self.num_issues < 1:
            raise UsageError("need at least 2 candidates, 1 voter and 1 issue")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        if self.kind is GenKind.TREE_BINARY and self.num_issues > MAX_TREE_ISSUES:
            raise UsageError(f"tree generator supports at most {MAX_TREE_ISSUES} issues")


def _streams(seed: int, roles: int):
    # Philox is counter-based; one child stream per role keeps roles independent
    children = np.random.SeedSequence(seed).spawn(roles)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def gen_gaussian(cfg: GenConfig) -> Election:
    """Candidates and voters drawn i.i.d. from N(0, G G^T) with a fresh standard-normal G."""
    if cfg.kind is not GenKind.GAUSSIAN:
        raise UsageError("gen_gaussian needs a GAUSSIAN config")
    cov_rng, cand_rng, voter_rng = _streams(cfg.seed, 3)
    l = cfg.num_issues
    factor = cov_rng.standard_normal((l, l))
    candidates = cand_rng.standard_normal((cfg.num_candidates, l)) @ factor.T
    voters = voter_rng.standard_normal((cfg.num_voters, l)) @ factor.T
    return Election(candidates.tolist(), voters.tolist(), Domain.REAL)


@dataclass(frozen=True)
class WeightedDecisionTree:
    """Complete binary tree in heap order; ``weights[v]`` is the chance of moving right at ``v``.

    All ``2**depth - 1`` vertices are decision vertices, so a walk from the
    root makes exactly ``depth`` moves and emits ``depth`` bits.
    """

    depth: int
    weights: tuple

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        if len(weights) != 2**self.depth - 1:
            raise UsageError(f"tree of depth {self.depth} needs {2 ** self.depth - 1} weights")
        if any(not 0.0 <= w <= 1.0 for w in weights):
            raise UsageError("tree weights must lie in [0, 1]")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def random(cls, depth: int, rng: np.random.Generator) -> "WeightedDecisionTree":
        return cls(depth, rng.uniform(0.0, 1.0, 2**depth - 1).tolist())

    def walks(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """``count`` independent root-to-leaf walks as a ``(count, depth)`` 0/1 array."""
        weights = np.asarray(self.weights)
        draws = rng.random((count, self.depth))
        vertex = np.zeros(count, dtype=np.int64)
        bits = np.zeros((count, self.depth), dtype=np.int64)
        for level in range(self.depth):
            right = draws[:, level] < weights[vertex]
            bits[:, level] = right
            vertex = 2 * vertex + 1 + right
        return bits


def gen_tree_binary(cfg: GenConfig, tree: WeightedDecisionTree | None = None) -> Election:
    """Binary positions emitted by random walks down one shared weighted tree.

    ``tree`` overrides the randomly drawn tree (used by tests to force
    degenerate weights).
    """
    if cfg.kind is not GenKind.TREE_BINARY:
        raise UsageError("gen_tree_binary needs a TREE_BINARY config")
    tree_rng, cand_rng, voter_rng = _streams(cfg.seed, 3)
    if tree is None:
        tree = WeightedDecisionTree.random(cfg.num_issues, tree_rng)
    elif tree.depth != cfg.num_issues:
        raise UsageError("tree depth must equal the number of issues")
    candidates = tree.walks(cfg.num_candidates, cand_rng)
    voters = tree.walks(cfg.num_voters, voter_rng)
    return Election(candidates.tolist(), voters.tolist(), Domain.BINARY)


def generate(cfg: GenConfig) -> Election:
    if cfg.kind is GenKind.GAUSSIAN:
        return gen_gaussian(cfg)
    return gen_tree_binary(cfg)
