"""Measurement protocols on two-copy states and end-to-end evaluation.

Alice projects her pair (A1, A2) onto the symmetric or antisymmetric
subspace, Bob does the same on (B1, B2).  The estimator converts Alice's
antisymmetric probability into a concurrence claim 2 sqrt(p_a); the
two-sided extension also records whether the two outcomes ever differ.
The embedded projectors commute (disjoint supports), so the joint
distribution of ideal projective outcomes is unambiguous.

Sampling uses an explicitly seeded Philox counter-based generator, so a
scenario report is reproducible bit for bit from its configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .linalg import Ket, Operator, expectation_value
from .measures import (
    ensemble_upper_bound_entanglement,
    wootters_concurrence,
)
from .projectors import ANTISYMMETRIC, SYMMETRIC, pair_projector, embed_pair_projector
from .states import ALICE_PAIR, BOB_PAIR, COPY_MAJOR, TwoCopyState, single_copy_marginal

PROBABILITY_ATOL = 1e-10
# identical pure qubit copies force p_a = C^2/4 <= 1/4, so anything above
# this threshold already falsifies the protocol's assumptions
VALIDITY_THRESHOLD = 0.25
VALIDITY_TOL = 1e-9

OUTCOMES = ("aa", "as", "sa", "ss")


@dataclass(frozen=True)
class OutcomeDistribution:
    """Joint probabilities of the (Alice, Bob) in {antisym, sym}^2 outcomes."""

    p_aa: float
    p_as: float
    p_sa: float
    p_ss: float

    def __post_init__(self) -> None:
        probs = self.as_tuple()
        for name, p in zip(OUTCOMES, probs):
            if not -PROBABILITY_ATOL <= p <= 1.0 + PROBABILITY_ATOL:
                raise ValueError(f"p_{name} = {p!r} outside [0, 1]")
        if abs(sum(probs) - 1.0) > PROBABILITY_ATOL:
            raise ValueError(f"outcome probabilities sum to {sum(probs)!r}, not 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_aa, self.p_as, self.p_sa, self.p_ss)

    def marginal(self, side: str) -> float:
        """Antisymmetric-outcome probability of one side."""
        if side == "alice":
            return self.p_aa + self.p_as
        if side == "bob":
            return self.p_aa + self.p_sa
        raise ValueError(f"side must be 'alice' or 'bob', got {side!r}")


@dataclass(frozen=True)
class EstimateVerdict:
    """Everything the protocol reports about one state, next to the truth."""

    p_a_alice: float
    p_a_bob: float
    naive_concurrence: float
    estimator_valid: bool
    disagreement_prob: float
    truth_single_copy_concurrence: float
    truth_decomposition_bound: Optional[float] = None


@dataclass(frozen=True)
class ShotRecord:
    """Counts of sampled joint outcomes for a finite-statistics run."""

    shots: int
    seed: int
    counts: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        if sum(self.counts) != self.shots:
            raise ValueError("outcome counts must sum to the number of shots")

    def frequencies(self) -> tuple[float, float, float, float]:
        return tuple(c / self.shots for c in self.counts)


@lru_cache(maxsize=None)
def _side_projector(side: str, kind: str) -> Operator:
    pair = ALICE_PAIR if side == "alice" else BOB_PAIR
    return embed_pair_projector(pair_projector(kind, pair), COPY_MAJOR)


def _clamp_probability(x: float) -> float:
    if x < -PROBABILITY_ATOL or x > 1.0 + PROBABILITY_ATOL:
        raise ValueError(f"computed probability {x!r} outside [0, 1] beyond tolerance")
    return min(max(x, 0.0), 1.0)


def antisym_probability(state: TwoCopyState, side: str = "alice") -> float:
    """Probability that ``side`` projects its pair onto the antisymmetric subspace."""
    if side not in ("alice", "bob"):
        raise ValueError(f"side must be 'alice' or 'bob', got {side!r}")
    p = expectation_value(_side_projector(side, ANTISYMMETRIC), state.state)
    return _clamp_probability(p)


def naive_concurrence_estimate(p_a: float) -> tuple[float, bool]:
    """Concurrence claim 2 sqrt(p_a) plus a validity flag.

    The value is returned unclamped: an estimate above 1 is evidence that
    the identical-pure-copies assumption is wrong, and the flag (p_a within
    the [0, 1/4] range that assumption allows) reports exactly that.
    """
    if not 0.0 <= p_a <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p_a!r}")
    return 2.0 * math.sqrt(p_a), p_a <= VALIDITY_THRESHOLD + VALIDITY_TOL


def joint_outcome_distribution(state: TwoCopyState) -> OutcomeDistribution:
    """Joint (Alice, Bob) outcome probabilities of the two commuting projections."""
    kinds = {"a": ANTISYMMETRIC, "s": SYMMETRIC}
    probs = {}
    for xy in OUTCOMES:
        op = Operator(
            state.state.layout,
            _side_projector("alice", kinds[xy[0]]).entries
            @ _side_projector("bob", kinds[xy[1]]).entries,
        )
        probs[xy] = _clamp_probability(expectation_value(op, state.state))
    return OutcomeDistribution(probs["aa"], probs["as"], probs["sa"], probs["ss"])


def disagreement_probability(d: OutcomeDistribution) -> float:
    """Probability that Alice's and Bob's outcomes differ."""
    return d.p_as + d.p_sa


def sample_outcomes(state: TwoCopyState, shots: int, seed: int) -> ShotRecord:
    """Draw i.i.d. joint outcomes from the exact distribution.

    Uses a Philox counter-based generator seeded with ``seed``; identical
    (state, shots, seed) triples give identical counts.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    dist = joint_outcome_distribution(state)
    p = np.array(dist.as_tuple(), dtype=float)
    p /= p.sum()
    rng = np.random.default_rng(np.random.Philox(seed))
    counts = rng.multinomial(shots, p)
    return ShotRecord(shots=shots, seed=seed, counts=tuple(int(c) for c in counts))


def evaluate_scenario(
    state: TwoCopyState,
    decomposition: Optional[Sequence[tuple[float, Ket]]] = None,
    decomposition_a_side: Sequence[str] = ALICE_PAIR,
) -> EstimateVerdict:
    """Run the full protocol on one state and compare against ground truth.

    The single-copy truth is the closed-form concurrence of the first
    copy's marginal.  When an explicit decomposition of the two-copy state
    is supplied, its average entanglement entropy across the Alice/Bob cut
    is reported as an upper bound on the total two-copy entanglement.
    """
    dist = joint_outcome_distribution(state)
    p_alice = dist.marginal("alice")
    p_bob = dist.marginal("bob")
    naive, valid = naive_concurrence_estimate(p_alice)
    truth = wootters_concurrence(single_copy_marginal(state, copy=1))
    bound = None
    if decomposition is not None:
        bound = ensemble_upper_bound_entanglement(decomposition, decomposition_a_side)
    return EstimateVerdict(
        p_a_alice=p_alice,
        p_a_bob=p_bob,
        naive_concurrence=naive,
        estimator_valid=valid,
        disagreement_prob=disagreement_probability(dist),
        truth_single_copy_concurrence=truth,
        truth_decomposition_bound=bound,
    )
