"""Grover-family search over an index space of size N = 2^n.

Provides the single amplitude-amplification step, fixed-iteration search for
a known number of marked items, the randomized growing-schedule search for an
unknown count (giving up on a query budget), one-sided existence testing, and
threshold-driven maximum finding.  Every oracle application to the register
is counted; classical verifications are counted separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from . import qcore
from .errors import ShapeError


@dataclass(frozen=True)
class SearchConfig:
    """Tunables for the randomized searches.

    growth_factor: schedule multiplier for the unknown-count search; the
        cited analysis allows any value in (1, 4/3).
    budget_factor: a search gives up after budget_factor * sqrt(N) oracle
        queries (rounded up).
    max_failures: consecutive failed rounds after which maximum_search stops.
    """

    growth_factor: float = 6 / 5
    budget_factor: float = 4.0
    max_failures: int = 3


DEFAULT_CONFIG = SearchConfig()

# Threshold rounds in maximum_search ramp the schedule as fast as the cited
# analysis permits and give up earlier; this keeps the total query count well
# under the exhaustive-evaluation count while leaving the miss probability of
# a final improvement negligible over max_failures rounds.
MAXIMUM_SEARCH_CONFIG = SearchConfig(growth_factor=1.33, budget_factor=1.8)


class MarkingOracle:
    """Predicate over basis-state indices, applied as a phase flip.

    `query_count` increments once per application to the register;
    `verification_count` once per classical predicate check.  In simulation
    the predicate is evaluated over all indices once and cached as the
    diagonal of the flip operator.
    """

    def __init__(self, n_qubits: int, predicate: Callable[[int], bool]):
        self.n_qubits = n_qubits
        self.predicate = predicate
        self.query_count = 0
        self.verification_count = 0
        self._mask: Optional[np.ndarray] = None
        self._diag: Optional[qcore.DiagonalUnitary] = None

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "MarkingOracle":
        """Build from a boolean marked-index mask of power-of-2 length."""
        mask = np.asarray(mask, dtype=bool)
        n = mask.size.bit_length() - 1
        if mask.size != 1 << n:
            raise ShapeError(f"mask length {mask.size} is not a power of 2")
        oracle = cls(n, lambda i: bool(mask[i]))
        oracle._mask = mask
        return oracle

    @property
    def n_states(self) -> int:
        return 1 << self.n_qubits

    @property
    def marked_mask(self) -> np.ndarray:
        if self._mask is None:
            self._mask = np.fromiter(
                (bool(self.predicate(i)) for i in range(self.n_states)),
                dtype=bool, count=self.n_states)
        return self._mask

    def apply_to(self, s: qcore.StateVector) -> qcore.StateVector:
        """Flip the sign of marked amplitudes; one oracle query."""
        if self._diag is None:
            self._diag = qcore.DiagonalUnitary(
                np.where(self.marked_mask, -1.0, 1.0))
        self.query_count += 1
        return qcore.apply_unitary(self._diag, s)

    def verify(self, index: int) -> bool:
        """Classical check of one index; counted separately from queries."""
        self.verification_count += 1
        return bool(self.predicate(index))


@dataclass(frozen=True)
class SearchReport:
    """Outcome of one search run.

    `iterations_used` is the number of amplitude-amplification steps for the
    fixed and randomized searches, and the number of threshold rounds for
    maximum_search.  `succeeded` implies `found` passed classical
    verification.
    """

    found: Optional[int]
    grover_queries: int
    verification_queries: int
    iterations_used: int
    succeeded: bool


def grover_iterate(oracle: MarkingOracle, s: qcore.StateVector) -> qcore.StateVector:
    """One amplification step: oracle phase flip, then inversion about the mean."""
    if oracle.n_qubits != s.n_qubits:
        raise ShapeError(
            f"oracle on {oracle.n_qubits} qubits, state on {s.n_qubits}")
    flipped = oracle.apply_to(s).amplitudes
    mean = flipped.mean()
    return qcore.StateVector(s.n_qubits, 2.0 * mean - flipped)


def optimal_iterations(n_states: int, n_marked: int) -> int:
    """Iteration count maximizing success probability for a known M."""
    theta = math.asin(math.sqrt(n_marked / n_states))
    return max(0, round(math.pi / (4.0 * theta) - 0.5))


def success_probability(n_states: int, n_marked: int, k: int) -> float:
    """Closed-form success probability sin²((2k+1)·asin(sqrt(M/N)))."""
    theta = math.asin(math.sqrt(n_marked / n_states))
    return math.sin((2 * k + 1) * theta) ** 2


def grover_search(oracle: MarkingOracle, m_known: int,
                  rng: np.random.Generator) -> SearchReport:
    """Search with the iteration count tuned for a known number of marked items."""
    n = oracle.n_states
    if not 1 <= m_known <= n:
        raise ValueError(f"m_known={m_known} outside [1, {n}]")
    g0, v0 = oracle.query_count, oracle.verification_count
    k = optimal_iterations(n, m_known)
    s = qcore.uniform_superposition(oracle.n_qubits)
    for _ in range(k):
        s = grover_iterate(oracle, s)
    outcome = qcore.measure(s, rng).outcome
    ok = oracle.verify(outcome)
    return SearchReport(found=outcome if ok else None,
                        grover_queries=oracle.query_count - g0,
                        verification_queries=oracle.verification_count - v0,
                        iterations_used=k,
                        succeeded=ok)


def bbht_search(oracle: MarkingOracle, rng: np.random.Generator,
                cfg: SearchConfig = DEFAULT_CONFIG) -> SearchReport:
    """Randomized search when the number of marked items is unknown.

    Schedule: m starts at 1; each round runs j ~ Uniform{0..ceil(m)-1}
    amplification steps, measures, and classically verifies; on failure m
    grows by cfg.growth_factor up to sqrt(N).  Gives up (succeeded=False,
    not an error) once cfg.budget_factor * sqrt(N) queries are spent, which
    covers the case of zero marked items.
    """
    n_states = oracle.n_states
    sqrt_n = math.sqrt(n_states)
    budget = math.ceil(cfg.budget_factor * sqrt_n)
    g0, v0 = oracle.query_count, oracle.verification_count
    uniform = qcore.uniform_superposition(oracle.n_qubits)

    def report(found, succeeded):
        return SearchReport(found=found,
                            grover_queries=oracle.query_count - g0,
                            verification_queries=oracle.verification_count - v0,
                            iterations_used=oracle.query_count - g0,
                            succeeded=succeeded)

    m = 1.0
    used = 0
    while True:
        j = int(rng.integers(0, math.ceil(m)))
        j = min(j, budget - used)
        s = uniform
        for _ in range(j):
            s = grover_iterate(oracle, s)
        used += j
        outcome = qcore.measure(s, rng).outcome
        if oracle.verify(outcome):
            return report(outcome, True)
        if used >= budget:
            return report(None, False)
        m = min(cfg.growth_factor * m, sqrt_n)


def existence_test(oracle: MarkingOracle, rng: np.random.Generator,
                   confidence_rounds: int,
                   cfg: SearchConfig = DEFAULT_CONFIG) -> bool:
    """One-sided test of whether any index is marked.

    True is always correct (the hit is verified); False is wrong with a
    probability that decays geometrically in confidence_rounds when at least
    one marked item exists.
    """
    if confidence_rounds < 1:
        raise ValueError("confidence_rounds must be >= 1")
    for _ in range(confidence_rounds):
        if bbht_search(oracle, rng, cfg).succeeded:
            return True
    return False


def maximum_search(cost: Union[Callable[[int], float], np.ndarray],
                   n_qubits: int, rng: np.random.Generator,
                   cfg: SearchConfig = MAXIMUM_SEARCH_CONFIG) -> SearchReport:
    """Locate an index maximizing `cost` by iterated threshold search.

    Keeps a best-so-far threshold t seeded from one random sample, then
    repeatedly searches the oracle "cost(m) > t" with the randomized
    schedule; every verified hit raises the threshold.  Stops after
    cfg.max_failures consecutive rounds find nothing and returns the
    incumbent.  Ties are kept by the first index found.

    `cost` may be a callable on indices or a precomputed value table; the
    callable is evaluated once per basis state to build each round's flip
    diagonal (the table is cached across rounds).
    """
    n_states = 1 << n_qubits
    if isinstance(cost, np.ndarray):
        table = np.asarray(cost, dtype=float)
        if table.shape != (n_states,):
            raise ShapeError(f"cost table must have shape ({n_states},)")
    else:
        table = np.fromiter((cost(i) for i in range(n_states)),
                            dtype=float, count=n_states)

    incumbent = int(rng.integers(0, n_states))
    threshold = table[incumbent]
    grover_total = 0
    verify_total = 0
    rounds = 0
    failures = 0
    while failures < cfg.max_failures:
        oracle = MarkingOracle.from_mask(table > threshold)
        rounds += 1
        rep = bbht_search(oracle, rng, cfg)
        grover_total += rep.grover_queries
        verify_total += rep.verification_queries
        if rep.succeeded:
            incumbent = rep.found
            threshold = table[incumbent]
            failures = 0
        else:
            failures += 1
    return SearchReport(found=incumbent,
                        grover_queries=grover_total,
                        verification_queries=verify_total,
                        iterations_used=rounds,
                        succeeded=True)


def measured_success_rate(oracle: MarkingOracle, k: int, trials: int,
                          rng: np.random.Generator) -> float:
    """Fraction of measurements hitting a marked index after k iterations.

    Evolves the register once and samples `trials` measurements from the
    resulting distribution; statistics are identical to re-preparing the
    state per trial.
    """
    s = qcore.uniform_superposition(oracle.n_qubits)
    for _ in range(k):
        s = grover_iterate(oracle, s)
    p = qcore.probabilities(s)
    outcomes = rng.choice(oracle.n_states, size=trials, p=p / p.sum())
    return float(np.mean(oracle.marked_mask[outcomes]))
