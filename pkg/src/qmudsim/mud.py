"""Multi-user detection layer.

Maps the 2^K bipolar hypothesis vectors onto register indices, scores them
with likelihood-equivalent cost functions, and detects with three receivers:
the matched-filter slicer, exhaustive maximum-likelihood search, and the
quantum-assisted detector that drives the threshold maximum search over a
K-qubit register.  A Monte-Carlo harness sweeps bit error rate against
Eb/N0 while accounting cost-function evaluations and oracle queries.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import cdma, qsearch
from .cdma import CdmaScenario, ChannelState, MfOutputs, ReceivedFrame
from .errors import SizeError

EXHAUSTIVE_K_LIMIT = 20

DETECTORS = ("mf", "ml_exhaustive", "qmud")


@dataclass(frozen=True, eq=False)
class Hypothesis:
    """Bipolar bit vector and its register index m.

    Bit k of m is 0 exactly when user k sent +1 (little-endian, user k on
    bit k), matching the register convention of the quantum modules.
    """

    bits: np.ndarray
    index: int


def bits_from_index(m: int, k_users: int) -> np.ndarray:
    """±1 vector for hypothesis index m."""
    if not 0 <= m < (1 << k_users):
        raise ValueError(f"index {m} outside [0, {1 << k_users})")
    set_bits = (m >> np.arange(k_users)) & 1
    return (1 - 2 * set_bits).astype(np.int8)


def hypothesis_from_index(m: int, k_users: int) -> Hypothesis:
    return Hypothesis(bits=bits_from_index(m, k_users), index=m)


def index_from_bits(bits) -> int:
    """Inverse of bits_from_index; exact round trip."""
    arr = np.asarray(bits)
    if not np.all(np.abs(arr) == 1):
        raise ValueError("bits must be ±1")
    negative = (arr < 0).astype(np.int64)
    return int(np.sum(negative << np.arange(arr.size)))


def all_bit_vectors(k_users: int) -> np.ndarray:
    """(2^K, K) float matrix whose row m is bits_from_index(m, K)."""
    m = np.arange(1 << k_users)[:, None]
    return (1 - 2 * ((m >> np.arange(k_users)) & 1)).astype(float)


class CostFunction:
    """Score map over hypothesis indices; higher means more likely.

    `evaluate` counts every call.  `table` caches one vectorized evaluation
    of all indices for building oracle diagonals and does not touch the
    counter; quantum-detector reports count diagonal constructions per
    threshold round instead.
    """

    def __init__(self, fn: Callable[[int], float], k_users: int, kind: str,
                 table_fn: Optional[Callable[[], np.ndarray]] = None):
        self._fn = fn
        self._table_fn = table_fn
        self._table: Optional[np.ndarray] = None
        self.k_users = k_users
        self.kind = kind
        self.evaluations = 0

    @property
    def n_hypotheses(self) -> int:
        return 1 << self.k_users

    def evaluate(self, m: int) -> float:
        self.evaluations += 1
        return float(self._fn(m))

    __call__ = evaluate

    def table(self) -> np.ndarray:
        if self._table is None:
            if self._table_fn is not None:
                self._table = np.asarray(self._table_fn(), dtype=float)
            else:
                self._table = np.fromiter(
                    (self._fn(m) for m in range(self.n_hypotheses)),
                    dtype=float, count=self.n_hypotheses)
        return self._table


@dataclass(frozen=True, eq=False)
class DetectionReport:
    """One detection outcome with its work accounting.

    `cf_evaluations` is exact call count for classical detectors and the
    number of oracle-diagonal constructions (threshold rounds) for the
    quantum-assisted detector; `grover_queries` is 0 for classical
    detectors.  `correct` is None when the true bits were not supplied.
    """

    detected_bits: np.ndarray
    cf_evaluations: int
    grover_queries: int
    correct: Optional[bool] = None


def _reconstruction_parts(frame: ReceivedFrame, scenario: CdmaScenario,
                          channel: ChannelState):
    """Split the noiseless window into per-user current rows and a
    previous-symbol constant, so the image of bits b is b @ rows + const."""
    n_chips = scenario.n_chips
    t = np.arange(n_chips)
    gains = channel.gains
    rows = np.zeros((scenario.k_users, n_chips), dtype=np.complex128)
    const = np.zeros(n_chips, dtype=np.complex128)
    for k in range(scenario.k_users):
        tau = int(channel.delay[k])
        rolled = np.roll(scenario.signatures[k].chips, tau)
        current = (t >= tau).astype(float)
        rows[k] = gains[k] * current * rolled
        const += gains[k] * frame.prev_bits[k] * (1.0 - current) * rolled
    return rows, const


def make_mls_cost(frame: ReceivedFrame, scenario: CdmaScenario,
                  channel: ChannelState, kind: str = "mls_chip") -> CostFunction:
    """Maximum-likelihood score under white Gaussian chip noise.

    "mls_chip" scores −‖r − ŝ_m‖² against the noiseless chip-level
    reconstruction for hypothesis m (a strictly increasing transform of the
    log-likelihood).  "mls_mf" applies the same Euclidean form to the
    matched-filter image w(b_m) versus the observed filter outputs,
    disregarding the noise correlation those outputs carry.
    """
    if kind not in ("mls_chip", "mls_mf"):
        raise ValueError(f"unknown cost kind {kind!r}")
    rows, const = _reconstruction_parts(frame, scenario, channel)

    if kind == "mls_chip":
        target = frame.samples

        def images():
            return all_bit_vectors(scenario.k_users) @ rows + const
    else:
        target = cdma.matched_filter_bank(frame, scenario, channel).y
        mf_rows = np.zeros((scenario.k_users, scenario.n_chips))
        for k in range(scenario.k_users):
            tau = int(channel.delay[k])
            chips = scenario.signatures[k].chips
            mf_rows[k, tau:] = chips[:scenario.n_chips - tau]

        def images():
            chip_images = all_bit_vectors(scenario.k_users) @ rows + const
            return chip_images @ mf_rows.T

    def table_fn():
        diff = images() - target
        return -np.sum(diff.real**2 + diff.imag**2, axis=1)

    def fn(m):
        b = bits_from_index(m, scenario.k_users).astype(float)
        image = b @ rows + const
        if kind == "mls_mf":
            image = image @ mf_rows.T
        diff = image - target
        return -float(np.sum(diff.real**2 + diff.imag**2))

    return CostFunction(fn, scenario.k_users, kind, table_fn=table_fn)


def mls_cost(frame: ReceivedFrame, scenario: CdmaScenario,
             channel: ChannelState, m: int, kind: str = "mls_chip") -> float:
    """One-off score of hypothesis m; see make_mls_cost."""
    return make_mls_cost(frame, scenario, channel, kind=kind).evaluate(m)


# ---------------------------------------------------------------------------
# Empirical (relative-frequency) cost over a quantized output grid.

@dataclass(frozen=True)
class QuantGrid:
    """Uniform quantizer over [−half_width, half_width] per real dimension.

    Values outside the interval fall into open outer bins (index −1 below,
    cells_per_dim above) rather than being clipped.
    """

    half_width: float
    cells_per_dim: int = 9


def default_grid(scenario: CdmaScenario) -> QuantGrid:
    return QuantGrid(half_width=1.0 + 3.0 * math.sqrt(scenario.noise_variance))


def quantize_mf(y: np.ndarray, grid: QuantGrid) -> np.ndarray:
    """Cell indices of the filter outputs, interleaved (re0, im0, re1, ...).

    Values in [−g, g] land in bins 0..cells_per_dim−1; values strictly
    outside fall into the open bins −1 / cells_per_dim.
    """
    y = np.atleast_2d(np.asarray(y, dtype=np.complex128))
    flat = np.empty((y.shape[0], 2 * y.shape[1]))
    flat[:, 0::2] = y.real
    flat[:, 1::2] = y.imag
    g, c = grid.half_width, grid.cells_per_dim
    cells = np.floor((flat + g) / (2.0 * g) * c).astype(np.int64)
    np.clip(cells, 0, c - 1, out=cells)
    cells[flat < -g] = -1
    cells[flat > g] = c
    return cells


def _sample_hypothesis_outputs(scenario: CdmaScenario, m: int, n_mc: int,
                               rng: np.random.Generator) -> np.ndarray:
    """(n_mc, K) filter outputs for bits(m) over random channel/noise/prev draws."""
    k_users, n_chips = scenario.k_users, scenario.n_chips
    bits = bits_from_index(m, k_users).astype(float)
    if scenario.gain_model == cdma.GAIN_RAYLEIGH:
        amp = rng.rayleigh(scale=1.0 / np.sqrt(2.0), size=(n_mc, k_users))
        phase = rng.uniform(0.0, 2.0 * np.pi, size=(n_mc, k_users))
    else:
        amp = np.ones((n_mc, k_users))
        phase = np.zeros((n_mc, k_users))
    gains = amp * np.exp(1j * phase)
    if scenario.sync_mode == cdma.CHIP_ASYNC:
        tau = rng.integers(0, n_chips, size=(n_mc, k_users))
    else:
        tau = np.zeros((n_mc, k_users), dtype=int)
    prev = rng.choice((-1.0, 1.0), size=(n_mc, k_users))

    t = np.arange(n_chips)
    samples = np.zeros((n_mc, n_chips), dtype=np.complex128)
    aligned = np.empty((k_users, n_mc, n_chips))
    for k in range(k_users):
        chips = scenario.signatures[k].chips
        shift = (t[None, :] - tau[:, k, None]) % n_chips
        base = chips[shift]
        current = t[None, :] >= tau[:, k, None]
        coeff = np.where(current, bits[k], prev[:, k, None])
        samples += gains[:, k, None] * coeff * base
        aligned[k] = np.where(current, base, 0.0)
    if scenario.noise_variance > 0:
        scale = math.sqrt(scenario.noise_variance / 2.0)
        samples = samples + scale * (rng.standard_normal((n_mc, n_chips))
                                     + 1j * rng.standard_normal((n_mc, n_chips)))
    return np.einsum("nt,knt->nk", samples, aligned)


def empirical_cost(scenario: CdmaScenario, y_observed: MfOutputs, m: int,
                   n_mc: int, rng: np.random.Generator,
                   grid: Optional[QuantGrid] = None) -> float:
    """Relative frequency with which hypothesis m lands in the observed cell.

    Draws n_mc channel/noise realizations for the bits of m, quantizes the
    resulting filter outputs, and returns the fraction matching the cell of
    y_observed.  Zero counts are valid scores.
    """
    if n_mc < 1:
        raise ValueError("n_mc must be >= 1")
    if grid is None:
        grid = default_grid(scenario)
    target_cell = quantize_mf(y_observed.y, grid)[0]
    outputs = _sample_hypothesis_outputs(scenario, m, n_mc, rng)
    cells = quantize_mf(outputs, grid)
    return float(np.mean(np.all(cells == target_cell, axis=1)))


def make_empirical_cf(scenario: CdmaScenario, y_observed: MfOutputs,
                      n_mc: int, rng: np.random.Generator,
                      grid: Optional[QuantGrid] = None) -> CostFunction:
    """CostFunction wrapper around empirical_cost (uniform prior over m)."""
    def fn(m):
        return empirical_cost(scenario, y_observed, m, n_mc, rng, grid=grid)
    return CostFunction(fn, scenario.k_users, "empirical")


# ---------------------------------------------------------------------------
# Detectors.

def mf_detect(y: MfOutputs, channel: ChannelState,
              true_bits=None) -> DetectionReport:
    """Per-user slicer on the phase-derotated filter outputs; 0 slices to +1."""
    metric = np.real(np.conj(channel.gains) * y.y)
    detected = np.where(metric < 0, -1, 1).astype(np.int8)
    return DetectionReport(detected_bits=detected, cf_evaluations=0,
                           grover_queries=0,
                           correct=_correct(detected, true_bits))


def exhaustive_ml_detect(cf: CostFunction, k_users: int,
                         true_bits=None) -> DetectionReport:
    """Evaluate every hypothesis; first index wins ties."""
    if k_users > EXHAUSTIVE_K_LIMIT:
        raise SizeError(f"exhaustive search capped at K={EXHAUSTIVE_K_LIMIT}")
    start = cf.evaluations
    scores = np.fromiter((cf.evaluate(m) for m in range(1 << k_users)),
                         dtype=float, count=1 << k_users)
    best = int(np.argmax(scores))
    detected = bits_from_index(best, k_users)
    return DetectionReport(detected_bits=detected,
                           cf_evaluations=cf.evaluations - start,
                           grover_queries=0,
                           correct=_correct(detected, true_bits))


def qmud_detect(cf: CostFunction, k_users: int, rng: np.random.Generator,
                true_bits=None,
                search_cfg: qsearch.SearchConfig = qsearch.MAXIMUM_SEARCH_CONFIG,
                ) -> DetectionReport:
    """Quantum-assisted detection via threshold maximum search.

    The K-qubit register holds all 2^K hypotheses at once; each threshold
    round compiles the score table into one oracle diagonal (counted once
    per round in cf_evaluations) and the randomized search amplifies the
    above-threshold set.  Returns the incumbent even when the final rounds
    exhaust their budgets.
    """
    report = qsearch.maximum_search(cf.table(), k_users, rng, cfg=search_cfg)
    detected = bits_from_index(report.found, k_users)
    return DetectionReport(detected_bits=detected,
                           cf_evaluations=report.iterations_used,
                           grover_queries=report.grover_queries,
                           correct=_correct(detected, true_bits))


def _correct(detected: np.ndarray, true_bits) -> Optional[bool]:
    if true_bits is None:
        return None
    return bool(np.array_equal(detected, np.asarray(true_bits)))


# ---------------------------------------------------------------------------
# Monte-Carlo BER harness.

@dataclass(frozen=True)
class BerPoint:
    ebn0_db: float
    ber: float
    trials: int
    mean_cf_evaluations: float
    mean_grover_queries: float


@dataclass(frozen=True)
class BerCurve:
    """Swept detector performance; serializes to a flat CSV."""

    detector: str
    points: tuple

    CSV_HEADER = ("ebn0_db", "ber", "trials", "mean_cf_evals",
                  "mean_grover_queries")

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh)
        writer.writerow(self.CSV_HEADER)
        for p in self.points:
            writer.writerow([repr(float(p.ebn0_db)), repr(float(p.ber)),
                             p.trials, repr(float(p.mean_cf_evaluations)),
                             repr(float(p.mean_grover_queries))])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            self.write_csv(fh)


def ber_sweep(scenario_template: CdmaScenario, detector: str, ebn0_db_list,
              trials: int, rng: np.random.Generator,
              search_cfg: qsearch.SearchConfig = qsearch.MAXIMUM_SEARCH_CONFIG,
              trace_fh=None) -> BerCurve:
    """Monte-Carlo bit-error-rate sweep for one detector.

    Per point and trial: draw a channel, current and previous bits, and
    noise at the point's Eb/N0; detect; accumulate bit errors over K·trials
    bits plus the mean work counters.  Deterministic under the passed rng.
    trace_fh, when given, receives one JSON line per trial.
    """
    if detector not in DETECTORS:
        raise ValueError(f"detector must be one of {DETECTORS}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    k = scenario_template.k_users
    points = []
    point_rngs = rng.spawn(len(list(ebn0_db_list)))
    for ebn0_db, point_rng in zip(ebn0_db_list, point_rngs):
        scenario = cdma.with_noise_variance(
            scenario_template, cdma.ebn0_db_to_noise_variance(ebn0_db))
        bit_errors = 0
        cf_total = 0.0
        grover_total = 0.0
        for trial in range(trials):
            channel = cdma.sample_channel(scenario, point_rng)
            bits = point_rng.choice((-1, 1), size=k)
            prev = point_rng.choice((-1, 1), size=k)
            frame = cdma.synthesize_received(scenario, channel, bits, prev,
                                             point_rng)
            if detector == "mf":
                y = cdma.matched_filter_bank(frame, scenario, channel)
                report = mf_detect(y, channel, true_bits=bits)
            elif detector == "ml_exhaustive":
                cf = make_mls_cost(frame, scenario, channel)
                report = exhaustive_ml_detect(cf, k, true_bits=bits)
            else:
                cf = make_mls_cost(frame, scenario, channel)
                report = qmud_detect(cf, k, point_rng, true_bits=bits,
                                     search_cfg=search_cfg)
            errors = int(np.sum(report.detected_bits != bits))
            bit_errors += errors
            cf_total += report.cf_evaluations
            grover_total += report.grover_queries
            if trace_fh is not None:
                trace_fh.write(json.dumps({
                    "ebn0_db": ebn0_db, "trial": trial,
                    "true_bits": [int(b) for b in bits],
                    "detected_bits": [int(b) for b in report.detected_bits],
                    "bit_errors": errors,
                    "cf_evaluations": report.cf_evaluations,
                    "grover_queries": report.grover_queries,
                }) + "\n")
        points.append(BerPoint(ebn0_db=float(ebn0_db),
                               ber=bit_errors / (k * trials),
                               trials=trials,
                               mean_cf_evaluations=cf_total / trials,
                               mean_grover_queries=grover_total / trials))
    return BerCurve(detector=detector, points=tuple(points))


def analytic_bpsk_ber(ebn0_db: float) -> float:
    """Textbook coherent BPSK error rate Q(sqrt(2·Eb/N0))."""
    gamma = 10.0 ** (ebn0_db / 10.0)
    return 0.5 * math.erfc(math.sqrt(gamma))


@dataclass(frozen=True)
class AgreementResult:
    """Quantum-assisted vs exhaustive detection over random instances."""

    k_users: int
    trials: int
    ebn0_db: float
    agreement: float
    mean_grover_queries: float
    mean_verification_queries: float
    mean_threshold_rounds: float
    exhaustive_evaluations: int


def qmud_agreement(scenario_template: CdmaScenario, ebn0_db: float,
                   trials: int, rng: np.random.Generator,
                   search_cfg: qsearch.SearchConfig = qsearch.MAXIMUM_SEARCH_CONFIG,
                   ) -> AgreementResult:
    """Fraction of random noisy instances where the quantum-assisted detector
    lands on the exhaustive argmax.

    Instances without a unique maximizer (ties at float precision) are
    redrawn so agreement is well defined.
    """
    k = scenario_template.k_users
    scenario = cdma.with_noise_variance(
        scenario_template, cdma.ebn0_db_to_noise_variance(ebn0_db))
    agree = 0
    grover_total = 0.0
    verify_total = 0.0
    rounds_total = 0.0
    done = 0
    while done < trials:
        channel = cdma.sample_channel(scenario, rng)
        bits = rng.choice((-1, 1), size=k)
        prev = rng.choice((-1, 1), size=k)
        frame = cdma.synthesize_received(scenario, channel, bits, prev, rng)
        cf = make_mls_cost(frame, scenario, channel)
        table = cf.table()
        order = np.sort(table)
        if order[-1] == order[-2]:  # no unique argmax; redraw
            continue
        best = int(np.argmax(table))
        report = qsearch.maximum_search(table, k, rng, cfg=search_cfg)
        agree += int(report.found == best)
        grover_total += report.grover_queries
        verify_total += report.verification_queries
        rounds_total += report.iterations_used
        done += 1
    return AgreementResult(k_users=k, trials=trials, ebn0_db=float(ebn0_db),
                           agreement=agree / trials,
                           mean_grover_queries=grover_total / trials,
                           mean_verification_queries=verify_total / trials,
                           mean_threshold_rounds=rounds_total / trials,
                           exhaustive_evaluations=1 << k)
