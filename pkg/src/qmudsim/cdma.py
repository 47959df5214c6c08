"""Discrete-time complex-baseband DS-CDMA uplink simulator.

One observed symbol window of N_c chip-rate samples.  Each user k sends a
BPSK symbol spread by a unit-energy bipolar signature; the channel applies a
complex gain A_k·e^{jα_k} and an integer chip delay τ_k.  With a nonzero
delay the leading chips of the window carry the tail of the user's previous
symbol, so synthesis takes the previous bits explicitly.  Chip samples may
carry complex white Gaussian noise of variance sigma² per sample.
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import hadamard

from .errors import ConfigError, ShapeError

SYNCHRONOUS = "synchronous"
CHIP_ASYNC = "chip-asynchronous"
SYNC_MODES = (SYNCHRONOUS, CHIP_ASYNC)

GAIN_FIXED = "fixed"
GAIN_RAYLEIGH = "rayleigh"
GAIN_MODELS = (GAIN_FIXED, GAIN_RAYLEIGH)

SIGNATURE_KINDS = ("walsh", "random_bipolar")

_ENERGY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Signature:
    """Unit-energy bipolar spreading sequence of one user."""

    user: int
    chips: np.ndarray

    def __post_init__(self):
        chips = np.asarray(self.chips, dtype=float)
        energy = float(np.sum(chips**2))
        if abs(energy - 1.0) > _ENERGY_TOL:
            raise ValueError(f"signature energy {energy!r}, expected 1")
        object.__setattr__(self, "chips", chips)


@dataclass(frozen=True, eq=False)
class ChannelState:
    """Per-user flat channel: real gain, carrier phase, integer chip delay."""

    amplitude: np.ndarray  # A_k >= 0
    phase: np.ndarray      # radians in [0, 2pi)
    delay: np.ndarray      # integer chips

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=float)
        ph = np.asarray(self.phase, dtype=float)
        d = np.asarray(self.delay, dtype=int)
        if not (amp.shape == ph.shape == d.shape):
            raise ShapeError("amplitude, phase, delay must share a shape")
        if np.any(amp < 0) or not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite and nonnegative")
        if np.any(d < 0):
            raise ValueError("delays must be nonnegative chip counts")
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "phase", ph)
        object.__setattr__(self, "delay", d)

    @property
    def gains(self) -> np.ndarray:
        """Composite complex gains a_k = A_k·e^{jα_k}."""
        return self.amplitude * np.exp(1j * self.phase)


@dataclass(frozen=True, eq=False)
class CdmaScenario:
    """Static description of one uplink: codes, channel model, noise level."""

    k_users: int
    n_chips: int
    signatures: tuple
    noise_variance: float
    sync_mode: str = SYNCHRONOUS
    gain_model: str = GAIN_FIXED
    seed: int = 0

    def __post_init__(self):
        if self.k_users < 1:
            raise ConfigError("need at least one user")
        if len(self.signatures) != self.k_users:
            raise ConfigError(
                f"{len(self.signatures)} signatures for {self.k_users} users")
        for sig in self.signatures:
            if sig.chips.size != self.n_chips:
                raise ConfigError(
                    f"signature of user {sig.user} has {sig.chips.size} chips, "
                    f"expected {self.n_chips}")
        if self.sync_mode not in SYNC_MODES:
            raise ConfigError(f"sync_mode must be one of {SYNC_MODES}")
        if self.gain_model not in GAIN_MODELS:
            raise ConfigError(f"gain_model must be one of {GAIN_MODELS}")
        if self.noise_variance < 0:
            raise ConfigError("noise_variance must be >= 0")

    @property
    def signature_matrix(self) -> np.ndarray:
        """(K, N_c) array of chip sequences."""
        return np.stack([sig.chips for sig in self.signatures])


@dataclass(frozen=True, eq=False)
class ReceivedFrame:
    """One symbol observation window plus the transmitted truth for scoring."""

    samples: np.ndarray    # N_c complex chip-rate samples
    true_bits: np.ndarray  # ±1 per user
    prev_bits: np.ndarray  # ±1 per user, previous symbol (spill-in hook)


@dataclass(frozen=True, eq=False)
class MfOutputs:
    """Matched-filter bank output, one complex value per user."""

    y: np.ndarray


def _check_bipolar(name: str, bits, k_users: int) -> np.ndarray:
    arr = np.asarray(bits)
    if arr.shape != (k_users,):
        raise ShapeError(f"{name} must have length {k_users}, got {arr.shape}")
    if not np.all(np.abs(arr) == 1):
        raise ValueError(f"{name} entries must be ±1")
    return arr.astype(float)


def generate_signatures(kind: str, k_users: int, n_chips: int,
                        seed: int) -> tuple:
    """Build K unit-energy signatures of the requested family.

    "walsh" uses rows of a Hadamard matrix (pairwise orthogonal; requires a
    power-of-2 N_c >= K); "random_bipolar" draws i.i.d. ±1 chips seeded for
    reproducibility.
    """
    if kind not in SIGNATURE_KINDS:
        raise ConfigError(f"signature kind must be one of {SIGNATURE_KINDS}")
    if k_users < 1 or n_chips < 1:
        raise ConfigError("k_users and n_chips must be positive")
    scale = 1.0 / np.sqrt(n_chips)
    if kind == "walsh":
        if n_chips & (n_chips - 1):
            raise ConfigError(f"walsh requires power-of-2 n_chips, got {n_chips}")
        if k_users > n_chips:
            raise ConfigError(
                f"walsh supports at most n_chips={n_chips} users, got {k_users}")
        rows = hadamard(n_chips).astype(float) * scale
        return tuple(Signature(k, rows[k]) for k in range(k_users))
    rng = np.random.default_rng(seed)
    chips = rng.choice((-1.0, 1.0), size=(k_users, n_chips)) * scale
    return tuple(Signature(k, chips[k]) for k in range(k_users))


def make_scenario(signature_kind: str, k_users: int, n_chips: int,
                  noise_variance: float, sync_mode: str = SYNCHRONOUS,
                  gain_model: str = GAIN_FIXED, seed: int = 0) -> CdmaScenario:
    """Convenience builder: generate signatures and assemble the scenario."""
    sigs = generate_signatures(signature_kind, k_users, n_chips, seed)
    return CdmaScenario(k_users=k_users, n_chips=n_chips, signatures=sigs,
                        noise_variance=noise_variance, sync_mode=sync_mode,
                        gain_model=gain_model, seed=seed)


def ebn0_db_to_noise_variance(ebn0_db: float) -> float:
    """Chip-noise variance giving the textbook single-user BPSK error rate.

    Per-bit energy is E[A²] times the unit signature energy, i.e. 1 for both
    gain models, and the unit-energy matched filter passes the chip noise
    variance through unchanged, so Eb/N0 = 1/sigma².
    """
    return 10.0 ** (-ebn0_db / 10.0)


def with_noise_variance(scenario: CdmaScenario, sigma2: float) -> CdmaScenario:
    """Copy of the scenario at a different noise level."""
    return dataclasses.replace(scenario, noise_variance=sigma2)


def sample_channel(scenario: CdmaScenario,
                   rng: np.random.Generator) -> ChannelState:
    """Draw per-user (A, α, τ) independently per the scenario's model.

    Rayleigh gains are scaled so E[A²] = 1; the fixed model pins a_k = 1.
    Delays are uniform over chip offsets in asynchronous mode, else 0.
    """
    k = scenario.k_users
    if scenario.gain_model == GAIN_RAYLEIGH:
        amplitude = rng.rayleigh(scale=1.0 / np.sqrt(2.0), size=k)
        phase = rng.uniform(0.0, 2.0 * np.pi, size=k)
    else:
        amplitude = np.ones(k)
        phase = np.zeros(k)
    if scenario.sync_mode == CHIP_ASYNC:
        delay = rng.integers(0, scenario.n_chips, size=k)
    else:
        delay = np.zeros(k, dtype=int)
    return ChannelState(amplitude=amplitude, phase=phase, delay=delay)


def synthesize_received(scenario: CdmaScenario, channel: ChannelState,
                        bits, prev_bits,
                        rng: Optional[np.random.Generator]) -> ReceivedFrame:
    """Generate one received symbol window.

    sample[t] = sum_k a_k·(b_k·s_k[t−τ_k] + b_k^{prev}·s_k[t−τ_k+N_c]) + n[t]
    with s_k zero outside [0, N_c); the previous bits fill the leading τ_k
    chips.  Noise is complex Gaussian with variance sigma² per sample;
    rng may be None only when sigma² = 0.
    """
    k_users, n_chips = scenario.k_users, scenario.n_chips
    b = _check_bipolar("bits", bits, k_users)
    b_prev = _check_bipolar("prev_bits", prev_bits, k_users)
    if np.any(channel.delay >= n_chips):
        raise ValueError("delays must be < n_chips")
    gains = channel.gains
    t = np.arange(n_chips)
    samples = np.zeros(n_chips, dtype=np.complex128)
    for k in range(k_users):
        tau = int(channel.delay[k])
        rolled = np.roll(scenario.signatures[k].chips, tau)
        coeff = np.where(t >= tau, b[k], b_prev[k])
        samples += gains[k] * coeff * rolled
    sigma2 = scenario.noise_variance
    if sigma2 > 0:
        if rng is None:
            raise ValueError("rng required when noise_variance > 0")
        scale = np.sqrt(sigma2 / 2.0)
        samples = samples + scale * (rng.standard_normal(n_chips)
                                     + 1j * rng.standard_normal(n_chips))
    return ReceivedFrame(samples=samples,
                         true_bits=np.asarray(bits).copy(),
                         prev_bits=np.asarray(prev_bits).copy())


def matched_filter_bank(frame: ReceivedFrame, scenario: CdmaScenario,
                        channel: ChannelState) -> MfOutputs:
    """Correlate the window against each user's delay-aligned signature.

    y_k = sum_t samples[t]·s_k[t−τ_k]; delays are known to the receiver.
    """
    if frame.samples.size != scenario.n_chips:
        raise ShapeError(
            f"frame has {frame.samples.size} samples, expected {scenario.n_chips}")
    y = np.empty(scenario.k_users, dtype=np.complex128)
    for k in range(scenario.k_users):
        tau = int(channel.delay[k])
        chips = scenario.signatures[k].chips
        n_used = scenario.n_chips - tau
        y[k] = np.dot(frame.samples[tau:], chips[:n_used])
    return MfOutputs(y=y)


# ---------------------------------------------------------------------------
# Serialization: flat key=value scenario configs, CSV frame export.

SCENARIO_KEYS = ("signature_kind", "k_users", "n_chips", "sync_mode",
                 "gain_model", "sigma2", "ebn0_db", "seed")


def parse_kv_config(text: str) -> dict:
    """Parse a flat "key = value" config; '#' starts a comment."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def scenario_to_config(scenario: CdmaScenario) -> dict:
    """Flat string map describing the scenario (sigma2 form)."""
    kind = "walsh" if _looks_walsh(scenario) else "random_bipolar"
    return {
        "signature_kind": kind,
        "k_users": str(scenario.k_users),
        "n_chips": str(scenario.n_chips),
        "sync_mode": scenario.sync_mode,
        "gain_model": scenario.gain_model,
        "sigma2": repr(float(scenario.noise_variance)),
        "seed": str(scenario.seed),
    }


def _looks_walsh(scenario: CdmaScenario) -> bool:
    n = scenario.n_chips
    if n & (n - 1):
        return False
    rows = hadamard(n).astype(float) / np.sqrt(n)
    mat = scenario.signature_matrix
    return mat.shape[0] <= n and np.array_equal(mat, rows[:mat.shape[0]])


def scenario_from_config(cfg: dict) -> CdmaScenario:
    """Build a scenario from a flat string map; unknown keys are errors.

    Exactly one of sigma2 / ebn0_db must be present.
    """
    unknown = set(cfg) - set(SCENARIO_KEYS)
    if unknown:
        raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
    missing = {"signature_kind", "k_users", "n_chips"} - set(cfg)
    if missing:
        raise ConfigError(f"missing scenario keys: {sorted(missing)}")
    has_sigma = "sigma2" in cfg
    has_ebn0 = "ebn0_db" in cfg
    if has_sigma == has_ebn0:
        raise ConfigError("exactly one of sigma2 / ebn0_db is required")
    try:
        k_users = int(cfg["k_users"])
        n_chips = int(cfg["n_chips"])
        seed = int(cfg.get("seed", "0"))
        sigma2 = (float(cfg["sigma2"]) if has_sigma
                  else ebn0_db_to_noise_variance(float(cfg["ebn0_db"])))
    except ValueError as exc:
        raise ConfigError(f"bad numeric value in scenario config: {exc}") from exc
    return make_scenario(signature_kind=cfg["signature_kind"],
                         k_users=k_users, n_chips=n_chips,
                         noise_variance=sigma2,
                         sync_mode=cfg.get("sync_mode", SYNCHRONOUS),
                         gain_model=cfg.get("gain_model", GAIN_FIXED),
                         seed=seed)


def frame_to_csv(frame: ReceivedFrame, path) -> None:
    """Dump the window as rows of (t, re, im) for debugging."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "re", "im"])
        for t, z in enumerate(frame.samples):
            writer.writerow([t, repr(float(z.real)), repr(float(z.imag))])
