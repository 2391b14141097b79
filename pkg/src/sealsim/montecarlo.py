"""Seeded replay of seal -> attack -> verify rounds.

Determinism contract: an experiment draws from one philox4x64
counter-based stream keyed by (base seed, 0), and round r owns exactly
one Philox counter block — the four doubles at stream positions
[4r, 4r+4).  A worker can jump straight to any round's block with
``Philox.advance(r)``, so results are bit-identical for a fixed seed
and trial count no matter how rounds are scheduled, and the generator
name is recorded in the emitted stats so runs are auditable.

Within its block a round consumes draws in a fixed order: measurement
family — outcome, verify; coin toss — coin, outcome-or-guess, verify.
Unused slots are discarded.  The bulk path vectorizes over the draw
table; `replay_experiment` walks the same table one round at a time
through the actual attack and verifier functions, and the test suite
asserts the two are identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.stats import chi2

from .attacks import (
    MeasurementFamily,
    coin_toss_attack,
    measurement_family,
    run_attack,
)
from .errors import UsageError, ValidationError, check_dim
from .linalg import StateVector, fidelity
from .seals import (
    OverlapMatrix,
    ProductSealSpec,
    SealedState,
    product_seal,
    seal_from_overlaps,
    verify_seal,
)

GENERATOR_NAME = "philox4x64"
CHI_SQUARE_LEVEL = 0.999
DRAWS_PER_ROUND = 4  # one Philox counter block


@dataclass(frozen=True, eq=False)
class ExplicitSealSpec:
    """A seal given directly as an overlap matrix plus the sealed message."""

    overlaps: OverlapMatrix
    message: int

    def describe(self) -> dict:
        return {"type": "general", "dim": self.overlaps.dim, "message": self.message}


@dataclass(frozen=True)
class FamilyStrategy:
    """Attack with the nu-parameterized measurement family."""

    nu: float

    def describe(self) -> dict:
        return {"type": "family", "nu": self.nu}


@dataclass(frozen=True)
class CoinTossStrategy:
    """Classical coin-toss attack with read probability q."""

    q: float

    def describe(self) -> dict:
        return {"type": "coin", "q": self.q}


SealSpec = Union[ProductSealSpec, ExplicitSealSpec]
Strategy = Union[FamilyStrategy, CoinTossStrategy]


@dataclass(frozen=True)
class ExperimentConfig:
    seal: SealSpec
    strategy: Strategy
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise UsageError(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")

    def sealed_state(self) -> SealedState:
        if isinstance(self.seal, ProductSealSpec):
            return product_seal(self.seal)
        check_dim(self.seal.overlaps.dim)
        return seal_from_overlaps(self.seal.overlaps, self.seal.message)

    def describe(self) -> dict:
        seal_desc = (
            {"type": "product", "bits": self.seal.bits, "thetas": list(self.seal.thetas)}
            if isinstance(self.seal, ProductSealSpec)
            else self.seal.describe()
        )
        return {
            "seal": seal_desc,
            "strategy": self.strategy.describe(),
            "trials": self.trials,
            "seed": self.seed,
            "generator": GENERATOR_NAME,
        }


@dataclass(frozen=True, eq=False)
class EmpiricalStats:
    """Decode histogram and verifier pass count over all trials."""

    decode_counts: np.ndarray
    pass_count: int
    trials: int

    def __init__(self, decode_counts, pass_count: int, trials: int) -> None:
        counts = np.array(decode_counts, dtype=np.int64)
        if counts.ndim != 1:
            raise ValidationError("decode_counts must be a 1-d histogram")
        if int(counts.sum()) != trials:
            raise ValidationError(
                f"decode counts sum to {int(counts.sum())}, expected {trials}"
            )
        if not 0 <= pass_count <= trials:
            raise ValidationError(f"pass count {pass_count} outside [0, {trials}]")
        counts.setflags(write=False)
        object.__setattr__(self, "decode_counts", counts)
        object.__setattr__(self, "pass_count", int(pass_count))
        object.__setattr__(self, "trials", int(trials))


def draw_table(seed: int, trials: int) -> np.ndarray:
    """Uniform draws for all rounds: row r is round r's counter block."""
    bg = np.random.Philox(key=np.array([seed, 0], dtype=np.uint64))
    flat = np.random.Generator(bg).random(trials * DRAWS_PER_ROUND)
    return flat.reshape(trials, DRAWS_PER_ROUND)


def round_block(seed: int, round_index: int) -> np.ndarray:
    """Round r's draws obtained by jumping the counter, not replaying."""
    bg = np.random.Philox(key=np.array([seed, 0], dtype=np.uint64))
    bg.advance(round_index)
    return np.random.Generator(bg).random(DRAWS_PER_ROUND)


class _ScriptedRng:
    """Replays a fixed block of uniforms through the Generator.random API."""

    def __init__(self, values) -> None:
        self._values = iter(values)

    def random(self) -> float:
        return float(next(self._values))


def _family_tables(
    sealed: SealedState, family: MeasurementFamily
) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative outcome distribution and per-outcome pass probabilities."""
    probs = family.outcome_probabilities(sealed.state)
    cumulative = np.cumsum(probs)
    total = float(cumulative[-1])
    if not math.isfinite(total) or abs(total - 1.0) > 1e-9:
        raise UsageError(f"outcome weights sum to {total}, expected 1")
    pass_probs = np.empty(family.dim)
    for i in range(family.dim):
        _, post = family.apply(i, sealed.state)
        pass_probs[i] = 0.0 if post is None else fidelity(sealed.state, post)
    return cumulative, pass_probs


def _coin_tables(sealed: SealedState) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative honest-outcome distribution and basis-state fidelities."""
    n = sealed.state.dim
    weights = np.abs(sealed.state.amplitudes) ** 2
    cumulative = np.cumsum(weights)
    pass_probs = np.array(
        [fidelity(sealed.state, StateVector.basis(n, i)) for i in range(n)]
    )
    return cumulative, pass_probs


def run_experiment(config: ExperimentConfig) -> EmpiricalStats:
    """Replay trials of seal -> attack -> verify; deterministic per config.

    Bit-identical to replay_experiment, which drives the per-round attack
    and verifier functions over the same draw table.
    """
    sealed = config.sealed_state()
    n = sealed.state.dim
    draws = draw_table(config.seed, config.trials)

    if isinstance(config.strategy, FamilyStrategy):
        family = measurement_family(n, config.strategy.nu)
        cumulative, pass_probs = _family_tables(sealed, family)
        total = cumulative[-1]
        outcomes = np.searchsorted(cumulative, draws[:, 0] * total, side="right")
        np.minimum(outcomes, n - 1, out=outcomes)
        passes = draws[:, 1] < pass_probs[outcomes]
    else:
        q = config.strategy.q
        cumulative, pass_probs = _coin_tables(sealed)
        total = cumulative[-1]
        acted = draws[:, 0] < q
        honest = np.searchsorted(cumulative, draws[:, 1] * total, side="right")
        np.minimum(honest, n - 1, out=honest)
        guesses = np.minimum((draws[:, 1] * n).astype(np.int64), n - 1)
        outcomes = np.where(acted, honest, guesses)
        # untouched state: verifier sees the original back; collapsed
        # state: passes with the basis-state fidelity
        idle_pass = fidelity(sealed.state, sealed.state)
        passes = draws[:, 2] < np.where(acted, pass_probs[honest], idle_pass)

    counts = np.bincount(outcomes, minlength=n).astype(np.int64)
    return EmpiricalStats(
        decode_counts=counts,
        pass_count=int(np.count_nonzero(passes)),
        trials=config.trials,
    )


def replay_experiment(config: ExperimentConfig) -> EmpiricalStats:
    """Round-by-round reference path through the real attack and verifier."""
    sealed = config.sealed_state()
    n = sealed.state.dim
    draws = draw_table(config.seed, config.trials)

    family: MeasurementFamily | None = None
    if isinstance(config.strategy, FamilyStrategy):
        family = measurement_family(n, config.strategy.nu)

    counts = np.zeros(n, dtype=np.int64)
    passes = 0
    for r in range(config.trials):
        rng = _ScriptedRng(draws[r])
        if family is not None:
            outcome = run_attack(sealed, family, rng)
        else:
            outcome = coin_toss_attack(sealed, config.strategy.q, rng)
        counts[outcome.decoded] += 1
        if verify_seal(sealed, outcome.post_state, rng):
            passes += 1
    return EmpiricalStats(decode_counts=counts, pass_count=passes, trials=config.trials)


def chi_square_check(stats: EmpiricalStats, expected) -> tuple[float, bool]:
    """Pearson chi-square of the decode histogram against an expected row.

    Passes when the statistic is below the 99.9th percentile of the
    chi-square distribution with N-1 degrees of freedom.  A nonzero
    count in a zero-probability cell fails outright.
    """
    expected = np.asarray(expected, dtype=float)
    if expected.shape != stats.decode_counts.shape:
        raise UsageError(
            f"expected row shape {expected.shape} does not match "
            f"histogram shape {stats.decode_counts.shape}"
        )
    if abs(float(expected.sum()) - 1.0) > 1e-9:
        raise UsageError(f"expected probabilities sum to {expected.sum()}, not 1")

    counts = stats.decode_counts.astype(float)
    zero_cells = expected <= 0.0
    if np.any(counts[zero_cells] > 0):
        return float("inf"), False
    expected_counts = expected[~zero_cells] * stats.trials
    statistic = float(
        np.sum((counts[~zero_cells] - expected_counts) ** 2 / expected_counts)
    )
    critical = float(chi2.ppf(CHI_SQUARE_LEVEL, df=len(expected) - 1))
    return statistic, statistic < critical


def stats_record(config: ExperimentConfig, stats: EmpiricalStats) -> dict:
    """JSON-ready record: {config, decode_counts, pass_count, trials}."""
    return {
        "config": config.describe(),
        "decode_counts": [int(c) for c in stats.decode_counts],
        "pass_count": stats.pass_count,
        "trials": stats.trials,
    }
