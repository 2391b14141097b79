"""Built-in fixture suite checking every security claim mechanically.

Each check returns a ClaimResult; the CLI renders them as a PASS/FAIL
reportand the acceptance tests assert them one by one.  Tolerances are
pinned here, not in the callers:

- exact algebra (completeness, closed forms, cross-construction): 1e-12
- probability floors: 1e-15
- sampled statistics: 3 sigma binomial bands, chi-square at 99.9%
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import (
    average_fidelity,
    bit_seal_point,
    decode_matrix,
    decode_probabilities,
    escape_probability,
    flat_posterior_mass,
    mutual_information,
)
from .attacks import (
    coin_toss_escape_probability,
    coin_toss_probabilities,
    measurement_family,
)
from .errors import ResourceError
from .linalg import StateVector, apply_and_normalize
from .montecarlo import (
    GENERATOR_NAME,
    CoinTossStrategy,
    ExperimentConfig,
    FamilyStrategy,
    chi_square_check,
    run_experiment,
)
from .seals import OverlapMatrix, ProductSealSpec, overlap_matrix, product_seal

EXACT_ATOL = 1e-12
FLOOR_ATOL = 1e-15

THETA_GRID = (0.0, math.pi / 12, math.pi / 6, math.pi / 4)
THETA_GRID_LABEL = "{0, pi/12, pi/6, pi/4}"
SUITE_MAX_BITS = 6

COMPLETENESS_DIMS = (2, 4, 16, 256, 4096)
NU_GRID_COARSE = (0.0, 0.25, 0.5, 0.75, 1.0)
NU_GRID_FINE = tuple(np.linspace(0.0, 1.0, 11))


@dataclass(frozen=True)
class ClaimResult:
    number: int
    key: str
    description: str
    passed: bool
    details: tuple[str, ...] = ()


def seal_suite(max_bits: int = SUITE_MAX_BITS):
    """Every (bits m, shared theta) overlap matrix on the canonical grid."""
    suite = []
    for m in range(1, max_bits + 1):
        for theta in THETA_GRID:
            spec = ProductSealSpec.shared_theta("0" * m, theta)
            suite.append((m, theta, overlap_matrix(spec)))
    return suite


def _fmt(value: float) -> str:
    return format(value, ".6e")


def check_povm_completeness() -> ClaimResult:
    """Sum of Q^dag Q equals the identity for every (N, nu) on the grid."""
    worst = 0.0
    worst_at = (0, 0.0)
    for n in COMPLETENESS_DIMS:
        for nu in NU_GRID_COARSE:
            dev = measurement_family(n, nu).completeness_deviation()
            if dev > worst:
                worst, worst_at = dev, (n, nu)
    passed = worst <= EXACT_ATOL
    return ClaimResult(
        number=1,
        key="povm-completeness",
        description="measurement family is complete at every (N, nu)",
        passed=passed,
        details=(
            f"max |sum Q^dag Q - I| = {_fmt(worst)} at N={worst_at[0]}, nu={worst_at[1]}",
            f"grid: N in {COMPLETENESS_DIMS}, nu in {NU_GRID_COARSE}",
        ),
    )


def _random_unit_rows(seed: int, n: int, count: int) -> np.ndarray:
    rng = np.random.default_rng([seed, n])
    rows = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def check_decode_closed_form(seed: int) -> ClaimResult:
    """Closed-form decode probabilities match dense operator application."""
    worst = 0.0
    for n in (2, 4, 16):
        rows = _random_unit_rows(seed, n, 100)
        for row in rows:
            state = StateVector(row)
            for nu in NU_GRID_FINE:
                family = measurement_family(n, nu)
                closed = decode_probabilities(row, nu)
                for i in range(n):
                    prob, _ = apply_and_normalize(family.operator(i), state)
                    worst = max(worst, abs(prob - closed[i]))
    return ClaimResult(
        number=2,
        key="decode-closed-form",
        description="decode row (1-nu)/N + nu|c|^2 matches brute-force ||Q psi||^2",
        passed=worst <= EXACT_ATOL,
        details=(
            f"max |closed - dense| = {_fmt(worst)} over 100 rows x N in (2,4,16) x 11 nu",
        ),
    )


def check_decode_floor() -> ClaimResult:
    """At nu = 1/2 every decode entry is at least 1/(2N)."""
    worst_margin = float("inf")
    for m, theta, om in seal_suite():
        dm = decode_matrix(om, 0.5)
        floor = 1.0 / (2.0 * om.dim)
        margin = float(np.min(dm.probabilities)) - floor
        worst_margin = min(worst_margin, margin)
    return ClaimResult(
        number=3,
        key="decode-floor",
        description="every message keeps probability >= 1/(2N) of any decoded value",
        passed=worst_margin >= -FLOOR_ATOL,
        details=(
            f"min entry - 1/(2N) = {_fmt(worst_margin)} over bits<= {SUITE_MAX_BITS}, "
            f"theta in {THETA_GRID_LABEL}",
        ),
    )


def check_flat_posterior() -> ClaimResult:
    """At nu = 1/2 half the posterior is flat for every decoded value."""
    worst = 0.0
    for m, theta, om in seal_suite():
        dm = decode_matrix(om, 0.5)
        for decoded in range(om.dim):
            worst = max(worst, abs(flat_posterior_mass(dm, decoded) - 0.5))
    return ClaimResult(
        number=4,
        key="flat-posterior-half",
        description="decoded values carry a 50% chance the message was anything",
        passed=worst <= EXACT_ATOL,
        details=(f"max |flat mass - 1/2| = {_fmt(worst)}",),
    )


MC_FIXTURES = (
    ProductSealSpec.shared_theta("0", math.pi / 6),
    ProductSealSpec.shared_theta("10", math.pi / 12),
    ProductSealSpec.shared_theta("0110", math.pi / 4),
)


def check_escape_floor(seed: int, trials: int) -> ClaimResult:
    """At nu = 1/2 the attack escapes detection at least half the time."""
    details = []
    passed = True

    worst = float("inf")
    for m, theta, om in seal_suite():
        worst = min(worst, escape_probability(om, 0.5))
    passed &= worst >= 0.5
    details.append(f"min message-averaged fidelity = {_fmt(worst)} (analytic, >= 0.5)")

    for spec in MC_FIXTURES:
        sealed = product_seal(spec)
        analytic = average_fidelity(sealed.state.amplitudes, 0.5)
        config = ExperimentConfig(
            seal=spec, strategy=FamilyStrategy(nu=0.5), trials=trials, seed=seed
        )
        stats = run_experiment(config)
        rate = stats.pass_count / stats.trials
        sigma = math.sqrt(analytic * (1.0 - analytic) / trials)
        ok = abs(rate - analytic) <= 3.0 * sigma
        passed &= ok
        details.append(
            f"bits={spec.bits} pass rate {rate:.6f} vs analytic {analytic:.6f} "
            f"(3 sigma = {_fmt(3 * sigma)}): {'ok' if ok else 'OUT OF BAND'}"
        )
    return ClaimResult(
        number=5,
        key="escape-floor",
        description="nu = 1/2 escapes verification at least half the time",
        passed=bool(passed),
        details=tuple(details),
    )


def check_fidelity_collapse(seed: int) -> ClaimResult:
    """At nu = 1 the average fidelity is sum |c|^4, vanishing for flat seals."""
    details = []
    passed = True

    worst = 0.0
    for n in (2, 4, 16):
        for row in _random_unit_rows(seed, n, 50):
            quartic = float(np.sum(np.abs(row) ** 4))
            worst = max(worst, abs(average_fidelity(row, 1.0) - quartic))
    passed &= worst <= EXACT_ATOL
    details.append(f"max |fidelity - sum |c|^4| = {_fmt(worst)} on random rows")

    for m in (1, 4, 10):
        n = 2**m
        spec = ProductSealSpec.shared_theta("0" * m, math.pi / 4)
        row = product_seal(spec).state.amplitudes
        value = average_fidelity(row, 1.0)
        ok = abs(value - 1.0 / n) <= EXACT_ATOL
        passed &= ok
        details.append(
            f"uniform seal m={m}: fidelity {value:.10g} vs 1/N = {1.0 / n:.10g}: "
            f"{'ok' if ok else 'MISMATCH'}"
        )
    return ClaimResult(
        number=6,
        key="fidelity-collapse",
        description="full projective read cannot escape: fidelity falls as 1/N",
        passed=bool(passed),
        details=tuple(details),
    )


def check_coin_toss_equivalence(seed: int, trials: int) -> ClaimResult:
    """Coin toss at q reproduces the family's decode distribution at nu = q."""
    details = []
    passed = True

    exact = True
    for m, theta, om in seal_suite(max_bits=4):
        for q in (0.25, 0.5, 0.9):
            for row in om.coefficients:
                if not np.array_equal(
                    coin_toss_probabilities(row, q), decode_probabilities(row, q)
                ):
                    exact = False
    passed &= exact
    details.append(
        f"analytic coin-toss row == decode row at q in (0.25, 0.5, 0.9): "
        f"{'exact' if exact else 'MISMATCH'}"
    )

    spec = ProductSealSpec.shared_theta("0", math.pi / 6)
    row = product_seal(spec).state.amplitudes
    expected = decode_probabilities(row, 0.5)
    for label, strategy in (
        ("family nu=1/2", FamilyStrategy(nu=0.5)),
        ("coin q=1/2", CoinTossStrategy(q=0.5)),
    ):
        config = ExperimentConfig(seal=spec, strategy=strategy, trials=trials, seed=seed)
        stats = run_experiment(config)
        statistic, ok = chi_square_check(stats, expected)
        passed &= ok
        details.append(
            f"{label}: chi-square {statistic:.4f} vs same expected row: "
            f"{'pass' if ok else 'FAIL'} at 99.9%"
        )
    # the equivalence is distribution-level only; the post-state
    # ensembles differ, so escape probabilities are shown side by side
    # without any equality assertion
    details.append(
        f"escape probabilities differ by design: family {average_fidelity(row, 0.5):.6f}, "
        f"coin {coin_toss_escape_probability(row, 0.5):.6f}"
    )
    return ClaimResult(
        number=7,
        key="coin-toss-equivalence",
        description="coin toss and family attacks share one decode distribution",
        passed=bool(passed),
        details=tuple(details),
    )


def check_zero_information() -> ClaimResult:
    """Mutual information endpoints: zero without reading, log2 N only if perfect."""
    details = []
    passed = True

    worst = 0.0
    for m, theta, om in seal_suite():
        worst = max(worst, mutual_information(decode_matrix(om, 0.0)))
    passed &= worst <= EXACT_ATOL
    details.append(f"max MI at nu=0 = {_fmt(worst)} bits over the seal suite")

    flat = overlap_matrix(ProductSealSpec.shared_theta("000", math.pi / 4))
    worst_flat = max(
        mutual_information(decode_matrix(flat, nu)) for nu in NU_GRID_FINE
    )
    passed &= worst_flat <= EXACT_ATOL
    details.append(f"max MI of theta=pi/4 seal over 11 nu = {_fmt(worst_flat)} bits")

    worst_perfect = 0.0
    for n in (2, 8, 16):
        mi = mutual_information(decode_matrix(OverlapMatrix.identity(n), 1.0))
        worst_perfect = max(worst_perfect, abs(mi - math.log2(n)))
    passed &= worst_perfect <= EXACT_ATOL
    details.append(
        f"max |MI - log2 N| for projective read of perfect seals = {_fmt(worst_perfect)}"
    )
    return ClaimResult(
        number=8,
        key="zero-information-endpoints",
        description="no reading or flat seals yield zero bits; perfect read yields log2 N",
        passed=bool(passed),
        details=tuple(details),
    )


def check_bit_seal() -> ClaimResult:
    """Single-bit seal at nu = 1/2: detection probability beta stays <= 1/2."""
    details = []
    worst_beta = 0.0
    for theta in THETA_GRID:
        alpha, beta = bit_seal_point(theta, 0.5)
        worst_beta = max(worst_beta, beta)
        details.append(
            f"theta={theta:.6f}: alpha={alpha:.6f} beta={beta:.6f} "
            f"alpha+beta={alpha + beta:.6f}"
        )
    details.append("reference bound alpha + beta <= 9/8 = 1.125 (reported, not asserted)")
    passed = worst_beta <= 0.5 + EXACT_ATOL
    return ClaimResult(
        number=9,
        key="bit-seal-consistency",
        description="bit-seal detection probability stays within beta <= 1/2",
        passed=passed,
        details=tuple(details),
    )


def check_cross_construction() -> ClaimResult:
    """Qubit-by-qubit sealing equals the overlap-matrix row, every message."""
    worst = 0.0
    for m in range(1, SUITE_MAX_BITS + 1):
        for theta in THETA_GRID:
            om = overlap_matrix(ProductSealSpec.shared_theta("0" * m, theta))
            for message in range(2**m):
                bits = format(message, f"0{m}b")
                sealed = product_seal(ProductSealSpec.shared_theta(bits, theta))
                dev = float(
                    np.max(np.abs(sealed.state.amplitudes - om.coefficients[message]))
                )
                worst = max(worst, dev)
    # a mixed-angle spot check to cover unequal thetas
    mixed = ProductSealSpec("101", (0.0, math.pi / 12, math.pi / 4))
    om = overlap_matrix(mixed)
    for message in range(8):
        bits = format(message, "03b")
        sealed = product_seal(ProductSealSpec(bits, mixed.thetas))
        worst = max(
            worst,
            float(np.max(np.abs(sealed.state.amplitudes - om.coefficients[message]))),
        )
    return ClaimResult(
        number=10,
        key="cross-construction",
        description="tensor and overlap-row constructions agree for all messages",
        passed=worst <= EXACT_ATOL,
        details=(f"max amplitude deviation = {_fmt(worst)}",),
    )


def _guarded(check, number: int, key: str, *args) -> ClaimResult:
    """A crashing check is a failed claim, not a crashed report.

    Resource-limit errors still propagate: hitting the dimension cap is
    an environment problem, not a refuted claim.
    """
    try:
        return check(*args)
    except ResourceError:
        raise
    except Exception as exc:  # noqa: BLE001 - deliberate: report and continue
        return ClaimResult(
            number=number,
            key=key,
            description="check raised instead of completing",
            passed=False,
            details=(f"{type(exc).__name__}: {exc}",),
        )


def run_claims(seed: int = 42, trials: int = 100_000) -> list[ClaimResult]:
    """Run every claim check; deterministic for fixed (seed, trials)."""
    return [
        _guarded(check_povm_completeness, 1, "povm-completeness"),
        _guarded(check_decode_closed_form, 2, "decode-closed-form", seed),
        _guarded(check_decode_floor, 3, "decode-floor"),
        _guarded(check_flat_posterior, 4, "flat-posterior-half"),
        _guarded(check_escape_floor, 5, "escape-floor", seed, trials),
        _guarded(check_fidelity_collapse, 6, "fidelity-collapse", seed),
        _guarded(check_coin_toss_equivalence, 7, "coin-toss-equivalence", seed, trials),
        _guarded(check_zero_information, 8, "zero-information-endpoints"),
        _guarded(check_bit_seal, 9, "bit-seal-consistency"),
        _guarded(check_cross_construction, 10, "cross-construction"),
    ]


def format_report(results: list[ClaimResult], seed: int, trials: int) -> str:
    """Deterministic plain-text report, one PASS/FAIL line per claim."""
    lines = [
        "seal attack claims report",
        f"seed={seed} trials={trials} generator={GENERATOR_NAME}",
        "",
    ]
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        lines.append(f"[{result.number:2d}] {status}  {result.key}: {result.description}")
        for detail in result.details:
            lines.append(f"      {detail}")
    passed = sum(r.passed for r in results)
    lines.append("")
    verdict = "PASS" if passed == len(results) else "FAIL"
    lines.append(f"result: {verdict} ({passed}/{len(results)} claims hold)")
    return "\n".join(lines) + "\n"
