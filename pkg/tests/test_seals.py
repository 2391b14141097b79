import json
import math

import numpy as np
import pytest

from sealsim.errors import UsageError, ValidationError
from sealsim.linalg import StateVector
from sealsim.seals import (
    OverlapMatrix,
    ProductSealSpec,
    load_overlap_matrix,
    overlap_matrix,
    product_seal,
    save_overlap_matrix,
    seal_from_overlaps,
    verify_seal,
)

ATOL = 1e-12
THETA_GRID = (0.0, math.pi / 12, math.pi / 6, math.pi / 4)


def entrywise_overlap(i_bits: str, j_bits: str, thetas) -> float:
    """Brute-force per-entry product: cos on matching bits, sin otherwise."""
    value = 1.0
    for bi, bj, t in zip(i_bits, j_bits, thetas):
        value *= math.cos(t) if bi == bj else math.sin(t)
    return value


class TestOverlapMatrix:
    def test_rows_must_be_unit(self):
        with pytest.raises(ValidationError):
            OverlapMatrix([[1.0, 0.5], [0.0, 1.0]])

    def test_must_be_square(self):
        with pytest.raises(ValidationError):
            OverlapMatrix(np.eye(2)[:1])

    def test_identity(self):
        om = OverlapMatrix.identity(4)
        assert om.dim == 4
        assert np.array_equal(om.coefficients, np.eye(4))


class TestProductSealSpec:
    def test_rejects_empty_bits(self):
        with pytest.raises(ValidationError):
            ProductSealSpec("", ())

    def test_rejects_non_binary_bits(self):
        with pytest.raises(ValidationError):
            ProductSealSpec("012", (0.1, 0.1, 0.1))

    def test_rejects_angle_outside_range(self):
        with pytest.raises(ValidationError):
            ProductSealSpec("0", (math.pi / 3,))
        with pytest.raises(ValidationError):
            ProductSealSpec("0", (-0.1,))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValidationError):
            ProductSealSpec("01", (0.1,))

    def test_message_is_big_endian(self):
        assert ProductSealSpec.shared_theta("10", 0.0).message == 2
        assert ProductSealSpec.shared_theta("011", 0.0).message == 3

    def test_shared_theta_broadcasts(self):
        spec = ProductSealSpec.shared_theta("010", 0.2)
        assert spec.thetas == (0.2, 0.2, 0.2)
        assert spec.dim == 8


class TestOverlapMatrixFromSpec:
    def test_theta_zero_is_identity(self):
        om = overlap_matrix(ProductSealSpec.shared_theta("0", 0.0))
        assert np.allclose(om.coefficients, np.eye(2), atol=ATOL)

    def test_all_pi_over_4_is_flat(self):
        om = overlap_matrix(ProductSealSpec.shared_theta("00", math.pi / 4))
        assert np.allclose(om.coefficients, np.full((4, 4), 0.5), atol=ATOL)

    def test_single_bit_pi_over_6(self):
        om = overlap_matrix(ProductSealSpec.shared_theta("0", math.pi / 6))
        expected = [[math.sqrt(3) / 2, 0.5], [0.5, math.sqrt(3) / 2]]
        assert np.allclose(om.coefficients, expected, atol=ATOL)

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    @pytest.mark.parametrize("theta", THETA_GRID)
    def test_symmetric_doubly_unit_nonnegative(self, m, theta):
        om = overlap_matrix(ProductSealSpec.shared_theta("0" * m, theta))
        coeffs = om.coefficients
        assert np.max(np.abs(coeffs - coeffs.T)) <= ATOL
        assert np.max(np.abs(np.imag(coeffs))) == 0.0
        assert np.min(np.real(coeffs)) >= 0.0
        row_norms = np.sum(np.abs(coeffs) ** 2, axis=1)
        col_norms = np.sum(np.abs(coeffs) ** 2, axis=0)
        assert np.max(np.abs(row_norms - 1.0)) <= ATOL
        assert np.max(np.abs(col_norms - 1.0)) <= ATOL

    def test_matches_entrywise_product_oracle(self):
        thetas = (0.0, math.pi / 12, math.pi / 4)
        om = overlap_matrix(ProductSealSpec("101", thetas))
        for i in range(8):
            for j in range(8):
                expected = entrywise_overlap(
                    format(i, "03b"), format(j, "03b"), thetas
                )
                assert abs(om.coefficients[i, j] - expected) <= ATOL


class TestProductSeal:
    def test_single_qubit(self):
        sealed = product_seal(ProductSealSpec.shared_theta("0", math.pi / 6))
        expected = [math.cos(math.pi / 6), math.sin(math.pi / 6)]
        assert np.allclose(sealed.state.amplitudes, expected, atol=ATOL)
        assert sealed.message == 0 and sealed.source == "product"

    def test_perfect_seal_is_basis_state(self):
        sealed = product_seal(ProductSealSpec.shared_theta("10", 0.0))
        assert np.array_equal(sealed.state.amplitudes, [0, 0, 1, 0])
        assert sealed.message == 2

    def test_double_flip_amplitude(self):
        # amplitude on |00> when sealing "11" is sin(theta)^2
        sealed = product_seal(ProductSealSpec.shared_theta("11", math.pi / 6))
        assert sealed.state.amplitudes[0] == pytest.approx(0.25, abs=ATOL)

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    @pytest.mark.parametrize("theta", THETA_GRID)
    def test_equals_overlap_row_for_all_messages(self, m, theta):
        om = overlap_matrix(ProductSealSpec.shared_theta("0" * m, theta))
        for message in range(2**m):
            bits = format(message, f"0{m}b")
            sealed = product_seal(ProductSealSpec.shared_theta(bits, theta))
            general = seal_from_overlaps(om, message)
            dev = np.max(np.abs(sealed.state.amplitudes - general.state.amplitudes))
            assert dev <= ATOL

    def test_equals_overlap_row_with_mixed_angles(self):
        thetas = (math.pi / 12, 0.0, math.pi / 4)
        om = overlap_matrix(ProductSealSpec("000", thetas))
        for message in range(8):
            bits = format(message, "03b")
            sealed = product_seal(ProductSealSpec(bits, thetas))
            dev = np.max(np.abs(sealed.state.amplitudes - om.coefficients[message]))
            assert dev <= ATOL


class TestSealFromOverlaps:
    def test_identity_row(self):
        sealed = seal_from_overlaps(OverlapMatrix.identity(4), 3)
        assert np.array_equal(sealed.state.amplitudes, [0, 0, 0, 1])
        assert sealed.source == "general"

    def test_copies_the_row(self):
        om = OverlapMatrix([[math.sqrt(3) / 2, 0.5], [0.5, math.sqrt(3) / 2]])
        sealed = seal_from_overlaps(om, 0)
        assert np.allclose(sealed.state.amplitudes, [math.sqrt(3) / 2, 0.5], atol=ATOL)

    def test_out_of_range_message(self):
        with pytest.raises(UsageError):
            seal_from_overlaps(OverlapMatrix.identity(2), 2)

    def test_result_is_normalized(self):
        rng = np.random.default_rng(7)
        raw = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        sealed = seal_from_overlaps(OverlapMatrix(raw), 2)
        assert abs(np.sum(np.abs(sealed.state.amplitudes) ** 2) - 1.0) <= ATOL


class TestVerify:
    def test_same_state_always_passes(self):
        sealed = product_seal(ProductSealSpec.shared_theta("01", math.pi / 6))
        rng = np.random.default_rng(0)
        assert all(verify_seal(sealed, sealed.state, rng) for _ in range(200))

    def test_orthogonal_state_always_fails(self):
        sealed = product_seal(ProductSealSpec.shared_theta("0", 0.0))
        orthogonal = StateVector([0.0, 1.0])
        rng = np.random.default_rng(0)
        assert not any(verify_seal(sealed, orthogonal, rng) for _ in range(200))

    def test_pass_rate_tracks_fidelity(self):
        # fidelity 0.75 between |0> and the pi/6 rotation
        sealed = product_seal(ProductSealSpec.shared_theta("0", 0.0))
        returned = StateVector([math.cos(math.pi / 6), math.sin(math.pi / 6)])
        trials = 100_000
        rng = np.random.default_rng(314159)
        passes = sum(verify_seal(sealed, returned, rng) for _ in range(trials))
        sigma = math.sqrt(0.75 * 0.25 / trials)
        assert abs(passes / trials - 0.75) <= 3 * sigma

    def test_dimension_mismatch(self):
        sealed = product_seal(ProductSealSpec.shared_theta("0", 0.0))
        with pytest.raises(UsageError):
            verify_seal(sealed, StateVector([1, 0, 0, 0]), np.random.default_rng(0))

    def test_deterministic_given_seed(self):
        sealed = product_seal(ProductSealSpec.shared_theta("0", math.pi / 4))
        returned = StateVector([1.0, 0.0])
        first = [verify_seal(sealed, returned, np.random.default_rng(5)) for _ in range(1)]
        second = [verify_seal(sealed, returned, np.random.default_rng(5)) for _ in range(1)]
        assert first == second


class TestOverlapMatrixFiles:
    def test_roundtrip(self, tmp_path):
        om = overlap_matrix(ProductSealSpec.shared_theta("01", math.pi / 6))
        path = tmp_path / "seal.json"
        save_overlap_matrix(om, path)
        loaded = load_overlap_matrix(path)
        assert np.allclose(loaded.coefficients, om.coefficients, atol=ATOL)

    def test_row_norms_validated_on_load(self, tmp_path):
        path = tmp_path / "bad.json"
        rows = [[[1.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
        path.write_text(json.dumps({"dim": 2, "rows": rows}))
        with pytest.raises(ValidationError):
            load_overlap_matrix(path)

    def test_missing_keys_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 2}))
        with pytest.raises(ValidationError):
            load_overlap_matrix(path)

    def test_shape_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        rows = [[[1.0, 0.0]], [[1.0, 0.0]]]
        path.write_text(json.dumps({"dim": 2, "rows": rows}))
        with pytest.raises(ValidationError):
            load_overlap_matrix(path)
