import numpy as np
import pytest

import raldpc as rl
from raldpc.codec import DecoderConfig, _decode_batch

from _oracles import CosetOracle, dense_parity, patterns_of_weight_at_most


@pytest.fixture(scope="module")
def small_prefix():
    m = rl.peg_construct(8, 12, rl.DegreeProfile.uniform(12, 3), seed=5)
    return rl.MatrixPrefix(m, 12)


CFG = DecoderConfig(crossover_prior=0.02)


class TestEncode:
    def test_zero_key_zero_syndrome(self, small_prefix):
        assert not rl.encode_syndrome(small_prefix, np.zeros(12, np.uint8)).any()

    def test_linearity_many_cases(self, small_prefix):
        rng = np.random.default_rng(1)
        a = rng.integers(0, 2, (1000, 12), dtype=np.uint8)
        b = rng.integers(0, 2, (1000, 12), dtype=np.uint8)
        sa = rl.encode_syndrome_batch(small_prefix, a)
        sb = rl.encode_syndrome_batch(small_prefix, b)
        sab = rl.encode_syndrome_batch(small_prefix, a ^ b)
        assert np.array_equal(sab, sa ^ sb)

    def test_unit_vectors_give_column_adjacency(self, small_prefix):
        for j in range(12):
            key = np.zeros(12, np.uint8)
            key[j] = 1
            s = rl.encode_syndrome(small_prefix, key)
            assert np.array_equal(
                np.flatnonzero(s), small_prefix.matrix.column(j)
            )

    def test_batch_matches_single(self, small_prefix):
        rng = np.random.default_rng(2)
        keys = rng.integers(0, 2, (50, 12), dtype=np.uint8)
        batch = rl.encode_syndrome_batch(small_prefix, keys)
        for k in range(50):
            assert np.array_equal(batch[k], rl.encode_syndrome(small_prefix, keys[k]))

    def test_length_mismatch_rejected(self, small_prefix):
        with pytest.raises(ValueError):
            rl.encode_syndrome(small_prefix, np.zeros(11, np.uint8))


class TestDecode:
    def test_satisfied_input_returns_at_iteration_zero(self, small_prefix):
        rng = np.random.default_rng(3)
        key = rng.integers(0, 2, 12, dtype=np.uint8)
        s = rl.encode_syndrome(small_prefix, key)
        r = rl.decode(small_prefix, key, s, CFG)
        assert r.success and r.iterations_used == 0
        assert np.array_equal(r.corrected_key, key)
        assert r.unsatisfied_checks == 0

    def test_single_flip_recovered_exhaustively(self, small_prefix):
        rng = np.random.default_rng(4)
        for _ in range(5):
            key = rng.integers(0, 2, 12, dtype=np.uint8)
            s = rl.encode_syndrome(small_prefix, key)
            for j in range(12):
                noisy = key.copy()
                noisy[j] ^= 1
                r = rl.decode(small_prefix, noisy, s, CFG)
                assert r.success and np.array_equal(r.corrected_key, key)

    def test_success_iff_no_unsatisfied_checks(self, small_prefix):
        rng = np.random.default_rng(5)
        for trial in range(200):
            key = rng.integers(0, 2, 12, dtype=np.uint8)
            s = rl.encode_syndrome(small_prefix, key)
            noisy = key ^ (rng.random(12) < 0.25).astype(np.uint8)
            r = rl.decode(small_prefix, noisy, s, CFG)
            assert r.success == (r.unsatisfied_checks == 0)
            assert r.iterations_used <= CFG.max_iterations
            if r.success:
                # soundness: the corrected key reproduces the target syndrome
                assert np.array_equal(rl.encode_syndrome(small_prefix, r.corrected_key), s)

    def test_coset_symmetry(self, small_prefix):
        rng = np.random.default_rng(6)
        for trial in range(50):
            key = rng.integers(0, 2, 12, dtype=np.uint8)
            s = rl.encode_syndrome(small_prefix, key)
            noisy = key ^ (rng.random(12) < 0.15).astype(np.uint8)
            c = rng.integers(0, 2, 12, dtype=np.uint8)
            r1 = rl.decode(small_prefix, noisy, s, CFG)
            r2 = rl.decode(
                small_prefix, noisy ^ c, s ^ rl.encode_syndrome(small_prefix, c), CFG
            )
            assert r1.success == r2.success
            assert np.array_equal(r1.corrected_key ^ c, r2.corrected_key)

    def test_matches_coset_leader_oracle(self, small_prefix):
        oracle = CosetOracle(dense_parity(small_prefix))
        t0 = (oracle.min_distance - 1) // 2
        assert t0 >= 1
        rng = np.random.default_rng(7)
        key = rng.integers(0, 2, 12, dtype=np.uint8)
        s = rl.encode_syndrome(small_prefix, key)
        for e in patterns_of_weight_at_most(12, t0):
            noisy = key ^ e
            r = rl.decode(small_prefix, noisy, s, CFG)
            assert r.success
            assert np.array_equal(r.corrected_key, oracle.decode(noisy, s))

    def test_batch_equals_per_frame_decode(self, small_prefix):
        rng = np.random.default_rng(8)
        keys = rng.integers(0, 2, (64, 12), dtype=np.uint8)
        syn = rl.encode_syndrome_batch(small_prefix, keys)
        noisy = keys ^ (rng.random((64, 12)) < 0.2).astype(np.uint8)
        hard, ok, iters, unsat = _decode_batch(small_prefix, noisy, syn, CFG)
        for k in range(64):
            r = rl.decode(small_prefix, noisy[k], syn[k], CFG)
            assert r.success == ok[k]
            assert r.iterations_used == iters[k]
            assert r.unsatisfied_checks == unsat[k]
            assert np.array_equal(r.corrected_key, hard[k])

    def test_length_mismatch_rejected(self, small_prefix):
        with pytest.raises(ValueError):
            rl.decode(small_prefix, np.zeros(10, np.uint8), np.zeros(8, np.uint8), CFG)
        with pytest.raises(ValueError):
            rl.decode(small_prefix, np.zeros(12, np.uint8), np.zeros(7, np.uint8), CFG)

    def test_nonconvergence_is_reported_not_raised(self, small_prefix):
        # an unsatisfiable syndrome paired with a hostile prior
        cfg = DecoderConfig(crossover_prior=0.49, max_iterations=3)
        rng = np.random.default_rng(9)
        key = rng.integers(0, 2, 12, dtype=np.uint8)
        s = rl.encode_syndrome(small_prefix, key) ^ 1  # flip every syndrome bit
        r = rl.decode(small_prefix, key, s, cfg)
        assert isinstance(r.success, bool)
        assert r.iterations_used <= 3


class TestDecoderConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            DecoderConfig(crossover_prior=0.0)
        with pytest.raises(ValueError):
            DecoderConfig(crossover_prior=0.5)
        with pytest.raises(ValueError):
            DecoderConfig(crossover_prior=0.1, max_iterations=0)
        with pytest.raises(ValueError):
            DecoderConfig(crossover_prior=0.1, llr_clamp=0.0)


class TestHighNoiseFullWidth:
    def test_p30_defeats_full_width(self, mother_matrix):
        # far beyond code capability: expect universal failure
        prefix = rl.MatrixPrefix(mother_matrix, 5120)
        cfg = DecoderConfig(crossover_prior=0.3, max_iterations=20)
        est = rl.estimate_fer(prefix, 0.3, 100, seed=12, config=cfg)
        assert est.point_estimate == 1.0


class TestKeyBlockFiles:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(10)
        blocks = rng.integers(0, 2, (3, 17), dtype=np.uint8)
        path = tmp_path / "keys.txt"
        rl.write_key_blocks(path, blocks)
        assert np.array_equal(rl.read_key_blocks(path), blocks)
        assert np.array_equal(rl.read_key_blocks(path, width=17), blocks)

    def test_width_validation(self, tmp_path):
        path = tmp_path / "keys.txt"
        rl.write_key_blocks(path, np.zeros((1, 8), np.uint8))
        with pytest.raises(ValueError):
            rl.read_key_blocks(path, width=9)

    def test_rejects_garbage(self, tmp_path):
        path = tmp_path / "keys.txt"
        path.write_text("0102\n")
        with pytest.raises(ValueError):
            rl.read_key_blocks(path)

    def test_rejects_ragged_blocks(self, tmp_path):
        path = tmp_path / "keys.txt"
        path.write_text("0101\n010\n")
        with pytest.raises(ValueError):
            rl.read_key_blocks(path)
