"""Exhaustive small-code oracles used to cross-check the BP decoder.

Everything here works on dense bitmask enumerations (n <= ~20), completely
independent of the message-passing implementation under test.
"""

import numpy as np


def dense_parity(prefix) -> np.ndarray:
    """(m, width) dense 0/1 matrix of a prefix."""
    e = prefix.edges
    H = np.zeros((e.num_checks, e.width), dtype=np.uint8)
    H[e.edge_check, e.edge_var] = 1
    return H


class CosetOracle:
    """Minimum-weight coset-leader decoder by full enumeration.

    Enumerates all 2^n error patterns, records each syndrome's first
    minimum-weight representative, and brute-forces the code's minimum
    distance along the way.
    """

    def __init__(self, H: np.ndarray):
        m, n = H.shape
        if n > 20:
            raise ValueError("oracle is exhaustive; n must stay small")
        self.H = H
        self.n = n
        # syndrome of every n-bit pattern, as an m-bit integer
        colmask = np.zeros(n, dtype=np.uint32)
        for j in range(n):
            colmask[j] = int.from_bytes(
                np.packbits(H[:, j], bitorder="little").tobytes(), "little"
            )
        synd = np.zeros(1 << n, dtype=np.uint32)
        weight = np.zeros(1 << n, dtype=np.uint8)
        for j in range(n):
            block = 1 << (j + 1)
            half = 1 << j
            synd.reshape(-1, block)[:, half:] ^= colmask[j]
            weight.reshape(-1, block)[:, half:] += 1
        self.synd = synd
        self.weight = weight
        codewords = np.flatnonzero(synd == 0)
        nz = codewords[codewords > 0]
        self.min_distance = int(weight[nz].min()) if nz.size else None
        order = np.argsort(weight, kind="stable")
        vals, first = np.unique(synd[order], return_index=True)
        self.leader = {int(v): int(order[f]) for v, f in zip(vals, first)}

    def _syndrome_int(self, bits: np.ndarray) -> int:
        acc = 0
        for j in np.flatnonzero(bits):
            acc ^= int(self.synd[1 << int(j)])
        return acc

    def decode(self, noisy: np.ndarray, target_syndrome: np.ndarray) -> np.ndarray:
        """noisy xor (minimum-weight pattern moving its syndrome to target)."""
        t = int.from_bytes(
            np.packbits(np.asarray(target_syndrome, dtype=np.uint8),
                        bitorder="little").tobytes(),
            "little",
        )
        s = t ^ self._syndrome_int(np.asarray(noisy))
        e_int = self.leader[s]
        e = np.zeros(self.n, dtype=np.uint8)
        for j in range(self.n):
            e[j] = (e_int >> j) & 1
        return np.asarray(noisy, dtype=np.uint8) ^ e


def patterns_of_weight_at_most(n: int, t: int):
    """All n-bit error patterns with 1..t set bits."""
    from itertools import combinations

    for w in range(1, t + 1):
        for pos in combinations(range(n), w):
            e = np.zeros(n, dtype=np.uint8)
            e[list(pos)] = 1
            yield e
