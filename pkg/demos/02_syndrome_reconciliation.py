"""One reconciliation round: Alice discloses a syndrome, Bob fixes his key.

Only the m-bit syndrome crosses the classical channel.  Bob decodes his
noisy copy against it with belief propagation and reports success only
when the corrected block reproduces the syndrome exactly (the one-way
protocol: a failed block would simply be discarded).
"""

import numpy as np

import raldpc as rl

M_CHECKS, N_VARS = 256, 1280
QBER = 0.012

matrix = rl.peg_construct(
    M_CHECKS, N_VARS, rl.DegreeProfile.interleaved_4_5(N_VARS), seed=7
)

# pick the prefix width like the adaptive protocol would: more key bits per
# round when the channel is clean, fewer when it is noisy
width = N_VARS  # clean enough channel: use the whole matrix
prefix = rl.MatrixPrefix(matrix, width)
rate = rl.effective_rate(M_CHECKS, width).rate
print(f"prefix width {width}, rate {rate:.3f}, "
      f"efficiency f = {rl.reconciliation_efficiency(rate, QBER):.3f}")

rng = np.random.default_rng(42)
alice = rng.integers(0, 2, width, dtype=np.uint8)
flips = (rng.random(width) < QBER).astype(np.uint8)
bob = alice ^ flips
print(f"channel flipped {flips.sum()} of {width} bits "
      f"(QBER target {QBER:.3f})")

syndrome = rl.encode_syndrome(prefix, alice)  # the only disclosed data
result = rl.decode(prefix, bob, syndrome, rl.DecoderConfig(crossover_prior=QBER))

print(f"decode: success={result.success} after {result.iterations_used} "
      f"iterations, {result.unsatisfied_checks} unsatisfied checks")
print("corrected key equals Alice's:",
      bool(np.array_equal(result.corrected_key, alice)))
print(f"disclosure: {M_CHECKS} syndrome bits for {width} key bits "
      f"({M_CHECKS / width:.3f} per bit vs Shannon minimum "
      f"h(e) = {rl.binary_entropy(QBER):.3f})")
