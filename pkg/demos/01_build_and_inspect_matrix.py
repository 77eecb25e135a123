"""Build a PEG mother matrix column by column and inspect prefix quality.

The construction order matters: because columns are grown left to right,
every prefix of the matrix is itself a PEG graph, so the same matrix can
serve many code rates at once.  The girth of each prefix tells you how
trustworthy belief propagation will be at that width.
"""

import numpy as np

import raldpc as rl

# a quarter-scale mother matrix keeps this demo under a minute; swap in
# (1024, 5120) for the full-size one used by the characterization demo
M_CHECKS, N_VARS, SEED = 256, 1280, 7

profile = rl.DegreeProfile.interleaved_4_5(N_VARS)
matrix = rl.peg_construct(M_CHECKS, N_VARS, profile, seed=SEED)

print(f"mother matrix: {matrix.num_checks} x {matrix.num_vars}, "
      f"{matrix.num_edges} edges")
col_deg = matrix.column_degrees()
print(f"column degrees: {np.bincount(col_deg)[4]} columns of degree 4, "
      f"{np.bincount(col_deg)[5]} of degree 5")
row_deg = np.bincount(matrix.col_indices, minlength=M_CHECKS)
print(f"check degrees: min {row_deg.min()}, max {row_deg.max()}, "
      f"mean {row_deg.mean():.1f}  (PEG keeps them balanced)")

widths = [N_VARS // 4, N_VARS // 2, 3 * N_VARS // 4, N_VARS]
print("\nwidth  rate    girth")
for width, girth in rl.girth_profile(matrix, widths):
    rate = rl.effective_rate(M_CHECKS, width).rate
    g = "acyclic" if girth == rl.ACYCLIC else int(girth)
    print(f"{width:5d}  {rate:.4f}  {g}")
print("\ngirth never increases as columns are added: cycles persist, so the"
      "\nnarrow prefixes are at least as clean as the full matrix.")

path = "/tmp/raldpc_demo_mother.alist"
rl.save_alist(matrix, path)
print(f"\nsaved to {path} (alist text format); round-trip check:",
      rl.load_alist(path) == matrix)
