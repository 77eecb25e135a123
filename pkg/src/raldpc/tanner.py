"""Sparse bipartite Tanner graphs: progressive edge growth construction,
prefix girth analysis, and alist file I/O.

The mother parity-check matrix is grown column by column so that every
column prefix is itself a valid PEG graph.  Rate adaptation elsewhere in
the package works by taking the first n' columns of the mother matrix,
so prefix quality (girth) is a first-class concern here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ACYCLIC = float("inf")  # sentinel girth for cycle-free prefixes


class AlistParseError(ValueError):
    """Raised when an alist file is malformed; message carries the line number."""


@dataclass(frozen=True)
class DegreeProfile:
    """Per-column variable-node degrees of the mother matrix."""

    column_degrees: np.ndarray

    def __post_init__(self):
        degs = np.asarray(self.column_degrees, dtype=np.int64)
        if degs.ndim != 1 or degs.size == 0:
            raise ValueError("degree profile must be a nonempty 1-D sequence")
        if np.any(degs < 2):
            raise ValueError("every column degree must be >= 2")
        object.__setattr__(self, "column_degrees", degs)

    def __len__(self):
        return int(self.column_degrees.size)

    @staticmethod
    def interleaved_4_5(num_vars: int) -> "DegreeProfile":
        """Alternating degree-4 / degree-5 columns.

        Interleaving keeps the 4/5 mix intact in every prefix, which matters
        because prefixes are used as codes in their own right.
        """
        degs = np.where(np.arange(num_vars) % 2 == 0, 4, 5)
        return DegreeProfile(degs)

    @staticmethod
    def uniform(num_vars: int, degree: int) -> "DegreeProfile":
        return DegreeProfile(np.full(num_vars, degree, dtype=np.int64))


@dataclass(eq=False)
class ParityMatrix:
    """Sparse m x n parity-check matrix in column-major adjacency form.

    ``col_indptr``/``col_indices`` are CSR-style: column j is adjacent to
    check nodes ``col_indices[col_indptr[j]:col_indptr[j+1]]``, strictly
    increasing, no duplicates.
    """

    num_checks: int
    num_vars: int
    col_indptr: np.ndarray
    col_indices: np.ndarray
    _row_cache: tuple | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.col_indptr = np.asarray(self.col_indptr, dtype=np.int64)
        self.col_indices = np.asarray(self.col_indices, dtype=np.int32)
        m, n = self.num_checks, self.num_vars
        if not (0 < m < n):
            raise ValueError("need 0 < num_checks < num_vars")
        if self.col_indptr.shape != (n + 1,) or self.col_indptr[0] != 0:
            raise ValueError("col_indptr must have length num_vars+1 and start at 0")
        if self.col_indptr[-1] != self.col_indices.size:
            raise ValueError("col_indptr end does not match edge count")
        if self.col_indices.size and (
            self.col_indices.min() < 0 or self.col_indices.max() >= m
        ):
            raise ValueError("check index out of range")
        # strictly increasing within each column <=> no duplicates
        if self.col_indices.size > 1:
            edge_col = np.repeat(np.arange(n), np.diff(self.col_indptr))
            same_col = edge_col[1:] == edge_col[:-1]
            if np.any((np.diff(self.col_indices) <= 0) & same_col):
                raise ValueError("column adjacency must be strictly increasing")

    @property
    def num_edges(self) -> int:
        return int(self.col_indices.size)

    def column_degrees(self) -> np.ndarray:
        return np.diff(self.col_indptr)

    def column(self, j: int) -> np.ndarray:
        return self.col_indices[self.col_indptr[j]:self.col_indptr[j + 1]]

    def row_adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """Check-major adjacency (row_indptr, row_indices) over all columns."""
        if self._row_cache is None:
            edge_var = np.repeat(
                np.arange(self.num_vars, dtype=np.int32), self.column_degrees()
            )
            order = np.argsort(self.col_indices, kind="stable")
            row_indices = edge_var[order]
            counts = np.bincount(self.col_indices, minlength=self.num_checks)
            row_indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
            self._row_cache = (row_indptr, row_indices)
        return self._row_cache

    def __eq__(self, other):
        if not isinstance(other, ParityMatrix):
            return NotImplemented
        return (
            self.num_checks == other.num_checks
            and self.num_vars == other.num_vars
            and np.array_equal(self.col_indptr, other.col_indptr)
            and np.array_equal(self.col_indices, other.col_indices)
        )


class MatrixPrefix:
    """The first ``width`` columns of a mother matrix (the effective matrix).

    Width must exceed the check count, otherwise the code rate would be <= 0.
    Edge arrays used by the codec and girth machinery are built lazily and
    cached; a prefix is immutable and safe to share between threads.
    """

    def __init__(self, matrix: ParityMatrix, width: int):
        if not matrix.num_checks < width <= matrix.num_vars:
            raise ValueError(
                f"prefix width must be in ({matrix.num_checks}, {matrix.num_vars}]"
            )
        self.matrix = matrix
        self.width = int(width)
        self._edges = None

    @property
    def num_checks(self) -> int:
        return self.matrix.num_checks

    @property
    def edges(self) -> "PrefixEdges":
        if self._edges is None:
            self._edges = PrefixEdges(self.matrix, self.width)
        return self._edges

    def __repr__(self):
        return (
            f"MatrixPrefix({self.matrix.num_checks}x{self.matrix.num_vars}, "
            f"width={self.width})"
        )


class PrefixEdges:
    """Flat edge arrays of a prefix, in variable-major and check-major order.

    var-major: edges sorted by (variable, check); check-major is the same
    edge list permuted by ``perm``.  ``check_first``/``present_checks`` give
    reduceat segment starts over the check-major order for the checks that
    actually have edges inside the prefix.
    """

    def __init__(self, matrix: ParityMatrix, width: int):
        end = matrix.col_indptr[width]
        self.num_checks = matrix.num_checks
        self.width = width
        self.edge_check = matrix.col_indices[:end]
        self.edge_var = np.repeat(
            np.arange(width, dtype=np.int32), np.diff(matrix.col_indptr[: width + 1])
        )
        self.var_indptr = matrix.col_indptr[: width + 1]
        self.perm = np.argsort(self.edge_check, kind="stable")
        self.inv_perm = np.argsort(self.perm, kind="stable")
        self.edge_check_cm = self.edge_check[self.perm]
        self.edge_var_cm = self.edge_var[self.perm]
        counts = np.bincount(self.edge_check, minlength=self.num_checks)
        self.check_counts = counts
        self.present_checks = np.flatnonzero(counts).astype(np.int32)
        ends = np.cumsum(counts)
        self.check_first = (ends - counts)[self.present_checks].astype(np.int64)
        # check-major CSR over present checks only (empty checks have no row)
        self.check_indptr = np.concatenate(([0], ends)).astype(np.int64)

    @property
    def num_edges(self) -> int:
        return int(self.edge_check.size)


def peg_construct(
    num_checks: int, num_vars: int, profile: DegreeProfile, seed: int
) -> ParityMatrix:
    """Grow an m x n Tanner graph by progressive edge growth, column by column.

    For each new variable node, the first edge goes to a check of minimum
    current degree; each further edge does a BFS from the variable and
    attaches to an unreached check if one exists, otherwise to a check at
    maximal BFS depth.  Ties are broken by minimum current check degree and
    then by a seed-derived permutation of the check indices, so the result
    is deterministic for fixed inputs.
    """
    m, n = int(num_checks), int(num_vars)
    if len(profile) != n:
        raise ValueError("profile length must equal num_vars")
    if n <= m:
        raise ValueError("num_vars must exceed num_checks (rate would be <= 0)")
    degs = profile.column_degrees
    if int(degs.max()) > m:
        raise ValueError("column degree exceeds number of check nodes")

    rng = np.random.default_rng(seed)
    rank = np.empty(m, dtype=np.int64)
    rank[rng.permutation(m)] = np.arange(m)

    max_col_deg = int(degs.max())
    var_adj = np.full((n, max_col_deg), -1, dtype=np.int32)
    var_cnt = np.zeros(n, dtype=np.int32)
    cap = 8
    check_adj = np.full((m, cap), -1, dtype=np.int32)
    check_cnt = np.zeros(m, dtype=np.int64)

    reached_c = np.zeros(m, dtype=bool)
    reached_v = np.zeros(n, dtype=bool)

    def bfs_candidates(j: int) -> np.ndarray:
        """Checks eligible for the next edge of variable j (PEG rule)."""
        reached_c[:] = False
        reached_v[:] = False
        reached_v[j] = True
        frontier_c = var_adj[j, : var_cnt[j]]
        if frontier_c.size == 0:
            return np.arange(m)
        reached_c[frontier_c] = True
        last_level = frontier_c
        while True:
            rows = check_adj[frontier_c]
            mask = np.arange(cap) < check_cnt[frontier_c, None]
            vs = rows[mask]
            vs = vs[~reached_v[vs]]
            if vs.size == 0:
                break
            new_v = np.unique(vs)
            reached_v[new_v] = True
            rows = var_adj[new_v]
            vmask = np.arange(max_col_deg) < var_cnt[new_v, None]
            cs = rows[vmask]
            cs = cs[~reached_c[cs]]
            if cs.size == 0:
                break
            new_c = np.unique(cs)
            reached_c[new_c] = True
            frontier_c = new_c
            last_level = new_c
        unreached = np.flatnonzero(~reached_c)
        return unreached if unreached.size else last_level

    for j in range(n):
        for _ in range(int(degs[j])):
            cand = bfs_candidates(j)
            key = check_cnt[cand] * (m + 1) + rank[cand]
            c = int(cand[np.argmin(key)])
            var_adj[j, var_cnt[j]] = c
            var_cnt[j] += 1
            if check_cnt[c] == cap:
                check_adj = np.concatenate(
                    [check_adj, np.full((m, cap), -1, dtype=np.int32)], axis=1
                )
                cap *= 2
            check_adj[c, check_cnt[c]] = j
            check_cnt[c] += 1

    if np.all(degs == degs[0]):
        col_indices = np.sort(var_adj, axis=1).ravel()
        col_indptr = np.arange(0, (n + 1) * max_col_deg, max_col_deg, dtype=np.int64)
    else:
        # ragged degrees: sort pushes the -1 padding to the row front
        srt = np.sort(var_adj, axis=1)
        col_indices = np.concatenate(
            [srt[j, max_col_deg - degs[j]:] for j in range(n)]
        )
        col_indptr = np.concatenate(([0], np.cumsum(degs))).astype(np.int64)
    return ParityMatrix(m, n, col_indptr, col_indices.astype(np.int32))


def _gather_rows(indptr, indices, rows):
    """Concatenate CSR rows ``rows`` without a Python loop."""
    lens = indptr[rows + 1] - indptr[rows]
    total = int(lens.sum())
    if total == 0:
        return indices[:0]
    pos = np.repeat(np.cumsum(lens) - lens, lens)
    src = np.repeat(indptr[rows], lens) + (np.arange(total) - pos)
    return indices[src]


def girth_of_prefix(prefix: MatrixPrefix):
    """Exact girth of the Tanner graph restricted to the prefix columns.

    BFS from every variable node; the first BFS level at which some node is
    reached along two distinct edges certifies a cycle of twice that depth,
    and the best value over all roots is the exact girth.  Returns an even
    integer >= 4, or ``ACYCLIC`` (inf) when no cycle exists.
    """
    e = prefix.edges
    m, w = e.num_checks, e.width
    col_indptr = e.var_indptr
    col_indices = e.edge_check
    row_indptr, row_indices = e.check_indptr, e.edge_var_cm

    best = ACYCLIC
    visit_c = np.full(m, -1, dtype=np.int64)
    visit_v = np.full(w, -1, dtype=np.int64)
    for root in range(w):
        if best <= 4:
            break  # bipartite graphs cannot do better
        visit_v[root] = root
        frontier_v = np.array([root], dtype=np.int64)
        frontier_c = None
        depth = 0
        while True:
            depth += 1
            if 2 * depth >= best:
                break
            if depth % 2 == 1:  # variables -> checks
                targets = _gather_rows(col_indptr, col_indices, frontier_v)
                targets = targets[visit_c[targets] != root]
                if targets.size == 0:
                    break
                counts = np.bincount(targets, minlength=m)
                hit = counts.max() >= 2
                frontier_c = np.flatnonzero(counts)
                visit_c[frontier_c] = root
            else:  # checks -> variables
                targets = _gather_rows(row_indptr, row_indices, frontier_c)
                targets = targets[visit_v[targets] != root]
                if targets.size == 0:
                    break
                counts = np.bincount(targets, minlength=w)
                hit = counts.max() >= 2
                frontier_v = np.flatnonzero(counts)
                visit_v[frontier_v] = root
            if hit:
                best = min(best, 2 * depth)
                break
    return int(best) if best != ACYCLIC else ACYCLIC


def girth_profile(matrix: ParityMatrix, widths) -> list[tuple[int, float]]:
    """Girth of each prefix width, widths strictly increasing in (m, n]."""
    widths = [int(w) for w in widths]
    if not widths:
        raise ValueError("widths must be nonempty")
    if any(b <= a for a, b in zip(widths, widths[1:])):
        raise ValueError("widths must be strictly increasing")
    if widths[0] <= matrix.num_checks or widths[-1] > matrix.num_vars:
        raise ValueError(
            f"widths must lie in ({matrix.num_checks}, {matrix.num_vars}]"
        )
    return [(w, girth_of_prefix(MatrixPrefix(matrix, w))) for w in widths]


def save_alist(matrix: ParityMatrix, path) -> None:
    """Write the matrix in alist text format (1-based, zero-padded rows)."""
    col_deg = matrix.column_degrees()
    row_indptr, row_indices = matrix.row_adjacency()
    row_deg = np.diff(row_indptr)
    max_col = int(col_deg.max())
    max_row = int(row_deg.max())
    lines = [
        f"{matrix.num_vars} {matrix.num_checks}",
        f"{max_col} {max_row}",
        " ".join(str(int(d)) for d in col_deg),
        " ".join(str(int(d)) for d in row_deg),
    ]
    for j in range(matrix.num_vars):
        ents = [str(int(c) + 1) for c in matrix.column(j)]
        ents += ["0"] * (max_col - len(ents))
        lines.append(" ".join(ents))
    for i in range(matrix.num_checks):
        ents = [
            str(int(v) + 1) for v in np.sort(row_indices[row_indptr[i]:row_indptr[i + 1]])
        ]
        ents += ["0"] * (max_row - len(ents))
        lines.append(" ".join(ents))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def _ints(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise AlistParseError(f"line {lineno}: non-integer token") from None


def load_alist(path) -> ParityMatrix:
    """Parse an alist file back into a ParityMatrix.

    Accepts both zero-padded and unpadded entry lines.  Raises
    AlistParseError naming the offending line on any inconsistency.
    """
    with open(path, "r", encoding="ascii") as fh:
        raw = fh.read().splitlines()
    lines = [(i + 1, ln) for i, ln in enumerate(raw) if ln.strip()]
    if len(lines) < 4:
        raise AlistParseError("line 1: file truncated (need at least 4 header lines)")
    ln, first = lines[0]
    head = _ints(first, ln)
    if len(head) != 2 or head[0] <= 0 or head[1] <= 0:
        raise AlistParseError(f"line {ln}: expected 'n m' with positive integers")
    n, m = head
    ln, second = lines[1]
    maxes = _ints(second, ln)
    if len(maxes) != 2:
        raise AlistParseError(f"line {ln}: expected 'max_col_deg max_row_deg'")
    ln, third = lines[2]
    col_deg = _ints(third, ln)
    if len(col_deg) != n:
        raise AlistParseError(f"line {ln}: expected {n} column degrees")
    ln, fourth = lines[3]
    row_deg = _ints(fourth, ln)
    if len(row_deg) != m:
        raise AlistParseError(f"line {ln}: expected {m} row degrees")
    if len(lines) != 4 + n + m:
        raise AlistParseError(
            f"line {lines[-1][0]}: expected {4 + n + m} content lines, got {len(lines)}"
        )

    cols = []
    for j in range(n):
        ln, text = lines[4 + j]
        ents = [x for x in _ints(text, ln) if x != 0]
        if len(ents) != col_deg[j]:
            raise AlistParseError(
                f"line {ln}: column {j} has {len(ents)} entries, declared {col_deg[j]}"
            )
        if any(not (1 <= x <= m) for x in ents):
            raise AlistParseError(f"line {ln}: check index out of range 1..{m}")
        if len(set(ents)) != len(ents):
            raise AlistParseError(f"line {ln}: duplicate check index in column {j}")
        cols.append(sorted(x - 1 for x in ents))

    # validate the row section against the column section
    row_seen = [[] for _ in range(m)]
    for j, ents in enumerate(cols):
        for c in ents:
            row_seen[c].append(j)
    for i in range(m):
        ln, text = lines[4 + n + i]
        ents = sorted(x - 1 for x in _ints(text, ln) if x != 0)
        if len(ents) != row_deg[i]:
            raise AlistParseError(
                f"line {ln}: row {i} has {len(ents)} entries, declared {row_deg[i]}"
            )
        if ents != sorted(row_seen[i]):
            raise AlistParseError(f"line {ln}: row {i} disagrees with column section")

    col_indptr = np.concatenate(([0], np.cumsum([len(c) for c in cols])))
    col_indices = np.concatenate([np.asarray(c, dtype=np.int32) for c in cols]) if cols else np.empty(0, np.int32)
    total = int(col_indptr[-1])
    if total != sum(row_deg):
        raise AlistParseError("line 4: row degrees do not sum to the edge count")
    return ParityMatrix(m, n, col_indptr.astype(np.int64), col_indices)
