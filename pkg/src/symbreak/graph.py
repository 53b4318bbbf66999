"""Graph representation, generators, and edge-list IO.

Graphs are undirected, simple, and immutable after construction, held
in CSR form (indptr/indices) with sorted adjacency rows.  Vertex ids
are dense integers [0, n).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import kernels
from ._rng import CTX_GADGET, CTX_GNP, fold, u01_array


class GraphError(ValueError):
    """Invalid graph construction or malformed graph input."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph in CSR form.

    Invariants (checked on construction): adjacency is symmetric, rows
    are sorted and duplicate-free, no self-loops, and m equals half the
    degree sum.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @property
    def m(self) -> int:
        return self.indices.size // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return i < row.size and row[i] == v

    def edge_array(self) -> tuple[np.ndarray, np.ndarray]:
        """All edges once, as (us, vs) with us < vs."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return src[keep], self.indices[keep].astype(np.int64)

    def validate(self) -> None:
        deg = self.degrees
        if (deg < 0).any() or self.indptr[0] != 0 or self.indptr[-1] != self.indices.size:
            raise GraphError("corrupt indptr")
        if self.indices.size == 0:
            return
        if self.indices.min() < 0 or self.indices.max() >= self.n:
            raise GraphError("neighbor id out of range")
        src = np.repeat(np.arange(self.n, dtype=np.int64), deg)
        if (src == self.indices).any():
            raise GraphError("self-loop")
        # strictly increasing within each row => sorted, duplicate-free
        d = np.diff(self.indices)
        if d.size:
            same_row = np.ones(d.size, np.bool_)
            bd = self.indptr[1:-1]
            bd = bd[(bd > 0) & (bd <= d.size)]
            same_row[bd - 1] = False
            if (d[same_row] <= 0).any():
                raise GraphError("adjacency row not sorted / duplicate neighbor")
        # symmetry: multiset of (u,v) equals multiset of (v,u)
        fwd = src * self.n + self.indices
        rev = self.indices * self.n + src
        if not np.array_equal(np.sort(fwd), np.sort(rev)):
            raise GraphError("adjacency not symmetric")


def from_edges(n: int, us, vs, *, allow_dedup: bool = True) -> Graph:
    """Build a Graph from endpoint arrays, symmetrizing and deduplicating."""
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    if us.size != vs.size:
        raise GraphError("endpoint arrays differ in length")
    if us.size:
        if min(us.min(), vs.min()) < 0 or max(us.max(), vs.max()) >= n:
            raise GraphError("vertex id out of range")
        if (us == vs).any():
            bad = int(us[us == vs][0])
            raise GraphError(f"self-loop at vertex {bad}")
        lo = np.minimum(us, vs)
        hi = np.maximum(us, vs)
        key = np.unique(lo * n + hi)
        if not allow_dedup and key.size != us.size:
            raise GraphError("duplicate edges")
        lo = key // n
        hi = key % n
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
    else:
        src = np.empty(0, np.int64)
        dst = np.empty(0, np.int64)
    order = np.lexsort((dst, src))
    src = src[order]
    dst = dst[order]
    indptr = np.zeros(n + 1, np.int64)
    np.add.at(indptr, src + 1, 1)
    np.cumsum(indptr, out=indptr)
    g = Graph(n=n, indptr=indptr, indices=dst)
    g.validate()
    return g


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p), deterministic per seed.

    Each unordered pair flips its own coin keyed by (seed, u, v), so the
    result does not depend on iteration order.
    """
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"p must be in [0, 1], got {p}")
    if n < 0:
        raise GraphError("n must be nonnegative")
    state = fold(seed, CTX_GNP, n)
    us, vs = kernels.gnp_pairs(np.uint64(state), n, p)
    return from_edges(n, us, vs)


# --- lower-bound gadget machinery ------------------------------------------

VECTOR_DIGITS = 7


def parse_vector(vec) -> tuple[int, ...]:
    """Accept a 7-digit vector as an int (2134567), string, or sequence."""
    if isinstance(vec, int):
        vec = str(vec)
    if isinstance(vec, str):
        digits = tuple(int(c) for c in vec)
    else:
        digits = tuple(int(c) for c in vec)
    if len(digits) != VECTOR_DIGITS:
        raise GraphError(f"vector must have {VECTOR_DIGITS} digits, got {len(digits)}")
    return digits


def is_valid_vector(vec) -> bool:
    """True iff exactly two positions i, j differ from identity with
    digits[i] = j and digits[j] = i (1-based)."""
    digits = parse_vector(vec)
    if any(d < 1 or d > VECTOR_DIGITS for d in digits):
        return False
    off = [i for i in range(VECTOR_DIGITS) if digits[i] != i + 1]
    if len(off) != 2:
        return False
    i, j = off
    return digits[i] == j + 1 and digits[j] == i + 1


def valid_vectors() -> list[tuple[int, ...]]:
    """All 21 valid 7-digit vectors, one per unordered position pair,
    in lexicographic order."""
    out = []
    for i, j in combinations(range(VECTOR_DIGITS), 2):
        digits = list(range(1, VECTOR_DIGITS + 1))
        digits[i], digits[j] = j + 1, i + 1
        out.append(tuple(digits))
    out.sort()
    return out


def _special_pair(digits: tuple[int, ...]) -> tuple[int, int]:
    off = [i for i in range(VECTOR_DIGITS) if digits[i] != i + 1]
    return off[0], off[1]


def gen_gadget(x, y) -> Graph:
    """The 14-node lower-bound gadget for a pair of valid vectors.

    Nodes 0-6 are the u side, 7-13 the v side; edges are the 7 matching
    pairs (u_i, v_i) plus one special u-edge from x and one special
    v-edge from y.
    """
    dx = parse_vector(x)
    dy = parse_vector(y)
    if not is_valid_vector(dx):
        raise GraphError(f"invalid vector {dx}")
    if not is_valid_vector(dy):
        raise GraphError(f"invalid vector {dy}")
    us = list(range(VECTOR_DIGITS))
    vs = [i + VECTOR_DIGITS for i in range(VECTOR_DIGITS)]
    xi, xj = _special_pair(dx)
    yi, yj = _special_pair(dy)
    us.append(xi)
    vs.append(xj)
    us.append(yi + VECTOR_DIGITS)
    vs.append(yj + VECTOR_DIGITS)
    return from_edges(2 * VECTOR_DIGITS, us, vs)


def gen_lower_bound_graph(n: int, seed: int) -> Graph:
    """Disjoint union of n/14 gadgets with uniform random valid vectors."""
    if n % 14 != 0:
        raise GraphError(f"n must be divisible by 14, got {n}")
    vectors = valid_vectors()
    state = fold(seed, CTX_GADGET, n)
    count = n // 14
    picks = (u01_array(state, np.arange(2 * count, dtype=np.int64)) * len(vectors)).astype(np.int64)
    us_all = []
    vs_all = []
    for gdx in range(count):
        sub = gen_gadget(vectors[picks[2 * gdx]], vectors[picks[2 * gdx + 1]])
        su, sv = sub.edge_array()
        us_all.append(su + 14 * gdx)
        vs_all.append(sv + 14 * gdx)
    if not us_all:
        return from_edges(0, [], [])
    return from_edges(n, np.concatenate(us_all), np.concatenate(vs_all))


# --- edge-list IO -----------------------------------------------------------


def save_edge_list(g: Graph, path) -> None:
    """Write "# n=<N>" then one "u v" line per edge (u < v)."""
    us, vs = g.edge_array()
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# n={g.n}\n")
        for u, v in zip(us.tolist(), vs.tolist()):
            f.write(f"{u} {v}\n")


def load_edge_list(path, n: int | None = None) -> Graph:
    """Read an edge-list file; symmetrizes and deduplicates silently,
    rejects malformed lines, out-of-range ids, and self-loops."""
    declared = n
    us = []
    vs = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                stripped = line[1:].strip().replace(" ", "")
                if stripped.startswith("n="):
                    try:
                        declared = int(stripped[2:])
                    except ValueError as exc:
                        raise GraphError(f"{path}:{lineno}: bad header {line!r}") from exc
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise GraphError(f"{path}:{lineno}: non-integer ids in {line!r}") from exc
            if u == v:
                raise GraphError(f"{path}:{lineno}: self-loop {u}")
            if u < 0 or v < 0:
                raise GraphError(f"{path}:{lineno}: negative vertex id")
            us.append(u)
            vs.append(v)
    top = max(max(us, default=-1), max(vs, default=-1))
    if declared is None:
        declared = top + 1
    if top >= declared:
        raise GraphError(f"{path}: vertex id {top} >= declared n={declared}")
    return from_edges(declared, us, vs)


def induced_subgraph(g: Graph, members: np.ndarray) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by `members`; returns (subgraph, member ids) where
    subgraph vertex i corresponds to members_sorted[i]."""
    members = np.unique(np.asarray(members, dtype=np.int64))
    inmask = np.zeros(g.n, np.bool_)
    inmask[members] = True
    newid = np.full(g.n, -1, np.int64)
    newid[members] = np.arange(members.size)
    src = np.repeat(np.arange(g.n, dtype=np.int64), g.degrees)
    keep = inmask[src] & inmask[g.indices] & (src < g.indices)
    sub = from_edges(members.size, newid[src[keep]], newid[g.indices[keep]])
    return sub, members
