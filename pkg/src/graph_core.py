#!/usr/bin/env python3
"""
Graph Core
Simple graphs with bit-packed adjacency, loop sets, named families, joins,
structural queries and graph6 (+ loop-mask sidecar) ingestion.

Vertex labeling of the named families:
    empty(n), complete(n)    0..n-1
    path(n)                  edges i - i+1
    cycle(n)                 edges i - (i+1) mod n
    complete_bipartite(p,q)  side A = 0..p-1, side B = p..p+q-1
    hex_prism                outer hexagon 0..5, inner hexagon 6..11, spokes i - i+6
    trunc_tetrahedron        corner triangle t = {3t, 3t+1, 3t+2}; vertex 3t+k sits on
                             the tetrahedron edge from t towards the k-th other corner
                             (ascending), and is matched to its partner on that edge
"""

import argparse
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from console import setup_logging

logger = logging.getLogger(__name__)

GRAPH6_OFFSET = 63
GRAPH6_MAX_N = 62
GRAPH6_HEADER = ">>graph6<<"


class GraphError(ValueError):
    pass


class Graph6Error(GraphError):
    pass


def _bits(mask):
    """Yield the set bit positions of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; rows[i] has bit j set iff i ~ j."""

    n: int
    rows: tuple

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"vertex count must be non-negative, got {self.n}")
        if len(self.rows) != self.n:
            raise GraphError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.rows):
            if row & ~full:
                raise GraphError(f"row {i} references a vertex outside 0..{self.n - 1}")
            if (row >> i) & 1:
                raise GraphError(f"vertex {i} carries a loop; loops belong in a LoopSet")
            for j in _bits(row):
                if not (self.rows[j] >> i) & 1:
                    raise GraphError(f"adjacency is not symmetric at ({i}, {j})")

    @classmethod
    def from_edges(cls, n, edges):
        rows = [0] * n
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise GraphError(f"edge ({i}, {j}) is a loop")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(n, tuple(rows))

    @classmethod
    def from_edge_mask(cls, n, mask):
        """Bit k of mask is the k-th upper-triangle pair in graph6 (column-major) order."""
        rows = [0] * n
        k = 0
        for j in range(1, n):
            for i in range(j):
                if (mask >> k) & 1:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
                k += 1
        return cls(n, tuple(rows))

    @property
    def edge_count(self):
        return sum(row.bit_count() for row in self.rows) // 2

    @property
    def vertex_mask(self):
        return (1 << self.n) - 1

    def has_edge(self, i, j):
        return bool((self.rows[i] >> j) & 1)

    def neighbors(self, v):
        return list(_bits(self.rows[v]))

    def degrees(self):
        return tuple(row.bit_count() for row in self.rows)

    def edges(self):
        for i, row in enumerate(self.rows):
            for j in _bits(row >> (i + 1)):
                yield i, i + 1 + j

    def induced_edges(self, vertices):
        """Number of edges with both endpoints in vertices."""
        mask = _as_mask(vertices)
        return sum((self.rows[v] & mask).bit_count() for v in _bits(mask)) // 2

    def triangle_count(self):
        return sum((self.rows[i] & self.rows[j]).bit_count() for i, j in self.edges()) // 3

    def adjacency_matrix(self):
        a = np.zeros((self.n, self.n))
        for i, j in self.edges():
            a[i, j] = a[j, i] = 1.0
        return a


def _as_mask(vertices):
    if isinstance(vertices, int):
        return vertices
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class LoopSet:
    """Vertices of an n-vertex graph that carry a self-loop (bit i = vertex i)."""

    n: int
    mask: int = 0

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise GraphError(f"loop set {self.mask:#x} is not a subset of 0..{self.n - 1}")

    @classmethod
    def from_members(cls, n, members):
        members = list(members)
        for v in members:
            if not 0 <= v < n:
                raise GraphError(f"loop vertex {v} out of range for n={n}")
        return cls(n, _as_mask(members))

    @property
    def members(self):
        return tuple(_bits(self.mask))

    @property
    def alpha(self):
        return self.mask.bit_count()

    def complement(self):
        return LoopSet(self.n, ((1 << self.n) - 1) & ~self.mask)


@dataclass(frozen=True)
class SelfLoopGraph:
    base: Graph
    loops: LoopSet

    def __post_init__(self):
        if self.loops.n != self.base.n:
            raise GraphError(f"loop set is sized for n={self.loops.n}, graph has n={self.base.n}")

    @classmethod
    def plain(cls, g):
        return cls(g, LoopSet(g.n))

    @classmethod
    def all_loops(cls, g):
        return cls(g, LoopSet(g.n, g.vertex_mask))


@dataclass(frozen=True)
class VertexPartition:
    n: int
    blocks: tuple

    def __post_init__(self):
        seen = 0
        for block in self.blocks:
            mask = _as_mask(block)
            if mask & seen:
                raise GraphError("partition blocks overlap")
            seen |= mask
        if seen != (1 << self.n) - 1:
            raise GraphError("partition blocks do not cover the vertex set")


# --- Named families ---

def _empty(n):
    return Graph.from_edges(n, [])


def _complete(n):
    return Graph.from_edges(n, [(i, j) for j in range(n) for i in range(j)])


def _path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def _cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def _complete_bipartite(p, q):
    return Graph.from_edges(p + q, [(i, p + j) for i in range(p) for j in range(q)])


def _hex_prism():
    edges = []
    for i in range(6):
        edges.append((i, (i + 1) % 6))
        edges.append((6 + i, 6 + (i + 1) % 6))
        edges.append((i, i + 6))
    return Graph.from_edges(12, edges)


def _trunc_tetrahedron():
    def corner(t, u):
        others = [x for x in range(4) if x != t]
        return 3 * t + others.index(u)

    edges = []
    for t in range(4):
        edges += [(3 * t, 3 * t + 1), (3 * t, 3 * t + 2), (3 * t + 1, 3 * t + 2)]
        edges += [(corner(t, u), corner(u, t)) for u in range(t + 1, 4)]
    return Graph.from_edges(12, edges)


# kind -> (builder, arity, minimum value per param)
NAMED_FAMILIES = {
    "empty": (_empty, 1, 0),
    "complete": (_complete, 1, 0),
    "path": (_path, 1, 1),
    "cycle": (_cycle, 1, 3),
    "complete_bipartite": (_complete_bipartite, 2, 0),
    "hex_prism": (_hex_prism, 0, 0),
    "trunc_tetrahedron": (_trunc_tetrahedron, 0, 0),
}


def make_named(kind, params=()):
    if kind not in NAMED_FAMILIES:
        raise GraphError(f"unknown graph family '{kind}' (known: {', '.join(NAMED_FAMILIES)})")
    builder, arity, minimum = NAMED_FAMILIES[kind]
    params = list(params)
    if len(params) != arity:
        raise GraphError(f"{kind} takes {arity} parameter(s), got {len(params)}")
    for p in params:
        if not isinstance(p, (int, np.integer)) or p < minimum:
            raise GraphError(f"{kind} needs integer parameters >= {minimum}, got {params}")
    return builder(*(int(p) for p in params))


# --- graph6 ---

def decode_graph6(text):
    if text.startswith(GRAPH6_HEADER):
        text = text[len(GRAPH6_HEADER):]
    if not text:
        raise Graph6Error("empty graph6 string")
    data = [ord(c) - GRAPH6_OFFSET for c in text]
    for pos, value in enumerate(data):
        if not 0 <= value <= 63:
            raise Graph6Error(f"byte {text[pos]!r} at position {pos} outside the printable range 63..126")
    n = data[0]
    if n > GRAPH6_MAX_N:
        raise Graph6Error("multi-byte graph6 headers (n > 62) are not supported")
    pairs = n * (n - 1) // 2
    expected = (pairs + 5) // 6
    payload = data[1:]
    if len(payload) != expected:
        raise Graph6Error(f"graph6 payload for n={n} needs {expected} byte(s), got {len(payload)}")

    bits = 0
    for value in payload:
        bits = (bits << 6) | value
    padding = expected * 6 - pairs
    if bits & ((1 << padding) - 1):
        raise Graph6Error("nonzero padding bits after the adjacency payload")
    bits >>= padding

    # the first pair is the most significant payload bit
    mask = 0
    for k in range(pairs):
        if (bits >> (pairs - 1 - k)) & 1:
            mask |= 1 << k
    return Graph.from_edge_mask(n, mask)


def encode_graph6(g):
    if g.n > GRAPH6_MAX_N:
        raise Graph6Error(f"graph6 encoding supports n <= {GRAPH6_MAX_N}, got {g.n}")
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append((g.rows[i] >> j) & 1)
    bits += [0] * (-len(bits) % 6)
    chars = [chr(g.n + GRAPH6_OFFSET)]
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k:k + 6]:
            value = (value << 1) | b
        chars.append(chr(value + GRAPH6_OFFSET))
    return "".join(chars)


# --- Loop-mask sidecar ---

def format_loop_mask(loops):
    """Hex digit k covers vertices 4k..4k+3; bit b of its value marks vertex 4k+b."""
    digits = []
    mask = loops.mask
    while mask:
        digits.append(format(mask & 0xF, "x"))
        mask >>= 4
    return "".join(digits)


def parse_loop_mask(text, n):
    text = text.strip()
    mask = 0
    for k, ch in enumerate(text):
        try:
            mask |= int(ch, 16) << (4 * k)
        except ValueError:
            raise GraphError(f"invalid hex digit {ch!r} in loop mask '{text}'") from None
    return LoopSet(n, mask)


def parse_record(line):
    """Parse `<graph6>[ : <hexmask>]`; returns None for blank and `#` comment lines."""
    line = line.strip()
    if not line or line.startswith("#"):
        return None
    g6, sep, mask = line.partition(":")
    g = decode_graph6(g6.strip())
    loops = parse_loop_mask(mask, g.n) if sep else LoopSet(g.n)
    return SelfLoopGraph(g, loops)


def format_record(gs):
    return f"{encode_graph6(gs.base)} : {format_loop_mask(gs.loops)}"


def read_corpus(path):
    """Read a sidecar file into a list of (input id, SelfLoopGraph)."""
    records = []
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise GraphError(f"{path}:{lineno}: not valid UTF-8 ({e.reason} at byte {e.start})") from None
            try:
                gs = parse_record(line)
            except GraphError as e:
                raise GraphError(f"{path}:{lineno}: {e}") from None
            if gs is not None:
                records.append((f"line {lineno} ({line.strip()})", gs))
    logger.info("Loaded %d record(s) from %s", len(records), path)
    return records


# --- Constructions ---

def join(g, h):
    g_all = g.vertex_mask
    h_all = h.vertex_mask << g.n
    rows = [row | h_all for row in g.rows] + [(row << g.n) | g_all for row in h.rows]
    return Graph(g.n + h.n, tuple(rows))


def disjoint_copies(g, k):
    if k < 1:
        raise GraphError(f"need at least one copy, got {k}")
    rows = []
    for c in range(k):
        rows += [row << (c * g.n) for row in g.rows]
    return Graph(k * g.n, tuple(rows))


def enumerate_labeled_graphs(n):
    """All 2^(n(n-1)/2) labeled graphs on vertices 0..n-1, in edge-mask order."""
    for mask in range(1 << (n * (n - 1) // 2)):
        yield Graph.from_edge_mask(n, mask)


# --- Structural queries ---

def _component_of(g, v):
    seen = 1 << v
    frontier = seen
    while frontier:
        reach = 0
        for u in _bits(frontier):
            reach |= g.rows[u]
        frontier = reach & ~seen
        seen |= frontier
    return seen


def connected_components(g):
    blocks = []
    remaining = g.vertex_mask
    while remaining:
        v = (remaining & -remaining).bit_length() - 1
        comp = _component_of(g, v)
        blocks.append(tuple(_bits(comp)))
        remaining &= ~comp
    return VertexPartition(g.n, tuple(blocks))


def is_bipartite(g):
    """Two global sides (A, B) with vertex 0 of each component on side A, or None."""
    color = [None] * g.n
    for start in range(g.n):
        if color[start] is not None:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for w in _bits(g.rows[u]):
                if color[w] is None:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return None
    side_a = tuple(v for v in range(g.n) if color[v] == 0)
    side_b = tuple(v for v in range(g.n) if color[v] == 1)
    return VertexPartition(g.n, (side_a, side_b))


def maximal_independent_set(g, component):
    """Greedy ascending scan; component must be a connected component of size >= 2."""
    comp_mask = _as_mask(component)
    if comp_mask.bit_count() < 2:
        raise GraphError("independent-set witness needs a component with at least 2 vertices")
    first = (comp_mask & -comp_mask).bit_length() - 1
    if _component_of(g, first) != comp_mask:
        raise GraphError(f"{sorted(_bits(comp_mask))} is not a connected component")
    chosen = 0
    blocked = 0
    for v in _bits(comp_mask):
        if not (blocked >> v) & 1:
            chosen |= 1 << v
            blocked |= g.rows[v]
    return tuple(_bits(chosen))


def loop_complement(gs):
    return SelfLoopGraph(gs.base, gs.loops.complement())


def describe_corpus(path):
    rows = []
    for input_id, gs in read_corpus(path):
        g = gs.base
        rows.append({
            "id": input_id,
            "n": g.n,
            "edges": g.edge_count,
            "alpha": gs.loops.alpha,
            "components": len(connected_components(g).blocks),
            "bipartite": is_bipartite(g) is not None,
            "triangles": g.triangle_count(),
        })
    return pd.DataFrame(rows)


def main():
    parser = argparse.ArgumentParser(description="Describe a graph6 (+ loop mask) corpus")
    parser.add_argument("--input", required=True, help="Corpus file, one `graph6[ : hexmask]` per line")
    args = parser.parse_args()
    setup_logging()
    print(describe_corpus(args.input).to_string(index=False))


if __name__ == "__main__":
    main()
