"""Keyword co-occurrence networks: construction, modularity-based multi-level
community detection, deterministic force-directed layout, and export.

Edge weights count the documents whose keyword set contains both endpoints;
keywords are deduplicated within a document first, so repetition cannot
inflate weights.  All randomized steps (community detection sweep order,
layout initialization) are driven by an explicit seed, and equal seeds give
bit-identical results.
"""
from __future__ import annotations

import json
import math
import random
import xml.etree.ElementTree as ET
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping
from xml.sax.saxutils import quoteattr

import numpy as np

from .corpus import Corpus

SCOPE_SEED = "seed"
SCOPE_NEIGHBORHOOD = "neighborhood"
SCOPES = (SCOPE_SEED, SCOPE_NEIGHBORHOOD)

# Origin classes included per scope; "external" papers are never counted.
_SCOPE_ORIGINS = {
    SCOPE_SEED: frozenset({"seed"}),
    SCOPE_NEIGHBORHOOD: frozenset({"seed", "cited", "citing"}),
}

# Minimum modularity improvement for a local move to be worth taking.
_GAIN_EPS = 1e-9

LayoutPositions = dict[str, tuple[float, float]]


@dataclass(frozen=True)
class KeywordGraph:
    """Undirected weighted simple graph over keyword strings.

    ``nodes`` maps each keyword to its document frequency; ``edges`` maps
    canonical (a < b) pairs to positive co-occurrence weights.
    """

    nodes: Mapping[str, int]
    edges: Mapping[tuple[str, str], int]

    def __post_init__(self) -> None:
        for (a, b), w in self.edges.items():
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if not a < b:
                raise ValueError(f"edge not canonical: ({a!r}, {b!r})")
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge ({a!r}, {b!r}) has an endpoint outside the node set")
            if w < 1:
                raise ValueError(f"edge weight must be >= 1, got {w} on ({a!r}, {b!r})")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def total_weight(self) -> float:
        return float(sum(self.edges.values()))

    def adjacency(self) -> dict[str, dict[str, float]]:
        adj: dict[str, dict[str, float]] = {u: {} for u in self.nodes}
        for (a, b), w in self.edges.items():
            adj[a][b] = float(w)
            adj[b][a] = float(w)
        return adj


def build_cooccurrence(
    corpus: Corpus,
    scope: str = SCOPE_SEED,
    min_weight: int = 1,
    include_isolated: bool = False,
) -> KeywordGraph:
    """Count, per unordered keyword pair, the documents carrying both.

    Edges lighter than ``min_weight`` are dropped.  Keywords left without
    edges are kept as isolated nodes only when ``include_isolated`` is set.
    """
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}, got {scope!r}")
    if min_weight < 1:
        raise ValueError(f"min_weight must be >= 1, got {min_weight}")
    origins = _SCOPE_ORIGINS[scope]
    freq: Counter[str] = Counter()
    pair: Counter[tuple[str, str]] = Counter()
    for pid in sorted(corpus.papers):
        rec = corpus.papers[pid]
        if rec.origin not in origins:
            continue
        kws = sorted(set(rec.keywords))
        freq.update(kws)
        for a, b in combinations(kws, 2):
            pair[(a, b)] += 1
    edges = {p: w for p, w in pair.items() if w >= min_weight}
    if include_isolated:
        node_names = set(freq)
    else:
        node_names = {kw for edge in edges for kw in edge}
    return KeywordGraph(
        nodes={kw: freq[kw] for kw in sorted(node_names)},
        edges=edges,
    )


def modularity(graph: KeywordGraph, partition: Mapping[str, int]) -> float:
    """Newman modularity Q of a node partition, with weighted degrees.

    Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j).  Zero for the
    all-in-one partition; undefined (an error) on an edgeless graph.
    """
    missing = [u for u in graph.nodes if u not in partition]
    if missing:
        raise ValueError(f"partition does not cover node {missing[0]!r}")
    m = graph.total_weight()
    if m == 0:
        raise ValueError("modularity is undefined for an edgeless graph")
    degree: dict[str, float] = {u: 0.0 for u in graph.nodes}
    internal: dict[int, float] = defaultdict(float)
    for (a, b), w in graph.edges.items():
        degree[a] += w
        degree[b] += w
        if partition[a] == partition[b]:
            internal[partition[a]] += w
    comm_degree: dict[int, float] = defaultdict(float)
    for u, k in degree.items():
        comm_degree[partition[u]] += k
    return sum(
        internal[c] / m - (comm_degree[c] / (2.0 * m)) ** 2
        for c in comm_degree
    )


@dataclass(frozen=True)
class CommunityHierarchy:
    """Nested partitions from fine (level 0) to coarse (level L).

    Each level maps every original node to a community id; level l+1 merges
    whole level-l communities.  ``modularity`` holds the per-level quality
    at the detection resolution (plain Q at resolution 1.0).
    """

    levels: tuple[Mapping[str, int], ...]
    modularity: tuple[float, ...]
    resolution: float
    seed: int

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    def community_counts(self) -> tuple[int, ...]:
        return tuple(len(set(level.values())) for level in self.levels)


def cut_level(hierarchy: CommunityHierarchy, level: int) -> dict[str, int]:
    """Partition at the requested granularity, clamped to the coarsest level."""
    if level < 0:
        raise ValueError(f"level must be >= 0, got {level}")
    return dict(hierarchy.levels[min(level, hierarchy.max_level)])


def _renumber(partition: dict[str, int], node_order: list[str]) -> dict[str, int]:
    """Relabel community ids 0..C-1 in order of first appearance over sorted nodes."""
    relabel: dict[int, int] = {}
    for u in node_order:
        c = partition[u]
        if c not in relabel:
            relabel[c] = len(relabel)
    return {u: relabel[partition[u]] for u in node_order}


def _quality(
    adj: Mapping[str, Mapping[str, float]],
    m: float,
    partition: Mapping[str, int],
    resolution: float,
) -> float:
    """Resolution-scaled modularity over an adjacency with self-loops allowed.

    Convention: a self-loop of weight w adds w to m and 2w to its node's
    degree.  Defined as 0 for an edgeless graph (used for trivial hierarchies).
    """
    if m == 0:
        return 0.0
    internal: dict[int, float] = defaultdict(float)
    comm_degree: dict[int, float] = defaultdict(float)
    for u, nbrs in adj.items():
        cu = partition[u]
        for v, w in nbrs.items():
            if u == v:
                internal[cu] += w
                comm_degree[cu] += 2.0 * w
            else:
                comm_degree[cu] += w
                if cu == partition[v] and u < v:
                    internal[cu] += w
    return sum(
        internal[c] / m - resolution * (comm_degree[c] / (2.0 * m)) ** 2
        for c in comm_degree
    )


def _local_moves(
    nodes: list[str],
    adj: Mapping[str, Mapping[str, float]],
    m: float,
    resolution: float,
    rng: random.Random,
) -> tuple[dict[str, int], bool]:
    """One Louvain phase: sweep nodes (shuffled each pass), greedily moving
    each into the neighboring community with the best modularity gain.

    Among equal-gain candidates the lowest community id wins; a move happens
    only when it beats staying put by more than the gain threshold.
    """
    degree: dict[str, float] = {}
    for u in nodes:
        k = 0.0
        for v, w in adj[u].items():
            k += 2.0 * w if v == u else w
        degree[u] = k
    label = {u: i for i, u in enumerate(nodes)}
    tot = {i: degree[u] for i, u in enumerate(nodes)}
    two_m_sq = 2.0 * m * m
    improved = False
    while True:
        moved = 0
        order = list(nodes)
        rng.shuffle(order)
        for u in order:
            cu = label[u]
            ku = degree[u]
            tot[cu] -= ku
            links: dict[int, float] = defaultdict(float)
            for v, w in adj[u].items():
                if v != u:
                    links[label[v]] += w
            stay_gain = links.get(cu, 0.0) / m - resolution * tot[cu] * ku / two_m_sq
            best_c, best_gain = cu, stay_gain
            for c in sorted(links):
                if c == cu:
                    continue
                gain = links[c] / m - resolution * tot[c] * ku / two_m_sq
                if gain > best_gain:
                    best_c, best_gain = c, gain
            if best_c != cu and best_gain - stay_gain > _GAIN_EPS:
                label[u] = best_c
                moved += 1
                improved = True
            else:
                best_c = cu
                label[u] = cu
            tot[best_c] += ku
        if moved == 0:
            break
    return label, improved


def _aggregate(
    adj: Mapping[str, Mapping[str, float]],
    label: Mapping[str, int],
) -> dict[int, dict[int, float]]:
    """Community-level graph: inter-community weights summed, intra-community
    weight (including existing self-loops) folded into self-loops."""
    new_adj: dict[int, dict[int, float]] = defaultdict(lambda: defaultdict(float))
    for u, nbrs in adj.items():
        cu = label[u]
        for v, w in nbrs.items():
            if v == u:
                new_adj[cu][cu] += w
            elif u < v:
                cv = label[v]
                if cu == cv:
                    new_adj[cu][cu] += w
                else:
                    new_adj[cu][cv] += w
                    new_adj[cv][cu] += w
    return {c: dict(nbrs) for c, nbrs in new_adj.items()}


def detect_communities(
    graph: KeywordGraph,
    seed: int,
    resolution: float = 1.0,
) -> CommunityHierarchy:
    """Louvain-style multi-level community detection.

    Each aggregation round contributes one hierarchy level; per-level quality
    is evaluated on the original graph and is non-decreasing by construction.
    """
    if not graph.nodes:
        raise ValueError("cannot detect communities on an empty graph")
    nodes0 = sorted(graph.nodes)
    adj0 = graph.adjacency()
    m = graph.total_weight()
    rng = random.Random(seed)
    if m == 0:
        singleton = {u: i for i, u in enumerate(nodes0)}
        return CommunityHierarchy(
            levels=(singleton,), modularity=(0.0,), resolution=resolution, seed=seed,
        )
    levels: list[dict[str, int]] = []
    quals: list[float] = []
    mapping = {u: u for u in nodes0}  # original node -> current supernode
    cur_nodes: list = nodes0
    cur_adj: Mapping = adj0
    while True:
        label, improved = _local_moves(cur_nodes, cur_adj, m, resolution, rng)
        if levels and not improved:
            break
        projected = _renumber({u: label[mapping[u]] for u in nodes0}, nodes0)
        levels.append(projected)
        quals.append(_quality(adj0, m, projected, resolution))
        if not improved:
            break
        cur_adj = _aggregate(cur_adj, label)
        mapping = {u: label[mapping[u]] for u in nodes0}
        cur_nodes = sorted(cur_adj)
    return CommunityHierarchy(
        levels=tuple(levels),
        modularity=tuple(quals),
        resolution=resolution,
        seed=seed,
    )


def layout(graph: KeywordGraph, seed: int, iterations: int = 300) -> LayoutPositions:
    """Fruchterman-Reingold force-directed layout, rescaled to [0, 1]^2.

    Positions start from seeded uniform placement and cool linearly to zero;
    identical (graph, seed, iterations) give bit-identical coordinates.
    """
    if not graph.nodes:
        raise ValueError("cannot lay out an empty graph")
    nodes = sorted(graph.nodes)
    n = len(nodes)
    rng = np.random.default_rng(seed)
    pos = rng.uniform(size=(n, 2))
    if n == 1:
        return {nodes[0]: (0.5, 0.5)}
    index = {u: i for i, u in enumerate(nodes)}
    if graph.edges:
        ei = np.array([index[a] for a, _ in graph.edges], dtype=np.intp)
        ej = np.array([index[b] for _, b in graph.edges], dtype=np.intp)
    else:
        ei = ej = np.empty(0, dtype=np.intp)
    k = math.sqrt(1.0 / n)
    t0 = 0.1
    for it in range(iterations):
        t = t0 * (1.0 - it / iterations)
        delta = pos[:, np.newaxis, :] - pos[np.newaxis, :, :]
        dist = np.sqrt((delta * delta).sum(axis=-1))
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-9)
        # repulsion k^2/d between every pair
        coeff = k * k / (dist * dist)
        np.fill_diagonal(coeff, 0.0)
        disp = (delta * coeff[:, :, np.newaxis]).sum(axis=1)
        # attraction d^2/k along each edge
        if len(ei):
            dvec = pos[ei] - pos[ej]
            d = np.sqrt((dvec * dvec).sum(axis=-1))
            d = np.maximum(d, 1e-9)
            pull = dvec * (d / k)[:, np.newaxis]
            np.subtract.at(disp, ei, pull)
            np.add.at(disp, ej, pull)
        length = np.sqrt((disp * disp).sum(axis=-1))
        length = np.maximum(length, 1e-9)
        pos += disp / length[:, np.newaxis] * np.minimum(length, t)[:, np.newaxis]
    lo = pos.min(axis=0)
    hi = pos.max(axis=0)
    span = hi - lo
    out: LayoutPositions = {}
    for axis in range(2):
        if span[axis] <= 0:
            pos[:, axis] = 0.5
        else:
            pos[:, axis] = (pos[:, axis] - lo[axis]) / span[axis]
    for u, i in index.items():
        out[u] = (float(pos[i, 0]), float(pos[i, 1]))
    return out


FORMAT_JSON = "json"
FORMAT_GRAPHML = "graphml"
FORMATS = (FORMAT_JSON, FORMAT_GRAPHML)


def _check_coverage(graph: KeywordGraph, partition, positions) -> None:
    for u in graph.nodes:
        if u not in partition:
            raise ValueError(f"partition does not cover node {u!r}")
        if u not in positions:
            raise ValueError(f"positions do not cover node {u!r}")


def export_graph(
    graph: KeywordGraph,
    partition: Mapping[str, int],
    positions: Mapping[str, tuple[float, float]],
    format: str = FORMAT_JSON,
) -> str:
    """Serialize graph + community + layout with deterministic byte output.

    Nodes are sorted by keyword and edges by endpoints, so exporting the
    same analysis twice gives identical documents.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    _check_coverage(graph, partition, positions)
    if format == FORMAT_JSON:
        return _export_json(graph, partition, positions)
    return _export_graphml(graph, partition, positions)


def graph_document(
    graph: KeywordGraph,
    partition: Mapping[str, int],
    positions: Mapping[str, tuple[float, float]],
) -> dict:
    """Plain-data form of a graph with communities and coordinates, nodes and
    edges in sorted order."""
    _check_coverage(graph, partition, positions)
    return {
        "nodes": [
            {
                "id": u,
                "frequency": graph.nodes[u],
                "community": partition[u],
                "x": positions[u][0],
                "y": positions[u][1],
            }
            for u in sorted(graph.nodes)
        ],
        "edges": [
            {"source": a, "target": b, "weight": w}
            for (a, b), w in sorted(graph.edges.items())
        ],
    }


def _export_json(graph, partition, positions) -> str:
    doc = graph_document(graph, partition, positions)
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

_GRAPHML_KEYS = (
    ("frequency", "node", "int"),
    ("community", "node", "int"),
    ("x", "node", "double"),
    ("y", "node", "double"),
    ("weight", "edge", "int"),
)


def _fmt_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _export_graphml(graph, partition, positions) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<graphml xmlns="{_GRAPHML_NS}">',
    ]
    for key_id, domain, typ in _GRAPHML_KEYS:
        lines.append(
            f'  <key id="{key_id}" for="{domain}" attr.name="{key_id}" attr.type="{typ}"/>'
        )
    lines.append('  <graph id="keywords" edgedefault="undirected">')
    for u in sorted(graph.nodes):
        x, y = positions[u]
        lines.append(f"    <node id={quoteattr(u)}>")
        lines.append(f'      <data key="frequency">{graph.nodes[u]}</data>')
        lines.append(f'      <data key="community">{partition[u]}</data>')
        lines.append(f'      <data key="x">{_fmt_value(float(x))}</data>')
        lines.append(f'      <data key="y">{_fmt_value(float(y))}</data>')
        lines.append("    </node>")
    for (a, b), w in sorted(graph.edges.items()):
        lines.append(f"    <edge source={quoteattr(a)} target={quoteattr(b)}>")
        lines.append(f'      <data key="weight">{w}</data>')
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def parse_graph(
    document: str, format: str = FORMAT_JSON
) -> tuple[KeywordGraph, dict[str, int], LayoutPositions]:
    """Inverse of export_graph; export(parse(doc)) reproduces doc byte-for-byte."""
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    if format == FORMAT_JSON:
        doc = json.loads(document)
        nodes = {nd["id"]: int(nd["frequency"]) for nd in doc["nodes"]}
        partition = {nd["id"]: int(nd["community"]) for nd in doc["nodes"]}
        positions = {nd["id"]: (float(nd["x"]), float(nd["y"])) for nd in doc["nodes"]}
        edges = {
            (e["source"], e["target"]): int(e["weight"]) for e in doc["edges"]
        }
        return KeywordGraph(nodes=nodes, edges=edges), partition, positions
    root = ET.fromstring(document)
    ns = {"g": _GRAPHML_NS}
    nodes: dict[str, int] = {}
    partition = {}
    positions = {}
    edges = {}
    for node_el in root.findall(".//g:node", ns):
        data = {d.get("key"): d.text for d in node_el.findall("g:data", ns)}
        uid = node_el.get("id")
        nodes[uid] = int(data["frequency"])
        partition[uid] = int(data["community"])
        positions[uid] = (float(data["x"]), float(data["y"]))
    for edge_el in root.findall(".//g:edge", ns):
        data = {d.get("key"): d.text for d in edge_el.findall("g:data", ns)}
        edges[(edge_el.get("source"), edge_el.get("target"))] = int(data["weight"])
    return KeywordGraph(nodes=nodes, edges=edges), partition, positions
