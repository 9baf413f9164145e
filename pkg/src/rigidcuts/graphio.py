"""Graph serialization: graph6 and a plain edge-list text format.

Edge-list format::

    n m
    u v
    ...

with edges written ``u < v`` in lexicographic order.  Both formats round-trip
bit-exactly through :func:`read_graph` / :func:`write_graph`.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

import networkx as nx

from rigidcuts.errors import ParameterError
from rigidcuts.graph import Graph


def to_graph6(G: Graph) -> str:
    nxg = nx.Graph()
    nxg.add_nodes_from(range(G.n))
    nxg.add_edges_from(G.edges())
    return nx.to_graph6_bytes(nxg, header=False).decode("ascii").strip()


def from_graph6(text: str) -> Graph:
    line = text.strip()
    if line.startswith(">>graph6<<"):
        line = line[len(">>graph6<<"):]
    try:
        nxg = nx.from_graph6_bytes(line.encode("ascii"))
    except (ValueError, nx.NetworkXError) as exc:
        raise ParameterError(f"invalid graph6 string {line!r}: {exc}") from None
    return Graph.from_edges(nxg.number_of_nodes(), nxg.edges())


def to_edge_list(G: Graph) -> str:
    lines = [f"{G.n} {G.m}"] + [f"{u} {v}" for u, v in G.edges()]
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise ParameterError("edge list must start with an 'n m' header")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError:
        raise ParameterError("edge list entries must be integer pairs") from None
    if len(edges) != m or len(set(map(frozenset, edges))) != m:
        raise ParameterError(f"header declares {m} edges, found {len(edges)} distinct lines")
    return Graph.from_edges(n, edges)


def detect_format(text: str) -> str:
    first = next((ln for ln in text.splitlines() if ln.strip()), "")
    return "edgelist" if len(first.split()) == 2 else "graph6"


def parse_graph(text: str, fmt: str | None = None) -> Graph:
    fmt = fmt or detect_format(text)
    if fmt == "graph6":
        return from_graph6(text)
    if fmt == "edgelist":
        return from_edge_list(text)
    raise ParameterError(f"unknown graph format {fmt!r}")


def format_graph(G: Graph, fmt: str = "graph6") -> str:
    if fmt == "graph6":
        return to_graph6(G) + "\n"
    if fmt == "edgelist":
        return to_edge_list(G)
    raise ParameterError(f"unknown graph format {fmt!r}")


def read_graph(path: str | Path, fmt: str | None = None) -> Graph:
    path = Path(path)
    if fmt is None and path.suffix in (".g6", ".graph6"):
        fmt = "graph6"
    elif fmt is None and path.suffix in (".txt", ".edges", ".el"):
        fmt = "edgelist"
    return parse_graph(path.read_text(), fmt)


def write_graph(G: Graph, path: str | Path, fmt: str = "graph6") -> None:
    Path(path).write_text(format_graph(G, fmt))


def read_graph6_list(text: str) -> list[Graph]:
    return [from_graph6(ln) for ln in text.splitlines() if ln.strip()]


def write_graph6_list(graphs: Iterable[Graph]) -> str:
    return "".join(to_graph6(G) + "\n" for G in graphs)
