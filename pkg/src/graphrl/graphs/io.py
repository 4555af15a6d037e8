"""Plain-text graph files.

Line format: one graph per line, space-separated decimal tokens
``k is_directed allow_loops n`` followed by the values of the chosen format's
array in C order.  With the bitmask-out format this is the solution-file
format used by the command-line tools.  Sliced formats are written reduced
exactly when the graph is fully colored; readers infer this from the token
count.

Block format (``adjacency-block``): the same header line, then ``n`` rows of
the color adjacency matrix; graphs are separated by blank lines.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from graphrl.graphs.formats import GraphFormat, GraphKind, flattened_length
from graphrl.graphs.graph import Graph, GraphFormatError

ADJACENCY_BLOCK = "adjacency-block"


class GraphParseError(ValueError):
    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        prefix = f"line {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message)


def _header(graph: Graph) -> list[str]:
    return [str(graph.edge_colors), str(int(graph.is_directed)), str(int(graph.allow_loops)),
            str(graph.graph_order)]


def format_line(graph: Graph, fmt: GraphFormat = GraphFormat.BITMASK_OUT) -> str:
    if graph.batch_size is not None:
        raise ValueError("format_line writes a single graph")
    values = graph.to_format(fmt).ravel()
    return " ".join(_header(graph) + [str(int(x)) for x in values])


def _parse_header(tokens: list[str]) -> tuple[int, GraphKind, int]:
    if len(tokens) < 4:
        raise GraphParseError("expected header tokens: k is_directed allow_loops n")
    try:
        k, directed, loops, n = (int(t) for t in tokens[:4])
    except ValueError:
        raise GraphParseError("header tokens must be integers") from None
    if directed not in (0, 1) or loops not in (0, 1):
        raise GraphParseError("is_directed and allow_loops must be 0 or 1")
    if k < 2 or n < 1:
        raise GraphParseError(f"invalid header k={k}, n={n}")
    return k, GraphKind(bool(directed), bool(loops)), n


def _shape_for(fmt: GraphFormat, k: int, kind: GraphKind, n: int, count: int) -> tuple[int, ...]:
    ell = flattened_length(n, kind)
    if fmt is GraphFormat.ADJACENCY_MATRIX_COLORS:
        shape = (n, n)
    elif fmt.ordering is not None and not fmt.is_binary:
        shape = (ell,)
    else:
        per_slice = {GraphFormat.BITMASK_OUT: n, GraphFormat.BITMASK_IN: n,
                     GraphFormat.ADJACENCY_MATRIX_BINARY: n * n}.get(fmt, ell)
        tail = (n,) if fmt.is_bitmask else (n, n) if fmt is GraphFormat.ADJACENCY_MATRIX_BINARY else (ell,)
        if per_slice == 0:
            return (k - 1,) + tail
        if count % per_slice:
            raise GraphParseError(f"token count {count} is not a multiple of {per_slice}")
        shape = (count // per_slice,) + tail
    if int(np.prod(shape)) != count:
        raise GraphParseError(f"expected {int(np.prod(shape))} values, got {count}")
    return shape


def parse_line(line: str, fmt: GraphFormat = GraphFormat.BITMASK_OUT) -> Graph:
    tokens = line.split()
    k, kind, n = _parse_header(tokens)
    try:
        values = [int(t) for t in tokens[4:]]
    except ValueError:
        raise GraphParseError("value tokens must be integers") from None
    shape = _shape_for(fmt, k, kind, n, len(values))
    dtype = np.uint64 if fmt.is_bitmask else np.int64
    if fmt.is_bitmask and any(v < 0 or v >= 2 ** 64 for v in values):
        raise GraphParseError("bitmask values must fit in 64 unsigned bits")
    array = np.array(values, dtype=dtype).reshape(shape)
    try:
        return Graph(k, kind.is_directed, kind.allow_loops, {fmt: array})
    except GraphFormatError as exc:
        raise GraphParseError(str(exc)) from None


def format_block(graph: Graph) -> str:
    rows = [" ".join(str(int(x)) for x in row) for row in graph.adjacency_matrix_colors]
    return "\n".join([" ".join(_header(graph))] + rows)


def parse_block(lines: list[str]) -> Graph:
    k, kind, n = _parse_header(lines[0].split())
    if len(lines) != n + 1:
        raise GraphParseError(f"expected {n} matrix rows, got {len(lines) - 1}")
    try:
        matrix = np.array([[int(t) for t in row.split()] for row in lines[1:]], dtype=np.int64)
    except ValueError:
        raise GraphParseError("matrix rows must be integers of equal length") from None
    if matrix.shape != (n, n):
        raise GraphParseError(f"expected a {n}x{n} matrix")
    try:
        return Graph(k, kind.is_directed, kind.allow_loops, adjacency_matrix_colors=matrix)
    except GraphFormatError as exc:
        raise GraphParseError(str(exc)) from None


def iter_graph_file(path, fmt: GraphFormat | str = GraphFormat.BITMASK_OUT) -> Iterator[tuple[int, Graph | GraphParseError]]:
    """Yield ``(line_number, graph or parse error)`` for every record in a file.

    Errors are yielded rather than raised so callers can keep going.
    """
    text = Path(path).read_text().splitlines()
    if fmt == ADJACENCY_BLOCK:
        block: list[str] = []
        start = 0
        for number, line in enumerate(text + [""], start=1):
            if line.strip():
                if not block:
                    start = number
                block.append(line)
                continue
            if block:
                try:
                    yield start, parse_block(block)
                except GraphParseError as exc:
                    yield start, GraphParseError(str(exc), start)
                block = []
        return
    fmt = GraphFormat(fmt)
    for number, line in enumerate(text, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            yield number, parse_line(line, fmt)
        except GraphParseError as exc:
            yield number, GraphParseError(str(exc), number)


def read_graphs(path, fmt: GraphFormat | str = GraphFormat.BITMASK_OUT) -> list[Graph]:
    graphs = []
    for _, item in iter_graph_file(path, fmt):
        if isinstance(item, Exception):
            raise item
        graphs.append(item)
    return graphs


def dumps_graphs(graphs: Iterable[Graph], fmt: GraphFormat | str = GraphFormat.BITMASK_OUT) -> str:
    singles = []
    for g in graphs:
        singles.extend(g if g.batch_size is not None else [g])
    if fmt == ADJACENCY_BLOCK:
        return "\n\n".join(format_block(g) for g in singles) + ("\n" if singles else "")
    fmt = GraphFormat(fmt)
    return "".join(format_line(g, fmt) + "\n" for g in singles)


def write_graphs(path, graphs: Iterable[Graph], fmt: GraphFormat | str = GraphFormat.BITMASK_OUT) -> None:
    Path(path).write_text(dumps_graphs(graphs, fmt))


def append_graph(path, graph: Graph, fmt: GraphFormat = GraphFormat.BITMASK_OUT) -> None:
    with open(path, "a") as fh:
        fh.write(format_line(graph, fmt) + "\n")
