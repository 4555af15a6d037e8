from graphrl.graphs.formats import (
    BITMASK_WIDTH,
    FlattenedOrdering,
    GraphFormat,
    GraphKind,
    clockwise_index,
    clockwise_slot,
    flattened_length,
    position_table,
    row_major_index,
    row_major_slot,
    slot_arrays,
)
from graphrl.graphs.graph import Graph, GraphFormatError
from graphrl.graphs.families import (
    FAMILIES,
    almost_complete_graph,
    book_graph,
    complete_bipartite_graph,
    complete_graph,
    complete_kpartite_graph,
    cycle_graph,
    empty_graph,
    friendship_graph,
    join_graph,
    monochromatic_graph,
    named_graph,
    path_graph,
    star_graph,
    wheel_graph,
)
from graphrl.graphs.io import (
    ADJACENCY_BLOCK,
    GraphParseError,
    dumps_graphs,
    format_line,
    iter_graph_file,
    parse_line,
    read_graphs,
    write_graphs,
)


def to_format(graph: Graph, fmt: GraphFormat):
    return graph.to_format(fmt)


def stack(graphs) -> Graph:
    return Graph.stack(graphs)


def select(batch: Graph, index: int) -> Graph:
    return batch.select(index)


def is_fully_colored(graph: Graph):
    return graph.is_fully_colored
