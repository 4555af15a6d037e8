from graphrl.graphs import Graph, GraphFormat, FlattenedOrdering, GraphKind
