"""Fractured-graph toolkit for exact and mod-2 subgraph counting.

The package provides:

- immutable graphs, colourings, and constructions (``graphs``),
- exhaustive counting oracles for homomorphisms, embeddings, subgraphs, and
  edge-colourful subgraphs (``counting``),
- fractures, fractured graphs, the fracture lattice with its Mobius function,
  and homomorphism-basis coefficients (``fractures``),
- parity reduction engines: linear-combination term extraction, colour
  removal by inclusion-exclusion, and the path-parity reduction
  (``reductions``),
- structural tree invariants and gadget search (``trees``),
- hardness-gadget constructions with brute-force identity verification
  (``gadgets``),
- a command-line front end (``cli``).
"""

from .counting import (
    CountResult,
    automorphism_count,
    count_colorful_subs,
    count_embs,
    count_homs,
    count_subs,
)
from .fractures import (
    Fracture,
    FracturedGraph,
    apply_fracture,
    colsub_coefficients,
    count_odd_fractures,
    enumerate_fractures,
    fracture_leq,
    fracture_mobius,
    is_odd_fracture,
    singleton_fracture,
    top_fracture,
)
from .graphs import (
    ColoredGraph,
    ColoringError,
    EdgeColoring,
    Graph,
    VertexColoring,
    colored,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    disjoint_union,
    fibered_product,
    graph_from_edges,
    is_isomorphic,
    line_graph,
    p2_packing,
    path_graph,
    star_graph,
    subdivide,
    triangle_packing,
)

__version__ = "0.1.0"
