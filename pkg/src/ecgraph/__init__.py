"""Edge-colored directed graphs, their K-theory, and a rewriting engine for
the Cuntz-Krieger relations."""

from .abelian import FgAbelianGroup, IntMatrix, PresentedGroup, cokernel, kernel, smith_normal_form
from .analyzers import (
    Verdict,
    is_row_finite,
    monochrome_simple,
    nonexact_witnesses,
    nuclearity_heuristic,
    simplicity_necessary,
)
from .graph import (
    Edge,
    EdgeColoredGraph,
    GraphError,
    canonical_recoloring,
    coloring_number,
    colorings_equivalent,
    free_product,
    monochrome_subgraph,
    normalize_colors,
    reverse_edges,
    validate,
)
from .ktheory import KPair, k_edge_colored, k_one_colored
from .staralg import (
    Equality,
    GeneratorMap,
    StarPolynomial,
    VerifyReport,
    canonical_family,
    equal,
    infer_graph,
    reduce,
    verify_ck_family,
    verify_homomorphism,
    verify_mutually_inverse,
)
from .syntax import ParseFailure, emit_genmap, emit_graph, parse_genmap, parse_graph
