"""Isometric embeddability of finite graphs into constant-curvature spaces."""

__version__ = "0.1.0"

from .graph_core import (
    DistanceMatrix,
    Graph,
    Graph6ParseError,
    NotConnectedError,
    ShapeFlags,
    classify_shape,
    complement_is_partial_matching,
    construct_family,
    distance_matrix,
    parse_graph6,
    write_graph6,
)
from .model_spaces import (
    ModelSpace,
    euclidean,
    geodesic_distance,
    has_dual_points_at,
    hyperbolic,
    random_point,
    sphere,
    validate_point,
)
from .eigen import symmetric_eigendecomposition
from .oracle import (
    EmbedCertificate,
    Embedding,
    euclidean_feasibility,
    hyperbolic_feasibility,
    procrustes_align,
    sphere_feasibility,
    stress_minimize,
    verify_isometric,
)
from .classifier import (
    DUAL_RADIUS,
    TETRAHEDRON_RADIUS,
    Decision,
    decide_hadamard,
    decide_sphere,
    necessary_form,
)
from .harness import (
    AuditReport,
    audit_hadamard,
    audit_sphere,
    enumerate_connected_graphs,
    unexpected_discrepancies,
    write_report,
)
