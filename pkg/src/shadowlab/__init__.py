"""Exact computation of coordinate shadows of polygonal closed curves.

Shadows are classified by building their arrangement complex with rational
arithmetic. The surrounding machinery (circle-map degrees, fiber products of
graphs, composition of shadow relations) is available for experiments.
"""

from .curve import (
    CurveError,
    DistinctCoordinate,
    GeneralPositionReport,
    PerturbationError,
    PLClosedCurve,
    format_rational,
    parse_rational,
    perturb_general_position,
    project,
    validate_simple,
)
from .complex import (
    ImageComplex,
    PathParameterization,
    PathBoundViolation,
    Topology,
    TopologyClass,
    build_image_complex,
    classify,
    path_parameterization,
    shadow_class,
    shadow_classes,
    shadow_complex,
)
from .circle_maps import (
    PLCircleMap,
    TorusCurve,
    compose,
    degree,
    diagonal_intersections,
    fixed_points,
    signed_crossings,
    signed_diagonal_crossings,
    torus_degree,
)
from .fiber import (
    DegreeReport,
    FiberProduct,
    FiberProductError,
    MappedGraph,
    Target,
    cycle_decomposition,
    fiber_product,
    vertex_degree_check,
)
from .generators import (
    GeneratorExhausted,
    GeneratorKind,
    GeneratorSpec,
    gen_planar_circle,
    gen_random_knot,
    gen_tree_shadow_curve,
    generate,
)
from .relations import (
    ComposedCurve,
    CompositionError,
    FixedPointCertificate,
    OddDegreeError,
    NotASimplePath,
    NotTwoToOne,
    RelationCurve,
    ShadowSplit,
    TripleFixedPoint,
    UnraveledCurve,
    WitnessReport,
    build_relation_curve,
    compose_relation_curves,
    endpoint_witness_check,
    find_triple_fixed_point,
    flip_map_demo,
    relation_fixed_point,
    split_top_bottom,
    unravel,
)

__version__ = "0.1.0"
