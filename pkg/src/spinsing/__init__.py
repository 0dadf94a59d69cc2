"""Exact classification of boundary strata of the moduli space of spin curves."""

from __future__ import annotations

from .automorphism import (
    AutomorphismDatum,
    ComponentType,
    Elliptic,
    RationalOrder,
    SpinAutomorphismDatum,
    automatic_lifts,
    eta_datum,
    identity_datum,
    inessential_action,
    is_eta2,
    is_quasireflection,
    lift_action,
    lifting_count,
    make_datum,
    make_spin_datum,
    prill_quotient,
    quasireflection_generators,
    resolve_liftable,
    t_image,
    tau_action,
)
from .errors import *  # noqa: F403
from .graph import (
    DualGraph,
    Edge,
    JClass,
    Tag,
    Vertex,
    VertexDecoration,
    bridges,
    components,
    contract_edges,
    cycle_rank,
    even_subsets,
    genus,
    graph_from_genera,
    is_even,
    is_tree_like,
    validate_graph,
)
from .monomial import (
    CoordinateSystem,
    Level,
    MonomialAction,
    RootOfUnity,
    eigen_exponents,
    group_closure,
)
from .reports import AnalysisReport, AnalysisRequest, parse_request, run_analysis, serialize_request
from .singularity import (
    StratumClassification,
    Verdict,
    block_contribution,
    canonical_oracle,
    classify_stratum,
    component_weight,
    pi_sing_image_test,
    rst_min,
    rst_sum,
    singularity_reduce,
    smoothness_criterion,
)
from .spin import (
    EdgeClass,
    SpinStructureLabel,
    SpinSupport,
    ThetaLabel,
    construct_smooth_support,
    enumerate_supports,
    fiber_degree_audit,
    gluing_count,
    make_labels,
    make_support,
    sigma_graph,
)

__version__ = "0.1.0"
