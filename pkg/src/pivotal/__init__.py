"""Pivotal decompositions of operations on small finite domains.

A pivotal operation ``P`` is ternary with ``P(x, y, y) = y``.  An operation
``f`` is ``P``-decomposable when ``f(x) = P(x_i, f(x_i^1), f(x_i^0))`` for
every position ``i``.  The package decides that property, checks the
equations that control it, expands normal forms, computes bounded clone
fragments and classifies every pivotal operation on two and three elements.
"""

import json
from importlib import resources

from .census import (
    FLAGS,
    CensusSummary,
    ClassificationRecord,
    DomainTooLarge,
    boolean_census,
    candidate_count,
    candidate_id,
    candidate_tables,
    classify,
    enumerate_pivotal,
    flag_arrays,
    monotone_fragment,
    ternary_census,
)
from .clones import (
    Budget,
    CloneCertificate,
    ClosureReport,
    Fragment,
    OpSet,
    check_clone_characterization,
    check_clone_characterization_restated,
    check_clone_sufficiency,
    check_composition_preservation,
    check_derived_equations,
    check_generation,
    check_projection_criterion,
    check_symmetric_characterization,
    clone_certificate,
    generate_fragment,
    generated_fragment,
    is_closed_under_composition,
    lambda_fragment,
    lambda_fragment_upto,
)
from .decomposition import (
    BudgetError,
    Leaf,
    MembershipReport,
    Node,
    TheoremReport,
    build_normal_form,
    check_cyclic_symmetry,
    check_symmetry_criterion,
    decomposable_mask,
    decomposition_terms,
    format_nf,
    is_pi_decomposable,
    is_self_decomposable,
    nf_membership_oracle,
    nf_to_operation,
    parse_nf,
    simplify,
)
from .identities import (
    BUILTIN_NAMES,
    Identity,
    IdentityReport,
    NotPivotalError,
    PivotalOperation,
    a_delta,
    builtin,
    check_identity,
    from_delta_function,
    identity_mask,
    is_symmetric,
    make_pivotal,
)
from .ops import (
    ArityError,
    Domain,
    FormatError,
    Operation,
    all_tuples,
    compose,
    constant_op,
    decode_index,
    encode_tuple,
    evaluate,
    format_table,
    identify_args,
    is_essential,
    load_table,
    parse_table,
    projection,
    save_table,
    section,
)
from .suite import run_suite


def load_schema(name: str) -> dict:
    """A shipped JSON schema: identity-report, decompose, certificate,
    census-record, census-summary, manifest or suite."""
    text = resources.files(__package__).joinpath("schemas", f"{name}.json").read_text()
    return json.loads(text)


__all__ = [
    "FLAGS",
    "CensusSummary",
    "ClassificationRecord",
    "DomainTooLarge",
    "boolean_census",
    "candidate_count",
    "candidate_id",
    "candidate_tables",
    "classify",
    "enumerate_pivotal",
    "flag_arrays",
    "monotone_fragment",
    "ternary_census",
    "Budget",
    "CloneCertificate",
    "ClosureReport",
    "Fragment",
    "OpSet",
    "check_clone_characterization",
    "check_clone_characterization_restated",
    "check_clone_sufficiency",
    "check_composition_preservation",
    "check_derived_equations",
    "check_generation",
    "check_projection_criterion",
    "check_symmetric_characterization",
    "clone_certificate",
    "generate_fragment",
    "generated_fragment",
    "is_closed_under_composition",
    "lambda_fragment",
    "lambda_fragment_upto",
    "BudgetError",
    "Leaf",
    "MembershipReport",
    "Node",
    "TheoremReport",
    "build_normal_form",
    "check_cyclic_symmetry",
    "check_symmetry_criterion",
    "decomposable_mask",
    "decomposition_terms",
    "format_nf",
    "is_pi_decomposable",
    "is_self_decomposable",
    "nf_membership_oracle",
    "nf_to_operation",
    "parse_nf",
    "simplify",
    "BUILTIN_NAMES",
    "Identity",
    "IdentityReport",
    "NotPivotalError",
    "PivotalOperation",
    "a_delta",
    "builtin",
    "check_identity",
    "from_delta_function",
    "identity_mask",
    "is_symmetric",
    "make_pivotal",
    "ArityError",
    "Domain",
    "FormatError",
    "Operation",
    "all_tuples",
    "compose",
    "constant_op",
    "decode_index",
    "encode_tuple",
    "evaluate",
    "format_table",
    "identify_args",
    "is_essential",
    "load_table",
    "parse_table",
    "projection",
    "save_table",
    "section",
    "run_suite",
    "load_schema",
]
