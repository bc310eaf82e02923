"""Coset enumeration and regular hypertope verification for finitely presented 2-groups."""

__version__ = "0.1.0"

from .words import WordSyntaxError, UnknownGenerator, parse_word, render, commutator, conjugate
from .presentations import (
    Presentation,
    ParameterError,
    PresentationFormatError,
    build_paper_presentation,
    parse_presentation,
    load_presentation,
    theorem_branch,
)
from .coset_enum import CapacityExceeded, CosetTable, enumerate_cosets, group_order, regular_representation
from .permgroup import ElementCeilingExceeded, Permutation, PermGroup, Subgroup, closure, frattini_rank
from .cgroups import GeneratedGroup, check_intersection_property, tits_condition, quotient_criterion
from .geometry import CosetGeometry, build_geometry, hypertope_verdict
from .families import (
    analyze_presentation,
    verify_lemma31,
    verify_prop23,
    verify_theorem32,
)

__all__ = ["__version__",
    "WordSyntaxError",
    "UnknownGenerator",
    "parse_word",
    "render",
    "commutator",
    "conjugate",
    "Presentation",
    "ParameterError",
    "PresentationFormatError",
    "build_paper_presentation",
    "parse_presentation",
    "load_presentation",
    "theorem_branch",
    "CapacityExceeded",
    "CosetTable",
    "enumerate_cosets",
    "group_order",
    "regular_representation",
    "ElementCeilingExceeded",
    "Permutation",
    "PermGroup",
    "Subgroup",
    "closure",
    "frattini_rank",
    "GeneratedGroup",
    "check_intersection_property",
    "tits_condition",
    "quotient_criterion",
    "CosetGeometry",
    "build_geometry",
    "hypertope_verdict",
    "analyze_presentation",
    "verify_lemma31",
    "verify_prop23",
    "verify_theorem32",
]
