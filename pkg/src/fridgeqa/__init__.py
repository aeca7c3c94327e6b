"""Symbolic smart-fridge question answering.

Seeded scene generation, template-based QA datasets, exact query
evaluation, a rule-based question parser, and a queued batching service.
"""

from .generator import SceneConfig, build_scene, compute_relationships, generate_scene
from .model import Category, Freshness, ObjectClass, Scene, SceneObject, Size, category_of, is_perishable
from .oracle import Answer, FilterSet, Head, Number, QueryProgram, YesNo, evaluate, matches
from .parser import GrammarMode, normalize, parse, parse_question
from .schematic import render_schematic
from .templates import (
    DistributionProfile,
    GeneratedQA,
    VariableMask,
    generate_qa_set,
    get_profile,
    load_defaults,
    load_templates,
)

__all__ = [
    "Answer",
    "Category",
    "DistributionProfile",
    "FilterSet",
    "Freshness",
    "GeneratedQA",
    "GrammarMode",
    "Head",
    "Number",
    "ObjectClass",
    "QueryProgram",
    "Scene",
    "SceneConfig",
    "SceneObject",
    "Size",
    "VariableMask",
    "YesNo",
    "build_scene",
    "category_of",
    "compute_relationships",
    "evaluate",
    "generate_qa_set",
    "generate_scene",
    "get_profile",
    "is_perishable",
    "load_defaults",
    "load_templates",
    "matches",
    "normalize",
    "parse",
    "parse_question",
    "render_schematic",
]

__version__ = "0.1.0"
