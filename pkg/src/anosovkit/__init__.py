"""Combinatorics and exact homological algebra for thickened Anosov configurations."""

from anosovkit.errors import (
    AnosovKitError,
    InvalidComplexError,
    InvalidTypeError,
    RepresentationError,
    ResourceLimitError,
    ValidationError,
)
from anosovkit.rootsys import RootSystem, SimpleType, build_root_system, parse_type
from anosovkit.weyl import WeylGroup, generate_weyl_group
from anosovkit.flags import FlagConfiguration, build_flag_configuration, is_symmetric_parabolic
from anosovkit.ideals import BalancedIdeal, enumerate_balanced_ideals, is_balanced_ideal

__version__ = "0.1.0"

__all__ = [
    "AnosovKitError",
    "BalancedIdeal",
    "FlagConfiguration",
    "InvalidComplexError",
    "InvalidTypeError",
    "RepresentationError",
    "ResourceLimitError",
    "RootSystem",
    "SimpleType",
    "ValidationError",
    "WeylGroup",
    "build_flag_configuration",
    "build_root_system",
    "enumerate_balanced_ideals",
    "generate_weyl_group",
    "is_balanced_ideal",
    "is_symmetric_parabolic",
    "parse_type",
]
