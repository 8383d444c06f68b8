from .bands import (ALPHA_K, A_K, CAP, CUP, KINDS, LENS, OMEGA_K, Q, THROUGH, Band,
                    BoundaryViolation, Endpoint, Figure, Figures, LetterKinds, ThickLens,
                    TypeVector, cap_cell_violations, classify_figures, compare_types,
                    generated_region, machine_part_labels, namespace_kind, omega_band_violations,
                    thick_lens, trace_bands, type_key, type_vector, weighted_length)
from .grid import (BandShape, InvalidDerivation, MalformedGrid, NotDivisible, Trapezium,
                   build_trapezium, is_divisible, time_separate, trapezium_to_derivation)
from .minimize import least_type_derivation
from .render import render_dot, render_png, render_svg

__all__ = [
    "ALPHA_K", "A_K", "CAP", "CUP", "KINDS", "LENS", "OMEGA_K", "Q", "THROUGH", "Band",
    "BandShape", "BoundaryViolation", "Endpoint", "Figure", "Figures", "InvalidDerivation",
    "LetterKinds", "MalformedGrid", "NotDivisible", "ThickLens", "Trapezium", "TypeVector",
    "build_trapezium", "cap_cell_violations", "classify_figures", "compare_types",
    "generated_region", "is_divisible", "least_type_derivation", "machine_part_labels",
    "namespace_kind", "omega_band_violations", "render_dot", "render_png", "render_svg",
    "thick_lens", "time_separate", "trace_bands", "trapezium_to_derivation", "type_key",
    "type_vector", "weighted_length",
]
