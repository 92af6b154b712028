"""Python bindings for the ctlab Cayley-graph laboratory."""

from ._ctlab import (
    Ball,
    ConfigError,
    ElectricSpace,
    Error,
    ResourceLimitError,
    TwistMap,
    electric_distortion,
    estimate_delta,
    is_trivial,
    reduce,
    render_ball,
    run_experiment,
)

__all__ = [
    "Ball",
    "ConfigError",
    "ElectricSpace",
    "Error",
    "ResourceLimitError",
    "TwistMap",
    "electric_distortion",
    "estimate_delta",
    "is_trivial",
    "reduce",
    "render_ball",
    "run_experiment",
]
