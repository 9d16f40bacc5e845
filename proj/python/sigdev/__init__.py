"""Schwinger-Dyson signature kernels, random path developments and path MMD."""

from ._core import (
    Path,
    catalan,
    concat_reverse,
    exact_straight_line,
    gen_fbm,
    generation_labels,
    gram,
    k_path,
    k_sd,
    mmd2,
    nc2_enumerate,
    one_variation,
    rk_montecarlo,
    selftest,
    semicircular_moment,
    series_oracle,
    signature_kernel,
    sigkernel_montecarlo,
    truncated_signature,
)

__all__ = [
    "Path",
    "catalan",
    "concat_reverse",
    "exact_straight_line",
    "gen_fbm",
    "generation_labels",
    "gram",
    "k_path",
    "k_sd",
    "mmd2",
    "nc2_enumerate",
    "one_variation",
    "rk_montecarlo",
    "selftest",
    "semicircular_moment",
    "series_oracle",
    "signature_kernel",
    "sigkernel_montecarlo",
    "truncated_signature",
]
