"""Group-anonymous D2D authentication: sessions, tracing and the ASR model."""

from ._core import (
    Deployment,
    GraadError,
    InvalidArgument,
    asr_cn_analytic,
    asr_na_analytic,
    md1_mean_wait,
    sha256,
    simulate_asr,
)

__all__ = [
    "Deployment",
    "GraadError",
    "InvalidArgument",
    "asr_cn_analytic",
    "asr_na_analytic",
    "md1_mean_wait",
    "sha256",
    "simulate_asr",
]
