"""Smooth/regular norm machinery, martingale tail bounds, and a seeded
Monte Carlo harness.

The heavy lifting lives in the compiled extension ``normtail._core``; this
package re-exports its functions under the package namespace.
"""

from normtail._core import (
    binomial_upper_ci,
    char_check,
    dual_norm,
    embed_symmetric,
    gamma_star,
    grad_sq_norm,
    huber,
    huber_grad,
    invert_gamma,
    kappa,
    mgf_envelope,
    norm,
    second_moment_bound,
    simulate,
    space_dim,
    tail_bound,
    verify_smoothness,
)

__all__ = [
    "binomial_upper_ci",
    "char_check",
    "dual_norm",
    "embed_symmetric",
    "gamma_star",
    "grad_sq_norm",
    "huber",
    "huber_grad",
    "invert_gamma",
    "kappa",
    "mgf_envelope",
    "norm",
    "second_moment_bound",
    "simulate",
    "space_dim",
    "tail_bound",
    "verify_smoothness",
]

__version__ = "1.0.0"
