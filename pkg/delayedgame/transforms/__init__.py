"""Joint and marginal transforms of the observed ruin time and terminal casualties."""

from .main import (
    closed_form_intermediates,
    gamma_joint,
    phi,
    phi_closed,
    phi_exponential_casualties,
    phi_operator,
)
from .marginals import (
    a_pgf_example,
    b_pgf_example,
    marginal_A_pgf,
    marginal_B_pgf,
    marginal_intermediates,
    marginal_tau_lst,
    moments,
    tau_lst_as_printed,
    tau_lst_example,
)
from .models import ClosedFormIntermediates, MarginalIntermediates, Moments

__all__ = [
    "a_pgf_example",
    "b_pgf_example",
    "closed_form_intermediates",
    "ClosedFormIntermediates",
    "gamma_joint",
    "marginal_A_pgf",
    "marginal_B_pgf",
    "marginal_intermediates",
    "marginal_tau_lst",
    "MarginalIntermediates",
    "moments",
    "Moments",
    "phi",
    "phi_closed",
    "phi_exponential_casualties",
    "phi_operator",
    "tau_lst_as_printed",
    "tau_lst_example",
]
