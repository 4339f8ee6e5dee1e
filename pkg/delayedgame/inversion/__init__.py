"""Transform inversion: casualty pmfs and the law of the observed ruin time."""

from .exceptions import NoDensity, NonConvergent, PolesTooClose
from .laplace import (
    ErlangMixture,
    ExponentialPolynomial,
    erlang_tail,
    invert_gamma_erlang,
    invert_rational_term,
    invert_three_pole_closed,
    laplace_invert_numeric,
    residue_expansion,
)
from .main import (
    casualty_pmf,
    default_max_k,
    defeat_probabilities,
    pgf_to_pmf,
    tau_cdf,
    tau_cdf_numeric,
    tau_lst_terms,
    tau_pdf,
    tau_pdf_numeric,
    tau_pdf_table,
)
from .models import (
    DefeatProbabilities,
    DistributionTable,
    EmpiricalPdfSchema,
    EmpiricalPmfSchema,
    PdfSchema,
    PmfSchema,
    RationalLstTerm,
)

__all__ = [
    "casualty_pmf",
    "default_max_k",
    "DefeatProbabilities",
    "defeat_probabilities",
    "DistributionTable",
    "EmpiricalPdfSchema",
    "EmpiricalPmfSchema",
    "ErlangMixture",
    "erlang_tail",
    "ExponentialPolynomial",
    "invert_gamma_erlang",
    "invert_rational_term",
    "invert_three_pole_closed",
    "laplace_invert_numeric",
    "NoDensity",
    "NonConvergent",
    "PdfSchema",
    "PmfSchema",
    "PolesTooClose",
    "RationalLstTerm",
    "residue_expansion",
    "tau_cdf",
    "tau_cdf_numeric",
    "tau_lst_terms",
    "tau_pdf",
    "tau_pdf_numeric",
    "tau_pdf_table",
]
