"""Models for transform evaluations."""

from pydantic import BaseModel, ConfigDict, Field


class ClosedFormIntermediates(BaseModel):
    """Intermediate quantities of the closed-form joint transform.

    With p = lambda + mu + theta: a = lambda u / p, b = lambda u / (p - mu v),
    C = mu v / p, and psi the bracket that multiplies the leading factor.
    """

    model_config = ConfigDict(frozen=True)

    p: complex
    a: complex
    b: complex
    c_big: complex = Field(description="C = mu v / p")
    psi: complex


class MarginalIntermediates(BaseModel):
    """The F, G and H sums of the marginal transforms of tau, A and B."""

    model_config = ConfigDict(frozen=True)

    f_sum: complex = Field(description="F, evaluated at theta.")
    g_sum: complex = Field(description="G, evaluated at u.")
    h_sum: complex = Field(description="H, evaluated at v.")
    b_marg: complex = Field(description="lambda / (lambda + mu (1 - v)).")


class Moments(BaseModel):
    """First moments of the observed ruin time and the terminal casualties."""

    mean_tau: float = Field(alias="meanTau")
    mean_a: float = Field(alias="meanA")
    mean_b: float = Field(alias="meanB")

    model_config = ConfigDict(populate_by_name=True)
