"""
KL-energy identity for deterministic controls.

A deterministic control only shifts the means of the Gaussian path law, so
KL(P_u || P_0) = 1/2 int u'Mu dt with M = B' Sigma^-1 B, and per step
1/2 U_k' M U_k with M = B_d' Sigma_d^-1 B_d.
"""

import math

import numpy as np

from ..config import Config
from ..gramians import effort_metric, noise_metric, transition_stack
from ..models import ControlLaw, DiscreteModel, KlReport, LawKind, ModelSpec
from ..utils.errors import DimensionError, DomainError, UnsupportedLawError


def kl_discrete(dmodel: DiscreteModel, U: np.ndarray) -> KlReport:
    """Per-step Gaussian KL terms of a control sequence against its cost."""
    U = np.asarray(U, dtype=np.float64)
    if U.ndim == 1 and dmodel.m == 1:
        U = U.reshape(-1, 1)
    if U.shape != (dmodel.N, dmodel.m):
        raise DimensionError(f"control sequence must be {dmodel.N}x{dmodel.m}, got {U.shape}")

    per_step = 0.5 * np.einsum('ki,ij,kj->k', U, dmodel.noise_metric.M, U)
    kl = math.fsum(per_step)
    energy = 0.5 * float(np.einsum('ki,ij,kj->', U, dmodel.metric.M, U))
    return KlReport(
        energy=energy,
        kl=kl,
        per_step_kl=tuple(float(x) for x in per_step),
        max_abs_gap=abs(energy - kl),
    )


def _profile_on_grid(law: ControlLaw, model: ModelSpec, nodes: int, panels: int):
    taus, weights, Phi = transition_stack(model.A, model.T, nodes, panels)
    if law.kind == LawKind.CONTINUOUS_MATCHED:
        # u(T - tau) = beta M^+ B' e^{A' tau} w
        psi = np.einsum('kji,j->ki', Phi, law.direction)
        u = law.beta * psi @ (law.metric.M_pinv @ model.B.T).T
    else:
        u = np.stack([np.atleast_1d(law.evaluate(model.T - tau)) for tau in taus])
    if u.shape[1] != model.m:
        raise DimensionError(f"control has dimension {u.shape[1]}, model expects {model.m}")
    return weights, u


def kl_continuous_analytic(law: ControlLaw, model: ModelSpec, method: str = "auto",
                           nodes: int = Config.QUADRATURE_NODES,
                           panels: int = Config.QUADRATURE_PANELS,
                           ) -> KlReport:
    """
    Energy and KL of a deterministic continuous-time law.

    ``method="auto"`` uses beta^2 w'Ww / 2 for matched filters and quadrature
    otherwise; ``method="quadrature"`` forces the Gauss-Legendre rule.
    """
    if law.kind == LawKind.FEEDBACK:
        raise UnsupportedLawError("feedback laws are not deterministic; KL identity needs E_u over paths")
    if law.kind == LawKind.DISCRETE_MATCHED:
        raise UnsupportedLawError("discrete laws go through kl_discrete")
    if method not in ("auto", "quadrature"):
        raise DomainError(f"unknown method {method!r}")

    if method == "auto" and law.kind == LawKind.CONTINUOUS_MATCHED and model.penalty is None:
        energy = law.energy()
        return KlReport(energy=energy, kl=energy, max_abs_gap=0.0)

    weights, u = _profile_on_grid(law, model, nodes, panels)
    effort = law.metric.M if law.kind == LawKind.CONTINUOUS_MATCHED else effort_metric(model).M
    noise = noise_metric(model).M
    energy = 0.5 * float(np.einsum('k,ki,ij,kj->', weights, u, effort, u))
    kl = 0.5 * float(np.einsum('k,ki,ij,kj->', weights, u, noise, u))
    if method == "auto" and law.kind == LawKind.CONTINUOUS_MATCHED:
        energy = law.energy()
    return KlReport(energy=energy, kl=kl, max_abs_gap=abs(energy - kl))
