"""Numerical checks of the stability and consistency machinery."""

import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
import scipy.linalg

from wgplate.analysis.bubbles import build_bubbles
from wgplate.analysis.manufactured import manufactured_poly, manufactured_trig
from wgplate.analysis.norms import local_h2_gram, local_h2_squared
from wgplate.exceptions import InvalidStudyConfig, InvariantViolation
from wgplate.mesh.generators import generate_mesh, reference_shapes, single_cell_mesh
from wgplate.settings import DEFAULT_SETTINGS
from wgplate.weak_laplacian import (
    ElementKernel,
    KernelCache,
    consistent_affine_kernel,
    laplacian_bound_ratio,
)

_logger = logging.getLogger(__name__)


def _dof_scaling(kernel):
    # normal-derivative DOFs carry one inverse length
    layout = kernel.layout
    scaling = np.ones(layout.local_size(kernel.n_edges))
    for position in range(kernel.n_edges):
        scaling[layout.normal_slice(position)] = 1.0 / kernel.diameter
    return scaling


def norm_ratios(kernel, trials=200, rng=None):
    """``|||v|||_T / ||v||_{2,h,T}`` over random local DOF vectors.

    Samples are standard normal in scale-free coordinates (normal DOFs divided
    by ``h_T``) with the consistent affine kernel projected out, so the ratios
    of a rescaled cell repeat for the same seed.
    """
    rng = np.random.default_rng(rng)
    scaling = _dof_scaling(kernel)
    q, _ = np.linalg.qr(consistent_affine_kernel(kernel) / scaling[:, None])
    ratios = np.empty(trials)
    for t in range(trials):
        w = rng.standard_normal(len(scaling))
        w -= q @ (q.T @ w)
        v = scaling * w
        energy = max(v @ kernel.stiffness @ v, 0.0)
        ratios[t] = np.sqrt(energy / local_h2_squared(kernel, v))
    return ratios


def equivalence_constants(kernel, null_ratio=DEFAULT_SETTINGS.null_ratio):
    """Exact ``(c_min, c_max)`` of ``|||v|||_T / ||v||_{2,h,T}`` on one cell.

    The ratios are the singular values of ``U D_T Z``, where ``U`` is the
    Cholesky factor of ``M_r`` and the columns of ``Z`` are orthonormal in the
    discrete H2 inner product and span the complement of its null space (the
    weak injections of harmonic ``P_k`` functions). DOFs are scale-free as in
    :func:`norm_ratios`. A ``c_min`` below ``null_ratio * c_max`` is returned
    as ``0.0``: some weak function with nonzero discrete H2 norm has a zero
    weak Laplacian.
    """
    scaling = _dof_scaling(kernel)
    gram = scaling[:, None] * local_h2_gram(kernel) * scaling[None, :]
    g, z = scipy.linalg.eigh(gram)
    keep = g > 1e-10 * g[-1]
    z = z[:, keep] / np.sqrt(g[keep])
    upper = scipy.linalg.cholesky(kernel.r_mass.matrix)
    lifted = upper @ kernel.matrix @ (scaling[:, None] * z)
    c = scipy.linalg.svdvals(lifted)
    c_max = float(c[0])
    # fewer P_r moments than directions leaves a zero singular value
    if c.size < lifted.shape[1] or c[-1] <= null_ratio * c_max:
        c_min = 0.0
    else:
        c_min = float(c[-1])
    _logger.debug(f"equivalence constants r={kernel.r}: c_min={c_min:.6g}, c_max={c_max:.6g}")
    return c_min, c_max


def verify_norm_equivalence(cell_sample, layout, trials=200, settings=DEFAULT_SETTINGS, rng=None):
    """Measured constants of the equivalence of the energy and discrete H2 norms.

    Args:
        cell_sample: vertex list of one polygon, or a single-cell mesh.
        layout (wgplate.weak_laplacian.WeakDofLayout): degrees and r mode.
        trials (int): number of random samples, at least 100.

    Returns:
        tuple: ``(c_min, c_max)``.
    """
    if trials < 100:
        raise InvalidStudyConfig("trials", trials, "norm equivalence needs at least 100 samples")
    mesh = cell_sample if hasattr(cell_sample, "cells") else single_cell_mesh(cell_sample, settings.rho_min)
    kernel = ElementKernel(mesh, mesh.cells[0], layout, settings)
    ratios = norm_ratios(kernel, trials, settings.seed if rng is None else rng)
    return float(ratios.min()), float(ratios.max())


def rescaling_sweep(vertices, layout, trials=200, rescalings=3, settings=DEFAULT_SETTINGS):
    """Equivalence constants on the cell and its dyadic shrinks.

    Returns:
        pandas.DataFrame: one row per scale with ``c_min``, ``c_max`` and the
        relative drift of both from the unscaled cell.
    """
    rows = []
    base = single_cell_mesh(vertices, settings.rho_min)
    for level in range(rescalings + 1):
        factor = 0.5**level
        c_min, c_max = verify_norm_equivalence(base.scaled(factor), layout, trials, settings)
        rows.append({"scale": factor, "c_min": c_min, "c_max": c_max})
    df = pd.DataFrame(rows)
    df["drift"] = np.maximum(
        np.abs(df["c_min"] / df["c_min"].iloc[0] - 1.0), np.abs(df["c_max"] / df["c_max"].iloc[0] - 1.0)
    )
    return df


def commuting_residual(mesh, layout, solution, settings=DEFAULT_SETTINGS, cache=None):
    """Largest relative L2 gap between ``Delta_w`` of the exact weak function and ``Q_r Delta u``."""
    if cache is None:
        cache = KernelCache(settings)
    worst = 0.0
    for cell in mesh.cells:
        kernel = cache.get(mesh, cell, layout)
        exact = kernel.r_mass.solve(kernel.exact_moments(solution, cell))
        projected = kernel.project_r(solution.laplacian, cell)
        scale = kernel.r_mass.norm(projected)
        gap = kernel.r_mass.norm(exact - projected)
        worst = max(worst, gap / scale if scale > 0.0 else gap)
    return worst


@dataclass
class VerificationReport:
    """Rows of named checks with measured values and thresholds."""

    rows: list = field(default_factory=list)

    def record(self, check, subject, value, threshold, passed):
        self.rows.append(
            {
                "check": check,
                "subject": subject,
                "value": float(value),
                "threshold": threshold,
                "passed": bool(passed),
            }
        )
        level = logging.DEBUG if passed else logging.WARNING
        _logger.log(level, f"{check} [{subject}]: {value:.6g} (threshold {threshold})")

    @property
    def failures(self):
        return [f"{r['check']} [{r['subject']}] = {r['value']:.6g}" for r in self.rows if not r["passed"]]

    @property
    def passed(self):
        return not self.failures

    def to_dataframe(self):
        return pd.DataFrame(self.rows, columns=["check", "subject", "value", "threshold", "passed"])

    def raise_on_failure(self):
        if not self.passed:
            raise InvariantViolation(self.failures)


def run_verification(layout, settings=DEFAULT_SETTINGS, mesh_level=4, cache=None):
    """Bubble, norm-equivalence and commuting-identity sweeps for one layout.

    Norm equivalence is checked twice per reference shape: sampled ratios over
    ``settings.trials`` random weak functions and the exact constants of
    :func:`equivalence_constants`. Only the exact ``c_min`` sees a weak
    Laplacian degree too low to control every direction.
    """
    report = VerificationReport()
    if cache is None:
        cache = KernelCache(settings)

    for name, vertices in reference_shapes(settings.nonconvex_offset).items():
        mesh = single_cell_mesh(vertices, settings.rho_min)
        cell = mesh.cells[0]
        bubble = build_bubbles(cell)
        report.record("bubble rho0", name, bubble.rho0, "> 0", bubble.rho0 > 0.0)
        report.record("bubble rho1", name, bubble.rho1.min(), "> 0", bubble.rho1.min() > 0.0)
        boundary_values = np.concatenate(
            [bubble.element(edge.point_at(np.linspace(-1, 1, 7))) for edge in mesh.edges]
        )
        boundary = float(np.abs(boundary_values).max())
        report.record("bubble boundary", name, boundary, "<= 1e-13", boundary <= 1e-13)

        sweep = rescaling_sweep(vertices, layout, settings.trials, settings.rescalings, settings)
        c_min, c_max = sweep["c_min"].iloc[0], sweep["c_max"].iloc[0]
        report.record("c_min", name, c_min, "> 0", c_min > 0.0)
        report.record("c_max", name, c_max, "finite", np.isfinite(c_max))
        drift = sweep["drift"].max()
        report.record("rescaling drift", name, drift, f"<= {settings.ratio_drift}", drift <= settings.ratio_drift)

        kernel = cache.get(mesh, cell, layout)
        exact_min, exact_max = equivalence_constants(kernel, settings.null_ratio)
        report.record("c_min exact", name, exact_min, "> 0", exact_min > 0.0)
        report.record("c_max exact", name, exact_max, "finite", np.isfinite(exact_max))
        bound = laplacian_bound_ratio(kernel, settings.trials, settings.seed)
        report.record("laplacian bound", name, bound, "finite", np.isfinite(bound))

    for family in ("square", "nonconvex"):
        mesh = generate_mesh(family, mesh_level, settings)
        poly = commuting_residual(mesh, layout, manufactured_poly(layout.k), settings, cache)
        report.record(
            "commuting poly",
            family,
            poly,
            f"<= {settings.commuting_poly_tolerance}",
            poly <= settings.commuting_poly_tolerance,
        )
        trig = commuting_residual(mesh, layout, manufactured_trig(), settings, cache)
        report.record(
            "commuting trig",
            family,
            trig,
            f"<= {settings.commuting_trig_tolerance}",
            trig <= settings.commuting_trig_tolerance,
        )
    return report
