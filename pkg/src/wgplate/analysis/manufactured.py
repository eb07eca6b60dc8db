"""Manufactured solutions of the clamped plate problem.

Every closure takes an ``(M, 2)`` point array; scalar closures return ``(M,)``
and gradient closures ``(M, 2)``.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as P

from wgplate.exceptions import InvalidStudyConfig

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ManufacturedSolution:
    """Exact solution ``u`` with the data of ``Delta^2 u = f``.

    Attributes:
        smoothness (float): Sobolev order available, ``inf`` for analytic data.
        degree (int): total degree for polynomial solutions, else ``None``.
    """

    name: str
    u: Callable
    grad: Callable
    laplacian: Callable
    grad_laplacian: Callable
    f: Callable
    smoothness: float = np.inf
    degree: Optional[int] = None

    def xi(self, points):
        """Clamped trace data."""
        return self.u(points)

    def nu(self, points, normal):
        """Normal derivative data for the outward unit ``normal``."""
        return self.grad(points) @ normal

    def check_consistency(self, samples=20, step=1e-3, rng=0, box=(0.1, 0.9)):
        """Largest scaled finite-difference mismatch of the closures.

        Five-point stencils check ``grad``, ``laplacian`` against ``u`` and
        ``f`` against ``laplacian``; each mismatch is divided by
        ``max(1, |reference|)``.
        """
        rng = np.random.default_rng(rng)
        pts = rng.uniform(box[0], box[1], size=(samples, 2))
        ex, ey = np.array([step, 0.0]), np.array([0.0, step])

        def five_point(g):
            return (g(pts + ex) + g(pts - ex) + g(pts + ey) + g(pts - ey) - 4.0 * g(pts)) / step**2

        def central(g):
            return np.column_stack(
                [(g(pts + ex) - g(pts - ex)) / (2 * step), (g(pts + ey) - g(pts - ey)) / (2 * step)]
            )

        def scaled(a, b):
            return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))

        worst = max(
            scaled(central(self.u), self.grad(pts)),
            scaled(five_point(self.u), self.laplacian(pts)),
            scaled(central(self.laplacian), self.grad_laplacian(pts)),
            scaled(five_point(self.laplacian), self.f(pts)),
        )
        _logger.debug(f"{self.name}: finite-difference mismatch {worst:.3e}")
        return worst


def manufactured_trig():
    """``u = sin(pi x) sin(pi y)``, vanishing on the unit square boundary."""
    pi = np.pi

    def u(p):
        return np.sin(pi * p[:, 0]) * np.sin(pi * p[:, 1])

    def grad(p):
        x, y = p[:, 0], p[:, 1]
        return pi * np.column_stack([np.cos(pi * x) * np.sin(pi * y), np.sin(pi * x) * np.cos(pi * y)])

    return ManufacturedSolution(
        "trig",
        u,
        grad,
        lambda p: -2.0 * pi**2 * u(p),
        lambda p: -2.0 * pi**2 * grad(p),
        lambda p: 4.0 * pi**4 * u(p),
    )


def _add(a, b):
    shape = np.maximum(a.shape, b.shape)
    out = np.zeros(shape)
    out[: a.shape[0], : a.shape[1]] += a
    out[: b.shape[0], : b.shape[1]] += b
    return out


def _laplacian_coefficients(c):
    return _add(P.polyder(c, 2, axis=0), P.polyder(c, 2, axis=1))


def polynomial_solution(coefficients, name="poly"):
    """Solution from a coefficient grid, ``u = sum c[i, j] x^i y^j``."""
    c = np.atleast_2d(np.asarray(coefficients, dtype=float))
    cx, cy = P.polyder(c, axis=0), P.polyder(c, axis=1)
    lap = _laplacian_coefficients(c)
    lx, ly = P.polyder(lap, axis=0), P.polyder(lap, axis=1)
    bilap = _laplacian_coefficients(lap)
    nonzero = np.argwhere(c != 0.0)
    degree = int(nonzero.sum(axis=1).max()) if len(nonzero) else 0

    def evaluate(coef):
        return lambda p: P.polyval2d(p[:, 0], p[:, 1], coef)

    def gradient(ca, cb):
        return lambda p: np.column_stack([P.polyval2d(p[:, 0], p[:, 1], ca), P.polyval2d(p[:, 0], p[:, 1], cb)])

    return ManufacturedSolution(
        name,
        evaluate(c),
        gradient(cx, cy),
        evaluate(lap),
        gradient(lx, ly),
        evaluate(bilap),
        np.inf,
        degree,
    )


def manufactured_poly(k):
    """``u = x^2 + y^2 + sum_{d=3..k} (x^d + x y^(d-1))``, a member of P_k."""
    c = np.zeros((k + 1, k + 1))
    c[2, 0] = c[0, 2] = 1.0
    for d in range(3, k + 1):
        c[d, 0] += 1.0
        c[1, d - 1] += 1.0
    return polynomial_solution(c, f"poly{k}")


def manufactured(name, k):
    if name == "trig":
        return manufactured_trig()
    if name == "poly":
        return manufactured_poly(k)
    raise InvalidStudyConfig("solution", name, "expected trig or poly")
