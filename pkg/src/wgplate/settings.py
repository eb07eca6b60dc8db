"""Numerical settings shared by the library modules.

The values mirror the ``[quadrature]``, ``[basis]``, ``[mesh]``, ``[solver]``
and ``[verify]`` sections of ``config.toml``; a :class:`wgplate.session.Session`
builds them from the merged configuration, direct library users get the
shipped defaults.
"""

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class NumericsSettings:
    max_exactness: int = 60
    mass_margin: int = 2
    data_margin: int = 6
    projection_margin: int = 4
    gram_threshold: int = 6
    projection_residual_tolerance: float = 1e-12
    rho_min: float = 0.02
    nonconvex_offset: float = 0.25
    solver_method: str = "direct"
    cg_tolerance: float = 1e-13
    cg_max_iterations: int = 0
    residual_tolerance: float = 1e-11
    refinement_steps: int = 3
    trials: int = 200
    seed: int = 20240601
    rescalings: int = 3
    ratio_drift: float = 0.2
    null_ratio: float = 1e-7
    commuting_poly_tolerance: float = 1e-11
    commuting_trig_tolerance: float = 1e-8

    @classmethod
    def from_config(cls, config):
        """Build settings from the two-level configuration dictionary."""
        flat = {}
        for section in ("quadrature", "basis", "mesh", "verify"):
            flat.update(config.get(section, {}))
        solver = config.get("solver", {})
        if "method" in solver:
            flat["solver_method"] = solver["method"]
        for key in (
            "cg_tolerance",
            "cg_max_iterations",
            "residual_tolerance",
            "refinement_steps",
        ):
            if key in solver:
                flat[key] = solver[key]
        known = {f.name: f.type for f in fields(cls)}
        return cls(**{k: v for k, v in flat.items() if k in known})

    def mass_exactness(self, degree):
        return 2 * degree + self.mass_margin

    def data_exactness(self, degree):
        return 2 * degree + self.data_margin

    def projection_exactness(self, degree):
        return 2 * degree + self.projection_margin


DEFAULT_SETTINGS = NumericsSettings()
