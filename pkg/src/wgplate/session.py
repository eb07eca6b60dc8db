"""A wgplate session is the runtime space of convergence and verification studies.

The session loads the layered configuration, owns a runtime directory for the
session log and result files, and keeps the element kernel cache so that
repeated solves on the same cell shapes reuse their weak Laplacian matrices.

.. highlight:: python

Examples:
    A convergence study from a study file::

        from wgplate.session import Session
        with Session() as session:
            study = session.load_study("chevron_k3.study")
            report = session.run_convergence(study)
            print(report.to_csv())

    A single solve with command-line style overrides::

        from wgplate.session import Session
        with Session() as session:
            study = session.parse_study("k = 3\\nmesh = nonconvex")
            result = session.solve(study, 8)
            print(result.errors)

"""

import logging
import os
import pathlib
import shutil
import tempfile
import time
import uuid
from dataclasses import dataclass, replace

from wgplate.analysis.manufactured import manufactured
from wgplate.analysis.norms import discrete_h2_norm, energy_error, l2_error
from wgplate.analysis.report import ErrorReport, LevelResult
from wgplate.analysis.verification import run_verification
from wgplate.display import DisplayDataframe
from wgplate.mesh.generators import generate_mesh
from wgplate.polyspaces.injection import inject_Qh
from wgplate.settings import NumericsSettings
from wgplate.solver.assembly import assemble
from wgplate.solver.linsolve import solve_with_info
from wgplate.study import parse_study
from wgplate.utils import load_configuration
from wgplate.weak_laplacian import KernelCache

_logger = logging.getLogger(__name__)


@dataclass(eq=False)
class StudySolve:
    """One discrete solve of a study at refinement ``n``.

    Attributes:
        mesh (wgplate.mesh.PolyMesh): the generated mesh.
        layout (wgplate.weak_laplacian.WeakDofLayout): degrees and r mode.
        solution (wgplate.analysis.manufactured.ManufacturedSolution): exact data.
        u_h (wgplate.solver.dofmap.WeakDofVector): the discrete solution.
        info (wgplate.solver.linsolve.SolveInfo): solver diagnostics.
        errors (wgplate.analysis.report.LevelResult): error norms at this level.
    """

    mesh: object
    layout: object
    solution: object
    u_h: object
    info: object
    errors: LevelResult


class Session(object):
    """wgplate Session class

    Args:
        session_id (str): session identifier, a random UUID when omitted.
        runtime_dir (str): directory for the session log and outputs; an
          existing directory is adopted and never removed by the session.
        debug_mode (bool): keep the runtime directory on close. Also switched
          on by the environment variable named in ``[session]
          debug_env_var_name``.
        config_paths (list): extra TOML files layered over the installed
          configuration.

    Attributes:
        config (dict): the merged two-level configuration.
        settings (wgplate.settings.NumericsSettings): numerics built from
          ``config``.
        kernel_cache (wgplate.weak_laplacian.KernelCache): element kernels
          shared by every solve of the session.
        runtime_directory (pathlib.Path): session runtime directory.
    """

    def __init__(self, session_id=None, runtime_dir=None, debug_mode=False, config_paths=()):
        _logger.debug(
            f"Establish session with session_id: {session_id}, runtime_dir: {runtime_dir}, debug_mode: {debug_mode}"
        )

        self.config = load_configuration(config_paths)
        self.settings = NumericsSettings.from_config(self.config)
        self.session_id = session_id if session_id else str(uuid.uuid4())

        debug_env = self.config["session"]["debug_env_var_name"]
        self.debug_mode = bool(debug_mode or os.getenv(debug_env, False))

        self.runtime_directory_is_owned_by_upper_layer = False
        if runtime_dir:
            runtime_dir = pathlib.Path(runtime_dir)
            if runtime_dir.exists():
                self.runtime_directory_is_owned_by_upper_layer = True
            else:
                runtime_dir.mkdir(parents=True, exist_ok=True)
            self.runtime_directory = runtime_dir.resolve()
        else:
            tmp_dir = pathlib.Path(tempfile.gettempdir()) / ("wgplate-session-" + self.session_id)
            tmp_dir.mkdir(parents=True, exist_ok=True)
            self.runtime_directory = tmp_dir.resolve()
            _logger.debug(f"session runtime_directory: {self.runtime_directory}")

        self.kernel_cache = KernelCache(self.settings)

    @property
    def log_file_path(self):
        return self.runtime_directory / self.config["session"]["log_file_name"]

    def parse_study(self, text, overrides=None):
        """Parse study text with ``[study]`` defaults and optional overrides.

        Raises:
            StudySyntaxError: the text is not a list of ``key = value`` lines.
            InvalidStudyConfig: unknown key or invalid value.
            InvalidR: custom ``r`` below ``k - 2``.
        """
        return parse_study(text, self.config.get("study", {}), overrides)

    def load_study(self, path=None, overrides=None):
        """Read a study file; ``None`` gives the configured defaults plus overrides."""
        text = ""
        if path is not None:
            with open(path, "r") as fp:
                text = fp.read()
        return self.parse_study(text, overrides)

    def solver_settings(self, study):
        """Session settings with the solver method and tolerance of ``study``."""
        changes = {"solver_method": study.solver}
        if study.tol is not None:
            changes["residual_tolerance"] = study.tol
        return replace(self.settings, **changes)

    def solve(self, study, n, level=0):
        """Assemble, solve and measure one level of ``study``.

        Returns:
            StudySolve
        """
        layout = study.layout()
        solution = manufactured(study.solution, study.k)
        mesh = generate_mesh(study.mesh, n, self.settings)
        cache = self.kernel_cache

        system = assemble(mesh, layout, solution.f, solution.xi, solution.nu, self.settings, cache)
        u_h, info = solve_with_info(system, self.solver_settings(study))

        projected = inject_Qh(solution, layout, mesh, self.settings, cache, system.dofmap)
        errors = LevelResult(
            level=level,
            n=n,
            h=mesh.h,
            ndof=system.dofmap.n_dofs,
            energy_err=energy_error(solution, u_h, cache, self.settings),
            h2_err=discrete_h2_norm(projected - u_h, cache, self.settings),
            l2_err=l2_error(solution, u_h, cache, self.settings),
        )
        return StudySolve(mesh, layout, solution, u_h, info, errors)

    def run_convergence(self, study):
        """Solve every level of ``study`` in order.

        Returns:
            wgplate.analysis.report.ErrorReport
        """
        report = ErrorReport()
        for level, n in enumerate(study.levels):
            start = time.time()
            result = self.solve(study, n, level)
            e = result.errors
            _logger.info(
                f"level {level}: n={n}, h={e.h:.4g}, ndof={e.ndof}, energy={e.energy_err:.4e}, "
                f"h2={e.h2_err:.4e}, l2={e.l2_err:.4e} ({result.info.method}, "
                f"{time.time() - start:.1f}s)"
            )
            report.append(e)
        if study.out:
            report.to_csv(self.resolve_output(study.out))
        return report

    def run_verify(self, study):
        """Bubble, norm-equivalence and commuting-identity checks for ``study``'s layout.

        The commuting identity is measured on both mesh families at the first
        refinement level of the study.

        Returns:
            wgplate.analysis.verification.VerificationReport
        """
        report = run_verification(study.layout(), self.settings, study.levels[0], self.kernel_cache)
        _logger.info(f"verification: {len(report.rows)} checks, {len(report.failures)} failures")
        if study.out:
            with open(self.resolve_output(study.out), "w", newline="") as f:
                f.write(DisplayDataframe(report.to_dataframe()).to_csv())
        return report

    def resolve_output(self, path):
        # relative to the working directory, not the runtime directory
        path = pathlib.Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def close(self):
        """Explicitly close the session.

        Only needed for non-context-managed sessions.
        """
        self.kernel_cache.clear()
        if not self.runtime_directory_is_owned_by_upper_layer and not self.debug_mode:
            shutil.rmtree(self.runtime_directory, ignore_errors=True)

    def __enter__(self):
        return self

    def __exit__(self, exception_type, exception_value, traceback):
        self.close()
