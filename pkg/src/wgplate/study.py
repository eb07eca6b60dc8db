"""Study configurations: what a convergence or verification run computes.

A study file is plain text with one ``key = value`` entry per line::

    # k = 3 on the chevron family
    k = 3
    mesh = nonconvex
    levels = 4, 8, 16
    solution = trig
    r_mode = nonconvex
    out = chevron_k3.csv

Keys are ``k``, ``p``, ``q``, ``r_mode``, ``r``, ``mesh``, ``levels``,
``solution``, ``solver``, ``tol`` and ``out``. Omitted keys take the
``[study]`` section of the configuration; ``p`` defaults to ``k`` and ``q`` to
``k - 1``.
"""

import logging
import re
from dataclasses import dataclass

from lark import UnexpectedCharacters, UnexpectedInput, UnexpectedToken

from wgplate.exceptions import InvalidR, InvalidStudyConfig, StudySyntaxError
from wgplate.syntax.parser import parse, to_mapping
from wgplate.weak_laplacian import R_MODES, WeakDofLayout

_logger = logging.getLogger(__name__)

KEYS = ("k", "p", "q", "r_mode", "r", "mesh", "levels", "solution", "solver", "tol", "out")
MESH_FAMILIES = ("square", "nonconvex")
SOLUTIONS = ("trig", "poly")
SOLVERS = ("direct", "cg")

_PATH = re.compile(r"^[^\s#=,]+$")


@dataclass(frozen=True)
class StudyConfig:
    """A validated study; build it with :meth:`from_mapping` or :func:`parse_study`."""

    k: int = 2
    p: int = 2
    q: int = 1
    r_mode: str = "nonconvex"
    r: int = None
    mesh: str = "square"
    levels: tuple = (4, 8, 16, 32)
    solution: str = "trig"
    solver: str = "direct"
    tol: float = None
    out: str = None

    @classmethod
    def from_mapping(cls, mapping, defaults=None, overrides=None):
        """Validate a parsed study.

        Args:
            mapping (dict): ``{key: (value, line)}`` from the study file.
            defaults (dict): plain ``{key: value}`` used for omitted keys,
              usually the ``[study]`` configuration section.
            overrides (dict): plain ``{key: value}`` taking precedence over
              the file, e.g. command-line flags; ``None`` values are ignored.

        Raises:
            InvalidStudyConfig: unknown key or invalid value, with its line.
            InvalidR: custom ``r`` below ``k - 2``.
        """
        merged = {}
        for key, value in (defaults or {}).items():
            if key in KEYS:
                merged[key] = (value, None)
        for key, (value, line) in mapping.items():
            if key not in KEYS:
                raise InvalidStudyConfig(key, value, "unknown key, expected one of " + ", ".join(KEYS), line)
            merged[key] = (value, line)
        for key, value in (overrides or {}).items():
            if value is None:
                continue
            if key not in KEYS:
                raise InvalidStudyConfig(key, value, "unknown override")
            merged[key] = (value, None)

        def get(key, default=None):
            return merged.get(key, (default, None))

        k, line = get("k", 2)
        k = _integer("k", k, line)
        if k < 2:
            raise InvalidStudyConfig("k", k, "k must be at least 2", line)
        p, line = get("p", k)
        p = _integer("p", p, line)
        if not k >= p >= 1:
            raise InvalidStudyConfig("p", p, f"need k >= p >= 1 with k = {k}", line)
        q, line = get("q", k - 1)
        q = _integer("q", q, line)
        if not p >= q >= 1:
            raise InvalidStudyConfig("q", q, f"need p >= q >= 1 with p = {p}", line)

        r, r_line = get("r")
        r_mode, line = get("r_mode", "nonconvex")
        if r is not None and "r_mode" not in mapping and not (overrides or {}).get("r_mode"):
            r_mode = "custom"
        r_mode = _choice("r_mode", r_mode, R_MODES, line)
        if r_mode == "custom":
            if r is None:
                raise InvalidStudyConfig("r", r, "r_mode = custom needs r", line)
            r = _integer("r", r, r_line)
            if r < k - 2:
                raise InvalidR(r, k)
        elif r is not None:
            raise InvalidStudyConfig("r", r, f"r is only used with r_mode = custom, not {r_mode}", r_line)

        mesh, line = get("mesh", "square")
        mesh = _choice("mesh", mesh, MESH_FAMILIES, line)
        solution, line = get("solution", "trig")
        solution = _choice("solution", solution, SOLUTIONS, line)
        solver, line = get("solver", "direct")
        solver = _choice("solver", solver, SOLVERS, line)

        levels, line = get("levels", [4, 8, 16, 32])
        levels = _levels(levels, line)

        tol, line = get("tol")
        if tol is not None:
            if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
                raise InvalidStudyConfig("tol", tol, "expected a positive number", line)
            tol = float(tol)

        out, line = get("out")
        if out is not None:
            out = str(out)
            if not _PATH.match(out):
                raise InvalidStudyConfig("out", out, "paths may not contain blanks, '#', '=' or ','", line)

        study = cls(k, p, q, r_mode, r, mesh, levels, solution, solver, tol, out)
        _logger.debug(f"study configuration: {study}")
        return study

    def layout(self):
        return WeakDofLayout(self.k, self.p, self.q, self.r_mode, self.r)

    def to_text(self):
        """Canonical ``key = value`` text; :func:`parse_study` reads it back unchanged."""
        lines = [
            f"k = {self.k}",
            f"p = {self.p}",
            f"q = {self.q}",
            f"r_mode = {self.r_mode}",
        ]
        if self.r is not None:
            lines.append(f"r = {self.r}")
        lines += [
            f"mesh = {self.mesh}",
            "levels = " + ", ".join(str(n) for n in self.levels),
            f"solution = {self.solution}",
            f"solver = {self.solver}",
        ]
        if self.tol is not None:
            lines.append(f"tol = {self.tol!r}")
        if self.out is not None:
            lines.append(f"out = {self.out}")
        return "\n".join(lines) + "\n"


def parse_study(text, defaults=None, overrides=None):
    """Parse and validate study text.

    Raises:
        StudySyntaxError: the text is not a list of ``key = value`` entries.
        InvalidStudyConfig: see :meth:`StudyConfig.from_mapping`.
    """
    try:
        entries = parse(text)
    except UnexpectedCharacters as err:
        raise StudySyntaxError(err.line, err.column, "character", err.char)
    except UnexpectedToken as err:
        raise StudySyntaxError(err.line, err.column, "token", err.token)
    except UnexpectedInput as err:
        raise StudySyntaxError(getattr(err, "line", "?"), getattr(err, "column", "?"), "end of input", "")
    mapping, duplicates = to_mapping(entries)
    if duplicates:
        key, value, line = duplicates[0]
        raise InvalidStudyConfig(key, value, "duplicate key", line)
    return StudyConfig.from_mapping(mapping, defaults, overrides)


def _integer(field, value, line):
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidStudyConfig(field, value, "expected an integer", line)
    return value


def _choice(field, value, choices, line):
    if value not in choices:
        raise InvalidStudyConfig(field, value, "expected one of " + ", ".join(choices), line)
    return value


def _levels(value, line):
    values = list(value) if isinstance(value, (list, tuple)) else [value]
    for n in values:
        _integer("levels", n, line)
        if n < 1:
            raise InvalidStudyConfig("levels", n, "refinement levels must be positive", line)
    if not values:
        raise InvalidStudyConfig("levels", value, "at least one level is needed", line)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidStudyConfig("levels", value, "levels must be strictly increasing", line)
    return tuple(values)
