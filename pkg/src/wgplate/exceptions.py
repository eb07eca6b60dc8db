################################################################
#                     Generic Errors
################################################################


class WgplateException(Exception):
    """Generic wgplate Exception

    Args:
        error (str): error message.
        suggestion (str): suggestion to fix the issue.
    """

    # process exit code used by the command-line driver
    exit_code = 1

    def __init__(self, error, suggestion=""):
        self.error = error if error[-1] == "." else error + "."
        if suggestion and suggestion[-1] != ".":
            suggestion = suggestion + "."
        self.suggestion = suggestion
        super().__init__(self.error)

    def __str__(self):
        return f"[ERROR] {self.__class__.__name__}: {self.error} {self.suggestion}".rstrip()


class WgplateInternalError(WgplateException):
    def __init__(self, error):
        super().__init__(error, "please open an issue to report")


################################################################
#                       Session Errors
################################################################


class NoValidConfiguration(WgplateException):
    exit_code = 2

    def __init__(self):
        super().__init__(
            "no valid configuration files found",
            'reinstall package with "pip install". report bug if not solved',
        )


################################################################
#                   Study Configuration Errors
################################################################


class StudySyntaxError(WgplateException):
    exit_code = 2

    def __init__(self, line, column, invalid_term_type, invalid_term_value):
        self.line = line
        self.column = column
        self.invalid_term_type = invalid_term_type
        self.invalid_term_value = invalid_term_value
        super().__init__(
            f'invalid {self.invalid_term_type} "{self.invalid_term_value}" at line {self.line} column {self.column}',
            "rewrite the failed line as key = value",
        )


class InvalidStudyConfig(WgplateException):
    exit_code = 2

    def __init__(self, field, value, reason, line=None):
        self.field = field
        self.value = value
        self.line = line
        where = f" at line {line}" if line else ""
        super().__init__(
            f'invalid value "{value}" for field "{field}"{where}: {reason}',
            "fix the study configuration",
        )


class InvalidLayout(WgplateException):
    exit_code = 2

    def __init__(self, k, p, q, reason):
        super().__init__(
            f"invalid degrees k={k}, p={p}, q={q}: {reason}",
            "use k >= 2 and k >= p >= q >= 1",
        )


class InvalidR(WgplateException):
    exit_code = 2

    def __init__(self, r, k):
        self.r = r
        self.k = k
        super().__init__(
            f"weak Laplacian degree r={r} is below k-2={k - 2}",
            "choose r >= k-2 or use the nonconvex/convex modes",
        )


################################################################
#                         Mesh Errors
################################################################


class InvalidMesh(WgplateException):
    def __init__(self, reason):
        super().__init__(f"invalid polygonal mesh: {reason}", "check the cell loops")


class InvalidMeshFile(WgplateException):
    exit_code = 2

    def __init__(self, path, line, reason):
        self.path = path
        self.line = line
        super().__init__(
            f'cannot read mesh file "{path}" at line {line}: {reason}',
            "expected header NV NC, NV lines of x y, NC lines of m i1 ... im",
        )


class SelfIntersectingPolygon(WgplateException):
    def __init__(self, vertices):
        super().__init__(
            f"ear clipping cannot progress on polygon {vertices}",
            "provide a simple polygon without repeated vertices",
        )


class EdgeNotIncident(WgplateException):
    def __init__(self, cell, edge):
        super().__init__(
            f"edge {edge} is not incident to cell {cell}",
            "query a sign only for an edge of the cell loop",
        )


class ShapeRegularityViolation(WgplateException):
    def __init__(self, cell, ratio, rho_min):
        super().__init__(
            f"cell {cell} has area/h_T^2 = {ratio:.3e} below rho_min = {rho_min}",
            "refine or regularize the mesh, or lower [mesh] rho_min",
        )


################################################################
#                  Polynomial Space Errors
################################################################


class UnsupportedDegree(WgplateException):
    def __init__(self, exactness, max_exactness):
        super().__init__(
            f"quadrature exactness {exactness} outside the rule table [0, {max_exactness}]",
            "lower the polynomial degree or raise [quadrature] max_exactness",
        )


class SingularMass(WgplateException):
    exit_code = 3

    def __init__(self, degree, detail=""):
        super().__init__(
            f"mass matrix of degree {degree} cannot be factorized {detail}".rstrip(),
            "enable Gram orthonormalization via [basis] gram_threshold",
        )


################################################################
#                        Solver Errors
################################################################


class NotPositiveDefinite(WgplateException):
    exit_code = 3

    def __init__(self, detail):
        super().__init__(
            f"global stiffness matrix is not positive definite: {detail}",
            "check boundary constraints and the weak Laplacian degree r",
        )


class NoConvergence(WgplateException):
    exit_code = 3

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"conjugate gradients stopped after {iterations} iterations at residual {residual:.3e}",
            'use solver = direct or increase [solver] cg_max_iterations',
        )


################################################################
#                       Analysis Errors
################################################################


class BoundaryNotZero(WgplateException):
    def __init__(self, max_value):
        super().__init__(
            f"test function has boundary DOFs up to {max_value:.3e}",
            "the residual functional needs a test function in V_h^0",
        )


class InvariantViolation(WgplateException):
    exit_code = 4

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__(
            "verification failed: " + "; ".join(self.failures),
            "inspect the verification report",
        )
