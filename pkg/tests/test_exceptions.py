import pytest

from wgplate.exceptions import (
    InvalidLayout,
    InvalidMeshFile,
    InvalidR,
    InvalidStudyConfig,
    InvariantViolation,
    NoConvergence,
    NotPositiveDefinite,
    SingularMass,
    StudySyntaxError,
    WgplateException,
    WgplateInternalError,
)
from wgplate.session import Session


def test_message_format():
    err = InvalidR(0, 3)
    assert str(err) == (
        "[ERROR] InvalidR: weak Laplacian degree r=0 is below k-2=1. "
        "choose r >= k-2 or use the nonconvex/convex modes."
    )


def test_internal_error_suggestion():
    assert str(WgplateInternalError("oops")).endswith("please open an issue to report.")


@pytest.mark.parametrize(
    "err, code",
    [
        (WgplateException("generic"), 1),
        (StudySyntaxError(1, 3, "character", "?"), 2),
        (InvalidStudyConfig("k", 1, "too small", 4), 2),
        (InvalidLayout(2, 3, 1, "p above k"), 2),
        (InvalidMeshFile("a.mesh", 2, "bad"), 2),
        (SingularMass(3), 3),
        (NotPositiveDefinite("pivot"), 3),
        (NoConvergence(10, 1e-3), 3),
        (InvariantViolation(["c_min [square] = 0"]), 4),
    ],
)
def test_exit_codes(err, code):
    assert err.exit_code == code
    assert isinstance(err, WgplateException)


def test_study_error_in_session():
    with Session(debug_mode=True) as session:
        with pytest.raises(InvalidStudyConfig) as e:
            session.parse_study("k = 2\nlevels = 8, 4")
        assert e.value.line == 2
        with pytest.raises(StudySyntaxError):
            session.parse_study("mesh square")


def test_missing_study_file(tmp_path):
    with Session() as session:
        with pytest.raises(FileNotFoundError):
            session.load_study(tmp_path / "absent.study")
