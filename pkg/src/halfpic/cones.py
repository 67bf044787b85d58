"""Curvature cones on R^4: scalar, half-isotropic (plus/minus), and their
intersection, with membership margins, inradii, and the frame-based isotropic
curvature minimization used as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curvature, lambda2
from .curvature import check_operator, decompose, require_bianchi_valid, scalar
from .lambda2 import MINUS_BASIS, PAIR_I, PAIR_J, PLUS_BASIS

CONE_IDS = ("scal", "ic_plus", "ic_minus", "ic")

BOUNDARY_TOL = 1e-9
WILKING_TOL = 1e-9

# Shift slope of each cone margin along the identity direction:
# scal(R + t Id) = scal(R) + 12 t, pic margins move by 2 t.
MARGIN_SLOPE = {"scal": 12.0, "ic_plus": 2.0, "ic_minus": 2.0, "ic": 2.0}


def _check_sign(sign):
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return sign


def pic_margin(r, sign="+"):
    """Margin of the half-isotropic cone: scal/6 minus the top eigenvalue of
    the chosen Weyl block.  Positive means strictly inside."""
    _check_sign(sign)
    d = decompose(r)
    w = d.wplus if sign == "+" else d.wminus
    return d.scal / 6.0 - float(np.linalg.eigvalsh(w)[-1])


def two_positive_margin(m):
    """Sum of the two lowest eigenvalues of a symmetric 3x3 form."""
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {m.shape}")
    ev = np.linalg.eigvalsh(m)
    return float(ev[0] + ev[1])


def cone_margin(r, cone):
    """Signed membership margin of one of the tracked cones."""
    if cone == "scal":
        return scalar(require_bianchi_valid(r))
    if cone == "ic_plus":
        return pic_margin(r, "+")
    if cone == "ic_minus":
        return pic_margin(r, "-")
    if cone == "ic":
        d = decompose(r)
        top_p = float(np.linalg.eigvalsh(d.wplus)[-1])
        top_m = float(np.linalg.eigvalsh(d.wminus)[-1])
        return d.scal / 6.0 - max(top_p, top_m)
    raise ValueError(f"unknown cone {cone!r}; choose from {CONE_IDS}")


def shift_to_margin(r, cone, target):
    """Shift along the identity so the chosen cone margin equals target."""
    m = cone_margin(r, cone)
    t = (float(target) - m) / MARGIN_SLOPE[cone]
    return check_operator(r) + t * np.eye(6)


def default_boundary_tol(r):
    return BOUNDARY_TOL * (1.0 + float(np.linalg.norm(r)))


@dataclass
class MembershipReport:
    """Margins of all tracked cones plus a tolerance-based classification."""

    margins: dict = field(default_factory=dict)
    classification: str = "neither"
    tol: float = BOUNDARY_TOL

    def to_json(self):
        out = {k: float(self.margins[k]) for k in CONE_IDS}
        out["class"] = self.classification
        return out


def _classify(mp, mm, tol):
    if mp > tol and mm > tol:
        return "PIC"
    if mp >= -tol and mm >= -tol:
        return "NNIC"
    if mp > tol:
        return "PIC+"
    if mp >= -tol:
        return "NNIC+"
    if mm > tol:
        return "PIC-"
    if mm >= -tol:
        return "NNIC-"
    return "neither"


def membership(r, tol=None):
    """Evaluate every cone margin and classify the operator.

    Interior within tol of a half cone reads PIC+/-, the closure reads
    NNIC+/-, two-sided labels take precedence, anything else is neither.
    """
    r = require_bianchi_valid(r)
    if tol is None:
        tol = default_boundary_tol(r)
    d = decompose(r)
    top_p = float(np.linalg.eigvalsh(d.wplus)[-1])
    top_m = float(np.linalg.eigvalsh(d.wminus)[-1])
    mp = d.scal / 6.0 - top_p
    mm = d.scal / 6.0 - top_m
    margins = {
        "scal": d.scal,
        "ic_plus": mp,
        "ic_minus": mm,
        "ic": min(mp, mm),
    }
    return MembershipReport(margins=margins, classification=_classify(mp, mm, tol), tol=tol)


def inradius(r, cone):
    """Largest t with R - t Id still inside the cone (closed forms)."""
    m = cone_margin(r, cone)
    if m < -default_boundary_tol(r):
        raise ValueError(f"operator lies outside the {cone} cone (margin {m:.3e})")
    d = decompose(r)
    if cone == "scal":
        return d.scal / 12.0
    if cone == "ic_plus":
        return (d.scal - 6.0 * float(np.linalg.eigvalsh(d.wplus)[-1])) / 12.0
    if cone == "ic_minus":
        return (d.scal - 6.0 * float(np.linalg.eigvalsh(d.wminus)[-1])) / 12.0
    top = max(float(np.linalg.eigvalsh(d.wplus)[-1]), float(np.linalg.eigvalsh(d.wminus)[-1]))
    return (d.scal - 6.0 * top) / 12.0


# ---------------------------------------------------------------------------
# frame-based isotropic curvature


def check_frame(f, tol=1e-12):
    """Validate an oriented orthonormal frame (special orthogonal 4x4)."""
    f = lambda2.check_rotation(f, tol=tol, name="frame")
    if np.linalg.det(f) < 0.0:
        raise ValueError("frame is orientation reversing; compose with a flip first")
    return f


def _pair_values(r, frames, flip):
    # frames: (n, 4, 4); returns <R u, u> + <R v, v> for each frame, where
    # u = f1^f3 - f2^f4', v = f1^f4' + f2^f3 and f4' = flip * f4.
    f1 = frames[:, :, 0]
    f2 = frames[:, :, 1]
    f3 = frames[:, :, 2]
    f4 = flip * frames[:, :, 3]
    i, j = PAIR_I, PAIR_J

    def w(a, b):
        return a[:, i] * b[:, j] - a[:, j] * b[:, i]

    u = w(f1, f3) - w(f2, f4)
    v = w(f1, f4) + w(f2, f3)
    return np.einsum("ni,ij,nj->n", u, r, u) + np.einsum("ni,ij,nj->n", v, r, v)


def isotropic_value(r, frame):
    """Isotropic curvature sum of an oriented frame,
    <R u, u> + <R v, v> with u = f1^f3 - f2^f4 and v = f1^f4 + f2^f3."""
    r = require_bianchi_valid(r)
    frame = check_frame(frame)
    return float(_pair_values(r, frame[None], 1.0)[0])


def _project_rotation(m):
    u, _, vt = np.linalg.svd(m)
    g = u @ vt
    if np.linalg.det(g) < 0.0:
        u[:, -1] = -u[:, -1]
        g = u @ vt
    return g


def min_isotropic(r, sign="+", samples=10000, seed=0, polish=True, polish_steps=200):
    """Minimum isotropic value over the frame manifold.

    Frames are sampled uniformly from SO(4) through pairs of Haar quaternions;
    the minus cone reuses the same frames composed with an orientation flip.
    The best sample is then refined by projected gradient descent along the
    three frame directions that actually rotate the relevant Hodge eigenspace,
    with backtracking step halving.  The result converges from above to twice
    the two-positivity margin of the matching Weyl-plus-scalar block.
    """
    r = require_bianchi_valid(r)
    _check_sign(sign)
    flip = 1.0 if sign == "+" else -1.0
    rng = np.random.default_rng(seed)
    n = int(samples)
    if n < 1:
        raise ValueError("samples must be positive")
    q1 = lambda2.haar_quaternions(rng, n)
    q2 = lambda2.haar_quaternions(rng, n)
    frames = lambda2._quat_to_rot_batch(q1, q2)
    vals = _pair_values(r, frames, flip)
    best = int(np.argmin(vals))
    f_best = float(vals[best])
    if not polish:
        return f_best
    g = frames[best]
    f_best = _polish_frame(r, g, flip, f_best, polish_steps)
    return f_best


def _polish_frame(r, g, flip, f0, steps):
    # Descend on SO(4); only the self-dual (flip=+1) or anti-self-dual
    # (flip=-1) rotation directions move the objective.
    dirs = [
        lambda2.to_so4(w)
        for w in lambda2.selfdual_basis("+" if flip > 0 else "-")
    ]
    eye = np.eye(4)

    def f_of(mat):
        return float(_pair_values(r, mat[None], flip)[0])

    fval = f0
    step = 0.2
    h = 1e-6
    for _ in range(int(steps)):
        grad = np.array(
            [(f_of(g @ (eye + h * x)) - f_of(g @ (eye - h * x))) / (2.0 * h) for x in dirs]
        )
        gn = float(np.linalg.norm(grad))
        if gn < 1e-11 * (1.0 + abs(fval)):
            break
        direction = sum(c * x for c, x in zip(grad / gn, dirs))
        moved = False
        while step > 1e-12:
            trial = _project_rotation(g @ (eye - step * direction))
            ftrial = f_of(trial)
            if ftrial < fval - 1e-10 * step * gn:
                g = trial
                fval = ftrial
                moved = True
                step = min(step * 1.5, 0.5)
                break
            step *= 0.5
        if not moved:
            break
    return fval


# ---------------------------------------------------------------------------
# Wilking's nonnegativity set


@dataclass
class ComplexBivector:
    """Complex 2-form omega = re + i im given by two real bivectors."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        self.re = np.asarray(self.re, dtype=float)
        self.im = np.asarray(self.im, dtype=float)
        for part, label in ((self.re, "re"), (self.im, "im")):
            if part.shape != (6,) or not np.all(np.isfinite(part)):
                raise ValueError(f"{label} must be a finite 6-vector")


def in_wilking_set(omega, sign="+", tol=WILKING_TOL):
    """Membership in the zero-trace-square set inside the complexified Hodge
    eigenspace: both parts fixed by the projector, equal norms, orthogonal."""
    _check_sign(sign)
    p = lambda2.P_PLUS if sign == "+" else lambda2.P_MINUS
    re, im = omega.re, omega.im
    scale = 1.0 + float(re @ re + im @ im)
    if np.abs(p @ re - re).max() > tol * scale:
        return False
    if np.abs(p @ im - im).max() > tol * scale:
        return False
    if abs(float(re @ re - im @ im)) > tol * scale:
        return False
    if abs(float(re @ im)) > tol * scale:
        return False
    return True


def wilking_value(r, omega, tol=WILKING_TOL):
    """Hermitian evaluation <R re, re> + <R im, im>; rejects omega outside
    the set (either orientation)."""
    r = require_bianchi_valid(r)
    if not (in_wilking_set(omega, "+", tol) or in_wilking_set(omega, "-", tol)):
        raise ValueError("omega is not in the Wilking set for either orientation")
    return float(omega.re @ r @ omega.re + omega.im @ r @ omega.im)


def sample_wilking(rng, sign="+"):
    """Random unit-normalized member: an orthonormal pair in the eigenspace."""
    basis = PLUS_BASIS if _check_sign(sign) == "+" else MINUS_BASIS
    a, b = rng.standard_normal((2, 3))
    a = a / np.linalg.norm(a)
    b = b - (b @ a) * a
    b = b / np.linalg.norm(b)
    return ComplexBivector(re=basis @ a, im=basis @ b)


def wilking_min(r, sign="+", samples=4096, seed=0):
    """Minimum sampled wilking_value; converges from above to the
    two-positivity margin of the matching block."""
    r = require_bianchi_valid(r)
    basis = PLUS_BASIS if _check_sign(sign) == "+" else MINUS_BASIS
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((int(samples), 3))
    b = rng.standard_normal((int(samples), 3))
    a = a / np.linalg.norm(a, axis=1, keepdims=True)
    b = b - np.sum(b * a, axis=1, keepdims=True) * a
    b = b / np.linalg.norm(b, axis=1, keepdims=True)
    block = basis.T @ r @ basis
    vals = np.einsum("ni,ij,nj->n", a, block, a) + np.einsum("ni,ij,nj->n", b, block, b)
    return float(vals.min())
