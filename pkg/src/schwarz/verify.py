"""Numeric continuation of Schwarz branches and sampled identity checks.

Branches of ``Q(z, w) = 0`` are tracked along straight segments by a
predictor-corrector Newton method.  The checks compare both sides of

* the involution ``conj(S(conj(S(z)))) = z``, and
* the reflection identity ``f(conj(S_A(z))) = conj(S_B(f(z)))``

at deterministic sample points near a base point of the curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpc, mpfr

from .curve import RealCurve, SchwarzForm, complexify, realify
from .errors import ClearanceError, ContinuationError, EvaluationError, ParameterError
from .numeric import DEFAULT_PRECISION, BigComplex, precision, to_big
from .parse import Node, is_rational_node, parse_expr, to_rational
from .puiseux import branch_points
from .ratmap import RationalMap, make_map

__all__ = [
    "MapExpr",
    "ContinuationPath",
    "VerificationReport",
    "eval_expr",
    "continue_schwarz",
    "verify_involution",
    "verify_reflection_identity",
    "sample_points",
    "sampling_radius",
    "DEFAULT_STEPS",
    "DEFAULT_TOL",
    "DEFAULT_SAMPLES",
]

DEFAULT_STEPS = 64
DEFAULT_TOL = 1e-9
DEFAULT_SAMPLES = 200
RADIUS_FACTOR = 0.05
MAX_HALVINGS = 12
GOLDEN = (math.sqrt(5) - 1) / 2


# ---------------------------------------------------------------------------
# map expressions


@dataclass(frozen=True)
class MapExpr:
    """Expression tree in ``z`` over ``+ - * /``, integer powers and ``exp``."""

    node: Node
    text: str = ""

    @classmethod
    def parse(cls, text: str) -> "MapExpr":
        node = parse_expr(text)
        _check_vars(node)
        return cls(node, text)

    @property
    def is_rational(self) -> bool:
        return is_rational_node(self.node)

    def to_rational_map(self) -> RationalMap:
        if not self.is_rational:
            raise ParameterError(f"{self.text!r} is not a rational map")
        return make_map(*to_rational(self.node, "z"))

    def __call__(self, z):
        return eval_expr(self, z)

    def __str__(self):
        return self.text


def _check_vars(node: Node):
    from .parse import ParseError

    if node.kind == "var" and node.args[0] != "z":
        raise ParseError(f"unknown variable {node.args[0]!r} (expected z)", node.pos)
    for a in node.args:
        if isinstance(a, Node):
            _check_vars(a)


def eval_expr(e: MapExpr | RationalMap, z) -> BigComplex:
    """Evaluate at the current precision; raises on near-zero division or overflow."""
    z = to_big(z)
    if isinstance(e, RationalMap):
        d = e.den.evalf(z)
        if abs(d) <= _tiny():
            raise EvaluationError("division by a near-zero value")
        return e.num.evalf(z) / d
    return _eval(e.node, z)


def _tiny():
    return mpfr(2) ** (-gmpy2.get_context().precision // 2)


def _eval(n: Node, z):
    k = n.kind
    if k == "num":
        return to_big(n.args[0])
    if k == "var":
        return z
    if k == "add":
        return _eval(n.args[0], z) + _eval(n.args[1], z)
    if k == "sub":
        return _eval(n.args[0], z) - _eval(n.args[1], z)
    if k == "mul":
        return _eval(n.args[0], z) * _eval(n.args[1], z)
    if k == "neg":
        return -_eval(n.args[0], z)
    if k == "div":
        num, den = _eval(n.args[0], z), _eval(n.args[1], z)
        if abs(den) <= _tiny() * max(1, abs(num)):
            raise EvaluationError("division by a near-zero value")
        return num / den
    if k == "pow":
        base = _eval(n.args[0], z)
        if n.args[1] < 0 and abs(base) <= _tiny():
            raise EvaluationError("negative power of a near-zero value")
        return base ** n.args[1]
    if k == "call":
        val = gmpy2.exp(_eval(n.args[1], z))
        if not (gmpy2.is_finite(val.real) and gmpy2.is_finite(val.imag)):
            raise EvaluationError("exp overflowed the exponent range")
        return val
    raise EvaluationError(f"cannot evaluate node {k}")


# ---------------------------------------------------------------------------
# continuation


@dataclass(frozen=True)
class ContinuationPath:
    start: object
    end: object
    steps: int = DEFAULT_STEPS
    clearance: float | None = None  # default 1e-3 * path length


class _NumericForm:
    """``Q`` with BigComplex coefficients, evaluating ``Q, Q_z, Q_w`` together."""

    def __init__(self, Q):
        self.Q = Q
        self.terms = [(i, j, to_big(c)) for (i, j), c in Q.terms.items()]
        self.dz = max(i for i, _, _ in self.terms)
        self.dw = max(j for _, j, _ in self.terms)

    def eval(self, z, w):
        zp = [mpc(1)]
        for _ in range(self.dz):
            zp.append(zp[-1] * z)
        wp = [mpc(1)]
        for _ in range(self.dw):
            wp.append(wp[-1] * w)
        az, aw = abs(z), abs(w)
        q = qz = qw = mpc(0)
        scale = mpfr(0)
        for i, j, c in self.terms:
            t = c * wp[j]
            q += t * zp[i]
            if i:
                qz += i * t * zp[i - 1]
            if j:
                qw += j * c * wp[j - 1] * zp[i]
            scale += abs(c) * az ** i * aw ** j
        return q, qz, qw, scale


_FORMS: dict = {}


def _numeric_form(Q) -> _NumericForm:
    key = (Q, gmpy2.get_context().precision)
    form = _FORMS.get(key)
    if form is None:
        if len(_FORMS) > 64:
            _FORMS.clear()
        form = _FORMS[key] = _NumericForm(Q)
    return form


def _newton(form: _NumericForm, z, w, bits, max_iter=30):
    eps = mpfr(2) ** (-bits + 8)
    last = None
    for it in range(max_iter):
        q, _, qw, _ = form.eval(z, w)
        if qw == 0:
            return None, it
        step = q / qw
        w = w - step
        size = abs(step)
        if size <= eps * max(1, abs(w)):
            return w, it
        if last is not None and size > last and it > 3:
            return None, it  # diverging
        last = size
    return None, max_iter


def _segment_distance(p, a, b):
    d = b - a
    L2 = abs(d) ** 2
    if L2 == 0:
        return abs(p - a)
    t = ((p - a) * d.conjugate()).real / L2
    t = max(mpfr(0), min(mpfr(1), t))
    return abs(p - (a + t * d))


def continue_schwarz(S: SchwarzForm, path: ContinuationPath, precision_bits: int = DEFAULT_PRECISION,
                     w0=None) -> BigComplex:
    """Track the branch through ``(start, w0)`` (default ``w0 = conj(start)``)
    along the straight path to ``end``; returns ``w(end)``."""
    Q = S.Q if isinstance(S, SchwarzForm) else S
    bits = precision_bits
    with precision(bits):
        a, b = to_big(path.start), to_big(path.end)
        length = abs(b - a)
        clearance = path.clearance if path.clearance is not None else 1e-3 * length
        for bp in branch_points(Q, max(bits, DEFAULT_PRECISION)):
            if _segment_distance(bp, a, b) < clearance or (length == 0 and bp == a):
                raise ClearanceError(f"path passes within {clearance} of branch point {complex(bp)}")
        form = _numeric_form(Q)
        w = to_big(w0) if w0 is not None else a.conjugate()
        w, _ = _newton(form, a, w, bits)
        if w is None:
            raise ContinuationError("Newton's method did not converge at the start point")
        if path.steps < 1:
            raise ParameterError("continuation needs at least one step")
        z = a
        dz_full = (b - a) / path.steps
        for _ in range(path.steps):
            w = _advance(form, z, w, dz_full, bits, 0)
            z = z + dz_full
        q, _, _, scale = form.eval(b, w)
        if abs(q) > mpfr(2) ** (-bits / 2) * max(scale, 1):
            raise ContinuationError(f"final residual {float(abs(q))} is too large")
        return w


def _advance(form, z, w, dz, bits, depth):
    q, qz, qw, _ = form.eval(z, w)
    if qw == 0:
        raise ContinuationError("singular branch (Q_w = 0) on the path")
    slope = -qz / qw
    pred = w + slope * dz
    new, _ = _newton(form, z + dz, pred, bits)
    tol = mpfr(2) ** (-bits / 4) * (1 + abs(w))
    if new is not None and abs(new - pred) <= abs(pred - w) / 2 + tol:
        return new
    if depth >= MAX_HALVINGS:
        raise ContinuationError("step refinement exhausted; path too close to a singularity")
    half = dz / 2
    mid = _advance(form, z, w, half, bits, depth + 1)
    return _advance(form, z + half, mid, half, bits, depth + 1)


# ---------------------------------------------------------------------------
# sampling


@dataclass
class VerificationReport:
    samples: int
    max_residual: float
    tolerance: float
    passed: bool
    failures: list = field(default_factory=list)
    points: list = field(default_factory=list, repr=False)

    def to_json(self, dump_samples: bool = False) -> dict:
        out = {
            "samples": self.samples,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "failures": [[float(z.real), float(z.imag)] for z in self.failures],
        }
        if dump_samples:
            out["sample_points"] = [[float(z.real), float(z.imag)] for z in self.points]
        return out


def _gradient(P, x, y):
    px = P.derivative("x")
    py = P.derivative("y")
    return px.evalf((x, y)), py.evalf((x, y))


def _check_base(C: RealCurve, base: BigComplex):
    x, y = base.real, base.imag
    val = C.P.evalf((x, y))
    gx, gy = _gradient(C.P, x, y)
    g = abs(mpc(gx.real, gy.real))
    scale = sum(abs(to_big(c)) * abs(x) ** i * abs(y) ** j for (i, j), c in C.P.terms.items())
    if abs(val) > 1e-20 * max(scale, 1) and abs(val) / max(g, _tiny()) > 1e-12:
        raise ParameterError(f"base {complex(base)} is not on the curve {C.P}")
    if g <= 1e-12 * max(scale, 1):
        raise ParameterError(f"base {complex(base)} is a singular point of {C.P}")


def sampling_radius(C: RealCurve, base, branch_pts=()) -> mpfr:
    """``0.05 * min(curvature radius, distance to the nearest branch point)``."""
    x, y = to_big(base).real, to_big(base).imag
    P = C.P
    px, py = (d.real for d in _gradient(P, x, y))
    pxx = P.derivative("x").derivative("x").evalf((x, y)).real
    pyy = P.derivative("y").derivative("y").evalf((x, y)).real
    pxy = P.derivative("x").derivative("y").evalf((x, y)).real
    g2 = px * px + py * py
    kappa = abs(pxx * py * py - 2 * pxy * px * py + pyy * px * px) / g2 ** mpfr(1.5)
    cands = []
    if kappa > 0:
        cands.append(1 / kappa)
    cands.extend(abs(to_big(base) - bp) for bp in branch_pts)
    if not cands:
        cands.append(max(mpfr(1), abs(to_big(base))))
    return RADIUS_FACTOR * min(cands)


def sample_points(C: RealCurve, base, count: int, radius) -> list[BigComplex]:
    """Deterministic samples: half on the curve near ``base``, half in the disk."""
    base = to_big(base)
    P = C.P
    x0, y0 = base.real, base.imag
    px, py = (d.real for d in _gradient(P, x0, y0))
    g = gmpy2.sqrt(px * px + py * py)
    tx, ty = -py / g, px / g
    on = count // 2
    pts = []
    for j in range(on):
        s = radius * (2 * ((j + 1) * GOLDEN % 1) - 1)
        x, y = x0 + s * tx, y0 + s * ty
        for _ in range(4):
            v = P.evalf((x, y)).real
            gx, gy = (d.real for d in _gradient(P, x, y))
            n2 = gx * gx + gy * gy
            x, y = x - v * gx / n2, y - v * gy / n2
        pts.append(mpc(x, y))
    off = count - on
    angle = 2 * gmpy2.const_pi() * (1 - GOLDEN)
    for j in range(off):
        r = radius * gmpy2.sqrt((j + mpfr(0.5)) / off)
        pts.append(base + r * gmpy2.exp(mpc(0, angle * j)))
    return pts


def _report(residuals, points, tol) -> VerificationReport:
    worst = max(residuals) if residuals else 0.0
    failures = [z for z, r in zip(points, residuals) if r > tol]
    return VerificationReport(len(points), float(worst), tol, worst <= tol, failures, list(points))


def verify_involution(C: RealCurve | SchwarzForm, base, samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL,
                      precision_bits: int = DEFAULT_PRECISION, steps: int = DEFAULT_STEPS,
                      radius=None) -> VerificationReport:
    """Check ``conj(S(conj(S(z)))) = z`` near ``base`` on the curve ``C``."""
    if isinstance(C, SchwarzForm):
        S, C = C, realify(C.Q)
    else:
        S = complexify(C)
    with precision(precision_bits):
        base = to_big(base)
        _check_base(C, base)
        bps = branch_points(S, max(precision_bits, DEFAULT_PRECISION))
        rho = to_big(radius).real if radius is not None else sampling_radius(C, base, bps)
        pts = sample_points(C, base, samples, rho)
        residuals = []
        for z in pts:
            w = continue_schwarz(S, ContinuationPath(base, z, steps), precision_bits)
            zeta = w.conjugate()
            back = continue_schwarz(S, ContinuationPath(base, zeta, steps), precision_bits)
            residuals.append(float(abs(back.conjugate() - z) / max(1, abs(z))))
        return _report(residuals, pts, tol)


def verify_reflection_identity(f, A: RealCurve, B: RealCurve, base, samples: int = DEFAULT_SAMPLES,
                               tol: float = DEFAULT_TOL, precision_bits: int = DEFAULT_PRECISION,
                               steps: int = DEFAULT_STEPS, radius=None) -> VerificationReport:
    """Check ``f(conj(S_A(z))) = conj(S_B(f(z)))`` near ``base`` on ``A``."""
    if isinstance(f, str):
        f = MapExpr.parse(f)
    SA, SB = complexify(A), complexify(B)
    with precision(precision_bits):
        base = to_big(base)
        _check_base(A, base)
        fb = eval_expr(f, base)
        val = B.P.evalf((fb.real, fb.imag))
        gx, gy = (d.real for d in _gradient(B.P, fb.real, fb.imag))
        dist = abs(val) / max(gmpy2.sqrt(gx * gx + gy * gy), _tiny())
        if dist > 1e-6:
            raise ParameterError(f"f(base) = {complex(fb)} is not on the target curve {B.P}")
        bps = branch_points(SA, max(precision_bits, DEFAULT_PRECISION))
        rho = to_big(radius).real if radius is not None else sampling_radius(A, base, bps)
        pts = sample_points(A, base, samples, rho)
        residuals = []
        for z in pts:
            sa = continue_schwarz(SA, ContinuationPath(base, z, steps), precision_bits)
            lhs = eval_expr(f, sa.conjugate())
            fz = eval_expr(f, z)
            sb = continue_schwarz(SB, ContinuationPath(fb, fz, steps), precision_bits)
            rhs = sb.conjugate()
            residuals.append(float(abs(lhs - rhs) / max(1, abs(lhs))))
        return _report(residuals, pts, tol)
