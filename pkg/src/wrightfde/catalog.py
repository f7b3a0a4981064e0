"""Closed-form transform pairs and preset problems with analytic solutions.

Every closed form here is ``E[z(T_beta(t))]`` for an elementary ODE solution
``z``, written with Mittag-Leffler functions.
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError, DomainError, ResonanceError
from .problems import Forcing, LinearFdeProblem
from .specfun import FracOrder, as_beta, loggamma, mittag_leffler, ml_partial_r, transform_series

# terms kept when summing the binomial rows of the pair table
PAIR_SERIES_TERMS = 240


def _tb(beta, t):
    return np.asarray(t, dtype=float) ** as_beta(beta)


def _power_term(beta, t, k):
    """``t**(k beta) / Gamma(k beta + 1)``."""
    b = as_beta(beta)
    return np.exp(-loggamma(k * b + 1.0)) * np.asarray(t, dtype=float) ** (k * b)


def cos_beta(beta, t, omega=1.0):
    tb = _tb(beta, t)
    return mittag_leffler(-(omega * omega) * tb * tb, 2 * as_beta(beta))


def sin_beta(beta, t, omega=1.0):
    """Transform of ``sin(omega t)``."""
    b = as_beta(beta)
    tb = _tb(b, t)
    return omega * tb * mittag_leffler(-(omega * omega) * tb * tb, 2 * b, b + 1)


def cosh_beta(beta, t):
    tb = _tb(beta, t)
    return mittag_leffler(tb * tb, 2 * as_beta(beta))


def sinh_beta(beta, t):
    b = as_beta(beta)
    tb = _tb(b, t)
    return tb * mittag_leffler(tb * tb, 2 * b, b + 1)


def exp_beta(beta, t, rate=1.0):
    return mittag_leffler(rate * _tb(beta, t), as_beta(beta))


# ---------------------------------------------------------------------------
# transform pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransformPair:
    """``func`` is the ODE-side ``f``; ``transformed(beta, t)`` is ``f_beta``.

    ``derivatives(n)``, when present, returns ``f^(k)(0)`` for ``k < n``
    (the binomial rows are summed from these).
    """

    name: str
    func: Callable
    transformed: Callable
    formula: str = ""
    derivatives: Optional[Callable] = None


def _binomial_transform(derivs):
    def transformed(beta, t):
        coeffs = derivs(PAIR_SERIES_TERMS)
        b = as_beta(beta)
        tt = np.atleast_1d(np.asarray(t, dtype=float))
        # convergence check on the tail of the truncated sum
        tmax = float(tt.max()) if tt.size else 0.0
        if tmax > 0:
            n = np.arange(PAIR_SERIES_TERMS - 10, PAIR_SERIES_TERMS)
            tail = np.abs(np.asarray(coeffs)[n]) * np.exp(n * b * math.log(tmax) - loggamma(n * b + 1.0))
            if tail.max() > 1e-15 * max(1.0, float(np.abs(coeffs).max())):
                raise ConvergenceError(f"pair series not converged at t={tmax}")
        return transform_series(coeffs, b, t)
    return transformed


def _exp_trig_derivs(sign, kind):
    """Printed row coefficients for ``e^{sign t} cos t`` / ``e^{sign t} sin t``."""
    def derivs(n_terms):
        out = []
        for n in range(n_terms):
            if kind == "cos":
                if sign > 0:
                    c = sum(math.comb(n, 2 * k) * (-1) ** k for k in range(n // 2 + 1))
                else:
                    c = sum(math.comb(n, 2 * k) * (-1) ** (n - k) for k in range(n // 2 + 1))
            else:
                if sign > 0:
                    c = sum(math.comb(n, 2 * k + 1) * (-1) ** k for k in range((n - 1) // 2 + 1))
                else:
                    c = sum(math.comb(n, 2 * k + 1) * (-1) ** (n - k - 1) for k in range((n - 1) // 2 + 1))
            out.append(float(c))
        return out
    return derivs


def _g_trig_derivs(kind, g_derivs):
    def derivs(n_terms):
        gd = g_derivs(n_terms)
        out = []
        for n in range(n_terms):
            if kind in ("cos", "cosh"):
                ks = range(n // 2 + 1)
                terms = [math.comb(n, 2 * k) * gd[n - 2 * k] * ((-1) ** k if kind == "cos" else 1) for k in ks]
            else:
                ks = range((n - 1) // 2 + 1) if n > 0 else ()
                terms = [math.comb(n, 2 * k + 1) * gd[n - 2 * k - 1] * ((-1) ** k if kind == "sin" else 1) for k in ks]
            out.append(math.fsum(terms))
        return out
    return derivs


def _default_g(t):
    return np.exp(-0.5 * np.asarray(t, dtype=float))


def _default_g_derivs(n_terms):
    return [(-0.5) ** j for j in range(n_terms)]


def g_product_pair(kind, g=_default_g, g_derivs=_default_g_derivs, name=None):
    """Pair for ``g(t) * kind(t)``; ``g_derivs(n)`` lists ``g^(j)(0)``, ``j < n``.

    The default ``g(t) = exp(-t/2)``.
    """
    trig = {"cos": np.cos, "sin": np.sin, "cosh": np.cosh, "sinh": np.sinh}[kind]
    derivs = _g_trig_derivs(kind, g_derivs)
    return TransformPair(
        name or f"g*{kind}",
        lambda t: g(t) * trig(np.asarray(t, dtype=float)),
        _binomial_transform(derivs),
        f"sum_n [binomial sum of g^(j)(0)] t^(n beta)/Gamma(n beta+1), g*{kind}",
        derivs,
    )


def power_pair(n):
    n = int(n)
    if n < 0:
        raise DomainError("power must be a non-negative integer")
    fact = math.factorial(n)
    return TransformPair(
        f"t^{n}",
        lambda t: np.asarray(t, dtype=float) ** n,
        lambda beta, t: fact * _power_term(beta, t, n),
        f"{n}! t^({n} beta)/Gamma({n} beta+1)",
        lambda m: [float(fact) if k == n else 0.0 for k in range(m)],
    )


def _arr(f):
    return lambda t: f(np.asarray(t, dtype=float))


def _exp_trig_pair(name, sign, kind):
    trig = np.cos if kind == "cos" else np.sin
    derivs = _exp_trig_derivs(sign, kind)
    return TransformPair(
        name,
        _arr(lambda t: np.exp(sign * t) * trig(t)),
        _binomial_transform(derivs),
        f"sum_n [binomial sum] t^(n beta)/Gamma(n beta+1)",
        derivs,
    )


def _periodic_derivs(cycle):
    return lambda n: [float(cycle[k % len(cycle)]) for k in range(n)]


PAIRS = {
    "t": power_pair(1),
    "t2": power_pair(2),
    "t3": power_pair(3),
    "t4": power_pair(4),
    "cos": TransformPair("cos", _arr(np.cos), cos_beta, "E_(2beta)(-t^(2beta))", _periodic_derivs((1, 0, -1, 0))),
    "sin": TransformPair("sin", _arr(np.sin), sin_beta, "t^beta E_(2beta,beta+1)(-t^(2beta))", _periodic_derivs((0, 1, 0, -1))),
    "exp": TransformPair("exp", _arr(np.exp), exp_beta, "E_beta(t^beta)", _periodic_derivs((1,))),
    "cosh": TransformPair("cosh", _arr(np.cosh), cosh_beta, "E_(2beta)(t^(2beta))", _periodic_derivs((1, 0))),
    "sinh": TransformPair("sinh", _arr(np.sinh), sinh_beta, "t^beta E_(2beta,beta+1)(t^(2beta))", _periodic_derivs((0, 1))),
    "exp*cos": _exp_trig_pair("exp*cos", 1.0, "cos"),
    "expneg*cos": _exp_trig_pair("expneg*cos", -1.0, "cos"),
    "exp*sin": _exp_trig_pair("exp*sin", 1.0, "sin"),
    "expneg*sin": _exp_trig_pair("expneg*sin", -1.0, "sin"),
    "g*cos": g_product_pair("cos"),
    "g*sin": g_product_pair("sin"),
    "g*cosh": g_product_pair("cosh"),
    "g*sinh": g_product_pair("sinh"),
}

BINOMIAL_ROWS = ("exp*cos", "expneg*cos", "exp*sin", "expneg*sin", "g*cos", "g*sin", "g*cosh", "g*sinh")


def get_pair(name) -> TransformPair:
    if name.startswith("t^"):
        return power_pair(int(name[2:]))
    try:
        return PAIRS[name]
    except KeyError:
        raise DomainError(f"unknown transform pair {name!r}; known: {', '.join(PAIRS)}, t^n") from None


def eval_pair(pair, beta, t):
    """``f_beta(t)`` for a pair (or a pair name)."""
    if isinstance(pair, str):
        pair = get_pair(pair)
    if np.any(np.asarray(t) < 0):
        raise DomainError("t must be >= 0")
    return pair.transformed(FracOrder(as_beta(beta)), t)


# ---------------------------------------------------------------------------
# second-order homogeneous equations
# ---------------------------------------------------------------------------

def characteristic_roots(a2, a1, a0):
    """Roots ``r1, r2`` of ``a2 r^2 + a1 r + a0`` and the case number (1, 2, 3)."""
    if a2 == 0:
        raise DomainError("a2 must be non-zero")
    disc = a1 * a1 - 4.0 * a2 * a0
    scale = max(a1 * a1, abs(4.0 * a2 * a0), 1e-300)
    if abs(disc) <= 1e-14 * scale:
        r = -a1 / (2.0 * a2)
        return r, r, 2
    if disc > 0:
        sq = math.sqrt(disc)
        return (-a1 - sq) / (2.0 * a2), (-a1 + sq) / (2.0 * a2), 1
    sq = cmath.sqrt(disc)
    return (-a1 - sq) / (2.0 * a2), (-a1 + sq) / (2.0 * a2), 3


def constants_from_initial(a2, a1, a0, z0, z1):
    """``(c1, c2)`` matching ``z(0) = z0``, ``z'(0) = z1``.

    Case 1 and 3 use ``z = c1 e^{r1 t} + c2 e^{r2 t}`` (complex conjugate
    constants in case 3); case 2 uses ``z = c2 e^{rt} + c1 t e^{rt}``.
    """
    r1, r2, case = characteristic_roots(a2, a1, a0)
    if case == 2:
        return z1 - r1 * z0, z0
    c2 = (z1 - r1 * z0) / (r2 - r1)
    c1 = z0 - c2
    return c1, c2


def second_order_homogeneous(a2, a1, a0, c1, c2, beta, t):
    """Solution of ``a2 (D^beta)^2 y + a1 D^beta y + a0 y = 0``.

    Distinct real roots: ``c2 E(r2 t^b) + c1 E(r1 t^b)``.  Repeated root:
    ``c2 E(r t^b) + c1 dE/dr``.  Complex roots ``r1 = conj(r2)``: the same
    combination as the real case with ``c1 = conj(c2)``, returned as
    ``2 Re(c2 E(r2 t^b))``; constants that do not form a conjugate pair
    raise :class:`DomainError` since the solution would not be real.
    """
    b = as_beta(beta)
    r1, r2, case = characteristic_roots(a2, a1, a0)
    tb = _tb(b, t)
    if case == 1:
        return c2 * mittag_leffler(r2 * tb, b) + c1 * mittag_leffler(r1 * tb, b)
    if case == 2:
        return c2 * mittag_leffler(r1 * tb, b) + c1 * ml_partial_r(r1, tb, b)
    c1c, c2c = complex(c1), complex(c2)
    if abs(c1c - c2c.conjugate()) > 1e-12 * max(1.0, abs(c1c), abs(c2c)):
        raise DomainError("complex roots need conjugate constants c1 = conj(c2) for a real solution")
    val = mittag_leffler(np.asarray(r2 * tb, dtype=complex), b)
    return np.real(2.0 * c2c * val) if np.ndim(t) else float(np.real(2.0 * c2c * val))


# ---------------------------------------------------------------------------
# beams
# ---------------------------------------------------------------------------

def beam_uniform_load(EI, w0, L, beta, t):
    """Deflection of the uniformly loaded beam, ``phi(0) = phi'(0) = 0``.

    ``(w0/24EI) (24 t^{4b}/G(4b+1) - 12 L t^{3b}/G(3b+1) + 2 L^2 t^{2b}/G(2b+1))``,
    the transform of ``(w0/24EI)(t^4 - 2L t^3 + L^2 t^2)``.
    """
    if not (EI > 0 and L > 0):
        raise DomainError("EI and L must be positive")
    b = as_beta(beta)
    return (w0 / (24.0 * EI)) * (
        24.0 * _power_term(b, t, 4) - 12.0 * L * _power_term(b, t, 3) + 2.0 * L * L * _power_term(b, t, 2)
    )


def beam_axial_load(params, beta, t):
    """Buckling-mode solution under axial load ``P = EI k^2``, ``k = n pi / L``.

    ``c1 cos_b(k t) + c2 sin_b(k t) + c3 t^b/Gamma(b+1) + c4``; ``params``
    keys ``n, L, c1..c4`` (defaults 1, 1, 1, 1, 1, 0).
    """
    p = {"n": 1, "L": 1.0, "c1": 1.0, "c2": 1.0, "c3": 1.0, "c4": 0.0}
    p.update(params or {})
    if not p["L"] > 0:
        raise DomainError("beam length must be positive")
    k = p["n"] * math.pi / p["L"]
    b = as_beta(beta)
    return (p["c1"] * cos_beta(b, t, k) + p["c2"] * sin_beta(b, t, k)
            + p["c3"] * _power_term(b, t, 1) + p["c4"])


# ---------------------------------------------------------------------------
# circuits and forced equations
# ---------------------------------------------------------------------------

def nonhom_exp(beta, t, a=1.0, y0=1.0, variant="derived"):
    """``D^b y + a y = E_b(t^b)``, ``y(0) = y0``.

    ``derived`` is the transform of ``(e^s - e^{-as})/(a+1) + y0 e^{-as}``;
    ``printed`` keeps ``+E_b(-a t^b)/(a+1)`` in place of the minus sign.
    """
    if a == -1:
        raise ResonanceError("a = -1 makes the forcing resonant")
    b = as_beta(beta)
    tb = _tb(b, t)
    grow = mittag_leffler(tb, b)
    decay = mittag_leffler(-a * tb, b)
    if variant == "derived":
        return grow / (a + 1) + (y0 - 1.0 / (a + 1)) * decay
    if variant == "printed":
        return grow / (a + 1) + decay / (a + 1) + y0 * decay
    raise DomainError(f"unknown variant {variant!r}")


def nonhom_t2(beta, t, omega=1.0, c1=1.0, c2=1.0):
    """``(D^b)^2 y + w^2 y = 2 t^{2b}/G(2b+1)``.

    ``c1 cos_b(wt) + c2 sin_b(wt) + (1/w^2) 2t^{2b}/G(2b+1) - 2/w^4``.
    """
    if omega == 0:
        raise DomainError("omega must be non-zero")
    b = as_beta(beta)
    w2 = omega * omega
    return (c1 * cos_beta(b, t, omega) + c2 * sin_beta(b, t, omega)
            + 2.0 * _power_term(b, t, 2) / w2 - 2.0 / (w2 * w2))


def nonhom_sin(beta, t, omega=2.0, C1=1.0, C2=1.0):
    """``(D^b)^2 y + w^2 y = sin_b(t)``: ``C1 cos_b(wt) + C2 sin_b(wt) + sin_b(t)/(w^2-1)``."""
    if abs(omega * omega - 1.0) < 1e-12:
        raise ResonanceError("omega = 1 is resonant with the forcing")
    b = as_beta(beta)
    return C1 * cos_beta(b, t, omega) + C2 * sin_beta(b, t, omega) + sin_beta(b, t) / (omega * omega - 1.0)


def relax_sin(beta, t, y0=0.0):
    """``D^b y + y = sin_b(t)``: transform of ``(sin s - cos s)/2 + (y0 + 1/2) e^{-s}``."""
    b = as_beta(beta)
    return 0.5 * (sin_beta(b, t) - cos_beta(b, t)) + (y0 + 0.5) * mittag_leffler(-_tb(b, t), b)


_NONHOM = {
    "nonhom-exp": nonhom_exp,
    "nonhom-t2": nonhom_t2,
    "nonhom-sin": nonhom_sin,
}


def nonhomogeneous_presets(name, params, beta, t):
    """Closed forms of the forced examples by preset name."""
    try:
        fn = _NONHOM[name]
    except KeyError:
        raise DomainError(f"unknown nonhomogeneous preset {name!r}") from None
    return fn(beta, t, **(params or {}))


# ---------------------------------------------------------------------------
# preset registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Preset:
    """Named problem with defaults, an ODE builder and (maybe) a closed form.

    ``build(params)`` returns ``(coefficients, initial_conditions, forcing)``;
    ``closed(beta, t, params)`` returns ``y_beta(t)`` or is None.
    """

    name: str
    equation: str
    ode: str
    defaults: dict
    build: Callable
    closed: Optional[Callable] = None
    figure: str = ""
    notes: str = ""
    extra_keys: tuple = field(default=())
    ic_key: Optional[str] = None  # parameter that sets y(0), if any

    def params(self, overrides=None):
        p = dict(self.defaults)
        for key, val in (overrides or {}).items():
            if key not in p and key not in self.extra_keys:
                raise DomainError(f"preset {self.name!r} has no parameter {key!r}; known: {', '.join(p)}")
            p[key] = val
        return p

    def problem(self, beta, **overrides) -> LinearFdeProblem:
        p = self.params(overrides)
        coeffs, ics, forcing = self.build(p)
        return LinearFdeProblem(coeffs, ics, FracOrder(as_beta(beta)), forcing, self.name, p)

    def closed_form(self, beta, t, **overrides):
        if self.closed is None:
            return None
        return self.closed(as_beta(beta), t, self.params(overrides))


def _rc_build(p):
    rc = p["R"] * p["C"]
    if not rc > 0:
        raise DomainError("R*C must be positive")
    return (1.0, 1.0 / rc), (p["V0"],), Forcing()


def _rc_closed(b, t, p):
    return p["V0"] * mittag_leffler(-_tb(b, t) / (p["R"] * p["C"]), b)


def _lc_build(p):
    w = p["omega"]
    return (0.0, 1.0, w * w), (p["y0"], p["y1"]), Forcing()


def _lc_closed(b, t, p):
    w = p["omega"]
    return p["y0"] * cos_beta(b, t, w) + (p["y1"] / w) * sin_beta(b, t, w)


def _beam_uniform_build(p):
    EI, w0, L = p["EI"], p["w0"], p["L"]
    return ((0.0, 0.0, 0.0, EI, 0.0), (0.0, 0.0, w0 * L * L / (12.0 * EI), -w0 * L / (2.0 * EI)),
            Forcing("const", {"value": w0}))


def _beam_axial_build(p):
    k = p["n"] * math.pi / p["L"]
    P = p["EI"] * k * k
    c1, c2, c3, c4 = p["c1"], p["c2"], p["c3"], p["c4"]
    return ((0.0, P, 0.0, p["EI"], 0.0), (c1 + c4, c2 * k + c3, -c1 * k * k, -c2 * k ** 3), Forcing())


def _nonhom_exp_build(p):
    return (1.0, p["a"]), (p["y0"],), Forcing("exp", {"amp": 1.0, "rate": 1.0})


def _nonhom_t2_build(p):
    w2 = p["omega"] ** 2
    return ((0.0, 1.0, w2), (p["c1"] - 2.0 / (w2 * w2), p["c2"] * p["omega"]),
            Forcing("poly", {"coeffs": (0.0, 0.0, 1.0)}))


def _nonhom_sin_build(p):
    w = p["omega"]
    if abs(w * w - 1.0) < 1e-12:
        raise ResonanceError("omega = 1 is resonant with the forcing")
    return ((0.0, 1.0, w * w), (p["C1"], p["C2"] * w + 1.0 / (w * w - 1.0)),
            Forcing("sin", {"amp": 1.0, "omega": 1.0}))


def _relax_sin_build(p):
    return (1.0, 1.0), (p["y0"],), Forcing("sin", {"amp": 1.0, "omega": 1.0})


def _cubic_build(p):
    return (1.0, 2.0, 1.0, 5.0), (p["y0"], p["y1"], p["y2"]), Forcing("exp", {"amp": 1.0, "rate": -1.0})


PRESETS = {}


def _register(preset):
    PRESETS[preset.name] = preset
    return preset


_register(Preset(
    "rc", "D^b V + V/(RC) = 0, V(0) = V0", "z' + z/(RC) = 0",
    {"R": 1.0, "C": 1.0, "V0": 1.0}, _rc_build, _rc_closed,
    notes="V0 E_b(-t^b/RC)", ic_key="V0",
))
_register(Preset(
    "lc-sin", "(D^b)^2 y + w^2 y = 0, y(0) = 0, D^b y(0) = 1", "z'' + w^2 z = 0",
    {"omega": 1.0, "y0": 0.0, "y1": 1.0}, _lc_build, _lc_closed,
    notes="w^2 = 1/(LC); y0 cos_b(wt) + (y1/w) sin_b(wt)", ic_key="y0",
))
_register(Preset(
    "lc-cos", "(D^b)^2 y + w^2 y = 0, y(0) = 1, D^b y(0) = 0", "z'' + w^2 z = 0",
    {"omega": 1.0, "y0": 1.0, "y1": 0.0}, _lc_build, _lc_closed,
    notes="w^2 = 1/(LC); y0 cos_b(wt) + (y1/w) sin_b(wt)", ic_key="y0",
))
_register(Preset(
    "beam-uniform", "EI (D^b)^4 phi = w0, phi(0) = 0", "EI z'''' = w0",
    {"EI": 1.0, "w0": 1.0, "L": 1.0},
    _beam_uniform_build, lambda b, t, p: beam_uniform_load(p["EI"], p["w0"], p["L"], b, t),
    figure="Fig. 1 (L=1, EI=w0)",
))
_register(Preset(
    "beam-axial", "EI (D^b)^4 phi + P (D^b)^2 phi = 0, P = EI (n pi/L)^2", "EI z'''' + P z'' = 0",
    {"n": 1, "L": 1.0, "EI": 1.0, "c1": 1.0, "c2": 1.0, "c3": 1.0, "c4": 0.0},
    _beam_axial_build, lambda b, t, p: beam_axial_load(p, b, t),
    notes="c1 cos_b(kt) + c2 sin_b(kt) + c3 t^b/G(b+1) + c4",
))
_register(Preset(
    "nonhom-exp", "D^b y + a y = E_b(t^b), y(0) = y0", "z' + a z = e^t",
    {"a": 1.0, "y0": 1.0}, _nonhom_exp_build,
    lambda b, t, p: nonhom_exp(b, t, p["a"], p["y0"], p.get("variant", "derived")),
    figure="Fig. 2", extra_keys=("variant",), ic_key="y0",
))
_register(Preset(
    "nonhom-t2", "(D^b)^2 y + w^2 y = 2 t^(2b)/G(2b+1)", "z'' + w^2 z = t^2",
    {"omega": 1.0, "c1": 1.0, "c2": 1.0}, _nonhom_t2_build,
    lambda b, t, p: nonhom_t2(b, t, p["omega"], p["c1"], p["c2"]),
    figure="Fig. 3; Figs. 7-8 with c1 = 2/w^4, c2 = 0 (zero initial data)",
))
_register(Preset(
    "nonhom-sin", "(D^b)^2 y + w^2 y = sin_b(t)", "z'' + w^2 z = sin t",
    {"omega": 2.0, "C1": 1.0, "C2": 1.0}, _nonhom_sin_build,
    lambda b, t, p: nonhom_sin(b, t, p["omega"], p["C1"], p["C2"]),
    figure="Fig. 4; Fig. 6 with C1 = 0, C2 = -1/(w(w^2-1)) (zero initial data)",
))
_register(Preset(
    "relax-sin", "D^b y + y = sin_b(t), y(0) = y0", "z' + z = sin t",
    {"y0": 0.0}, _relax_sin_build, lambda b, t, p: relax_sin(b, t, p["y0"]),
    figure="Fig. 5", ic_key="y0",
))
_register(Preset(
    "cubic-ffnn", "(D^b)^3 y + 2 (D^b)^2 y + D^b y + 5 y = E_b(-t^b)", "z''' + 2z'' + z' + 5z = e^-t",
    {"y0": 0.5, "y1": 0.0, "y2": 0.0}, _cubic_build, None,
    notes="no closed form; used for the network surrogate", ic_key="y0",
))


def get_preset(name) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None


def list_presets():
    """Rows ``(name, equation, ode, defaults, figure)`` for display."""
    return [
        {"name": p.name, "equation": p.equation, "ode": p.ode, "defaults": dict(p.defaults),
         "figure": p.figure, "closed_form": p.closed is not None, "notes": p.notes}
        for p in PRESETS.values()
    ]
