"""Jacobi-form coefficient data, theta decomposition, and operator checks.

A form of weight k and index m is stored through coefficients keyed by
(D, r mod 2m) with D = r^2 - 4nm, the invariant that makes the Fourier
coefficients well defined.  Writing theta_mu for the index-m theta series
with residue mu, every such form decomposes as

    phi(tau, z) = sum_mu h_mu(tau) theta_mu(tau, z),

and the h_mu assemble into a dual-type vector-valued expansion of weight
k - 1/2; both directions of that bookkeeping are exact here.  The
analytic layer provides truncated numeric evaluation with tail bounds,
the exact heat-operator cancellation that makes theta_mu holomorphic
input for the decomposition, and a finite-difference check of the
reduced Casimir operator -2 Delta_{k-1/2} + ((tau-taubar)^2/4 pi i m)
d_taubar d_z d_z, which annihilates phi exactly when the h_mu are
harmonic.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, sqrt as _fsqrt

from mpmath import exp, mp, mpc, mpf, pi

from .arith import is_prime
from .discform import DiscriminantForm
from .expansions import (
    HarmonicExpansion,
    TruncationError,
    VectorForm,
    _to_mpc,
    default_precision,
    eval_point,
    inc_gamma,
    laplacian_fd,
)
from .isomap import combine_to_scalar

__all__ = [
    "JacobiForm",
    "JacobiConsistencyReport",
    "theta_series_eval",
    "theta_decompose",
    "reconstruct",
    "heat_operator_term_check",
    "jacobi_eval_direct",
    "decomposition_consistency_check",
    "casimir_reduced_fd",
    "thm2_map",
    "random_jacobi_form",
]

# completeness declared for numeric evaluation of stored Jacobi data: the
# container holds all coefficients, so tails beyond this radius are zero
# and the generic window machinery just needs a horizon it cannot reach
_NUMERIC_WINDOW = 10**6


class JacobiForm:
    """Coefficient data of a weight-k, index-m form, keyed by (D, r mod 2m).

    `c_plus` holds the holomorphic-part coefficients, `c_minus` the ones
    attached to Gamma(3/2 - k, pi D y / m) (D > 0).  Keys are normalized
    to r in [0, 2m) and must satisfy D = r^2 mod 4m, so that
    n = (r^2 - D)/4m is an integer for every representative r; d_max
    bounds every stored D and declares the data complete beyond it.
    """

    __slots__ = ("k", "m", "c_plus", "c_minus", "d_max")

    def __init__(self, k: int, m: int, c_plus: dict, c_minus: dict | None = None,
                 d_max: int | None = None):
        if not isinstance(k, int):
            raise ValueError("weight k must be an integer")
        if not isinstance(m, int) or m < 1:
            raise ValueError("index m must be a positive integer")
        self.k = k
        self.m = m
        self.c_plus = self._normalize(c_plus, minus=False)
        self.c_minus = self._normalize(c_minus, minus=True)
        stored = [d for d, _ in self.c_plus] + [d for d, _ in self.c_minus]
        if d_max is None:
            d_max = max(stored, default=0)
        self.d_max = int(d_max)
        for d in stored:
            if d > self.d_max:
                raise ValueError(f"stored key D = {d} exceeds d_max = {self.d_max}")

    def _normalize(self, data: dict | None, minus: bool) -> dict:
        out: dict[tuple[int, int], object] = {}
        for (d, r), v in (data or {}).items():
            if v == 0:
                continue
            d = int(d)
            key = (d, r % (2 * self.m))
            if (d - r * r) % (4 * self.m):
                raise ValueError(f"key D = {d}, r = {r} violates D = r^2 mod 4m")
            if minus and d <= 0:
                raise ValueError("c_minus is supported on D > 0 only")
            if key in out and out[key] != v:
                raise ValueError(f"conflicting values for the class {key}")
            out[key] = v
        return out

    def n_index(self, d: int, r: int) -> int:
        """The q-exponent n = (r^2 - D)/4m of the representative (d, r)."""
        return (r * r - d) // (4 * self.m)

    def is_zero(self) -> bool:
        return not self.c_plus and not self.c_minus

    def __eq__(self, other):
        if not isinstance(other, JacobiForm):
            return NotImplemented
        return (
            self.k == other.k
            and self.m == other.m
            and self.c_plus == other.c_plus
            and self.c_minus == other.c_minus
            and self.d_max == other.d_max
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"JacobiForm(k={self.k}, m={self.m}, "
            f"{len(self.c_plus)}+ / {len(self.c_minus)}- classes, d_max={self.d_max})"
        )


# -- theta series --------------------------------------------------------


def _theta_tail(alpha: mpf, beta: mpf, radius: int) -> mpf:
    """Bound 2 sum_{r > radius} e^(-alpha r^2 + beta r), or reject."""
    edge = 2 * alpha * (radius + 1) - beta
    if not edge > 0:
        raise TruncationError("truncation radius too small for this point")
    x = exp(-edge)
    return 2 * exp(-alpha * (radius + 1) ** 2 + beta * (radius + 1)) / (1 - x)


def _class_range(mu: int, step: int, radius: int):
    """Integers r = mu mod step with |r| <= radius."""
    r0 = mu % step
    start = -((radius + r0) // step)
    stop = (radius - r0) // step
    return range(r0 + step * start, r0 + step * stop + 1, step)


def theta_series_eval(m: int, mu: int, tau, z, truncation: int, *,
                      accuracy: float | None = None,
                      precision: int | None = None):
    """Truncated sum of q^(r^2/4m) zeta^r over r = mu mod 2m, with tail bound.

    Returns (value, bound); the bound covers |r| > truncation under the
    Gaussian decay of the summand, and the call is rejected when the
    radius is too small to control the zeta^r growth at this z (or when
    an explicit `accuracy` is given and the bound exceeds it).
    """
    prec = precision or default_precision()
    with mp.workprec(prec):
        t = mpc(tau)
        zz = mpc(z)
        y = t.imag
        if not y > 0:
            raise ValueError("tau must lie in the upper half plane")
        radius = int(truncation)
        alpha = pi * y / (2 * m)
        beta = 2 * pi * abs(zz.imag)
        bound = _theta_tail(alpha, beta, radius)
        if accuracy is not None and not bound <= accuracy:
            raise TruncationError(
                f"theta tail bound {float(bound):.3g} exceeds accuracy {accuracy:.3g}"
            )
        val = mpc(0)
        for r in _class_range(mu, 2 * m, radius):
            val += exp(2j * pi * (Fraction(r * r, 4 * m) * t + r * zz))
        return val, bound


def _theta_truncation_for(m: int, y: mpf, v: mpf, margin: float) -> int:
    """Radius making the theta tail at (y, v) smaller than e^-margin."""
    alpha = float(pi) * float(y) / (2 * m)
    beta = 2 * float(pi) * abs(float(v))
    if alpha <= 0:
        raise ValueError("need Im tau > 0")
    # solve alpha R^2 - beta R >= margin and keep a couple of spare steps
    return int(ceil((beta + _fsqrt(beta * beta + 4 * alpha * margin)) / (2 * alpha))) + 2


# -- decomposition bookkeeping -------------------------------------------


def theta_decompose(phi: JacobiForm) -> VectorForm:
    """The components h_mu of phi = sum_mu h_mu theta_mu, as a dual vector form.

    A class (D, r) contributes its value at index N/4m with N = -D to
    component r; the Gamma argument pi D y / m of a c_minus class equals
    4 pi |N/4m| y, so the generic vector-component evaluation reproduces
    the Jacobi convention without any rescaling.  The result has weight
    k - 1/2.
    """
    m = phi.m
    n4 = 4 * m
    dim = 2 * m
    weight_num = 2 * phi.k - 1
    cps: dict[int, dict] = {g: {} for g in range(dim)}
    cms: dict[int, dict] = {g: {} for g in range(dim)}
    for (d, r), v in phi.c_plus.items():
        cps[r][Fraction(-d, n4)] = v
    for (d, r), v in phi.c_minus.items():
        cms[r][Fraction(-d, n4)] = v
    lo = Fraction(-phi.d_max, n4)
    stored = [Fraction(-d, n4) for d, _ in list(phi.c_plus) + list(phi.c_minus)]
    hi = max(stored + [lo, Fraction(0)])
    comps = {
        g: HarmonicExpansion(weight_num, cps[g], cms[g], window=(lo, hi))
        for g in range(dim)
    }
    return VectorForm(DiscriminantForm(m), weight_num, comps, dual=True)


def reconstruct(hs: VectorForm, m: int) -> JacobiForm:
    """Exact inverse of theta_decompose on stored coefficients."""
    if hs.df.m != m:
        raise ValueError(f"vector form has index {hs.df.m}, expected {m}")
    if not hs.dual:
        raise ValueError("theta components form a dual-type vector form")
    if not hs.support_congruence_ok():
        raise ValueError("component support violates the congruence invariant")
    if hs.weight_num % 2 == 0:
        raise ValueError("component weight must be half-integral")
    k = (hs.weight_num + 1) // 2
    n4 = 4 * m
    c_plus: dict[tuple[int, int], object] = {}
    c_minus: dict[tuple[int, int], object] = {}
    d_horizon = []
    for g in range(hs.df.size):
        comp = hs.components[g]
        d_horizon.append(floor(-n4 * Fraction(comp.window[0])))
        for n, v in comp.c_plus.items():
            c_plus[(-int(n4 * Fraction(n)), g)] = v
        for n, v in comp.c_minus.items():
            c_minus[(-int(n4 * Fraction(n)), g)] = v
    return JacobiForm(k, m, c_plus, c_minus, d_max=max(d_horizon))


def heat_operator_term_check(m: int, r: int) -> Fraction:
    """Apply d_tau - (1/8 pi i m) d_z d_z to q^(r^2/4m) zeta^r, exactly.

    Both derivative terms are rational multiples of 2 pi i on this
    one-term input, and the result (their sum in those units) must be 0:
    that cancellation is what keeps the theta series inside the heat
    kernel.
    """
    if m < 1:
        raise ValueError("index m must be positive")
    q_exponent = Fraction(r * r, 4 * m)
    # d_tau brings down 2 pi i times the q-exponent; each d_z brings down
    # 2 pi i r, so the second term is -(2 pi i r)^2 / (8 pi i m), which in
    # units of 2 pi i is -(4 pi^2 i^2 r^2) / (16 pi^2 i^2 m): the pi and i
    # factors cancel exactly and a pure rational remains.
    second = -Fraction(4 * r * r, 16 * m)
    return q_exponent + second


# -- numeric evaluation ---------------------------------------------------


def _numeric_components(phi: JacobiForm) -> dict[int, HarmonicExpansion]:
    """Decomposition components with the stored data declared complete."""
    hs = theta_decompose(phi)
    out = {}
    for g in range(hs.df.size):
        comp = hs.components[g]
        out[g] = HarmonicExpansion(
            comp.weight_num, comp.c_plus, comp.c_minus,
            window=(-_NUMERIC_WINDOW, _NUMERIC_WINDOW),
        )
    return out


def jacobi_eval_direct(phi: JacobiForm, tau, z, truncation: int, *,
                       precision: int | None = None):
    """Evaluate phi at (tau, z) straight from its (n, r) Fourier terms.

    Each stored class (D, r) is expanded over its representatives
    |r'| <= truncation, r' = r mod 2m, with q-exponent (r'^2 - D)/4m and,
    for c_minus classes, the constant factor Gamma(3/2 - k, pi D y / m).
    Returns (value, tail bound).
    """
    prec = precision or default_precision()
    m = phi.m
    with mp.workprec(prec):
        t = mpc(tau)
        zz = mpc(z)
        y = t.imag
        if not y > 0:
            raise ValueError("tau must lie in the upper half plane")
        radius = int(truncation)
        alpha = pi * y / (2 * m)
        beta = 2 * pi * abs(zz.imag)
        class_tail = _theta_tail(alpha, beta, radius)
        a = Fraction(3, 2) - phi.k
        val = mpc(0)
        bound = mpf(0)
        for (d, rc), v in sorted(phi.c_plus.items()):
            vc = _to_mpc(v)
            for r in _class_range(rc, 2 * m, radius):
                n = (r * r - d) // (4 * m)
                val += vc * exp(2j * pi * (n * t + r * zz))
            bound += abs(vc) * exp(pi * y * d / (2 * m)) * class_tail
        for (d, rc), v in sorted(phi.c_minus.items()):
            vc = _to_mpc(v)
            gam = inc_gamma(a, pi * d * y / m, prec)
            for r in _class_range(rc, 2 * m, radius):
                n = (r * r - d) // (4 * m)
                val += vc * gam * exp(2j * pi * (n * t + r * zz))
            bound += abs(vc) * gam * exp(pi * y * d / (2 * m)) * class_tail
        return val, bound


class JacobiConsistencyReport:
    """Per-point deviations of the direct sum against the decomposed one."""

    __slots__ = ("points", "deviations", "bounds", "passed")

    def __init__(self, points, deviations, bounds, slack):
        self.points = list(points)
        self.deviations = [float(d) for d in deviations]
        self.bounds = [float(b) for b in bounds]
        self.passed = all(
            d <= b + s for d, b, s in zip(deviations, bounds, slack)
        )

    def __repr__(self):
        verdict = "pass" if self.passed else "FAIL"
        worst = max(self.deviations, default=0.0)
        return f"JacobiConsistencyReport({verdict}, max deviation {worst:.3g})"


def decomposition_consistency_check(phi: JacobiForm, points, *,
                                    truncation: int = 60,
                                    precision: int | None = None) -> JacobiConsistencyReport:
    """Compare direct evaluation of phi with sum_mu h_mu(tau) theta_mu(tau, z).

    The two routes group the same Fourier terms differently and compute
    their exponents and Gamma factors through different bookkeeping, so
    agreement within the combined truncation bounds certifies the
    decomposition display on stored data.
    """
    prec = precision or default_precision()
    m = phi.m
    comps = _numeric_components(phi)
    deviations, bounds, slack = [], [], []
    with mp.workprec(prec):
        for p in points:
            tau, z = p
            direct, direct_bound = jacobi_eval_direct(phi, tau, z, truncation,
                                                      precision=prec)
            total = mpc(0)
            combined = direct_bound
            for g in range(2 * m):
                hv, hb = eval_point(comps[g], tau, accuracy=float("inf"),
                                    precision=prec)
                tv, tb = theta_series_eval(m, g, tau, z, truncation,
                                           precision=prec)
                total += hv * tv
                combined += abs(hv) * tb + abs(tv) * hb + hb * tb
            deviations.append(abs(direct - total))
            bounds.append(combined)
            slack.append(mpf(2) ** (12 - prec) * (1 + abs(direct) + abs(total)))
    return JacobiConsistencyReport(points, deviations, bounds, slack)


def casimir_reduced_fd(target, k: int, m: int, point, h: float = 1e-3, *,
                       theta_truncation: int | None = None,
                       precision: int | None = None,
                       component_accuracy: float = 1e-20):
    """Finite-difference reduced Casimir operator at (tau, z).

    Applies -2 Delta_{k-1/2} (in tau) plus ((tau - taubar)^2 / 4 pi i m)
    d_taubar d_z d_z to the evaluated form; `target` is a JacobiForm
    (evaluated through its theta decomposition) or a callable
    (tau, z) -> value.  Harmonic decomposition components make the result
    O(h^2); a non-harmonic component leaves a residual bounded away
    from 0.
    """
    prec = precision or default_precision()
    with mp.workprec(prec):
        tau0 = mpc(point[0])
        z0 = mpc(point[1])
        hh = mpf(h)
        if callable(target):
            phi_eval = target
        else:
            if target.k != k or target.m != m:
                raise ValueError("weight/index disagree with the stored form")
            comps = _numeric_components(target)
            if theta_truncation is None:
                margin = 0.7 * prec + 40
                theta_truncation = _theta_truncation_for(
                    m, tau0.imag - 2 * hh, abs(z0.imag) + 2 * hh, margin
                )

            def phi_eval(t, zz, _comps=comps, _r=theta_truncation):
                total = mpc(0)
                for g in range(2 * m):
                    hv, _ = eval_point(_comps[g], t, accuracy=component_accuracy,
                                       precision=prec)
                    tv, _ = theta_series_eval(m, g, t, zz, _r, precision=prec)
                    total += hv * tv
                return total

        lap = laplacian_fd(lambda t: phi_eval(t, z0), k - 1, tau0, h,
                           precision=prec)

        def dzz(t):
            return (phi_eval(t, z0 + hh) - 2 * phi_eval(t, z0)
                    + phi_eval(t, z0 - hh)) / hh**2

        mixed = ((dzz(tau0 + hh) - dzz(tau0 - hh)) / (2 * hh)
                 + 1j * (dzz(tau0 + 1j * hh) - dzz(tau0 - 1j * hh)) / (2 * hh)) / 2
        return -2 * lap + (tau0 - tau0.conjugate()) ** 2 / (4 * pi * 1j * m) * mixed


# -- the composite isomorphism -------------------------------------------


def thm2_map(phi: JacobiForm, *, allow_composite: bool = False) -> HarmonicExpansion:
    """Send a weight-k index-m form to its scalar plus-space expansion.

    The composite of theta_decompose and the component recombination; the
    result has weight k - 1/2 and passes the plus-space support check by
    construction.  k must be even (the odd case pairs with skew forms and
    different machinery) and m equal to 1 or prime unless overridden.
    """
    if phi.k % 2:
        raise ValueError("the composite map is defined for even weight k")
    if not (allow_composite or phi.m == 1 or is_prime(phi.m)):
        raise ValueError("m must be 1 or prime (pass allow_composite=True to override)")
    hs = theta_decompose(phi)
    if not hs.is_symmetric():
        raise ValueError(
            "even-weight forms satisfy c(D, -r) = c(D, r); the stored data does not"
        )
    return combine_to_scalar(hs)


def random_jacobi_form(k: int, m: int, rng, *, terms: int = 8) -> JacobiForm:
    """A random well-formed JacobiForm with small exact coefficients.

    Generated data respects the elliptic-law parity c(D, -r) = (-1)^k
    c(D, r), so even-weight output is valid thm2_map input.  For odd k
    the self-paired residues r = 0, m are skipped (their coefficients
    must vanish); odd weight and index 1 therefore gives the zero form.
    """
    n2 = 2 * m
    n4 = 4 * m
    sign = -1 if k % 2 else 1
    allowed = [r for r in range(n2) if sign > 0 or r not in (0, m)]

    def put(table, r, n, v):
        d = r * r - n4 * n
        table[(d, r)] = v
        table[(d, (-r) % n2)] = sign * v

    c_plus: dict[tuple[int, int], Fraction] = {}
    c_minus: dict[tuple[int, int], Fraction] = {}
    if not allowed:
        return JacobiForm(k, m, c_plus, c_minus)
    for _ in range(terms):
        put(c_plus, rng.choice(allowed), rng.randrange(-3, 6),
            Fraction(rng.randrange(-9, 10), rng.randrange(1, 7)))
    for _ in range(max(1, terms // 2)):
        put(c_minus, rng.choice(allowed), rng.randrange(-5, 0),
            Fraction(rng.randrange(-9, 10), rng.randrange(1, 7)))
    return JacobiForm(k, m, c_plus, c_minus)
