"""Hermite expansions of subordinators ``X = A(G)``.

``H_l`` are the probabilists' Hermite polynomials, orthogonal under the
standard Gaussian weight with ``E[H_l(Z)**2] = l!``.  Coefficients follow

    A(z) = C_0 + sum_{l>=1} C_l H_l(z) / sqrt(l!),
    C_l  = E[A(Z) H_l(Z) / sqrt(l!)].
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .errors import NonInvertibleCDF, QuadratureNonConvergence, RankUndetermined, RankViolation

RANK_TOL = 1e-8
MAX_GH_NODES = 512
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def hermite_poly(ell, z):
    """``H_ell(z)`` via ``H_{l+1} = z H_l - l H_{l-1}``."""
    if ell < 0:
        raise ValueError("order must be nonnegative")
    z = np.asarray(z, dtype=float)
    prev, cur = np.ones_like(z), z.copy()
    if ell == 0:
        return prev if z.ndim else float(prev)
    for l in range(1, ell):
        prev, cur = cur, z * cur - l * prev
    return cur if z.ndim else float(cur)


def normalized_hermite(L, z):
    """Rows ``H_l(z) / sqrt(l!)`` for ``l = 0..L`` (stable normalized recurrence)."""
    z = np.asarray(z, dtype=float)
    out = np.empty((L + 1,) + z.shape)
    out[0] = 1.0
    if L >= 1:
        out[1] = z
    for l in range(1, L):
        out[l + 1] = (z * out[l] - math.sqrt(l) * out[l - 1]) / math.sqrt(l + 1)
    return out


def _gh_coeffs(func, L, n):
    x, w = np.polynomial.hermite_e.hermegauss(n)
    w = w / _SQRT_2PI
    return normalized_hermite(L, x) @ (w * np.asarray(func(x), dtype=float))


def hermite_coeffs(func, L, *, breakpoints=None, method="auto", tol=1e-10):
    """Coefficients ``C_0..C_L`` of ``func`` in the normalized Hermite basis.

    ``method``: ``"gauss-hermite"`` (nodes from 4L, doubled until two
    successive answers agree to ``tol``), ``"adaptive"`` (piecewise adaptive
    quadrature split at ``breakpoints``; for kinks), ``"dense"`` (fine
    trapezoid on [-12, 12]; for piecewise-linear empirical maps).  ``"auto"``
    picks adaptive when breakpoints are given, Gauss-Hermite otherwise.
    """
    if method == "auto":
        method = "adaptive" if breakpoints else "gauss-hermite"
    if method == "gauss-hermite":
        n = max(4 * L, 16)
        prev = _gh_coeffs(func, L, n)
        while n < MAX_GH_NODES:
            n *= 2
            cur = _gh_coeffs(func, L, n)
            if np.max(np.abs(cur - prev)) <= tol:
                return cur
            prev = cur
        raise QuadratureNonConvergence(f"Gauss-Hermite coefficients did not settle to {tol} with {n} nodes")
    if method == "adaptive":
        edges = [-math.inf, *sorted(breakpoints or ()), math.inf]
        out = np.empty(L + 1)
        for l in range(L + 1):
            f = lambda z, l=l: func(z) * normalized_hermite(l, z)[l] * math.exp(-0.5 * z * z) / _SQRT_2PI
            total = 0.0
            for a, b in zip(edges[:-1], edges[1:]):
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", integrate.IntegrationWarning)
                    val, err = integrate.quad(f, a, b, epsabs=1e-14, epsrel=1e-12, limit=400)
                if err > tol:
                    raise QuadratureNonConvergence(f"coefficient {l}: error estimate {err:.3g}")
                total += val
            out[l] = total
        return out
    if method == "dense":
        z = np.linspace(-12.0, 12.0, 2**17 + 1)
        wts = np.exp(-0.5 * z * z) / _SQRT_2PI * (z[1] - z[0])
        wts[0] *= 0.5
        wts[-1] *= 0.5
        return normalized_hermite(L, z) @ (wts * np.asarray(func(z), dtype=float))
    raise ValueError(f"unknown method {method!r}")


def hermite_rank(coeffs, *, norm=None, tol=RANK_TOL):
    """Smallest ``l >= 1`` with ``|C_l| > tol * norm``; ``norm`` defaults to ``||A||_2``."""
    coeffs = np.asarray(coeffs, dtype=float)
    if norm is None:
        norm = math.sqrt(float(np.sum(coeffs**2)))
    thresh = tol * max(norm, 1e-300)
    for l in range(1, coeffs.size):
        if abs(coeffs[l]) > thresh:
            return l
    raise RankUndetermined(coeffs.size - 1)


def abs_coefficient(ell):
    """Closed form of the Hermite coefficients of ``|.|`` (zero for odd ``ell``).

    ``E|Z| H_n(Z) = 2 phi(0) H_{n-2}(0)`` for ``n >= 2``.
    """
    if ell == 0:
        return math.sqrt(2.0 / math.pi)
    if ell % 2:
        return 0.0
    k = (ell - 2) // 2
    h = (-1) ** k * math.exp(special.gammaln(2 * k + 1) - special.gammaln(k + 1) - k * math.log(2.0))
    return 2.0 / _SQRT_2PI * h / math.sqrt(math.factorial(ell))


# -- target marginal distributions -------------------------------------------------
@dataclass(frozen=True)
class GumbelCDF:
    c1: float = 0.0
    c2: float = 1.0

    def cdf(self, x):
        return np.exp(-np.exp(-(np.asarray(x, dtype=float) - self.c1) / self.c2))

    def ppf(self, u):
        return self.c1 - self.c2 * np.log(-np.log(np.asarray(u, dtype=float)))

    def from_gaussian(self, z):
        return self.c1 - self.c2 * np.log(-special.log_ndtr(np.asarray(z, dtype=float)))

    def to_gaussian(self, x):
        # Phi^{-1}(exp(-exp(-y)))
        y = (np.asarray(x, dtype=float) - self.c1) / self.c2
        return special.ndtri(np.exp(-np.exp(-y)))


@dataclass(frozen=True)
class LaplaceCDF:
    c1: float = 0.0
    c2: float = 1.0

    def cdf(self, x):
        y = (np.asarray(x, dtype=float) - self.c1) / self.c2
        return np.where(y <= 0, 0.5 * np.exp(np.minimum(y, 0)), 1.0 - 0.5 * np.exp(-np.maximum(y, 0)))

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            lo = self.c1 + self.c2 * np.log(2.0 * u)
            hi = self.c1 - self.c2 * np.log(2.0 * (1.0 - u))
        return np.where(u <= 0.5, lo, hi)

    def from_gaussian(self, z):
        z = np.asarray(z, dtype=float)
        # lower tail via log Phi(z), upper tail via log Phi(-z) = log(1 - Phi(z))
        lo = self.c1 + self.c2 * (math.log(2.0) + special.log_ndtr(z))
        hi = self.c1 - self.c2 * (math.log(2.0) + special.log_ndtr(-z))
        return np.where(z <= 0, lo, hi)

    def to_gaussian(self, x):
        y = (np.asarray(x, dtype=float) - self.c1) / self.c2
        # Phi(z) = exp(y)/2 below the median, 1 - exp(-y)/2 above
        lo = special.ndtri(0.5 * np.exp(np.minimum(y, 0)))
        hi = -special.ndtri(0.5 * np.exp(-np.maximum(y, 0)))
        return np.where(y <= 0, lo, hi)


@dataclass(frozen=True, eq=False)
class EmpiricalCDF:
    """Empirical marginal from a sample.

    Quantiles interpolate the order statistics linearly at plotting positions
    ``(i - 1/2) / n``; the map is clamped at probabilities ``1/(2n)`` and
    ``1 - 1/(2n)``.
    """

    sorted_values: np.ndarray
    max_tie_fraction: float = 0.1

    def __post_init__(self):
        v = np.sort(np.asarray(self.sorted_values, dtype=float).ravel())
        if v.size < 2 or not np.all(np.isfinite(v)):
            raise NonInvertibleCDF("need at least two finite samples")
        uniq, counts = np.unique(v, return_counts=True)
        if uniq.size < 2 or counts.max() > self.max_tie_fraction * v.size:
            raise NonInvertibleCDF(
                f"sample has a flat CDF region: one value carries {counts.max() / v.size:.1%} of the mass"
            )
        n = v.size
        pos = (np.arange(1, n + 1) - 0.5) / n
        # average plotting position over ties so the inverse map is single-valued
        first = np.searchsorted(v, uniq, side="left")
        last = np.searchsorted(v, uniq, side="right") - 1
        object.__setattr__(self, "sorted_values", v)
        object.__setattr__(self, "_positions", pos)
        object.__setattr__(self, "_uniq", uniq)
        object.__setattr__(self, "_uniq_pos", 0.5 * (pos[first] + pos[last]))

    @classmethod
    def from_sample(cls, sample, **kw):
        return cls(np.asarray(sample, dtype=float), **kw)

    @property
    def n(self):
        return self.sorted_values.size

    def ppf(self, u):
        return np.interp(np.asarray(u, dtype=float), self._positions, self.sorted_values)

    def cdf(self, x):
        return np.interp(np.asarray(x, dtype=float), self._uniq, self._uniq_pos)

    def from_gaussian(self, z):
        return self.ppf(special.ndtr(np.asarray(z, dtype=float)))

    def to_gaussian(self, x):
        return special.ndtri(self.cdf(x))


# -- maps ---------------------------------------------------------------------------
@dataclass(frozen=True)
class _Identity:
    def __call__(self, z):
        return np.asarray(z, dtype=float)

    def inverse(self, x):
        return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class _ShiftedAbs:
    shift: float = 0.0

    def __call__(self, z):
        return np.abs(np.asarray(z, dtype=float) + self.shift)


@dataclass(frozen=True)
class _Sign:
    def __call__(self, z):
        return np.sign(np.asarray(z, dtype=float))


@dataclass(frozen=True)
class _HermiteSum:
    weights: tuple  # ((ell, a_ell), ...): A = sum a_ell H_ell

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        out = np.zeros_like(z)
        for ell, a in self.weights:
            out = out + a * hermite_poly(int(ell), z)
        return out


@dataclass(frozen=True, eq=False)
class _CdfMap:
    target: object

    def __call__(self, z):
        return self.target.from_gaussian(z)

    def inverse(self, x):
        return self.target.to_gaussian(x)


@dataclass(eq=False)
class Subordinator:
    """A map ``A`` with lazily computed Hermite coefficients up to order ``L``.

    Coefficients are computed once and published as a single tuple, so a
    concurrent reader sees either nothing or the complete set.
    """

    map: object
    name: str = "A"
    breakpoints: tuple = ()
    L: int = 20
    method: str = "auto"
    spec: dict = field(default_factory=dict)
    _coeffs: tuple | None = field(default=None, repr=False)
    _norm: float | None = field(default=None, repr=False)

    def __call__(self, z):
        return self.map(z)

    @property
    def coeffs(self):
        if self._coeffs is None:
            c = hermite_coeffs(self.map, self.L, breakpoints=self.breakpoints or None, method=self.method)
            self._coeffs = tuple(float(x) for x in c)
        return np.array(self._coeffs)

    def c(self, ell):
        return self.coeffs[ell]

    @property
    def norm(self):
        """``||A||_2 = sqrt(E[A(Z)**2])``."""
        if self._norm is None:
            sq = _Squared(self.map)
            m2 = hermite_coeffs(sq, 0, breakpoints=self.breakpoints or None, method=self.method)[0]
            self._norm = math.sqrt(m2)
        return self._norm

    @property
    def rank(self):
        return hermite_rank(self.coeffs, norm=self.norm)

    @property
    def is_linear(self):
        c = self.coeffs
        return bool(np.all(np.abs(c[2:]) <= RANK_TOL * max(self.norm, 1e-300)))

    def require_rank_one(self):
        c1 = self.coeffs[1]
        if abs(c1) <= RANK_TOL * max(self.norm, 1e-300):
            raise RankViolation(f"{self.name}: C_1 = {c1:.3g}; the decomposition needs Hermite rank 1")

    def inverse(self, x):
        inv = getattr(self.map, "inverse", None)
        if inv is None:
            raise NonInvertibleCDF(f"{self.name} has no inverse")
        return inv(x)

    def to_dict(self):
        return dict(self.spec)


@dataclass(frozen=True)
class _Squared:
    f: object

    def __call__(self, z):
        v = np.asarray(self.f(z), dtype=float)
        return v * v


def identity():
    return Subordinator(_Identity(), "identity", spec={"kind": "identity"})


def absolute(shift=0.0):
    return Subordinator(_ShiftedAbs(shift), f"|z{shift:+g}|", breakpoints=(-shift,), spec={"kind": "abs", "shift": shift})


def sign():
    return Subordinator(_Sign(), "sign", breakpoints=(0.0,), spec={"kind": "sign"})


def hermite_sum(weights):
    """``A = sum_l a_l H_l``; ``weights`` maps order to ``a_l``."""
    items = tuple(sorted((int(k), float(v)) for k, v in dict(weights).items()))
    L = max(20, max((k for k, _ in items), default=0) + 2)
    name = " + ".join(f"{a:g}*H{k}" for k, a in items)
    return Subordinator(_HermiteSum(items), name, L=L, spec={"kind": "hermite_sum", "weights": {str(k): a for k, a in items}})


def subordinator_from_cdf(target, *, L=20):
    """``A = Phi_X^{-1} o Phi_G`` for a Gumbel, Laplace or empirical target."""
    if isinstance(target, LaplaceCDF):
        return Subordinator(_CdfMap(target), "laplace", breakpoints=(0.0,), L=L,
                            spec={"kind": "laplace", "c1": target.c1, "c2": target.c2})
    if isinstance(target, GumbelCDF):
        return Subordinator(_CdfMap(target), "gumbel", L=L, spec={"kind": "gumbel", "c1": target.c1, "c2": target.c2})
    if isinstance(target, EmpiricalCDF):
        return Subordinator(_CdfMap(target), "empirical", L=L, method="dense", spec={"kind": "empirical", "n": target.n})
    raise TypeError(f"unsupported target distribution {type(target).__name__}")


def from_dict(d):
    d = dict(d)
    kind = d.pop("kind")
    if kind == "identity":
        return identity()
    if kind == "abs":
        return absolute(d.get("shift", 0.0))
    if kind == "sign":
        return sign()
    if kind == "hermite_sum":
        return hermite_sum(d["weights"])
    if kind == "laplace":
        return subordinator_from_cdf(LaplaceCDF(d.get("c1", 0.0), d.get("c2", 1.0)))
    if kind == "gumbel":
        return subordinator_from_cdf(GumbelCDF(d.get("c1", 0.0), d.get("c2", 1.0)))
    if kind == "empirical":
        from .estimation import read_sample_csv

        return subordinator_from_cdf(EmpiricalCDF.from_sample(read_sample_csv(d["path"])))
    raise ValueError(f"unknown subordinator kind {kind!r}")


def apply(sub, path):
    """Pointwise ``X(t) = A(G(t))`` on the same grid."""
    return path.derive(np.asarray(sub(path.values), dtype=float), f"apply:{sub.name}")


def decompose_ST(sub, path, wavelet, j1):
    """Split ``(A(G) - C_0) * psi_j1`` into the linear part S and the remainder T.

    ``S = C_1 (G * psi_j1)`` and ``T = (A(G) - C_0 - C_1 G) * psi_j1``.  The
    constant ``C_0`` is removed explicitly; filtering alone would remove it as
    well because ``psi_hat(0) = 0``.
    """
    from .scattering import cwt

    sub.require_rank_one()
    c = sub.coeffs
    g = path.values
    S = cwt(path.derive(c[1] * g, "linear"), wavelet, j1)
    if sub.is_linear:
        T = S.derive(np.zeros_like(g), "remainder:0")
    else:
        resid = np.asarray(sub(g), dtype=float) - c[0] - c[1] * g
        T = cwt(path.derive(resid, "remainder"), wavelet, j1)
    return S, T
