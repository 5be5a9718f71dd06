"""Positive zeros x_{n,k} of the cross-product

    f_n(x) = J_n(Rx) Y_n(rx) - J_n(rx) Y_n(Rx),

located by bisection inside the phase brackets (a_k, b_k) on which h_n(x) =
x G(n/x) sweeps (k - 3/8, k + 1/8).  Each zero is classified by the size of
r x relative to the turning point at n:

    osc          r x >= (1+c) n
    upper_trans  n + n^{1/3+eps} <= r x < (1+c) n
    airy_band    |r x - n| < n^{1/3+eps}
    evanescent   r x <= n - n^{1/3+eps}
    small_n      n <= N (threshold regime, k-based shift)

and carries the lattice shift tau (0, psi(z), or 1/4) together with the
residual x - F(n, k - tau) against the homogeneous approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from . import specfun

__all__ = [
    "RegimeConfig",
    "SpectralZero",
    "f",
    "bracket",
    "find_zero",
    "zeros_up_to",
    "residual_report",
    "regime_bound",
    "zero_lower_bound",
    "scan_zeros",
]

from .errors import DomainError


@dataclass(frozen=True)
class RegimeConfig:
    """Free constants of the regime decomposition.

    c splits oscillatory from upper-transition, eps fixes the Airy-band
    width n^{1/3+eps}, n_large is the order threshold below which the
    k-based shift rule applies, k_small the index threshold of that rule.
    """

    c: float = 0.2
    eps: float = 0.25
    n_large: int = 30
    k_small: int = 30

    def __post_init__(self):
        if not (0.0 < self.c < 1.0):
            raise DomainError(f"regime constant c must lie in (0,1), got {self.c!r}")
        if not (0.0 < self.eps < 1.0 / 3.0):
            raise DomainError(f"band exponent eps must lie in (0,1/3), got {self.eps!r}")
        if self.n_large < 1 or self.k_small < 1:
            raise DomainError("regime thresholds must be >= 1")


@dataclass(frozen=True)
class SpectralZero:
    n: int
    k: int
    x: float
    regime: str
    z_local: float | None
    tau: float
    residual: float
    located_by: str = "bracket"
    near_boundary: bool = False


def zero_lower_bound(n: int, k: int) -> float:
    """Classical lower bound sqrt(n^2 + pi^2 (k-1/4)^2) < R x_{n,k}."""
    return math.sqrt(n * n + math.pi**2 * (k - 0.25) ** 2)


def f(geom: geo.AnnulusGeometry, n: int, x: float) -> float:
    """The cross-product f_n(x) (even in x; exposed for x > 0 only)."""
    if not (x > 0.0):
        raise DomainError(f"f_n requires x > 0, got {x!r}")
    return float(_f_vec(geom, n, np.array([x]))[0])


def _f_vec(geom: geo.AnnulusGeometry, n: int, xs: np.ndarray) -> np.ndarray:
    jR = specfun.jn_values(n, geom.R * xs)
    jr = specfun.jn_values(n, geom.r * xs)
    yR = specfun.yn_values(n, geom.R * xs)
    yr = specfun.yn_values(n, geom.r * xs)
    return jR * yr - jr * yR


def bracket(geom: geo.AnnulusGeometry, n: int, k: int, cfg: RegimeConfig
            ) -> tuple[float, float]:
    """(a_k, b_k) = h_n^{-1}(k - 3/8), h_n^{-1}(k + 1/8)."""
    if k < 1:
        raise DomainError(f"zero index k must be >= 1, got {k!r}")
    a = geo.h_inverse(geom, n, k - 0.375)
    b = geo.h_inverse(geom, n, k + 0.125)
    return a, b


def _bisect_vec(geom: geo.AnnulusGeometry, n: int, lo: np.ndarray, hi: np.ndarray,
                flo_sign: np.ndarray) -> np.ndarray:
    """Vector bisection of f_n over per-entry sign-changing intervals."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        same = np.sign(_f_vec(geom, n, mid)) == flo_sign
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
        if np.max(hi - lo) <= 1e-11 * max(1.0, float(np.max(hi))) * 0.5:
            break
    return 0.5 * (lo + hi)


def _bisect_scalar(geom: geo.AnnulusGeometry, n: int, lo: float, hi: float) -> float:
    slo = math.copysign(1.0, f(geom, n, lo))
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if math.copysign(1.0, f(geom, n, mid)) == slo:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-11 * max(1.0, hi) * 0.5:
            break
    return 0.5 * (lo + hi)


# sequential scan results for small orders, keyed by (geometry, n)
_SMALL_N_CACHE: dict[tuple[geo.AnnulusGeometry, int], list[float]] = {}


def _scan_step(geom: geo.AnnulusGeometry) -> float:
    # half the nominal spacing pi/(R-r), capped below the worst-case
    # minimal gap pi/sqrt(R^2-r^2) so no pair of zeros fits in one step
    lam = math.pi / (geom.R - geom.r)
    return min(0.5 * lam, 0.8 * math.pi / math.sqrt(geom.R**2 - geom.r**2))


def _small_n_zeros(geom: geo.AnnulusGeometry, n: int, count: int) -> list[float]:
    """First `count` zeros of f_n by forward scan plus bisection."""
    cached = _SMALL_N_CACHE.setdefault((geom, n), [])
    if len(cached) >= count:
        return cached[:count]
    step = _scan_step(geom)
    x = cached[-1] + 0.25 * step if cached else (1e-4 if n == 0 else n / geom.R * (1 + 1e-9))
    fx = f(geom, n, x)
    while len(cached) < count:
        x2 = x + step
        fx2 = f(geom, n, x2)
        if fx == 0.0:
            cached.append(x)
        elif np.sign(fx) != np.sign(fx2):
            cached.append(_bisect_scalar(geom, n, x, x2))
        x, fx = x2, fx2
    return cached[:count]


def _classify(geom: geo.AnnulusGeometry, n: int, k: int, x: float, cfg: RegimeConfig
              ) -> tuple[str, float | None, float, bool]:
    """(regime, z_local, tau, near_boundary) from the located zero."""
    rx = geom.r * x
    if n <= cfg.n_large:
        tau = 0.0 if k > cfg.k_small else 0.25
        return "small_n", None, tau, False
    band = float(n) ** (1.0 / 3.0 + cfg.eps)
    cb = float(np.cbrt(float(n)))
    zloc = (rx - n) / cb if abs(rx - n) < 2.0 * band else None
    thresholds = ((1.0 + cfg.c) * n, n + band, n - band)
    near = any(abs(rx - t) < 0.01 * t for t in thresholds)
    if rx >= thresholds[0]:
        regime, tau = "osc", 0.0
    elif rx >= thresholds[1]:
        regime, tau = "upper_trans", 0.0
    elif rx > thresholds[2]:
        regime, tau = "airy_band", geo.psi((rx - n) / cb)
    else:
        regime, tau = "evanescent", 0.25
    return regime, zloc, tau, near


def _finish(geom: geo.AnnulusGeometry, n: int, k: int, x: float, cfg: RegimeConfig,
            located_by: str) -> SpectralZero:
    regime, zloc, tau, near = _classify(geom, n, k, x, cfg)
    residual = x - geo.h_inverse(geom, n, k - tau)  # h_n^{-1} realizes F(n, .)
    return SpectralZero(n=n, k=k, x=x, regime=regime, z_local=zloc, tau=tau,
                        residual=residual, located_by=located_by, near_boundary=near)


def _fallback_scan(geom: geo.AnnulusGeometry, n: int, k: int) -> float:
    """Locate x_{n,k} when the phase bracket fails its sign condition.

    The zero always satisfies |h_n(x) - (k - 1/4)| < 3/8 while its
    neighbours stay outside (k - 3/4, k + 1/4), so a dense scan of that
    window isolates it."""
    lo = geo.h_inverse(geom, n, k - 0.75)
    hi = geo.h_inverse(geom, n, k + 0.25)
    for npts in (256, 2048, 16384):
        xs = np.linspace(lo, hi, npts)
        vals = _f_vec(geom, n, xs)
        sgn = np.sign(vals)
        idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
        if len(idx) == 1:
            return _bisect_scalar(geom, n, float(xs[idx[0]]), float(xs[idx[0] + 1]))
        if len(idx) > 1:
            # take the change whose phase is nearest the window centre
            hs = np.array([geo.h(geom, n, float(xs[i])) for i in idx])
            i = int(idx[np.argmin(np.abs(hs - (k - 0.25)))])
            return _bisect_scalar(geom, n, float(xs[i]), float(xs[i + 1]))
    raise RuntimeError(f"no sign change of f_{n} found near k={k}")


def find_zero(geom: geo.AnnulusGeometry, n: int, k: int,
              cfg: RegimeConfig = RegimeConfig()) -> SpectralZero:
    """Locate x_{n,k} to absolute tolerance 1e-11 max(1, x)."""
    if n <= cfg.n_large and k <= cfg.k_small:
        x = _small_n_zeros(geom, n, k)[k - 1]
        return _finish(geom, n, k, x, cfg, "scan")
    a, b = bracket(geom, n, k, cfg)
    fa, fb = f(geom, n, a), f(geom, n, b)
    if np.sign(fa) * np.sign(fb) < 0:
        x = _bisect_scalar(geom, n, a, b)
        return _finish(geom, n, k, x, cfg, "bracket")
    x = _fallback_scan(geom, n, k)
    return _finish(geom, n, k, x, cfg, "scan")


def zeros_up_to(geom: geo.AnnulusGeometry, n: int, mu: float,
                cfg: RegimeConfig = RegimeConfig()) -> list[SpectralZero]:
    """All zeros x_{n,k} <= mu in increasing k.

    Completeness is certified by locating the successor zero and checking
    that it lies above mu (each phase bracket holds exactly one zero)."""
    if mu <= 0.0:
        return []
    if n >= geom.R * mu:
        return []  # R x_{n,k} > n puts every zero above mu
    k_hi = max(1, int(math.floor(geo.h(geom, n, mu) + 0.7)) + 1)

    xs: list[float] = []
    located: list[str] = []

    k_scan = 0
    if n <= cfg.n_large:
        k_scan = min(cfg.k_small, k_hi)
        xs.extend(_small_n_zeros(geom, n, k_scan))
        located.extend(["scan"] * k_scan)
    if k_hi > k_scan:
        ks = np.arange(k_scan + 1, k_hi + 1, dtype=float)
        a = geo.h_inverse_vec(geom, n, ks - 0.375)
        b = geo.h_inverse_vec(geom, n, ks + 0.125)
        fa = _f_vec(geom, n, a)
        fb = _f_vec(geom, n, b)
        ok = np.sign(fa) * np.sign(fb) < 0
        found = _bisect_vec(geom, n, a, b, np.sign(fa))
        for j, k in enumerate(range(k_scan + 1, k_hi + 1)):
            if ok[j]:
                xs.append(float(found[j]))
                located.append("bracket")
            else:
                xs.append(_fallback_scan(geom, n, k))
                located.append("scan")
    # certify: extend until one zero beyond mu is in hand
    while xs[-1] <= mu:
        k_hi += 1
        z = find_zero(geom, n, k_hi, cfg)
        xs.append(z.x)
        located.append(z.located_by)

    out = []
    for i, x in enumerate(xs):
        if x <= mu:
            out.append(_finish(geom, n, i + 1, x, cfg, located[i]))
    return out


def regime_bound(geom: geo.AnnulusGeometry, n: int, k: int, regime: str,
                 cfg: RegimeConfig) -> float | None:
    """Size of the residual bound for one zero, None when no bound is claimed."""
    if regime == "osc":
        return 1.0 / (n + k)
    if regime == "upper_trans":
        gap = k - (geom.Gr / geom.r) * n
        return math.sqrt(n) * gap**-1.5 if gap > 0 else None
    if regime == "airy_band":
        return float(n) ** (-2.0 / 3.0 + 2.5 * cfg.eps)
    if regime == "evanescent":
        return float(n) ** (1.0 / 3.0) * float(k) ** (-4.0 / 3.0)
    if regime == "small_n":
        return 1.0 / (n + k) if k > cfg.k_small else None
    raise DomainError(f"unknown regime {regime!r}")


_ADJACENT = {
    "osc": ("upper_trans",),
    "upper_trans": ("osc", "airy_band"),
    "airy_band": ("upper_trans", "evanescent"),
    "evanescent": ("airy_band",),
}


def residual_report(geom: geo.AnnulusGeometry, n_values: list[int],
                    cfg: RegimeConfig = RegimeConfig(), span: float = 1.3,
                    ) -> tuple[list[dict], dict[str, float]]:
    """Residuals of every zero of the sampled orders against the regime
    bounds.  Returns (rows, max |residual|/bound per regime).

    Zeros within 1% of a regime threshold are tagged dual-regime and
    charged the weaker (larger) of the adjacent bounds.
    """
    rows: list[dict] = []
    worst: dict[str, float] = {}
    for n in n_values:
        mu_n = span * (1.0 + cfg.c) * n / geom.r + 5.0 / geom.G0
        for z in zeros_up_to(geom, n, mu_n, cfg):
            bound = regime_bound(geom, n, z.k, z.regime, cfg)
            if z.near_boundary and bound is not None:
                for other in _ADJACENT.get(z.regime, ()):
                    ob = regime_bound(geom, n, z.k, other, cfg)
                    if ob is not None:
                        bound = max(bound, ob)
            rows.append({
                "regime": z.regime, "n": n, "k": z.k, "x": z.x,
                "residual": z.residual, "bound": bound,
                "dual": z.near_boundary,
            })
            if bound is not None and bound > 0:
                ratio = abs(z.residual) / bound
                key = z.regime
                if ratio > worst.get(key, 0.0):
                    worst[key] = ratio
    return rows, worst


def scan_zeros(geom: geo.AnnulusGeometry, n: int, hi: float, step: float = 1e-3
               ) -> np.ndarray:
    """Exhaustive sign-scan zero locator (oracle-grade, no bracketing theory).

    Scans (n/R, hi] on a uniform grid and refines every sign change by
    bisection; independent of the h_n bracket construction."""
    lo = 1e-4 if n == 0 else n / geom.R * (1 + 1e-9)
    if hi <= lo:
        return np.empty(0)
    xs = np.arange(lo, hi + step, step)
    vals = _f_vec(geom, n, xs)
    sgn = np.sign(vals)
    idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    if len(idx) == 0:
        return np.empty(0)
    lo_arr = xs[idx]
    hi_arr = xs[idx + 1]
    roots = _bisect_vec(geom, n, lo_arr, hi_arr, sgn[idx])
    return roots[roots <= hi]
