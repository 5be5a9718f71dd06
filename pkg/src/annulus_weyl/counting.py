"""Counting functions: eigenvalue counts, shifted-lattice counts (column-wise
and along slanted lines), the quarter-band error E(mu), the two-term Weyl
remainder, row-of-teeth sums with their van der Corput functional, and the
remainder-exponent fit.

Counts are exact integers.  Every floor/ceil sits behind a guard band: when a
column height lands within 1e-9 of an integer the height is recomputed in
40-digit arithmetic before rounding, so floor misclassification cannot leak
into the counts.

The eigenvalue side counts pairs (n, k) with x_{n,k} <= mu, each counted
twice for n >= 1 and once for n = 0.  The lattice side counts points of
Z^2 - (0, c) (uniform shift) or Z^2 - (0, tau_{n,k}) (variable shift) in the
dilated domain mu D, where D is bounded by the graph of G and the x-axis,
symmetric about the y-axis.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import mpmath as mp
import numpy as np
from scipy.integrate import quad

from . import geometry as geo
from . import zeros as zr
from .errors import DomainError, UnsupportedConfigurationError

__all__ = [
    "CountReport",
    "RhoSumSpec",
    "ExponentTargets",
    "SpectrumCache",
    "rho",
    "eig_count",
    "lattice_count_uniform",
    "lattice_count_variable",
    "lattice_count_slanted",
    "lattice_count_d1_columns",
    "lattice_count_d2_columns",
    "band_count",
    "band_error",
    "weyl_remainder",
    "weyl_scan",
    "fit_exponent",
    "rho_sum",
    "vdc_bound",
    "sandwich_gap",
    "smallest_sandwich_constant",
]

_GUARD = 1e-9
_MP_DPS = 40


@dataclass(frozen=True)
class ExponentTargets:
    """Remainder exponents: the circle-problem record pair (theta, Theta)
    valid under the rational-slope hypothesis, and the 2/3 fallback."""

    theta: float = 131.0 / 208.0
    Theta: float = 18627.0 / 8320.0
    fallback: float = 2.0 / 3.0


@dataclass(frozen=True)
class CountReport:
    mu: float
    n_eig: int
    n_lat_u: int
    n_lat_var: int | None
    band_err: float
    weyl_remainder: float
    wall_time_s: float


def rho(x: float) -> float:
    """Row-of-teeth function [x] - x + 1/2."""
    return math.floor(x) - x + 0.5


def _rho_vec(x: np.ndarray) -> np.ndarray:
    return np.floor(x) - x + 0.5


# ---------------------------------------------------------------------------
# guarded integer rounding


def _g_mp(x):
    return (mp.sqrt(1 - x * x) - x * mp.acos(x)) / mp.pi


def _G_mp(geom: geo.AnnulusGeometry, x):
    R, r = mp.mpf(geom.R), mp.mpf(geom.r)
    out = R * _g_mp(x / R)
    if x < r:
        out -= r * _g_mp(x / r)
    return out


def _height_mp(geom: geo.AnnulusGeometry, mu: float, n: int, c: float):
    return mp.mpf(mu) * _G_mp(geom, mp.mpf(n) / mp.mpf(mu)) + mp.mpf(c)


def _round_down_mp(vv) -> int:
    nearest = mp.nint(vv)
    if abs(vv - nearest) < mp.mpf(10) ** (-25):
        return int(nearest)  # boundary lattice point: the <= is inclusive
    return int(mp.floor(vv))


def _floor_guarded(v: float, hires) -> int:
    if abs(v - round(v)) < _GUARD:
        with mp.workdps(_MP_DPS):
            return _round_down_mp(hires())
    return math.floor(v)


def _ceil_guarded(v: float, hires) -> int:
    if abs(v - round(v)) < _GUARD:
        with mp.workdps(_MP_DPS):
            vv = hires()
            nearest = mp.nint(vv)
            if abs(vv - nearest) < mp.mpf(10) ** (-25):
                return int(nearest)
            return int(mp.ceil(vv))
    return math.ceil(v)


def _column_floor(geom: geo.AnnulusGeometry, mu: float, n: int, c: float) -> int:
    v = mu * geo.G(geom, min(n / mu, geom.R)) + c
    return _floor_guarded(v, lambda: _height_mp(geom, mu, n, c))


# ---------------------------------------------------------------------------
# lattice counts, column-wise


def _require_mu(mu: float) -> None:
    # closed at 2 so the degenerate just-dilated domain stays countable
    if not (mu >= 2.0):
        raise DomainError(f"counting requires mu >= 2, got {mu!r}")


def lattice_count_uniform(geom: geo.AnnulusGeometry, mu: float, c: float = 0.25) -> int:
    """Points of the shifted lattice Z^2 - (0, c) in mu D: per column |n|,
    floor(mu G(|n|/mu) + c); columns n and -n both counted, n = 0 once."""
    _require_mu(mu)
    if not (0.0 <= c < 0.5):
        raise DomainError(f"shift c must lie in [0, 1/2), got {c!r}")
    nmax = int(math.floor(geom.R * mu * (1 + 1e-15)))
    ns = np.arange(0, nmax + 1)
    v = mu * geo.G_vec(geom, np.minimum(ns / mu, geom.R)) + c
    cols = np.floor(v).astype(np.int64)
    # guard band: heights too close to an integer get the 40-digit treatment
    suspects = np.nonzero(np.abs(v - np.rint(v)) < _GUARD)[0]
    for i in suspects:
        cols[i] = _column_floor(geom, mu, int(ns[i]), c)
    return int(cols[0] + 2 * cols[1:].sum())


def band_count(geom: geo.AnnulusGeometry, mu: float) -> int:
    """Unshifted lattice points in the quarter-band over the inner arc:
    sum over 0 <= n <= r mu of floor(mu G + 1/4) - floor(mu G)."""
    _require_mu(mu)
    nmax = int(math.floor(geom.r * mu * (1 + 1e-15)))
    total = 0
    for n in range(nmax + 1):
        total += _column_floor(geom, mu, n, 0.25) - _column_floor(geom, mu, n, 0.0)
    return total


def band_error(geom: geo.AnnulusGeometry, mu: float) -> float:
    """E(mu): quarter-band count minus its area value r mu / 4."""
    return band_count(geom, mu) - geom.r * mu / 4.0


# ---------------------------------------------------------------------------
# eigenvalue counting


class SpectrumCache:
    """Per-order zero tables with a high-water mark, shared between counts.

    Holds, for each order n, the increasing zeros x_{n,k} located so far
    (k = 1.. contiguous) and their shifts tau_{n,k}.
    """

    def __init__(self, geom: geo.AnnulusGeometry, cfg: zr.RegimeConfig = zr.RegimeConfig()):
        self.geom = geom
        self.cfg = cfg
        self._x: dict[int, np.ndarray] = {}
        self._tau: dict[int, np.ndarray] = {}
        self._hi: dict[int, float] = {}

    def _ensure(self, n: int, mu: float) -> None:
        if self._hi.get(n, -1.0) >= mu:
            return
        zs = zr.zeros_up_to(self.geom, n, mu, self.cfg)
        self._x[n] = np.array([z.x for z in zs])
        self._tau[n] = np.array([z.tau for z in zs])
        self._hi[n] = mu

    def store(self, n: int, mu: float, xs: list[float], taus: list[float]) -> None:
        if self._hi.get(n, -1.0) < mu:
            self._x[n] = np.asarray(xs, dtype=float)
            self._tau[n] = np.asarray(taus, dtype=float)
            self._hi[n] = mu

    def count(self, n: int, mu: float) -> int:
        self._ensure(n, mu)
        return int(np.searchsorted(self._x[n], mu, side="right"))

    def tau_of(self, n: int, k: int) -> float:
        """tau_{n,k}, extending the table when k lies beyond the water mark."""
        n = abs(n)
        if k <= 0:
            return 0.25
        xs = self._x.get(n)
        if xs is not None and k <= len(xs):
            return float(self._tau[n][k - 1])
        return zr.find_zero(self.geom, n, k, self.cfg).tau

    def build(self, mu: float, threads: int = 1) -> None:
        nmax = int(math.floor(self.geom.R * mu))
        todo = [n for n in range(nmax + 1) if self._hi.get(n, -1.0) < mu]
        if not todo:
            return
        if threads <= 1:
            for n in todo:
                self._ensure(n, mu)
            return
        slope = self.geom.slope_rational
        cfgf = (self.cfg.c, self.cfg.eps, self.cfg.n_large, self.cfg.k_small)
        chunks = [todo[i::threads] for i in range(threads)]
        args = [(self.geom.r, self.geom.R, slope, cfgf, ch, mu) for ch in chunks if ch]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for part in pool.map(_spectrum_worker, args):
                for n, xs, taus in part:
                    self.store(n, mu, xs, taus)


def _spectrum_worker(args):
    r, R, slope, cfgf, ns, mu = args
    geom = geo.AnnulusGeometry.create(r, R, slope)
    cfg = zr.RegimeConfig(*cfgf)
    out = []
    for n in ns:
        zs = zr.zeros_up_to(geom, n, mu, cfg)
        out.append((n, [z.x for z in zs], [z.tau for z in zs]))
    return out


def eig_count(geom: geo.AnnulusGeometry, mu: float,
              cfg: zr.RegimeConfig = zr.RegimeConfig(),
              cache: SpectrumCache | None = None) -> int:
    """N(mu) = #{(n,k) in Z x N : x_{|n|,k} <= mu}, multiplicity 2 for n != 0."""
    if not (mu > 0.0):
        raise DomainError(f"eig_count requires mu > 0, got {mu!r}")
    cache = cache if cache is not None else SpectrumCache(geom, cfg)
    nmax = int(math.floor(geom.R * mu))
    total = 0
    for n in range(nmax + 1):
        cnt = cache.count(n, mu)
        if cnt == 0 and n > 0 and n / geom.R > mu * 0.5:
            # higher orders only start later; once a positive order in the
            # tail is empty all larger ones are too (x_{n,1} grows with n)
            break
        total += cnt if n == 0 else 2 * cnt
    return total


def weyl_remainder(geom: geo.AnnulusGeometry, mu: float, n_eig: int) -> float:
    """n_eig - (R^2-r^2)/4 mu^2 + (R+r)/2 mu."""
    return n_eig - (geom.R**2 - geom.r**2) / 4.0 * mu * mu + (geom.R + geom.r) / 2.0 * mu


# ---------------------------------------------------------------------------
# variable-shift lattice count


def lattice_count_variable(geom: geo.AnnulusGeometry, mu: float,
                           cfg: zr.RegimeConfig = zr.RegimeConfig(),
                           cache: SpectrumCache | None = None) -> int:
    """Points (n, k - tau_{n,k}) in mu D with the per-point shifts.

    Costs O(mu^2) zero locations when cold; meant for desk scale (mu up to
    a couple hundred).  Only the single column-boundary index k* = floor(v)+1
    can depend on tau, since tau in [0, 1/4]."""
    _require_mu(mu)
    cache = cache if cache is not None else SpectrumCache(geom, cfg)
    nmax = int(math.floor(geom.R * mu * (1 + 1e-15)))
    total = 0
    for n in range(nmax + 1):
        v = mu * geo.G(geom, min(n / mu, geom.R))
        base = _floor_guarded(v, lambda: _height_mp(geom, mu, n, 0.0))
        col = base
        gap = (base + 1) - v
        if gap <= 0.25:
            if cache.tau_of(n, base + 1) >= gap:
                col += 1
        total += col if n == 0 else 2 * col
    return total


# ---------------------------------------------------------------------------
# slanted-line count of the cusp region D2


def _d2_col_range(geom: geo.AnnulusGeometry, mu: float) -> range:
    """Columns 0 <= m < mu r (x = r excluded, where the region is empty)."""
    top = geom.r * mu
    m_hi = int(math.ceil(top)) - 1
    if float(m_hi + 1) == top:  # mu r integral: x < r keeps it out anyway
        m_hi = int(top) - 1
    return range(0, m_hi + 1)


def lattice_count_d2_columns(geom: geo.AnnulusGeometry, mu: float, c: float) -> int:
    """Column-wise count of mu D2 = {0 <= x <= mu r, mu G(r) < y <= mu G(x/mu)}
    over the shifted lattice (full weight on the y-axis)."""
    _require_mu(mu)
    base = _floor_guarded(mu * geom.Gr + c,
                          lambda: mp.mpf(mu) * _G_mp(geom, mp.mpf(geom.r)) + mp.mpf(c))
    total = 0
    for m in _d2_col_range(geom, mu):
        total += _column_floor(geom, mu, m, c) - base
    return total


def lattice_count_d1_columns(geom: geo.AnnulusGeometry, mu: float, c: float) -> int:
    """Column-wise count of mu D1 = {0 <= x <= mu R, 0 < y <= mu min(G, G(r))}."""
    _require_mu(mu)
    nmax = int(math.floor(geom.R * mu * (1 + 1e-15)))
    cap = mu * geom.Gr
    cap_floor = _floor_guarded(cap + c, lambda: mp.mpf(mu) * _G_mp(geom, mp.mpf(geom.r))
                               + mp.mpf(c))
    total = 0
    for n in range(nmax + 1):
        if n < geom.r * mu:
            total += cap_floor
        else:
            total += _column_floor(geom, mu, n, c)
    return total


def _xt_mp(geom: geo.AnnulusGeometry, mu: float, c: float, t: int):
    """x-coordinate where the slanted line a x + q (y + c) = t meets the
    dilated boundary, in 40-digit arithmetic (guard-band path)."""
    a, q = geom.slope_rational
    muq = mp.mpf(mu) * q

    def phi(x):
        return a * x + q * (mp.mpf(mu) * _G_mp(geom, x / mp.mpf(mu)) + mp.mpf(c)) - t

    lo, hi = mp.mpf(0), mp.mpf(mu) * mp.mpf(geom.r)
    for _ in range(140):
        mid = (lo + hi) / 2
        if phi(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def lattice_count_slanted(geom: geo.AnnulusGeometry, mu: float, c: float = 0.25) -> int:
    """Count of mu D2 over the shifted lattice via the slanted decomposition:
    the tangent triangle minus the sliver between tangent and boundary, the
    latter counted along the lines a x + q (y + c) = t, t integral.

    Exact: agrees with lattice_count_d2_columns integer-for-integer.
    """
    _require_mu(mu)
    if geom.slope_rational is None:
        raise UnsupportedConfigurationError(
            "slanted counting requires the rational-slope declaration (a, q)")
    if not (0.0 <= c < 0.5):
        raise DomainError(f"shift c must lie in [0, 1/2), got {c!r}")
    a, q = geom.slope_rational
    slope = a / q
    # triangle below the tangent line through the cusp
    base = _floor_guarded(mu * geom.Gr + c,
                          lambda: mp.mpf(mu) * _G_mp(geom, mp.mpf(geom.r)) + mp.mpf(c))
    n_tri = 0
    for m in _d2_col_range(geom, mu):
        v = mu * geom.Gr + c + slope * (mu * geom.r - m)
        n_tri += _floor_guarded(
            v, lambda m=m: mp.mpf(mu) * _G_mp(geom, mp.mpf(geom.r)) + mp.mpf(c)
            + mp.mpf(a) / q * (mp.mpf(mu) * mp.mpf(geom.r) - m)) - base

    # sliver between tangent and boundary, counted on the slanted lines
    beta, gamma = geo.beta_gamma(geom, c, mu)
    t_lo = _floor_guarded(mu * q * beta,
                          lambda: q * (mp.mpf(mu) * _G_mp(geom, mp.mpf(0)) + mp.mpf(c)))
    t_hi = _floor_guarded(mu * q * gamma,
                          lambda: q * (mp.mpf(mu) * _G_mp(geom, mp.mpf(geom.r)) + mp.mpf(c))
                          + mp.mpf(a) * mp.mpf(mu) * mp.mpf(geom.r))
    ainv = pow(a, -1, q)
    n_sliver = 0
    for t in range(t_lo + 1, t_hi + 1):
        y_t = t / (mu * q)
        x_t = mu * geo.T(geom, min(max(y_t, beta), gamma), c, mu)
        x0 = (t * ainv) % q
        u = (x_t - x0) / q
        n_t = _ceil_guarded(u, lambda t=t, x0=x0: (_xt_mp(geom, mu, c, t) - x0) / q)
        if n_t > 0:
            n_sliver += n_t
    return n_tri - n_sliver


# ---------------------------------------------------------------------------
# row-of-teeth sums and the van der Corput functional


@dataclass(frozen=True)
class RhoSumSpec:
    """A sum  sum_{m1 <= m <= m2} rho(f(m))  with f one of the boundary
    phases: kind 'G' gives mu G(m/mu) + c, 'H' gives mu H((m-c)/mu), 'T'
    gives -(mu/q) T(m/mu + t0/(mu q)) + x0/q on residue class t0."""

    kind: str
    m1: float
    m2: float
    mu: float
    c: float = 0.0
    residue: int = 0

    def __post_init__(self):
        if self.kind not in ("G", "H", "T"):
            raise DomainError(f"unknown phase kind {self.kind!r}")
        if self.m1 > self.m2:
            raise DomainError("empty ranges must still satisfy m1 <= m2")


def _phase_and_curvature(geom: geo.AnnulusGeometry, spec: RhoSumSpec):
    mu, c = spec.mu, spec.c
    if spec.kind == "G":
        fun = lambda m: mu * geo.G(geom, m / mu) + c
        f2 = lambda m: geo.G(geom, m / mu, 2) / mu
    elif spec.kind == "H":
        fun = lambda m: mu * geo.H(geom, (m - c) / mu)
        f2 = lambda m: geo.H(geom, (m - c) / mu, 2) / mu
    else:
        if geom.slope_rational is None:
            raise UnsupportedConfigurationError("T-phase requires rational slope")
        a, q = geom.slope_rational
        x0 = (spec.residue * pow(a, -1, q)) % q
        off = spec.residue / (mu * q)
        fun = lambda m: -(mu / q) * geo.T(geom, m / mu + off, c, mu) + x0 / q
        f2 = lambda m: -geo.T(geom, m / mu + off, c, mu, 2) / (q * mu)
    return fun, f2


def rho_sum(geom: geo.AnnulusGeometry, spec: RhoSumSpec) -> float:
    """The exact row-of-teeth sum over integers in [m1, m2] (0 if empty)."""
    lo = int(math.ceil(spec.m1))
    hi = int(math.floor(spec.m2))
    if hi < lo:
        return 0.0
    fun, _ = _phase_and_curvature(geom, spec)
    return float(sum(rho(fun(m)) for m in range(lo, hi + 1)))


def vdc_bound(geom: geo.AnnulusGeometry, spec: RhoSumSpec) -> float:
    """The raw second-derivative-test functional

        int_{m1}^{m2} |f''|^{1/3} dm  +  max_{[m1,m2]} |f''|^{-1/2}

    without any absolute constant."""
    _, f2 = _phase_and_curvature(geom, spec)
    a, b = spec.m1, spec.m2
    if b <= a:
        return 0.0
    # keep strictly inside the domain: the phases lose their curvature bounds
    # at the range ends (half-open handling)
    eps = 1e-9 * max(1.0, b - a)
    integrand = lambda m: abs(f2(m)) ** (1.0 / 3.0)
    val, _ = quad(integrand, a + eps, b - eps, limit=400)
    ms = np.linspace(a + eps, b - eps, 4001)
    curv = np.array([abs(f2(float(m))) for m in ms])
    return float(val + curv.min() ** -0.5)


# ---------------------------------------------------------------------------
# scan driver, exponent fit, sandwich inequality


def weyl_scan(geom: geo.AnnulusGeometry, mu_grid: list[float],
              cfg: zr.RegimeConfig = zr.RegimeConfig(), *, threads: int = 1,
              include_variable: bool = False, shift_c: float = 0.25,
              cache: SpectrumCache | None = None) -> list[CountReport]:
    """One CountReport per grid point (grid sorted ascending, entries > 2).

    The zero tables are built once at the largest mu and shared downward.
    """
    mus = [float(m) for m in mu_grid]
    if any(m2 <= m1 for m1, m2 in zip(mus, mus[1:])) or not mus:
        raise DomainError("mu grid must be nonempty and strictly increasing")
    _require_mu(mus[0])
    cache = cache if cache is not None else SpectrumCache(geom, cfg)
    cache.build(mus[-1], threads=threads)
    reports = []
    for mu in mus:
        t0 = time.perf_counter()
        n_eig = eig_count(geom, mu, cfg, cache)
        n_lat = lattice_count_uniform(geom, mu, shift_c)
        n_var = lattice_count_variable(geom, mu, cfg, cache) if include_variable else None
        be = band_error(geom, mu)
        rem = weyl_remainder(geom, mu, n_eig)
        reports.append(CountReport(mu=mu, n_eig=n_eig, n_lat_u=n_lat, n_lat_var=n_var,
                                   band_err=be, weyl_remainder=rem,
                                   wall_time_s=time.perf_counter() - t0))
    return reports


def fit_exponent(reports: list[CountReport], floor: float = 1e-9
                 ) -> tuple[float, float, float]:
    """OLS fit of log|weyl_remainder| on log mu -> (slope, intercept, r^2).

    Remainders below `floor` in magnitude are dropped (their logs would
    dominate the regression with noise)."""
    pts = [(math.log(r.mu), math.log(abs(r.weyl_remainder)))
           for r in reports if abs(r.weyl_remainder) >= floor]
    if len(pts) < 2:
        raise DomainError("not enough usable remainders to fit an exponent")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    slope, intercept = np.polyfit(xs, ys, 1)
    pred = slope * xs + intercept
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def sandwich_gap(geom: geo.AnnulusGeometry, mu: float,
                 cfg: zr.RegimeConfig = zr.RegimeConfig(), *, C: float,
                 cache: SpectrumCache | None = None) -> tuple[float, float]:
    """(lhs, rhs) of the eigenvalue/lattice sandwich at one mu:

        |N_eig(mu) - N_lat(mu, 1/4) + r mu/2|
            <= [N_lat(mu+) - N_lat(mu-)] + 2[E(mu-) - E(mu+)] + C mu^0.6

    with mu+- = mu +- C mu^{-0.4}."""
    cache = cache if cache is not None else SpectrumCache(geom, cfg)
    mup = mu + C * mu**-0.4
    mum = mu - C * mu**-0.4
    lhs = abs(eig_count(geom, mu, cfg, cache) - lattice_count_uniform(geom, mu, 0.25)
              + geom.r * mu / 2.0)
    rhs = (lattice_count_uniform(geom, mup, 0.25) - lattice_count_uniform(geom, mum, 0.25)
           + 2.0 * (band_error(geom, mum) - band_error(geom, mup)) + C * mu**0.6)
    return lhs, rhs


def smallest_sandwich_constant(geom: geo.AnnulusGeometry, mus: list[float],
                               cfg: zr.RegimeConfig = zr.RegimeConfig(),
                               cache: SpectrumCache | None = None,
                               c_max: float = 64.0) -> float:
    """Smallest dyadic C for which the sandwich holds at every grid point."""
    cache = cache if cache is not None else SpectrumCache(geom, cfg)
    C = 1.0 / 16.0
    while C <= c_max:
        if all(lhs <= rhs for lhs, rhs in
               (sandwich_gap(geom, mu, cfg, C=C, cache=cache) for mu in mus)):
            return C
        C *= 2.0
    raise RuntimeError(f"sandwich inequality fails on the grid even with C = {c_max}")
