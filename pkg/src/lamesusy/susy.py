"""Closed forms for the sn^2 potential family and its SUSY partners.

For the elliptic potentials m j(j+1) sn^2(x, m) with j = 1, 2, 3, this
module provides, in closed form:

  * the zero-ground-energy potential V-(x) (the sn^2 potential shifted
    by a constant so its lowest band edge sits at energy 0),
  * the superpotential W = -(log psi_0)' built from the nodeless
    ground state,
  * the partner potential V+ both as an explicit closed form and as
    W^2 + W', so the two routes can be cross-checked,
  * the 2j+1 band-edge energies and the band-edge eigenfunctions of
    both partners (all five pairs for j = 2, the ground pair for j = 3).

Eigenfunctions are deliberately left un-normalized; consumers compare
shapes through ratios or residuals, never absolute scale.

All evaluators accept scalars or ndarrays and preserve a longdouble
dtype, which keeps finite-difference residual checks below their
roundoff floor.  Everything here is a pure function of its arguments;
the j=3 edge energies sit behind an lru_cache (recomputation under a
race is idempotent), so concurrent use is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np

from . import bandsolver
from .elliptic import complete_k, jacobi
from .errors import DomainError

_CLOSED_FORM_J = (1, 2, 3)


def _check_m_unit(m: float) -> float:
    m = float(m)
    if not math.isfinite(m) or m < 0.0 or m > 1.0:
        raise DomainError(f"modulus parameter m must lie in [0, 1], got {m!r}")
    return m


def _check_closed_j(j: int) -> int:
    if j not in _CLOSED_FORM_J:
        raise DomainError(
            f"no closed form for j={j!r}; use the numeric partner pipeline "
            "(bandsolver.numeric_partner)"
        )
    return int(j)


@dataclass(frozen=True)
class LameConstants:
    """Derived constants for index j at modulus m.

    delta  = sqrt(1 - m + m^2)   enters the j=2 energies,
    delta1 = sqrt(1 - m + 4m^2)  enters the j=3 ground state,
    ground_coeff = 1 + m + delta is the constant term of the nodeless
    zero-energy state of the j=2 potential.
    """

    j: int
    m: float
    delta: float
    delta1: float
    ground_coeff: float

    @classmethod
    def for_modulus(cls, j: int, m: float) -> "LameConstants":
        m = _check_m_unit(m)
        if j < 1:
            raise DomainError(f"index j must be a positive integer, got {j!r}")
        delta = math.sqrt(1.0 - m + m * m)
        delta1 = math.sqrt(1.0 - m + 4.0 * m * m)
        return cls(j=int(j), m=m, delta=delta, delta1=delta1,
                   ground_coeff=1.0 + m + delta)


def _scalar_or_array(value, scalar: bool):
    if scalar:
        return float(value)
    return value


def raw_lame(j: int, m: float, x):
    """The bare potential m j(j+1) sn^2(x, m)."""
    if int(j) < 1:
        raise DomainError(f"index j must be a positive integer, got {j!r}")
    m = _check_m_unit(m)
    scalar = np.isscalar(x) or np.ndim(x) == 0
    sn = jacobi(x, m).sn
    return _scalar_or_array(m * j * (j + 1) * sn * sn, scalar)


def v_minus(j: int, m: float, x):
    """Zero-ground-energy potential V- for j in {1, 2, 3}.

    j=1:  2m sn^2 - m
    j=2: -2 - 2m + 2 delta  + 6m sn^2
    j=3: -2 - 5m + 2 delta1 + 12m sn^2
    """
    j = _check_closed_j(j)
    c = LameConstants.for_modulus(j, m)
    scalar = np.isscalar(x) or np.ndim(x) == 0
    sn = jacobi(x, c.m).sn
    s2 = sn * sn
    if j == 1:
        val = 2.0 * c.m * s2 - c.m
    elif j == 2:
        val = -2.0 - 2.0 * c.m + 2.0 * c.delta + 6.0 * c.m * s2
    else:
        val = -2.0 - 5.0 * c.m + 2.0 * c.delta1 + 12.0 * c.m * s2
    return _scalar_or_array(val, scalar)


def superpotential(j: int, m: float, x):
    """Superpotential W = -(log psi_0)' of the j-th zero-energy state.

    j=1: m sn cn / dn
    j=2: 6m sn cn dn / (1 + m + delta - 3m sn^2)
    j=3: (m sn cn / dn) (2m + delta1 + 11 - 15m sn^2)
                       / (2m + delta1 + 1  -  5m sn^2)

    Denominators are strictly positive for m in [0, 1].
    """
    j = _check_closed_j(j)
    c = LameConstants.for_modulus(j, m)
    scalar = np.isscalar(x) or np.ndim(x) == 0
    sn, cn, dn = jacobi(x, c.m)
    s2 = sn * sn
    if j == 1:
        val = c.m * sn * cn / dn
    elif j == 2:
        val = 6.0 * c.m * sn * cn * dn / (c.ground_coeff - 3.0 * c.m * s2)
    else:
        p = 2.0 * c.m + c.delta1 + 11.0 - 15.0 * c.m * s2
        q = 2.0 * c.m + c.delta1 + 1.0 - 5.0 * c.m * s2
        val = (c.m * sn * cn / dn) * p / q
    return _scalar_or_array(val, scalar)


def _superpotential_prime(j: int, c: LameConstants, sn, cn, dn):
    """Analytic W' assembled from sn' = cn dn, cn' = -sn dn, dn' = -m sn cn."""
    m = c.m
    s2, c2, d2 = sn * sn, cn * cn, dn * dn
    base_prime = m * (c2 - s2) + m * m * s2 * c2 / d2
    if j == 1:
        return base_prime
    if j == 2:
        den = c.ground_coeff - 3.0 * m * s2
        num = 6.0 * m * sn * cn * dn
        num_prime = 6.0 * m * (c2 * d2 - s2 * d2 - m * s2 * c2)
        # den' = -num, so the quotient rule collapses to N'/D + N^2/D^2
        return num_prime / den + num * num / (den * den)
    p = 2.0 * m + c.delta1 + 11.0 - 15.0 * m * s2
    q = 2.0 * m + c.delta1 + 1.0 - 5.0 * m * s2
    p_prime = -30.0 * m * sn * cn * dn
    q_prime = -10.0 * m * sn * cn * dn
    base = m * sn * cn / dn
    return base_prime * p / q + base * (p_prime * q - p * q_prime) / (q * q)


def v_plus_closed(j: int, m: float, x):
    """Closed-form partner potential V+ for j in {2, 3}.

    j=2: -V- + 72 m^2 sn^2 cn^2 dn^2 / (1 + m + delta - 3m sn^2)^2
    j=3: -V- + (2 m^2 sn^2 cn^2 / dn^2)
               (2m + delta1 + 11 - 15m sn^2)^2
             / (2m + delta1 + 1  -  5m sn^2)^2
    """
    if j not in (2, 3):
        raise DomainError(
            f"closed-form V+ exists for j in (2, 3) only, got {j!r}; "
            "j=1 is covered by v_plus_susy, j>=4 by the numeric pipeline"
        )
    c = LameConstants.for_modulus(j, m)
    scalar = np.isscalar(x) or np.ndim(x) == 0
    sn, cn, dn = jacobi(x, c.m)
    s2 = sn * sn
    m = c.m
    if j == 2:
        den = c.ground_coeff - 3.0 * m * s2
        vm = -2.0 - 2.0 * m + 2.0 * c.delta + 6.0 * m * s2
        val = -vm + 72.0 * m * m * s2 * cn * cn * dn * dn / (den * den)
    else:
        p = 2.0 * m + c.delta1 + 11.0 - 15.0 * m * s2
        q = 2.0 * m + c.delta1 + 1.0 - 5.0 * m * s2
        vm = -2.0 - 5.0 * m + 2.0 * c.delta1 + 12.0 * m * s2
        val = -vm + (2.0 * m * m * s2 * cn * cn / (dn * dn)) * (p * p) / (q * q)
    return _scalar_or_array(val, scalar)


def v_plus_susy(j: int, m: float, x):
    """Partner potential through the factorization route, W^2 + W'."""
    j = _check_closed_j(j)
    c = LameConstants.for_modulus(j, m)
    scalar = np.isscalar(x) or np.ndim(x) == 0
    sn, cn, dn = jacobi(x, c.m)
    w = _w_from_triple(j, c, sn, cn, dn)
    val = w * w + _superpotential_prime(j, c, sn, cn, dn)
    return _scalar_or_array(val, scalar)


def v_minus_check(j: int, m: float, x):
    """W^2 - W'; must reproduce v_minus wherever both are defined."""
    j = _check_closed_j(j)
    c = LameConstants.for_modulus(j, m)
    scalar = np.isscalar(x) or np.ndim(x) == 0
    sn, cn, dn = jacobi(x, c.m)
    w = _w_from_triple(j, c, sn, cn, dn)
    val = w * w - _superpotential_prime(j, c, sn, cn, dn)
    return _scalar_or_array(val, scalar)


def _w_from_triple(j: int, c: LameConstants, sn, cn, dn):
    m = c.m
    s2 = sn * sn
    if j == 1:
        return m * sn * cn / dn
    if j == 2:
        return 6.0 * m * sn * cn * dn / (c.ground_coeff - 3.0 * m * s2)
    p = 2.0 * m + c.delta1 + 11.0 - 15.0 * m * s2
    q = 2.0 * m + c.delta1 + 1.0 - 5.0 * m * s2
    return (m * sn * cn / dn) * p / q


# ---------------------------------------------------------------------------
# band-edge energies and eigenfunctions
# ---------------------------------------------------------------------------

def edge_boundary(n: int) -> str:
    """Boundary type of the n-th band edge: the classic +,-,-,+,+,... pattern."""
    return bandsolver.expected_boundary(n)


@lru_cache(maxsize=None)
def _j3_edges_numeric(m: float):
    """Seven j=3 band edges, computed once per modulus by the band solver."""
    pot = bandsolver.PeriodicPotential(
        period=2.0 * complete_k(m), evaluator=lambda x: v_minus(3, m, x)
    )
    edges = bandsolver.band_edges(pot, count=7)
    return tuple(e.energy for e in edges)


def band_edge_energies(j: int, m: float) -> tuple:
    """All 2j+1 band-edge energies of V-(j, m), sorted ascending."""
    j = _check_closed_j(j)
    c = LameConstants.for_modulus(j, m)
    if j == 1:
        return (0.0, 1.0 - c.m, 1.0)
    if j == 2:
        d = c.delta
        return (0.0, 2 * d - 1 - c.m, 2 * d - 1 + 2 * c.m, 2 * d + 2 - c.m, 4 * d)
    return _j3_edges_numeric(c.m)


def band_edge_energy(j: int, m: float, n: int) -> float:
    """Energy of band edge n (0 <= n <= 2j) of V-(j, m)."""
    energies = band_edge_energies(j, m)
    if not 0 <= n < len(energies):
        raise DomainError(f"edge index n must be in [0, {len(energies) - 1}], got {n!r}")
    return energies[n]


def psi_minus(j: int, n: int, m: float, x):
    """Un-normalized band-edge eigenfunction of V-.

    Supported: j=2 with n in 0..4, and the j=3 ground state (n=0):
    dn (1 + 2m + delta1 - 5m sn^2).  Higher j=3 states have no printed
    closed form here; get them numerically via bandsolver.
    """
    c, sn, cn, dn, scalar = _state_setup(j, n, m, x)
    m = c.m
    s2 = sn * sn
    if j == 3:
        val = dn * (1.0 + 2.0 * m + c.delta1 - 5.0 * m * s2)
        return _scalar_or_array(val, scalar)
    if n == 0:
        val = m + 1.0 + c.delta - 3.0 * m * s2
    elif n == 1:
        val = cn * dn
    elif n == 2:
        val = sn * dn
    elif n == 3:
        val = sn * cn
    else:
        # m + 1 - delta rationalizes to 3m / (m + 1 + delta), which stays
        # fully accurate as the state collapses for m -> 0
        val = 3.0 * m / c.ground_coeff - 3.0 * m * s2
    return _scalar_or_array(val, scalar)


def psi_minus_prime(j: int, n: int, m: float, x):
    """Analytic d/dx of psi_minus, for intertwining checks."""
    c, sn, cn, dn, scalar = _state_setup(j, n, m, x)
    m = c.m
    s2, c2, d2 = sn * sn, cn * cn, dn * dn
    if j == 3:
        a = 1.0 + 2.0 * m + c.delta1
        val = -m * sn * cn * ((a - 5.0 * m * s2) + 10.0 * d2)
        return _scalar_or_array(val, scalar)
    if n in (0, 4):
        val = -6.0 * m * sn * cn * dn
    elif n == 1:
        val = -sn * (d2 + m * c2)
    elif n == 2:
        val = cn * (d2 - m * s2)
    else:
        val = dn * (c2 - s2)
    return _scalar_or_array(val, scalar)


def psi_plus(j: int, n: int, m: float, x):
    """Un-normalized band-edge eigenfunction of V+ (j=2 only).

    The ground state is 1/psi_minus(j, 0); excited states are
    proportional to (d/dx + W) psi_minus(j, n) with an x-independent
    constant, which is what the verification suite checks.
    """
    if j != 2:
        raise DomainError(
            f"closed-form partner eigenfunctions exist for j=2 only, got {j!r}; "
            "use bandsolver.bloch_edge_state for other indices"
        )
    c, sn, cn, dn, scalar = _state_setup(j, n, m, x)
    m = c.m
    b = c.ground_coeff
    s2 = sn * sn
    den = b - 3.0 * m * s2
    if n == 0:
        num = 1.0 + 0.0 * s2
    elif n == 1:
        num = sn * (6.0 * m - (m + 1.0) * b + m * s2 * (2.0 * b - 3.0 - 3.0 * m))
    elif n == 2:
        num = cn * (b + m * s2 * (3.0 - 2.0 * b))
    elif n == 3:
        num = dn * (b + s2 * (3.0 * m - 2.0 * b))
    else:
        num = sn * cn * dn
    return _scalar_or_array(num / den, scalar)


def _state_setup(j: int, n: int, m: float, x):
    if j == 2:
        if not 0 <= n <= 4:
            raise DomainError(f"j=2 band-edge index n must be in 0..4, got {n!r}")
    elif j == 3:
        if n != 0:
            raise DomainError(
                "only the j=3 ground state has a closed form here; "
                "use bandsolver.bloch_edge_state for excited edges"
            )
    else:
        raise DomainError(f"closed-form eigenfunctions exist for j in (2, 3), got {j!r}")
    c = LameConstants.for_modulus(j, m)
    scalar = np.isscalar(x) or np.ndim(x) == 0
    sn, cn, dn = jacobi(x, c.m)
    return c, sn, cn, dn, scalar


@dataclass(frozen=True)
class BandEdgeState:
    """One band edge with its closed-form eigenfunctions of both partners."""

    n: int
    energy: float
    parity_period: str  # "periodic" or "antiperiodic" over one period 2K
    closed_form_minus: Callable
    closed_form_plus: Callable


def band_edge_state(j: int, n: int, m: float) -> BandEdgeState:
    """Bundle energy, boundary type and eigenfunctions for edge n of j=2."""
    if j != 2:
        raise DomainError(f"band_edge_state covers the fully tabulated j=2 case, got {j!r}")
    energy = band_edge_energy(j, m, n)
    return BandEdgeState(
        n=n,
        energy=energy,
        parity_period=edge_boundary(n),
        closed_form_minus=lambda x, _n=n: psi_minus(2, _n, m, x),
        closed_form_plus=lambda x, _n=n: psi_plus(2, _n, m, x),
    )


# ---------------------------------------------------------------------------
# potential descriptors
# ---------------------------------------------------------------------------

class Family(Enum):
    """Which member of the partner construction a PotentialSpec denotes."""

    V_MINUS = "vminus"
    V_PLUS = "vplus"
    SUPERPOTENTIAL = "w"
    RAW_LAME = "raw"


@dataclass(frozen=True)
class PotentialSpec:
    """A closed-form potential, evaluable on the real line.

    V_PLUS at j=1 is served through the factorization route (there is
    no separate closed form; the two coincide analytically).
    """

    family: Family
    j: int
    m: float

    def __post_init__(self):
        _check_m_unit(self.m)
        if self.family is Family.RAW_LAME:
            if self.j < 1:
                raise DomainError(f"index j must be >= 1, got {self.j!r}")
        else:
            _check_closed_j(self.j)

    @property
    def period(self) -> float:
        return 2.0 * complete_k(self.m)

    def __call__(self, x):
        if self.family is Family.V_MINUS:
            return v_minus(self.j, self.m, x)
        if self.family is Family.V_PLUS:
            if self.j == 1:
                return v_plus_susy(self.j, self.m, x)
            return v_plus_closed(self.j, self.m, x)
        if self.family is Family.SUPERPOTENTIAL:
            return superpotential(self.j, self.m, x)
        return raw_lame(self.j, self.m, x)

    def as_periodic_potential(self):
        return bandsolver.PeriodicPotential(period=self.period, evaluator=self)
