"""
Distance-fidelity links and lower bounds on the epsilon-geometric measure.

All bounds are clamped at zero; a clamped bound carries a flag instead of a
negative value.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.db import models
from scipy.optimize import minimize_scalar

from core.exceptions import InvalidArgument

logger = logging.getLogger(__name__)

# Closed-form and star bounds are only meaningful up to this eta.
VALIDITY_ETA = 0.44

GRID_POINTS = 400
GRID_RANGE = (1e-12, 1.0)
AGREEMENT_TOL = 1e-9


class BoundFormula(models.TextChoices):
    VARIATIONAL = 'variational', 'Variational maximum over Delta'
    CLOSED_FORM = 'closed_form', 'Closed form at the approximate stationary point'
    STAR_LOWER = 'star_lower', 'Lower bound on the family-independent supremum'


@dataclass(frozen=True)
class EtaMap:
    """
    eta(eps) for a distance D with D(rho, sigma) <= eps implying
    F(rho, sigma) >= 1 - eta(eps), together with its inverse.
    """

    distance_kind: str
    eta_function: object
    inverse_function: object
    description: str
    domain: tuple = (0.0, 1.0)

    def _check(self, value, name):
        low, high = self.domain
        if not low <= value <= high:
            raise InvalidArgument(f'{name} must lie in [{low}, {high}] for {self.distance_kind}, got {value}')

    def eta(self, eps):
        eps = float(eps)
        self._check(eps, 'eps')
        return self.eta_function(eps)

    def inverse(self, eta):
        eta = float(eta)
        self._check(eta, 'eta')
        return self.inverse_function(eta)


ETA_MAPS = {
    'trace': EtaMap(
        'trace', lambda eps: eps, lambda eta: eta,
        'Trace distance; eta = eps, valid for pure reference states',
    ),
    'purified': EtaMap(
        'purified', lambda eps: eps * eps, math.sqrt,
        'Purified distance sqrt(1 - F); eta = eps^2',
    ),
}


def get_eta_map(distance_kind):
    try:
        return ETA_MAPS[distance_kind]
    except KeyError:
        raise InvalidArgument(f'No eta map for distance {distance_kind!r}; choose from {sorted(ETA_MAPS)}')


def eta_for_trace(eps):
    return ETA_MAPS['trace'].eta(eps)


@dataclass
class EpsilonBound:
    value: float
    eta_used: float
    validity_ok: bool
    formula: str
    clamped: bool = False
    eg: float = None
    delta_star: float = None
    details: dict = field(default_factory=dict)


def _check_eg(eg):
    eg = float(eg)
    if not 0.0 < eg <= 1.0:
        raise InvalidArgument(f'E_G must lie in (0, 1], got {eg}')
    return eg


def _check_eta(eta):
    eta = float(eta)
    if not eta > 0 or not math.isfinite(eta):
        raise InvalidArgument(f'eta must be positive, got {eta}')
    return eta


def variational_objective(delta, eg, eta):
    """(1 - eta/Delta)(E_G - 3 sqrt(Delta)), with each factor clipped at zero."""
    return max(0.0, 1.0 - eta / delta) * max(0.0, eg - 3.0 * math.sqrt(delta))


def stationary_delta(eg, eta):
    """
    Interior stationary point of the variational objective.

    With s = sqrt(Delta) it is the real root of s^3 + eta*s - (2/3)*eg*eta = 0.
    """
    q = -(2.0 / 3.0) * eg * eta
    disc = math.sqrt(q * q / 4.0 + eta ** 3 / 27.0)
    s = float(np.cbrt(-q / 2.0 + disc) + np.cbrt(-q / 2.0 - disc))
    return s * s


def _grid_maximum(eg, eta):
    grid = np.geomspace(*GRID_RANGE, GRID_POINTS)
    values = [variational_objective(d, eg, eta) for d in grid]
    best = int(np.argmax(values))
    if values[best] <= 0.0:
        return 0.0, float(grid[best])
    low, high = grid[max(best - 1, 0)], grid[min(best + 1, GRID_POINTS - 1)]
    refined = minimize_scalar(lambda d: -variational_objective(d, eg, eta), bounds=(low, high),
                              method='bounded', options={'xatol': 1e-15})
    if -refined.fun >= values[best]:
        return float(-refined.fun), float(refined.x)
    return float(values[best]), float(grid[best])


def eps_geo_variational(eg, eta):
    """max over Delta > 0 of (1 - eta/Delta)(E_G - 3 sqrt(Delta)), clamped at 0."""
    eg, eta = _check_eg(eg), _check_eta(eta)
    delta = stationary_delta(eg, eta)
    stationary = (1.0 - eta / delta) * (eg - 3.0 * math.sqrt(delta))
    grid_value, grid_delta = _grid_maximum(eg, eta)

    clamped = not (eta < eg * eg / 9.0 and stationary > 0.0)
    value = 0.0 if clamped else stationary
    if abs(value - grid_value) > AGREEMENT_TOL:
        logger.warning(
            f'Stationary value {value!r} and Delta-grid value {grid_value!r} disagree '
            f'for E_G={eg!r}, eta={eta!r}; using the grid'
        )
        value, delta = grid_value, grid_delta
        clamped = value <= 0.0
    return EpsilonBound(
        value=max(0.0, value),
        eta_used=eta,
        validity_ok=True,
        formula=BoundFormula.VARIATIONAL,
        clamped=clamped,
        eg=eg,
        delta_star=delta,
        details={'grid_value': grid_value, 'grid_delta': grid_delta},
    )


def eps_geo_closed_form(eg, eta):
    """[1 - (3 sqrt(eta) / (2 E_G))^(2/3)] [E_G - (18 E_G eta)^(1/3)], clamped at 0."""
    eg, eta = _check_eg(eg), _check_eta(eta)
    first = 1.0 - (3.0 * math.sqrt(eta) / (2.0 * eg)) ** (2.0 / 3.0)
    second = eg - (18.0 * eg * eta) ** (1.0 / 3.0)
    clamped = first < 0.0 or second < 0.0
    validity_ok = eta <= VALIDITY_ETA
    if not validity_ok:
        logger.warning(f'Closed-form bound evaluated outside its regime (eta={eta!r})')
    return EpsilonBound(
        value=0.0 if clamped else first * second,
        eta_used=eta,
        validity_ok=validity_ok,
        formula=BoundFormula.CLOSED_FORM,
        clamped=clamped,
        eg=eg,
        delta_star=((2.0 / 3.0) * eg * eta) ** (2.0 / 3.0),
        details={'fidelity_factor': first, 'measure_factor': second},
    )


def star_lower_value(eta):
    """Unclamped 1 - 4 eta^(1/3) + 3.4 eta^(2/3)."""
    root = eta ** (1.0 / 3.0)
    return 1.0 - 4.0 * root + 3.4 * root * root


def eps_geo_star_lower(eta):
    """Lower bound on the supremum of the eps-geometric measure over all states."""
    eta = _check_eta(eta)
    raw = star_lower_value(eta)
    validity_ok = eta <= VALIDITY_ETA
    if not validity_ok:
        logger.warning(f'Star bound evaluated outside its regime (eta={eta!r})')
    return EpsilonBound(
        value=max(0.0, raw),
        eta_used=eta,
        validity_ok=validity_ok,
        formula=BoundFormula.STAR_LOWER,
        clamped=raw < 0.0,
        details={'unclamped': raw},
    )


BOUNDS = {
    'variational': eps_geo_variational,
    'closed': eps_geo_closed_form,
    'star': lambda eg, eta: eps_geo_star_lower(eta),
}
