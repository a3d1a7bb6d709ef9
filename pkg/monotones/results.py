"""
Provenance wrapper for every monotone value the toolkit reports.
"""

import math
from dataclasses import dataclass, field

from django.db import models

from core.exceptions import InvalidArgument


class MonotoneKind(models.TextChoices):
    EXACT = 'exact', 'Exact'
    LOWER_BOUND = 'lower_bound', 'Lower bound'
    UPPER_BOUND = 'upper_bound', 'Upper bound'


@dataclass
class MonotoneResult:
    """A monotone value with how it was obtained and how far it can be trusted."""

    value: float
    kind: str
    method: str
    iterations: int = 0
    restarts: int = 0
    converged: bool = True
    witness: object = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.value = float(self.value)
        if not math.isfinite(self.value) or self.value < 0:
            raise InvalidArgument(f'Monotone value must be finite and non-negative, got {self.value}')
        if self.kind not in MonotoneKind.values:
            raise InvalidArgument(f'Unknown result kind {self.kind!r}')
