"""Test domains for restricted merit functions."""
from typing import ClassVar, List, Literal, Optional, Tuple

import numpy as np
from pydantic import Field

from ..config import settings
from ..core.base import ViproxModel
from ..core.exceptions import ConfigurationError
from ..geometry.domains import FEASIBILITY_TOL, Box, Domain, OpenUnitBoxUpperClosed, Unconstrained

# Share of the smallest domain half-width used as the default neighborhood radius.
NEIGHBORHOOD_SHARE = 0.25

BOX_LIKE = (Box, OpenUnitBoxUpperClosed, Unconstrained)


class TestDomain(ViproxModel):
    """A box-shaped test domain ``C`` inside the problem domain.

    ``full_box`` is the problem's own box, ``neighborhood`` an l-infinity
    ball around the known solution clipped to the domain, and ``box`` an
    explicit ``[lower, upper]``.
    """
    __test__: ClassVar[bool] = False

    kind: Literal["full_box", "neighborhood", "box"] = "full_box"
    radius: Optional[float] = Field(default=None, gt=0)
    lower: Optional[List[float]] = None
    upper: Optional[List[float]] = None
    sample_budget: int = Field(default_factory=lambda: settings.GAP_SAMPLE_BUDGET, ge=1)

    def resolve(self, domain: Optional[Domain] = None,
                center: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Bounds ``(lower, upper)`` of ``C``.

        Raises:
            ConfigurationError: If ``C`` is empty, unbounded, not a subset of
                ``domain``, or cannot be formed for ``domain``.
        """
        if domain is not None and not isinstance(domain, BOX_LIKE):
            raise ConfigurationError(f"box test domains are not available on a {domain.kind} domain")
        if self.kind == "box":
            if self.lower is None or self.upper is None:
                raise ConfigurationError("an explicit test box needs lower and upper")
            lower, upper = np.array(self.lower, dtype=float), np.array(self.upper, dtype=float)
        elif self.kind == "full_box":
            if domain is None:
                raise ConfigurationError("full_box test domain needs the problem domain")
            lower, upper = domain.bounds()
        else:
            if center is None:
                raise ConfigurationError("a neighborhood test domain needs a known solution")
            center = np.asarray(center, dtype=float)
            radius = self.radius
            dom_lower, dom_upper = (domain.bounds() if domain is not None
                                    else (np.full(center.shape, -np.inf), np.full(center.shape, np.inf)))
            if radius is None:
                half_widths = 0.5 * (dom_upper - dom_lower)
                if not np.all(np.isfinite(half_widths)):
                    raise ConfigurationError("neighborhood radius is required on an unbounded domain")
                radius = NEIGHBORHOOD_SHARE * float(half_widths.min())
            lower = np.maximum(center - radius, dom_lower)
            upper = np.minimum(center + radius, dom_upper)

        if lower.shape != upper.shape or lower.ndim != 1:
            raise ConfigurationError("test domain bounds must be vectors of equal length")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError("test domain must be bounded")
        if np.any(lower > upper):
            raise ConfigurationError("test domain is empty (lower > upper)")
        if domain is not None:
            if lower.shape[0] != domain.dim:
                raise ConfigurationError(f"test domain has dimension {lower.shape[0]}, expected {domain.dim}")
            dom_lower, dom_upper = domain.bounds()
            if np.any(lower < dom_lower - FEASIBILITY_TOL) or np.any(upper > dom_upper + FEASIBILITY_TOL):
                raise ConfigurationError("test domain must lie inside the problem domain")
            if isinstance(domain, OpenUnitBoxUpperClosed) and np.any(lower <= 0):
                raise ConfigurationError("test domain must stay away from the open face at 0")
        return lower, upper
