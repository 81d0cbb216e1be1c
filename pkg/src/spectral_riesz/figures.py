"""Tables behind the two constant-comparison figures."""

import numpy as np

from . import bounds
from .grid import GridSpec

FIG1_COLUMNS = ["rho", "classical", "interpolated", "riesz_iterated_li_yau", "interpolated_ratio", "iterated_ratio"]
FIG2_COLUMNS = ["rho", "conjecture", "li_yau", "polya"]


def fig1_table(grid: GridSpec = GridSpec(0.0, 1.0, 101), d: int = 3):
    """Riesz-mean constants for 0 <= rho <= 1: classical, interpolated and the
    Riesz iterate of the Berezin-Li-Yau counting bound, plus ratios to classical."""
    li_yau_factor = ((d + 2.0) / d) ** (d / 2.0)
    rows = []
    for rho in grid.points():
        rho = float(rho)
        cl = bounds.classical_constant(rho, d)
        interp = bounds.interpolated_riesz_constant(rho, d)
        it = li_yau_factor * cl
        rows.append([rho, cl, interp, it, interp / cl, it / cl])
    return FIG1_COLUMNS, np.array(rows)


def fig2_table(grid: GridSpec = GridSpec(1.05, 6.0, 100), d: int = 2):
    """Upper-bound constants for |Omega|^{-2 rho/d} zeta(rho)."""
    rows = []
    for rho in grid.points():
        rho = float(rho)
        rows.append(
            [
                rho,
                bounds.zeta_conjecture_constant(rho, d),
                bounds.zeta_liyau_constant(rho, d),
                bounds.zeta_polya_constant(rho, d),
            ]
        )
    return FIG2_COLUMNS, np.array(rows)
