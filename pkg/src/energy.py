"""
Graph Energy
Energy of simple graphs and of self-loop graphs G_S, where the loop matrix
spectrum is centred at the mean diagonal alpha/n.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from spectral import Spectrum, eigenvalues_symmetric

STRICT_TOL = 1e-8


class EnergyError(ValueError):
    pass


class EnergyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    alpha: int = Field(ge=0)
    shift: float
    energy: float = Field(ge=0)
    spectrum: Spectrum

    @model_validator(mode="after")
    def _consistent(self):
        if self.alpha > self.n:
            raise ValueError(f"alpha={self.alpha} exceeds n={self.n}")
        if self.shift != self.alpha / self.n:
            raise ValueError("shift must equal alpha/n")
        if self.spectrum.order != self.n:
            raise ValueError(f"spectrum has {self.spectrum.order} values for n={self.n}")
        return self

    def as_record(self):
        return {
            "n": self.n,
            "alpha": self.alpha,
            "shift": self.shift,
            "energy": self.energy,
            "spectrum": list(self.spectrum.values),
        }


def adjacency_with_loops(gs):
    """A(G_S) = D_S + A(G)."""
    a = gs.base.adjacency_matrix()
    for v in gs.loops.members:
        a[v, v] = 1.0
    return a


def energy(g):
    if g.n == 0:
        return 0.0
    return math.fsum(abs(v) for v in eigenvalues_symmetric(g.adjacency_matrix()).values)


def energy_from_spectrum(s, alpha, n):
    if s.order != n:
        raise EnergyError(f"spectrum has {s.order} values, expected {n}")
    if n < 1 or not 0 <= alpha <= n:
        raise EnergyError(f"need 0 <= alpha <= n and n >= 1, got alpha={alpha}, n={n}")
    shift = alpha / n
    return math.fsum(abs(v - shift) for v in s.values)


def energy_self_loop(gs):
    n = gs.base.n
    if n == 0:
        raise EnergyError("self-loop energy is undefined for the graph on 0 vertices")
    alpha = gs.loops.alpha
    spectrum = eigenvalues_symmetric(adjacency_with_loops(gs))
    drift = abs(math.fsum(spectrum.values) - alpha)
    if drift > 1e-9 * n:
        raise EnergyError(f"eigenvalue sum misses the trace {alpha} by {drift:.3e}")
    return EnergyReport(
        n=n,
        alpha=alpha,
        shift=alpha / n,
        energy=energy_from_spectrum(spectrum, alpha, n),
        spectrum=spectrum,
    )


def energy_gap(gs):
    """E(G_S) - E(G)."""
    return energy_self_loop(gs).energy - energy(gs.base)
