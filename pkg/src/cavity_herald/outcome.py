"""Result record of one heralding configuration."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class HeraldOutcome:
    """Click probabilities and heralded-state fidelities of the two detector ports.

    Port B heralds the odd Bell state and port A the even one. A port that never
    clicks reports fidelity 0.

    Attributes:
        p_a: Probability of a click at port A.
        p_b: Probability of a click at port B.
        p_total: ``p_a + p_b``.
        f_a: Fidelity of the port-A state.
        f_b: Fidelity of the port-B state.
    """

    p_a: float
    p_b: float
    p_total: float
    f_a: float
    f_b: float

    @classmethod
    def from_ports(cls, p_a: float, p_b: float, f_a: float, f_b: float) -> "HeraldOutcome":
        return cls(float(p_a), float(p_b), float(p_a + p_b), float(f_a), float(f_b))

    def to_dict(self) -> dict:
        return asdict(self)

    def max_relative_change(self, other: "HeraldOutcome", floor: float = 1e-12) -> float:
        """Largest field-wise relative difference to ``other``."""
        a, b = self.to_dict(), other.to_dict()
        return max(abs(a[k] - b[k]) / max(abs(a[k]), floor) for k in a)
