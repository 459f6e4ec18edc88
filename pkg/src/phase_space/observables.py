import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numexpr
import numpy as np

from core.errors import InvariantError
from phase_space.potentials import Hamiltonian


@dataclass(frozen=True)
class Observable:
    """Real-valued phase-space function f(q, p), evaluated on arrays."""

    name: str
    func: Callable[[np.ndarray, np.ndarray], np.ndarray] = field(compare=False)

    def __call__(self, q, p) -> np.ndarray:
        q, p = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(p, dtype=float))
        values = np.broadcast_to(np.asarray(self.func(q, p), dtype=float), q.shape)
        if not np.all(np.isfinite(values)):
            raise InvariantError(f"Observable {self.name!r} is not finite on the domain")
        return values


def expression_observable(name: str, expression: str) -> Observable:
    """Observable given as a numexpr expression in ``q`` and ``p``.

    Only ``q``, ``p``, ``pi`` and ``e`` are visible to the expression.
    """
    expression = expression.strip()

    def evaluate(q: np.ndarray, p: np.ndarray) -> np.ndarray:
        return numexpr.evaluate(
            expression,
            global_dict={},  # restrict access to globals
            local_dict={"q": q, "p": p, "pi": math.pi, "e": math.e},
        )

    try:
        evaluate(np.zeros(2), np.zeros(2))
    except Exception as e:
        raise InvariantError(f"Observable {name}={expression!r} raised error: {e}") from e
    return Observable(name=name, func=evaluate)


ONE = Observable("one", lambda q, p: np.ones_like(q))
Q = Observable("q", lambda q, p: q)
P = Observable("p", lambda q, p: p)
Q2 = Observable("q2", lambda q, p: q * q)
P2 = Observable("p2", lambda q, p: p * p)


def centered_q2(c: float) -> Observable:
    return Observable(f"(q-{c})^2", lambda q, p: (q - c) ** 2)


def centered_p2(c: float) -> Observable:
    return Observable(f"(p-{c})^2", lambda q, p: (p - c) ** 2)


def centered_qp(cq: float, cp: float) -> Observable:
    return Observable(f"(q-{cq})(p-{cp})", lambda q, p: (q - cq) * (p - cp))


def energy(h: Hamiltonian) -> Observable:
    return Observable("H", h.energy)

