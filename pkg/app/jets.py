"""
Hyperbolic Sobolev Lab - Taylor Jets
Derivative jets f(x0), f'(x0), ..., f^(N)(x0) batched over many anchors,
propagated with jax's Taylor-mode jet transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple, Union

import jax
import jax.numpy as jnp
import numpy as np
from jax.experimental.jet import jet

jax.config.update("jax_enable_x64", True)

Number = Union[float, int, np.ndarray]


@dataclass(frozen=True)
class TaylorJet:
    """derivatives[j] holds f^(j) at every anchor"""

    anchor: np.ndarray
    derivatives: Tuple[jnp.ndarray, ...]

    @classmethod
    def variable(cls, anchor: Number, order: int) -> "TaylorJet":
        """The identity function x expanded at the anchors"""
        x = jnp.asarray(anchor, dtype=jnp.float64)
        terms = [x, jnp.ones_like(x)] + [jnp.zeros_like(x)] * (order - 1)
        return cls(np.asarray(x), tuple(terms[: order + 1]))

    @classmethod
    def expand(cls, fn: Callable, anchor: Number, order: int) -> "TaylorJet":
        """Jet of fn at the anchors; fn must be jax-traceable and elementwise"""
        return push(fn, cls.variable(anchor, order))

    @property
    def order(self) -> int:
        return len(self.derivatives) - 1

    @property
    def value(self) -> np.ndarray:
        return np.asarray(self.derivatives[0])

    def derivative(self, m: int) -> np.ndarray:
        """f^(m) at the anchors"""
        if not 0 <= m <= self.order:
            raise ValueError(f"Jet of order {self.order} has no derivative of order {m}")
        return np.asarray(self.derivatives[m])

    def differentiate(self) -> "TaylorJet":
        """Jet of f', one order shorter"""
        if self.order < 1:
            raise ValueError("Cannot differentiate an order-0 jet")
        return TaylorJet(self.anchor, self.derivatives[1:])

    def truncate(self, order: int) -> "TaylorJet":
        return TaylorJet(self.anchor, self.derivatives[: order + 1])

    def __repr__(self) -> str:
        return f"TaylorJet(order={self.order}, batch={self.anchor.shape})"


def push(fn: Callable, *jets: TaylorJet) -> TaylorJet:
    """
    Jet of fn(f_1, ..., f_m) from the jets of its arguments.

    All arguments are cut to the shortest order first. The chain and product
    rules are applied by jax.experimental.jet.
    """
    order = min(j.order for j in jets)
    primals = tuple(j.derivatives[0] for j in jets)
    if order == 0:
        return TaylorJet(jets[0].anchor, (jnp.asarray(fn(*primals)),))
    series = tuple(tuple(j.derivatives[1 : order + 1]) for j in jets)
    primal_out, series_out = jet(fn, primals, series)
    primal_out = jnp.broadcast_to(primal_out, jnp.shape(primals[0]))
    terms = tuple(jnp.broadcast_to(t, jnp.shape(primals[0])) for t in series_out)
    return TaylorJet(jets[0].anchor, (primal_out,) + terms)
