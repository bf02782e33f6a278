"""The one-period kernel of the limit law and its forward recurrence.

For x >= M and y >= base,

    F(x) = sum_y K(x, y) F(y),   K(x, y) = f_N(x - y) - E(x, y),

where E is the overshoot table of the cycle summary.  K(x, x + D) is
always f_N(-D) (the all-minima path never overshoots), which is what
makes the forward rearrangement possible.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .cycle import CycleSummary


class Kernel:
    def __init__(self, summary: CycleSummary, num: Callable = float, overshoot: bool = True):
        self.D = summary.D
        self.M = summary.M
        self.base = summary.base
        self.fw = [num(w) for w in summary.fN.weights.tolist()]
        self.kmax = summary.fN.max_support  # largest value of S_N
        self.zero = num(0)
        if overshoot and summary.overshoot.size:
            self.E = [[num(v) for v in row] for row in summary.overshoot.tolist()]
            self.reach = summary.overshoot_reach
        else:
            self.E = []
            self.reach = self.base

    def f(self, z: int):
        i = z + self.D
        if 0 <= i < len(self.fw):
            return self.fw[i]
        return self.zero

    def e(self, x: int, y: int):
        i = x - self.M
        j = y - self.base
        if 0 <= i < len(self.E) and 0 <= j < len(self.E[i]):
            return self.E[i][j]
        return self.zero

    def k(self, x: int, y: int):
        return self.f(x - y) - self.e(x, y)

    def _window(self, x: int, top: int) -> range:
        # f_N(x - y) vanishes unless x - kmax <= y <= x + D
        return range(max(self.base, x - self.kmax), top + 1)

    def apply(self, x: int, F: Sequence, top: int | None = None):
        """sum_{y=base}^{top} K(x, y) F(y - base), top defaulting to x + D."""
        if top is None:
            top = x + self.D
        acc = self.zero
        for y in self._window(x, top):
            acc += self.k(x, y) * F[y - self.base]
        return acc

    def next_value(self, F: Sequence):
        """F(base + len(F)) from the recurrence written at x' = base + len(F) - D."""
        t = len(F)
        xp = self.base + t - self.D
        rest = self.apply(xp, F, top=xp + self.D - 1)
        return (F[t - self.D] - rest) / self.fw[0]

    def extend(self, F: list, count: int) -> list:
        while len(F) < count:
            F.append(self.next_value(F))
        return F
