"""Compensated (Neumaier) summation for long series and grid sums."""

from __future__ import annotations


class CompensatedSum:
    """Accumulate floats with an error-free-transform correction term.

    Neumaier's variant of Kahan summation: exact for the running error of
    each addition regardless of operand ordering by magnitude.
    """

    __slots__ = ("_s", "_c")

    def __init__(self, start: float = 0.0):
        self._s = float(start)
        self._c = 0.0

    def add(self, x: float) -> None:
        t = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - t) + x
        else:
            self._c += (x - t) + self._s
        self._s = t

    @property
    def value(self) -> float:
        return self._s + self._c


class ComplexCompensatedSum:
    """Component-wise compensated accumulation of complex terms."""

    __slots__ = ("_re", "_im")

    def __init__(self):
        self._re = CompensatedSum()
        self._im = CompensatedSum()

    def add(self, z: complex) -> None:
        self._re.add(z.real)
        self._im.add(z.imag)

    @property
    def value(self) -> complex:
        return complex(self._re.value, self._im.value)
