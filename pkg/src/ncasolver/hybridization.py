"""Bath correlation (hybridization) components on the two-branch contour.

A table stores the lesser (+-) and greater (-+) components on a uniform,
two-sided time grid j*dt, j = -L..L.  Branch-resolved contour components are
assembled from these by the ordering rules, with the equal-time value of the
same-branch components taken as the limit from the causal side t1 -> t2+.
The zero-temperature particle-hole-symmetric flat band has closed forms,
evaluated through sinc so t = 0 never divides by zero.  Tabulated baths are
read from CSV and must cover negative times explicitly: no symmetry between
the two time directions is assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GridError, ModelError, ParseError
from .liouville import MINUS, PLUS

GRID_RTOL = 1e-9

CSV_HEADER = "t,re_lesser,im_lesser,re_greater,im_greater"


@dataclass(frozen=True)
class FlatBandParams:
    """Flat band at zero temperature: coupling strength eta, half-bandwidth w."""

    eta: float
    w: float

    def __post_init__(self):
        if self.eta < 0:
            raise ModelError(f"coupling eta must be nonnegative, got {self.eta}")
        if self.w <= 0:
            raise ModelError(f"band parameter w must be positive, got {self.w}")


def flat_band_lesser(t, params):
    """2i eta e^{i w t/2} sin(w t/2)/t, analytic value i*eta*w at t = 0."""
    x = 0.5 * params.w * np.asarray(t, dtype=float)
    return 2j * params.eta * np.exp(1j * x) * 0.5 * params.w * np.sinc(x / np.pi)


def flat_band_greater(t, params):
    """-2i eta e^{-i w t/2} sin(w t/2)/t, analytic value -i*eta*w at t = 0."""
    x = 0.5 * params.w * np.asarray(t, dtype=float)
    return -2j * params.eta * np.exp(-1j * x) * 0.5 * params.w * np.sinc(x / np.pi)


def lag_index(tau, dt):
    """Integer j with tau = j*dt, or GridError if tau is off the grid."""
    j = round(tau / dt)
    if abs(tau - j * dt) > GRID_RTOL * dt:
        raise GridError(f"time difference {tau} is not a multiple of dt = {dt}")
    return int(j)


@dataclass(frozen=True)
class HybridizationTable:
    """Lesser/greater components sampled on t = j*dt for j = -L..L.

    ``lesser``/``greater`` expose the nonnegative-time halves (length L+1);
    the two-sided arrays back the signed-lag lookups needed when the kernel
    is evaluated at reversed time arguments.  ``xi`` is the statistics sign
    (-1 fermions, +1 bosons), carried as data.
    """

    dt: float
    L: int
    lesser_two_sided: np.ndarray
    greater_two_sided: np.ndarray
    xi: int = -1

    def __post_init__(self):
        if self.dt <= 0:
            raise GridError(f"dt must be positive, got {self.dt}")
        if self.L < 1:
            raise GridError(f"table needs at least one step, got L = {self.L}")
        if self.xi not in (-1, 1):
            raise ModelError(f"statistics sign must be +-1, got {self.xi}")
        for name in ("lesser_two_sided", "greater_two_sided"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.shape != (2 * self.L + 1,):
                raise GridError(
                    f"{name} must have 2L+1 = {2 * self.L + 1} entries, got {arr.shape}"
                )
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def lesser(self):
        """Delta^{+-}(j*dt) for j = 0..L."""
        return self.lesser_two_sided[self.L:]

    @property
    def greater(self):
        """Delta^{-+}(j*dt) for j = 0..L."""
        return self.greater_two_sided[self.L:]

    def lesser_at(self, j):
        """Delta^{+-} at signed lag index j (time j*dt)."""
        return self._pick(self.lesser_two_sided, j)

    def greater_at(self, j):
        """Delta^{-+} at signed lag index j (time j*dt)."""
        return self._pick(self.greater_two_sided, j)

    def _pick(self, arr, j):
        if not -self.L <= j <= self.L:
            raise GridError(f"lag index {j} outside tabulated range [-{self.L}, {self.L}]")
        return complex(arr[j + self.L])


def sample_flat_band(params, dt, L, xi=-1):
    """Tabulate the flat-band closed forms on the two-sided grid j*dt, j = -L..L."""
    if dt <= 0:
        raise GridError(f"dt must be positive, got {dt}")
    if L < 1:
        raise GridError(f"need L >= 1, got {L}")
    t = np.arange(-L, L + 1) * dt
    return HybridizationTable(
        dt=dt,
        L=L,
        lesser_two_sided=flat_band_lesser(t, params),
        greater_two_sided=flat_band_greater(t, params),
        xi=xi,
    )


def contour_component(g1, g2, t1, t2, tab):
    """Delta^{g1 g2}(t1, t2) assembled from the stored components.

    (+,-) is always the lesser component and (-,+) always the greater one,
    evaluated at the signed difference t1 - t2.  The same-branch components
    follow the contour ordering, with the tie at t1 = t2 resolved toward the
    causal side: ++ -> greater, -- -> lesser at equal times.
    """
    j = lag_index(t1 - t2, tab.dt)
    if (g1, g2) == (PLUS, MINUS):
        return tab.lesser_at(j)
    if (g1, g2) == (MINUS, PLUS):
        return tab.greater_at(j)
    if (g1, g2) == (PLUS, PLUS):
        return tab.greater_at(j) if j >= 0 else tab.lesser_at(j)
    if (g1, g2) == (MINUS, MINUS):
        return tab.lesser_at(j) if j >= 0 else tab.greater_at(j)
    raise ValueError(f"branch labels must be +1 or -1, got ({g1!r}, {g2!r})")


def _fmt(x):
    return repr(float(x))


def save_tabulated(tab, path):
    """Write the full two-sided table as CSV (see CSV_HEADER for the columns).

    Values are printed in shortest round-trip decimal form, so a load
    reproduces them bit-for-bit.
    """
    lines = [CSV_HEADER]
    for j in range(-tab.L, tab.L + 1):
        les = tab.lesser_at(j)
        gtr = tab.greater_at(j)
        lines.append(
            ",".join(
                (_fmt(j * tab.dt), _fmt(les.real), _fmt(les.imag), _fmt(gtr.real), _fmt(gtr.imag))
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_tabulated(path, xi=-1):
    """Read a two-sided hybridization table from CSV.

    The grid must be uniform to 1e-9 relative (dt is inferred from the rows)
    and symmetric about t = 0, i.e. cover [-t_max, t_max] with an odd number
    of rows.  Raises ParseError for missing/malformed files and GridError for
    grid defects.
    """
    path = Path(path)
    if not path.exists():
        raise ParseError("hybridization file not found", path=path)
    raw = path.read_text(encoding="ascii").splitlines()
    lines = [(k + 1, line.strip()) for k, line in enumerate(raw) if line.strip()]
    if not lines:
        raise ParseError("empty hybridization file", path=path)
    first_no, header = lines[0]
    if header.replace(" ", "") != CSV_HEADER:
        raise ParseError(f"expected header {CSV_HEADER!r}", path=path, line=first_no)
    if len(lines) < 3:
        raise ParseError("need at least two data rows to infer the grid", path=path)

    ts, lesser, greater = [], [], []
    for lineno, line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 5:
            raise ParseError(f"expected 5 comma-separated values, got {len(parts)}",
                             path=path, line=lineno)
        try:
            t, rl, il, rg, ig = (float(p) for p in parts)
        except ValueError as exc:
            raise ParseError(f"non-numeric value: {exc}", path=path, line=lineno) from None
        ts.append(t)
        lesser.append(complex(rl, il))
        greater.append(complex(rg, ig))

    ts = np.asarray(ts)
    n = ts.size
    dt = (ts[-1] - ts[0]) / (n - 1)
    if dt <= 0:
        raise GridError("time column must be strictly ascending")
    steps = np.diff(ts)
    if np.abs(steps - dt).max() > GRID_RTOL * dt:
        raise GridError(f"non-uniform time grid (mean step {dt})")
    if n % 2 == 0:
        raise GridError("table must contain an odd number of rows (two-sided grid with t = 0)")
    L = (n - 1) // 2
    if abs(ts[0] + ts[-1]) > GRID_RTOL * dt or abs(ts[L]) > GRID_RTOL * dt:
        raise GridError("table must cover [-t_max, t_max] symmetrically about t = 0")

    return HybridizationTable(
        dt=float(dt),
        L=L,
        lesser_two_sided=np.asarray(lesser, dtype=complex),
        greater_two_sided=np.asarray(greater, dtype=complex),
        xi=xi,
    )
