"""Complex signals on the grid ``N_{a+1} = {a+1, a+2, ...}``.

A :class:`GridSignal` stores values by integer offset ``m = k - a``.  Offsets
``m >= 1`` are the signal proper; offsets ``m <= 0`` are optional history
(``pre_samples[0]`` is ``x(a)``, ``pre_samples[1]`` is ``x(a-1)`` and so on)
needed only by operators that look left of the base point.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .special import rising_power

__all__ = [
    "BaseMismatchError",
    "GridSignal",
    "MissingHistoryError",
    "geometric",
    "read_signal",
    "rising",
    "unit_impulse",
    "unit_step",
    "write_signal",
]

Generator = Callable[[np.ndarray], np.ndarray]


class MissingHistoryError(LookupError):
    """An operator needed ``x(k)`` for ``k <= a`` that was never supplied."""


class BaseMismatchError(ValueError):
    """Two signals combined by an operator live on different grids."""


def _freeze(values) -> np.ndarray:
    arr = np.array(values, dtype=complex).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GridSignal:
    """Immutable complex signal on ``N_{a+1}``.

    Without a generator the stored samples are the whole signal and the
    signal is zero past them (finite support).  With a generator the samples
    are a cached prefix that must agree with it.
    """

    base: float
    samples: np.ndarray = field(default_factory=lambda: _freeze([]))
    pre_samples: np.ndarray = field(default_factory=lambda: _freeze([]))
    generator: Generator | None = None

    def __post_init__(self):
        object.__setattr__(self, "base", float(self.base))
        object.__setattr__(self, "samples", _freeze(self.samples))
        object.__setattr__(self, "pre_samples", _freeze(self.pre_samples))
        if self.generator is not None and self.samples.size:
            ref = self._generate(np.arange(1, self.samples.size + 1))
            scale = np.maximum(1.0, np.abs(ref))
            if np.any(np.abs(ref - self.samples) > 1e-12 * scale):
                raise ValueError("stored samples disagree with the generator")

    # construction helpers

    @classmethod
    def from_samples(cls, base: float, samples, pre_samples=()) -> GridSignal:
        return cls(base, samples, pre_samples)

    @classmethod
    def from_function(cls, base: float, func: Generator, pre_samples=()) -> GridSignal:
        """``func`` maps an integer array of offsets ``k - a`` to values."""
        return cls(base, (), pre_samples, func)

    # indexing

    @property
    def is_finite(self) -> bool:
        return self.generator is None

    @property
    def support(self) -> int | None:
        """Number of stored samples for finite signals, ``None`` otherwise."""
        return self.samples.size if self.generator is None else None

    def offset(self, k) -> np.ndarray | int:
        """Integer offsets ``k - a``; rejects points off the grid."""
        m = np.asarray(k, dtype=float) - self.base
        r = np.round(m)
        if np.any(np.abs(m - r) > 1e-9 * np.maximum(1.0, np.abs(m))):
            raise ValueError(f"k={k!r} is not on the grid a + Z with a={self.base:g}")
        r = r.astype(int)
        return int(r) if r.ndim == 0 else r

    def _generate(self, m: np.ndarray) -> np.ndarray:
        out = np.asarray(self.generator(np.asarray(m)), dtype=complex)
        return np.broadcast_to(out, np.shape(m)).astype(complex)

    def at(self, m) -> np.ndarray:
        """Values at integer offsets ``m`` (array or scalar).

        Offsets ``<= 0`` with no stored history read as zero.
        """
        m = np.asarray(m, dtype=int)
        out = np.zeros(m.shape, dtype=complex)
        pos = m >= 1
        if np.any(pos):
            mp = m[pos]
            vals = np.zeros(mp.shape, dtype=complex)
            stored = mp <= self.samples.size
            vals[stored] = self.samples[mp[stored] - 1]
            if self.generator is not None and np.any(~stored):
                vals[~stored] = self._generate(mp[~stored])
            out[pos] = vals
        neg = ~pos
        if np.any(neg):
            h = -m[neg]
            vals = np.zeros(h.shape, dtype=complex)
            have = h < self.pre_samples.size
            vals[have] = self.pre_samples[h[have]]
            out[neg] = vals
        return out[()] if out.ndim == 0 else out

    def value(self, k) -> complex | np.ndarray:
        """``x(k)`` for grid points ``k``."""
        return self.at(self.offset(k))

    def window(self, count: int) -> np.ndarray:
        """Values at offsets ``1 .. count``."""
        return self.at(np.arange(1, count + 1))

    def history(self, depth: int) -> np.ndarray:
        """``[x(a), x(a-1), ..., x(a+1-depth)]``; raises if not supplied."""
        if depth > self.pre_samples.size:
            raise MissingHistoryError(
                f"needs {depth} pre-sample(s) at k <= a={self.base:g}, "
                f"{self.pre_samples.size} supplied"
            )
        return np.array(self.pre_samples[:depth])

    def grid(self, count: int) -> np.ndarray:
        """Grid points ``a + 1 .. a + count``."""
        return self.base + np.arange(1, count + 1)

    # derived signals

    def map_values(self, func: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> GridSignal:
        """Pointwise transform ``func(offsets, values)`` on samples and history."""
        pre_m = -np.arange(self.pre_samples.size)
        pre = func(pre_m, self.pre_samples) if self.pre_samples.size else ()
        samples = func(np.arange(1, self.samples.size + 1), self.samples)
        gen = None
        if self.generator is not None:
            g = self.generator
            gen = lambda m: func(np.asarray(m), np.asarray(g(m), dtype=complex))  # noqa: E731
        return GridSignal(self.base, samples, pre, gen)

    def conj(self) -> GridSignal:
        return self.map_values(lambda m, v: np.conj(v))

    @property
    def real(self) -> GridSignal:
        return self.map_values(lambda m, v: v.real.astype(complex))

    @property
    def imag(self) -> GridSignal:
        return self.map_values(lambda m, v: v.imag.astype(complex))

    def truncated(self, count: int) -> GridSignal:
        """Finite-support copy keeping offsets ``1 .. count``."""
        return GridSignal(self.base, self.window(count), self.pre_samples)

    def __repr__(self) -> str:
        kind = "finite" if self.is_finite else "generated"
        return (
            f"GridSignal(base={self.base:g}, {kind}, samples={self.samples.size}, "
            f"pre_samples={self.pre_samples.size})"
        )


def combine(signals: Sequence[GridSignal], coeffs: Sequence[complex]) -> GridSignal:
    """Linear combination ``sum c_i x_i`` of signals sharing one base."""
    bases = {s.base for s in signals}
    if len(bases) != 1:
        raise BaseMismatchError(f"signals have different bases {sorted(bases)}")
    base = bases.pop()
    depth = max(s.pre_samples.size for s in signals)
    pre = sum(c * s.at(-np.arange(depth)) for s, c in zip(signals, coeffs)) if depth else ()
    if all(s.is_finite for s in signals):
        n = max(s.samples.size for s in signals)
        return GridSignal(base, sum(c * s.window(n) for s, c in zip(signals, coeffs)), pre)
    pairs = list(zip(signals, coeffs))
    return GridSignal(base, (), pre, lambda m: sum(c * s.at(m) for s, c in pairs))


def pointwise(x: GridSignal, y: GridSignal, op=np.multiply) -> GridSignal:
    """Pointwise ``op(x, y)`` on ``N_{a+1}``."""
    if x.base != y.base:
        raise BaseMismatchError(f"bases differ: {x.base:g} vs {y.base:g}")
    if x.is_finite and y.is_finite:
        n = max(x.samples.size, y.samples.size)
        return GridSignal(x.base, op(x.window(n), y.window(n)))
    return GridSignal(x.base, (), (), lambda m: op(x.at(m), y.at(m)))


def unit_step(a: float = 0.0, history: int = 0) -> GridSignal:
    """``u(k - a - 1)``: one on ``N_{a+1}``, zero before (``history`` zeros stored)."""
    return GridSignal(a, (), np.zeros(history), lambda m: np.ones(np.shape(m)))


def unit_impulse(a: float = 0.0, history: int = 0) -> GridSignal:
    """``delta(k - a - 1)``."""
    return GridSignal(a, [1.0], np.zeros(history))


def rising(a: float, alpha: float) -> GridSignal:
    """``(k - a)^(alpha)``, the rising power on ``N_{a+1}``."""
    return GridSignal(a, (), (), lambda m: rising_power(m, alpha))


def geometric(a: float, q: complex, c: complex = 1.0) -> GridSignal:
    """``c * q^(k - a - 1)``; its transform is ``c / (1 - q (1 - s))``."""
    return GridSignal(a, (), (), lambda m: c * np.power(complex(q), np.asarray(m) - 1))


# I/O


def _pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in values]


def signal_to_json(x: GridSignal, count: int | None = None) -> str:
    """JSON ``{base, pre_samples, samples}`` with complex values as ``[re, im]``."""
    if count is None and not x.is_finite:
        raise ValueError("generated signals need an explicit sample count")
    n = x.samples.size if count is None else count
    payload = {
        "base": x.base,
        "pre_samples": _pairs(x.pre_samples),
        "samples": _pairs(x.window(n)),
    }
    return json.dumps(payload)


def signal_from_json(text: str) -> GridSignal:
    data = json.loads(text)
    try:
        base = float(data["base"])
        samples = [complex(re, im) for re, im in data["samples"]]
        pre = [complex(re, im) for re, im in data.get("pre_samples", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed signal JSON: {exc}") from exc
    return GridSignal(base, samples, pre)


def signal_to_csv(x: GridSignal, count: int | None = None) -> str:
    """CSV ``k,re,im``; history rows come first, base recorded in a comment."""
    n = x.samples.size if count is None else count
    if x.generator is not None and count is None:
        raise ValueError("generated signals need an explicit sample count")
    buf = io.StringIO()
    buf.write(f"# base={x.base!r}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "re", "im"])
    for h in range(x.pre_samples.size - 1, -1, -1):
        v = x.pre_samples[h]
        w.writerow([repr(x.base - h), repr(float(v.real)), repr(float(v.imag))])
    for m, v in enumerate(x.window(n), start=1):
        w.writerow([repr(x.base + m), repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


def signal_from_csv(text: str) -> GridSignal:
    base = None
    rows = []
    lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            if key.strip() == "base":
                base = float(val)
            continue
        if line.strip():
            lines.append(line)
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["k", "re", "im"]:
        raise ValueError("signal CSV must have header k,re,im")
    for lineno, row in enumerate(reader, start=2):
        try:
            rows.append((float(row["k"]), complex(float(row["re"]), float(row["im"]))))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    if base is None:
        base = min(k for k, _ in rows) - 1.0
    pre, samples = {}, {}
    for k, v in rows:
        m = round(k - base)
        if not math.isclose(k - base, m, abs_tol=1e-9):
            raise ValueError(f"k={k!r} is off the grid of base {base!r}")
        (samples if m >= 1 else pre)[m] = v
    n = max(samples, default=0)
    depth = -min(pre, default=1) + 1
    return GridSignal(
        base,
        [samples.get(m, 0j) for m in range(1, n + 1)],
        [pre.get(-h, 0j) for h in range(depth)],
    )


def write_signal(x: GridSignal, path: str | Path, count: int | None = None) -> None:
    path = Path(path)
    text = signal_to_json(x, count) if path.suffix == ".json" else signal_to_csv(x, count)
    path.write_text(text)


def read_signal(path: str | Path) -> GridSignal:
    path = Path(path)
    text = path.read_text()
    return signal_from_json(text) if path.suffix == ".json" else signal_from_csv(text)
