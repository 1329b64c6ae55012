"""Diagonal multiplication operators on square-summable quaternion sequences,
studied through their finite truncations.

A symbol ``k -> q_k`` defines ``T = diag(q_1, q_2, ...)`` on finitely
supported sequences. Its truncations ``T_n = diag(q_1..q_n)`` are nested
normal matrices whose norms grow without bound for the built-in families,
while the Z-transforms stay strict contractions.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .measure import Full, Points, Rectangle, build_measure, evaluate, scalar_measure
from .qoperator import DEFAULT_FRAME, QMatrix, operator_norm, z_transform
from .qspace import QVector, inner
from .quaternion import Quaternion, SliceFrame, UnitImaginary, class_representative
from .slice_spectral import commutes_with, construct_J

DEFAULT_SIZES = (4, 8, 16, 32, 64)
FAMILIES = ("k_times_m", "k_plus_km", "custom")
GROWTH_RULES = ("linear", "constant")


@dataclass(frozen=True)
class DiagonalSymbol:
    """Rule ``k -> q_k`` (1-based).

    ``k_times_m`` gives ``q_k = k m``, ``k_plus_km`` gives ``q_k = k + k m``.
    ``custom`` uses ``prefix`` for the first entries and continues with the
    growth rule: ``linear`` scales the last prefix entry, ``q_k = q_K k / K``;
    ``constant`` repeats it.
    """

    family: str
    m: UnitImaginary
    prefix: tuple = ()
    growth: str = "linear"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.growth not in GROWTH_RULES:
            raise ValueError(f"unknown growth rule {self.growth!r}; expected one of {GROWTH_RULES}")
        if self.family == "custom" and not self.prefix:
            raise ValueError("custom symbol needs a non-empty prefix")

    @classmethod
    def k_times_m(cls, m=None) -> "DiagonalSymbol":
        return cls("k_times_m", UnitImaginary(DEFAULT_FRAME.m if m is None else m))

    @classmethod
    def k_plus_km(cls, m=None) -> "DiagonalSymbol":
        return cls("k_plus_km", UnitImaginary(DEFAULT_FRAME.m if m is None else m))

    @classmethod
    def custom(cls, prefix: Sequence, growth: str = "linear", m=None) -> "DiagonalSymbol":
        qs = tuple(p if isinstance(p, Quaternion) else Quaternion.from_array(p) for p in prefix)
        return cls("custom", UnitImaginary(DEFAULT_FRAME.m if m is None else m), qs, growth)

    def __call__(self, k: int) -> Quaternion:
        if k < 1:
            raise ValueError("symbol indices start at 1")
        mq = self.m.q
        if self.family == "k_times_m":
            return mq * float(k)
        if self.family == "k_plus_km":
            return (mq + 1.0) * float(k)
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        last, K = self.prefix[-1], len(self.prefix)
        return last * (k / K) if self.growth == "linear" else last

    def values(self, n: int) -> list[Quaternion]:
        return [self(k) for k in range(1, n + 1)]


@dataclass(frozen=True)
class TruncationTower:
    symbol: DiagonalSymbol
    sizes: tuple
    matrices: tuple

    def __iter__(self):
        return iter(zip(self.sizes, self.matrices))


def build_tower(symbol: DiagonalSymbol, sizes: Sequence[int] = DEFAULT_SIZES) -> TruncationTower:
    sizes = tuple(int(s) for s in sizes)
    if not sizes or sizes[0] < 1 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"sizes must be positive and strictly increasing, got {sizes}")
    mats = tuple(QMatrix.diag(symbol.values(s)) for s in sizes)
    return TruncationTower(symbol, sizes, mats)


def unboundedness_signature(tower: TruncationTower, frame: SliceFrame = DEFAULT_FRAME) -> dict:
    """Norm growth of ``T_n`` against the bounded Z-transforms.

    ``unbounded`` means the truncation norms strictly increase along the
    tower; the Z-transform norms must stay below 1 and never decrease.
    """
    if not tower.sizes:
        raise ValueError("empty tower")
    norms, znorms, jres, nested = [], [], [], []
    prev = None
    for size, T in tower:
        norms.append(operator_norm(T))
        znorms.append(operator_norm(z_transform(T)))
        J = construct_J(T, frame).J
        jres.append(commutes_with(J, T) / max(1.0, T.frobenius()))
        if prev is not None:
            nested.append(float(np.linalg.norm(T.data[: prev.n, : prev.n] - prev.data)))
        prev = T
    increasing = all(b > a * (1 + 1e-12) for a, b in zip(norms, norms[1:]))
    z_monotone = all(b >= a - 1e-15 for a, b in zip(znorms, znorms[1:]))
    return {
        "sizes": list(tower.sizes),
        "norms": norms,
        "z_norms": znorms,
        "unbounded": increasing,
        "bounded": not increasing,
        "z_contractive": all(z < 1.0 for z in znorms),
        "z_monotone": z_monotone,
        "J_commutation": jres,
        "nesting_residual": max(nested, default=0.0),
    }


def _pad(x: QVector, n: int) -> QVector:
    data = np.zeros((n, 4))
    data[: x.dim] = x.data
    return QVector(data)


def measure_consistency(
    tower: TruncationTower,
    frame: SliceFrame = DEFAULT_FRAME,
    rng=None,
    pairs: int = 5,
    rectangles: int = 10,
    tol: float = 1e-10,
) -> dict:
    """Compare inner products and spectral measures across truncation levels
    on vectors supported in the smaller level's coordinates.

    Residuals are relative to ``|x| |y|``. ``exclusion`` is the largest
    ``|F_{x,y}(region)|`` at either level for a region avoiding every
    spectral class of the smaller truncation.
    """
    from .sampling import as_rng

    rng = as_rng(rng)
    measures = {size: build_measure(T, frame) for size, T in tower}
    mats = dict(tower)
    worst_inner = worst_measure = worst_excl = 0.0
    for small, large in combinations(tower.sizes, 2):
        Fs, Fl = measures[small], measures[large]
        reps = [class_representative(q, frame.m).to_complex() for q in tower.symbol.values(small)]
        pts = np.array(reps)
        regions = [Full()] + [Points([v]) for v in Fs.values]
        for _ in range(rectangles):
            a = np.sort(rng.uniform(pts.real.min() - 0.5, pts.real.max() + 0.5, size=2))
            b = np.sort(rng.uniform(0.0, pts.imag.max() + 0.5, size=2))
            regions.append(Rectangle(a[0], a[1], b[0], b[1]))
        avoid = ~Points(reps, tol=1e-6)
        for _ in range(pairs):
            xs = QVector(rng.normal(size=(small, 4)))
            ys = QVector(rng.normal(size=(small, 4)))
            xl, yl = _pad(xs, large), _pad(ys, large)
            scale = max(1e-300, xs.norm() * ys.norm())
            d = abs(inner(xl, mats[large] @ yl) - inner(xs, mats[small] @ ys))
            worst_inner = max(worst_inner, d / scale)
            for region in regions:
                d = abs(scalar_measure(Fl, xl, yl, region) - scalar_measure(Fs, xs, ys, region))
                worst_measure = max(worst_measure, d / scale)
            excl = max(abs(scalar_measure(Fl, xl, yl, avoid)), abs(scalar_measure(Fs, xs, ys, avoid)))
            worst_excl = max(worst_excl, excl / scale)
    passed = max(worst_inner, worst_measure, worst_excl) <= tol
    return {
        "sizes": list(tower.sizes),
        "inner_residual": worst_inner,
        "measure_residual": worst_measure,
        "exclusion_residual": worst_excl,
        "tol": tol,
        "passed": passed,
        "domain_model": "finitely supported sequences; closedness of the graph is not checked",
    }


def projection_nesting(tower: TruncationTower, frame: SliceFrame = DEFAULT_FRAME) -> float:
    """Largest ``|F_n({[q_k]})[:m, :m] - F_m({[q_k]})|`` over nested levels and ``k <= m``."""
    measures = {size: build_measure(T, frame) for size, T in tower}
    worst = 0.0
    for small, large in combinations(tower.sizes, 2):
        for q in tower.symbol.values(small):
            region = Points([class_representative(q, frame.m)], tol=1e-6)
            Pl = evaluate(measures[large], region).data[:small, :small]
            Ps = evaluate(measures[small], region).data
            worst = max(worst, float(np.linalg.norm(Pl - Ps)))
    return worst
