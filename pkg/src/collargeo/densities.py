"""Weight densities for the one-dimensional eigenvalue problems.

A density is one of three kinds: a positive constant, the comparison-profile
power s_kappa_lambda^(N-1), or a uniformly sampled table interpolated by a
monotone cubic (PCHIP slopes, cubic Hermite evaluation). The same three kinds
are understood natively by both kernel backends; this module owns the
numpy-vectorized evaluation used everywhere outside the shooting hot loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import kernels
from .errors import DomainError
from .models import s_kappa_lambda

TABLE_SAMPLES = 4097


@dataclass
class DensityProfile:
    """One admissible weight density on an interval starting at 0."""

    kind: str  # "const" | "model" | "table"
    scale: float = 1.0
    c: float = 1.0
    N: float = 2.0
    kappa: float = 0.0
    lam: float = 0.0
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    d: np.ndarray | None = None
    _handles: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def constant(cls, c: float = 1.0) -> "DensityProfile":
        if not (c > 0):
            raise DomainError(f"constant density must be positive, got {c}")
        return cls(kind="const", c=float(c))

    @classmethod
    def model(cls, N: float, kappa: float, lam: float, scale: float = 1.0) -> "DensityProfile":
        if not (N >= 2) or math.isinf(N):
            raise DomainError(f"model density needs a finite N >= 2, got {N}")
        if not (scale > 0):
            raise DomainError(f"scale must be positive, got {scale}")
        return cls(kind="model", N=float(N), kappa=float(kappa), lam=float(lam), scale=float(scale))

    @classmethod
    def from_table(cls, x, y) -> "DensityProfile":
        x = np.ascontiguousarray(x, dtype=float)
        y = np.ascontiguousarray(y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or len(x) < 5:
            raise DomainError("table density needs matching 1-d arrays of >= 5 samples")
        steps = np.diff(x)
        h = (x[-1] - x[0]) / (len(x) - 1)
        if x[0] != 0.0 or not np.allclose(steps, h, rtol=1e-9, atol=1e-12 * max(abs(x[-1]), 1.0)):
            raise DomainError("table density must be uniformly sampled starting at 0")
        if np.any(y[:-1] <= 0.0) or y[0] <= 0.0:
            raise DomainError("table density samples must be positive on [0, D)")
        d = PchipInterpolator(x, y).derivative()(x)
        return cls(kind="table", x=x, y=y, d=np.ascontiguousarray(d, dtype=float))

    @classmethod
    def from_callable(cls, fn, D: float, n_samples: int = TABLE_SAMPLES) -> "DensityProfile":
        if not (D > 0) or not math.isfinite(D):
            raise DomainError(f"table length must be positive and finite, got {D}")
        x = np.linspace(0.0, D, n_samples)
        y = np.asarray(fn(x), dtype=float)
        return cls.from_table(x, y)

    @property
    def table_end(self) -> float | None:
        return float(self.x[-1]) if self.kind == "table" else None

    def __call__(self, t):
        """Vectorized evaluation (numpy path, independent of the backends)."""
        t = np.asarray(t, dtype=float)
        if self.kind == "const":
            out = np.full_like(t, self.scale * self.c)
            return float(out) if out.ndim == 0 else out
        if self.kind == "model":
            s, _ = s_kappa_lambda(self.kappa, self.lam, t)
            out = self.scale * np.power(np.maximum(s, 0.0), self.N - 1.0)
            return float(out) if np.ndim(out) == 0 else out
        n = len(self.x)
        h = (self.x[-1] - self.x[0]) / (n - 1)
        i = np.clip(((t - self.x[0]) / h).astype(int), 0, n - 2)
        dx = self.x[i + 1] - self.x[i]
        s = (t - self.x[i]) / dx
        omu = 1.0 - s
        h00 = (1.0 + 2.0 * s) * omu * omu
        h10 = s * omu * omu
        h01 = s * s * (3.0 - 2.0 * s)
        h11 = s * s * (s - 1.0)
        out = self.scale * (
            h00 * self.y[i] + h10 * dx * self.d[i] + h01 * self.y[i + 1] + h11 * dx * self.d[i + 1]
        )
        return float(out) if np.ndim(out) == 0 else out

    def rescaled(self, factor: float) -> "DensityProfile":
        if not (factor > 0):
            raise DomainError(f"scale factor must be positive, got {factor}")
        return DensityProfile(
            kind=self.kind,
            scale=self.scale * factor,
            c=self.c,
            N=self.N,
            kappa=self.kappa,
            lam=self.lam,
            x=self.x,
            y=self.y,
            d=self.d,
        )

    def handle(self, backend=None):
        """Backend-native density object, cached per backend."""
        backend = backend or kernels.active
        key = backend.BACKEND_NAME
        if key not in self._handles:
            kind_code = {"const": backend.KIND_CONST, "model": backend.KIND_MODEL, "table": backend.KIND_TABLE}[self.kind]
            self._handles[key] = backend.make_density(
                kind_code,
                scale=self.scale,
                c=self.c,
                nexp=self.N - 1.0,
                kappa=self.kappa,
                lam=self.lam,
                x=self.x,
                y=self.y,
                d=self.d,
            )
        return self._handles[key]
