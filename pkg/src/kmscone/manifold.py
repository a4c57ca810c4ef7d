"""Product manifolds R^a x T^b with named coordinates.

Angle coordinates have period 2*pi.  Points are plain float tuples / numpy
rows in coordinate order; angle entries are conventionally kept in
[0, 2*pi) but nothing here wraps them silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ManifoldSpec:
    """A product R^a x T^b, described coordinate by coordinate.

    coord_names: labels in storage order.
    kinds: 'lin' or 'ang' per coordinate.
    window: per-coordinate (lo, hi) sampling box used by residual checks;
        defaults to [-2, 2] for linear and [0, 2*pi) for angle coordinates.
    """

    coord_names: tuple
    kinds: tuple
    window: tuple = field(default=None)

    def __post_init__(self):
        if len(self.coord_names) != len(self.kinds):
            raise ValueError("coord_names and kinds must align")
        if len(self.coord_names) < 1:
            raise ValueError("need at least one coordinate")
        if len(set(self.coord_names)) != len(self.coord_names):
            raise ValueError("coordinate names must be unique")
        for k in self.kinds:
            if k not in ("lin", "ang"):
                raise ValueError(f"unknown coordinate kind {k!r}")
        if self.window is None:
            win = tuple(
                (-2.0, 2.0) if k == "lin" else (0.0, TWO_PI) for k in self.kinds
            )
            object.__setattr__(self, "window", win)

    @property
    def dim(self):
        return len(self.coord_names)

    @property
    def linear_dims(self):
        return sum(1 for k in self.kinds if k == "lin")

    @property
    def angle_dims(self):
        return sum(1 for k in self.kinds if k == "ang")

    def index(self, name):
        return self.coord_names.index(name)

    def is_angle(self, name):
        return self.kinds[self.index(name)] == "ang"

    def angle_names(self):
        return tuple(n for n, k in zip(self.coord_names, self.kinds) if k == "ang")

    def env(self, points):
        """Map an (N, dim) array or a length-dim sequence to a name->array env."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.shape[-1] != self.dim:
            raise ValueError(f"points have {pts.shape[-1]} coords, expected {self.dim}")
        return {name: pts[..., i] for i, name in enumerate(self.coord_names)}

    def sample_points(self, n, rng, window=None):
        """Draw n uniform sample points from the (given or default) window."""
        win = window if window is not None else self.window
        lo = np.array([w[0] for w in win])
        hi = np.array([w[1] for w in win])
        return lo + (hi - lo) * rng.random((n, self.dim))

    def with_window(self, window):
        return ManifoldSpec(self.coord_names, self.kinds, tuple(window))

    def product_with_circle(self, name):
        """Append one angle coordinate (used by symplectification)."""
        if name in self.coord_names:
            raise ValueError(f"coordinate {name!r} already present")
        return ManifoldSpec(
            self.coord_names + (name,),
            self.kinds + ("ang",),
            self.window + ((0.0, TWO_PI),),
        )


def manifold(spec):
    """Build a ManifoldSpec from a compact string like 'x:lin,theta:ang,y:lin'."""
    names, kinds = [], []
    for part in spec.split(","):
        name, kind = part.strip().split(":")
        names.append(name)
        kinds.append(kind)
    return ManifoldSpec(tuple(names), tuple(kinds))
