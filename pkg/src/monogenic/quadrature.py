"""Quadrature rules on spheres and balls in M = R^(m+1).

For m <= 3 the rules are tensor products of Gauss-Legendre nodes in the polar
hyperspherical angles and the trapezoid rule in the periodic azimuth. Larger
m falls back to scrambled Sobol points with equal weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm, qmc

from .kernel import surface_area_sigma

__all__ = ["QuadratureRule", "build_quadrature", "focused_ball_rule", "unit_sphere_rule"]

TENSOR_MAX_M = 3
DEFAULT_SEED = 42


@dataclass
class QuadratureRule:
    kind: str  # "sphere_surface" | "ball_volume"
    center: np.ndarray
    radius: float
    m: int
    resolution: int
    nodes: np.ndarray
    weights: np.ndarray
    normals: np.ndarray | None = None
    seed: int | None = None
    focus: np.ndarray | None = None
    excised: float = 0.0
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.weights)

    def subset(self, mask: np.ndarray) -> "QuadratureRule":
        return QuadratureRule(
            self.kind,
            self.center,
            self.radius,
            self.m,
            self.resolution,
            self.nodes[mask],
            self.weights[mask],
            None if self.normals is None else self.normals[mask],
            self.seed,
            self.focus,
            self.excised,
            dict(self.meta),
        )

    def rebuild(self, resolution: int) -> "QuadratureRule":
        """Same domain at another resolution."""
        if self.focus is not None:
            return focused_ball_rule(self.center, self.radius, self.m, resolution, self.focus, self.excised, self.seed)
        return build_quadrature(self.kind, self.center, self.radius, self.m, resolution, self.seed)

    def describe(self) -> dict:
        out = {
            "kind": self.kind,
            "center": [float(c) for c in self.center],
            "radius": float(self.radius),
            "m": self.m,
            "resolution": self.resolution,
            "nodes": len(self),
            "seed": self.seed,
        }
        if self.focus is not None:
            out["focus"] = [float(c) for c in self.focus]
            out["excised_radius"] = self.excised
        return out

    def to_json(self) -> dict:
        doc = self.describe()
        doc["node_coords"] = self.nodes.tolist()
        doc["weights"] = self.weights.tolist()
        if self.normals is not None:
            doc["normals"] = self.normals.tolist()
        return doc


def _gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def unit_sphere_rule(m: int, resolution: int, seed: int | None = DEFAULT_SEED) -> tuple[np.ndarray, np.ndarray]:
    """Directions on S^m with weights summing to sigma_m."""
    if m <= TENSOR_MAX_M:
        return _tensor_sphere(m, resolution)
    return _sobol_sphere(m, resolution, seed)


def _tensor_sphere(m: int, res: int) -> tuple[np.ndarray, np.ndarray]:
    n_phi = 2 * res
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    w_phi = np.full(n_phi, 2.0 * np.pi / n_phi)
    # angles[i] for polar angle theta_{i+1}, weight sin^(m-1-i)
    polar = [_gauss_legendre(res, 0.0, np.pi) for _ in range(m - 1)]
    grids = np.meshgrid(*[p[0] for p in polar], phi, indexing="ij")
    wgrids = np.meshgrid(*[p[1] for p in polar], w_phi, indexing="ij")
    thetas = [g.ravel() for g in grids[:-1]]
    azim = grids[-1].ravel()
    weights = np.prod([g.ravel() for g in wgrids], axis=0)
    coords = []
    running = np.ones_like(azim)
    for i, th in enumerate(thetas):
        coords.append(running * np.cos(th))
        weights = weights * np.sin(th) ** (m - 1 - i)
        running = running * np.sin(th)
    coords.append(running * np.cos(azim))
    coords.append(running * np.sin(azim))
    return np.stack(coords, axis=1), weights


def _sobol_count(m: int, res: int) -> int:
    return 1 << max(10, math.ceil(math.log2(res ** min(m, 4))))


def _sobol_sphere(m: int, res: int, seed: int | None) -> tuple[np.ndarray, np.ndarray]:
    n = _sobol_count(m, res)
    u = qmc.Sobol(m + 1, scramble=True, seed=seed).random(n)
    g = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    dirs = g / np.linalg.norm(g, axis=1, keepdims=True)
    return dirs, np.full(n, surface_area_sigma(m).value / n)


def build_quadrature(kind: str, center, radius: float, m: int, resolution: int, seed: int | None = DEFAULT_SEED) -> QuadratureRule:
    """Surface rule on ``dB(center, radius)`` or volume rule on ``B(center, radius)``."""
    if resolution < 4:
        raise ValueError("resolution must be >= 4")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if m < 1:
        raise ValueError("m must be >= 1")
    center = np.asarray(center, dtype=float).reshape(m + 1)
    used_seed = seed if m > TENSOR_MAX_M else None
    dirs, w = unit_sphere_rule(m, resolution, seed)
    if kind == "sphere_surface":
        nodes = center + radius * dirs
        return QuadratureRule(kind, center, float(radius), m, resolution, nodes, w * radius**m, dirs.copy(), used_seed)
    if kind == "ball_volume":
        if m > TENSOR_MAX_M:
            n = len(w)
            u = qmc.Sobol(1, scramble=True, seed=None if seed is None else seed + 1).random(n)[:, 0]
            rho = radius * u ** (1.0 / (m + 1))
            vol = surface_area_sigma(m).value * radius ** (m + 1) / (m + 1)
            return QuadratureRule(kind, center, float(radius), m, resolution, center + rho[:, None] * dirs, np.full(n, vol / n), None, used_seed)
        rho, wr = _gauss_legendre(resolution, 0.0, radius)
        nodes = center + (rho[:, None, None] * dirs[None, :, :]).reshape(-1, m + 1)
        weights = (wr[:, None] * rho[:, None] ** m * w[None, :]).ravel()
        return QuadratureRule(kind, center, float(radius), m, resolution, nodes, weights, None, used_seed)
    raise ValueError(f"unknown rule kind {kind!r}")


def focused_ball_rule(center, radius: float, m: int, resolution: int, focus, epsilon: float = 0.0, seed: int | None = DEFAULT_SEED) -> QuadratureRule:
    """Volume rule on ``B(center, radius) minus B(focus, epsilon)`` in polar coordinates about ``focus``.

    The radial Jacobian ``rho^m`` cancels the ``|y - focus|^-m`` kernel
    singularity, so integrands like ``E(y - focus) g(y)`` are smooth in these
    coordinates.
    """
    if resolution < 4:
        raise ValueError("resolution must be >= 4")
    center = np.asarray(center, dtype=float).reshape(m + 1)
    focus = np.asarray(focus, dtype=float).reshape(m + 1)
    d = focus - center
    if np.linalg.norm(d) + epsilon >= radius:
        raise ValueError("excised ball must lie inside the domain")
    dirs, w = unit_sphere_rule(m, resolution, seed)
    proj = dirs @ d
    rho_max = -proj + np.sqrt(proj**2 - d @ d + radius**2)
    t, wt = np.polynomial.legendre.leggauss(resolution)
    t = 0.5 * (t + 1.0)
    span = rho_max - epsilon
    rho = epsilon + span[:, None] * t[None, :]
    weights = (w[:, None] * 0.5 * wt[None, :] * span[:, None] * rho**m).ravel()
    nodes = (focus + rho[:, :, None] * dirs[:, None, :]).reshape(-1, m + 1)
    used_seed = seed if m > TENSOR_MAX_M else None
    return QuadratureRule("ball_volume", center, float(radius), m, resolution, nodes, weights, None, used_seed, focus, float(epsilon))
