"""Transverse eigenvalue spectra of the 2D Laplacian for piston cross sections.

Produces the ordered double set (Dirichlet + Neumann, constant Neumann mode
excluded) that the force formulas sum over.  Providers: analytic circle
(Bessel zeros), analytic rectangle, and a 5-point finite-difference solver
for arbitrary raster masks.

Truncation rule: eigenvalues are taken in ascending order until the count
including degeneracy reaches N; the last eigenvalue keeps its full
multiplicity, so the total may overshoot N by one.  Ties across boundary
conditions order Dirichlet before Neumann, then by angular order.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .special_functions import DERIVATIVE_ZERO, FUNCTION_ZERO, zeros_up_to

DEGENERACY_MERGE_RTOL = 1e-12
RASTER_ZERO_MODE_COEFF = 1e-8  # zero-mode threshold: lambda^2 < coeff / h^2


class SpectrumError(RuntimeError):
    """Raised for invalid masks or a failed eigensolve."""


class BoundaryCondition(Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


_BC_RANK = {BoundaryCondition.DIRICHLET: 0, BoundaryCondition.NEUMANN: 1}


@dataclass(frozen=True)
class TransverseMode:
    lam: float
    lam_sq: float
    degeneracy: int
    bc: BoundaryCondition

    def __post_init__(self):
        if self.lam <= 0.0:
            raise ValueError("transverse eigenvalues must be positive")
        if abs(self.lam_sq - self.lam * self.lam) > 1e-12 * self.lam_sq:
            raise ValueError("lam_sq must equal lam^2 to round-off")
        if self.degeneracy < 1:
            raise ValueError("degeneracy must be >= 1")


@dataclass(frozen=True)
class Circle:
    radius: float

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError("circle radius must be positive")

    @property
    def area(self):
        return np.pi * self.radius**2

    def describe(self):
        return {"variant": "circle", "radius": self.radius}


@dataclass(frozen=True)
class Rectangle:
    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0.0 or self.b <= 0.0:
            raise ValueError("rectangle sides must be positive")

    @property
    def area(self):
        return self.a * self.b

    def describe(self):
        return {"variant": "rectangle", "a": self.a, "b": self.b}


@dataclass
class RasterMask:
    mask: np.ndarray
    h: float

    def __post_init__(self):
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.mask.ndim != 2 or not self.mask.any():
            raise ValueError("mask must be a nonempty 2D boolean grid")
        if self.h <= 0.0:
            raise ValueError("grid spacing must be positive")

    @property
    def area(self):
        return float(self.mask.sum()) * self.h**2

    def describe(self):
        return {"variant": "raster", "h": self.h, "shape": list(self.mask.shape),
                "cells": int(self.mask.sum())}


CrossSection = Union[Circle, Rectangle, RasterMask]


@dataclass
class Spectrum:
    """Sorted transverse eigenvalues with degeneracies for one cross section."""

    lambdas: np.ndarray
    degeneracies: np.ndarray
    bcs: list
    cross_section: CrossSection
    n_requested: int
    area: float
    discretization_error: Optional[np.ndarray] = None
    raster_detail: Optional[dict] = field(default=None, repr=False)

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=np.float64)
        self.degeneracies = np.asarray(self.degeneracies, dtype=np.int64)
        if self.lambdas.size == 0:
            raise SpectrumError("empty spectrum")
        if np.any(self.lambdas <= 0.0):
            raise SpectrumError("eigenvalues must be positive (zero mode excluded)")
        if np.any(np.diff(self.lambdas) < 0.0):
            raise SpectrumError("eigenvalues must be sorted ascending")

    @property
    def modes(self):
        return [
            TransverseMode(float(l), float(l * l), int(g), bc)
            for l, g, bc in zip(self.lambdas, self.degeneracies, self.bcs)
        ]

    @property
    def total_count(self):
        """Mode count including degeneracy."""
        return int(self.degeneracies.sum())

    def subset(self, bc):
        keep = [i for i, b in enumerate(self.bcs) if b is bc]
        if not keep:
            raise SpectrumError(f"no {bc.value} modes in spectrum")
        return Spectrum(
            self.lambdas[keep], self.degeneracies[keep], [self.bcs[i] for i in keep],
            self.cross_section, self.n_requested, self.area,
            None if self.discretization_error is None else self.discretization_error[keep],
        )

    def boundary_conditions(self):
        seen = []
        for b in self.bcs:
            if b not in seen:
                seen.append(b)
        return seen


def smallest_mode(spec):
    """(lambda_1, g_1): the smallest eigenvalue and its total multiplicity."""
    lam1 = float(spec.lambdas[0])
    near = np.abs(spec.lambdas - lam1) <= DEGENERACY_MERGE_RTOL * lam1
    return lam1, int(spec.degeneracies[near].sum())


def _truncate(cands, n):
    """Keep ascending candidates until the degeneracy-weighted count reaches n.

    cands: list of (sort_key_tuple, lam, g, bc). Returns kept list or None if
    the candidate pool is too small.
    """
    cands.sort(key=lambda c: c[0])
    total = 0
    kept = []
    for c in cands:
        kept.append(c)
        total += c[2]
        if total >= n:
            return kept
    return None


def circle_spectrum(radius, n, bc):
    """Smallest n eigenvalues (counting degeneracy) of the unit-disk Laplacian,
    scaled by 1/radius.

    Dirichlet: lambda = j_{nu,k}/R with g = 1 (nu=0) or 2.  Neumann:
    lambda = j'_{nu,k}/R, same degeneracies, the trivial nu=0 zero excluded.
    """
    cs = Circle(radius)
    if n < 1:
        raise ValueError("n must be >= 1")
    bc = BoundaryCondition(bc)
    kind = FUNCTION_ZERO if bc is BoundaryCondition.DIRICHLET else DERIVATIVE_ZERO
    cut = 2.0 * np.sqrt(n) + 10.0  # Weyl estimate for the unit disk, padded
    while True:
        cands = []
        for nu in range(0, int(cut) + 1):
            zs = zeros_up_to(nu, kind, cut)
            g = 1 if nu == 0 else 2
            for z in zs:
                cands.append(((z, _BC_RANK[bc], nu), z, g, bc))
        kept = _truncate(cands, n)
        if kept is not None:
            break
        cut *= 1.3
    lam = np.array([c[1] for c in kept]) / radius
    degs = np.array([c[2] for c in kept])
    bcs = [c[3] for c in kept]
    return Spectrum(lam, degs, bcs, cs, n, cs.area)


def rectangle_spectrum(a, b, n, bc):
    """Smallest n eigenvalues (counting degeneracy) of the a-by-b rectangle.

    Dirichlet lambda^2 = (p pi/a)^2 + (q pi/b)^2 with p, q >= 1; Neumann the
    same with p, q >= 0 and (0, 0) excluded.  Coincident values within
    relative 1e-12 are merged into one mode with summed degeneracy.
    """
    cs = Rectangle(a, b)
    if n < 1:
        raise ValueError("n must be >= 1")
    bc = BoundaryCondition(bc)
    dirichlet = bc is BoundaryCondition.DIRICHLET
    cut = np.sqrt(4.0 * np.pi * n / cs.area) + 6.0 * np.pi / min(a, b)
    while True:
        lo = 1 if dirichlet else 0
        pmax = int(a * cut / np.pi) + 1
        qmax = int(b * cut / np.pi) + 1
        lam_list = []
        key_list = []
        for p in range(lo, pmax + 1):
            for q in range(lo, qmax + 1):
                if not dirichlet and p == 0 and q == 0:
                    continue
                l2 = (p * np.pi / a) ** 2 + (q * np.pi / b) ** 2
                if l2 <= cut * cut:
                    lam_list.append(np.sqrt(l2))
                    key_list.append((p, q))
        order = sorted(range(len(lam_list)), key=lambda i: (lam_list[i], key_list[i]))
        cands = []
        for i in order:
            z = lam_list[i]
            if cands and abs(z - cands[-1][1]) <= DEGENERACY_MERGE_RTOL * z:
                k, zz, g, _ = cands[-1]
                cands[-1] = (k, zz, g + 1, bc)
            else:
                cands.append(((z, _BC_RANK[bc], key_list[i]), z, 1, bc))
        kept = _truncate(cands, n)
        if kept is not None:
            break
        cut *= 1.3
    lam = np.array([c[1] for c in kept])
    degs = np.array([c[2] for c in kept])
    bcs = [c[3] for c in kept]
    return Spectrum(lam, degs, bcs, cs, n, cs.area)


def _check_connected(mask):
    n_cells = int(mask.sum())
    start = tuple(np.argwhere(mask)[0])
    seen = np.zeros_like(mask)
    seen[start] = True
    stack = [start]
    count = 1
    ni, nj = mask.shape
    while stack:
        i, j = stack.pop()
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            a, c = i + di, j + dj
            if 0 <= a < ni and 0 <= c < nj and mask[a, c] and not seen[a, c]:
                seen[a, c] = True
                count += 1
                stack.append((a, c))
    if count != n_cells:
        raise SpectrumError("raster mask is disconnected")


def _fd_operator(mask, h, dirichlet):
    # Boundaries sit on cell faces: Dirichlet mirrors the ghost value as
    # -u (u = 0 on the face, diag gains 1/h^2 per exterior neighbor),
    # Neumann as +u (no flux, neighbor term dropped).  Both are second
    # order on face-aligned boundaries.
    idx = -np.ones(mask.shape, dtype=np.int64)
    n = int(mask.sum())
    idx[mask] = np.arange(n)
    inv_h2 = 1.0 / (h * h)
    rows = []
    cols = []
    n_int = np.zeros(n)
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        src = mask & np.roll(mask, (-di, -dj), axis=(0, 1))
        # np.roll wraps; forbid wrap-around pairings at the array edge
        if di == 1:
            src[-1, :] = False
        elif di == -1:
            src[0, :] = False
        elif dj == 1:
            src[:, -1] = False
        else:
            src[:, 0] = False
        i_src = idx[src]
        i_dst = idx[np.roll(src, (di, dj), axis=(0, 1))]
        rows.append(i_src)
        cols.append(i_dst)
        np.add.at(n_int, i_src, 1.0)
    if dirichlet:
        diag = (8.0 - n_int) * inv_h2
    else:
        diag = n_int * inv_h2
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.full(rows.size, -inv_h2)
    a = csr_matrix((np.concatenate([vals, diag]),
                    (np.concatenate([rows, np.arange(n)]),
                     np.concatenate([cols, np.arange(n)]))), shape=(n, n))
    return a, n


def _fd_lowest(mask, h, n_modes, dirichlet):
    a, n = _fd_operator(mask, h, dirichlet)
    k = min(n_modes + (0 if dirichlet else 1) + 2, n - 1)
    v0 = np.ones(n) / np.sqrt(n)
    try:
        vals = eigsh(a, k=k, sigma=-1.0, which="LM", v0=v0,
                     return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise SpectrumError(f"raster eigensolve did not converge: {exc}") from exc
    vals = np.sort(vals)
    if not dirichlet:
        vals = vals[np.abs(vals) >= RASTER_ZERO_MODE_COEFF / h**2]
    vals = vals[vals > 0.0]
    if vals.size < n_modes:
        raise SpectrumError("eigensolve returned too few positive modes")
    return np.sqrt(vals[:n_modes])


def raster_spectrum(mask, h, n, bc):
    """Lowest n eigenvalues of the 5-point FD Laplacian on a masked domain.

    Dirichlet zeroes the exterior; Neumann uses mirror ghost nodes (the mask
    graph Laplacian), whose discrete constant mode is detected and removed.
    A discretization-error estimate per mode comes from one h -> h/2
    refinement (Richardson, second order).
    """
    cs = RasterMask(mask, h)
    mask = cs.mask
    if n < 1:
        raise ValueError("n must be >= 1")
    bc = BoundaryCondition(bc)
    _check_connected(mask)
    n_cells = int(mask.sum())
    if n > 0.1 * n_cells:
        raise ValueError(
            f"n = {n} too large for {n_cells} interior cells (limit: 10%)")
    dirichlet = bc is BoundaryCondition.DIRICHLET
    lam = _fd_lowest(mask, h, n, dirichlet)
    fine_mask = np.repeat(np.repeat(mask, 2, axis=0), 2, axis=1)
    lam_fine = _fd_lowest(fine_mask, 0.5 * h, n, dirichlet)
    err = (4.0 / 3.0) * np.abs(lam - lam_fine)
    return Spectrum(
        lam, np.ones(n, dtype=np.int64), [bc] * n, cs, n, cs.area,
        discretization_error=err,
        raster_detail={"h": h, "lam_coarse": lam, "lam_fine": lam_fine},
    )


def _single_bc_spectrum(cs, n, bc):
    if isinstance(cs, Circle):
        return circle_spectrum(cs.radius, n, bc)
    if isinstance(cs, Rectangle):
        return rectangle_spectrum(cs.a, cs.b, n, bc)
    if isinstance(cs, RasterMask):
        return raster_spectrum(cs.mask, cs.h, n, bc)
    raise TypeError(f"unknown cross section {cs!r}")


def combined_spectrum(cs, n_per_set):
    """Merged Dirichlet + Neumann spectrum (the force formulas' index),
    n_per_set eigenvalues (counting degeneracy) from each set."""
    spec_d = _single_bc_spectrum(cs, n_per_set, BoundaryCondition.DIRICHLET)
    spec_n = _single_bc_spectrum(cs, n_per_set, BoundaryCondition.NEUMANN)
    rows = []
    for s in (spec_d, spec_n):
        err = s.discretization_error
        for i in range(s.lambdas.size):
            rows.append((
                (s.lambdas[i], _BC_RANK[s.bcs[i]], i),
                s.lambdas[i], s.degeneracies[i], s.bcs[i],
                None if err is None else err[i],
            ))
    rows.sort(key=lambda r: r[0])
    lam = np.array([r[1] for r in rows])
    degs = np.array([r[2] for r in rows])
    bcs = [r[3] for r in rows]
    errs = [r[4] for r in rows]
    disc = None
    if any(e is not None for e in errs):
        disc = np.array([np.nan if e is None else e for e in errs])
    return Spectrum(lam, degs, bcs, cs, n_per_set, _area_of(cs),
                    discretization_error=disc)


def _area_of(cs):
    return cs.area


def weyl_deviation(spec):
    """Worst relative deviation of the cumulative mode count from the Weyl
    bulk term A lambda^2/(4 pi), per BC set, over the upper half of the
    spectrum.  Requires at least 100 modes per set."""
    devs = []
    for bc in spec.boundary_conditions():
        sub = spec.subset(bc)
        total = sub.total_count
        if total < 100:
            raise ValueError(
                f"weyl_deviation needs >= 100 modes per set, got {total} for {bc.value}")
        cum = np.cumsum(sub.degeneracies)
        pred = spec.area * sub.lambdas**2 / (4.0 * np.pi)
        upper = cum >= total / 2.0
        devs.append(float(np.max(np.abs(cum[upper] - pred[upper]) / pred[upper])))
    return max(devs)


def export_table(spec):
    """Columnar plain-text export: lambda, lambda_sq, degeneracy, bc."""
    lines = ["# lambda lambda_sq degeneracy bc"]
    for m in spec.modes:
        lines.append(f"{m.lam!r} {m.lam_sq!r} {m.degeneracy} {m.bc.value}")
    return "\n".join(lines) + "\n"


def export_json_doc(spec):
    """Structured export with provenance (cross section, N, h if raster)."""
    doc = {
        "provenance": {
            "cross_section": spec.cross_section.describe(),
            "n_requested": spec.n_requested,
            "area": spec.area,
        },
        "modes": [
            {"lambda": m.lam, "lambda_sq": m.lam_sq,
             "degeneracy": m.degeneracy, "bc": m.bc.value}
            for m in spec.modes
        ],
    }
    if spec.discretization_error is not None:
        doc["discretization_error"] = [float(e) for e in spec.discretization_error]
    return doc
