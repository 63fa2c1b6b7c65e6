"""Contours in the spectral plane, analytic initial data by the reduced Kato
recursion, winding numbers and Cauchy-integral cross-checks.

Only the upper half of a contour is ever evaluated; the lower half follows from
``E(conj(lam)) = conj(E(lam))``.
"""
from dataclasses import dataclass, field
import csv
import json
import math
import warnings

import numpy as np

from .errors import ContinuationError, DomainError, UnderResolvedWarning, ZeroOnContourError
from .evans import asymptotic_matrix, compound_lift, evans_batch, normalize_phase

__all__ = [
    "ContourSpec",
    "Contour",
    "KatoFamily",
    "WindingResult",
    "make_contour",
    "lifted_limit_parts",
    "kato_init",
    "kato_extend",
    "evaluate_contour",
    "winding_number",
    "cauchy_check",
    "small_contour_scan",
    "write_contour_csv",
    "write_winding_json",
]

KINDS = ("semicircle", "semicircle-open", "annulus")


@dataclass(frozen=True)
class ContourSpec:
    """``kind`` is one of ``semicircle`` (with segment on the imaginary axis),
    ``semicircle-open`` (no segment) or ``annulus`` (semi-annulus, two radii)."""

    kind: str = "semicircle"
    radii: tuple = (10.0,)
    n_points: int = 4000
    density: str = "uniform"
    cutout: float = 1e-6
    center: complex = 0.0
    origin_ratio: float = 0.02

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown contour kind {self.kind!r}")
        if self.density not in ("uniform", "origin"):
            raise DomainError(f"unknown density {self.density!r}")
        if any(r <= 0 for r in self.radii):
            raise DomainError("radii must be positive")
        if self.kind == "annulus":
            if len(self.radii) != 2 or not self.radii[0] < self.radii[1]:
                raise DomainError("annulus needs (inner, outer) radii with inner < outer")
        if self.n_points < 3:
            raise DomainError("need at least 3 points")


@dataclass(frozen=True, eq=False)
class Contour:
    """``half`` runs counterclockwise from a real-axis point through the upper
    half-plane; ``full`` is the whole contour (lower half mirrored), starting in
    the lower half and ending at ``half[-1]``."""

    spec: ContourSpec
    half: np.ndarray
    closed: bool

    @property
    def full(self):
        return np.concatenate([np.conj(self.half[::-1])[:-1], self.half])

    def assemble(self, values_half):
        """Full-contour values from upper-half values by conjugate symmetry."""
        v = np.asarray(values_half)
        return np.concatenate([np.conj(v[::-1])[:-1], v])

    @property
    def kato_order(self):
        """Node order for the Kato sweep: start at the real-axis endpoint of
        smallest modulus."""
        idx = np.arange(self.half.size)
        end = self.half[-1]
        if abs(end.imag) <= 1e-300 and abs(end) < abs(self.half[0]):
            return idx[::-1]
        return idx


def _arc(radius, t0, t1):
    return lambda t: radius * np.exp(1j * (t0 + (t1 - t0) * t))


def _segment(a, b):
    return lambda t: a + (b - a) * t


def _pieces(spec):
    """Upper-half path as ``(parametrization on [0, 1], length, moduli)`` pieces;
    ``moduli`` is ``(start, end)`` of ``|lam|`` along a radial segment, else None."""
    eps = spec.cutout
    if spec.kind == "semicircle":
        (r,) = spec.radii
        return [(_arc(r, 0.0, math.pi / 2), r * math.pi / 2, None),
                (_segment(1j * r, 1j * eps), r - eps, (r, eps))]
    if spec.kind == "semicircle-open":
        (r,) = spec.radii
        return [(_arc(r, 0.0, math.pi / 2), r * math.pi / 2, None)]
    r_in, r_out = spec.radii
    return [(_arc(r_out, 0.0, math.pi / 2), r_out * math.pi / 2, None),
            (_segment(1j * r_out, 1j * r_in), r_out - r_in, (r_out, r_in)),
            (_arc(r_in, math.pi / 2, 0.0), r_in * math.pi / 2, None)]


def _fine_parameters(moduli, fine):
    t = np.linspace(0.0, 1.0, fine + 1)
    if moduli is not None:
        a, b = moduli
        geo = np.geomspace(min(a, b), max(a, b), fine + 1)
        t = np.union1d(t, np.clip((a - geo) / (a - b), 0.0, 1.0))
    return t


def make_contour(spec: ContourSpec) -> Contour:
    """Sample the contour with ``spec.n_points`` nodes in total.

    ``uniform`` spaces nodes evenly in arclength; ``origin`` additionally caps the
    local spacing at ``origin_ratio * |lam|`` (geometric refinement toward the
    smallest moduli).
    """
    n_half = (spec.n_points + 1) // 2 + 1
    pieces = _pieces(spec)
    fine = 4000
    ts, zs, arcs = [], [], []
    offset = 0.0
    for i, (fn, length, moduli) in enumerate(pieces):
        t = _fine_parameters(moduli, fine)
        if i:
            t = t[1:]
        ts.append(i + t)
        zs.append(fn(t))
        arcs.append(offset + length * t)
        offset += length
    param = np.concatenate(ts)
    z = np.concatenate(zs)
    arclen = np.concatenate(arcs)
    total = arclen[-1]

    if spec.density == "uniform":
        targets = np.linspace(0.0, total, n_half)
    else:
        h_u = total / (n_half - 1)
        for _ in range(100):
            dens = np.maximum(1.0 / h_u, 1.0 / (spec.origin_ratio * np.abs(z)))
            cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(arclen))])
            floor = cum[-1] - total / h_u
            if floor >= n_half - 1:
                raise DomainError(
                    f"{spec.n_points} points cannot honour the origin refinement; increase n_points"
                )
            if abs(cum[-1] - (n_half - 1)) < 0.5:
                break
            # counts from the geometric part are fixed; rescale the uniform part
            h_u = total / max(n_half - 1 - floor, 1e-12) if floor > 0 else h_u * cum[-1] / (n_half - 1)
        targets = np.interp(np.linspace(0.0, cum[-1], n_half), cum, arclen)
    p = np.interp(targets, arclen, param)
    half = np.empty(n_half, dtype=complex)
    for i, (fn, _, _) in enumerate(pieces):
        mask = (p >= i) & (p <= i + 1)
        half[mask] = fn(np.clip(p[mask] - i, 0.0, 1.0))
    half[0] = pieces[0][0](0.0)
    half[-1] = pieces[-1][0](1.0)
    half = half + spec.center
    closed = spec.kind != "semicircle-open"
    return Contour(spec=spec, half=half, closed=closed)


def lifted_limit_parts(state, params):
    """``(B0, B1)`` with lifted limit matrix ``B(lam) = B0 + lam * B1``."""
    M0 = asymptotic_matrix(state, 0.0, params)
    M1 = asymptotic_matrix(state, 1.0, params) - M0
    return compound_lift(M0), compound_lift(M1)


@dataclass(frozen=True, eq=False)
class KatoFamily:
    """Analytically varying compound eigenvectors along a path of nodes.

    ``r[0]`` has unit norm; later vectors carry the normalization produced by
    the recursion ``r[k+1] = P[k+1] r[k]``.
    """

    side: str
    lam: np.ndarray
    r: np.ndarray
    mu: np.ndarray
    right_vectors: np.ndarray = field(repr=False)
    left_vectors: np.ndarray = field(repr=False)

    def projector(self, k):
        return np.outer(self.right_vectors[k], self.left_vectors[k])

    @property
    def max_step(self):
        if len(self.r) < 2:
            return 0.0
        return float(np.max(np.linalg.norm(np.diff(self.r, axis=0), axis=1)))


def _side_state(shock, side):
    if side == "-":
        return shock.left
    if side == "+":
        return shock.right
    raise DomainError(f"side must be '+' or '-', got {side!r}")


def kato_init(lams, side, shock, params, r0=None, mu0=None, dominance=0.9,
              continuity=0.5, scheme="projection"):
    """Reduced Kato recursion ``r[k+1] = P[k+1] r[k]`` along ``lams``.

    ``P`` is the spectral projection of the lifted limit matrix at the ``side``
    end state onto the eigenvalue ``mu`` (largest real part at ``-``, smallest
    at ``+`` on the first node unless ``r0``/``mu0`` are given). Along the path
    the eigenvalue is tracked by eigenvector overlap, which stays reliable where
    eigenvalues nearly collide.

    ``scheme="symmetric"`` replaces the one-sided factor ``w[k+1] . v[k]`` of the
    projection step by the geometric mean with the reversed step. Both
    discretize the same Kato ODE; the symmetric form is second order in the
    node spacing, which matters for Cauchy-integral checks on coarse contours.
    """
    if scheme not in ("projection", "symmetric"):
        raise DomainError(f"unknown Kato scheme {scheme!r}")
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    state = _side_state(shock, side)
    B0, B1 = lifted_limit_parts(state, params)
    B = B0[None] + lams[:, None, None] * B1[None]
    w, V = np.linalg.eig(B)
    W = np.linalg.inv(V)  # rows: left eigenvectors with W[j] @ V[:, j] == 1
    n = lams.size
    sel = np.empty(n, dtype=int)
    if r0 is None:
        key = w[0].real if side == "-" else -w[0].real
        sel[0] = int(np.argmax(key))
        r_first = normalize_phase(V[0][:, sel[0]])
    else:
        r_first = np.asarray(r0, dtype=complex)
        if mu0 is not None:
            sel[0] = int(np.argmin(np.abs(w[0] - mu0)))
        else:
            sel[0] = int(np.argmax(np.abs(W[0] @ r_first) * np.linalg.norm(V[0], axis=0)))
    coef = np.empty(n, dtype=complex)
    coef[0] = W[0][sel[0]] @ r_first
    col_norm = np.linalg.norm(V, axis=1)
    for k in range(1, n):
        prev = V[k - 1][:, sel[k - 1]]
        overlap = np.abs(W[k] @ prev) * col_norm[k]
        order = np.argsort(overlap)[::-1]
        if overlap[order[1]] > dominance * overlap[order[0]]:
            raise ContinuationError(
                f"eigenvector tracking ambiguous at node {k} (lambda={lams[k]})", index=k
            )
        sel[k] = order[0]
        step = W[k][sel[k]] @ prev
        if scheme == "symmetric":
            # a / sqrt(a b): the product a b is free of the eigenvector phases
            step = step / np.sqrt(step * (W[k - 1][sel[k - 1]] @ V[k][:, sel[k]]))
        coef[k] = coef[k - 1] * step
    idx = np.arange(n)
    right = V[idx, :, sel]
    left = W[idx, sel, :]
    r = right * coef[:, None]
    r[0] = r_first
    family = KatoFamily(side=side, lam=lams, r=r, mu=w[idx, sel],
                        right_vectors=right, left_vectors=left)
    if n > 1:
        steps = np.linalg.norm(np.diff(r, axis=0), axis=1)
        bad = np.nonzero(steps >= continuity)[0]
        if bad.size:
            raise ContinuationError(
                f"Kato family jumps by {steps[bad[0]]:.3g} at node {bad[0] + 1}; refine the contour",
                index=int(bad[0] + 1),
            )
    return family


def kato_extend(family: KatoFamily, target, shock, params, start=0, n_steps=None,
                scheme="projection"):
    """Continue ``family`` from node ``start`` along a straight path to ``target``;
    returns ``(r, mu)`` at ``target``. By default the path is sampled no coarser
    than the median spacing of the family's nodes."""
    length = abs(complex(target) - family.lam[start])
    if n_steps is None:
        h = np.median(np.abs(np.diff(family.lam))) if family.lam.size > 1 else length
        n_steps = max(1, int(np.ceil(length / h)))
    path = np.linspace(family.lam[start], complex(target), n_steps + 1)
    ext = kato_init(path, family.side, shock, params, r0=family.r[start], mu0=family.mu[start],
                    scheme=scheme)
    return ext.r[-1], ext.mu[-1]


@dataclass(frozen=True, eq=False)
class ContourEvaluation:
    contour: Contour
    lam: np.ndarray
    E: np.ndarray
    kato_minus: KatoFamily
    kato_plus: KatoFamily
    E_half: np.ndarray


def evaluate_contour(contour: Contour, wave, shock, params, scheme="projection", **integrator):
    """Kato sweep over the upper half, batched Evans evaluation, and
    reconstruction of the full contour by conjugate symmetry."""
    order = contour.kato_order
    nodes = contour.half[order]
    km = kato_init(nodes, "-", shock, params, scheme=scheme)
    kp = kato_init(nodes, "+", shock, params, scheme=scheme)
    E_sorted, _, _ = evans_batch(nodes, wave, params, km.r, kp.r, km.mu, kp.mu, **integrator)
    E_half = np.empty_like(E_sorted)
    E_half[order] = E_sorted
    return ContourEvaluation(
        contour=contour, lam=contour.full, E=contour.assemble(E_half),
        kato_minus=km, kato_plus=kp, E_half=E_half,
    )


@dataclass(frozen=True)
class WindingResult:
    winding: int
    max_phase_step: float
    resolved: bool
    raw: float


def _as_values(samples):
    if len(samples) and hasattr(samples[0], "E"):
        return np.array([s.E for s in samples], dtype=complex)
    return np.asarray(samples, dtype=complex)


def winding_number(samples, closed=True):
    """Winding number of the sampled closed curve around the origin.

    Sums principal arguments of consecutive ratios (including the closing step
    when ``closed``). Steps above pi/2 mark the result as under-resolved and
    emit :class:`UnderResolvedWarning`.
    """
    E = _as_values(samples)
    if np.any(E == 0):
        raise ZeroOnContourError(f"E vanishes at node {int(np.nonzero(E == 0)[0][0])}")
    seq = np.append(E, E[0]) if closed else E
    steps = np.angle(seq[1:] / seq[:-1])
    raw = float(np.sum(steps) / (2 * math.pi))
    max_step = float(np.max(np.abs(steps)))
    resolved = max_step <= math.pi / 2
    if not resolved:
        warnings.warn(
            f"phase step {max_step:.3f} exceeds pi/2; refine the contour", UnderResolvedWarning
        )
    return WindingResult(winding=int(round(raw)), max_phase_step=max_step,
                         resolved=resolved, raw=raw)


def _winding_about(points, a):
    z = np.append(points, points[0]) - a
    return float(np.sum(np.angle(z[1:] / z[:-1])) / (2 * math.pi))


def cauchy_integral(lams, E, a, rule="trapezoid"):
    """``(1/2 pi i) * closed integral of E(z)/(z - a) dz`` over the closed
    polyline through ``lams``.

    ``trapezoid`` applies the trapezoid rule to ``E(z)/(z - a)`` per segment.
    ``linear`` interpolates ``E`` linearly per segment and integrates the kernel
    exactly, which reproduces constants to roundoff.
    """
    z = np.append(lams, lams[0])
    Ec = np.append(E, E[0])
    dz = np.diff(z)
    if rule == "trapezoid":
        f = Ec / (z - a)
        total = np.sum(0.5 * (f[1:] + f[:-1]) * dz)
    elif rule == "linear":
        slope = np.diff(Ec) / dz
        at_a = Ec[:-1] + slope * (a - z[:-1])
        logs = np.log((z[1:] - a) / (z[:-1] - a))
        total = np.sum(at_a * logs + slope * dz)
    else:
        raise DomainError(f"unknown quadrature rule {rule!r}")
    return complex(total / (2j * math.pi))


def cauchy_check(lams, E, a, E_direct, rule="trapezoid"):
    """``(E_interp, E_direct, rel_error)`` for an interior point ``a``."""
    lams = np.asarray(lams, dtype=complex)
    E = _as_values(E)
    dist = np.min(np.abs(lams - a))
    if dist == 0 or abs(_winding_about(lams, a)) < 0.5:
        raise DomainError(f"a={a} is not strictly inside the contour")
    E_interp = cauchy_integral(lams, E, a, rule)
    E_direct = complex(E_direct.E if hasattr(E_direct, "E") else E_direct)
    return E_interp, E_direct, abs(E_interp - E_direct) / abs(E_direct)


def small_contour_scan(wave, shock, params, radius=1e-6, n_points=201, **integrator):
    """Evans function on the open semicircle of the given radius around 0."""
    contour = make_contour(ContourSpec(kind="semicircle-open", radii=(radius,),
                                       n_points=n_points))
    ev = evaluate_contour(contour, wave, shock, params, **integrator)
    E = ev.E
    mean = E.mean()
    return {
        "radius": radius,
        "mean": complex(mean),
        "max_rel_deviation": float(np.max(np.abs(E - mean)) / abs(mean)),
        "min_abs": float(np.min(np.abs(E))),
        "evaluation": ev,
    }


def write_contour_csv(lams, E, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re_lambda", "im_lambda", "re_E", "im_E"])
        for lam, e in zip(lams, E):
            writer.writerow([repr(float(v)) for v in (lam.real, lam.imag, e.real, e.imag)])


def write_winding_json(result: WindingResult, n_points, contour_name, path):
    with open(path, "w") as fh:
        json.dump(
            {
                "winding": result.winding,
                "max_phase_step": result.max_phase_step,
                "n_points": int(n_points),
                "contour": contour_name,
            },
            fh,
            indent=2,
        )
