"""Conservation monitoring, trajectory transport and minimal Lie algebras."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..expr import DEFAULT_SEED, compare, compile_scalar
from ..liealg import CapExceeded, lie_closure
from ..vfield import PlanarMap, verify_related
from .integrator import Trajectory
from .systems import CONSTANTS, MissingStructureError, TDependentSystem, field_at, integrate

CONSERVATION_STEP = None


class RelatednessError(ValueError):
    def __init__(self, message, reports=None):
        super().__init__(message)
        self.reports = reports or []


class IntegrationAbort(RuntimeError):
    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


@dataclass
class ConservationReport:
    max_abs_residual: float
    t: np.ndarray
    h: np.ndarray
    residual: np.ndarray
    drift: float | None = None

    def to_json(self):
        return {"max_abs_residual": self.max_abs_residual, "drift": self.drift,
                "samples": len(self.t)}


def conservation_residual(traj: Trajectory, S: TDependentSystem, step: float | None = CONSERVATION_STEP,
                          rule: str = "simpson") -> ConservationReport:
    """``|dh/dt - d_t h|`` along a trajectory, with drift of ``h`` for constant coefficients.

    Along solutions ``dh/dt`` equals ``d_t h``, because ``{h_t, h_t}`` vanishes.
    The difference quotient of consecutive samples is compared with the
    mean of ``d_t h`` over the interval: Simpson's rule by default, or the
    midpoint value with ``rule="midpoint"``.  Interior states come from the
    dense output.  ``step`` resamples the dense output first; ``None`` keeps
    the samples.
    """
    if rule not in ("simpson", "midpoint"):
        raise ValueError(f"unknown rule {rule!r}")
    if S.structure is None:
        raise MissingStructureError(f"{S.name} carries no Lie-Hamiltonian structure")
    h = compile_scalar([S.hamiltonian()], CONSTANTS)
    dth = compile_scalar([S.time_derivative_of_hamiltonian()], CONSTANTS)
    t = np.asarray(traj.t, dtype=float)
    if step is not None and traj.segments and len(t) > 1:
        n = max(2, int(np.ceil(abs(t[-1] - t[0]) / step)) + 1)
        t = np.linspace(t[0], t[-1], n)
        states = np.array([traj.state_at(tk) for tk in t])
    else:
        states = np.column_stack([traj.x, traj.y])
    H = np.array([h(tk, zk[0], zk[1])[0] for tk, zk in zip(t, states)])
    D = np.array([dth(tk, zk[0], zk[1])[0] for tk, zk in zip(t, states)])
    res = np.zeros(max(len(t) - 1, 0))
    for k in range(len(t) - 1):
        tm = 0.5 * (t[k] + t[k + 1])
        zm = traj.state_at(tm) if traj.segments else 0.5 * (states[k] + states[k + 1])
        mean = dth(tm, zm[0], zm[1])[0]
        if rule == "simpson":
            mean = (D[k] + 4 * mean + D[k + 1]) / 6
        res[k] = abs((H[k + 1] - H[k]) / (t[k + 1] - t[k]) - mean)
    drift = float(np.max(np.abs(H - H[0]))) if S.is_autonomous() else None
    return ConservationReport(float(res.max()) if res.size else 0.0, t, H, res, drift)


@dataclass
class TransportReport:
    max_deviation: float
    source: Trajectory
    target: Trajectory
    mapped: np.ndarray
    relatedness: list = field(default_factory=list)

    def to_json(self):
        return {"max_deviation": self.max_deviation, "source": self.source.to_json(),
                "target": self.target.to_json(), "relatedness": [r.to_json() for r in self.relatedness]}


def transport_compare(source: TDependentSystem, phi: PlanarMap, target: TDependentSystem, x0, t0: float, t1: float,
                      rtol=1e-9, atol=1e-12, samples=201, seed=DEFAULT_SEED) -> TransportReport:
    """Integrate both systems and compare ``phi`` of the source solution with the target solution."""
    if source.basis.dim != target.basis.dim:
        raise RelatednessError("bases differ in size")
    reports = [verify_related(phi, X, Y, seed=seed) for X, Y in zip(source.fields, target.fields)]
    if not all(r.is_equal for r in reports):
        bad = [i + 1 for i, r in enumerate(reports) if not r.is_equal]
        raise RelatednessError(f"map does not relate basis field(s) {bad}", reports)
    for i, (a, b) in enumerate(zip(source.coefficients, target.coefficients)):
        if not compare(a, b, bindings=CONSTANTS, seed=seed).verdict.is_equal:
            raise RelatednessError(f"coefficient {i + 1} differs between source and target", reports)
    times = np.linspace(t0, t1, samples)
    src = integrate(source, x0, t0, t1, rtol=rtol, atol=atol, samples=times)
    if not src.completed:
        raise IntegrationAbort(f"source integration stopped: {src.termination} ({src.detail})", src)
    start = phi.at(float(x0[0]), float(x0[1]))
    tgt = integrate(target, start, t0, t1, rtol=rtol, atol=atol, samples=times)
    if not tgt.completed:
        raise IntegrationAbort(f"target integration stopped: {tgt.termination} ({tgt.detail})", tgt)
    mapped = np.array([phi.at(a, b) for a, b in zip(src.x, src.y)])
    dev = np.hypot(mapped[:, 0] - tgt.x, mapped[:, 1] - tgt.y)
    return TransportReport(float(dev.max()), src, tgt, mapped, reports)


def minimal_algebra(S: TDependentSystem, t_samples, cap=10, seed=DEFAULT_SEED):
    """Lie closure of ``X_t`` over the sampled times; CapExceeded past ``cap``.

    The closure equals the minimal algebra once the samples separate the
    coefficient functions, which needs at least one more sample than the
    basis has elements.
    """
    t_samples = list(t_samples)
    if not t_samples:
        raise ValueError("need at least one sample time")
    fields = [X for X in (field_at(S, t) for t in t_samples) if not X.is_zero()]
    if not fields:
        raise ValueError("every sampled field vanishes")
    return lie_closure(fields, cap=cap, seed=seed, label=S.name)


__all__ = ["ConservationReport", "TransportReport", "RelatednessError", "IntegrationAbort", "CapExceeded",
           "conservation_residual", "transport_compare", "minimal_algebra"]
