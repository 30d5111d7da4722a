"""Dormand-Prince 5(4) with PI step control, dense output and guard monitoring."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Butcher tableau
C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
E = B5 - B4

# continuous extension: y(t + s h) = y + h K^T P [s, s^2, s^3, s^4]
P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
PI_BETA = 0.04
PI_ALPHA = 0.2 - 0.75 * PI_BETA
GUARD_TOL = 1e-10
MAX_STEPS = 1_000_000

REACHED = "reached t1"
GUARD_EXIT = "guard exit"
UNDERFLOW = "step underflow"


class NonFiniteState(ArithmeticError):
    pass


@dataclass
class StepSegment:
    t: float
    h: float
    y: np.ndarray
    K: np.ndarray

    def __call__(self, t):
        s = (t - self.t) / self.h
        powers = np.array([s, s * s, s ** 3, s ** 4])
        return self.y + self.h * (self.K.T @ (P @ powers))


@dataclass
class Guard:
    """``g(t, y)`` must stay positive (``strict``) or nonzero."""

    name: str
    fn: object
    strict: bool = False
    sign: float = 1.0

    def ok(self, t, y) -> bool:
        try:
            v = self.fn(t, y)
        except (ArithmeticError, ValueError):
            return False
        return math.isfinite(v) and (v > 0 if self.strict else v * self.sign > 0)

    def anchored(self, t, y) -> "Guard":
        """A nonzero guard stays on the side of zero it starts on."""
        if self.strict:
            return self
        v = self.fn(t, y)
        return Guard(self.name, self.fn, False, 1.0 if v > 0 else -1.0 if v < 0 else 0.0)


@dataclass
class IntegratorStats:
    steps: int = 0
    rejections: int = 0
    rhs_evaluations: int = 0
    max_error_estimate: float = 0.0

    def to_json(self):
        return {"steps": self.steps, "rejections": self.rejections, "rhs_evaluations": self.rhs_evaluations,
                "max_error_estimate": self.max_error_estimate}


@dataclass
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    stats: IntegratorStats
    termination: str
    detail: str = ""
    segments: list = field(default_factory=list, repr=False)

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    @property
    def final_state(self):
        return float(self.x[-1]), float(self.y[-1])

    @property
    def completed(self) -> bool:
        return self.termination == REACHED

    def state_at(self, t: float):
        """Dense-output state at ``t`` inside the integrated range."""
        if not self.segments:
            raise ValueError("trajectory carries no dense output")
        for seg in self.segments:
            lo, hi = sorted((seg.t, seg.t + seg.h))
            if lo - 1e-14 <= t <= hi + 1e-14:
                return seg(t)
        raise ValueError(f"t = {t} lies outside the integrated range")

    def __len__(self):
        return len(self.t)

    def to_json(self):
        return {"t": self.t.tolist(), "x": self.x.tolist(), "y": self.y.tolist(), "stats": self.stats.to_json(),
                "termination": self.termination, "detail": self.detail}


def _initial_step(rhs, t0, y0, f0, direction, rtol, atol, max_step):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, max_step)
    try:
        f1 = rhs(t0 + direction * h0, y0 + direction * h0 * f0)
        d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    except (ArithmeticError, ValueError):
        return h0 / 10
    if not np.isfinite(d2):
        return h0 / 10
    h1 = max(1e-6, h0 * 1e-3) if max(d1, d2) <= 1e-15 else (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, max_step)


def _stage(rhs, t, y, h, f0):
    K = np.empty((7, y.size))
    K[0] = f0
    for i in range(1, 7):
        K[i] = rhs(t + C[i] * h, y + h * (np.dot(A[i], K[:i])))
    return K


def _locate(seg, guard, t_ok, t_bad):
    """Bisect the first exit of ``guard`` between ``t_ok`` and ``t_bad``."""
    while abs(t_bad - t_ok) > GUARD_TOL:
        mid = 0.5 * (t_ok + t_bad)
        if guard.ok(mid, seg(mid)):
            t_ok = mid
        else:
            t_bad = mid
    return t_ok, t_bad


def integrate_rhs(rhs, y0, t0: float, t1: float, rtol=1e-9, atol=1e-12, max_step=None, guards=(), samples=None,
                  fixed_step: float | None = None) -> Trajectory:
    """Integrate ``dy/dt = rhs(t, y)`` from ``t0`` to ``t1`` (either direction).

    ``samples`` lists output times; without it every accepted step is
    recorded.  With ``fixed_step`` the error control is switched off and
    the fifth-order solution advances by that step.  A guard leaving its
    admissible set ends the run at the last admissible time, located to
    ``GUARD_TOL`` by bisection on the dense output.
    """
    if t1 == t0:
        raise ValueError("t1 must differ from t0")
    direction = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)
    max_step = span / 10 if max_step is None else min(abs(max_step), span)
    y = np.array(y0, dtype=float)
    guards = [g.anchored(t0, y) for g in guards]
    for g in guards:
        if not g.ok(t0, y):
            raise ValueError(f"initial state {tuple(y)} violates guard {g.name}")
    stats = IntegratorStats()

    def f(t, z):
        stats.rhs_evaluations += 1
        out = np.asarray(rhs(t, z), dtype=float)
        if not np.all(np.isfinite(out)):
            raise NonFiniteState(f"non-finite vector field at t={t}, state={tuple(z)}")
        return out

    sample_times = None
    if samples is not None:
        sample_times = np.asarray(sorted(samples, key=lambda s: direction * s), dtype=float)
        sample_times = sample_times[direction * (sample_times - t0) >= 0]
        sample_times = sample_times[direction * (sample_times - t1) <= 0]
    ts, ys, segments = [t0], [y.copy()], []
    next_sample = 0
    if sample_times is not None:
        ts, ys = [], []
        while next_sample < len(sample_times) and sample_times[next_sample] == t0:
            ts.append(t0)
            ys.append(y.copy())
            next_sample += 1

    t = t0
    f0 = f(t, y)
    h = fixed_step if fixed_step is not None else _initial_step(f, t0, y, f0, direction, rtol, atol, max_step)
    prev_err = 1e-4
    termination, detail = REACHED, ""

    def emit_until(seg, t_hi):
        nonlocal next_sample
        if sample_times is None:
            return
        while next_sample < len(sample_times) and direction * (sample_times[next_sample] - t_hi) <= 1e-15 * max(1, abs(t_hi)):
            ts.append(float(sample_times[next_sample]))
            ys.append(seg(sample_times[next_sample]))
            next_sample += 1

    while direction * (t1 - t) > 0:
        if stats.steps + stats.rejections > MAX_STEPS:
            termination, detail = UNDERFLOW, "step budget exhausted"
            break
        h = min(h, max_step, abs(t1 - t))
        if abs(t1 - t - direction * h) < 1e-12 * max(1.0, abs(t1)):
            h = abs(t1 - t)
        if h < 10 * np.spacing(max(abs(t), 1.0)):
            termination, detail = UNDERFLOW, f"step size fell below resolution at t={t}"
            break
        hs = direction * h
        try:
            K = _stage(f, t, y, hs, f0)
            y_new = y + hs * (B5 @ K)
            if not np.all(np.isfinite(y_new)):
                raise NonFiniteState("non-finite state")
            f_new = f(t + hs, y_new)
        except (NonFiniteState, ZeroDivisionError, OverflowError, ValueError):
            if fixed_step is not None:
                termination, detail = UNDERFLOW, f"non-finite evaluation at t={t} with fixed step"
                break
            stats.rejections += 1
            h *= MIN_FACTOR
            continue
        K[6] = f_new
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean((hs * (E @ K) / scale) ** 2)))
        if fixed_step is None and err > 1.0:
            stats.rejections += 1
            h *= max(MIN_FACTOR, SAFETY * err ** (-1 / 5))
            continue
        seg = StepSegment(t, hs, y.copy(), K.copy())
        t_new = t + hs if abs(t1 - (t + hs)) > 1e-15 * max(1.0, abs(t1)) else t1
        bad = [g for g in guards if not g.ok(t_new, y_new)]
        if not bad:
            # a guard can dip and recover inside one step; probe the midpoint too
            tm = t + 0.5 * hs
            bad = [g for g in guards if not g.ok(tm, seg(tm))]
        if bad:
            t_exit, name = None, ""
            for g in bad:
                t_ok, _ = _locate(seg, g, t, t_new)
                if t_exit is None or direction * (t_ok - t_exit) < 0:
                    t_exit, name = t_ok, g.name
            stats.steps += 1
            segments.append(StepSegment(t, hs, y.copy(), K.copy()))
            emit_until(seg, t_exit)
            if sample_times is None and t_exit != t:
                ts.append(t_exit)
                ys.append(seg(t_exit))
            termination, detail = GUARD_EXIT, f"guard {name} crossed at t={t_exit:.12g}"
            t = t_exit
            break
        stats.steps += 1
        stats.max_error_estimate = max(stats.max_error_estimate, err)
        segments.append(seg)
        emit_until(seg, t_new)
        t, y, f0 = t_new, y_new, f_new
        if sample_times is None:
            ts.append(t)
            ys.append(y.copy())
        if fixed_step is None:
            e = max(err, 1e-10)
            factor = SAFETY * e ** (-PI_ALPHA) * prev_err ** PI_BETA
            h *= min(MAX_FACTOR, max(MIN_FACTOR, factor))
            prev_err = e
    if termination != REACHED and not ts:
        ts, ys = [t0], [np.array(y0, dtype=float)]
    arr = np.array(ys) if ys else np.zeros((0, 2))
    return Trajectory(np.array(ts), arr[:, 0] if len(arr) else np.array([]), arr[:, 1] if len(arr) else np.array([]),
                      stats, termination, detail, segments)
