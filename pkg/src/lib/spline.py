# Copyright (c) 2024 The entropicemd developers

"""This module includes splines utilites.

`NaturalCubicSpline` interpolates knots with a C2 piecewise cubic whose
second derivative vanishes at both end knots; `AugmentKnots` extends a knot
set beyond the ends of a sampled signal before fitting (mirror or clamp), to
tame the end swings of envelopes.
"""


import enum

import numpy as np
from scipy.linalg import solve_banded

from .._signalcore import torch, torch_device, grab
from .._generic import InsufficientExtremaError, StructuralError


class BoundaryPolicy(str, enum.Enum):
    """How knots are extended past the ends of a series."""

    MIRROR = 'mirror'
    CLAMP = 'clamp'
    NONE = 'none'


class NaturalCubicSpline:
    """Interpolate data with a natural cubic spline.

    Parameters
    ----------
    knots_x : array_like
        Strictly increasing values of the independent variable.
    knots_y : array_like
        Values of the dependent variable.

    The number of knots must be at least equal 2.
    If the number of knots is 2, the spline will be basically a line.
    Outside `[knots_x[0], knots_x[-1]]` the spline is continued linearly with
    the end slopes, which is consistent with the natural end condition.
    """

    def __init__(self, knots_x, knots_y):
        knots_x = np.asarray(knots_x, dtype=float)
        knots_y = np.asarray(knots_y, dtype=float)

        if knots_x.shape != knots_y.shape or knots_x.ndim != 1:
            raise StructuralError("x and y must be 1d and have the same shape.")
        if knots_x.shape[0] < 2:
            raise InsufficientExtremaError(
                    f"a spline needs at least 2 knots, got {knots_x.shape[0]}"
                    )
        if np.any(np.diff(knots_x) <= 0):
            raise StructuralError("knots_x must be strictly increasing.")

        self.knots_x = torch.as_tensor(knots_x, device=torch_device)
        self.knots_y = torch.as_tensor(knots_y, device=torch_device)
        self.knots_m = torch.as_tensor(
                self.second_derivatives(knots_x, knots_y), device=torch_device
                )
        self.knots_len = knots_x.shape[0]
        self.segm_len = self.knots_len - 1

    def __call__(self, x):
        return self.forward(x)

    def forward(self, x):
        """Evaluate the spline at `x`; returns an ndarray of the same shape."""
        x = torch.as_tensor(np.array(x, dtype=float), device=torch_device)
        segments_ind = torch.searchsorted(self.knots_x, x)
        func = self._calc_segment_func(segments_ind)
        return grab(func(x))

    @staticmethod
    def second_derivatives(knots_x, knots_y):
        """Solve the tridiagonal system for the second derivatives at the
        knots, with zeros at both ends (natural end condition).
        """
        n = knots_x.shape[0]
        m = np.zeros(n)
        if n < 3:
            return m
        h = np.diff(knots_x)
        slope = np.diff(knots_y) / h
        # rows 1..n-2:  h[i-1] m[i-1] + 2 (h[i-1] + h[i]) m[i] + h[i] m[i+1]
        ab = np.zeros((3, n - 2))
        ab[0, 1:] = h[1:-1]
        ab[1] = 2 * (h[:-1] + h[1:])
        ab[2, :-1] = h[1:-1]
        rhs = 6 * np.diff(slope)
        m[1:-1] = solve_banded((1, 1), ab, rhs)
        return m

    def _calc_segment_func(self, segm_ind):
        """Elements of segm_ind must be in range(self.segm_len + 2)."""

        inside = torch.clamp(segm_ind, min=1, max=self.segm_len) - 1
        gather = lambda z, i: torch.gather(z, 0, inside + i)

        x0 = gather(self.knots_x, 0)
        x1 = gather(self.knots_x, 1)
        y0 = gather(self.knots_y, 0)
        y1 = gather(self.knots_y, 1)
        m0 = gather(self.knots_m, 0)
        m1 = gather(self.knots_m, 1)
        h = x1 - x0

        left = segm_ind == 0
        right = segm_ind > self.segm_len

        def g_0(x):
            a, b = x1 - x, x - x0
            return (m0 * a**3 + m1 * b**3) / (6 * h) \
                    + (y0 / h - m0 * h / 6) * a + (y1 / h - m1 * h / 6) * b

        def g_1(x):
            a, b = x1 - x, x - x0
            return (m1 * b**2 - m0 * a**2) / (2 * h) + (y1 - y0) / h \
                    - (m1 - m0) * h / 6

        def func(x):
            y = g_0(x)
            on_knot = x == x1  # pass through the knots without round-off
            y[on_knot] = y1[on_knot]
            if torch.any(left):
                x_0, y_0 = self.knots_x[0], self.knots_y[0]
                y[left] = y_0 + g_1(x_0.expand_as(x))[left] * (x - x_0)[left]
            if torch.any(right):
                x_1, y_1 = self.knots_x[-1], self.knots_y[-1]
                y[right] = y_1 + g_1(x_1.expand_as(x))[right] * (x - x_1)[right]
            return y

        return func


class AugmentKnots:
    """Extend the knots of an envelope beyond the ends of a sampled series.

    Parameters
    ----------
    samples : ndarray
        The series the knots were picked from.
    knots : array_like of int
        Strictly increasing sample indices of the knots.
    """

    def __init__(self, samples, knots):
        self.samples = np.asarray(samples, dtype=float)
        self.knots_x = np.asarray(knots, dtype=int)
        self.knots_y = self.samples[self.knots_x]

    def __call__(self, policy, n_mirror=2):
        policy = BoundaryPolicy(policy)
        if policy == BoundaryPolicy.MIRROR:
            return self.takecare_mirror(n_mirror)
        elif policy == BoundaryPolicy.CLAMP:
            return self.takecare_clamp()
        return self.knots_x.astype(float), self.knots_y

    def takecare_mirror(self, n_mirror):
        """Reflect the first (last) `n_mirror` knots about the first (last)
        sample; reflections that would land inside the series are dropped.
        """
        x, y = self.knots_x, self.knots_y
        last = self.samples.shape[0] - 1

        x_left = -x[:n_mirror][::-1]
        y_left = y[:n_mirror][::-1]
        keep = x_left < 0
        x_right = 2 * last - x[-n_mirror:][::-1]
        y_right = y[-n_mirror:][::-1]
        keep_r = x_right > last

        knots_x = np.concatenate((x_left[keep], x, x_right[keep_r]))
        knots_y = np.concatenate((y_left[keep], y, y_right[keep_r]))
        return knots_x.astype(float), knots_y

    def takecare_clamp(self):
        """Pin the envelope to the end samples."""
        x, y = self.knots_x, self.knots_y
        last = self.samples.shape[0] - 1
        if x.shape[0] == 0 or x[0] > 0:
            x = np.concatenate(([0], x))
            y = np.concatenate(([self.samples[0]], y))
        if x[-1] < last:
            x = np.concatenate((x, [last]))
            y = np.concatenate((y, [self.samples[-1]]))
        return x.astype(float), y
