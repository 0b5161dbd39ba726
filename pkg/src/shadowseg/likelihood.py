"""Per-pixel negative log-likelihood potentials for the three labels.

Intensity: background pixels follow the background Gaussian, shadowed
pixels its gain/offset transform (mean gain*mu + offset, variance
gain^2 * var), foreground is uniform over [0, y_max].

Edges: background edge vectors follow the edge model's bivariate normal,
shadowed ones the gain-scaled version, and foreground edges the product
of two triangular densities that put more mass on small differences.
Potentials are pure functions; all arguments broadcast, so the same code
evaluates one pixel or a whole frame.
"""

from __future__ import annotations

import numpy as np

from shadowseg.edge import EdgeModel
from shadowseg.energy import BACKGROUND, FOREGROUND, LABELS, SHADOW
from shadowseg.shadow import ShadowParams

# Floor on each triangular factor (as a multiple of 1/y_max^2) so the
# foreground edge energy stays finite when |e| reaches y_max.
EDGE_DENSITY_FLOOR = 0.1

LOG_2PI = float(np.log(2.0 * np.pi))


def intensity_potential(g, bg_mean, bg_var, shadow: ShadowParams, y_max: float, label: int):
    """-ln p(intensity | background parameters, label)."""
    if label == FOREGROUND:
        return np.log(y_max) + np.zeros_like(np.asarray(g, dtype=np.float64))
    if label == BACKGROUND:
        gain, offset = 1.0, 0.0
    elif label == SHADOW:
        gain, offset = shadow.gain, shadow.offset
    else:
        raise ValueError(f"not a committed label: {label}")
    mean = gain * np.asarray(bg_mean, dtype=np.float64) + offset
    var = gain * gain * np.asarray(bg_var, dtype=np.float64)
    dev = np.asarray(g, dtype=np.float64) - mean
    return 0.5 * (LOG_2PI + np.log(var)) + dev * dev / (2.0 * var)


def edge_potential(edge_h, edge_v, mean_h, mean_v, var_h, var_v,
                   shadow: ShadowParams, y_max: float, label: int):
    """-ln p(edge vector | edge model parameters, label)."""
    edge_h = np.asarray(edge_h, dtype=np.float64)
    edge_v = np.asarray(edge_v, dtype=np.float64)
    if label == FOREGROUND:
        floor = EDGE_DENSITY_FLOOR / (y_max * y_max)
        fh = np.maximum(1.0 / y_max - np.abs(edge_h) / (y_max * y_max), floor)
        fv = np.maximum(1.0 / y_max - np.abs(edge_v) / (y_max * y_max), floor)
        return -np.log(fh) - np.log(fv)
    if label == BACKGROUND:
        gain = 1.0
    elif label == SHADOW:
        gain = shadow.gain
    else:
        raise ValueError(f"not a committed label: {label}")
    var_h = np.asarray(var_h, dtype=np.float64)
    var_v = np.asarray(var_v, dtype=np.float64)
    dev_h = edge_h - gain * np.asarray(mean_h, dtype=np.float64)
    dev_v = edge_v - gain * np.asarray(mean_v, dtype=np.float64)
    quad = dev_h * dev_h / var_h + dev_v * dev_v / var_v
    return LOG_2PI + 2.0 * np.log(gain) + 0.5 * np.log(var_h * var_v) + quad / (2.0 * gain * gain)


def build_potential_tables(frame, edge_h, edge_v, bg_mean, bg_var,
                           edges: EdgeModel, shadow: ShadowParams,
                           y_max: float) -> tuple[np.ndarray, np.ndarray]:
    """Stacked (3, H, W) intensity and edge potential tables, indexed by label-1.

    `bg_var` may be a scalar (the pooled detection variance) or a grid; the
    edge variances are taken from `edges` the same way.
    """
    height, width = np.asarray(frame).shape
    u1 = np.empty((3, height, width))
    u2 = np.empty((3, height, width))
    for label in LABELS:
        u1[label - 1] = intensity_potential(frame, bg_mean, bg_var, shadow, y_max, label)
        u2[label - 1] = edge_potential(edge_h, edge_v, edges.mean_h, edges.mean_v,
                                       edges.var_h, edges.var_v, shadow, y_max, label)
    return u1, u2


def dump_potentials(u1: np.ndarray, u2: np.ndarray, path) -> None:
    """Raw float64 dump for debugging: six values per pixel, row-major
    (intensity potentials for labels 1..3, then edge potentials)."""
    stacked = np.concatenate([u1, u2], axis=0)          # (6, H, W)
    np.ascontiguousarray(stacked.transpose(1, 2, 0)).tofile(path)
