"""Fixed-size vector/matrix helpers for 3-D geometry.

Everything works on plain tuples so results are hashable, picklable, and
free of dtype surprises.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

Vec3 = tuple[float, float, float]
Mat3 = tuple[Vec3, Vec3, Vec3]

IDENTITY: Mat3 = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
# Mirror across the xy-plane; composing with a random rotation gives a
# random orientation-reversing transform.
Z_MIRROR: Mat3 = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, -1.0))


def sub(a: Sequence[float], b: Sequence[float]) -> Vec3:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def add(a: Sequence[float], b: Sequence[float]) -> Vec3:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def dot(a: Sequence[float], b: Sequence[float]) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Sequence[float], b: Sequence[float]) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm(a: Sequence[float]) -> float:
    return math.sqrt(dot(a, a))


def apply(m: Mat3, v: Sequence[float]) -> Vec3:
    return (dot(m[0], v), dot(m[1], v), dot(m[2], v))


def mat_mul(a: Mat3, b: Mat3) -> Mat3:
    cols = tuple(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)  # type: ignore[return-value]


def det3(m: Mat3) -> float:
    return dot(m[0], cross(m[1], m[2]))


def centroid(points: Iterable[Sequence[float]]) -> Vec3:
    xs = ys = zs = 0.0
    n = 0
    for p in points:
        xs += p[0]
        ys += p[1]
        zs += p[2]
        n += 1
    return (xs / n, ys / n, zs / n)


def rotation_from_quaternion(w: float, x: float, y: float, z: float) -> Mat3:
    """Rotation matrix of a unit quaternion (w, x, y, z)."""
    return (
        (1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)),
        (2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)),
        (2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)),
    )


def rotation_aligning_to_z(direction: Sequence[float]) -> Mat3:
    """Proper rotation taking `direction` onto the positive z-axis.

    Rodrigues construction about the axis direction x e_z. Near-parallel
    and near-antiparallel inputs fall back to the identity and a half-turn
    about x respectively.
    """
    length = norm(direction)
    if length == 0.0:
        raise ValueError("cannot orient a zero direction")
    ux, uy, uz = direction[0] / length, direction[1] / length, direction[2] / length
    c = uz  # cosine of the angle to e_z
    s2 = ux * ux + uy * uy
    if s2 < 1e-30:
        if c > 0:
            return IDENTITY
        return ((1.0, 0.0, 0.0), (0.0, -1.0, 0.0), (0.0, 0.0, -1.0))
    s = math.sqrt(s2)
    ax, ay = uy / s, -ux / s  # unit axis (u x e_z); a_z = 0
    t = 1.0 - c
    return (
        (c + t * ax * ax, t * ax * ay, s * ay),
        (t * ax * ay, c + t * ay * ay, -s * ax),
        (-s * ay, s * ax, c),
    )
