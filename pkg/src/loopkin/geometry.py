"""Rigid-transform algebra.

Rotations are 3x3 tuples-of-tuples, translations 3-tuples, both immutable.
Column-vector convention throughout: composing A.compose(B) and applying to a
point p computes A(B(p)), i.e. the rightmost factor acts first.  The hot
solver loops run on plain tuples on purpose — no array allocation per step.
"""
import math

from .errors import GeometryError

Vec3 = tuple
Mat3 = tuple

IDENTITY_ROTATION = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))

_AXIS_TOL = 1e-9


# ---------------------------------------------------------------------------
# small vector helpers

def vec_add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vec_sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vec_scale(a, s):
    return (a[0] * s, a[1] * s, a[2] * s)


def vec_dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def vec_cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def vec_norm(a):
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def normalize(a):
    n = vec_norm(a)
    if n < 1e-12:
        raise GeometryError("cannot normalize a near-zero vector")
    return (a[0] / n, a[1] / n, a[2] / n)


def _check_axis(axis):
    if axis is None:
        raise GeometryError("axis required")
    n = vec_norm(axis)
    if abs(n - 1.0) > _AXIS_TOL:
        raise GeometryError("axis must be unit length, got |a| = %.12g" % n)


# ---------------------------------------------------------------------------
# 3x3 matrix helpers (unrolled; these sit inside every solver iteration)

def mat_mul(a, b):
    (a00, a01, a02), (a10, a11, a12), (a20, a21, a22) = a
    (b00, b01, b02), (b10, b11, b12), (b20, b21, b22) = b
    return (
        (a00 * b00 + a01 * b10 + a02 * b20,
         a00 * b01 + a01 * b11 + a02 * b21,
         a00 * b02 + a01 * b12 + a02 * b22),
        (a10 * b00 + a11 * b10 + a12 * b20,
         a10 * b01 + a11 * b11 + a12 * b21,
         a10 * b02 + a11 * b12 + a12 * b22),
        (a20 * b00 + a21 * b10 + a22 * b20,
         a20 * b01 + a21 * b11 + a22 * b21,
         a20 * b02 + a21 * b12 + a22 * b22),
    )


def mat_vec(m, v):
    (m00, m01, m02), (m10, m11, m12), (m20, m21, m22) = m
    x, y, z = v
    return (
        m00 * x + m01 * y + m02 * z,
        m10 * x + m11 * y + m12 * z,
        m20 * x + m21 * y + m22 * z,
    )


def transpose(m):
    (m00, m01, m02), (m10, m11, m12), (m20, m21, m22) = m
    return ((m00, m10, m20), (m01, m11, m21), (m02, m12, m22))


def _rotation_about(axis, theta):
    # rodrigues without the axis check, for callers whose axes were
    # validated once at description-compile time
    x, y, z = axis
    c = math.cos(theta)
    s = math.sin(theta)
    t = 1.0 - c
    return (
        (c + x * x * t, x * y * t - z * s, x * z * t + y * s),
        (x * y * t + z * s, c + y * y * t, y * z * t - x * s),
        (x * z * t - y * s, y * z * t + x * s, c + z * z * t),
    )


def rodrigues(axis, theta):
    """Rotation by theta about a unit axis."""
    _check_axis(axis)
    return _rotation_about(axis, theta)


def rpy_matrix(roll, pitch, yaw):
    """Rz(yaw) * Ry(pitch) * Rx(roll), the URDF-compatible convention."""
    return mat_mul(
        rodrigues((0.0, 0.0, 1.0), yaw),
        mat_mul(rodrigues((0.0, 1.0, 0.0), pitch), rodrigues((1.0, 0.0, 0.0), roll)),
    )


# ---------------------------------------------------------------------------
# transforms

class Transform:
    """Rotation + translation pair; immutable after construction."""

    __slots__ = ("rotation", "translation")

    def __init__(self, rotation, translation):
        self.rotation = (tuple(rotation[0]), tuple(rotation[1]), tuple(rotation[2]))
        self.translation = tuple(translation)

    @classmethod
    def _of(cls, rotation, translation):
        # constructor for internal callers whose operands are already
        # tuple-of-tuples; skips the normalizing copies in __init__
        out = object.__new__(cls)
        out.rotation = rotation
        out.translation = translation
        return out

    @staticmethod
    def identity():
        return _IDENTITY

    @staticmethod
    def from_translation(v):
        return Transform(IDENTITY_ROTATION, v)

    @staticmethod
    def from_rpy(translation, rpy):
        return Transform(rpy_matrix(rpy[0], rpy[1], rpy[2]), translation)

    def translated(self, v):
        """Same rotation, translation shifted by v (world frame)."""
        return Transform(self.rotation, vec_add(self.translation, v))

    def compose(self, other):
        return Transform._of(
            mat_mul(self.rotation, other.rotation),
            vec_add(mat_vec(self.rotation, other.translation), self.translation),
        )

    def inverse(self):
        rt = transpose(self.rotation)
        return Transform._of(rt, vec_scale(mat_vec(rt, self.translation), -1.0))

    def apply(self, point):
        return vec_add(mat_vec(self.rotation, point), self.translation)

    def __repr__(self):
        return "Transform(t=%r)" % (self.translation,)


_IDENTITY = Transform(IDENTITY_ROTATION, (0.0, 0.0, 0.0))


def chain_transform(transforms):
    """Left-to-right product of a path of transforms; empty product = identity."""
    out = None
    for t in transforms:
        out = t if out is None else out.compose(t)
    return out if out is not None else _IDENTITY


def joint_transform(kind, axis, value, origin):
    """Parent-to-child transform of a single joint at parameter `value`.

    The motion acts about/along the joint origin frame: origin * motion(value).
    Generalized joints have no pointwise form — they are solved, not evaluated.
    """
    if kind == "revolute":
        _check_axis(axis)
        return origin.compose(Transform(rodrigues(axis, value), (0.0, 0.0, 0.0)))
    if kind == "prismatic":
        _check_axis(axis)
        return origin.compose(Transform(IDENTITY_ROTATION, vec_scale(axis, value)))
    if kind == "fixed":
        return origin
    raise GeometryError("cannot evaluate joint of kind %r pointwise" % (kind,))


# ---------------------------------------------------------------------------
# logarithm / distance

def so3_log(rotation):
    """Axis-angle vector of a rotation; angle in [0, pi]."""
    (r00, r01, r02), (r10, r11, r12), (r20, r21, r22) = rotation
    trace = r00 + r11 + r22
    cos_theta = max(-1.0, min(1.0, 0.5 * (trace - 1.0)))
    theta = math.acos(cos_theta)
    s = (r21 - r12, r02 - r20, r10 - r01)  # 2 sin(theta) * axis
    if theta < 1e-9:
        return vec_scale(s, 0.5)
    if theta > 3.0:
        # approaching a half turn the skew part vanishes and dividing by
        # sin(theta) amplifies trace noise by 1/sin^2; recover the axis from
        # the outer-product part (R - cos I) / (1 - cos) instead, picking
        # the dominant diagonal, then sign it with what skew remains
        spread = 1.0 - cos_theta
        d0 = (r00 - cos_theta) / spread
        d1 = (r11 - cos_theta) / spread
        d2 = (r22 - cos_theta) / spread
        if d0 >= d1 and d0 >= d2:
            x = math.sqrt(max(d0, 0.0))
            axis = (x, 0.5 * (r01 + r10) / (spread * x),
                    0.5 * (r02 + r20) / (spread * x))
        elif d1 >= d2:
            y = math.sqrt(max(d1, 0.0))
            axis = (0.5 * (r01 + r10) / (spread * y), y,
                    0.5 * (r12 + r21) / (spread * y))
        else:
            z = math.sqrt(max(d2, 0.0))
            axis = (0.5 * (r02 + r20) / (spread * z),
                    0.5 * (r12 + r21) / (spread * z), z)
        axis = normalize(axis)
        if vec_dot(axis, s) < 0.0:
            axis = vec_scale(axis, -1.0)
        # the trace resolves the angle only to ~sqrt(eps) this close to a
        # half turn; the skew magnitude |s| = 2 sin(theta) keeps full
        # absolute precision, so take the angle from there instead
        theta = math.pi - math.asin(min(1.0, 0.5 * vec_norm(s)))
        return vec_scale(axis, theta)
    return vec_scale(s, 0.5 * theta / math.sin(theta))


def se3_log(t):
    """Twist (wx, wy, wz, vx, vy, vz) with exp(log(T)) = T."""
    w = so3_log(t.rotation)
    theta = vec_norm(w)
    x, y, z = w
    k = ((0.0, -z, y), (z, 0.0, -x), (-y, x, 0.0))
    k2 = mat_mul(k, k)
    if theta < 1e-6:
        c1, c2 = -0.5, 1.0 / 12.0  # Taylor of the inverse left Jacobian
    else:
        c1 = -0.5
        # half-angle form of 1/theta^2 - (1 + cos)/(2 theta sin): the
        # full-angle cosine loses the last digits of (1 + cos) near a half
        # turn, where the theta^2-sized curvature term would amplify them
        half = 0.5 * theta
        c2 = 1.0 / (theta * theta) \
            - math.cos(half) / (2.0 * theta * math.sin(half))
    tr = t.translation
    v = tuple(
        tr[i] + c1 * mat_vec(k, tr)[i] + c2 * mat_vec(k2, tr)[i]
        for i in range(3)
    )
    return (w[0], w[1], w[2], v[0], v[1], v[2])


def se3_exp(twist):
    """Pose of a twist (wx, wy, wz, vx, vy, vz); inverse of se3_log."""
    wx, wy, wz, vx, vy, vz = twist
    theta = math.sqrt(wx * wx + wy * wy + wz * wz)
    k = ((0.0, -wz, wy), (wz, 0.0, -wx), (-wy, wx, 0.0))
    k2 = mat_mul(k, k)
    if theta < 1e-9:
        a, b, c = 1.0, 0.5, 1.0 / 6.0  # second-order Taylor
    else:
        a = math.sin(theta) / theta
        b = (1.0 - math.cos(theta)) / (theta * theta)
        c = (theta - math.sin(theta)) / (theta ** 3)
    rotation = tuple(
        tuple((1.0 if i == j else 0.0) + a * k[i][j] + b * k2[i][j]
              for j in range(3))
        for i in range(3)
    )
    v = (vx, vy, vz)
    translation = tuple(
        v[i] + b * mat_vec(k, v)[i] + c * mat_vec(k2, v)[i]
        for i in range(3)
    )
    return Transform(rotation, translation)


def pose_distance(ta, tb):
    """Norm of the relative twist between two poses; zero iff equal."""
    rel = ta.inverse().compose(tb)
    tw = se3_log(rel)
    return math.sqrt(sum(c * c for c in tw))


# ---------------------------------------------------------------------------
# quaternion conversions (wire output and rotation interpolation only)

def rotation_to_quaternion(r):
    """Unit quaternion (w, x, y, z) with w >= 0."""
    (r00, r01, r02), (r10, r11, r12), (r20, r21, r22) = r
    trace = r00 + r11 + r22
    if trace > 0.0:
        s = math.sqrt(trace + 1.0) * 2.0
        q = (0.25 * s, (r21 - r12) / s, (r02 - r20) / s, (r10 - r01) / s)
    elif r00 > r11 and r00 > r22:
        s = math.sqrt(1.0 + r00 - r11 - r22) * 2.0
        q = ((r21 - r12) / s, 0.25 * s, (r01 + r10) / s, (r02 + r20) / s)
    elif r11 > r22:
        s = math.sqrt(1.0 + r11 - r00 - r22) * 2.0
        q = ((r02 - r20) / s, (r01 + r10) / s, 0.25 * s, (r12 + r21) / s)
    else:
        s = math.sqrt(1.0 + r22 - r00 - r11) * 2.0
        q = ((r10 - r01) / s, (r02 + r20) / s, (r12 + r21) / s, 0.25 * s)
    n = math.sqrt(sum(c * c for c in q))
    q = tuple(c / n for c in q)
    if q[0] < 0.0:
        q = tuple(-c for c in q)
    return q


def quaternion_to_rotation(q):
    w, x, y, z = q
    return (
        (1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)),
        (2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)),
        (2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)),
    )
