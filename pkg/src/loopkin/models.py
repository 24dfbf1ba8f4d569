"""Built-in machine catalog and minimal unit fixtures.

Eight synthetic mining machines exercise every transmission type the
solvers understand, from a single driven four-bar up to an eleven-cylinder
support with two loops and nested canopy drives.  The geometry is authored
in world coordinates at the rest pose and follows fixed rules:

* mechanisms live in the x-z plane with +y revolute axes (the roadheader
  adds a vertical slewing axis) and every loop chain is written so its
  closing pivot lands exactly on the ground link's origin, which makes the
  rest pose assemble with closure residuals at float noise;
* cylinders of one synchronous group share identical in-plane geometry and
  zero internal y-offset, so group members agree on length at every pose;
* bounds are stated as fractions of the rest length and were narrowed
  until every combination of in-bound targets assembles, one group at a
  time or all groups jointly.

Catalog entries also ship as checked-in ``goldens/*.mrdf.json`` files; the
generators must reproduce those byte for byte.  ``write_goldens`` refuses
to overwrite a differing golden unless forced, so regeneration is always a
deliberate act.
"""

import json
import math
from pathlib import Path

from .mrdf import parse_mrdf, serialize_mrdf

MACHINE_NAMES = ("TCCHS", "STHS", "SSHS", "RH", "LHD", "VD", "DJ", "SH")
FIXTURE_KINDS = ("A", "B", "C", "D", "fourbar_parallelogram", "indirect_lock")

_HALF_PI = 1.5707963267948966

_MACHINE_DEFAULTS = {"scale": 1.0, "rise": 1.0}


def _machine_params(params):
    merged = dict(_MACHINE_DEFAULTS)
    for key, value in (params or {}).items():
        if key not in merged:
            raise ValueError("unknown model parameter %r (expected one of %s)"
                             % (key, ", ".join(sorted(merged))))
        merged[key] = float(value)
    scale, rise = merged["scale"], merged["rise"]
    if not (math.isfinite(scale) and scale > 0):
        raise ValueError("scale must be a positive finite number, got %r" % scale)
    if not (math.isfinite(rise) and 0.0 <= rise <= 2.0):
        raise ValueError("rise must lie in [0, 2], got %r" % rise)
    return merged


def _dist(a, b):
    dx, dy, dz = a[0] - b[0], a[1] - b[1], a[2] - b[2]
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def _pose(t=(0.0, 0.0, 0.0), rpy=(0.0, 0.0, 0.0)):
    return {"translation": [float(c) for c in t], "rpy": [float(c) for c in rpy]}


def _box(size, at=(0.0, 0.0, 0.0), rpy=(0.0, 0.0, 0.0)):
    return {"offset": _pose(at, rpy),
            "geometry": {"type": "box", "size": [float(c) for c in size]}}


def _cyl(radius, length, at=(0.0, 0.0, 0.0), rpy=(0.0, 0.0, 0.0)):
    return {"offset": _pose(at, rpy),
            "geometry": {"type": "cylinder", "radius": float(radius),
                         "length": float(length)}}


class _Author:
    """Document builder that tracks rest-pose world positions.

    Anchors and pivots are given in world coordinates; the builder converts
    them to parent-local offsets (all rest rotations are zero, so the
    conversion is a plain subtraction) and remembers each link's world
    origin for later conversions and for rest-length computation.
    """

    def __init__(self, name, scale=1.0):
        self.doc = {"name": name, "links": [], "joints": [], "actuators": []}
        self.world = {}
        self.scale = scale

    def link(self, name, at=(0.0, 0.0, 0.0), visual=None):
        self.world[name] = tuple(at)
        entry = {"name": name, "transformation": _pose()}
        if visual is not None:
            entry["visual"] = visual
        self.doc["links"].append(entry)
        return self

    def joint(self, name, parent, child, at, kind="revolute", axis=(0, 1, 0)):
        origin = tuple(at[i] - self.world[parent][i] for i in range(3))
        entry = {"name": name, "parent": parent, "child": child, "type": kind,
                 "origin": _pose(origin)}
        if kind != "fixed":
            entry["axis"] = [float(c) for c in axis]
        self.doc["joints"].append(entry)
        return self

    def child(self, joint, parent, child, at, kind="revolute", axis=(0, 1, 0),
              visual=None):
        """Declare a link whose frame sits at its inbound joint."""
        self.link(child, at, visual)
        return self.joint(joint, parent, child, at, kind=kind, axis=axis)

    def strut(self, name, tube_parent, rod_parent, tube_at, rod_at,
              span=None, bounds=None, axis=(0, 1, 0), redundant=()):
        rest = _dist(tube_at, rod_at)
        if rest < 0.05 * self.scale:
            raise ValueError(
                "degenerate actuator geometry: mounts of %r nearly coincide"
                % name)
        if bounds is None:
            bounds = (span[0] * rest, span[1] * rest)
        tube, rod = name + "_tube", name + "_rod"
        self.link(tube, tube_at,
                  _cyl(0.05 * self.scale, 0.55 * rest,
                       (0.275 * rest, 0.0, 0.0), (0.0, _HALF_PI, 0.0)))
        self.joint(name + "_tm", tube_parent, tube, tube_at, axis=axis)
        self.link(rod, rod_at,
                  _cyl(0.032 * self.scale, 0.5 * rest,
                       (0.2 * rest, 0.0, 0.0), (0.0, _HALF_PI, 0.0)))
        self.joint(name + "_rm", rod_parent, rod, rod_at, axis=axis)
        self.doc["actuators"].append({
            "name": name,
            "tube": {"link": tube, "parent": tube_parent},
            "rod": {"link": rod, "parent": rod_parent},
            "bounds": [float(bounds[0]), float(bounds[1])],
            "redundant": list(redundant),
        })
        return self

    def pair(self, stem, tube_parent, rod_parent, tube_at, rod_at, span,
             offsets, axis=(0, 1, 0), suffixes=("_l", "_r")):
        """A synchronous group: same x-z geometry, anchors fanned out in y."""
        first = stem + suffixes[0]
        for suffix, dy in zip(suffixes, offsets):
            tube = (tube_at[0], tube_at[1] + dy, tube_at[2])
            rod = (rod_at[0], rod_at[1] + dy, rod_at[2])
            redundant = () if suffix == suffixes[0] else (first,)
            self.strut(stem + suffix, tube_parent, rod_parent, tube, rod,
                       span=span, axis=axis, redundant=redundant)
        return self

    def loop(self, prefix, ground, members, stations, names=None,
             visuals=None):
        """Author a four-bar chain ground -> m1 -> m2 -> m3 -> ground.

        ``stations`` are the world pivots (input, knee, far, pin); the pin
        must coincide with the ground link's origin so the loop closes on
        it exactly at rest.
        """
        sx = [s[0] for s in stations]
        sz = [s[2] for s in stations]
        area = 0.0
        for i in range(4):
            j = (i + 1) % 4
            area += sx[i] * sz[j] - sx[j] * sz[i]
        if abs(0.5 * area) <= 1e-6 * self.scale * self.scale:
            raise ValueError(
                "degenerate four-bar %r: zero enclosed area" % prefix)
        if tuple(stations[3]) != tuple(self.world[ground]):
            raise AssertionError("loop %r does not close on %r" % (prefix, ground))
        if names is None:
            names = tuple(prefix + "_" + p for p in ("input", "knee", "far", "pin"))
        chain = (ground,) + tuple(members) + (ground,)
        for i in range(3):
            vis = visuals[i] if visuals else None
            self.child(names[i], chain[i], chain[i + 1], stations[i], visual=vis)
        self.joint(names[3], members[-1], ground, stations[3])
        return self


# ---------------------------------------------------------------------------
# machines


def _tcchs(p):
    """Two-loop caving support: lift linkage under the shield, guard
    linkage hanging from the face beam, canopy held by staggered front
    and rear cylinder pairs whose loops close through each other's
    struts."""
    s, r = p["scale"], p["rise"]

    def pt(x, z, y=0.0):
        return (x * s, y * s, z * s * r)

    a = _Author("TCCHS", s)
    a.link("base", pt(0, 0), _box((2.4 * s, 1.1 * s, 0.3 * s), pt(0.25, -0.1)))
    a.loop("lift", "base", ("rear_bar", "shield", "front_bar"),
           (pt(0.9, 0.3), pt(0.9, 1.4), pt(-0.1, 1.5), pt(0, 0)),
           visuals=(_box((0.14 * s, 0.5 * s, 1.16 * s), pt(0, 0.55)),
                    _box((1.5 * s, 1.0 * s, 0.16 * s), pt(-0.3, 0.05)),
                    _box((0.14 * s, 0.5 * s, 1.56 * s), pt(0.05, -0.75))))
    a.child("canopy_hinge", "shield", "canopy", pt(0.4, 1.75),
            visual=_box((2.1 * s, 1.1 * s, 0.14 * s), pt(-0.25, 0.12)))
    a.child("tail_hinge", "shield", "tail_boom", pt(1.45, 1.6),
            visual=_box((1.0 * s, 0.6 * s, 0.14 * s), pt(0.35, -0.12)))
    a.child("tail_slide", "tail_boom", "tail_piston", pt(2.15, 1.35),
            kind="prismatic", axis=(1, 0, 0),
            visual=_box((0.9 * s, 0.4 * s, 0.1 * s), pt(0.45, 0)))
    a.child("beam_hinge", "canopy", "face_beam", pt(-0.8, 1.8),
            visual=_box((0.8 * s, 0.9 * s, 0.12 * s), pt(-0.3, -0.05)))
    a.loop("guard", "face_beam", ("guard_upper", "guard_panel", "guard_lower"),
           (pt(-1.35, 1.7), pt(-1.35, 1.05), pt(-0.85, 1.0), pt(-0.8, 1.8)),
           visuals=(_box((0.1 * s, 0.5 * s, 0.7 * s), pt(0, -0.32)),
                    _box((0.55 * s, 0.8 * s, 0.1 * s), pt(0.25, -0.03)),
                    _box((0.1 * s, 0.5 * s, 0.85 * s), pt(0.02, 0.4))))
    a.pair("canopy_jack_f", "base", "canopy", pt(-0.25, 0), pt(0.5, 1.87),
           (0.955, 1.025), (0.28 * s, -0.28 * s), suffixes=("l", "r"))
    a.pair("canopy_jack_r", "base", "canopy", pt(0.45, 0), pt(1.2, 1.87),
           (0.955, 1.025), (0.28 * s, -0.28 * s), suffixes=("l", "r"))
    a.pair("beam_jack", "canopy", "face_beam", pt(-0.2, 2.0), pt(-0.75, 1.3),
           (0.82, 1.16), (0.22 * s, -0.22 * s))
    a.pair("tail_jack", "shield", "tail_boom", pt(1.2, 1.1), pt(1.95, 1.3),
           (0.84, 1.18), (0.2 * s, -0.2 * s))
    a.pair("tail_ram", "tail_boom", "tail_piston", pt(1.65, 1.35), pt(2.7, 1.35),
           (0.8, 1.25), (0.15 * s, -0.15 * s))
    a.strut("guard_ram", "face_beam", "guard_panel", pt(-0.9, 1.25),
            pt(-1.1, 1.05), span=(0.85, 1.18))
    return a.doc


def _sths(p):
    """Shield support: one lift loop under the canopy, a triple of
    synchronous leg cylinders driving it, and a free guide chain at the
    rear."""
    s, r = p["scale"], p["rise"]

    def pt(x, z, y=0.0):
        return (x * s, y * s, z * s * r)

    a = _Author("STHS", s)
    a.link("base", pt(0, 0), _box((2.6 * s, 1.2 * s, 0.28 * s), pt(-0.1, -0.1)))
    a.loop("lift", "base", ("rear_bar", "shield", "front_bar"),
           (pt(1.0, 0.2), pt(1.0, 1.2), pt(0.45, 1.15), pt(0, 0)),
           visuals=(_box((0.14 * s, 0.5 * s, 1.05 * s), pt(0, 0.5)),
                    _box((1.3 * s, 1.1 * s, 0.16 * s), pt(-0.25, 0.05)),
                    _box((0.14 * s, 0.5 * s, 1.28 * s), pt(0.05, -0.62))))
    a.child("canopy_hinge", "shield", "canopy", pt(0.6, 1.5),
            visual=_box((1.9 * s, 1.2 * s, 0.14 * s), pt(0.3, 0.1)))
    a.child("guide_hip", "base", "guide_lower", pt(-1.2, 0.15),
            visual=_box((0.12 * s, 0.4 * s, 0.6 * s), pt(-0.12, 0.25)))
    a.child("guide_knee", "guide_lower", "guide_upper", pt(-1.45, 0.65),
            visual=_box((0.12 * s, 0.4 * s, 0.55 * s), pt(-0.1, 0.22)))
    a.child("guide_ankle", "guide_upper", "rear_shoe", pt(-1.65, 1.1),
            visual=_box((0.5 * s, 0.5 * s, 0.12 * s), pt(0.1, 0.05)))
    a.pair("leg_jack", "base", "shield", pt(0.2, 0), pt(1.25, 1.0),
           (0.88, 1.12), (0.3 * s, 0.0, -0.3 * s), suffixes=("_l", "_c", "_r"))
    a.strut("canopy_jack", "shield", "canopy", pt(0.8, 1.25), pt(1.15, 1.65),
            span=(0.82, 1.2))
    return a.doc


def _sshs(p):
    """Telescoping support: nested canopy drives plus face and tail
    extension rams riding the shield."""
    s, r = p["scale"], p["rise"]

    def pt(x, z, y=0.0):
        return (x * s, y * s, z * s * r)

    a = _Author("SSHS", s)
    a.link("base", pt(0, 0), _box((2.4 * s, 1.1 * s, 0.28 * s), pt(0.2, -0.1)))
    a.loop("lift", "base", ("rear_bar", "shield", "front_bar"),
           (pt(0.95, 0.25), pt(0.95, 1.3), pt(0.1, 1.4), pt(0, 0)),
           visuals=(_box((0.14 * s, 0.5 * s, 1.1 * s), pt(0, 0.52)),
                    _box((1.2 * s, 1.0 * s, 0.16 * s), pt(-0.2, 0.05)),
                    _box((0.14 * s, 0.5 * s, 1.46 * s), pt(0.05, -0.7))))
    a.child("canopy_hinge", "shield", "canopy", pt(0.5, 1.6),
            visual=_box((1.7 * s, 1.1 * s, 0.14 * s), pt(0.3, 0.1)))
    a.child("tail_hinge", "shield", "tail_beam", pt(1.45, 1.2),
            visual=_box((0.9 * s, 0.5 * s, 0.12 * s), pt(0.3, -0.1)))
    a.child("face_slide", "canopy", "face_piston", pt(1.3, 1.65),
            kind="prismatic", axis=(1, 0, 0),
            visual=_box((0.8 * s, 0.9 * s, 0.1 * s), pt(0.4, 0)))
    a.child("tail_slide", "tail_beam", "tail_piston", pt(2.05, 1.0),
            kind="prismatic", axis=(1, 0, 0),
            visual=_box((0.7 * s, 0.4 * s, 0.1 * s), pt(0.35, 0)))
    a.pair("canopy_jack_f", "base", "canopy", pt(-0.55, 0), pt(0.2, 1.7),
           (0.955, 1.03), (0.26 * s, -0.26 * s), suffixes=("l", "r"))
    a.pair("canopy_jack_r", "base", "canopy", pt(0.65, 0), pt(0.95, 1.7),
           (0.955, 1.03), (0.26 * s, -0.26 * s), suffixes=("l", "r"))
    a.strut("face_ram", "canopy", "face_piston", pt(1.05, 1.65), pt(1.8, 1.65),
            span=(0.8, 1.25))
    a.strut("tail_ram", "tail_beam", "tail_piston", pt(1.7, 1.05), pt(2.5, 1.05),
            span=(0.8, 1.25))
    a.strut("tail_jack", "shield", "tail_beam", pt(1.25, 0.85), pt(1.75, 0.95),
            span=(0.85, 1.18))
    return a.doc


def _rh(p):
    """Roadheader: slewing turret with a telescopic boom, loading apron,
    and a discharge conveyor with a driven tail jib.  The slew ring is a
    paired reverse entry, and its twin cylinders are stacked in height
    instead of mirrored so their lengths agree under yaw."""
    s, r = p["scale"], p["rise"]

    def pt(x, z, y=0.0):
        return (x * s, y * s, z * s * r)

    a = _Author("RH", s)
    a.link("base", pt(0, 0), _box((2.8 * s, 1.3 * s, 0.35 * s), pt(0, 0.0)))
    a.child("slew", "base", "turret", pt(0, 0.5), axis=(0, 0, 1),
            visual=_cyl(0.45 * s, 0.35 * s, pt(0, -0.1)))
    a.joint("slew_ring", "turret", "base", pt(0, 0), axis=(0, 0, 1))
    a.child("boom_pivot", "turret", "boom", pt(0.4, 0.75),
            visual=_box((1.9 * s, 0.4 * s, 0.35 * s), pt(0.85, 0.05)))
    a.child("tele_slide", "boom", "telescope", pt(2.0, 0.85),
            kind="prismatic", axis=(1, 0, 0),
            visual=_cyl(0.16 * s, 1.1 * s, pt(0.55, 0), (0.0, _HALF_PI, 0.0)))
    a.child("apron_pivot", "base", "apron", pt(1.1, 0.1),
            visual=_box((1.0 * s, 1.3 * s, 0.14 * s), pt(0.5, 0.1)))
    a.child("conveyor_pivot", "base", "conveyor", pt(-1.0, 0.35),
            visual=_box((1.3 * s, 0.5 * s, 0.16 * s), pt(-0.55, 0.08)))
    a.child("jib_pivot", "conveyor", "jib", pt(-1.9, 0.45),
            visual=_box((0.9 * s, 0.45 * s, 0.14 * s), pt(-0.4, 0.12)))
    # stacked, not mirrored: a twin fanned out in y would change length
    # under yaw, so the second cylinder sits below the first instead
    for suffix, height in (("_a", 0.3), ("_b", -0.1)):
        a.strut("slew_jack" + suffix, "base", "turret",
                pt(0.55, height, 0.3), pt(-0.3, height, 0.5),
                span=(0.82, 1.16), axis=(0, 0, 1),
                redundant=() if suffix == "_a" else ("slew_jack_a",))
    a.pair("boom_jack", "turret", "boom", pt(0.7, 0.4), pt(1.1, 0.85),
           (0.8, 1.3), (0.25 * s, -0.25 * s))
    a.pair("apron_jack", "base", "apron", pt(0.6, 0.35), pt(1.45, 0.5),
           (0.85, 1.18), (0.3 * s, -0.3 * s))
    a.pair("jib_jack", "conveyor", "jib", pt(-1.6, 0.6), pt(-2.35, 0.9),
           (0.85, 1.18), (0.22 * s, -0.22 * s))
    a.strut("boom_ram", "boom", "telescope", pt(1.3, 0.85), pt(2.6, 0.85),
            span=(0.75, 1.3))
    return a.doc


def _lhd(p):
    """Loader: a single lift loop with a prismatic ejector riding the
    tilt link."""
    s, r = p["scale"], p["rise"]

    def pt(x, z, y=0.0):
        return (x * s, y * s, z * s * r)

    a = _Author("LHD", s)
    a.link("base", pt(0, 0), _box((2.2 * s, 1.2 * s, 0.4 * s), pt(-0.4, 0.05)))
    a.loop("lift", "base", ("lift_arm", "rocker", "tilt_link"),
           (pt(0.8, 0.25), pt(0.8, 0.95), pt(0.1, 1.1), pt(0, 0)),
           visuals=(_box((0.16 * s, 0.6 * s, 0.75 * s), pt(0, 0.35)),
                    _box((0.9 * s, 0.5 * s, 0.16 * s), pt(-0.2, 0.08)),
                    _box((0.16 * s, 0.6 * s, 1.2 * s), pt(0.05, -0.55))))
    a.child("eject_slide", "tilt_link", "ejector", pt(0.35, 0.7),
            kind="prismatic", axis=(1, 0, 0),
            visual=_box((0.9 * s, 1.0 * s, 0.5 * s), pt(0.55, 0.05)))
    a.strut("boom_jack", "base", "rocker", pt(0.15, -0.2), pt(1.1, 0.8),
            span=(0.86, 1.15))
    a.strut("ejector_ram", "tilt_link", "ejector", pt(0.2, 0.7), pt(0.85, 0.7),
            span=(0.72, 1.35))
    return a.doc


def _vd(p):
    """Single driven four-bar: the smallest closed-chain machine in the
    catalog."""
    s, r = p["scale"], p["rise"]

    def pt(x, z, y=0.0):
        return (x * s, y * s, z * s * r)

    a = _Author("VD", s)
    a.link("base", pt(0, 0), _box((1.8 * s, 0.9 * s, 0.25 * s), pt(0.3, -0.05)))
    a.loop("drive", "base", ("crank", "coupler", "rocker"),
           (pt(0.9, 0.2), pt(0.9, 1.0), pt(0.1, 1.1), pt(0, 0)),
           visuals=(_box((0.14 * s, 0.4 * s, 0.85 * s), pt(0, 0.4)),
                    _box((0.9 * s, 0.4 * s, 0.14 * s), pt(-0.2, 0.05)),
                    _box((0.14 * s, 0.4 * s, 1.15 * s), pt(0.05, -0.55))))
    a.strut("drive_jack", "base", "crank", pt(0.3, -0.25), pt(0.9, 0.65),
            span=(0.88, 1.08))
    return a.doc


def _dj(p):
    """Drill jumbo: parallelogram boom keeping the mast orientation
    steady, a tilting mast, and a prismatic feed."""
    s, r = p["scale"], p["rise"]

    def pt(x, z, y=0.0):
        return (x * s, y * s, z * s * r)

    a = _Author("DJ", s)
    a.link("base", pt(0, 0), _box((2.0 * s, 1.1 * s, 0.3 * s), pt(-0.3, 0)))
    a.loop("lift", "base", ("boom_lower", "boom", "boom_link"),
           (pt(1.0, 0.15), pt(1.0, 1.05), pt(0, 0.9), pt(0, 0)),
           visuals=(_box((0.14 * s, 0.4 * s, 0.95 * s), pt(0, 0.45)),
                    _box((1.2 * s, 0.4 * s, 0.16 * s), pt(-0.35, 0.05)),
                    _box((0.14 * s, 0.4 * s, 0.95 * s), pt(0, -0.45))))
    a.child("mast_pivot", "boom", "mast", pt(0.4, 1.15),
            visual=_box((0.9 * s, 0.35 * s, 0.2 * s), pt(0.25, 0.3)))
    a.child("feed_slide", "mast", "feed", pt(0.7, 1.65),
            kind="prismatic", axis=(1, 0, 0),
            visual=_box((1.6 * s, 0.25 * s, 0.14 * s), pt(0.5, 0)))
    a.strut("boom_jack", "base", "boom", pt(0.3, -0.2), pt(1.3, 0.85),
            span=(0.87, 1.14))
    a.strut("mast_jack", "boom", "mast", pt(1.1, 0.8), pt(0.75, 1.5),
            span=(0.8, 1.2))
    a.strut("feed_ram", "mast", "feed", pt(0.45, 1.65), pt(1.25, 1.65),
            span=(0.75, 1.3))
    return a.doc


def _sh(p):
    """Shearer: two ranging arms each held by a quad of synchronous
    cylinders, riding a free haulage sled with a paired reverse entry."""
    s, r = p["scale"], p["rise"]

    def pt(x, z, y=0.0):
        return (x * s, y * s, z * s * r)

    a = _Author("SH", s)
    a.link("body", pt(0, 0), _box((2.6 * s, 1.1 * s, 0.8 * s), pt(0, 0.15)))
    a.child("port_pivot", "body", "port_arm", pt(-1.1, 0.15),
            visual=_box((1.3 * s, 0.5 * s, 0.3 * s), pt(-0.55, -0.12)))
    a.child("star_pivot", "body", "star_arm", pt(1.1, 0.15),
            visual=_box((1.3 * s, 0.5 * s, 0.3 * s), pt(0.55, -0.12)))
    a.child("sled_pivot", "body", "sled", pt(0, -0.45),
            visual=_box((2.2 * s, 1.3 * s, 0.2 * s), pt(0, -0.1)))
    a.joint("sled_ring", "sled", "body", pt(0, 0))
    a.pair("port_jack", "body", "port_arm", pt(-0.55, -0.25), pt(-1.75, -0.25),
           (0.86, 1.15), (0.3 * s, 0.1 * s, -0.1 * s, -0.3 * s),
           suffixes=("_a", "_b", "_c", "_d"))
    a.pair("star_jack", "body", "star_arm", pt(0.55, -0.25), pt(1.75, -0.25),
           (0.86, 1.15), (0.3 * s, 0.1 * s, -0.1 * s, -0.3 * s),
           suffixes=("_a", "_b", "_c", "_d"))
    return a.doc


# ---------------------------------------------------------------------------
# unit fixtures


def _unit_a():
    """Collinear prismatic drive: length is exactly rest + travel."""
    a = _Author("unit_a")
    a.link("base", (0, 0, 0), _box((0.6, 0.4, 0.2), (0, 0, -0.2)))
    a.child("slide", "base", "carriage", (0, 0, 0), kind="prismatic",
            axis=(1, 0, 0), visual=_box((0.5, 0.3, 0.15), (1.2, 0, 0.15)))
    a.strut("ram", "base", "carriage", (0, 0, 0), (1, 0, 0),
            bounds=(0.5, 3.0))
    return a.doc


def _unit_b():
    """Hinged arm with unit mount radii: the law of cosines in its
    plainest form."""
    a = _Author("unit_b")
    a.link("base", (0, 0, 0), _box((2.2, 0.4, 0.15), (0.5, 0, -0.08)))
    a.child("pivot", "base", "arm", (0, 0, 0),
            visual=_box((0.15, 0.3, 1.1), (0, 0, -0.5)))
    a.strut("jack", "base", "arm", (1, 0, 0), (0, 0, -1), bounds=(0.25, 1.9))
    return a.doc


def _parallelogram(author):
    author.link("base", (0, 0, 0), _box((2.4, 0.5, 0.15), (1.0, 0, -0.1)))
    author.loop("loop", "base", ("b", "c", "d"),
                ((2, 0, 0), (2, 0, 1), (0, 0, 1), (0, 0, 0)),
                names=("j_ab", "j_bc", "j_cd", "j_da"),
                visuals=(_box((0.12, 0.3, 1.05), (0, 0, 0.5)),
                         _box((2.05, 0.3, 0.12), (-1.0, 0, 0)),
                         _box((0.12, 0.3, 1.05), (0, 0, -0.5))))
    return author


def _unit_c():
    """Driven parallelogram: coupler stays level, follower mirrors the
    crank."""
    a = _parallelogram(_Author("unit_c"))
    a.strut("drive", "base", "b", (0.5, 0, -0.5), (2, 0, 0.5),
            bounds=(1.25, 2.0))
    return a.doc


def _unit_fourbar():
    """Bare parallelogram, no drives: topology-only fixture."""
    return _parallelogram(_Author("fourbar_parallelogram")).doc


def _crossed(author, pairs):
    _parallelogram(author)
    author.child("j_canopy", "c", "canopy", (1, 0, 1),
                 visual=_box((1.6, 0.5, 0.12), (0, 0, 0.15)))
    front = dict(tube_at=(-0.3, 0, 0), rod_at=(1.5, 0, 1.2), bounds=(1.6, 2.8))
    rear = dict(tube_at=(0.8, 0, 0), rod_at=(0.5, 0, 1.2), bounds=(0.8, 2.0))
    if pairs:
        for stem, spec in (("lift_f", front), ("lift_r", rear)):
            for suffix, dy in (("l", 0.2), ("r", -0.2)):
                tube = (spec["tube_at"][0], dy, spec["tube_at"][2])
                rod = (spec["rod_at"][0], dy, spec["rod_at"][2])
                redundant = () if suffix == "l" else (stem + "l",)
                author.strut(stem + suffix, "base", "canopy", tube, rod,
                             bounds=spec["bounds"], redundant=redundant)
    else:
        author.strut("lift0", "base", "canopy", front["tube_at"],
                     front["rod_at"], bounds=front["bounds"])
        author.strut("lift1", "base", "canopy", rear["tube_at"],
                     rear["rod_at"], bounds=rear["bounds"])
    return author.doc


def _unit_d():
    """Crossing cylinder pairs to a hinged canopy: each group's local loop
    closes through the opposite group's welded strut."""
    return _crossed(_Author("unit_d"), pairs=True)


def _unit_indirect_lock():
    """Two lone crossing cylinders: locking either one can only happen
    through the far-side weld, creating the four-link local loop."""
    return _crossed(_Author("indirect_lock"), pairs=False)


# ---------------------------------------------------------------------------
# public surface

_MACHINE_BUILDERS = {
    "TCCHS": _tcchs, "STHS": _sths, "SSHS": _sshs, "RH": _rh,
    "LHD": _lhd, "VD": _vd, "DJ": _dj, "SH": _sh,
}

_FIXTURE_BUILDERS = {
    "A": _unit_a, "B": _unit_b, "C": _unit_c, "D": _unit_d,
    "fourbar_parallelogram": _unit_fourbar,
    "indirect_lock": _unit_indirect_lock,
}

_FIXTURE_CATALOG_NAMES = {
    "A": "unit_a", "B": "unit_b", "C": "unit_c", "D": "unit_d",
    "fourbar_parallelogram": "fourbar_parallelogram",
    "indirect_lock": "indirect_lock",
}

_GOLDEN_DIR = Path(__file__).resolve().parent / "goldens"


def builtin_robot(name, params=None):
    """Description of a catalog machine, optionally re-parameterized."""
    if name not in _MACHINE_BUILDERS:
        raise ValueError("unknown machine %r (expected one of %s)"
                         % (name, ", ".join(MACHINE_NAMES)))
    doc = _MACHINE_BUILDERS[name](_machine_params(params))
    return parse_mrdf(json.dumps(doc))


def unit_fixture(kind):
    """Minimal fixture with a closed-form length law for one
    transmission type."""
    if kind not in _FIXTURE_BUILDERS:
        raise ValueError("unknown fixture kind %r (expected one of %s)"
                         % (kind, ", ".join(FIXTURE_KINDS)))
    return parse_mrdf(json.dumps(_FIXTURE_BUILDERS[kind]()))


def catalog_descriptions():
    """Every shipped model keyed by catalog name."""
    out = {name: builtin_robot(name) for name in MACHINE_NAMES}
    for kind, name in _FIXTURE_CATALOG_NAMES.items():
        out[name] = unit_fixture(kind)
    return out


def golden_path(name):
    key = name.lower()
    if key in ("a", "b", "c", "d"):
        key = "unit_" + key
    return _GOLDEN_DIR / (key + ".mrdf.json")


def write_goldens(root=None, force=False):
    """Write the catalog to disk; a differing existing file is an error
    unless ``force`` is given."""
    directory = Path(root) if root is not None else _GOLDEN_DIR
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    stale = []
    for name, desc in sorted(catalog_descriptions().items()):
        path = directory / (name.lower() + ".mrdf.json")
        text = serialize_mrdf(desc)
        if path.exists():
            if path.read_text() == text:
                continue
            if not force:
                stale.append(path.name)
                continue
        path.write_text(text)
        written.append(path)
    if stale:
        raise RuntimeError(
            "goldens differ from generator output (rerun with force=True "
            "after reviewing): %s" % ", ".join(stale))
    return written


if __name__ == "__main__":  # pragma: no cover
    import argparse

    cli = argparse.ArgumentParser(
        description="regenerate the checked-in model goldens")
    cli.add_argument("--force", action="store_true",
                     help="overwrite goldens that differ from the generators")
    cli.add_argument("--out", default=None, help="target directory")
    args = cli.parse_args()
    for p in write_goldens(args.out, force=args.force):
        print(p)
