"""MRDF robot descriptions: parse, serialize, compile, validate.

MRDF is a JSON format with links, joints, and actuators as first-class
entries.  Compilation merges fixed-joint chains into rigid aggregates,
assigns breadth-first IDs, and builds the incidence matrices the topology
and solver layers run on:

    J   n_L x n_L   joint codes  0 none / 1 revolute / 2 prismatic
                                 3 fixed / 4 generalized
    At  n_A x n_L   tube-side parent link of each actuator
    Ar  n_A x n_L   rod-side parent link of each actuator
    Rd  n_A x n_A   redundancy classes (symmetric, unit diagonal)

All numbers are meters and radians.
"""
import json
from dataclasses import dataclass, field

from .errors import MrdfError
from .geometry import Transform, vec_norm

JOINT_NONE = 0
JOINT_REVOLUTE = 1
JOINT_PRISMATIC = 2
JOINT_FIXED = 3
JOINT_GENERALIZED = 4

_KIND_TO_CODE = {"revolute": JOINT_REVOLUTE, "prismatic": JOINT_PRISMATIC,
                 "fixed": JOINT_FIXED}

_GEOMETRY_PARAMS = {
    "box": ("size",),
    "cylinder": ("radius", "length"),
    "capsule": ("radius", "length"),
    "sphere": ("radius",),
    "mesh": ("path",),
}


# ---------------------------------------------------------------------------
# description model

@dataclass(frozen=True)
class PoseSpec:
    translation: tuple = (0.0, 0.0, 0.0)
    rpy: tuple = (0.0, 0.0, 0.0)

    def to_transform(self):
        return Transform.from_rpy(self.translation, self.rpy)


@dataclass(frozen=True)
class GeometrySpec:
    kind: str
    params: dict


@dataclass(frozen=True)
class VisualSpec:
    offset: PoseSpec
    geometry: GeometrySpec


_DEFAULT_VISUAL = VisualSpec(PoseSpec(), GeometrySpec("box", {"size": (1.0, 1.0, 1.0)}))


@dataclass(frozen=True)
class LinkSpec:
    name: str
    transformation: PoseSpec
    visual: VisualSpec


@dataclass(frozen=True)
class JointSpec:
    name: str
    parent: str
    child: str
    kind: str
    origin: PoseSpec
    axis: tuple  # None for fixed joints


@dataclass(frozen=True)
class ActuatorSpec:
    name: str
    tube_link: str
    tube_parent: str
    rod_link: str
    rod_parent: str
    bounds: tuple
    redundant: tuple


@dataclass(frozen=True)
class RobotDescription:
    name: str
    links: tuple
    joints: tuple
    actuators: tuple


# ---------------------------------------------------------------------------
# parsing

def _fail(msg):
    raise MrdfError(msg)


def _require(obj, key, where, kind=None):
    if key not in obj:
        _fail("%s: missing required key %r" % (where, key))
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        _fail("%s: key %r has wrong type %s" % (where, key, type(value).__name__))
    return value


def _no_extras(obj, allowed, where):
    extras = sorted(set(obj) - set(allowed))
    if extras:
        _fail("%s: unknown key(s) %s" % (where, ", ".join(repr(k) for k in extras)))


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail("%s: expected a number, got %r" % (where, value))
    return float(value)


def _vec3(value, where):
    if not isinstance(value, list) or len(value) != 3:
        _fail("%s: expected a 3-element array" % where)
    return tuple(_number(c, where) for c in value)


def _pose(obj, where):
    if obj is None:
        return PoseSpec()
    if not isinstance(obj, dict):
        _fail("%s: expected an object" % where)
    _no_extras(obj, ("translation", "rpy"), where)
    translation = _vec3(obj["translation"], where + ".translation") if "translation" in obj else (0.0, 0.0, 0.0)
    rpy = _vec3(obj["rpy"], where + ".rpy") if "rpy" in obj else (0.0, 0.0, 0.0)
    return PoseSpec(translation, rpy)


def _geometry(obj, where):
    kind = _require(obj, "type", where, str)
    if kind not in _GEOMETRY_PARAMS:
        _fail("%s: unknown geometry type %r" % (where, kind))
    wanted = _GEOMETRY_PARAMS[kind]
    _no_extras(obj, ("type",) + wanted, where)
    params = {}
    for key in wanted:
        value = _require(obj, key, where)
        if key == "path":
            if not isinstance(value, str):
                _fail("%s: mesh path must be a string" % where)
            params[key] = value
        elif key == "size":
            size = _vec3(value, where + ".size")
            if min(size) <= 0:
                _fail("%s: box size must be positive" % where)
            params[key] = size
        else:
            num = _number(value, where + "." + key)
            if num <= 0:
                _fail("%s: %s must be positive" % (where, key))
            params[key] = num
    return GeometrySpec(kind, params)


def _visual(obj, where):
    if obj is None:
        return _DEFAULT_VISUAL
    if not isinstance(obj, dict):
        _fail("%s: expected an object" % where)
    _no_extras(obj, ("offset", "geometry"), where)
    offset = _pose(obj.get("offset"), where + ".offset")
    geometry = _geometry(_require(obj, "geometry", where, dict), where + ".geometry")
    return VisualSpec(offset, geometry)


def _parse_link(obj, index):
    where = "links[%d]" % index
    if not isinstance(obj, dict):
        _fail("%s: expected an object" % where)
    _no_extras(obj, ("name", "transformation", "visual"), where)
    name = _require(obj, "name", where, str)
    where = "link %r" % name
    return LinkSpec(
        name=name,
        transformation=_pose(obj.get("transformation"), where + ".transformation"),
        visual=_visual(obj.get("visual"), where + ".visual"),
    )


def _parse_joint(obj, index):
    where = "joints[%d]" % index
    if not isinstance(obj, dict):
        _fail("%s: expected an object" % where)
    _no_extras(obj, ("name", "parent", "child", "type", "origin", "axis"), where)
    name = _require(obj, "name", where, str)
    where = "joint %r" % name
    kind = _require(obj, "type", where, str)
    if kind not in _KIND_TO_CODE:
        _fail("%s: invalid joint type %r" % (where, kind))
    parent = _require(obj, "parent", where, str)
    child = _require(obj, "child", where, str)
    if parent == child:
        _fail("%s: parent and child are the same link %r" % (where, parent))
    axis = None
    if kind == "fixed":
        if "axis" in obj:
            _fail("%s: fixed joints must not declare an axis" % where)
    else:
        if "axis" not in obj:
            _fail("%s: %s joints require an axis" % (where, kind))
        axis = _vec3(obj["axis"], where + ".axis")
        if vec_norm(axis) < 1e-12:
            _fail("%s: axis is zero" % where)
    return JointSpec(name, parent, child, kind, _pose(obj.get("origin"), where + ".origin"), axis)


def _parse_actuator(obj, index):
    where = "actuators[%d]" % index
    if not isinstance(obj, dict):
        _fail("%s: expected an object" % where)
    _no_extras(obj, ("name", "tube", "rod", "bounds", "redundant"), where)
    name = _require(obj, "name", where, str)
    where = "actuator %r" % name

    def end(which):
        entry = _require(obj, which, where, dict)
        _no_extras(entry, ("link", "parent"), where + "." + which)
        return (_require(entry, "link", where + "." + which, str),
                _require(entry, "parent", where + "." + which, str))

    tube_link, tube_parent = end("tube")
    rod_link, rod_parent = end("rod")
    if tube_link == rod_link:
        _fail("%s: tube and rod must be distinct links" % where)
    bounds_raw = _require(obj, "bounds", where, list)
    if len(bounds_raw) != 2:
        _fail("%s: bounds must be [lower, upper]" % where)
    lo = _number(bounds_raw[0], where + ".bounds")
    hi = _number(bounds_raw[1], where + ".bounds")
    if not lo < hi:
        _fail("%s: bounds out of order (%g >= %g)" % (where, lo, hi))
    redundant = obj.get("redundant", [])
    if not isinstance(redundant, list) or not all(isinstance(r, str) for r in redundant):
        _fail("%s: redundant must be a list of actuator names" % where)
    return ActuatorSpec(name, tube_link, tube_parent, rod_link, rod_parent,
                        (lo, hi), tuple(redundant))


def parse_mrdf(text):
    """Parse an MRDF document string into a RobotDescription."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise MrdfError("JSON syntax error at line %d column %d: %s"
                        % (err.lineno, err.colno, err.msg)) from None
    if not isinstance(raw, dict):
        _fail("document root must be an object")
    _no_extras(raw, ("name", "links", "joints", "actuators"), "document")
    name = _require(raw, "name", "document", str)
    links = tuple(_parse_link(o, i) for i, o in enumerate(_require(raw, "links", "document", list)))
    joints = tuple(_parse_joint(o, i) for i, o in enumerate(raw.get("joints", [])))
    actuators = tuple(_parse_actuator(o, i) for i, o in enumerate(raw.get("actuators", [])))

    link_names = set()
    for l in links:
        if l.name in link_names:
            _fail("duplicate link name %r" % l.name)
        link_names.add(l.name)
    seen = set()
    for j in joints:
        if j.name in seen:
            _fail("duplicate joint name %r" % j.name)
        seen.add(j.name)
        for ref in (j.parent, j.child):
            if ref not in link_names:
                _fail("joint %r references undeclared link %r" % (j.name, ref))
    act_names = set()
    strut_refs = {}
    for a in actuators:
        if a.name in act_names:
            _fail("duplicate actuator name %r" % a.name)
        act_names.add(a.name)
        for ref in (a.tube_link, a.tube_parent, a.rod_link, a.rod_parent):
            if ref not in link_names:
                _fail("actuator %r references undeclared link %r" % (a.name, ref))
        for strut in (a.tube_link, a.rod_link):
            if strut in strut_refs:
                _fail("link %r is claimed by actuators %r and %r"
                      % (strut, strut_refs[strut], a.name))
            strut_refs[strut] = a.name
    for a in actuators:
        for ref in a.redundant:
            if ref not in act_names:
                _fail("actuator %r lists unknown redundant peer %r" % (a.name, ref))
    return RobotDescription(name, links, joints, actuators)


def load_mrdf(path):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_mrdf(handle.read())


# ---------------------------------------------------------------------------
# serialization

def _pose_out(p):
    return {"translation": list(p.translation), "rpy": list(p.rpy)}


def serialize_mrdf(desc):
    """Deterministic MRDF text: fixed key order, shortest round-trip floats."""
    body = {"name": desc.name, "links": [], "joints": [], "actuators": []}
    for l in desc.links:
        entry = {"name": l.name, "transformation": _pose_out(l.transformation)}
        geom = {"type": l.visual.geometry.kind}
        for key in _GEOMETRY_PARAMS[l.visual.geometry.kind]:
            value = l.visual.geometry.params[key]
            geom[key] = list(value) if isinstance(value, tuple) else value
        entry["visual"] = {"offset": _pose_out(l.visual.offset), "geometry": geom}
        body["links"].append(entry)
    for j in desc.joints:
        entry = {"name": j.name, "parent": j.parent, "child": j.child,
                 "type": j.kind, "origin": _pose_out(j.origin)}
        if j.axis is not None:
            entry["axis"] = list(j.axis)
        body["joints"].append(entry)
    for a in desc.actuators:
        body["actuators"].append({
            "name": a.name,
            "tube": {"link": a.tube_link, "parent": a.tube_parent},
            "rod": {"link": a.rod_link, "parent": a.rod_parent},
            "bounds": list(a.bounds),
            "redundant": list(a.redundant),
        })
    return json.dumps(body, indent=2, ensure_ascii=False) + "\n"


def description_equal(a, b, tol=1e-12):
    """Field-by-field structural equality, numeric fields within tol."""

    def close(x, y):
        return abs(x - y) <= tol

    def pose_eq(p, q):
        return all(close(x, y) for x, y in zip(p.translation + p.rpy, q.translation + q.rpy))

    if a.name != b.name or len(a.links) != len(b.links) or \
            len(a.joints) != len(b.joints) or len(a.actuators) != len(b.actuators):
        return False
    for la, lb in zip(a.links, b.links):
        if la.name != lb.name or not pose_eq(la.transformation, lb.transformation):
            return False
        if la.visual.geometry.kind != lb.visual.geometry.kind:
            return False
        if not pose_eq(la.visual.offset, lb.visual.offset):
            return False
        for key, value in la.visual.geometry.params.items():
            other = lb.visual.geometry.params[key]
            if isinstance(value, str):
                if value != other:
                    return False
            elif isinstance(value, tuple):
                if not all(close(x, y) for x, y in zip(value, other)):
                    return False
            elif not close(value, other):
                return False
    for ja, jb in zip(a.joints, b.joints):
        if (ja.name, ja.parent, ja.child, ja.kind) != (jb.name, jb.parent, jb.child, jb.kind):
            return False
        if not pose_eq(ja.origin, jb.origin):
            return False
        if (ja.axis is None) != (jb.axis is None):
            return False
        if ja.axis is not None and not all(close(x, y) for x, y in zip(ja.axis, jb.axis)):
            return False
    for aa, ab in zip(a.actuators, b.actuators):
        if (aa.name, aa.tube_link, aa.tube_parent, aa.rod_link, aa.rod_parent,
                aa.redundant) != (ab.name, ab.tube_link, ab.tube_parent,
                                  ab.rod_link, ab.rod_parent, ab.redundant):
            return False
        if not all(close(x, y) for x, y in zip(aa.bounds, ab.bounds)):
            return False
    return True


# ---------------------------------------------------------------------------
# compiled model

@dataclass
class CompiledLink:
    id: int
    name: str
    distance: int          # breadth-first hops from the base
    is_strut: bool
    visuals: list          # [(Transform offset, GeometrySpec)]


@dataclass
class CompiledJoint:
    id: int
    name: str
    parent: int
    child: int
    kind: str              # revolute | prismatic
    code: int
    axis: tuple            # unit vector
    origin: Transform      # parent-frame pose of the joint (rebased if merged)
    tail: Transform        # constant suffix mapping joint frame -> child frame
    role: str              # tree | closure | aux | mount


@dataclass
class CompiledActuator:
    id: int
    name: str
    tube_link: int
    rod_link: int
    tube_parent: int
    rod_parent: int
    tube_mount: int        # joint id
    rod_mount: int         # joint id
    bounds: tuple
    group: int             # redundancy class index


@dataclass
class Robot:
    description: RobotDescription
    name: str
    links: list
    joints: list
    actuators: list
    base: int
    base_pose: Transform
    J: list
    At: list
    Ar: list
    Rd: list

    @property
    def link_count(self):
        return len(self.links)

    @property
    def structural_link_count(self):
        return sum(1 for l in self.links if not l.is_strut)

    @property
    def joint_count(self):
        return len(self.joints)

    @property
    def actuator_count(self):
        return len(self.actuators)

    def joint_between(self, parent, child):
        return self._edge_map.get((parent, child))

    def redundancy_classes(self):
        return _classes_from_rd(self.Rd)

    def finish(self):
        self._edge_map = {(j.parent, j.child): j for j in self.joints}
        return self


def _classes_from_rd(rd):
    n = len(rd)
    seen = [False] * n
    classes = []
    for i in range(n):
        if seen[i]:
            continue
        members = [j for j in range(n) if rd[i][j]]
        for m in members:
            seen[m] = True
        classes.append(sorted(members))
    return sorted(classes, key=lambda c: c[0])


class _Dsu:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def _transforms_close(a, b, tol=1e-9):
    dr = max(abs(a.rotation[i][j] - b.rotation[i][j]) for i in range(3) for j in range(3))
    dt = max(abs(a.translation[i] - b.translation[i]) for i in range(3))
    return dr <= tol and dt <= tol


def compile_robot(desc):
    """Compile a parsed description into the matrix-form Robot."""
    link_by_name = {l.name: l for l in desc.links}
    decl_index = {l.name: i for i, l in enumerate(desc.links)}
    struts = {}
    for a in desc.actuators:
        struts[a.tube_link] = a.name
        struts[a.rod_link] = a.name

    # ---- rigid aggregates over fixed joints -------------------------------
    fixed_joints = [j for j in desc.joints if j.kind == "fixed"]
    for j in fixed_joints:
        for endpoint in (j.parent, j.child):
            if endpoint in struts:
                _fail("fixed joint %r touches actuator link %r" % (j.name, endpoint))
    dsu_fixed = _Dsu([l.name for l in desc.links])
    f_parent = {}
    deferred = []
    for j in fixed_joints:
        if dsu_fixed.find(j.parent) == dsu_fixed.find(j.child):
            deferred.append(j)
            continue
        if j.child in f_parent:
            _fail("link %r is fixed-mounted from two parents" % j.child)
        f_parent[j.child] = j
        dsu_fixed.union(j.parent, j.child)

    # offsets of every member relative to its aggregate root frame
    offset = {}

    def member_offset(name):
        if name in offset:
            return offset[name]
        if name not in f_parent:
            out = Transform.identity()
        else:
            j = f_parent[name]
            out = member_offset(j.parent).compose(j.origin.to_transform()) \
                .compose(link_by_name[name].transformation.to_transform())
        offset[name] = out
        return out

    for l in desc.links:
        member_offset(l.name)
    for j in deferred:
        implied = member_offset(j.parent).compose(j.origin.to_transform()) \
            .compose(link_by_name[j.child].transformation.to_transform())
        if not _transforms_close(implied, member_offset(j.child)):
            _fail("fixed joint %r closes a geometrically inconsistent cycle" % j.name)

    def agg_root(name):
        # aggregate root = the member with no fixed parent in its component
        cursor = name
        while cursor in f_parent:
            cursor = f_parent[cursor].parent
        return cursor

    root_of = {l.name: agg_root(l.name) for l in desc.links}

    # ---- classify structural joints: tree / closure / aux -----------------
    structural = []
    mounts_by_child = {}
    for j in desc.joints:
        if j.kind == "fixed":
            continue
        if j.parent in struts:
            _fail("joint %r hangs a child off actuator link %r" % (j.name, j.parent))
        if j.child in struts:
            mounts_by_child.setdefault(j.child, []).append(j)
            continue
        structural.append(j)

    roots = sorted(set(root_of[l.name] for l in desc.links if l.name not in struts),
                   key=lambda n: decl_index[n])
    dsu_tree = _Dsu(roots)
    tree_parent = {}
    role = {}
    seen_pairs = {}
    tree_children = {r: [] for r in roots}
    for j in structural:
        p, c = root_of[j.parent], root_of[j.child]
        if p == c:
            _fail("joint %r connects two fixed-merged links" % j.name)
        if (p, c) in seen_pairs:
            _fail("joints %r and %r duplicate the edge %r->%r"
                  % (seen_pairs[(p, c)], j.name, p, c))
        if dsu_tree.find(p) == dsu_tree.find(c):
            role[j.name] = "aux" if (c, p) in seen_pairs else "closure"
        else:
            if c in tree_parent:
                _fail("link %r has two tree parent joints" % c)
            tree_parent[c] = j
            tree_children[p].append(c)
            dsu_tree.union(p, c)
            role[j.name] = "tree"
        seen_pairs[(p, c)] = j.name

    bases = [r for r in roots if r not in tree_parent]
    if len(bases) != 1:
        _fail("could not identify a unique base link (candidates: %s)"
              % ", ".join(bases) if bases else "none")
    base_root = bases[0]

    distance = {base_root: 0}
    frontier = [base_root]
    while frontier:
        nxt = []
        for r in frontier:
            for c in tree_children[r]:
                if c not in distance:
                    distance[c] = distance[r] + 1
                    nxt.append(c)
        frontier = nxt
    if len(distance) != len(roots):
        unreachable = sorted(set(roots) - set(distance))
        _fail("links not connected to the base: %s" % ", ".join(unreachable))

    # ---- mount joints ------------------------------------------------------
    mount_of = {}
    for a in desc.actuators:
        for strut, declared_parent, side in ((a.tube_link, a.tube_parent, "tube"),
                                             (a.rod_link, a.rod_parent, "rod")):
            inbound = mounts_by_child.get(strut, [])
            if len(inbound) != 1:
                _fail("actuator %r: link %r needs exactly one mount joint, found %d"
                      % (a.name, strut, len(inbound)))
            j = inbound[0]
            if j.kind != "revolute":
                _fail("actuator %r: %s mount %r must be revolute" % (a.name, side, j.name))
            if root_of[j.parent] != root_of[declared_parent]:
                _fail("actuator %r: %s mount %r is on link %r, expected %r"
                      % (a.name, side, j.name, j.parent, declared_parent))
            mount_of[strut] = j

    for strut in struts:
        if strut not in mount_of:
            _fail("actuator link %r has no mount joint" % strut)

    # ---- ID assignment -----------------------------------------------------
    ordered_roots = sorted(roots, key=lambda r: (distance[r], decl_index[r]))
    link_ids = {}
    links = []
    for r in ordered_roots:
        link_ids[r] = len(links)
        links.append(CompiledLink(len(links), r, distance[r], False, []))
    for ai, a in enumerate(desc.actuators):
        for strut in (a.tube_link, a.rod_link):
            parent_root = root_of[mount_of[strut].parent]
            link_ids[strut] = len(links)
            links.append(CompiledLink(len(links), strut, distance[parent_root] + 1, True, []))

    # visuals land on the aggregate root, offset through the eliminated welds
    for l in desc.links:
        target = link_ids[root_of[l.name]] if l.name not in struts else link_ids[l.name]
        vis = l.visual
        links[target].visuals.append(
            (offset[l.name].compose(vis.offset.to_transform()), vis.geometry))

    # ---- compiled joints ---------------------------------------------------
    joints = []

    def compiled(j, jrole):
        porigin = offset[j.parent].compose(j.origin.to_transform())
        tail = link_by_name[j.child].transformation.to_transform() \
            .compose(offset[j.child].inverse())
        axis = j.axis
        n = vec_norm(axis)
        axis = (axis[0] / n, axis[1] / n, axis[2] / n)
        return CompiledJoint(
            id=len(joints), name=j.name,
            parent=link_ids[root_of[j.parent]] if j.parent not in struts else link_ids[j.parent],
            child=link_ids[root_of[j.child]] if j.child not in struts else link_ids[j.child],
            kind=j.kind, code=_KIND_TO_CODE[j.kind], axis=axis,
            origin=porigin, tail=tail, role=jrole)

    for j in desc.joints:
        if j.kind == "fixed":
            continue
        if j.child in struts:
            joints.append(compiled(j, "mount"))
        else:
            joints.append(compiled(j, role[j.name]))

    # ---- matrices ----------------------------------------------------------
    n_l = len(links)
    n_a = len(desc.actuators)
    J = [[JOINT_NONE] * n_l for _ in range(n_l)]
    for j in joints:
        J[j.parent][j.child] = j.code
    At = [[0] * n_l for _ in range(n_a)]
    Ar = [[0] * n_l for _ in range(n_a)]

    dsu_red = _Dsu([a.name for a in desc.actuators])
    for a in desc.actuators:
        for peer in a.redundant:
            dsu_red.union(a.name, peer)
    class_roots = []
    group_of = {}
    for a in desc.actuators:
        r = dsu_red.find(a.name)
        if r not in class_roots:
            class_roots.append(r)
        group_of[a.name] = class_roots.index(r)

    mount_joint_id = {j.name: j.id for j in joints}
    actuators = []
    for ai, a in enumerate(desc.actuators):
        tube_parent = link_ids[root_of[a.tube_parent]]
        rod_parent = link_ids[root_of[a.rod_parent]]
        At[ai][tube_parent] = 1
        Ar[ai][rod_parent] = 1
        actuators.append(CompiledActuator(
            id=ai, name=a.name,
            tube_link=link_ids[a.tube_link], rod_link=link_ids[a.rod_link],
            tube_parent=tube_parent, rod_parent=rod_parent,
            tube_mount=mount_joint_id[mount_of[a.tube_link].name],
            rod_mount=mount_joint_id[mount_of[a.rod_link].name],
            bounds=a.bounds, group=group_of[a.name]))

    Rd = [[0] * n_a for _ in range(n_a)]
    for i in range(n_a):
        for j in range(n_a):
            Rd[i][j] = 1 if actuators[i].group == actuators[j].group else 0

    base_pose = link_by_name[base_root].transformation.to_transform()
    robot = Robot(description=desc, name=desc.name, links=links, joints=joints,
                  actuators=actuators, base=link_ids[base_root], base_pose=base_pose,
                  J=J, At=At, Ar=Ar, Rd=Rd)
    return robot.finish()


# ---------------------------------------------------------------------------
# validation report

@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    message: str


@dataclass
class ValidationReport:
    findings: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.findings

    def add(self, code, message, severity="ERROR"):
        self.findings.append(Finding(severity, code, message))


def validate(robot):
    """Structural sanity report on a compiled Robot; empty report = valid."""
    report = ValidationReport()
    for j in robot.joints:
        if j.kind not in ("revolute", "prismatic"):
            report.add("joint-type", "joint %r has unsupported kind %r" % (j.name, j.kind))
        if abs(vec_norm(j.axis) - 1.0) > 1e-9:
            report.add("axis-norm", "joint %r axis is not unit length" % j.name)
    for a in robot.actuators:
        lo, hi = a.bounds
        if not lo < hi:
            report.add("bounds-order", "actuator %r bounds inverted (%g >= %g)" % (a.name, lo, hi))
    n = len(robot.Rd)
    for i in range(n):
        if robot.Rd[i][i] != 1:
            report.add("rd-diagonal", "redundancy diagonal entry %d is not 1" % i)
        for j in range(i + 1, n):
            if robot.Rd[i][j] != robot.Rd[j][i]:
                report.add("rd-symmetry", "redundancy not symmetric at (%d, %d)" % (i, j))
    # transitivity: Rd must already be an equivalence relation
    for i in range(n):
        for j in range(n):
            if not robot.Rd[i][j]:
                continue
            for k in range(n):
                if robot.Rd[j][k] and not robot.Rd[i][k]:
                    report.add("rd-transitivity",
                               "redundancy classes not transitive at (%d, %d, %d)" % (i, j, k))
    return report
