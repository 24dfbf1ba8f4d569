"""Loop detection and per-actuator transmission analysis.

This module turns the compiled joint matrix into something the solvers can
walk without ever seeing a cycle:

* four-bar loops are found as size-4 strongly connected components and
  contracted into single-DoF *generalized* edges (code 4) from the loop's
  ground link to whichever members still matter outside the loop;
* locking an actuator rewrites a working copy of the matrix so that the
  actuator behaves as a rigid body (its driven edge becomes fixed, or its
  tube/rod pair is welded into the graph as a back edge);
* with every other redundancy group locked, the path between one actuator's
  mount parents collapses to one of four transmission patterns — prismatic
  (A), revolute (B), four-bar (C), or a nested pair of closures (D) — which
  is exactly the information the kinematics solvers need.

Each redundancy group shares a single extracted path object (an "ITEP":
independent topologically equivalent path).
"""

from dataclasses import dataclass

from .errors import CompletenessError, TopologyError, UnsupportedLoopError
from .mrdf import (
    JOINT_FIXED,
    JOINT_GENERALIZED,
    JOINT_NONE,
    JOINT_PRISMATIC,
    JOINT_REVOLUTE,
)


@dataclass(frozen=True)
class FourBar:
    """An ordered planar four-bar loop: ground, then the directed chain."""

    links: tuple           # (ground, b, c, d) link IDs following the chain
    joints: tuple          # joint IDs (ground->b, b->c, c->d, d->ground)
    aux_joint: object      # optional reverse closure entry (joint ID or None)

    @property
    def input_joint(self):
        """The designated input: the ground-to-crank joint."""
        return self.joints[0]


@dataclass(frozen=True)
class GenEdge:
    """One generalized edge in the contracted matrix."""

    src: int
    dst: int
    four_bar: int          # index into ContractedGraph.four_bars
    actuator: object       # owning actuator ID for member-to-member edges


@dataclass
class ContractedGraph:
    robot: object
    matrix: list           # copy of J with loops contracted
    four_bars: list
    gen_edges: dict        # (src, dst) -> GenEdge
    aux_edges: frozenset   # (parent, child) of reverse-entry joints

    def work(self):
        """Fresh mutable copy of the contracted matrix for lock passes."""
        return [row[:] for row in self.matrix]


@dataclass(frozen=True)
class DLoop:
    """Roles inside the 1-DoF local loop of a nested (Type D) drive."""

    ground: int            # anchor-side link, start of the linkage path
    via: int               # four-bar member the outer hinge hangs from
    far: int               # moving link both mounts of the strut chase
    far_joint: int         # the free revolute between via and far
    strut_actuator: int    # the locked partner whose tube/rod closes the loop
    moving_mount: int      # partner mount joint on the far link
    anchor_mount: int      # partner mount joint on the ground side
    links: int             # bodies in the loop after the tube/rod weld
    joints: int            # single-DoF joints around the loop


@dataclass(frozen=True)
class Itep:
    """Everything one redundancy group needs to be solved: the surviving
    path between the mount parents and the joints it drives."""

    kind: str              # "A" | "B" | "C" | "D"
    actuators: tuple       # ascending IDs of the group sharing this object
    path: tuple            # link IDs; Type D paths return to their start
    driven_joint: int      # direct joint (A/B) or four-bar input (C/D)
    four_bar: object       # four-bar index for C/D, else None
    loop: object           # DLoop for Type D, else None


# ---------------------------------------------------------------------------
# four-bar detection


def _strongly_connected(adj, n):
    """Iterative Tarjan; returns components as lists of node IDs."""
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    counter = 0
    components = []
    for root in range(n):
        if index[root] is not None:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        call = [(root, iter(adj[root]))]
        while call:
            node, edges = call[-1]
            descended = False
            for nxt in edges:
                if index[nxt] is None:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack[nxt] = True
                    call.append((nxt, iter(adj[nxt])))
                    descended = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
            if descended:
                continue
            call.pop()
            if call:
                up = call[-1][0]
                low[up] = min(low[up], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == node:
                        break
                components.append(component)
    return components


def _canonical_four_bar(robot, component):
    members = set(component)
    ground = min(component, key=lambda i: (robot.links[i].distance, i))
    chain = [ground]
    joints = []
    current = ground
    for _ in range(3):
        steps = []
        for nxt in sorted(members - set(chain)):
            joint = robot.joint_between(current, nxt)
            if joint is not None and joint.role != "aux":
                steps.append((nxt, joint))
        if len(steps) != 1:
            raise UnsupportedLoopError(
                "loop at link %r does not follow a single directed four-bar chain"
                % robot.links[ground].name)
        nxt, joint = steps[0]
        chain.append(nxt)
        joints.append(joint)
        current = nxt
    closing = robot.joint_between(chain[3], ground)
    if closing is None or closing.role == "aux":
        raise UnsupportedLoopError(
            "loop at link %r has no closing joint back to its ground"
            % robot.links[ground].name)
    joints.append(closing)
    for joint in joints:
        if joint.kind != "revolute":
            raise UnsupportedLoopError(
                "four-bar joint %r must be revolute, got %s" % (joint.name, joint.kind))
    reverse = robot.joint_between(ground, chain[3])
    aux = reverse.id if reverse is not None and reverse.role == "aux" else None
    return FourBar(links=tuple(chain), joints=tuple(j.id for j in joints), aux_joint=aux)


def find_four_bars(robot):
    """All four-bar loops of the robot in canonical (ground-first) order.

    Two-node components are reverse-entry artifacts and are dropped; any
    other loop size is out of scope.
    """
    n = len(robot.links)
    adj = [[c for c in range(n) if robot.J[r][c] != JOINT_NONE] for r in range(n)]
    bars = []
    for component in _strongly_connected(adj, n):
        if len(component) <= 2:
            continue
        if len(component) != 4:
            raise UnsupportedLoopError(
                "loop of %d links is outside the supported four-bar scope (%s)"
                % (len(component),
                   ", ".join(robot.links[i].name for i in sorted(component))))
        bars.append(_canonical_four_bar(robot, component))
    bars.sort(key=lambda fb: fb.links[0])
    return bars


# ---------------------------------------------------------------------------
# contraction


def assert_acyclic(matrix, excluded=frozenset()):
    """Kahn's algorithm over the nonzero cells minus the excluded edges."""
    n = len(matrix)
    indegree = [0] * n
    adj = [[] for _ in range(n)]
    for u in range(n):
        for v in range(n):
            if matrix[u][v] != JOINT_NONE and (u, v) not in excluded:
                adj[u].append(v)
                indegree[v] += 1
    queue = [i for i in range(n) if indegree[i] == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for v in adj[u]:
            indegree[v] -= 1
            if indegree[v] == 0:
                queue.append(v)
    if seen != n:
        raise TopologyError("joint graph stays cyclic after contraction")


def contract_four_bars(robot):
    """Replace each four-bar's interior with generalized edges.

    Rule (i): drop every joint among the four members.  Rule (ii): add a
    generalized edge ground->x for each member that still carries anything
    external (children outside the loop, or actuator mounts).  Rule (iii):
    an actuator spanning two non-ground members becomes an owned
    generalized edge between them.
    """
    bars = find_four_bars(robot)
    matrix = [row[:] for row in robot.J]
    aux_edges = frozenset(
        (j.parent, j.child) for j in robot.joints if j.role == "aux")

    consumed = set()
    for fb in bars:
        consumed.update(fb.joints)
        if fb.aux_joint is not None:
            consumed.add(fb.aux_joint)
    for joint in robot.joints:
        if joint.role == "closure" and joint.id not in consumed:
            raise TopologyError(
                "closure joint %r does not belong to any four-bar loop" % joint.name)

    n = len(matrix)
    gen_edges = {}
    for idx, fb in enumerate(bars):
        for u in fb.links:
            for v in fb.links:
                matrix[u][v] = JOINT_NONE
        ground = fb.links[0]
        for x in fb.links[1:]:
            if any(matrix[x][y] != JOINT_NONE for y in range(n)):
                matrix[ground][x] = JOINT_GENERALIZED
                gen_edges[(ground, x)] = GenEdge(ground, x, idx, None)
    for act in robot.actuators:
        for idx, fb in enumerate(bars):
            inner = set(fb.links[1:])
            if act.tube_parent in inner and act.rod_parent in inner:
                key = (act.tube_parent, act.rod_parent)
                if key not in gen_edges:
                    matrix[key[0]][key[1]] = JOINT_GENERALIZED
                    gen_edges[key] = GenEdge(key[0], key[1], idx, act.id)
                break

    excluded = set(aux_edges)
    excluded.update(key for key, edge in gen_edges.items() if edge.actuator is not None)
    assert_acyclic(matrix, frozenset(excluded))
    return ContractedGraph(robot=robot, matrix=matrix, four_bars=bars,
                           gen_edges=gen_edges, aux_edges=aux_edges)


# ---------------------------------------------------------------------------
# path search and locking


def topo_path(matrix, src, dst, blocked=frozenset()):
    """Deterministic breadth-first directed path, endpoints included.

    Neighbours are visited in ascending link-ID order, so ties always
    resolve the same way.  Returns [] when dst is unreachable.
    """
    if src == dst:
        return [src]
    n = len(matrix)
    parent = {src: None}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for v in range(n):
                if matrix[u][v] == JOINT_NONE or (u, v) in blocked or v in parent:
                    continue
                parent[v] = u
                if v == dst:
                    out = [v]
                    while out[-1] != src:
                        out.append(parent[out[-1]])
                    out.reverse()
                    return out
                nxt.append(v)
        frontier = nxt
    return []


def _blocked_for(graph, work, group):
    """Edges a path may not cross while working on behalf of `group`:
    reverse entries, plus live owned generalized edges of other groups."""
    blocked = set(graph.aux_edges)
    for key, edge in graph.gen_edges.items():
        if edge.actuator is None:
            continue
        if work[key[0]][key[1]] != JOINT_GENERALIZED:
            continue
        if graph.robot.actuators[edge.actuator].group != group:
            blocked.add(key)
    return frozenset(blocked)


def _quotient(work, path):
    """Merge links chained by fixed edges along the path.

    Returns (groups, edges): groups are lists of link IDs acting as one
    rigid body, edges are (u, v, code) for each surviving free joint.
    """
    groups = [[path[0]]]
    edges = []
    for a, b in zip(path, path[1:]):
        code = work[a][b]
        if code == JOINT_FIXED:
            groups[-1].append(b)
        else:
            edges.append((a, b, code))
            groups.append([b])
    return groups, edges


def lock_actuator(graph, work, act):
    """Rewrite `work` so that actuator `act` is rigid.

    A span that survives as one free joint is welded directly.  A span
    surviving as a generalized-plus-revolute pair cannot be welded edge by
    edge; instead the tube/rod pair itself is fixed into the graph as a
    back edge, forming the 1-DoF local loop the Type-D solver relies on.
    """
    p_t, p_r = act.tube_parent, act.rod_parent
    if p_t == p_r:
        raise TopologyError(
            "actuator %r has both mounts on the same link" % act.name)
    blocked = _blocked_for(graph, work, act.group)
    path = topo_path(work, p_t, p_r, blocked)
    if not path:
        path = topo_path(work, p_r, p_t, blocked)
    if not path:
        raise TopologyError(
            "mount parents of %r are not connected by a directed span" % act.name)
    _groups, edges = _quotient(work, path)
    if len(edges) == 0:
        return  # span already rigid under earlier locks; nothing to add
    if len(edges) == 1:
        u, v, _code = edges[0]
        work[u][v] = JOINT_FIXED
        return
    if len(edges) == 2:
        if sorted(e[2] for e in edges) != [JOINT_REVOLUTE, JOINT_GENERALIZED]:
            raise CompletenessError(
                "locked span of %r is not a generalized-plus-revolute pair" % act.name)
        start = path[0]
        if start == p_t:
            start_strut, far_strut = act.tube_link, act.rod_link
        else:
            start_strut, far_strut = act.rod_link, act.tube_link
        work[far_strut][start_strut] = JOINT_FIXED
        work[start_strut][start] = JOINT_REVOLUTE
        work[start][start_strut] = JOINT_NONE
        return
    raise UnsupportedLoopError(
        "span of %r crosses %d free joints; only direct and "
        "generalized-plus-revolute spans can be locked" % (act.name, len(edges)))


# ---------------------------------------------------------------------------
# extraction


def _direct_itep(graph, act, group, path, edge):
    u, v, code = edge
    robot = graph.robot
    if code == JOINT_PRISMATIC:
        return Itep("A", group, tuple(path),
                    driven_joint=robot.joint_between(u, v).id,
                    four_bar=None, loop=None)
    if code == JOINT_REVOLUTE:
        return Itep("B", group, tuple(path),
                    driven_joint=robot.joint_between(u, v).id,
                    four_bar=None, loop=None)
    if code == JOINT_GENERALIZED:
        gen = graph.gen_edges[(u, v)]
        fb = graph.four_bars[gen.four_bar]
        return Itep("C", group, tuple(path),
                    driven_joint=fb.input_joint,
                    four_bar=gen.four_bar, loop=None)
    raise CompletenessError(
        "span of %r rests on joint code %d, which no pattern covers"
        % (act.name, code))


def _nested_itep(graph, work, act, group, path_out, path_back):
    robot = graph.robot
    linkage = None
    strut_side = None
    for path in (path_out, path_back):
        groups, edges = _quotient(work, path)
        codes = sorted(e[2] for e in edges)
        if len(edges) == 2 and codes == [JOINT_REVOLUTE, JOINT_GENERALIZED]:
            linkage = (path, groups, edges)
        elif len(edges) == 2 and codes == [JOINT_REVOLUTE, JOINT_REVOLUTE]:
            strut_side = (path, groups, edges)
    if linkage is None or strut_side is None:
        raise CompletenessError(
            "locked loop around %r matches no supported nested pattern" % act.name)

    lpath, lgroups, ledges = linkage
    _spath, sgroups, sedges = strut_side
    if len(sgroups) != 3:
        raise CompletenessError(
            "back path of %r does not pass through a single welded strut" % act.name)
    strut_links = frozenset(sgroups[1])
    by_strut = {frozenset((a.tube_link, a.rod_link)): a for a in robot.actuators}
    partner = by_strut.get(strut_links)
    if partner is None:
        raise CompletenessError(
            "back path of %r crosses links that are not one actuator's tube/rod"
            % act.name)

    ground = lpath[0]
    far = lpath[-1]
    if ledges[0][2] == JOINT_GENERALIZED:
        gen_edge, hinge_edge = ledges
        via = hinge_edge[0]
    else:
        hinge_edge, gen_edge = ledges
        via = hinge_edge[1]
    gen = graph.gen_edges[(gen_edge[0], gen_edge[1])]
    fb = graph.four_bars[gen.four_bar]
    far_joint = robot.joint_between(hinge_edge[0], hinge_edge[1]).id

    if {partner.tube_parent, partner.rod_parent} != {ground, far}:
        raise CompletenessError(
            "welded strut of %r does not span the loop between links %d and %d"
            % (act.name, ground, far))
    if partner.rod_parent == far:
        moving_mount, anchor_mount = partner.rod_mount, partner.tube_mount
    else:
        moving_mount, anchor_mount = partner.tube_mount, partner.rod_mount

    loop_links = len(lgroups) + 1        # linkage bodies plus the welded strut
    loop_joints = len(ledges) + len(sedges)
    if loop_links != 4 or 3 * (loop_links - 1) - 2 * loop_joints != 1:
        raise UnsupportedLoopError(
            "local loop around %r is not a single-DoF four-link loop" % act.name)

    merged = tuple(path_out) + tuple(path_back[1:])
    loop = DLoop(ground=ground, via=via, far=far, far_joint=far_joint,
                 strut_actuator=partner.id, moving_mount=moving_mount,
                 anchor_mount=anchor_mount, links=loop_links, joints=loop_joints)
    return Itep("D", group, merged, driven_joint=fb.input_joint,
                four_bar=gen.four_bar, loop=loop)


def _classify(graph, work, act, group):
    p_t, p_r = act.tube_parent, act.rod_parent
    if p_t == p_r:
        raise TopologyError(
            "actuator %r has both mounts on the same link" % act.name)
    blocked = _blocked_for(graph, work, act.group)
    path_out = topo_path(work, p_t, p_r, blocked)
    path_back = topo_path(work, p_r, p_t, blocked)
    if not path_out and not path_back:
        raise TopologyError(
            "mount parents of %r are topologically disconnected" % act.name)
    if path_out and path_back:
        # a span surviving as one free joint is a direct drive even when an
        # indirectly locked neighbour has closed a loop around it
        for path in (path_out, path_back):
            _groups, edges = _quotient(work, path)
            if len(edges) == 1:
                return _direct_itep(graph, act, group, path, edges[0])
        return _nested_itep(graph, work, act, group, path_out, path_back)
    path = path_out or path_back
    _groups, edges = _quotient(work, path)
    if len(edges) == 0:
        raise TopologyError(
            "span of %r is welded rigid once the other groups are locked" % act.name)
    if len(edges) == 1:
        return _direct_itep(graph, act, group, path, edges[0])
    raise CompletenessError(
        "span of %r keeps %d free joints but closes no loop; "
        "no supported transmission pattern applies" % (act.name, len(edges)))


def extract_iteps(robot, contracted=None):
    """One shared Itep per redundancy group, keyed by actuator ID.

    For each group in ascending order: take a fresh working copy of the
    contracted matrix, lock every actuator outside the group (ascending),
    then classify the surviving span of the group's representative.
    """
    graph = contracted if contracted is not None else contract_four_bars(robot)
    result = {}
    for group in robot.redundancy_classes():
        rep = robot.actuators[group[0]]
        work = graph.work()
        for act in robot.actuators:
            if act.group != rep.group:
                lock_actuator(graph, work, act)
        itep = _classify(graph, work, rep, tuple(group))
        for idx in group:
            result[idx] = itep
    return result


def itep_histogram(iteps):
    """Per-actuator counts of each transmission type."""
    histogram = {"A": 0, "B": 0, "C": 0, "D": 0}
    for idx in iteps:
        histogram[iteps[idx].kind] += 1
    return histogram


# ---------------------------------------------------------------------------
# exports


_DOT_LABEL = {
    JOINT_REVOLUTE: "R",
    JOINT_PRISMATIC: "P",
    JOINT_FIXED: "F",
    JOINT_GENERALIZED: "G",
}


def to_json(robot, graph, iteps):
    """Deterministic plain-dict dump of four-bars and extracted paths."""
    bars = []
    for fb in graph.four_bars:
        bars.append({
            "links": list(fb.links),
            "link_names": [robot.links[i].name for i in fb.links],
            "joints": [robot.joints[j].name for j in fb.joints],
            "input_joint": robot.joints[fb.input_joint].name,
        })
    entries = []
    emitted = set()
    for idx in sorted(iteps):
        itep = iteps[idx]
        if id(itep) in emitted:
            continue
        emitted.add(id(itep))
        entries.append({
            "actuator": robot.actuators[itep.actuators[0]].name,
            "group": [robot.actuators[i].name for i in itep.actuators],
            "type": itep.kind,
            "path": list(itep.path),
            "path_names": [robot.links[i].name for i in itep.path],
            "driven_joint": robot.joints[itep.driven_joint].name,
        })
    return {"robot": robot.name, "four_bars": bars, "iteps": entries}


def to_dot(robot, graph):
    """DOT digraph of the contracted topology plus actuator strokes."""
    lines = ["digraph topology {", "  rankdir=LR;"]
    for link in robot.links:
        lines.append('  %d [label="%s"];' % (link.id, link.name))
    n = len(graph.matrix)
    for u in range(n):
        for v in range(n):
            code = graph.matrix[u][v]
            if code == JOINT_NONE:
                continue
            attrs = 'label="%s"' % _DOT_LABEL[code]
            if (u, v) in graph.aux_edges:
                attrs += ", style=dotted"
            lines.append('  %d -> %d [%s];' % (u, v, attrs))
    for act in robot.actuators:
        lines.append('  %d -> %d [label="ACT", style=dashed];'
                     % (act.tube_link, act.rod_link))
    lines.append("}")
    return "\n".join(lines) + "\n"
