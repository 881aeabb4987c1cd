"""Shortest-path search over the walkable lattice.

4-connected A* with a Manhattan heuristic (admissible, so paths are
shortest). Deterministic: heap ties break on insertion order.
"""

from __future__ import annotations

import heapq
from math import hypot

Cell = tuple[int, int]


def _l_path(walkable, start: Cell, goal: Cell) -> list[Cell] | None:
    """Axis-aligned two-leg path if fully walkable (always shortest)."""
    sx, sz = start
    gx, gz = goal
    dx = 1 if gx > sx else -1
    dz = 1 if gz > sz else -1
    for corner in ((gx, sz), (sx, gz)):
        path = [start]
        x, z = start
        ok = True
        while (x, z) != corner and ok:
            if x != corner[0]:
                x += dx
            else:
                z += dz
            if (x, z) not in walkable:
                ok = False
            path.append((x, z))
        while (x, z) != goal and ok:
            if x != gx:
                x += dx
            else:
                z += dz
            if (x, z) not in walkable:
                ok = False
            path.append((x, z))
        if ok:
            return path
    return None


def astar(walkable: frozenset[Cell] | set[Cell], start: Cell, goal: Cell) -> list[Cell] | None:
    """Cells from start to goal inclusive, or None when unreachable."""
    if start == goal:
        return [start]
    if start not in walkable or goal not in walkable:
        return None
    direct = _l_path(walkable, start, goal)
    if direct is not None:
        return direct
    gx, gz = goal
    counter = 0
    h0 = abs(start[0] - gx) + abs(start[1] - gz)
    # Ties on f broken toward smaller h: walks straight at the goal across
    # open floor instead of flooding the equal-f band.
    open_heap = [(h0, h0, 0, start)]
    g_score = {start: 0}
    came: dict[Cell, Cell] = {}
    while open_heap:
        _, _, _, current = heapq.heappop(open_heap)
        if current == goal:
            path = [current]
            while path[-1] != start:
                path.append(came[path[-1]])
            path.reverse()
            return path
        cg = g_score[current]
        cx, cz = current
        for nxt in ((cx + 1, cz), (cx - 1, cz), (cx, cz + 1), (cx, cz - 1)):
            if nxt not in walkable:
                continue
            tentative = cg + 1
            if tentative < g_score.get(nxt, 1 << 30):
                g_score[nxt] = tentative
                came[nxt] = current
                counter += 1
                h = abs(nxt[0] - gx) + abs(nxt[1] - gz)
                heapq.heappush(open_heap, (tentative + h, h, counter, nxt))
    return None


def bfs_path(walkable: frozenset[Cell] | set[Cell], start: Cell, goal: Cell) -> list[Cell] | None:
    """Independent breadth-first shortest path, used as a cross-check oracle."""
    from collections import deque

    if start == goal:
        return [start]
    if start not in walkable or goal not in walkable:
        return None
    came = {start: start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        cx, cz = current
        for nxt in ((cx + 1, cz), (cx - 1, cz), (cx, cz + 1), (cx, cz - 1)):
            if nxt in walkable and nxt not in came:
                came[nxt] = current
                if nxt == goal:
                    path = [nxt]
                    while path[-1] != start:
                        path.append(came[path[-1]])
                    path.reverse()
                    return path
                queue.append(nxt)
    return None


class Router:
    """Navigation planner that routes between rooms through doorway
    waypoints, solving each intra-room leg with the straight-line fast path
    and falling back to full A* when furniture interferes.

    Produced paths are valid and near-shortest; the raw `astar` remains the
    exact-shortest primitive."""

    def __init__(self, walkable: frozenset[Cell], layout):
        self.walkable = walkable
        self.layout = layout
        self.adjacency: dict[int, list[tuple[int, Cell]]] = {}
        for door in layout.doorways:
            center = door.cells[len(door.cells) // 2]
            if center not in walkable:
                center = next((c for c in door.cells if c in walkable), None)
                if center is None:
                    continue
            a, b = door.rooms
            self.adjacency.setdefault(a, []).append((b, center))
            self.adjacency.setdefault(b, []).append((a, center))

    def _leg(self, start: Cell, goal: Cell) -> list[Cell] | None:
        if start == goal:
            return [start]
        return _l_path(self.walkable, start, goal) or astar(self.walkable, start, goal)

    def _door_chain(self, room_a: int, room_b: int) -> list[Cell] | None:
        from collections import deque

        if room_a == room_b:
            return []
        came: dict[int, tuple[int, Cell]] = {room_a: (room_a, None)}
        queue = deque([room_a])
        while queue:
            room = queue.popleft()
            for nxt, door in self.adjacency.get(room, ()):
                if nxt not in came:
                    came[nxt] = (room, door)
                    if nxt == room_b:
                        chain = []
                        cur = room_b
                        while cur != room_a:
                            prev, d = came[cur]
                            chain.append(d)
                            cur = prev
                        chain.reverse()
                        return chain
                    queue.append(nxt)
        return None

    def path(self, start: Cell, goal: Cell) -> list[Cell] | None:
        room_a = self.layout.room_of(start)
        room_b = self.layout.room_of(goal)
        if room_a is None or room_b is None:
            return astar(self.walkable, start, goal)
        doors = self._door_chain(room_a, room_b)
        if doors is None:
            return None
        waypoints = [start] + doors + [goal]
        full: list[Cell] = [start]
        for a, b in zip(waypoints, waypoints[1:]):
            leg = self._leg(a, b)
            if leg is None:
                return astar(self.walkable, start, goal)
            full.extend(leg[1:])
        return full


def stand_candidates(
    walkable: frozenset[Cell],
    room_of,
    target: Cell,
    reach_cells: float,
    limit: int = 24,
) -> list[Cell]:
    """Walkable cells within reach of `target`, in the target's room, nearest
    first. Expands outward ring by ring and stops early once enough
    candidates are in hand, since the nearest stand cell is preferred."""
    room = room_of(target)
    radius = int(reach_cells)
    out: list[tuple[float, Cell]] = []
    tx, tz = target
    for ring in range(1, radius + 1):
        for dx in range(-ring, ring + 1):
            dzs = (-ring, ring) if abs(dx) != ring else range(-ring, ring + 1)
            for dz in dzs:
                dist = hypot(dx, dz)
                if dist > reach_cells:
                    continue
                cell = (tx + dx, tz + dz)
                if cell in walkable and room_of(cell) == room:
                    out.append((dist, cell))
        if len(out) >= limit:
            break
    out.sort()
    return [cell for _, cell in out[:limit]]
