"""Independent reference implementations used only by the tests."""
from collections import deque

import numpy as np


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def groups(self):
        out = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), set()).add(i)
        return sorted(out.values(), key=min)


def adjacency_pairs(width, height):
    """Brute force: every unordered pair at Manhattan distance one."""
    cells = [(x, y) for y in range(height) for x in range(width)]
    pairs = []
    for i, (ax, ay) in enumerate(cells):
        for j, (bx, by) in enumerate(cells):
            if i < j and abs(ax - bx) + abs(ay - by) == 1:
                pairs.append((i, j))
    return sorted(pairs)


def bfs(n, edges, src, cutoff=None):
    adj = {i: [] for i in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        if cutoff is not None and dist[u] >= cutoff:
            continue
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def exhaustive_bmu(weights, x):
    best, best_i = None, None
    for i, w in enumerate(weights):
        d = float(np.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(w, x))))
        if best is None or d < best:
            best, best_i = d, i
    return best_i, best
