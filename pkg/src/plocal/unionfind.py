"""Union-find with path compression, for conjugation-graph components."""


class UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, k):
        if k not in self.parent:
            self.parent[k] = k
        return k

    def find(self, k):
        self.add(k)
        root = k
        while root != self.parent[root]:
            root = self.parent[root]
        while k != self.parent[k]:
            self.parent[k], k = root, self.parent[k]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
        return ra

    def components(self):
        comps = {}
        for k in self.parent:
            comps.setdefault(self.find(k), []).append(k)
        return {root: sorted(members) for root, members in comps.items()}
