"""Directed-graph node registry.

Nodes are registered with explicit parent links; the registry validates the
graph is acyclic and becomes immutable once frozen, after which it is safe to
share read-only across document workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from docsynth.errors import CycleDetected, DuplicateId, UnknownParent
from docsynth.probnet.distributions import DistributionSpec

__all__ = ["NodeRef", "Registry"]


@dataclass
class NodeRef:
    """One random variable: stable id, parent ids, distribution spec."""

    id: str
    spec: DistributionSpec
    parent_ids: tuple[str, ...] = ()

    def __post_init__(self):
        self.parent_ids = tuple(self.parent_ids)
        self.spec.validate(self.id)


class Registry:
    """Insertion-ordered node table over an acyclic parent graph."""

    def __init__(self):
        self._nodes: dict[str, NodeRef] = {}
        self._frozen = False

    def register(self, node: NodeRef) -> NodeRef:
        """Add one node; parents must already be registered."""
        if self._frozen:
            raise RuntimeError("registry is frozen")
        if node.id in self._nodes:
            raise DuplicateId(node.id)
        for pid in node.parent_ids:
            if pid not in self._nodes:
                raise UnknownParent(node.id, pid)
        self._nodes[node.id] = node
        return node

    @classmethod
    def from_nodes(cls, nodes) -> "Registry":
        """Build from an unordered batch, detecting cycles and bad links.

        Unknown parents raise :class:`UnknownParent` unless the parent id
        appears elsewhere in the batch; nodes left unplaceable after a Kahn
        pass form a cycle and raise :class:`CycleDetected`.
        """
        nodes = list(nodes)
        ids = {n.id for n in nodes}
        if len(ids) != len(nodes):
            seen = set()
            for n in nodes:
                if n.id in seen:
                    raise DuplicateId(n.id)
                seen.add(n.id)
        for n in nodes:
            for pid in n.parent_ids:
                if pid not in ids:
                    raise UnknownParent(n.id, pid)

        reg = cls()
        pending = {n.id: n for n in nodes}
        while pending:
            placeable = [
                n for n in pending.values()
                if all(pid in reg._nodes for pid in n.parent_ids)
            ]
            if not placeable:
                raise CycleDetected(pending.keys())
            for n in placeable:
                reg.register(n)
                del pending[n.id]
        reg.freeze()
        return reg

    def freeze(self) -> "Registry":
        self._frozen = True
        return self

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes

    def __getitem__(self, node_id: str) -> NodeRef:
        return self._nodes[node_id]

    def __iter__(self):
        return iter(self._nodes.values())

    def __len__(self) -> int:
        return len(self._nodes)

    def ids(self):
        return list(self._nodes.keys())
