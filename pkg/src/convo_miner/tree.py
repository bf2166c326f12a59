"""Prefix-merged interaction tree over a selection of conversations.

Conversations are inserted as paths of per-turn code sets, starting from a
synthetic root. Turns merge into one node exactly when they sit under the
same parent and carry the same code set, so every root-to-leaf path replays
the per-turn code sets of the conversations tagged at that leaf. Edges carry
the mean information gain and mean response length of the merged turns;
leaves carry (student, task, score) tags.

The tree is immutable after build; pruning returns a new tree that keeps
node ids stable and records removed conversations in per-parent "elided"
counters so leaf accounting stays auditable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .model import Conversation
from .patterns import EmptySelectionError, Pattern, match_pattern

__all__ = [
    "TreeEdge",
    "TreeNode",
    "LeafTag",
    "InteractionTree",
    "HighlightSet",
    "build_tree",
    "prune_tree",
    "highlight_paths",
    "serialize_tree",
]


@dataclass(frozen=True)
class TreeEdge:
    mean_ig: float
    mean_rl: float
    member_count: int


@dataclass(frozen=True)
class LeafTag:
    student_alias: str
    task_id: str
    score: float

    @property
    def key(self) -> tuple[str, str]:
        return (self.student_alias, self.task_id)


@dataclass(frozen=True)
class TreeNode:
    id: str
    depth: int
    code_set: frozenset[str]
    conv_count: int
    children: tuple[tuple[TreeEdge, "TreeNode"], ...]
    leaves: tuple[LeafTag, ...]


@dataclass(frozen=True)
class InteractionTree:
    root: TreeNode
    total_conversations: int
    # node id -> conversations removed beneath it by pruning
    elided: dict[str, int] = field(default_factory=dict)
    # leaf key -> source conversation, for pattern matching on leaves
    conversations: dict[tuple[str, str], Conversation] = field(default_factory=dict)

    def iter_nodes(self) -> Iterable[TreeNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(child for _, child in reversed(node.children))

    @property
    def leaf_count(self) -> int:
        return sum(len(node.leaves) for node in self.iter_nodes())


class _MutableNode:
    __slots__ = ("code_set", "children", "leaves", "ig_values", "rl_values")

    def __init__(self, code_set: frozenset[str]):
        self.code_set = code_set
        self.children: dict[frozenset[str], _MutableNode] = {}
        self.leaves: list[LeafTag] = []
        self.ig_values: list[float] = []
        self.rl_values: list[float] = []


def build_tree(conversations: Sequence[Conversation]) -> InteractionTree:
    """Prefix-merge a non-empty selection; output is independent of input
    order (insertion and child ordering are both canonicalized)."""
    if not conversations:
        raise EmptySelectionError("cannot build a tree from an empty selection")
    ordered = sorted(conversations, key=lambda c: c.key)
    for conv in ordered:
        if not conv.turns:
            raise ValueError(f"conversation {conv.student}/{conv.task} has no turns")

    root = _MutableNode(frozenset())
    for conv in ordered:
        node = root
        for turn in conv.turns:
            child = node.children.get(turn.code_set)
            if child is None:
                child = _MutableNode(turn.code_set)
                node.children[turn.code_set] = child
            child.ig_values.append(turn.information_gain)
            child.rl_values.append(turn.response_length)
            node = child
        node.leaves.append(LeafTag(conv.student, conv.task, conv.score))

    counter = iter(range(10**9))

    def freeze(node: _MutableNode, depth: int) -> tuple[TreeNode, int]:
        node_id = f"n{next(counter)}"
        # Descending conversation count, then lexicographic code set.
        children_sorted = sorted(
            node.children.values(),
            key=lambda child: (-_subtree_count(child), tuple(sorted(child.code_set))),
        )
        frozen_children = []
        total = len(node.leaves)
        for child in children_sorted:
            frozen_child, count = freeze(child, depth + 1)
            edge = TreeEdge(
                mean_ig=sum(child.ig_values) / len(child.ig_values),
                mean_rl=sum(child.rl_values) / len(child.rl_values),
                member_count=len(child.ig_values),
            )
            frozen_children.append((edge, frozen_child))
            total += count
        frozen = TreeNode(
            id=node_id,
            depth=depth,
            code_set=node.code_set,
            conv_count=total,
            children=tuple(frozen_children),
            leaves=tuple(sorted(node.leaves, key=lambda tag: tag.key)),
        )
        return frozen, total

    def _subtree_count(node: _MutableNode) -> int:
        return len(node.leaves) + sum(_subtree_count(c) for c in node.children.values())

    frozen_root, total = freeze(root, 0)
    return InteractionTree(
        root=frozen_root,
        total_conversations=total,
        elided={},
        conversations={conv.key: conv for conv in ordered},
    )


def prune_tree(tree: InteractionTree, min_conv: int) -> InteractionTree:
    """Drop every subtree whose root covers fewer than ``min_conv``
    conversations, crediting each removal to the parent's elided counter.
    ``min_conv`` of 1 returns the tree unchanged."""
    if min_conv < 1:
        raise ValueError("min_conv must be >= 1")
    if min_conv == 1:
        return tree

    elided = dict(tree.elided)

    def prune(node: TreeNode) -> TreeNode:
        kept = []
        for edge, child in node.children:
            if child.conv_count < min_conv:
                elided[node.id] = elided.get(node.id, 0) + child.conv_count
            else:
                kept.append((edge, prune(child)))
        return TreeNode(
            id=node.id,
            depth=node.depth,
            code_set=node.code_set,
            conv_count=node.conv_count,
            children=tuple(kept),
            leaves=node.leaves,
        )

    new_root = prune(tree.root)
    conversations = {
        key: conv for key, conv in tree.conversations.items() if key in _leaf_keys(new_root)
    }
    return InteractionTree(
        root=new_root,
        total_conversations=tree.total_conversations,
        elided=elided,
        conversations=conversations,
    )


def _leaf_keys(node: TreeNode) -> set[tuple[str, str]]:
    keys = {tag.key for tag in node.leaves}
    for _, child in node.children:
        keys |= _leaf_keys(child)
    return keys


@dataclass(frozen=True)
class HighlightSet:
    """Nodes, edges and leaves on the root-to-leaf paths of matching leaves."""

    node_ids: frozenset[str]
    edge_ids: frozenset[str]
    leaf_keys: frozenset[tuple[str, str]]

    def to_dict(self) -> dict:
        return {
            "nodes": sorted(self.node_ids),
            "edges": sorted(self.edge_ids),
            "leaves": [list(key) for key in sorted(self.leaf_keys)],
        }


def edge_id(parent_id: str, child_id: str) -> str:
    return f"{parent_id}-{child_id}"


def highlight_paths(tree: InteractionTree, pattern: Pattern) -> HighlightSet:
    """Leaves whose conversations contain the pattern, plus the union of
    their root-to-leaf paths."""
    nodes: set[str] = set()
    edges: set[str] = set()
    leaves: set[tuple[str, str]] = set()

    def walk(node: TreeNode, path_nodes: tuple[str, ...], path_edges: tuple[str, ...]) -> None:
        for tag in node.leaves:
            conv = tree.conversations.get(tag.key)
            if conv is not None and match_pattern(pattern, conv):
                leaves.add(tag.key)
                nodes.update(path_nodes)
                edges.update(path_edges)
        for _, child in node.children:
            walk(
                child,
                path_nodes + (child.id,),
                path_edges + (edge_id(node.id, child.id),),
            )

    walk(tree.root, (tree.root.id,), ())
    return HighlightSet(frozenset(nodes), frozenset(edges), frozenset(leaves))


def serialize_tree(tree: InteractionTree, gain_scale: float = 1.0, base_length: float = 1.0) -> dict:
    """Layout-ready document: pie fractions per node, per-edge horizontal
    extent from the gain, and width/opacity weights from response length
    normalized against the tree's largest edge mean."""
    if gain_scale <= 0:
        raise ValueError("gain_scale must be positive")

    max_rl = 0.0
    for node in tree.iter_nodes():
        for edge, _ in node.children:
            max_rl = max(max_rl, edge.mean_rl)

    nodes_out = []
    edges_out = []

    def emit(node: TreeNode) -> None:
        codes = sorted(node.code_set)
        pie = {code: 1.0 / len(codes) for code in codes} if codes else {}
        nodes_out.append(
            {
                "id": node.id,
                "depth": node.depth,
                "codes": codes,
                "count": node.conv_count,
                "pie": pie,
                "leaves": [
                    {"student": tag.student_alias, "task": tag.task_id, "score": tag.score}
                    for tag in node.leaves
                ],
            }
        )
        for edge, child in node.children:
            weight = edge.mean_rl / max_rl if max_rl > 0 else 0.0
            edges_out.append(
                {
                    "from": node.id,
                    "to": child.id,
                    "mean_ig": edge.mean_ig,
                    "mean_rl": edge.mean_rl,
                    "x_extent": base_length + gain_scale * edge.mean_ig,
                    "width_weight": weight,
                    "opacity_weight": weight,
                    "member_count": edge.member_count,
                }
            )
            emit(child)

    emit(tree.root)
    elided = [{"parent": parent, "count": count} for parent, count in sorted(tree.elided.items())]
    return {"nodes": nodes_out, "edges": edges_out, "elided": elided}
