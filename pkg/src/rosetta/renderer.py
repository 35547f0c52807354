"""Turn stored statement versions back into sentences and mind-maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import RenderError
from .metamodel import StatementPattern, compose
from .store import StatementVersion, Value


@dataclass(frozen=True)
class SlotSpan:
    thematic_label: str
    start: int
    end: int


@dataclass(frozen=True)
class RenderedStatement:
    text: str
    slot_spans: tuple[SlotSpan, ...]


@dataclass(frozen=True)
class MindMapNode:
    id: str
    label: str
    kind: str  # subject | object | predicate


@dataclass(frozen=True)
class MindMapEdge:
    source: str
    target: str
    label: str


@dataclass
class MindMap:
    nodes: list[MindMapNode] = field(default_factory=list)
    edges: list[MindMapEdge] = field(default_factory=list)


def display_text(value: Value, labels: Mapping[str, str]) -> str:
    if value.is_resource:
        known = labels.get(value.iri)
        if known:
            return known
        tail = value.iri.rsplit("#", 1)[-1].rstrip("/").rsplit("/", 1)[-1]
        return tail or value.iri
    return value.lexical


def _conforming_parts(
    version: StatementVersion, pattern: StatementPattern, labels: Mapping[str, str]
) -> dict[str, list[str]]:
    parts: dict[str, list[str]] = {}
    if version.subject.thematic_label != pattern.subject.thematic_label:
        raise RenderError(
            f"version subject {version.subject.thematic_label!r} does not match "
            f"pattern subject {pattern.subject.thematic_label!r}",
            statement=version.iri,
        )
    for instance in (version.subject, *version.object_positions):
        if not pattern.has_position(instance.thematic_label):
            raise RenderError(
                f"pattern {pattern.label!r} has no position {instance.thematic_label!r}",
                statement=version.iri,
            )
        parts[instance.thematic_label] = [display_text(v, labels) for v in instance.values]
    for pos in pattern.positions():
        if pos.required and not parts.get(pos.thematic_label):
            raise RenderError(
                f"required position {pos.thematic_label!r} is empty", statement=version.iri
            )
    return parts


def render(
    version: StatementVersion,
    pattern: StatementPattern,
    *,
    labels: Mapping[str, str] | None = None,
    negated: bool = False,
) -> RenderedStatement:
    parts = _conforming_parts(version, pattern, labels or {})
    text, spans = compose(pattern, parts, negated=negated)
    ordered = sorted(spans.items(), key=lambda item: item[1])
    return RenderedStatement(
        text=text,
        slot_spans=tuple(SlotSpan(label, start, end) for label, (start, end) in ordered),
    )


def render_mindmap(
    version: StatementVersion,
    pattern: StatementPattern,
    *,
    labels: Mapping[str, str] | None = None,
) -> MindMap:
    labels = labels or {}
    _conforming_parts(version, pattern, labels)  # raises on mismatch
    mindmap = MindMap()
    predicate_id = f"{version.iri}/predicate"
    mindmap.nodes.append(MindMapNode(predicate_id, pattern.verb_display, "predicate"))

    def value_node(value: Value, position_label: str, index: int, kind: str) -> str:
        if value.is_resource:
            node_id = value.iri
        else:
            node_id = f"{version.iri}/lit/{position_label.replace(' ', '_')}/{index}"
        mindmap.nodes.append(MindMapNode(node_id, display_text(value, labels), kind))
        return node_id

    for i, value in enumerate(version.subject.values, start=1):
        node_id = value_node(value, version.subject.thematic_label, i, "subject")
        mindmap.edges.append(
            MindMapEdge(node_id, predicate_id, version.subject.thematic_label)
        )
    for instance in version.object_positions:
        for i, value in enumerate(instance.values, start=1):
            node_id = value_node(value, instance.thematic_label, i, "object")
            mindmap.edges.append(MindMapEdge(predicate_id, node_id, instance.thematic_label))
    return mindmap


def merge_mindmaps(maps: Iterable[MindMap]) -> MindMap:
    """Union the maps, unifying nodes that share an id (resource IRIs)."""
    merged = MindMap()
    seen: set[str] = set()
    for m in maps:
        for node in m.nodes:
            if node.id not in seen:
                seen.add(node.id)
                merged.nodes.append(node)
        merged.edges.extend(m.edges)
    return merged


_DOT_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n"}


def _dot_quote(text: str) -> str:
    return '"' + "".join(_DOT_ESCAPES.get(c, c) for c in text) + '"'


def export_mindmap_dot(mindmap: MindMap) -> str:
    lines = ["digraph {"]
    for node in sorted(mindmap.nodes, key=lambda n: n.id):
        shape = "ellipse" if node.kind == "predicate" else "box"
        lines.append(f"    {_dot_quote(node.id)} [label={_dot_quote(node.label)}, shape={shape}];")
    for edge in sorted(mindmap.edges, key=lambda e: (e.source, e.target, e.label)):
        lines.append(
            f"    {_dot_quote(edge.source)} -> {_dot_quote(edge.target)}"
            f" [label={_dot_quote(edge.label)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
