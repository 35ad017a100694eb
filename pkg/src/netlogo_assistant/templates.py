"""Prompt templates: preamble, few-shot demonstrations, bound slots.

Templates are data files so their wording can be edited without a
rebuild. Rendering is deterministic: preamble (with {{slot}}
placeholders substituted), then the few-shot demonstrations, then the
live request section listing bound slots in declared order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

TEMPLATE_IDS = ("planning", "clarify", "respond", "fix")


class TemplateError(Exception):
    pass


class UnboundSlot(TemplateError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"required slot not bound: {name}")


@dataclass(frozen=True, slots=True)
class Slot:
    name: str
    required: bool = False


@dataclass(frozen=True, slots=True)
class FewShot:
    input: str
    output: str


@dataclass(frozen=True, slots=True)
class PromptTemplate:
    template_id: str
    preamble: str
    few_shot: tuple[FewShot, ...]
    slots: tuple[Slot, ...]

    def slot_names(self) -> tuple[str, ...]:
        return tuple(slot.name for slot in self.slots)


def load_template(path: str | Path) -> PromptTemplate:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return PromptTemplate(
        template_id=obj["template_id"],
        preamble=obj["preamble"],
        few_shot=tuple(FewShot(ex["input"], ex["output"]) for ex in obj.get("few_shot", [])),
        slots=tuple(Slot(s["name"], bool(s.get("required"))) for s in obj.get("slots", [])),
    )


def bundled_template_dir() -> Path:
    return Path(str(resources.files("netlogo_assistant").joinpath("data/templates")))


def load_template_set(directory: str | Path | None = None) -> dict[str, PromptTemplate]:
    base = Path(directory) if directory is not None else bundled_template_dir()
    templates = {}
    for template_id in TEMPLATE_IDS:
        templates[template_id] = load_template(base / f"{template_id}.json")
    return templates


def render(template: PromptTemplate, bindings: dict[str, str]) -> str:
    """Deterministic prompt text; raises UnboundSlot for missing
    required slots."""
    for slot in template.slots:
        if slot.required and not bindings.get(slot.name):
            raise UnboundSlot(slot.name)

    preamble = template.preamble
    for slot in template.slots:
        value = bindings.get(slot.name)
        if value is not None:
            preamble = preamble.replace("{{" + slot.name + "}}", value)

    parts = [preamble.rstrip()]
    for i, example in enumerate(template.few_shot, start=1):
        parts.append(f"### Demonstration {i}\n{example.input}\n---\n{example.output}")
    live_lines = ["### Request"]
    for slot in template.slots:
        value = bindings.get(slot.name)
        if value:
            live_lines.append(f"{slot.name}: {value}")
    parts.append("\n".join(live_lines))
    return "\n\n".join(parts)
