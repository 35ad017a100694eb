"""Structured steps: the Plan / Action / Parameter contract for model output.

parse_step is total. Labeled sections are located anywhere in the text,
action names match case-insensitively with common synonyms, and
anything unparseable degrades to a Respond step carrying the raw text
verbatim so a turn never fails outright.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

MAX_QUESTIONS = 3
FALLBACK_PLAN = "(unparsed)"


class Action(str, Enum):
    CLARIFY = "Clarify"
    SEARCH = "Search"
    RESPOND = "Respond"
    APOLOGIZE = "Apologize"


@dataclass(frozen=True, slots=True)
class Question:
    text: str
    suggested_answers: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"text": self.text, "suggested_answers": list(self.suggested_answers)}


@dataclass(frozen=True, slots=True)
class StructuredStep:
    plan: str
    action: Action
    # Clarify -> tuple[Question], Search -> query string,
    # Respond -> response text, Apologize -> reason text.
    questions: tuple[Question, ...] = ()
    text: str = ""

    @property
    def parameter(self):
        return self.questions if self.action is Action.CLARIFY else self.text


_LABEL_RE = re.compile(r"\b(plan|action|parameter)\s*:", re.IGNORECASE)

# Checked in order; first match wins.
_ACTION_SYNONYMS: tuple[tuple[str, Action], ...] = (
    ("clarify", Action.CLARIFY),
    ("ask", Action.CLARIFY),
    ("question", Action.CLARIFY),
    ("search", Action.SEARCH),
    ("look up", Action.SEARCH),
    ("lookup", Action.SEARCH),
    ("respond", Action.RESPOND),
    ("response", Action.RESPOND),
    ("write", Action.RESPOND),
    ("answer", Action.RESPOND),
    ("apologize", Action.APOLOGIZE),
    ("apologise", Action.APOLOGIZE),
    ("sorry", Action.APOLOGIZE),
)


def _match_action(text: str) -> Action | None:
    lowered = text.lower()
    for needle, action in _ACTION_SYNONYMS:
        if re.search(rf"\b{re.escape(needle)}", lowered):
            return action
    return None


def parse_questions(text: str) -> tuple[Question, ...]:
    """One question per line; pipes separate suggested answers."""
    questions = []
    for line in text.splitlines():
        parts = [part.strip() for part in line.split("|")]
        if not parts[0]:
            continue
        questions.append(
            Question(text=parts[0], suggested_answers=tuple(p for p in parts[1:] if p))
        )
        if len(questions) == MAX_QUESTIONS:
            break
    return tuple(questions)


def _fallback(raw: str) -> StructuredStep:
    return StructuredStep(plan=FALLBACK_PLAN, action=Action.RESPOND, text=raw)


def parse_step(llm_output: str) -> StructuredStep:
    """Total parse of untrusted model output into a StructuredStep."""
    if not isinstance(llm_output, str):
        llm_output = str(llm_output)
    labels = list(_LABEL_RE.finditer(llm_output))
    if not labels:
        return _fallback(llm_output)

    sections: dict[str, str] = {}
    for i, match in enumerate(labels):
        name = match.group(1).lower()
        if name in sections:
            continue
        if name == "parameter":
            end = len(llm_output)  # parameter swallows the rest
        else:
            end = labels[i + 1].start() if i + 1 < len(labels) else len(llm_output)
        sections[name] = llm_output[match.end() : end].strip()

    if "action" not in sections:
        return _fallback(llm_output)
    action = _match_action(sections["action"])
    if action is None:
        return _fallback(llm_output)

    plan = sections.get("plan", "").strip() or "(unspecified)"
    parameter = sections.get("parameter", "")
    if action is Action.CLARIFY:
        return StructuredStep(plan=plan, action=action, questions=parse_questions(parameter))
    if action is Action.SEARCH:
        return StructuredStep(plan=plan, action=action, text=" ".join(parameter.split()))
    return StructuredStep(plan=plan, action=action, text=parameter)


def serialize_step(step: StructuredStep) -> str:
    """Labeled-format inverse of parse_step."""
    if step.action is Action.CLARIFY:
        parameter = "\n".join(
            " | ".join((q.text, *q.suggested_answers)) for q in step.questions
        )
    else:
        parameter = step.text
    return f"Plan: {step.plan}\nAction: {step.action.value}\nParameter: {parameter}"


_FENCE_RE = re.compile(r"^```([^\n`]*)\s*$")


def extract_code_blocks(response_text: str) -> list[tuple[str, str]]:
    """(code, language-hint) per fenced block, in order of appearance.

    An unterminated fence extends to the end of the text.
    """
    blocks: list[tuple[str, str]] = []
    lines = response_text.split("\n")
    i = 0
    while i < len(lines):
        match = _FENCE_RE.match(lines[i].strip())
        if match is None:
            i += 1
            continue
        hint = match.group(1).strip()
        body: list[str] = []
        i += 1
        while i < len(lines) and not lines[i].strip().startswith("```"):
            body.append(lines[i])
            i += 1
        i += 1  # skip the closing fence, or move past the end
        blocks.append(("\n".join(body), hint))
    return blocks


def strip_code_blocks(response_text: str, replacements: list[str]) -> str:
    """Replace each fenced block with the matching placeholder line."""
    out_lines: list[str] = []
    lines = response_text.split("\n")
    i = 0
    block = 0
    while i < len(lines):
        if _FENCE_RE.match(lines[i].strip()):
            i += 1
            while i < len(lines) and not lines[i].strip().startswith("```"):
                i += 1
            i += 1
            if block < len(replacements):
                out_lines.append(replacements[block])
            block += 1
            continue
        out_lines.append(lines[i])
        i += 1
    return "\n".join(out_lines).strip()
