"""Action-Observation-Thought orchestrator.

The loop renders a scratchpad prompt (task, tool descriptions, prior
steps, long-term memory entries), calls the completion backend at
temperature 0, parses the output against a strict label grammar, executes
the requested tool, and appends the observation. Malformed output is fed
back as a corrective observation and consumes one step, so the max_steps
bound always holds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .backends import CompletionBackend, CompletionRequest
from .errors import ProtocolError, ValidationError
from .memory import MemoryStore

DEFAULT_MAX_STEPS = 10

_ACTION_TOOL_RE = re.compile(r"^Action Tool:\s*(.+)$", re.MULTILINE)
_ACTION_INPUT_RE = re.compile(r"^Action Input:\s*", re.MULTILINE)
_FINAL_RE = re.compile(r"^Final Answer:\s*", re.MULTILINE)


@dataclass(frozen=True)
class ToolSpec:
    """One registered engineering tool.

    ``executor`` receives the raw action-input text plus the long-term
    memory store and returns the observation text; tools parse their own
    named parameters.
    """

    name: str
    description: str
    executor: object

    def __post_init__(self):
        if not self.name:
            raise ValidationError("tool name must be non-empty")
        if not self.description:
            raise ValidationError("tool description must be non-empty")


class ToolRegistry:
    def __init__(self):
        self._tools: dict[str, ToolSpec] = {}

    def register(self, spec: ToolSpec) -> "ToolRegistry":
        if spec.name in self._tools:
            raise ValidationError(f"tool {spec.name!r} already registered")
        self._tools[spec.name] = spec
        return self

    def get(self, name: str) -> ToolSpec | None:
        return self._tools.get(name)

    def names(self) -> list[str]:
        return list(self._tools)

    def __len__(self) -> int:
        return len(self._tools)

    def describe(self) -> str:
        return "\n".join(f"- {t.name}: {t.description}" for t in self._tools.values())


@dataclass(frozen=True)
class ReActStep:
    """One unit of the transcript.

    kind: thought | action | observation | final. Actions carry the tool
    name and raw input; the parser additionally reports any thought
    preamble found in the same model output via ``thought``.
    """

    kind: str
    text: str = ""
    tool: str = ""
    tool_input: str = ""
    thought: str = ""


@dataclass(frozen=True)
class AgentTrace:
    steps: tuple[ReActStep, ...]
    final_answer: str | None
    succeeded: bool
    tool_calls: tuple[tuple[str, str, str], ...]  # (tool, input, observation)

    def render(self) -> str:
        return "\n".join(render_step(s) for s in self.steps)


def render_step(step: ReActStep) -> str:
    if step.kind == "thought":
        return f"Thought: {step.text}"
    if step.kind == "observation":
        return f"Observation: {step.text}"
    if step.kind == "final":
        prefix = f"Thought: {step.thought}\n" if step.thought else ""
        return f"{prefix}Final Answer: {step.text}"
    if step.kind == "action":
        prefix = f"Thought: {step.thought}\n" if step.thought else ""
        return f"{prefix}Action Tool: {step.tool}\nAction Input: {step.tool_input}"
    raise ValidationError(f"unknown step kind {step.kind!r}")


def _preamble_thought(text: str, end: int) -> str:
    lines = [ln.strip() for ln in text[:end].splitlines()]
    cleaned = [re.sub(r"^Thought:\s*", "", ln) for ln in lines if ln.strip()]
    return "\n".join(cleaned).strip()


def parse_step(model_output: str) -> ReActStep:
    """Parse one model output into a step.

    Grammar: optional thought lines, then either an Action Tool / Action
    Input pair or a Final Answer; labels match case-sensitively at line
    start. Anything else is a protocol error carrying the raw text.
    """
    text = model_output.strip()
    if not text:
        raise ProtocolError("empty model output", raw=model_output)

    final = _FINAL_RE.search(text)
    if final:
        return ReActStep(
            kind="final",
            text=text[final.end():].strip(),
            thought=_preamble_thought(text, final.start()),
        )

    tool = _ACTION_TOOL_RE.search(text)
    if tool:
        input_match = _ACTION_INPUT_RE.search(text, tool.end())
        if not input_match:
            raise ProtocolError("Action Tool without Action Input", raw=model_output)
        return ReActStep(
            kind="action",
            tool=tool.group(1).strip(),
            tool_input=text[input_match.end():].strip(),
            thought=_preamble_thought(text, tool.start()),
        )

    if text.startswith("Observation:"):
        return ReActStep(kind="observation", text=text[len("Observation:"):].strip())
    if text.startswith("Thought:"):
        return ReActStep(kind="thought", text=text[len("Thought:"):].strip())
    raise ProtocolError("output matches neither action nor final-answer form", raw=model_output)


_FORMAT_REMINDER = (
    "could not parse the previous output. Respond with 'Action Tool: <name>' "
    "followed by 'Action Input: <input>', or with 'Final Answer: <text>'."
)

_SYSTEM_TEMPLATE = """You are a geotechnical engineering assistant. Solve the task \
step by step using the available tools.

Available tools:
{tools}

Long-term memory:
{memory}

Respond with either:
Thought: <reasoning>
Action Tool: <tool name>
Action Input: <input for the tool>

or, when done:
Thought: <reasoning>
Final Answer: <answer>"""


def _render_memory(memory: MemoryStore) -> str:
    items = memory.items()
    if not items:
        return "(empty)"
    return "\n".join(
        f"- {key} = {rec.value}" + (f" {rec.units}" if rec.units else "")
        for key, rec in items
    )


def run(
    task: str,
    registry: ToolRegistry,
    memory: MemoryStore,
    backend: CompletionBackend,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> AgentTrace:
    """Drive the loop to a final answer or the step bound."""
    if len(registry) == 0:
        raise ValidationError("cannot run with an empty tool registry")
    steps: list[ReActStep] = []
    tool_calls: list[tuple[str, str, str]] = []
    scratchpad: list[str] = []
    final_answer: str | None = None

    for _ in range(max_steps):
        user = task if not scratchpad else task + "\n\n" + "\n".join(scratchpad)
        request = CompletionRequest(
            messages=(
                ("system", _SYSTEM_TEMPLATE.format(
                    tools=registry.describe(), memory=_render_memory(memory)
                )),
                ("user", user),
            ),
            temperature=0.0,
        )
        output = backend.complete(request)
        try:
            step = parse_step(output)
        except ProtocolError:
            obs = _FORMAT_REMINDER
            steps.append(ReActStep(kind="observation", text=obs))
            scratchpad.append(f"Observation: {obs}")
            continue

        if step.thought:
            steps.append(ReActStep(kind="thought", text=step.thought))
            scratchpad.append(f"Thought: {step.thought}")

        if step.kind == "final":
            steps.append(ReActStep(kind="final", text=step.text))
            final_answer = step.text
            break
        if step.kind == "action":
            steps.append(ReActStep(kind="action", tool=step.tool, tool_input=step.tool_input))
            scratchpad.append(f"Action Tool: {step.tool}\nAction Input: {step.tool_input}")
            spec = registry.get(step.tool)
            if spec is None:
                obs = f"unknown tool: {step.tool}. Available tools: {', '.join(registry.names())}"
            else:
                try:
                    obs = spec.executor(step.tool_input, memory)
                except Exception as exc:  # error text becomes the observation
                    obs = f"tool error: {exc}"
            tool_calls.append((step.tool, step.tool_input, obs))
            steps.append(ReActStep(kind="observation", text=obs))
            scratchpad.append(f"Observation: {obs}")
        else:
            # Bare thought (or stray observation): record it and keep going.
            steps.append(step)
            scratchpad.append(render_step(step))

    return AgentTrace(
        steps=tuple(steps),
        final_answer=final_answer,
        succeeded=final_answer is not None,
        tool_calls=tuple(tool_calls),
    )
