"""Deterministic geotechnical reasoning engine.

Verified calculation tools orchestrated by an Action-Observation-Thought
loop with short- and long-term memory, a context-specific semantic search
engine, a USCS soil classifier, and a DIGGS XML emitter, all runnable
offline against a scripted language-model backend.
"""

__version__ = "0.1.0"
