"""Retrieval-backed NetLogo programming assistant.

Ships a NetLogo syntax checker, a BM25 documentation index, prompt
templates with structured-step parsing, an LLM gateway (scripted and
HTTP backends), the plan/act orchestration engine, and an HTTP/WebSocket
chat service.
"""

__version__ = "0.1.0"
