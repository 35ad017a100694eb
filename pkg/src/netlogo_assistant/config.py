"""Service configuration: filesystem paths, backends and routing.

Config is a JSON file; every referenced path must exist at startup or
loading fails with a ConfigError naming the offender. CLI flags
override individual fields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .clarify import bundled_table_path
from .corpus import bundled_corpus_path
from .gateway import DEFAULT_TIMEOUT_S
from .templates import bundled_template_dir


class ConfigError(Exception):
    pass


@dataclass(frozen=True, slots=True)
class BackendConfig:
    backend_id: str
    type: str  # "scripted" | "http"
    scenario_path: str | None = None
    base_url: str | None = None
    model: str | None = None
    api_key_env: str | None = None
    timeout_s: float = DEFAULT_TIMEOUT_S


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    corpus_path: Path = field(default_factory=bundled_corpus_path)
    template_dir: Path = field(default_factory=bundled_template_dir)
    clarification_table_path: Path = field(default_factory=bundled_table_path)
    data_dir: Path = Path("./sessions")
    static_ui_dir: Path | None = None
    # External model runtime that can execute chunks; lint stays the
    # guaranteed behavior when this is unset.
    runtime_url: str | None = None
    max_iterations: int = 6
    search_k: int = 3
    backends: dict[str, BackendConfig] = field(default_factory=dict)
    routing: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        for label, path in (
            ("corpus", self.corpus_path),
            ("template dir", self.template_dir),
            ("clarification table", self.clarification_table_path),
        ):
            if not Path(path).exists():
                raise ConfigError(f"{label} path does not exist: {path}")
        if self.static_ui_dir is not None and not Path(self.static_ui_dir).exists():
            raise ConfigError(f"static-ui dir does not exist: {self.static_ui_dir}")
        for backend in self.backends.values():
            if backend.type == "scripted":
                if not backend.scenario_path or not Path(backend.scenario_path).exists():
                    raise ConfigError(
                        f"backend {backend.backend_id}: scenario path does not exist: "
                        f"{backend.scenario_path}"
                    )
            elif backend.type == "http":
                if not backend.base_url or not backend.model:
                    raise ConfigError(
                        f"backend {backend.backend_id}: http backends need base_url and model"
                    )
            else:
                raise ConfigError(
                    f"backend {backend.backend_id}: unknown type {backend.type!r}"
                )
        if self.backends and "default" not in self.routing:
            raise ConfigError("routing must map 'default' to a backend id")
        for tag, backend_id in self.routing.items():
            if backend_id not in self.backends:
                raise ConfigError(f"routing {tag!r} names unknown backend {backend_id!r}")


def load_config(path: str | Path) -> ServiceConfig:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    backends = {}
    for backend_id, raw in obj.get("backends", {}).items():
        backends[backend_id] = BackendConfig(
            backend_id=backend_id,
            type=raw.get("type", "scripted"),
            scenario_path=raw.get("scenario_path"),
            base_url=raw.get("base_url"),
            model=raw.get("model"),
            api_key_env=raw.get("api_key_env"),
            timeout_s=float(raw.get("timeout_s", DEFAULT_TIMEOUT_S)),
        )

    config = ServiceConfig(
        host=obj.get("host", "127.0.0.1"),
        port=int(obj.get("port", 8000)),
        corpus_path=Path(obj["corpus_path"]) if "corpus_path" in obj else bundled_corpus_path(),
        template_dir=(
            Path(obj["template_dir"]) if "template_dir" in obj else bundled_template_dir()
        ),
        clarification_table_path=(
            Path(obj["clarification_table"])
            if "clarification_table" in obj
            else bundled_table_path()
        ),
        data_dir=Path(obj.get("data_dir", "./sessions")),
        static_ui_dir=Path(obj["static_ui_dir"]) if obj.get("static_ui_dir") else None,
        runtime_url=obj.get("runtime_url"),
        max_iterations=int(obj.get("max_iterations", 6)),
        search_k=int(obj.get("search_k", 3)),
        backends=backends,
        routing=dict(obj.get("routing", {})),
    )
    config.validate()
    return config
