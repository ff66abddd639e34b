"""Object-language prelude: the standard handlers and list utilities."""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..deep import call_deep
from ..errors import EffError

DEFAULT_DIR = Path(__file__).parent
MANIFEST_NAME = "manifest.txt"
ENV_VAR = "EFF_PRELUDE"


class PreludeError(EffError):
    stage = "prelude error"


@dataclass
class PreludeManifest:
    directory: Path
    files: list[str]

    @classmethod
    def read(cls, directory: Path) -> "PreludeManifest":
        manifest = directory / MANIFEST_NAME
        if manifest.exists():
            names = [ln.strip() for ln in manifest.read_text(encoding="utf-8").splitlines()]
            files = [n for n in names if n and not n.startswith("#")]
        else:
            files = sorted(p.name for p in directory.glob("*.eff"))
        return cls(directory, files)


def prelude_dir(override: Optional[Path] = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else DEFAULT_DIR


@functools.lru_cache(maxsize=64)
def _front_end(text: str) -> tuple:
    """Parse and desugar a prelude file; the result is shared between sessions."""
    from ..desugar import desugar_item
    from ..syntax.parser import parse

    return tuple(desugar_item(item)[0] for item in parse(text))


def load_prelude(session, directory: Optional[Path] = None, manifest: Optional[PreludeManifest] = None) -> None:
    """Run each manifest file in order in ``session``; sequencing notes are ignored."""
    manifest = manifest or PreludeManifest.read(prelude_dir(directory))
    call_deep(_load, session, manifest)


def _load(session, manifest: PreludeManifest) -> None:
    for name in manifest.files:
        path = manifest.directory / name
        try:
            for core_item in _front_end(path.read_text(encoding="utf-8")):
                session.run_core(core_item)
        except EffError as exc:
            raise PreludeError(f"in {path}: {exc.render(str(path))}") from exc
        except OSError as exc:
            raise PreludeError(f"cannot read {path}: {exc}") from exc


__all__ = ["PreludeManifest", "PreludeError", "load_prelude", "prelude_dir", "DEFAULT_DIR"]
