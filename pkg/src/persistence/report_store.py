"""
Writing verdicts, proof traces and self-test reports as canonical JSON.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import aiofiles

logger = logging.getLogger(__name__)


def canonical_json(data: Any) -> str:
    """Sorted keys and fixed indentation, so equal data gives equal bytes."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class ReportStore:
    """Writes JSON documents under a base directory (the working directory by default)."""

    def __init__(self, base_dir: Optional[Union[str, Path]] = None):
        self.base_dir = Path(base_dir) if base_dir else Path.cwd()

    def resolve(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_dir / path

    async def save(self, path: Union[str, Path], data: Dict[str, Any]) -> Path:
        target = self.resolve(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        async with aiofiles.open(target, 'w', encoding='utf-8') as f:
            await f.write(canonical_json(data))
        logger.info(f"Saved {target}")
        return target

    async def load(self, path: Union[str, Path]) -> Optional[Dict[str, Any]]:
        target = self.resolve(path)
        if not target.exists():
            return None
        async with aiofiles.open(target, 'r', encoding='utf-8') as f:
            return json.loads(await f.read())

    def save_sync(self, path: Union[str, Path], data: Dict[str, Any]) -> Path:
        target = self.resolve(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(canonical_json(data), encoding='utf-8')
        logger.info(f"Saved {target}")
        return target
