from datetime import datetime, timezone
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


class RunManifest(BaseModel):
    """Provenance record written next to every output"""
    command: str
    config: Dict[str, Any]
    seed: Optional[int] = None
    version: str
    duration_seconds: float = 0.0
    inputs: Dict[str, str] = {}  # path -> sha256
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
