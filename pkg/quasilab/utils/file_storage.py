import logging
from abc import ABC, abstractmethod
from pathlib import Path
import sys
from typing import Optional, TextIO

from ..exceptions import ReportIOError

logger = logging.getLogger(__name__)


class ReportStorageStrategy(ABC):
    """Abstract base class for text storage strategies"""

    @abstractmethod
    def write_text(self, content: str, name: Optional[str] = None) -> str:
        """Store text and return where it went"""
        pass

    @abstractmethod
    def read_text(self, name: str) -> str:
        """Read previously stored text"""
        pass


class LocalFileStorage(ReportStorageStrategy):
    """Local file system storage strategy"""

    def __init__(self, base_dir: Optional[str] = None):
        self.base_dir = Path(base_dir) if base_dir else None

    def _resolve(self, name: str) -> Path:
        path = Path(name)
        if self.base_dir is not None and not path.is_absolute():
            path = self.base_dir / path
        return path

    def write_text(self, content: str, name: Optional[str] = None) -> str:
        if not name:
            raise ReportIOError("A file name is required to write to local storage")
        path = self._resolve(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(content, encoding="utf-8")
        except OSError as e:
            raise ReportIOError(f"Failed to write {path}: {e}")
        logger.debug("Wrote %d characters to %s", len(content), path)
        return str(path)

    def read_text(self, name: str) -> str:
        path = self._resolve(name)
        try:
            return path.read_text(encoding="utf-8")
        except OSError as e:
            raise ReportIOError(f"Failed to read {path}: {e}")


class StreamStorage(ReportStorageStrategy):
    """Writes to a text stream, standard output by default"""

    def __init__(self, stream: Optional[TextIO] = None):
        self._stream = stream

    @property
    def stream(self) -> TextIO:
        # resolved late so a replaced sys.stdout is honored
        return self._stream or sys.stdout

    def write_text(self, content: str, name: Optional[str] = None) -> str:
        try:
            self.stream.write(content)
            if not content.endswith("\n"):
                self.stream.write("\n")
            self.stream.flush()
        except OSError as e:
            raise ReportIOError(f"Failed to write to the output stream: {e}")
        return "<stdout>"

    def read_text(self, name: str) -> str:
        raise ReportIOError("Stream storage cannot be read back")
