import logging
from typing import Optional

from pydantic import BaseModel

from ..schemas.suite_schema import SuiteReport
from ..utils.file_storage import LocalFileStorage, ReportStorageStrategy, StreamStorage

logger = logging.getLogger(__name__)


class ReportRepository:
    """Repository layer for JSON documents: files when a path is given, standard output otherwise"""

    def __init__(self, file_storage: Optional[ReportStorageStrategy] = None,
                 stream_storage: Optional[ReportStorageStrategy] = None):
        self.file_storage = file_storage or LocalFileStorage()
        self.stream_storage = stream_storage or StreamStorage()

    def emit(self, document: BaseModel, path: Optional[str] = None) -> str:
        content = document.model_dump_json(indent=2)
        if path:
            return self.file_storage.write_text(content, path)
        return self.stream_storage.write_text(content)

    def save_report(self, report: SuiteReport, path: Optional[str] = None) -> str:
        location = self.emit(report, path)
        logger.info("Suite report written to %s", location)
        return location

    def load_report(self, path: str) -> SuiteReport:
        return SuiteReport.model_validate_json(self.file_storage.read_text(path))
