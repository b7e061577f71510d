import logging
from pathlib import Path
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, ValidationError

from ..exceptions import InvalidInputError
from ..models.conjugation import Conjugation
from ..schemas.matrix_schema import MatrixPayload
from ..utils.file_storage import LocalFileStorage, ReportStorageStrategy

logger = logging.getLogger(__name__)


class MatrixRepository:
    """Repository layer for matrix JSON files"""

    def __init__(self, storage: Optional[ReportStorageStrategy] = None):
        self.storage = storage or LocalFileStorage()

    def load_matrix(self, path: str) -> np.ndarray:
        """Read a matrix file; malformed or non-finite content is invalid input"""
        text = self.storage.read_text(path)
        try:
            payload = MatrixPayload.model_validate_json(text)
        except ValidationError as e:
            raise InvalidInputError(f"Invalid matrix file {path}: {e.errors()[0]['msg']}")
        logger.debug("Loaded %dx%d matrix from %s", payload.rows, payload.cols, path)
        return payload.to_array()

    def load_conjugation(self, path: str) -> Conjugation:
        return Conjugation(self.load_matrix(path))

    def save_matrix(self, path: str, matrix: np.ndarray) -> str:
        return self.save_model(path, MatrixPayload.from_array(matrix))

    def save_model(self, path: str, model: BaseModel) -> str:
        return self.storage.write_text(model.model_dump_json(indent=2), path)

    def save_instance(self, out_dir: str, matrices: Dict[str, np.ndarray], certificate: BaseModel) -> Dict[str, str]:
        """Write each matrix as <name>.json and the certificate as certificate.json"""
        written = {}
        for name, matrix in matrices.items():
            written[name] = self.save_matrix(str(Path(out_dir) / f"{name}.json"), matrix)
        written["certificate"] = self.save_model(str(Path(out_dir) / "certificate.json"), certificate)
        return written
