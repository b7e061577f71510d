import math
from typing import Any, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


def to_plain(value: Any) -> Any:
    """JSON-native copy of metadata: numpy scalars unwrapped, complex as [re, im], NaN as None"""
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return [to_plain(value.real), to_plain(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class MatrixPayload(BaseModel):
    """Complex matrix as rows of [re, im] pairs"""
    rows: int = Field(..., ge=1, description="Number of rows")
    cols: int = Field(..., ge=1, description="Number of columns")
    data: List[List[List[float]]] = Field(..., description="Row-major entries, each a [re, im] pair")

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "rows": 2,
            "cols": 2,
            "data": [[[1.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
        }
    })

    @model_validator(mode="after")
    def check_shape(self) -> "MatrixPayload":
        if len(self.data) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.data)}")
        for i, row in enumerate(self.data):
            if len(row) != self.cols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {self.cols}")
            for entry in row:
                if len(entry) != 2:
                    raise ValueError(f"row {i}: complex entries must be [re, im] pairs")
                if not all(math.isfinite(part) for part in entry):
                    raise ValueError(f"row {i}: entries must be finite")
        return self

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> "MatrixPayload":
        array = np.asarray(matrix, dtype=np.complex128)
        return cls(
            rows=array.shape[0],
            cols=array.shape[1],
            data=[[[float(z.real), float(z.imag)] for z in row] for row in array],
        )

    def to_array(self) -> np.ndarray:
        return np.array([[complex(re, im) for re, im in row] for row in self.data], dtype=np.complex128)
