"""Request and response bodies of the HTTP API."""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

LocatorJson = list[list[str]]


class ApiError(BaseModel):
    code: str
    message: str
    detail: Optional[dict[str, Any]] = None


class AxisSummary(BaseModel):
    depth: int
    leaf_count: int
    level_names: list[str]
    nodes: list[dict]
    uniform_boundaries: list[bool]
    bicluster_from: Optional[int] = None


class ModelSummary(BaseModel):
    version: int
    n_rows: int
    n_cols: int
    row_axis: AxisSummary
    col_axis: AxisSummary


class UploadResponse(BaseModel):
    session_id: str
    summary: ModelSummary


class TransformRequest(BaseModel):
    model_config = ConfigDict(extra="allow")
    op: str


class TransformResponse(BaseModel):
    version: int
    summary: ModelSummary


class EntriesPage(BaseModel):
    offset: int
    rows: list[list[Any]]
    total_rows: int


class SelectRequest(BaseModel):
    row: LocatorJson
    col: LocatorJson
    name: str = "default"


class SelectResponse(BaseModel):
    name: str
    block: dict[str, int]
    row_locator: LocatorJson
    col_locator: LocatorJson
    row_single_subtree: bool
    col_single_subtree: bool


class RecommendationOut(BaseModel):
    block: dict[str, int]
    row_locator: LocatorJson
    col_locator: LocatorJson
    row_priority: int
    col_priority: int


class VisConfigJson(BaseModel):
    template_id: str
    bindings: dict[str, str]
    options: dict[str, Any] = Field(default_factory=dict)


class CellGeometryJson(BaseModel):
    cell_width: float = 80.0
    cell_height: float = 24.0
    origin_x: float = 0.0
    origin_y: float = 0.0


class VisualizeRequest(BaseModel):
    unit: Optional[SelectRequest] = None
    selection: Optional[str] = None
    config: VisConfigJson
    apply_to: Literal["selection", "recommended"] = "selection"
    mechanism: Literal["topology", "name"] = "topology"
    row_range: tuple[int, Optional[int]] = (0, None)
    col_range: tuple[int, Optional[int]] = (0, None)
    cell_geometry: CellGeometryJson = Field(default_factory=CellGeometryJson)
    name: Optional[str] = None


class VisualizeResponse(BaseModel):
    name: str
    docs: list[dict]


class TemplateOut(BaseModel):
    id: str
    category: str
    channels: list[dict]
    aggregation: str
