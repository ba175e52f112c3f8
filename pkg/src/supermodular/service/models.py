"""Request/response schemas for the compute service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class SU2Request(BaseModel):
    m: int = Field(ge=1, le=16, description="family parameter; the data has rank 4m+3")


class HatRequest(BaseModel):
    m: int = Field(ge=0, le=16, description="family parameter; m=0 gives the trivial data")


class ModularDataResponse(BaseModel):
    rank: int
    duality: list[int]
    conductor: int
    s_tilde: list[list[dict]]
    t_diag: list[dict]


class HatDataResponse(BaseModel):
    size: int
    conductor: int
    is_normalized: bool
    d_squared: Optional[dict] = None
    name: str
    s_hat: list[list[dict]]
    t_hat: list[dict]


class AxiomRequest(BaseModel):
    m: Optional[int] = Field(default=None, ge=1, le=16)
    modular_data: Optional[dict] = Field(default=None, description="serialized modular data to check")


class AxiomResponse(BaseModel):
    s_squared_ok: bool
    st_cubed_ok: bool
    tc_ok: bool
    all_ok: bool
    d_squared: dict
    d_plus: dict
    d_squared_approx: float


class SpinRequest(BaseModel):
    m: Optional[int] = Field(default=None, ge=1, le=16)
    modular_data: Optional[dict] = None
    fermion: Optional[int] = None
    include_matrices: bool = False


class SpinResponse(BaseModel):
    fermion: int
    epsilon: list[int]
    action: list[int]
    parts: dict
    block_report: dict[str, bool]
    all_ok: bool
    hat_size: int
    hat_conductor: int
    s_prime: Optional[list] = None
    hat: Optional[dict] = None


class Table1Request(BaseModel):
    m_max: int = Field(default=6, ge=1)
    m_limit: int = Field(default=8, ge=1)
    cap: int = Field(default=2_000_000, ge=1)
    include_levels: bool = True
    format: str = Field(default="text", pattern="^(text|csv|json)$")


class Table1Response(BaseModel):
    rows: list[dict]
    rendered: str


class ConjecturesRequest(BaseModel):
    m_max: int = Field(default=6, ge=1)
    m_limit: int = Field(default=8, ge=1)
    cap: int = Field(default=2_000_000, ge=1)


class ConjecturesResponse(BaseModel):
    verdicts: list[dict]
    all_passed: bool


class LevelRequest(BaseModel):
    m: Optional[int] = Field(default=None, ge=0, le=16)
    hat_data: Optional[dict] = None
    bound: Optional[int] = Field(default=None, description="even search bound; defaults to 16(m+1)")
    cap: int = Field(default=2_000_000, ge=1)


class LevelResponse(BaseModel):
    representation: str
    tested: list[list[Any]]
    minimal_level: Optional[int]
    bound: int
    trivial_image: bool
    monotonic_ok: bool
    image_order: int
    note: str


class LemmaRequest(BaseModel):
    n: int = Field(ge=2)
    cap: int = Field(default=2_000_000, ge=1)


class LemmaResponse(BaseModel):
    n: int
    k: int
    q: int
    order: int
    two_part: int
    sl2_q_order: int
    mod_2k_image: int
    mod_q_image: int
    ok: bool


class CertifyRequest(BaseModel):
    cap: int = Field(default=100_000, ge=1)


class CertifyResponse(BaseModel):
    annihilation_ok: bool
    polynomial: str
    st_projective_exceeded: bool
    st_cap: int
    st_found: int
    st2_linear_order: int
    ok: bool


class RunAllRequest(BaseModel):
    m_max: int = 8
    m_limit: int = 8
    closure_cap: int = 2_000_000
    infinite_cap: int = 100_000
    axiom_m_max: int = 4
    spin_m_max: int = 4
    lemma_levels: list[int] = [2, 4, 6, 8, 12, 16]
    output_dir: str = "."
    format: str = Field(default="text", pattern="^(text|csv|json)$")


class RunAllResponse(BaseModel):
    exit_code: int
    ok: bool
    failures: list[str]
    warnings: list[str]
    artifacts: list[str]
    summary: dict
