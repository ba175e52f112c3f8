"""FastAPI service exposing the exact-computation toolkit.

Every endpoint is a pure computation on its request payload; results are JSON
with exact rationals encoded as decimal strings.  Long-running requests
(table rows, level searches) run synchronously, so deploy behind a worker
pool when serving multiple clients.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..congruence import CapExceededError, minimal_level, verify_lemma_index3
from ..modular_data import (
    HatData,
    ModularData,
    psu2_hat_data,
    su2_modular_data,
    su2_s_normalizer,
    verify_modular_axioms,
)
from ..spin import StructureError, spin_decompose
from ..survey import (
    RunAllConfig,
    conjecture_suite,
    infinite_image_certificate,
    render_table1,
    run_all,
    table1,
)
from . import models


def create_app() -> FastAPI:
    app = FastAPI(
        title="supermodular",
        version=__version__,
        description="Exact modular-data computations: axioms, spin decompositions, "
        "group closures and congruence levels.",
    )

    @app.get("/health", response_model=models.HealthResponse)
    def health() -> models.HealthResponse:
        return models.HealthResponse(status="ok", version=__version__)

    @app.post("/modular-data/su2", response_model=models.ModularDataResponse)
    def su2(req: models.SU2Request) -> models.ModularDataResponse:
        return models.ModularDataResponse(**su2_modular_data(req.m).to_json_dict())

    @app.post("/hat-data/psu2", response_model=models.HatDataResponse)
    def psu2(req: models.HatRequest) -> models.HatDataResponse:
        return models.HatDataResponse(**psu2_hat_data(req.m).to_json_dict())

    def _load_modular_data(req) -> ModularData:
        if (req.m is None) == (req.modular_data is None):
            raise HTTPException(status_code=422, detail="provide exactly one of 'm' or 'modular_data'")
        if req.m is not None:
            return su2_modular_data(req.m)
        try:
            return ModularData.from_json_dict(req.modular_data)
        except (KeyError, ValueError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=f"bad modular data: {exc}") from exc

    @app.post("/verify-axioms", response_model=models.AxiomResponse)
    def verify_axioms(req: models.AxiomRequest) -> models.AxiomResponse:
        md = _load_modular_data(req)
        try:
            report = verify_modular_axioms(md)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return models.AxiomResponse(**report.as_dict())

    @app.post("/spin-decompose", response_model=models.SpinResponse)
    def spin(req: models.SpinRequest) -> models.SpinResponse:
        md = _load_modular_data(req)
        normalizer = su2_s_normalizer(req.m) if req.m is not None else None
        try:
            sd = spin_decompose(md, psi=req.fermion, normalizer=normalizer)
        except (StructureError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        payload = sd.as_dict(include_matrices=req.include_matrices)
        payload["all_ok"] = all(sd.block_report.values())
        return models.SpinResponse(**payload)

    @app.post("/table1", response_model=models.Table1Response)
    def table(req: models.Table1Request) -> models.Table1Response:
        try:
            rows = table1(req.m_max, cap=req.cap, include_levels=req.include_levels, m_limit=req.m_limit)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return models.Table1Response(rows=[r.as_dict() for r in rows], rendered=render_table1(rows, req.format))

    @app.post("/conjectures", response_model=models.ConjecturesResponse)
    def conjectures(req: models.ConjecturesRequest) -> models.ConjecturesResponse:
        try:
            verdicts = conjecture_suite(req.m_max, cap=req.cap, m_limit=req.m_limit)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return models.ConjecturesResponse(
            verdicts=[v.as_dict() for v in verdicts], all_passed=all(v.passed for v in verdicts)
        )

    @app.post("/congruence-level", response_model=models.LevelResponse)
    def level(req: models.LevelRequest) -> models.LevelResponse:
        if (req.m is None) == (req.hat_data is None):
            raise HTTPException(status_code=422, detail="provide exactly one of 'm' or 'hat_data'")
        if req.m is not None:
            hat = psu2_hat_data(req.m)
            bound = req.bound if req.bound is not None else 16 * (req.m + 1)
        else:
            try:
                hat = HatData.from_json_dict(req.hat_data)
            except (KeyError, ValueError, TypeError) as exc:
                raise HTTPException(status_code=422, detail=f"bad hat data: {exc}") from exc
            if req.bound is None:
                raise HTTPException(status_code=422, detail="a bound is required with explicit hat data")
            bound = req.bound
        try:
            report = minimal_level(hat, bound, cap=req.cap)
        except CapExceededError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return models.LevelResponse(**report.as_dict())

    @app.post("/lemma-check", response_model=models.LemmaResponse)
    def lemma(req: models.LemmaRequest) -> models.LemmaResponse:
        try:
            report = verify_lemma_index3(req.n, cap=req.cap)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return models.LemmaResponse(**report.as_dict())

    @app.post("/certify-infinite", response_model=models.CertifyResponse)
    def certify(req: models.CertifyRequest) -> models.CertifyResponse:
        return models.CertifyResponse(**infinite_image_certificate(req.cap).as_dict())

    @app.post("/run-all", response_model=models.RunAllResponse)
    def runall(req: models.RunAllRequest) -> models.RunAllResponse:
        config = RunAllConfig(
            m_max=req.m_max,
            m_limit=req.m_limit,
            closure_cap=req.closure_cap,
            infinite_cap=req.infinite_cap,
            axiom_m_max=req.axiom_m_max,
            spin_m_max=req.spin_m_max,
            lemma_levels=tuple(req.lemma_levels),
            output_dir=req.output_dir,
            format=req.format,
        )
        try:
            result = run_all(config)
        except OSError as exc:
            raise HTTPException(status_code=422, detail=f"cannot write artifacts: {exc}") from exc
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return models.RunAllResponse(
            exit_code=result.exit_code,
            ok=result.summary["ok"],
            failures=result.summary["failures"],
            warnings=result.summary["warnings"],
            artifacts=list(result.artifacts),
            summary=result.summary,
        )

    return app


app = create_app()
