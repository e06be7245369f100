import sys

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from loguru import logger
from pydantic import BaseModel, Field
from typing import Optional, Union

from config import DEFAULT_SEED, DEFAULT_TOL, LOG_LEVEL
from solvcx import (
    INPUT_ERRORS,
    run_catalog,
    run_h1,
    run_integrable,
    run_lattice,
    run_lemma2,
    run_pseudokahler,
)

logger.remove()
logger.add(sys.stderr, level=LOG_LEVEL)

app = FastAPI()


class IntegrableRequest(BaseModel):
    structure: dict
    # catalog reference or inline algebra; server-side paths are not read
    algebra: Union[str, dict, None] = None
    tol: float = DEFAULT_TOL


class SpecRequest(BaseModel):
    spec: dict
    tol: float = DEFAULT_TOL


class Lemma2Request(BaseModel):
    frame: Optional[dict] = None
    random: Optional[int] = Field(None, ge=1, le=5000)
    seed: int = DEFAULT_SEED
    tol: float = DEFAULT_TOL


def respond(run, *args):
    try:
        report = run(*args)
    except INPUT_ERRORS as e:
        logger.error(f"{run.__name__}: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    return JSONResponse(content=report.model_dump(mode="json", by_alias=True), media_type="application/json")


@app.get("/catalog")
async def catalog(tol: float = DEFAULT_TOL):
    return respond(run_catalog, tol)


@app.post("/integrable")
async def integrable(request: IntegrableRequest):
    algebra = request.algebra
    ref = algebra if algebra is not None else request.structure.get("algebra")
    if isinstance(ref, str) and not ref.startswith("catalog:"):
        raise HTTPException(status_code=422, detail="algebra must be a catalog reference or an inline algebra")
    return respond(run_integrable, request.structure, algebra, request.tol)


@app.post("/lattice")
async def lattice(request: SpecRequest):
    return respond(run_lattice, request.spec, request.tol)


@app.post("/h1")
async def h1(request: SpecRequest):
    return respond(run_h1, request.spec, request.tol)


@app.post("/pseudokahler")
async def pseudokahler(request: SpecRequest):
    return respond(run_pseudokahler, request.spec, request.tol)


@app.post("/lemma2")
async def lemma2(request: Lemma2Request):
    return respond(run_lemma2, request.frame, request.random, request.seed, request.tol)


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8010)
