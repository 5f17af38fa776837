"""
FastAPI Backend with WebSocket Streaming

Provides:
- REST endpoints for graph properties, single samples and full experiments
- WebSocket for real-time journal streaming while experiments run
- Timing metrics from the ledger
"""

from fastapi import FastAPI, WebSocket, WebSocketDisconnect, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field
from typing import Optional
import asyncio
import os
import sys
import tempfile

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Load environment variables
from dotenv import load_dotenv
load_dotenv()

from netsampler import ledger
from netsampler.config import Aggregation, PropertyName, RunConfig
from netsampler.errors import NetSamplerError
from netsampler.graph import load_edge_list, summarize, write_edge_list
from netsampler.harness import run_experiment
from netsampler.journal import Stage, journal
from netsampler.registry import compare_summary
from netsampler.samplers import SamplerSpec, Technique, sample


app = FastAPI(
    title="netsampler API",
    description="Network sampling and technique comparison",
    version="0.1.0",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["http://localhost:3000", "http://127.0.0.1:3000"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Request Models
class PropsRequest(BaseModel):
    path: str
    name: Optional[str] = None  # registry network to compare against


class SampleRequest(BaseModel):
    path: str
    technique: Technique
    fraction: Optional[float] = None
    seed: int = Field(default=0, ge=0)
    induction_fraction: Optional[float] = None
    output: Optional[str] = None  # write the sample as an edge list here


class DatasetRequest(BaseModel):
    name: str
    path: str
    expected_n: Optional[int] = None
    expected_m: Optional[int] = None


class ExperimentRequest(BaseModel):
    datasets: list[DatasetRequest]
    techniques: Optional[list[str]] = None
    fraction: Optional[float] = None
    runs: Optional[int] = None
    master_seed: int = 0
    properties: Optional[list[PropertyName]] = None
    aggregation: Aggregation = Aggregation.MEAN
    paired: bool = False
    induction_sweep: bool = False
    output_dir: Optional[str] = None
    write: bool = True


# WebSocket connections
active_connections: list[WebSocket] = []


def _checked_path(path: str) -> str:
    if not os.path.isfile(path):
        raise HTTPException(status_code=404, detail=f"file not found: {path}")
    return path


@app.get("/")
async def root():
    return {"message": "netsampler API", "status": "running"}


@app.get("/health")
async def health():
    return {"status": "ok"}


@app.post("/props")
async def props(request: PropsRequest):
    """Summary values (n, m, average degree, clustering, density) of an edge list."""
    path = _checked_path(request.path)
    try:
        graph = await asyncio.to_thread(load_edge_list, path)
        summary = await asyncio.to_thread(summarize, graph)
        result = {"summary": summary.to_dict(), "ingest": graph.ingest.to_dict()}
        if request.name:
            result["registry"] = compare_summary(request.name, summary)
        return result
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))


@app.post("/sample")
async def draw_sample(request: SampleRequest):
    """Draw one sample; returns its size and, optionally, writes it out."""
    path = _checked_path(request.path)
    overrides = {
        "target_fraction": request.fraction,
        "induction_fraction": request.induction_fraction,
    }
    try:
        spec = SamplerSpec(
            technique=request.technique,
            seed=request.seed,
            **{k: v for k, v in overrides.items() if v is not None},
        )
        graph = await asyncio.to_thread(load_edge_list, path)
        drawn = await asyncio.to_thread(sample, graph, spec)
        result = {
            "technique": request.technique.value,
            "seed": request.seed,
            "nodes": drawn.n,
            "edges": drawn.m,
            "induction_fraction": drawn.induction_fraction,
            "notes": list(drawn.notes),
        }
        if request.output:
            result["output"] = str(write_edge_list(drawn, request.output))
        return result
    except NetSamplerError as e:
        raise HTTPException(status_code=422, detail=str(e))


@app.post("/experiments")
async def experiments(request: ExperimentRequest):
    """
    Run a full experiment in a worker thread.

    Progress is streamed over /ws while it runs; the response carries the
    report rows, residual tables and any skipped datasets.
    """
    for dataset in request.datasets:
        _checked_path(dataset.path)

    payload = request.model_dump(exclude={"write"}, exclude_none=True)
    if "output_dir" not in payload and not request.write:
        payload["output_dir"] = tempfile.gettempdir()
    try:
        config = RunConfig.model_validate(payload)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))

    journal.progress(
        Stage.API,
        f"🚀 Experiment requested: {len(config.datasets)} dataset(s), "
        f"{len(config.techniques)} technique(s)",
    )
    try:
        bundle = await asyncio.to_thread(run_experiment, config, request.write)
    except NetSamplerError as e:
        raise HTTPException(status_code=422, detail=str(e))

    return {
        "rows": [row.to_dict() for row in bundle.rows],
        "residuals": {prop: m.to_dict() for prop, m in bundle.residuals.items()},
        "summaries": bundle.summaries,
        "originals": bundle.originals,
        "errors": bundle.errors,
        "notes": bundle.notes,
        "sweep": [row.to_dict() for row in bundle.sweep],
        "output_dir": str(config.output_dir) if request.write else None,
    }


@app.get("/journal")
async def get_journal(limit: int = 200):
    """Recent journal events and counts by kind."""
    return journal.get_full_context(limit=limit)


@app.delete("/journal")
async def clear_journal():
    journal.clear()
    return {"message": "Journal cleared"}


@app.get("/metrics")
async def metrics():
    """Per-technique timing breakdown from the ledger."""
    return ledger.get_metrics()


# WebSocket for real-time journal streaming
@app.websocket("/ws")
async def websocket_endpoint(websocket: WebSocket):
    """Clients receive every journal event as it happens."""
    await websocket.accept()
    active_connections.append(websocket)
    try:
        async for item in journal.stream():
            await websocket.send_json(item)
    except WebSocketDisconnect:
        pass
    finally:
        if websocket in active_connections:
            active_connections.remove(websocket)


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
