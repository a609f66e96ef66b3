"""
Route layer untuk endpoint query keyword (read-only).
Menangani HTTP request dan response terkait hasil mining.
"""
import os
from pathlib import Path
from typing import List

from fastapi import APIRouter, Depends, HTTPException, Query
from pydantic import BaseModel, Field

from services.query_service import KeywordQueryService
from services.tokenization_service import tokenize_label
from utils.errors import MinerError


router = APIRouter(tags=["Keywords"])

BASE_DIR = Path(__file__).resolve().parent.parent
DEFAULT_STATE_DIR = BASE_DIR / "data" / "state"


def get_state_dir() -> str:
    return os.environ.get("MINER_STATE_DIR", str(DEFAULT_STATE_DIR))


def get_query_service() -> KeywordQueryService:
    return KeywordQueryService(get_state_dir())


class KeywordResponse(BaseModel):
    sample_id: str
    keywords: List[dict]
    formatted: str


class TokenizeRequest(BaseModel):
    label: str = Field(..., description="Label AV mentah, misal 'Win32/Flystudio.worm.Gen'")


class TokenizeResponse(BaseModel):
    label: str
    tokens: List[str]


# ============ API ROUTES (JSON) ============

@router.get("/api/stats")
async def api_stats(service: KeywordQueryService = Depends(get_query_service)):
    """
    API: Ringkasan versi corpus dan model.
    URL: GET /api/stats
    """
    try:
        return service.stats()
    except MinerError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.get("/api/samples")
async def api_list_samples(
    limit: int = Query(50, ge=1, le=1000),
    offset: int = Query(0, ge=0),
    ascii_sep: bool = False,
    service: KeywordQueryService = Depends(get_query_service),
):
    """
    API: Daftar sampel beserta keyword (paged).
    URL: GET /api/samples?limit=&offset=
    """
    try:
        ranked = service.list_keywords(limit=limit, offset=offset)
    except MinerError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return [{"sample_id": rk.sample_id, "formatted": rk.formatted(ascii_sep)} for rk in ranked]


@router.get("/api/samples/{sample_id}/keywords", response_model=KeywordResponse)
async def api_get_keywords(
    sample_id: str,
    ascii_sep: bool = False,
    service: KeywordQueryService = Depends(get_query_service),
):
    """
    API: Keyword satu sampel.
    URL: GET /api/samples/{sample_id}/keywords
    """
    try:
        ranked = service.get_keywords(sample_id)
    except MinerError as e:
        raise HTTPException(status_code=400, detail=str(e))
    if ranked is None:
        raise HTTPException(status_code=404, detail=f"Sampel '{sample_id}' tidak ditemukan")
    return KeywordResponse(
        sample_id=ranked.sample_id,
        keywords=[{"token": token, "count": count} for token, count in ranked.entries],
        formatted=ranked.formatted(ascii_sep),
    )


@router.post("/api/tokenize", response_model=TokenizeResponse)
async def api_tokenize(request: TokenizeRequest):
    """
    API: Tokenisasi satu label.
    URL: POST /api/tokenize
    """
    return TokenizeResponse(label=request.label, tokens=tokenize_label(request.label).tokens)
