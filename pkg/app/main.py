"""
AV Keyword Miner - Main Application Entry Point
================================================

Read-only query API untuk hasil mining keyword dari label anti-virus.
Menggunakan FastAPI sebagai framework dan file teks di state directory
(hasil `cli.py mine` / `cli.py update`) sebagai data storage.

Cara menjalankan:
    cd app
    MINER_STATE_DIR=data/state uvicorn main:app --port 8000
    # atau: python cli.py serve --state data/state

Endpoint:
    - Health: http://localhost:8000/health
    - Stats: http://localhost:8000/api/stats
    - Keyword sampel: http://localhost:8000/api/samples/{sample_id}/keywords
    - API Docs: http://localhost:8000/docs
"""
import logging
import sys
from pathlib import Path

# Add app directory to path for imports
APP_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(APP_DIR))

from fastapi import FastAPI

from routes.keyword_routes import get_query_service, get_state_dir, router as keyword_router

logger = logging.getLogger(__name__)


# ============ Application Setup ============

app = FastAPI(
    title="AV Keyword Miner",
    description="Query API untuk keyword malware hasil mining label anti-virus",
    version="1.0.0",
    docs_url="/docs",
    redoc_url="/redoc"
)


# ============ Include Routers ============

app.include_router(keyword_router)


# ============ Startup Event ============

@app.on_event("startup")
async def startup_event():
    """
    Dijalankan saat aplikasi startup.
    Hanya melaporkan state directory; API tidak pernah menulis state.
    """
    state_dir = Path(get_state_dir())
    if not (state_dir / "version.json").exists():
        logger.warning("State belum ada di %s (jalankan 'cli.py mine --state %s' dulu)", state_dir, state_dir)
    logger.info("AV Keyword Miner API started, state directory: %s", state_dir)


# ============ Health Check ============

@app.get("/health", tags=["Health"])
async def health_check():
    """
    Health check endpoint.
    Returns status aplikasi dan info storage.
    """
    service = get_query_service()
    return {
        "status": "healthy",
        "storage": {
            "type": "file-based (state directory)",
            "state_dir": str(service.state_dir),
            "files": service.files(),
        }
    }


# ============ Run with Python ============

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "main:app",
        host="0.0.0.0",
        port=8000,
        log_level="info"
    )
