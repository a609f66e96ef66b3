from .keyword_routes import router as keyword_router

__all__ = ["keyword_router"]
