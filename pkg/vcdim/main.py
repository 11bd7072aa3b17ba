import json
import logging

from fastapi import FastAPI, Request, status
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from vcdim import __version__
from vcdim.api import estimation, selection, simulation
from vcdim.core.config import settings
from vcdim.core.errors import VcdimError
from vcdim.core.log import setup_logging
from vcdim.core.utils import DateTimeEncoder
from vcdim.schemas.common import ErrorResponse

setup_logging()
logger = logging.getLogger(__name__)


class CustomJSONResponse(JSONResponse):
    """Custom JSONResponse that handles datetime and numpy serialization"""
    def render(self, content) -> bytes:
        return json.dumps(
            content,
            ensure_ascii=False,
            allow_nan=False,
            cls=DateTimeEncoder,
            separators=(",", ":"),
        ).encode("utf-8")


app = FastAPI(
    title=settings.PROJECT_NAME,
    description="Bootstrap estimation of VC dimension and model selection for linear models",
    version=__version__,
    default_response_class=CustomJSONResponse,
    openapi_url=f"{settings.API_V1_STR}/openapi.json",
    docs_url=f"{settings.API_V1_STR}/docs",
    redoc_url=f"{settings.API_V1_STR}/redoc",
)


@app.exception_handler(VcdimError)
async def vcdim_exception_handler(request: Request, exc: VcdimError):
    """Pipeline errors are the caller's input problem"""
    logger.warning(f"{request.url.path}: {exc.error_type}: {exc.message}")
    return CustomJSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content=ErrorResponse(
            code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            message=exc.message,
            details={"path": request.url.path, **exc.details},
            errors=[{"type": exc.error_type, "message": exc.message}],
        ).model_dump(),
    )


@app.exception_handler(StarletteHTTPException)
async def http_exception_handler(request: Request, exc: StarletteHTTPException):
    """Handle HTTP exceptions with standard format"""
    message = "Resource not found" if exc.status_code == 404 else str(exc.detail)
    return CustomJSONResponse(
        status_code=exc.status_code,
        content=ErrorResponse(
            code=exc.status_code,
            message=message,
            details={"path": request.url.path},
            errors=[{"type": "http_error", "message": str(exc.detail)}],
        ).model_dump(),
    )


@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request: Request, exc: RequestValidationError):
    """Handle validation errors with per-field feedback"""
    errors = []
    for error in exc.errors():
        loc = [str(part) for part in error.get("loc", ()) if part != "body"]
        field = ".".join(loc) if loc else None
        errors.append({
            "type": error["type"],
            "field": field,
            "message": f"{field}: {error['msg']}" if field else error["msg"],
        })

    return CustomJSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content=ErrorResponse(
            code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            message=errors[0]["message"] if errors else "Validation error",
            details={"path": request.url.path},
            errors=errors,
        ).model_dump(),
    )


@app.exception_handler(Exception)
async def general_exception_handler(request: Request, exc: Exception):
    """Handle all other exceptions"""
    logger.exception(f"Unhandled error on {request.url.path}")
    return CustomJSONResponse(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        content=ErrorResponse(
            code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            message=str(exc),
            details={"path": request.url.path},
        ).model_dump(),
    )


# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(estimation.router, prefix=f"{settings.API_V1_STR}/estimation", tags=["Estimation"])
app.include_router(selection.router, prefix=f"{settings.API_V1_STR}/selection", tags=["Selection"])
app.include_router(simulation.router, prefix=f"{settings.API_V1_STR}/simulation", tags=["Simulation"])


@app.get("/")
async def root():
    return {
        "message": f"Welcome to the {settings.PROJECT_NAME}",
        "version": __version__,
        "docs": f"{settings.API_V1_STR}/docs",
        "redoc": f"{settings.API_V1_STR}/redoc",
    }
