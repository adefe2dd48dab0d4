"""
HTTP error mapping shared by the routers
Bad input (ValueError) becomes 400, anything else 500
"""

import logging

from fastapi import HTTPException


logger = logging.getLogger(__name__)


def bad_request(e: ValueError, message: str = "Invalid parameters") -> HTTPException:
    return HTTPException(
        status_code=400,
        detail={
            "message": message,
            "error": str(e),
        },
    )


def server_error(e: Exception, tag: str) -> HTTPException:
    logger.exception(f"[{tag}] Unexpected error: {e}")
    return HTTPException(
        status_code=500,
        detail={
            "message": "Computation failed",
            "error": str(e),
        },
    )
