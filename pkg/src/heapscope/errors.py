"""Error type shared by the HTTP service and the CLI."""

from __future__ import annotations


class ApiError(Exception):
    """A user-facing failure with an HTTP status, stable code, and message."""

    def __init__(self, status: int, code: str, message: str, offset: int | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.offset = offset

    def body(self) -> dict:
        body = {"code": self.code, "message": self.message}
        if self.offset is not None:
            body["offset"] = self.offset
        return body
