"""HTTP client for the compute service.

Without a server URL the client mounts the ASGI app in process, so the
command line works standalone while exercising the exact same code path a
deployed service would."""

from __future__ import annotations

import asyncio

import httpx


class ServiceError(RuntimeError):
    def __init__(self, status_code: int, detail: str):
        super().__init__(f"service error {status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


class _AsgiSyncTransport(httpx.BaseTransport):
    """Synchronous bridge onto the async in-process ASGI transport."""

    def __init__(self, app):
        self._transport = httpx.ASGITransport(app=app)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        content = request.read()
        inner = httpx.Request(
            request.method, request.url, headers=request.headers, content=content
        )

        async def run():
            response = await self._transport.handle_async_request(inner)
            body = b"".join([chunk async for chunk in response.stream])
            return response, body

        response, body = asyncio.run(run())
        return httpx.Response(
            response.status_code,
            headers=response.headers,
            content=body,
            request=request,
        )


class ServiceClient:
    def __init__(self, base_url: str | None = None, timeout: float = 600.0):
        if base_url:
            self._client = httpx.Client(base_url=base_url, timeout=timeout)
        else:
            from .service.app import create_app

            self._client = httpx.Client(
                transport=_AsgiSyncTransport(create_app()),
                base_url="http://jacobilab.internal",
                timeout=timeout,
            )

    def post(self, path: str, payload: dict) -> dict:
        response = self._client.post(path, json=payload)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise ServiceError(response.status_code, str(detail))
        return response.json()

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "ServiceClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
