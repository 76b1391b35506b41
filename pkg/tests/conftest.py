"""Shared test helpers."""

import asyncio

import httpx


class SyncASGIClient:
    """Synchronous request facade over an ASGI app.

    httpx's ASGI transport is async-only; tests want plain calls, so each
    request runs in its own short event loop.
    """

    def __init__(self, app, base_url: str = "http://service"):
        self._app = app
        self._base_url = base_url

    def request(self, method: str, url: str, **kwargs) -> httpx.Response:
        async def go() -> httpx.Response:
            transport = httpx.ASGITransport(app=self._app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url=self._base_url) as client:
                return await client.request(method, url, **kwargs)

        return asyncio.run(go())

    def get(self, url: str, **kwargs) -> httpx.Response:
        return self.request("GET", url, **kwargs)

    def post(self, url: str, **kwargs) -> httpx.Response:
        return self.request("POST", url, **kwargs)

    def close(self) -> None:
        pass
