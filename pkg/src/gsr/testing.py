"""In-process HTTP server replaying OpenAlex / Semantic Scholar style pages.

Offsets double as cursors, so any page size yields every record exactly
once. ``faults`` queues HTTP status codes to return before real responses,
which is how retry and backoff behaviour is exercised.
"""
from __future__ import annotations

import json
import threading
from collections import deque
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional
from urllib.parse import parse_qs, urlsplit


class FixtureServer:
    def __init__(
        self,
        openalex: Optional[dict[str, list[dict]]] = None,
        s2: Optional[dict[str, list[dict]]] = None,
        s2_page_size: int = 1000,
        trailing_cursor: bool = False,
    ):
        self.openalex = openalex or {}
        self.s2 = s2 or {}
        self.s2_page_size = s2_page_size
        # OpenAlex keeps handing out a cursor until an empty page; mimic on request
        self.trailing_cursor = trailing_cursor
        self.faults: deque[int] = deque()
        self.requests: list[str] = []
        self._lock = threading.Lock()
        self._httpd: Optional[ThreadingHTTPServer] = None
        self._thread: Optional[threading.Thread] = None

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def __enter__(self) -> "FixtureServer":
        fixture = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _send(self, status: int, payload=None):
                body = json.dumps(payload if payload is not None else {}).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def do_GET(self):
                with fixture._lock:
                    fixture.requests.append(self.path)
                    fault = fixture.faults.popleft() if fixture.faults else None
                if fault is not None:
                    self._send(fault, {"error": "injected"})
                    return
                parts = urlsplit(self.path)
                query = {k: v[0] for k, v in parse_qs(parts.query).items()}
                if parts.path == "/works":
                    self._openalex(query)
                elif parts.path == "/graph/v1/paper/search/bulk":
                    self._s2(query)
                else:
                    self._send(404, {"error": "no route"})

            def _openalex(self, query):
                filters = dict(f.split(":", 1) for f in query.get("filter", "").split(","))
                lo, hi = (int(y) for y in filters["publication_year"].split("-"))
                works = fixture.openalex.get(filters["primary_location.source.id"])
                if works is None:
                    self._send(404, {"error": "unknown source"})
                    return
                works = [w for w in works if lo <= w["publication_year"] <= hi]
                offset = 0 if query.get("cursor", "*") == "*" else int(query["cursor"])
                size = int(query.get("per-page", 25))
                page = works[offset:offset + size]
                more = offset + size < len(works) or (fixture.trailing_cursor and page)
                self._send(200, {
                    "meta": {"count": len(works), "next_cursor": str(offset + size) if more else None},
                    "results": page,
                })

            def _s2(self, query):
                papers = fixture.s2.get(query.get("venue", ""))
                if papers is None:
                    self._send(404, {"error": "unknown venue"})
                    return
                lo, hi = (int(y) for y in query["year"].split("-"))
                papers = [p for p in papers if p.get("year") is None or lo <= p["year"] <= hi]
                offset = int(query.get("token", 0))
                size = fixture.s2_page_size
                page = papers[offset:offset + size]
                more = offset + size < len(papers)
                self._send(200, {"total": len(papers), "token": str(offset + size) if more else None, "data": page})

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, kwargs={"poll_interval": 0.02}, daemon=True)
        self._thread.start()
        return self

    def __exit__(self, *exc) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join()
