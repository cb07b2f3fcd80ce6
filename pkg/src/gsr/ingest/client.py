"""Cursor-paginated retrieval from OpenAlex and Semantic Scholar.

Both APIs hand back an opaque continuation token with each page; the fetch
loop follows it until the source reports no further pages.
"""
from __future__ import annotations

import logging
import os
import threading
import time
from dataclasses import dataclass
from typing import Any, Iterator, Optional
from urllib.parse import urlsplit

import requests

from gsr.ingest.normalize import Source

log = logging.getLogger(__name__)

OPENALEX_BASE_URL = "https://api.openalex.org"
S2_BASE_URL = "https://api.semanticscholar.org"

OPENALEX_FIELDS = (
    "id", "doi", "title", "publication_year", "type", "fwci", "cited_by_count",
    "counts_by_year", "is_retracted", "is_paratext", "abstract_inverted_index",
    "referenced_works",
)
S2_FIELDS = ("paperId", "externalIds", "title", "year", "publicationTypes", "citationCount", "abstract")


class FetchError(Exception):
    pass


class NotFound(FetchError):
    pass


class MalformedResponse(FetchError):
    pass


class TransientFailure(FetchError):
    """Server or network errors persisted through every retry."""


class RateLimited(TransientFailure):
    pass


@dataclass(frozen=True)
class RateLimitPolicy:
    requests_per_second: float = 10.0
    max_attempts: int = 3
    backoff_base: float = 1.0
    backoff_cap: float = 30.0
    timeout: float = 30.0


@dataclass(frozen=True)
class VenueQuerySpec:
    source: Source
    external_id: str
    year_range: tuple[int, int]
    requested_fields: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "source", Source(self.source))
        if not self.requested_fields:
            default = OPENALEX_FIELDS if self.source is Source.OPENALEX else S2_FIELDS
            object.__setattr__(self, "requested_fields", default)
        start, end = self.year_range
        if start > end:
            raise ValueError(f"year_range start {start} after end {end}")


class HostRateLimiter:
    """Minimum-interval limiter shared by every caller hitting one host."""

    _registry: dict[tuple[str, float], "HostRateLimiter"] = {}
    _registry_lock = threading.Lock()

    def __init__(self, requests_per_second: float):
        self.interval = 1.0 / requests_per_second if requests_per_second > 0 else 0.0
        self._lock = threading.Lock()
        self._next_slot = 0.0

    @classmethod
    def for_host(cls, host: str, requests_per_second: float) -> "HostRateLimiter":
        key = (host, requests_per_second)
        with cls._registry_lock:
            if key not in cls._registry:
                cls._registry[key] = cls(requests_per_second)
            return cls._registry[key]

    def acquire(self) -> None:
        with self._lock:
            now = time.monotonic()
            wait = self._next_slot - now
            self._next_slot = max(now, self._next_slot) + self.interval
        if wait > 0:
            time.sleep(wait)


def _get_json(
    session: requests.Session,
    url: str,
    params: dict[str, Any],
    headers: dict[str, str],
    limits: RateLimitPolicy,
) -> dict[str, Any]:
    limiter = HostRateLimiter.for_host(urlsplit(url).netloc, limits.requests_per_second)
    last_status: Optional[int] = None
    for attempt in range(limits.max_attempts):
        limiter.acquire()
        retry_after = None
        try:
            resp = session.get(url, params=params, headers=headers, timeout=limits.timeout)
        except (requests.ConnectionError, requests.Timeout) as exc:
            log.warning("request to %s failed (%s), attempt %d", url, exc, attempt + 1)
            last_status = None
        else:
            if resp.status_code == 200:
                try:
                    payload = resp.json()
                except ValueError as exc:
                    raise MalformedResponse(f"{url}: body is not JSON") from exc
                if not isinstance(payload, dict):
                    raise MalformedResponse(f"{url}: expected a JSON object")
                return payload
            if resp.status_code == 404:
                raise NotFound(f"{url} params={params}")
            if resp.status_code != 429 and resp.status_code < 500:
                raise FetchError(f"{url}: HTTP {resp.status_code}")
            last_status = resp.status_code
            retry_after = resp.headers.get("Retry-After")
            log.warning("HTTP %d from %s, attempt %d", resp.status_code, url, attempt + 1)
        if attempt + 1 < limits.max_attempts:
            delay = limits.backoff_base * 2 ** attempt
            if retry_after is not None:
                try:
                    delay = max(delay, float(retry_after))
                except ValueError:
                    pass
            time.sleep(min(delay, limits.backoff_cap))
    if last_status == 429:
        raise RateLimited(f"{url}: still rate limited after {limits.max_attempts} attempts")
    raise TransientFailure(f"{url}: gave up after {limits.max_attempts} attempts (last status {last_status})")


def fetch_source_papers(
    spec: VenueQuerySpec,
    limits: RateLimitPolicy = RateLimitPolicy(),
    *,
    base_url: Optional[str] = None,
    session: Optional[requests.Session] = None,
    per_page: int = 200,
    contact_email: Optional[str] = None,
    api_key: Optional[str] = None,
) -> Iterator[dict[str, Any]]:
    """Yield every raw record of ``spec`` in page order.

    ``contact_email`` and ``api_key`` fall back to ``GSR_CONTACT_EMAIL`` and
    ``GSR_S2_API_KEY``.
    """
    session = session or requests.Session()
    contact_email = contact_email or os.environ.get("GSR_CONTACT_EMAIL")
    api_key = api_key or os.environ.get("GSR_S2_API_KEY")
    start, end = spec.year_range

    if spec.source is Source.OPENALEX:
        url = (base_url or OPENALEX_BASE_URL).rstrip("/") + "/works"
        params: dict[str, Any] = {
            "filter": f"primary_location.source.id:{spec.external_id},publication_year:{start}-{end}",
            "select": ",".join(spec.requested_fields),
            "per-page": per_page,
            "cursor": "*",
        }
        if contact_email:
            params["mailto"] = contact_email
        headers: dict[str, str] = {}
        results_key, token_param = "results", "cursor"
    else:
        url = (base_url or S2_BASE_URL).rstrip("/") + "/graph/v1/paper/search/bulk"
        params = {
            "venue": spec.external_id,
            "year": f"{start}-{end}",
            "fields": ",".join(spec.requested_fields),
        }
        headers = {"x-api-key": api_key} if api_key else {}
        results_key, token_param = "data", "token"

    while True:
        payload = _get_json(session, url, params, headers, limits)
        page = payload.get(results_key)
        if page is None:
            raise MalformedResponse(f"{url}: response has no {results_key!r} list")
        if not isinstance(page, list):
            raise MalformedResponse(f"{url}: {results_key!r} is not a list")
        yield from page
        if spec.source is Source.OPENALEX:
            token = (payload.get("meta") or {}).get("next_cursor")
        else:
            token = payload.get("token")
        if not token or not page:
            return
        params = {**params, token_param: token}
