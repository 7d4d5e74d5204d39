"""Local curation service.

Serves the current map and accepts thesaurus additions followed by
rebuilds, which is the loop an analyst drives from the viewer. The map
snapshot is an immutable value swapped atomically after a rebuild, so
readers never observe a half-built map; rebuilds are serialized by a
non-blocking lock (a second concurrent rebuild gets 409).

Endpoints (loopback by default):
    GET  /map                  current map JSON
    GET  /config               pipeline config snapshot
    GET  /density              density grid for the current map
    GET  /node/{id}/neighbors  neighbor labels and strengths
    POST /thesaurus            append rules (thesaurus TSV schema)
    POST /rebuild              re-run the pipeline, return the new map
"""

from __future__ import annotations

import logging
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .corpus import read_ndjson
from .errors import ScimapError
from .mapfile import ItemMap, write_json
from .mapfile import _emit as emit_json
from .overlay import density_field
from .pipeline import PipelineConfig, curation_round
from .thesaurus import RuleSet, parse_thesaurus

logger = logging.getLogger(__name__)

__all__ = ["MapService", "RebuildInProgress", "create_server", "run_server"]

CORPUS_FILENAME = "corpus.ndjson"
THESAURUS_FILENAME = "thesaurus.tsv"


class RebuildInProgress(ScimapError):
    pass


class MapService:
    """Pipeline state behind the HTTP surface; usable directly in tests."""

    def __init__(self, data_dir: Path, config: PipelineConfig):
        self.data_dir = Path(data_dir)
        self.config = config
        corpus_path = self.data_dir / CORPUS_FILENAME
        if not corpus_path.exists():
            raise FileNotFoundError(f"no corpus cache at {corpus_path}")
        with open(corpus_path, encoding="utf-8") as fh:
            self.records = read_ndjson(fh)

        thesaurus_path = self.data_dir / THESAURUS_FILENAME
        if thesaurus_path.exists():
            self.rules = parse_thesaurus(thesaurus_path.read_bytes())
        else:
            self.rules = RuleSet([])

        self._rebuild_lock = threading.Lock()
        self._rules_lock = threading.Lock()
        self._snapshot: tuple[ItemMap, bytes] | None = None
        self._do_rebuild()

    @property
    def item_map(self) -> ItemMap:
        return self._snapshot[0]

    @property
    def map_json(self) -> bytes:
        return self._snapshot[1]

    def add_rules(self, tsv_text: str) -> int:
        """Validate and append rules; returns how many were added.

        The combined rule set must stay valid (no duplicate labels, no
        merge cycles); on failure nothing is changed.
        """
        with self._rules_lock:
            new_rules = parse_thesaurus(tsv_text)
            combined = RuleSet(list(self.rules) + list(new_rules))
            self.rules = combined
            path = self.data_dir / THESAURUS_FILENAME
            with open(path, "a", encoding="utf-8", newline="\n") as fh:
                for rule in new_rules:
                    fh.write(rule.to_tsv_line() + "\n")
        return len(new_rules)

    def rebuild(self) -> bytes:
        """Re-run the pipeline with the current rules; 409 when one is running."""
        if not self._rebuild_lock.acquire(blocking=False):
            raise RebuildInProgress("a rebuild is already in progress")
        try:
            self._do_rebuild()
            return self.map_json
        finally:
            self._rebuild_lock.release()

    def _do_rebuild(self) -> None:
        item_map, _ = curation_round(self.records, self.rules, self.config)
        self._snapshot = (item_map, write_json(item_map))

    def neighbors(self, node_id: int) -> dict | None:
        item_map = self.item_map
        node = item_map.node_by_id(node_id)
        if node is None:
            return None
        return {
            "id": node.id,
            "label": node.label,
            "neighbors": [
                {"id": other.id, "label": other.label, "strength": strength}
                for other, strength in item_map.neighbors_of(node_id)
            ],
        }

    def config_json(self) -> bytes:
        item_map = self.item_map
        doc = {
            "unit": self.config.unit.value,
            "min_occurrences": self.config.min_occurrences,
            "resolution": self.config.resolution,
            "seed": self.config.seed,
            "restarts": self.config.restarts,
            "max_iterations": self.config.max_iterations,
            "rel_tolerance": self.config.rel_tolerance,
            "jitter_epsilon": self.config.jitter_epsilon,
            "record_count": item_map.record_count,
            "score_low": item_map.score_low,
            "score_high": item_map.score_high,
            "rule_count": len(self.rules),
        }
        return emit_json(doc).encode("utf-8")

    def density_json(self, grid_resolution: int = 96) -> bytes:
        item_map = self.item_map
        positions = [(n.x, n.y) for n in item_map.nodes]
        weights = [n.occurrences for n in item_map.nodes]
        field = density_field(positions, weights, grid_resolution=grid_resolution)
        doc = {
            "bounds": list(field.bounds),
            "bandwidth": field.bandwidth,
            "grid": [[float(v) for v in row] for row in field.grid],
        }
        return emit_json(doc).encode("utf-8")


_NEIGHBORS_RE = re.compile(r"^/node/(\d+)/neighbors$")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
}


class _Handler(BaseHTTPRequestHandler):
    service: MapService
    frontend_dir: Path | None = None

    def log_message(self, fmt, *args):
        logger.debug("%s - %s", self.address_string(), fmt % args)

    def _send(self, status: int, body: bytes, content_type="application/json"):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, message: str):
        self._send(status, emit_json({"error": message}).encode("utf-8"))

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_GET(self):
        path = self.path.split("?", 1)[0]
        if path == "/map":
            self._send(200, self.service.map_json)
        elif path == "/config":
            self._send(200, self.service.config_json())
        elif path == "/density":
            self._send(200, self.service.density_json())
        elif match := _NEIGHBORS_RE.match(path):
            payload = self.service.neighbors(int(match.group(1)))
            if payload is None:
                self._send_error_json(404, "unknown node")
            else:
                self._send(200, emit_json(payload).encode("utf-8"))
        else:
            found = self._static_file(path)
            if found is None:
                self._send_error_json(404, "not found")
            else:
                body, content_type = found
                self._send(200, body, content_type)

    def _static_file(self, path: str) -> tuple[bytes, str] | None:
        if self.frontend_dir is None:
            return None
        if path == "/":
            path = "/index.html"
        root = self.frontend_dir.resolve()
        candidate = (root / path.lstrip("/")).resolve()
        if root not in candidate.parents and candidate != root:
            return None
        if not candidate.is_file():
            return None
        content_type = _CONTENT_TYPES.get(candidate.suffix, "application/octet-stream")
        return candidate.read_bytes(), content_type

    def _read_body(self) -> str:
        length = int(self.headers.get("Content-Length", "0"))
        return self.rfile.read(length).decode("utf-8")

    def do_POST(self):
        path = self.path.split("?", 1)[0]
        if path == "/thesaurus":
            try:
                added = self.service.add_rules(self._read_body())
            except ScimapError as exc:
                self._send_error_json(400, f"{type(exc).__name__}: {exc}")
                return
            self._send(200, emit_json({"added": added}).encode("utf-8"))
        elif path == "/rebuild":
            try:
                body = self.service.rebuild()
            except RebuildInProgress as exc:
                self._send_error_json(409, str(exc))
                return
            except ScimapError as exc:
                self._send_error_json(400, f"{type(exc).__name__}: {exc}")
                return
            self._send(200, body)
        else:
            self._send_error_json(404, "not found")


def create_server(
    service: MapService,
    host: str = "127.0.0.1",
    port: int = 8765,
    frontend_dir: Path | None = None,
) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {
        "service": service,
        "frontend_dir": frontend_dir,
    })
    return ThreadingHTTPServer((host, port), handler)


def run_server(service, host="127.0.0.1", port=8765, frontend_dir=None) -> None:
    server = create_server(service, host, port, frontend_dir)
    logger.info("serving on http://%s:%d", host, port)
    print(f"serving on http://{host}:{port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
