"""On-disk cache of bar resolutions and homotopy liftings.

Entries are keyed by the content hash of the algebra and the window N.  Each
file carries the sha256 of its payload, so a damaged or edited entry is
refused instead of silently feeding wrong matrices into a run.
"""

import json
import os
import tempfile
from pathlib import Path

from .algebra import AlgebraPresentation
from .bar import BarResolution
from .chain import CHAIN_SCHEMA, complex_to_dict, decode_array, encode_array, payload_hash
from .errors import ValidationError


class CacheError(ValidationError):
    """A cache entry is unreadable or fails its stored hash."""


class ResolutionCache:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _key(self, algebra: AlgebraPresentation, N: int) -> str:
        return f"{algebra.content_hash()[:16]}-N{N}"

    def resolution_path(self, algebra, N: int) -> Path:
        return self.root / f"{self._key(algebra, N)}.chain.json"

    def liftings_path(self, algebra, N: int) -> Path:
        return self.root / f"{self._key(algebra, N)}.lift.json"

    # envelope ------------------------------------------------------------

    def _write(self, path: Path, algebra, N: int, payload: dict):
        doc = {"schema": CHAIN_SCHEMA, "algebra_hash": algebra.content_hash(), "N": N,
               "payload": payload, "payload_hash": payload_hash(payload)}
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
        os.replace(tmp, path)

    def _read(self, path: Path, algebra, N: int) -> dict | None:
        if not path.exists():
            return None
        try:
            doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CacheError(f"cache entry {path} is unreadable: {exc}") from None
        if doc.get("schema") != CHAIN_SCHEMA:
            raise CacheError(f"cache entry {path} has schema {doc.get('schema')!r}")
        if doc.get("algebra_hash") != algebra.content_hash() or doc.get("N") != N:
            raise CacheError(f"cache entry {path} belongs to a different algebra or window")
        payload = doc.get("payload")
        if not isinstance(payload, dict) or payload_hash(payload) != doc.get("payload_hash"):
            raise CacheError(f"cache entry {path} fails its hash check")
        return payload

    # resolutions ---------------------------------------------------------

    def resolution(self, algebra: AlgebraPresentation, N: int) -> BarResolution:
        """The bar resolution with window N, read from disk or built and stored."""
        path = self.resolution_path(algebra, N)
        payload = self._read(path, algebra, N)
        if payload is not None:
            self.hits += 1
            images = {e["degree"] + 1: decode_array(e["d_images"]) for e in payload["degrees"] if "d_images" in e}
            return BarResolution(algebra, N, images=images)
        self.misses += 1
        bar = BarResolution(algebra, N)
        self._write(path, algebra, N, complex_to_dict(bar.complex, bar.mu))
        return bar

    # liftings ------------------------------------------------------------

    def load_liftings(self, engine) -> int:
        """Fill the engine's lifting table from disk; returns the number loaded."""
        from .lifting import HomotopyLifting
        from .ext import Cocycle
        bar = engine.bar
        payload = self._read(self.liftings_path(bar.algebra, bar.N), bar.algebra, bar.N)
        if payload is None or payload.get("diagonal") != engine.diag.kind:
            return 0
        count = 0
        for entry in payload["liftings"]:
            f = Cocycle(bar, entry["degree"], decode_array(entry["values"]))
            comps = {int(i): decode_array(x) for i, x in entry["components"].items()}
            lift = HomotopyLifting(f, engine.diag, comps, entry["top"], entry["normalized"])
            engine.remember(lift, entry["key_top"])
            count += 1
        return count

    def store_liftings(self, engine):
        bar = engine.bar
        entries = []
        for key_top, lift in engine.stored_liftings():
            entries.append({"degree": lift.cocycle.degree, "values": encode_array(lift.cocycle.values),
                            "top": lift.top, "key_top": key_top, "normalized": bool(lift.normalized),
                            "components": {str(i): encode_array(x) for i, x in sorted(lift.components.items())}})
        entries.sort(key=lambda e: (e["degree"], e["values"]["data"], -1 if e["key_top"] is None else e["key_top"]))
        self._write(self.liftings_path(bar.algebra, bar.N), bar.algebra, bar.N,
                    {"diagonal": engine.diag.kind, "liftings": entries})
