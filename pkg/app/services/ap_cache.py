"""
On-disk cache of base-curve Frobenius traces a_ell(E11), a_ell(E19)

File format:
    #version 1
    2,-2,0
    3,-1,-2
    ...
one line per prime, ascending, plain decimal, newline-terminated. Rows for
ell = 11 and ell = 19 hold the multiplicative-reduction value at the bad prime.
Writes go to a temp file in the same directory and are renamed into place.
"""

import logging
import os
import tempfile
import threading
from pathlib import Path

from app.config import settings
from app.services.arith import primes_in_range
from app.services.elliptic import BASE_CURVES, ap, bad_reduction_ap


logger = logging.getLogger(__name__)

CACHE_HEADER = "#version 1"
LEVELS = (11, 19)


class ApCacheError(ValueError):
    """Malformed cache file"""


def base_ap(N: int, ell: int) -> int:
    """a_ell of X_0(N), using the split/nonsplit value at ell = N"""
    E = BASE_CURVES[N]
    if ell == N:
        return bad_reduction_ap(E, ell)
    return ap(E, ell)


class ApCache:
    """
    Frobenius traces of the two base curves for every prime up to `limit`

    With path=None the cache lives in memory only.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._rows: dict[int, tuple[int, int]] = {}
        self._limit = 1
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._load()

    @property
    def limit(self) -> int:
        return self._limit

    def _load(self) -> None:
        text = self.path.read_text(encoding="utf-8")
        lines = text.splitlines()
        if not lines or lines[0].strip() != CACHE_HEADER:
            raise ApCacheError(f"{self.path}: missing '{CACHE_HEADER}' header")

        rows = {}
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                ell, a11, a19 = (int(field) for field in line.split(","))
            except ValueError as e:
                raise ApCacheError(f"{self.path}:{lineno}: bad row {line!r}: {e}")
            rows[ell] = (a11, a19)

        # only trust a contiguous prefix of primes
        limit = 1
        for ell in primes_in_range(2, max(rows, default=1)):
            if ell not in rows:
                break
            limit = ell
        self._rows = {ell: rows[ell] for ell in rows if ell <= limit}
        self._limit = limit
        logger.info(f"[ApCache] Loaded {len(self._rows)} primes up to {limit} from {self.path}")

    def _write(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        body = "".join(f"{ell},{a11},{a19}\n" for ell, (a11, a19) in sorted(self._rows.items()))
        fd, tmp_name = tempfile.mkstemp(dir=self.path.parent, prefix=".ap_cache_", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(CACHE_HEADER + "\n" + body)
            os.replace(tmp_name, self.path)
        except OSError:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise

    def ensure(self, limit: int) -> None:
        """Compute and persist a_ell for all primes up to `limit`"""
        with self._lock:
            if limit <= self._limit:
                return
            new_primes = primes_in_range(self._limit + 1, limit)
            if not new_primes:
                self._limit = limit
                return
            logger.info(f"[ApCache] Counting points for {len(new_primes)} primes up to {limit}")
            for i, ell in enumerate(new_primes, start=1):
                self._rows[ell] = (base_ap(11, ell), base_ap(19, ell))
                if i % 5000 == 0:
                    logger.debug(f"[ApCache] {i}/{len(new_primes)} primes done (ell = {ell})")
            self._limit = limit
            if self.path is not None:
                self._write()
                logger.info(f"[ApCache] Wrote {len(self._rows)} primes to {self.path}")

    def table(self, N: int, limit: int) -> dict[int, int]:
        """{ell: a_ell(E_N)} for primes ell <= limit"""
        if N not in LEVELS:
            raise ValueError(f"Level must be 11 or 19, got {N}")
        self.ensure(limit)
        column = LEVELS.index(N)
        with self._lock:
            rows = list(self._rows.items())
        return {ell: row[column] for ell, row in rows if ell <= limit}


_default_cache: ApCache | None = None


def get_ap_cache() -> ApCache:
    """
    Process-wide cache backed by settings.ap_cache_path

    Created on first use so the file is read once per run.
    """
    global _default_cache

    if _default_cache is None:
        logger.info("[Service] Initializing ApCache singleton...")
        _default_cache = ApCache(settings.ap_cache_path)
    return _default_cache
