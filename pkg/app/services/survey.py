"""
Census and experiment orchestration
Enumerates the primes p for which C(11, p) or C(19, p) is a candidate for a
new PSL_2(F_p) realization, attaches rank verdicts on demand, checks the two
worked examples, and runs the class-number counting experiment.
"""

import csv
import io
import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from math import gcd
from pathlib import Path

from app.config import settings
from app.services.ap_cache import ApCache, get_ap_cache
from app.services.arith import (
    class_number,
    field_discriminant,
    kronecker,
    primes_in_range,
)
from app.services.elliptic import (
    MAZUR_BOUND,
    ProjectivePoint,
    WeierstrassCurve,
    c_curve,
    isomorphism_scale,
    on_curve,
    torsion_order,
)
from app.services.lseries import (
    RankEstimate,
    RankVerdict,
    analytic_rank,
    sign,
    truncation_length,
)


logger = logging.getLogger(__name__)

SYMBOL_PRIMES = (2, 3, 5, 7, 11, 19)
UNCOVERED_PRIMES = (2, 3, 5, 7)
LEVELS = (11, 19)
STRATA = ("A", "B", "both")

CSV_COLUMNS = ["p", "mod4", "k2", "k3", "k5", "k7", "k11", "k19",
               "chosen_N", "sign", "L1", "L1prime", "verdict", "realized"]

# odd sign needs rank 1; even sign needs apparent rank >= 2 and a certified point
_REALIZING = {1: RankEstimate.APPARENT_EVEN, -1: RankEstimate.ONE}


class SurveyOutputError(OSError):
    """Writing a survey artifact failed"""

    def __init__(self, path: Path, cause: Exception):
        self.path = Path(path)
        super().__init__(f"Could not write {self.path}: {cause}")


# ============================================================================
# Census
# ============================================================================

@dataclass(frozen=True)
class CensusRecord:
    """
    One census prime with its quadratic symbols

    `verdicts` is empty until rank verdicts are attached; `realized` is None
    while they are pending.
    """

    p: int
    mod4: int
    symbols: dict[int, int]
    candidate_levels: tuple[int, ...]
    chosen_N: int | None
    sign: int
    verdicts: dict[int, RankVerdict] = field(default_factory=dict)
    realized: bool | None = None

    @property
    def stratum(self) -> str:
        return "A" if self.mod4 == 1 else "B"

    @property
    def covered_by_shih_malle(self) -> bool:
        return any(self.symbols[q] == -1 for q in UNCOVERED_PRIMES)

    @property
    def new(self) -> bool:
        return all(self.symbols[q] == 1 for q in UNCOVERED_PRIMES)

    @property
    def pending(self) -> bool:
        return self.realized is None

    def chosen_verdict(self) -> RankVerdict | None:
        return self.verdicts.get(self.chosen_N) if self.chosen_N is not None else None


def _symbols(p: int) -> dict[int, int]:
    return {q: kronecker(q, p) for q in SYMBOL_PRIMES}


def make_record(p: int) -> CensusRecord | None:
    """Record for p when p is new with a valid level, else None"""
    symbols = _symbols(p)
    if any(symbols[q] != 1 for q in UNCOVERED_PRIMES):
        return None
    levels = tuple(N for N in LEVELS if symbols[N] == -1)
    if not levels:
        return None
    return CensusRecord(
        p=p,
        mod4=p % 4,
        symbols=symbols,
        candidate_levels=levels,
        chosen_N=levels[0],
        sign=sign(levels[0], p),
    )


def _stratum(X: int, residue: int) -> list[CensusRecord]:
    records = []
    for p in primes_in_range(3, X):
        if p % 4 != residue:
            continue
        record = make_record(p)
        if record is not None:
            records.append(record)
    return records


def census_stratum_A(X: int) -> list[CensusRecord]:
    """New primes p <= X with p = 1 (mod 4) and a valid level; sign -1"""
    records = _stratum(X, 1)
    logger.debug(f"[Census] Stratum A up to {X}: {len(records)} primes")
    return records


def census_stratum_B(X: int) -> list[CensusRecord]:
    """New primes p <= X with p = 3 (mod 4) and a valid level; sign +1"""
    records = _stratum(X, 3)
    logger.debug(f"[Census] Stratum B up to {X}: {len(records)} primes")
    return records


def census(X: int, stratum: str = "both") -> list[CensusRecord]:
    if stratum not in STRATA:
        raise ValueError(f"Stratum must be one of {STRATA}, got {stratum!r}")
    if stratum == "A":
        return census_stratum_A(X)
    if stratum == "B":
        return census_stratum_B(X)
    return sorted(census_stratum_A(X) + census_stratum_B(X), key=lambda r: r.p)


def new_primes(X: int) -> list[int]:
    """Primes p <= X with (q/p) = +1 for q = 2, 3, 5, 7"""
    return [p for p in primes_in_range(3, X) if all(kronecker(q, p) == 1 for q in UNCOVERED_PRIMES)]


def certified_levels(p: int) -> frozenset[int]:
    """Levels N for which a worked example certifies a point of infinite order on C(N, p)"""
    return frozenset(N for N, q in _certified_examples() if q == p)


@lru_cache(maxsize=1)
def _certified_examples() -> frozenset[tuple[int, int]]:
    return frozenset((check.N, check.p) for check in map(verify_example, WORKED_EXAMPLES) if check.passed)


def attach_verdicts(record: CensusRecord, verdicts: dict[int, RankVerdict]) -> CensusRecord:
    """
    Record with verdicts for its candidate levels

    Odd sign: a level realizes PSL_2(F_p) when its verdict is rank 1. Even
    sign: apparent rank >= 2 is not enough, the level also needs a certified
    point of infinite order (certified_levels). chosen_N becomes the first
    realizing level, else the first level with the wanted verdict, else the
    first candidate.
    """
    wanted = _REALIZING[record.sign]
    supported = [N for N in record.candidate_levels if N in verdicts and verdicts[N].estimate is wanted]
    if record.sign == 1:
        certified = certified_levels(record.p)
        realizing = [N for N in supported if N in certified]
    else:
        realizing = supported
    chosen = (realizing or supported or record.candidate_levels)[0]
    return replace(record, verdicts=dict(verdicts), chosen_N=chosen, realized=bool(realizing))


def rank_record(record: CensusRecord, tau: float | None = None, cache: ApCache | None = None) -> CensusRecord:
    verdicts = {N: analytic_rank(N, record.p, tau=tau, cache=cache) for N in record.candidate_levels}
    return attach_verdicts(record, verdicts)


def realization_summary(records: list[CensusRecord]) -> dict[str, dict[str, int]]:
    summary = {s: {"records": 0, "realized": 0, "pending": 0} for s in ("A", "B")}
    for record in records:
        counts = summary[record.stratum]
        counts["records"] += 1
        if record.pending:
            counts["pending"] += 1
        elif record.realized:
            counts["realized"] += 1
    return summary


# ============================================================================
# Worked examples
# ============================================================================

@dataclass(frozen=True)
class WorkedExample:
    name: str
    N: int
    p: int
    ainvs: tuple[int, int, int, int, int]
    point: tuple[int, int, int]


WORKED_EXAMPLES = (
    WorkedExample(
        name="C(11,4079)",
        N=11,
        p=4079,
        ainvs=(0, -1, 1, -171928490, 1571689994520),
        point=(51362438166007626829703, -4948233782238353787199293, 5697234033382001683),
    ),
    WorkedExample(
        name="C(19,5591)",
        N=19,
        p=5591,
        ainvs=(0, 1, 1, -291753289, 2040511796399),
        point=(-99184162, 21162527913, 10648),
    ),
)


@dataclass(frozen=True)
class ExampleCheck:
    name: str
    N: int
    p: int
    reconstructed: bool
    isomorphic: bool
    on_curve: bool
    nontorsion: bool
    torsion_bound: int = MAZUR_BOUND
    scale: str | None = None

    @property
    def passed(self) -> bool:
        return self.reconstructed and self.isomorphic and self.on_curve and self.nontorsion


def verify_example(example: WorkedExample) -> ExampleCheck:
    printed = WeierstrassCurve.from_ainvs(example.ainvs)
    try:
        twist = c_curve(example.N, example.p)
        reconstructed = True
    except ValueError:
        twist, reconstructed = None, False

    u = isomorphism_scale(twist, printed) if twist is not None else None
    point = ProjectivePoint(*example.point)
    lies_on = on_curve(printed, point)
    nontorsion = lies_on and not point.is_infinity and torsion_order(printed, point) is None

    return ExampleCheck(
        name=example.name,
        N=example.N,
        p=example.p,
        reconstructed=reconstructed,
        isomorphic=u is not None,
        on_curve=lies_on,
        nontorsion=nontorsion,
        scale=None if u is None else str(u),
    )


def verify_examples() -> list[ExampleCheck]:
    checks = [verify_example(example) for example in WORKED_EXAMPLES]
    for check in checks:
        logger.info(f"[Survey] {check.name}: {'ok' if check.passed else 'FAILED'}")
    return checks


# ============================================================================
# Class-number experiment
# ============================================================================

def conjecture_count(X: int, m: int, M: int) -> int:
    """
    Number of primes p <= X, p != 3, p = m (mod M) with 3 not dividing the
    class number of Q(sqrt(-3p))
    """
    if M < 1 or gcd(m, M) != 1:
        raise ValueError(f"Residue {m} must be a unit modulo {M}")
    count = 0
    for p in primes_in_range(2, X):
        if p == 3 or (p - m) % M:
            continue
        if class_number(field_discriminant(-3 * p)) % 3:
            count += 1
    return count


# ============================================================================
# Survey runs
# ============================================================================

@dataclass(frozen=True)
class SurveyConfig:
    bound: int
    stratum: str = "both"
    ranks: bool = False
    tau: float | None = None

    def __post_init__(self):
        if self.bound < 2:
            raise ValueError(f"Survey bound must be at least 2, got {self.bound}")
        if self.stratum not in STRATA:
            raise ValueError(f"Stratum must be one of {STRATA}, got {self.stratum!r}")
        if self.tau is not None and self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")


@dataclass
class SurveyResult:
    config: SurveyConfig
    records: list[CensusRecord]
    summary: dict
    paths: dict[str, str]


def _real(x: float | None) -> str:
    return "" if x is None else f"{x:.12g}"


def csv_row(record: CensusRecord) -> list[str]:
    verdict = record.chosen_verdict()
    return [
        str(record.p),
        str(record.mod4),
        *(str(record.symbols[q]) for q in SYMBOL_PRIMES),
        "" if record.chosen_N is None else str(record.chosen_N),
        str(record.sign),
        _real(verdict.l_value if verdict else None),
        _real(verdict.l_prime_value if verdict else None),
        verdict.estimate.value if verdict else "pending",
        "pending" if record.pending else str(record.realized).lower(),
    ]


def render_csv(records: list[CensusRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(csv_row(r) for r in records)
    return buffer.getvalue()


def record_dict(record: CensusRecord) -> dict:
    return {
        "p": record.p,
        "stratum": record.stratum,
        "mod4": record.mod4,
        "symbols": {str(q): s for q, s in record.symbols.items()},
        "candidate_levels": list(record.candidate_levels),
        "chosen_N": record.chosen_N,
        "sign": record.sign,
        "new": record.new,
        "verdicts": {
            str(N): {
                "estimate": v.estimate.value,
                "L1": v.l_value,
                "L1prime": v.l_prime_value,
                "nmax": v.nmax_used,
                "tau": v.tau,
            }
            for N, v in record.verdicts.items()
        },
        "realized": record.realized,
    }


def _write_atomic(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    except OSError as e:
        raise SurveyOutputError(path, e) from e
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except OSError as e:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise SurveyOutputError(path, e) from e


_worker_caches: dict[str, ApCache] = {}


def _rank_job(job: tuple[int, tuple[int, ...], float | None, str]) -> dict[int, RankVerdict]:
    # runs in a worker process; reads the a_ell cache file the parent filled
    p, levels, tau, cache_path = job
    cache = _worker_caches.get(cache_path)
    if cache is None:
        cache = _worker_caches[cache_path] = ApCache(cache_path)
    return {N: analytic_rank(N, p, tau=tau, cache=cache) for N in levels}


class SurveyService:
    """
    Runs census surveys and writes census.csv, census.json and summary.json

    Rank verdicts fan out over `workers` processes; the parent fills the a_ell
    cache first so the workers only read it.
    """

    def __init__(self, output_dir: str | Path, workers: int = 1, cache: ApCache | None = None):
        self.output_dir = Path(output_dir)
        self.workers = max(1, workers)
        self.cache = cache

    def _cache(self) -> ApCache:
        return self.cache or get_ap_cache()

    def rank_records(self, records: list[CensusRecord], tau: float | None) -> list[CensusRecord]:
        if not records:
            return records
        cache = self._cache()
        largest = max(N * r.p * r.p for r in records for N in r.candidate_levels)
        cache.ensure(truncation_length(largest))

        if self.workers == 1 or cache.path is None:
            return [rank_record(r, tau=tau, cache=cache) for r in records]

        jobs = [(r.p, r.candidate_levels, tau, str(cache.path)) for r in records]
        logger.info(f"[Survey] Ranking {len(jobs)} records on {self.workers} workers")
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            results = list(executor.map(_rank_job, jobs))
        return [attach_verdicts(r, v) for r, v in zip(records, results)]

    def run(self, config: SurveyConfig) -> SurveyResult:
        logger.info(f"[Survey] Census up to {config.bound}, stratum {config.stratum}, ranks={config.ranks}")
        records = census(config.bound, config.stratum)
        if config.ranks:
            records = self.rank_records(records, config.tau)

        summary = {
            "config": asdict(config),
            "counts": realization_summary(records),
            "total": len(records),
            "smallest": records[0].p if records else None,
        }
        paths = {
            "csv": self.output_dir / "census.csv",
            "json": self.output_dir / "census.json",
            "summary": self.output_dir / "summary.json",
        }
        _write_atomic(paths["csv"], render_csv(records))
        _write_atomic(paths["json"], json.dumps(
            {"config": asdict(config), "records": [record_dict(r) for r in records]}, indent=2) + "\n")
        _write_atomic(paths["summary"], json.dumps(summary, indent=2) + "\n")
        logger.info(f"[Survey] Wrote {len(records)} records to {self.output_dir}")

        return SurveyResult(config=config, records=records, summary=summary,
                            paths={k: str(v) for k, v in paths.items()})


_survey_service: SurveyService | None = None


def get_survey_service() -> SurveyService:
    global _survey_service

    if _survey_service is None:
        logger.info("[Service] Initializing SurveyService singleton...")
        _survey_service = SurveyService(settings.output_dir, workers=settings.survey_workers)
    return _survey_service


def run_survey(config: SurveyConfig, service: SurveyService | None = None) -> SurveyResult:
    return (service or get_survey_service()).run(config)
