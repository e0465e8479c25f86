"""Experiment configuration: defaults, config-file parsing, CLI overrides.

Config files are plain text, one ``key = value`` pair per line, ``#`` starts
a comment, lists are comma-separated.  Unknown keys are errors.  Algorithm
entries use colon-joined tokens, e.g.::

    algorithms = omp, tomp:alpha=0.1, lomp:lambda=100, sgp:tau=0.1280624847, cosamp

An absent ``tau`` means the stopping threshold is the true noise energy of
each trial; a numeric ``tau`` fixes the threshold for that algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParseError, ValidationError
from .pursuit import AlgorithmSpec

DEFAULT_N = 256
DEFAULT_M_LIST = (16, 32, 64)
DEFAULT_K = 8
DEFAULT_SNR_LIST = (5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0)
DEFAULT_TRIALS = 1000
DEFAULT_SEED = 42
DEFAULT_OUTPUT_DIR = "out"

# Residual threshold proposed for SGP in its original reference.
SGP_FIXED_TAU = math.sqrt(0.0164)

# Step-size mode used for L-OMP benchmark entries: a per-iteration Gershgorin
# bound on the active Gram spectrum.  The whole-matrix "auto" mode satisfies
# the same constraint but is far too small a step at N >> m for the inner
# iteration to approach the least-squares estimate within a few hundred
# sweeps.
DEFAULT_LOMP_OMEGA = "support"

_CONFIG_KEYS = (
    "N", "m_list", "k", "snr_list_db", "noise_free", "trials",
    "master_seed", "algorithms", "output_dir",
)


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


@dataclass(frozen=True)
class AlgorithmEntry:
    """An algorithm plus its stopping choice (tau = None means the true noise energy)."""

    spec: AlgorithmSpec
    tau: float | None = None

    @property
    def algorithm(self) -> str:
        return self.spec.variant

    @property
    def params(self) -> str:
        """Canonical parameter string used in CSV output and labels."""
        spec = self.spec
        parts = []
        if spec.variant == "tomp":
            parts.append(f"alpha={_fmt(spec.alpha)}")
        elif spec.variant == "lomp":
            parts.append(f"lambda={spec.lam}")
            omega = spec.omega if spec.omega is not None else "auto"
            parts.append(f"omega={omega if isinstance(omega, str) else _fmt(omega)}")
        elif spec.variant == "sgp":
            parts.append(f"kmax={spec.k_max}")
            if spec.mu not in (None, "auto"):
                parts.append(f"mu={_fmt(spec.mu)}")
        elif spec.variant == "cosamp":
            parts.append(f"k={spec.k}")
        if self.tau is not None:
            parts.append(f"tau={_fmt(self.tau)}")
        return ";".join(parts)

    @property
    def label(self) -> str:
        return self.algorithm if not self.params else f"{self.algorithm} {self.params}"

    def token(self) -> str:
        """Round-trippable config token for this entry."""
        return self.algorithm + "".join(f":{p}" for p in self.params.split(";") if p)


def parse_algorithm_token(token: str, default_k: int) -> AlgorithmEntry:
    """Parse one ``name:key=value:...`` token; see the module docstring."""
    parts = [p.strip() for p in token.split(":")]
    name = parts[0].lower()
    kv = {}
    for part in parts[1:]:
        key, sep, val = part.partition("=")
        if not sep or not key.strip() or not val.strip():
            raise ParseError(f"malformed algorithm parameter {part!r} in {token!r}")
        key = key.strip().lower()
        if key in kv:
            raise ParseError(f"duplicate parameter {key!r} in {token!r}")
        kv[key] = val.strip()

    def take_float(key):
        raw = kv.pop(key)
        try:
            return float(raw)
        except ValueError:
            raise ParseError(f"{key} must be a number, got {raw!r}") from None

    def take_int(key):
        raw = kv.pop(key)
        try:
            return int(raw)
        except ValueError:
            raise ParseError(f"{key} must be an integer, got {raw!r}") from None

    tau = None
    if "tau" in kv:
        raw = kv.pop("tau")
        if raw != "eps":
            try:
                tau = float(raw)
            except ValueError:
                raise ParseError(f"tau must be a number or 'eps', got {raw!r}") from None

    if name == "omp":
        spec = AlgorithmSpec(variant="omp")
    elif name == "tomp":
        if "alpha" not in kv:
            raise ParseError(f"tomp requires alpha, e.g. tomp:alpha=1 (got {token!r})")
        spec = AlgorithmSpec(variant="tomp", alpha=take_float("alpha"))
    elif name == "lomp":
        if "lambda" not in kv:
            raise ParseError(f"lomp requires lambda, e.g. lomp:lambda=10 (got {token!r})")
        lam = take_int("lambda")
        omega = kv.pop("omega", DEFAULT_LOMP_OMEGA)
        if omega not in ("auto", "support"):
            try:
                omega = float(omega)
            except ValueError:
                raise ParseError(f"omega must be a number, 'auto', or 'support', got {omega!r}") from None
        spec = AlgorithmSpec(variant="lomp", lam=lam, omega=omega)
    elif name == "sgp":
        k_max = take_int("kmax") if "kmax" in kv else default_k
        mu = kv.pop("mu", "auto")
        if mu != "auto":
            try:
                mu = float(mu)
            except ValueError:
                raise ParseError(f"mu must be a number or 'auto', got {mu!r}") from None
        spec = AlgorithmSpec(variant="sgp", k_max=k_max, mu=mu)
    elif name == "cosamp":
        k = take_int("k") if "k" in kv else default_k
        spec = AlgorithmSpec(variant="cosamp", k=k)
    else:
        raise ParseError(f"unknown algorithm {name!r}")
    if kv:
        raise ParseError(f"unknown parameter(s) {sorted(kv)} for {name}")
    return AlgorithmEntry(spec=spec, tau=tau)


def default_algorithm_tokens() -> list[str]:
    """The benchmark set: OMP, T-OMP and L-OMP parameter sweeps, SGP twice, CoSaMP."""
    return [
        "omp",
        "tomp:alpha=0.1",
        "tomp:alpha=1",
        "tomp:alpha=10",
        "lomp:lambda=1",
        "lomp:lambda=10",
        "lomp:lambda=100",
        "sgp",
        f"sgp:tau={_fmt(SGP_FIXED_TAU)}",
        "cosamp",
    ]


@dataclass(frozen=True)
class ExperimentConfig:
    """Full sweep definition; every field is validated on construction."""

    n: int = DEFAULT_N
    m_list: tuple[int, ...] = DEFAULT_M_LIST
    k: int = DEFAULT_K
    snr_list_db: tuple[float, ...] = DEFAULT_SNR_LIST
    noise_free: bool = False
    trials: int = DEFAULT_TRIALS
    master_seed: int = DEFAULT_SEED
    algorithms: tuple[AlgorithmEntry, ...] = ()
    output_dir: str = DEFAULT_OUTPUT_DIR

    def __post_init__(self):
        if not self.algorithms:
            object.__setattr__(
                self,
                "algorithms",
                tuple(parse_algorithm_token(t, self.k) for t in default_algorithm_tokens()),
            )
        if self.n < 1:
            raise ValidationError(f"N must be positive, got {self.n}")
        if not (1 <= self.k <= self.n):
            raise ValidationError(f"need 1 <= k <= N, got k={self.k}, N={self.n}")
        if not self.m_list:
            raise ValidationError("m_list must not be empty")
        for m in self.m_list:
            if not (self.k <= m <= self.n):
                raise ValidationError(f"need k <= m <= N for every m, violated by m={m} (k={self.k}, N={self.n})")
        for snr in self.snr_list_db:
            if not math.isfinite(snr):
                raise ValidationError(f"snr_list_db entries must be finite, got {snr}")
        if not self.snr_list_db and not self.noise_free:
            raise ValidationError("no cells: snr_list_db is empty and noise_free is false")
        if self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials}")
        if not (0 <= self.master_seed < 2**64):
            raise ValidationError("master_seed must fit in 64 bits")
        labels = [(e.algorithm, e.params) for e in self.algorithms]
        if len(set(labels)) != len(labels):
            raise ValidationError("algorithm entries must be distinct")
        for e in self.algorithms:
            if e.spec.variant == "cosamp" and 2 * e.spec.k > min(self.m_list):
                raise ValidationError(
                    f"cosamp needs 2k <= m for every m, violated by k={e.spec.k}, m={min(self.m_list)}"
                )
            if e.tau is not None and not (e.tau > 0 and math.isfinite(e.tau)):
                raise ValidationError(f"fixed tau must be positive and finite, got {e.tau}")

    @property
    def snr_cells(self) -> tuple[float | None, ...]:
        """SNR levels of the sweep; ``None`` is the noise-free cell."""
        cells: list[float | None] = list(self.snr_list_db)
        if self.noise_free:
            cells.append(None)
        return tuple(cells)

    def canonical_text(self) -> str:
        """Deterministic dump of the resolved config (hashed into the manifest)."""
        lines = [
            f"N = {self.n}",
            "m_list = " + ",".join(str(m) for m in self.m_list),
            f"k = {self.k}",
            "snr_list_db = " + ",".join(_fmt(s) for s in self.snr_list_db),
            f"noise_free = {'true' if self.noise_free else 'false'}",
            f"trials = {self.trials}",
            f"master_seed = {self.master_seed}",
            "algorithms = " + ", ".join(e.token() for e in self.algorithms),
            f"output_dir = {self.output_dir}",
        ]
        return "\n".join(lines) + "\n"


def _parse_int(raw: str, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {raw!r}") from None


def _parse_value(key: str, raw: str):
    if key == "N":
        return "n", _parse_int(raw, key)
    if key in ("k", "trials", "master_seed"):
        return key, _parse_int(raw, key)
    if key == "m_list":
        return key, tuple(_parse_int(p.strip(), key) for p in raw.split(",") if p.strip())
    if key == "snr_list_db":
        try:
            return key, tuple(float(p.strip()) for p in raw.split(",") if p.strip())
        except ValueError:
            raise ParseError(f"snr_list_db must be a comma-separated list of numbers, got {raw!r}") from None
    if key == "noise_free":
        low = raw.lower()
        if low not in ("true", "false"):
            raise ParseError(f"noise_free must be true or false, got {raw!r}")
        return key, low == "true"
    if key == "algorithms":
        return key, tuple(t.strip() for t in raw.split(",") if t.strip())
    if key == "output_dir":
        return key, raw
    raise ParseError(f"unknown key {key!r}")


def read_config_file(path: str) -> dict:
    """Parse a config file into a raw key -> value dict (keys as dataclass fields)."""
    raw: dict = {}
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            key, sep, value = text.partition("=")
            if not sep:
                raise ParseError("expected 'key = value'", line=lineno)
            key = key.strip()
            value = value.strip()
            if key not in _CONFIG_KEYS:
                raise ParseError(f"unknown key {key!r}", line=lineno)
            if key in seen:
                raise ParseError(f"duplicate key {key!r}", line=lineno)
            seen.add(key)
            try:
                field_name, parsed = _parse_value(key, value)
            except ParseError as exc:
                raise ParseError(str(exc), line=lineno) from None
            raw[field_name] = parsed
    return raw


def parse_config(path: str | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Build a validated config from an optional file plus CLI-style overrides.

    ``overrides`` uses dataclass field names; ``algorithms`` may be given as
    a comma-separated token string or a sequence of tokens.
    """
    raw = read_config_file(path) if path is not None else {}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        raw[key] = value
    tokens = raw.pop("algorithms", None)
    if isinstance(tokens, str):
        tokens = tuple(t.strip() for t in tokens.split(",") if t.strip())
    k = raw.get("k", DEFAULT_K)
    if tokens is not None:
        if not tokens:
            raise ValidationError("algorithms must not be empty")
        raw["algorithms"] = tuple(parse_algorithm_token(t, k) for t in tokens)
    return ExperimentConfig(**raw)
