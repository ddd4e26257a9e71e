import os
from pathlib import Path

from yaml import YAMLError, safe_load

from common.exceptions import ConfigError

CONFIG_ENV_VAR = "SCORECARD_CONFIG"
SEED_ENV_VAR = "PRECIPICE_SEED"
DEFAULT_CONFIG_PATH = "config.yml"

CI_METHODS = ("percentile", "basic", "bc", "bca")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Config:
    def __init__(self, path: str | os.PathLike | None = None, data: dict | None = None):
        self.path = Path(path or os.environ.get(CONFIG_ENV_VAR) or DEFAULT_CONFIG_PATH)
        self.c = self._read(self.path) if data is None else data
        # set by load_config when the settings file was rejected
        self.error: ConfigError | None = None

        self.log_level = str(self.c.get("log_level", "INFO")).upper()

        self.replicates = self._get_int("bootstrap", "replicates", 50000)
        self.band_replicates = self._get_int("bootstrap", "band_replicates", 2000)
        self.compare_replicates = self._get_int(
            "bootstrap", "compare_replicates", 2000
        )
        self.rank_replicates = self._get_int("bootstrap", "rank_replicates", 200000)
        self.coverage = self._get_config_value("bootstrap", "coverage", 0.95)
        self.ci_method = self._get_config_value("bootstrap", "ci_method", "percentile")
        self.seed = self._get_int("bootstrap", "seed", 0, minimum=0)

        self.max_workers = self._get_int("executor", "max_workers", 4)
        self.chunk_size = self._get_int("executor", "chunk_size", 256)

        self.variance_resamples = self._get_int("profiles", "variance_resamples", 500)

        self._validate()

    @staticmethod
    def _read(path: Path) -> dict:
        """
        Read the YAML settings file.

        A missing file is not an error: every setting has a default and the
        CLI must work without a settings file.
        """
        if not path.exists():
            return {}
        try:
            with open(path, encoding="utf8") as f:
                content = safe_load(f)
        except YAMLError as e:
            raise ConfigError(f"Cannot parse settings file {path}: {e}") from e
        if content is None:
            return {}
        if not isinstance(content, dict):
            raise ConfigError(f"Settings file {path} must contain a mapping")
        return content

    def _get_config_value(self, section, key, default=None):
        return (self.c.get(section) or {}).get(key, default)

    def _get_int(self, section: str, key: str, default: int, minimum: int = 1) -> int:
        value = self._get_config_value(section, key, default)
        if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
            raise ConfigError(
                f"Expected an integer >= {minimum}, got {value!r}",
                key=f"{section}.{key}",
            )
        return value

    def _validate(self):
        """Check cross-cutting value constraints once all keys are loaded."""
        if self.log_level not in LOG_LEVELS:
            raise ConfigError(
                f"Unknown log level {self.log_level!r}, expected one of {LOG_LEVELS}",
                key="log_level",
            )
        if not isinstance(self.coverage, (int, float)) or not 0 < self.coverage < 1:
            raise ConfigError(
                f"Coverage must lie in (0, 1), got {self.coverage!r}",
                key="bootstrap.coverage",
            )
        if self.ci_method not in CI_METHODS:
            raise ConfigError(
                f"Unknown CI method {self.ci_method!r}, expected one of {CI_METHODS}",
                key="bootstrap.ci_method",
            )

    def resolve_seed(self, flag_seed: int | None = None) -> int:
        """
        Pick the seed for a run: the --seed flag wins, then the PRECIPICE_SEED
        environment variable, then the settings file.
        """
        if flag_seed is not None:
            return flag_seed
        env_seed = os.environ.get(SEED_ENV_VAR)
        if env_seed:
            try:
                seed = int(env_seed)
            except ValueError as e:
                raise ConfigError(
                    f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}",
                    key=SEED_ENV_VAR,
                ) from e
            if seed < 0:
                raise ConfigError(f"{SEED_ENV_VAR} must be >= 0", key=SEED_ENV_VAR)
            return seed
        return self.seed


def load_config(path: str | os.PathLike | None = None) -> Config:
    """
    Load the settings file without raising.

    An invalid file yields the defaults with the ConfigError kept on
    ``error``, so the CLI can report it and exit with a usage status
    instead of failing at import time.
    """
    try:
        return Config(path)
    except ConfigError as e:
        fallback = Config(path, data={})
        fallback.error = e
        return fallback


config = load_config()
