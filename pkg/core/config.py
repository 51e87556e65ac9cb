import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name, default):
    value = os.getenv(name)
    if value is None or value == "":
        return default
    return int(value)


class Config:
    # Runtime settings
    SECRET_KEY = os.getenv("LIMITLAB_SECRET_KEY", "limitlab-local-only")
    DEBUG = os.getenv("LIMITLAB_DEBUG", "False") == "True"
    LOG_LEVEL = os.getenv("LIMITLAB_LOG_LEVEL", "INFO")

    # Reproducibility: default seed when --seed is not given
    SEED = _int_env("LIMITLAB_SEED", 0)

    # Parallelism (None means "all available cores")
    WORKERS = _int_env("LIMITLAB_WORKERS", None)

    # Output location for data files and manifests
    OUTPUT_DIR = os.getenv("LIMITLAB_OUTPUT_DIR", "results")

    # Resource limits for exhaustive oracles
    EXHAUSTIVE_MAX_N = _int_env("LIMITLAB_EXHAUSTIVE_MAX_N", 25)
    CONDITIONAL_MAX_SUBSETS = _int_env("LIMITLAB_CONDITIONAL_MAX_SUBSETS", 10**7)
    GRAPH_MAX_N = _int_env("LIMITLAB_GRAPH_MAX_N", 200)
    SMALL_T_MAX_N = _int_env("LIMITLAB_SMALL_T_MAX_N", 19)
    EULERIAN_MAX_N = _int_env("LIMITLAB_EULERIAN_MAX_N", 1000)

    # Monte Carlo partition size (samples per stream chunk)
    MC_CHUNK = _int_env("LIMITLAB_MC_CHUNK", 10000)

    ARTIFACT_VERSION = "0.1.0"

    @classmethod
    def get_workers(cls):
        """
        Get the default worker count.
        Returns LIMITLAB_WORKERS when set, otherwise the number of available cores.
        """
        if cls.WORKERS:
            return cls.WORKERS
        return os.cpu_count() or 1

    @classmethod
    def validate(cls):
        """Validate limits configuration"""
        limits = [
            "EXHAUSTIVE_MAX_N",
            "CONDITIONAL_MAX_SUBSETS",
            "GRAPH_MAX_N",
            "SMALL_T_MAX_N",
            "EULERIAN_MAX_N",
            "MC_CHUNK",
        ]
        invalid = [key for key in limits if getattr(cls, key) <= 0]
        if cls.WORKERS is not None and cls.WORKERS <= 0:
            invalid.append("WORKERS")
        if invalid:
            raise ValueError(f"Invalid limit configuration: {', '.join(invalid)}")
