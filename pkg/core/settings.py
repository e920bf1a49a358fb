import os
from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError

_settings: "Settings | None" = None

# field name -> environment variable
ENV_KEYS = {
    "tol": "NEUTRAL_GEOM_TOL",
    "seed": "NEUTRAL_GEOM_SEED",
    "fd_step": "NEUTRAL_GEOM_FD_STEP",
    "curvature_step": "NEUTRAL_GEOM_CURVATURE_STEP",
    "surface_step": "NEUTRAL_GEOM_SURFACE_STEP",
    "workers": "NEUTRAL_GEOM_WORKERS",
    "log_level": "NEUTRAL_GEOM_LOG_LEVEL",
}


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    tol: float = Field(default=1e-8, gt=0)
    seed: int = 0
    fd_step: float = Field(default=1e-6, gt=0)
    curvature_step: float = Field(default=1e-3, gt=0)
    surface_step: float = Field(default=1e-5, gt=0)
    workers: int = Field(default=4, ge=1)
    log_level: str = "WARNING"

    def with_overrides(self, **changes) -> "Settings":
        """Return a validated copy; None values are ignored so argparse defaults pass straight through."""
        data = self.model_dump()
        data.update({k: v for k, v in changes.items() if v is not None})
        return Settings(**data)


def _from_mapping(env: dict) -> Settings:
    raw = {field: env[key] for field, key in ENV_KEYS.items() if env.get(key) not in (None, "")}
    try:
        return Settings(**raw)
    except ValidationError as e:
        bad = ", ".join(ENV_KEYS[str(err["loc"][0])] for err in e.errors() if err["loc"])
        raise RuntimeError(
            f"[NeutralGeom] Invalid configuration value for {bad or 'settings'}. "
            "Check your .env file against .env.example."
        ) from e


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = _from_mapping(dict(os.environ))
    return _settings


def load_env_file(path: str) -> Settings:
    """
    Re-read settings with an explicit env file layered over os.environ.
    Priority: file values > process environment > defaults.
    """
    global _settings
    if not os.path.isfile(path):
        raise RuntimeError(f"[NeutralGeom] Env file not found: {path}")
    merged = {**os.environ, **{k: v for k, v in dotenv_values(path).items() if v is not None}}
    _settings = _from_mapping(merged)
    return _settings


def reset_settings() -> None:
    global _settings
    _settings = None
