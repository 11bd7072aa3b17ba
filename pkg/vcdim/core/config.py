from typing import Optional

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables
load_dotenv()


class Settings(BaseSettings):
    API_V1_STR: str = "/api"
    PROJECT_NAME: str = "VC Dimension Estimation API"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_DIR: Optional[str] = None

    # Parallelism for the bootstrap and the model sweep
    WORKERS: int = 1

    # Warn when 2*n_L exceeds this multiple of n
    DESIGN_POINT_MAX_MULTIPLE: float = 2.0

    model_config = SettingsConfigDict(case_sensitive=True, env_prefix="VCDIM_")


# Create settings instance
settings = Settings()
