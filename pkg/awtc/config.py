from pydantic_settings import BaseSettings
from dotenv import load_dotenv

load_dotenv()


class Settings(BaseSettings):
    # Exact-enumeration caps. Every cap rejects, it never approximates.
    MAX_CODEBOOK_BITS: int = 20
    MAX_READ_BITS: int = 16
    MAX_READ_SETS: int = 20000
    SAMPLED_READ_SETS: int = 256
    MAX_DEPENDENT_COLUMNS: int = 24
    MAX_DEPENDENT_BUDGET: int = 8
    ATTACK_EXHAUSTIVE_LIMIT: int = 10**6
    MAX_FIELD_DEGREE: int = 16
    MAX_OUTPUT_BITS: int = 24
    MAX_PAIRWISE_WORDS: int = 4096
    MAX_FLIP_SETS: int = 10**5
    MAX_GENERATOR_BITS: int = 16
    DECODE_BATCH_ELEMENTS: int = 2**24

    # Numerical tolerances
    BA_TOL: float = 1e-9
    BA_MAX_ITER: int = 10**5
    PROB_TOL: float = 1e-12

    # Experiment defaults
    DEFAULT_DELTA: float = 0.05
    DEFAULT_LEAK_THRESHOLD: float = 2.0**-4
    WORKERS: int = 1

    # Runtime
    LOG_LEVEL: str = "INFO"
    OUTPUT_DIR: str = "."

    class Config:
        env_file = ".env"
        env_prefix = "AWTC_"
        case_sensitive = True


settings = Settings()
