"""
Configuration management for the UniG-Encoder toolkit
Handles environment variables and application settings
"""

import os
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv


class Config:
    """Application configuration manager"""

    def __init__(self):
        """Initialize configuration from environment variables"""
        load_dotenv()

        # Logging
        self.LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
        self.LOG_FILE = os.getenv("LOG_FILE") or None

        # Parallel sweep trials
        self.UNIG_THREADS = int(os.getenv("UNIG_THREADS", "1"))
        if self.UNIG_THREADS < 1:
            raise ValueError("UNIG_THREADS must be a positive integer")

        # Optional results database; nothing is recorded when unset
        self.RESULTS_DATABASE_URL = os.getenv("RESULTS_DATABASE_URL") or None

        # Directory holding benchmark dataset JSON files
        data_dir = os.getenv("UNIG_DATA_DIR")
        self.UNIG_DATA_DIR: Optional[Path] = Path(data_dir) if data_dir else None

    def dataset_path(self, name: str) -> Optional[Path]:
        """Resolve a benchmark dataset file inside UNIG_DATA_DIR, if present"""
        if self.UNIG_DATA_DIR is None:
            return None
        path = self.UNIG_DATA_DIR / f"{name.lower()}.json"
        return path if path.is_file() else None

    def validate(self) -> bool:
        """Validate configuration completeness"""
        if self.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            return False

        if self.UNIG_DATA_DIR is not None and not self.UNIG_DATA_DIR.is_dir():
            return False

        return True
