"""
RunLogger service for recording command runs in the results database
"""

import logging
from typing import Optional
from sqlalchemy import select
from sqlalchemy.ext.asyncio import AsyncSession

from ..models.run_log import RunLog
from .report_writer import canonicalize

logger = logging.getLogger(__name__)


class RunLogger:
    """Service for storing finished and failed runs"""

    def __init__(self, db_session: AsyncSession):
        """
        Initialize RunLogger with database session

        Args:
            db_session: SQLAlchemy async session for database operations
        """
        self.db = db_session

    async def log_run(self, command: str, dataset_name: Optional[str], seed: Optional[int],
                      config: dict, result: dict) -> RunLog:
        """
        Record a completed run

        Args:
            command: Subcommand name (train, sweep, homophily, synth)
            dataset_name: Name of the dataset the command read
            seed: Master seed of the run, if any
            config: Effective configuration
            result: Report payload that was written
        """
        log = RunLog(
            command=command,
            status="ok",
            dataset_name=dataset_name,
            seed=seed,
            config=canonicalize(config),
            result=canonicalize(result),
        )
        self.db.add(log)
        await self.db.commit()
        await self.db.refresh(log)
        logger.debug(f"Recorded {command} run on {dataset_name}")
        return log

    async def log_error(self, command: str, dataset_name: Optional[str], seed: Optional[int],
                        config: dict, error_type: str, message: str) -> RunLog:
        """
        Record a failed run

        Args:
            error_type: Exception class name, e.g. 'DivergenceError'
            message: Exception message
        """
        log = RunLog(
            command=command,
            status="error",
            dataset_name=dataset_name,
            seed=seed,
            config=canonicalize(config),
            result={'error_type': error_type, 'message': message},
        )
        self.db.add(log)
        await self.db.commit()
        await self.db.refresh(log)
        return log

    async def recent_runs(self, command: Optional[str] = None, limit: int = 20) -> list[RunLog]:
        """Most recent runs first, optionally for one command"""
        query = select(RunLog).order_by(RunLog.id.desc()).limit(limit)
        if command is not None:
            query = query.where(RunLog.command == command)
        result = await self.db.execute(query)
        return list(result.scalars().all())
