"""
Results database: engine, sessions and run-log access
"""

import logging
from contextlib import asynccontextmanager
from typing import AsyncIterator

from sqlalchemy.ext.asyncio import AsyncSession, create_async_engine, async_sessionmaker
from sqlalchemy.pool import StaticPool

from .models import Base
from .services.run_logger import RunLogger

logger = logging.getLogger(__name__)


def async_database_url(database_url: str) -> str:
    """Map a plain sqlite URL onto the aiosqlite driver; other URLs pass through"""
    if database_url.startswith("sqlite:///"):
        return database_url.replace("sqlite:///", "sqlite+aiosqlite:///", 1)
    if database_url.startswith("sqlite://"):
        return database_url.replace("sqlite://", "sqlite+aiosqlite://", 1)
    return database_url


class Database:
    """Optional store for run records (the run_logs table)"""

    def __init__(self, database_url: str):
        """
        Initialize Database

        Args:
            database_url: RESULTS_DATABASE_URL; sqlite URLs are switched to aiosqlite
        """
        self.database_url = async_database_url(database_url)
        self._initialized = False

        engine_kwargs = {}
        if "sqlite" in self.database_url:
            engine_kwargs.update({
                "poolclass": StaticPool,
                "connect_args": {
                    "check_same_thread": False,
                },
            })

        self.engine = create_async_engine(self.database_url, echo=False, **engine_kwargs)
        self.async_session = async_sessionmaker(
            self.engine,
            class_=AsyncSession,
            expire_on_commit=False
        )

    async def initialize(self) -> None:
        """Create the run_logs table if it is missing; later calls are no-ops"""
        if self._initialized:
            return
        try:
            async with self.engine.begin() as conn:
                await conn.run_sync(Base.metadata.create_all)
        except Exception as e:
            logger.error(f"Failed to initialize results database {self.database_url}: {e}")
            raise
        self._initialized = True
        logger.debug(f"Results database ready at {self.database_url}")

    async def close(self) -> None:
        """Dispose of the engine and its connections"""
        await self.engine.dispose()
        logger.debug("Results database connection closed")

    @asynccontextmanager
    async def session(self) -> AsyncIterator[AsyncSession]:
        """Session that is closed when the block exits"""
        async with self.async_session() as session:
            yield session

    @asynccontextmanager
    async def run_logger(self) -> AsyncIterator[RunLogger]:
        """RunLogger on a fresh session, with the table created first"""
        await self.initialize()
        async with self.session() as session:
            yield RunLogger(session)
