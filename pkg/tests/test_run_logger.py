"""
Tests for RunLogger service and the RunLog model
"""

import numpy as np
import pytest
import pytest_asyncio
from sqlalchemy import select
from sqlalchemy.ext.asyncio import create_async_engine, async_sessionmaker, AsyncSession
from sqlalchemy.pool import StaticPool

from src.database import Database, async_database_url
from src.models import Base, RunLog
from src.services.run_logger import RunLogger


@pytest_asyncio.fixture
async def db_session():
    """Create a test database session"""
    engine = create_async_engine(
        "sqlite+aiosqlite:///:memory:",
        poolclass=StaticPool,
        connect_args={"check_same_thread": False},
    )

    async with engine.begin() as conn:
        await conn.run_sync(Base.metadata.create_all)

    async_session = async_sessionmaker(
        engine,
        class_=AsyncSession,
        expire_on_commit=False
    )

    async with async_session() as session:
        yield session

    await engine.dispose()


@pytest_asyncio.fixture
async def run_logger(db_session):
    """Create a RunLogger instance"""
    return RunLogger(db_session)


@pytest.mark.asyncio
async def test_log_run(db_session, run_logger):
    """Test that a finished run is stored with its config and result"""
    await run_logger.log_run(
        command="train",
        dataset_name="zoo",
        seed=7,
        config={"lr": 0.01, "placement": "0,2"},
        result={"mean_accuracy": np.float64(0.95), "per_split_test_accuracy": np.array([0.9, 1.0])},
    )

    result = await db_session.execute(select(RunLog))
    log = result.scalar_one()

    assert log.command == "train"
    assert log.status == "ok"
    assert log.dataset_name == "zoo"
    assert log.seed == 7
    assert log.config == {"lr": 0.01, "placement": "0,2"}
    assert log.result["per_split_test_accuracy"] == [0.9, 1.0]
    assert log.created_at is not None


@pytest.mark.asyncio
async def test_log_error(db_session, run_logger):
    """Test that a failed run records the exception type and message"""
    await run_logger.log_error(
        command="sweep",
        dataset_name="texas",
        seed=None,
        config={},
        error_type="DivergenceError",
        message="Loss diverged to nan at epoch 3",
    )

    log = (await db_session.execute(select(RunLog))).scalar_one()
    assert log.status == "error"
    assert log.seed is None
    assert log.result == {"error_type": "DivergenceError", "message": "Loss diverged to nan at epoch 3"}


@pytest.mark.asyncio
async def test_recent_runs_filters_and_orders(run_logger):
    """Test that recent runs come newest first and can be filtered by command"""
    for command in ("train", "homophily", "train"):
        await run_logger.log_run(command, "zoo", 0, {}, {"command": command})

    recent = await run_logger.recent_runs()
    assert [r.command for r in recent] == ["train", "homophily", "train"]
    assert recent[0].id > recent[-1].id

    trains = await run_logger.recent_runs(command="train", limit=1)
    assert len(trains) == 1
    assert trains[0].id == recent[0].id


@pytest.mark.asyncio
async def test_to_dict(run_logger):
    """Test RunLog serialization"""
    log = await run_logger.log_run("synth", "texas", 1, {"rank": 3}, {"homophily": 0.4})
    data = log.to_dict()
    assert data["command"] == "synth"
    assert data["config"] == {"rank": 3}
    assert "created_at" in data
    assert "synth" in repr(log)


def test_async_database_url():
    """Test that sqlite URLs are moved onto aiosqlite and others pass through"""
    assert async_database_url("sqlite:///runs.db") == "sqlite+aiosqlite:///runs.db"
    assert async_database_url("sqlite://") == "sqlite+aiosqlite://"
    assert async_database_url("sqlite+aiosqlite:///x.db") == "sqlite+aiosqlite:///x.db"
    assert async_database_url("postgresql+asyncpg://db/runs") == "postgresql+asyncpg://db/runs"


@pytest.mark.asyncio
async def test_database_run_logger_persists(tmp_path):
    """Test that runs logged through Database survive a new connection"""
    url = f"sqlite:///{tmp_path / 'runs.db'}"
    database = Database(url)
    try:
        async with database.run_logger() as run_logger:
            await run_logger.log_run("homophily", "texas", None, {}, {"homophily": 0.11})
    finally:
        await database.close()

    reopened = Database(url)
    try:
        async with reopened.run_logger() as run_logger:
            runs = await run_logger.recent_runs()
    finally:
        await reopened.close()
    assert [(r.command, r.dataset_name, r.status) for r in runs] == [("homophily", "texas", "ok")]
