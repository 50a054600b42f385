"""
RunLog model for recording command invocations and their results
"""

from typing import Optional
from sqlalchemy import Index, Integer, String, JSON
from sqlalchemy.orm import Mapped, mapped_column

from .base import Base, CreatedAtMixin


class RunLog(Base, CreatedAtMixin):
    """One executed command: its configuration and the report it produced"""

    __tablename__ = "run_logs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True)
    command: Mapped[str] = mapped_column(String(20), nullable=False)
    status: Mapped[str] = mapped_column(String(20), nullable=False, default="ok")
    dataset_name: Mapped[Optional[str]] = mapped_column(String(255), nullable=True)
    seed: Mapped[Optional[int]] = mapped_column(Integer, nullable=True)
    config: Mapped[dict] = mapped_column(JSON, nullable=False)
    result: Mapped[dict] = mapped_column(JSON, nullable=False)

    __table_args__ = (
        Index('idx_run_logs_command_dataset', 'command', 'dataset_name'),
    )

    def __repr__(self) -> str:
        return f"<RunLog(id={self.id}, command='{self.command}', dataset='{self.dataset_name}')>"

    def to_dict(self) -> dict:
        """Convert model to dictionary"""
        return {
            "id": self.id,
            "command": self.command,
            "status": self.status,
            "dataset_name": self.dataset_name,
            "seed": self.seed,
            "config": self.config,
            "result": self.result,
            "created_at": self.created_at.isoformat() if self.created_at else None
        }
