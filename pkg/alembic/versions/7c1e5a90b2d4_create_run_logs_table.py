"""create_run_logs_table

Revision ID: 7c1e5a90b2d4
Revises:
Create Date: 2026-10-17 12:00:00.000000

"""
from typing import Sequence, Union

from alembic import op
import sqlalchemy as sa


# revision identifiers, used by Alembic.
revision: str = '7c1e5a90b2d4'
down_revision: Union[str, Sequence[str], None] = None
branch_labels: Union[str, Sequence[str], None] = None
depends_on: Union[str, Sequence[str], None] = None


def upgrade() -> None:
    """Upgrade schema."""
    op.create_table(
        'run_logs',
        sa.Column('id', sa.Integer(), primary_key=True),
        sa.Column('command', sa.String(20), nullable=False),
        sa.Column('status', sa.String(20), nullable=False),
        sa.Column('dataset_name', sa.String(255), nullable=True),
        sa.Column('seed', sa.Integer(), nullable=True),
        sa.Column('config', sa.JSON(), nullable=False),
        sa.Column('result', sa.JSON(), nullable=False),
        sa.Column('created_at', sa.DateTime(timezone=True), server_default=sa.func.now(), nullable=False)
    )

    op.create_index('idx_run_logs_command_dataset', 'run_logs', ['command', 'dataset_name'])


def downgrade() -> None:
    """Downgrade schema."""
    op.drop_index('idx_run_logs_command_dataset', table_name='run_logs')
    op.drop_table('run_logs')
